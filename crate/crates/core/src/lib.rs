//! Algebraic solutions of the Lamé equation.
//!
//! Exact verification of Klein pullbacks from hypergeometric operators,
//! the Schwarz lists, the classification of finite projective monodromy for
//! Lamé operators, numerical monodromy groups, and explicit algebraic
//! solution bases.

pub mod cli;
pub mod error;
pub mod exactalg;
pub mod fuchsian;
pub mod lame;
pub mod monodromy;
pub mod numeric;
pub mod pullback;
pub mod schwarz;
pub mod solutions;

pub use error::{Error, Result};
