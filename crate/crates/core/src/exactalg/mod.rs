//! Exact arithmetic: rationals, univariate polynomials, rational functions,
//! and small number fields.

pub mod factor;
pub mod field;
pub mod numfield;
pub mod parse;
pub mod poly;
pub mod ratfunc;

pub use factor::{factor_small, rational_roots, Factor, Factorization};
pub use field::{q, qi, Field};
pub use num_rational::BigRational;
pub use numfield::{NfElem, NumberField};
pub use parse::{parse_ratfunc, parse_rational};
pub use poly::{Poly, Polynomial};
pub use ratfunc::{RatFunc, RationalFunction};
