//! Simple algebraic extensions `Q[t]/(m(t))` of small degree.
//!
//! Elements carry an optional handle to their field. Elements without a
//! handle are plain rationals and adopt the field of whichever operand has
//! one, so `zero()` and `one()` need no context.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::factor::rational_roots;
use super::field::{qi, Field};
use super::poly::Poly;
use crate::error::{Error, Result};

/// The field `Q[t]/(modulus)` together with a fixed complex embedding of `t`.
#[derive(Debug, PartialEq)]
pub struct NumberField {
    modulus: Poly,
    embedding: Complex64,
    name: String,
    verified_irreducible: bool,
}

impl NumberField {
    /// Build a field from a modulus and the complex root used to embed the
    /// generator. Moduli of degree at most 3 are checked for irreducibility.
    pub fn new(modulus: &Poly, embedding: Complex64, name: &str) -> Result<Arc<Self>> {
        let modulus = modulus.monic();
        let deg = modulus.deg();
        if deg == 0 {
            return Err(Error::InvalidInput("number field modulus must be nonconstant".into()));
        }
        let verified_irreducible = if deg <= 3 {
            if !rational_roots(&modulus).is_empty() && deg > 1 {
                return Err(Error::InvalidInput(format!(
                    "modulus {modulus} is reducible over the rationals"
                )));
            }
            true
        } else {
            false
        };
        Ok(Arc::new(NumberField {
            modulus,
            embedding,
            name: name.to_string(),
            verified_irreducible,
        }))
    }

    /// `Q(sqrt(-3))`, embedding `sqrt(-3) -> +i*sqrt(3)`.
    pub fn sqrt_minus_three() -> Arc<Self> {
        let m = Poly::from_ints(&[3, 0, 1]);
        Self::new(&m, Complex64::new(0.0, 3f64.sqrt()), "sqrt(-3)").expect("t^2+3 is irreducible")
    }

    /// Residue ring `Q[t]/(modulus)` without an embedding; used for exact
    /// local computations at the roots of an irreducible factor.
    pub fn residue_ring(modulus: &Poly, name: &str) -> Arc<Self> {
        Arc::new(NumberField {
            modulus: modulus.monic(),
            embedding: Complex64::new(f64::NAN, f64::NAN),
            name: name.to_string(),
            verified_irreducible: false,
        })
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_verified_irreducible(&self) -> bool {
        self.verified_irreducible
    }

    pub fn generator(self: &Arc<Self>) -> NfElem {
        NfElem::from_poly(Poly::x(), self)
    }
}

#[derive(Clone, Debug)]
pub struct NfElem {
    repr: Poly,
    field: Option<Arc<NumberField>>,
}

impl NfElem {
    pub fn from_poly(p: Poly, field: &Arc<NumberField>) -> Self {
        NfElem {
            repr: p.rem(field.modulus()),
            field: Some(Arc::clone(field)),
        }
    }

    pub fn rational(q: BigRational) -> Self {
        NfElem {
            repr: Poly::constant(q),
            field: None,
        }
    }

    pub fn repr(&self) -> &Poly {
        &self.repr
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.field.as_ref()
    }

    /// Trace from the field down to the rationals.
    pub fn trace(&self) -> BigRational {
        match &self.field {
            None => self.repr.coeff(0),
            Some(k) => {
                let m = k.modulus();
                let d = k.degree();
                let mut basis = Poly::one();
                let mut tr = BigRational::zero();
                for i in 0..d {
                    tr += (&self.repr * &basis).rem(m).coeff(i);
                    basis = (&basis * &Poly::x()).rem(m);
                }
                tr
            }
        }
    }

    fn join(&self, other: &Self) -> Option<Arc<NumberField>> {
        match (&self.field, &other.field) {
            (Some(a), Some(b)) => {
                debug_assert!(Arc::ptr_eq(a, b) || a == b, "mixing number fields");
                Some(Arc::clone(a))
            }
            (Some(a), None) | (None, Some(a)) => Some(Arc::clone(a)),
            (None, None) => None,
        }
    }

    fn build(repr: Poly, field: Option<Arc<NumberField>>) -> Self {
        match field {
            Some(k) => NfElem::from_poly(repr, &k),
            None => NfElem { repr, field: None },
        }
    }
}

impl PartialEq for NfElem {
    fn eq(&self, other: &Self) -> bool {
        self.repr == other.repr
            && match (&self.field, &other.field) {
                (Some(a), Some(b)) => Arc::ptr_eq(a, b) || a == b,
                _ => true,
            }
    }
}

impl From<BigRational> for NfElem {
    fn from(q: BigRational) -> Self {
        NfElem::rational(q)
    }
}

impl Add for NfElem {
    type Output = NfElem;
    fn add(self, rhs: NfElem) -> NfElem {
        let k = self.join(&rhs);
        NfElem::build(&self.repr + &rhs.repr, k)
    }
}

impl Sub for NfElem {
    type Output = NfElem;
    fn sub(self, rhs: NfElem) -> NfElem {
        let k = self.join(&rhs);
        NfElem::build(&self.repr - &rhs.repr, k)
    }
}

impl Mul for NfElem {
    type Output = NfElem;
    fn mul(self, rhs: NfElem) -> NfElem {
        let k = self.join(&rhs);
        NfElem::build(&self.repr * &rhs.repr, k)
    }
}

impl Div for NfElem {
    type Output = NfElem;
    fn div(self, rhs: NfElem) -> NfElem {
        let inv = rhs.try_inv().expect("division by zero in number field");
        self * inv
    }
}

impl Neg for NfElem {
    type Output = NfElem;
    fn neg(self) -> NfElem {
        NfElem {
            repr: -&self.repr,
            field: self.field,
        }
    }
}

impl Zero for NfElem {
    fn zero() -> Self {
        NfElem::rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.repr.is_zero()
    }
}

impl One for NfElem {
    fn one() -> Self {
        NfElem::rational(qi(1))
    }
}

impl fmt::Display for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.field {
            Some(k) if !self.repr.is_constant() => {
                write!(f, "{}", self.repr.to_string_var(&format!("[{}]", k.name())))
            }
            _ => write!(f, "{}", super::field::fmt_rational(&self.repr.coeff(0))),
        }
    }
}

impl Field for NfElem {
    fn try_inv(&self) -> Option<Self> {
        if self.repr.is_zero() {
            return None;
        }
        match &self.field {
            None => Some(NfElem::rational(self.repr.coeff(0).recip())),
            Some(k) => self
                .repr
                .inv_mod(k.modulus())
                .map(|p| NfElem::from_poly(p, k)),
        }
    }

    fn to_complex(&self) -> Complex64 {
        match &self.field {
            None => self.repr.coeff(0).to_complex(),
            Some(k) => self.repr.eval_complex(k.embedding),
        }
    }

    fn as_rational(&self) -> Option<BigRational> {
        self.repr.is_constant().then(|| self.repr.coeff(0))
    }
}
