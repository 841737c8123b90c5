use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;

use super::field::Field;
use super::poly::Polynomial;
use crate::error::{Error, Result};

/// Quotient of polynomials in canonical form: coprime parts, monic
/// denominator, zero stored as `0/1`.
///
/// Canonical form makes equality structural, so `a == b` decides whether
/// two rational functions agree identically.
#[derive(Clone, PartialEq, Debug)]
pub struct RationalFunction<F: Field> {
    num: Polynomial<F>,
    den: Polynomial<F>,
}

pub type RatFunc = RationalFunction<BigRational>;

impl<F: Field> RationalFunction<F> {
    pub fn new(num: Polynomial<F>, den: Polynomial<F>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Polynomial<F>, den: Polynomial<F>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        let lc = d.leading();
        if !lc.is_one() {
            let inv = lc.try_inv().expect("nonzero leading coefficient");
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        RationalFunction { num: n, den: d }
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn x() -> Self {
        Self::from_poly(Polynomial::x())
    }

    pub fn from_poly(p: Polynomial<F>) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn num(&self) -> &Polynomial<F> {
        &self.num
    }

    pub fn den(&self) -> &Polynomial<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Degree as a map of the projective line: `max(deg num, deg den)`.
    pub fn degree(&self) -> usize {
        self.num.deg().max(self.den.deg())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::canonical(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RationalFunction {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    pub fn derivative(&self) -> Self {
        // (n/d)' = (n'd - nd')/d^2
        let top = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::canonical(top, &self.den * &self.den)
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Self) -> Self {
        let d = self.degree();
        let (n, m) = (&inner.num, &inner.den);
        let npow: Vec<Polynomial<F>> = powers(n, d);
        let mpow: Vec<Polynomial<F>> = powers(m, d);
        let homog = |p: &Polynomial<F>| {
            let mut acc = Polynomial::zero();
            for (k, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                acc = &acc + &(&npow[k] * &mpow[d - k]).scale(c);
            }
            acc
        };
        Self::canonical(homog(&self.num), homog(&self.den))
    }

    /// Composition that rejects constant inner maps.
    pub fn compose_map(&self, inner: &Self) -> Result<Self> {
        if inner.is_constant() {
            return Err(Error::ConstantMap);
        }
        Ok(self.compose(inner))
    }

    /// Evaluate at a complex point. Poles give `None`.
    pub fn eval_complex(&self, z: Complex64) -> Option<Complex64> {
        let d = self.den.eval_complex(z);
        if d == Complex64::new(0.0, 0.0) {
            return None;
        }
        Some(self.num.eval_complex(z) / d)
    }

    /// Exact value at a field element; `None` at a pole.
    pub fn eval(&self, x: &F) -> Option<F> {
        let d = self.den.eval(x);
        let inv = d.try_inv()?;
        Some(self.num.eval(x) * inv)
    }

    /// Value at infinity; `None` when infinity is a pole.
    pub fn value_at_infinity(&self) -> Option<F> {
        let (dn, dd) = (self.num.deg(), self.den.deg());
        if self.num.is_zero() || dn < dd {
            Some(F::zero())
        } else if dn == dd {
            Some(self.num.leading() * self.den.leading().try_inv().expect("nonzero"))
        } else {
            None
        }
    }

    /// `f(1/s)` as a rational function of `s`.
    pub fn at_reciprocal(&self) -> Self {
        let d = self.degree();
        let rev = |p: &Polynomial<F>| {
            let mut v = vec![F::zero(); d + 1];
            for (k, c) in p.coeffs().iter().enumerate() {
                v[d - k] = c.clone();
            }
            Polynomial::new(v)
        };
        Self::canonical(rev(&self.num), rev(&self.den))
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G + Copy) -> RationalFunction<G> {
        RationalFunction::canonical(self.num.map(f), self.den.map(f))
    }

    pub fn to_string_var(&self, var: &str) -> String {
        let n = self.num.to_string_var(var);
        if self.den.is_one_poly() {
            return n;
        }
        let d = self.den.to_string_var(var);
        let wrap = |s: String| {
            if s.contains(' ') || s.starts_with('-') {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(n), wrap(d))
    }
}

fn powers<F: Field>(p: &Polynomial<F>, d: usize) -> Vec<Polynomial<F>> {
    let mut out = Vec::with_capacity(d + 1);
    out.push(Polynomial::one());
    for k in 1..=d {
        let next = &out[k - 1] * p;
        out.push(next);
    }
    out
}

impl<F: Field> From<Polynomial<F>> for RationalFunction<F> {
    fn from(p: Polynomial<F>) -> Self {
        Self::from_poly(p)
    }
}

impl<F: Field> fmt::Display for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_var("x"))
    }
}

impl<'a, F: Field> Add<&'a RationalFunction<F>> for &'a RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn add(self, rhs: &RationalFunction<F>) -> RationalFunction<F> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let g = self.den.gcd(&rhs.den);
        let bg = self.den.div_exact(&g).expect("gcd divides");
        let dg = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &dg) + &(&rhs.num * &bg);
        RationalFunction::canonical(num, &self.den * &dg)
    }
}

impl<'a, F: Field> Sub<&'a RationalFunction<F>> for &'a RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn sub(self, rhs: &RationalFunction<F>) -> RationalFunction<F> {
        self + &(-rhs)
    }
}

impl<'a, F: Field> Mul<&'a RationalFunction<F>> for &'a RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn mul(self, rhs: &RationalFunction<F>) -> RationalFunction<F> {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let a = self.num.div_exact(&g1).expect("gcd divides");
        let d = rhs.den.div_exact(&g1).expect("gcd divides");
        let c = rhs.num.div_exact(&g2).expect("gcd divides");
        let b = self.den.div_exact(&g2).expect("gcd divides");
        let num = &a * &c;
        let den = &b * &d;
        let lc = den.leading().try_inv().expect("nonzero");
        RationalFunction {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }
}

impl<F: Field> Neg for &RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn neg(self) -> RationalFunction<F> {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}
