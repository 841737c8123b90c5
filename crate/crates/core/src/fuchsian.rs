//! Monic second-order operators `D^2 + A*D + B` with rational coefficients:
//! singular points, characteristic exponents, normal form, Wronskian.
//!
//! Finite singular points are grouped by irreducible factors of the
//! coefficient denominators. Local data at the roots of a factor `f` are
//! computed jointly in `Q[x]/(f)`, so no root of `f` is ever extracted.
//! Infinity is handled in the chart `x = 1/s`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::field::{qi, rational_sqrt};
use crate::exactalg::{factor_small, parse_ratfunc, Field, NfElem, NumberField, Poly, RatFunc};

/// `D^2 + a*D + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferentialOperator {
    pub a: RatFunc,
    pub b: RatFunc,
}

/// Where a point of the projective line sits: the set of roots of a monic
/// irreducible polynomial, or infinity.
#[derive(Clone, Debug, PartialEq)]
pub enum Location {
    Finite(Poly),
    Infinity,
}

impl Location {
    /// The rational point `x = c`.
    pub fn point(c: BigRational) -> Self {
        Location::Finite(Poly::from_rationals(&[-c, BigRational::one()]))
    }

    /// Number of points of the projective line represented.
    pub fn count(&self) -> usize {
        match self {
            Location::Finite(f) => f.deg(),
            Location::Infinity => 1,
        }
    }

    /// `Some(c)` for a rational point.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Location::Finite(f) if f.deg() == 1 => Some(-f.coeff(0) / f.coeff(1)),
            _ => None,
        }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Infinity => write!(f, "infinity"),
            Location::Finite(p) => match self.as_rational() {
                Some(c) => write!(f, "x = {}", crate::exactalg::field::fmt_rational(&c)),
                None => write!(f, "roots of {p}"),
            },
        }
    }
}

/// Exponent difference with the nonnegative convention for rational
/// values. When the difference is irrational only its square is kept,
/// which is sign-free and exact.
#[derive(Clone, Debug, PartialEq)]
pub enum ExponentDifference {
    Rational(BigRational),
    Squared(NfElem),
}

impl ExponentDifference {
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExponentDifference::Rational(r) => Some(r),
            ExponentDifference::Squared(_) => None,
        }
    }
}

impl fmt::Display for ExponentDifference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentDifference::Rational(r) => write!(f, "{}", crate::exactalg::field::fmt_rational(r)),
            ExponentDifference::Squared(s) => write!(f, "sqrt({s})"),
        }
    }
}

/// Characteristic exponents at a point.
#[derive(Clone, Debug, PartialEq)]
pub enum Exponents {
    /// `low <= high`, both rational.
    Rational { low: BigRational, high: BigRational },
    /// Roots of `rho^2 - sum*rho + product`, not both rational.
    Algebraic { sum: NfElem, product: NfElem },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularPoint {
    pub location: Location,
    /// Leading Laurent coefficients `a0 = lim t*A`, `b0 = lim t^2*B`.
    pub a0: NfElem,
    pub b0: NfElem,
    pub exponents: Exponents,
    pub difference: ExponentDifference,
}

impl SingularPoint {
    /// Equal exponents; one local solution may then be logarithmic, which
    /// is flagged but not decided.
    pub fn equal_exponents(&self) -> bool {
        match &self.difference {
            ExponentDifference::Rational(r) => r.is_zero(),
            ExponentDifference::Squared(s) => s.is_zero(),
        }
    }

    /// Sum of both exponents over all points represented by the location.
    pub fn exponent_sum_total(&self) -> BigRational {
        let d = qi(self.location.count() as i64);
        // exponent sum per point is 1 - a0
        d - self.a0.trace_over(&self.location)
    }
}

trait TraceOver {
    fn trace_over(&self, loc: &Location) -> BigRational;
}

impl TraceOver for NfElem {
    fn trace_over(&self, loc: &Location) -> BigRational {
        match self.field() {
            Some(_) => self.trace(),
            None => self.repr().coeff(0) * qi(loc.count() as i64),
        }
    }
}

/// `w = prod f_i^{e_i}` with `Dw + A w = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct WronskianData {
    pub factors: Vec<(Poly, BigRational)>,
}

impl WronskianData {
    /// All exponents are rational by construction, so `w` is algebraic.
    pub fn is_algebraic(&self) -> bool {
        true
    }

    /// `w(x0)^power` using the principal branch of each factor separately.
    pub fn eval_power(&self, x0: Complex64, power: f64) -> Complex64 {
        self.factors.iter().fold(Complex64::new(1.0, 0.0), |acc, (f, e)| {
            let v = f.eval_complex(x0);
            let ex = crate::exactalg::field::rational_to_f64(e) * power;
            acc * (v.ln() * ex).exp()
        })
    }

    /// Logarithmic derivative `w'/w` at `x0` scaled by `power`.
    pub fn log_derivative(&self, x0: Complex64, power: f64) -> Complex64 {
        self.factors.iter().fold(Complex64::new(0.0, 0.0), |acc, (f, e)| {
            let ex = crate::exactalg::field::rational_to_f64(e) * power;
            acc + f.derivative().eval_complex(x0) / f.eval_complex(x0) * ex
        })
    }

    pub fn power(&self, k: &BigRational) -> WronskianData {
        WronskianData {
            factors: self.factors.iter().map(|(f, e)| (f.clone(), e * k)).collect(),
        }
    }
}

impl fmt::Display for WronskianData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| format!("({p})^({})", crate::exactalg::field::fmt_rational(e)))
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Serialize, Deserialize)]
struct OperatorText {
    #[serde(rename = "A")]
    a: String,
    #[serde(rename = "B")]
    b: String,
}

impl DifferentialOperator {
    pub fn new(a: RatFunc, b: RatFunc) -> Self {
        DifferentialOperator { a, b }
    }

    /// `D^2 + b`.
    pub fn normal(b: RatFunc) -> Self {
        DifferentialOperator { a: RatFunc::zero(), b }
    }

    pub fn d_squared() -> Self {
        Self::normal(RatFunc::zero())
    }

    pub fn is_normal_form(&self) -> bool {
        self.a.is_zero()
    }

    /// The projectively equivalent operator with vanishing first-order
    /// coefficient: `D^2 - A'/2 - A^2/4 + B`.
    pub fn normal_form(&self) -> DifferentialOperator {
        if self.a.is_zero() {
            return self.clone();
        }
        let half = RatFunc::constant(BigRational::new(1.into(), 2.into()));
        let quarter = RatFunc::constant(BigRational::new(1.into(), 4.into()));
        let b = &(&self.b - &(&half * &self.a.derivative())) - &(&quarter * &(&self.a * &self.a));
        DifferentialOperator::normal(b)
    }

    /// Equal normal forms.
    pub fn projectively_equivalent(&self, other: &DifferentialOperator) -> bool {
        self.normal_form() == other.normal_form()
    }

    /// The operator in the chart `s = 1/x`, made monic.
    pub fn at_infinity(&self) -> DifferentialOperator {
        // d/dx = -s^2 d/ds, d^2/dx^2 = s^4 d^2/ds^2 + 2 s^3 d/ds
        let s = RatFunc::x();
        let s2 = &s * &s;
        let s4 = &s2 * &s2;
        let two_over_s = RatFunc::constant(qi(2)).div(&s).expect("s is nonzero");
        let a_rec = self.a.at_reciprocal();
        let b_rec = self.b.at_reciprocal();
        let a = &two_over_s - &a_rec.div(&s2).expect("nonzero");
        let b = b_rec.div(&s4).expect("nonzero");
        DifferentialOperator { a, b }
    }

    /// Finite singular points, then infinity if singular.
    pub fn singular_points(&self) -> Result<Vec<SingularPoint>> {
        let den = lcm(self.a.den(), self.b.den());
        let mut out = Vec::new();
        for fac in factor_small(&den).factors {
            out.push(self.local_data(&Location::Finite(fac.poly))?);
        }
        let inf = self.at_infinity();
        let s = Poly::x();
        if inf.a.den().multiplicity_of(&s) > 0 || inf.b.den().multiplicity_of(&s) > 0 {
            out.push(self.local_data(&Location::Infinity)?);
        }
        Ok(out)
    }

    /// Indicial data at any location (ordinary points give exponents 0, 1).
    pub fn local_data(&self, loc: &Location) -> Result<SingularPoint> {
        let (op, f) = match loc {
            Location::Finite(f) => (self.clone(), f.clone()),
            Location::Infinity => (self.at_infinity(), Poly::x()),
        };
        let field = (f.deg() > 1).then(|| NumberField::residue_ring(&f, "e"));
        let a0 = leading_laurent(&op.a, &f, 1, field.as_ref()).map_err(|d| Error::NonFuchsian {
            location: loc.to_string(),
            detail: format!("first-order coefficient has a pole of order {d}"),
        })?;
        let b0 = leading_laurent(&op.b, &f, 2, field.as_ref()).map_err(|d| Error::NonFuchsian {
            location: loc.to_string(),
            detail: format!("zeroth-order coefficient has a pole of order {d}"),
        })?;
        let (exponents, difference) = indicial_roots(&a0, &b0);
        Ok(SingularPoint {
            location: loc.clone(),
            a0,
            b0,
            exponents,
            difference,
        })
    }

    /// Exponent difference at a location; 1 at ordinary points.
    pub fn exponent_difference(&self, loc: &Location) -> Result<ExponentDifference> {
        Ok(self.local_data(loc)?.difference)
    }

    /// Sum of all exponents minus `(r - 2)`; zero for Fuchsian operators on
    /// the projective line.
    pub fn fuchs_relation(&self) -> Result<BigRational> {
        let pts = self.singular_points()?;
        let r: usize = pts.iter().map(|p| p.location.count()).sum();
        let total: BigRational = pts.iter().map(|p| p.exponent_sum_total()).sum();
        Ok(total - qi(r as i64 - 2))
    }

    /// Wronskian as a product of powers of irreducible factors.
    pub fn wronskian(&self) -> Result<WronskianData> {
        let a = &self.a;
        if a.is_zero() {
            return Ok(WronskianData { factors: Vec::new() });
        }
        let mut factors = Vec::new();
        let mut log_deriv = RatFunc::zero();
        for fac in factor_small(a.den()).factors {
            if fac.multiplicity > 1 {
                return Err(Error::NonFuchsian {
                    location: Location::Finite(fac.poly.clone()).to_string(),
                    detail: "first-order coefficient has a non-simple pole".into(),
                });
            }
            let field = (fac.poly.deg() > 1).then(|| NumberField::residue_ring(&fac.poly, "e"));
            let res = leading_laurent(a, &fac.poly, 1, field.as_ref()).expect("simple pole");
            let r = res.as_rational().ok_or_else(|| {
                Error::Unsupported(format!(
                    "residues of A at roots of {} are not rational",
                    fac.poly
                ))
            })?;
            let term = RatFunc::new(fac.poly.derivative(), fac.poly.clone())
                .expect("nonzero")
                .scale(&r);
            log_deriv = &log_deriv + &term;
            factors.push((fac.poly, -r));
        }
        if &log_deriv != a {
            return Err(Error::Unsupported(
                "first-order coefficient is not a sum of simple logarithmic derivatives".into(),
            ));
        }
        Ok(WronskianData { factors })
    }

    /// `(A(x0), B(x0))` numerically; `None` at poles.
    pub fn eval_coeffs(&self, x0: Complex64) -> Option<(Complex64, Complex64)> {
        Some((self.a.eval_complex(x0)?, self.b.eval_complex(x0)?))
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(OperatorText {
            a: self.a.to_string(),
            b: self.b.to_string(),
        })
        .expect("plain strings serialize")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let t: OperatorText =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("operator JSON: {e}")))?;
        Ok(DifferentialOperator {
            a: parse_ratfunc(&t.a)?,
            b: parse_ratfunc(&t.b)?,
        })
    }
}

impl fmt::Display for DifferentialOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D^2 + ({})*D + ({})", self.a, self.b)
    }
}

fn lcm(a: &Poly, b: &Poly) -> Poly {
    let g = a.gcd(b);
    (a * b).div_exact(&g).expect("gcd divides").monic()
}

/// `lim t^order * r` at the roots of `f` (`t = x - root`), as an element of
/// `Q[x]/(f)`. Fails with the pole order when it exceeds `order`.
pub fn leading_laurent(
    r: &RatFunc,
    f: &Poly,
    order: usize,
    field: Option<&Arc<NumberField>>,
) -> std::result::Result<NfElem, usize> {
    let m = r.den().multiplicity_of(f);
    if m > order {
        return Err(m);
    }
    if m < order {
        return Ok(NfElem::zero());
    }
    let cofactor = r.den().div_exact(&f.pow(m as u32)).expect("multiplicity divides");
    let denom = &cofactor * &f.derivative().pow(order as u32);
    match field {
        None => {
            let root = -f.coeff(0) / f.coeff(1);
            let v = r.num().eval(&root) / denom.eval(&root);
            Ok(NfElem::rational(v))
        }
        Some(k) => {
            let inv = denom.inv_mod(f).expect("cofactor is coprime to an irreducible factor");
            let val = (r.num() * &inv).rem(f);
            if val.is_constant() {
                Ok(NfElem::rational(val.coeff(0)))
            } else {
                Ok(NfElem::from_poly(val, k))
            }
        }
    }
}

fn indicial_roots(a0: &NfElem, b0: &NfElem) -> (Exponents, ExponentDifference) {
    // rho^2 + (a0 - 1) rho + b0 = 0
    let sum = NfElem::one() - a0.clone();
    let disc = sum.clone() * sum.clone() - NfElem::rational(qi(4)) * b0.clone();
    if let (Some(s), Some(d)) = (sum.as_rational(), disc.as_rational()) {
        if let Some(root) = rational_sqrt(&d) {
            let half = BigRational::new(1.into(), 2.into());
            let low = (&s - &root) * &half;
            let high = (&s + &root) * &half;
            return (
                Exponents::Rational { low, high },
                ExponentDifference::Rational(root.abs()),
            );
        }
    }
    (
        Exponents::Algebraic {
            sum,
            product: b0.clone(),
        },
        ExponentDifference::Squared(disc),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::q;

    fn lame_harmonic() -> DifferentialOperator {
        // A = (3x^2-1)/(2(x^3-x)), B = -(1/6*7/6 x)/(4(x^3-x))
        let p = Poly::from_ints(&[0, -1, 0, 1]);
        let a = RatFunc::new(p.derivative(), p.scale(&qi(2))).unwrap();
        let b = RatFunc::new(Poly::from_rationals(&[q(0, 1), -q(7, 36)]), p.scale(&qi(4))).unwrap();
        DifferentialOperator::new(a, b)
    }

    #[test]
    fn lame_harmonic_exponents() {
        let l = lame_harmonic();
        let pts = l.singular_points().unwrap();
        assert_eq!(pts.len(), 4);
        for p in &pts[..3] {
            assert_eq!(
                p.exponents,
                Exponents::Rational {
                    low: q(0, 1),
                    high: q(1, 2)
                }
            );
        }
        assert_eq!(pts[3].location, Location::Infinity);
        assert_eq!(
            pts[3].exponents,
            Exponents::Rational {
                low: q(-1, 12),
                high: q(7, 12)
            }
        );
        assert_eq!(pts[3].difference, ExponentDifference::Rational(q(2, 3)));
        assert!(l.fuchs_relation().unwrap().is_zero());
    }

    #[test]
    fn d_squared_only_singular_at_infinity() {
        let l = DifferentialOperator::d_squared();
        let pts = l.singular_points().unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].location, Location::Infinity);
        assert!(l.fuchs_relation().unwrap().is_zero());
        assert!(l.wronskian().unwrap().factors.is_empty());
    }

    #[test]
    fn ordinary_point_has_unit_difference() {
        let l = lame_harmonic();
        let d = l.exponent_difference(&Location::point(q(5, 2))).unwrap();
        assert_eq!(d, ExponentDifference::Rational(q(1, 1)));
    }

    #[test]
    fn irreducible_cubic_points_handled_jointly() {
        let p = Poly::from_rationals(&[q(20, 3), q(-20, 3), q(0, 1), q(1, 1)]);
        let a = RatFunc::new(p.derivative(), p.scale(&qi(2))).unwrap();
        let b = RatFunc::new(Poly::from_rationals(&[q(1, 9), -q(7, 36)]), p.scale(&qi(4))).unwrap();
        let l = DifferentialOperator::new(a, b);
        let pts = l.singular_points().unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0].location.count(), 3);
        assert_eq!(pts[0].difference, ExponentDifference::Rational(q(1, 2)));
        assert!(l.fuchs_relation().unwrap().is_zero());
        let w = l.wronskian().unwrap();
        assert_eq!(w.factors, vec![(p.clone(), q(-1, 2))]);
    }

    #[test]
    fn non_fuchsian_rejected() {
        let b = RatFunc::new(Poly::one(), Poly::from_ints(&[0, 0, 0, 1])).unwrap();
        let l = DifferentialOperator::normal(b);
        match l.singular_points() {
            Err(Error::NonFuchsian { location, .. }) => assert_eq!(location, "x = 0"),
            other => panic!("expected NonFuchsian, got {other:?}"),
        }
    }

    #[test]
    fn wronskians() {
        let l = lame_harmonic();
        let w = l.wronskian().unwrap();
        assert_eq!(
            w.factors,
            vec![
                (Poly::from_ints(&[1, 1]), q(-1, 2)),
                (Poly::from_ints(&[0, 1]), q(-1, 2)),
                (Poly::from_ints(&[-1, 1]), q(-1, 2)),
            ]
        );
        let l2 = DifferentialOperator::new(RatFunc::new(Poly::one(), Poly::x()).unwrap(), RatFunc::zero());
        assert_eq!(l2.wronskian().unwrap().factors, vec![(Poly::x(), q(-1, 1))]);
        let l3 = DifferentialOperator::new(
            RatFunc::new(Poly::one(), Poly::from_ints(&[0, 0, 1])).unwrap(),
            RatFunc::zero(),
        );
        assert!(l3.wronskian().is_err());
    }

    #[test]
    fn normal_form_properties() {
        let l = lame_harmonic();
        let n = l.normal_form();
        assert!(n.is_normal_form());
        assert_eq!(n.normal_form(), n);
        assert!(l.projectively_equivalent(&n));
        let p1 = l.singular_points().unwrap();
        let p2 = n.singular_points().unwrap();
        assert_eq!(p1.len(), p2.len());
        for (x, y) in p1.iter().zip(&p2) {
            assert_eq!(x.location, y.location);
            assert_eq!(x.difference, y.difference);
        }
    }

    #[test]
    fn json_round_trip() {
        let l = lame_harmonic();
        let s = l.to_json_value().to_string();
        assert_eq!(DifferentialOperator::from_json_str(&s).unwrap(), l);
    }
}
