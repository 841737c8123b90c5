//! Pullbacks of hypergeometric operators along rational maps.
//!
//! `L` is a weak pullback of `L'` along `ξ` when the normal form of `L`
//! equals the normal form of the strong pullback
//!
//! ```text
//! D² - (ξ''/ξ')·D + ξ'²·B'(ξ)
//! ```
//!
//! which is the identity of rational functions
//!
//! ```text
//! B - A'/2 - A²/4 = (ξ''/ξ')'/2 - (ξ''/ξ')²/4 + ξ'²·B'(ξ).
//! ```
//!
//! Verification is exact: the difference of the two sides is computed and
//! returned as a witness when it is nonzero.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactalg::field::{fmt_rational, q, qi};
use crate::exactalg::{factor_small, parse_ratfunc, NfElem, Poly, RatFunc};
use crate::fuchsian::{DifferentialOperator, ExponentDifference, Location};
use crate::lame::LameParameters;
use crate::schwarz::{hypergeometric_operator, SchwarzTriple, Vertex};

/// `D² - (ξ''/ξ')D + ξ'²·B'(ξ)` for `L' = D² + B'`.
pub fn strong_pullback(lprime: &DifferentialOperator, xi: &RatFunc) -> Result<DifferentialOperator> {
    if !lprime.is_normal_form() {
        return Err(Error::InvalidInput(
            "strong pullback expects an operator in normal form".into(),
        ));
    }
    if xi.is_constant() {
        return Err(Error::ConstantMap);
    }
    let d1 = xi.derivative();
    let r = d1.derivative().div(&d1)?;
    let b = &(&d1 * &d1) * &lprime.b.compose_map(xi)?;
    Ok(DifferentialOperator::new(-&r, b))
}

/// Normal-form coefficient of the strong pullback of `D² + B'` along `ξ`.
pub fn pulled_back_normal_b(bprime: &RatFunc, xi: &RatFunc) -> Result<RatFunc> {
    if xi.is_constant() {
        return Err(Error::ConstantMap);
    }
    let d1 = xi.derivative();
    let r = d1.derivative().div(&d1)?;
    let half = RatFunc::constant(q(1, 2));
    let quarter = RatFunc::constant(q(1, 4));
    let b = &(&d1 * &d1) * &bprime.compose_map(xi)?;
    Ok(&(&(&half * &r.derivative()) - &(&quarter * &(&r * &r))) + &b)
}

/// Outcome of an exact weak-pullback check.
#[derive(Clone, Debug, PartialEq)]
pub struct PullbackCertificate {
    pub xi: RatFunc,
    pub source_triple: SchwarzTriple,
    pub target: DifferentialOperator,
    pub verified: bool,
    /// Left side minus right side; present exactly when nonzero.
    pub residual_witness: Option<RatFunc>,
}

/// Is `L` a weak pullback of the hypergeometric operator of `t` along `ξ`?
pub fn is_weak_pullback(
    l: &DifferentialOperator,
    t: &SchwarzTriple,
    xi: &RatFunc,
) -> Result<PullbackCertificate> {
    let bprime = hypergeometric_operator(t).b;
    let rhs = pulled_back_normal_b(&bprime, xi)?;
    let lhs = l.normal_form().b;
    let diff = &lhs - &rhs;
    let verified = diff.is_zero();
    Ok(PullbackCertificate {
        xi: xi.clone(),
        source_triple: t.clone(),
        target: l.clone(),
        verified,
        residual_witness: (!verified).then_some(diff),
    })
}

/// Image of a point under `ξ` and the local multiplicity there.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalImage {
    /// `None` when the image is not one of `0, 1, ∞`.
    pub vertex: Option<Vertex>,
    pub multiplicity: usize,
}

/// Where `ξ` sends the points of `loc`, and with which multiplicity.
///
/// At a finite image value the multiplicity is `1 + ord(ξ')`; at a pole it
/// is the pole order. Infinity is handled in the chart `x = 1/s`.
pub fn local_image(xi: &RatFunc, loc: &Location) -> Result<LocalImage> {
    if xi.is_constant() {
        return Err(Error::ConstantMap);
    }
    let (g, f) = match loc {
        Location::Finite(f) => (xi.clone(), f.clone()),
        Location::Infinity => (xi.at_reciprocal(), Poly::x()),
    };
    let pole = g.den().multiplicity_of(&f);
    if pole > 0 {
        return Ok(LocalImage {
            vertex: Some(Vertex::Infinity),
            multiplicity: pole,
        });
    }
    let inv = g.den().inv_mod(&f).expect("denominator is coprime to f");
    let value = (g.num() * &inv).rem(&f);
    let vertex = if value.is_constant() {
        let c = value.coeff(0);
        if c.is_zero() {
            Some(Vertex::Zero)
        } else if c.is_one() {
            Some(Vertex::One)
        } else {
            None
        }
    } else {
        None
    };
    let h = 1 + g.derivative().num().multiplicity_of(&f);
    Ok(LocalImage {
        vertex,
        multiplicity: h,
    })
}

/// One line of an exponent-transport check at a singular point of the target.
#[derive(Clone, Debug, PartialEq)]
pub struct TransportRecord {
    pub location: Location,
    pub image: LocalImage,
    pub target_difference: ExponentDifference,
    /// Exponent difference of the source at the image (1 off the vertices).
    pub source_difference: BigRational,
    pub holds: bool,
}

fn vertex_difference(t: &SchwarzTriple, v: Option<Vertex>) -> BigRational {
    match v {
        Some(Vertex::Zero) => t.lambda.abs(),
        Some(Vertex::One) => t.mu.abs(),
        Some(Vertex::Infinity) => t.nu.abs(),
        None => BigRational::one(),
    }
}

/// Check `ρ(L, P) = h·ρ(L', ξ(P))` at every singular point `P` of the target.
pub fn exponent_transport(cert: &PullbackCertificate) -> Result<Vec<TransportRecord>> {
    let mut out = Vec::new();
    for sp in cert.target.singular_points()? {
        let image = local_image(&cert.xi, &sp.location)?;
        let src = vertex_difference(&cert.source_triple, image.vertex);
        let expect = &src * qi(image.multiplicity as i64);
        let holds = match &sp.difference {
            ExponentDifference::Rational(r) => *r == expect,
            ExponentDifference::Squared(s) => *s == NfElem::rational(&expect * &expect),
        };
        out.push(TransportRecord {
            location: sp.location.clone(),
            image,
            target_difference: sp.difference.clone(),
            source_difference: src,
            holds,
        });
    }
    Ok(out)
}

/// Both sides of the degree formula,
/// `2 - 2g + Σ(ρᵢ - 1) = deg ξ · [2 + Σ(ρ'ⱼ - 1)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeRelation {
    pub lhs: BigRational,
    pub rhs_per_degree: BigRational,
}

impl DegreeRelation {
    pub fn admits(&self, degree: usize) -> bool {
        self.lhs == &self.rhs_per_degree * qi(degree as i64)
    }

    /// The unique degree the relation allows, if it is a positive integer.
    pub fn forced_degree(&self) -> Option<usize> {
        if self.rhs_per_degree.is_zero() {
            return None;
        }
        let d = &self.lhs / &self.rhs_per_degree;
        (d.is_integer() && d.is_positive()).then(|| d.to_integer().to_usize()).flatten()
    }
}

pub fn degree_formula(rho: &[BigRational], genus: u32, rho_prime: &[BigRational]) -> DegreeRelation {
    let one = BigRational::one();
    let lhs = qi(2 - 2 * genus as i64) + rho.iter().map(|r| r - &one).sum::<BigRational>();
    let rhs = qi(2) + rho_prime.iter().map(|r| r - &one).sum::<BigRational>();
    DegreeRelation {
        lhs,
        rhs_per_degree: rhs,
    }
}

/// Degree relation of a verified certificate on the projective line, using
/// the exponent differences of the target's singular points.
pub fn certificate_degree_relation(cert: &PullbackCertificate) -> Result<DegreeRelation> {
    let mut rho = Vec::new();
    for sp in cert.target.singular_points()? {
        let r = match &sp.difference {
            ExponentDifference::Rational(r) => r.clone(),
            ExponentDifference::Squared(_) => {
                return Err(Error::Unsupported(format!(
                    "irrational exponent difference at {}",
                    sp.location
                )))
            }
        };
        for _ in 0..sp.location.count() {
            rho.push(r.clone());
        }
    }
    let t = &cert.source_triple;
    Ok(degree_formula(&rho, 0, &[t.lambda.abs(), t.mu.abs(), t.nu.abs()]))
}

/// A singular point sent to a vertex with a forced multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct AssignedPoint {
    pub name: String,
    pub rho: BigRational,
    pub vertex: Vertex,
    pub multiplicity: usize,
}

/// Points of one class in a fiber.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberClass {
    /// Name of the singular point, or `None` for ordinary points.
    pub singular: Option<String>,
    pub multiplicity: usize,
    pub count: usize,
}

/// Fibers of a hypothetical `ξ` over `0, 1, ∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct RamificationProfile {
    pub degree: usize,
    pub genus: u32,
    /// Indexed by vertex `0, 1, ∞`.
    pub fibers: [Vec<FiberClass>; 3],
}

impl RamificationProfile {
    /// Numbers of ordinary points over `0, 1, ∞`.
    pub fn ordinary_counts(&self) -> [usize; 3] {
        let c = |i: usize| {
            self.fibers[i]
                .iter()
                .filter(|f| f.singular.is_none())
                .map(|f| f.count)
                .sum()
        };
        [c(0), c(1), c(2)]
    }

    /// Multiplicities in each fiber sum to the degree and the total number
    /// of points over the vertices is `2 - 2g + deg`.
    pub fn verify(&self) -> bool {
        let sums_ok = self
            .fibers
            .iter()
            .all(|f| f.iter().map(|c| c.multiplicity * c.count).sum::<usize>() == self.degree);
        let points: usize = self.fibers.iter().flatten().map(|c| c.count).sum();
        sums_ok && points as i64 == 2 - 2 * self.genus as i64 + self.degree as i64
    }
}

fn vertex_index(v: Vertex) -> usize {
    match v {
        Vertex::Zero => 0,
        Vertex::One => 1,
        Vertex::Infinity => 2,
    }
}

fn unit_fraction_denominator(r: &BigRational) -> Option<usize> {
    (r.is_positive() && r.numer().is_one()).then(|| r.denom().to_usize()).flatten()
}

/// All ramification profiles of degree at most `max_degree` compatible with
/// the assignment.
///
/// Ordinary points over a vertex with exponent difference `1/k` must have
/// multiplicity `k`; over a vertex whose difference is not a unit fraction
/// no ordinary point may occur. A profile is returned when every fiber has
/// total multiplicity `deg` and the Hurwitz count holds.
pub fn ramification_profiles(
    assignment: &[AssignedPoint],
    t: &SchwarzTriple,
    genus: u32,
    max_degree: usize,
) -> Result<Vec<RamificationProfile>> {
    let rho_v = [t.lambda.abs(), t.mu.abs(), t.nu.abs()];
    for p in assignment {
        let want = &rho_v[vertex_index(p.vertex)] * qi(p.multiplicity as i64);
        if p.multiplicity == 0 || want != p.rho {
            return Err(Error::InconsistentAssignment(format!(
                "{} has exponent difference {} but multiplicity {} over a vertex with difference {}",
                p.name,
                fmt_rational(&p.rho),
                p.multiplicity,
                fmt_rational(&rho_v[vertex_index(p.vertex)])
            )));
        }
    }
    let mut out = Vec::new();
    for d in 1..=max_degree {
        let mut fibers: [Vec<FiberClass>; 3] = Default::default();
        let mut ok = true;
        for (i, fiber) in fibers.iter_mut().enumerate() {
            let assigned: Vec<&AssignedPoint> =
                assignment.iter().filter(|p| vertex_index(p.vertex) == i).collect();
            let forced: usize = assigned.iter().map(|p| p.multiplicity).sum();
            if forced > d {
                ok = false;
                break;
            }
            for p in &assigned {
                fiber.push(FiberClass {
                    singular: Some(p.name.clone()),
                    multiplicity: p.multiplicity,
                    count: 1,
                });
            }
            let rem = d - forced;
            match unit_fraction_denominator(&rho_v[i]) {
                Some(k) if rem.is_multiple_of(k) => {
                    fiber.push(FiberClass {
                        singular: None,
                        multiplicity: k,
                        count: rem / k,
                    });
                }
                _ if rem == 0 => {}
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let profile = RamificationProfile {
            degree: d,
            genus,
            fibers,
        };
        if profile.verify() {
            out.push(profile);
        }
    }
    Ok(out)
}

/// Every way to send the Lamé singular points (`e1, e2, e3` with difference
/// `1/2`, `inf` with `|ℓ + 1/2|`) to the vertices with integral
/// multiplicities. The `eᵢ` are interchangeable, so assignments are listed
/// up to their permutation.
pub fn lame_assignments(ell: &BigRational, t: &SchwarzTriple) -> Vec<Vec<AssignedPoint>> {
    let rho_v = [
        (Vertex::Zero, t.lambda.abs()),
        (Vertex::One, t.mu.abs()),
        (Vertex::Infinity, t.nu.abs()),
    ];
    let options = |rho: &BigRational| -> Vec<(Vertex, usize)> {
        rho_v
            .iter()
            .filter_map(|(v, r)| {
                if r.is_zero() {
                    return None;
                }
                let h = rho / r;
                (h.is_integer() && h.is_positive())
                    .then(|| h.to_integer().to_usize().map(|h| (*v, h)))
                    .flatten()
            })
            .collect()
    };
    let half = q(1, 2);
    let rho_inf = (ell + &half).abs();
    let e_opts = options(&half);
    let inf_opts = options(&rho_inf);
    let mut out = Vec::new();
    let n = e_opts.len();
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                for io in &inf_opts {
                    let mut a = Vec::new();
                    for (name, idx) in [("e1", i), ("e2", j), ("e3", k)] {
                        a.push(AssignedPoint {
                            name: name.into(),
                            rho: half.clone(),
                            vertex: e_opts[idx].0,
                            multiplicity: e_opts[idx].1,
                        });
                    }
                    a.push(AssignedPoint {
                        name: "inf".into(),
                        rho: rho_inf.clone(),
                        vertex: io.0,
                        multiplicity: io.1,
                    });
                    out.push(a);
                }
            }
        }
    }
    out
}

/// The actual fibers of `ξ` over `0, 1, ∞`, with each point classified as
/// singular for `L` or ordinary. Points are grouped per irreducible factor,
/// so a factor of degree `k` contributes `k` points.
pub fn map_profile(xi: &RatFunc, target: &DifferentialOperator) -> Result<RamificationProfile> {
    if xi.is_constant() {
        return Err(Error::ConstantMap);
    }
    let singular: Vec<Location> = target.singular_points()?.into_iter().map(|s| s.location).collect();
    let m = xi.degree();
    let mut fibers: [Vec<FiberClass>; 3] = Default::default();
    for (i, poly) in [xi.num().clone(), xi.num() - xi.den(), xi.den().clone()].iter().enumerate() {
        let mut classes: Vec<FiberClass> = Vec::new();
        let mut push = |name: Option<String>, mult: usize, count: usize| {
            if let Some(c) = classes
                .iter_mut()
                .find(|c| c.singular.is_none() && name.is_none() && c.multiplicity == mult)
            {
                c.count += count;
            } else {
                classes.push(FiberClass {
                    singular: name,
                    multiplicity: mult,
                    count,
                });
            }
        };
        for fac in factor_small(poly).factors {
            let loc = Location::Finite(fac.poly.clone());
            if singular.contains(&loc) {
                push(Some(loc.to_string()), fac.multiplicity, fac.poly.deg());
            } else {
                push(None, fac.multiplicity, fac.poly.deg());
            }
        }
        let at_inf = m - poly.deg();
        if at_inf > 0 {
            let name = singular.contains(&Location::Infinity).then(|| "infinity".to_string());
            push(name, at_inf, 1);
        }
        fibers[i] = classes;
    }
    Ok(RamificationProfile {
        degree: m,
        genus: 0,
        fibers,
    })
}

/// Operators that the named maps pull back to.
#[derive(Clone, Debug, PartialEq)]
pub enum NamedTarget {
    Lame(LameParameters),
    Hypergeometric(SchwarzTriple),
}

impl NamedTarget {
    pub fn operator(&self) -> DifferentialOperator {
        match self {
            NamedTarget::Lame(p) => p.operator(),
            NamedTarget::Hypergeometric(t) => hypergeometric_operator(t),
        }
    }
}

impl fmt::Display for NamedTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedTarget::Lame(p) => write!(f, "{p}"),
            NamedTarget::Hypergeometric(t) => write!(f, "hypergeometric{t}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedMap {
    pub name: &'static str,
    pub xi: RatFunc,
    pub source: SchwarzTriple,
    pub target: NamedTarget,
}

impl NamedMap {
    pub fn certificate(&self) -> Result<PullbackCertificate> {
        is_weak_pullback(&self.target.operator(), &self.source, &self.xi)
    }
}

/// Klein's map `ξ̄(s) = 1 - (64s+189)(64s²+133s+49)³ / (7⁷·27·(s+1)²)`.
pub fn klein_xibar() -> RatFunc {
    parse_ratfunc("1 - (64s+189)(64s^2+133s+49)^3/(823543*27*(s+1)^2)").expect("valid literal")
}

/// The Möbius map `M(s) = 189s/(125 - 189s)`.
pub fn klein_mobius() -> RatFunc {
    parse_ratfunc("189s/(125-189s)").expect("valid literal")
}

pub fn named_maps() -> Vec<NamedMap> {
    let lame = |ell, b, g2, g3| NamedTarget::Lame(LameParameters::new(ell, b, g2, g3).expect("nonzero discriminant"));
    let parse = |s: &str| parse_ratfunc(s).expect("valid literal");
    vec![
        NamedMap {
            name: "harmonic-quadratic",
            xi: parse("(x^2-1)/x^2"),
            source: SchwarzTriple::from_ints([(1, 2), (1, 3), (1, 4)]),
            target: lame(q(1, 6), qi(0), qi(4), qi(0)),
        },
        NamedMap {
            name: "equianharmonic-cubic",
            xi: parse("1-x^3"),
            source: SchwarzTriple::from_ints([(1, 2), (1, 3), (1, 4)]),
            target: lame(q(1, 4), qi(0), qi(0), qi(4)),
        },
        NamedMap {
            name: "prop32-quintic",
            xi: parse("(3x^3-20x+20)(2x-5)^2/(12(x-1)^5)"),
            source: SchwarzTriple::from_ints([(1, 2), (1, 3), (1, 5)]),
            target: lame(q(1, 6), q(-1, 9), q(80, 3), q(-80, 3)),
        },
        NamedMap {
            name: "klein-caseXIV",
            xi: parse("s(157464s^3-352107s^2+708750s-546875)^2/(189s-125)^5"),
            source: SchwarzTriple::from_ints([(1, 2), (1, 3), (1, 5)]),
            target: NamedTarget::Hypergeometric(SchwarzTriple::from_ints([(1, 2), (1, 3), (2, 5)])),
        },
    ]
}

pub fn named_map(name: &str) -> Option<NamedMap> {
    named_maps().into_iter().find(|m| m.name == name)
}

/// `true` when the value of `f` at `x` (exact) equals `v`.
pub fn maps_to(f: &RatFunc, x: &BigRational, v: &BigRational) -> bool {
    f.eval(x).is_some_and(|y| y == *v)
}
