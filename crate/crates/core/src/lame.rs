//! The Lamé operator in algebraic form and the necessary conditions on `ℓ`
//! for finite projective monodromy.
//!
//! With `P(x) = x³ - (g₂/4)x - g₃/4 = ∏(x - eᵢ)`:
//!
//! ```text
//! L = D² + P'/(2P)·D - (ℓ(ℓ+1)x + B)/(4P)
//! ```
//!
//! The roots `eᵢ` are never extracted; everything exact is phrased in `P`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::field::{fmt_rational, frac, is_integer, q, qi};
use crate::exactalg::{parse_rational, Poly, RatFunc};
use crate::fuchsian::DifferentialOperator;
use crate::schwarz::GroupTag;

/// `(ℓ, B, g₂, g₃)` with nonzero discriminant.
#[derive(Clone, Debug, PartialEq)]
pub struct LameParameters {
    pub ell: BigRational,
    pub b: BigRational,
    pub g2: BigRational,
    pub g3: BigRational,
}

/// Invariants of `y² = 4x³ - g₂x - g₃`.
#[derive(Clone, Debug, PartialEq)]
pub struct EllipticCurveData {
    pub g2: BigRational,
    pub g3: BigRational,
    pub discriminant: BigRational,
    pub j_invariant: BigRational,
}

pub fn discriminant(g2: &BigRational, g3: &BigRational) -> BigRational {
    g2 * g2 * g2 - qi(27) * g3 * g3
}

/// `J = g₂³/Δ`.
pub fn j_invariant(g2: &BigRational, g3: &BigRational) -> Result<BigRational> {
    let d = discriminant(g2, g3);
    if d.is_zero() {
        return Err(Error::ZeroDiscriminant);
    }
    Ok(g2 * g2 * g2 / d)
}

pub fn elliptic_curve(g2: &BigRational, g3: &BigRational) -> Result<EllipticCurveData> {
    Ok(EllipticCurveData {
        g2: g2.clone(),
        g3: g3.clone(),
        discriminant: discriminant(g2, g3),
        j_invariant: j_invariant(g2, g3)?,
    })
}

impl LameParameters {
    pub fn new(ell: BigRational, b: BigRational, g2: BigRational, g3: BigRational) -> Result<Self> {
        if discriminant(&g2, &g3).is_zero() {
            return Err(Error::ZeroDiscriminant);
        }
        Ok(LameParameters { ell, b, g2, g3 })
    }

    /// From four rationals in text form.
    pub fn parse(ell: &str, b: &str, g2: &str, g3: &str) -> Result<Self> {
        Self::new(
            parse_rational(ell)?,
            parse_rational(b)?,
            parse_rational(g2)?,
            parse_rational(g3)?,
        )
    }

    /// `P(x) = x³ - (g₂/4)x - g₃/4`.
    pub fn cubic(&self) -> Poly {
        Poly::from_rationals(&[
            -&self.g3 * q(1, 4),
            -&self.g2 * q(1, 4),
            BigRational::zero(),
            BigRational::one(),
        ])
    }

    pub fn curve(&self) -> EllipticCurveData {
        elliptic_curve(&self.g2, &self.g3).expect("checked at construction")
    }

    pub fn j_invariant(&self) -> BigRational {
        self.curve().j_invariant
    }

    /// Exponent difference at infinity, `|ℓ + 1/2|`.
    pub fn infinity_difference(&self) -> BigRational {
        let r = &self.ell + q(1, 2);
        if r < BigRational::zero() {
            -r
        } else {
            r
        }
    }

    pub fn operator(&self) -> DifferentialOperator {
        let p = self.cubic();
        let a = RatFunc::new(p.derivative(), p.scale(&qi(2))).expect("P is nonzero");
        let ll = &self.ell * (&self.ell + BigRational::one());
        let num = Poly::from_rationals(&[-self.b.clone(), -ll]);
        let b = RatFunc::new(num, p.scale(&qi(4))).expect("P is nonzero");
        DifferentialOperator::new(a, b)
    }

    /// `(ℓ, αB, α²g₂, α³g₃)`: the operator after `x ↦ x/α`.
    pub fn scale(&self, alpha: &BigRational) -> Result<Self> {
        if alpha.is_zero() {
            return Err(Error::InvalidInput("scale factor must be nonzero".into()));
        }
        Ok(LameParameters {
            ell: self.ell.clone(),
            b: alpha * &self.b,
            g2: alpha * alpha * &self.g2,
            g3: alpha * alpha * alpha * &self.g3,
        })
    }
}

impl fmt::Display for LameParameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Lamé(ℓ={}, B={}, g2={}, g3={})",
            fmt_rational(&self.ell),
            fmt_rational(&self.b),
            fmt_rational(&self.g2),
            fmt_rational(&self.g3)
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    AlgebraicForm,
    WeierstrassForm,
}

/// One admissible alternative: the condition `ℓ ∈ ℤ ± residue`, the group
/// on the projective line, and (Weierstrass form only) the group on the
/// elliptic curve.
#[derive(Clone, Debug, PartialEq)]
pub struct Admissible {
    pub residue: BigRational,
    pub base_group: GroupTag,
    pub curve_group: Option<GroupTag>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationVerdict {
    pub scope: Scope,
    pub ell: BigRational,
    pub admissible: Vec<Admissible>,
    /// `2ℓ ∈ ℤ`: Lamé polynomial territory, no group claims are made.
    pub classical: bool,
}

impl ClassificationVerdict {
    /// Distinct base groups, in the order S4, A5.
    pub fn base_groups(&self) -> Vec<GroupTag> {
        let mut g: Vec<GroupTag> = self.admissible.iter().map(|a| a.base_group).collect();
        g.sort();
        g.dedup();
        g
    }

    /// `(curve, base)` pairs for the Weierstrass form.
    pub fn pairs(&self) -> Vec<(GroupTag, GroupTag)> {
        let mut v: Vec<(GroupTag, GroupTag)> = self
            .admissible
            .iter()
            .filter_map(|a| a.curve_group.map(|c| (c, a.base_group)))
            .collect();
        v.sort();
        v.dedup();
        v
    }
}

/// Distance from `ℓ` to the nearest integer, so that `ℓ ∈ ℤ ± d`.
fn residue(ell: &BigRational) -> BigRational {
    let f = frac(ell);
    let g = BigRational::one() - &f;
    f.min(g)
}

fn is_classical(ell: &BigRational) -> bool {
    is_integer(&(ell * qi(2)))
}

const ALGEBRAIC_TABLE: [((i64, i64), GroupTag); 5] = [
    ((1, 6), GroupTag::Octahedral),
    ((1, 4), GroupTag::Octahedral),
    ((1, 10), GroupTag::Icosahedral),
    ((1, 6), GroupTag::Icosahedral),
    ((3, 10), GroupTag::Icosahedral),
];

const WEIERSTRASS_TABLE: [((i64, i64), GroupTag, GroupTag); 5] = [
    ((1, 4), GroupTag::Tetrahedral, GroupTag::Octahedral),
    ((1, 6), GroupTag::Octahedral, GroupTag::Octahedral),
    ((1, 10), GroupTag::Icosahedral, GroupTag::Icosahedral),
    ((1, 6), GroupTag::Icosahedral, GroupTag::Icosahedral),
    ((3, 10), GroupTag::Icosahedral, GroupTag::Icosahedral),
];

/// Groups the Lamé operator on the projective line can have, given `ℓ`.
pub fn classify_algebraic(ell: &BigRational) -> ClassificationVerdict {
    let classical = is_classical(ell);
    let d = residue(ell);
    let admissible = if classical {
        Vec::new()
    } else {
        ALGEBRAIC_TABLE
            .iter()
            .filter(|((n, m), _)| d == q(*n, *m))
            .map(|(_, g)| Admissible {
                residue: d.clone(),
                base_group: *g,
                curve_group: None,
            })
            .collect()
    };
    ClassificationVerdict {
        scope: Scope::AlgebraicForm,
        ell: ell.clone(),
        admissible,
        classical,
    }
}

/// `(curve group, base group)` alternatives for the Weierstrass form.
pub fn classify_weierstrass(ell: &BigRational) -> ClassificationVerdict {
    let classical = is_classical(ell);
    let d = residue(ell);
    let admissible = if classical {
        Vec::new()
    } else {
        WEIERSTRASS_TABLE
            .iter()
            .filter(|((n, m), _, _)| d == q(*n, *m))
            .map(|(_, c, b)| Admissible {
                residue: d.clone(),
                base_group: *b,
                curve_group: Some(*c),
            })
            .collect()
    };
    ClassificationVerdict {
        scope: Scope::WeierstrassForm,
        ell: ell.clone(),
        admissible,
        classical,
    }
}

/// A Lamé operator with known finite monodromy and an explicit solution basis.
#[derive(Clone, Debug, PartialEq)]
pub struct KnownInstance {
    /// Solution-case label: `1`, `2a`, `2b`, `2c`, `3`.
    pub label: &'static str,
    pub params: LameParameters,
    pub base_group: GroupTag,
    pub curve_group: GroupTag,
}

pub fn known_instances() -> Vec<KnownInstance> {
    let row = |label, ell: (i64, i64), b: (i64, i64), g2: (i64, i64), g3: (i64, i64), base, curve| KnownInstance {
        label,
        params: LameParameters::new(q(ell.0, ell.1), q(b.0, b.1), q(g2.0, g2.1), q(g3.0, g3.1))
            .expect("nonzero discriminant"),
        base_group: base,
        curve_group: curve,
    };
    use GroupTag::*;
    vec![
        row("1", (1, 6), (0, 1), (4, 1), (0, 1), Octahedral, Octahedral),
        row("2a", (1, 4), (0, 1), (0, 1), (4, 1), Octahedral, Tetrahedral),
        row("2b", (1, 10), (0, 1), (0, 1), (4, 1), Icosahedral, Icosahedral),
        row("2c", (7, 10), (0, 1), (0, 1), (4, 1), Icosahedral, Icosahedral),
        row("3", (1, 6), (-1, 9), (80, 3), (-80, 3), Icosahedral, Icosahedral),
    ]
}
