//! Explicit algebraic solutions of the five Lamé instances.
//!
//! Each instance comes with a rational map `χ` and a polyhedral function
//! `z(w)` such that `τ(x)`, a root of `z(τ) = χ(x)`, is a ratio of
//! solutions. The pair
//!
//! ```text
//! u₁ = P^{-1/4} (dτ/dx)^{-1/2},   u₂ = τ u₁
//! ```
//!
//! then spans the solution space. Derivatives of `τ` come from
//! differentiating `z(τ(x)) = χ(x)` implicitly, so the residual check does
//! not rely on finite differences.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{q, Poly, RatFunc};
use crate::fuchsian::{DifferentialOperator, WronskianData};
use crate::lame::{known_instances, LameParameters};
use crate::numeric::poly_taylor;
use crate::pullback::named_map;
use crate::schwarz::{fiber_roots, PolyhedralMap, SchwarzEntry};

/// Roots closer than this (relative to `1 + |τ|`) count as a collision.
const COLLISION: f64 = 1e-7;

/// `c · ∏ fᵢ^{mᵢ}` with squarefree `fᵢ`, evaluated through logarithmic
/// derivatives so values near zeros and poles keep their relative accuracy.
#[derive(Clone, Debug)]
struct Factored {
    constant: Complex64,
    factors: Vec<(Vec<Complex64>, i32)>,
}

impl Factored {
    fn new(f: &RatFunc) -> Self {
        let mut factors = Vec::new();
        for (p, sign) in [(f.num(), 1i32), (f.den(), -1)] {
            for (a, m) in p.squarefree_decomposition() {
                factors.push((a.to_complex_coeffs(), sign * m as i32));
            }
        }
        let lc = f.num().leading() / f.den().leading();
        Factored {
            constant: Complex64::new(crate::exactalg::field::rational_to_f64(&lc), 0.0),
            factors,
        }
    }

    /// Value and first three derivatives; `None` on a zero or pole.
    fn jet(&self, w: Complex64) -> Option<[Complex64; 4]> {
        let mut value = self.constant;
        let (mut l0, mut l1, mut l2) = (Complex64::default(), Complex64::default(), Complex64::default());
        for (coeffs, m) in &self.factors {
            let t = poly_taylor(coeffs, w, 3);
            if t[0].norm() == 0.0 {
                return None;
            }
            let r1 = t[1] / t[0];
            let r2 = t[2] * 2.0 / t[0];
            let r3 = t[3] * 6.0 / t[0];
            let m_ = *m as f64;
            value *= t[0].powi(*m);
            l0 += r1 * m_;
            l1 += (r2 - r1 * r1) * m_;
            l2 += (r3 - r2 * r1 * 3.0 + r1 * r1 * r1 * 2.0) * m_;
        }
        let out = [
            value,
            value * l0,
            value * (l1 + l0 * l0),
            value * (l2 + l0 * l1 * 3.0 + l0 * l0 * l0),
        ];
        out.iter().all(|c| c.is_finite()).then_some(out)
    }
}

#[derive(Clone, Debug)]
pub struct SolutionBasis {
    pub label: &'static str,
    pub params: LameParameters,
    pub operator: DifferentialOperator,
    /// `w(L)^{1/2}`, the `P^{-1/4}` factor.
    pub prefactor: WronskianData,
    pub xi: RatFunc,
    pub polyhedral: SchwarzEntry,
    /// Map applied after `ξ` before inverting the polyhedral function.
    pub extra_composition: Option<RatFunc>,
    chain: RatFunc,
    chain_factored: Factored,
    z_factored: Factored,
}

impl SolutionBasis {
    /// The composite `χ` with `z(τ) = χ(x)`.
    pub fn chain(&self) -> &RatFunc {
        &self.chain
    }

    pub fn degree(&self) -> usize {
        self.polyhedral.degree()
    }

    fn chain_at(&self, x0: Complex64) -> Result<[Complex64; 4]> {
        self.chain_factored
            .jet(x0)
            .ok_or_else(|| Error::SingularPoint(format!("the chain map has a zero or pole at {x0}")))
    }

    /// Newton refinement of a root of `z(w) = target`.
    fn polish(&self, mut w: Complex64, target: Complex64) -> Complex64 {
        for _ in 0..8 {
            let Some(z) = self.z_factored.jet(w) else { break };
            if z[1].norm() == 0.0 {
                break;
            }
            let dw = (z[0] - target) / z[1];
            if !dw.is_finite() {
                break;
            }
            w -= dw;
            if dw.norm() <= 1e-16 * (1.0 + w.norm()) {
                break;
            }
        }
        w
    }

    /// All values of `τ` over `x0`, refined and sorted by argument, then
    /// modulus.
    pub fn branches(&self, x0: Complex64) -> Result<Vec<Complex64>> {
        let c = self.chain_at(x0)?;
        let mut roots: Vec<Complex64> = fiber_roots(&self.polyhedral, c[0], 1e-12)?
            .into_iter()
            .map(|w| self.polish(w, c[0]))
            .collect();
        roots.sort_by(crate::numeric::arg_modulus_cmp);
        Ok(roots)
    }

    /// Number of distinct values of `τ` over `x0`.
    pub fn branch_count(&self, x0: Complex64) -> Result<usize> {
        let roots = self.branches(x0)?;
        let mut n = 0;
        for (i, r) in roots.iter().enumerate() {
            if roots[..i].iter().all(|s| (s - r).norm() > COLLISION * (1.0 + r.norm())) {
                n += 1;
            }
        }
        Ok(n)
    }
}

pub fn solution_basis(label: &str) -> Result<SolutionBasis> {
    let inst = known_instances()
        .into_iter()
        .find(|i| i.label == label)
        .ok_or_else(|| Error::InvalidInput(format!("unknown solution case '{label}'")))?;
    let named = |n: &str| named_map(n).expect("built-in map").xi;
    let (xi, polyhedral, extra) = match inst.label {
        "1" => (named("harmonic-quadratic"), SchwarzEntry::octahedral(), None),
        "2a" => (named("equianharmonic-cubic"), SchwarzEntry::octahedral(), None),
        "2b" => (named("equianharmonic-cubic"), SchwarzEntry::icosahedral(), None),
        "2c" => (
            named("equianharmonic-cubic"),
            SchwarzEntry::icosahedral(),
            Some(named("klein-caseXIV")),
        ),
        _ => (named("prop32-quintic"), SchwarzEntry::icosahedral(), None),
    };
    let chain = match &extra {
        Some(outer) => outer.compose(&xi),
        None => xi.clone(),
    };
    let operator = inst.params.operator();
    let prefactor = operator.wronskian()?.power(&q(1, 2));
    let z = match &polyhedral.polyhedral {
        PolyhedralMap::Rational(f) => f.clone(),
        PolyhedralMap::SqrtMinusThree(_) => {
            return Err(Error::Unsupported("solution bases use rational polyhedral maps".into()))
        }
    };
    Ok(SolutionBasis {
        label: inst.label,
        params: inst.params,
        operator,
        prefactor,
        xi,
        polyhedral,
        extra_composition: extra,
        chain_factored: Factored::new(&chain),
        chain,
        z_factored: Factored::new(&z),
    })
}

pub fn solution_bases() -> Vec<SolutionBasis> {
    known_instances()
        .iter()
        .map(|i| solution_basis(i.label).expect("known label"))
        .collect()
}

/// Values and first two derivatives of a solution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub value: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointEvaluation {
    pub x0: Complex64,
    pub branch_index: usize,
    pub tau: Complex64,
    pub dtau: Complex64,
    pub u1: Jet,
    pub u2: Jet,
    /// Relative residuals of `u₁`, `u₂` against the instance's operator.
    pub residuals: (f64, f64),
    /// `|z(τ) - χ(x0)| / (1 + |χ(x0)|)`.
    pub defining_defect: f64,
}

impl PointEvaluation {
    /// `u₁ u₂' - u₂ u₁'`.
    pub fn wronskian(&self) -> Complex64 {
        self.u1.value * self.u2.d1 - self.u2.value * self.u1.d1
    }
}

/// Evaluate the basis on branch `branch` of `τ` at `x0`.
///
/// Branches are the roots of `z(τ) = χ(x0)` sorted by argument, then
/// modulus.
pub fn evaluate(basis: &SolutionBasis, x0: Complex64, branch: usize, tol: f64) -> Result<PointEvaluation> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let p = basis.params.cubic();
    if p.eval_complex(x0).norm() <= tol {
        return Err(Error::SingularPoint(format!("{x0} is a root of the cubic")));
    }
    let c = basis.chain_at(x0)?;
    let roots = basis.branches(x0)?;
    if branch >= roots.len() {
        return Err(Error::InvalidInput(format!(
            "branch {branch} out of range: {} branches over {x0}",
            roots.len()
        )));
    }
    let tau = roots[branch];
    let sep = roots
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != branch)
        .map(|(_, r)| (r - tau).norm())
        .fold(f64::INFINITY, f64::min);
    if sep <= COLLISION.max(tol) * (1.0 + tau.norm()) {
        return Err(Error::BranchCollision(format!(
            "branch {branch} at {x0} is within {sep:e} of another branch"
        )));
    }
    let z = basis
        .z_factored
        .jet(tau)
        .ok_or_else(|| Error::BranchCollision(format!("τ hits a vertex of the polyhedral map at {x0}")))?;
    let d1 = c[1] / z[1];
    let d2 = (c[2] - z[2] * d1 * d1) / z[1];
    let d3 = (c[3] - z[3] * d1 * d1 * d1 - z[2] * d1 * d2 * 3.0) / z[1];
    if !(d1.is_finite() && d2.is_finite() && d3.is_finite()) || d1.norm() == 0.0 {
        return Err(Error::BranchCollision(format!("τ is not locally invertible at {x0}")));
    }
    let defining_defect = (z[0] - c[0]).norm() / (1.0 + c[0].norm());

    // u₁ = f·g with f = P^{-1/4}, g = τ'^{-1/2}; work with log-derivatives
    let f = basis.prefactor.eval_power(x0, 1.0);
    let (lf, dlf) = log_derivatives(&basis.prefactor, x0);
    let g = d1.sqrt().inv();
    let lg = -d2 / (d1 * 2.0);
    let dlg = -(d3 * d1 - d2 * d2) / (d1 * d1 * 2.0);
    let l = lf + lg;
    let dl = dlf + dlg;
    let v = f * g;
    let u1 = Jet {
        value: v,
        d1: v * l,
        d2: v * (dl + l * l),
    };
    let u2 = Jet {
        value: tau * u1.value,
        d1: d1 * u1.value + tau * u1.d1,
        d2: d2 * u1.value + d1 * u1.d1 * 2.0 + tau * u1.d2,
    };
    let mut ev = PointEvaluation {
        x0,
        branch_index: branch,
        tau,
        dtau: d1,
        u1,
        u2,
        residuals: (0.0, 0.0),
        defining_defect,
    };
    ev.residuals = residual(&basis.operator, &ev);
    Ok(ev)
}

/// `Σ e f'/f` and its derivative for a factored power product.
fn log_derivatives(w: &WronskianData, x0: Complex64) -> (Complex64, Complex64) {
    let mut l = Complex64::default();
    let mut dl = Complex64::default();
    for (f, e) in &w.factors {
        let e = crate::exactalg::field::rational_to_f64(e);
        let d = f.derivative();
        let v = f.eval_complex(x0);
        let v1 = d.eval_complex(x0);
        let v2 = d.derivative().eval_complex(x0);
        l += v1 / v * e;
        dl += (v2 * v - v1 * v1) / (v * v) * e;
    }
    (l, dl)
}

fn jet_residual(l: &DifferentialOperator, x0: Complex64, u: &Jet) -> f64 {
    let Some((a, b)) = l.eval_coeffs(x0) else {
        return f64::INFINITY;
    };
    let r = u.d2 + a * u.d1 + b * u.value;
    let scale = u.value.norm().max(u.d1.norm()).max(u.d2.norm());
    if scale == 0.0 {
        return r.norm();
    }
    r.norm() / scale
}

/// `|L uᵢ| / max(|uᵢ|, |uᵢ'|, |uᵢ''|)` for both basis elements.
pub fn residual(l: &DifferentialOperator, ev: &PointEvaluation) -> (f64, f64) {
    (jet_residual(l, ev.x0, &ev.u1), jet_residual(l, ev.x0, &ev.u2))
}

/// Follow every branch of `τ` along a polygonal path and return the
/// permutation of branch indices between its endpoints.
pub fn track_branches(basis: &SolutionBasis, path: &[Complex64]) -> Result<Vec<usize>> {
    let first = *path
        .first()
        .ok_or_else(|| Error::InvalidInput("empty path".into()))?;
    let start = basis.branches(first)?;
    let mut current = start.clone();
    for seg in path.windows(2) {
        current = track_segment(basis, seg[0], seg[1], current, 0)?;
    }
    let last = *path.last().expect("nonempty");
    let end = basis.branches(last)?;
    current
        .iter()
        .map(|t| nearest_unique(&end, *t).map(|(i, _)| i))
        .collect()
}

/// Index of the nearest root, if it is clearly nearer than the runner-up.
fn nearest_unique(roots: &[Complex64], t: Complex64) -> Result<(usize, Complex64)> {
    let mut best = (usize::MAX, f64::INFINITY);
    let mut second = f64::INFINITY;
    for (i, r) in roots.iter().enumerate() {
        let d = (r - t).norm();
        if d < best.1 {
            second = best.1;
            best = (i, d);
        } else if d < second {
            second = d;
        }
    }
    if best.0 == usize::MAX || best.1 * 4.0 > second {
        return Err(Error::BranchCollision(format!("ambiguous continuation of τ near {t}")));
    }
    Ok((best.0, roots[best.0]))
}

fn track_segment(
    basis: &SolutionBasis,
    a: Complex64,
    b: Complex64,
    taus: Vec<Complex64>,
    depth: usize,
) -> Result<Vec<Complex64>> {
    let roots = basis.branches(b)?;
    let attempt: Result<Vec<Complex64>> = taus.iter().map(|t| nearest_unique(&roots, *t).map(|r| r.1)).collect();
    if let Ok(next) = attempt {
        let mut idx: Vec<usize> = next
            .iter()
            .map(|t| roots.iter().position(|r| r == t).expect("taken from roots"))
            .collect();
        idx.sort_unstable();
        idx.dedup();
        if idx.len() == taus.len() {
            return Ok(next);
        }
    }
    if depth >= 30 {
        return Err(Error::BranchCollision(format!("could not follow τ from {a} to {b}")));
    }
    let mid = (a + b) * 0.5;
    let half = track_segment(basis, a, mid, taus, depth + 1)?;
    track_segment(basis, mid, b, half, depth + 1)
}

/// Whether the branches of `τ` reduce over the function field of the curve
/// `y² = 4x³ - g₂x - g₃`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BranchReduction {
    pub label: String,
    pub reduced: bool,
    pub branches_over_line: usize,
    pub branches_over_curve: usize,
    pub factor_witness: Option<String>,
}

/// Squarefree decomposition shows every root with even multiplicity.
fn is_square_up_to_constant(f: &RatFunc) -> bool {
    let even = |p: &Poly| p.squarefree_decomposition().iter().all(|(_, m)| m % 2 == 0);
    even(f.num()) && even(f.den())
}

pub fn curve_branch_reduction(label: &str) -> Result<BranchReduction> {
    let basis = solution_basis(label)?;
    let PolyhedralMap::Rational(z) = basis.polyhedral.polyhedral.clone() else {
        return Err(Error::Unsupported("solution bases use rational polyhedral maps".into()));
    };
    let deg = basis.degree();
    match label {
        "2a" => {
            // ξ = 1 - x³, so x³ = 1 - z(τ): an odd-degree extension of C(τ),
            // and y² = 4x³ - 4 = -4 z(τ) must already be a square in C(τ).
            let p = basis.params.cubic().scale(&q(4, 1));
            let one_minus_xcubed = Poly::from_ints(&[1, 0, 0, -1]);
            if p != one_minus_xcubed.scale(&q(-4, 1)) {
                return Err(Error::InvalidInput("unexpected curve for case 2a".into()));
            }
            let y2 = z.scale(&q(-4, 1));
            let reduced = is_square_up_to_constant(&y2);
            let n = Poly::from_ints(&[1, 0, 0, 0, -33, 0, 0, 0, -33, 0, 0, 0, 1]);
            let d = &Poly::monomial(q(1, 1), 2) * &Poly::from_ints(&[-1, 0, 0, 0, 1]).pow(2);
            let root = RatFunc::new(n, d)?;
            let identity = root.pow(2)?.scale(&q(1, 27)) == y2;
            let witness = identity.then(|| {
                "1 - x^3 = -y^2/4 on y^2 = 4x^3 - 4, and \
                 (t^12 - 33t^8 - 33t^4 + 1)/(3*sqrt(3)*t^2*(t^4 - 1)^2) = ±y"
                    .to_string()
            });
            Ok(BranchReduction {
                label: label.into(),
                reduced: reduced && identity,
                branches_over_line: deg,
                branches_over_curve: if reduced { deg / 2 } else { deg },
                factor_witness: witness,
            })
        }
        "1" => {
            // ξ = (x² - 1)/x², so x² = 1/(1 - z(τ)). If 1 - z(τ) is not a
            // square, C(τ, x) is quadratic over C(τ) and y² = 4x³ z(τ) has a
            // nonzero x-component, so y is not in C(τ, x).
            let d = &RatFunc::one() - &z;
            let reduced = is_square_up_to_constant(&d);
            Ok(BranchReduction {
                label: label.into(),
                reduced,
                branches_over_line: deg,
                branches_over_curve: if reduced { deg / 2 } else { deg },
                factor_witness: None,
            })
        }
        other => Err(Error::Unsupported(format!(
            "curve branch reduction is implemented for cases 1 and 2a, not '{other}'"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_ratfunc;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn defining_equations() {
        let b = solution_basis("1").unwrap();
        assert_eq!(b.chain(), &parse_ratfunc("(x^2-1)/x^2").unwrap());
        let b = solution_basis("2c").unwrap();
        let s = parse_ratfunc("1-x^3").unwrap();
        let want = parse_ratfunc("s(157464s^3-352107s^2+708750s-546875)^2/(189s-125)^5")
            .unwrap()
            .compose(&s);
        assert_eq!(b.chain(), &want);
        let b = solution_basis("3").unwrap();
        assert_eq!(b.chain(), &parse_ratfunc("(3x^3-20x+20)(2x-5)^2/(12(x-1)^5)").unwrap());
        assert!(solution_basis("4").is_err());
    }

    #[test]
    fn branch_counts() {
        assert_eq!(solution_basis("1").unwrap().branch_count(c(2.0, 0.0)).unwrap(), 24);
        for label in ["2a", "2b", "2c", "3"] {
            let b = solution_basis(label).unwrap();
            assert_eq!(b.branch_count(c(0.3, 0.7)).unwrap(), b.degree(), "{label}");
        }
    }

    #[test]
    fn case_three_all_branches() {
        let b = solution_basis("3").unwrap();
        for k in 0..60 {
            let ev = evaluate(&b, c(3.0, 0.0), k, 1e-12).unwrap();
            assert!(ev.residuals.0 < 1e-8 && ev.residuals.1 < 1e-8, "branch {k}: {:?}", ev.residuals);
            assert!(ev.defining_defect < 1e-9);
        }
    }

    #[test]
    fn residuals_and_wronskian_on_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for b in solution_bases() {
            let mut done = 0;
            while done < 8 {
                let x0 = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                let k = rng.gen_range(0..b.degree());
                let Ok(ev) = evaluate(&b, x0, k, 1e-12) else { continue };
                assert!(ev.residuals.0 < 1e-8 && ev.residuals.1 < 1e-8, "{} at {x0}", b.label);
                let w = b.prefactor.eval_power(x0, 2.0);
                assert!((ev.wronskian() - w).norm() <= 1e-6 * w.norm(), "{}", b.label);
                done += 1;
            }
        }
    }

    #[test]
    fn perturbed_operator_residual_matches_closed_form() {
        // shifting B by δ adds -δ u / (4P) to L u
        let b = solution_basis("3").unwrap();
        let x0 = c(3.0, 0.0);
        let ev = evaluate(&b, x0, 0, 1e-12).unwrap();
        let p = LameParameters::new(b.params.ell.clone(), q(-1, 9) + q(1, 100), b.params.g2.clone(), b.params.g3.clone())
            .unwrap();
        let r = residual(&p.operator(), &ev);
        let four_p = b.params.cubic().eval_complex(x0) * 4.0;
        for u in [ev.u1, ev.u2] {
            let scale = u.value.norm().max(u.d1.norm()).max(u.d2.norm());
            let want = 0.01 / four_p.norm() * u.value.norm() / scale;
            let got = if u == ev.u1 { r.0 } else { r.1 };
            assert!((got - want).abs() <= 1e-6 * want, "{got} vs {want}");
        }
    }

    #[test]
    fn trivial_residual() {
        let d2 = DifferentialOperator::normal(RatFunc::zero());
        let ev = PointEvaluation {
            x0: c(0.5, 0.0),
            branch_index: 0,
            tau: c(0.0, 0.0),
            dtau: c(1.0, 0.0),
            u1: Jet { value: c(1.0, 0.0), d1: c(0.0, 0.0), d2: c(0.0, 0.0) },
            u2: Jet { value: c(0.5, 0.0), d1: c(1.0, 0.0), d2: c(0.0, 0.0) },
            residuals: (0.0, 0.0),
            defining_defect: 0.0,
        };
        assert_eq!(residual(&d2, &ev), (0.0, 0.0));
    }

    #[test]
    fn singular_inputs() {
        let b = solution_basis("2a").unwrap();
        assert!(matches!(evaluate(&b, c(1.0, 0.0), 0, 1e-12), Err(Error::SingularPoint(_))));
        assert!(evaluate(&b, c(0.5, 0.5), 24, 1e-12).is_err());
    }

    #[test]
    fn loops_around_branch_points_swap_in_pairs() {
        for label in ["1", "2a", "3"] {
            let b = solution_basis(label).unwrap();
            let pts = crate::monodromy::operator_singularities(&b.operator, 1e-12).unwrap();
            let base = c(0.37, 2.71);
            for e in &pts {
                let r = 0.1;
                let dir = (base - e) / (base - e).norm();
                let mut path = vec![base];
                for k in 0..=64 {
                    path.push(e + dir * Complex64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / 64.0));
                }
                path.push(base);
                let perm = track_branches(&b, &path).unwrap();
                assert!(perm.iter().enumerate().all(|(i, &j)| j != i && perm[j] == i), "{label} around {e}");
            }
        }
    }

    #[test]
    fn curve_reduction() {
        let r = curve_branch_reduction("2a").unwrap();
        assert!(r.reduced);
        assert_eq!(r.branches_over_curve, 12);
        assert!(r.factor_witness.is_some());
        let r = curve_branch_reduction("1").unwrap();
        assert!(!r.reduced);
        assert_eq!(r.branches_over_curve, 24);
        assert!(matches!(curve_branch_reduction("3"), Err(Error::Unsupported(_))));
    }
}
