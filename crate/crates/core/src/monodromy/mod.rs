//! Numerical monodromy of second-order Fuchsian operators.
//!
//! Generators are keyhole loops from a common basepoint: a straight ray to
//! a small circle around one singular point, once around counterclockwise,
//! and back. Ordered by the direction of their rays as seen from the
//! basepoint, they compose to the large counterclockwise circle through the
//! basepoint; that circle is integrated separately to measure the product
//! defect. The generator at infinity is the inverse of the product of the
//! finite ones.

pub mod continuation;
pub mod group;
pub mod matrix;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use continuation::{analytic_continue, Integrator, LoopPath};
pub use group::{projective_closure, Closure, GroupVerdict};
pub use matrix::Matrix2;

use crate::error::{Error, Result};
use crate::exactalg::Poly;
use crate::fuchsian::DifferentialOperator;
use crate::numeric::polynomial_roots;

/// Tolerances and limits for a monodromy run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase")]
pub struct MonodromyConfig {
    pub integration_tol: f64,
    pub match_tol: f64,
    pub closure_cap: usize,
    pub root_tol: f64,
}

impl Default for MonodromyConfig {
    fn default() -> Self {
        MonodromyConfig {
            integration_tol: 1e-12,
            match_tol: 1e-6,
            closure_cap: 400,
            root_tol: 1e-12,
        }
    }
}

/// Numerical roots of a squarefree polynomial.
pub fn singular_locations_numeric(p: &Poly, tol: f64) -> Result<Vec<Complex64>> {
    let mut r = polynomial_roots(&p.to_complex_coeffs(), tol)?;
    sort_points(&mut r);
    Ok(r)
}

/// Increasing real part, then imaginary part.
fn sort_points(v: &mut [Complex64]) {
    v.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
}

/// Finite singular points of an operator: poles of its coefficients.
pub fn operator_singularities(l: &DifferentialOperator, tol: f64) -> Result<Vec<Complex64>> {
    let den = &l.a.den().squarefree_part() * &l.b.den().squarefree_part();
    let g = den.squarefree_part();
    singular_locations_numeric(&g, tol)
}

/// Loop geometry shared by all generators of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopLayout {
    pub basepoint: Complex64,
    pub center: Complex64,
    /// Singular points in path-composition order.
    pub ordered: Vec<Complex64>,
    pub radii: Vec<f64>,
}

fn ray_clearance(base: Complex64, pts: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, p) in pts.iter().enumerate() {
        for (j, q) in pts.iter().enumerate() {
            if i != j {
                best = best.min(continuation::segment_distance(*q, base, *p));
            }
        }
    }
    best
}

/// Basepoint on the real axis to the right of the singular points, rotated
/// about their centroid when a ray would pass too close to another point.
pub fn loop_layout(points: &[Complex64]) -> Result<LoopLayout> {
    if points.is_empty() {
        return Err(Error::InvalidInput("no finite singular points".into()));
    }
    let n = points.len() as f64;
    let center = points.iter().sum::<Complex64>() / n;
    let spread = points.iter().map(|p| (p - center).norm()).fold(0.0, f64::max);
    let radius = 2.0 * spread + 1.0;
    let mut min_sep = f64::INFINITY;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            min_sep = min_sep.min((p - q).norm());
        }
    }
    let wanted = if min_sep.is_finite() { 0.2 * min_sep } else { 1.0 };
    let mut best: Option<(f64, Complex64)> = None;
    for k in 0..720 {
        // 0, +δ, -δ, +2δ, ...
        let step = ((k + 1) / 2) as f64 * PI / 360.0;
        let theta = if k % 2 == 1 { step } else { -step };
        let base = center + Complex64::from_polar(radius, theta);
        let score = ray_clearance(base, points);
        if score >= wanted {
            best = Some((score, base));
            break;
        }
        if best.is_none_or(|(s, _)| score > s) {
            best = Some((score, base));
        }
    }
    let (_, base) = best.expect("at least one candidate");
    let mut ordered = points.to_vec();
    let axis = center - base;
    let angle = |p: &Complex64| ((p - base) / axis).arg();
    // increasing angle: the big counterclockwise loop meets the rays in this order
    ordered.sort_by(|a, b| angle(a).partial_cmp(&angle(b)).unwrap_or(std::cmp::Ordering::Equal));
    let radii = ordered
        .iter()
        .map(|p| {
            let nn = points
                .iter()
                .filter(|q| *q != p)
                .map(|q| (p - q).norm())
                .fold(f64::INFINITY, f64::min);
            if nn.is_finite() {
                (0.4 * nn).min(0.5)
            } else {
                0.5
            }
        })
        .collect();
    Ok(LoopLayout {
        basepoint: base,
        center,
        ordered,
        radii,
    })
}

/// Result of a monodromy computation.
#[derive(Clone, Debug)]
pub struct MonodromyReport {
    pub basepoint: Complex64,
    /// Labels of the generators: the finite singular points by increasing
    /// real then imaginary part, then `infinity`.
    pub labels: Vec<String>,
    pub points: Vec<Complex64>,
    /// Transfer matrices in the basis `(u, u')` at the basepoint.
    pub generators: Vec<Matrix2>,
    /// Indices into `generators` in path-composition order; their product
    /// (first applied rightmost) is scalar.
    pub product_order: Vec<usize>,
    pub projective_orders: Vec<Option<usize>>,
    pub group: GroupVerdict,
    pub closure_size: usize,
    pub max_residual: f64,
    pub product_defect: f64,
    pub config: MonodromyConfig,
}

/// Monodromy generators, their projective closure and the recognized group.
pub fn monodromy_group(l: &DifferentialOperator, cfg: &MonodromyConfig) -> Result<MonodromyReport> {
    let points = operator_singularities(l, cfg.root_tol)?;
    let layout = loop_layout(&points)?;
    monodromy_with_layout(l, &points, &layout, cfg)
}

pub fn monodromy_with_layout(
    l: &DifferentialOperator,
    points: &[Complex64],
    layout: &LoopLayout,
    cfg: &MonodromyConfig,
) -> Result<MonodromyReport> {
    let mut paths: Vec<LoopPath> = layout
        .ordered
        .iter()
        .zip(&layout.radii)
        .map(|(p, r)| LoopPath::keyhole(layout.basepoint, *p, *r))
        .collect();
    paths.push(LoopPath::circle(layout.basepoint, layout.center, 256));
    let results: Vec<Result<(Matrix2, f64)>> = paths
        .par_iter()
        .map(|path| {
            let mut it = Integrator::new(l, points.to_vec(), cfg.integration_tol);
            let m = it.transfer(path)?;
            Ok((m, it.max_error))
        })
        .collect();
    let mut mats = Vec::with_capacity(results.len());
    let mut max_residual: f64 = 0.0;
    for r in results {
        let (m, e) = r?;
        mats.push(m);
        max_residual = max_residual.max(e);
    }
    let big = mats.pop().expect("big loop present");
    // path order γ_1 then γ_2 ...: matrix M_n ⋯ M_1
    let product = mats.iter().fold(Matrix2::identity(), |acc, m| *m * acc);
    let product_defect = product.max_abs_diff(&big) / big.max_abs().max(1.0);
    let m_inf = product
        .inverse()
        .ok_or_else(|| Error::IllConditioned("singular product of generators".into()))?;

    // report order: finite points sorted, then infinity
    let mut sorted: Vec<(Complex64, Matrix2)> =
        layout.ordered.iter().copied().zip(mats.iter().copied()).collect();
    sorted.sort_by(|a, b| {
        a.0.re
            .partial_cmp(&b.0.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.0.im.partial_cmp(&b.0.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    let mut generators: Vec<Matrix2> = sorted.iter().map(|s| s.1).collect();
    generators.push(m_inf);
    let mut pts: Vec<Complex64> = sorted.iter().map(|s| s.0).collect();
    let mut labels: Vec<String> = pts.iter().map(|p| format!("{:.6}{:+.6}i", p.re, p.im)).collect();
    labels.push("infinity".into());
    let mut product_order: Vec<usize> = layout
        .ordered
        .iter()
        .map(|p| pts.iter().position(|q| q == p).expect("same points"))
        .collect();
    product_order.push(pts.len());
    pts.push(Complex64::new(f64::INFINITY, 0.0));

    let projective_orders = generators
        .iter()
        .map(|g| g.projective_order(cfg.match_tol, 120))
        .collect();
    let closure = projective_closure(&generators, cfg.match_tol, cfg.closure_cap)?;
    let group = closure.recognize(cfg.match_tol);
    Ok(MonodromyReport {
        basepoint: layout.basepoint,
        labels,
        points: pts,
        generators,
        product_order,
        projective_orders,
        group,
        closure_size: closure.elements.len(),
        max_residual,
        product_defect,
        config: cfg.clone(),
    })
}

/// Projective monodromy of the double cover branched at all generator
/// points: the closure of all products `gᵢ gⱼ`.
pub fn even_subgroup(report: &MonodromyReport) -> Result<MonodromyReport> {
    let g = &report.generators;
    let mut gens = Vec::new();
    let mut labels = Vec::new();
    for i in 0..g.len() {
        for j in 0..g.len() {
            if i != j {
                gens.push(g[i] * g[j]);
                labels.push(format!("{}*{}", report.labels[i], report.labels[j]));
            }
        }
    }
    let cfg = &report.config;
    let closure = projective_closure(&gens, cfg.match_tol, cfg.closure_cap)?;
    let group = closure.recognize(cfg.match_tol);
    let projective_orders = gens
        .iter()
        .map(|m| m.projective_order(cfg.match_tol, 120))
        .collect();
    Ok(MonodromyReport {
        basepoint: report.basepoint,
        labels,
        points: Vec::new(),
        generators: gens,
        product_order: Vec::new(),
        projective_orders,
        group,
        closure_size: closure.elements.len(),
        max_residual: report.max_residual,
        product_defect: report.product_defect,
        config: cfg.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::{q, qi};
    use crate::lame::LameParameters;
    use crate::schwarz::GroupTag;

    fn lame(ell: (i64, i64), b: (i64, i64), g2: (i64, i64), g3: (i64, i64)) -> DifferentialOperator {
        LameParameters::new(q(ell.0, ell.1), q(b.0, b.1), q(g2.0, g2.1), q(g3.0, g3.1))
            .unwrap()
            .operator()
    }

    #[test]
    fn singular_locations() {
        let r = singular_locations_numeric(&Poly::from_ints(&[0, -1, 0, 1]), 1e-12).unwrap();
        for (a, b) in r.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((a - Complex64::new(b, 0.0)).norm() < 1e-12);
        }
        let p = Poly::from_ints(&[20, -20, 0, 3]);
        let r = singular_locations_numeric(&p, 1e-12).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|z| p.eval_complex(*z).norm() < 1e-10));
    }

    #[test]
    fn contractible_loop_is_identity() {
        let l = lame((1, 6), (0, 1), (4, 1), (0, 1));
        let pts = operator_singularities(&l, 1e-12).unwrap();
        let path = LoopPath::keyhole(Complex64::new(3.0, 0.5), Complex64::new(2.0, 1.0), 0.4);
        let m = analytic_continue(&l, &pts, &path, 1e-12).unwrap();
        assert!(m.max_abs_diff(&Matrix2::identity()) < 1e-9);
    }

    #[test]
    fn harmonic_lame_is_octahedral() {
        let l = lame((1, 6), (0, 1), (4, 1), (0, 1));
        let rep = monodromy_group(&l, &MonodromyConfig::default()).unwrap();
        assert!(rep.product_defect < 1e-8, "defect {}", rep.product_defect);
        assert_eq!(&rep.projective_orders[..3], &[Some(2), Some(2), Some(2)]);
        assert_eq!(rep.projective_orders[3], Some(3));
        assert_eq!(rep.group, GroupVerdict::Finite(GroupTag::Octahedral));
        assert_eq!(rep.closure_size, 24);
        let even = even_subgroup(&rep).unwrap();
        assert_eq!(even.closure_size, 24);
    }

    #[test]
    fn non_algebraic_ell_overflows() {
        let l = LameParameters::new(q(1, 3), qi(0), qi(4), qi(0)).unwrap().operator();
        let rep = monodromy_group(&l, &MonodromyConfig::default()).unwrap();
        assert_eq!(rep.group, GroupVerdict::InfiniteOrUndetermined);
    }

    #[test]
    fn basepoint_change_keeps_group() {
        let l = lame((1, 4), (0, 1), (0, 1), (4, 1));
        let pts = operator_singularities(&l, 1e-12).unwrap();
        let mut layout = loop_layout(&pts).unwrap();
        let a = monodromy_with_layout(&l, &pts, &layout, &MonodromyConfig::default()).unwrap();
        let c = layout.center;
        layout.basepoint = c + Complex64::from_polar(3.5, 2.0);
        let ax = c - layout.basepoint;
        let base = layout.basepoint;
        layout
            .ordered
            .sort_by(|x, y| ((x - base) / ax).arg().partial_cmp(&((y - base) / ax).arg()).unwrap());
        let b = monodromy_with_layout(&l, &pts, &layout, &MonodromyConfig::default()).unwrap();
        assert_eq!(a.group, b.group);
        assert_eq!(a.group, GroupVerdict::Finite(GroupTag::Octahedral));
        assert!(b.product_defect < 1e-8);
        assert_eq!(even_subgroup(&a).unwrap().group, GroupVerdict::Finite(GroupTag::Tetrahedral));
    }

    #[test]
    fn known_instances_groups() {
        for inst in crate::lame::known_instances() {
            let rep = monodromy_group(&inst.params.operator(), &MonodromyConfig::default()).unwrap();
            assert!(rep.product_defect < 1e-8, "{}: defect {}", inst.label, rep.product_defect);
            assert_eq!(rep.group, GroupVerdict::Finite(inst.base_group), "{}", inst.label);
            assert_eq!(rep.closure_size as u32, inst.base_group.order());
            let even = even_subgroup(&rep).unwrap();
            assert_eq!(even.group, GroupVerdict::Finite(inst.curve_group), "{}", inst.label);
        }
    }
}
