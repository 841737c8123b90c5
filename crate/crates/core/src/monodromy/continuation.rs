//! Taylor-series continuation of `u'' + A u' + B u = 0` along polygonal paths.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::matrix::Matrix2;
use crate::error::{Error, Result};
use crate::fuchsian::DifferentialOperator;
use crate::numeric::{poly_taylor, series_div};

const MAX_TERMS: usize = 150;
const MIN_STEP: f64 = 1e-12;

/// A closed path given by waypoints; consecutive waypoints are joined by
/// straight segments.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopPath {
    pub basepoint: Complex64,
    pub waypoints: Vec<Complex64>,
}

impl LoopPath {
    /// Straight in from `base` to the circle of radius `r` about `center`,
    /// once around counterclockwise, and straight back.
    pub fn keyhole(base: Complex64, center: Complex64, r: f64) -> Self {
        let dir = (base - center) / (base - center).norm();
        let entry = center + dir * r;
        let phi0 = dir.arg();
        let n = 48;
        let mut w = vec![base, entry];
        for k in 1..=n {
            let phi = phi0 + 2.0 * PI * k as f64 / n as f64;
            w.push(center + Complex64::from_polar(r, phi));
        }
        *w.last_mut().expect("nonempty") = entry;
        w.push(base);
        LoopPath {
            basepoint: base,
            waypoints: w,
        }
    }

    /// Counterclockwise circle about `center` through `base`.
    pub fn circle(base: Complex64, center: Complex64, n: usize) -> Self {
        let r = (base - center).norm();
        let phi0 = (base - center).arg();
        let mut w = vec![base];
        for k in 1..n {
            w.push(center + Complex64::from_polar(r, phi0 + 2.0 * PI * k as f64 / n as f64));
        }
        w.push(base);
        LoopPath {
            basepoint: base,
            waypoints: w,
        }
    }

    /// Smallest distance from the path to any of `points`.
    pub fn clearance(&self, points: &[Complex64]) -> f64 {
        let mut best = f64::INFINITY;
        for seg in self.waypoints.windows(2) {
            for p in points {
                best = best.min(segment_distance(*p, seg[0], seg[1]));
            }
        }
        best
    }
}

pub fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a) * ab.conj()).re / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Coefficient data of an operator prepared for repeated expansion.
pub struct Integrator {
    a_num: Vec<Complex64>,
    a_den: Vec<Complex64>,
    b_num: Vec<Complex64>,
    b_den: Vec<Complex64>,
    singular: Vec<Complex64>,
    tol: f64,
    /// Largest truncation estimate seen, relative to the state size.
    pub max_error: f64,
}

impl Integrator {
    pub fn new(l: &DifferentialOperator, singular: Vec<Complex64>, tol: f64) -> Self {
        Integrator {
            a_num: l.a.num().to_complex_coeffs(),
            a_den: l.a.den().to_complex_coeffs(),
            b_num: l.b.num().to_complex_coeffs(),
            b_den: l.b.den().to_complex_coeffs(),
            singular,
            tol,
            max_error: 0.0,
        }
    }

    fn nearest_singularity(&self, z: Complex64) -> f64 {
        self.singular
            .iter()
            .map(|s| (s - z).norm())
            .fold(f64::INFINITY, f64::min)
    }

    fn expand(&self, num: &[Complex64], den: &[Complex64], c: Complex64, n: usize) -> Vec<Complex64> {
        let tn = poly_taylor(num, c, n);
        let td = poly_taylor(den, c, n);
        series_div(&tn, &td, n + 1)
    }

    /// One Taylor step of length `h` from `c` for the state columns `y`.
    /// Returns `None` if the series did not converge within the term cap.
    fn step(&mut self, c: Complex64, h: Complex64, y: &Matrix2) -> Option<Matrix2> {
        let n = MAX_TERMS;
        let a = self.expand(&self.a_num, &self.a_den, c, n);
        let b = self.expand(&self.b_num, &self.b_den, c, n);
        // scaled coefficients: a_j h^{j+1}, b_j h^{j+2}
        let mut hp = h;
        let mut sa = Vec::with_capacity(n + 1);
        let mut sb = Vec::with_capacity(n + 1);
        for j in 0..=n {
            sa.push(a[j] * hp);
            sb.push(b[j] * hp * h);
            hp *= h;
        }
        let mut out = Matrix2::identity();
        for col in 0..2 {
            let mut v: Vec<Complex64> = Vec::with_capacity(n + 2);
            v.push(y.0[0][col]);
            v.push(y.0[1][col] * h);
            let scale = v[0].norm().max(v[1].norm()).max(1e-300);
            let mut converged_at = None;
            for k in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for j in 0..=k {
                    s -= sa[j] * ((k - j + 1) as f64) * v[k - j + 1];
                    s -= sb[j] * v[k - j];
                }
                let next = s / (((k + 2) * (k + 1)) as f64);
                v.push(next);
                let kk = v.len();
                if kk > 8 {
                    let tail = v[kk - 1].norm() * (kk as f64) + v[kk - 2].norm() * (kk as f64);
                    if tail <= self.tol * 1e-2 * scale {
                        converged_at = Some(tail / scale);
                        break;
                    }
                }
            }
            let err = converged_at?;
            self.max_error = self.max_error.max(err);
            let mut u = Complex64::new(0.0, 0.0);
            let mut du = Complex64::new(0.0, 0.0);
            for (k, vk) in v.iter().enumerate() {
                u += vk;
                if k > 0 {
                    du += vk * (k as f64);
                }
            }
            out.0[0][col] = u;
            out.0[1][col] = du / h;
        }
        if out.0.iter().flatten().any(|c| !c.is_finite()) {
            return None;
        }
        Some(out)
    }

    /// Continue the state matrix along the segment `from → to`.
    pub fn segment(&mut self, from: Complex64, to: Complex64, y: Matrix2) -> Result<Matrix2> {
        let mut y = y;
        let mut z = from;
        while (to - z).norm() > 0.0 {
            let rho = self.nearest_singularity(z);
            let remaining = to - z;
            let mut len = remaining.norm().min(0.5 * rho);
            loop {
                if len < MIN_STEP {
                    return Err(Error::StepUnderflow(format!(
                        "step below {MIN_STEP:e} near {z} (nearest singularity at distance {rho:e})"
                    )));
                }
                let h = remaining / remaining.norm() * len;
                match self.step(z, h, &y) {
                    Some(next) => {
                        y = next;
                        z = if len == remaining.norm() { to } else { z + h };
                        break;
                    }
                    None => len *= 0.5,
                }
            }
        }
        if y.0.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(y)
    }

    /// Transfer matrix along a path in the basis `(u, u')`.
    pub fn transfer(&mut self, path: &LoopPath) -> Result<Matrix2> {
        let mut y = Matrix2::identity();
        for w in path.waypoints.windows(2) {
            y = self.segment(w[0], w[1], y)?;
        }
        Ok(y)
    }
}

/// Transfer matrix of `l` along `path`; `singular` lists the points to avoid.
pub fn analytic_continue(
    l: &DifferentialOperator,
    singular: &[Complex64],
    path: &LoopPath,
    tol: f64,
) -> Result<Matrix2> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let mut it = Integrator::new(l, singular.to_vec(), tol);
    it.transfer(path)
}
