//! Floating-point helpers: polynomial root finding and root clustering.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A point of the complex projective line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProjPoint {
    Finite(Complex64),
    Infinity,
}

const MAX_ITERS: usize = 2000;

/// Relative backward error of `z` as a root of `coeffs` (lowest first).
pub fn relative_residual(coeffs: &[Complex64], z: Complex64) -> f64 {
    let mut p = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    let az = z.norm();
    for c in coeffs.iter().rev() {
        p = p * z + c;
        scale = scale * az + c.norm();
    }
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All complex roots of a polynomial (coefficients lowest degree first) by
/// Aberth–Ehrlich simultaneous iteration followed by Newton polishing.
///
/// Fails when some root's relative backward error stays above `tol`.
/// Exact zero roots (vanishing low coefficients) are returned exactly.
pub fn polynomial_roots(coeffs: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    if c.len() <= 1 {
        return Ok(Vec::new());
    }
    let zeros = c.iter().position(|x| x.norm() != 0.0).unwrap_or(0);
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let c: Vec<Complex64> = c[zeros..].to_vec();
    let n = c.len() - 1;
    if n == 0 {
        return Ok(roots);
    }
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    if n == 1 {
        roots.push(-monic[0]);
        return Ok(roots);
    }

    // initial points on a circle of the geometric-mean radius
    let r0 = monic[0].norm().powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.4;
            Complex64::from_polar(r0, theta)
        })
        .collect();

    let mut converged = vec![false; n];
    for _ in 0..MAX_ITERS {
        let mut all = true;
        for i in 0..n {
            if converged[i] {
                continue;
            }
            let (p, dp) = eval_with_derivative(&monic, z[i]);
            if p.norm() == 0.0 {
                converged[i] = true;
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += 1.0 / (z[i] - z[j]);
                }
            }
            let w = ratio / (1.0 - ratio * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                let bump = Complex64::new(1e-8, 1e-8) * (1.0 + z[i].norm());
                z[i] += bump;
                all = false;
                continue;
            }
            z[i] -= w;
            if w.norm() <= 1e-15 * (1.0 + z[i].norm()) {
                converged[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            break;
        }
    }

    // Newton polish against the original coefficients
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(&c, *zi);
            if dp.norm() == 0.0 || p.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            let cand = *zi - step;
            if relative_residual(&c, cand) <= relative_residual(&c, *zi) {
                *zi = cand;
            } else {
                break;
            }
        }
    }

    let worst = z
        .iter()
        .map(|&zi| relative_residual(&c, zi))
        .fold(0.0, f64::max);
    if !(worst <= tol) {
        return Err(Error::RootConvergence {
            achieved: worst,
            wanted: tol,
        });
    }
    roots.extend(z);
    Ok(roots)
}

/// Taylor coefficients `p^(j)(w)/j!` for `j = 0..=k` (coefficients lowest first).
pub fn poly_taylor(coeffs: &[Complex64], w: Complex64, k: usize) -> Vec<Complex64> {
    let mut work: Vec<Complex64> = coeffs.to_vec();
    let mut out = Vec::with_capacity(k + 1);
    for _ in 0..=k {
        if work.is_empty() {
            out.push(Complex64::new(0.0, 0.0));
            continue;
        }
        // synthetic division by (t - w): remainder is the value, quotient carries on
        let n = work.len();
        let mut q = vec![Complex64::new(0.0, 0.0); n - 1];
        let mut acc = Complex64::new(0.0, 0.0);
        for i in (0..n).rev() {
            acc = acc * w + work[i];
            if i > 0 {
                q[i - 1] = acc;
            }
        }
        out.push(acc);
        work = q;
    }
    out
}

/// First `n` coefficients of the power series `a / b`; `b[0]` must be nonzero.
pub fn series_div(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let get = |v: &[Complex64], i: usize| v.get(i).copied().unwrap_or_default();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let mut s = get(a, k);
        for j in 1..=k {
            s -= get(b, j) * out[k - j];
        }
        out[k] = s / b[0];
    }
    out
}

/// Group points closer than `radius` (single linkage); each cluster is
/// reported by its mean and size.
pub fn cluster(points: &[Complex64], radius: f64) -> Vec<(Complex64, usize)> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut j = i;
        while p[j] != r {
            let nx = p[j];
            p[j] = r;
            j = nx;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (points[i] - points[j]).norm() < radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += points[i];
                g.2 += 1;
            }
            None => groups.push((r, points[i], 1)),
        }
    }
    groups
        .into_iter()
        .map(|(_, s, k)| (s / k as f64, k))
        .collect()
}

/// Sort key used wherever complex points need a deterministic order:
/// argument in `(-pi, pi]`, then modulus.
pub fn arg_modulus_cmp(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    let key = |z: &Complex64| {
        let arg = if z.norm() < 1e-300 { -4.0 } else { z.arg() };
        (arg, z.norm())
    };
    let (ka, kb) = (key(a), key(b));
    ka.0
        .partial_cmp(&kb.0)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then(ka.1.partial_cmp(&kb.1).unwrap_or(std::cmp::Ordering::Equal))
}
