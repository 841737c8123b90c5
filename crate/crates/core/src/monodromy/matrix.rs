use std::ops::Mul;

use num_complex::Complex64;

/// A 2×2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix2(pub [[Complex64; 2]; 2]);

impl Matrix2 {
    pub fn identity() -> Self {
        let o = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        Matrix2([[o, z], [z, o]])
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let m = &self.0;
        Matrix2([[m[0][0] * c, m[0][1] * c], [m[1][0] * c, m[1][1] * c]])
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == 0.0 || !d.is_finite() {
            return None;
        }
        let m = &self.0;
        Some(Matrix2([[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]]))
    }

    /// Scaled to determinant one (principal square root of the determinant).
    pub fn unimodular(&self) -> Self {
        self.scale(1.0 / self.det().sqrt())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        d
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Distance in PGL(2): both scaled to determinant one, minimised over
    /// the sign ambiguity.
    pub fn projective_distance(&self, other: &Self) -> f64 {
        let a = self.unimodular();
        let b = other.unimodular();
        a.max_abs_diff(&b).min(a.max_abs_diff(&b.scale(Complex64::new(-1.0, 0.0))))
    }

    /// Smallest `k ≤ cap` with `self^k` projectively the identity.
    pub fn projective_order(&self, tol: f64, cap: usize) -> Option<usize> {
        let id = Matrix2::identity();
        let a = self.unimodular();
        let mut p = a;
        for k in 1..=cap {
            if p.projective_distance(&id) < tol {
                return Some(k);
            }
            p = (p * a).unimodular();
        }
        None
    }

    /// Entries as `[[re, im], ...]` row by row.
    pub fn to_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        self.0
            .iter()
            .map(|row| row.iter().map(|c| [c.re, c.im]).collect())
            .collect()
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;

    fn mul(self, rhs: Matrix2) -> Matrix2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Matrix2(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inverse_and_orders() {
        let m = Matrix2([[c(0.0, 0.0), c(-1.0, 0.0)], [c(1.0, 0.0), c(1.0, 0.0)]]);
        assert!((m * m.inverse().unwrap()).max_abs_diff(&Matrix2::identity()) < 1e-15);
        // trace 1, det 1: order 6 in SL(2), order 3 projectively
        assert_eq!(m.projective_order(1e-9, 20), Some(3));
        let s = m.scale(c(0.0, 2.0));
        assert!(s.projective_distance(&m) < 1e-12);
        assert_eq!(Matrix2::identity().scale(c(-3.0, 0.0)).projective_order(1e-9, 5), Some(1));
    }
}
