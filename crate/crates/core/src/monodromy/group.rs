//! Finite subgroups of PGL(2, ℂ) from numerical generators.

use std::collections::BTreeMap;
use std::fmt;

use super::matrix::Matrix2;
use crate::error::{Error, Result};
use crate::schwarz::GroupTag;

/// Outcome of a projective closure.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupVerdict {
    Finite(GroupTag),
    /// Closed up to the cap, but the order and element orders fit no
    /// finite subgroup of PGL(2).
    Unrecognized { order: usize },
    /// The cap was exceeded.
    InfiniteOrUndetermined,
}

impl GroupVerdict {
    pub fn tag(&self) -> Option<GroupTag> {
        match self {
            GroupVerdict::Finite(t) => Some(*t),
            _ => None,
        }
    }
}

impl fmt::Display for GroupVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupVerdict::Finite(t) => write!(f, "{t}"),
            GroupVerdict::Unrecognized { order } => write!(f, "unrecognized (order {order})"),
            GroupVerdict::InfiniteOrUndetermined => write!(f, "infinite or undetermined"),
        }
    }
}

/// Elements of a projective closure, each scaled to determinant one.
#[derive(Clone, Debug)]
pub struct Closure {
    pub elements: Vec<Matrix2>,
    /// False when the cap stopped the search.
    pub complete: bool,
}

fn find(elements: &[Matrix2], m: &Matrix2, tol: f64) -> Result<Option<usize>> {
    let mut hit = None;
    for (i, e) in elements.iter().enumerate() {
        let d = e.projective_distance(m);
        if d < tol {
            hit = Some(i);
            break;
        }
        if d < 10.0 * tol {
            return Err(Error::IllConditioned(format!(
                "two group elements at projective distance {d:e}, within ten times the matching tolerance {tol:e}"
            )));
        }
    }
    Ok(hit)
}

/// Breadth-first closure of the generators in PGL(2).
pub fn projective_closure(generators: &[Matrix2], tol: f64, cap: usize) -> Result<Closure> {
    let gens: Vec<Matrix2> = generators.iter().map(Matrix2::unimodular).collect();
    let mut elements = vec![Matrix2::identity()];
    let mut frontier = 0;
    while frontier < elements.len() {
        let x = elements[frontier];
        frontier += 1;
        for g in &gens {
            let y = (*g * x).unimodular();
            if find(&elements, &y, tol)?.is_none() {
                if elements.len() >= cap {
                    return Ok(Closure {
                        elements,
                        complete: false,
                    });
                }
                elements.push(y);
            }
        }
    }
    Ok(Closure {
        elements,
        complete: true,
    })
}

impl Closure {
    /// Every product and inverse lies in the set again.
    pub fn is_closed(&self, tol: f64) -> bool {
        if !self.complete {
            return false;
        }
        for a in &self.elements {
            let inv = match a.inverse() {
                Some(i) => i,
                None => return false,
            };
            if !matches!(find(&self.elements, &inv, tol), Ok(Some(_))) {
                return false;
            }
            for b in &self.elements {
                if !matches!(find(&self.elements, &(*a * *b), tol), Ok(Some(_))) {
                    return false;
                }
            }
        }
        true
    }

    /// Multiset of projective element orders.
    pub fn order_counts(&self, tol: f64) -> BTreeMap<usize, usize> {
        let cap = self.elements.len().max(1);
        let mut m = BTreeMap::new();
        for e in &self.elements {
            let k = e.projective_order(tol, cap).unwrap_or(0);
            *m.entry(k).or_insert(0) += 1;
        }
        m
    }

    pub fn recognize(&self, tol: f64) -> GroupVerdict {
        if !self.complete {
            return GroupVerdict::InfiniteOrUndetermined;
        }
        let n = self.elements.len();
        let counts = self.order_counts(tol);
        let orders: Vec<usize> = counts.keys().copied().collect();
        let subset = |allowed: &[usize]| orders.iter().all(|o| allowed.contains(o));
        let max_order = orders.iter().copied().max().unwrap_or(1);
        if counts.contains_key(&0) {
            return GroupVerdict::Unrecognized { order: n };
        }
        let tag = if max_order == n {
            Some(GroupTag::Cyclic(n as u32))
        } else if n.is_multiple_of(2) && n >= 4 && dihedral_shape(&counts, n / 2) {
            Some(GroupTag::Dihedral((n / 2) as u32))
        } else if n == 12 && subset(&[1, 2, 3]) {
            Some(GroupTag::Tetrahedral)
        } else if n == 24 && subset(&[1, 2, 3, 4]) {
            Some(GroupTag::Octahedral)
        } else if n == 60 && subset(&[1, 2, 3, 5]) {
            Some(GroupTag::Icosahedral)
        } else {
            None
        };
        match tag {
            Some(t) => GroupVerdict::Finite(t),
            None => GroupVerdict::Unrecognized { order: n },
        }
    }
}

/// Among finite subgroups of PGL(2), a non-cyclic group of order `2m`
/// with an element of order `m` is dihedral.
fn dihedral_shape(counts: &BTreeMap<usize, usize>, m: usize) -> bool {
    counts.contains_key(&m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rot(theta: f64) -> Matrix2 {
        Matrix2([
            [Complex64::from_polar(1.0, theta / 2.0), c(0.0, 0.0)],
            [c(0.0, 0.0), Complex64::from_polar(1.0, -theta / 2.0)],
        ])
    }

    fn flip() -> Matrix2 {
        Matrix2([[c(0.0, 0.0), c(1.0, 0.0)], [c(-1.0, 0.0), c(0.0, 0.0)]])
    }

    /// Rotations of the sphere as SU(2) elements about the axis (x, y, z).
    fn su2(axis: [f64; 3], theta: f64) -> Matrix2 {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        let (x, y, z) = (axis[0] / n, axis[1] / n, axis[2] / n);
        let (s, co) = ((theta / 2.0).sin(), (theta / 2.0).cos());
        Matrix2([[c(co, -z * s), c(-y * s, -x * s)], [c(y * s, -x * s), c(co, z * s)]])
    }

    #[test]
    fn cyclic_and_dihedral() {
        let cl = projective_closure(&[rot(2.0 * PI / 5.0)], 1e-6, 400).unwrap();
        assert_eq!(cl.recognize(1e-6), GroupVerdict::Finite(GroupTag::Cyclic(5)));
        for m in [2usize, 3, 4, 6] {
            let cl = projective_closure(&[rot(2.0 * PI / m as f64), flip()], 1e-6, 400).unwrap();
            assert_eq!(cl.elements.len(), 2 * m);
            assert_eq!(cl.recognize(1e-6), GroupVerdict::Finite(GroupTag::Dihedral(m as u32)));
            assert!(cl.is_closed(1e-6));
        }
    }

    #[test]
    fn polyhedral_groups() {
        // tetrahedral: order-3 rotation about (1,1,1) and order-2 about z
        let t = [su2([1.0, 1.0, 1.0], 2.0 * PI / 3.0), su2([0.0, 0.0, 1.0], PI)];
        let cl = projective_closure(&t, 1e-6, 400).unwrap();
        assert_eq!(cl.recognize(1e-6), GroupVerdict::Finite(GroupTag::Tetrahedral));
        // octahedral: add the order-4 rotation about z
        let o = [su2([1.0, 1.0, 1.0], 2.0 * PI / 3.0), su2([0.0, 0.0, 1.0], PI / 2.0)];
        let cl = projective_closure(&o, 1e-6, 400).unwrap();
        assert_eq!(cl.recognize(1e-6), GroupVerdict::Finite(GroupTag::Octahedral));
        assert!(cl.is_closed(1e-6));
        // icosahedral: 5-fold about (0,1,φ) and 3-fold about (1,1,1)
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let i = [su2([0.0, 1.0, phi], 2.0 * PI / 5.0), su2([1.0, 1.0, 1.0], 2.0 * PI / 3.0)];
        let cl = projective_closure(&i, 1e-6, 400).unwrap();
        assert_eq!(cl.elements.len(), 60);
        assert_eq!(cl.recognize(1e-6), GroupVerdict::Finite(GroupTag::Icosahedral));
    }

    #[test]
    fn infinite_group_overflows() {
        let cl = projective_closure(&[rot(1.0)], 1e-6, 400).unwrap();
        assert!(!cl.complete);
        assert_eq!(cl.recognize(1e-6), GroupVerdict::InfiniteOrUndetermined);
    }
}
