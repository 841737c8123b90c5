use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Poly;

/// One monic factor of a factorization over the rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    pub poly: Poly,
    pub multiplicity: usize,
    /// False for factors of degree >= 4 that were not split further.
    pub verified_irreducible: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub unit: BigRational,
    pub factors: Vec<Factor>,
}

impl Factorization {
    pub fn expand(&self) -> Poly {
        self.factors.iter().fold(Poly::constant(self.unit.clone()), |acc, f| {
            &acc * &f.poly.pow(f.multiplicity as u32)
        })
    }
}

/// Factor a polynomial over the rationals: squarefree decomposition, then
/// rational-root extraction. Leftover factors of degree <= 3 are
/// irreducible; larger leftovers are flagged unverified.
pub fn factor_small(p: &Poly) -> Factorization {
    let unit = p.leading();
    let mut factors = Vec::new();
    for (part, mult) in p.squarefree_decomposition() {
        let mut rest = part;
        for r in rational_roots(&rest) {
            let lin = Poly::from_rationals(&[-r, BigRational::one()]);
            rest = rest.div_exact(&lin).expect("root divides");
            factors.push(Factor {
                poly: lin,
                multiplicity: mult,
                verified_irreducible: true,
            });
        }
        if !rest.is_constant() {
            let verified = rest.deg() <= 3;
            factors.push(Factor {
                poly: rest.monic(),
                multiplicity: mult,
                verified_irreducible: verified,
            });
        }
    }
    factors.sort_by(|a, b| {
        a.poly
            .deg()
            .cmp(&b.poly.deg())
            .then_with(|| cmp_poly(&a.poly, &b.poly))
    });
    Factorization { unit, factors }
}

fn cmp_poly(a: &Poly, b: &Poly) -> std::cmp::Ordering {
    for k in (0..=a.deg().max(b.deg())).rev() {
        let o = b.coeff(k).cmp(&a.coeff(k));
        if o != std::cmp::Ordering::Equal {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

/// Distinct rational roots, ascending, by the rational root test.
pub fn rational_roots(p: &Poly) -> Vec<BigRational> {
    let mut roots = Vec::new();
    if p.is_constant() {
        return roots;
    }
    let mut prim = p.primitive_integer();
    // strip the root at zero
    if prim.coeff(0).is_zero() {
        roots.push(BigRational::zero());
        let lowest = prim.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0);
        prim = Poly::new(prim.coeffs()[lowest..].to_vec());
    }
    if prim.is_constant() {
        return roots;
    }
    let a0 = prim.coeff(0).to_integer();
    let an = prim.leading().to_integer();
    let ps = divisors(&a0);
    let qs = divisors(&an);
    let mut cands: Vec<BigRational> = Vec::new();
    for pd in &ps {
        for qd in &qs {
            let r = BigRational::new(pd.clone(), qd.clone());
            cands.push(r.clone());
            cands.push(-r);
        }
    }
    cands.sort();
    cands.dedup();
    for c in cands {
        if prim.eval(&c).is_zero() {
            roots.push(c);
        }
    }
    roots.sort();
    roots
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut m = n.clone();
    let mut d = BigInt::from(2);
    while &d * &d <= m {
        let mut e = 0;
        while (&m % &d).is_zero() {
            m /= &d;
            e += 1;
        }
        if e > 0 {
            primes.push((d.clone(), e));
        }
        d += if d == BigInt::from(2) { 1 } else { 2 };
        if d.to_u64().is_none() {
            break;
        }
    }
    if m > BigInt::one() {
        primes.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for dv in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(dv * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::q;

    #[test]
    fn splits_x_cubed_minus_x() {
        let p = Poly::from_ints(&[0, -4, 0, 4]);
        let f = factor_small(&p);
        assert_eq!(f.unit, q(4, 1));
        let polys: Vec<Poly> = f.factors.iter().map(|f| f.poly.clone()).collect();
        assert_eq!(
            polys,
            vec![
                Poly::from_ints(&[1, 1]),
                Poly::from_ints(&[0, 1]),
                Poly::from_ints(&[-1, 1])
            ]
        );
        assert_eq!(f.expand(), p);
    }

    #[test]
    fn prop32_cubic_is_irreducible() {
        let p = Poly::from_ints(&[20, -20, 0, 3]);
        let f = factor_small(&p);
        assert_eq!(f.factors.len(), 1);
        assert!(f.factors[0].verified_irreducible);
        assert_eq!(f.factors[0].poly.deg(), 3);
        assert_eq!(f.expand(), p);
        assert!(rational_roots(&p).is_empty());
    }

    #[test]
    fn cyclotomic_split() {
        let p = Poly::from_ints(&[-1, 0, 0, 1]);
        let f = factor_small(&p);
        assert_eq!(f.factors[0].poly, Poly::from_ints(&[-1, 1]));
        assert_eq!(f.factors[1].poly, Poly::from_ints(&[1, 1, 1]));
        assert!(f.factors.iter().all(|f| f.verified_irreducible));
    }

    #[test]
    fn multiplicities_and_unverified_quartic() {
        // (x^4 + 1) * (2x - 1)^2
        let p = &Poly::from_ints(&[1, 0, 0, 0, 1]) * &Poly::from_ints(&[-1, 2]).pow(2);
        let f = factor_small(&p);
        assert_eq!(f.expand(), p);
        assert_eq!(f.factors[0].poly, Poly::from_rationals(&[q(-1, 2), q(1, 1)]));
        assert_eq!(f.factors[0].multiplicity, 2);
        assert!(!f.factors[1].verified_irreducible);
    }
}
