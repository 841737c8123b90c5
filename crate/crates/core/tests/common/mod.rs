//! Property checks shared by the property tests and the acceptance run.
//! Each check drives a deterministic proptest runner and returns the first
//! failure as text.

#![allow(dead_code)]

use klein_lame::cli::RunConfig;
use klein_lame::exactalg::field::is_integer;
use klein_lame::exactalg::{factor_small, q, qi, BigRational, NfElem, NumberField, Poly, RatFunc};
use klein_lame::lame::{classify_algebraic, classify_weierstrass, discriminant, LameParameters};
use klein_lame::pullback::{certificate_degree_relation, exponent_transport, is_weak_pullback, named_maps};
use klein_lame::schwarz::{hypergeometric_operator, BasicCase, SchwarzEntry, SchwarzTriple, Vertex};
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub type Check = fn() -> Result<(), String>;

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &seed_bytes()))
}

/// Sweep seed from the run configuration (`KLEIN_LAME_CONFIG`), 0 if unset.
fn seed_bytes() -> [u8; 32] {
    let seed = RunConfig::load(None).map(|c| c.seed).unwrap_or(0);
    let mut bytes = [0u8; 32];
    for chunk in bytes.chunks_mut(8) {
        chunk.copy_from_slice(&seed.to_le_bytes());
    }
    bytes
}

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(what()))
    }
}

pub fn rational() -> impl Strategy<Value = BigRational> {
    (-30i64..=30, 1i64..=12).prop_map(|(n, d)| q(n, d))
}

pub fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(rational(), 0..=max_deg + 1).prop_map(|c| Poly::from_rationals(&c))
}

pub fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly(3), poly(2).prop_filter("nonzero", |p| !p.is_zero()))
        .prop_map(|(n, d)| RatFunc::new(n, d).expect("nonzero denominator"))
}

fn nf() -> impl Strategy<Value = NfElem> {
    (rational(), rational()).prop_map(|(a, b)| NfElem::from_poly(Poly::from_rationals(&[a, b]), &NumberField::sqrt_minus_three()))
}

/// Field axioms for rational functions over Q and for Q(√-3).
pub fn field_axioms() -> Result<(), String> {
    run(1000, (ratfunc(), ratfunc(), ratfunc()), |(a, b, c)| {
        ensure(&(&a + &b) + &c == &a + &(&b + &c), || "additive associativity".into())?;
        ensure(&(&a * &b) * &c == &a * &(&b * &c), || "multiplicative associativity".into())?;
        ensure(&a + &b == &b + &a && &a * &b == &b * &a, || "commutativity".into())?;
        ensure(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), || "distributivity".into())?;
        ensure((&a + &(-&a)).is_zero() && &a + &RatFunc::zero() == a && &a * &RatFunc::one() == a, || {
            "identities".into()
        })?;
        if !a.is_zero() {
            ensure(&a * &a.recip().expect("nonzero") == RatFunc::one(), || format!("inverse of {a}"))?;
        }
        Ok(())
    })?;
    run(1000, (nf(), nf(), nf()), |(a, b, c)| {
        ensure((a.clone() + b.clone()) * c.clone() == a.clone() * c.clone() + b.clone() * c.clone(), || {
            "distributivity in Q(√-3)".into()
        })?;
        ensure((a.clone() * b.clone()) * c.clone() == a.clone() * (b.clone() * c.clone()), || {
            "associativity in Q(√-3)".into()
        })?;
        if !a.repr().is_zero() {
            let one = a.clone() / a.clone();
            ensure(one.repr() == &Poly::one(), || format!("{a} / itself is {one}"))?;
        }
        Ok(())
    })
}

/// Product and chain rules for exact derivatives.
pub fn leibniz_and_chain() -> Result<(), String> {
    run(300, (ratfunc(), ratfunc()), |(f, g)| {
        let lhs = (&f * &g).derivative();
        let rhs = &(&f.derivative() * &g) + &(&f * &g.derivative());
        ensure(lhs == rhs, || format!("product rule for {f}, {g}"))?;
        if !g.is_constant() && g.degree() <= 2 && f.degree() <= 2 {
            let lhs = f.compose(&g).derivative();
            let rhs = &f.derivative().compose(&g) * &g.derivative();
            ensure(lhs == rhs, || format!("chain rule for {f} ∘ {g}"))?;
        }
        Ok(())
    })
}

/// Factorizations multiply back to the input.
pub fn factor_reconstruction() -> Result<(), String> {
    run(300, (poly(3), poly(2), 1usize..=3), |(a, b, k)| {
        let p = &a * &b.pow(k as u32);
        if p.is_zero() {
            return Ok(());
        }
        ensure(factor_small(&p).expand() == p, || format!("factorization of {p}"))
    })
}

fn nonintegral() -> impl Strategy<Value = BigRational> {
    rational().prop_filter("non-integral", |r| !is_integer(r))
}

/// Sum of exponents over all singular points equals (r - 2)·(order 2 relation).
pub fn fuchs_relation() -> Result<(), String> {
    let lame = (rational(), rational(), rational(), rational())
        .prop_filter("nonzero discriminant", |(_, _, g2, g3)| !discriminant(g2, g3).is_zero());
    run(200, lame, |(ell, b, g2, g3)| {
        let l = LameParameters::new(ell, b, g2, g3).expect("filtered").operator();
        let r = l.fuchs_relation().map_err(|e| TestCaseError::fail(e.to_string()))?;
        ensure(r.is_zero(), || format!("Fuchs relation {r} for {l}"))
    })?;
    run(200, (nonintegral(), nonintegral(), nonintegral()), |(a, b, c)| {
        let l = hypergeometric_operator(&SchwarzTriple::new(a, b, c));
        let r = l.fuchs_relation().map_err(|e| TestCaseError::fail(e.to_string()))?;
        ensure(r.is_zero(), || format!("Fuchs relation {r} for {l}"))
    })
}

fn half_nonintegral_ell() -> impl Strategy<Value = BigRational> {
    rational().prop_filter("2ℓ not an integer", |l| !is_integer(&(l * qi(2))))
}

/// Exponent transport and the degree formula on every verified certificate:
/// the quadratic and cubic Lamé families and the named maps.
pub fn transport_and_degree_formula() -> Result<(), String> {
    let check = |cert: klein_lame::pullback::PullbackCertificate| -> Result<(), TestCaseError> {
        ensure(cert.verified, || format!("{} does not verify", cert.xi))?;
        let records = exponent_transport(&cert).map_err(|e| TestCaseError::fail(e.to_string()))?;
        ensure(records.iter().all(|r| r.holds), || format!("transport fails along {}", cert.xi))?;
        let rel = certificate_degree_relation(&cert).map_err(|e| TestCaseError::fail(e.to_string()))?;
        ensure(rel.admits(cert.xi.degree()), || format!("degree formula fails along {}", cert.xi))
    };
    for m in named_maps() {
        check(m.certificate().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    }
    let quad: RatFunc = klein_lame::exactalg::parse_ratfunc("(x^2-1)/x^2").expect("literal");
    let cubic: RatFunc = klein_lame::exactalg::parse_ratfunc("1-x^3").expect("literal");
    run(60, half_nonintegral_ell(), |ell| {
        let harmonic = LameParameters::new(ell.clone(), qi(0), qi(4), qi(0)).expect("J = 1");
        let t = SchwarzTriple::new(q(1, 2), (&ell * qi(2) + qi(1)) / qi(4), q(1, 4));
        check(is_weak_pullback(&harmonic.operator(), &t, &quad).map_err(|e| TestCaseError::fail(e.to_string()))?)?;
        let equi = LameParameters::new(ell.clone(), qi(0), qi(0), qi(4)).expect("J = 0");
        let t = SchwarzTriple::new(q(1, 2), q(1, 3), (&ell * qi(2) + qi(1)) / qi(6));
        check(is_weak_pullback(&equi.operator(), &t, &cubic).map_err(|e| TestCaseError::fail(e.to_string()))?)
    })
}

fn vertex_denominator(e: &SchwarzEntry, v: Vertex) -> usize {
    let r = e.vertex_exponent(v);
    assert!(r.numer().is_one(), "unit fraction expected");
    r.denom().try_into().expect("small")
}

fn fiber_structure(e: &SchwarzEntry) -> Result<(), TestCaseError> {
    let m = e.degree();
    ensure(m as u32 == e.group.order(), || format!("degree {m} of {}", e.case.label()))?;
    for v in [Vertex::Zero, Vertex::One, Vertex::Infinity] {
        let k = vertex_denominator(e, v);
        let fiber = e.polyhedral.vertex_fiber(v).map_err(|err| TestCaseError::fail(err.to_string()))?;
        let total: usize = fiber.iter().map(|(_, mult)| mult).sum();
        ensure(total == m, || format!("{} over {v:?}: total {total}", e.case.label()))?;
        ensure(fiber.iter().all(|(_, mult)| *mult == k), || {
            format!("{} over {v:?}: multiplicities differ from {k}", e.case.label())
        })?;
        ensure(fiber.len() * k == m, || format!("{} over {v:?}: {} cycles", e.case.label(), fiber.len()))?;
    }
    Ok(())
}

/// Polyhedral degrees and the cycle structure of the fibers over 0, 1, ∞.
pub fn polyhedral_fibers() -> Result<(), String> {
    let degrees: Vec<usize> = [BasicCase::II, BasicCase::IV, BasicCase::VI]
        .iter()
        .map(|c| SchwarzEntry::basic(*c).degree())
        .collect();
    if degrees != [12, 24, 60] {
        return Err(format!("polyhedral degrees {degrees:?}"));
    }
    for c in [BasicCase::II, BasicCase::IV, BasicCase::VI] {
        fiber_structure(&SchwarzEntry::basic(c)).map_err(|e| e.to_string())?;
    }
    run(30, 2u32..=12, |n| {
        fiber_structure(&SchwarzEntry::dihedral(n))?;
        fiber_structure(&SchwarzEntry::cyclic(n))
    })
}

/// The classification depends on ℓ only through ℓ(ℓ+1).
pub fn ell_symmetry() -> Result<(), String> {
    run(500, rational(), |ell| {
        let mirror = -&ell - BigRational::one();
        ensure(
            classify_algebraic(&ell).base_groups() == classify_algebraic(&mirror).base_groups(),
            || format!("algebraic form at {ell}"),
        )?;
        ensure(classify_weierstrass(&ell).pairs() == classify_weierstrass(&mirror).pairs(), || {
            format!("Weierstrass form at {ell}")
        })
    })
}

pub fn all() -> Vec<(&'static str, Check)> {
    vec![
        ("field axioms", field_axioms),
        ("Leibniz and chain rules", leibniz_and_chain),
        ("factor reconstruction", factor_reconstruction),
        ("Fuchs relation", fuchs_relation),
        ("exponent transport and degree formula", transport_and_degree_formula),
        ("polyhedral degrees and fibers", polyhedral_fibers),
        ("ℓ ↔ -ℓ-1 symmetry", ell_symmetry),
    ]
}
