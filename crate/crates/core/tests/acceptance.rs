//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use klein_lame::exactalg::field::{frac, is_integer};
use klein_lame::exactalg::{parse_ratfunc, q, qi, BigRational, RatFunc};
use klein_lame::fuchsian::DifferentialOperator;
use klein_lame::lame::{classify_algebraic, classify_weierstrass, known_instances, LameParameters};
use klein_lame::monodromy::{even_subgroup, monodromy_group, GroupVerdict, MonodromyConfig};
use klein_lame::pullback::{is_weak_pullback, lame_assignments, named_map, ramification_profiles, NamedTarget};
use klein_lame::schwarz::{GroupTag, SchwarzTriple};
use klein_lame::solutions::{evaluate, residual, solution_bases};
use num_complex::Complex64;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PULLBACK_BUDGET: Duration = Duration::from_secs(1);
const MATCH_TOL: f64 = 1e-6;
const DEFECT_TOL: f64 = 1e-8;
const SOLUTION_TOL: f64 = 1e-8;
const CONTROL_FLOOR: f64 = 1e-3;
const PROPERTY_BUDGET: Duration = Duration::from_secs(30);

type Outcome = Result<String, String>;

fn config() -> MonodromyConfig {
    MonodromyConfig {
        match_tol: MATCH_TOL,
        ..MonodromyConfig::default()
    }
}

fn lame(ell: BigRational, b: BigRational, g2: BigRational, g3: BigRational) -> LameParameters {
    LameParameters::new(ell, b, g2, g3).expect("nonzero discriminant")
}

fn perturb(l: &DifferentialOperator, delta: &RatFunc) -> DifferentialOperator {
    DifferentialOperator::new(l.a.clone(), &l.b + delta)
}

/// Verify, time, and confirm that a perturbed B is rejected.
fn pullback_case(name: &str, l: &DifferentialOperator, t: &SchwarzTriple, xi: &RatFunc, delta: &RatFunc) -> Result<Duration, String> {
    let start = Instant::now();
    let cert = is_weak_pullback(l, t, xi).map_err(|e| format!("{name}: {e}"))?;
    let took = start.elapsed();
    if !cert.verified {
        return Err(format!("{name}: not verified"));
    }
    if took > PULLBACK_BUDGET {
        return Err(format!("{name}: took {took:?}"));
    }
    let neg = is_weak_pullback(&perturb(l, delta), t, xi).map_err(|e| format!("{name}: {e}"))?;
    if neg.verified {
        return Err(format!("{name}: perturbed operator still verifies"));
    }
    Ok(took)
}

fn criterion_1() -> Outcome {
    let harmonic = parse_ratfunc("(x^2-1)/x^2").unwrap();
    let cubic = parse_ratfunc("1-x^3").unwrap();
    let mut slowest = Duration::ZERO;
    let mut n = 0;
    for ell in [q(1, 6), q(1, 3), q(2, 5)] {
        let p = lame(ell.clone(), qi(0), qi(4), qi(0));
        let t = SchwarzTriple::new(q(1, 2), (&ell * qi(2) + qi(1)) / qi(4), q(1, 4));
        // B ↦ B + 1/100 changes the operator's B coefficient by -(1/100)/(4P)
        let delta = RatFunc::new(klein_lame::exactalg::Poly::from_rationals(&[q(-1, 100)]), p.cubic().scale(&qi(4))).unwrap();
        slowest = slowest.max(pullback_case(&format!("harmonic ℓ={ell}"), &p.operator(), &t, &harmonic, &delta)?);
        n += 1;
    }
    for ell in [q(1, 4), q(1, 10), q(7, 10)] {
        let p = lame(ell.clone(), qi(0), qi(0), qi(4));
        let t = SchwarzTriple::new(q(1, 2), q(1, 3), (&ell * qi(2) + qi(1)) / qi(6));
        let delta = RatFunc::new(klein_lame::exactalg::Poly::from_rationals(&[q(-1, 100)]), p.cubic().scale(&qi(4))).unwrap();
        slowest = slowest.max(pullback_case(&format!("equianharmonic ℓ={ell}"), &p.operator(), &t, &cubic, &delta)?);
        n += 1;
    }
    let quintic = named_map("prop32-quintic").unwrap();
    let p = lame(q(1, 6), q(-1, 9), q(80, 3), q(-80, 3));
    let delta = RatFunc::new(klein_lame::exactalg::Poly::from_rationals(&[q(-1, 100)]), p.cubic().scale(&qi(4))).unwrap();
    slowest = slowest.max(pullback_case("quintic", &p.operator(), &quintic.source, &quintic.xi, &delta)?);
    let klein = named_map("klein-caseXIV").unwrap();
    let NamedTarget::Hypergeometric(target) = &klein.target else {
        return Err("Klein map target is not hypergeometric".into());
    };
    let delta = RatFunc::new(
        klein_lame::exactalg::Poly::from_rationals(&[q(1, 100)]),
        klein_lame::exactalg::Poly::from_ints(&[0, -1, 1]),
    )
    .unwrap();
    let l = klein_lame::schwarz::hypergeometric_operator(target);
    slowest = slowest.max(pullback_case("Klein case XIV", &l, &klein.source, &klein.xi, &delta)?);
    n += 2;
    Ok(format!("{n} pullbacks verified, {n} perturbed controls rejected, slowest {slowest:.1?}"))
}

/// Expected base groups from the distance of ℓ to the nearest integer.
fn expected_line(ell: &BigRational) -> BTreeSet<GroupTag> {
    let f = frac(ell);
    let r = f.clone().min(BigRational::one() - f);
    let mut s = BTreeSet::new();
    if r == q(1, 6) || r == q(1, 4) {
        s.insert(GroupTag::Octahedral);
    }
    if r == q(1, 10) || r == q(1, 6) || r == q(3, 10) {
        s.insert(GroupTag::Icosahedral);
    }
    s
}

/// (curve group, line group) alternatives for the Weierstrass form.
fn expected_curve(ell: &BigRational) -> BTreeSet<(GroupTag, GroupTag)> {
    let f = frac(ell);
    let r = f.clone().min(BigRational::one() - f);
    let mut s = BTreeSet::new();
    if r == q(1, 4) {
        s.insert((GroupTag::Tetrahedral, GroupTag::Octahedral));
    }
    if r == q(1, 6) {
        s.insert((GroupTag::Octahedral, GroupTag::Octahedral));
    }
    if r == q(1, 10) || r == q(1, 6) || r == q(3, 10) {
        s.insert((GroupTag::Icosahedral, GroupTag::Icosahedral));
    }
    s
}

fn criterion_2() -> Outcome {
    let mut checked = 0;
    for k in 1..=119 {
        let ell = q(k, 60);
        if is_integer(&(&ell * qi(2))) {
            continue;
        }
        let line: BTreeSet<GroupTag> = classify_algebraic(&ell).base_groups().into_iter().collect();
        if line != expected_line(&ell) {
            return Err(format!("ℓ = {ell}: got {line:?}"));
        }
        let curve: BTreeSet<(GroupTag, GroupTag)> = classify_weierstrass(&ell).pairs().into_iter().collect();
        if curve != expected_curve(&ell) {
            return Err(format!("ℓ = {ell}: curve alternatives {curve:?}"));
        }
        checked += 1;
    }
    Ok(format!("{checked} grid values of ℓ = k/60 match on the line and on the curve"))
}

fn criterion_3() -> Outcome {
    let cfg = config();
    let mut parts = Vec::new();
    for (inst, want) in known_instances().iter().zip([24, 24, 60, 60, 60]) {
        let start = Instant::now();
        let rep = monodromy_group(&inst.params.operator(), &cfg).map_err(|e| format!("case {}: {e}", inst.label))?;
        if rep.product_defect > DEFECT_TOL {
            return Err(format!("case {}: product defect {:e}", inst.label, rep.product_defect));
        }
        if rep.group != GroupVerdict::Finite(inst.base_group) || rep.closure_size != want {
            return Err(format!("case {}: {} of size {}", inst.label, rep.group, rep.closure_size));
        }
        parts.push(format!("{} {}/{} {:.1?}", inst.label, rep.group, rep.closure_size, start.elapsed()));
    }
    Ok(parts.join(", "))
}

fn criterion_4() -> Outcome {
    let cfg = config();
    let mut parts = Vec::new();
    for (p, size, tag) in [
        (lame(q(1, 4), qi(0), qi(0), qi(4)), 12, GroupTag::Tetrahedral),
        (lame(q(1, 6), qi(0), qi(4), qi(0)), 24, GroupTag::Octahedral),
    ] {
        let rep = monodromy_group(&p.operator(), &cfg).map_err(|e| e.to_string())?;
        let even = even_subgroup(&rep).map_err(|e| e.to_string())?;
        if even.closure_size != size || even.group != GroupVerdict::Finite(tag) {
            return Err(format!("{p}: {} of order {}", even.group, even.closure_size));
        }
        parts.push(format!("{p} → {} of order {}", even.group, even.closure_size));
    }
    Ok(parts.join("; "))
}

fn criterion_5() -> Outcome {
    let cfg = config();
    let a = lame(q(1, 6), qi(0), qi(4), qi(0));
    let b = lame(q(1, 6), q(-1, 9), q(80, 3), q(-80, 3));
    if a.j_invariant() != qi(1) || b.j_invariant() != qi(-80) {
        return Err(format!("J invariants {} and {}", a.j_invariant(), b.j_invariant()));
    }
    let ga = monodromy_group(&a.operator(), &cfg).map_err(|e| e.to_string())?.group;
    let gb = monodromy_group(&b.operator(), &cfg).map_err(|e| e.to_string())?.group;
    if ga != GroupVerdict::Finite(GroupTag::Octahedral) || gb != GroupVerdict::Finite(GroupTag::Icosahedral) {
        return Err(format!("groups {ga} and {gb}"));
    }
    Ok(format!("ℓ = 1/6: J = 1 gives {ga}, J = -80 gives {gb}"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);
    let mut parts = Vec::new();
    for basis in solution_bases() {
        let p = &basis.params;
        let perturbed = lame(p.ell.clone(), &p.b + q(1, 100), p.g2.clone(), p.g3.clone()).operator();
        let mut worst: f64 = 0.0;
        let mut control: f64 = 0.0;
        let mut points = 0;
        let mut attempts = 0;
        while points < 20 {
            attempts += 1;
            if attempts > 1000 {
                return Err(format!("case {}: could not find 20 regular points", basis.label));
            }
            let x0 = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let mut branches = BTreeSet::new();
            while branches.len() < 3 {
                branches.insert(rng.gen_range(0..basis.degree()));
            }
            let evs: Result<Vec<_>, _> = branches.iter().map(|&k| evaluate(&basis, x0, k, 1e-12)).collect();
            let Ok(evs) = evs else { continue };
            for ev in &evs {
                worst = worst.max(ev.residuals.0).max(ev.residuals.1);
                let r = residual(&perturbed, ev);
                control = control.max(r.0).max(r.1);
            }
            points += 1;
        }
        if worst >= SOLUTION_TOL {
            return Err(format!("case {}: residual {worst:e}", basis.label));
        }
        if control <= CONTROL_FLOOR {
            return Err(format!("case {}: perturbed residual only {control:e}", basis.label));
        }
        parts.push(format!("{} max {worst:.1e} / control {control:.1e}", basis.label));
    }
    Ok(parts.join(", "))
}

fn criterion_7() -> Outcome {
    let ico = SchwarzTriple::from_ints([(1, 2), (1, 3), (1, 5)]);
    let ell = q(1, 6);
    let assignment = lame_assignments(&ell, &ico)
        .into_iter()
        .find(|a| {
            a.iter().all(|p| {
                if p.name == "inf" {
                    p.vertex == klein_lame::schwarz::Vertex::One && p.multiplicity == 2
                } else {
                    p.vertex == klein_lame::schwarz::Vertex::Zero && p.multiplicity == 1
                }
            })
        })
        .ok_or("assignment e→0, ∞→1 missing")?;
    let profiles = ramification_profiles(&assignment, &ico, 0, 120).map_err(|e| e.to_string())?;
    let found: Vec<([usize; 3], usize)> = profiles.iter().map(|p| (p.ordinary_counts(), p.degree)).collect();
    if found != vec![([1, 1, 1], 5)] {
        return Err(format!("icosahedral ℓ = 1/6 profiles {found:?}"));
    }
    let tet = SchwarzTriple::from_ints([(1, 2), (1, 3), (1, 3)]);
    let mut assignments = 0;
    for k in 1..=119 {
        let ell = q(k, 60);
        if is_integer(&(&ell * qi(2))) {
            continue;
        }
        for a in lame_assignments(&ell, &tet) {
            assignments += 1;
            if let Ok(p) = ramification_profiles(&a, &tet, 0, 120) {
                if !p.is_empty() {
                    return Err(format!("tetrahedral profile for ℓ = {ell}"));
                }
            }
        }
    }
    Ok(format!("icosahedral ℓ = 1/6 gives only (1,1,1) in degree 5; {assignments} tetrahedral assignments give none"))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    for (name, check) in common::all() {
        check().map_err(|e| format!("{name}: {e}"))?;
    }
    let took = start.elapsed();
    if took > PROPERTY_BUDGET {
        return Err(format!("property suites took {took:?}"));
    }
    Ok(format!("{} suites green in {took:.1?}", common::all().len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("exact pullback verification", criterion_1),
        ("classification tables", criterion_2),
        ("numerical monodromy of the five instances", criterion_3),
        ("monodromy on the curve", criterion_4),
        ("nonuniqueness for ℓ = 1/6", criterion_5),
        ("solution residuals", criterion_6),
        ("ramification enumeration", criterion_7),
        ("property suites", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
