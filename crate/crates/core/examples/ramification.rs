//! Enumerate ramification profiles of hypothetical pullback maps for a Lamé
//! operator and compare with the fibers of an actual map.

use klein_lame::exactalg::{parse_ratfunc, q};
use klein_lame::lame::LameParameters;
use klein_lame::pullback::{lame_assignments, map_profile, ramification_profiles};
use klein_lame::schwarz::SchwarzTriple;

fn main() -> klein_lame::Result<()> {
    let ell = q(1, 6);
    for (name, t) in [
        ("icosahedral", SchwarzTriple::from_ints([(1, 2), (1, 3), (1, 5)])),
        ("octahedral", SchwarzTriple::from_ints([(1, 2), (1, 3), (1, 4)])),
        ("tetrahedral", SchwarzTriple::from_ints([(1, 2), (1, 3), (1, 3)])),
    ] {
        println!("ℓ = 1/6, {name} {t}");
        for a in lame_assignments(&ell, &t) {
            let profiles = match ramification_profiles(&a, &t, 0, 60) {
                Ok(p) => p,
                Err(_) => continue,
            };
            let desc: Vec<String> = a.iter().map(|p| format!("{}→{:?}×{}", p.name, p.vertex, p.multiplicity)).collect();
            for p in profiles {
                let [n0, n1, ni] = p.ordinary_counts();
                println!("    {}: n0={n0} n1={n1} n∞={ni} degree {}", desc.join(" "), p.degree);
            }
        }
    }

    let target = LameParameters::new(q(1, 6), q(-1, 9), q(80, 3), q(-80, 3))?;
    let xi = parse_ratfunc("(3x^3-20x+20)(2x-5)^2/(12(x-1)^5)")?;
    let p = map_profile(&xi, &target.operator())?;
    println!("\nquintic map: degree {}, ordinary counts {:?}, Hurwitz count ok: {}", p.degree, p.ordinary_counts(), p.verify());
    Ok(())
}
