//! Monodromy on the elliptic curve: the subgroup generated by products of
//! pairs of generators, and the matching reduction of the branches of τ.

use klein_lame::exactalg::q;
use klein_lame::lame::LameParameters;
use klein_lame::monodromy::{even_subgroup, monodromy_group, MonodromyConfig};
use klein_lame::solutions::curve_branch_reduction;

fn main() -> klein_lame::Result<()> {
    let cfg = MonodromyConfig::default();
    for (label, p) in [
        ("1", LameParameters::new(q(1, 6), q(0, 1), q(4, 1), q(0, 1))?),
        ("2a", LameParameters::new(q(1, 4), q(0, 1), q(0, 1), q(4, 1))?),
    ] {
        let rep = monodromy_group(&p.operator(), &cfg)?;
        let even = even_subgroup(&rep)?;
        let red = curve_branch_reduction(label)?;
        println!("{p}, j = {}", p.j_invariant());
        println!("    line: {} of order {}", rep.group, rep.closure_size);
        println!("    curve: {} of order {}", even.group, even.closure_size);
        println!(
            "    τ has {} branches over the line, {} over the curve{}",
            red.branches_over_line,
            red.branches_over_curve,
            red.factor_witness.map(|w| format!("\n    witness: {w}")).unwrap_or_default()
        );
    }
    Ok(())
}
