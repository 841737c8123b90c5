//! Numerical projective monodromy of the five algebraic Lamé instances and
//! of a non-algebraic neighbour.

use klein_lame::exactalg::q;
use klein_lame::lame::{known_instances, LameParameters};
use klein_lame::monodromy::{monodromy_group, MonodromyConfig};

fn main() -> klein_lame::Result<()> {
    let cfg = MonodromyConfig::default();
    for inst in known_instances() {
        let rep = monodromy_group(&inst.params.operator(), &cfg)?;
        let orders: Vec<String> = rep
            .projective_orders
            .iter()
            .map(|o| o.map_or("-".into(), |k| k.to_string()))
            .collect();
        println!(
            "case {:<3} {}\n    group {} (|G| = {}), generator orders [{}], product defect {:.1e}",
            inst.label,
            inst.params,
            rep.group,
            rep.closure_size,
            orders.join(", "),
            rep.product_defect
        );
    }
    let p = LameParameters::new(q(1, 3), q(0, 1), q(4, 1), q(0, 1))?;
    let rep = monodromy_group(&p.operator(), &cfg)?;
    println!("{p}\n    {} after {} elements", rep.group, rep.closure_size);
    Ok(())
}
