//! The basic Schwarz list: triples, polyhedral functions and the cycle
//! structure of their fibers over 0, 1 and ∞.

use klein_lame::numeric::ProjPoint;
use klein_lame::schwarz::{schwarz_case, BasicCase, SchwarzEntry, SchwarzTriple, Vertex};

fn main() -> klein_lame::Result<()> {
    let cases = [BasicCase::Cyclic(5), BasicCase::I(3), BasicCase::II, BasicCase::IV, BasicCase::VI];
    for case in cases {
        let e = SchwarzEntry::basic(case);
        println!("{:<7} {}  {}  degree {}", case.label(), e.triple, e.group.short_name(), e.degree());
        for v in [Vertex::Zero, Vertex::One, Vertex::Infinity] {
            let fiber = e.polyhedral.vertex_fiber(v)?;
            let inf = fiber.iter().any(|(p, _)| *p == ProjPoint::Infinity);
            let mut mults: Vec<usize> = fiber.iter().map(|(_, m)| *m).collect();
            mults.sort_unstable();
            mults.dedup();
            println!(
                "    over {:?}: {} points of multiplicity {:?}{}",
                v,
                fiber.len(),
                mults,
                if inf { ", including w = ∞" } else { "" }
            );
        }
    }

    println!();
    for s in ["1/2,1/3,2/5", "1/2,4/3,1/4", "1/2,1/2,1/7", "1/2,1/3,1/7", "3/5,2/5,1/3"] {
        let t = SchwarzTriple::parse(s)?;
        match schwarz_case(&t)? {
            Some(c) => println!("{t}: case {} ({}), normalized {}", c.label, c.group.short_name(), c.normalized),
            None => println!("{t}: not on the list"),
        }
    }
    Ok(())
}
