//! Exact verification of the built-in pullback maps, followed by a
//! perturbed operator that must fail.

use klein_lame::exactalg::{parse_ratfunc, q};
use klein_lame::lame::LameParameters;
use klein_lame::pullback::{certificate_degree_relation, exponent_transport, is_weak_pullback, named_maps};
use klein_lame::schwarz::SchwarzTriple;

fn main() -> klein_lame::Result<()> {
    for m in named_maps() {
        let cert = m.certificate()?;
        let transport_ok = exponent_transport(&cert)?.iter().all(|r| r.holds);
        let rel = certificate_degree_relation(&cert)?;
        println!(
            "{:<22} deg {:>2}  {} <- hypergeometric{}  verified={} transport={} degree formula={}",
            m.name,
            m.xi.degree(),
            m.target,
            m.source,
            cert.verified,
            transport_ok,
            rel.admits(m.xi.degree()),
        );
    }

    let perturbed = LameParameters::new(q(1, 6), q(1, 7), q(4, 1), q(0, 1))?;
    let cert = is_weak_pullback(
        &perturbed.operator(),
        &SchwarzTriple::from_ints([(1, 2), (1, 3), (1, 4)]),
        &parse_ratfunc("(x^2-1)/x^2")?,
    )?;
    println!("\nB = 1/7: verified={}", cert.verified);
    if let Some(w) = cert.residual_witness {
        println!("witness (lhs - rhs): {w}");
    }
    Ok(())
}
