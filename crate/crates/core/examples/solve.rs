//! Evaluate the explicit algebraic solutions and check them against the
//! Lamé operator.
//!
//! cargo run --example solve -- 2c 0.5+1.5i

use klein_lame::cli::parse_complex;
use klein_lame::solutions::{evaluate, solution_basis};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let labels = match args.first() {
        Some(l) => vec![l.clone()],
        None => ["1", "2a", "2b", "2c", "3"].map(String::from).to_vec(),
    };
    let x0 = parse_complex(args.get(1).map_or("0.5+1.5i", String::as_str))?;
    for label in labels {
        let basis = solution_basis(&label)?;
        println!("case {label}: z(τ) = {}", basis.chain());
        for k in [0, basis.degree() / 3, 2 * basis.degree() / 3] {
            let ev = evaluate(&basis, x0, k, 1e-12)?;
            println!(
                "    branch {k:>2}: τ = {:.6}, u1 = {:.6}, residuals ({:.1e}, {:.1e})",
                ev.tau, ev.u1.value, ev.residuals.0, ev.residuals.1
            );
        }
    }
    Ok(())
}
