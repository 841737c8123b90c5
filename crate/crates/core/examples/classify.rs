//! Which finite projective monodromy groups a Lamé operator of degree ℓ can
//! have, on the projective line and on the elliptic curve.
//!
//! cargo run --example classify -- 1/6

use klein_lame::exactalg::parse_rational;
use klein_lame::lame::{classify_algebraic, classify_weierstrass};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let ells = if args.is_empty() {
        vec!["1/6".to_string(), "1/4".into(), "1/10".into(), "3/10".into(), "1/3".into(), "5/2".into()]
    } else {
        args
    };
    for s in ells {
        let ell = parse_rational(&s)?;
        let line = classify_algebraic(&ell);
        let curve = classify_weierstrass(&ell);
        let groups: Vec<String> = line.base_groups().iter().map(|g| g.short_name()).collect();
        let pairs: Vec<String> = curve
            .pairs()
            .iter()
            .map(|(c, b)| format!("{} over {}", c.short_name(), b.short_name()))
            .collect();
        if line.classical {
            println!("ℓ = {s:>5}: 2ℓ is an integer (Lamé polynomial territory)");
        } else {
            println!("ℓ = {s:>5}: line {:?}, curve {:?}", groups, pairs);
        }
    }
    Ok(())
}
