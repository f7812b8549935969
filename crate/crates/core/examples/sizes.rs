//! Factored telescoper (component operators and R) against the expanded product.

use std::time::Instant;

use subtele::engine::{telescope, TelescopeOptions};
use subtele::term::parse_term;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let expr = std::env::args().nth(1).unwrap_or_else(|| "binomial(n,k)^7/(2*n+3*k)".into());
    let spec = parse_term(&expr)?;
    let t0 = Instant::now();
    let t = telescope(&spec, &TelescopeOptions::default())?;
    let secs = t0.elapsed().as_secs_f64();
    println!("{expr}  ({secs:.1}s)");
    println!("{:<12} {:>6} {:>7} {:>10}", "operator", "order", "degree", "bytes");
    let row = |name: &str, op: &subtele::ore::OreOp| {
        println!("{name:<12} {:>6} {:>7} {:>10}", op.order(), op.degree_in_n(), op.text_bytes());
    };
    row("R", t.r());
    for c in &t.components {
        row(&c.label, &c.l);
    }
    row("L_min", &t.l_min);
    row("L_expanded", &t.l_expanded);
    let (f, e) = (t.factored_bytes(), t.expanded_bytes());
    println!("factored/expanded = {f}/{e} = {:.3}", f as f64 / e as f64);
    Ok(())
}
