//! Telescoper of a term given on the command line.
//!
//! `cargo run --release --example telescope -- "binomial(n,k)^7/(2*n+3*k)"`

use subtele::engine::{telescope, TelescopeOptions};
use subtele::term::parse_term;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let expr = std::env::args().nth(1).unwrap_or_else(|| "binomial(n,k)^7/(2*n+3*k)".into());
    let spec = parse_term(&expr)?;
    let t = telescope(&spec, &TelescopeOptions::default())?;
    println!("term        {expr}");
    println!("dim N       {}", t.dim);
    println!("R           {}", t.r());
    for c in &t.components {
        println!(
            "component   {:<12} dim {} order {}{}",
            c.label,
            c.dim(),
            c.l.order(),
            if c.zero_sum { "  (sums to zero)" } else { "" }
        );
    }
    println!("orders      L_left {}  telescoper {}  L_min {}", t.l_left.order(), t.l_expanded.order(), t.l_min.order());
    println!("bytes       factored {}  expanded {}", t.factored_bytes(), t.expanded_bytes());
    for (stage, d) in &t.timings {
        println!("time        {stage:<14} {:.3}s", d.as_secs_f64());
    }
    Ok(())
}
