//! Automorphisms of binomial(n,k)^s split N into even and odd parts.
//!
//! The odd part sums to zero, so only the even component enters the
//! minimal recurrence.

use subtele::engine::{telescope, TelescopeOptions};
use subtele::term::TermSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>2} {:>5} {:>14} {:>10} {:>6}", "s", "dim N", "components", "telescoper", "L_min");
    for s in 1..=6 {
        let t = telescope(&TermSpec::binomial_power(s), &TelescopeOptions::default())?;
        let comps: Vec<String> = t
            .components
            .iter()
            .map(|c| format!("{}:{}", c.label, c.dim()))
            .chain(t.dropped.iter().map(|d| format!("{}:{}*", d.label, d.dim)))
            .collect();
        println!(
            "{s:>2} {:>5} {:>14} {:>10} {:>6}",
            t.dim,
            comps.join(" "),
            t.l_expanded.order(),
            t.l_min.order()
        );
    }
    println!("(* dropped: the target has no component there)");
    Ok(())
}
