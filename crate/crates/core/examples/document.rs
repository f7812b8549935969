//! Load a TOML term document and run the pipeline with its options.
//!
//! `cargo run --release --example document -- crates/core/examples/data/triple.toml`

use subtele::cli::verification;
use subtele::engine::{telescope, TelescopeOptions};
use subtele::term::parse_document;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/triple.toml").into());
    let doc = parse_document(&std::fs::read_to_string(&path)?)?;
    println!("term    {}", doc.expr);
    println!("k range {}", doc.k_range.to_text());
    let opts = TelescopeOptions {
        symmetry: doc.options.symmetry.unwrap_or(true),
        degree_cap: doc.options.degree_cap,
        ..Default::default()
    };
    let t = telescope(&doc.spec, &opts)?;
    println!("orders  telescoper {}  minimal {}", t.l_expanded.order(), t.l_min.order());
    if doc.options.minimal.unwrap_or(false) {
        println!("L_min   {}", t.l_min);
    }
    if let Some(n) = doc.options.verify {
        print!("{}", verification(&doc.spec, &doc.k_range, &t, n)?.table());
    }
    Ok(())
}
