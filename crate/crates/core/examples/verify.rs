//! Exact sums and an annihilation report for the minimal recurrence and the telescoper.
//!
//! `cargo run --release --example verify -- "binomial(n,k)^4" 40`

use subtele::cli::verification;
use subtele::engine::{telescope, TelescopeOptions};
use subtele::term::{parse_term, KRange};
use subtele::verify::sum_sequence;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let expr = args.next().unwrap_or_else(|| "binomial(n,k)^5".into());
    let n: i64 = args.next().map_or(Ok(30), |s| s.parse())?;
    let spec = parse_term(&expr)?;
    let sums = sum_sequence(&spec, &KRange::Natural, 1, 6)?;
    for (i, v) in sums.values.iter().enumerate() {
        println!("a({}) = {v}", i + 1);
    }
    let t = telescope(&spec, &TelescopeOptions::default())?;
    println!("L_min = {}", t.l_min);
    let report = verification(&spec, &KRange::Natural, &t, n)?;
    print!("{}", report.table());
    std::process::exit(if report.passed() { 0 } else { 1 });
}
