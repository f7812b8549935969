//! Recurrence guessing from exact sums, compared with the telescoping result.

use subtele::engine::{telescope, TelescopeOptions};
use subtele::term::{parse_term, KRange};
use subtele::verify::{annihilates_window, guess_recurrence, required_window, sum_sequence};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let expr = std::env::args().nth(1).unwrap_or_else(|| "binomial(n,k)^6".into());
    let spec = parse_term(&expr)?;
    let t = telescope(&spec, &TelescopeOptions::default())?;
    let (order, degree) = (t.l_min.order(), t.l_min.degree_in_n());
    let len = required_window(order, degree + 2) as i64;
    let sums = sum_sequence(&spec, &KRange::Natural, 1, len)?;
    let g = guess_recurrence(&sums, order, degree + 2)?.ok_or("nothing found within the caps")?;
    println!("telescoping  order {order} degree {degree}: {}", t.l_min);
    println!("guessing     order {} degree {}: {g}", g.order(), g.degree_in_n());
    println!("guess kills the sums on n=1..{len}: {}", annihilates_window(&g, &sums));
    println!("same operator: {}", g == t.l_min);
    Ok(())
}
