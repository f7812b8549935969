//! Ore operator arithmetic in Q(n)[S_n]: products, right division and LCLM.

use subtele::ore::{parse_op, OreOp};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = parse_op("S - 2")?;
    let b = parse_op("(n+1)*S - (4*n+2)")?;
    let ab = &a * &b;
    println!("A       = {a}");
    println!("B       = {b}");
    println!("A*B     = {}", ab.normalize());
    println!("B*A     = {}", (&b * &a).normalize());

    let (q, r) = ab.right_divmod(&b)?;
    println!("A*B = Q*B + r with Q = {}, r = {}", q.normalize(), if r.is_zero() { "0".into() } else { r.to_string() });

    let l = OreOp::lclm(&[a.clone(), b.clone()])?;
    println!("LCLM    = {l}");
    for op in [&a, &b] {
        let (_, rem) = l.right_divmod(op)?;
        println!("  right-divisible by {op}: {}", rem.is_zero());
    }
    Ok(())
}
