//! Reduction modulo Delta_k: kernel, basis of N, the S_n matrix and the right factor R.
//!
//! `cargo run --release --example reduce -- "binomial(n,k)^2/(n+k+1)"`

use subtele::engine::right_factor;
use subtele::reduction::ReductionContext;
use subtele::term::parse_term;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let expr = std::env::args().nth(1).unwrap_or_else(|| "binomial(n,k)^3/(2*n+3*k)".into());
    let spec = parse_term(&expr)?;
    let (red, ctx) = ReductionContext::for_term(&spec, None)?;
    println!("H   = {expr}");
    println!("H0  = {}", red.h0.spec.to_text());
    println!("R0  = {}", red.r0);
    let basis = ctx.basis();
    println!("N has dimension {} with basis k^d*H0, d in {:?}", basis.dim, basis.degrees);
    for (d, coords) in basis.relations.iter().take(3) {
        let c: Vec<String> = coords.iter().map(|x| x.to_string()).collect();
        println!("  k^{d}*H0 = [{}]", c.join(", "));
    }
    let sn = ctx.sn_matrix()?;
    println!("S_n acts on N by");
    for row in &sn.a {
        let c: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        println!("  [{}]", c.join(", "));
    }
    let right = right_factor(&red, &ctx)?;
    println!("R   = {}", right.r);
    println!("R(m) = ({}) * H0", right.residual);
    Ok(())
}
