//! Rational certificate c with L(H) = Delta_k(c*H), checked as an identity in Q(n,k).

use subtele::engine::{telescope, TelescopeOptions};
use subtele::term::{parse_term, HTerm};
use subtele::verify::{check_certificate, check_certificate_with_residual};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let expr = std::env::args().nth(1).unwrap_or_else(|| "binomial(n,k)^2/(n+k+1)".into());
    let spec = parse_term(&expr)?;
    let opts = TelescopeOptions {
        certificate: true,
        ..Default::default()
    };
    let t = telescope(&spec, &opts)?;
    let c = t.certificates.as_ref().expect("requested");
    let h = HTerm::new(&spec);
    println!("L = {}", t.l_expanded);
    println!("c = {}", c.telescoper);
    println!("L(H) = Delta_k(c*H): {}", check_certificate(&t.l_expanded, &c.telescoper, &h));
    println!("R(H) = p*H + Delta_k(c_R*H): {}", check_certificate_with_residual(t.r(), &c.r_cert, &h, &c.r_residual));
    Ok(())
}
