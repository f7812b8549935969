use super::*;
use crate::arith::RFuncN;
use crate::term::parse_term;

fn run(expr: &str) -> TelescoperResult {
    telescope(&parse_term(expr).unwrap(), &TelescopeOptions::default()).unwrap()
}

#[test]
fn binomial_sum() {
    let t = run("binomial(n,k)");
    assert_eq!(t.r().order(), 0);
    assert_eq!(t.l_expanded.to_text(), "S - 2");
    assert_eq!(t.l_min.to_text(), "S - 2");
}

#[test]
fn reciprocal_shift_factor() {
    // H = binom(n,k)/(n+k+1): R has order one.
    let t = run("binomial(n,k)/(n+k+1)");
    assert_eq!(t.r().order(), 1);
    assert!(t.right.fast_path);
}

#[test]
fn binomial_powers() {
    for s in 1..=4 {
        let t = run(&format!("binomial(n,k)^{s}"));
        let r = (s + 1) / 2;
        assert_eq!(t.l_expanded.order(), r, "s = {s}");
        let (_, rem) = t.l_expanded.right_divmod(t.r()).unwrap();
        assert!(rem.is_zero());
        for c in &t.components {
            assert!(apply_twisted(&c.l, &t.sn, &c.target).iter().all(RFuncN::is_zero));
        }
    }
}

#[test]
fn certificates_check() {
    use crate::term::HTerm;
    use crate::verify::{check_certificate, check_certificate_with_residual};
    for e in ["binomial(n,k)^2", "binomial(n,k)/(n+k+1)", "binomial(n,k)^3/(2*n+3*k)"] {
        let spec = parse_term(e).unwrap();
        let opts = TelescopeOptions {
            certificate: true,
            ..Default::default()
        };
        let t = telescope(&spec, &opts).unwrap();
        let c = t.certificates.as_ref().unwrap();
        let h = HTerm::new(&spec);
        assert!(check_certificate_with_residual(t.r(), &c.r_cert, &h, &c.r_residual), "{e}");
        assert!(check_certificate(&t.l_expanded, &c.telescoper, &h), "{e}");
        let bad = &c.telescoper + &crate::arith::RFuncNK::one();
        assert!(!check_certificate(&t.l_expanded, &bad, &h), "{e}");
    }
}

#[test]
fn certificate_after_normalization() {
    use crate::term::HTerm;
    use crate::verify::check_certificate;
    let spec = parse_term("binomial(n,k)^3/(n+k+3)").unwrap();
    let opts = TelescopeOptions {
        certificate: true,
        ..Default::default()
    };
    let t = telescope(&spec, &opts).unwrap();
    let c = t.certificates.as_ref().unwrap();
    assert!(check_certificate(&t.l_expanded, &c.telescoper, &HTerm::new(&spec)));
}
