use super::*;
use crate::arith::parse::{expr_to_rfunc, parse_expr};
use crate::term::{eval_term, parse_term};
use num_rational::BigRational;

fn rf(s: &str) -> RFuncNK {
    expr_to_rfunc(&parse_expr(s, &["n", "k"]).unwrap()).unwrap()
}

fn rn(s: &str) -> RFuncN {
    let f = rf(s);
    assert!(f.is_k_free());
    RFuncN::new(f.num().k_coeff(0), f.den().k_coeff(0)).unwrap()
}

fn ctx_for(expr: &str) -> ReductionContext {
    ReductionContext::for_term(&parse_term(expr).unwrap(), None).unwrap().1
}

/// sum_k f(n,k) H0(n,k) over the support of H0, evaluated exactly.
fn weighted_sum(ctx: &ReductionContext, f: &RFuncNK, n: i64) -> BigRational {
    let spec = &ctx.h0.spec;
    let (lo, hi) = crate::term::natural_support(spec, n).unwrap();
    (lo..=hi)
        .map(|k| f.eval_int(n, k).unwrap() * eval_term(spec, n, k).unwrap())
        .fold(BigRational::zero(), |a, b| a + b)
}

#[test]
fn binomial_basis() {
    let ctx = ctx_for("binomial(n,k)");
    assert_eq!(ctx.dim(), 1);
    assert_eq!(ctx.coords(&PolyK::monomial(RFuncN::one(), 1)).unwrap(), vec![rn("n/2")]);
    let a = ctx.sn_matrix().unwrap();
    assert_eq!(a.a, vec![vec![RFuncN::from_int(2)]]);
    assert!(ctx.coords(&PolyK::zero()).unwrap().iter().all(|c| c.is_zero()));
    // m_1 = (n/2) m_0 is recorded as a relation.
    assert_eq!(ctx.basis().relations[0], (1, vec![rn("n/2")]));
}

#[test]
fn dims_of_binomial_powers() {
    for s in 1..=7 {
        let ctx = ctx_for(&format!("binomial(n,k)^{s}"));
        let r = (s + 1) / 2;
        assert_eq!(ctx.dim(), 2 * r - 1, "s = {s}");
        assert_eq!(ctx.basis().degrees, (0..2 * r - 1).collect::<Vec<_>>());
    }
}

#[test]
fn sums_match_coordinates() {
    // Summation is a linear functional that kills Delta_k(Omega): the
    // weighted sum equals the sum of the standard form.
    let ctx = ctx_for("binomial(n,k)^3");
    for (f, summable) in [
        ("k^5", true),
        ("k^4*(n-k)", true),
        ("1/(k+1)^2", true),
        ("(k+1)^2/(n-k+2)", true),
        // H0(n+1, k): its support reaches past k = n.
        ("(n+1)^3/(n-k+1)^3", false),
    ] {
        let f = rf(f);
        let sf = ctx.std_form(&f, true).unwrap();
        assert!(sf.frac_is_zero(), "{f}");
        let back = polyk_to_rfunc(&sf.poly);
        for n in (4..9).filter(|_| summable) {
            assert_eq!(weighted_sum(&ctx, &f, n), weighted_sum(&ctx, &back, n), "{f} at n={n}");
        }
        let g = sf.cert.unwrap();
        assert_eq!(&f - &back, ctx.delta_k(&g), "{f}");
    }
}

#[test]
fn k_squared_times_binomial() {
    let ctx = ctx_for("binomial(n,k)");
    let sf = ctx.std_form(&rf("k^2"), true).unwrap();
    assert!(sf.frac_is_zero());
    // sum k^2 binom(n,k) = n(n+1) 2^(n-2)
    assert_eq!(sf.coords, vec![rn("n*(n+1)/4")]);
}

#[test]
fn eq5_kernel() {
    let (red, ctx) = ReductionContext::for_term(&parse_term("binomial(n,k)^7/(2*n+3*k)").unwrap(), None).unwrap();
    assert_eq!(ctx.dim(), 7);
    let sf = ctx.std_form(&ctx.h0.r1, true).unwrap();
    assert!(sf.frac_is_zero());
    assert!(sf.poly.deg_or_zero() <= 6);
    // sum_k binom(n+1,k)^7 = sum of the reduced form against binom(n,k)^7
    let back = polyk_to_rfunc(&sf.poly);
    for n in 2..6 {
        let spec = &ctx.h0.spec;
        let lhs: BigRational = (0..=n + 1).map(|k| eval_term(spec, n + 1, k).unwrap()).sum();
        assert_eq!(lhs, weighted_sum(&ctx, &back, n));
    }
    assert_eq!(&ctx.h0.r1 - &polyk_to_rfunc(&sf.poly), ctx.delta_k(sf.cert.as_ref().unwrap()));
    let sf = ctx.std_form(&red.r0, true).unwrap();
    assert!(!sf.frac_is_zero());
    let root = Root::new(BigRational::new((-2).into(), 3.into()), BigRational::zero());
    assert_eq!(sf.frac.poles.keys().cloned().collect::<Vec<_>>(), vec![root]);
    let g = sf.cert.clone().unwrap();
    assert_eq!(&(&red.r0 - &sf.frac_rfunc()) - &polyk_to_rfunc(&sf.poly), ctx.delta_k(&g));
}

#[test]
fn shifted_poles_share_a_canonical_form() {
    let ctx = ctx_for("binomial(n,k)^2");
    let a = ctx.std_form(&rf("1/(2*n+3*k)"), false).unwrap();
    let b = ctx.std_form(&rf("1/(2*n+3*k+3)"), false).unwrap();
    assert_eq!(a.frac.poles.keys().collect::<Vec<_>>(), b.frac.poles.keys().collect::<Vec<_>>());
    let sum = ctx.std_form(&rf("1/(2*n+3*k) + 1/(2*n+3*k+3)"), false).unwrap();
    let mut lin = a.frac.clone();
    lin.add(&b.frac);
    assert_eq!(sum.frac_rfunc(), lin.frac_rfunc());
    let z = ctx.std_form(&(&rf("1/(2*n+3*k)") - &rf("1/(2*n+3*k)")), false).unwrap();
    assert!(z.frac_is_zero());
}

#[test]
fn twisted_action() {
    let ctx = ctx_for("binomial(n,k)^2");
    let a = ctx.sn_matrix().unwrap();
    assert!(a.invertible);
    for p in ["k^3+n*k", "k^2/(n+1)", "n^2"] {
        let f = rf(p);
        let u = ctx.std_form(&f, false).unwrap().coords;
        let lhs = ctx.std_form(&ctx.sn_apply(&f), false).unwrap().coords;
        let rhs = linalg::mat_vec(&a.a, &linalg::shift_vec(&u, 1));
        assert_eq!(lhs, rhs, "{p}");
    }
}

#[test]
fn section6_kernel() {
    let ctx = ctx_for("binomial(3*n,3*k)^2*binomial(3*n,3*k+1)");
    assert_eq!(ctx.dim(), 9);
    let sf = ctx.std_form(&ctx.h0.r1, true).unwrap();
    assert!(sf.frac_is_zero());
    assert_eq!(&ctx.h0.r1 - &polyk_to_rfunc(&sf.poly), ctx.delta_k(sf.cert.as_ref().unwrap()));
}

#[test]
fn json_form() {
    let ctx = ctx_for("binomial(n,k)");
    let v = ctx.std_form(&rf("k"), true).unwrap().to_json();
    assert_eq!(v["frac"], "0");
    assert_eq!(v["poly_coords"][0], "n/2");
    assert!(v.get("cert").is_some());
}
