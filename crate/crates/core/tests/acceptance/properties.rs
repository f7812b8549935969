//! Property suites run with a fixed seed so failures reproduce exactly.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use subtele::arith::linalg::{self, Matrix, Vector};
use subtele::arith::{PolyNK, RFuncN, RFuncNK, ZPoly};
use subtele::engine::{
    apply_twisted, automorphisms_on, decompose_space, krylov_annihilator, mat_pow, telescope, twisted_step,
    TelescopeOptions, TelescoperResult,
};
use subtele::ore::{OreOp, SeqWindow};
use subtele::reduction::{polyk_to_rfunc, ReductionContext};
use subtele::term::{parse_term, HTerm, KRange};
use subtele::verify::{check_annihilates, check_certificate, sum_sequence};

pub const SEED: [u8; 32] = *b"subtele-acceptance-fixed-seed-01";
pub const CASES: u32 = 256;

fn runner() -> TestRunner {
    let config = Config {
        cases: CASES,
        failure_persistence: None,
        rng_algorithm: RngAlgorithm::ChaCha,
        max_shrink_iters: 256,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED))
}

fn fail(msg: impl Into<String>) -> TestCaseError {
    TestCaseError::fail(msg.into())
}

fn zpoly(max_len: usize) -> impl Strategy<Value = ZPoly> {
    prop::collection::vec(-6i64..=6, 1..=max_len).prop_map(|v| ZPoly::new(v.into_iter().map(BigInt::from).collect()))
}

fn rfunc() -> impl Strategy<Value = RFuncN> {
    (zpoly(4), zpoly(3)).prop_filter_map("zero denominator", |(a, b)| RFuncN::new(a, b).ok())
}

fn nonzero_rfunc() -> impl Strategy<Value = RFuncN> {
    rfunc().prop_filter("zero", |f| !f.is_zero())
}

fn polynk(max_deg: usize) -> impl Strategy<Value = PolyNK> {
    prop::collection::vec((0..=max_deg, 0..=max_deg, -5i64..=5), 1..6).prop_map(move |ts| {
        PolyNK::from_terms(
            ts.into_iter()
                .filter(|(i, j, _)| i + j <= max_deg)
                .map(|(i, j, c)| (i, j, BigInt::from(c))),
        )
    })
}

fn rfunc_nk() -> impl Strategy<Value = RFuncNK> {
    (polynk(3), polynk(2)).prop_filter_map("zero denominator", |(a, b)| RFuncNK::normalize(a, b).ok())
}

fn ore_op(min_len: usize) -> impl Strategy<Value = OreOp> {
    prop::collection::vec(rfunc(), min_len..=3)
        .prop_map(OreOp::from_coeffs)
        .prop_filter("zero operator", |o| !o.is_zero())
}

/// Field and shift laws in Q(n) and Q(n,k).
pub fn field_and_shift_laws() -> Result<(), String> {
    let mut r = runner();
    r.run(&(rfunc(), rfunc(), nonzero_rfunc(), -3i64..=3, -3i64..=3), |(a, b, c, s, t)| {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert!((&c * &c.inv().unwrap()).is_one());
        prop_assert_eq!(&(&a / &c) * &c, a.clone());
        prop_assert_eq!((&a * &b).shift(s), &a.shift(s) * &b.shift(s));
        prop_assert_eq!((&a + &b).shift(s), &a.shift(s) + &b.shift(s));
        prop_assert_eq!(a.shift(s).shift(t), a.shift(s + t));
        for x in -4i64..=4 {
            if let (Ok(va), Ok(vb)) = (a.eval_int(x), b.eval_int(x)) {
                prop_assert_eq!((&a * &b).eval_int(x).unwrap(), &va * &vb);
                prop_assert_eq!((&a + &b).eval_int(x).unwrap(), &va + &vb);
            }
        }
        Ok(())
    })
    .map_err(|e| format!("Q(n): {e}"))?;
    let mut r = runner();
    r.run(&(rfunc_nk(), rfunc_nk(), -2i64..=2, -2i64..=2), |(a, b, dn, dk)| {
        prop_assert_eq!((&a * &b).shift_int(dn, dk), &a.shift_int(dn, dk) * &b.shift_int(dn, dk));
        prop_assert_eq!((&a + &b).shift_int(dn, dk), &a.shift_int(dn, dk) + &b.shift_int(dn, dk));
        prop_assert_eq!(a.shift_int(dn, 0).shift_int(0, dk), a.shift_int(dn, dk));
        prop_assert_eq!(a.reflect_k().reflect_k(), a.clone());
        if !b.is_zero() {
            prop_assert_eq!(&(&a * &b) / &b, a.clone());
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
        }
        Ok(())
    })
    .map_err(|e| format!("Q(n,k): {e}"))
}

/// Associativity, right division with remainder, LCLM divisibility and
/// composition of the action on sequences.
pub fn ore_laws() -> Result<(), String> {
    let mut r = runner();
    let window = prop::collection::vec(-50i64..=50, 12);
    r.run(&(ore_op(1), ore_op(2), ore_op(1), window), |(a, b, c, w)| {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        let (q, rem) = a.right_divmod(&b).map_err(|e| fail(e.to_string()))?;
        prop_assert_eq!(&(&q * &b) + &rem, a.clone());
        prop_assert!(rem.is_zero() || rem.order() < b.order() || rem.high_exp() < b.high_exp());
        let (_, rem) = (&a * &b).right_divmod(&b).map_err(|e| fail(e.to_string()))?;
        prop_assert!(rem.is_zero());
        let l = OreOp::lclm(&[a.clone(), b.clone()]).map_err(|e| fail(e.to_string()))?;
        prop_assert!(l.order() <= a.order() + b.order());
        for x in [&a, &b] {
            // Shifts are units: divisibility is up to a power of S on the right.
            let x = x.shift_right(-x.low_exp());
            let (_, rem) = l.right_divmod(&x).map_err(|e| fail(e.to_string()))?;
            prop_assert!(rem.is_zero(), "lclm not divisible by {}", x);
        }
        prop_assert!(l.is_normalized());
        let s = SeqWindow::from_ints(0, &w);
        if let (Ok(lhs), Ok(inner)) = ((&a * &b).apply(&s), b.apply(&s)) {
            if let Ok(rhs) = a.apply(&inner) {
                prop_assert_eq!(lhs.values, rhs.values);
            }
        }
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn contexts() -> &'static Mutex<HashMap<String, &'static ReductionContext>> {
    static C: OnceLock<Mutex<HashMap<String, &'static ReductionContext>>> = OnceLock::new();
    C.get_or_init(Default::default)
}

fn context(expr: &str) -> &'static ReductionContext {
    let mut m = contexts().lock().unwrap();
    m.entry(expr.to_string()).or_insert_with(|| {
        let (_, ctx) = ReductionContext::for_term(&parse_term(expr).unwrap(), None).unwrap();
        Box::leak(Box::new(ctx))
    })
}

/// `f - frac - poly = S_k(g) R2 - g` for random `f` with affine poles.
pub fn reduction_soundness() -> Result<(), String> {
    let mut r = runner();
    let strat = (1i32..=3, polynk(3), 0usize..=1, 0i64..=3);
    r.run(&strat, |(s, num, j, c)| {
        let ctx = context(&format!("binomial(n,k)^{s}"));
        let den = PolyNK::from_terms([(1, 0, BigInt::from(2)), (0, 1, BigInt::from(3)), (0, 0, BigInt::from(c))]).pow(j as u32);
        let f = RFuncNK::normalize(num, den).unwrap();
        let sf = ctx.std_form(&f, true).map_err(|e| fail(e.to_string()))?;
        let g = sf.cert.clone().unwrap();
        let lhs = &(&f - &sf.frac_rfunc()) - &polyk_to_rfunc(&sf.poly);
        prop_assert_eq!(lhs, ctx.delta_k(&g), "f = {}", f);
        for d in 0..=sf.poly.degree().unwrap_or(0) {
            prop_assert!(sf.poly.coeff(d).is_zero() || ctx.basis().degrees.contains(&d), "degree {} outside the basis", d);
        }
        Ok(())
    })
    .map_err(|e| e.to_string())
}

struct Split {
    a: Matrix,
    auts: Vec<(u32, Matrix)>,
    projectors: Vec<Matrix>,
}

const SPLIT_TERMS: &[&str] = &[
    "binomial(n,k)^3",
    "binomial(n,k)^4",
    "binomial(n,k)^5",
    "binomial(n,k)^6",
    "binomial(3*n,3*k)^2*binomial(3*n,3*k+1)",
    "binomial(2*n,2*k)^3",
];

fn splits() -> &'static Vec<Split> {
    static S: OnceLock<Vec<Split>> = OnceLock::new();
    S.get_or_init(|| {
        SPLIT_TERMS
            .iter()
            .map(|e| {
                let ctx = context(e);
                let auts = automorphisms_on(ctx).unwrap();
                let pieces = decompose_space(&auts, ctx.dim()).unwrap();
                Split {
                    a: ctx.sn_matrix().unwrap().a,
                    auts: auts.into_iter().map(|(a, m)| (a.order, m)).collect(),
                    projectors: pieces.into_iter().map(|p| p.projector).collect(),
                }
            })
            .collect()
    })
}

fn random_vector(dim: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(rfunc(), dim)
}

/// Exact matrix identities for every term in the list, checked once.
fn projector_matrix_identities() -> Result<(), String> {
    for (e, s) in SPLIT_TERMS.iter().zip(splits()) {
        let d = s.a.len();
        let id = linalg::identity(d);
        for (order, m) in &s.auts {
            if mat_pow(m, *order) != id {
                return Err(format!("{e}: automorphism of order {order} does not power to I"));
            }
        }
        let mut sum = linalg::zeros(d, d);
        for (i, p) in s.projectors.iter().enumerate() {
            sum = linalg::mat_add(&sum, p);
            for (j, q) in s.projectors.iter().enumerate() {
                let pq = linalg::mat_mul(p, q);
                let want = if i == j { p.clone() } else { linalg::zeros(d, d) };
                if pq != want {
                    return Err(format!("{e}: projectors {i},{j} fail P_i P_j = delta_ij P_i"));
                }
            }
        }
        if sum != id {
            return Err(format!("{e}: projectors do not sum to I"));
        }
    }
    Ok(())
}

/// Projectors split random vectors; automorphisms have the stated order.
pub fn projector_identities() -> Result<(), String> {
    projector_matrix_identities()?;
    let mut r = runner();
    let strat = (0..SPLIT_TERMS.len()).prop_flat_map(|i| (Just(i), random_vector(splits()[i].a.len())));
    r.run(&strat, |(i, v)| {
        let s = &splits()[i];
        for (order, m) in &s.auts {
            let mut w = v.clone();
            for _ in 0..*order {
                w = linalg::mat_vec(m, &w);
            }
            prop_assert_eq!(&w, &v);
        }
        let parts: Vec<Vector> = s.projectors.iter().map(|p| linalg::mat_vec(p, &v)).collect();
        let mut total = vec![RFuncN::zero(); v.len()];
        for p in &parts {
            total = total.iter().zip(p).map(|(x, y)| x + y).collect();
        }
        prop_assert_eq!(&total, &v);
        for (pi, part) in s.projectors.iter().zip(&parts) {
            prop_assert_eq!(&linalg::mat_vec(pi, part), part);
        }
        Ok(())
    })
    .map_err(|e| e.to_string())
}

/// The Krylov annihilator kills its target and has order equal to the Krylov rank.
pub fn krylov_annihilation() -> Result<(), String> {
    let mut r = runner();
    // Terms with dim N at most 5 keep random targets cheap.
    let idx: Vec<usize> = (0..SPLIT_TERMS.len()).filter(|&i| splits()[i].a.len() <= 5).collect();
    let strat = prop::sample::select(idx).prop_flat_map(|i| (Just(i), random_vector(splits()[i].a.len())));
    r.run(&strat, |(i, v)| {
        if linalg::is_zero_vec(&v) {
            return Ok(());
        }
        let a = &splits()[i].a;
        let l = krylov_annihilator(&v, a).map_err(|e| fail(e.to_string()))?;
        prop_assert!(linalg::is_zero_vec(&apply_twisted(&l, a, &v)));
        let mut seq = vec![v.clone()];
        for _ in 0..a.len() {
            let next = twisted_step(a, seq.last().unwrap());
            seq.push(next);
        }
        prop_assert_eq!(l.order(), linalg::rank(&linalg::transpose(&seq)));
        prop_assert!(l.is_normalized());
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn pipeline(expr: &str) -> &'static TelescoperResult {
    static C: OnceLock<Mutex<HashMap<String, &'static TelescoperResult>>> = OnceLock::new();
    let mut m = C.get_or_init(Default::default).lock().unwrap();
    m.entry(expr.to_string()).or_insert_with(|| {
        let opts = TelescopeOptions {
            certificate: true,
            ..Default::default()
        };
        Box::leak(Box::new(telescope(&parse_term(expr).unwrap(), &opts).unwrap()))
    })
}

fn pipeline_term() -> impl Strategy<Value = String> {
    let pre = prop_oneof![
        Just(String::new()),
        (1i64..=3).prop_map(|c| format!("/(n+k+{c})")),
        (1i64..=3).prop_map(|c| format!("/(2*n+3*k+{c})")),
        (1i64..=2).prop_map(|c| format!("/(n+2*k+{c})")),
    ];
    (1i32..=3, pre).prop_map(|(s, p)| format!("binomial(n,k)^{s}{p}"))
}

/// `R` right-divides the telescoper and the minimal recurrence, every
/// component operator right-divides `L_left`, and certificates imply
/// annihilation of the exact sums.
pub fn right_divisibility() -> Result<(), String> {
    let mut r = runner();
    r.run(&pipeline_term(), |expr| {
        let t = pipeline(&expr);
        let div = |a: &OreOp, b: &OreOp| a.right_divmod(b).map(|(_, rem)| rem.is_zero()).unwrap_or(false);
        prop_assert!(div(&t.l_expanded, t.r()), "{}: R does not divide the telescoper", expr);
        prop_assert!(div(&t.l_min, t.r()), "{}: R does not divide L_min", expr);
        prop_assert_eq!(t.l_expanded.order(), t.l_left.order() + t.r().order());
        for c in &t.components {
            prop_assert!(div(&t.l_left, &c.l), "{}: {} does not divide L_left", expr, c.label);
        }
        let spec = parse_term(&expr).unwrap();
        let c = t.certificates.as_ref().unwrap();
        prop_assert!(check_certificate(&t.l_expanded, &c.telescoper, &HTerm::new(&spec)));
        let sums = sum_sequence(&spec, &KRange::Natural, 1, 15 + t.l_expanded.high_exp()).map_err(|e| fail(e.to_string()))?;
        let check = check_annihilates("telescoper", &t.l_expanded, &sums).map_err(|e| fail(e.to_string()))?;
        prop_assert!(check.passed, "{}: certificate holds but sums are not annihilated", expr);
        Ok(())
    })
    .map_err(|e| e.to_string())
}
