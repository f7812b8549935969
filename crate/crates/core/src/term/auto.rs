//! Automorphisms `k -> n - k` and `k -> k + 1/p` of the term module.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::affine::{self, Affine, Factored};
use super::TermSpec;
use crate::arith::{RFuncN, RFuncNK};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum AutKind {
    Phi,
    Tau(u32),
}

impl AutKind {
    pub fn order(&self) -> u32 {
        match self {
            AutKind::Phi => 2,
            AutKind::Tau(p) => *p,
        }
    }

    pub fn name(&self) -> String {
        match self {
            AutKind::Phi => "phi".into(),
            AutKind::Tau(p) => format!("tau({p})"),
        }
    }

    fn image(&self, f: &Affine) -> Option<Affine> {
        match self {
            AutKind::Phi => Some(f.reflect()),
            AutKind::Tau(p) => {
                let p = BigInt::from(*p);
                f.b.is_multiple_of(&p).then(|| f.add_const(&(&f.b / &p)))
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Automorphism {
    pub kind: AutKind,
    /// `image(H) / H`.
    pub ratio: RFuncNK,
    pub order: u32,
}

/// `image(H)/H`, or `None` when the image is not a rational multiple of `H`.
pub fn automorphism_ratio(spec: &TermSpec, kind: AutKind) -> Option<RFuncNK> {
    if let AutKind::Tau(p) = kind {
        if p == 0 {
            return None;
        }
    }
    let mut net: BTreeMap<Affine, i32> = BTreeMap::new();
    for (arg, e) in spec.gammas() {
        let img = kind.image(&arg)?;
        *net.entry(img).or_insert(0) += e;
        *net.entry(arg).or_insert(0) -= e;
    }
    net.retain(|_, e| *e != 0);
    // Group by linear part; each class must balance.
    let mut classes: BTreeMap<(BigInt, BigInt), Vec<(BigInt, i32)>> = BTreeMap::new();
    for (arg, e) in net {
        classes.entry((arg.a.clone(), arg.b.clone())).or_default().push((arg.c, e));
    }
    let mut out = Factored::one();
    for ((a, b), items) in classes {
        if items.iter().map(|x| x.1).sum::<i32>() != 0 {
            return None;
        }
        let c0 = items.iter().map(|x| x.0.clone()).min().unwrap();
        let base = Affine::new(a, b, c0.clone());
        for (c, e) in items {
            // (base + d)! = base! * prod_{i=1..d} (base + i)
            let d = (&c - &c0).to_i64()?;
            affine::push_range(&mut out, &base, 1, d, e);
        }
    }
    for (q, arg) in spec.geometric() {
        if q.is_one() {
            continue;
        }
        let img = kind.image(&arg)?;
        let diff = img.sub(&arg);
        if !diff.a.is_zero() || !diff.b.is_zero() {
            return None;
        }
        let c = affine::rational_pow(&q, &diff.c);
        out.scale = &out.scale * &RFuncN::from_rational(&c);
    }
    let mut ratio = out.to_rfunc();
    if !spec.prefactor.is_one() {
        let img = match kind {
            AutKind::Phi => spec.prefactor.reflect_k(),
            AutKind::Tau(p) => spec.prefactor.shift(0, &BigRational::new(BigInt::one(), p.into())),
        };
        ratio = &ratio * &(&img / &spec.prefactor);
    }
    Some(ratio)
}

/// `phi` when it acts, and `tau(p)` for the largest `p >= 2` dividing every
/// k-coefficient of the factorial arguments.
pub fn detect_automorphisms(spec: &TermSpec) -> Vec<Automorphism> {
    let mut out = Vec::new();
    if let Some(ratio) = automorphism_ratio(spec, AutKind::Phi) {
        out.push(Automorphism {
            kind: AutKind::Phi,
            ratio,
            order: 2,
        });
    }
    let mut g = BigInt::zero();
    for (arg, _) in spec.gammas() {
        g = g.gcd(&arg.b);
    }
    for (q, arg) in spec.geometric() {
        if !q.is_one() {
            g = g.gcd(&arg.b);
        }
    }
    let g = g.abs();
    if let Some(p) = g.to_u32().filter(|p| *p >= 2) {
        if let Some(ratio) = automorphism_ratio(spec, AutKind::Tau(p)) {
            out.push(Automorphism {
                kind: AutKind::Tau(p),
                ratio,
                order: p,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;

    #[test]
    fn phi_and_tau() {
        let t = TermSpec::binomial_power(7);
        assert!(automorphism_ratio(&t, AutKind::Phi).unwrap().is_one());
        let t6 = parse_term("binomial(3*n,3*k)^2*binomial(3*n,3*k+1)").unwrap();
        assert!(automorphism_ratio(&t6, AutKind::Tau(3)).is_some());
        let kinds: Vec<AutKind> = detect_automorphisms(&t6).iter().map(|a| a.kind).collect();
        assert_eq!(kinds, vec![AutKind::Phi, AutKind::Tau(3)]);
        let t1 = TermSpec::binomial_power(1);
        assert!(automorphism_ratio(&t1, AutKind::Tau(3)).is_none());
        let t2 = parse_term("binomial(2*n,k)").unwrap();
        assert!(detect_automorphisms(&t2).is_empty());
    }

    #[test]
    fn ratios_match_evaluation() {
        // phi on binomial(3n,3k)^2 binomial(3n,3k+1): H(n, n-k)/H(n, k) at sample points.
        let t6 = parse_term("binomial(3*n,3*k)^2*binomial(3*n,3*k+1)").unwrap();
        let r = automorphism_ratio(&t6, AutKind::Phi).unwrap();
        for (n, k) in [(3, 1), (4, 2), (5, 1)] {
            let lhs = crate::term::eval_term(&t6, n, n - k).unwrap() / crate::term::eval_term(&t6, n, k).unwrap();
            assert_eq!(r.eval_int(n, k).unwrap(), lhs);
        }
    }
}
