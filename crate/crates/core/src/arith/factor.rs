//! Restricted factorization in `k`: content in `n` times integer-affine
//! factors `a*n + b*k + c`. Anything else is reported, never approximated.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::polyk::{PolyK, Root};
use super::polynk::PolyNK;
use super::zpoly::ZPoly;
use crate::error::{Error, Result};

/// `d = lead(n) * prod (k - root)^mult`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineRoots {
    pub lead: ZPoly,
    pub roots: Vec<(Root, u32)>,
}

/// Factor `d` into its `k`-free content and irreducible integer-affine factors.
pub fn factor_k(d: &PolyNK) -> Result<Vec<(PolyNK, u32)>> {
    let (content, affine) = split_affine(d)?;
    let mut out = Vec::new();
    if !content.is_one() {
        out.push((content, 1));
    }
    for (root, m) in affine {
        let (a, b, c) = root.factor_coeffs();
        out.push((PolyNK::affine(&a, &b, &c), m));
    }
    Ok(out)
}

/// Roots form of the same factorization, with leading coefficient in Z[n].
pub fn affine_roots(d: &PolyNK) -> Result<AffineRoots> {
    let (content, affine) = split_affine(d)?;
    let mut lead = content.k_coeff(0);
    for (root, m) in &affine {
        let (_, b, _) = root.factor_coeffs();
        lead = lead.scale(&b.pow(*m));
    }
    Ok(AffineRoots {
        lead,
        roots: affine,
    })
}

fn split_affine(d: &PolyNK) -> Result<(PolyNK, Vec<(Root, u32)>)> {
    if d.is_zero() {
        return Err(Error::InvalidInput("cannot factor the zero polynomial".into()));
    }
    let mut p = d.primitive_k();
    let content = d.div_exact(&p).expect("primitive part divides");
    if p.deg_k() == Some(0) {
        return Ok((content, Vec::new()));
    }
    let lc = p.k_coeff(p.deg_k().unwrap());
    if lc.degree() != Some(0) {
        return Err(unsupported(&p));
    }
    let lead = lc.lc();
    let bound0 = p
        .k_coeffs()
        .iter()
        .map(|c| c.coeff(0).abs())
        .max()
        .unwrap_or_default();
    let big_n = BigInt::from(2) * (lead.abs() + bound0) + BigInt::from(3);
    // p(N, k) as an integer polynomial in k.
    let g = ZPoly::new(p.k_coeffs().iter().map(|c| c.eval_int(&big_n)).collect());
    let mut found: Vec<(Root, u32)> = Vec::new();
    for rho in rational_roots(&g) {
        let m = (&rho * BigRational::from_integer(lead.clone())).to_integer();
        let two_n = &big_n * BigInt::from(2);
        let a = (BigInt::from(2) * &m + &big_n).div_floor(&two_n);
        let c = &m - &a * &big_n;
        let root = Root::new(
            BigRational::new(a, lead.clone()),
            BigRational::new(c, lead.clone()),
        );
        let (fa, fb, fc) = root.factor_coeffs();
        let factor = PolyNK::affine(&fa, &fb, &fc);
        let mut mult = 0u32;
        while let Some(q) = p.div_exact(&factor) {
            p = q;
            mult += 1;
        }
        if mult > 0 {
            found.push((root, mult));
        }
    }
    if p.deg_k().unwrap_or(0) > 0 {
        return Err(unsupported(&p));
    }
    found.sort();
    let content = &content * &p;
    Ok((content, found))
}

fn unsupported(p: &PolyNK) -> Error {
    Error::UnsupportedDenominator {
        residual: p.to_text(),
    }
}

/// All rational roots of an integer polynomial, without multiplicity.
pub fn rational_roots(g: &ZPoly) -> Vec<BigRational> {
    let Some(deg) = g.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    // Strip the root at zero first.
    let mut g = g.clone();
    let low = g.coeffs().iter().position(|c| !c.is_zero()).unwrap();
    if low > 0 {
        out.push(BigRational::zero());
        g = ZPoly::new(g.coeffs()[low..].to_vec());
    }
    if g.deg_or_zero() == 0 {
        return out;
    }
    let sqf = squarefree_part(&g);
    let d = sqf.deg_or_zero();
    let lead = sqf.lc();
    // y = lead * x turns sqf into a monic integer polynomial h.
    let mut hc = Vec::with_capacity(d + 1);
    for i in 0..=d {
        if i == d {
            hc.push(BigInt::one());
        } else {
            hc.push(sqf.coeff(i) * lead.pow((d - 1 - i) as u32));
        }
    }
    let h = ZPoly::new(hc);
    for y in integer_roots_monic(&h) {
        out.push(BigRational::new(y, lead.clone()));
    }
    out.sort();
    out.dedup();
    out
}

fn squarefree_part(g: &ZPoly) -> ZPoly {
    let dg = g.derivative();
    let c = g.gcd(&dg);
    if c.deg_or_zero() == 0 {
        return g.primitive();
    }
    g.primitive().div_exact(&c.primitive()).unwrap().primitive()
}

fn small_primes() -> impl Iterator<Item = u64> {
    (1009u64..).filter(|&q| (2..).take_while(|d| d * d <= q).all(|d| q % d != 0))
}

fn eval_mod(h: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for &c in h.iter().rev() {
        acc = ((acc as u128 * x as u128 + c as u128) % p as u128) as u64;
    }
    acc
}

/// Integer roots of a monic squarefree integer polynomial via roots modulo a
/// small prime and quadratic Hensel lifting.
fn integer_roots_monic(h: &ZPoly) -> Vec<BigInt> {
    let d = h.deg_or_zero();
    if d == 0 {
        return Vec::new();
    }
    let bound = h.coeffs()[..d]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_default()
        + BigInt::one();
    let dh = h.derivative();
    for p in small_primes().take(200) {
        let pb = BigInt::from(p);
        let hm: Vec<u64> = h.coeffs().iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
        let dm: Vec<u64> = dh.coeffs().iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
        let roots: Vec<u64> = (0..p).filter(|&x| eval_mod(&hm, x, p) == 0).collect();
        if roots.iter().any(|&r| eval_mod(&dm, r, p) == 0) {
            continue;
        }
        let mut out = Vec::new();
        for r in roots {
            let mut modulus = pb.clone();
            let mut y = BigInt::from(r);
            let limit = BigInt::from(2) * &bound + BigInt::one();
            while modulus <= limit {
                modulus = &modulus * &modulus;
                let hy = h.eval_int(&y).mod_floor(&modulus);
                let dy = dh.eval_int(&y).mod_floor(&modulus);
                let inv = mod_inverse(&dy, &modulus).expect("simple root has invertible derivative");
                y = (&y - hy * inv).mod_floor(&modulus);
            }
            let half = &modulus >> 1;
            if y > half {
                y -= &modulus;
            }
            if h.eval_int(&y).is_zero() {
                out.push(y);
            }
        }
        return out;
    }
    Vec::new()
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Nonnegative integers `j` with `gcd(a(k), b(k + j))` nonconstant.
pub fn dispersion_set(a: &PolyK, b: &PolyK) -> Result<BTreeSet<u64>> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidInput("dispersion of a zero polynomial".into()));
    }
    let (pa, _) = PolyNK::from_polyk(a);
    let (pb, _) = PolyNK::from_polyk(b);
    let ra = affine_roots(&pa)?;
    let rb = affine_roots(&pb)?;
    let mut out = BTreeSet::new();
    for (rho, _) in &ra.roots {
        for (sigma, _) in &rb.roots {
            if let Some(j) = sigma.int_distance(rho) {
                if j >= 0 {
                    out.insert(j as u64);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rfunc_n::RFuncN;

    fn aff(a: i64, b: i64, c: i64) -> PolyNK {
        PolyNK::affine(&a.into(), &b.into(), &c.into())
    }

    #[test]
    fn factor_examples() {
        assert_eq!(factor_k(&aff(2, 3, 0)).unwrap(), vec![(aff(2, 3, 0), 1)]);
        let d = &(&aff(2, 3, 0) * &aff(2, 3, 0)) * &aff(0, 1, 1);
        assert_eq!(
            factor_k(&d).unwrap(),
            vec![(aff(2, 3, 0), 2), (aff(0, 1, 1), 1)]
        );
        let bad = &(&PolyNK::k() * &PolyNK::k()) + &PolyNK::n();
        assert!(matches!(factor_k(&bad), Err(Error::UnsupportedDenominator { .. })));
    }

    #[test]
    fn content_and_sign_survive() {
        // -6 (n+1) (n - k + 1)^3 (3k + 1)
        let d = &(&aff(1, -1, 1).pow(3) * &aff(0, 3, 1)) * &PolyNK::from_n(ZPoly::from_i64s(&[-6, -6]));
        let f = factor_k(&d).unwrap();
        let mut prod = PolyNK::one();
        for (p, m) in &f {
            prod = &prod * &p.pow(*m);
        }
        assert_eq!(prod, d);
        let r = affine_roots(&d).unwrap();
        assert_eq!(r.roots.len(), 2);
        assert_eq!(r.lead, ZPoly::from_i64s(&[18, 18]));
    }

    #[test]
    fn rational_root_finder() {
        // (3x - 2)(x + 5)(x^2 + 1)
        let g = &(&ZPoly::from_i64s(&[-2, 3]) * &ZPoly::from_i64s(&[5, 1])) * &ZPoly::from_i64s(&[1, 0, 1]);
        let r = rational_roots(&g);
        assert_eq!(
            r,
            vec![BigRational::from_integer((-5).into()), BigRational::new(2.into(), 3.into())]
        );
    }

    fn kpoly(ps: &[PolyNK]) -> PolyK {
        let mut acc = PolyNK::one();
        for p in ps {
            acc = &acc * p;
        }
        acc.to_polyk()
    }

    #[test]
    fn dispersion_examples() {
        let k = aff(0, 1, 0);
        assert_eq!(dispersion_set(&kpoly(&[k.clone()]), &kpoly(&[aff(0, 1, -3)])).unwrap(), [3].into());
        assert!(dispersion_set(&kpoly(&[k.clone()]), &kpoly(&[aff(0, 1, 1)])).unwrap().is_empty());
        let kk2 = kpoly(&[k.clone(), aff(0, 1, -2)]);
        assert_eq!(dispersion_set(&kpoly(&[k.clone()]), &kk2).unwrap(), [0, 2].into());
        assert_eq!(dispersion_set(&kk2, &kpoly(&[k])).unwrap(), [0].into());
        let _ = RFuncN::one();
    }
}
