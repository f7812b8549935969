//! Bivariate integer polynomials in `n` and `k`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::polyk::PolyK;
use super::rfunc_n::RFuncN;
use super::zpoly::ZPoly;

/// Integer polynomial in `n`, `k`, stored as a dense list of `n`-polynomials
/// indexed by the power of `k`. No trailing zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyNK {
    by_k: Vec<ZPoly>,
}

impl PolyNK {
    pub fn new(mut by_k: Vec<ZPoly>) -> Self {
        while by_k.last().is_some_and(|c| c.is_zero()) {
            by_k.pop();
        }
        PolyNK { by_k }
    }

    pub fn zero() -> Self {
        PolyNK { by_k: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_n(ZPoly::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_n(ZPoly::constant(c))
    }

    pub fn from_n(p: ZPoly) -> Self {
        Self::new(vec![p])
    }

    pub fn n() -> Self {
        Self::from_n(ZPoly::var())
    }

    pub fn k() -> Self {
        Self::new(vec![ZPoly::zero(), ZPoly::one()])
    }

    /// `a*n + b*k + c`
    pub fn affine(a: &BigInt, b: &BigInt, c: &BigInt) -> Self {
        Self::new(vec![
            ZPoly::linear(a.clone(), c.clone()),
            ZPoly::constant(b.clone()),
        ])
    }

    /// Build from `(deg_n, deg_k, coefficient)` triples.
    pub fn from_terms<I: IntoIterator<Item = (usize, usize, BigInt)>>(terms: I) -> Self {
        let mut by_k: Vec<Vec<BigInt>> = Vec::new();
        for (i, j, c) in terms {
            if by_k.len() <= j {
                by_k.resize(j + 1, Vec::new());
            }
            if by_k[j].len() <= i {
                by_k[j].resize(i + 1, BigInt::zero());
            }
            by_k[j][i] += c;
        }
        Self::new(by_k.into_iter().map(ZPoly::new).collect())
    }

    pub fn k_coeffs(&self) -> &[ZPoly] {
        &self.by_k
    }

    pub fn k_coeff(&self, j: usize) -> ZPoly {
        self.by_k.get(j).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.by_k.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.by_k.len() == 1 && self.by_k[0].is_one()
    }

    pub fn deg_k(&self) -> Option<usize> {
        self.by_k.len().checked_sub(1)
    }

    pub fn deg_n(&self) -> usize {
        self.by_k.iter().map(|c| c.deg_or_zero()).max().unwrap_or(0)
    }

    /// Terms as `(deg_n, deg_k, coefficient)` in graded-lex order (n > k), highest first.
    pub fn terms(&self) -> Vec<(usize, usize, BigInt)> {
        let mut t = Vec::new();
        for (j, c) in self.by_k.iter().enumerate() {
            for (i, a) in c.coeffs().iter().enumerate() {
                if !a.is_zero() {
                    t.push((i, j, a.clone()));
                }
            }
        }
        t.sort_by(|x, y| (y.0 + y.1, y.0).cmp(&(x.0 + x.1, x.0)));
        t
    }

    pub fn leading_term(&self) -> Option<(usize, usize, BigInt)> {
        self.terms().into_iter().next()
    }

    pub fn total_degree(&self) -> usize {
        self.leading_term().map(|(i, j, _)| i + j).unwrap_or(0)
    }

    pub fn scale(&self, c: &BigInt) -> PolyNK {
        if c.is_zero() {
            return PolyNK::zero();
        }
        PolyNK {
            by_k: self.by_k.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn mul_n(&self, p: &ZPoly) -> PolyNK {
        PolyNK::new(self.by_k.iter().map(|c| c * p).collect())
    }

    pub fn div_n_exact(&self, p: &ZPoly) -> Option<PolyNK> {
        let mut out = Vec::with_capacity(self.by_k.len());
        for c in &self.by_k {
            out.push(c.div_exact(p)?);
        }
        Some(PolyNK::new(out))
    }

    pub fn pow(&self, e: u32) -> PolyNK {
        let mut acc = PolyNK::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Integer content across all coefficients (nonnegative).
    pub fn int_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.by_k {
            g = g.gcd(&c.content());
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Gcd in Z[n] of the `k`-coefficients, with positive leading coefficient.
    pub fn content_k(&self) -> ZPoly {
        let mut g = ZPoly::zero();
        for c in &self.by_k {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn primitive_k(&self) -> PolyNK {
        if self.is_zero() {
            return PolyNK::zero();
        }
        let c = self.content_k();
        let mut p = self.div_n_exact(&c).expect("content divides");
        if p.by_k.last().unwrap().lc().is_negative() {
            p = -p;
        }
        p
    }

    /// Exact division in Z[n, k].
    pub fn div_exact(&self, d: &PolyNK) -> Option<PolyNK> {
        let dd = d.deg_k()?;
        if self.is_zero() {
            return Some(PolyNK::zero());
        }
        let nd = self.deg_k().unwrap();
        if nd < dd {
            return None;
        }
        let lc = d.by_k[dd].clone();
        let mut rem = self.by_k.clone();
        let mut q = vec![ZPoly::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            if rem[i + dd].is_zero() {
                continue;
            }
            let qi = rem[i + dd].div_exact(&lc)?;
            for (j, dc) in d.by_k.iter().enumerate() {
                rem[i + j] = &rem[i + j] - &(&qi * dc);
            }
            q[i] = qi;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(PolyNK::new(q))
    }

    fn prem_k(&self, d: &PolyNK) -> PolyNK {
        let dd = d.deg_k().expect("prem by zero");
        let lc = d.by_k[dd].clone();
        let mut r = self.clone();
        while let Some(rd) = r.deg_k() {
            if rd < dd {
                break;
            }
            let t = r.by_k[rd].clone();
            let scaled = r.mul_n(&lc);
            let mut sub = vec![ZPoly::zero(); rd - dd];
            sub.extend(d.by_k.iter().map(|c| c * &t));
            r = &scaled - &PolyNK::new(sub);
        }
        r
    }

    /// Gcd in Z[n, k], normalized to positive graded-lex leading coefficient.
    pub fn gcd(&self, other: &PolyNK) -> PolyNK {
        if self.is_zero() {
            return other.normalize_sign();
        }
        if other.is_zero() {
            return self.normalize_sign();
        }
        let ca = self.content_k();
        let cb = other.content_k();
        let c = ca.gcd(&cb);
        let mut a = self.primitive_k();
        let mut b = other.primitive_k();
        if a.deg_k().unwrap() == 0 || b.deg_k().unwrap() == 0 {
            return PolyNK::from_n(c).normalize_sign();
        }
        if let Some(g) = heuristic_gcd(&a, &b) {
            return g.mul_n(&c).normalize_sign();
        }
        if a.deg_k() < b.deg_k() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem_k(&b);
            a = b;
            b = r.primitive_k();
        }
        if a.deg_k().unwrap() == 0 {
            return PolyNK::from_n(c).normalize_sign();
        }
        a.primitive_k().mul_n(&c).normalize_sign()
    }

    pub fn normalize_sign(&self) -> PolyNK {
        match self.leading_term() {
            Some((_, _, c)) if c.is_negative() => -self,
            _ => self.clone(),
        }
    }

    /// Substitute `n -> n + dn`, `k -> (kn*n + kk*k + kc) / kden` and clear
    /// the denominator: returns `(P, kden^deg_k)` with value `P / kden^deg_k`.
    pub fn substitute(
        &self,
        dn: i64,
        kn: &BigInt,
        kk: &BigInt,
        kc: &BigInt,
        kden: &BigInt,
    ) -> (PolyNK, BigInt) {
        let Some(d) = self.deg_k() else {
            return (PolyNK::zero(), BigInt::one());
        };
        let dn = BigInt::from(dn);
        let lin = PolyNK::new(vec![ZPoly::linear(kn.clone(), kc.clone()), ZPoly::constant(kk.clone())]);
        let mut acc = PolyNK::zero();
        let mut den_pow = BigInt::one();
        for c in self.by_k.iter().rev() {
            acc = &(&acc * &lin) + &PolyNK::from_n(c.shift(&dn).scale(&den_pow));
            den_pow *= kden;
        }
        // acc = sum c_j * lin^j * kden^(d-j); den_pow overshoots by one factor.
        let scale = kden.pow(d as u32);
        (acc, scale)
    }

    /// `p(n + dn, k + dk)` for rational `dk`, as `(P, s)` with value `P / s`.
    pub fn shift(&self, dn: i64, dk: &BigRational) -> (PolyNK, BigInt) {
        let q = dk.denom().clone();
        self.substitute(dn, &BigInt::zero(), &q, dk.numer(), &q)
    }

    pub fn eval(&self, n0: &BigRational, k0: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.by_k.iter().rev() {
            acc = acc * k0 + c.eval(n0);
        }
        acc
    }

    /// `p(n, slope*n + offset)` as `(numerator, denominator)` in Z[n] x Z.
    pub fn at_affine_k(&self, slope: &BigRational, offset: &BigRational) -> (ZPoly, BigInt) {
        let d = slope.denom().lcm(offset.denom());
        let a = slope.numer() * (&d / slope.denom());
        let c = offset.numer() * (&d / offset.denom());
        let Some(deg) = self.deg_k() else {
            return (ZPoly::zero(), BigInt::one());
        };
        let lin = ZPoly::linear(a, c);
        let mut acc = ZPoly::zero();
        let mut dp = BigInt::one();
        for coef in self.by_k.iter().rev() {
            acc = &(&acc * &lin) + &coef.scale(&dp);
            dp *= &d;
        }
        (acc, d.pow(deg as u32))
    }

    pub fn to_polyk(&self) -> PolyK {
        PolyK::new(self.by_k.iter().map(|c| RFuncN::from_poly(c.clone())).collect())
    }

    /// Clear denominators of a polynomial over Q(n): returns `(P, m)` with `p = P / m`.
    pub fn from_polyk(p: &PolyK) -> (PolyNK, ZPoly) {
        let mut m = ZPoly::one();
        for c in p.coeffs() {
            if !c.den().is_one() {
                let g = m.gcd(c.den());
                m = &m * &c.den().div_exact(&g).unwrap();
            }
        }
        let by_k = p
            .coeffs()
            .iter()
            .map(|c| {
                let f = m.div_exact(c.den()).unwrap();
                c.num() * &f
            })
            .collect();
        (PolyNK::new(by_k), m)
    }

    pub fn to_text(&self) -> String {
        let terms = self.terms();
        if terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (i, j, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { "-" } else { "+" });
            }
            let a = c.abs();
            let mut vars = Vec::new();
            if *i == 1 {
                vars.push("n".to_string());
            } else if *i > 1 {
                vars.push(format!("n^{i}"));
            }
            if *j == 1 {
                vars.push("k".to_string());
            } else if *j > 1 {
                vars.push(format!("k^{j}"));
            }
            if vars.is_empty() {
                s.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    s.push_str(&a.to_string());
                    s.push('*');
                }
                s.push_str(&vars.join("*"));
            }
        }
        s
    }

    pub fn num_terms(&self) -> usize {
        self.by_k
            .iter()
            .map(|c| c.coeffs().iter().filter(|x| !x.is_zero()).count())
            .sum()
    }
}

fn max_norm(p: &PolyNK) -> BigInt {
    p.by_k.iter().map(ZPoly::max_norm).max().unwrap_or_else(BigInt::zero)
}

fn eval_n(p: &PolyNK, xi: &BigInt) -> ZPoly {
    ZPoly::new(p.by_k.iter().map(|c| c.eval_int(xi)).collect())
}

/// Balanced base-`xi` digits of `v`, as a polynomial in `n`.
fn xi_adic(mut v: BigInt, xi: &BigInt) -> ZPoly {
    let half = xi >> 1;
    let mut digits = Vec::new();
    while !v.is_zero() {
        let mut r = v.mod_floor(xi);
        if r > half {
            r -= xi;
        }
        v = (&v - &r) / xi;
        digits.push(r);
    }
    ZPoly::new(digits)
}

/// GCDHEU in `n`: gcd of the images in Z[k] at a large integer `n = xi`,
/// lifted back digit by digit and confirmed by exact division. Inputs are
/// primitive in `k`.
fn heuristic_gcd(a: &PolyNK, b: &PolyNK) -> Option<PolyNK> {
    let mut xi = BigInt::from(2) * max_norm(a).min(max_norm(b)) + BigInt::from(29);
    for _ in 0..4 {
        let bits = xi.bits() * a.deg_n().max(b.deg_n()) as u64;
        if bits > 2_000_000 {
            return None;
        }
        let g = eval_n(a, &xi).gcd(&eval_n(b, &xi));
        let lifted = PolyNK::new(g.coeffs().iter().map(|c| xi_adic(c.clone(), &xi)).collect());
        if lifted.deg_k().is_some() {
            let h = lifted.primitive_k();
            if a.div_exact(&h).is_some() && b.div_exact(&h).is_some() {
                return Some(h);
            }
        }
        xi = &xi * BigInt::from(73794) / BigInt::from(27011) + BigInt::one();
    }
    None
}

impl Add for &PolyNK {
    type Output = PolyNK;
    fn add(self, rhs: &PolyNK) -> PolyNK {
        let n = self.by_k.len().max(rhs.by_k.len());
        let z = ZPoly::zero();
        PolyNK::new(
            (0..n)
                .map(|i| self.by_k.get(i).unwrap_or(&z) + rhs.by_k.get(i).unwrap_or(&z))
                .collect(),
        )
    }
}

impl Sub for &PolyNK {
    type Output = PolyNK;
    fn sub(self, rhs: &PolyNK) -> PolyNK {
        let n = self.by_k.len().max(rhs.by_k.len());
        let z = ZPoly::zero();
        PolyNK::new(
            (0..n)
                .map(|i| self.by_k.get(i).unwrap_or(&z) - rhs.by_k.get(i).unwrap_or(&z))
                .collect(),
        )
    }
}

impl Mul for &PolyNK {
    type Output = PolyNK;
    fn mul(self, rhs: &PolyNK) -> PolyNK {
        if self.is_zero() || rhs.is_zero() {
            return PolyNK::zero();
        }
        let mut out = vec![ZPoly::zero(); self.by_k.len() + rhs.by_k.len() - 1];
        for (i, a) in self.by_k.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.by_k.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        PolyNK::new(out)
    }
}

impl Neg for &PolyNK {
    type Output = PolyNK;
    fn neg(self) -> PolyNK {
        PolyNK {
            by_k: self.by_k.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for PolyNK {
    type Output = PolyNK;
    fn neg(self) -> PolyNK {
        -&self
    }
}

impl fmt::Display for PolyNK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for PolyNK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyNK({})", self)
    }
}
