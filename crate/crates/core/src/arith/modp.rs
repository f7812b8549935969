//! Word-size prime fields: polynomial interpolation, Padé and rational reconstruction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{RFuncN, ZPoly};

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    (a % p != 0).then(|| pow_mod(a, p - 2, p))
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for b in BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for b in BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primes below `2^62`, descending.
pub fn primes() -> impl Iterator<Item = u64> {
    ((1u64 << 61)..(1u64 << 62)).rev().filter(|n| n % 2 == 1).filter(|&n| is_prime(n))
}

pub fn bigint_mod(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("reduced residue")
}

/// `x mod p` for a rational, or `None` when `p` divides the denominator.
pub fn rational_mod(x: &BigRational, p: u64) -> Option<u64> {
    let d = bigint_mod(x.denom(), p);
    Some(mul_mod(bigint_mod(x.numer(), p), inv_mod(d, p)?, p))
}

pub fn signed_mod(x: i64, p: u64) -> u64 {
    (x as i128).rem_euclid(p as i128) as u64
}

/// Dense polynomial over F_p, low degree first, no trailing zeros.
pub type PolyP = Vec<u64>;

fn trim(mut a: PolyP) -> PolyP {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn reduce_poly(f: &ZPoly, p: u64) -> PolyP {
    trim(f.coeffs().iter().map(|c| bigint_mod(c, p)).collect())
}

pub fn eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter().rev().fold(0, |acc, c| add_mod(mul_mod(acc, x, p), *c, p))
}

fn deg(a: &[u64]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn poly_mul(a: &[u64], b: &[u64], p: u64) -> PolyP {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u128; a.len() + b.len() - 1];
    let pp = p as u128;
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + *x as u128 * *y as u128) % pp;
        }
    }
    trim(out.into_iter().map(|v| v as u64).collect())
}

pub fn poly_sub(a: &[u64], b: &[u64], p: u64) -> PolyP {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| sub_mod(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0), p))
            .collect(),
    )
}

pub fn poly_divrem(a: &[u64], b: &[u64], p: u64) -> (PolyP, PolyP) {
    let db = deg(b).expect("division by the zero polynomial");
    let inv = inv_mod(b[db], p).expect("nonzero leading coefficient");
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), trim(r));
    }
    let mut q = vec![0; r.len() - db];
    for i in (0..q.len()).rev() {
        let c = mul_mod(r[i + db], inv, p);
        q[i] = c;
        if c != 0 {
            for (j, bj) in b.iter().enumerate() {
                r[i + j] = sub_mod(r[i + j], mul_mod(c, *bj, p), p);
            }
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

pub fn monic(a: &[u64], p: u64) -> PolyP {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = inv_mod(l, p).expect("nonzero leading coefficient");
            a.iter().map(|c| mul_mod(*c, inv, p)).collect()
        }
    }
}

pub fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> PolyP {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = poly_divrem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

/// `prod (x - xs[i])`.
pub fn node_poly(xs: &[u64], p: u64) -> PolyP {
    let mut m = vec![1u64];
    for &x in xs {
        let mut next = vec![0; m.len() + 1];
        for (k, c) in m.iter().enumerate() {
            next[k + 1] = add_mod(next[k + 1], *c, p);
            next[k] = sub_mod(next[k], mul_mod(*c, x, p), p);
        }
        m = next;
    }
    m
}

/// Interpolating polynomials through `(xs[i], ys[r][i])` for every row `r`;
/// `m` is the node polynomial of the distinct `xs`.
pub fn interpolate_many(xs: &[u64], ys: &[Vec<u64>], m: &[u64], p: u64) -> Vec<PolyP> {
    let n = xs.len();
    let mut out = vec![vec![0u64; n]; ys.len()];
    let mut q = vec![0u64; n];
    for (i, &x) in xs.iter().enumerate() {
        // q = m / (t - x) by synthetic division
        let mut carry = 0;
        for k in (0..n).rev() {
            carry = add_mod(m[k + 1], mul_mod(carry, x, p), p);
            q[k] = carry;
        }
        let w = inv_mod(eval(&q, x, p), p).expect("distinct nodes");
        for (o, y) in out.iter_mut().zip(ys) {
            let c = mul_mod(y[i], w, p);
            if c == 0 {
                continue;
            }
            for (ok, qk) in o.iter_mut().zip(&q) {
                *ok = add_mod(*ok, mul_mod(c, *qk, p), p);
            }
        }
    }
    out.into_iter().map(trim).collect()
}

/// Interpolating polynomial through `(xs[i], ys[i])` with distinct `xs`.
pub fn interpolate(xs: &[u64], ys: &[u64], p: u64) -> PolyP {
    let m = node_poly(xs, p);
    interpolate_many(xs, &[ys.to_vec()], &m, p).pop().unwrap()
}

/// `num/den` with `deg num < bound`, monic `den`, matching `u` modulo `m`.
pub fn pade(u: &[u64], m: &[u64], bound: usize, p: u64) -> Option<(PolyP, PolyP)> {
    let (mut r0, mut r1) = (m.to_vec(), trim(u.to_vec()));
    let (mut t0, mut t1): (PolyP, PolyP) = (Vec::new(), vec![1]);
    while r1.len() > bound {
        let (q, r) = poly_divrem(&r0, &r1, p);
        let t = poly_sub(&t0, &poly_mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t);
    }
    if t1.is_empty() || deg(&t1)? + bound > m.len() - 1 {
        return None;
    }
    let g = poly_gcd(&r1, &t1, p);
    if g.len() > 1 {
        return None;
    }
    let inv = inv_mod(*t1.last()?, p)?;
    let sc = |a: &[u64]| a.iter().map(|c| mul_mod(*c, inv, p)).collect::<PolyP>();
    Some((sc(&r1), sc(&t1)))
}

/// `a/b` with `|a|, b <= sqrt(m/2)` and `a/b = x (mod m)`.
pub fn rat_recon(x: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), x.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let (q, r) = r0.div_rem(&r1);
        let t = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// `(x mod m, y mod p) -> z mod m*p`.
pub fn crt(x: &BigInt, m: &BigInt, y: u64, p: u64) -> BigInt {
    let xm = bigint_mod(x, p);
    let minv = inv_mod(bigint_mod(m, p), p).expect("coprime moduli");
    let h = mul_mod(sub_mod(y, xm, p), minv, p);
    x + m * BigInt::from(h)
}

/// Chinese remaindering of polynomial vectors with rational reconstruction.
///
/// Images whose degree pattern is smaller than the one seen so far come from
/// unlucky primes and are ignored; a larger pattern restarts the lift.
#[derive(Default)]
pub struct RationalLifter {
    sig: Option<Vec<usize>>,
    acc: Vec<Vec<BigInt>>,
    modulus: BigInt,
    used: usize,
    next_try: usize,
    cand: Option<Vec<Vec<BigRational>>>,
}

fn sig_key(s: &[usize]) -> (usize, usize) {
    (s.len(), s.iter().sum())
}

impl RationalLifter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of primes in the current lift.
    pub fn primes_used(&self) -> usize {
        self.used
    }

    /// Feed one image; returns a reconstruction once a further prime agrees with it.
    pub fn add(&mut self, image: &[PolyP], p: u64) -> Option<Vec<Vec<BigRational>>> {
        let s: Vec<usize> = image.iter().map(|q| q.len()).collect();
        match &self.sig {
            Some(old) if *old == s => {}
            Some(old) if sig_key(old) > sig_key(&s) => return None,
            _ => {
                self.acc = image.iter().map(|q| vec![BigInt::zero(); q.len()]).collect();
                self.sig = Some(s);
                self.modulus = BigInt::one();
                self.used = 0;
                self.next_try = 1;
                self.cand = None;
            }
        }
        if let Some(c) = self.cand.take() {
            let agrees = c
                .iter()
                .zip(image)
                .all(|(q, r)| q.iter().zip(r).all(|(x, v)| rational_mod(x, p) == Some(*v)));
            if agrees {
                return Some(c);
            }
        }
        for (qa, qp) in self.acc.iter_mut().zip(image) {
            for (x, y) in qa.iter_mut().zip(qp) {
                *x = crt(x, &self.modulus, *y, p);
            }
        }
        self.modulus *= BigInt::from(p);
        self.used += 1;
        if self.used >= self.next_try {
            self.cand = self
                .acc
                .iter()
                .map(|q| q.iter().map(|c| rat_recon(c, &self.modulus)).collect::<Option<Vec<_>>>())
                .collect();
            self.next_try = self.used + self.used / 4 + 1;
        }
        None
    }
}

/// Integer polynomials proportional to the given rational ones.
pub fn clear_denominators(polys: &[Vec<BigRational>]) -> Vec<ZPoly> {
    let mut den = BigInt::one();
    for c in polys.iter().flatten() {
        den = den.lcm(c.denom());
    }
    polys
        .iter()
        .map(|q| ZPoly::new(q.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect()))
        .collect()
}

/// A rational function in `n` reduced modulo `p`.
#[derive(Clone, Debug)]
pub struct RFuncModP {
    num: PolyP,
    den: PolyP,
}

impl RFuncModP {
    /// `None` when `p` kills the denominator.
    pub fn new(f: &RFuncN, p: u64) -> Option<Self> {
        let den = reduce_poly(f.den(), p);
        if den.is_empty() {
            return None;
        }
        Some(RFuncModP {
            num: reduce_poly(f.num(), p),
            den,
        })
    }

    /// `None` at a pole.
    pub fn eval(&self, x: u64, p: u64) -> Option<u64> {
        let d = eval(&self.den, x, p);
        Some(mul_mod(eval(&self.num, x, p), inv_mod(d, p)?, p))
    }
}
