//! Polynomials in `k` over Q(n), and affine roots `k = slope*n + offset`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rfunc_n::RFuncN;
use crate::error::{Error, Result};

/// Dense polynomial in `k` with coefficients in Q(n), low degree first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyK {
    coeffs: Vec<RFuncN>,
}

impl PolyK {
    pub fn new(mut coeffs: Vec<RFuncN>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyK { coeffs }
    }

    pub fn zero() -> Self {
        PolyK { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(RFuncN::one())
    }

    pub fn constant(c: RFuncN) -> Self {
        Self::new(vec![c])
    }

    /// `c * k^d`
    pub fn monomial(c: RFuncN, d: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![RFuncN::zero(); d];
        coeffs.push(c);
        PolyK { coeffs }
    }

    /// `k - alpha`
    pub fn linear_root(alpha: &RFuncN) -> Self {
        Self::new(vec![-alpha, RFuncN::one()])
    }

    /// `a*k + b`
    pub fn linear(a: RFuncN, b: RFuncN) -> Self {
        Self::new(vec![b, a])
    }

    pub fn coeffs(&self) -> &[RFuncN] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RFuncN {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg_or_zero(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> RFuncN {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &RFuncN) -> PolyK {
        if c.is_zero() {
            return PolyK::zero();
        }
        PolyK {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn monic(&self) -> PolyK {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().inv().unwrap())
    }

    /// Multiply by `k^s`.
    pub fn shl(&self, s: usize) -> PolyK {
        if self.is_zero() {
            return PolyK::zero();
        }
        let mut coeffs = vec![RFuncN::zero(); s];
        coeffs.extend(self.coeffs.iter().cloned());
        PolyK { coeffs }
    }

    pub fn pow(&self, e: u32) -> PolyK {
        let mut acc = PolyK::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitute `k -> a*k + b`.
    pub fn compose_linear(&self, a: &RFuncN, b: &RFuncN) -> PolyK {
        let lin = PolyK::linear(a.clone(), b.clone());
        let mut acc = PolyK::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &PolyK::constant(c.clone());
        }
        acc
    }

    /// `p(k + b)`; Taylor shift without forming powers.
    pub fn shift_k(&self, b: &RFuncN) -> PolyK {
        if b.is_zero() || self.coeffs.len() <= 1 {
            return self.clone();
        }
        let mut a = self.coeffs.clone();
        let d = a.len() - 1;
        for i in 0..d {
            for j in (i..d).rev() {
                let t = &a[j + 1] * b;
                a[j] = &a[j] + &t;
            }
        }
        PolyK::new(a)
    }

    /// Apply `n -> n + c` to every coefficient.
    pub fn shift_n(&self, c: i64) -> PolyK {
        PolyK {
            coeffs: self.coeffs.iter().map(|x| x.shift(c)).collect(),
        }
    }

    pub fn eval(&self, x: &RFuncN) -> RFuncN {
        let mut acc = RFuncN::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Coefficients of `p(alpha + t)` up to `t^(order-1)`.
    pub fn taylor(&self, alpha: &RFuncN, order: usize) -> Vec<RFuncN> {
        let mut acc: Vec<RFuncN> = Vec::new();
        for c in self.coeffs.iter().rev() {
            // acc = acc * (t + alpha) + c, truncated
            let mut next = vec![RFuncN::zero(); (acc.len() + 1).min(order)];
            for (i, a) in acc.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                next[i] = &next[i] + &(a * alpha);
                if i + 1 < order {
                    next[i + 1] = &next[i + 1] + a;
                }
            }
            if order > 0 {
                next[0] = &next[0] + c;
            }
            acc = next;
        }
        acc.resize(order, RFuncN::zero());
        acc
    }

    /// Euclidean division over Q(n).
    pub fn div_rem(&self, d: &PolyK) -> Result<(PolyK, PolyK)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let inv_lc = d.lc().inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((PolyK::zero(), self.clone()));
        }
        let mut q = vec![RFuncN::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let top = &r[i + dd];
            if top.is_zero() {
                continue;
            }
            let qi = if inv_lc.is_one() { top.clone() } else { top * &inv_lc };
            for (j, dc) in d.coeffs.iter().enumerate() {
                if dc.is_zero() {
                    continue;
                }
                r[i + j] = &r[i + j] - &(&qi * dc);
            }
            q[i] = qi;
        }
        r.truncate(dd);
        Ok((PolyK::new(q), PolyK::new(r)))
    }

    /// Monic gcd in `k` over the field Q(n).
    pub fn gcd(&self, other: &PolyK) -> Result<PolyK> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::InvalidInput("gcd of two zero polynomials".into()));
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let kpart = match i {
                0 => String::new(),
                1 => "k".to_string(),
                _ => format!("k^{i}"),
            };
            if kpart.is_empty() {
                parts.push(format!("({})", c));
            } else if c.is_one() {
                parts.push(kpart);
            } else {
                parts.push(format!("({})*{}", c, kpart));
            }
        }
        parts.join(" + ")
    }
}

impl Add for &PolyK {
    type Output = PolyK;
    fn add(self, rhs: &PolyK) -> PolyK {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => c.push(a + b),
                (Some(a), None) => c.push(a.clone()),
                (None, Some(b)) => c.push(b.clone()),
                (None, None) => unreachable!(),
            }
        }
        PolyK::new(c)
    }
}

impl Sub for &PolyK {
    type Output = PolyK;
    fn sub(self, rhs: &PolyK) -> PolyK {
        self + &(-rhs)
    }
}

impl Neg for &PolyK {
    type Output = PolyK;
    fn neg(self) -> PolyK {
        PolyK {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &PolyK {
    type Output = PolyK;
    fn mul(self, rhs: &PolyK) -> PolyK {
        if self.is_zero() || rhs.is_zero() {
            return PolyK::zero();
        }
        let mut c = vec![RFuncN::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                c[i + j] = &c[i + j] + &(x * y);
            }
        }
        PolyK::new(c)
    }
}

impl fmt::Display for PolyK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for PolyK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyK({})", self)
    }
}

/// A point `k = slope*n + offset` with rational slope and offset: the root of
/// an integer-affine factor `a*n + b*k + c`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Root {
    pub slope: BigRational,
    pub offset: BigRational,
}

impl Root {
    pub fn new(slope: BigRational, offset: BigRational) -> Self {
        Root { slope, offset }
    }

    pub fn from_ints(slope: i64, offset: i64) -> Self {
        Root::new(
            BigRational::from_integer(slope.into()),
            BigRational::from_integer(offset.into()),
        )
    }

    pub fn value(&self) -> RFuncN {
        RFuncN::linear(&self.slope, &self.offset)
    }

    /// Root of `k - (alpha + by)`.
    pub fn add(&self, by: &BigRational) -> Root {
        Root::new(self.slope.clone(), &self.offset + by)
    }

    pub fn add_int(&self, by: i64) -> Root {
        self.add(&BigRational::from_integer(by.into()))
    }

    /// Root after the substitution `n -> n + c` of the underlying factor.
    pub fn shift_n(&self, c: i64) -> Root {
        Root::new(
            self.slope.clone(),
            &self.offset + &self.slope * BigRational::from_integer(c.into()),
        )
    }

    /// Shift-equivalence class key and integer position within the class.
    pub fn class_and_position(&self) -> (RootClass, i64) {
        let fl = self.offset.floor();
        let pos: BigInt = fl.to_integer();
        let base = &self.offset - &fl;
        (
            RootClass {
                slope: self.slope.clone(),
                base,
            },
            i64::try_from(pos).expect("root offset out of range"),
        )
    }

    /// Integer distance `self - other` when both lie in one class.
    pub fn int_distance(&self, other: &Root) -> Option<i64> {
        if self.slope != other.slope {
            return None;
        }
        let d = &self.offset - &other.offset;
        if d.is_integer() {
            i64::try_from(d.to_integer()).ok()
        } else {
            None
        }
    }

    /// Primitive integer factor `a*n + b*k + c` (with `b > 0`) vanishing at the root.
    pub fn factor_coeffs(&self) -> (BigInt, BigInt, BigInt) {
        let d = self.slope.denom().lcm(self.offset.denom());
        let a = -(self.slope.numer() * (&d / self.slope.denom()));
        let c = -(self.offset.numer() * (&d / self.offset.denom()));
        (a, d, c)
    }

    pub fn to_text(&self) -> String {
        let (a, b, c) = self.factor_coeffs();
        affine_text(&a, &b, &c)
    }
}

impl PartialOrd for Root {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Root {
    fn cmp(&self, other: &Self) -> Ordering {
        self.slope
            .cmp(&other.slope)
            .then_with(|| self.offset.cmp(&other.offset))
    }
}

/// Shift-equivalence class of roots: same slope, offsets congruent mod 1.
/// `base` is the class member with offset in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct RootClass {
    pub slope: BigRational,
    pub base: BigRational,
}

impl RootClass {
    pub fn at(&self, pos: i64) -> Root {
        Root::new(
            self.slope.clone(),
            &self.base + BigRational::from_integer(pos.into()),
        )
    }
}

pub(crate) fn affine_text(a: &BigInt, b: &BigInt, c: &BigInt) -> String {
    let mut s = String::new();
    let mut push = |coef: &BigInt, var: &str| {
        if coef.is_zero() {
            return;
        }
        let neg = coef.is_negative();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { "-" } else { "+" });
        }
        let abs = coef.abs();
        if var.is_empty() {
            s.push_str(&abs.to_string());
        } else {
            if !abs.is_one() {
                s.push_str(&abs.to_string());
                s.push('*');
            }
            s.push_str(var);
        }
    };
    push(a, "n");
    push(b, "k");
    push(c, "");
    if s.is_empty() {
        s.push('0');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::zpoly::ZPoly;

    fn k_poly(cs: &[i64]) -> PolyK {
        PolyK::new(cs.iter().map(|&c| RFuncN::from_int(c)).collect())
    }

    #[test]
    fn gcd_examples() {
        // (k^2 - 1, k - 1) -> k - 1
        assert_eq!(k_poly(&[-1, 0, 1]).gcd(&k_poly(&[-1, 1])).unwrap(), k_poly(&[-1, 1]));
        let n = RFuncN::var();
        let kpn = PolyK::linear(RFuncN::one(), n.clone());
        let kmn = PolyK::linear(RFuncN::one(), -&n);
        assert_eq!(kpn.gcd(&kmn).unwrap(), PolyK::one());
        let two = RFuncN::from_int(2);
        let three = RFuncN::from_int(3);
        assert_eq!(kpn.scale(&two).gcd(&kpn.scale(&three)).unwrap(), kpn);
        assert!(PolyK::zero().gcd(&PolyK::zero()).is_err());
    }

    #[test]
    fn taylor_matches_shift() {
        let n = RFuncN::var();
        let p = &k_poly(&[1, 2, 3]) * &PolyK::linear(RFuncN::one(), n.clone());
        let alpha = RFuncN::from_poly(ZPoly::from_i64s(&[1, 2]));
        let full = p.shift_k(&alpha);
        let t = p.taylor(&alpha, 2);
        assert_eq!(t[0], full.coeff(0));
        assert_eq!(t[1], full.coeff(1));
        assert_eq!(p.eval(&alpha), full.coeff(0));
    }

    #[test]
    fn root_classes() {
        let r = Root::new(
            BigRational::new((-2).into(), 3.into()),
            BigRational::new((-7).into(), 3.into()),
        );
        let (cls, pos) = r.class_and_position();
        assert_eq!(pos, -3);
        assert_eq!(cls.base, BigRational::new(2.into(), 3.into()));
        assert_eq!(cls.at(pos), r);
        assert_eq!(r.to_text(), "2*n+3*k+7");
    }
}
