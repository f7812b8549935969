//! Recurrence operators `sum c_i(n) S^i` over Q(n), with `S c(n) = c(n+1) S`.

mod modular;
mod text;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith::linalg::first_dependence;
use crate::arith::{RFuncN, ZPoly};
use crate::error::{Error, Result};

pub use modular::twisted_dependence;
pub use text::parse_op;

/// `sum_i coeffs[i] * S^(lo + i)`; no zero coefficient at either end.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OreOp {
    lo: i64,
    coeffs: Vec<RFuncN>,
}

/// Values of a sequence at `offset, offset + 1, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqWindow {
    pub offset: i64,
    pub values: Vec<BigRational>,
}

impl SeqWindow {
    pub fn new(offset: i64, values: Vec<BigRational>) -> Self {
        SeqWindow { offset, values }
    }

    pub fn from_ints(offset: i64, values: &[i64]) -> Self {
        SeqWindow::new(
            offset,
            values.iter().map(|&v| BigRational::from_integer(v.into())).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Last index covered.
    pub fn end(&self) -> i64 {
        self.offset + self.values.len() as i64 - 1
    }

    pub fn get(&self, n: i64) -> Option<&BigRational> {
        if n < self.offset {
            return None;
        }
        self.values.get((n - self.offset) as usize)
    }

    /// Sub-window `[from, to]`, clipped.
    pub fn slice(&self, from: i64, to: i64) -> SeqWindow {
        let a = from.max(self.offset);
        let b = to.min(self.end());
        if a > b {
            return SeqWindow::new(a, Vec::new());
        }
        let i = (a - self.offset) as usize;
        let j = (b - self.offset) as usize;
        SeqWindow::new(a, self.values[i..=j].to_vec())
    }
}

impl OreOp {
    /// Operator from explicit `(exponent, coefficient)` pairs.
    pub fn from_terms<I: IntoIterator<Item = (i64, RFuncN)>>(terms: I) -> Self {
        let terms: Vec<(i64, RFuncN)> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let Some(lo) = terms.iter().map(|t| t.0).min() else {
            return Self::zero();
        };
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![RFuncN::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            let slot = &mut coeffs[(e - lo) as usize];
            *slot = &*slot + &c;
        }
        Self::trimmed(lo, coeffs)
    }

    /// Coefficients of `S^0, S^1, ...`.
    pub fn from_coeffs(coeffs: Vec<RFuncN>) -> Self {
        Self::trimmed(0, coeffs)
    }

    fn trimmed(mut lo: i64, mut coeffs: Vec<RFuncN>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == coeffs.len() {
            return Self::zero();
        }
        coeffs.drain(..lead);
        lo += lead as i64;
        OreOp { lo, coeffs }
    }

    pub fn zero() -> Self {
        OreOp {
            lo: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::scalar(RFuncN::one())
    }

    pub fn scalar(c: RFuncN) -> Self {
        Self::trimmed(0, vec![c])
    }

    /// `S^e`.
    pub fn shift_op(e: i64) -> Self {
        OreOp {
            lo: e,
            coeffs: vec![RFuncN::one()],
        }
    }

    /// `S^t - r`.
    pub fn binomial(t: i64, r: RFuncN) -> Self {
        Self::from_terms([(t, RFuncN::one()), (0, -r)])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn low_exp(&self) -> i64 {
        self.lo
    }

    pub fn high_exp(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    /// Exponent span `high - low`; zero for the zero operator.
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, e: i64) -> RFuncN {
        if e < self.lo {
            return RFuncN::zero();
        }
        self.coeffs.get((e - self.lo) as usize).cloned().unwrap_or_default()
    }

    /// `(exponent, coefficient)` pairs with nonzero coefficient, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &RFuncN)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.lo + i as i64, c))
    }

    pub fn lc(&self) -> RFuncN {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// `c(n) * self`.
    pub fn scale_left(&self, c: &RFuncN) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        OreOp {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|x| c * x).collect(),
        }
    }

    /// `S^e * self`.
    pub fn shift_left(&self, e: i64) -> Self {
        OreOp {
            lo: self.lo + e,
            coeffs: self.coeffs.iter().map(|x| x.shift(e)).collect(),
        }
    }

    /// `self * S^e`.
    pub fn shift_right(&self, e: i64) -> Self {
        OreOp {
            lo: self.lo + e,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Right Euclidean division: `self = q * b + r`, `high(r) < high(b)`.
    pub fn right_divmod(&self, b: &OreOp) -> Result<(OreOp, OreOp)> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let bh = b.high_exp();
        let blc = b.lc();
        let mut r = self.clone();
        let mut q_terms = Vec::new();
        while !r.is_zero() && r.high_exp() >= bh {
            let e = r.high_exp() - bh;
            let c = &r.lc() / &blc.shift(e);
            let t = OreOp::from_terms([(e, c.clone())]);
            r = &r - &(&t * b);
            q_terms.push((e, c));
        }
        Ok((OreOp::from_terms(q_terms), r))
    }

    /// Monic remainder sequence `S^j mod self` for `j = 0..=count`, as
    /// coordinate vectors of length `order`. Requires `low_exp = 0`.
    fn power_remainders(&self, count: usize) -> Vec<Vec<RFuncN>> {
        let d = self.order();
        let lc = self.lc();
        // S^d = -sum_{i<d} (c_i / c_d) S^i modulo self.
        let tail: Vec<RFuncN> = self.coeffs[..d].iter().map(|c| -&(c / &lc)).collect();
        let mut out = Vec::with_capacity(count + 1);
        let mut cur = vec![RFuncN::zero(); d];
        if d > 0 {
            cur[0] = RFuncN::one();
        }
        out.push(cur.clone());
        for _ in 0..count {
            // S * sum cur_i S^i = sum cur_i(n+1) S^(i+1)
            let shifted: Vec<RFuncN> = cur.iter().map(|x| x.shift(1)).collect();
            let mut next = vec![RFuncN::zero(); d];
            for i in 0..d.saturating_sub(1) {
                next[i + 1] = shifted[i].clone();
            }
            if d > 0 && !shifted[d - 1].is_zero() {
                let top = &shifted[d - 1];
                for i in 0..d {
                    if !tail[i].is_zero() {
                        next[i] = &next[i] + &(top * &tail[i]);
                    }
                }
            }
            cur = next;
            out.push(cur.clone());
        }
        out
    }

    /// Block companion matrices `C` with `S^(j+1) mod L = C sigma_n(S^j mod L)`,
    /// and the stacked coordinates of `S^0`.
    fn companion_system(ops: &[OreOp]) -> (Vec<Vec<RFuncN>>, Vec<RFuncN>) {
        let dim: usize = ops.iter().map(|o| o.order()).sum();
        let mut a = vec![vec![RFuncN::zero(); dim]; dim];
        let mut t = vec![RFuncN::zero(); dim];
        let mut at = 0;
        for o in ops {
            let d = o.order();
            if d == 0 {
                continue;
            }
            let lc = o.lc();
            t[at] = RFuncN::one();
            for i in 0..d {
                if i + 1 < d {
                    a[at + i + 1][at + i] = RFuncN::one();
                }
                a[at + i][at + d - 1] = &a[at + i][at + d - 1] - &(&o.coeffs[i] / &lc);
            }
            at += d;
        }
        (a, t)
    }

    /// Least common left multiple, normalized.
    pub fn lclm(ops: &[OreOp]) -> Result<OreOp> {
        if ops.is_empty() {
            return Err(Error::InvalidInput("lclm of an empty list".into()));
        }
        if ops.iter().any(|o| o.is_zero()) {
            return Err(Error::InvalidInput("lclm of the zero operator".into()));
        }
        let ops: Vec<OreOp> = ops.iter().map(|o| o.shift_right(-o.lo)).collect();
        let bound: usize = ops.iter().map(|o| o.order()).sum();
        if bound == 0 {
            return Ok(OreOp::one());
        }
        if ops.len() > 1 && ops.iter().map(|o| o.degree_in_n()).sum::<usize>() > 24 {
            let (a, t) = Self::companion_system(&ops);
            if let Some(c) = twisted_dependence(&a, &t, bound) {
                // A common left multiple of the modular order is the lclm.
                let divides = |o: &OreOp| c.right_divmod(o).is_ok_and(|(_, r)| r.is_zero());
                let ok = ops.iter().all(divides);
                if ok {
                    return Ok(c);
                }
            }
        }
        let rems: Vec<Vec<Vec<RFuncN>>> = ops.iter().map(|o| o.power_remainders(bound)).collect();
        let columns: Vec<Vec<RFuncN>> = (0..=bound)
            .map(|j| rems.iter().flat_map(|r| r[j].iter().cloned()).collect())
            .collect();
        if columns[0].is_empty() {
            // Every operator has order zero.
            return Ok(OreOp::one());
        }
        let dep = first_dependence(&columns).ok_or_else(|| Error::Internal("lclm bound not reached".into()))?;
        Ok(OreOp::from_coeffs(dep).normalize())
    }

    /// Minimum exponent zero, integer primitive coefficients, positive lc.
    pub fn normalize(&self) -> OreOp {
        if self.is_zero() {
            return self.clone();
        }
        let mut den = ZPoly::one();
        for c in &self.coeffs {
            if !c.is_zero() && !c.den().is_one() {
                let g = den.gcd(c.den());
                den = &den * &c.den().div_exact(&g).unwrap();
            }
        }
        let polys: Vec<ZPoly> = self
            .coeffs
            .iter()
            .map(|c| {
                if c.is_zero() {
                    ZPoly::zero()
                } else {
                    c.num() * &den.div_exact(c.den()).unwrap()
                }
            })
            .collect();
        let mut g = ZPoly::zero();
        for p in &polys {
            if !p.is_zero() {
                g = if g.is_zero() { p.clone() } else { g.gcd(p) };
                if g.is_one() {
                    break;
                }
            }
        }
        let sign = polys.last().unwrap().lc().is_negative();
        let g = if sign { -g } else { g };
        let coeffs = polys
            .into_iter()
            .map(|p| RFuncN::from_poly(if p.is_zero() { p } else { p.div_exact(&g).unwrap() }))
            .collect();
        OreOp { lo: 0, coeffs }
    }

    pub fn is_normalized(&self) -> bool {
        *self == self.normalize()
    }

    /// `(L s)(n) = sum c_i(n) s(n + i)` on every `n` the window supports.
    pub fn apply(&self, s: &SeqWindow) -> Result<SeqWindow> {
        let need = self.order() + 1;
        if s.len() < need {
            return Err(Error::InsufficientWindow {
                needed: need,
                have: s.len(),
            });
        }
        let start = s.offset - self.lo;
        let count = s.len() - self.order();
        let mut out = Vec::with_capacity(count);
        for t in 0..count {
            let n = start + t as i64;
            out.push(self.apply_at(s, n)?);
        }
        Ok(SeqWindow::new(start, out))
    }

    /// Value of `(L s)(n)`.
    pub fn apply_at(&self, s: &SeqWindow, n: i64) -> Result<BigRational> {
        let nn = BigRational::from_integer(n.into());
        let mut acc = BigRational::zero();
        for (e, c) in self.terms() {
            let v = s.get(n + e).ok_or(Error::InsufficientWindow {
                needed: (n + e - s.offset + 1).max(0) as usize,
                have: s.len(),
            })?;
            acc += c.eval(&nn)? * v;
        }
        Ok(acc)
    }

    /// Integer points `n` where the leading or trailing coefficient vanishes or
    /// some coefficient has a pole, within `[from, to]`.
    pub fn singular_points(&self, from: i64, to: i64) -> Vec<i64> {
        let mut out = Vec::new();
        for n in from..=to {
            let nn = BigRational::from_integer(n.into());
            let bad = self.lc().eval(&nn).map_or(true, |v| v.is_zero())
                || self.terms().any(|(_, c)| c.den().eval(&nn).is_zero());
            if bad {
                out.push(n);
            }
        }
        out
    }

    /// Largest coefficient degree in `n`.
    pub fn degree_in_n(&self) -> usize {
        self.coeffs.iter().map(|c| c.height_degree()).max().unwrap_or(0)
    }

    pub fn to_text(&self) -> String {
        text::print_op(self)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms()
            .map(|(e, c)| {
                let cs = |p: &ZPoly| p.coeffs().iter().map(|x| x.to_string()).collect::<Vec<_>>();
                serde_json::json!({"exp": e, "num_coeffs": cs(c.num()), "den_coeffs": cs(c.den())})
            })
            .collect();
        serde_json::Value::Array(terms)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<OreOp> {
        let bad = |m: &str| Error::InvalidInput(format!("operator json: {m}"));
        let arr = v.as_array().ok_or_else(|| bad("expected an array"))?;
        let mut terms = Vec::new();
        for t in arr {
            let e = t["exp"].as_i64().ok_or_else(|| bad("exp"))?;
            let poly = |key: &str| -> Result<ZPoly> {
                let xs = t[key].as_array().ok_or_else(|| bad(key))?;
                let cs: Option<Vec<BigInt>> = xs.iter().map(|x| x.as_str()?.parse().ok()).collect();
                Ok(ZPoly::new(cs.ok_or_else(|| bad(key))?))
            };
            terms.push((e, RFuncN::new(poly("num_coeffs")?, poly("den_coeffs")?)?));
        }
        Ok(OreOp::from_terms(terms))
    }

    /// Bytes of the canonical text form.
    pub fn text_bytes(&self) -> usize {
        self.to_text().len()
    }

    /// Largest integer coefficient size in bits.
    pub fn max_coeff_bits(&self) -> u64 {
        self.coeffs
            .iter()
            .flat_map(|c| c.num().coeffs().iter().chain(c.den().coeffs()))
            .map(|x| x.bits())
            .max()
            .unwrap_or(0)
    }
}

impl Add for &OreOp {
    type Output = OreOp;
    fn add(self, rhs: &OreOp) -> OreOp {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(rhs.lo);
        let hi = self.high_exp().max(rhs.high_exp());
        let coeffs = (lo..=hi).map(|e| &self.coeff(e) + &rhs.coeff(e)).collect();
        OreOp::trimmed(lo, coeffs)
    }
}

impl Sub for &OreOp {
    type Output = OreOp;
    fn sub(self, rhs: &OreOp) -> OreOp {
        self + &(-rhs)
    }
}

impl Neg for &OreOp {
    type Output = OreOp;
    fn neg(self) -> OreOp {
        OreOp {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &OreOp {
    type Output = OreOp;
    fn mul(self, rhs: &OreOp) -> OreOp {
        if self.is_zero() || rhs.is_zero() {
            return OreOp::zero();
        }
        let mut coeffs = vec![RFuncN::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let e = self.lo + i as i64;
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = a * &b.shift(e);
                coeffs[i + j] = &coeffs[i + j] + &t;
            }
        }
        OreOp::trimmed(self.lo + rhs.lo, coeffs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for OreOp {
            type Output = OreOp;
            fn $m(self, rhs: OreOp) -> OreOp {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for OreOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for OreOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OreOp({})", self)
    }
}
