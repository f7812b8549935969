//! Partial fractions over Q(n) with poles at integer-affine points `k = alpha(n)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::{affine_roots, PolyK, PolyNK, RFuncN, RFuncNK, Root, ZPoly};
use crate::error::Result;

/// `poly + sum_root sum_j poles[root][j-1] / (k - root)^j`.
///
/// Polynomial pieces produced around a pole are kept in powers of `k - root`
/// until [`PartialFrac::flush`], so repeated local updates avoid Taylor shifts.
#[derive(Clone, Debug, Default)]
pub struct PartialFrac {
    pub poly: PolyK,
    pub poles: BTreeMap<Root, Vec<RFuncN>>,
    local: BTreeMap<Root, Vec<RFuncN>>,
}

fn add_at(v: &mut Vec<RFuncN>, i: usize, c: &RFuncN) {
    if c.is_zero() {
        return;
    }
    if v.len() <= i {
        v.resize(i + 1, RFuncN::zero());
    }
    v[i] = &v[i] + c;
}

fn trim(v: &mut Vec<RFuncN>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Coefficients `c_0..c_{m-1}` of `a(t) / b(t)` as a power series.
pub(crate) fn series_div(a: &[RFuncN], b: &[RFuncN], m: usize) -> Result<Vec<RFuncN>> {
    let inv0 = b[0].inv()?;
    let mut c: Vec<RFuncN> = Vec::with_capacity(m);
    for i in 0..m {
        let mut s = a.get(i).cloned().unwrap_or_else(RFuncN::zero);
        for j in 1..=i.min(b.len() - 1) {
            if !b[j].is_zero() && !c[i - j].is_zero() {
                s = &s - &(&b[j] * &c[i - j]);
            }
        }
        c.push(&s * &inv0);
    }
    Ok(c)
}

impl PartialFrac {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_poly(p: PolyK) -> Self {
        PartialFrac {
            poly: p,
            ..Default::default()
        }
    }

    /// Decompose a rational function whose k-denominator splits into affine factors.
    pub fn from_rfunc(f: &RFuncNK) -> Result<Self> {
        let ar = affine_roots(f.den())?;
        let lead = RFuncN::from_poly(ar.lead.clone()).inv()?;
        let num = f.num().to_polyk().scale(&lead);
        if ar.roots.is_empty() {
            return Ok(Self::from_poly(num));
        }
        let lin: Vec<(PolyK, u32)> = ar
            .roots
            .iter()
            .map(|(r, m)| (PolyK::linear_root(&r.value()), *m))
            .collect();
        let denk = lin.iter().fold(PolyK::one(), |acc, (l, m)| &acc * &l.pow(*m));
        let (q, _) = num.div_rem(&denk)?;
        let mut out = Self::from_poly(q);
        for (idx, (root, m)) in ar.roots.iter().enumerate() {
            let m = *m as usize;
            let other = lin
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != idx)
                .fold(PolyK::one(), |acc, (_, (l, e))| &acc * &l.pow(*e));
            let alpha = root.value();
            let nt = num.taylor(&alpha, m);
            let ot = other.taylor(&alpha, m);
            let c = series_div(&nt, &ot, m)?;
            let slot = out.poles.entry(root.clone()).or_default();
            for (i, ci) in c.iter().enumerate() {
                add_at(slot, m - 1 - i, ci);
            }
            trim(slot);
        }
        out.poles.retain(|_, v| !v.is_empty());
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero() && self.poles.is_empty() && self.local.values().all(|v| v.iter().all(|c| c.is_zero()))
    }

    pub fn has_poles(&self) -> bool {
        self.poles.values().any(|v| v.iter().any(|c| !c.is_zero()))
    }

    pub fn add_pole(&mut self, root: &Root, j: usize, c: &RFuncN) {
        if c.is_zero() {
            return;
        }
        let slot = self.poles.entry(root.clone()).or_default();
        add_at(slot, j - 1, c);
        trim(slot);
        if slot.is_empty() {
            self.poles.remove(root);
        }
    }

    /// Add `scale * sum_i t_i (k - root)^(i - j)`.
    pub fn add_local(&mut self, root: &Root, t: &[RFuncN], j: usize, scale: &RFuncN) {
        if scale.is_zero() {
            return;
        }
        for (i, ti) in t.iter().enumerate() {
            if ti.is_zero() {
                continue;
            }
            let c = ti * scale;
            if i < j {
                self.add_pole(root, j - i, &c);
            } else {
                add_at(self.local.entry(root.clone()).or_default(), i - j, &c);
            }
        }
    }

    /// Move locally stored polynomial pieces into `poly`.
    pub fn flush(&mut self) {
        for (root, coeffs) in std::mem::take(&mut self.local) {
            let p = PolyK::new(coeffs).shift_k(&-root.value());
            self.poly = &self.poly + &p;
        }
    }

    pub fn scaled(&self, c: &RFuncN) -> Self {
        let s = |v: &Vec<RFuncN>| v.iter().map(|x| x * c).collect::<Vec<_>>();
        let mut out = PartialFrac {
            poly: self.poly.scale(c),
            poles: self.poles.iter().map(|(r, v)| (r.clone(), s(v))).collect(),
            local: self.local.iter().map(|(r, v)| (r.clone(), s(v))).collect(),
        };
        if c.is_zero() {
            out = Self::zero();
        }
        out
    }

    pub fn add(&mut self, o: &PartialFrac) {
        self.poly = &self.poly + &o.poly;
        for (r, v) in &o.poles {
            for (i, c) in v.iter().enumerate() {
                self.add_pole(r, i + 1, c);
            }
        }
        for (r, v) in &o.local {
            let slot = self.local.entry(r.clone()).or_default();
            for (i, c) in v.iter().enumerate() {
                add_at(slot, i, c);
            }
        }
    }

    /// Sum of the pole terms alone as a rational function.
    pub fn frac_rfunc(&self) -> RFuncNK {
        let mut acc = RFuncNK::zero();
        for (root, coeffs) in &self.poles {
            // (k - root) = lin / b with lin = a*n + b*k + c primitive
            let (a, b, c) = root.factor_coeffs();
            let lin = PolyNK::affine(&a, &b, &c);
            let j = coeffs.len();
            // sum_i c_i (k-root)^(j-1-i) over (k-root)^j, as one fraction
            let mut num = PolyK::zero();
            let kr = PolyK::linear_root(&root.value());
            let mut pw = PolyK::one();
            for i in (0..j).rev() {
                num = &num + &pw.scale(&coeffs[i]);
                pw = &pw * &kr;
            }
            let (nn, nd) = PolyNK::from_polyk(&num);
            let bj = num_traits::pow(b.clone(), j);
            let den = lin.pow(j as u32).mul_n(&nd);
            let term = RFuncNK::normalize(nn.scale(&bj), den).expect("nonzero denominator");
            acc = &acc + &term;
        }
        acc
    }

    /// Whole value as a rational function (flushes local pieces first).
    pub fn to_rfunc(&self) -> RFuncNK {
        let mut me = self.clone();
        me.flush();
        &me.frac_rfunc() + &polyk_to_rfunc(&me.poly)
    }

    pub fn max_pole_order(&self) -> usize {
        self.poles.values().map(|v| v.len()).max().unwrap_or(0)
    }
}

pub fn polyk_to_rfunc(p: &PolyK) -> RFuncNK {
    let (num, den) = PolyNK::from_polyk(p);
    RFuncNK::normalize(num, PolyNK::from_n(den)).expect("nonzero denominator")
}

/// `c * k^d` as a rational function.
pub fn monomial_rfunc(d: usize) -> RFuncNK {
    let mut by_k = vec![ZPoly::zero(); d];
    by_k.push(ZPoly::constant(BigInt::one()));
    RFuncNK::from_poly(PolyNK::new(by_k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse::{expr_to_rfunc, parse_expr};

    fn rf(s: &str) -> RFuncNK {
        expr_to_rfunc(&parse_expr(s, &["n", "k"]).unwrap()).unwrap()
    }

    #[test]
    fn decomposition_roundtrip() {
        for s in [
            "1/(2*n+3*k)",
            "(k^3+n)/((k+1)^2*(k-n))",
            "((n+1)/(n-k+1))^7",
            "k^4/((2*k+1)*(3*k-n+2)^2)",
        ] {
            let f = rf(s);
            let pf = PartialFrac::from_rfunc(&f).unwrap();
            assert_eq!(pf.to_rfunc(), f, "{s}");
        }
        let pf = PartialFrac::from_rfunc(&rf("(k^2+1)/(k+1)")).unwrap();
        assert_eq!(pf.poly.degree(), Some(1));
        assert_eq!(pf.poles.len(), 1);
    }

    #[test]
    fn local_pieces() {
        let mut pf = PartialFrac::zero();
        let root = Root::from_ints(1, 0);
        let t = vec![RFuncN::from_int(1), RFuncN::from_int(2), RFuncN::from_int(3)];
        pf.add_local(&root, &t, 1, &RFuncN::one());
        assert_eq!(pf.to_rfunc(), rf("(1 + 2*(k-n) + 3*(k-n)^2)/(k-n)"));
    }
}
