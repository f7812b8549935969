//! Integer-affine forms and products of them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith::polyk::affine_text;
use crate::arith::{PolyNK, RFuncN, RFuncNK, Root, ZPoly};
use crate::error::{Error, Result};

/// `a*n + b*k + c`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Affine {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl Affine {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        Affine {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    pub fn add_const(&self, d: &BigInt) -> Affine {
        Affine {
            a: self.a.clone(),
            b: self.b.clone(),
            c: &self.c + d,
        }
    }

    pub fn sub(&self, o: &Affine) -> Affine {
        Affine::new(&self.a - &o.a, &self.b - &o.b, &self.c - &o.c)
    }

    /// Value change under `n -> n + dn, k -> k + dk`.
    pub fn delta(&self, dn: i64, dk: i64) -> BigInt {
        &self.a * dn + &self.b * dk
    }

    /// Image under `k -> n - k`.
    pub fn reflect(&self) -> Affine {
        Affine::new(&self.a + &self.b, -&self.b, self.c.clone())
    }

    pub fn is_k_free(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn eval(&self, n: &BigInt, k: &BigInt) -> BigInt {
        &self.a * n + &self.b * k + &self.c
    }

    pub fn to_poly(&self) -> PolyNK {
        PolyNK::affine(&self.a, &self.b, &self.c)
    }

    /// `self = unit * prim` with `prim` primitive and positive leading
    /// coefficient in `k` (in `n` when k-free).
    pub fn primitive(&self) -> (BigInt, Affine) {
        let g = self.a.gcd(&self.b).gcd(&self.c);
        if g.is_zero() {
            return (BigInt::zero(), self.clone());
        }
        let lead = if !self.b.is_zero() {
            &self.b
        } else if !self.a.is_zero() {
            &self.a
        } else {
            &self.c
        };
        let g = if lead.is_negative() { -g } else { g };
        (
            g.clone(),
            Affine::new(&self.a / &g, &self.b / &g, &self.c / &g),
        )
    }

    /// Root in `k` of a k-dependent form.
    pub fn root(&self) -> Root {
        assert!(!self.b.is_zero());
        Root::new(
            BigRational::new(-&self.a, self.b.clone()),
            BigRational::new(-&self.c, self.b.clone()),
        )
    }

    pub fn to_text(&self) -> String {
        affine_text(&self.a, &self.b, &self.c)
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Affine({})", self)
    }
}

/// `scale(n) * prod aff^e` with every `aff` primitive, k-dependent, `b > 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Factored {
    pub scale: RFuncN,
    pub aff: BTreeMap<Affine, i32>,
}

impl Factored {
    pub fn one() -> Self {
        Factored {
            scale: RFuncN::one(),
            aff: BTreeMap::new(),
        }
    }

    pub fn constant(c: RFuncN) -> Self {
        Factored {
            scale: c,
            aff: BTreeMap::new(),
        }
    }

    /// Multiply by `f^e`.
    pub fn push(&mut self, f: &Affine, e: i32) {
        if e == 0 {
            return;
        }
        let (unit, p) = f.primitive();
        if unit.is_zero() {
            // A vanishing constant factor; callers never build one.
            panic!("zero affine factor");
        }
        let unit = RFuncN::from_bigint(unit).pow(e);
        self.scale = &self.scale * &unit;
        if p.is_constant() {
            return;
        }
        if p.is_k_free() {
            let lin = RFuncN::from_poly(ZPoly::linear(p.a.clone(), p.c.clone()));
            self.scale = &self.scale * &lin.pow(e);
            return;
        }
        let slot = self.aff.entry(p.clone()).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.aff.remove(&p);
        }
    }

    pub fn mul(&self, o: &Factored) -> Factored {
        let mut out = self.clone();
        out.scale = &out.scale * &o.scale;
        for (f, e) in &o.aff {
            out.push(f, *e);
        }
        out
    }

    pub fn inv(&self) -> Factored {
        Factored {
            scale: self.scale.inv().expect("factored value is nonzero"),
            aff: self.aff.iter().map(|(f, e)| (f.clone(), -e)).collect(),
        }
    }

    pub fn div(&self, o: &Factored) -> Factored {
        self.mul(&o.inv())
    }

    /// `f(n + dn, k + dk)`.
    pub fn shift(&self, dn: i64, dk: i64) -> Factored {
        let mut out = Factored::constant(self.scale.shift(dn));
        for (f, e) in &self.aff {
            out.push(&f.add_const(&f.delta(dn, dk)), *e);
        }
        out
    }

    /// `f(n, n - k)`.
    pub fn reflect(&self) -> Factored {
        let mut out = Factored::constant(self.scale.clone());
        for (f, e) in &self.aff {
            out.push(&f.reflect(), *e);
        }
        out
    }

    pub fn to_rfunc(&self) -> RFuncNK {
        let mut num = PolyNK::from_n(self.scale.num().clone());
        let mut den = PolyNK::from_n(self.scale.den().clone());
        for (f, e) in &self.aff {
            let p = f.to_poly().pow(e.unsigned_abs());
            if *e > 0 {
                num = &num * &p;
            } else {
                den = &den * &p;
            }
        }
        RFuncNK::normalize(num, den).expect("nonzero denominator")
    }

    /// `scale' * prod (k - root)^e` form.
    pub fn k_roots(&self) -> (RFuncN, Vec<(Root, i32)>) {
        let mut scale = self.scale.clone();
        let mut roots = Vec::new();
        for (f, e) in &self.aff {
            scale = &scale * &RFuncN::from_bigint(f.b.clone()).pow(*e);
            roots.push((f.root(), *e));
        }
        roots.sort();
        (scale, roots)
    }

    /// Factor a rational function whose k-dependent part splits into affine factors.
    pub fn from_rfunc(f: &RFuncNK) -> Result<Factored> {
        let mut out = Factored::one();
        for (poly, sign) in [(f.num(), 1i32), (f.den(), -1i32)] {
            for (p, m) in crate::arith::factor_k(poly)? {
                let e = sign * m as i32;
                if p.deg_k().unwrap_or(0) == 0 {
                    let c = RFuncN::from_poly(p.k_coeff(0));
                    out.scale = &out.scale * &c.pow(e);
                    continue;
                }
                let aff = poly_to_affine(&p).ok_or_else(|| Error::UnsupportedDenominator {
                    residual: p.to_text(),
                })?;
                out.push(&aff, e);
            }
        }
        Ok(out)
    }

    pub fn is_one(&self) -> bool {
        self.scale.is_one() && self.aff.is_empty()
    }
}

pub fn poly_to_affine(p: &PolyNK) -> Option<Affine> {
    if p.total_degree() > 1 {
        return None;
    }
    let c0 = p.k_coeff(0);
    let c1 = p.k_coeff(1);
    Some(Affine::new(c0.coeff(1), c1.coeff(0), c0.coeff(0)))
}

/// Rising-style product `prod_{i in lo..=hi} (f + i)`, as exponents.
pub fn push_range(out: &mut Factored, f: &Affine, lo: i64, hi: i64, e: i32) {
    for i in lo..=hi {
        out.push(&f.add_const(&BigInt::from(i)), e);
    }
}

/// `(f + d)! / f!` raised to `e`.
pub fn factorial_ratio(out: &mut Factored, f: &Affine, d: &BigInt, e: i32) {
    let d: i64 = d.try_into().expect("small shift");
    if d > 0 {
        push_range(out, f, 1, d, e);
    } else if d < 0 {
        push_range(out, f, d + 1, 0, -e);
    }
}

pub fn rational_pow(q: &BigRational, e: &BigInt) -> BigRational {
    let ee: i32 = e.try_into().expect("small exponent");
    if ee >= 0 {
        num_traits::pow(q.clone(), ee as usize)
    } else {
        num_traits::pow(q.recip(), (-ee) as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_forms() {
        let (u, p) = Affine::new(2, -4, 6).primitive();
        assert_eq!((u, p), (BigInt::from(-2), Affine::new(-1, 2, -3)));
        let (u, p) = Affine::new(-3, 0, 6).primitive();
        assert_eq!((u, p), (BigInt::from(-3), Affine::new(1, 0, -2)));
    }

    #[test]
    fn factored_roundtrip() {
        let mut f = Factored::one();
        f.push(&Affine::new(1, -1, 0), 7);
        f.push(&Affine::new(0, 1, 1), -7);
        f.push(&Affine::new(1, 0, 1), 2);
        let r = f.to_rfunc();
        assert_eq!(Factored::from_rfunc(&r).unwrap(), f);
        assert_eq!(f.shift(1, 1).to_rfunc(), r.shift_int(1, 1));
        assert_eq!(f.reflect().to_rfunc(), r.reflect_k());
    }
}
