//! Rational functions in `n` and `k`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::polynk::PolyNK;
use super::zpoly::ZPoly;
use crate::error::{Error, Result};

/// Element of Q(n, k) in canonical form: coprime integer numerator and
/// denominator, denominator with positive graded-lex leading coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RFuncNK {
    num: PolyNK,
    den: PolyNK,
}

impl RFuncNK {
    /// Canonical form of `num / den`.
    pub fn normalize(num: PolyNK, den: PolyNK) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        let c = {
            let a = num.int_content();
            num_integer::Integer::gcd(&a, &den.int_content())
        };
        if !c.is_one() {
            num = num.div_n_exact(&ZPoly::constant(c.clone())).unwrap();
            den = den.div_n_exact(&ZPoly::constant(c)).unwrap();
        }
        if den.leading_term().unwrap().2.is_negative() {
            num = -num;
            den = -den;
        }
        Ok(RFuncNK { num, den })
    }

    pub fn zero() -> Self {
        RFuncNK {
            num: PolyNK::zero(),
            den: PolyNK::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(PolyNK::one())
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(PolyNK::constant(c.into()))
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Self::normalize(
            PolyNK::constant(q.numer().clone()),
            PolyNK::constant(q.denom().clone()),
        )
        .unwrap()
    }

    pub fn from_poly(p: PolyNK) -> Self {
        RFuncNK {
            num: p,
            den: PolyNK::one(),
        }
    }

    pub fn n() -> Self {
        Self::from_poly(PolyNK::n())
    }

    pub fn k() -> Self {
        Self::from_poly(PolyNK::k())
    }

    pub fn num(&self) -> &PolyNK {
        &self.num
    }

    pub fn den(&self) -> &PolyNK {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the function does not depend on `k`.
    pub fn is_k_free(&self) -> bool {
        self.num.deg_k().unwrap_or(0) == 0 && self.den.deg_k().unwrap_or(0) == 0
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::normalize(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs();
        // Powers of coprime polynomials stay coprime.
        let mut num = base.num.pow(e);
        let mut den = base.den.pow(e);
        if den.leading_term().unwrap().2.is_negative() {
            num = -num;
            den = -den;
        }
        Ok(RFuncNK { num, den })
    }

    /// `f(n + dn, k + dk)`; `dk` may be a non-integer rational.
    pub fn shift(&self, dn: i64, dk: &BigRational) -> Self {
        let (pn, sn) = self.num.shift(dn, dk);
        let (pd, sd) = self.den.shift(dn, dk);
        // value = (pn / sn) / (pd / sd) = pn*sd / (pd*sn)
        Self::normalize(pn.scale(&sd), pd.scale(&sn)).expect("shift keeps denominator nonzero")
    }

    pub fn shift_int(&self, dn: i64, dk: i64) -> Self {
        self.shift(dn, &BigRational::from_integer(dk.into()))
    }

    /// `f(n, n - k)`.
    pub fn reflect_k(&self) -> Self {
        let one = BigInt::one();
        let (pn, sn) = self.num.substitute(0, &one, &-&one, &BigInt::zero(), &one);
        let (pd, sd) = self.den.substitute(0, &one, &-&one, &BigInt::zero(), &one);
        Self::normalize(pn.scale(&sd), pd.scale(&sn)).expect("reflection keeps denominator nonzero")
    }

    pub fn eval(&self, n0: &BigRational, k0: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(n0, k0);
        if d.is_zero() {
            return Err(Error::PoleAtPoint {
                n: n0.to_string(),
                k: Some(k0.to_string()),
            });
        }
        Ok(self.num.eval(n0, k0) / d)
    }

    pub fn eval_int(&self, n0: i64, k0: i64) -> Result<BigRational> {
        self.eval(
            &BigRational::from_integer(n0.into()),
            &BigRational::from_integer(k0.into()),
        )
    }

    /// Equality test by cross multiplication; avoids the bivariate gcd.
    pub fn same_value(a_num: &PolyNK, a_den: &PolyNK, b_num: &PolyNK, b_den: &PolyNK) -> bool {
        (a_num * b_den) == (b_num * a_den)
    }

    pub fn to_text(&self) -> String {
        let wrap = |p: &PolyNK| {
            if p.num_terms() > 1 {
                format!("({})", p)
            } else {
                p.to_text()
            }
        };
        if self.den.is_one() {
            self.num.to_text()
        } else {
            format!("{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

impl Default for RFuncNK {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for &RFuncNK {
    type Output = RFuncNK;
    fn add(self, rhs: &RFuncNK) -> RFuncNK {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RFuncNK::normalize(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        RFuncNK::normalize(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .unwrap()
    }
}

impl Sub for &RFuncNK {
    type Output = RFuncNK;
    fn sub(self, rhs: &RFuncNK) -> RFuncNK {
        self + &(-rhs)
    }
}

impl Mul for &RFuncNK {
    type Output = RFuncNK;
    fn mul(self, rhs: &RFuncNK) -> RFuncNK {
        if self.is_zero() || rhs.is_zero() {
            return RFuncNK::zero();
        }
        RFuncNK::normalize(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl Div for &RFuncNK {
    type Output = RFuncNK;
    fn div(self, rhs: &RFuncNK) -> RFuncNK {
        self * &rhs.inv().expect("division by zero in Q(n,k)")
    }
}

impl Neg for &RFuncNK {
    type Output = RFuncNK;
    fn neg(self) -> RFuncNK {
        RFuncNK {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RFuncNK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for RFuncNK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RFuncNK({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aff(a: i64, b: i64, c: i64) -> PolyNK {
        PolyNK::affine(&a.into(), &b.into(), &c.into())
    }

    #[test]
    fn normalize_examples() {
        // (2nk, 4k) -> n/2
        let nk = &PolyNK::n() * &PolyNK::k();
        let r = RFuncNK::normalize(nk.scale(&2.into()), PolyNK::k().scale(&4.into())).unwrap();
        assert_eq!(r.num(), &PolyNK::n());
        assert_eq!(r.den(), &PolyNK::constant(2.into()));
        let z = RFuncNK::normalize(PolyNK::zero(), aff(1, 0, 1)).unwrap();
        assert_eq!(z, RFuncNK::zero());
        let sq = &aff(1, 1, 0) * &aff(1, -1, 0);
        let r = RFuncNK::normalize(sq, aff(1, -1, 0)).unwrap();
        assert_eq!(r, RFuncNK::from_poly(aff(1, 1, 0)));
        assert_eq!(
            RFuncNK::normalize(PolyNK::one(), PolyNK::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn shift_examples() {
        let f = RFuncNK::normalize(PolyNK::one(), aff(2, 3, 0)).unwrap();
        assert_eq!(f.shift_int(3, -2), f);
        let third = BigRational::new(1.into(), 3.into());
        assert_eq!(
            RFuncNK::k().shift(0, &third),
            RFuncNK::normalize(aff(0, 3, 1), PolyNK::constant(3.into())).unwrap()
        );
        let nk = RFuncNK::from_poly(&PolyNK::n() * &PolyNK::k());
        assert_eq!(nk.shift_int(1, 0), RFuncNK::from_poly(&aff(1, 0, 1) * &PolyNK::k()));
    }

    #[test]
    fn eval_examples() {
        let f = RFuncNK::normalize(PolyNK::one(), aff(2, 3, 0)).unwrap();
        assert_eq!(f.eval_int(1, 1).unwrap(), BigRational::new(1.into(), 5.into()));
        let g = RFuncNK::normalize(PolyNK::n(), PolyNK::k()).unwrap();
        assert!(matches!(g.eval_int(3, 0), Err(Error::PoleAtPoint { .. })));
        let h = RFuncNK::normalize(aff(1, 1, 0), aff(1, -1, 0)).unwrap();
        assert_eq!(h.eval_int(5, 2).unwrap(), BigRational::new(7.into(), 3.into()));
        assert_eq!(f.to_text(), "1/(2*n+3*k)");
    }
}
