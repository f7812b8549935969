//! Rational functions in `n` over Q.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::zpoly::ZPoly;
use crate::error::{Error, Result};

/// Canonical element of Q(n): integer numerator and denominator, coprime in
/// Z[n], denominator with positive leading coefficient. Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RFuncN {
    num: ZPoly,
    den: ZPoly,
}

impl RFuncN {
    pub fn new(num: ZPoly, den: ZPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::new_unchecked(num, den))
    }

    fn new_unchecked(num: ZPoly, den: ZPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        if den.lc().is_negative() {
            num = -num;
            den = -den;
        }
        RFuncN { num, den }
    }

    pub fn zero() -> Self {
        RFuncN {
            num: ZPoly::zero(),
            den: ZPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(ZPoly::constant(BigInt::from(c)))
    }

    pub fn from_bigint(c: BigInt) -> Self {
        Self::from_poly(ZPoly::constant(c))
    }

    pub fn from_rational(q: &BigRational) -> Self {
        RFuncN {
            num: ZPoly::constant(q.numer().clone()),
            den: ZPoly::constant(q.denom().clone()),
        }
    }

    pub fn from_poly(p: ZPoly) -> Self {
        RFuncN {
            num: p,
            den: ZPoly::one(),
        }
    }

    /// The element `n`.
    pub fn var() -> Self {
        Self::from_poly(ZPoly::var())
    }

    /// `slope*n + offset` for rationals.
    pub fn linear(slope: &BigRational, offset: &BigRational) -> Self {
        let d = num_integer::lcm(slope.denom().clone(), offset.denom().clone());
        let a = slope.numer() * (&d / slope.denom());
        let b = offset.numer() * (&d / offset.denom());
        Self::new_unchecked(ZPoly::linear(a, b), ZPoly::constant(d))
    }

    pub fn num(&self) -> &ZPoly {
        &self.num
    }

    pub fn den(&self) -> &ZPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_constant()
    }

    /// The constant value when `self` does not depend on `n`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_constant() {
            Some(BigRational::new(self.num.coeff(0), self.den.coeff(0)))
        } else {
            None
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (mut num, mut den) = (self.den.clone(), self.num.clone());
        if den.lc().is_negative() {
            num = -num;
            den = -den;
        }
        Ok(RFuncN { num, den })
    }

    /// `f(n + c)`.
    pub fn shift(&self, c: i64) -> Self {
        if c == 0 || self.is_constant() {
            return self.clone();
        }
        let c = BigInt::from(c);
        // Shifts preserve coprimality and the sign of the leading coefficient.
        RFuncN {
            num: self.num.shift(&c),
            den: self.den.shift(&c),
        }
    }

    pub fn scale_int(&self, c: &BigInt) -> Self {
        self * &Self::from_bigint(c.clone())
    }

    pub fn pow(&self, e: i32) -> Self {
        let base = if e < 0 {
            self.inv().expect("negative power of zero")
        } else {
            self.clone()
        };
        let e = e.unsigned_abs();
        RFuncN {
            num: base.num.pow(e),
            den: base.den.pow(e),
        }
    }

    pub fn eval(&self, x: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::PoleAtPoint {
                n: x.to_string(),
                k: None,
            });
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn eval_int(&self, x: i64) -> Result<BigRational> {
        self.eval(&BigRational::from_integer(BigInt::from(x)))
    }

    /// Degree measure used for size reports: max of numerator/denominator degrees.
    pub fn height_degree(&self) -> usize {
        self.num.deg_or_zero().max(self.den.deg_or_zero())
    }

    pub fn to_text(&self) -> String {
        if self.den.is_one() {
            self.num.fmt_var("n")
        } else {
            let terms = |p: &ZPoly| p.coeffs().iter().filter(|c| !c.is_zero()).count();
            let num = self.num.fmt_var("n");
            let den = self.den.fmt_var("n");
            let num = if terms(&self.num) > 1 { format!("({num})") } else { num };
            let bare = den.chars().all(|c| c.is_ascii_alphanumeric());
            let den = if bare { den } else { format!("({den})") };
            format!("{num}/{den}")
        }
    }
}

impl Default for RFuncN {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for &RFuncN {
    type Output = RFuncN;
    fn add(self, rhs: &RFuncN) -> RFuncN {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RFuncN::from_poly(&self.num + &rhs.num);
        }
        let g = self.den.gcd(&rhs.den);
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            let den = &self.den * &rhs.den;
            // Coprime denominators leave nothing to cancel.
            return RFuncN::finish(num, den);
        }
        let bd = self.den.div_exact(&g).unwrap();
        let dd = rhs.den.div_exact(&g).unwrap();
        let num = &(&self.num * &dd) + &(&rhs.num * &bd);
        let den = &self.den * &dd;
        if num.is_zero() {
            return RFuncN::zero();
        }
        let g2 = num.gcd(&g);
        if g2.is_one() {
            RFuncN::finish(num, den)
        } else {
            RFuncN::finish(num.div_exact(&g2).unwrap(), den.div_exact(&g2).unwrap())
        }
    }
}

impl RFuncN {
    fn finish(num: ZPoly, mut den: ZPoly) -> RFuncN {
        if num.is_zero() {
            return RFuncN::zero();
        }
        let mut num = num;
        if den.lc().is_negative() {
            num = -num;
            den = -den;
        }
        RFuncN { num, den }
    }
}

impl Sub for &RFuncN {
    type Output = RFuncN;
    fn sub(self, rhs: &RFuncN) -> RFuncN {
        self + &(-rhs)
    }
}

impl Mul for &RFuncN {
    type Output = RFuncN;
    fn mul(self, rhs: &RFuncN) -> RFuncN {
        if self.is_zero() || rhs.is_zero() {
            return RFuncN::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RFuncN::from_poly(&self.num * &rhs.num);
        }
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let a = self.num.div_exact(&g1).unwrap();
        let d = rhs.den.div_exact(&g1).unwrap();
        let c = rhs.num.div_exact(&g2).unwrap();
        let b = self.den.div_exact(&g2).unwrap();
        RFuncN::finish(&a * &c, &b * &d)
    }
}

impl Div for &RFuncN {
    type Output = RFuncN;
    fn div(self, rhs: &RFuncN) -> RFuncN {
        self * &rhs.inv().expect("division by zero in Q(n)")
    }
}

impl Neg for &RFuncN {
    type Output = RFuncN;
    fn neg(self) -> RFuncN {
        RFuncN {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RFuncN {
    type Output = RFuncN;
    fn neg(self) -> RFuncN {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RFuncN {
            type Output = RFuncN;
            fn $m(self, rhs: RFuncN) -> RFuncN {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl fmt::Display for RFuncN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for RFuncN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RFuncN({})", self)
    }
}

impl One for RFuncN {
    fn one() -> Self {
        RFuncN::one()
    }
}

impl Zero for RFuncN {
    fn zero() -> Self {
        RFuncN::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(a: i64, b: i64) -> RFuncN {
        RFuncN::from_poly(ZPoly::from_i64s(&[b, a]))
    }

    #[test]
    fn canonical_form() {
        let x = RFuncN::new(ZPoly::from_i64s(&[2, 2]), ZPoly::from_i64s(&[-4, -4])).unwrap();
        assert_eq!(x, RFuncN::from_rational(&BigRational::new((-1).into(), 2.into())));
        assert!(RFuncN::new(ZPoly::one(), ZPoly::zero()).is_err());
    }

    #[test]
    fn field_ops() {
        let a = &lin(1, 1) / &lin(2, 3);
        let b = &lin(1, -1) / &lin(2, 3);
        let s = &a + &b;
        assert_eq!(s, &lin(2, 0) / &lin(2, 3));
        assert_eq!(&a * &a.inv().unwrap(), RFuncN::one());
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn shift_evaluates() {
        let a = &lin(1, 0) / &lin(1, 2);
        assert_eq!(a.shift(1), &lin(1, 1) / &lin(1, 3));
        assert_eq!(
            a.eval_int(2).unwrap(),
            BigRational::new(1.into(), 2.into())
        );
        assert!(a.eval_int(-2).is_err());
    }
}
