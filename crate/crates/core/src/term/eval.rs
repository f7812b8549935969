//! Exact evaluation of terms at integer points.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::affine::{rational_pow, Affine};
use super::{Factor, TermSpec};
use crate::error::{Error, Result};

/// `binomial(a, b)`: zero for `b < 0`, the falling-factorial quotient otherwise.
pub fn binomial_int(a: &BigInt, b: &BigInt) -> BigInt {
    if b.is_negative() {
        return BigInt::zero();
    }
    if !a.is_negative() && b > a {
        return BigInt::zero();
    }
    let mut b = b.clone();
    if !a.is_negative() && &b + &b > *a {
        b = a - &b;
    }
    let bb = b.to_u64().expect("binomial index fits in u64");
    let mut acc = BigInt::one();
    for i in 0..bb {
        acc = acc * (a - BigInt::from(i)) / BigInt::from(i + 1);
    }
    acc
}

fn factorial_int(a: &BigInt) -> Option<BigInt> {
    if a.is_negative() {
        return None;
    }
    let m = a.to_u64().expect("factorial argument fits in u64");
    Some((1..=m).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)))
}

fn pole(n0: i64, k0: i64) -> Error {
    Error::PoleAtPoint {
        n: n0.to_string(),
        k: Some(k0.to_string()),
    }
}

/// Value at `(n0, k0)` and whether a prefactor pole was overridden by a zero
/// of the combinatorial part.
pub fn eval_term_flagged(spec: &TermSpec, n0: i64, k0: i64) -> Result<(BigRational, bool)> {
    let n = BigInt::from(n0);
    let k = BigInt::from(k0);
    let mut val = BigRational::one();
    let mut zero = false;
    for f in &spec.factors {
        match f {
            Factor::Binomial { top, bottom, e } => {
                let v = binomial_int(&top.eval(&n, &k), &bottom.eval(&n, &k));
                if v.is_zero() {
                    if *e < 0 {
                        return Err(pole(n0, k0));
                    }
                    zero = true;
                } else {
                    val *= rational_pow(&BigRational::from_integer(v), &BigInt::from(*e));
                }
            }
            Factor::Factorial { arg, e } => match factorial_int(&arg.eval(&n, &k)) {
                Some(v) => val *= rational_pow(&BigRational::from_integer(v), &BigInt::from(*e)),
                None if *e < 0 => zero = true,
                None => return Err(pole(n0, k0)),
            },
            Factor::Pow { q, arg } => val *= rational_pow(q, &arg.eval(&n, &k)),
        }
    }
    let nn = BigRational::from_integer(n);
    let kk = BigRational::from_integer(k);
    match spec.prefactor.eval(&nn, &kk) {
        Ok(p) => Ok(if zero { (BigRational::zero(), false) } else { (val * p, false) }),
        Err(_) if zero => Ok((BigRational::zero(), true)),
        Err(e) => Err(e),
    }
}

pub fn eval_term(spec: &TermSpec, n0: i64, k0: i64) -> Result<BigRational> {
    eval_term_flagged(spec, n0, k0).map(|v| v.0)
}

/// `k`-interval where the combinatorial part can be nonzero at `n0`:
/// `0 <= bottom <= top` for each binomial with positive exponent and
/// `arg >= 0` for reciprocal factorials. `None` when the support is unbounded.
pub fn natural_support(spec: &TermSpec, n0: i64) -> Option<(i64, i64)> {
    let n = BigInt::from(n0);
    let mut lo: Option<BigInt> = None;
    let mut hi: Option<BigInt> = None;
    let mut empty = false;
    let mut constrain = |f: &Affine| {
        // f(n0, k) = b k + c' >= 0
        let c = &f.a * &n + &f.c;
        if f.b.is_zero() {
            if c.is_negative() {
                empty = true;
            }
        } else if f.b.is_positive() {
            let bound = num_integer::Integer::div_ceil(&(-&c), &f.b);
            lo = Some(lo.take().map_or(bound.clone(), |l| l.max(bound)));
        } else {
            let bound = num_integer::Integer::div_floor(&c, &(-&f.b));
            hi = Some(hi.take().map_or(bound.clone(), |h| h.min(bound)));
        }
    };
    for f in &spec.factors {
        match f {
            Factor::Binomial { top, bottom, e } if *e > 0 => {
                constrain(bottom);
                constrain(&top.sub(bottom));
            }
            Factor::Factorial { arg, e } if *e < 0 => constrain(arg),
            _ => {}
        }
    }
    let (lo, hi) = (lo?, hi?);
    let (lo, hi) = (lo.to_i64()?, hi.to_i64()?);
    if empty || lo > hi {
        return Some((0, -1));
    }
    Some((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;

    #[test]
    fn eval_examples() {
        let t = parse_term("binomial(n,k)^7/(2*n+3*k)").unwrap();
        assert_eq!(eval_term(&t, 1, 1).unwrap(), BigRational::new(1.into(), 5.into()));
        let b = TermSpec::binomial_power(1);
        assert_eq!(eval_term(&b, 5, 2).unwrap(), BigRational::from_integer(10.into()));
        assert!(eval_term(&b, 5, 7).unwrap().is_zero());
        // Prefactor pole where the binomial vanishes.
        let t = parse_term("binomial(n,k)/(k+1)").unwrap();
        assert_eq!(eval_term_flagged(&t, 3, -1).unwrap(), (BigRational::zero(), true));
        let t = parse_term("binomial(n,k)/(k-1)").unwrap();
        assert!(matches!(eval_term(&t, 3, 1), Err(Error::PoleAtPoint { .. })));
    }

    #[test]
    fn supports() {
        let t = parse_term("binomial(3*n,3*k)^2*binomial(3*n,3*k+1)").unwrap();
        assert_eq!(natural_support(&t, 4), Some((0, 3)));
        assert_eq!(natural_support(&TermSpec::binomial_power(2), 5), Some((0, 5)));
        assert_eq!(natural_support(&parse_term("pow(2,k)").unwrap(), 5), None);
        assert_eq!(binomial_int(&BigInt::from(-3), &BigInt::from(2)), BigInt::from(6));
    }
}
