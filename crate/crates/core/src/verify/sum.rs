//! Exact definite sums `a(n) = sum_k H(n, k)`.
//!
//! Binomial and factorial factors are carried along `k` by exact small-step
//! ratios; the sum is formed over the lcm of the term denominators.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ore::SeqWindow;
use crate::term::affine::{rational_pow, Affine};
use crate::term::{binomial_int, eval_term, Factor, KRange, TermSpec};

const MAX_STEP: i64 = 8;

fn at(f: &Affine, n: i64, k: i64) -> i64 {
    f.eval(&n.into(), &k.into()).to_i64().expect("argument fits in i64")
}

/// `binomial(a, b)` kept up to date under small moves of `(a, b)`.
struct Binom {
    a: i64,
    b: i64,
    val: BigInt,
}

impl Binom {
    fn new(a: i64, b: i64) -> Self {
        Binom {
            a,
            b,
            val: binomial_int(&a.into(), &b.into()),
        }
    }

    fn inside(a: i64, b: i64) -> bool {
        0 <= b && b <= a
    }

    fn step_b(&mut self, to: i64) {
        while self.b < to {
            self.val = &self.val * (self.a - self.b) / (self.b + 1);
            self.b += 1;
        }
        while self.b > to {
            self.val = &self.val * self.b / (self.a - self.b + 1);
            self.b -= 1;
        }
    }

    fn step_a(&mut self, to: i64) {
        while self.a < to {
            self.val = &self.val * (self.a + 1) / (self.a + 1 - self.b);
            self.a += 1;
        }
        while self.a > to {
            self.val = &self.val * (self.a - self.b) / self.a;
            self.a -= 1;
        }
    }

    fn move_to(&mut self, a: i64, b: i64) {
        let near = (a - self.a).abs() <= MAX_STEP && (b - self.b).abs() <= MAX_STEP;
        if !(near && Self::inside(self.a, self.b) && Self::inside(a, b)) {
            *self = Binom::new(a, b);
        } else if a >= self.a {
            self.step_a(a);
            self.step_b(b);
        } else {
            self.step_b(b);
            self.step_a(a);
        }
    }
}

/// `m!`, or `None` for negative `m`.
struct Fact {
    m: i64,
    val: Option<BigInt>,
}

impl Fact {
    fn new(m: i64) -> Self {
        let val = (m >= 0).then(|| (1..=m).fold(BigInt::one(), |acc, i| acc * i));
        Fact { m, val }
    }

    fn move_to(&mut self, m: i64) {
        match &mut self.val {
            Some(v) if m >= 0 && (m - self.m).abs() <= MAX_STEP => {
                while self.m < m {
                    self.m += 1;
                    *v *= self.m;
                }
                while self.m > m {
                    *v /= self.m;
                    self.m -= 1;
                }
            }
            _ => *self = Fact::new(m),
        }
    }
}

enum State {
    Binom(Binom, i32),
    Fact(Fact, i32),
    Pow(BigRational),
}

struct Terms<'a> {
    spec: &'a TermSpec,
    n: i64,
    states: Vec<State>,
}

impl<'a> Terms<'a> {
    fn new(spec: &'a TermSpec, n: i64, k: i64) -> Self {
        let states = spec
            .factors
            .iter()
            .map(|f| match f {
                Factor::Binomial { top, bottom, e } => State::Binom(Binom::new(at(top, n, k), at(bottom, n, k)), *e),
                Factor::Factorial { arg, e } => State::Fact(Fact::new(at(arg, n, k)), *e),
                Factor::Pow { .. } => State::Pow(BigRational::zero()),
            })
            .collect();
        Terms { spec, n, states }
    }

    /// `H(n, k)` as an unreduced fraction.
    fn term(&mut self, k: i64) -> Result<(BigInt, BigInt)> {
        let n = self.n;
        let pole = || Error::PoleAtPoint {
            n: n.to_string(),
            k: Some(k.to_string()),
        };
        let mut zero = false;
        for (st, f) in self.states.iter_mut().zip(&self.spec.factors) {
            match (st, f) {
                (State::Binom(b, e), Factor::Binomial { top, bottom, .. }) => {
                    b.move_to(at(top, n, k), at(bottom, n, k));
                    if b.val.is_zero() {
                        if *e < 0 {
                            return Err(pole());
                        }
                        zero = true;
                    }
                }
                (State::Fact(fa, e), Factor::Factorial { arg, .. }) => {
                    fa.move_to(at(arg, n, k));
                    if fa.val.is_none() {
                        if *e > 0 {
                            return Err(pole());
                        }
                        zero = true;
                    }
                }
                (State::Pow(v), Factor::Pow { q, arg }) => {
                    *v = rational_pow(q, &arg.eval(&n.into(), &k.into()));
                }
                _ => unreachable!("states follow the factors"),
            }
        }
        if zero {
            // A vanishing combinatorial part also absorbs prefactor poles.
            return Ok((BigInt::zero(), BigInt::one()));
        }
        let pre = self.spec.prefactor.eval_int(n, k).map_err(|_| pole())?;
        let (mut num, mut den) = (pre.numer().clone(), pre.denom().clone());
        for st in &self.states {
            let (v, e) = match st {
                State::Binom(b, e) => (&b.val, *e),
                State::Fact(f, e) => (f.val.as_ref().unwrap(), *e),
                State::Pow(v) => {
                    num *= v.numer();
                    den *= v.denom();
                    continue;
                }
            };
            let p = num_traits::pow(v.clone(), e.unsigned_abs() as usize);
            if e > 0 {
                num *= p;
            } else {
                den *= p;
            }
        }
        Ok((num, den))
    }
}

/// Sum of fractions over the lcm of their denominators.
fn sum_fractions(terms: Vec<(BigInt, BigInt)>) -> BigRational {
    let mut l = BigInt::one();
    for (num, den) in &terms {
        if !num.is_zero() {
            // Reduce first: the running lcm is large, denominators usually small.
            let g = den.gcd(&(&l % den));
            l *= den / g;
        }
    }
    let mut total = BigInt::zero();
    for (num, den) in terms {
        if !num.is_zero() {
            total += num * (&l / den);
        }
    }
    BigRational::new(total, l)
}

/// `a(n0)` over the given `k` range.
pub fn sum_at(spec: &TermSpec, k_range: &KRange, n0: i64) -> Result<BigRational> {
    let (lo, hi) = k_range.bounds(spec, n0)?;
    if lo > hi {
        return Ok(BigRational::zero());
    }
    let mut terms = Terms::new(spec, n0, lo);
    let vals = (lo..=hi).map(|k| terms.term(k)).collect::<Result<Vec<_>>>()?;
    Ok(sum_fractions(vals))
}

/// `a(n_from), ..., a(n_to)`.
pub fn sum_sequence(spec: &TermSpec, k_range: &KRange, n_from: i64, n_to: i64) -> Result<SeqWindow> {
    let values = (n_from..=n_to).map(|n| sum_at(spec, k_range, n)).collect::<Result<Vec<_>>>()?;
    Ok(SeqWindow::new(n_from, values))
}

/// Term-by-term evaluation, in either `k` order; the oracle for [`sum_sequence`].
pub fn sum_direct(spec: &TermSpec, k_range: &KRange, n0: i64, reversed: bool) -> Result<BigRational> {
    let (lo, hi) = k_range.bounds(spec, n0)?;
    let ks: Vec<i64> = if reversed { (lo..=hi).rev().collect() } else { (lo..=hi).collect() };
    let mut acc = BigRational::zero();
    for k in ks {
        acc += eval_term(spec, n0, k)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn small_sums() {
        let nat = KRange::Natural;
        let eq5 = parse_term("binomial(n,k)^7/(2*n+3*k)").unwrap();
        assert_eq!(sum_at(&eq5, &nat, 1).unwrap(), q(7, 10));
        assert_eq!(sum_at(&TermSpec::binomial_power(1), &nat, 4).unwrap(), q(16, 1));
        assert_eq!(sum_at(&TermSpec::binomial_power(2), &nat, 3).unwrap(), q(20, 1));
    }

    #[test]
    fn matches_direct_evaluation() {
        for (e, r) in [
            ("binomial(n,k)^7/(2*n+3*k)", "0..n"),
            ("binomial(3*n,3*k)^2*binomial(3*n,3*k+1)", "all"),
            ("binomial(2*n-k,k)*pow(-2,k)", "all"),
            ("factorial(n+k)/(factorial(k)^2*factorial(n-k))", "0..n"),
            ("binomial(n,k)/(k+1)", "-2..n+2"),
        ] {
            let t = parse_term(e).unwrap();
            let kr = KRange::parse(r).unwrap();
            for n in 1..12 {
                let fast = sum_at(&t, &kr, n).unwrap();
                assert_eq!(fast, sum_direct(&t, &kr, n, false).unwrap(), "{e} at {n}");
                assert_eq!(fast, sum_direct(&t, &kr, n, true).unwrap(), "{e} at {n}");
            }
        }
    }

    #[test]
    fn pole_witness() {
        let t = parse_term("binomial(n,k)/(k-1)").unwrap();
        match sum_at(&t, &KRange::Natural, 3) {
            Err(Error::PoleAtPoint { n, k }) => assert_eq!((n.as_str(), k.as_deref()), ("3", Some("1"))),
            other => panic!("{other:?}"),
        }
    }
}
