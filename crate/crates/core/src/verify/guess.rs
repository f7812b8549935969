//! Recurrence guessing: `sum_i p_i(n) a(n + i) = 0` with polynomial `p_i`.
//!
//! For each order an interpolation basis of the solution module is built
//! modulo word-size primes, one point at a time; its lowest-degree row is
//! the lowest-degree recurrence on the window. An empty answer modulo one
//! prime rules out rational solutions. Rational coefficients come from CRT
//! and rational reconstruction and are checked exactly on the whole window.

use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::modp::{self, clear_denominators, PolyP, RationalLifter};
use crate::arith::RFuncN;
use crate::error::{Error, Result};
use crate::ore::{OreOp, SeqWindow};

/// Equations beyond the unknown count that every accepted guess must satisfy.
pub const MARGIN: usize = 10;
const MAX_PRIMES: usize = 400;
const MAX_RESTARTS: usize = 3;

/// Shortest window accepted for the given caps.
pub fn required_window(max_order: usize, max_degree: usize) -> usize {
    (max_order + 1) * (max_degree + 2) + max_order + MARGIN
}

fn axpy(dst: &mut PolyP, f: u64, src: &[u64], p: u64) {
    if dst.len() < src.len() {
        dst.resize(src.len(), 0);
    }
    for (d, s) in dst.iter_mut().zip(src) {
        *d = modp::sub_mod(*d, modp::mul_mod(f, *s, p), p);
    }
    while dst.last() == Some(&0) {
        dst.pop();
    }
}

fn times_linear(a: &[u64], x: u64, p: u64) -> PolyP {
    if a.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + 1];
    for (i, c) in a.iter().enumerate() {
        out[i + 1] = modp::add_mod(out[i + 1], *c, p);
        out[i] = modp::sub_mod(out[i], modp::mul_mod(*c, x, p), p);
    }
    out
}

fn row_degree(v: &[PolyP]) -> Option<usize> {
    v.iter().filter_map(|q| q.len().checked_sub(1)).max()
}

/// Lowest-degree solution of order `r` modulo `p`, normalized, or `Ok(None)` when
/// every solution has degree above `max_degree`. `Err(())` for an unusable prime.
fn solve_mod(vals: &[u64], offset: i64, r: usize, max_degree: usize, p: u64) -> std::result::Result<Option<Vec<PolyP>>, ()> {
    let points = vals.len() - r;
    let mut basis: Vec<Vec<PolyP>> = (0..=r)
        .map(|j| (0..=r).map(|i| if i == j { vec![1] } else { Vec::new() }).collect())
        .collect();
    let mut degs = vec![0usize; r + 1];
    let mut res = vec![0u64; r + 1];
    for t in 0..points {
        let x = modp::signed_mod(offset + t as i64, p);
        let a = &vals[t..=t + r];
        for (j, v) in basis.iter().enumerate() {
            res[j] = v
                .iter()
                .zip(a)
                .fold(0, |acc, (q, ai)| modp::add_mod(acc, modp::mul_mod(*ai, modp::eval(q, x, p), p), p));
        }
        let Some(piv) = (0..=r).filter(|&j| res[j] != 0).min_by_key(|&j| (degs[j], j)) else {
            continue;
        };
        let inv = modp::inv_mod(res[piv], p).ok_or(())?;
        let pv = basis[piv].clone();
        for j in 0..=r {
            if j != piv && res[j] != 0 {
                let f = modp::mul_mod(res[j], inv, p);
                for (dst, src) in basis[j].iter_mut().zip(&pv) {
                    axpy(dst, f, src, p);
                }
            }
        }
        basis[piv] = pv.iter().map(|q| times_linear(q, x, p)).collect();
        degs[piv] += 1;
    }
    let best = basis
        .into_iter()
        .filter_map(|v| row_degree(&v).map(|d| (d, v)))
        .min_by_key(|(d, _)| *d);
    match best {
        Some((d, mut v)) if d <= max_degree => {
            // Scale the top coefficient of the highest nonzero p_i to one.
            let lead = v.iter().rev().find_map(|q| q.last().copied()).ok_or(())?;
            let inv = modp::inv_mod(lead, p).ok_or(())?;
            for q in v.iter_mut() {
                for c in q.iter_mut() {
                    *c = modp::mul_mod(*c, inv, p);
                }
            }
            Ok(Some(v))
        }
        _ => Ok(None),
    }
}

fn reduce_window(s: &SeqWindow, p: u64) -> Option<Vec<u64>> {
    s.values.iter().map(|v| modp::rational_mod(v, p)).collect()
}

/// Whether `sum_i p_i(n) a(n + i)` vanishes at every point of the window.
pub fn annihilates_window(op: &OreOp, s: &SeqWindow) -> bool {
    let r = op.high_exp();
    (s.offset - op.low_exp()..=s.end() - r).all(|n| op.apply_at(s, n).is_ok_and(|v| v.is_zero()))
}

fn guess_order(s: &SeqWindow, r: usize, max_degree: usize) -> Result<Option<OreOp>> {
    let mut lifter = RationalLifter::new();
    let mut restarts = 0;
    for p in modp::primes().take(MAX_PRIMES) {
        let Some(vals) = reduce_window(s, p) else { continue };
        let sol = match solve_mod(&vals, s.offset, r, max_degree, p) {
            Ok(v) => v,
            Err(()) => continue,
        };
        let Some(img) = sol else {
            // No solution of bounded degree modulo p, hence none over Q.
            if lifter.primes_used() == 0 {
                return Ok(None);
            }
            continue;
        };
        if let Some(c) = lifter.add(&img, p) {
            let coeffs = clear_denominators(&c).into_iter().map(RFuncN::from_poly).collect();
            let op = OreOp::from_coeffs(coeffs).normalize();
            if annihilates_window(&op, s) {
                return Ok(Some(op));
            }
            restarts += 1;
            if restarts > MAX_RESTARTS {
                break;
            }
            lifter = RationalLifter::new();
        }
    }
    Err(Error::Internal(format!("guessing at order {r} did not settle")))
}

/// Lowest-order, then lowest-degree, operator with integer polynomial
/// coefficients annihilating the window; `None` when nothing exists within
/// the caps.
pub fn guess_recurrence(s: &SeqWindow, max_order: usize, max_degree: usize) -> Result<Option<OreOp>> {
    let needed = required_window(max_order, max_degree);
    if s.len() < needed {
        return Err(Error::InsufficientWindow { needed, have: s.len() });
    }
    for r in 0..=max_order {
        if let Some(op) = guess_order(s, r, max_degree)? {
            return Ok(Some(op));
        }
    }
    Ok(None)
}

/// Window of rationals from integers, for examples and tests.
pub fn window_from(offset: i64, values: impl IntoIterator<Item = BigRational>) -> SeqWindow {
    SeqWindow::new(offset, values.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn window(offset: i64, f: impl Fn(i64) -> BigInt, len: usize) -> SeqWindow {
        window_from(offset, (0..len as i64).map(|i| BigRational::from_integer(f(offset + i))))
    }

    #[test]
    fn powers_of_two() {
        let s = window(0, |n| BigInt::from(2).pow(n as u32), required_window(2, 1));
        let op = guess_recurrence(&s, 2, 1).unwrap().unwrap();
        assert_eq!(op.to_text(), "S - 2");
    }

    #[test]
    fn central_binomials() {
        let s = window(0, |n| crate::term::binomial_int(&(2 * n).into(), &n.into()), required_window(1, 1));
        let op = guess_recurrence(&s, 1, 1).unwrap().unwrap();
        assert_eq!(op.to_text(), "(n+1)*S - (4*n+2)");
    }

    #[test]
    fn nothing_within_caps() {
        // Catalan numbers need degree one.
        let cat = |n: i64| crate::term::binomial_int(&(2 * n).into(), &n.into()) / BigInt::from(n + 1);
        let s = window(0, cat, required_window(1, 0));
        assert!(guess_recurrence(&s, 1, 0).unwrap().is_none());
        let s = window(0, cat, required_window(1, 1));
        assert_eq!(guess_recurrence(&s, 1, 1).unwrap().unwrap().order(), 1);
    }

    #[test]
    fn short_window() {
        let s = window(0, |n| BigInt::from(n), 5);
        assert!(matches!(guess_recurrence(&s, 2, 2), Err(Error::InsufficientWindow { .. })));
    }
}
