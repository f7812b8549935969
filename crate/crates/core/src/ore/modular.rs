//! First dependence of a twisted Krylov sequence `v_0 = t`, `v_{j+1} = A sigma_n(v_j)`
//! by evaluation at word-size primes, Padé reconstruction in `n` and CRT.
//!
//! Results are candidates; callers certify them with exact arithmetic.

use std::collections::HashMap;

use super::OreOp;
use crate::arith::linalg::Matrix;
use crate::arith::modp::{self, clear_denominators, PolyP, RFuncModP, RationalLifter};
use crate::arith::RFuncN;

const FIRST_NODE: u64 = 1 << 20;
const MAX_POINTS: usize = 1 << 13;
const MAX_PRIMES: usize = 4000;
const CHECKS: usize = 4;

struct Image {
    p: u64,
    a: Vec<Vec<Option<RFuncModP>>>,
    t: Vec<Option<RFuncModP>>,
    cache: HashMap<u64, Option<Vec<Vec<u64>>>>,
}

fn reduce(f: &RFuncN, p: u64) -> Option<Option<RFuncModP>> {
    if f.is_zero() {
        Some(None)
    } else {
        RFuncModP::new(f, p).map(Some)
    }
}

fn eval_opt(f: &Option<RFuncModP>, x: u64, p: u64) -> Option<u64> {
    match f {
        None => Some(0),
        Some(f) => f.eval(x, p),
    }
}

impl Image {
    fn new(a: &Matrix, t: &[RFuncN], p: u64) -> Option<Self> {
        let a = a
            .iter()
            .map(|row| row.iter().map(|f| reduce(f, p)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        let t = t.iter().map(|f| reduce(f, p)).collect::<Option<Vec<_>>>()?;
        Some(Image {
            p,
            a,
            t,
            cache: HashMap::new(),
        })
    }

    fn a_at(&mut self, x: u64) -> Option<Vec<Vec<u64>>> {
        let p = self.p;
        let a = &self.a;
        self.cache
            .entry(x)
            .or_insert_with(|| {
                a.iter()
                    .map(|row| row.iter().map(|f| eval_opt(f, x, p)).collect::<Option<Vec<_>>>())
                    .collect::<Option<Vec<_>>>()
            })
            .clone()
    }

    /// `v_0(x), ..., v_count(x)`.
    fn vectors_at(&mut self, x: u64, count: usize) -> Option<Vec<Vec<u64>>> {
        let p = self.p;
        let mut out = Vec::with_capacity(count + 1);
        for j in 0..=count {
            let y = modp::add_mod(x, j as u64, p);
            let mut u = self.t.iter().map(|f| eval_opt(f, y, p)).collect::<Option<Vec<_>>>()?;
            for i in (0..j).rev() {
                let m = self.a_at(modp::add_mod(x, i as u64, p))?;
                u = m
                    .iter()
                    .map(|row| row.iter().zip(&u).fold(0, |acc, (c, v)| modp::add_mod(acc, modp::mul_mod(*c, *v, p), p)))
                    .collect();
            }
            out.push(u);
        }
        Some(out)
    }

    /// Index and coefficients (last one 1) of the first dependence at `x`.
    fn dependence_at(&mut self, x: u64, max: usize) -> Option<(usize, Vec<u64>)> {
        let vs = self.vectors_at(x, max)?;
        Some(first_dependence_mod(&vs, self.p))
    }
}

fn first_dependence_mod(vs: &[Vec<u64>], p: u64) -> (usize, Vec<u64>) {
    let mut rows: Vec<(usize, Vec<u64>, Vec<u64>)> = Vec::new();
    for (idx, v) in vs.iter().enumerate() {
        let mut row = v.clone();
        let mut comb = vec![0u64; idx + 1];
        comb[idx] = 1;
        for (pc, prow, pcomb) in &rows {
            let f = row[*pc];
            if f == 0 {
                continue;
            }
            for (x, y) in row.iter_mut().zip(prow) {
                *x = modp::sub_mod(*x, modp::mul_mod(f, *y, p), p);
            }
            for (x, y) in comb.iter_mut().zip(pcomb) {
                *x = modp::sub_mod(*x, modp::mul_mod(f, *y, p), p);
            }
        }
        match row.iter().position(|x| *x != 0) {
            None => return (idx, comb),
            Some(pc) => {
                let inv = modp::inv_mod(row[pc], p).expect("nonzero pivot");
                for x in row.iter_mut().chain(comb.iter_mut()) {
                    *x = modp::mul_mod(*x, inv, p);
                }
                rows.push((pc, row, comb));
            }
        }
    }
    (vs.len(), Vec::new())
}

/// Coefficients `P_0..P_j` over F_p with monic `P_j`, `sum P_i v_i = 0`.
fn solve_image(img: &mut Image, max: usize, start: &mut usize) -> Option<(usize, Vec<PolyP>)> {
    let p = img.p;
    let mut order = 0;
    let mut probes = 0;
    let mut x = FIRST_NODE;
    while probes < 3 {
        if let Some((j, _)) = img.dependence_at(x, max) {
            order = order.max(j);
            probes += 1;
        }
        x += 7919;
    }
    if order > max {
        return None;
    }
    'restart: loop {
        let mut xs: Vec<u64> = Vec::new();
        let mut vals: Vec<Vec<u64>> = Vec::new();
        let mut next = FIRST_NODE;
        let mut want = *start;
        loop {
            while xs.len() < want + CHECKS {
                let x = next;
                next += 1;
                let Some((j, c)) = img.dependence_at(x, order) else { continue };
                if j > order {
                    order = j;
                    continue 'restart;
                }
                if j < order {
                    continue;
                }
                xs.push(x);
                vals.push(c);
            }
            let m = modp::node_poly(&xs[..want], p);
            let ys: Vec<Vec<u64>> = (0..order).map(|i| vals[..want].iter().map(|c| c[i]).collect()).collect();
            let us = modp::interpolate_many(&xs[..want], &ys, &m, p);
            let mut fracs = Vec::with_capacity(order);
            let mut ok = true;
            for (i, u) in us.iter().enumerate() {
                let Some((num, den)) = modp::pade(u, &m, want / 2, p) else {
                    ok = false;
                    break;
                };
                let fits = (want..want + CHECKS).all(|r| {
                    let d = modp::eval(&den, xs[r], p);
                    d != 0 && modp::mul_mod(modp::eval(&num, xs[r], p), modp::inv_mod(d, p).unwrap(), p) == vals[r][i]
                });
                if !fits {
                    ok = false;
                    break;
                }
                fracs.push((num, den));
            }
            if ok {
                let mut d: PolyP = vec![1];
                for (_, den) in &fracs {
                    let g = modp::poly_gcd(&d, den, p);
                    d = modp::poly_mul(&d, &modp::poly_divrem(den, &g, p).0, p);
                }
                let mut out: Vec<PolyP> = fracs
                    .iter()
                    .map(|(num, den)| modp::poly_mul(num, &modp::poly_divrem(&d, den, p).0, p))
                    .collect();
                out.push(d);
                *start = want;
                return Some((order, out));
            }
            want *= 2;
            if want > MAX_POINTS {
                return None;
            }
        }
    }
}

/// Candidate minimal operator `L` with `L(t) = 0` under the twisted action of `a`,
/// of order at most `max`; `None` when reconstruction does not settle.
pub fn twisted_dependence(a: &Matrix, t: &[RFuncN], max: usize) -> Option<OreOp> {
    let mut lifter = RationalLifter::new();
    let mut start = 16;
    for p in modp::primes().take(MAX_PRIMES) {
        let Some(mut img) = Image::new(a, t, p) else { continue };
        let Some((_, polys)) = solve_image(&mut img, max, &mut start) else { continue };
        if let Some(c) = lifter.add(&polys, p) {
            let coeffs = clear_denominators(&c).into_iter().map(RFuncN::from_poly).collect();
            return Some(OreOp::from_coeffs(coeffs).normalize());
        }
    }
    None
}
