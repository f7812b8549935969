//! Automorphism action on `N`, rational projectors and twisted Krylov iteration.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::arith::linalg::{self, DependenceFinder, Matrix, Vector};
use crate::arith::{PolyK, RFuncN};
use crate::error::{Error, Result};
use crate::ore::{twisted_dependence, OreOp};
use crate::reduction::{polyk_to_rfunc, ReductionContext};
use crate::term::{AutKind, Automorphism};

/// Column `d` holds the coordinates of the image of `m_d`.
pub fn automorphism_matrix(aut: &Automorphism, ctx: &ReductionContext) -> Result<Matrix> {
    let dim = ctx.dim();
    let image = match aut.kind {
        AutKind::Phi => PolyK::linear(-RFuncN::one(), RFuncN::var()),
        AutKind::Tau(p) => PolyK::linear(
            RFuncN::one(),
            RFuncN::from_rational(&BigRational::new(BigInt::one(), p.into())),
        ),
    };
    let mut out = linalg::zeros(dim, dim);
    let mut pw = PolyK::one();
    let mut next = 0;
    for (col, d) in ctx.basis().degrees.iter().enumerate() {
        while next < *d {
            pw = &pw * &image;
            next += 1;
        }
        let f = &polyk_to_rfunc(&pw) * &aut.ratio;
        let sf = ctx.std_form(&f, false)?;
        if !sf.frac_is_zero() {
            return Err(Error::Internal(format!("{} does not preserve the submodule", aut.kind.name())));
        }
        for (row, x) in sf.coords.into_iter().enumerate() {
            out[row][col] = x;
        }
    }
    Ok(out)
}

pub fn mat_pow(a: &Matrix, e: u32) -> Matrix {
    let mut acc = linalg::identity(a.len());
    for _ in 0..e {
        acc = linalg::mat_mul(&acc, a);
    }
    acc
}

fn mobius(n: u32) -> i64 {
    let mut n = n;
    let mut res = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            res = -res;
        }
        p += 1;
    }
    if n > 1 {
        res = -res;
    }
    res
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Ramanujan sum: the sum of `zeta^j` over primitive `d`-th roots `zeta`.
fn ramanujan(d: u32, j: u32) -> i64 {
    let g = gcd(d, j);
    (1..=g).filter(|e| g % e == 0).map(|e| mobius(d / e) * e as i64).sum()
}

/// Rational idempotents of `Q[T]/(T^p - 1)`, one per divisor `d` of `p`:
/// `E_d = (1/p) sum_j c_d(j) T^j`.
pub fn cyclic_projectors(t: &Matrix, p: u32) -> Vec<(u32, Matrix)> {
    let dim = t.len();
    let powers: Vec<Matrix> = (0..p).map(|j| mat_pow(t, j)).collect();
    let inv_p = RFuncN::from_rational(&BigRational::new(BigInt::one(), p.into()));
    (1..=p)
        .filter(|d| p % d == 0)
        .map(|d| {
            let mut e = linalg::zeros(dim, dim);
            for (j, tj) in powers.iter().enumerate() {
                let c = ramanujan(d, j as u32);
                if c != 0 {
                    e = linalg::mat_add(&e, &linalg::mat_scale(tj, &RFuncN::from_int(c)));
                }
            }
            (d, linalg::mat_scale(&e, &inv_p))
        })
        .collect()
}

/// Piece of `N` cut out by one product of projectors.
#[derive(Clone, Debug)]
pub struct Piece {
    pub label: String,
    pub projector: Matrix,
    pub basis: Vec<Vector>,
    pub zero_sum: bool,
}

/// Projector products for the given automorphisms; pieces of rank zero are omitted.
pub fn decompose_space(auts: &[(Automorphism, Matrix)], dim: usize) -> Result<Vec<Piece>> {
    let mut families: Vec<Vec<(String, Matrix, bool)>> = Vec::new();
    for (aut, m) in auts {
        let fam = match aut.kind {
            AutKind::Phi => {
                let id = linalg::identity(dim);
                let half = RFuncN::from_rational(&BigRational::new(BigInt::one(), 2.into()));
                vec![
                    ("phi+".to_string(), linalg::mat_scale(&linalg::mat_add(&id, m), &half), false),
                    (
                        "phi-".to_string(),
                        linalg::mat_scale(&linalg::mat_add(&id, &linalg::mat_scale(m, &RFuncN::from_int(-1))), &half),
                        true,
                    ),
                ]
            }
            AutKind::Tau(p) => cyclic_projectors(m, p)
                .into_iter()
                .map(|(d, e)| (format!("tau{p}:{d}"), e, false))
                .collect(),
        };
        families.push(fam);
    }
    // Families must commute for the products to be projectors.
    for i in 0..families.len() {
        for j in i + 1..families.len() {
            for (_, a, _) in &families[i] {
                for (_, b, _) in &families[j] {
                    if linalg::mat_mul(a, b) != linalg::mat_mul(b, a) {
                        return Err(Error::UnsupportedDecomposition(
                            "automorphism projectors do not commute".into(),
                        ));
                    }
                }
            }
        }
    }
    let mut pieces = vec![(Vec::<String>::new(), linalg::identity(dim), false)];
    for fam in &families {
        let mut next = Vec::new();
        for (labels, p, z) in &pieces {
            for (l, e, ez) in fam {
                let mut labels = labels.clone();
                labels.push(l.clone());
                next.push((labels, linalg::mat_mul(p, e), *z || *ez));
            }
        }
        pieces = next;
    }
    Ok(pieces
        .into_iter()
        .filter_map(|(labels, p, zero_sum)| {
            let basis = linalg::column_basis(&p);
            (!basis.is_empty()).then(|| Piece {
                label: if labels.is_empty() { "all".into() } else { labels.join(",") },
                projector: p,
                basis,
                zero_sum,
            })
        })
        .collect())
}

/// `v -> A * sigma_n(v)`.
pub fn twisted_step(a: &Matrix, v: &[RFuncN]) -> Vector {
    linalg::mat_vec(a, &linalg::shift_vec(v, 1))
}

/// Minimal `L = sum c_i S_n^i` with `L(target) = 0` under the twisted action.
pub fn krylov_annihilator(target: &[RFuncN], a: &Matrix) -> Result<OreOp> {
    if linalg::is_zero_vec(target) {
        return Err(Error::InvalidInput("Krylov target is zero".into()));
    }
    if target.len() > 2 {
        if let Some(l) = twisted_dependence(a, target, target.len()) {
            if apply_twisted(&l, a, target).iter().all(RFuncN::is_zero) {
                return Ok(l);
            }
        }
    }
    let mut finder = DependenceFinder::new();
    let mut v = target.to_vec();
    for _ in 0..=target.len() {
        if let Some(c) = finder.push(&v) {
            return Ok(OreOp::from_coeffs(c).normalize());
        }
        v = twisted_step(a, &v);
    }
    Err(Error::Internal("Krylov iteration exceeded the dimension".into()))
}

/// `L(v)` under the twisted action.
pub fn apply_twisted(op: &OreOp, a: &Matrix, v: &[RFuncN]) -> Vector {
    let mut out = vec![RFuncN::zero(); v.len()];
    let mut cur = v.to_vec();
    for e in 0..=op.high_exp() {
        if e >= op.low_exp() {
            let c = op.coeff(e);
            if !c.is_zero() {
                for (x, y) in out.iter_mut().zip(&cur) {
                    *x = &*x + &(&c * y);
                }
            }
        }
        cur = twisted_step(a, &cur);
    }
    out
}
