//! Right factor `R`: the minimal operator in Q(n)[S_n] mapping `m = R0*H0` into `N`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use serde_json::json;

use crate::arith::linalg::{self, Vector};
use crate::arith::{PolyK, RFuncN, RFuncNK, Root};
use crate::error::{Error, Result};
use crate::ore::OreOp;
use crate::reduction::{ReductionContext, StdForm};
use crate::term::{Affine, ApReduction};

#[derive(Clone, Debug, PartialEq)]
pub struct ClassData {
    pub factor: String,
    /// `S_n^t S_k^s` fixes the factor.
    pub t: i64,
    pub s: i64,
    pub r: RFuncN,
}

#[derive(Clone, Debug)]
pub struct RightFactorResult {
    pub r: OreOp,
    /// Coordinates of `R(m)` in the basis of `N`.
    pub target: Vector,
    /// The polynomial `p` with `R(m) = p*H0` modulo `Delta_k(Omega)`.
    pub residual: PolyK,
    pub class_data: Vec<ClassData>,
    pub fast_path: bool,
}

impl RightFactorResult {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "R": self.r.to_text(),
            "fast_path": self.fast_path,
            "classes": self.class_data.iter().map(|c| json!({
                "factor": c.factor, "t": c.t, "s": c.s, "r": c.r.to_text(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// `f(n, slope*n + offset)`, or `None` at a pole.
fn eval_on_line(f: &RFuncNK, root: &Root) -> Option<RFuncN> {
    let (num, dn) = f.num().at_affine_k(&root.slope, &root.offset);
    let (den, dd) = f.den().at_affine_k(&root.slope, &root.offset);
    if den.is_zero() {
        return None;
    }
    RFuncN::new(num.scale(&dd), den.scale(&dn)).ok()
}

fn shift_class(f: &Affine) -> (i64, i64) {
    let g = f.a.gcd(&f.b);
    let t = (&f.b / &g).abs();
    let s = -(&f.a * &t) / &f.b;
    (
        i64::try_from(t).expect("small shift"),
        i64::try_from(s).expect("small shift"),
    )
}

/// Orbit of a factor under `n -> n + 1` and `k -> k + 1`.
fn orbit_key(f: &Affine) -> (BigInt, BigInt, BigInt) {
    let step = f.a.gcd(&f.b);
    (f.a.clone(), f.b.clone(), f.c.mod_floor(&step))
}

/// Iterates `q_i = sigma_n^i(R0) * prod R1` reduced modulo `Delta_k(Omega)`.
struct Iterates<'a> {
    ctx: &'a ReductionContext,
    q: RFuncNK,
    forms: Vec<StdForm>,
}

impl<'a> Iterates<'a> {
    fn new(ctx: &'a ReductionContext, r0: &RFuncNK) -> Self {
        Iterates {
            ctx,
            q: r0.clone(),
            forms: Vec::new(),
        }
    }

    fn ensure(&mut self, i: usize) -> Result<()> {
        while self.forms.len() <= i {
            if !self.forms.is_empty() {
                self.q = self.ctx.sn_apply(&self.q);
            }
            self.forms.push(self.ctx.std_form(&self.q, false)?);
        }
        Ok(())
    }

    /// Fractional parts of `q_0..=q_i` as vectors over one key set.
    fn frac_vectors(&mut self, i: usize) -> Result<Vec<Vector>> {
        self.ensure(i)?;
        let mut keys: BTreeMap<(Root, usize), usize> = BTreeMap::new();
        for f in &self.forms[..=i] {
            for (r, cs) in &f.frac.poles {
                for j in 0..cs.len() {
                    let next = keys.len();
                    keys.entry((r.clone(), j)).or_insert(next);
                }
            }
        }
        Ok(self.forms[..=i]
            .iter()
            .map(|f| {
                let mut v = vec![RFuncN::zero(); keys.len()];
                for (r, cs) in &f.frac.poles {
                    for (j, c) in cs.iter().enumerate() {
                        v[keys[&(r.clone(), j)]] = c.clone();
                    }
                }
                v
            })
            .collect())
    }

    fn target(&mut self, op: &OreOp) -> Result<(Vector, bool)> {
        let hi = op.high_exp().max(0) as usize;
        self.ensure(hi)?;
        let dim = self.ctx.dim();
        let mut t = vec![RFuncN::zero(); dim];
        let mut frac = crate::reduction::PartialFrac::zero();
        for (e, c) in op.terms() {
            let f = &self.forms[usize::try_from(e).expect("nonnegative exponent")];
            for (x, y) in t.iter_mut().zip(&f.coords) {
                *x = &*x + &(c * y);
            }
            frac.add(&f.frac.scaled(c));
        }
        Ok((t, !frac.has_poles()))
    }
}

/// Candidate from residue matching at simple poles, one factor per orbit.
fn fast_candidate(red: &ApReduction) -> Result<Option<(OreOp, Vec<ClassData>)>> {
    let dens: Vec<(&Affine, i32)> = red
        .r0_factored
        .aff
        .iter()
        .filter(|(_, e)| **e < 0)
        .map(|(f, e)| (f, *e))
        .collect();
    if dens.is_empty() {
        return Ok(Some((OreOp::one(), Vec::new())));
    }
    if let Some((_, e)) = dens.iter().find(|(_, e)| *e < -1) {
        return Err(Error::UnsupportedPoleOrder {
            order: e.unsigned_abs() as usize,
        });
    }
    let mut seen = BTreeMap::new();
    for (f, _) in &dens {
        if seen.insert(orbit_key(f), ()).is_some() {
            return Ok(None);
        }
    }
    let full = red.h0.spec.with_prefactor(&red.h0.spec.prefactor * &red.r0);
    let mut ops = Vec::new();
    let mut data = Vec::new();
    for (f, _) in dens {
        let (t, s) = shift_class(f);
        let quot = full.shift_ratio(t, s);
        let Some(r) = eval_on_line(&quot, &f.root()) else { return Ok(None) };
        ops.push(OreOp::binomial(t, r.clone()));
        data.push(ClassData {
            factor: f.to_text(),
            t,
            s,
            r,
        });
    }
    Ok(Some((OreOp::lclm(&ops)?.normalize(), data)))
}

pub fn right_factor(red: &ApReduction, ctx: &ReductionContext) -> Result<RightFactorResult> {
    let mut it = Iterates::new(ctx, &red.r0);
    let fast = match fast_candidate(red) {
        Ok(c) => c,
        Err(Error::UnsupportedPoleOrder { .. }) => None,
        Err(e) => return Err(e),
    };
    if let Some((op, data)) = fast {
        let (target, ok) = it.target(&op)?;
        let ord = op.order();
        // Minimality: no dependence among the first `ord` fractional parts.
        let minimal = ord == 0 || linalg::first_dependence(&it.frac_vectors(ord - 1)?).is_none();
        if ok && minimal {
            return Ok(RightFactorResult {
                residual: ctx.from_coords(&target),
                r: op,
                target,
                class_data: data,
                fast_path: true,
            });
        }
    }
    let cap = ctx.degree_cap;
    for i in 0..=cap {
        let vs = it.frac_vectors(i)?;
        if let Some(c) = linalg::first_dependence(&vs) {
            let op = OreOp::from_coeffs(c).normalize();
            let (target, ok) = it.target(&op)?;
            if !ok {
                return Err(Error::Internal("right factor does not reach the submodule".into()));
            }
            return Ok(RightFactorResult {
                residual: ctx.from_coords(&target),
                r: op,
                target,
                class_data: Vec::new(),
                fast_path: false,
            });
        }
    }
    let worst = red.r0_factored.aff.values().filter(|e| **e < 0).map(|e| e.unsigned_abs()).max();
    match worst {
        Some(m) if m > 1 => Err(Error::UnsupportedPoleOrder { order: m as usize }),
        _ => Err(Error::AnsatzCapExceeded {
            cap,
            what: "right factor order".into(),
        }),
    }
}

/// Whether `op` maps `m` into `N`; used by property tests.
pub fn maps_into_submodule(red: &ApReduction, ctx: &ReductionContext, op: &OreOp) -> Result<bool> {
    let mut it = Iterates::new(ctx, &red.r0);
    Ok(it.target(op)?.1)
}
