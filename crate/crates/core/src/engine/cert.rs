//! Rational certificates for the right factor and the full telescoper.

use serde_json::json;

use crate::arith::{PolyK, RFuncN, RFuncNK};
use crate::error::{Error, Result};
use crate::ore::OreOp;
use crate::reduction::{polyk_to_rfunc, ReductionContext};
use crate::term::ApReduction;

#[derive(Clone, Debug)]
pub struct Certificates {
    /// `R(H) = r_residual * H + Delta_k(r_cert * H)`.
    pub r_residual: RFuncNK,
    pub r_cert: RFuncNK,
    /// `(L_left R)(H) = Delta_k(telescoper * H)`.
    pub telescoper: RFuncNK,
}

impl Certificates {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "R_residual": self.r_residual.to_text(),
            "R_certificate": self.r_cert.to_text(),
            "certificate": self.telescoper.to_text(),
        })
    }
}

/// `sum_e l_e * q_e` with `q_0 = q`, `q_{e+1} = sigma_n(q_e) R1`.
fn apply_to(ctx: &ReductionContext, op: &OreOp, q: &RFuncNK) -> RFuncNK {
    let mut acc = RFuncNK::zero();
    let mut cur = q.clone();
    for e in 0..=op.high_exp().max(0) {
        if e > 0 {
            cur = ctx.sn_apply(&cur);
        }
        let c = op.coeff(e);
        if !c.is_zero() {
            acc = &acc + &(&polyk_to_rfunc(&PolyK::constant(c)) * &cur);
        }
    }
    acc
}

/// `p`, `g` with `R(m) = p H0 + Delta_k(g H0)`.
fn r_parts(ctx: &ReductionContext, red: &ApReduction, r: &OreOp) -> Result<(RFuncNK, RFuncNK)> {
    if r.low_exp() < 0 {
        return Err(Error::Internal("certificate needs nonnegative shifts".into()));
    }
    let sf = ctx.std_form(&apply_to(ctx, r, &red.r0), true)?;
    if !sf.frac_is_zero() {
        return Err(Error::Internal("R(m) has a pole part".into()));
    }
    Ok((polyk_to_rfunc(&sf.poly), sf.cert.expect("tracked")))
}

/// `(residual, c)` with `R(H) = residual * H + Delta_k(c H)`.
pub fn r_certificate(red: &ApReduction, ctx: &ReductionContext, r: &OreOp) -> Result<(RFuncNK, RFuncNK)> {
    let (p, g) = r_parts(ctx, red, r)?;
    Ok((&p / &red.r0, &g / &red.r0))
}

/// Certificates of `R` and of `scale * L_left R`, both relative to `H = R0 H0`.
pub fn certificates(
    red: &ApReduction,
    ctx: &ReductionContext,
    r: &OreOp,
    l_left: &OreOp,
    scale: &RFuncN,
) -> Result<Certificates> {
    if l_left.low_exp() < 0 {
        return Err(Error::Internal("certificate needs nonnegative shifts".into()));
    }
    let (p, g) = r_parts(ctx, red, r)?;
    // S_n commutes with Delta_k, so the R certificate is carried along by L_left.
    let sf = ctx.std_form(&apply_to(ctx, l_left, &p), true)?;
    if !sf.frac_is_zero() || !sf.poly.is_zero() {
        return Err(Error::Internal("L_left does not annihilate R(m)".into()));
    }
    let total = &apply_to(ctx, l_left, &g) + &sf.cert.expect("tracked");
    let total = &total * &polyk_to_rfunc(&PolyK::constant(scale.clone()));
    Ok(Certificates {
        r_residual: &p / &red.r0,
        r_cert: &g / &red.r0,
        telescoper: &total / &red.r0,
    })
}
