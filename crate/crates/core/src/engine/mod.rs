//! Telescoper pipeline: right factor, decomposition of `N`, component
//! annihilators and their assembly.

mod cert;
mod decomp;
mod right;

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde_json::json;

use crate::arith::linalg::{self, Matrix, Vector};
use crate::error::{Error, Result, StageExt};
use crate::ore::OreOp;
use crate::reduction::ReductionContext;
use crate::term::{detect_automorphisms, ApReduction, Automorphism, TermSpec};

pub use decomp::{
    apply_twisted, automorphism_matrix, cyclic_projectors, decompose_space, krylov_annihilator, mat_pow,
    twisted_step, Piece,
};
pub use cert::{certificates, r_certificate, Certificates};
pub use right::{maps_into_submodule, right_factor, ClassData, RightFactorResult};

#[derive(Clone, Debug)]
pub struct TelescopeOptions {
    /// Split `N` along detected automorphisms.
    pub symmetry: bool,
    pub degree_cap: Option<usize>,
    /// Run component annihilators on the rayon pool.
    pub parallel: bool,
    /// Compute rational certificates for `R` and the telescoper.
    pub certificate: bool,
}

impl Default for TelescopeOptions {
    fn default() -> Self {
        TelescopeOptions {
            symmetry: true,
            degree_cap: None,
            parallel: true,
            certificate: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Component {
    pub label: String,
    pub basis_vectors: Vec<Vector>,
    pub target: Vector,
    pub l: OreOp,
    pub zero_sum: bool,
}

impl Component {
    pub fn dim(&self) -> usize {
        self.basis_vectors.len()
    }
}

#[derive(Clone, Debug)]
pub struct DroppedComponent {
    pub label: String,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct TelescoperResult {
    pub reduction: ApReduction,
    pub right: RightFactorResult,
    pub dim: usize,
    pub sn: Matrix,
    pub automorphisms: Vec<(Automorphism, Matrix)>,
    pub components: Vec<Component>,
    pub dropped: Vec<DroppedComponent>,
    pub l_left: OreOp,
    pub l_min: OreOp,
    pub l_expanded: OreOp,
    pub certificates: Option<Certificates>,
    pub timings: Vec<(&'static str, Duration)>,
}

impl TelescoperResult {
    pub fn r(&self) -> &OreOp {
        &self.right.r
    }

    /// Telescoper `L_left * R`.
    pub fn telescoper(&self) -> &OreOp {
        &self.l_expanded
    }

    /// Bytes of the factored representation: component operators plus `R`.
    pub fn factored_bytes(&self) -> usize {
        self.components.iter().map(|c| c.l.text_bytes()).sum::<usize>() + self.right.r.text_bytes()
    }

    pub fn expanded_bytes(&self) -> usize {
        self.l_expanded.text_bytes()
    }

    pub fn component_orders(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.l.order()).collect()
    }

    pub fn to_json(&self, expanded: bool, timings: bool) -> serde_json::Value {
        let mut v = json!({
            "R": self.right.r.to_text(),
            "R0": self.reduction.r0.to_text(),
            "dim": self.dim,
            "automorphisms": self.automorphisms.iter().map(|(a, _)| a.kind.name()).collect::<Vec<_>>(),
            "components": self.components.iter().map(|c| json!({
                "label": c.label,
                "dim": c.dim(),
                "order": c.l.order(),
                "zero_sum": c.zero_sum,
                "L": c.l.to_text(),
            })).collect::<Vec<_>>(),
            "dropped": self.dropped.iter().map(|d| json!({"label": d.label, "dim": d.dim})).collect::<Vec<_>>(),
            "L_left": self.l_left.to_text(),
            "L_min": self.l_min.to_text(),
            "orders": {
                "R": self.right.r.order(),
                "L_left": self.l_left.order(),
                "telescoper": self.l_expanded.order(),
                "L_min": self.l_min.order(),
            },
            "sizes": {
                "factored_bytes": self.factored_bytes(),
                "expanded_bytes": self.expanded_bytes(),
            },
        });
        if expanded {
            v["L_expanded"] = json!(self.l_expanded.to_text());
        }
        if let Some(c) = &self.certificates {
            v["certificates"] = c.to_json();
        }
        if timings {
            v["timings"] = json!(self
                .timings
                .iter()
                .map(|(s, d)| json!({"stage": s, "seconds": d.as_secs_f64()}))
                .collect::<Vec<_>>());
        }
        v
    }
}

struct Clock {
    last: Instant,
    out: Vec<(&'static str, Duration)>,
}

impl Clock {
    fn lap(&mut self, stage: &'static str) {
        let now = Instant::now();
        self.out.push((stage, now - self.last));
        self.last = now;
    }
}

/// Automorphisms with their matrices on `N`.
pub fn automorphisms_on(ctx: &ReductionContext) -> Result<Vec<(Automorphism, Matrix)>> {
    detect_automorphisms(&ctx.h0.spec)
        .into_iter()
        .map(|a| {
            let m = automorphism_matrix(&a, ctx)?;
            if mat_pow(&m, a.order) != linalg::identity(ctx.dim()) {
                return Err(Error::Internal(format!("{} has the wrong order on N", a.kind.name())));
            }
            Ok((a, m))
        })
        .collect()
}

/// Split `target` along the pieces and annihilate each projection.
pub fn components(
    pieces: Vec<Piece>,
    target: &[crate::arith::RFuncN],
    a: &Matrix,
    parallel: bool,
) -> Result<(Vec<Component>, Vec<DroppedComponent>)> {
    let work = |p: Piece| -> Result<std::result::Result<Component, DroppedComponent>> {
        let t = linalg::mat_vec(&p.projector, target);
        if linalg::is_zero_vec(&t) {
            return Ok(Err(DroppedComponent {
                label: p.label,
                dim: p.basis.len(),
            }));
        }
        let l = krylov_annihilator(&t, a)?;
        Ok(Ok(Component {
            label: p.label,
            basis_vectors: p.basis,
            target: t,
            l,
            zero_sum: p.zero_sum,
        }))
    };
    let results: Vec<_> = if parallel {
        pieces.into_par_iter().map(work).collect()
    } else {
        pieces.into_iter().map(work).collect()
    };
    let mut comps = Vec::new();
    let mut dropped = Vec::new();
    for r in results {
        match r? {
            Ok(c) => comps.push(c),
            Err(d) => dropped.push(d),
        }
    }
    Ok((comps, dropped))
}

fn lclm_or_one(ops: &[OreOp]) -> Result<OreOp> {
    if ops.is_empty() {
        Ok(OreOp::one())
    } else {
        OreOp::lclm(ops)
    }
}

pub fn telescope(spec: &TermSpec, opts: &TelescopeOptions) -> Result<TelescoperResult> {
    let mut clock = Clock {
        last: Instant::now(),
        out: Vec::new(),
    };
    let (red, ctx) = ReductionContext::for_term(spec, opts.degree_cap).stage("reduction")?;
    clock.lap("reduction");
    let right = right_factor(&red, &ctx).stage("right factor")?;
    clock.lap("right factor");
    let sn = ctx.sn_matrix().stage("S_n matrix")?;
    if !sn.invertible {
        return Err(Error::Internal("S_n is singular on N".into()).at_stage("S_n matrix"));
    }
    clock.lap("S_n matrix");
    let auts = if opts.symmetry {
        automorphisms_on(&ctx).stage("automorphisms")?
    } else {
        Vec::new()
    };
    clock.lap("automorphisms");
    let (comps, dropped) = if linalg::is_zero_vec(&right.target) {
        (Vec::new(), Vec::new())
    } else {
        let pieces = decompose_space(&auts, ctx.dim()).stage("decomposition")?;
        components(pieces, &right.target, &sn.a, opts.parallel).stage("components")?
    };
    clock.lap("components");
    let all: Vec<OreOp> = comps.iter().map(|c| c.l.clone()).collect();
    let nonzero: Vec<OreOp> = comps.iter().filter(|c| !c.zero_sum).map(|c| c.l.clone()).collect();
    let l_left = lclm_or_one(&all).stage("assembly")?;
    let l_min_left = lclm_or_one(&nonzero).stage("assembly")?;
    let l_min = (&l_min_left * &right.r).normalize();
    let product = &l_left * &right.r;
    let l_expanded = product.normalize();
    clock.lap("assembly");
    let certs = if opts.certificate {
        // Normalizing multiplies by a function of n on the left, which commutes with Delta_k.
        let scale = &l_expanded.lc() / &product.lc();
        let c = certificates(&red, &ctx, &right.r, &l_left, &scale).stage("certificate")?;
        clock.lap("certificate");
        Some(c)
    } else {
        None
    };
    Ok(TelescoperResult {
        reduction: red,
        dim: ctx.dim(),
        right,
        sn: sn.a,
        automorphisms: auts,
        components: comps,
        dropped,
        l_left,
        l_min,
        l_expanded,
        certificates: certs,
        timings: clock.out,
    })
}

#[cfg(test)]
mod tests;
