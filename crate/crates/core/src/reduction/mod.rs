//! Reduction modulo `Delta_k(Omega)` for a shift-reduced kernel `H0`.
//!
//! Write `S_k(H0)/H0 = u(k)/v(k)`. Two families of relations are used:
//!
//! * pole moves: `u(k)/(k-b)^j - v(k-1)/(k-b-1)^j = Delta_k(g)` with
//!   `g = v(k-1)/(k-b-1)^j`, which slides a pole along its shift class;
//! * polynomial relations `phi(w) = w(k+1) u(k) - w(k) v(k-1)`, the image of
//!   `g = w(k) v(k-1)`.
//!
//! Poles end at one fixed position per class, so fractional parts compare
//! syntactically. Polynomial parts are reduced to the free degrees.

mod pfrac;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_traits::Zero;
use serde_json::json;

use crate::arith::linalg::{self, Matrix, Vector};
use crate::arith::{PolyK, RFuncN, RFuncNK, Root, RootClass};
use crate::error::{Error, Result};
use crate::term::{ap_shift_reduce_full, ApReduction, Factored, HTerm, TermSpec};

pub use pfrac::{monomial_rfunc, polyk_to_rfunc, PartialFrac};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ClassKind {
    /// Contains roots of `u`: poles move left and lose order at the roots.
    Upper,
    /// Contains roots of `v`: poles move right.
    Lower,
}

struct Relations {
    /// Leading degree -> (monic `phi(w)`, `w`).
    rows: BTreeMap<usize, (PolyK, PolyK)>,
    next_w: usize,
    k1_pow: PolyK,
}

/// Kernel data plus lazily grown polynomial relations.
pub struct ReductionContext {
    pub h0: HTerm,
    /// `S_n^{-1}(H0)/H0`.
    pub r1_tilde: RFuncNK,
    /// `S_k^{-1}(H0)/H0`.
    pub r2_tilde: RFuncNK,
    pub degree_cap: usize,
    u: PolyK,
    v: PolyK,
    v1: PolyK,
    classes: BTreeMap<RootClass, (ClassKind, i64)>,
    /// Smallest `w`-degree the relation table must reach before the free
    /// degrees can be trusted.
    min_w: usize,
    rel: RwLock<Relations>,
    taylor: RwLock<HashMap<Root, Arc<(Vec<RFuncN>, Vec<RFuncN>)>>>,
    basis: SubmoduleBasis,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubmoduleBasis {
    pub dim: usize,
    /// Degrees `d` with `m_d` in the basis, ascending.
    pub degrees: Vec<usize>,
    /// `(d, coords(m_d))` for non-basis degrees up to the cap.
    pub relations: Vec<(usize, Vector)>,
}

#[derive(Clone, Debug)]
pub struct StdForm {
    /// Pole part, one canonical position per shift class.
    pub frac: PartialFrac,
    /// Polynomial part supported on the basis degrees.
    pub poly: PolyK,
    pub coords: Vector,
    /// `g` with `input - frac - poly = S_k(g) R2 - g`.
    pub cert: Option<RFuncNK>,
}

#[derive(Clone, Debug)]
pub struct SnMatrix {
    pub a: Matrix,
    pub invertible: bool,
}

impl StdForm {
    pub fn frac_is_zero(&self) -> bool {
        !self.frac.has_poles()
    }

    pub fn frac_rfunc(&self) -> RFuncNK {
        self.frac.frac_rfunc()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = json!({
            "frac": self.frac_rfunc().to_text(),
            "poly_coords": self.coords.iter().map(|c| c.to_text()).collect::<Vec<_>>(),
        });
        if let Some(g) = &self.cert {
            v["cert"] = json!(g.to_text());
        }
        v
    }
}

pub fn default_degree_cap(spec: &TermSpec) -> usize {
    4 * spec.binomial_weight() + 8
}

impl ReductionContext {
    /// Context for the shift-reduced kernel of `spec`.
    pub fn for_term(spec: &TermSpec, degree_cap: Option<usize>) -> Result<(ApReduction, ReductionContext)> {
        let red = ap_shift_reduce_full(spec)?;
        let cap = degree_cap.unwrap_or_else(|| default_degree_cap(spec));
        let ctx = ReductionContext::new(red.h0.clone(), &red.r2_factored, cap)?;
        Ok((red, ctx))
    }

    /// `r2` is the factored `S_k(H0)/H0`.
    pub fn new(h0: HTerm, r2: &Factored, degree_cap: usize) -> Result<Self> {
        let (scale, roots) = r2.k_roots();
        let mut u = PolyK::constant(scale);
        let mut v = PolyK::one();
        let mut classes: BTreeMap<RootClass, (ClassKind, i64)> = BTreeMap::new();
        for (root, e) in &roots {
            let lin = PolyK::linear_root(&root.value()).pow(e.unsigned_abs());
            let kind = if *e > 0 {
                u = &u * &lin;
                ClassKind::Upper
            } else {
                v = &v * &lin;
                ClassKind::Lower
            };
            let (class, pos) = root.class_and_position();
            let cand = if kind == ClassKind::Upper { pos } else { pos + 1 };
            match classes.get_mut(&class) {
                Some((k, p)) if *k == kind => {
                    *p = if kind == ClassKind::Upper { (*p).min(cand) } else { (*p).max(cand) };
                }
                Some(_) => {
                    return Err(Error::Internal("kernel is not shift-reduced".into()));
                }
                None => {
                    classes.insert(class, (kind, cand));
                }
            }
        }
        let v1 = v.shift_k(&RFuncN::from_int(-1));
        let min_w = exceptional_degree(&u, &v1).map_or(0, |i| i + 2);
        let r1_tilde = h0.r1.shift_int(-1, 0).inv()?;
        let r2_tilde = h0.r2.shift_int(0, -1).inv()?;
        let mut ctx = ReductionContext {
            h0,
            r1_tilde,
            r2_tilde,
            degree_cap,
            u,
            v,
            v1,
            classes,
            min_w,
            rel: RwLock::new(Relations {
                rows: BTreeMap::new(),
                next_w: 0,
                k1_pow: PolyK::one(),
            }),
            taylor: RwLock::new(HashMap::new()),
            basis: SubmoduleBasis {
                dim: 0,
                degrees: Vec::new(),
                relations: Vec::new(),
            },
        };
        ctx.basis = ctx.compute_basis()?;
        Ok(ctx)
    }

    pub fn basis(&self) -> &SubmoduleBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim
    }

    /// `u` and `v` with `S_k(H0)/H0 = u/v`.
    pub fn r2_parts(&self) -> (&PolyK, &PolyK) {
        (&self.u, &self.v)
    }

    fn extend_relations(&self, w_deg: usize) -> Result<()> {
        {
            let rel = self.rel.read().unwrap();
            if rel.next_w > w_deg {
                return Ok(());
            }
        }
        if w_deg > self.degree_cap + self.u.deg_or_zero().max(self.v.deg_or_zero()) + 1 {
            return Err(Error::AnsatzCapExceeded {
                cap: self.degree_cap,
                what: format!("polynomial relations up to degree {w_deg}"),
            });
        }
        let mut rel = self.rel.write().unwrap();
        while rel.next_w <= w_deg {
            let i = rel.next_w;
            let mut w = PolyK::monomial(RFuncN::one(), i);
            let mut img = &(&rel.k1_pow * &self.u) - &self.v1.shl(i);
            while let Some(d) = img.degree() {
                let Some((row, rw)) = rel.rows.get(&d) else { break };
                let c = img.lc();
                img = &img - &row.scale(&c);
                w = &w - &rw.scale(&c);
            }
            if let Some(d) = img.degree() {
                let inv = img.lc().inv()?;
                rel.rows.insert(d, (img.scale(&inv), w.scale(&inv)));
            }
            rel.k1_pow = &rel.k1_pow * &PolyK::linear(RFuncN::one(), RFuncN::one());
            rel.next_w += 1;
        }
        Ok(())
    }

    fn compute_basis(&self) -> Result<SubmoduleBasis> {
        let mut n = self.min_w.max(2);
        loop {
            if n > self.degree_cap {
                return Err(Error::AnsatzCapExceeded {
                    cap: self.degree_cap,
                    what: "no stable set of basis degrees below the degree cap".into(),
                });
            }
            self.extend_relations(n)?;
            let rel = self.rel.read().unwrap();
            // Images of k^i for i > n have degree >= n, so degrees below n are final.
            let free: Vec<usize> = (0..n).filter(|d| !rel.rows.contains_key(d)).collect();
            let top = free.last().map_or(0, |d| d + 1);
            if n >= top + 3 {
                drop(rel);
                let dim = free.len();
                let mut out = SubmoduleBasis {
                    dim,
                    degrees: free,
                    relations: Vec::new(),
                };
                let last = self.degree_cap.max(top);
                let mut basis_ref = out.clone();
                basis_ref.relations.clear();
                for d in 0..=last {
                    if !out.degrees.contains(&d) {
                        let p = PolyK::monomial(RFuncN::one(), d);
                        let r = self.reduce_poly_with(&p, None, &basis_ref)?;
                        out.relations.push((d, r.1));
                    }
                }
                return Ok(out);
            }
            n += 1;
        }
    }

    /// Reduce a polynomial to the basis degrees; returns `(remainder, coords)`
    /// and adds the certificate contribution to `cert`.
    fn reduce_poly_with(
        &self,
        p: &PolyK,
        mut cert: Option<&mut PartialFrac>,
        basis: &SubmoduleBasis,
    ) -> Result<(PolyK, Vector)> {
        let mut coeffs: Vec<RFuncN> = p.coeffs().to_vec();
        if let Some(d) = p.degree() {
            self.extend_relations(d + 1)?;
        }
        let rel = self.rel.read().unwrap();
        let mut w_acc = PolyK::zero();
        for d in (0..coeffs.len()).rev() {
            if coeffs[d].is_zero() {
                continue;
            }
            let Some((row, w)) = rel.rows.get(&d) else { continue };
            let c = coeffs[d].clone();
            for (i, r) in row.coeffs().iter().enumerate() {
                if !r.is_zero() {
                    coeffs[i] = &coeffs[i] - &(r * &c);
                }
            }
            if cert.is_some() {
                w_acc = &w_acc + &w.scale(&c);
            }
        }
        if let Some(cert) = cert.as_deref_mut() {
            cert.poly = &cert.poly + &(&w_acc * &self.v1);
        }
        let rem = PolyK::new(coeffs);
        let coords = basis.degrees.iter().map(|d| rem.coeff(*d)).collect();
        Ok((rem, coords))
    }

    fn taylor_at(&self, beta: &Root) -> Arc<(Vec<RFuncN>, Vec<RFuncN>)> {
        if let Some(t) = self.taylor.read().unwrap().get(beta) {
            return t.clone();
        }
        let alpha = beta.value();
        let t = Arc::new((
            self.u.taylor(&alpha, self.u.deg_or_zero() + 1),
            self.v.taylor(&alpha, self.v.deg_or_zero() + 1),
        ));
        self.taylor.write().unwrap().insert(beta.clone(), t.clone());
        t
    }

    fn canonical(&self, class: &RootClass) -> i64 {
        self.classes.get(class).map_or(0, |c| c.1)
    }

    /// Slide every pole of `pf` to the canonical position of its class.
    fn move_poles(&self, pf: &mut PartialFrac, mut cert: Option<&mut PartialFrac>) -> Result<()> {
        loop {
            // Farthest pole from its canonical position.
            let pick = pf
                .poles
                .keys()
                .filter_map(|r| {
                    let (class, pos) = r.class_and_position();
                    let cp = self.canonical(&class);
                    (pos != cp).then(|| ((pos - cp).abs(), r.clone(), pos > cp))
                })
                .max_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
            let Some((_, root, left)) = pick else { return Ok(()) };
            while let Some(coeffs) = pf.poles.get(&root) {
                let j = coeffs.len();
                let c = coeffs[j - 1].clone();
                if left {
                    let beta = root.add_int(-1);
                    let tv = self.taylor_at(&beta);
                    let (t, s) = (&tv.0, &tv.1);
                    let alpha = &c * &s[0].inv().map_err(|_| Error::Internal("pole move hit a root of v".into()))?;
                    pf.add_local(&beta, t, j, &alpha);
                    pf.add_local(&root, s, j, &-&alpha);
                    if let Some(cert) = cert.as_deref_mut() {
                        cert.add_local(&root, s, j, &-&alpha);
                    }
                } else {
                    let tv = self.taylor_at(&root);
                    let (t, s) = (&tv.0, &tv.1);
                    let alpha = &c * &t[0].inv().map_err(|_| Error::Internal("pole move hit a root of u".into()))?;
                    let gamma = root.add_int(1);
                    pf.add_local(&root, t, j, &-&alpha);
                    pf.add_local(&gamma, s, j, &alpha);
                    if let Some(cert) = cert.as_deref_mut() {
                        cert.add_local(&gamma, s, j, &alpha);
                    }
                }
            }
        }
    }

    /// Standard form of `f * H0` modulo `Delta_k(Omega)`.
    pub fn std_form(&self, f: &RFuncNK, track_cert: bool) -> Result<StdForm> {
        let pf = PartialFrac::from_rfunc(f)?;
        self.std_form_pf(pf, track_cert)
    }

    pub fn std_form_pf(&self, mut pf: PartialFrac, track_cert: bool) -> Result<StdForm> {
        let mut cert = track_cert.then(PartialFrac::zero);
        self.move_poles(&mut pf, cert.as_mut())?;
        pf.flush();
        let poly = std::mem::take(&mut pf.poly);
        let (rem, coords) = self.reduce_poly_with(&poly, cert.as_mut(), &self.basis)?;
        Ok(StdForm {
            frac: pf,
            poly: rem,
            coords,
            cert: cert.map(|c| c.to_rfunc()),
        })
    }

    /// Coordinates of `p * H0` in the basis `{m_d}`.
    pub fn coords(&self, p: &PolyK) -> Result<Vector> {
        Ok(self.reduce_poly_with(p, None, &self.basis)?.1)
    }

    /// Polynomial with the given coordinates.
    pub fn from_coords(&self, c: &[RFuncN]) -> PolyK {
        let mut out = vec![RFuncN::zero(); self.basis.degrees.last().map_or(0, |d| d + 1)];
        for (d, x) in self.basis.degrees.iter().zip(c) {
            out[*d] = x.clone();
        }
        PolyK::new(out)
    }

    /// Column `d` holds the coordinates of `S_n(m_d)`.
    pub fn sn_matrix(&self) -> Result<SnMatrix> {
        let dim = self.dim();
        let mut a = linalg::zeros(dim, dim);
        for (col, d) in self.basis.degrees.iter().enumerate() {
            let f = &monomial_rfunc(*d) * &self.h0.r1;
            let sf = self.std_form(&f, false)?;
            if !sf.frac_is_zero() {
                return Err(Error::Internal(format!("S_n(m_{d}) left the submodule")));
            }
            for (row, x) in sf.coords.into_iter().enumerate() {
                a[row][col] = x;
            }
        }
        let invertible = linalg::rank(&a) == dim;
        Ok(SnMatrix { a, invertible })
    }

    /// `q * H0 -> S_n(q * H0) = sigma_n(q) R1 * H0`.
    pub fn sn_apply(&self, q: &RFuncNK) -> RFuncNK {
        &q.shift_int(1, 0) * &self.h0.r1
    }

    /// `S_k(g) R2 - g`, the rational part of `Delta_k(g H0)`.
    pub fn delta_k(&self, g: &RFuncNK) -> RFuncNK {
        &(&g.shift_int(0, 1) * &self.h0.r2) - g
    }
}

/// `w`-degree at which the leading coefficient of `phi(k^w)` can vanish.
fn exceptional_degree(u: &PolyK, v1: &PolyK) -> Option<usize> {
    let d = u.degree()?;
    if v1.degree() != Some(d) || u.lc() != v1.lc() || d == 0 {
        return None;
    }
    let x = &(&u.coeff(d - 1) - &v1.coeff(d - 1)) / &u.lc();
    let q = (-x).as_rational()?;
    (q.is_integer() && q >= num_rational::BigRational::zero()).then(|| q.to_integer().try_into().ok())?
}

#[cfg(test)]
mod tests;
