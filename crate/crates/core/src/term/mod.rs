//! Hypergeometric terms built from binomials, factorials and geometric factors.

pub mod affine;
mod auto;
mod doc;
mod eval;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith::parse::{expr_to_affine, expr_to_rfunc, parse_expr, perr, Expr, ExprKind};
use crate::arith::{RFuncN, RFuncNK};
use crate::error::{Error, Result};

pub use affine::{Affine, Factored};
pub use auto::{automorphism_ratio, detect_automorphisms, AutKind, Automorphism};
pub use doc::{parse_document, KRange, TermDocument};
pub use eval::{binomial_int, eval_term, eval_term_flagged, natural_support};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Factor {
    Binomial { top: Affine, bottom: Affine, e: i32 },
    Factorial { arg: Affine, e: i32 },
    Pow { q: BigRational, arg: Affine },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TermSpec {
    pub factors: Vec<Factor>,
    pub prefactor: RFuncNK,
}

/// A term with its shift quotients `R1 = S_n(H)/H` and `R2 = S_k(H)/H`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HTerm {
    pub spec: TermSpec,
    pub r1: RFuncNK,
    pub r2: RFuncNK,
}

impl TermSpec {
    pub fn new(factors: Vec<Factor>, prefactor: RFuncNK) -> Self {
        TermSpec { factors, prefactor }
    }

    pub fn binomial_power(e: i32) -> Self {
        TermSpec::new(
            vec![Factor::Binomial {
                top: Affine::new(1, 0, 0),
                bottom: Affine::new(0, 1, 0),
                e,
            }],
            RFuncNK::one(),
        )
    }

    pub fn with_prefactor(&self, p: RFuncNK) -> Self {
        TermSpec::new(self.factors.clone(), p)
    }

    /// Factorial exponents after expanding binomials, merged by argument.
    pub fn gammas(&self) -> BTreeMap<Affine, i32> {
        let mut out: BTreeMap<Affine, i32> = BTreeMap::new();
        let mut add = |a: &Affine, e: i32| {
            let slot = out.entry(a.clone()).or_insert(0);
            *slot += e;
        };
        for f in &self.factors {
            match f {
                Factor::Binomial { top, bottom, e } => {
                    add(top, *e);
                    add(bottom, -e);
                    add(&top.sub(bottom), -e);
                }
                Factor::Factorial { arg, e } => add(arg, *e),
                Factor::Pow { .. } => {}
            }
        }
        out.retain(|_, e| *e != 0);
        out
    }

    pub fn geometric(&self) -> Vec<(BigRational, Affine)> {
        self.factors
            .iter()
            .filter_map(|f| match f {
                Factor::Pow { q, arg } => Some((q.clone(), arg.clone())),
                _ => None,
            })
            .collect()
    }

    /// Quotient `H(n + dn, k + dk) / H(n, k)` of the factorial and geometric
    /// part, excluding the prefactor.
    pub fn factorial_ratio(&self, dn: i64, dk: i64) -> Factored {
        let mut out = Factored::one();
        for (arg, e) in self.gammas() {
            affine::factorial_ratio(&mut out, &arg, &arg.delta(dn, dk), e);
        }
        for (q, arg) in self.geometric() {
            let c = affine::rational_pow(&q, &arg.delta(dn, dk));
            out.scale = &out.scale * &RFuncN::from_rational(&c);
        }
        out
    }

    /// Full quotient `H(n + dn, k + dk) / H(n, k)`.
    pub fn shift_ratio(&self, dn: i64, dk: i64) -> RFuncNK {
        let base = self.factorial_ratio(dn, dk).to_rfunc();
        if self.prefactor.is_one() {
            return base;
        }
        let p = &self.prefactor.shift_int(dn, dk) / &self.prefactor;
        &base * &p
    }

    /// Factored quotient; fails when the prefactor does not split into affine factors.
    pub fn shift_ratio_factored(&self, dn: i64, dk: i64) -> Result<Factored> {
        let base = self.factorial_ratio(dn, dk);
        if self.prefactor.is_one() {
            return Ok(base);
        }
        let p = Factored::from_rfunc(&self.prefactor)?;
        Ok(base.mul(&p.shift(dn, dk).div(&p)))
    }

    /// Largest k-coefficient weight, used for default caps.
    pub fn binomial_weight(&self) -> usize {
        self.factors
            .iter()
            .map(|f| match f {
                Factor::Binomial { e, .. } | Factor::Factorial { e, .. } => e.unsigned_abs() as usize,
                Factor::Pow { .. } => 0,
            })
            .sum()
    }

    pub fn to_text(&self) -> String {
        let mut parts = Vec::new();
        for f in &self.factors {
            let pw = |e: i32| if e == 1 { String::new() } else { format!("^{}", paren_neg(e)) };
            parts.push(match f {
                Factor::Binomial { top, bottom, e } => format!("binomial({},{}){}", top, bottom, pw(*e)),
                Factor::Factorial { arg, e } => format!("factorial({}){}", arg, pw(*e)),
                Factor::Pow { q, arg } => format!("pow({},{})", q, arg),
            });
        }
        if !self.prefactor.is_one() || parts.is_empty() {
            let t = self.prefactor.to_text();
            parts.push(if t.contains(['+', '-', '/']) { format!("({t})") } else { t });
        }
        parts.join("*")
    }
}

fn paren_neg(e: i32) -> String {
    if e < 0 {
        format!("({e})")
    } else {
        e.to_string()
    }
}

impl fmt::Display for TermSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Parse a product/quotient of `binomial`, `factorial`, `pow` and rational
/// functions of `n`, `k`.
pub fn parse_term(src: &str) -> Result<TermSpec> {
    let e = parse_expr(src, &["n", "k"])?;
    let mut spec = TermSpec::new(Vec::new(), RFuncNK::one());
    collect(&e, 1, &mut spec)?;
    if spec.prefactor.is_zero() {
        return Err(perr(0, "the term is identically zero"));
    }
    Ok(spec)
}

fn has_call(e: &Expr) -> bool {
    match &e.kind {
        ExprKind::Call(..) => true,
        ExprKind::Int(_) | ExprKind::Ident(_) => false,
        ExprKind::Neg(a) => has_call(a),
        ExprKind::Add(a, b) | ExprKind::Sub(a, b) | ExprKind::Mul(a, b) | ExprKind::Div(a, b) | ExprKind::Pow(a, b) => {
            has_call(a) || has_call(b)
        }
    }
}

fn collect(e: &Expr, mult: i32, spec: &mut TermSpec) -> Result<()> {
    if !has_call(e) {
        let v = expr_to_rfunc(e)?;
        if v.is_zero() && mult < 0 {
            return Err(perr(e.pos, "division by zero"));
        }
        spec.prefactor = &spec.prefactor * &v.pow(mult)?;
        return Ok(());
    }
    match &e.kind {
        ExprKind::Mul(a, b) => {
            collect(a, mult, spec)?;
            collect(b, mult, spec)
        }
        ExprKind::Div(a, b) => {
            collect(a, mult, spec)?;
            collect(b, -mult, spec)
        }
        ExprKind::Neg(a) => {
            if mult % 2 != 0 {
                spec.prefactor = -&spec.prefactor;
            }
            collect(a, mult, spec)
        }
        ExprKind::Pow(a, x) => {
            let ex = x.small_exponent()?;
            if ex == 0 {
                return Err(perr(x.pos, "zero exponent"));
            }
            collect(a, mult * ex, spec)
        }
        ExprKind::Call(name, args) => {
            let want = |k: usize| -> Result<()> {
                if args.len() != k {
                    return Err(perr(e.pos, format!("{name} takes {k} arguments")));
                }
                Ok(())
            };
            match name.as_str() {
                "binomial" => {
                    want(2)?;
                    spec.factors.push(Factor::Binomial {
                        top: affine_arg(&args[0])?,
                        bottom: affine_arg(&args[1])?,
                        e: mult,
                    });
                }
                "factorial" => {
                    want(1)?;
                    spec.factors.push(Factor::Factorial {
                        arg: affine_arg(&args[0])?,
                        e: mult,
                    });
                }
                "pow" => {
                    want(2)?;
                    let q = expr_to_rfunc(&args[0])?;
                    let q = q
                        .is_k_free()
                        .then(|| RFuncN::from_poly(q.num().k_coeff(0)) / RFuncN::from_poly(q.den().k_coeff(0)))
                        .and_then(|r| r.as_rational())
                        .filter(|r| !r.is_zero())
                        .ok_or_else(|| perr(args[0].pos, "pow base must be a nonzero rational constant"))?;
                    let q = if mult > 0 {
                        num_traits::pow(q, mult as usize)
                    } else {
                        num_traits::pow(q.recip(), (-mult) as usize)
                    };
                    spec.factors.push(Factor::Pow {
                        q,
                        arg: affine_arg(&args[1])?,
                    });
                }
                other => return Err(perr(e.pos, format!("unknown function '{other}'"))),
            }
            Ok(())
        }
        ExprKind::Add(..) | ExprKind::Sub(..) => Err(perr(e.pos, "sums of hypergeometric terms are not supported")),
        ExprKind::Int(_) | ExprKind::Ident(_) => unreachable!(),
    }
}

fn affine_arg(e: &Expr) -> Result<Affine> {
    let (a, b, c) = expr_to_affine(e)?;
    Ok(Affine::new(a, b, c))
}

/// Shift certificates of a term.
pub fn certificates(spec: &TermSpec) -> HTerm {
    HTerm {
        spec: spec.clone(),
        r1: spec.shift_ratio(1, 0),
        r2: spec.shift_ratio(0, 1),
    }
}

impl HTerm {
    pub fn new(spec: &TermSpec) -> HTerm {
        certificates(spec)
    }

    /// `S_k(R1) * R2 == S_n(R2) * R1`.
    pub fn is_compatible(&self) -> bool {
        let lhs = &self.r1.shift_int(0, 1) * &self.r2;
        let rhs = &self.r2.shift_int(1, 0) * &self.r1;
        lhs == rhs
    }
}

/// Result of shift reduction `H = R0 * H0`.
#[derive(Clone, Debug)]
pub struct ApReduction {
    pub r0: RFuncNK,
    pub r0_factored: Factored,
    pub h0: HTerm,
    /// Factored `S_k(H0)/H0`.
    pub r2_factored: Factored,
}

/// Move shift-equivalent numerator/denominator pairs of `S_k(H)/H` into a
/// rational factor `R0`.
pub fn ap_shift_reduce(h: &HTerm) -> Result<(RFuncNK, HTerm)> {
    let red = ap_shift_reduce_full(&h.spec)?;
    Ok((red.r0, red.h0))
}

pub fn ap_shift_reduce_full(spec: &TermSpec) -> Result<ApReduction> {
    let mut r2 = spec.shift_ratio_factored(0, 1)?;
    let mut r0 = Factored::one();
    loop {
        // Closest pair first, so nested pairs do not get crossed.
        let pair = r2
            .aff
            .iter()
            .filter(|(_, e)| **e > 0)
            .flat_map(|(f, _)| {
                r2.aff.iter().filter(|(_, e)| **e < 0).filter_map(move |(g, _)| {
                    let d = &f.c - &g.c;
                    (f.a == g.a && f.b == g.b && !d.is_zero() && (&d % &f.b).is_zero())
                        .then(|| (f.clone(), g.clone(), &d / &f.b))
                })
            })
            .min_by_key(|(_, _, m)| m.abs());
        let Some((f, g, m)) = pair else { break };
        let m: i64 = (&m).try_into().map_err(|_| Error::Internal("huge shift in reduction".into()))?;
        // w(k+1)/w(k) = g(k+m)/g(k) = f/g
        let mut w = Factored::one();
        if m > 0 {
            for i in 0..m {
                w.push(&g.add_const(&(&g.b * i)), 1);
            }
        } else {
            for i in 1..=-m {
                w.push(&g.add_const(&(-&g.b * i)), -1);
            }
        }
        r2.push(&f, -1);
        r2.push(&g, 1);
        r0 = r0.mul(&w);
    }
    let r0_rf = r0.to_rfunc();
    let h0_spec = spec.with_prefactor(&spec.prefactor / &r0_rf);
    Ok(ApReduction {
        r0: r0_rf,
        r0_factored: r0,
        h0: certificates(&h0_spec),
        r2_factored: r2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::PolyNK;

    fn rf(s: &str) -> RFuncNK {
        expr_to_rfunc(&parse_expr(s, &["n", "k"]).unwrap()).unwrap()
    }

    #[test]
    fn parse_examples() {
        let t = parse_term("binomial(n,k)^7 / (2*n+3*k)").unwrap();
        assert_eq!(t.factors.len(), 1);
        assert_eq!(t.prefactor, rf("1/(2*n+3*k)"));
        let t = parse_term("binomial(3*n,3*k)^2 * binomial(3*n,3*k+1)").unwrap();
        assert_eq!(t.factors.len(), 2);
        assert!(parse_term("binomial(n,k)^0").is_err());
        assert!(parse_term("binomial(n*k,k)").is_err());
        assert!(parse_term("binomial(n,k)+1").is_err());
        let t = parse_term("pow(2,k)*factorial(n)/factorial(k)^2").unwrap();
        assert_eq!(t.factors.len(), 3);
    }

    #[test]
    fn certificate_examples() {
        let h = certificates(&TermSpec::binomial_power(7));
        assert_eq!(h.r1, rf("((n+1)/(n-k+1))^7"));
        assert_eq!(h.r2, rf("((n-k)/(k+1))^7"));
        let h = certificates(&TermSpec::binomial_power(1));
        assert!(h.is_compatible());
        assert_eq!(&h.r1.shift_int(0, 1) * &h.r2, rf("(n+1)/(k+1)"));
        let h = certificates(&parse_term("pow(2,k)*factorial(2*n+k)/(n+k^2+1)").unwrap());
        assert!(h.is_compatible());
    }

    #[test]
    fn ap_examples() {
        let t = parse_term("binomial(n,k)^7/(2*n+3*k)").unwrap();
        let (r0, h0) = ap_shift_reduce(&certificates(&t)).unwrap();
        assert_eq!(r0, rf("1/(2*n+3*k)"));
        assert_eq!(h0.spec, TermSpec::binomial_power(7));
        let t = TermSpec::binomial_power(1);
        let (r0, h0) = ap_shift_reduce(&certificates(&t)).unwrap();
        assert!(r0.is_one());
        assert_eq!(h0.spec, t);
        let t = parse_term("binomial(n,k)*(k+1)/(k+4)").unwrap();
        let red = ap_shift_reduce_full(&t).unwrap();
        assert_eq!(red.r0, rf("(k+1)/(k+4)"));
        assert!(red.h0.spec.prefactor.is_one());
        let _ = PolyNK::one();
    }
}
