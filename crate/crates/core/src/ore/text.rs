//! Operator text: `c_d(n)*S^d + ... + c_0(n)`.

use num_traits::Signed;

use super::OreOp;
use crate::arith::parse::{parse_expr, perr, Expr, ExprKind};
use crate::arith::{RFuncN, ZPoly};
use crate::error::Result;

pub fn parse_op(src: &str) -> Result<OreOp> {
    let e = parse_expr(src, &["n", "S"])?;
    eval(&e)
}

fn eval(e: &Expr) -> Result<OreOp> {
    Ok(match &e.kind {
        ExprKind::Int(v) => OreOp::scalar(RFuncN::from_bigint(v.clone())),
        ExprKind::Ident(name) => match name.as_str() {
            "n" => OreOp::scalar(RFuncN::var()),
            "S" => OreOp::shift_op(1),
            other => return Err(perr(e.pos, format!("'{other}' is not allowed in an operator"))),
        },
        ExprKind::Neg(a) => -&eval(a)?,
        ExprKind::Add(a, b) => &eval(a)? + &eval(b)?,
        ExprKind::Sub(a, b) => &eval(a)? - &eval(b)?,
        ExprKind::Mul(a, b) => &eval(a)? * &eval(b)?,
        ExprKind::Div(a, b) => {
            let d = eval(b)?;
            let c = scalar_of(&d).ok_or_else(|| perr(b.pos, "can only divide by a function of n"))?;
            if c.is_zero() {
                return Err(perr(b.pos, "division by zero"));
            }
            eval(a)?.scale_left(&c.inv()?)
        }
        ExprKind::Pow(a, x) => {
            let base = eval(a)?;
            let ex = x.small_exponent()?;
            if ex >= 0 {
                let mut acc = OreOp::one();
                for _ in 0..ex {
                    acc = &acc * &base;
                }
                acc
            } else if let Some(c) = scalar_of(&base) {
                if c.is_zero() {
                    return Err(perr(x.pos, "negative power of zero"));
                }
                OreOp::scalar(c.pow(ex))
            } else if base.order() == 0 && base.lc().is_one() {
                OreOp::shift_op(base.low_exp() * ex as i64)
            } else {
                return Err(perr(x.pos, "negative powers only of S or of functions of n"));
            }
        }
        ExprKind::Call(name, _) => return Err(perr(e.pos, format!("function '{name}' is not allowed in an operator"))),
    })
}

fn scalar_of(op: &OreOp) -> Option<RFuncN> {
    if op.is_zero() {
        return Some(RFuncN::zero());
    }
    (op.order() == 0 && op.low_exp() == 0).then(|| op.lc())
}

fn poly_text(p: &ZPoly) -> String {
    p.fmt_var("n")
}

fn many_terms(p: &ZPoly) -> bool {
    p.coeffs().iter().filter(|c| !num_traits::Zero::is_zero(*c)).count() > 1
}

/// Coefficient text for a coefficient already known to be "positive".
fn coeff_text(c: &RFuncN) -> String {
    let num = poly_text(c.num());
    if c.den().is_one() {
        return num;
    }
    let num = if many_terms(c.num()) { format!("({num})") } else { num };
    let den = poly_text(c.den());
    let den = if many_terms(c.den()) || !c.den().is_constant() { format!("({den})") } else { den };
    format!("{num}/{den}")
}

pub fn print_op(op: &OreOp) -> String {
    if op.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    let terms: Vec<(i64, RFuncN)> = op.terms().map(|(e, c)| (e, c.clone())).collect();
    for (idx, (e, c)) in terms.iter().rev().enumerate() {
        let negative = c.num().lc().is_negative();
        let c = if negative { -c } else { c.clone() };
        if idx == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let s = match *e {
            0 => String::new(),
            1 => "S".into(),
            e if e < 0 => format!("S^({e})"),
            e => format!("S^{e}"),
        };
        if s.is_empty() {
            let t = coeff_text(&c);
            if c.den().is_one() && many_terms(c.num()) {
                out.push_str(&format!("({t})"));
            } else {
                out.push_str(&t);
            }
        } else if c.is_one() {
            out.push_str(&s);
        } else {
            let t = coeff_text(&c);
            let wrap = !c.den().is_one() || many_terms(c.num());
            if wrap {
                out.push_str(&format!("({t})*{s}"));
            } else {
                out.push_str(&format!("{t}*{s}"));
            }
        }
    }
    out
}
