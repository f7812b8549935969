//! Expression text: identifiers, integer literals, `+ - * / ^`, parentheses
//! and function calls. Evaluation into concrete types lives with each type.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::polynk::PolyNK;
use super::rfunc_nk::RFuncNK;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Int(BigInt),
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: usize,
}

pub fn perr(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let v: BigInt = src[start..i].parse().unwrap();
            out.push((Tok::Int(v), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else if "+-*/^(),".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(perr(i, format!("unexpected character '{}'", &src[i..].chars().next().unwrap())));
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    idents: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(perr(self.pos(), format!("expected '{c}'")))
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            let pos = self.pos();
            if self.eat('+') {
                let rhs = self.product()?;
                lhs = Expr { kind: ExprKind::Add(Box::new(lhs), Box::new(rhs)), pos };
            } else if self.eat('-') {
                let rhs = self.product()?;
                lhs = Expr { kind: ExprKind::Sub(Box::new(lhs), Box::new(rhs)), pos };
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let pos = self.pos();
            if self.eat('*') {
                let rhs = self.unary()?;
                lhs = Expr { kind: ExprKind::Mul(Box::new(lhs), Box::new(rhs)), pos };
            } else if self.eat('/') {
                let rhs = self.unary()?;
                lhs = Expr { kind: ExprKind::Div(Box::new(lhs), Box::new(rhs)), pos };
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        let pos = self.pos();
        if self.eat('-') {
            let e = self.unary()?;
            return Ok(Expr { kind: ExprKind::Neg(Box::new(e)), pos });
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        let pos = self.pos();
        if self.eat('^') {
            // Right associative; the exponent may carry a sign.
            let exp = self.unary()?;
            return Ok(Expr { kind: ExprKind::Pow(Box::new(base), Box::new(exp)), pos });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(v) => {
                self.at += 1;
                Ok(Expr { kind: ExprKind::Int(v), pos })
            }
            Tok::Ident(name) => {
                self.at += 1;
                if self.eat('(') {
                    let mut args = vec![self.sum()?];
                    while self.eat(',') {
                        args.push(self.sum()?);
                    }
                    self.expect(')')?;
                    return Ok(Expr { kind: ExprKind::Call(name, args), pos });
                }
                if !self.idents.contains(&name.as_str()) {
                    return Err(perr(pos, format!("unknown identifier '{name}'")));
                }
                Ok(Expr { kind: ExprKind::Ident(name), pos })
            }
            Tok::Sym('(') => {
                self.at += 1;
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::End => Err(perr(pos, "unexpected end of input")),
            Tok::Sym(c) => Err(perr(pos, format!("unexpected '{c}'"))),
        }
    }
}

/// Parse `src`, accepting only the listed bare identifiers.
pub fn parse_expr(src: &str, idents: &[&str]) -> Result<Expr> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0, idents };
    let e = p.sum()?;
    if *p.peek() != Tok::End {
        return Err(perr(p.pos(), "unexpected trailing input"));
    }
    Ok(e)
}

impl Expr {
    /// Integer value of a constant expression (used for exponents).
    pub fn as_int(&self) -> Option<BigInt> {
        match &self.kind {
            ExprKind::Int(v) => Some(v.clone()),
            ExprKind::Neg(e) => e.as_int().map(|v| -v),
            ExprKind::Add(a, b) => Some(a.as_int()? + b.as_int()?),
            ExprKind::Sub(a, b) => Some(a.as_int()? - b.as_int()?),
            ExprKind::Mul(a, b) => Some(a.as_int()? * b.as_int()?),
            _ => None,
        }
    }

    pub fn small_exponent(&self) -> Result<i32> {
        self.as_int()
            .and_then(|v| v.to_i32())
            .filter(|v| v.unsigned_abs() <= 10_000)
            .ok_or_else(|| perr(self.pos, "exponent must be a small integer constant"))
    }
}

/// Evaluate an expression without calls into Q(n, k).
pub fn expr_to_rfunc(e: &Expr) -> Result<RFuncNK> {
    Ok(match &e.kind {
        ExprKind::Int(v) => RFuncNK::from_poly(PolyNK::constant(v.clone())),
        ExprKind::Ident(name) => match name.as_str() {
            "n" => RFuncNK::n(),
            "k" => RFuncNK::k(),
            other => return Err(perr(e.pos, format!("'{other}' is not allowed here"))),
        },
        ExprKind::Neg(a) => -&expr_to_rfunc(a)?,
        ExprKind::Add(a, b) => &expr_to_rfunc(a)? + &expr_to_rfunc(b)?,
        ExprKind::Sub(a, b) => &expr_to_rfunc(a)? - &expr_to_rfunc(b)?,
        ExprKind::Mul(a, b) => &expr_to_rfunc(a)? * &expr_to_rfunc(b)?,
        ExprKind::Div(a, b) => {
            let d = expr_to_rfunc(b)?;
            if d.is_zero() {
                return Err(perr(b.pos, "division by zero"));
            }
            &expr_to_rfunc(a)? / &d
        }
        ExprKind::Pow(a, x) => {
            let base = expr_to_rfunc(a)?;
            let ex = x.small_exponent()?;
            if base.is_zero() && ex < 0 {
                return Err(perr(x.pos, "negative power of zero"));
            }
            base.pow(ex)?
        }
        ExprKind::Call(name, _) => return Err(perr(e.pos, format!("function '{name}' is not allowed here"))),
    })
}

/// Integer-affine form `a*n + b*k + c` of an expression.
pub fn expr_to_affine(e: &Expr) -> Result<(BigInt, BigInt, BigInt)> {
    let f = expr_to_rfunc(e)?;
    let bad = || perr(e.pos, "argument must be integer-affine in n and k");
    if !f.den().is_one() {
        return Err(bad());
    }
    let p = f.num();
    if p.total_degree() > 1 {
        return Err(bad());
    }
    let c0 = p.k_coeff(0);
    let c1 = p.k_coeff(1);
    let z = BigInt::zero();
    Ok((c0.coeff(1), if p.deg_k() == Some(1) { c1.coeff(0) } else { z }, c0.coeff(0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_functions() {
        let e = parse_expr("1/(2*n+3*k)", &["n", "k"]).unwrap();
        assert_eq!(expr_to_rfunc(&e).unwrap().to_text(), "1/(2*n+3*k)");
        let e = parse_expr("(n^2 - k^2)/(n-k)", &["n", "k"]).unwrap();
        assert_eq!(expr_to_rfunc(&e).unwrap().to_text(), "n+k");
        let e = parse_expr("2^-1*n", &["n", "k"]).unwrap();
        assert_eq!(expr_to_rfunc(&e).unwrap().to_text(), "n/2");
    }

    #[test]
    fn reports_positions() {
        let err = parse_expr("binomial(n,k)^2+oops", &["n", "k"]).unwrap_err();
        assert_eq!(err, perr(16, "unknown identifier 'oops'"));
        assert!(matches!(parse_expr("(n+1", &["n"]), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_expr("n $ 2", &["n"]), Err(Error::Parse { pos: 2, .. })));
    }

    #[test]
    fn affine_forms() {
        let e = parse_expr("3*k+1 - n", &["n", "k"]).unwrap();
        assert_eq!(expr_to_affine(&e).unwrap(), ((-1).into(), 3.into(), 1.into()));
        let e = parse_expr("n*k", &["n", "k"]).unwrap();
        assert!(expr_to_affine(&e).is_err());
    }
}
