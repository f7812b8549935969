//! Input documents and summation ranges.
//!
//! ```text
//! [term]
//! expr = "binomial(n,k)^7/(2*n+3*k)"
//! [sum]
//! k_range = "0..n"
//! [options]
//! verify = 60
//! ```

use serde::Deserialize;

use super::affine::Affine;
use super::eval::natural_support;
use super::{parse_term, TermSpec};
use crate::arith::parse::{expr_to_affine, parse_expr};
use crate::error::{Error, Result};

/// Range of the summation index at a given `n`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum KRange {
    /// Where the binomials and reciprocal factorials can be nonzero.
    #[default]
    Natural,
    /// `lo(n)..hi(n)`, both ends included, each affine in `n`.
    Between(Affine, Affine),
}

impl KRange {
    pub fn parse(src: &str) -> Result<KRange> {
        let s = src.trim();
        if s == "all" || s == "natural" {
            return Ok(KRange::Natural);
        }
        let Some(idx) = s.find("..") else {
            return Err(Error::Parse {
                pos: 0,
                msg: format!("expected 'lo..hi' or 'all', got '{s}'"),
            });
        };
        let side = |t: &str, off: usize| -> Result<Affine> {
            let e = parse_expr(t, &["n"]).map_err(|e| match e {
                Error::Parse { pos, msg } => Error::Parse { pos: pos + off, msg },
                other => other,
            })?;
            let (a, _, c) = expr_to_affine(&e)?;
            Ok(Affine::new(a, 0, c))
        };
        Ok(KRange::Between(side(&s[..idx], 0)?, side(&s[idx + 2..], idx + 2)?))
    }

    /// Inclusive bounds at `n0`; empty ranges come back with `lo > hi`.
    pub fn bounds(&self, spec: &TermSpec, n0: i64) -> Result<(i64, i64)> {
        match self {
            KRange::Natural => natural_support(spec, n0).ok_or_else(|| {
                Error::InvalidInput("the term has unbounded support in k; give an explicit k range".into())
            }),
            KRange::Between(lo, hi) => {
                let n = n0.into();
                let z = 0.into();
                let conv = |x: num_bigint::BigInt| -> Result<i64> {
                    i64::try_from(x).map_err(|_| Error::InvalidInput("k range out of bounds".into()))
                };
                Ok((conv(lo.eval(&n, &z))?, conv(hi.eval(&n, &z))?))
            }
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            KRange::Natural => "all".into(),
            KRange::Between(lo, hi) => format!("{}..{}", lo, hi),
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct DocOptions {
    pub degree_cap: Option<usize>,
    pub verify: Option<i64>,
    pub symmetry: Option<bool>,
    pub certificate: Option<bool>,
    pub expanded: Option<bool>,
    pub minimal: Option<bool>,
    pub timings: Option<bool>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoc {
    term: RawTerm,
    #[serde(default)]
    sum: RawSum,
    #[serde(default)]
    options: DocOptions,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    expr: String,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawSum {
    k_range: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TermDocument {
    pub expr: String,
    pub spec: TermSpec,
    pub k_range: KRange,
    pub options: DocOptions,
}

pub fn parse_document(src: &str) -> Result<TermDocument> {
    let raw: RawDoc = toml::from_str(src).map_err(|e| Error::Parse {
        pos: e.span().map_or(0, |s| s.start),
        msg: e.message().to_string(),
    })?;
    let spec = parse_term(&raw.term.expr)?;
    let k_range = match &raw.sum.k_range {
        Some(r) => KRange::parse(r)?,
        None => KRange::Natural,
    };
    Ok(TermDocument {
        expr: raw.term.expr,
        spec,
        k_range,
        options: raw.options,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn document_roundtrip() {
        let d = parse_document(
            "[term]\nexpr = \"binomial(n,k)^7/(2*n+3*k)\"\n[sum]\nk_range = \"0..n\"\n[options]\nverify = 60\n",
        )
        .unwrap();
        assert_eq!(d.k_range, KRange::Between(Affine::new(0, 0, 0), Affine::new(1, 0, 0)));
        assert_eq!(d.options.verify, Some(60));
        assert_eq!(d.k_range.bounds(&d.spec, 7).unwrap(), (0, 7));
        assert!(parse_document("[term]\nexpr = \"binomial(n,k)\"\n[options]\nbogus = 1\n").is_err());
        assert!(matches!(KRange::parse("0..n+x"), Err(Error::Parse { pos: 5, .. })));
    }
}
