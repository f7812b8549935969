//! Independent checks: exact sums, recurrence checks on windows, symbolic
//! certificate identities and recurrence guessing.

mod guess;
mod sum;

use std::fmt::Write as _;

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{PolyK, RFuncN, RFuncNK};
use crate::error::{Error, Result};
use crate::ore::{OreOp, SeqWindow};
use crate::reduction::polyk_to_rfunc;
use crate::term::HTerm;

pub use guess::{annihilates_window, guess_recurrence, required_window, window_from, MARGIN};
pub use sum::{sum_at, sum_direct, sum_sequence};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub n: i64,
    /// `(L a)(n)`, or the offending value.
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckEntry {
    pub name: String,
    /// Checked points `n`, both ends included; `None` for symbolic checks.
    pub range: Option<(i64, i64)>,
    pub passed: bool,
    /// Points left out because the leading coefficient vanishes or a coefficient has a pole.
    pub skipped: Vec<i64>,
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckEntry {
    pub fn symbolic(name: impl Into<String>, passed: bool) -> Self {
        CheckEntry {
            name: name.into(),
            range: None,
            passed,
            skipped: Vec::new(),
            witness: None,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckEntry>,
}

impl VerificationReport {
    pub fn push(&mut self, c: CheckEntry) {
        self.checks.push(c);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// One line per check.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let range = c.range.map_or("symbolic".to_string(), |(a, b)| format!("n={a}..{b}"));
            let _ = write!(out, "{:<4} {:<44} {}", if c.passed { "ok" } else { "FAIL" }, c.name, range);
            if !c.skipped.is_empty() {
                let _ = write!(out, "  skipped {:?}", c.skipped);
            }
            if let Some(w) = &c.witness {
                let _ = write!(out, "  first failure n={} value {}", w.n, w.value);
            }
            if let Some(n) = &c.note {
                let _ = write!(out, "  ({n})");
            }
            out.push('\n');
        }
        out
    }
}

/// Check `(L a)(n) = 0` at every point of the window where `L` is regular.
pub fn check_annihilates(name: &str, op: &OreOp, s: &SeqWindow) -> Result<CheckEntry> {
    let need = op.order() + 1;
    if s.len() < need {
        return Err(Error::InsufficientWindow { needed: need, have: s.len() });
    }
    let from = s.offset - op.low_exp();
    let to = s.end() - op.high_exp();
    let skipped = op.singular_points(from, to);
    let mut witness = None;
    for n in (from..=to).filter(|n| !skipped.contains(n)) {
        let v = op.apply_at(s, n)?;
        if !v.is_zero() {
            witness = Some(Witness { n, value: v.to_string() });
            break;
        }
    }
    Ok(CheckEntry {
        name: name.to_string(),
        range: Some((from, to)),
        passed: witness.is_none(),
        skipped,
        witness,
        note: None,
    })
}

fn lift(c: &RFuncN) -> RFuncNK {
    polyk_to_rfunc(&PolyK::constant(c.clone()))
}

/// `L(H)/H - residual - (S_k(c) R2 - c)` as a reduced rational function.
pub fn certificate_defect(op: &OreOp, c: &RFuncNK, h: &HTerm, residual: &RFuncNK) -> RFuncNK {
    let mut lhs = RFuncNK::zero();
    // S_n^e(H)/H for e = low..=high
    let mut ratio = RFuncNK::one();
    for e in 0..op.low_exp() {
        ratio = &ratio * &h.r1.shift_int(e, 0);
    }
    for e in op.low_exp()..=op.high_exp() {
        let ce = op.coeff(e);
        if !ce.is_zero() {
            lhs = &lhs + &(&lift(&ce) * &ratio);
        }
        ratio = &ratio * &h.r1.shift_int(e, 0);
    }
    let delta = &(&c.shift_int(0, 1) * &h.r2) - c;
    &(&lhs - residual) - &delta
}

/// `L(H) = Delta_k(c H)` as an identity of rational functions.
pub fn check_certificate(op: &OreOp, c: &RFuncNK, h: &HTerm) -> bool {
    certificate_defect(op, c, h, &RFuncNK::zero()).is_zero()
}

/// `L(H) = residual * H + Delta_k(c H)`.
pub fn check_certificate_with_residual(op: &OreOp, c: &RFuncNK, h: &HTerm, residual: &RFuncNK) -> bool {
    certificate_defect(op, c, h, residual).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{parse_term, TermSpec};

    #[test]
    fn annihilation_checks() {
        let pow2 = SeqWindow::from_ints(0, &[1, 2, 4, 8, 16]);
        let op = crate::ore::parse_op("S - 2").unwrap();
        assert!(check_annihilates("pow2", &op, &pow2).unwrap().passed);
        let bad = SeqWindow::from_ints(0, &[1, 3]);
        let e = check_annihilates("bad", &op, &bad).unwrap();
        assert!(!e.passed);
        assert_eq!(e.witness.unwrap().n, 0);
        assert!(matches!(
            check_annihilates("short", &op, &SeqWindow::from_ints(0, &[1])),
            Err(Error::InsufficientWindow { .. })
        ));
    }

    #[test]
    fn singular_points_are_listed() {
        // Leading coefficient vanishes at n = 0.
        let op = crate::ore::parse_op("n*S - 2*n").unwrap();
        let s = SeqWindow::from_ints(0, &[7, 2, 4, 8]);
        let e = check_annihilates("skip", &op, &s).unwrap();
        assert!(e.passed);
        assert_eq!(e.skipped, vec![0]);
    }

    #[test]
    fn gosper_pair() {
        // (k - n/2) binom(n,k) = Delta_k(c binom(n,k)) with c = -k/2.
        let h = HTerm::new(&TermSpec::binomial_power(1));
        let spec = parse_term("k - n/2").unwrap();
        let residual = spec.prefactor.clone();
        let c = &RFuncNK::k() * &RFuncNK::from_rational(&num_rational::BigRational::new((-1).into(), 2.into()));
        let zero = OreOp::zero();
        assert!(check_certificate_with_residual(&zero, &c, &h, &-&residual));
        let c1 = &c + &RFuncNK::one();
        assert!(!check_certificate_with_residual(&zero, &c1, &h, &-&residual));
    }
}
