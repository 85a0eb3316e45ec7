//! Executable checkers for the inequalities and identities the library rests
//! on, one per lemma or theorem, each producing a lhs/rhs/ratio report.
//!
//! Reports are plain data: serialized to JSON for machines, rendered as
//! aligned columns for humans, and reproducible bit-for-bit from the
//! provenance block they carry (seed, rule, truncations). Inequality lemmas
//! are certified as boundedness of ratios against a stated budget, never as
//! exact constants; the algebraic identities are held to near machine
//! precision and their failure fails the build.

pub mod checks;
pub mod manifest;
pub mod sweep;

use serde::Serialize;

pub use checks::{
    check_lemma2, check_lemma3, check_lemma4, check_lemma5_random, check_repro,
    check_thm1_identity, Lemma2Params, Lemma3Params, Lemma4Params, ReproParams, Thm1Params,
};
pub use manifest::{run_all, run_check, Manifest};
pub use sweep::{boundedness_sweep, OpKind, SweepParams};

/// One lhs/rhs pair; the ratio is present only when rhs > 0.
#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: Option<f64>,
}

impl Record {
    pub fn new(id: impl Into<String>, lhs: f64, rhs: f64) -> Record {
        Record {
            id: id.into(),
            lhs,
            rhs,
            ratio: (rhs > 0.0).then_some(lhs / rhs),
        }
    }
}

/// Result of one checker run.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check_id: String,
    /// Human-readable statement of what `pass` asserts.
    pub criterion: String,
    pub pass: bool,
    /// Gated checks fail the validation run; exploratory ones only report.
    pub gated: bool,
    pub sup_ratio: Option<f64>,
    pub sup_residual: Option<f64>,
    pub inputs: serde_json::Value,
    pub records: Vec<Record>,
    /// Seed, rule and truncation data sufficient to reproduce the run.
    pub provenance: serde_json::Value,
}

impl CheckReport {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Aligned-column text rendering.
    pub fn render_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let status = if self.pass { "PASS" } else { "FAIL" };
        let gate = if self.gated { "gated" } else { "exploratory" };
        writeln!(out, "check {:<16} [{status}] ({gate})", self.check_id).unwrap();
        writeln!(out, "  criterion: {}", self.criterion).unwrap();
        if let Some(s) = self.sup_ratio {
            writeln!(out, "  sup ratio: {s:.6e}").unwrap();
        }
        if let Some(s) = self.sup_residual {
            writeln!(out, "  sup residual: {s:.6e}").unwrap();
        }
        if !self.records.is_empty() {
            let width = self
                .records
                .iter()
                .map(|r| r.id.len())
                .max()
                .unwrap_or(4)
                .max(4);
            writeln!(
                out,
                "  {:<width$}  {:>14}  {:>14}  {:>14}",
                "case", "lhs", "rhs", "ratio"
            )
            .unwrap();
            for r in &self.records {
                let ratio = r
                    .ratio
                    .map(|v| format!("{v:>14.6e}"))
                    .unwrap_or_else(|| format!("{:>14}", "-"));
                writeln!(
                    out,
                    "  {:<width$}  {:>14.6e}  {:>14.6e}  {ratio}",
                    r.id, r.lhs, r.rhs
                )
                .unwrap();
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_ratio_only_for_positive_rhs() {
        assert!(Record::new("a", 1.0, 2.0).ratio.is_some());
        assert!(Record::new("b", 1.0, 0.0).ratio.is_none());
        assert!(Record::new("c", 1.0, -1.0).ratio.is_none());
    }

    #[test]
    fn report_renders_and_serializes() {
        let report = CheckReport {
            check_id: "lemma5".into(),
            criterion: "max residual <= 1e-12".into(),
            pass: true,
            gated: true,
            sup_ratio: None,
            sup_residual: Some(3.2e-15),
            inputs: serde_json::json!({"trials": 100}),
            records: vec![Record::new("n=1", 3.2e-15, 1e-12)],
            provenance: serde_json::json!({"seed": 7}),
        };
        let text = report.render_text();
        assert!(text.contains("PASS"));
        assert!(text.contains("lemma5"));
        let json = report.to_json_string();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["check_id"], "lemma5");
    }
}
