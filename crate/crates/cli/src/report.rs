//! Check records and their JSON and text renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use sl2cover::{CycNum, Laurent};

use crate::config::RunConfig;

pub const REPORT_VERSION: u32 = 1;

/// An exact value with an advisory floating-point rendering.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Value {
    pub exact: String,
    pub approx: String,
}

fn complex(z: num_complex::Complex64) -> String {
    let clean = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
    format!("{:.12}{:+.12}i", clean(z.re), clean(z.im))
}

impl Value {
    pub fn text(s: impl Into<String>) -> Self {
        let s = s.into();
        Value {
            approx: s.clone(),
            exact: s,
        }
    }

    pub fn cyc(c: &CycNum) -> Self {
        Value {
            exact: c.to_string(),
            approx: complex(c.embed()),
        }
    }

    pub fn laurent(l: &Laurent) -> Self {
        let approx = if l.is_zero() {
            "0".to_string()
        } else {
            l.coeffs()
                .iter()
                .map(|(k, c)| format!("({})*X^{k}", complex(c.embed())))
                .collect::<Vec<_>>()
                .join(" + ")
        };
        Value {
            exact: l.to_string(),
            approx,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub lhs: Value,
    pub rhs: Value,
    #[serde(rename = "paper_anchor")]
    pub anchor: String,
    pub ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseResult {
    pub p: u64,
    pub n_eta: u32,
    pub w_pi: i8,
    /// `eta(-1)`, which separates the two level-3 characters at `p = 2`.
    pub eta_sign: i8,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub version: u32,
    pub config: RunConfig,
    pub results: Vec<CaseResult>,
}

impl Report {
    pub fn checks(&self) -> impl Iterator<Item = &Check> {
        self.results.iter().flat_map(|r| r.checks.iter())
    }

    pub fn all_pass(&self) -> bool {
        self.checks().all(|c| c.status == Status::Pass)
    }

    /// Zeroes every timing so that runs can be compared byte for byte.
    pub fn zero_timings(&mut self) {
        for r in &mut self.results {
            for c in &mut r.checks {
                c.ms = 0;
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        const W: usize = 60;
        let clip = |s: &str| {
            if s.chars().count() <= W {
                s.to_string()
            } else {
                let head: String = s.chars().take(W - 3).collect();
                format!("{head}...")
            }
        };
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>3} {:>3} {:>4} {:>4}  {:<28} {:<7} {:>7}  {:<W$}  {:<W$}",
            "p", "n", "w", "eta", "check", "status", "ms", "lhs", "rhs"
        );
        for r in &self.results {
            for c in &r.checks {
                let status = match c.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Skipped => "skip",
                };
                let _ = writeln!(
                    out,
                    "{:>3} {:>3} {:>+4} {:>+4}  {:<28} {:<7} {:>7}  {:<W$}  {:<W$}",
                    r.p,
                    r.n_eta,
                    r.w_pi,
                    r.eta_sign,
                    c.name,
                    status,
                    c.ms,
                    clip(&c.lhs.approx),
                    clip(&c.rhs.approx)
                );
            }
        }
        let total = self.checks().count();
        let failed = self.checks().filter(|c| c.status == Status::Fail).count();
        let _ = writeln!(out, "{} checks, {failed} failed", total);
        out
    }
}
