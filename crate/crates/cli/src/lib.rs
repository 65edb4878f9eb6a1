//! Batch verification over primes, characters and extensions, with JSON and
//! text reports.

pub mod checks;
pub mod config;
pub mod report;

use rayon::prelude::*;

use sl2cover::character::ramified_quadratic_chars;
use sl2cover::error::Result;

use checks::{run_check, Case, REGISTRY};
use config::RunConfig;
use report::{CaseResult, Report, REPORT_VERSION};

/// Runs every selected check on every configuration. Configurations run in
/// parallel on the current rayon pool; checks within one run in order.
/// Individual check failures are recorded, never propagated.
pub fn run_suite(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let mut jobs = Vec::new();
    for &p in &cfg.primes {
        for eta in ramified_quadratic_chars(p) {
            for &w in &cfg.w_pi {
                jobs.push((p, eta.clone(), w));
            }
        }
    }
    let results = jobs
        .into_par_iter()
        .map(|(p, eta, w)| {
            let eta_sign = eta.at_minus_one().as_sign().unwrap_or(0);
            let depth = cfg.depth_for(eta.level());
            let case = Case::new(p, eta, w, depth, cfg.torus_range, cfg.seed, cfg.cases)?;
            let checks = REGISTRY
                .iter()
                .filter(|spec| cfg.suites.contains(&spec.suite))
                .map(|spec| run_check(spec, &case))
                .collect();
            Ok(CaseResult {
                p,
                n_eta: case.ctx.n_eta(),
                w_pi: w,
                eta_sign,
                checks,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report {
        version: REPORT_VERSION,
        config: cfg.clone(),
        results,
    })
}
