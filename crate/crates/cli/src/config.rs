use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use sl2cover::character::{check_prime, ramified_quadratic_chars};
use sl2cover::error::{Error, Result};
use sl2cover::FieldContext;

pub const DEFAULT_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

#[derive(
    Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, ValueEnum,
)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    LocalCoefficient,
    Plancherel,
    FunctionalEquation,
    GaussSum,
    HeckeAlgebra,
    GelfandGraev,
    Invariants,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::LocalCoefficient,
        Suite::Plancherel,
        Suite::FunctionalEquation,
        Suite::GaussSum,
        Suite::HeckeAlgebra,
        Suite::GelfandGraev,
        Suite::Invariants,
    ];
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub primes: Vec<u64>,
    /// Values of the extension at the uniformizer, each `+1` or `-1`.
    pub w_pi: Vec<i8>,
    /// Principal-value depth; `None` means `n_eta + 2` for each character.
    /// Integrals are always probed two shells further.
    pub shell_depth: Option<u32>,
    pub torus_range: u32,
    pub suites: Vec<Suite>,
    pub seed: u64,
    /// Randomized cases per property check.
    pub cases: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            primes: DEFAULT_PRIMES.to_vec(),
            w_pi: vec![1, -1],
            shell_depth: None,
            torus_range: 3,
            suites: Suite::ALL.to_vec(),
            seed: 0x5eed,
            cases: 100,
        }
    }
}

impl RunConfig {
    pub fn depth_for(&self, n_eta: u32) -> u32 {
        self.shell_depth.unwrap_or(n_eta + 2)
    }

    /// Rejects anything that would fail before the first check runs.
    pub fn validate(&self) -> Result<()> {
        if self.primes.is_empty() {
            return Err(Error::InvalidConfig("no primes selected".into()));
        }
        if self.w_pi.is_empty() || self.w_pi.iter().any(|w| w.abs() != 1) {
            return Err(Error::InvalidConfig(format!(
                "w_pi must be +1 or -1, got {:?}",
                self.w_pi
            )));
        }
        if self.torus_range < 2 {
            return Err(Error::InvalidConfig(
                "torus range must be at least 2".into(),
            ));
        }
        for &p in &self.primes {
            check_prime(p)?;
            for eta in ramified_quadratic_chars(p) {
                let n = eta.level();
                let m = self.depth_for(n);
                if m < n + 2 {
                    return Err(Error::InvalidConfig(format!(
                        "shell depth {m} is below {} for p = {p}, level {n}",
                        n + 2
                    )));
                }
                FieldContext::new(p, n, m)?;
            }
        }
        Ok(())
    }
}
