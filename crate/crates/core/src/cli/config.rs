use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Search bounds shared by all subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Largest universe for canonical labeling.
    pub canon: usize,
    /// Largest hom-set enumerated.
    pub homs: usize,
    /// Largest candidate in k-core searches.
    pub kcore: usize,
    /// Largest candidate in the pp oracle.
    pub oracle: usize,
    /// Largest separator accepted when escalating oracle agreement.
    pub escalation: usize,
    pub d_max: usize,
    pub k_max: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            canon: 10,
            homs: 100_000,
            kcore: 4,
            oracle: 5,
            escalation: 7,
            d_max: 2,
            k_max: 4,
        }
    }
}

impl Bounds {
    /// Applies `key=value` overrides separated by commas, e.g.
    /// `homs=5000,kcore=5`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("bound override `{item}` is not key=value")))?;
            let value: usize = value
                .trim()
                .parse()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| Error::InvalidArgument(format!("bound `{item}` needs a positive integer")))?;
            let slot = match key.trim() {
                "canon" => &mut self.canon,
                "homs" => &mut self.homs,
                "kcore" => &mut self.kcore,
                "oracle" => &mut self.oracle,
                "escalation" => &mut self.escalation,
                "d_max" => &mut self.d_max,
                "k_max" => &mut self.k_max,
                other => return Err(Error::InvalidArgument(format!("unknown bound `{other}`"))),
            };
            *slot = value;
        }
        Ok(self)
    }

    pub fn check_k(&self, k: usize) -> Result<()> {
        if k > self.k_max {
            return Err(Error::BoundExceeded {
                what: "k",
                bound: self.k_max,
                actual: k,
            });
        }
        Ok(())
    }
}

/// Everything that determines a report besides the inputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub jobs: usize,
    pub bounds: Bounds,
    /// The `FMLOCAL_BOUNDS` value applied, if any.
    pub bounds_env: Option<String>,
}

pub const BOUNDS_ENV: &str = "FMLOCAL_BOUNDS";

impl RunConfig {
    pub fn from_env(seed: u64, jobs: usize) -> Result<Self> {
        let env = std::env::var(BOUNDS_ENV).ok();
        let bounds = match &env {
            Some(spec) => Bounds::default().with_overrides(spec)?,
            None => Bounds::default(),
        };
        Ok(RunConfig {
            seed,
            jobs,
            bounds,
            bounds_env: env,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let b = Bounds::default().with_overrides("homs=50, kcore=6").unwrap();
        assert_eq!((b.homs, b.kcore, b.canon), (50, 6, 10));
        assert!(Bounds::default().with_overrides("homs=0").is_err());
        assert!(Bounds::default().with_overrides("speed=3").is_err());
        assert!(Bounds::default().with_overrides("homs").is_err());
        assert_eq!(Bounds::default().with_overrides("").unwrap(), Bounds::default());
    }
}
