use std::fmt;
use std::str::FromStr;

use serde::Deserialize;

use super::BenchError;
use crate::synth::{edges_for_density, ScmParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Marvel,
    Pc,
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "marvel" => Ok(Self::Marvel),
            "pc" => Ok(Self::Pc),
            _ => Err(format!("unknown algorithm `{s}` (expected marvel or pc)")),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Marvel => "marvel",
            Self::Pc => "pc",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    Dsep,
    FisherZ,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Generator {
    FixedIndegree { p: usize, delta_in: usize },
    ErdosRenyi { p: usize, m: usize },
    Cluster { p: usize, d: usize },
}

impl Generator {
    pub fn p(&self) -> usize {
        match *self {
            Self::FixedIndegree { p, .. } | Self::ErdosRenyi { p, .. } | Self::Cluster { p, .. } => p,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub generator: Generator,
    pub algorithm: Algorithm,
    pub oracle: OracleKind,
    /// Required for `FisherZ`, rejected for `Dsep`.
    pub n_samples: Option<usize>,
    pub seeds: Vec<u64>,
    /// Defaults to `2 / p²`.
    pub alpha: Option<f64>,
    pub scm: ScmParams,
    /// Record wall-clock time per run. Off by default so that output is
    /// byte-for-byte reproducible.
    pub timing: bool,
}

/// On-disk form; see [`ExperimentConfig::from_toml`].
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    generator: String,
    p: usize,
    delta_in: Option<usize>,
    m: Option<usize>,
    density: Option<f64>,
    d: Option<usize>,
    #[serde(default = "default_algorithm")]
    algorithm: Algorithm,
    #[serde(default = "default_oracle")]
    oracle: OracleKind,
    n_samples: Option<usize>,
    seeds: Option<Vec<u64>>,
    seed_start: Option<u64>,
    n_seeds: Option<u64>,
    alpha: Option<f64>,
    scm: Option<String>,
    #[serde(default)]
    timing: bool,
}

fn default_algorithm() -> Algorithm {
    Algorithm::Marvel
}

fn default_oracle() -> OracleKind {
    OracleKind::Dsep
}

impl ExperimentConfig {
    /// Keys:
    ///
    /// ```toml
    /// generator = "fixed_indegree"   # or "erdos_renyi", "cluster"
    /// p = 25
    /// delta_in = 3                   # fixed_indegree
    /// # m = 75 or density = 0.25     # erdos_renyi
    /// # d = 2                        # cluster
    /// algorithm = "marvel"           # or "pc"
    /// oracle = "dsep"                # or "fisher_z"
    /// # n_samples = 1250             # fisher_z only
    /// seeds = [1, 2, 3]              # or seed_start = 0, n_seeds = 20
    /// # alpha = 0.01
    /// # scm = "default"              # or "wide"
    /// # timing = false
    /// ```
    pub fn from_toml(text: &str) -> Result<Self, BenchError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| BenchError::Config(e.to_string()))?;
        let cfg_err = |m: &str| BenchError::Config(m.to_string());

        let need = |v: Option<usize>, key: &str| {
            v.ok_or_else(|| BenchError::Config(format!("generator `{}` needs `{key}`", raw.generator)))
        };
        let generator = match raw.generator.as_str() {
            "fixed_indegree" => Generator::FixedIndegree { p: raw.p, delta_in: need(raw.delta_in, "delta_in")? },
            "erdos_renyi" => {
                let m = match (raw.m, raw.density) {
                    (Some(m), None) => m,
                    (None, Some(d)) if (0.0..=1.0).contains(&d) => edges_for_density(raw.p, d),
                    (None, Some(d)) => return Err(BenchError::Config(format!("density {d} outside [0, 1]"))),
                    _ => return Err(cfg_err("erdos_renyi needs exactly one of `m` and `density`")),
                };
                Generator::ErdosRenyi { p: raw.p, m }
            }
            "cluster" => Generator::Cluster { p: raw.p, d: need(raw.d, "d")? },
            other => return Err(BenchError::Config(format!("unknown generator `{other}`"))),
        };

        let seeds = match (raw.seeds, raw.seed_start, raw.n_seeds) {
            (Some(s), None, None) => s,
            (None, start, Some(n)) => {
                let start = start.unwrap_or(0);
                (start..start + n).collect()
            }
            _ => return Err(cfg_err("give either `seeds` or `n_seeds` (with optional `seed_start`)")),
        };
        let scm = match raw.scm.as_deref() {
            None | Some("default") => ScmParams::default(),
            Some("wide") => ScmParams::wide(),
            Some(other) => return Err(BenchError::Config(format!("unknown scm preset `{other}`"))),
        };
        let cfg = Self {
            generator,
            algorithm: raw.algorithm,
            oracle: raw.oracle,
            n_samples: raw.n_samples,
            seeds,
            alpha: raw.alpha,
            scm,
            timing: raw.timing,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let err = |m: String| Err(BenchError::Config(m));
        match (self.oracle, self.n_samples) {
            (OracleKind::FisherZ, None) => return err("fisher_z runs need `n_samples`".into()),
            (OracleKind::Dsep, Some(_)) => return err("dsep runs take no `n_samples`".into()),
            (OracleKind::FisherZ, Some(n)) if n < 2 => return err(format!("n_samples = {n} is too small")),
            _ => {}
        }
        if let Some(a) = self.alpha {
            if !(a > 0.0 && a < 1.0) {
                return err(format!("alpha = {a} outside (0, 1)"));
            }
            if self.oracle == OracleKind::Dsep {
                return err("alpha only applies to fisher_z runs".into());
            }
        }
        if self.seeds.is_empty() {
            return err("no seeds".into());
        }
        if self.generator.p() == 0 {
            return err("p must be positive".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let cfg = ExperimentConfig::from_toml(
            r#"
            generator = "erdos_renyi"
            p = 25
            density = 0.25
            algorithm = "pc"
            oracle = "fisher_z"
            n_samples = 500
            seed_start = 10
            n_seeds = 3
            alpha = 0.01
            scm = "wide"
            "#,
        )
        .unwrap();
        assert_eq!(cfg.generator, Generator::ErdosRenyi { p: 25, m: 75 });
        assert_eq!(cfg.algorithm, Algorithm::Pc);
        assert_eq!(cfg.seeds, vec![10, 11, 12]);
        assert_eq!(cfg.scm, ScmParams::wide());
    }

    #[test]
    fn rejects_inconsistent_configs() {
        let bad = [
            "generator = \"fixed_indegree\"\np = 5\nseeds = [1]",
            "generator = \"fixed_indegree\"\np = 5\ndelta_in = 2\nseeds = [1]\nn_samples = 10",
            "generator = \"fixed_indegree\"\np = 5\ndelta_in = 2\noracle = \"fisher_z\"\nseeds = [1]",
            "generator = \"fixed_indegree\"\np = 5\ndelta_in = 2\nseeds = []",
            "generator = \"fixed_indegree\"\np = 5\ndelta_in = 2\nseeds = [1]\ncolour = 3",
            "generator = \"tree\"\np = 5\nseeds = [1]",
            "generator = \"erdos_renyi\"\np = 5\nm = 2\ndensity = 0.1\nseeds = [1]",
        ];
        for text in bad {
            assert!(ExperimentConfig::from_toml(text).is_err(), "{text}");
        }
    }
}
