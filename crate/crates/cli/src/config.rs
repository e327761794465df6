//! Experiment configuration: a small versioned TOML schema with named
//! presets, validated into a fully resolved experiment.
//!
//! ```toml
//! version = 1
//!
//! [instance]
//! preset = "sec5"          # sec5 | two-path | files
//! n = 20
//! m = 8
//! eps = 0.1
//! cost_mean = 0.5
//! bernoulli_costs = true
//!
//! [run]
//! policies = ["cucb-v", "cucb", "cucb-kl", "ts"]
//! budget = 10000.0
//! replications = 50
//! seed = 42
//! zeta = 1.2
//! checkpoints = 200
//! out_dir = "results"
//! ```
//!
//! The `two-path` preset takes `n`, `eps` and `which` (`"d1"`/`"d2"`); the
//! `files` preset takes `dag_file` (DAG text format) and `params_file`
//! (TOML with `w`, `c` arrays and a `cost_model` string).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use searchstop::objective::cost_ratio_j;
use searchstop::oracle::j_star;
use searchstop::policy::{PolicyAlgo, PolicyKind};
use searchstop::sim::{CostModel, ProblemInstance};
use searchstop::{Dag, EXHAUSTIVE_LIMIT};

use crate::experiment::{ResolvedExperiment, SelectMode};
use crate::instances::{TwoPathDist, instance_sec5, instance_two_path, two_path_full_searches};
use crate::{CliError, Result};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub version: u32,
    pub instance: InstanceConfig,
    pub run: RunConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceConfig {
    /// `sec5`, `two-path`, or `files`.
    pub preset: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost_mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bernoulli_costs: Option<bool>,
    /// Two-path only: `d1` or `d2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub which: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dag_file: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params_file: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub policies: Vec<String>,
    pub budget: f64,
    pub replications: usize,
    pub seed: u64,
    #[serde(default = "default_zeta")]
    pub zeta: f64,
    #[serde(default = "default_checkpoints")]
    pub checkpoints: usize,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
}

fn default_zeta() -> f64 {
    searchstop::policy::DEFAULT_ZETA
}

fn default_checkpoints() -> usize {
    200
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("results")
}

/// Contents of a `params_file` for the `files` instance preset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamsFile {
    pub w: Vec<f64>,
    pub c: Vec<f64>,
    /// `deterministic` or `bernoulli`.
    pub cost_model: String,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<ExperimentConfig> {
        let cfg: ExperimentConfig = toml::from_str(text)
            .map_err(|e| CliError::config("config", format!("not valid config TOML: {e}")))?;
        if cfg.version != CONFIG_VERSION {
            return Err(CliError::config(
                "version",
                format!(
                    "unsupported config version {} (expected {CONFIG_VERSION})",
                    cfg.version
                ),
            ));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::config("config", format!("cannot read {}: {e}", path.display()))
        })?;
        ExperimentConfig::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Override one scalar key, as used by `sweep`.
    pub fn apply_override(&mut self, key: &str, value: &str) -> Result<()> {
        fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| CliError::config(key, format!("cannot parse {value:?}")))
        }
        match key {
            "budget" | "run.budget" => self.run.budget = parse(key, value)?,
            "replications" | "run.replications" => self.run.replications = parse(key, value)?,
            "seed" | "run.seed" => self.run.seed = parse(key, value)?,
            "zeta" | "run.zeta" => self.run.zeta = parse(key, value)?,
            "checkpoints" | "run.checkpoints" => self.run.checkpoints = parse(key, value)?,
            "n" | "instance.n" => self.instance.n = Some(parse(key, value)?),
            "m" | "instance.m" => self.instance.m = Some(parse(key, value)?),
            "eps" | "instance.eps" => self.instance.eps = Some(parse(key, value)?),
            "cost_mean" | "instance.cost_mean" => {
                self.instance.cost_mean = Some(parse(key, value)?)
            }
            other => {
                return Err(CliError::config(
                    other,
                    "not a sweepable key (try budget, replications, seed, zeta, \
                     checkpoints, n, m, eps, cost_mean)",
                ));
            }
        }
        Ok(())
    }

    /// Validate everything and build the runnable experiment.
    pub fn resolve(&self) -> Result<ResolvedExperiment> {
        if self.run.policies.is_empty() {
            return Err(CliError::config(
                "run.policies",
                "at least one policy required",
            ));
        }
        if !self.run.budget.is_finite() || self.run.budget <= 0.0 {
            return Err(CliError::config(
                "run.budget",
                format!("must be a positive finite number, got {}", self.run.budget),
            ));
        }
        if self.run.replications < 1 {
            return Err(CliError::config("run.replications", "must be at least 1"));
        }
        if !self.run.zeta.is_finite() || self.run.zeta <= 1.0 {
            return Err(CliError::config(
                "run.zeta",
                format!("must exceed 1, got {}", self.run.zeta),
            ));
        }
        if self.run.checkpoints < 1 {
            return Err(CliError::config("run.checkpoints", "must be at least 1"));
        }
        let mut policies = Vec::new();
        for token in &self.run.policies {
            let algo: PolicyAlgo = token
                .parse()
                .map_err(|e: searchstop::Error| CliError::config("run.policies", e.to_string()))?;
            let kind = PolicyKind::new(algo, self.run.zeta)
                .map_err(|e| CliError::config("run.zeta", e.to_string()))?;
            policies.push((token.clone(), kind));
        }

        let (instance, mode) = self.resolve_instance()?;
        let j_star_value = match &mode {
            SelectMode::Oracle => j_star(&instance)
                .map_err(|e| CliError::Runtime(format!("cannot compute the optimal ratio: {e}")))?,
            SelectMode::RestrictedTwoPath { ab, ba } => {
                let ja = cost_ratio_j(ab, instance.params())?;
                let jb = cost_ratio_j(ba, instance.params())?;
                ja.min(jb)
                    .finite()
                    .expect("full-path searches have positive weight")
            }
        };

        Ok(ResolvedExperiment {
            instance,
            j_star: j_star_value,
            mode,
            policies,
            budget: self.run.budget,
            replications: self.run.replications,
            seed: self.run.seed,
            checkpoints: self.run.checkpoints,
        })
    }

    fn resolve_instance(&self) -> Result<(ProblemInstance, SelectMode)> {
        let inst = &self.instance;
        match inst.preset.as_str() {
            "sec5" => {
                let n = inst
                    .n
                    .ok_or_else(|| CliError::config("instance.n", "required for preset sec5"))?;
                let m = inst
                    .m
                    .ok_or_else(|| CliError::config("instance.m", "required for preset sec5"))?;
                let instance = instance_sec5(
                    n,
                    m,
                    inst.eps.unwrap_or(0.1),
                    inst.cost_mean.unwrap_or(0.5),
                    inst.bernoulli_costs.unwrap_or(true),
                )
                .map_err(|e| CliError::config("instance", e.to_string()))?;
                Ok((instance, SelectMode::Oracle))
            }
            "two-path" => {
                let n = inst.n.ok_or_else(|| {
                    CliError::config("instance.n", "required for preset two-path")
                })?;
                let which: TwoPathDist = inst.which.as_deref().unwrap_or("d1").parse().map_err(
                    |e: searchstop::Error| CliError::config("instance.which", e.to_string()),
                )?;
                let instance = instance_two_path(n, inst.eps.unwrap_or(0.1), which)
                    .map_err(|e| CliError::config("instance", e.to_string()))?;
                // beyond the exhaustive guard the exact scheduler is out of
                // reach; restrict the action set to the two full paths, which
                // is also where the instance's optimal policies live
                let mode = if n > EXHAUSTIVE_LIMIT {
                    let (ab, ba) = two_path_full_searches(n);
                    SelectMode::RestrictedTwoPath { ab, ba }
                } else {
                    SelectMode::Oracle
                };
                Ok((instance, mode))
            }
            "files" => {
                let dag_path = inst.dag_file.as_ref().ok_or_else(|| {
                    CliError::config("instance.dag_file", "required for preset files")
                })?;
                let params_path = inst.params_file.as_ref().ok_or_else(|| {
                    CliError::config("instance.params_file", "required for preset files")
                })?;
                let dag_text = std::fs::read_to_string(dag_path).map_err(|e| {
                    CliError::config(
                        "instance.dag_file",
                        format!("cannot read {}: {e}", dag_path.display()),
                    )
                })?;
                let dag = Dag::from_text(&dag_text)
                    .map_err(|e| CliError::config("instance.dag_file", e.to_string()))?;
                let params_text = std::fs::read_to_string(params_path).map_err(|e| {
                    CliError::config(
                        "instance.params_file",
                        format!("cannot read {}: {e}", params_path.display()),
                    )
                })?;
                let pf: ParamsFile = toml::from_str(&params_text).map_err(|e| {
                    CliError::config("instance.params_file", format!("invalid TOML: {e}"))
                })?;
                let model = match pf.cost_model.as_str() {
                    "deterministic" => CostModel::Deterministic,
                    "bernoulli" => CostModel::Bernoulli,
                    other => {
                        return Err(CliError::config(
                            "instance.params_file",
                            format!("unknown cost_model {other:?}"),
                        ));
                    }
                };
                let instance = ProblemInstance::new(dag, pf.w, pf.c, model)
                    .map_err(|e| CliError::config("instance.params_file", e.to_string()))?;
                Ok((instance, SelectMode::Oracle))
            }
            other => Err(CliError::config(
                "instance.preset",
                format!("unknown preset {other:?}; expected sec5, two-path or files"),
            )),
        }
    }
}

/// Named ready-to-run configurations.
pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let all_policies = || {
        PolicyAlgo::all()
            .iter()
            .map(|a| a.token().to_string())
            .collect::<Vec<_>>()
    };
    let cfg = match name {
        // desk-scale benchmark: minutes, not hours
        "sec5-desk" => ExperimentConfig {
            version: CONFIG_VERSION,
            instance: InstanceConfig {
                preset: "sec5".into(),
                n: Some(20),
                m: Some(8),
                eps: Some(0.1),
                cost_mean: Some(0.5),
                bernoulli_costs: Some(true),
                which: None,
                dag_file: None,
                params_file: None,
            },
            run: RunConfig {
                policies: all_policies(),
                budget: 1e4,
                replications: 50,
                seed: 42,
                zeta: default_zeta(),
                checkpoints: default_checkpoints(),
                out_dir: default_out_dir(),
            },
        },
        // the full benchmark scale
        "sec5-full" => {
            let mut cfg = preset("sec5-desk")?;
            cfg.instance.n = Some(100);
            cfg.instance.m = Some(40);
            cfg.run.budget = 1e5;
            cfg.run.replications = 100;
            cfg
        }
        "two-path" => ExperimentConfig {
            version: CONFIG_VERSION,
            instance: InstanceConfig {
                preset: "two-path".into(),
                n: Some(8),
                m: None,
                eps: Some(0.1),
                cost_mean: None,
                bernoulli_costs: None,
                which: Some("d1".into()),
                dag_file: None,
                params_file: None,
            },
            run: RunConfig {
                policies: all_policies(),
                budget: 4e3,
                replications: 50,
                seed: 42,
                zeta: default_zeta(),
                checkpoints: default_checkpoints(),
                out_dir: default_out_dir(),
            },
        },
        other => {
            return Err(CliError::config(
                "preset",
                format!("unknown preset {other:?}; expected sec5-desk, sec5-full or two-path"),
            ));
        }
    };
    Ok(cfg)
}

/// Output directory resolution: CLI flag beats the environment variable
/// (`SEARCHSTOP_OUT`) beats the config value.
pub fn resolve_out_dir(
    cli: Option<&Path>,
    config_value: &Path,
    env: impl Fn(&str) -> Option<String>,
) -> PathBuf {
    if let Some(p) = cli {
        return p.to_path_buf();
    }
    if let Some(v) = env("SEARCHSTOP_OUT") {
        return PathBuf::from(v);
    }
    config_value.to_path_buf()
}
