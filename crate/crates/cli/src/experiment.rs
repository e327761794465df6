//! The replication runner: execute `replications x policies` episodes,
//! aggregate checkpointed regret proxies into a curve, all bit-reproducible
//! for a fixed master seed regardless of worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use searchstop::objective::{Params, cost_ratio_j_plus};
use searchstop::policy::{ArmStatistics, PolicyKind};
use searchstop::sim::{
    EpisodeRecord, EpisodeSettings, ProblemInstance, SelectRule, run_episode, run_with_rule,
};
use searchstop::{SchedulingStrategy, Search, StreamKey};

use crate::{CliError, Result};

/// How policies turn statistics into a search each round.
#[derive(Debug, Clone)]
pub enum SelectMode {
    /// The full oracle over all searches (strategy dispatched automatically).
    Oracle,
    /// Evaluate `J+` on the two full-path searches only and take the better;
    /// used on the two-path instance beyond the exhaustive-scheduling guard.
    RestrictedTwoPath { ab: Search, ba: Search },
}

/// A fully validated, runnable experiment.
#[derive(Debug, Clone)]
pub struct ResolvedExperiment {
    pub instance: ProblemInstance,
    pub j_star: f64,
    pub mode: SelectMode,
    /// `(label, kind)` pairs in run order.
    pub policies: Vec<(String, PolicyKind)>,
    pub budget: f64,
    pub replications: usize,
    pub seed: u64,
    pub checkpoints: usize,
}

/// One CSV row of the long-format run table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub policy: String,
    pub run: usize,
    pub checkpoint_budget: f64,
    pub cum_reward: u64,
    pub regret_proxy: f64,
    pub rounds_played: u64,
}

/// Aggregated mean/stderr regret proxy per policy and checkpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretCurve {
    pub checkpoint_budgets: Vec<f64>,
    pub series: Vec<PolicyCurve>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolicyCurve {
    pub policy: String,
    pub replications: usize,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
}

impl RegretCurve {
    pub fn policy(&self, name: &str) -> Option<&PolicyCurve> {
        self.series.iter().find(|s| s.policy == name)
    }
}

pub struct ExperimentOutput {
    pub rows: Vec<RunRow>,
    pub curve: RegretCurve,
}

/// The restricted two-candidate selection rule. Ties go to the first
/// candidate, keeping runs deterministic.
struct TwoCandidateSelect<'a> {
    kind: PolicyKind,
    first: &'a Search,
    second: &'a Search,
}

impl SelectRule for TwoCandidateSelect<'_> {
    fn select(
        &mut self,
        stats: &ArmStatistics,
        rng: &mut rand_chacha::ChaCha8Rng,
    ) -> searchstop::Result<Search> {
        let w = stats.weight_upper_bound(self.kind, rng);
        let c = stats.cost_lower_bound(self.kind.zeta);
        let p = Params::new(w, c)?;
        let j_first = cost_ratio_j_plus(self.first, &p)?;
        let j_second = cost_ratio_j_plus(self.second, &p)?;
        Ok(if j_second < j_first {
            self.second.clone()
        } else {
            self.first.clone()
        })
    }
}

fn run_one(
    exp: &ResolvedExperiment,
    policy_idx: usize,
    rep: usize,
) -> searchstop::Result<EpisodeRecord> {
    let settings = EpisodeSettings::new(exp.budget, exp.checkpoints, exp.j_star);
    let key = StreamKey::root(exp.seed)
        .child(policy_idx as u64)
        .child(rep as u64);
    let kind = exp.policies[policy_idx].1;
    match &exp.mode {
        SelectMode::Oracle => run_episode(
            &exp.instance,
            kind,
            SchedulingStrategy::Auto,
            &settings,
            &key,
        ),
        SelectMode::RestrictedTwoPath { ab, ba } => {
            let mut rule = TwoCandidateSelect {
                kind,
                first: ab,
                second: ba,
            };
            run_with_rule(&exp.instance, &mut rule, &settings, &key)
        }
    }
}

/// Run every `(policy, replication)` pair on a pool of `jobs` workers.
///
/// Each episode derives its RNG streams from
/// `root(seed).child(policy_index).child(replication)`, and results are
/// collected in task order, so the output is byte-identical for any worker
/// count.
pub fn run_experiment(exp: &ResolvedExperiment, jobs: usize) -> Result<ExperimentOutput> {
    let jobs = jobs.max(1);
    let tasks: Vec<(usize, usize)> = (0..exp.policies.len())
        .flat_map(|p| (0..exp.replications).map(move |r| (p, r)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Runtime(format!("cannot build worker pool: {e}")))?;
    let records: Vec<searchstop::Result<EpisodeRecord>> =
        pool.install(|| tasks.par_iter().map(|&(p, r)| run_one(exp, p, r)).collect());

    let mut rows = Vec::with_capacity(tasks.len() * exp.checkpoints);
    let mut per_policy: Vec<Vec<Vec<f64>>> =
        vec![vec![Vec::with_capacity(exp.replications); exp.checkpoints]; exp.policies.len()];
    for (&(p, r), record) in tasks.iter().zip(records) {
        let record = record.map_err(|e| {
            CliError::Runtime(format!(
                "episode failed (policy {}, run {r}): {e}",
                exp.policies[p].0
            ))
        })?;
        for (k, cp) in record.checkpoints.iter().enumerate() {
            per_policy[p][k].push(cp.regret_proxy);
            rows.push(RunRow {
                policy: exp.policies[p].0.clone(),
                run: r,
                checkpoint_budget: cp.budget_spent,
                cum_reward: cp.cum_reward,
                regret_proxy: cp.regret_proxy,
                rounds_played: cp.rounds_played,
            });
        }
    }

    let checkpoint_budgets: Vec<f64> = (1..=exp.checkpoints)
        .map(|k| {
            if k == exp.checkpoints {
                exp.budget
            } else {
                exp.budget * k as f64 / exp.checkpoints as f64
            }
        })
        .collect();
    let series = exp
        .policies
        .iter()
        .enumerate()
        .map(|(p, (name, _))| {
            let mut mean = Vec::with_capacity(exp.checkpoints);
            let mut stderr = Vec::with_capacity(exp.checkpoints);
            for values in &per_policy[p] {
                let (m, se) = mean_and_stderr(values);
                mean.push(m);
                stderr.push(se);
            }
            PolicyCurve {
                policy: name.clone(),
                replications: exp.replications,
                mean,
                stderr,
            }
        })
        .collect();

    Ok(ExperimentOutput {
        rows,
        curve: RegretCurve {
            checkpoint_budgets,
            series,
        },
    })
}

/// Sample mean and standard error; a single replication reports stderr 0.
fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
