//! The stochastic environment and episode runner.
//!
//! Each round an independent `(cost vector, hider arm)` pair is drawn; the
//! agent's selected search is performed until the hider is found or the
//! search runs out, paying every realized cost along the way. Rounds keep
//! playing while the remaining budget is non-negative at round start, so the
//! round that drives the budget negative is played and paid but its reward is
//! excluded from the count.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::dag::{Arm, Dag, Search};
use crate::ext::ExtReal;
use crate::objective::{Params, cost_ratio_j, gap};
use crate::policy::{ArmStatistics, PolicyKind, select};
use crate::scheduling::SchedulingStrategy;
use crate::stream::StreamKey;
use crate::{Error, Result};

/// How realized costs relate to their means.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostModel {
    /// Costs are deterministically equal to their means.
    Deterministic,
    /// Each cost is an independent Bernoulli draw with its mean as parameter.
    Bernoulli,
}

/// The hidden environment: a DAG, true parameters, and a cost model.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    dag: Dag,
    params: Params,
    cost_model: CostModel,
}

impl ProblemInstance {
    /// Validates that `w_star` lies on the simplex and every cost mean is in
    /// `(0, 1]`, matching the DAG's arm count.
    pub fn new(
        dag: Dag,
        w_star: Vec<f64>,
        c_star: Vec<f64>,
        cost_model: CostModel,
    ) -> Result<ProblemInstance> {
        if w_star.len() != dag.n() || c_star.len() != dag.n() {
            return Err(Error::DimensionMismatch {
                expected: dag.n(),
                got: if w_star.len() != dag.n() {
                    w_star.len()
                } else {
                    c_star.len()
                },
            });
        }
        let params = Params::new_true(w_star, c_star)?;
        Ok(ProblemInstance {
            dag,
            params,
            cost_model,
        })
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    /// True parameters (carrying the true-parameter marker).
    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn cost_model(&self) -> CostModel {
        self.cost_model
    }

    pub fn n(&self) -> usize {
        self.dag.n()
    }

    /// Smallest mean cost; positive by construction.
    pub fn min_cost(&self) -> f64 {
        self.params
            .costs()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Draw one round: the hider from the categorical weight vector, costs per
/// the cost model, mutually independent. The hider is drawn first, then
/// costs for arms `1..=n` in order, so consumption of the stream is fixed.
pub fn sample_round(instance: &ProblemInstance, rng: &mut ChaCha8Rng) -> (Vec<f64>, Arm) {
    let w = instance.params().weights();
    let u: f64 = rng.random();
    let mut hider = 0;
    let mut cum = 0.0;
    for (i, &wi) in w.iter().enumerate() {
        cum += wi;
        if u < cum {
            hider = i + 1;
            break;
        }
    }
    if hider == 0 {
        // cumulative rounding left u above the final partial sum; the hider
        // goes to the last arm with positive weight
        hider = w
            .iter()
            .rposition(|&wi| wi > 0.0)
            .expect("true weights sum to 1")
            + 1;
    }
    let costs = match instance.cost_model() {
        CostModel::Deterministic => instance.params().costs().to_vec(),
        CostModel::Bernoulli => instance
            .params()
            .costs()
            .iter()
            .map(|&c| if rng.random_bool(c) { 1.0 } else { 0.0 })
            .collect(),
    };
    (costs, hider)
}

/// What happened when a selected search was performed against a realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundOutcome {
    /// Arms actually examined (the whole search on a miss).
    pub performed_len: usize,
    /// Sum of realized costs over the performed prefix.
    pub cost_paid: f64,
    /// Whether the hider was found.
    pub reward: bool,
    /// The arm where the hider was found, if within the search.
    pub hider_arm: Option<Arm>,
}

/// Traverse `selected` in order, paying each realized cost, until the hider
/// is examined (reward) or the search is exhausted (miss).
pub fn perform_search(selected: &Search, hider: Arm, costs: &[f64]) -> RoundOutcome {
    let mut cost_paid = 0.0;
    for (pos, &arm) in selected.arms().iter().enumerate() {
        cost_paid += costs[arm - 1];
        if arm == hider {
            return RoundOutcome {
                performed_len: pos + 1,
                cost_paid,
                reward: true,
                hider_arm: Some(hider),
            };
        }
    }
    RoundOutcome {
        performed_len: selected.len(),
        cost_paid,
        reward: false,
        hider_arm: None,
    }
}

/// Budget accounting for one episode.
///
/// `remaining()` is exactly `initial - (sum of costs paid)`, accumulated in
/// round order. A round's reward counts only while the post-payment budget is
/// still non-negative; the final overshooting round is played and paid but
/// not rewarded.
#[derive(Debug, Clone, PartialEq)]
pub struct BudgetLedger {
    initial: f64,
    spent: f64,
    rounds_played: u64,
    reward_counted: u64,
    stopped: bool,
}

impl BudgetLedger {
    pub fn new(budget: f64) -> BudgetLedger {
        BudgetLedger {
            initial: budget,
            spent: 0.0,
            rounds_played: 0,
            reward_counted: 0,
            stopped: false,
        }
    }

    pub fn initial(&self) -> f64 {
        self.initial
    }

    pub fn spent(&self) -> f64 {
        self.spent
    }

    pub fn remaining(&self) -> f64 {
        self.initial - self.spent
    }

    pub fn rounds_played(&self) -> u64 {
        self.rounds_played
    }

    /// Rewards collected before the overshooting round.
    pub fn reward_counted(&self) -> u64 {
        self.reward_counted
    }

    pub fn stopped(&self) -> bool {
        self.stopped
    }

    fn play_round(&mut self, cost: f64, reward: bool) {
        debug_assert!(!self.stopped);
        self.spent += cost;
        self.rounds_played += 1;
        if self.remaining() < 0.0 {
            self.stopped = true;
        } else if reward {
            self.reward_counted += 1;
        }
    }
}

/// One line of the per-round log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundLog {
    pub selected_len: usize,
    pub performed_len: usize,
    pub cost_paid: f64,
    pub reward: bool,
    pub remaining: f64,
}

/// Cumulative state interpolated onto a budget-spent grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Checkpoint {
    pub budget_spent: f64,
    pub cum_reward: u64,
    pub regret_proxy: f64,
    /// Rounds whose cumulative spend fits within this grid point.
    pub rounds_played: u64,
}

/// Full output of one episode.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeRecord {
    pub ledger: BudgetLedger,
    pub rounds: Vec<RoundLog>,
    pub checkpoints: Vec<Checkpoint>,
}

impl EpisodeRecord {
    /// The round at which the remaining budget went negative.
    pub fn tau_b(&self) -> u64 {
        self.ledger.rounds_played()
    }

    pub fn reward_counted(&self) -> u64 {
        self.ledger.reward_counted()
    }
}

/// Knobs for an episode run.
#[derive(Debug, Clone, Copy)]
pub struct EpisodeSettings {
    pub budget: f64,
    /// Number of budget-grid checkpoints (0 disables checkpointing).
    pub checkpoint_count: usize,
    /// Optimal ratio of the instance, used for checkpoint regret proxies.
    pub j_star: f64,
    /// Round guard; defaults to `10 * ceil(2 B / min cost)` when `None`.
    pub max_rounds: Option<u64>,
}

impl EpisodeSettings {
    pub fn new(budget: f64, checkpoint_count: usize, j_star: f64) -> EpisodeSettings {
        EpisodeSettings {
            budget,
            checkpoint_count,
            j_star,
            max_rounds: None,
        }
    }
}

/// A per-round selection rule driving the episode loop.
pub trait SelectRule {
    fn select(&mut self, stats: &ArmStatistics, rng: &mut ChaCha8Rng) -> Result<Search>;
}

/// The online learner: optimistic bounds into the oracle.
pub struct OracleSelect<'a> {
    pub kind: PolicyKind,
    pub dag: &'a Dag,
    pub strategy: SchedulingStrategy,
}

impl SelectRule for OracleSelect<'_> {
    fn select(&mut self, stats: &ArmStatistics, rng: &mut ChaCha8Rng) -> Result<Search> {
        select(stats, self.kind, self.dag, self.strategy, rng)
    }
}

/// The stationary rule: the same search every round.
pub struct FixedSelect(pub Search);

impl SelectRule for FixedSelect {
    fn select(&mut self, _stats: &ArmStatistics, _rng: &mut ChaCha8Rng) -> Result<Search> {
        Ok(self.0.clone())
    }
}

/// Run one episode under an arbitrary selection rule.
///
/// The environment stream is `key.child(0)` and the policy stream
/// `key.child(1)`, so outcomes are bit-reproducible per key regardless of
/// what else runs concurrently. Statistics are updated on every played round
/// including the final overshooting one (those observations are sound; only
/// the reward count excludes that round).
pub fn run_with_rule<S: SelectRule>(
    instance: &ProblemInstance,
    rule: &mut S,
    settings: &EpisodeSettings,
    key: &StreamKey,
) -> Result<EpisodeRecord> {
    let mut env_rng = key.child(0).rng();
    let mut policy_rng = key.child(1).rng();
    let mut stats = ArmStatistics::new(instance.n());
    let mut ledger = BudgetLedger::new(settings.budget);
    let max_rounds = settings
        .max_rounds
        .unwrap_or_else(|| default_round_guard(instance, settings.budget));
    let mut rounds = Vec::new();

    while !ledger.stopped() {
        if ledger.rounds_played() >= max_rounds {
            return Err(Error::MaxRoundsExceeded { limit: max_rounds });
        }
        let selected = rule.select(&stats, &mut policy_rng)?;
        let (costs, hider) = sample_round(instance, &mut env_rng);
        let outcome = perform_search(&selected, hider, &costs);
        ledger.play_round(outcome.cost_paid, outcome.reward);

        let found: Vec<bool> = selected
            .arms()
            .iter()
            .map(|&a| outcome.hider_arm == Some(a))
            .collect();
        let observed_costs: Vec<f64> = selected.arms()[..outcome.performed_len]
            .iter()
            .map(|&a| costs[a - 1])
            .collect();
        stats.update(&selected, outcome.performed_len, &found, &observed_costs)?;

        rounds.push(RoundLog {
            selected_len: selected.len(),
            performed_len: outcome.performed_len,
            cost_paid: outcome.cost_paid,
            reward: outcome.reward,
            remaining: ledger.remaining(),
        });
    }

    let checkpoints = build_checkpoints(&rounds, settings);
    Ok(EpisodeRecord {
        ledger,
        rounds,
        checkpoints,
    })
}

/// Cut the cumulative-reward step function onto the budget grid
/// `k * B / count`. Spend is re-accumulated in round order with the same
/// additions the ledger made, so the final checkpoint (exactly `B`) counts
/// precisely the rewarded rounds.
fn build_checkpoints(rounds: &[RoundLog], settings: &EpisodeSettings) -> Vec<Checkpoint> {
    let count = settings.checkpoint_count;
    let budget = settings.budget;
    let mut out = Vec::with_capacity(count);
    let mut spent = 0.0;
    let mut cum_reward = 0u64;
    let mut idx = 0;
    for k in 1..=count {
        let x = if k == count {
            budget
        } else {
            budget * k as f64 / count as f64
        };
        while idx < rounds.len() && spent + rounds[idx].cost_paid <= x {
            spent += rounds[idx].cost_paid;
            if rounds[idx].reward {
                cum_reward += 1;
            }
            idx += 1;
        }
        out.push(Checkpoint {
            budget_spent: x,
            cum_reward,
            regret_proxy: x / settings.j_star - cum_reward as f64,
            rounds_played: idx as u64,
        });
    }
    out
}

fn default_round_guard(instance: &ProblemInstance, budget: f64) -> u64 {
    let (c_min, t_b) = t_b_and_cmin(instance, budget);
    debug_assert!(c_min > 0.0);
    10 * t_b.max(1)
}

/// Run one learning episode with the given policy.
pub fn run_episode(
    instance: &ProblemInstance,
    kind: PolicyKind,
    strategy: SchedulingStrategy,
    settings: &EpisodeSettings,
    key: &StreamKey,
) -> Result<EpisodeRecord> {
    let mut rule = OracleSelect {
        kind,
        dag: instance.dag(),
        strategy,
    };
    run_with_rule(instance, &mut rule, settings, key)
}

/// Run one episode selecting the same fixed search every round.
pub fn run_stationary(
    instance: &ProblemInstance,
    search: &Search,
    settings: &EpisodeSettings,
    key: &StreamKey,
) -> Result<EpisodeRecord> {
    let mut rule = FixedSelect(search.clone());
    run_with_rule(instance, &mut rule, settings, key)
}

/// The plotted quantity: `B / J* - (counted rewards)`.
pub fn regret_proxy(record: &EpisodeRecord, j_star: f64, budget: f64) -> f64 {
    budget / j_star - record.reward_counted() as f64
}

/// Per arm, the smallest gap over *suboptimal* searches containing it;
/// `+inf` for arms appearing only in optimal searches. Optimality is decided
/// by exact equality of `J` with the enumerated minimum, so optimal searches
/// never leak a rounding-noise gap into the minimum.
pub fn min_gap_per_arm(instance: &ProblemInstance) -> Result<Vec<ExtReal>> {
    let p = instance.params();
    let evaluated: Vec<(Search, ExtReal)> = instance
        .dag()
        .enumerate_searches()?
        .map(|s| {
            let j = cost_ratio_j(&s, p)?;
            Ok((s, j))
        })
        .collect::<Result<_>>()?;
    let j_star_val = evaluated
        .iter()
        .map(|(_, j)| *j)
        .fold(ExtReal::PosInf, ExtReal::min);
    let j_star_f = j_star_val
        .finite()
        .expect("true parameters yield a finite optimal ratio");
    let mut mins: Vec<ExtReal> = vec![ExtReal::PosInf; instance.n()];
    for (s, j) in &evaluated {
        if *j == j_star_val {
            continue;
        }
        let g = ExtReal::Finite(gap(s, p, j_star_f)?);
        for &arm in s.arms() {
            mins[arm - 1] = mins[arm - 1].min(g);
        }
    }
    Ok(mins)
}

/// The deterministic cost lower bound `c_min = min_i c*_i` (every non-empty
/// performed search pays at least one arm in expectation) and the derived
/// round-count scale `T_B = ceil(2 B / c_min)`.
pub fn t_b_and_cmin(instance: &ProblemInstance, budget: f64) -> (f64, u64) {
    let c_min = instance.min_cost();
    let t_b = (2.0 * budget / c_min).ceil() as u64;
    (c_min, t_b)
}
