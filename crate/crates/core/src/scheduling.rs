//! Exact minimization of the weighted-completion objective `d` over linear
//! extensions.
//!
//! Two exact strategies are provided: Smith's ratio rule (edgeless graphs,
//! `O(n log n)`) and exhaustive search over linear extensions with
//! branch-and-bound pruning (any DAG, guarded to small `n`). `Auto` picks
//! whichever applies. Polynomial exact algorithms for structured poset
//! classes (series-parallel, two-dimensional) would slot in as further
//! variants; nothing at desk scale needs them.

use std::cmp::Ordering;

use crate::dag::{Arm, Dag, Search};
use crate::objective::Params;
use crate::{EXHAUSTIVE_LIMIT, Error, Result};

/// How to minimize `d` over linear extensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SchedulingStrategy {
    /// Ratio sort; exact for edgeless graphs only.
    SmithRule,
    /// Branch-and-bound over all linear extensions; any DAG with `n` at most
    /// the exhaustive limit.
    Exhaustive,
    /// Dispatch: Smith's rule when edgeless, exhaustive otherwise.
    #[default]
    Auto,
}

fn check_dims(dag: &Dag, p: &Params) -> Result<()> {
    if p.len() != dag.n() {
        return Err(Error::DimensionMismatch {
            expected: dag.n(),
            got: p.len(),
        });
    }
    Ok(())
}

/// Ratio class of an arm for Smith sorting. Zero-cost arms with positive
/// weight sort as `+inf`; zero-cost zero-weight arms sort as ratio 0. The
/// infinite class is hot in online use: optimistic cost bounds are exactly 0
/// for unexamined arms.
enum Ratio {
    Inf,
    Fin(f64),
}

fn ratio(p: &Params, arm: Arm) -> Ratio {
    let c = p.cost_of(arm);
    let w = p.weight_of(arm);
    if c > 0.0 {
        Ratio::Fin(w / c)
    } else if w > 0.0 {
        Ratio::Inf
    } else {
        Ratio::Fin(0.0)
    }
}

/// Smith's rule: the permutation with non-increasing ratios `w_i / c_i`.
///
/// Ties among infinite ratios break by larger weight then index; finite ties
/// break by ascending index. Exact minimizer of `d` on edgeless graphs.
pub fn smith_rule(dag: &Dag, p: &Params) -> Result<Search> {
    check_dims(dag, p)?;
    if !dag.is_edgeless() {
        return Err(Error::NotEdgeless);
    }
    let mut arms: Vec<Arm> = (1..=dag.n()).collect();
    arms.sort_by(|&a, &b| match (ratio(p, a), ratio(p, b)) {
        (Ratio::Inf, Ratio::Inf) => p.weight_of(b).total_cmp(&p.weight_of(a)).then(a.cmp(&b)),
        (Ratio::Inf, Ratio::Fin(_)) => Ordering::Less,
        (Ratio::Fin(_), Ratio::Inf) => Ordering::Greater,
        (Ratio::Fin(x), Ratio::Fin(y)) => y.total_cmp(&x).then(a.cmp(&b)),
    });
    Ok(Search::from_arms(arms))
}

/// Exhaustive minimization of `d` over linear extensions, returning the
/// lexicographically smallest optimum. Guarded by [`EXHAUSTIVE_LIMIT`].
pub fn exhaustive_schedule(dag: &Dag, p: &Params) -> Result<Search> {
    exhaustive_schedule_with_limit(dag, p, EXHAUSTIVE_LIMIT)
}

/// Same as [`exhaustive_schedule`] with an explicit size guard.
pub fn exhaustive_schedule_with_limit(dag: &Dag, p: &Params, limit: usize) -> Result<Search> {
    check_dims(dag, p)?;
    if dag.n() > limit {
        return Err(Error::InstanceTooLarge { n: dag.n(), limit });
    }
    let mut state = ExtensionSearch {
        dag,
        p,
        prefix: Vec::with_capacity(dag.n()),
        used: vec![false; dag.n()],
        best_d: f64::INFINITY,
        best: None,
    };
    state.descend(0.0, 0.0);
    // n >= 1 and every DAG has at least one linear extension
    Ok(Search::from_arms(
        state.best.expect("a linear extension exists"),
    ))
}

struct ExtensionSearch<'a> {
    dag: &'a Dag,
    p: &'a Params,
    prefix: Vec<Arm>,
    used: Vec<bool>,
    best_d: f64,
    best: Option<Vec<Arm>>,
}

impl ExtensionSearch<'_> {
    /// Depth-first over available arms in ascending order. Partial `d` never
    /// decreases as arms are appended (weights and costs are non-negative),
    /// so any prefix at or above the incumbent can be cut. Because complete
    /// extensions are visited in lexicographic order and ties are pruned, the
    /// incumbent ends as the lexicographically smallest minimizer.
    fn descend(&mut self, cum_cost: f64, partial_d: f64) {
        if partial_d >= self.best_d {
            return;
        }
        if self.prefix.len() == self.dag.n() {
            self.best_d = partial_d;
            self.best = Some(self.prefix.clone());
            return;
        }
        for arm in 1..=self.dag.n() {
            if self.used[arm - 1] || !self.dag.predecessors(arm).iter().all(|&q| self.used[q - 1]) {
                continue;
            }
            let next_cost = cum_cost + self.p.cost_of(arm);
            let next_d = partial_d + self.p.weight_of(arm) * next_cost;
            self.used[arm - 1] = true;
            self.prefix.push(arm);
            self.descend(next_cost, next_d);
            self.prefix.pop();
            self.used[arm - 1] = false;
        }
    }
}

/// The scheduling entry point: a full linear extension minimizing `d`.
pub fn schedule(dag: &Dag, p: &Params, strategy: SchedulingStrategy) -> Result<Search> {
    check_dims(dag, p)?;
    match strategy {
        SchedulingStrategy::SmithRule => smith_rule(dag, p),
        SchedulingStrategy::Exhaustive => exhaustive_schedule(dag, p),
        SchedulingStrategy::Auto => {
            if dag.is_edgeless() {
                smith_rule(dag, p)
            } else if dag.n() <= EXHAUSTIVE_LIMIT {
                exhaustive_schedule(dag, p)
            } else {
                Err(Error::StrategyUnavailable {
                    n: dag.n(),
                    limit: EXHAUSTIVE_LIMIT,
                })
            }
        }
    }
}
