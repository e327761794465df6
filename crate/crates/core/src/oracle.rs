//! The stationary offline oracle.
//!
//! [`oracle`] computes a search minimizing `J+` over *all* searches of the
//! DAG: run the scheduling step to get a full extension minimizing `d`, then
//! cut it at the prefix length minimizing `J+`. This two-step procedure is
//! exact whenever the scheduling step is an exact `d`-minimizer;
//! [`brute_force_oracle`] provides the independent reference used to verify
//! that equivalence on small instances.

use crate::dag::{Dag, Search};
use crate::ext::ExtReal;
use crate::objective::{Params, cost_ratio_j_plus};
use crate::scheduling::{SchedulingStrategy, schedule};
use crate::sim::ProblemInstance;
use crate::{EXHAUSTIVE_LIMIT, Result};

/// Output of the offline oracle.
///
/// `search` is `full_extension` truncated to `cut_index` arms. A
/// `cut_index` of 0 flags the degenerate all-zero-weight input, where every
/// prefix has `J+ = +inf`; the search is then the length-1 prefix so that a
/// policy still makes progress and gathers feedback.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub search: Search,
    pub j_plus: ExtReal,
    pub full_extension: Search,
    pub cut_index: usize,
}

impl OracleResult {
    /// True when every prefix evaluated to `+inf` (all weights zero).
    pub fn is_degenerate(&self) -> bool {
        self.cut_index == 0
    }
}

/// Quasi-optimal stationary search for arbitrary non-negative `(w, c)`.
///
/// The prefix argmin runs over lengths `1..=n`; the empty search is excluded
/// (`J+(empty) = +inf`, and an empty selection gains nothing and observes
/// nothing). Ties break toward the shortest prefix.
pub fn oracle(dag: &Dag, p: &Params, strategy: SchedulingStrategy) -> Result<OracleResult> {
    let full = schedule(dag, p, strategy)?;
    let mut weight = 0.0;
    let mut cost = 0.0;
    let mut best = ExtReal::PosInf;
    let mut best_i = 0usize;
    for (idx, &arm) in full.arms().iter().enumerate() {
        cost += p.cost_of(arm) * (1.0 - weight);
        weight += p.weight_of(arm);
        let j = if weight > 0.0 {
            ExtReal::Finite((cost / weight).max(0.0))
        } else {
            ExtReal::PosInf
        };
        if j < best {
            best = j;
            best_i = idx + 1;
        }
    }
    let (cut_index, search) = if best_i == 0 {
        // all weights zero: flag with cut 0, return the length-1 prefix
        (0, full.prefix(1))
    } else {
        (best_i, full.prefix(best_i))
    };
    Ok(OracleResult {
        search,
        j_plus: best,
        full_extension: full,
        cut_index,
    })
}

/// Exact argmin of `J+` over every search, by enumeration.
///
/// Ties break toward the shortest search, then lexicographically. Since there
/// is no scheduling step here, `full_extension` is the winning search itself
/// and `cut_index` its length (0 for the empty search, which wins only on
/// all-zero weights).
pub fn brute_force_oracle(dag: &Dag, p: &Params) -> Result<OracleResult> {
    brute_force_oracle_with_limit(dag, p, EXHAUSTIVE_LIMIT)
}

/// Same as [`brute_force_oracle`] with an explicit enumeration guard.
pub fn brute_force_oracle_with_limit(dag: &Dag, p: &Params, limit: usize) -> Result<OracleResult> {
    let mut best: Option<(ExtReal, Search)> = None;
    for s in dag.enumerate_searches_with_limit(limit)? {
        let j = cost_ratio_j_plus(&s, p)?;
        let better = match &best {
            None => true,
            Some((bj, bs)) => match j.total_cmp(*bj) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Greater => false,
                std::cmp::Ordering::Equal => (s.len(), s.arms()) < (bs.len(), bs.arms()),
            },
        };
        if better {
            best = Some((j, s));
        }
    }
    let (j_plus, search) = best.expect("enumeration yields at least the empty search");
    Ok(OracleResult {
        cut_index: search.len(),
        full_extension: search.clone(),
        j_plus,
        search,
    })
}

/// Optimal ratio `J*` of a problem instance under its true parameters.
pub fn j_star(instance: &ProblemInstance) -> Result<f64> {
    let result = oracle(instance.dag(), instance.params(), SchedulingStrategy::Auto)?;
    Ok(result
        .j_plus
        .finite()
        .expect("true parameters yield a finite optimal ratio"))
}
