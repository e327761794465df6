//! The search objectives.
//!
//! For parameters `(w, c)` (per-arm find probabilities and expected costs)
//! and a search `s`:
//!
//! - `d(s) = sum_i w[s_i] * sum_{j<=i} c[s_j]` — the weighted-completion
//!   objective minimized by the scheduling step;
//! - `J(s) = sum_i c[s_i] * (1 - sum_{j<i} w[s_j]) / sum_i w[s_i]` — expected
//!   cost paid per expected find when the same search is replayed round after
//!   round, with `J(empty) = +inf` and `+inf` on zero total weight;
//! - `J+(s) = max(0, J(s))` — the clamp that keeps optimistic out-of-simplex
//!   weight estimates from rewarding expensive searches;
//! - `rho(A) = sum_{i in A} w[i] / sum_{i in A} c[i]` — the quality/price
//!   density of an arm set, `rho(empty) = 0`;
//! - `gap(s) = sum_i c[s_i](1 - sum_{j<i} w[s_j]) / J* - sum_i w[s_i]` — the
//!   per-round local regret of a suboptimal search, clamped at 0.
//!
//! All evaluations accumulate left to right in plain double precision (no
//! compensated summation); golden values are therefore stable across runs on
//! one platform but comparisons should allow a 1e-12 tolerance.

use crate::dag::{Arm, Search};
use crate::ext::ExtReal;
use crate::{Error, Result};

const SIMPLEX_TOL: f64 = 1e-12;

/// Per-arm weight and cost vectors.
///
/// The general form only requires entrywise non-negativity (confidence bounds
/// live here). True environment parameters additionally carry a marker
/// enforcing that weights lie on the simplex and every cost is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    w: Vec<f64>,
    c: Vec<f64>,
    true_marked: bool,
}

impl Params {
    /// General non-negative parameters (e.g. optimistic estimates).
    pub fn new(w: Vec<f64>, c: Vec<f64>) -> Result<Params> {
        if w.len() != c.len() {
            return Err(Error::DimensionMismatch {
                expected: w.len(),
                got: c.len(),
            });
        }
        if w.is_empty() {
            return Err(Error::InvalidParameters("empty parameter vectors".into()));
        }
        for (name, vec) in [("weight", &w), ("cost", &c)] {
            if let Some((i, &x)) = vec
                .iter()
                .enumerate()
                .find(|(_, x)| !x.is_finite() || **x < 0.0)
            {
                return Err(Error::InvalidParameters(format!(
                    "{name} entry {} is {x}; entries must be finite and >= 0",
                    i + 1
                )));
            }
        }
        Ok(Params {
            w,
            c,
            true_marked: false,
        })
    }

    /// True environment parameters: weights sum to 1 (within 1e-12), all
    /// weights in [0, 1], all costs in (0, 1].
    pub fn new_true(w: Vec<f64>, c: Vec<f64>) -> Result<Params> {
        let mut p = Params::new(w, c)?;
        let total: f64 = p.w.iter().sum();
        if (total - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidParameters(format!(
                "true weights must sum to 1, got {total}"
            )));
        }
        if let Some((i, &x)) = p.w.iter().enumerate().find(|(_, x)| **x > 1.0) {
            return Err(Error::InvalidParameters(format!(
                "true weight entry {} is {x} > 1",
                i + 1
            )));
        }
        if let Some((i, &x)) =
            p.c.iter()
                .enumerate()
                .find(|(_, x)| **x <= 0.0 || **x > 1.0)
        {
            return Err(Error::InvalidParameters(format!(
                "true cost entry {} is {x}; costs must lie in (0, 1]",
                i + 1
            )));
        }
        p.true_marked = true;
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    /// Whether this vector carries the true-parameter marker.
    pub fn is_true(&self) -> bool {
        self.true_marked
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn costs(&self) -> &[f64] {
        &self.c
    }

    pub fn weight_of(&self, arm: Arm) -> f64 {
        self.w[arm - 1]
    }

    pub fn cost_of(&self, arm: Arm) -> f64 {
        self.c[arm - 1]
    }

    fn check_search(&self, s: &Search) -> Result<()> {
        match s.arms().iter().find(|&&a| a == 0 || a > self.len()) {
            Some(&a) => Err(Error::DimensionMismatch {
                expected: self.len(),
                got: a,
            }),
            None => Ok(()),
        }
    }
}

/// Weighted completion objective `d(s | w, c)`; 0 for the empty search.
pub fn weighted_completion(s: &Search, p: &Params) -> Result<f64> {
    p.check_search(s)?;
    let mut cum_cost = 0.0;
    let mut total = 0.0;
    for &arm in s.arms() {
        cum_cost += p.cost_of(arm);
        total += p.weight_of(arm) * cum_cost;
    }
    Ok(total)
}

/// Expected cost paid and expected weight found by one play of `s`:
/// `(sum_i c[s_i] * (1 - sum_{j<i} w[s_j]), sum_i w[s_i])`.
fn cost_and_weight(s: &Search, p: &Params) -> (f64, f64) {
    let mut cum_w = 0.0;
    let mut cost = 0.0;
    for &arm in s.arms() {
        cost += p.cost_of(arm) * (1.0 - cum_w);
        cum_w += p.weight_of(arm);
    }
    (cost, cum_w)
}

/// Ratio objective `J(s | w, c)`, `+inf` for the empty search or when the
/// search carries zero total weight.
pub fn cost_ratio_j(s: &Search, p: &Params) -> Result<ExtReal> {
    p.check_search(s)?;
    if s.is_empty() {
        return Ok(ExtReal::PosInf);
    }
    let (cost, weight) = cost_and_weight(s, p);
    if weight > 0.0 {
        Ok(ExtReal::Finite(cost / weight))
    } else {
        Ok(ExtReal::PosInf)
    }
}

/// Clamped ratio `J+(s | w, c) = max(0, J(s | w, c))`.
pub fn cost_ratio_j_plus(s: &Search, p: &Params) -> Result<ExtReal> {
    Ok(cost_ratio_j(s, p)?.clamp_non_negative())
}

/// Density `rho(A) = sum_A w / sum_A c`, with `rho(empty) = 0` and `+inf`
/// when the weight sum is positive while the cost sum is 0 (a zero weight sum
/// over zero cost also yields 0, keeping ratio sorting total).
pub fn density(arms: &[Arm], p: &Params) -> Result<ExtReal> {
    if let Some(&a) = arms.iter().find(|&&a| a == 0 || a > p.len()) {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            got: a,
        });
    }
    let w: f64 = arms.iter().map(|&a| p.weight_of(a)).sum();
    let c: f64 = arms.iter().map(|&a| p.cost_of(a)).sum();
    Ok(ExtReal::ratio(w, c))
}

/// Local regret of selecting `s` for one round when `j_star` is the optimal
/// ratio under the true parameters. Clamped at 0 so optimal searches report a
/// clean zero rather than a rounding-noise negative.
pub fn gap(s: &Search, true_p: &Params, j_star: f64) -> Result<f64> {
    if !true_p.is_true() {
        return Err(Error::NonTrueParameters);
    }
    true_p.check_search(s)?;
    let (cost, weight) = cost_and_weight(s, true_p);
    Ok((cost / j_star - weight).max(0.0))
}
