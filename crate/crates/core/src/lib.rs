//! Budgeted sequential search-and-stop on DAGs.
//!
//! A hidden object sits on one vertex of a DAG, placed afresh each round by a
//! fixed categorical distribution. An agent examines vertices in an order that
//! respects the precedence edges, pays a (possibly random) cost per
//! examination, and may abandon the round early to start over on a fresh
//! instance. The run ends when a global budget is exhausted; the score is the
//! number of objects found.
//!
//! The crate provides:
//!
//! - [`dag`]: the precedence graph, searches (prefixes of linear extensions),
//!   initial sets, and exhaustive search enumeration;
//! - [`objective`]: the weighted-completion objective `d`, the cost-per-find
//!   ratio `J` and its non-negative clamp `J+`, densities, and per-search
//!   regret gaps;
//! - [`scheduling`]: exact minimization of `d` over linear extensions
//!   (Smith's ratio rule for edgeless graphs, exhaustive search for small
//!   general DAGs);
//! - [`oracle`]: the stationary quasi-optimal search (cut the scheduled
//!   extension at the prefix minimizing `J+`) plus a brute-force reference;
//! - [`policy`]: online learners (CUCB-V, CUCB, CUCB-KL, Thompson sampling)
//!   that feed optimistic parameter estimates to the oracle each round;
//! - [`sim`]: the stochastic environment, budget accounting, episode runner,
//!   and regret bookkeeping;
//! - [`stream`]: splittable seeded RNG streams so replications are
//!   reproducible and order-independent.
//!
//! ```
//! use searchstop::objective::Params;
//! use searchstop::oracle::oracle;
//! use searchstop::sim::{run_stationary, CostModel, EpisodeSettings, ProblemInstance};
//! use searchstop::{Dag, SchedulingStrategy, StreamKey};
//!
//! // two arms, costs 0.25 and 1, hider uniform: stopping after the cheap
//! // arm costs 0.5 per find, finishing the search costs 0.75
//! let dag = Dag::edgeless(2)?;
//! let params = Params::new(vec![0.5, 0.5], vec![0.25, 1.0])?;
//! let best = oracle(&dag, &params, SchedulingStrategy::Auto)?;
//! assert_eq!(best.search.arms(), &[1]);
//!
//! // replaying that search against the environment earns ~budget / J*
//! let instance = ProblemInstance::new(
//!     dag,
//!     vec![0.5, 0.5],
//!     vec![0.25, 1.0],
//!     CostModel::Deterministic,
//! )?;
//! let settings = EpisodeSettings::new(100.0, 10, 0.5);
//! let record = run_stationary(&instance, &best.search, &settings, &StreamKey::root(7))?;
//! assert!(record.reward_counted() >= 150 && record.reward_counted() <= 250);
//! # Ok::<(), searchstop::Error>(())
//! ```

pub mod dag;
mod error;
pub mod ext;
pub mod objective;
pub mod oracle;
pub mod policy;
pub mod scheduling;
pub mod sim;
pub mod stream;

pub use dag::{Arm, Dag, Search};
pub use error::Error;
pub use ext::ExtReal;
pub use objective::Params;
pub use oracle::OracleResult;
pub use policy::{ArmStatistics, PolicyAlgo, PolicyKind};
pub use scheduling::SchedulingStrategy;
pub use sim::{CostModel, EpisodeRecord, EpisodeSettings, ProblemInstance};
pub use stream::StreamKey;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Default cap on `n` for exhaustive enumeration of searches and linear
/// extensions. `10! * e` is just under ten million sequences, the largest
/// workload that stays comfortable on a desk machine.
pub const EXHAUSTIVE_LIMIT: usize = 10;
