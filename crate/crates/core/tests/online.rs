//! Long-run behavior of the online loop.

use searchstop::policy::{ArmStatistics, PolicyAlgo, PolicyKind, select};
use searchstop::scheduling::SchedulingStrategy;
use searchstop::sim::{CostModel, ProblemInstance, perform_search, sample_round};
use searchstop::{Dag, StreamKey};

/// On the two-arm example (costs 0.25 and 1, hider uniform) the optimal
/// stationary search is the cheap singleton. After a long burn-in, CUCB-V
/// should select it almost always.
#[test]
fn cucb_v_converges_to_early_stopping() {
    let instance = ProblemInstance::new(
        Dag::edgeless(2).unwrap(),
        vec![0.5, 0.5],
        vec![0.25, 1.0],
        CostModel::Deterministic,
    )
    .unwrap();
    let kind = PolicyKind::with_default_zeta(PolicyAlgo::CucbV);
    let key = StreamKey::root(20_000);
    let mut env_rng = key.child(0).rng();
    let mut policy_rng = key.child(1).rng();
    let mut stats = ArmStatistics::new(2);

    let total_rounds = 20_000;
    let tail = 1_000;
    let mut tail_hits = 0u32;
    for round in 1..=total_rounds {
        let selected = select(
            &stats,
            kind,
            instance.dag(),
            SchedulingStrategy::Auto,
            &mut policy_rng,
        )
        .unwrap();
        if round > total_rounds - tail && selected.arms() == [1] {
            tail_hits += 1;
        }
        let (costs, hider) = sample_round(&instance, &mut env_rng);
        let outcome = perform_search(&selected, hider, &costs);
        let found: Vec<bool> = selected
            .arms()
            .iter()
            .map(|&a| outcome.hider_arm == Some(a))
            .collect();
        let observed: Vec<f64> = selected.arms()[..outcome.performed_len]
            .iter()
            .map(|&a| costs[a - 1])
            .collect();
        stats
            .update(&selected, outcome.performed_len, &found, &observed)
            .unwrap();
    }
    let frequency = tail_hits as f64 / tail as f64;
    assert!(
        frequency >= 0.99,
        "singleton selected with frequency {frequency} over the last {tail} rounds"
    );
}
