mod common;

use common::{brute_force_equilibria, pow_costs_oracle, pow_sum, spt_oracle};
use coordlab::analysis::{
    enumerate_equilibria, find_deviation, is_m_efficient_profile, is_nash, m_efficient_transform,
    optimum_pow, potential_key, price_of_anarchy, run_dynamics, smoothness_probe, DynamicsStatus,
    DynamicsTrace, SelectionRule, DEFAULT_BUDGET,
};
use coordlab::forge::{gen_equi_lower_bound, gen_spt_lower_bound};
use coordlab::model::makespan_cost;
use coordlab::rational::{int, ratio};
use coordlab::{Error, Instance, Objective, PolicyKind, PolicySpec, PowCost, Profile, Rational};
use num_traits::Zero;
use proptest::prelude::*;

fn time() -> impl Strategy<Value = Rational> {
    (1i64..=12, 1i64..=3).prop_map(|(a, d)| ratio(a, d))
}

fn game(n_max: usize, m_max: usize) -> impl Strategy<Value = (Instance, Profile)> {
    (1..=n_max, 1..=m_max).prop_flat_map(|(n, m)| {
        let ids: Vec<usize> = (0..n).collect();
        (
            prop::collection::vec(prop::collection::vec(time(), m), n),
            prop::collection::vec(Just(ids).prop_shuffle(), m),
            prop::collection::vec(0..m, n),
        )
            .prop_map(|(proc, prio, x)| {
                (
                    Instance::with_priority(proc, Some(prio)).unwrap(),
                    Profile::new(x),
                )
            })
    })
}

fn rule(pick: u8, seed: u64) -> SelectionRule {
    match pick % 3 {
        0 => SelectionRule::FirstImproving,
        1 => SelectionRule::BestResponse,
        _ => SelectionRule::Random { seed },
    }
}

fn check_trace(
    inst: &Instance,
    policy: &PolicySpec,
    trace: &DynamicsTrace,
) -> Result<(), TestCaseError> {
    prop_assert_eq!(trace.profiles.len(), trace.steps.len() + 1);
    for (s, w) in trace.steps.iter().zip(trace.profiles.windows(2)) {
        let before = pow_costs_oracle(inst, policy, &w[0]);
        let after = pow_costs_oracle(inst, policy, &w[1]);
        prop_assert_eq!(w[0].with_move(s.mover, s.to), w[1].clone());
        prop_assert_eq!(w[0].machine_of(s.mover), s.from);
        prop_assert_eq!(&before[s.mover], &s.pow_cost_before);
        prop_assert_eq!(&after[s.mover], &s.pow_cost_after);
        prop_assert!(s.pow_cost_after < s.pow_cost_before);
        prop_assert_eq!(
            &s.potential_key_hash,
            &potential_key(inst, policy, &w[1]).hash_hex()
        );
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn spt_and_balance_dynamics_descend((inst, x) in game(7, 3), k in 1u32..=3, pick in 0u8..3, seed in 0u64..1000) {
        for policy in [PolicySpec::spt(k), PolicySpec::balance(k)] {
            let trace = run_dynamics(&inst, &policy, &x, rule(pick, seed), 10_000).unwrap();
            prop_assert_eq!(trace.status, DynamicsStatus::Converged);
            prop_assert!(is_nash(&inst, &policy, trace.last()));
            for w in trace.profiles.windows(2) {
                prop_assert!(potential_key(&inst, &policy, &w[1]) < potential_key(&inst, &policy, &w[0]));
            }
            check_trace(&inst, &policy, &trace)?;
        }
    }

    #[test]
    fn every_step_is_an_improving_move((inst, x) in game(6, 3), k in 1u32..=2, pick in 0u8..3) {
        for kind in [PolicyKind::Equi, PolicyKind::Bcoord, PolicyKind::Ccoord] {
            let policy = PolicySpec::new(kind, k).unwrap();
            let trace = run_dynamics(&inst, &policy, &x, rule(pick, 5), 200).unwrap();
            check_trace(&inst, &policy, &trace)?;
        }
    }

    #[test]
    fn best_response_picks_the_cheapest_machine((inst, x) in game(6, 3)) {
        let policy = PolicySpec::spt(1);
        let trace = run_dynamics(&inst, &policy, &x, SelectionRule::BestResponse, 1).unwrap();
        if let Some(s) = trace.steps.first() {
            let best = (0..inst.machine_count())
                .map(|i| policy.deviation_pow_cost(&inst, &x, s.mover, i))
                .min()
                .unwrap();
            prop_assert_eq!(&s.pow_cost_after, &best);
        }
    }

    #[test]
    fn nash_check_matches_brute_force((inst, _) in game(4, 3), k in 1u32..=2) {
        for kind in [PolicyKind::Spt, PolicyKind::Equi, PolicyKind::Bcoord, PolicyKind::Ccoord, PolicyKind::Balance] {
            let policy = PolicySpec::new(kind, k).unwrap();
            let stable = brute_force_equilibria(&inst, &policy);
            let space = (inst.machine_count() as u64).pow(inst.job_count() as u32);
            for code in 0..space {
                let mut a = vec![0; inst.job_count()];
                let mut r = code;
                for slot in a.iter_mut().rev() {
                    *slot = (r % inst.machine_count() as u64) as usize;
                    r /= inst.machine_count() as u64;
                }
                let x = Profile::new(a.clone());
                prop_assert_eq!(is_nash(&inst, &policy, &x), stable.contains(&a));
                prop_assert_eq!(find_deviation(&inst, &policy, &x).is_none(), stable.contains(&a));
            }
        }
    }

    #[test]
    fn optimum_is_the_least_spt_sum((inst, _) in game(5, 3), k in 1u32..=3) {
        let mut best: Option<Rational> = None;
        let mut best_span: Option<Rational> = None;
        let m = inst.machine_count() as u64;
        for code in 0..m.pow(inst.job_count() as u32) {
            let mut a = vec![0; inst.job_count()];
            let mut r = code;
            for slot in a.iter_mut().rev() {
                *slot = (r % m) as usize;
                r /= m;
            }
            let x = Profile::new(a);
            let v = pow_sum(&spt_oracle(&inst, &x), k);
            let span = (0..inst.machine_count())
                .map(|i| x.jobs_on(i).iter().fold(Rational::zero(), |s, &j| s + inst.p(i, j)))
                .max()
                .unwrap();
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
            if best_span.as_ref().is_none_or(|b| span < *b) {
                best_span = Some(span);
            }
        }
        prop_assert_eq!(optimum_pow(&inst, Objective::LkNorm(k), DEFAULT_BUDGET).unwrap(), best.unwrap());
        prop_assert_eq!(optimum_pow(&inst, Objective::Makespan, DEFAULT_BUDGET).unwrap(), best_span.unwrap());
    }

    #[test]
    fn m_efficient_transform_at_most_doubles_makespan((inst, x) in game(8, 4)) {
        let y = m_efficient_transform(&inst, &x);
        prop_assert!(is_m_efficient_profile(&inst, &y));
        prop_assert!(makespan_cost(&inst, &y) <= int(2) * makespan_cost(&inst, &x));
        if is_m_efficient_profile(&inst, &x) {
            prop_assert_eq!(y, x);
        }
    }

    #[test]
    fn smoothness_probe_sums((inst, x) in game(6, 3), k in 1u32..=3, seed in 0usize..1000) {
        let m = inst.machine_count();
        let x_star = Profile::new((0..inst.job_count()).map(|j| (j * 7 + seed) % m).collect());
        let policy = PolicySpec::spt(k);
        let probe = smoothness_probe(&inst, &policy, &x, &x_star).unwrap();
        let mut dev = Rational::zero();
        for j in 0..inst.job_count() {
            let y = x.with_move(j, x_star.machine_of(j));
            dev += coordlab::rational::pow(&spt_oracle(&inst, &y)[j], k);
        }
        prop_assert_eq!(probe.deviation, dev);
        prop_assert_eq!(probe.current, pow_sum(&spt_oracle(&inst, &x), k));
        prop_assert_eq!(probe.reference, pow_sum(&spt_oracle(&inst, &x_star), k));
    }
}

#[test]
fn spt_split_priority_profile_has_deviations_beyond_two_machines() {
    // (m, job, target, old, new)
    let witnesses = [
        (3, 1, 1, ratio(1, 1), ratio(3, 4)),
        (4, 3, 1, ratio(2, 3), ratio(7, 12)),
        (5, 12, 1, ratio(13, 24), ratio(25, 48)),
        (6, 60, 1, ratio(61, 120), ratio(121, 240)),
    ];
    let b = gen_spt_lower_bound(2).unwrap();
    assert!(is_nash(&b.instance, &PolicySpec::spt(1), &b.designated_x));
    for (m, job, target, old, new) in witnesses {
        let b = gen_spt_lower_bound(m).unwrap();
        let w =
            find_deviation(&b.instance, &PolicySpec::spt(1), &b.designated_x).expect("deviation");
        assert_eq!((w.job, w.target), (job, target), "m={m}");
        assert_eq!(w.old_pow, PowCost::Finite(old), "m={m}");
        assert_eq!(w.new_pow, PowCost::Finite(new), "m={m}");
    }
}

#[test]
fn equi_lower_bound_profile_is_an_equilibrium() {
    for m in 2..=6 {
        let b = gen_equi_lower_bound(m).unwrap();
        assert!(
            is_nash(&b.instance, &PolicySpec::equi(1), &b.designated_x),
            "m={m}"
        );
    }
}

#[test]
fn poa_of_equi_lower_bound_at_three_machines() {
    // groups of 4, 4 and 1 jobs costing 1, 3/2 and 2 in x
    let b = gen_equi_lower_bound(3).unwrap();
    let r = price_of_anarchy(
        &b.instance,
        &PolicySpec::equi(1),
        Objective::LkNorm(1),
        DEFAULT_BUDGET,
    )
    .unwrap();
    let cx = PolicySpec::equi(1)
        .evaluate(&b.instance, &b.designated_x)
        .social_cost_pow();
    assert_eq!(cx, PowCost::Finite(int(12)));
    assert!(r.worst_pow >= cx);
    assert!(r.ratio_approx > 1.0);
}

#[test]
fn makespan_objective_uses_plain_times() {
    let inst = Instance::new(vec![
        vec![int(1), int(2)],
        vec![int(2), int(1)],
        vec![int(1), int(1)],
    ])
    .unwrap();
    let r = enumerate_equilibria(
        &inst,
        &PolicySpec::spt(3),
        Objective::Makespan,
        DEFAULT_BUDGET,
    )
    .unwrap();
    assert_eq!(r.power, 1);
    assert_eq!(r.optimum_pow, int(2));
    let poa = r.poa.unwrap();
    assert_eq!(
        poa.ratio_pow,
        PowCost::Finite(poa.worst_pow.finite().unwrap() / int(2))
    );
}

#[test]
fn mismatched_norm_is_rejected() {
    let inst = Instance::new(vec![vec![int(1), int(2)]]).unwrap();
    let err = enumerate_equilibria(
        &inst,
        &PolicySpec::balance(2),
        Objective::LkNorm(3),
        DEFAULT_BUDGET,
    )
    .unwrap_err();
    assert!(matches!(err, Error::ObjectiveMismatch { .. }));
}

#[test]
fn budget_is_enforced() {
    let inst = Instance::new(vec![vec![int(1); 4]; 12]).unwrap();
    let err =
        enumerate_equilibria(&inst, &PolicySpec::spt(1), Objective::LkNorm(1), 1000).unwrap_err();
    assert!(matches!(
        err,
        Error::BudgetExceeded {
            size: 16_777_216,
            budget: 1000
        }
    ));
}

#[test]
fn zero_step_budget_is_rejected() {
    let inst = Instance::new(vec![vec![int(1)]]).unwrap();
    assert!(run_dynamics(
        &inst,
        &PolicySpec::spt(1),
        &Profile::uniform(1, 0),
        SelectionRule::FirstImproving,
        0
    )
    .is_err());
}

#[test]
fn step_limit_is_reported() {
    // three unit jobs on one of two machines settle after one move
    let inst = Instance::new(vec![vec![int(1), int(1)]; 3]).unwrap();
    let t = run_dynamics(
        &inst,
        &PolicySpec::spt(1),
        &Profile::uniform(3, 0),
        SelectionRule::FirstImproving,
        1,
    )
    .unwrap();
    assert_eq!(t.steps.len(), 1);
    assert_eq!(t.status, DynamicsStatus::Converged);
    let inst = Instance::new(vec![vec![int(1), int(1), int(1)]; 4]).unwrap();
    let t = run_dynamics(
        &inst,
        &PolicySpec::spt(1),
        &Profile::uniform(4, 0),
        SelectionRule::FirstImproving,
        1,
    )
    .unwrap();
    assert_eq!(t.status, DynamicsStatus::StepLimit);
}
