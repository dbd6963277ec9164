use serde::Serialize;

use crate::model::{Instance, PowCost, Profile};
use crate::policies::PolicySpec;

/// A strictly improving unilateral deviation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeviationWitness {
    pub job: usize,
    pub target: usize,
    pub old_pow: PowCost,
    pub new_pow: PowCost,
}

/// Current cost of every job plus, lazily, deviation costs. Machine
/// membership is computed once per profile.
pub(crate) struct DeviationOracle<'a> {
    instance: &'a Instance,
    policy: &'a PolicySpec,
    on_machine: Vec<Vec<usize>>,
    current: Vec<PowCost>,
}

impl<'a> DeviationOracle<'a> {
    pub(crate) fn new(instance: &'a Instance, policy: &'a PolicySpec, profile: &Profile) -> Self {
        let mut on_machine = vec![Vec::new(); instance.machine_count()];
        for (j, &i) in profile.as_slice().iter().enumerate() {
            on_machine[i].push(j);
        }
        let mut current = vec![PowCost::Infeasible; instance.job_count()];
        for (i, jobs) in on_machine.iter().enumerate() {
            if jobs.is_empty() {
                continue;
            }
            for (&j, c) in jobs.iter().zip(policy.machine_pow_costs(instance, i, jobs)) {
                current[j] = c;
            }
        }
        DeviationOracle {
            instance,
            policy,
            on_machine,
            current,
        }
    }

    pub(crate) fn current(&self, job: usize) -> &PowCost {
        &self.current[job]
    }

    pub(crate) fn deviation(&self, job: usize, target: usize) -> PowCost {
        let mut jobs = self.on_machine[target].clone();
        if let Some(at) = jobs.iter().position(|&j| j == job) {
            return self.policy.machine_pow_costs(self.instance, target, &jobs)[at].clone();
        }
        jobs.push(job);
        self.policy
            .machine_pow_costs(self.instance, target, &jobs)
            .pop()
            .expect("job is present")
    }

    /// Improving moves of `job`, ascending by target machine.
    pub(crate) fn improving_for(&self, job: usize, from: usize) -> Vec<DeviationWitness> {
        let old = self.current(job);
        let mut out = Vec::new();
        for target in self.instance.allowed_machines(job) {
            if target == from {
                continue;
            }
            let new = self.deviation(job, target);
            if &new < old {
                out.push(DeviationWitness {
                    job,
                    target,
                    old_pow: old.clone(),
                    new_pow: new,
                });
            }
        }
        out
    }
}

/// First strictly improving deviation, scanning jobs then machines in
/// ascending order. `None` means the profile is a pure Nash equilibrium.
pub fn find_deviation(
    instance: &Instance,
    policy: &PolicySpec,
    profile: &Profile,
) -> Option<DeviationWitness> {
    let oracle = DeviationOracle::new(instance, policy, profile);
    for job in 0..instance.job_count() {
        let from = profile.machine_of(job);
        let old = oracle.current(job);
        for target in instance.allowed_machines(job) {
            if target == from {
                continue;
            }
            let new = oracle.deviation(job, target);
            if &new < old {
                return Some(DeviationWitness {
                    job,
                    target,
                    old_pow: old.clone(),
                    new_pow: new,
                });
            }
        }
    }
    None
}

pub fn is_nash(instance: &Instance, policy: &PolicySpec, profile: &Profile) -> bool {
    find_deviation(instance, policy, profile).is_none()
}

/// Every strictly improving unilateral move, ordered by (job, target).
pub fn improving_moves(
    instance: &Instance,
    policy: &PolicySpec,
    profile: &Profile,
) -> Vec<DeviationWitness> {
    let oracle = DeviationOracle::new(instance, policy, profile);
    (0..instance.job_count())
        .flat_map(|j| oracle.improving_for(j, profile.machine_of(j)))
        .collect()
}
