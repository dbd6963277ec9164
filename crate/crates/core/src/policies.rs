//! The five coordination mechanisms as cost functions.
//!
//! Every policy maps the jobs sharing a machine to k-th-power completion
//! times. SPT and EQUI are strongly local: they only read the column of
//! the machine itself, and `k` only sets the power of the report. BCOORD,
//! CCOORD and Balance are local: they read each job's fastest time `q_j`
//! and charge `Infeasible` whenever `p_ij > m * q_j`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CostReport, Instance, Objective, PowCost, Profile};
use crate::rational::{pow, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    /// Non-preemptive shortest processing time first.
    Spt,
    /// Processor sharing with equal CPU fractions.
    Equi,
    Bcoord,
    Ccoord,
    Balance,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 5] = [
        PolicyKind::Spt,
        PolicyKind::Equi,
        PolicyKind::Bcoord,
        PolicyKind::Ccoord,
        PolicyKind::Balance,
    ];

    /// Whether the schedule itself depends on `k`.
    pub fn uses_k(self) -> bool {
        matches!(
            self,
            PolicyKind::Bcoord | PolicyKind::Ccoord | PolicyKind::Balance
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Spt => "spt",
            PolicyKind::Equi => "equi",
            PolicyKind::Bcoord => "bcoord",
            PolicyKind::Ccoord => "ccoord",
            PolicyKind::Balance => "balance",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "spt" => Ok(PolicyKind::Spt),
            "equi" => Ok(PolicyKind::Equi),
            "bcoord" => Ok(PolicyKind::Bcoord),
            "ccoord" => Ok(PolicyKind::Ccoord),
            "balance" => Ok(PolicyKind::Balance),
            other => Err(Error::InvalidParameter(format!("unknown policy `{other}`"))),
        }
    }
}

/// A policy together with its norm parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolicySpec {
    pub kind: PolicyKind,
    pub k: u32,
}

impl fmt::Display for PolicySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind.uses_k() {
            write!(f, "{}(k={})", self.kind, self.k)
        } else {
            write!(f, "{}", self.kind)
        }
    }
}

impl PolicySpec {
    pub fn new(kind: PolicyKind, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        Ok(PolicySpec { kind, k })
    }

    pub fn spt(k: u32) -> Self {
        PolicySpec {
            kind: PolicyKind::Spt,
            k: k.max(1),
        }
    }

    pub fn equi(k: u32) -> Self {
        PolicySpec {
            kind: PolicyKind::Equi,
            k: k.max(1),
        }
    }

    pub fn bcoord(k: u32) -> Self {
        PolicySpec {
            kind: PolicyKind::Bcoord,
            k: k.max(1),
        }
    }

    pub fn ccoord(k: u32) -> Self {
        PolicySpec {
            kind: PolicyKind::Ccoord,
            k: k.max(1),
        }
    }

    pub fn balance(k: u32) -> Self {
        PolicySpec {
            kind: PolicyKind::Balance,
            k: k.max(1),
        }
    }

    /// Same policy with costs powered for `objective`.
    ///
    /// For an l_k objective SPT and EQUI are re-powered to `k`; the
    /// k-dependent policies must already use the same `k` because their
    /// costs are only rational in their own power. The makespan objective
    /// keeps the policy's own power (SPT/EQUI report plain times).
    pub fn for_objective(self, objective: Objective) -> Result<PolicySpec> {
        match objective {
            Objective::LkNorm(k) if !self.kind.uses_k() => Ok(PolicySpec { k, ..self }),
            Objective::LkNorm(k) if k == self.k => Ok(self),
            Objective::LkNorm(_) => Err(Error::ObjectiveMismatch {
                policy: self.to_string(),
                objective: objective.to_string(),
            }),
            Objective::Makespan if !self.kind.uses_k() => Ok(PolicySpec { k: 1, ..self }),
            Objective::Makespan => Ok(self),
        }
    }

    /// Costs of the given jobs, all assumed to sit on `machine`; returned
    /// in the order of `jobs`.
    pub fn machine_pow_costs(
        &self,
        instance: &Instance,
        machine: usize,
        jobs: &[usize],
    ) -> Vec<PowCost> {
        match self.kind {
            PolicyKind::Spt => spt_machine(instance, machine, jobs, self.k),
            PolicyKind::Equi => equi_machine(instance, machine, jobs, self.k),
            PolicyKind::Bcoord => bcoord_machine(instance, machine, jobs, self.k),
            PolicyKind::Ccoord => ccoord_machine(instance, machine, jobs, self.k),
            PolicyKind::Balance => balance_machine(instance, machine, jobs, self.k),
        }
    }

    /// Full cost report of a profile.
    pub fn evaluate(&self, instance: &Instance, profile: &Profile) -> CostReport {
        let mut costs = vec![PowCost::Infeasible; instance.job_count()];
        for machine in 0..instance.machine_count() {
            let jobs = profile.jobs_on(machine);
            if jobs.is_empty() {
                continue;
            }
            for (j, c) in jobs
                .iter()
                .zip(self.machine_pow_costs(instance, machine, &jobs))
            {
                costs[*j] = c;
            }
        }
        CostReport::new(self.k, costs)
    }

    /// Cost of a single job in `profile`.
    pub fn job_pow_cost(&self, instance: &Instance, profile: &Profile, job: usize) -> PowCost {
        self.deviation_pow_cost(instance, profile, job, profile.machine_of(job))
    }

    /// Cost of `job` in `(x_{-job}, target)`.
    pub fn deviation_pow_cost(
        &self,
        instance: &Instance,
        profile: &Profile,
        job: usize,
        target: usize,
    ) -> PowCost {
        let mut jobs: Vec<usize> = profile
            .as_slice()
            .iter()
            .enumerate()
            .filter(|&(j, &i)| i == target && j != job)
            .map(|(j, _)| j)
            .collect();
        jobs.push(job);
        let costs = self.machine_pow_costs(instance, target, &jobs);
        costs.into_iter().last().expect("job is present")
    }
}

/// SPT costs on every machine (power `k`).
pub fn spt_costs(instance: &Instance, profile: &Profile, k: u32) -> CostReport {
    PolicySpec::spt(k).evaluate(instance, profile)
}

/// EQUI costs on every machine (power `k`).
pub fn equi_costs(instance: &Instance, profile: &Profile, k: u32) -> CostReport {
    PolicySpec::equi(k).evaluate(instance, profile)
}

pub fn bcoord_pow_costs(instance: &Instance, profile: &Profile, k: u32) -> CostReport {
    PolicySpec::bcoord(k).evaluate(instance, profile)
}

pub fn ccoord_pow_costs(instance: &Instance, profile: &Profile, k: u32) -> CostReport {
    PolicySpec::ccoord(k).evaluate(instance, profile)
}

pub fn balance_pow_costs(instance: &Instance, profile: &Profile, k: u32) -> CostReport {
    PolicySpec::balance(k).evaluate(instance, profile)
}

/// Jobs sorted by the machine order (ascending time, ties by priority).
fn in_machine_order(instance: &Instance, machine: usize, jobs: &[usize]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..jobs.len()).collect();
    idx.sort_by_key(|&t| instance.position(machine, jobs[t]));
    idx
}

fn spt_machine(instance: &Instance, machine: usize, jobs: &[usize], k: u32) -> Vec<PowCost> {
    let mut out = vec![PowCost::Infeasible; jobs.len()];
    let mut completion = Rational::zero();
    for t in in_machine_order(instance, machine, jobs) {
        completion += instance.p(machine, jobs[t]);
        out[t] = PowCost::Finite(pow(&completion, k));
    }
    out
}

fn equi_machine(instance: &Instance, machine: usize, jobs: &[usize], k: u32) -> Vec<PowCost> {
    // After sorting by time, the job at rank r finishes at
    // (sum of the r shorter ones) + (N - r) * own time.
    let n = jobs.len();
    let mut out = vec![PowCost::Infeasible; n];
    let mut shorter = Rational::zero();
    for (r, t) in in_machine_order(instance, machine, jobs)
        .into_iter()
        .enumerate()
    {
        let p = instance.p(machine, jobs[t]);
        let c = &shorter + p * Rational::from_integer(((n - r) as i64).into());
        out[t] = PowCost::Finite(pow(&c, k));
        shorter += p;
    }
    out
}

fn is_m_efficient(instance: &Instance, machine: usize, job: usize) -> bool {
    let m = Rational::from_integer((instance.machine_count() as i64).into());
    instance.p(machine, job) <= &(instance.fastest(job) * m)
}

fn bcoord_machine(instance: &Instance, machine: usize, jobs: &[usize], k: u32) -> Vec<PowCost> {
    let load = jobs
        .iter()
        .fold(Rational::zero(), |acc, &j| acc + instance.p(machine, j));
    let load_k = pow(&load, k);
    jobs.iter()
        .map(|&j| {
            if is_m_efficient(instance, machine, j) {
                PowCost::Finite(instance.rho(machine, j) * &load_k)
            } else {
                PowCost::Infeasible
            }
        })
        .collect()
}

fn ccoord_machine(instance: &Instance, machine: usize, jobs: &[usize], k: u32) -> Vec<PowCost> {
    let times: Vec<Rational> = jobs
        .iter()
        .map(|&j| instance.p(machine, j).clone())
        .collect();
    let psi_k = psi(&times, k);
    jobs.iter()
        .map(|&j| {
            if is_m_efficient(instance, machine, j) {
                PowCost::Finite(instance.rho(machine, j) * &psi_k)
            } else {
                PowCost::Infeasible
            }
        })
        .collect()
}

fn balance_machine(instance: &Instance, machine: usize, jobs: &[usize], k: u32) -> Vec<PowCost> {
    balance_scaled_machine(instance, machine, jobs, k)
        .into_iter()
        .zip(jobs)
        .map(|(c, &j)| match c {
            PowCost::Finite(v) => PowCost::Finite(v / instance.fastest(j)),
            PowCost::Infeasible => PowCost::Infeasible,
        })
        .collect()
}

/// Balance costs multiplied by `q_j`:
/// `(p_ij + S)^(k+1) - S^(k+1)` with `S` the time of the jobs ahead.
///
/// This is the per-job quantity the convergence order is built on; the
/// actual cost divides it by the job's own constant `q_j`.
pub fn balance_scaled_machine(
    instance: &Instance,
    machine: usize,
    jobs: &[usize],
    k: u32,
) -> Vec<PowCost> {
    let mut out = vec![PowCost::Infeasible; jobs.len()];
    let mut ahead = Rational::zero();
    let mut ahead_pow = Rational::zero();
    for t in in_machine_order(instance, machine, jobs) {
        let j = jobs[t];
        let through = &ahead + instance.p(machine, j);
        let through_pow = pow(&through, k + 1);
        if is_m_efficient(instance, machine, j) {
            out[t] = PowCost::Finite(&through_pow - &ahead_pow);
        }
        ahead = through;
        ahead_pow = through_pow;
    }
    out
}

/// `Psi_k(A) = k! * sum over nondecreasing index tuples of products`,
/// evaluated with the insertion recurrence
/// `Psi_t(A + b) = Psi_t(A) + t * b * Psi_{t-1}(A + b)`.
pub fn psi(values: &[Rational], k: u32) -> Rational {
    psi_table(values, k).pop().expect("table has k + 1 entries")
}

/// `[Psi_0(A), ..., Psi_k(A)]`.
pub fn psi_table(values: &[Rational], k: u32) -> Vec<Rational> {
    let k = k as usize;
    let mut table = vec![Rational::zero(); k + 1];
    table[0] = Rational::one();
    for b in values {
        for t in 1..=k {
            let term = b * Rational::from_integer((t as i64).into()) * &table[t - 1];
            table[t] += term;
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::social_cost_pow;
    use crate::rational::{int, ratio};

    fn fin(v: Rational) -> PowCost {
        PowCost::Finite(v)
    }

    fn single_machine(ps: &[i64]) -> (Instance, Profile) {
        let inst = Instance::new(ps.iter().map(|&p| vec![int(p)]).collect()).unwrap();
        let x = Profile::uniform(ps.len(), 0);
        (inst, x)
    }

    #[test]
    fn spt_prefix_sums() {
        let (inst, x) = single_machine(&[5]);
        assert_eq!(spt_costs(&inst, &x, 1).pow_costs, vec![fin(int(5))]);
        let (inst, x) = single_machine(&[2, 3]);
        assert_eq!(
            spt_costs(&inst, &x, 1).pow_costs,
            vec![fin(int(2)), fin(int(5))]
        );
        let (inst, x) = single_machine(&[2, 2, 3]);
        assert_eq!(
            spt_costs(&inst, &x, 1).pow_costs,
            vec![fin(int(2)), fin(int(4)), fin(int(7))]
        );
    }

    #[test]
    fn spt_social_cost_squared() {
        let (inst, x) = single_machine(&[2, 3]);
        assert_eq!(social_cost_pow(&spt_costs(&inst, &x, 2)), fin(int(29)));
    }

    #[test]
    fn spt_ties_follow_priority_list() {
        let inst =
            Instance::with_priority(vec![vec![int(2)], vec![int(2)]], Some(vec![vec![1, 0]]))
                .unwrap();
        let x = Profile::uniform(2, 0);
        assert_eq!(
            spt_costs(&inst, &x, 1).pow_costs,
            vec![fin(int(4)), fin(int(2))]
        );
    }

    #[test]
    fn equi_min_sums() {
        let (inst, x) = single_machine(&[5]);
        assert_eq!(equi_costs(&inst, &x, 1).pow_costs, vec![fin(int(5))]);
        let (inst, x) = single_machine(&[2, 3]);
        assert_eq!(
            equi_costs(&inst, &x, 1).pow_costs,
            vec![fin(int(4)), fin(int(5))]
        );
        let (inst, x) = single_machine(&[3, 1, 3]);
        assert_eq!(
            equi_costs(&inst, &x, 1).pow_costs,
            vec![fin(int(7)), fin(int(3)), fin(int(7))]
        );
    }

    #[test]
    fn bcoord_cases() {
        // rho = 1, L = 7, k = 3
        let inst = Instance::new(vec![vec![int(7), int(9)]]).unwrap();
        let x = Profile::new(vec![0]);
        assert_eq!(
            bcoord_pow_costs(&inst, &x, 3).pow_costs,
            vec![fin(int(343))]
        );

        // m = 5, rho = 4, L = 4, k = 2
        let inst = Instance::new(vec![vec![int(4), int(1), int(1), int(1), int(1)]]).unwrap();
        let x = Profile::new(vec![0]);
        assert_eq!(bcoord_pow_costs(&inst, &x, 2).pow_costs, vec![fin(int(64))]);

        // m = 3, rho = 4
        let inst = Instance::new(vec![vec![int(4), int(1), int(1)]]).unwrap();
        assert_eq!(
            bcoord_pow_costs(&inst, &x, 2).pow_costs,
            vec![PowCost::Infeasible]
        );
    }

    #[test]
    fn psi_values() {
        assert_eq!(psi(&[int(2), int(3)], 1), int(5));
        assert_eq!(psi(&[int(1), int(1)], 2), int(6));
        assert_eq!(psi(&[], 3), int(0));
        assert_eq!(psi(&[], 0), int(1));
        assert_eq!(psi(&[int(2)], 2), int(8));
    }

    #[test]
    fn ccoord_cases() {
        let inst = Instance::new(vec![vec![int(2), int(5)]]).unwrap();
        let x = Profile::new(vec![0]);
        assert_eq!(ccoord_pow_costs(&inst, &x, 2).pow_costs, vec![fin(int(8))]);

        let (inst, x) = single_machine(&[1, 1]);
        assert_eq!(
            ccoord_pow_costs(&inst, &x, 2).pow_costs,
            vec![fin(int(6)), fin(int(6))]
        );

        // rho = m + 1 with m = 2
        let inst = Instance::new(vec![vec![int(3), int(1)]]).unwrap();
        let x = Profile::new(vec![0]);
        assert_eq!(
            ccoord_pow_costs(&inst, &x, 2).pow_costs,
            vec![PowCost::Infeasible]
        );
    }

    #[test]
    fn balance_cases() {
        for k in 1..5 {
            let inst = Instance::new(vec![vec![ratio(3, 2)]]).unwrap();
            let x = Profile::new(vec![0]);
            assert_eq!(
                balance_pow_costs(&inst, &x, k).pow_costs,
                vec![fin(pow(&ratio(3, 2), k))]
            );
        }
        let (inst, x) = single_machine(&[1, 2]);
        let r = balance_pow_costs(&inst, &x, 1);
        assert_eq!(r.pow_costs, vec![fin(int(1)), fin(int(4))]);
        // second job finishes at 4 >= machine load 3
        assert!(r.pow_costs[1] >= fin(int(3)));
    }

    #[test]
    fn balance_infeasible_when_rho_exceeds_m() {
        let inst = Instance::new(vec![vec![int(5), int(2)]]).unwrap();
        let x = Profile::new(vec![0]);
        assert_eq!(
            balance_pow_costs(&inst, &x, 2).pow_costs,
            vec![PowCost::Infeasible]
        );
        let x = Profile::new(vec![1]);
        assert_eq!(balance_pow_costs(&inst, &x, 2).pow_costs, vec![fin(int(4))]);
    }

    #[test]
    fn deviation_cost_matches_full_evaluation() {
        let inst = Instance::new(vec![
            vec![int(2), int(3)],
            vec![int(1), int(4)],
            vec![int(5), int(1)],
        ])
        .unwrap();
        let x = Profile::new(vec![0, 0, 1]);
        for kind in PolicyKind::ALL {
            let spec = PolicySpec::new(kind, 2).unwrap();
            for j in 0..3 {
                for target in 0..2 {
                    let direct = spec.deviation_pow_cost(&inst, &x, j, target);
                    let full = spec.evaluate(&inst, &x.with_move(j, target)).pow_costs[j].clone();
                    assert_eq!(direct, full, "{kind} job {j} -> {target}");
                }
            }
        }
    }

    #[test]
    fn objective_powering() {
        let spec = PolicySpec::spt(1);
        assert_eq!(spec.for_objective(Objective::LkNorm(3)).unwrap().k, 3);
        assert_eq!(spec.for_objective(Objective::Makespan).unwrap().k, 1);
        assert!(PolicySpec::balance(2)
            .for_objective(Objective::LkNorm(3))
            .is_err());
        assert_eq!(
            PolicySpec::balance(2)
                .for_objective(Objective::Makespan)
                .unwrap()
                .k,
            2
        );
    }

    #[test]
    fn policy_names_round_trip() {
        for kind in PolicyKind::ALL {
            assert_eq!(kind.name().parse::<PolicyKind>().unwrap(), kind);
        }
        assert!("lpt".parse::<PolicyKind>().is_err());
    }
}
