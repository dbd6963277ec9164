//! Instances, strategy profiles, exact cost reports and social costs.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, to_f64, Rational};

/// A scheduling game on unrelated machines.
///
/// `proc[j][i]` is the processing time of job `j` on machine `i`. Each
/// machine carries a priority list (a permutation of the jobs) used to
/// break ties between equal processing times; earlier means higher
/// priority. An optional mask restricts the machines a job may choose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    proc: Vec<Vec<Rational>>,
    priority: Vec<Vec<usize>>,
    allowed: Option<Vec<Vec<usize>>>,
    fastest: Vec<Rational>,
    // pos[i][j]: 1-based rank of job j in machine i's total order over all jobs
    pos: Vec<Vec<usize>>,
}

impl Instance {
    /// Builds an instance with identity priorities on every machine.
    pub fn new(proc: Vec<Vec<Rational>>) -> Result<Self> {
        Self::with_priority(proc, None)
    }

    pub fn with_priority(
        proc: Vec<Vec<Rational>>,
        priority: Option<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let n = proc.len();
        if n == 0 {
            return Err(Error::InvalidInstance("no jobs".into()));
        }
        let m = proc[0].len();
        if m == 0 {
            return Err(Error::InvalidInstance("no machines".into()));
        }
        for (j, row) in proc.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidInstance(format!(
                    "job {j} has {} processing times, expected {m}",
                    row.len()
                )));
            }
            if let Some(i) = row.iter().position(|p| !p.is_positive()) {
                return Err(Error::InvalidInstance(format!(
                    "p[{j}][{i}] = {} is not positive",
                    format_rational(&row[i])
                )));
            }
        }
        let priority = match priority {
            Some(p) => {
                if p.len() != m {
                    return Err(Error::InvalidInstance(format!(
                        "{} priority lists for {m} machines",
                        p.len()
                    )));
                }
                for (i, perm) in p.iter().enumerate() {
                    check_permutation(perm, n)
                        .map_err(|e| Error::InvalidInstance(format!("priority[{i}]: {e}")))?;
                }
                p
            }
            None => vec![(0..n).collect(); m],
        };

        let fastest = proc
            .iter()
            .map(|row| row.iter().min().expect("m >= 1").clone())
            .collect();

        let mut pos = vec![vec![0; n]; m];
        for i in 0..m {
            let mut rank = vec![0; n];
            for (r, &j) in priority[i].iter().enumerate() {
                rank[j] = r;
            }
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| proc[a][i].cmp(&proc[b][i]).then(rank[a].cmp(&rank[b])));
            for (r, &j) in order.iter().enumerate() {
                pos[i][j] = r + 1;
            }
        }

        Ok(Instance {
            proc,
            priority,
            allowed: None,
            fastest,
            pos,
        })
    }

    /// Restricts each job's strategy set. Every list must be non-empty,
    /// sorted, and in range.
    pub fn with_allowed(mut self, allowed: Vec<Vec<usize>>) -> Result<Self> {
        if allowed.len() != self.job_count() {
            return Err(Error::InvalidInstance(format!(
                "{} allowed lists for {} jobs",
                allowed.len(),
                self.job_count()
            )));
        }
        for (j, list) in allowed.iter().enumerate() {
            if list.is_empty() {
                return Err(Error::InvalidInstance(format!(
                    "job {j} has no allowed machine"
                )));
            }
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidInstance(format!(
                    "allowed[{j}] must be strictly increasing"
                )));
            }
            if list.iter().any(|&i| i >= self.machine_count()) {
                return Err(Error::InvalidInstance(format!("allowed[{j}] out of range")));
            }
        }
        self.allowed = Some(allowed);
        Ok(self)
    }

    pub fn machine_count(&self) -> usize {
        self.proc[0].len()
    }

    pub fn job_count(&self) -> usize {
        self.proc.len()
    }

    /// Processing time of `job` on `machine`.
    pub fn p(&self, machine: usize, job: usize) -> &Rational {
        &self.proc[job][machine]
    }

    pub fn processing_times(&self) -> &[Vec<Rational>] {
        &self.proc
    }

    /// Fastest processing time of `job` over all machines (q_j).
    pub fn fastest(&self, job: usize) -> &Rational {
        &self.fastest[job]
    }

    /// Inefficiency `p_ij / q_j >= 1`.
    pub fn rho(&self, machine: usize, job: usize) -> Rational {
        self.p(machine, job) / self.fastest(job)
    }

    pub fn priority(&self, machine: usize) -> &[usize] {
        &self.priority[machine]
    }

    pub fn priorities(&self) -> &[Vec<usize>] {
        &self.priority
    }

    pub fn has_identity_priorities(&self) -> bool {
        self.priority
            .iter()
            .all(|p| p.iter().enumerate().all(|(r, &j)| r == j))
    }

    /// 1-based rank of `job` in the machine's order: ascending processing
    /// time, ties by priority list position.
    pub fn position(&self, machine: usize, job: usize) -> usize {
        self.pos[machine][job]
    }

    /// Whether `a` strictly precedes `b` on `machine`.
    pub fn precedes(&self, machine: usize, a: usize, b: usize) -> bool {
        self.pos[machine][a] < self.pos[machine][b]
    }

    pub fn allowed(&self) -> Option<&[Vec<usize>]> {
        self.allowed.as_deref()
    }

    pub fn is_allowed(&self, job: usize, machine: usize) -> bool {
        match &self.allowed {
            Some(a) => a[job].binary_search(&machine).is_ok(),
            None => machine < self.machine_count(),
        }
    }

    /// Strategy set of `job`.
    pub fn allowed_machines(&self, job: usize) -> Vec<usize> {
        match &self.allowed {
            Some(a) => a[job].clone(),
            None => (0..self.machine_count()).collect(),
        }
    }

    /// Number of profiles in the (possibly restricted) strategy space.
    pub fn profile_space_size(&self) -> u128 {
        (0..self.job_count())
            .map(|j| match &self.allowed {
                Some(a) => a[j].len() as u128,
                None => self.machine_count() as u128,
            })
            .try_fold(1u128, |acc, s| acc.checked_mul(s))
            .unwrap_or(u128::MAX)
    }
}

fn check_permutation(perm: &[usize], n: usize) -> std::result::Result<(), String> {
    if perm.len() != n {
        return Err(format!("length {} != {n}", perm.len()));
    }
    let mut seen = vec![false; n];
    for &j in perm {
        if j >= n || seen[j] {
            return Err(format!("not a permutation of 0..{n}"));
        }
        seen[j] = true;
    }
    Ok(())
}

/// A strategy profile: `x[j]` is the machine chosen by job `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Profile(Vec<usize>);

impl Profile {
    pub fn new(assignment: Vec<usize>) -> Self {
        Profile(assignment)
    }

    /// Every job on `machine`.
    pub fn uniform(jobs: usize, machine: usize) -> Self {
        Profile(vec![machine; jobs])
    }

    pub fn validate(&self, instance: &Instance) -> Result<()> {
        if self.0.len() != instance.job_count() {
            return Err(Error::InvalidProfile(format!(
                "profile has {} entries for {} jobs",
                self.0.len(),
                instance.job_count()
            )));
        }
        for (j, &i) in self.0.iter().enumerate() {
            if i >= instance.machine_count() {
                return Err(Error::InvalidProfile(format!(
                    "job {j} on machine {i}, only {} machines",
                    instance.machine_count()
                )));
            }
            if !instance.is_allowed(j, i) {
                return Err(Error::InvalidProfile(format!(
                    "job {j} may not use machine {i}"
                )));
            }
        }
        Ok(())
    }

    pub fn machine_of(&self, job: usize) -> usize {
        self.0[job]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Jobs assigned to `machine`, ascending by index.
    pub fn jobs_on(&self, machine: usize) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|&(_, &i)| i == machine)
            .map(|(j, _)| j)
            .collect()
    }

    /// The profile `(x_{-job}, machine)`.
    pub fn with_move(&self, job: usize, machine: usize) -> Profile {
        let mut next = self.0.clone();
        next[job] = machine;
        Profile(next)
    }
}

impl From<Vec<usize>> for Profile {
    fn from(v: Vec<usize>) -> Self {
        Profile(v)
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (idx, i) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "]")
    }
}

/// A job's cost raised to the k-th power, or the infeasible sentinel.
///
/// `Infeasible` orders above every finite value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PowCost {
    Finite(Rational),
    Infeasible,
}

impl PowCost {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            PowCost::Finite(v) => Some(v),
            PowCost::Infeasible => None,
        }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, PowCost::Infeasible)
    }

    /// `self^(1/k)` as a float; infinity for the sentinel.
    pub fn root_approx(&self, k: u32) -> f64 {
        match self {
            PowCost::Finite(v) => to_f64(v).powf(1.0 / k as f64),
            PowCost::Infeasible => f64::INFINITY,
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            PowCost::Finite(v) => format_rational(v),
            PowCost::Infeasible => "INFEASIBLE".to_string(),
        }
    }
}

impl From<Rational> for PowCost {
    fn from(v: Rational) -> Self {
        PowCost::Finite(v)
    }
}

impl Serialize for PowCost {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_text())
    }
}

impl fmt::Display for PowCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Per-job k-th-power costs of one profile under one policy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostReport {
    pub k: u32,
    pub pow_costs: Vec<PowCost>,
}

impl CostReport {
    pub fn new(k: u32, pow_costs: Vec<PowCost>) -> Self {
        CostReport { k, pow_costs }
    }

    pub fn social_cost_pow(&self) -> PowCost {
        social_cost_pow(self)
    }

    /// Largest per-job cost (the makespan-style social cost, powered).
    pub fn max_pow(&self) -> PowCost {
        self.pow_costs
            .iter()
            .max()
            .cloned()
            .unwrap_or_else(|| PowCost::Finite(Rational::zero()))
    }

    /// Approximate completion times `c_j`.
    pub fn approx_costs(&self) -> Vec<f64> {
        self.pow_costs
            .iter()
            .map(|c| c.root_approx(self.k))
            .collect()
    }
}

/// `C^k = sum_j c_j^k`, absorbing on `Infeasible`.
pub fn social_cost_pow(report: &CostReport) -> PowCost {
    let mut total = Rational::zero();
    for c in &report.pow_costs {
        match c {
            PowCost::Finite(v) => total += v,
            PowCost::Infeasible => return PowCost::Infeasible,
        }
    }
    PowCost::Finite(total)
}

/// Social objective.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// `(sum_j c_j^k)^(1/k)`
    LkNorm(u32),
    /// `max_j c_j`
    Makespan,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Objective::LkNorm(k) => write!(f, "lk(k={k})"),
            Objective::Makespan => write!(f, "makespan"),
        }
    }
}

/// Total processing time assigned to `machine`.
pub fn machine_load(instance: &Instance, profile: &Profile, machine: usize) -> Rational {
    profile
        .as_slice()
        .iter()
        .enumerate()
        .filter(|&(_, &i)| i == machine)
        .map(|(j, _)| instance.p(machine, j))
        .fold(Rational::zero(), |acc, p| acc + p)
}

pub fn machine_loads(instance: &Instance, profile: &Profile) -> Vec<Rational> {
    let mut loads = vec![Rational::zero(); instance.machine_count()];
    for (j, &i) in profile.as_slice().iter().enumerate() {
        loads[i] += instance.p(i, j);
    }
    loads
}

/// `L(x) = max_i L(x(i))`.
pub fn makespan_cost(instance: &Instance, profile: &Profile) -> Rational {
    machine_loads(instance, profile)
        .into_iter()
        .max_by(|a, b| a.cmp(b))
        .unwrap_or_else(Rational::zero)
}
