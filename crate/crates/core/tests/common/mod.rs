//! Test oracles written from the definitions, independent of the library's
//! cost code. Each test binary uses a different subset.
#![allow(dead_code)]

use std::collections::BTreeSet;

use coordlab::rational::{int, pow};
use coordlab::{Instance, PolicyKind, PolicySpec, PowCost, Profile, Rational};
use num_traits::{One, Zero};

pub fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

fn rank(inst: &Instance, machine: usize, job: usize) -> usize {
    inst.priority(machine)
        .iter()
        .position(|&t| t == job)
        .unwrap()
}

/// Jobs on `machine` sorted by (p, priority list position).
fn sorted_jobs(inst: &Instance, x: &Profile, machine: usize) -> Vec<usize> {
    let mut jobs = x.jobs_on(machine);
    jobs.sort_by(|&a, &b| {
        inst.p(machine, a)
            .cmp(inst.p(machine, b))
            .then(rank(inst, machine, a).cmp(&rank(inst, machine, b)))
    });
    jobs
}

/// SPT completion times: prefix sums in machine order.
pub fn spt_oracle(inst: &Instance, x: &Profile) -> Vec<Rational> {
    let mut c = vec![Rational::zero(); inst.job_count()];
    for i in 0..inst.machine_count() {
        let mut acc = Rational::zero();
        for j in sorted_jobs(inst, x, i) {
            acc += inst.p(i, j);
            c[j] = acc.clone();
        }
    }
    c
}

/// Processor sharing simulated event by event: all unfinished jobs on a
/// machine progress at the same rate until the shortest one finishes.
pub fn equi_oracle(inst: &Instance, x: &Profile) -> Vec<Rational> {
    let mut c = vec![Rational::zero(); inst.job_count()];
    for i in 0..inst.machine_count() {
        let mut left: Vec<(usize, Rational)> = x
            .jobs_on(i)
            .into_iter()
            .map(|j| (j, inst.p(i, j).clone()))
            .collect();
        let mut now = Rational::zero();
        while !left.is_empty() {
            let share = int(left.len() as i64);
            let step = left.iter().map(|(_, r)| r.clone()).min().unwrap();
            now += &step * &share;
            for (_, r) in left.iter_mut() {
                *r -= &step;
            }
            for (j, r) in &left {
                if r.is_zero() {
                    c[*j] = now.clone();
                }
            }
            left.retain(|(_, r)| !r.is_zero());
        }
    }
    c
}

pub fn pow_sum(costs: &[Rational], k: u32) -> Rational {
    costs.iter().fold(Rational::zero(), |a, c| a + pow(c, k))
}

/// `k!` times the sum over non-decreasing index tuples of the products.
pub fn psi_direct(values: &[Rational], k: u32) -> Rational {
    fn walk(values: &[Rational], from: usize, left: u32, acc: &Rational, out: &mut Rational) {
        if left == 0 {
            *out += acc;
            return;
        }
        for t in from..values.len() {
            walk(values, t, left - 1, &(acc * &values[t]), out);
        }
    }
    let mut out = Rational::zero();
    walk(values, 0, k, &Rational::one(), &mut out);
    out * int(factorial(k as u64) as i64)
}

fn fastest(inst: &Instance, job: usize) -> Rational {
    (0..inst.machine_count())
        .map(|i| inst.p(i, job).clone())
        .min()
        .unwrap()
}

fn efficient(inst: &Instance, machine: usize, job: usize) -> bool {
    inst.p(machine, job) <= &(fastest(inst, job) * int(inst.machine_count() as i64))
}

/// k-th-power costs of every policy, from the definitions.
pub fn pow_costs_oracle(inst: &Instance, policy: &PolicySpec, x: &Profile) -> Vec<PowCost> {
    let k = policy.k;
    let n = inst.job_count();
    match policy.kind {
        PolicyKind::Spt => spt_oracle(inst, x)
            .iter()
            .map(|c| PowCost::Finite(pow(c, k)))
            .collect(),
        PolicyKind::Equi => equi_oracle(inst, x)
            .iter()
            .map(|c| PowCost::Finite(pow(c, k)))
            .collect(),
        PolicyKind::Bcoord | PolicyKind::Ccoord | PolicyKind::Balance => {
            let mut out = vec![PowCost::Infeasible; n];
            for i in 0..inst.machine_count() {
                let jobs = sorted_jobs(inst, x, i);
                let times: Vec<Rational> = jobs.iter().map(|&j| inst.p(i, j).clone()).collect();
                let load: Rational = times.iter().fold(Rational::zero(), |a, t| a + t);
                let mut ahead = Rational::zero();
                for &j in &jobs {
                    let p = inst.p(i, j);
                    let q = fastest(inst, j);
                    let value = match policy.kind {
                        PolicyKind::Bcoord => p / &q * pow(&load, k),
                        PolicyKind::Ccoord => p / &q * psi_direct(&times, k),
                        _ => (pow(&(&ahead + p), k + 1) - pow(&ahead, k + 1)) / &q,
                    };
                    if efficient(inst, i, j) {
                        out[j] = PowCost::Finite(value);
                    }
                    ahead += p;
                }
            }
            out
        }
    }
}

/// Every profile, every job, every allowed machine, full re-evaluation.
pub fn brute_force_equilibria(inst: &Instance, policy: &PolicySpec) -> BTreeSet<Vec<usize>> {
    let (n, m) = (inst.job_count(), inst.machine_count());
    let total = (m as u64).pow(n as u32);
    let mut found = BTreeSet::new();
    for code in 0..total {
        let mut a = vec![0; n];
        let mut r = code;
        for j in (0..n).rev() {
            a[j] = (r % m as u64) as usize;
            r /= m as u64;
        }
        if (0..n).any(|j| !inst.is_allowed(j, a[j])) {
            continue;
        }
        let x = Profile::new(a.clone());
        let base = policy.evaluate(inst, &x);
        let stable = (0..n).all(|j| {
            (0..m)
                .filter(|&i| i != a[j] && inst.is_allowed(j, i))
                .all(|i| {
                    let y = x.with_move(j, i);
                    policy.evaluate(inst, &y).pow_costs[j] >= base.pow_costs[j]
                })
        });
        if stable {
            found.insert(a);
        }
    }
    found
}
