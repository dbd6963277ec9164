use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::nash::find_deviation;
use crate::error::{Error, Result};
use crate::model::{makespan_cost, Instance, Objective, PowCost, Profile};
use crate::policies::PolicySpec;
use crate::rational::{pow, to_f64, Rational};

/// Largest profile space searched exhaustively unless the caller says otherwise.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

const CHUNK: u128 = 2048;

/// The product of every job's allowed machine set, in lexicographic order
/// (job 0 is the most significant digit).
#[derive(Clone, Debug)]
pub struct ProfileSpace {
    choices: Vec<Vec<usize>>,
    size: u128,
}

impl ProfileSpace {
    pub fn new(instance: &Instance) -> Self {
        let choices: Vec<Vec<usize>> = (0..instance.job_count())
            .map(|j| instance.allowed_machines(j))
            .collect();
        ProfileSpace {
            size: instance.profile_space_size(),
            choices,
        }
    }

    pub fn size(&self) -> u128 {
        self.size
    }

    pub fn check_budget(&self, budget: u128) -> Result<()> {
        if self.size > budget {
            return Err(Error::BudgetExceeded {
                size: self.size,
                budget,
            });
        }
        Ok(())
    }

    fn digits_at(&self, mut index: u128) -> Vec<usize> {
        let mut digits = vec![0; self.choices.len()];
        for j in (0..self.choices.len()).rev() {
            let radix = self.choices[j].len() as u128;
            digits[j] = (index % radix) as usize;
            index /= radix;
        }
        digits
    }

    fn profile_of(&self, digits: &[usize]) -> Profile {
        Profile::new(
            digits
                .iter()
                .zip(&self.choices)
                .map(|(&d, c)| c[d])
                .collect(),
        )
    }

    /// The `index`-th profile in lexicographic order.
    pub fn profile_at(&self, index: u128) -> Profile {
        self.profile_of(&self.digits_at(index))
    }

    /// Visits profiles `start..end` in order.
    pub fn for_each_in(&self, start: u128, end: u128, mut visit: impl FnMut(Profile)) {
        if start >= end {
            return;
        }
        let mut digits = self.digits_at(start);
        for _ in start..end {
            visit(self.profile_of(&digits));
            for j in (0..digits.len()).rev() {
                digits[j] += 1;
                if digits[j] < self.choices[j].len() {
                    break;
                }
                digits[j] = 0;
            }
        }
    }

    /// Splits the space into fixed-size chunks, maps each in parallel and
    /// returns the per-chunk results in order.
    pub fn par_chunks<T: Send>(&self, work: impl Fn(u128, u128) -> T + Sync) -> Vec<T> {
        let chunks = self.size.div_ceil(CHUNK);
        (0..chunks as u64)
            .into_par_iter()
            .map(|c| {
                let start = c as u128 * CHUNK;
                work(start, (start + CHUNK).min(self.size))
            })
            .collect()
    }
}

/// Social cost of `profile` in the power matching `objective`: the sum of
/// k-th powers for an l_k norm, the largest powered cost for makespan.
pub fn objective_value(
    instance: &Instance,
    policy: &PolicySpec,
    objective: Objective,
    profile: &Profile,
) -> Result<PowCost> {
    let spec = policy.for_objective(objective)?;
    let report = spec.evaluate(instance, profile);
    Ok(match objective {
        Objective::LkNorm(_) => report.social_cost_pow(),
        Objective::Makespan => report.max_pow(),
    })
}

/// Exact optimum over all allowed assignments.
///
/// For `LkNorm(k)` this is the least sum of k-th powers of SPT completion
/// times (SPT is optimal for a fixed assignment). For `Makespan` it is the
/// least maximum load, unpowered.
pub fn optimum_pow(instance: &Instance, objective: Objective, budget: u128) -> Result<Rational> {
    let space = ProfileSpace::new(instance);
    space.check_budget(budget)?;
    let best = space
        .par_chunks(|start, end| {
            let mut best: Option<Rational> = None;
            space.for_each_in(start, end, |x| {
                let value = match objective {
                    Objective::LkNorm(k) => PolicySpec::spt(k)
                        .evaluate(instance, &x)
                        .social_cost_pow()
                        .finite()
                        .cloned()
                        .expect("SPT costs are finite"),
                    Objective::Makespan => makespan_cost(instance, &x),
                };
                if best.as_ref().is_none_or(|b| value < *b) {
                    best = Some(value);
                }
            });
            best
        })
        .into_iter()
        .flatten()
        .min()
        .expect("profile space is non-empty");
    Ok(best)
}

/// Exact and approximate price of anarchy.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoaReport {
    pub policy: PolicySpec,
    pub objective: Objective,
    /// Power in which `worst_pow`, `optimum_pow` and `ratio_pow` are stated.
    pub power: u32,
    pub worst_profile: Profile,
    pub worst_pow: PowCost,
    #[serde(serialize_with = "crate::rational::serialize_text")]
    pub optimum_pow: Rational,
    /// `worst_pow / optimum_pow`; `INFEASIBLE` when the worst equilibrium
    /// leaves a job on a machine it cannot use.
    pub ratio_pow: PowCost,
    /// `ratio_pow^(1/power)`.
    pub ratio_approx: f64,
}

/// Every pure equilibrium plus the optimum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquilibriumReport {
    pub policy: PolicySpec,
    pub objective: Objective,
    pub power: u32,
    pub profiles_checked: u64,
    pub equilibria: Vec<Profile>,
    #[serde(serialize_with = "crate::rational::serialize_text")]
    pub optimum_pow: Rational,
    pub poa: Option<PoaReport>,
}

impl EquilibriumReport {
    pub fn worst_pow(&self) -> Option<&PowCost> {
        self.poa.as_ref().map(|p| &p.worst_pow)
    }
}

/// Exhaustive search for pure Nash equilibria. Profiles are listed in
/// lexicographic order whatever the number of worker threads.
pub fn enumerate_equilibria(
    instance: &Instance,
    policy: &PolicySpec,
    objective: Objective,
    budget: u128,
) -> Result<EquilibriumReport> {
    let spec = policy.for_objective(objective)?;
    let power = spec.k;
    let space = ProfileSpace::new(instance);
    space.check_budget(budget)?;

    let equilibria: Vec<Profile> = space
        .par_chunks(|start, end| {
            let mut found = Vec::new();
            space.for_each_in(start, end, |x| {
                if find_deviation(instance, policy, &x).is_none() {
                    found.push(x);
                }
            });
            found
        })
        .into_iter()
        .flatten()
        .collect();

    let optimum = optimum_pow(instance, objective, budget)?;
    let optimum_pow = match objective {
        Objective::LkNorm(_) => optimum,
        Objective::Makespan => pow(&optimum, power),
    };

    let mut worst: Option<(PowCost, &Profile)> = None;
    for x in &equilibria {
        let value = objective_value(instance, policy, objective, x)?;
        if worst.as_ref().is_none_or(|(w, _)| value > *w) {
            worst = Some((value, x));
        }
    }
    let poa = worst.map(|(worst_pow, x)| {
        let (ratio_pow, ratio_approx) = match &worst_pow {
            PowCost::Finite(w) => {
                let r = w / &optimum_pow;
                let approx = to_f64(&r).powf(1.0 / power as f64);
                (PowCost::Finite(r), approx)
            }
            PowCost::Infeasible => (PowCost::Infeasible, f64::INFINITY),
        };
        PoaReport {
            policy: *policy,
            objective,
            power,
            worst_profile: x.clone(),
            worst_pow,
            optimum_pow: optimum_pow.clone(),
            ratio_pow,
            ratio_approx,
        }
    });

    Ok(EquilibriumReport {
        policy: *policy,
        objective,
        power,
        profiles_checked: space.size() as u64,
        equilibria,
        optimum_pow,
        poa,
    })
}

/// Worst equilibrium cost over the optimum. Fails with `NoEquilibrium`
/// when the game has no pure equilibrium.
pub fn price_of_anarchy(
    instance: &Instance,
    policy: &PolicySpec,
    objective: Objective,
    budget: u128,
) -> Result<PoaReport> {
    enumerate_equilibria(instance, policy, objective, budget)?
        .poa
        .ok_or(Error::NoEquilibrium)
}
