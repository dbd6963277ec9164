use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::model::{Instance, Profile};
use crate::rational::{int, ratio, Rational};

/// Cap on the number of jobs a lower-bound family may generate.
pub const MAX_LOWER_BOUND_JOBS: u128 = 250_000;

/// A lower-bound instance with its two designated profiles.
///
/// Jobs are numbered group by group: group `g` (0-based, machine `g`) holds
/// `group_sizes[g]` consecutive jobs, the first half of which forms the
/// "first" sub-group. The last group has a single job.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBoundBundle {
    pub instance: Instance,
    /// Half of each group on its own machine, half on the next one.
    pub designated_x: Profile,
    /// Every group on its own machine.
    pub comparison_x_star: Profile,
    pub group_sizes: Vec<usize>,
    /// Cost of every job of group `g` in `designated_x`: `(g + 2) / 2`.
    pub expected_group_costs: Vec<Rational>,
}

impl LowerBoundBundle {
    pub fn machine_count(&self) -> usize {
        self.instance.machine_count()
    }

    /// Job indices of group `g`.
    pub fn group(&self, g: usize) -> std::ops::Range<usize> {
        let start: usize = self.group_sizes[..g].iter().sum();
        start..start + self.group_sizes[g]
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, t| acc * BigInt::from(t))
}

fn build(m: usize, split_priority: bool) -> Result<LowerBoundBundle> {
    if m < 2 {
        return Err(Error::InvalidParameter(
            "lower-bound families need m >= 2".into(),
        ));
    }
    let fm = factorial(m - 1);
    // n_j = 2 (m-1)! / (j-1)! for j = 1..m-1, then a single job
    let mut sizes = Vec::with_capacity(m);
    let mut total: u128 = 1;
    for j in 1..m {
        let n_j = BigInt::from(2) * &fm / factorial(j - 1);
        let n_j: u128 = n_j.try_into().unwrap_or(u128::MAX);
        total = total.saturating_add(n_j);
        if total > MAX_LOWER_BOUND_JOBS {
            return Err(Error::BudgetExceeded {
                size: total,
                budget: MAX_LOWER_BOUND_JOBS,
            });
        }
        sizes.push(n_j as usize);
    }
    sizes.push(1);
    let n = total as usize;

    let mut proc = Vec::with_capacity(n);
    let mut allowed = Vec::with_capacity(n);
    let mut designated = Vec::with_capacity(n);
    let mut reference = Vec::with_capacity(n);
    for (g, &size) in sizes.iter().enumerate() {
        let j = g + 1;
        let (own, next) = if j < m {
            // p_jj = (j-1)!/(m-1)!, p_{j+1,j} = j!/(2 (m-1)!)
            let own = Rational::new(factorial(j - 1), fm.clone());
            let next = Rational::new(factorial(j), BigInt::from(2) * &fm);
            (own, Some(next))
        } else {
            (int(1), None)
        };
        let off_mask = match &next {
            Some(nx) => own.clone().max(nx.clone()),
            None => own.clone(),
        };
        for t in 0..size {
            let mut row = vec![off_mask.clone(); m];
            row[g] = own.clone();
            if let Some(nx) = &next {
                row[g + 1] = nx.clone();
                allowed.push(vec![g, g + 1]);
                designated.push(if t < size / 2 { g } else { g + 1 });
            } else {
                allowed.push(vec![g]);
                designated.push(g);
            }
            reference.push(g);
            proc.push(row);
        }
    }

    let priority = split_priority.then(|| {
        // machine g+1 lists the second half of group g ahead of its first half
        let mut starts = vec![0usize; m];
        for g in 1..m {
            starts[g] = starts[g - 1] + sizes[g - 1];
        }
        (0..m)
            .map(|i| {
                let mut order: Vec<usize> = (0..n).collect();
                if i >= 1 {
                    let (s, len) = (starts[i - 1], sizes[i - 1]);
                    order[s..s + len].rotate_left(len / 2);
                }
                order
            })
            .collect()
    });

    let instance = Instance::with_priority(proc, priority)?.with_allowed(allowed)?;
    let expected_group_costs = (1..=m).map(|j| ratio(j as i64 + 1, 2)).collect();
    Ok(LowerBoundBundle {
        instance,
        designated_x: Profile::new(designated),
        comparison_x_star: Profile::new(reference),
        group_sizes: sizes,
        expected_group_costs,
    })
}

/// The EQUI lower-bound family on `m` machines.
pub fn gen_equi_lower_bound(m: usize) -> Result<LowerBoundBundle> {
    build(m, false)
}

/// The SPT variant: same processing times, and each group's two halves are
/// ranked in opposite orders on its two machines.
pub fn gen_spt_lower_bound(m: usize) -> Result<LowerBoundBundle> {
    build(m, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_machine_data() {
        let b = gen_equi_lower_bound(3).unwrap();
        assert_eq!(b.group_sizes, vec![4, 4, 1]);
        let inst = &b.instance;
        assert_eq!(inst.job_count(), 9);
        assert_eq!(inst.p(0, 0), &ratio(1, 2));
        assert_eq!(inst.p(1, 0), &ratio(1, 4));
        assert_eq!(inst.p(1, 4), &ratio(1, 2));
        assert_eq!(inst.p(2, 4), &ratio(1, 2));
        assert_eq!(inst.p(2, 8), &int(1));
        assert_eq!(b.designated_x.as_slice(), &[0, 0, 1, 1, 1, 1, 2, 2, 2]);
        assert_eq!(b.comparison_x_star.as_slice(), &[0, 0, 0, 0, 1, 1, 1, 1, 2]);
        assert_eq!(b.group(1), 4..8);
    }

    #[test]
    fn off_mask_times_keep_fastest() {
        let b = gen_equi_lower_bound(4).unwrap();
        for j in 0..b.instance.job_count() {
            let allowed = b.instance.allowed_machines(j);
            let best = allowed.iter().map(|&i| b.instance.p(i, j)).min().unwrap();
            assert_eq!(b.instance.fastest(j), best);
        }
    }

    #[test]
    fn split_priorities() {
        let b = gen_spt_lower_bound(3).unwrap();
        let inst = &b.instance;
        assert!(inst.precedes(0, 0, 2));
        assert!(inst.precedes(1, 2, 0));
        assert!(inst.precedes(2, 6, 4));
        // same ranks inside a half
        assert!(inst.precedes(1, 2, 3));
    }

    #[test]
    fn two_machines_degenerate() {
        let b = gen_spt_lower_bound(2).unwrap();
        assert_eq!(b.group_sizes, vec![2, 1]);
        assert_eq!(b.instance.p(0, 0), &int(1));
        assert_eq!(b.instance.p(1, 0), &ratio(1, 2));
    }

    #[test]
    fn size_cap() {
        assert!(gen_equi_lower_bound(9).is_ok());
        assert!(matches!(
            gen_equi_lower_bound(10),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(gen_equi_lower_bound(1).is_err());
    }
}
