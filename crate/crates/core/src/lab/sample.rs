use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::lab::SequenceTriple;
use crate::model::{Instance, Profile};
use crate::rational::{ratio, Rational};

/// `10^e` for `e` uniform in `[lo, hi]`, rounded to 24 significant bits.
pub fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> Rational {
    let v = 10f64.powf(rng.random_range(lo..=hi));
    let shift = 23 - v.log2().floor() as i32;
    let mantissa = (v * 2f64.powi(shift)).round() as i64;
    let one = BigInt::from(1);
    if shift >= 0 {
        Rational::new(mantissa.into(), one << shift as usize)
    } else {
        Rational::from_integer(BigInt::from(mantissa) << (-shift) as usize)
    }
}

/// `a/d` with `d` in `1..=max_den`, uniform on the grid of `(0, max]`.
pub fn uniform_rational<R: Rng>(rng: &mut R, max: u32, max_den: u32) -> Rational {
    let d = rng.random_range(1..=max_den as i64);
    let a = rng.random_range(1..=max as i64 * d);
    ratio(a, d)
}

/// `1..=n_max` jobs, `1..=m_max` machines, times from `uniform_rational`
/// with denominators up to 3 and random priority lists.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    n_max: usize,
    m_max: usize,
    value_max: u32,
) -> Instance {
    let n = rng.random_range(1..=n_max);
    let m = rng.random_range(1..=m_max);
    let proc = (0..n)
        .map(|_| {
            (0..m)
                .map(|_| uniform_rational(rng, value_max, 3))
                .collect()
        })
        .collect();
    let priority = (0..m)
        .map(|_| {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(rng);
            perm
        })
        .collect();
    Instance::with_priority(proc, Some(priority)).expect("valid by construction")
}

/// A uniform profile over the allowed machines.
pub fn random_profile<R: Rng>(rng: &mut R, instance: &Instance) -> Profile {
    Profile::new(
        (0..instance.job_count())
            .map(|j| {
                let allowed = instance.allowed_machines(j);
                allowed[rng.random_range(0..allowed.len())]
            })
            .collect(),
    )
}

/// Length `1..=len_max`, counts in `0..=count_max`, increments of `q` from
/// `uniform_rational(step_max, 4)`.
pub fn random_triple<R: Rng>(
    rng: &mut R,
    len_max: usize,
    count_max: u32,
    step_max: u32,
) -> SequenceTriple {
    let len = rng.random_range(1..=len_max);
    let mut q = Vec::with_capacity(len);
    let mut acc = Rational::from_integer(0.into());
    for _ in 0..len {
        acc += uniform_rational(rng, step_max, 4);
        q.push(acc.clone());
    }
    let n = (0..len).map(|_| rng.random_range(0..=count_max)).collect();
    let m = (0..len).map(|_| rng.random_range(0..=count_max)).collect();
    SequenceTriple::new(n, m, q).expect("valid by construction")
}
