use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Instance;
use crate::rational::{int, ratio};

/// How random processing times are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueModel {
    /// Integers in `1..=max`.
    UniformInt { max: u32 },
    /// `a/d` with `d` in `1..=max_den` and `a/d` in `(0, max]`.
    UniformRational { max: u32, max_den: u32 },
    /// `s_j / v_i` with job sizes and machine speeds in `1..=max`.
    RelatedSpeeds { max: u32 },
}

/// A random instance with identity priorities; the same seed always gives
/// the same instance.
pub fn gen_random(n: usize, m: usize, model: ValueModel, seed: u64) -> Result<Instance> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameter("need n >= 1 and m >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let proc = match model {
        ValueModel::UniformInt { max } => {
            check_positive(max, "max")?;
            (0..n)
                .map(|_| {
                    (0..m)
                        .map(|_| int(rng.random_range(1..=max) as i64))
                        .collect()
                })
                .collect()
        }
        ValueModel::UniformRational { max, max_den } => {
            check_positive(max, "max")?;
            check_positive(max_den, "max_den")?;
            (0..n)
                .map(|_| {
                    (0..m)
                        .map(|_| {
                            let d = rng.random_range(1..=max_den) as i64;
                            let a = rng.random_range(1..=max as i64 * d);
                            ratio(a, d)
                        })
                        .collect()
                })
                .collect()
        }
        ValueModel::RelatedSpeeds { max } => {
            check_positive(max, "max")?;
            let sizes: Vec<i64> = (0..n).map(|_| rng.random_range(1..=max) as i64).collect();
            let speeds: Vec<i64> = (0..m).map(|_| rng.random_range(1..=max) as i64).collect();
            sizes
                .iter()
                .map(|&s| speeds.iter().map(|&v| ratio(s, v)).collect())
                .collect()
        }
    };
    Instance::new(proc)
}

fn check_positive(value: u32, name: &str) -> Result<()> {
    if value == 0 {
        return Err(Error::InvalidParameter(format!(
            "{name} must be at least 1"
        )));
    }
    Ok(())
}
