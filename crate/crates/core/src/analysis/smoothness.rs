use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Instance, PowCost, Profile};
use crate::policies::PolicySpec;
use crate::rational::Rational;

/// The three sums of a smoothness inequality, all in k-th powers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothnessProbe {
    /// `sum_j c_j^k(x_{-j}, x*_j)`
    #[serde(serialize_with = "crate::rational::serialize_text")]
    pub deviation: Rational,
    /// `sum_j c_j^k(x)`
    #[serde(serialize_with = "crate::rational::serialize_text")]
    pub current: Rational,
    /// `sum_j c_j^k(x*)`
    #[serde(serialize_with = "crate::rational::serialize_text")]
    pub reference: Rational,
}

impl SmoothnessProbe {
    /// `deviation <= mu * current + lambda * reference`, exactly.
    pub fn holds(&self, mu: &Rational, lambda: &Rational) -> bool {
        self.deviation <= mu * &self.current + lambda * &self.reference
    }

    /// Least `lambda >= 0` that makes the inequality hold for this `mu`.
    pub fn required_lambda(&self, mu: &Rational) -> Rational {
        let excess = &self.deviation - mu * &self.current;
        if excess <= Rational::zero() {
            Rational::zero()
        } else {
            excess / &self.reference
        }
    }
}

fn finite(cost: PowCost, what: &str) -> Result<Rational> {
    match cost {
        PowCost::Finite(v) => Ok(v),
        PowCost::Infeasible => Err(Error::InvalidParameter(format!(
            "smoothness probe needs finite costs; {what} is infeasible"
        ))),
    }
}

pub fn smoothness_probe(
    instance: &Instance,
    policy: &PolicySpec,
    x: &Profile,
    x_star: &Profile,
) -> Result<SmoothnessProbe> {
    x.validate(instance)?;
    x_star.validate(instance)?;
    let current = finite(policy.evaluate(instance, x).social_cost_pow(), "C(x)")?;
    let reference = finite(policy.evaluate(instance, x_star).social_cost_pow(), "C(x*)")?;
    let mut deviation = Rational::zero();
    for j in 0..instance.job_count() {
        let c = policy.deviation_pow_cost(instance, x, j, x_star.machine_of(j));
        deviation += finite(c, "a deviation cost")?;
    }
    Ok(SmoothnessProbe {
        deviation,
        current,
        reference,
    })
}
