use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lab::SmoothCertificate;
use crate::model::{Instance, Profile};
use crate::policies::PolicySpec;
use crate::rational::{common_denominator, int, pow, relative_slack, scaled_integers, Rational};

/// Both sides of one instance of an inequality `lhs <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    #[serde(serialize_with = "crate::rational::serialize_text")]
    pub lhs: Rational,
    #[serde(serialize_with = "crate::rational::serialize_text")]
    pub rhs: Rational,
}

impl Check {
    pub fn new(lhs: Rational, rhs: Rational) -> Self {
        Check { lhs, rhs }
    }

    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }

    pub fn is_tight(&self) -> bool {
        self.lhs == self.rhs
    }

    /// `(rhs - lhs) / |rhs|`; negative on a violation.
    pub fn margin(&self) -> f64 {
        relative_slack(&self.lhs, &self.rhs)
    }
}

/// `y (x+y)^k <= (k/(k+1)) a x^(k+1) + b y^(k+1)` with the certificate's
/// rational bound for `b`.
pub fn verify_smooth_simple(cert: &SmoothCertificate, x: &Rational, y: &Rational) -> Check {
    // homogeneous of degree k+1: clear denominators and work in integers
    let k = cert.k;
    let d = common_denominator([x, y]);
    let v = scaled_integers(&[x.clone(), y.clone()], &d);
    let (xi, yi) = (&v[0], &v[1]);
    let lhs = yi * Pow::pow(xi + yi, k);
    let coeff = Rational::new((k as i64).into(), (k as i64 + 1).into()) * &cert.a;
    let b = &cert.b_bound;
    let rhs_num = coeff.numer() * b.denom() * Pow::pow(xi, k + 1)
        + b.numer() * coeff.denom() * Pow::pow(yi, k + 1);
    let scale = Pow::pow(&d, k + 1);
    Check::new(
        Rational::new(lhs, scale.clone()),
        Rational::new(rhs_num, coeff.denom() * b.denom() * scale),
    )
}

/// `1 - (1-z)^(k+1) <= (k+1) z` for `z` in `[0, 1]`.
pub fn verify_lemma_simple(k: u32, z: &Rational) -> Result<Check> {
    if z < &Rational::zero() || z > &Rational::one() {
        return Err(Error::InvalidParameter("z must lie in [0, 1]".into()));
    }
    let lhs = Rational::one() - pow(&(Rational::one() - z), k + 1);
    let rhs = int(k as i64 + 1) * z;
    Ok(Check::new(lhs, rhs))
}

/// `N (A + N p)^k <= (k+1) sum_{t=1..N} (A + t p)^k`.
pub fn verify_coor_sum(a: &Rational, p: &Rational, n: u32, k: u32) -> Result<Check> {
    if a < &Rational::zero() || p <= &Rational::zero() || n == 0 {
        return Err(Error::InvalidParameter("need A >= 0, p > 0, N >= 1".into()));
    }
    // homogeneous of degree k in (A, p)
    let d = common_denominator([a, p]);
    let v = scaled_integers(&[a.clone(), p.clone()], &d);
    let (ai, pi) = (&v[0], &v[1]);
    let nb = BigInt::from(n);
    let lhs = &nb * Pow::pow(ai + &nb * pi, k);
    let mut sum = BigInt::zero();
    for t in 1..=n {
        sum += Pow::pow(ai + BigInt::from(t) * pi, k);
    }
    let scale = Pow::pow(&d, k);
    Ok(Check::new(
        Rational::new(lhs, scale.clone()),
        Rational::new(BigInt::from(k + 1) * sum, scale),
    ))
}

/// `b a^k <= a^(k+1) / (2(k+1)) + (2k)^k b^(k+1) / (k+1)`; tight at `a = 2k b`.
pub fn verify_ab_inequality(a: &Rational, b: &Rational, k: u32) -> Result<Check> {
    if a <= &Rational::zero() || b <= &Rational::zero() || k == 0 {
        return Err(Error::InvalidParameter("need a, b > 0 and k >= 1".into()));
    }
    // homogeneous of degree k+1; both sides multiplied by 2(k+1)
    let d = common_denominator([a, b]);
    let v = scaled_integers(&[a.clone(), b.clone()], &d);
    let (ai, bi) = (&v[0], &v[1]);
    let lhs = BigInt::from(2 * (k + 1)) * bi * Pow::pow(ai, k);
    let rhs = Pow::pow(ai, k + 1)
        + BigInt::from(2) * Pow::pow(BigInt::from(2 * k), k) * Pow::pow(bi, k + 1);
    let scale = BigInt::from(2 * (k + 1)) * Pow::pow(&d, k + 1);
    Ok(Check::new(
        Rational::new(lhs, scale.clone()),
        Rational::new(rhs, scale),
    ))
}

/// SPT and EQUI sums of k-th powers on one assignment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatioCheck {
    pub k: u32,
    #[serde(serialize_with = "crate::rational::serialize_text")]
    pub spt: Rational,
    #[serde(serialize_with = "crate::rational::serialize_text")]
    pub equi: Rational,
}

impl RatioCheck {
    /// `equi <= (2k+2) spt`.
    pub fn upper(&self) -> Check {
        Check::new(self.equi.clone(), int(2 * self.k as i64 + 2) * &self.spt)
    }

    /// `spt <= equi`.
    pub fn lower(&self) -> Check {
        Check::new(self.spt.clone(), self.equi.clone())
    }

    pub fn holds(&self) -> bool {
        self.upper().holds() && self.lower().holds()
    }
}

pub fn verify_equi_spt_ratio(instance: &Instance, profile: &Profile, k: u32) -> RatioCheck {
    let sum = |policy: PolicySpec| {
        policy
            .evaluate(instance, profile)
            .social_cost_pow()
            .finite()
            .cloned()
            .expect("SPT and EQUI costs are finite")
    };
    RatioCheck {
        k,
        spt: sum(PolicySpec::spt(k)),
        equi: sum(PolicySpec::equi(k)),
    }
}
