use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{int, ratio, to_f64, upper_bound_of, Rational};

/// Growth regime of `(k - 1) a(k)` as `k` grows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    /// `(k - 1) a(k)` grows without bound.
    B1,
    /// `(k - 1) a(k)` stays bounded away from 0 and infinity.
    B2,
    /// `(k - 1) a(k)` tends to 0.
    B3,
}

/// A coefficient sequence `a(k)` in `(0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AFamily {
    /// The same value for every `k`.
    Constant(#[serde(serialize_with = "crate::rational::serialize_text")] Rational),
    /// `(k+1) / (k (k+2))`, the value behind the SPT constant.
    SptScale,
    /// `(k+1) / (k (k+2) 2^(k+1))`, the value behind the EQUI constant.
    EquiScale,
    /// `1 / (k-1)^2`, with `a(1) = 1`.
    InverseSquare,
}

impl AFamily {
    pub fn unit() -> Self {
        AFamily::Constant(int(1))
    }

    pub fn value(&self, k: u32) -> Rational {
        let k64 = k as i64;
        match self {
            AFamily::Constant(a) => a.clone(),
            AFamily::SptScale => ratio(k64 + 1, k64 * (k64 + 2)),
            AFamily::EquiScale => Rational::new(
                BigInt::from(k64 + 1),
                BigInt::from(k64 * (k64 + 2)) << (k as usize + 1),
            ),
            AFamily::InverseSquare => {
                let d = (k64 - 1).max(1);
                ratio(1, d * d)
            }
        }
    }

    fn value_f64(&self, k: f64) -> f64 {
        match self {
            AFamily::Constant(a) => to_f64(a),
            AFamily::SptScale => (k + 1.0) / (k * (k + 2.0)),
            AFamily::EquiScale => (k + 1.0) / (k * (k + 2.0)) / 2f64.powf(k + 1.0),
            AFamily::InverseSquare => 1.0 / ((k - 1.0).max(1.0)).powi(2),
        }
    }

    /// Classifies the family by sampling `(k - 1) a(k)` far out.
    pub fn regime(&self) -> Regime {
        let t = |k: f64| (k - 1.0) * self.value_f64(k);
        let (near, far) = (t(1e3), t(1e6));
        if far > 10.0 * near {
            Regime::B1
        } else if far * 10.0 < near {
            Regime::B3
        } else {
            Regime::B2
        }
    }
}

/// Constants for `y (x+y)^k <= (k/(k+1)) a x^(k+1) + b y^(k+1)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmoothCertificate {
    pub k: u32,
    #[serde(serialize_with = "crate::rational::serialize_text")]
    pub a: Rational,
    /// Root of `a z^k = (1+z)^(k-1)` with `z >= 1`.
    pub z0: f64,
    /// `(1+z0)^(k-1) (1 + z0/(k+1))`.
    pub b: f64,
    /// Rational upper bound on `b` used by exact checks; equal to `b` when
    /// `k = 1`.
    #[serde(serialize_with = "crate::rational::serialize_text")]
    pub b_bound: Rational,
    pub regime: Regime,
}

impl SmoothCertificate {
    /// `g(k) = (k-1) / z0`.
    pub fn g(&self) -> f64 {
        (self.k as f64 - 1.0) / self.z0
    }
}

const ROOT_TOL: f64 = 1e-12;
const BOUND_MARGIN: f64 = 1e-9;

/// Finds `z0` by bisection on the log form of the root equation, then
/// polishes it with Newton steps.
pub fn smooth_certificate(k: u32, family: &AFamily) -> Result<SmoothCertificate> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let a = family.value(k);
    if a <= int(0) || a > int(1) {
        return Err(Error::InvalidParameter("a(k) must lie in (0, 1]".into()));
    }
    let regime = family.regime();
    if k == 1 {
        // a z = 1, b = 1 + z/2, both exact
        let z = Rational::from_integer(1.into()) / &a;
        let b = int(1) + &z / int(2);
        return Ok(SmoothCertificate {
            k,
            z0: to_f64(&z),
            b: to_f64(&b),
            b_bound: b,
            a,
            regime,
        });
    }

    let af = to_f64(&a);
    let kf = k as f64;
    // h is increasing in z and h(1) = ln a - (k-1) ln 2 < 0
    let h = |z: f64| af.ln() + kf * z.ln() - (kf - 1.0) * z.ln_1p();
    let dh = |z: f64| kf / z - (kf - 1.0) / (1.0 + z);
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    while h(hi) <= 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    let mut z = 0.5 * (lo + hi);
    for _ in 0..4 {
        let step = h(z) / dh(z);
        if !step.is_finite() {
            break;
        }
        z -= step;
    }
    let residual = h(z).exp_m1().abs();
    if residual > ROOT_TOL {
        return Err(Error::RootToleranceExceeded { residual });
    }

    let b = (1.0 + z).powf(kf - 1.0) * (1.0 + z / (kf + 1.0));
    // the maximum of (1+z)^k - (k/(k+1)) a z^(k+1) evaluated at z
    let direct = (1.0 + z).powf(kf) - kf / (kf + 1.0) * af * z.powf(kf + 1.0);
    let b_bound = upper_bound_of(b.max(direct), BOUND_MARGIN);
    Ok(SmoothCertificate {
        k,
        a,
        z0: z,
        b,
        b_bound,
        regime,
    })
}

/// `mu_k = (k+1)/(k+2)`.
pub fn mu_smooth(k: u32) -> Rational {
    ratio(k as i64 + 1, k as i64 + 2)
}

/// `lambda_k` for the SPT inequalities: `(k+1) b(k)` at `a = (k+1)/(k(k+2))`.
pub fn lambda_spt(k: u32) -> Result<Rational> {
    let cert = smooth_certificate(k, &AFamily::SptScale)?;
    Ok(int(k as i64 + 1) * cert.b_bound)
}

/// `lambda_k` for the EQUI inequality.
///
/// The EQUI sums split into a time part and a count part, each bounded by
/// the prefix-sum inequality with both constants divided by `2^(k+1)`. That
/// needs `a = (k+1)/(k(k+2) 2^(k+1))` and gives `2^(k+1) (k+1) b(k)`.
pub fn lambda_equi(k: u32) -> Result<Rational> {
    let cert = smooth_certificate(k, &AFamily::EquiScale)?;
    let scale = Rational::from_integer(BigInt::from(1) << (k as usize + 1));
    Ok(scale * int(k as i64 + 1) * cert.b_bound)
}
