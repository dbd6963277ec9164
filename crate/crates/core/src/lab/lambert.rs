use serde::Serialize;

use crate::error::{Error, Result};
use crate::lab::{smooth_certificate, AFamily};

const MAX_ITER: usize = 200;

/// Principal branch of Lambert W on `[0, inf)`: the `w >= 0` with
/// `w e^w = y`. Newton iteration to `1e-12` relative.
pub fn lambert_w(y: f64) -> Result<f64> {
    if y.is_nan() || y < 0.0 || !y.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "lambert_w needs finite y >= 0, got {y}"
        )));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let mut w = if y < 3.0 {
        y.ln_1p() * 0.75
    } else {
        let l = y.ln();
        l - l.ln()
    };
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - y;
        let step = f / (ew * (w + 1.0));
        w -= step;
        if step.abs() <= 1e-12 * w.abs().max(f64::MIN_POSITIVE) {
            return Ok(w);
        }
    }
    Err(Error::NonConvergence(y))
}

/// `W((k-1) a) < g(k) < 2 W((k-1) a / 2)` with `g(k) = (k-1)/z0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GBounds {
    pub k: u32,
    pub lower: f64,
    pub g: f64,
    pub upper: f64,
}

impl GBounds {
    pub fn holds(&self) -> bool {
        self.lower < self.g && self.g < self.upper
    }
}

pub fn verify_g_bounds(k: u32, family: &AFamily) -> Result<GBounds> {
    if k < 2 {
        return Err(Error::InvalidParameter("the bracket needs k >= 2".into()));
    }
    let cert = smooth_certificate(k, family)?;
    let t = (k as f64 - 1.0) * crate::rational::to_f64(&cert.a);
    Ok(GBounds {
        k,
        lower: lambert_w(t)?,
        g: cert.g(),
        upper: 2.0 * lambert_w(t / 2.0)?,
    })
}
