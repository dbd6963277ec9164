use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

/// Bell number `B_k` from the Bell triangle.
pub fn bell(k: u32) -> BigUint {
    let mut row = vec![BigUint::one()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().expect("non-empty").clone());
        for v in &row {
            let sum = next.last().expect("non-empty") + v;
            next.push(sum);
        }
        row = next;
    }
    row.swap_remove(0)
}

/// `sum_{j < terms} j^k / j!` in floating point.
pub fn dobinski_partial_sum(k: u32, terms: u32) -> f64 {
    let mut total = 0.0;
    let mut inv_fact = 1.0;
    for j in 0..terms {
        if j > 0 {
            inv_fact /= j as f64;
        }
        let pk = if k == 0 {
            1.0
        } else {
            (j as f64).powi(k as i32)
        };
        total += pk * inv_fact;
    }
    total
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DobinskiCheck {
    pub k: u32,
    pub terms: u32,
    pub partial_sum: f64,
    pub e_times_bell: f64,
    pub tolerance: f64,
}

impl DobinskiCheck {
    pub fn error(&self) -> f64 {
        (self.partial_sum - self.e_times_bell).abs() / self.e_times_bell
    }

    pub fn holds(&self) -> bool {
        self.error() <= self.tolerance
    }
}

/// Compares the truncated series with `e B_k`, relative tolerance `tol`.
pub fn verify_dobinski(k: u32, terms: u32, tol: f64) -> DobinskiCheck {
    let b = bell(k).to_f64().unwrap_or(f64::INFINITY);
    DobinskiCheck {
        k,
        terms,
        partial_sum: dobinski_partial_sum(k, terms),
        e_times_bell: std::f64::consts::E * b,
        tolerance: tol,
    }
}
