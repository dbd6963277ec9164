use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lab::Check;
use crate::rational::{common_denominator, scaled_integers, Rational};

/// Counts `n_i`, `m_i` and a strictly increasing positive sequence `q_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceTriple {
    pub n: Vec<u32>,
    pub m: Vec<u32>,
    #[serde(serialize_with = "serialize_all")]
    pub q: Vec<Rational>,
}

fn serialize_all<S: serde::Serializer>(
    values: &[Rational],
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_seq(values.iter().map(crate::rational::format_rational))
}

impl SequenceTriple {
    pub fn new(n: Vec<u32>, m: Vec<u32>, q: Vec<Rational>) -> Result<Self> {
        if n.len() != q.len() || m.len() != q.len() || q.is_empty() {
            return Err(Error::InvalidParameter(
                "n, m and q need the same positive length".into(),
            ));
        }
        if q[0] <= Rational::zero() || q.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "q must be positive and strictly increasing".into(),
            ));
        }
        Ok(SequenceTriple { n, m, q })
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// `q` scaled to integers, with the scale. Every inequality below is
    /// homogeneous of degree `k` in `q`, so the scale cancels.
    fn integral(&self) -> (Vec<BigInt>, BigInt) {
        let d = common_denominator(&self.q);
        (scaled_integers(&self.q, &d), d)
    }
}

fn finish(
    lhs: BigInt,
    mid: BigInt,
    opt: BigInt,
    d: &BigInt,
    k: u32,
    mu: &Rational,
    lambda: &Rational,
) -> Check {
    let scale = Rational::from_integer(Pow::pow(d, k));
    let lhs = Rational::from_integer(lhs) / &scale;
    let rhs = (mu * Rational::from_integer(mid) + lambda * Rational::from_integer(opt)) / &scale;
    Check::new(lhs, rhs)
}

/// Prefix sums `sum_{t < i} c_t q_t`.
fn before(counts: &[u32], q: &[BigInt]) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(q.len());
    let mut acc = BigInt::zero();
    for (c, qi) in counts.iter().zip(q) {
        out.push(acc.clone());
        acc += qi * BigInt::from(*c);
    }
    out
}

/// `sum_i sum_{j<=m_i} (A_{i,n_i} + j q_i)^k
///   <= mu sum_i sum_{j<=n_i} A_{i,j}^k + lambda sum_i sum_{j<=m_i} B_{i,j}^k`
/// with `A_{i,j} = sum_{t<i} n_t q_t + j q_i` and `B` likewise from `m`.
pub fn verify_smooth_spt(t: &SequenceTriple, k: u32, mu: &Rational, lambda: &Rational) -> Check {
    let (q, d) = t.integral();
    let a0 = before(&t.n, &q);
    let b0 = before(&t.m, &q);
    let (mut lhs, mut mid, mut opt) = (BigInt::zero(), BigInt::zero(), BigInt::zero());
    for i in 0..t.len() {
        let a_full = &a0[i] + &q[i] * BigInt::from(t.n[i]);
        for j in 1..=t.m[i] {
            let j = BigInt::from(j);
            lhs += Pow::pow(&a_full + &j * &q[i], k);
            opt += Pow::pow(&b0[i] + &j * &q[i], k);
        }
        for j in 1..=t.n[i] {
            mid += Pow::pow(&a0[i] + BigInt::from(j) * &q[i], k);
        }
    }
    finish(lhs, mid, opt, &d, k, mu, lambda)
}

/// `sum_i m_i (A_i + m_i q_i)^k <= mu sum_i n_i A_i^k + lambda sum_i m_i B_i^k`
/// with inclusive prefix sums `A_i = sum_{t<=i} n_t q_t`, `B_i` likewise.
pub fn verify_smooth_spt_modif(
    t: &SequenceTriple,
    k: u32,
    mu: &Rational,
    lambda: &Rational,
) -> Check {
    let (q, d) = t.integral();
    let a0 = before(&t.n, &q);
    let b0 = before(&t.m, &q);
    let (mut lhs, mut mid, mut opt) = (BigInt::zero(), BigInt::zero(), BigInt::zero());
    for i in 0..t.len() {
        let (n, m) = (BigInt::from(t.n[i]), BigInt::from(t.m[i]));
        let a = &a0[i] + &n * &q[i];
        let b = &b0[i] + &m * &q[i];
        lhs += &m * Pow::pow(&a + &m * &q[i], k);
        mid += &n * Pow::pow(&a, k);
        opt += &m * Pow::pow(&b, k);
    }
    finish(lhs, mid, opt, &d, k, mu, lambda)
}

/// Same shape with the EQUI sums
/// `A_i = sum_{t<i} n_t q_t + (n_i + ... + n_P) q_i`, `B_i` likewise.
pub fn verify_smooth_equi(t: &SequenceTriple, k: u32, mu: &Rational, lambda: &Rational) -> Check {
    let (q, d) = t.integral();
    let a0 = before(&t.n, &q);
    let b0 = before(&t.m, &q);
    let tail = |c: &[u32], i: usize| BigInt::from(c[i..].iter().map(|&v| v as u64).sum::<u64>());
    let (mut lhs, mut mid, mut opt) = (BigInt::zero(), BigInt::zero(), BigInt::zero());
    for i in 0..t.len() {
        let (n, m) = (BigInt::from(t.n[i]), BigInt::from(t.m[i]));
        let a = &a0[i] + tail(&t.n, i) * &q[i];
        let b = &b0[i] + tail(&t.m, i) * &q[i];
        lhs += &m * Pow::pow(&a + &m * &q[i], k);
        mid += &n * Pow::pow(&a, k);
        opt += &m * Pow::pow(&b, k);
    }
    finish(lhs, mid, opt, &d, k, mu, lambda)
}
