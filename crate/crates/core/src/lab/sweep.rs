use std::str::FromStr;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lab::{
    lambda_equi, lambda_spt, log_uniform, mu_smooth, random_instance, random_profile,
    random_triple, smooth_certificate, uniform_rational, verify_ab_inequality, verify_coor_sum,
    verify_dobinski, verify_equi_spt_ratio, verify_g_bounds, verify_lemma_simple,
    verify_smooth_equi, verify_smooth_simple, verify_smooth_spt, verify_smooth_spt_modif, AFamily,
    Check,
};
use crate::policies::{psi, psi_table};
use crate::rational::{format_rational, int, pow, ratio, Rational};

const CHUNK: u64 = 1024;

/// Outcome of a randomized sweep, in the CLI's JSON report shape.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub lemma: String,
    pub k: u32,
    pub params: Value,
    pub samples: u64,
    pub violations: u64,
    /// Smallest relative slack `(rhs - lhs)/|rhs|` seen.
    pub worst_margin: f64,
    pub certificate: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<Value>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

pub struct SweepOutcome {
    pub violations: u64,
    pub worst_margin: f64,
    pub first_violation: Option<Value>,
}

/// Evaluates `case(rng, index)` for `samples` indices. Each chunk of
/// indices gets its own ChaCha stream of `seed`, so results do not depend
/// on the number of threads.
pub fn run_sweep<F>(samples: u64, seed: u64, case: F) -> SweepOutcome
where
    F: Fn(&mut ChaCha8Rng, u64) -> Check + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<(u64, f64, Option<Value>)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let mut violations = 0;
            let mut worst = f64::INFINITY;
            let mut first = None;
            for idx in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                let check = case(&mut rng, idx);
                worst = worst.min(check.margin());
                if !check.holds() {
                    violations += 1;
                    if first.is_none() {
                        first = Some(json!({ "index": idx, "check": check }));
                    }
                }
            }
            (violations, worst, first)
        })
        .collect();
    SweepOutcome {
        violations: parts.iter().map(|p| p.0).sum(),
        worst_margin: parts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min),
        first_violation: parts.into_iter().find_map(|p| p.2),
    }
}

/// The check with the smallest margin.
fn weakest(checks: Vec<Check>) -> Check {
    checks
        .into_iter()
        .min_by(|a, b| {
            (a.holds(), a.margin())
                .partial_cmp(&(b.holds(), b.margin()))
                .expect("finite margins")
        })
        .expect("at least one check")
}

/// Exact checks of the `Psi_k` properties on one multiset: the bracket
/// `L^k <= Psi_k <= k! L^k`, `Psi_k^(k+1) <= Psi_(k+1)^k`, the insertion
/// recurrence (as two inequalities), and `Psi_k <= k L Psi_(k-1)`.
pub fn psi_properties(values: &[Rational], k: u32) -> Vec<Check> {
    let load: Rational = values.iter().fold(Rational::zero(), |a, v| a + v);
    let table = psi_table(values, k + 1);
    let (pk, pk1, pkm) = (
        &table[k as usize],
        &table[k as usize + 1],
        &table[k as usize - 1],
    );
    let fact = (1..=k as i64).fold(Rational::one(), |a, t| a * int(t));
    let mut out = vec![
        Check::new(pow(&load, k), pk.clone()),
        Check::new(pk.clone(), &fact * pow(&load, k)),
        Check::new(pow(pk, k + 1), pow(pk1, k)),
        Check::new(pk.clone(), int(k as i64) * &load * pkm),
    ];
    if let Some((b, rest)) = values.split_last() {
        let lhs = psi(values, k);
        let rhs = psi(rest, k) + int(k as i64) * b * psi(values, k - 1);
        out.push(Check::new(lhs.clone(), rhs.clone()));
        out.push(Check::new(rhs, lhs));
    }
    out
}

/// Named verification suites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Suite {
    SmoothSimple,
    Bernoulli,
    CoorSum,
    SmoothSpt,
    SmoothSptModif,
    SmoothEqui,
    Ab,
    EquiSpt,
    Psi,
    GBounds,
    Dobinski,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::SmoothSimple,
        Suite::Bernoulli,
        Suite::CoorSum,
        Suite::SmoothSpt,
        Suite::SmoothSptModif,
        Suite::SmoothEqui,
        Suite::Ab,
        Suite::EquiSpt,
        Suite::Psi,
        Suite::GBounds,
        Suite::Dobinski,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::SmoothSimple => "smooth-simple",
            Suite::Bernoulli => "bernoulli",
            Suite::CoorSum => "coor-sum",
            Suite::SmoothSpt => "smooth-spt",
            Suite::SmoothSptModif => "smooth-spt-modif",
            Suite::SmoothEqui => "smooth-equi",
            Suite::Ab => "ab",
            Suite::EquiSpt => "equi-spt",
            Suite::Psi => "psi",
            Suite::GBounds => "g-bounds",
            Suite::Dobinski => "dobinski",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
                Error::InvalidParameter(format!(
                    "unknown suite {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

fn report(
    lemma: &str,
    k: u32,
    params: Value,
    samples: u64,
    certificate: Value,
    out: SweepOutcome,
) -> SweepReport {
    SweepReport {
        lemma: lemma.to_string(),
        k,
        params,
        samples,
        violations: out.violations,
        worst_margin: out.worst_margin,
        certificate,
        first_violation: out.first_violation,
    }
}

fn text(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

/// Runs one suite at one `k`. `smooth-simple` yields one report per
/// coefficient family; every other suite yields one report.
pub fn run_suite(suite: &Suite, k: u32, samples: u64, seed: u64) -> Result<Vec<SweepReport>> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let name = suite.name();
    let reports = match suite {
        Suite::SmoothSimple => {
            let mut out = Vec::new();
            for (label, family) in [
                ("unit", AFamily::unit()),
                ("spt-scale", AFamily::SptScale),
                ("inverse-square", AFamily::InverseSquare),
            ] {
                let cert = smooth_certificate(k, &family)?;
                let o = run_sweep(samples, seed, |rng, idx| {
                    if idx == 0 && k == 1 {
                        // the tight point of the closed form
                        return verify_smooth_simple(&cert, &int(1), &int(1));
                    }
                    let x = log_uniform(rng, -3.0, 3.0);
                    let y = log_uniform(rng, -3.0, 3.0);
                    verify_smooth_simple(&cert, &x, &y)
                });
                let c = serde_json::to_value(&cert).expect("serializable");
                out.push(report(
                    name,
                    k,
                    json!({ "family": label, "regime": cert.regime }),
                    samples,
                    c,
                    o,
                ));
            }
            out
        }
        Suite::Bernoulli => {
            const GRID: u64 = 1000;
            let o = run_sweep(samples, seed, |rng, idx| {
                let z = if idx <= GRID {
                    ratio(idx as i64, GRID as i64)
                } else {
                    let d = rng.random_range(1..=1_000_000i64);
                    ratio(rng.random_range(0..=d), d)
                };
                verify_lemma_simple(k, &z).expect("z in [0, 1]")
            });
            vec![report(
                name,
                k,
                json!({ "grid": GRID }),
                samples,
                Value::Null,
                o,
            )]
        }
        Suite::CoorSum => {
            let o = run_sweep(samples, seed, |rng, _| {
                let a = if rng.random_bool(0.1) {
                    int(0)
                } else {
                    uniform_rational(rng, 10, 8)
                };
                let p = uniform_rational(rng, 10, 8);
                let n = rng.random_range(1..=50);
                verify_coor_sum(&a, &p, n, k).expect("valid parameters")
            });
            vec![report(
                name,
                k,
                json!({ "a_max": 10, "p_max": 10, "n_max": 50 }),
                samples,
                Value::Null,
                o,
            )]
        }
        Suite::SmoothSpt | Suite::SmoothSptModif | Suite::SmoothEqui => {
            let mu = mu_smooth(k);
            let lambda = if *suite == Suite::SmoothEqui {
                lambda_equi(k)?
            } else {
                lambda_spt(k)?
            };
            let verify = match suite {
                Suite::SmoothSpt => verify_smooth_spt,
                Suite::SmoothSptModif => verify_smooth_spt_modif,
                _ => verify_smooth_equi,
            };
            let o = run_sweep(samples, seed, |rng, _| {
                let t = random_triple(rng, 6, 5, 5);
                verify(&t, k, &mu, &lambda)
            });
            let cert = json!({ "mu": text(&mu), "lambda": text(&lambda) });
            vec![report(
                name,
                k,
                json!({ "len_max": 6, "count_max": 5, "step_max": 5 }),
                samples,
                cert,
                o,
            )]
        }
        Suite::Ab => {
            let o = run_sweep(samples, seed, |rng, idx| {
                let b = log_uniform(rng, -4.0, 2.0);
                let a = if idx % 16 == 0 {
                    // the equality point a = 2k b
                    int(2 * k as i64) * &b
                } else {
                    log_uniform(rng, -4.0, 2.0)
                };
                verify_ab_inequality(&a, &b, k).expect("positive inputs")
            });
            vec![report(
                name,
                k,
                json!({ "range": "(1e-4, 100]" }),
                samples,
                Value::Null,
                o,
            )]
        }
        Suite::EquiSpt => {
            let o = run_sweep(samples, seed, |rng, _| {
                let inst = random_instance(rng, 10, 3, 9);
                let x = random_profile(rng, &inst);
                let r = verify_equi_spt_ratio(&inst, &x, k);
                weakest(vec![r.lower(), r.upper()])
            });
            vec![report(
                name,
                k,
                json!({ "n_max": 10, "m_max": 3, "factor": 2 * k + 2 }),
                samples,
                Value::Null,
                o,
            )]
        }
        Suite::Psi => {
            let o = run_sweep(samples, seed, |rng, _| {
                let size = rng.random_range(0..=8);
                let values: Vec<Rational> =
                    (0..size).map(|_| uniform_rational(rng, 10, 6)).collect();
                weakest(psi_properties(&values, k))
            });
            vec![report(
                name,
                k,
                json!({ "size_max": 8 }),
                samples,
                Value::Null,
                o,
            )]
        }
        Suite::GBounds => {
            if k < 2 {
                return Err(Error::InvalidParameter("g-bounds needs k >= 2".into()));
            }
            let g = verify_g_bounds(k, &AFamily::unit())?;
            let margin = ((g.g - g.lower) / g.g).min((g.upper - g.g) / g.g);
            let o = SweepOutcome {
                violations: u64::from(!g.holds()),
                worst_margin: margin,
                first_violation: (!g.holds())
                    .then(|| serde_json::to_value(&g).expect("serializable")),
            };
            vec![report(
                name,
                k,
                json!({ "family": "unit" }),
                1,
                serde_json::to_value(&g).expect("serializable"),
                o,
            )]
        }
        Suite::Dobinski => {
            let terms = (samples.clamp(1, 10_000)) as u32;
            let d = verify_dobinski(k, terms, 1e-9);
            let o = SweepOutcome {
                violations: u64::from(!d.holds()),
                worst_margin: d.tolerance - d.error(),
                first_violation: (!d.holds())
                    .then(|| serde_json::to_value(&d).expect("serializable")),
            };
            vec![report(
                name,
                k,
                json!({ "terms": terms, "tolerance": 1e-9 }),
                1,
                serde_json::to_value(&d).expect("serializable"),
                o,
            )]
        }
    };
    Ok(reports)
}
