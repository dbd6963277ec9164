use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::analysis::nash::{DeviationOracle, DeviationWitness};
use crate::error::{Error, Result};
use crate::model::{Instance, PowCost, Profile};
use crate::policies::{balance_scaled_machine, PolicyKind, PolicySpec};

/// How the mover and its new machine are chosen among improving moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionRule {
    /// Lowest job index, then lowest improving machine.
    FirstImproving,
    /// Lowest job index that can improve, moved to the machine with the
    /// smallest new cost (ties to the lowest index).
    BestResponse,
    /// Uniform over all improving (job, machine) pairs.
    Random { seed: u64 },
}

/// A selection rule plus the random state it may need.
#[derive(Clone, Debug)]
pub struct MoveSelector {
    rule: SelectionRule,
    rng: ChaCha8Rng,
}

impl MoveSelector {
    pub fn new(rule: SelectionRule) -> Self {
        let seed = match rule {
            SelectionRule::Random { seed } => seed,
            _ => 0,
        };
        MoveSelector {
            rule,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rule(&self) -> SelectionRule {
        self.rule
    }
}

/// One unilateral improving move.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Move {
    pub job: usize,
    pub from: usize,
    pub to: usize,
    pub old_pow: PowCost,
    pub new_pow: PowCost,
}

impl Move {
    fn from_witness(w: DeviationWitness, from: usize) -> Self {
        Move {
            job: w.job,
            from,
            to: w.target,
            old_pow: w.old_pow,
            new_pow: w.new_pow,
        }
    }
}

/// Picks an improving move, or `None` when `profile` is an equilibrium.
pub fn better_response_step(
    instance: &Instance,
    policy: &PolicySpec,
    profile: &Profile,
    selector: &mut MoveSelector,
) -> Option<Move> {
    let oracle = DeviationOracle::new(instance, policy, profile);
    match selector.rule {
        SelectionRule::FirstImproving | SelectionRule::BestResponse => {
            for job in 0..instance.job_count() {
                let from = profile.machine_of(job);
                let moves = oracle.improving_for(job, from);
                let chosen = if selector.rule == SelectionRule::FirstImproving {
                    moves.into_iter().next()
                } else {
                    // min_by keeps the first minimum, i.e. the lowest machine
                    moves.into_iter().min_by(|a, b| a.new_pow.cmp(&b.new_pow))
                };
                if let Some(w) = chosen {
                    return Some(Move::from_witness(w, from));
                }
            }
            None
        }
        SelectionRule::Random { .. } => {
            let mut all: Vec<Move> = (0..instance.job_count())
                .flat_map(|j| {
                    let from = profile.machine_of(j);
                    oracle
                        .improving_for(j, from)
                        .into_iter()
                        .map(move |w| Move::from_witness(w, from))
                })
                .collect();
            if all.is_empty() {
                return None;
            }
            let pick = selector.rng.random_range(0..all.len());
            Some(all.swap_remove(pick))
        }
    }
}

/// Sorted `(cost, position)` pairs, one per job.
///
/// The cost is the job's powered cost, except under Balance where it is
/// `q_j` times the powered cost (the part of the formula that does not
/// depend on the job's own fastest time). The position is the job's rank
/// in its machine's total order over all jobs. Under SPT and Balance every
/// improving move makes the key lexicographically smaller.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PotentialKey(pub Vec<(PowCost, usize)>);

impl PotentialKey {
    /// Short hex digest of the canonical text form.
    pub fn hash_hex(&self) -> String {
        let mut text = String::new();
        for (c, pos) in &self.0 {
            let _ = write!(text, "{}@{};", c.to_text(), pos);
        }
        let digest = Sha256::digest(text.as_bytes());
        digest[..8].iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}

pub fn potential_key(instance: &Instance, policy: &PolicySpec, profile: &Profile) -> PotentialKey {
    let mut pairs = Vec::with_capacity(instance.job_count());
    for machine in 0..instance.machine_count() {
        let jobs = profile.jobs_on(machine);
        if jobs.is_empty() {
            continue;
        }
        let costs = match policy.kind {
            PolicyKind::Balance => balance_scaled_machine(instance, machine, &jobs, policy.k),
            _ => policy.machine_pow_costs(instance, machine, &jobs),
        };
        for (&j, c) in jobs.iter().zip(costs) {
            pairs.push((c, instance.position(machine, j)));
        }
    }
    pairs.sort();
    PotentialKey(pairs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DynamicsStatus {
    Converged,
    StepLimit,
}

/// One row of a dynamics trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub step: usize,
    pub mover: usize,
    pub from: usize,
    pub to: usize,
    pub pow_cost_before: PowCost,
    pub pow_cost_after: PowCost,
    /// Digest of the potential key after the move.
    pub potential_key_hash: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicsTrace {
    /// Visited profiles, starting with the initial one.
    pub profiles: Vec<Profile>,
    pub steps: Vec<TraceStep>,
    pub status: DynamicsStatus,
}

impl DynamicsTrace {
    pub fn last(&self) -> &Profile {
        self.profiles.last().expect("trace holds the start")
    }

    pub const CSV_HEADER: [&'static str; 7] = [
        "step",
        "mover",
        "from",
        "to",
        "pow_cost_before",
        "pow_cost_after",
        "potential_key_hash",
    ];

    /// Rows in `CSV_HEADER` column order.
    pub fn csv_rows(&self) -> Vec<[String; 7]> {
        self.steps
            .iter()
            .map(|s| {
                [
                    s.step.to_string(),
                    s.mover.to_string(),
                    s.from.to_string(),
                    s.to.to_string(),
                    s.pow_cost_before.to_text(),
                    s.pow_cost_after.to_text(),
                    s.potential_key_hash.clone(),
                ]
            })
            .collect()
    }
}

/// Runs improving moves until an equilibrium or `max_steps` moves.
///
/// Under SPT and Balance the potential key is checked after every move;
/// a key that fails to decrease is reported as `PotentialViolation`.
pub fn run_dynamics(
    instance: &Instance,
    policy: &PolicySpec,
    start: &Profile,
    rule: SelectionRule,
    max_steps: usize,
) -> Result<DynamicsTrace> {
    if max_steps == 0 {
        return Err(Error::InvalidParameter(
            "max_steps must be at least 1".into(),
        ));
    }
    start.validate(instance)?;
    let guarded = matches!(policy.kind, PolicyKind::Spt | PolicyKind::Balance);
    let mut selector = MoveSelector::new(rule);
    let mut current = start.clone();
    let mut key = potential_key(instance, policy, &current);
    let mut profiles = vec![current.clone()];
    let mut steps = Vec::new();

    for step in 1..=max_steps {
        let Some(mv) = better_response_step(instance, policy, &current, &mut selector) else {
            return Ok(DynamicsTrace {
                profiles,
                steps,
                status: DynamicsStatus::Converged,
            });
        };
        current = current.with_move(mv.job, mv.to);
        let next_key = potential_key(instance, policy, &current);
        if guarded && next_key >= key {
            return Err(Error::PotentialViolation {
                step,
                mover: mv.job,
            });
        }
        steps.push(TraceStep {
            step,
            mover: mv.job,
            from: mv.from,
            to: mv.to,
            pow_cost_before: mv.old_pow,
            pow_cost_after: mv.new_pow,
            potential_key_hash: next_key.hash_hex(),
        });
        key = next_key;
        profiles.push(current.clone());
    }
    let status =
        if better_response_step(instance, policy, &current, &mut selector.clone()).is_none() {
            DynamicsStatus::Converged
        } else {
            DynamicsStatus::StepLimit
        };
    Ok(DynamicsTrace {
        profiles,
        steps,
        status,
    })
}
