use std::path::Path;

use anyhow::{Context, Result};
use coordlab::analysis::{
    enumerate_equilibria, find_deviation, run_dynamics, DynamicsStatus, DynamicsTrace,
    SelectionRule,
};
use coordlab::forge::{
    bundle_to_json, gen_equi_lower_bound, gen_random, gen_spt_lower_bound, instance_to_json,
    read_instance, LowerBoundBundle, ValueModel,
};
use coordlab::lab::{run_suite, Suite, SweepReport};
use coordlab::model::makespan_cost;
use coordlab::rational::format_rational;
use coordlab::{Error, Instance, Objective, PolicyKind, PolicySpec, PowCost, Profile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::{
    DynamicsArgs, EvalArgs, Format, GenArgs, ObjectiveArg, PoaArgs, PolicyArgs, RuleArg, Source,
    VerifyArgs,
};

/// Exit codes.
pub const EXIT_VIOLATION: i32 = 4;
pub const EXIT_NO_EQUILIBRIUM: i32 = 5;

/// Rendered output plus the exit code to finish with.
pub struct Outcome {
    pub body: String,
    pub code: i32,
    /// Printed to standard error when present.
    pub note: Option<String>,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome {
            body,
            code: 0,
            note: None,
        }
    }
}

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    Error::InvalidParameter(msg.into()).into()
}

enum Loaded {
    Plain(Instance),
    Bundle(Box<LowerBoundBundle>),
}

impl Loaded {
    fn instance(&self) -> &Instance {
        match self {
            Loaded::Plain(i) => i,
            Loaded::Bundle(b) => &b.instance,
        }
    }
}

fn generate(spec: &str, seed: u64) -> Result<Loaded> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| invalid(format!("generator `{spec}` needs the form name:params")))?;
    let ints = |text: &str| -> Result<Vec<usize>> {
        text.split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| invalid(format!("bad number `{t}` in `{spec}`")))
            })
            .collect()
    };
    match kind {
        "lb-equi" | "lb-spt" => {
            let v = ints(rest)?;
            let [m] = v[..] else {
                return Err(invalid(format!(
                    "`{kind}` takes one parameter, got `{rest}`"
                )));
            };
            let b = if kind == "lb-equi" {
                gen_equi_lower_bound(m)?
            } else {
                gen_spt_lower_bound(m)?
            };
            Ok(Loaded::Bundle(Box::new(b)))
        }
        "rand" => {
            let v = ints(rest)?;
            let [n, m, b] = v[..] else {
                return Err(invalid(format!("`rand` takes n,m,B, got `{rest}`")));
            };
            let max = u32::try_from(b).map_err(|_| invalid("B is too large"))?;
            Ok(Loaded::Plain(gen_random(
                n,
                m,
                ValueModel::UniformInt { max },
                seed,
            )?))
        }
        other => Err(invalid(format!(
            "unknown generator `{other}`; expected lb-equi, lb-spt or rand"
        ))),
    }
}

fn load(instance: Option<&Path>, generator: Option<&str>, seed: u64) -> Result<Loaded> {
    match (instance, generator) {
        (Some(path), None) => Ok(Loaded::Plain(read_instance(path)?)),
        (None, Some(spec)) => generate(spec, seed),
        _ => Err(invalid("give exactly one of --instance and --gen")),
    }
}

fn load_source(source: &Source, seed: u64) -> Result<Loaded> {
    load(
        source.instance.as_deref(),
        source.generator.as_deref(),
        seed,
    )
}

fn policy(args: &PolicyArgs) -> Result<PolicySpec> {
    let kind: PolicyKind = args.policy.parse()?;
    Ok(PolicySpec::new(kind, args.k)?)
}

fn profile(text: Option<&str>, loaded: &Loaded) -> Result<Profile> {
    let x = match (text, loaded) {
        (None | Some("x"), Loaded::Bundle(b)) => b.designated_x.clone(),
        (Some("x-star"), Loaded::Bundle(b)) => b.comparison_x_star.clone(),
        (None, Loaded::Plain(_)) => return Err(invalid("this instance needs --profile")),
        (Some(list), _) => Profile::new(
            list.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| invalid(format!("bad machine index `{t}` in --profile")))
                })
                .collect::<Result<_>>()?,
        ),
    };
    x.validate(loaded.instance())?;
    Ok(x)
}

fn random_profile(inst: &Instance, seed: u64) -> Profile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Profile::new(
        (0..inst.job_count())
            .map(|j| {
                let allowed = inst.allowed_machines(j);
                allowed[rng.random_range(0..allowed.len())]
            })
            .collect(),
    )
}

fn approx(cost: &PowCost, k: u32) -> Value {
    match cost {
        PowCost::Finite(_) => json!(cost.root_approx(k)),
        PowCost::Infeasible => Value::Null,
    }
}

fn to_json(value: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    Ok(String::from_utf8(w.into_inner().context("flushing CSV")?)?)
}

fn join(x: &Profile) -> String {
    x.as_slice()
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn eval(args: &EvalArgs) -> Result<Outcome> {
    let loaded = load_source(&args.source, args.seed)?;
    let inst = loaded.instance();
    let spec = policy(&args.policy)?;
    let x = profile(args.profile.as_deref(), &loaded)?;
    let report = spec.evaluate(inst, &x);
    let k = spec.k;
    let body = match args.output.format {
        Format::Json => {
            let social = report.social_cost_pow();
            to_json(&json!({
                "policy": spec.kind,
                "k": k,
                "profile": x,
                "pow_costs": report.pow_costs,
                "costs_approx": report.pow_costs.iter().map(|c| approx(c, k)).collect::<Vec<_>>(),
                "social_cost_pow": social,
                "social_cost_approx": approx(&social, k),
                "makespan": format_rational(&makespan_cost(inst, &x)),
            }))
        }
        Format::Csv => to_csv(
            &["job", "machine", "pow_cost", "cost_approx"],
            report.pow_costs.iter().enumerate().map(|(j, c)| {
                vec![
                    j.to_string(),
                    x.machine_of(j).to_string(),
                    c.to_text(),
                    match c {
                        PowCost::Finite(_) => c.root_approx(k).to_string(),
                        PowCost::Infeasible => String::new(),
                    },
                ]
            }),
        )?,
    };
    Ok(Outcome::ok(body))
}

pub fn dynamics(args: &DynamicsArgs) -> Result<Outcome> {
    let loaded = load_source(&args.source, args.seed)?;
    let inst = loaded.instance();
    let spec = policy(&args.policy)?;
    let start = if args.profile == "random" {
        random_profile(inst, args.seed)
    } else {
        profile(Some(&args.profile), &loaded)?
    };
    let rule = match args.rule {
        RuleArg::First => SelectionRule::FirstImproving,
        RuleArg::Best => SelectionRule::BestResponse,
        RuleArg::Random => SelectionRule::Random { seed: args.seed },
    };
    let trace = run_dynamics(inst, &spec, &start, rule, args.max_steps)?;
    let body = match args.output.format {
        Format::Json => {
            let last = trace.last();
            to_json(&json!({
                "policy": spec.kind,
                "k": spec.k,
                "rule": rule,
                "start": start,
                "status": trace.status,
                "steps": trace.steps,
                "final_profile": last,
                "final_pow_costs": spec.evaluate(inst, last).pow_costs,
            }))
        }
        Format::Csv => to_csv(
            &DynamicsTrace::CSV_HEADER,
            trace.csv_rows().into_iter().map(Vec::from),
        )?,
    };
    let note = (trace.status == DynamicsStatus::StepLimit).then(|| {
        format!(
            "step limit of {} reached without an equilibrium",
            args.max_steps
        )
    });
    Ok(Outcome {
        body,
        code: 0,
        note,
    })
}

pub fn poa(args: &PoaArgs) -> Result<Outcome> {
    let loaded = load_source(&args.source, args.seed)?;
    let inst = loaded.instance();
    let spec = policy(&args.policy)?;
    let objective = match args.objective {
        ObjectiveArg::Lk => Objective::LkNorm(args.policy.k),
        ObjectiveArg::Makespan => Objective::Makespan,
    };
    let report = enumerate_equilibria(inst, &spec, objective, args.budget)?;
    let power_spec = spec.for_objective(objective)?;
    let body = match args.output.format {
        Format::Json => to_json(&report),
        Format::Csv => to_csv(
            &["profile", "social_cost_pow"],
            report.equilibria.iter().map(|x| {
                let cost = coordlab::analysis::objective_value(inst, &power_spec, objective, x)
                    .expect("objective checked above");
                vec![join(x), cost.to_text()]
            }),
        )?,
    };
    if report.equilibria.is_empty() {
        return Ok(Outcome {
            body,
            code: EXIT_NO_EQUILIBRIUM,
            note: Some(format!(
                "no pure equilibrium among {} profiles",
                report.profiles_checked
            )),
        });
    }
    Ok(Outcome::ok(body))
}

fn suites(name: &str, k: u32) -> Result<Vec<Suite>> {
    if name == "all" {
        Ok(Suite::ALL
            .into_iter()
            .filter(|s| k >= 2 || *s != Suite::GBounds)
            .collect())
    } else {
        Ok(vec![name.parse::<Suite>()?])
    }
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome> {
    if args.suite == "nash" {
        return verify_nash(args);
    }
    let mut reports: Vec<SweepReport> = Vec::new();
    for suite in suites(&args.suite, args.k)? {
        reports.extend(run_suite(&suite, args.k, args.samples, args.seed)?);
    }
    let body = match args.output.format {
        Format::Json => to_json(&reports),
        Format::Csv => to_csv(
            &[
                "lemma",
                "k",
                "samples",
                "violations",
                "worst_margin",
                "params",
            ],
            reports.iter().map(|r| {
                vec![
                    r.lemma.clone(),
                    r.k.to_string(),
                    r.samples.to_string(),
                    r.violations.to_string(),
                    r.worst_margin.to_string(),
                    r.params.to_string(),
                ]
            }),
        )?,
    };
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("{} (k={}): {} violations", r.lemma, r.k, r.violations))
        .collect();
    if failed.is_empty() {
        Ok(Outcome::ok(body))
    } else {
        Ok(Outcome {
            body,
            code: EXIT_VIOLATION,
            note: Some(failed.join("; ")),
        })
    }
}

fn verify_nash(args: &VerifyArgs) -> Result<Outcome> {
    let loaded = load(
        args.instance.as_deref(),
        args.generator.as_deref(),
        args.seed,
    )?;
    let name = args
        .policy
        .as_deref()
        .ok_or_else(|| invalid("`verify nash` needs --policy"))?;
    let spec = policy(&PolicyArgs {
        policy: name.to_string(),
        k: args.k,
    })?;
    let x = profile(args.profile.as_deref(), &loaded)?;
    let witness = find_deviation(loaded.instance(), &spec, &x);
    let body = match args.output.format {
        Format::Json => to_json(&json!({
            "policy": spec.kind,
            "k": spec.k,
            "profile": x,
            "is_nash": witness.is_none(),
            "witness": witness,
        })),
        Format::Csv => to_csv(
            &["is_nash", "job", "target", "old_pow", "new_pow"],
            [match &witness {
                None => vec![
                    "true".into(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                ],
                Some(w) => vec![
                    "false".into(),
                    w.job.to_string(),
                    w.target.to_string(),
                    w.old_pow.to_text(),
                    w.new_pow.to_text(),
                ],
            }],
        )?,
    };
    match witness {
        None => Ok(Outcome::ok(body)),
        Some(w) => Ok(Outcome {
            body,
            code: EXIT_VIOLATION,
            note: Some(format!(
                "job {} lowers its cost {} -> {} by moving to machine {}",
                w.job, w.old_pow, w.new_pow, w.target
            )),
        }),
    }
}

pub fn gen(args: &GenArgs) -> Result<Outcome> {
    let loaded = generate(&args.generator, args.seed)?;
    let body = match (args.output.format, &loaded) {
        (Format::Json, Loaded::Bundle(b)) => bundle_to_json(b),
        (Format::Json, Loaded::Plain(i)) => instance_to_json(i),
        (Format::Csv, _) => {
            let inst = loaded.instance();
            let mut header = vec!["job".to_string()];
            header.extend((0..inst.machine_count()).map(|i| format!("p{i}")));
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            to_csv(
                &header,
                inst.processing_times().iter().enumerate().map(|(j, row)| {
                    std::iter::once(j.to_string())
                        .chain(row.iter().map(format_rational))
                        .collect()
                }),
            )?
        }
    };
    Ok(Outcome::ok(body))
}
