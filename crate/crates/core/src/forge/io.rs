use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::forge::LowerBoundBundle;
use crate::model::Instance;
use crate::rational::{format_rational, parse_rational};

#[derive(Deserialize)]
#[serde(untagged)]
enum RationalField {
    Text(String),
    Int(i64),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceIn {
    m: usize,
    n: usize,
    proc: Vec<Vec<RationalField>>,
    #[serde(default)]
    priority: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    allowed: Option<Vec<Vec<usize>>>,
}

#[derive(Serialize)]
struct InstanceOut {
    m: usize,
    n: usize,
    proc: Vec<Vec<String>>,
    priority: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    allowed: Option<Vec<Vec<usize>>>,
}

fn to_out(instance: &Instance) -> InstanceOut {
    InstanceOut {
        m: instance.machine_count(),
        n: instance.job_count(),
        proc: instance
            .processing_times()
            .iter()
            .map(|row| row.iter().map(format_rational).collect())
            .collect(),
        priority: instance.priorities().to_vec(),
        allowed: instance.allowed().map(|a| a.to_vec()),
    }
}

/// Canonical pretty JSON. Rationals are written as strings in lowest terms.
pub fn instance_to_json(instance: &Instance) -> String {
    serde_json::to_string_pretty(&to_out(instance)).expect("serializable") + "\n"
}

/// Parses the instance format. A missing `priority` means identity lists.
pub fn instance_from_json(text: &str) -> Result<Instance> {
    let raw: InstanceIn = serde_json::from_str(text).map_err(|e| {
        Error::parse(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    if raw.proc.len() != raw.n {
        return Err(Error::parse(
            "n",
            format!("n = {} but proc has {} rows", raw.n, raw.proc.len()),
        ));
    }
    let mut proc = Vec::with_capacity(raw.n);
    for (j, row) in raw.proc.into_iter().enumerate() {
        if row.len() != raw.m {
            return Err(Error::parse(
                format!("proc[{j}]"),
                format!("expected {} entries, found {}", raw.m, row.len()),
            ));
        }
        let mut parsed = Vec::with_capacity(raw.m);
        for (i, field) in row.into_iter().enumerate() {
            let value = match field {
                RationalField::Text(t) => parse_rational(&t),
                RationalField::Int(v) => parse_rational(&v.to_string()),
            }
            .map_err(|e| Error::parse(format!("proc[{j}][{i}]"), e.to_string()))?;
            parsed.push(value);
        }
        proc.push(parsed);
    }
    let instance = Instance::with_priority(proc, raw.priority)?;
    match raw.allowed {
        Some(a) => instance.with_allowed(a),
        None => Ok(instance),
    }
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    instance_from_json(&text).map_err(|e| match e {
        Error::Parse { context, message } => Error::Parse {
            context: format!("{}: {context}", path.display()),
            message,
        },
        other => other,
    })
}

pub fn write_instance(path: impl AsRef<Path>, instance: &Instance) -> Result<()> {
    fs::write(path, instance_to_json(instance))?;
    Ok(())
}

/// Bundle JSON: the instance plus designated profiles and group data.
pub fn bundle_to_json(bundle: &LowerBoundBundle) -> String {
    let value = json!({
        "instance": to_out(&bundle.instance),
        "designated_x": bundle.designated_x,
        "comparison_x_star": bundle.comparison_x_star,
        "allowed": bundle.instance.allowed(),
        "group_sizes": bundle.group_sizes,
        "expected_group_costs": bundle
            .expected_group_costs
            .iter()
            .map(format_rational)
            .collect::<Vec<_>>(),
    });
    serde_json::to_string_pretty(&value).expect("serializable") + "\n"
}
