use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "coordlab",
    version,
    about = "Coordination mechanisms for scheduling games: costs, equilibria, price of anarchy and inequality checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Per-job costs of one profile under one policy.
    Eval(EvalArgs),
    /// Better-response dynamics from a start profile.
    Dynamics(DynamicsArgs),
    /// Enumerate pure equilibria and report the price of anarchy.
    Poa(PoaArgs),
    /// Run a named verification suite (or `nash` on a profile).
    Verify(VerifyArgs),
    /// Write a generated instance (or lower-bound bundle).
    Gen(GenArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObjectiveArg {
    /// l_k norm of completion times, with `--k`.
    Lk,
    Makespan,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleArg {
    First,
    Best,
    Random,
}

/// Where the instance comes from.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Instance JSON file.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// Generator: `lb-equi:M`, `lb-spt:M` or `rand:N,M,B`.
    #[arg(long = "gen", value_name = "SPEC")]
    pub generator: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct PolicyArgs {
    /// spt, equi, bcoord, ccoord or balance.
    #[arg(long)]
    pub policy: String,
    /// Norm parameter; also the power of BCOORD, CCOORD and Balance.
    #[arg(long, default_value_t = 1)]
    pub k: u32,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub policy: PolicyArgs,
    /// Comma-separated machine per job, or `x` / `x-star` for a bundle's
    /// designated profiles. Defaults to `x` for bundles.
    #[arg(long)]
    pub profile: Option<String>,
    /// Seed for `rand:` generators.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct DynamicsArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub policy: PolicyArgs,
    /// Start profile as in `eval`, or `random` (drawn from `--seed`).
    #[arg(long, default_value = "random")]
    pub profile: String,
    #[arg(long, value_enum, default_value_t = RuleArg::First)]
    pub rule: RuleArg,
    #[arg(long, default_value_t = 100_000)]
    pub max_steps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct PoaArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Lk)]
    pub objective: ObjectiveArg,
    /// Largest number of profiles to enumerate.
    #[arg(long, default_value_t = coordlab::analysis::DEFAULT_BUDGET)]
    pub budget: u128,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suite name (`bernoulli`, `smooth-spt`, ...), `all`, or `nash`.
    pub suite: String,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// For `nash`: the instance.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// For `nash`: a generator spec.
    #[arg(long = "gen", value_name = "SPEC")]
    pub generator: Option<String>,
    /// For `nash`: the policy.
    #[arg(long)]
    pub policy: Option<String>,
    /// For `nash`: the profile, as in `eval`.
    #[arg(long)]
    pub profile: Option<String>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// `lb-equi:M`, `lb-spt:M` or `rand:N,M,B`.
    #[arg(long = "gen", value_name = "SPEC")]
    pub generator: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}
