//! The `simulate` command.

use std::num::NonZeroUsize;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde_json::{json, Map, Value};
use stabform_core::bounds::{Arithmetic, BoundEvaluator, ChannelSpec};
use stabform_core::mc::{Estimate, Simulator, TrialConfig};
use stabform_core::rational::{format_rational, parse_rational, to_f64};

use crate::codec::dist_table_from_json;
use crate::error::{CliError, CliResult};
use crate::io::{pretty, read_json};
use crate::par::{map_indices, split_range};
use crate::Format;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ChannelKind {
    Erasure,
    Depolarizing,
    /// A distribution table given with `--dist`.
    Generic,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    channel: ChannelKind,
    /// Qubits; taken from the table for a generic channel.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long, value_name = "FILE")]
    dist: Option<PathBuf>,
    /// Syndrome bits.
    #[arg(long)]
    m: usize,
    #[arg(long)]
    trials: u64,
    #[arg(long, env = "SEED")]
    seed: u64,
    /// Draw the encoding matrix once instead of once per trial.
    #[arg(long)]
    fixed_matrix: bool,
    #[arg(long, default_value = "1")]
    threads: NonZeroUsize,
}

fn usage(msg: &str) -> CliError {
    CliError::Usage(msg.into())
}

fn channel(args: &SimulateArgs) -> CliResult<(ChannelSpec, usize)> {
    match args.channel {
        ChannelKind::Generic => {
            if args.delta.is_some() {
                return Err(usage("--delta does not apply to a generic channel"));
            }
            let path = args.dist.as_ref().ok_or_else(|| usage("a generic channel needs --dist"))?;
            let table = dist_table_from_json(&read_json(path)?)?;
            let n = args.n.unwrap_or(table.n());
            Ok((ChannelSpec::Table(table), n))
        }
        kind => {
            if args.dist.is_some() {
                return Err(usage("--dist needs --channel generic"));
            }
            let n = args.n.ok_or_else(|| usage("--n is required"))?;
            let delta = parse_rational(args.delta.as_deref().ok_or_else(|| usage("--delta is required"))?)?;
            Ok(match kind {
                ChannelKind::Erasure => (ChannelSpec::Erasure(delta), n),
                _ => (ChannelSpec::Depolarizing(delta), n),
            })
        }
    }
}

pub fn run(args: &SimulateArgs, format: Option<Format>) -> CliResult<String> {
    let format = format.unwrap_or(Format::Json);
    if format == Format::Csv {
        return Err(usage("simulate has no CSV output"));
    }
    let (spec, n) = channel(args)?;
    let mut v = Map::new();
    v.insert("channel".into(), json!(spec.name()));
    if let ChannelSpec::Erasure(d) | ChannelSpec::Depolarizing(d) = &spec {
        v.insert("delta".into(), json!(format_rational(d)));
    }
    // Validate the run before paying for exact bounds.
    let sim = Simulator::new(TrialConfig {
        channel: spec.clone(),
        n,
        m: args.m,
        trials: args.trials,
        seed: args.seed,
        fixed_matrix: args.fixed_matrix,
    })?;
    let bounds = BoundEvaluator::new(&spec, n as u64, Arithmetic::Exact)?
        .bounds_exact(args.m as u64)?
        .expect("exact evaluator");
    let ranges = split_range(args.trials, args.threads);
    let failures: u64 = map_indices(ranges.len(), args.threads, |k| {
        Ok::<_, CliError>(sim.failures(ranges[k].clone()))
    })?
    .into_iter()
    .sum();
    let est = Estimate::new(failures, args.trials);
    let (p_conv, p_ach) = (to_f64(&bounds.p_conv), to_f64(&bounds.p_ach));
    for (k, x) in [
        ("n", json!(n)),
        ("m", json!(args.m)),
        ("trials", json!(args.trials)),
        ("failures", json!(failures)),
        ("p_hat", json!(est.p_hat)),
        ("ci95", json!([est.ci95.0, est.ci95.1])),
        ("p_conv", json!(format_rational(&bounds.p_conv))),
        ("p_ach", json!(format_rational(&bounds.p_ach))),
        ("p_conv_approx", json!(p_conv)),
        ("p_ach_approx", json!(p_ach)),
        ("sandwiched", json!(est.sandwiched(p_conv, p_ach))),
        ("fixed_matrix", json!(args.fixed_matrix)),
        ("seed", json!(args.seed)),
    ] {
        v.insert(k.into(), x);
    }
    Ok(match format {
        Format::Json => pretty(&Value::Object(v)),
        _ => v
            .iter()
            .map(|(k, x)| match x {
                Value::String(s) => format!("{k}: {s}\n"),
                other => format!("{k}: {other}\n"),
            })
            .collect(),
    })
}
