//! Matrix commands: canon, reconstruct, verify, sample and count.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::builder::{PossibleValuesParser, TypedValueParser};
use clap::{ArgGroup, Args, Subcommand};
use serde_json::{json, Value};
use stabform_core::canon::{decompose, reconstruct, to_gates};
use stabform_core::moves::{is_stabilizer_pcm, is_symplectic, Mode};
use stabform_core::rng::stream_rng;
use stabform_core::sample::{count_stabilizer_pcm, count_symplectic, sample_stabilizer_pcm, sample_symplectic};
use stabform_core::Gf2Matrix;

use crate::codec::{gates_json, matrix_json, quintuple_from_json, quintuple_json};
use crate::error::{CliError, CliResult};
use crate::io::{pretty, read_json, read_matrix};
use crate::Format;

fn mode_parser() -> impl TypedValueParser<Value = Mode> {
    PossibleValuesParser::new(["unrestricted", "pcm", "stabilizer", "symplectic"])
        .map(|s| s.parse::<Mode>().expect("listed modes parse"))
}

#[derive(Args, Debug)]
pub struct CanonArgs {
    /// Matrix family.
    #[arg(value_parser = mode_parser())]
    mode: Mode,
    /// Matrix file in text format, `-` for stdin.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Also list the Clifford gates (symplectic mode only).
    #[arg(long)]
    gates: bool,
}

#[derive(Args, Debug)]
pub struct ReconstructArgs {
    /// Quintuple JSON as written by `canon`, `-` for stdin.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("check").required(true).args(["symplectic", "pcm", "quintuple"])))]
pub struct VerifyArgs {
    /// Check `AᵀΛA = Λ`.
    #[arg(long)]
    symplectic: bool,
    /// Check `AΛAᵀ = 0`.
    #[arg(long)]
    pcm: bool,
    /// Check the memberships of a quintuple JSON file.
    #[arg(long)]
    quintuple: bool,
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum SampleCommand {
    /// Uniformly random 2n × 2n symplectic matrices.
    Symplectic {
        #[arg(long)]
        n: usize,
        #[arg(long, env = "SEED")]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
    /// Uniformly random m × 2n stabilizer parity check matrices of a given rank.
    Pcm {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rank: usize,
        #[arg(long, env = "SEED")]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum CountCommand {
    /// Order of the symplectic group Sp(2n, 2).
    Symplectic {
        #[arg(long)]
        n: usize,
    },
    /// Number of m × 2n stabilizer parity check matrices, of one rank or all.
    Pcm {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rank: Option<usize>,
    },
}

fn no_csv(format: Format, command: &str) -> CliResult<()> {
    if format == Format::Csv {
        return Err(CliError::Usage(format!("{command} has no CSV output")));
    }
    Ok(())
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

pub fn canon(args: &CanonArgs, format: Option<Format>) -> CliResult<String> {
    let format = format.unwrap_or(Format::Json);
    no_csv(format, "canon")?;
    if args.gates && args.mode != Mode::Symplectic {
        return Err(CliError::Usage("--gates needs symplectic mode".into()));
    }
    let a = read_matrix(&args.input)?;
    let q = decompose(args.mode, &a)?;
    let gates = if args.gates { Some(to_gates(&q)?) } else { None };
    Ok(match format {
        Format::Json => {
            let mut v = quintuple_json(&q);
            if let Some(g) = &gates {
                v["gates"] = gates_json(g);
            }
            pretty(&v)
        }
        _ => {
            let p = &q.profile;
            let mut s = String::new();
            writeln!(s, "mode: {}", p.mode.name()).unwrap();
            writeln!(s, "m: {}\nn2: {}\nr: {}", p.rows, p.cols, p.rank()).unwrap();
            writeln!(s, "alpha: {}\nbeta: {}", join(&p.alpha), join(&p.beta)).unwrap();
            write!(s, "L:\n{}R:\n{}", q.l.to_text(), q.r.to_text()).unwrap();
            if let Some(g) = &gates {
                s.push_str("gates:\n");
                for gate in g {
                    writeln!(s, "{} {}", gate.name(), join(&gate.qubits())).unwrap();
                }
            }
            s.trim_end().to_owned() + "\n"
        }
    })
}

pub fn reconstruct_cmd(args: &ReconstructArgs, format: Option<Format>) -> CliResult<String> {
    let format = format.unwrap_or(Format::Text);
    no_csv(format, "reconstruct")?;
    let q = quintuple_from_json(&read_json(&args.input)?)?;
    let a = reconstruct(&q)?;
    Ok(match format {
        Format::Json => pretty(&matrix_json(&a)),
        _ => a.to_text(),
    })
}

/// Exits 0 only when the check holds; a failed check is reported as an
/// error naming the invariant.
pub fn verify(args: &VerifyArgs, format: Option<Format>) -> CliResult<String> {
    let format = format.unwrap_or(Format::Json);
    no_csv(format, "verify")?;
    let v = if args.quintuple {
        let q = quintuple_from_json(&read_json(&args.input)?)?;
        q.verify()?;
        json!({ "check": "quintuple", "ok": true, "mode": q.mode().name(), "r": q.rank() })
    } else {
        let a = read_matrix(&args.input)?;
        let (check, holds, invariant) = if args.symplectic {
            ("symplectic", is_symplectic(&a)?, "A^T Λ A = Λ")
        } else {
            ("pcm", is_stabilizer_pcm(&a)?, "A Λ A^T = 0")
        };
        if !holds {
            return Err(CliError::invariant(invariant, format!("{invariant} does not hold")));
        }
        json!({ "check": check, "ok": true, "rows": a.rows(), "cols": a.cols() })
    };
    Ok(match format {
        Format::Json => pretty(&v),
        _ => "ok\n".into(),
    })
}

fn render_samples(format: Format, header: Value, samples: &[Gf2Matrix]) -> String {
    match format {
        Format::Json => {
            let mut v = header;
            v["samples"] = samples.iter().map(Gf2Matrix::row_strings).collect::<Vec<_>>().into();
            pretty(&v)
        }
        _ if samples.len() == 1 => samples[0].to_text(),
        _ => samples
            .iter()
            .enumerate()
            .map(|(k, a)| format!("# sample {k}\n{}", a.to_text()))
            .collect::<Vec<_>>()
            .join("\n"),
    }
}

/// Sample `k` is drawn from stream `k` of the seed.
pub fn sample(cmd: &SampleCommand, format: Option<Format>) -> CliResult<String> {
    let format = format.unwrap_or(Format::Text);
    no_csv(format, "sample")?;
    match *cmd {
        SampleCommand::Symplectic { n, seed, count } => {
            let samples: Vec<_> = (0..count)
                .map(|k| sample_symplectic(n, &mut stream_rng(seed, k)))
                .collect();
            let header = json!({ "kind": "symplectic", "n": n, "seed": seed });
            Ok(render_samples(format, header, &samples))
        }
        SampleCommand::Pcm {
            m,
            n,
            rank,
            seed,
            count,
        } => {
            let samples = (0..count)
                .map(|k| sample_stabilizer_pcm(m, n, rank, &mut stream_rng(seed, k)))
                .collect::<Result<Vec<_>, _>>()?;
            let header = json!({ "kind": "pcm", "m": m, "n": n, "rank": rank, "seed": seed });
            Ok(render_samples(format, header, &samples))
        }
    }
}

pub fn count(cmd: &CountCommand, format: Option<Format>) -> CliResult<String> {
    let format = format.unwrap_or(Format::Json);
    no_csv(format, "count")?;
    let (v, total) = match *cmd {
        CountCommand::Symplectic { n } => {
            let c = count_symplectic(n).to_string();
            (json!({ "kind": "symplectic", "n": n, "count": c }), c)
        }
        CountCommand::Pcm { m, n, rank } => {
            let c = match rank {
                Some(r) => count_stabilizer_pcm(m, n, r)?,
                None => (0..=m.min(n))
                    .map(|r| count_stabilizer_pcm(m, n, r))
                    .sum::<Result<_, _>>()?,
            }
            .to_string();
            (json!({ "kind": "pcm", "m": m, "n": n, "rank": rank, "count": c }), c)
        }
    };
    Ok(match format {
        Format::Json => pretty(&v),
        _ => total + "\n",
    })
}
