//! The `bounds` command: single points, rate searches and sweeps.

use std::fmt::Write as _;
use std::num::NonZeroUsize;
use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use stabform_core::bounds::{asymptotic_rate, rate_search, Arithmetic, BoundEvaluator, ChannelSpec, Family};
use stabform_core::rational::{format_rational, parse_rational, to_f64, BigRational};

use crate::codec::dist_table_from_json;
use crate::error::{CliError, CliResult};
use crate::io::{pretty, read_json};
use crate::par::map_indices;
use crate::Format;

/// Largest `n` evaluated exactly unless `--float` or `--exact` says otherwise.
const EXACT_DEFAULT_MAX_N: u64 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Sweep {
    /// One row per `m = 0, …, n` at a single `n`.
    M,
    /// One row per listed `n`.
    N,
}

#[derive(Args, Debug)]
pub struct Target {
    /// Number of syndrome bits.
    #[arg(long, conflicts_with = "epsilon")]
    m: Option<u64>,
    /// Target error probability for a rate search.
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long, value_enum)]
    sweep: Option<Sweep>,
    /// Force exact rational arithmetic.
    #[arg(long, conflicts_with = "float")]
    exact: bool,
    /// Force floating point arithmetic.
    #[arg(long)]
    float: bool,
    /// Worker threads for sweeps.
    #[arg(long, default_value = "1")]
    threads: NonZeroUsize,
}

#[derive(Args, Debug)]
pub struct ClosedForm {
    /// Blocklength; a comma separated list with `--sweep n`.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<u64>,
    /// Channel parameter, as `num/den` or a decimal.
    #[arg(long)]
    delta: String,
    #[command(flatten)]
    target: Target,
}

#[derive(Args, Debug)]
pub struct Generic {
    /// Distribution table JSON.
    #[arg(long, value_name = "FILE")]
    dist: PathBuf,
    #[command(flatten)]
    target: Target,
}

#[derive(Subcommand, Debug)]
pub enum BoundsCommand {
    /// Independent erasures with probability delta.
    Erasure(ClosedForm),
    /// Depolarizing noise with probability delta.
    Depolarizing(ClosedForm),
    /// An explicit joint distribution of errors and side information.
    Generic(Generic),
}

/// A fully resolved request.
struct Plan {
    channel: ChannelSpec,
    family: Option<Family>,
    delta: Option<BigRational>,
    ns: Vec<u64>,
    arithmetic: Option<Arithmetic>,
}

enum Prob {
    Exact(BigRational),
    Float(f64),
}

impl Prob {
    fn approx(&self) -> f64 {
        match self {
            Prob::Exact(x) => to_f64(x),
            Prob::Float(x) => *x,
        }
    }

    fn json(&self) -> Value {
        match self {
            Prob::Exact(x) => json!(format_rational(x)),
            Prob::Float(x) => json!(x),
        }
    }

    fn cell(&self) -> String {
        match self {
            Prob::Exact(x) => format_rational(x),
            Prob::Float(x) => x.to_string(),
        }
    }
}

impl Plan {
    fn arithmetic(&self, n: u64) -> Arithmetic {
        self.arithmetic.unwrap_or(if n <= EXACT_DEFAULT_MAX_N {
            Arithmetic::Exact
        } else {
            Arithmetic::Float
        })
    }

    fn evaluator(&self, n: u64) -> CliResult<BoundEvaluator> {
        Ok(BoundEvaluator::new(&self.channel, n, self.arithmetic(n))?)
    }

    /// Leading fields shared by every JSON record.
    fn head(&self) -> Map<String, Value> {
        let mut head = Map::new();
        head.insert("channel".into(), json!(self.channel.name()));
        if let Some(d) = &self.delta {
            head.insert("delta".into(), json!(format_rational(d)));
        }
        head
    }
}

struct Point {
    n: u64,
    m: u64,
    rate: f64,
    p_conv: Prob,
    p_ach: Prob,
    exact: bool,
}

fn point(ev: &BoundEvaluator, n: u64, m: u64) -> CliResult<Point> {
    Ok(match ev.bounds_exact(m)? {
        Some(b) => Point {
            n,
            m,
            rate: b.rate(),
            p_conv: Prob::Exact(b.p_conv),
            p_ach: Prob::Exact(b.p_ach),
            exact: true,
        },
        None => {
            let b = ev.bounds_f64(m)?;
            Point {
                n,
                m,
                rate: b.rate(),
                p_conv: Prob::Float(b.p_conv),
                p_ach: Prob::Float(b.p_ach),
                exact: false,
            }
        }
    })
}

impl Point {
    const CSV_HEADER: &'static str = "n,m,rate,p_conv,p_ach,p_conv_approx,p_ach_approx,exact";

    fn json(&self, plan: &Plan) -> Value {
        let mut v = plan.head();
        v.insert("n".into(), json!(self.n));
        v.insert("m".into(), json!(self.m));
        v.insert("rate".into(), json!(self.rate));
        v.insert("p_conv".into(), self.p_conv.json());
        v.insert("p_ach".into(), self.p_ach.json());
        v.insert("exact".into(), json!(self.exact));
        v.insert("p_conv_approx".into(), json!(self.p_conv.approx()));
        v.insert("p_ach_approx".into(), json!(self.p_ach.approx()));
        Value::Object(v)
    }

    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.m,
            self.rate,
            self.p_conv.cell(),
            self.p_ach.cell(),
            self.p_conv.approx(),
            self.p_ach.approx(),
            self.exact
        )
    }
}

struct Rates {
    n: u64,
    epsilon: BigRational,
    m_ach: Option<u64>,
    m_conv: Option<u64>,
    r_ach: Option<f64>,
    r_conv: Option<f64>,
    asymptotic: Option<f64>,
    exact: bool,
}

fn rates(plan: &Plan, n: u64, epsilon: &BigRational) -> CliResult<Rates> {
    let ev = plan.evaluator(n)?;
    let search = rate_search(&ev, n, epsilon)?;
    // The expansion is only defined strictly inside (0, 1); report null
    // outside it rather than failing the whole run.
    let asymptotic = match (plan.family, &plan.delta) {
        (Some(f), Some(d)) => asymptotic_rate(f, n, to_f64(d), to_f64(epsilon)).ok(),
        _ => None,
    };
    Ok(Rates {
        n,
        epsilon: epsilon.clone(),
        m_ach: search.m_ach,
        m_conv: search.m_conv,
        r_ach: search.r_ach(),
        r_conv: search.r_conv(),
        asymptotic,
        exact: ev.is_exact(),
    })
}

fn cell<T: ToString>(x: Option<T>) -> String {
    x.map(|x| x.to_string()).unwrap_or_default()
}

impl Rates {
    const CSV_HEADER: &'static str = "n,epsilon,m_ach,m_conv,r_ach,r_conv,asymptotic,exact";

    fn json(&self, plan: &Plan) -> Value {
        let mut v = plan.head();
        v.insert("n".into(), json!(self.n));
        v.insert("epsilon".into(), json!(format_rational(&self.epsilon)));
        v.insert("m_ach".into(), json!(self.m_ach));
        v.insert("m_conv".into(), json!(self.m_conv));
        v.insert("r_ach".into(), json!(self.r_ach));
        v.insert("r_conv".into(), json!(self.r_conv));
        v.insert("asymptotic".into(), json!(self.asymptotic));
        v.insert("exact".into(), json!(self.exact));
        Value::Object(v)
    }

    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            format_rational(&self.epsilon),
            cell(self.m_ach),
            cell(self.m_conv),
            cell(self.r_ach),
            cell(self.r_conv),
            cell(self.asymptotic),
            self.exact
        )
    }
}

fn text(v: &Value) -> String {
    let mut s = String::new();
    for (k, x) in v.as_object().expect("records are objects") {
        let x = match x {
            Value::String(t) => t.clone(),
            Value::Null => "none".into(),
            other => other.to_string(),
        };
        writeln!(s, "{k}: {x}").unwrap();
    }
    s
}

fn table<R>(format: Format, header: &str, rows: &[R], json_of: impl Fn(&R) -> Value, csv_of: impl Fn(&R) -> String) -> String {
    match format {
        Format::Json => pretty(&Value::Array(rows.iter().map(json_of).collect())),
        _ => {
            let mut s = String::from(header);
            s.push('\n');
            for r in rows {
                s.push_str(&csv_of(r));
                s.push('\n');
            }
            s
        }
    }
}

fn single(format: Format, v: Value, header: &str, row: String) -> String {
    match format {
        Format::Json => pretty(&v),
        Format::Csv => format!("{header}\n{row}\n"),
        Format::Text => text(&v),
    }
}

fn usage(msg: &str) -> CliError {
    CliError::Usage(msg.into())
}

pub fn run(cmd: &BoundsCommand, format: Option<Format>) -> CliResult<String> {
    let (plan, target) = match cmd {
        BoundsCommand::Erasure(c) | BoundsCommand::Depolarizing(c) => {
            let delta = parse_rational(&c.delta)?;
            let (channel, family) = match cmd {
                BoundsCommand::Erasure(_) => (ChannelSpec::Erasure(delta.clone()), Family::Erasure),
                _ => (ChannelSpec::Depolarizing(delta.clone()), Family::Depolarizing),
            };
            let plan = Plan {
                channel,
                family: Some(family),
                delta: Some(delta),
                ns: c.n.clone(),
                arithmetic: None,
            };
            (plan, &c.target)
        }
        BoundsCommand::Generic(g) => {
            if g.target.float {
                return Err(usage("distribution tables are always evaluated exactly"));
            }
            if g.target.sweep == Some(Sweep::N) {
                return Err(usage("a distribution table fixes n; use --sweep m"));
            }
            let table = dist_table_from_json(&read_json(&g.dist)?)?;
            let plan = Plan {
                ns: vec![table.n() as u64],
                channel: ChannelSpec::Table(table),
                family: None,
                delta: None,
                arithmetic: None,
            };
            (plan, &g.target)
        }
    };
    let plan = Plan {
        arithmetic: match (target.exact, target.float) {
            (true, _) => Some(Arithmetic::Exact),
            (_, true) => Some(Arithmetic::Float),
            _ => None,
        },
        ..plan
    };
    let epsilon = target.epsilon.as_deref().map(parse_rational).transpose()?;
    let threads = target.threads;
    match target.sweep {
        None => {
            let format = format.unwrap_or(Format::Json);
            let [n] = plan.ns[..] else {
                return Err(usage("give a single --n, or use --sweep n"));
            };
            match (target.m, &epsilon) {
                (Some(m), None) => {
                    let p = point(&plan.evaluator(n)?, n, m)?;
                    Ok(single(format, p.json(&plan), Point::CSV_HEADER, p.csv()))
                }
                (None, Some(eps)) => {
                    let r = rates(&plan, n, eps)?;
                    Ok(single(format, r.json(&plan), Rates::CSV_HEADER, r.csv()))
                }
                _ => Err(usage("give exactly one of --m or --epsilon")),
            }
        }
        Some(Sweep::M) => {
            let format = format.unwrap_or(Format::Csv);
            let [n] = plan.ns[..] else {
                return Err(usage("--sweep m needs a single --n"));
            };
            if target.m.is_some() || epsilon.is_some() {
                return Err(usage("--sweep m covers every m; drop --m and --epsilon"));
            }
            let ev = plan.evaluator(n)?;
            let rows = map_indices(n as usize + 1, threads, |m| point(&ev, n, m as u64))?;
            Ok(table(format, Point::CSV_HEADER, &rows, |p| p.json(&plan), Point::csv))
        }
        Some(Sweep::N) => {
            let format = format.unwrap_or(Format::Csv);
            let ns = &plan.ns;
            match (target.m, &epsilon) {
                (Some(m), None) => {
                    let rows = map_indices(ns.len(), threads, |k| point(&plan.evaluator(ns[k])?, ns[k], m))?;
                    Ok(table(format, Point::CSV_HEADER, &rows, |p| p.json(&plan), Point::csv))
                }
                (None, Some(eps)) => {
                    let rows = map_indices(ns.len(), threads, |k| rates(&plan, ns[k], eps))?;
                    Ok(table(format, Rates::CSV_HEADER, &rows, |r| r.json(&plan), Rates::csv))
                }
                _ => Err(usage("--sweep n needs exactly one of --m or --epsilon")),
            }
        }
    }
}
