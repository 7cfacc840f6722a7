//! The `uniqsub` command line.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use chrono::Utc;
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds;
use crate::corpus::{ingest_corpus, IngestOptions};
use crate::enumerate::{enumerate_classes, polya_reports};
use crate::error::Error;
use crate::graph::{Graph, VertexMap};
use crate::graph6::{emit_graph6, parse_graph6_str};
use crate::process::{
    interval_from_scan, sample_trace, scan_classes, simulate_completion, supergraph_completion_prob,
    uniqueness_interval_probed, x_window,
};
use crate::record::{ExperimentRecord, TOOL_VERSION};
use crate::rng::{derive_seed, fresh_seed};
use crate::switch::{
    apply_switch, classify_degrees, default_schedule, find_switch, pairs_within, refine_t, refinement_holds,
    required_pairs, switch_probability, RefineStatus, SwitchContext,
};
use crate::unique::{estimate_unique_prob, f_max_exact, f_of_h, Universe};

#[derive(Parser, Debug, Serialize)]
#[command(name = "uniqsub", version, about = "Unique subgraphs, automorphisms and the random graph process")]
struct Cli {
    /// Seed for stochastic commands; generated and reported when absent.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "UNIQSUB_THREADS")]
    threads: Option<usize>,
    /// Append an experiment record (JSON line) to this file.
    #[arg(long, global = true)]
    record: Option<PathBuf>,
    /// JSON output (the only format; accepted for scripts).
    #[arg(long, global = true)]
    #[serde(skip)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
enum Command {
    /// One canonical graph6 line per isomorphism class on n vertices.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Unlabelled counts against 2^(n choose 2)/n! for n = 1..=max-n.
    Polya {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
    },
    /// f(H) for every host class on n vertices, with the maximiser.
    FExact {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        spanning: bool,
    },
    /// f(H) for one host.
    FOfH {
        #[arg(long)]
        g6: String,
        #[arg(long)]
        spanning: bool,
        #[arg(long)]
        allow_large: bool,
    },
    /// Monte-Carlo estimate of Pr[G(n,1/2) has a unique embedding into H].
    Estimate {
        #[arg(long)]
        g6: String,
        #[arg(long)]
        trials: u64,
    },
    /// Uniqueness intervals and X along random graph processes.
    Process {
        #[arg(long)]
        g6: String,
        #[arg(long, default_value_t = 1)]
        traces: u64,
        #[arg(long = "L", default_value_t = 1.0)]
        l: f64,
        /// Also scan every m and cross-check the binary search.
        #[arg(long)]
        scan_all: bool,
    },
    /// Simulated versus exact supergraph completion probability.
    Completion {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        e_h: usize,
        #[arg(long)]
        m_star: usize,
        #[arg(long)]
        m2: usize,
        #[arg(long, default_value_t = 100_000)]
        conditioned: u64,
    },
    /// Switch search for a bijection pi: V(Hc) -> V(G).
    Switch {
        #[arg(long)]
        hc: String,
        #[arg(long)]
        g: String,
        /// Comma-separated images pi(0),pi(1),...
        #[arg(long)]
        pi: String,
        /// Restrict candidates to pairs inside this G-vertex list.
        #[arg(long, value_delimiter = ',')]
        pairs: Option<Vec<usize>>,
        /// Report on one pair u,v.
        #[arg(long, value_delimiter = ',')]
        pair: Option<Vec<usize>>,
    },
    /// Degree classes and the refined independent set T.
    RefineT {
        #[arg(long)]
        hc: String,
        #[arg(long)]
        c: f64,
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<f64>>,
    },
    /// Closed-form bound evaluators.
    Bounds {
        #[command(subcommand)]
        bound: BoundCmd,
    },
    /// Parse a graph6 corpus file and report what it holds.
    IngestCheck {
        path: PathBuf,
        #[arg(long)]
        skip_bad: bool,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "bound")]
enum BoundCmd {
    PointMass {
        #[arg(long = "N")]
        big_n: u64,
    },
    ChernoffL {
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        n: usize,
    },
    Azuma(AzumaArgs),
    ExpectedEmbeddings {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        e_h: usize,
    },
    DensityDecay {
        #[arg(long)]
        e_h: usize,
        #[arg(long = "N")]
        big_n: usize,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        m_star: usize,
    },
    UnionBudget {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "e")]
        base: String,
    },
    /// exp(-C n^2 delta / (17 N)) < delta / (48 L)
    Final {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: f64,
        /// Defaults to the minimal Chernoff L for (delta, n).
        #[arg(long = "L")]
        l: Option<u64>,
    },
}

#[derive(Args, Debug, Serialize)]
struct AzumaArgs {
    #[arg(long)]
    t: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    b: Vec<f64>,
}

enum Payload {
    Json(Value),
    JsonLines(Vec<Value>),
    Text(Vec<String>),
}

impl Payload {
    fn to_value(&self) -> Value {
        match self {
            Payload::Json(v) => v.clone(),
            Payload::JsonLines(vs) => Value::Array(vs.clone()),
            Payload::Text(lines) => json!(lines),
        }
    }

    fn write(&self, out: &mut dyn Write) -> std::io::Result<()> {
        match self {
            Payload::Json(v) => writeln!(out, "{v}"),
            Payload::JsonLines(vs) => vs.iter().try_for_each(|v| writeln!(out, "{v}")),
            Payload::Text(lines) => lines.iter().try_for_each(|l| writeln!(out, "{l}")),
        }
    }
}

struct Outcome {
    payload: Payload,
    seeds: Vec<u64>,
}

impl Outcome {
    fn json(v: impl Serialize) -> Result<Self, Error> {
        Ok(Outcome {
            payload: Payload::Json(to_value(v)),
            seeds: Vec::new(),
        })
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("payloads serialize")
}

fn graph(g6: &str) -> Result<Graph, Error> {
    parse_graph6_str(g6.trim_end())
}

fn universe(spanning: bool) -> Universe {
    if spanning {
        Universe::SpanningOnly
    } else {
        Universe::AllSizes
    }
}

/// Runs the CLI with the given arguments (including the program name),
/// writing results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let msg = e.render().to_string();
            let _ = writeln!(err, "{}", json!({"error": {"kind": "usage", "message": msg.trim_end()}}));
            return 2;
        }
    };
    if let Err(e) = check_globals(&cli) {
        report_error(err, &e);
        return 2;
    }
    let started_at = Utc::now();
    let result = in_pool(cli.threads, || dispatch(&cli));
    let finished_at = Utc::now();
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            report_error(err, &e);
            return 2;
        }
    };
    if let Err(e) = outcome.payload.write(out) {
        report_error(err, &Error::from(e));
        return 1;
    }
    if let Some(path) = &cli.record {
        let rec = ExperimentRecord {
            command: command_name(&cli.command).to_string(),
            params: to_value(&cli),
            seeds: outcome.seeds.clone(),
            started_at,
            finished_at,
            result: outcome.payload.to_value(),
            version: TOOL_VERSION.to_string(),
        };
        if let Err(e) = rec.append_to(path) {
            report_error(err, &e);
            return 1;
        }
    }
    0
}

fn check_globals(cli: &Cli) -> Result<(), Error> {
    if cli.threads == Some(0) {
        return Err(Error::Domain("--threads must be at least 1".into()));
    }
    Ok(())
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

fn report_error(err: &mut dyn Write, e: &Error) {
    let mut obj = json!({"kind": e.kind(), "message": e.to_string()});
    match e {
        Error::Ingest { line, source } => {
            obj["line"] = json!(line);
            obj["cause"] = json!(source.kind());
        }
        Error::Graph6 { offset, .. } => obj["offset"] = json!(offset),
        _ => {}
    }
    let _ = writeln!(err, "{}", json!({ "error": obj }));
}

fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Enumerate { .. } => "enumerate",
        Command::Polya { .. } => "polya",
        Command::FExact { .. } => "f-exact",
        Command::FOfH { .. } => "f-of-h",
        Command::Estimate { .. } => "estimate",
        Command::Process { .. } => "process",
        Command::Completion { .. } => "completion",
        Command::Switch { .. } => "switch",
        Command::RefineT { .. } => "refine-t",
        Command::Bounds { .. } => "bounds",
        Command::IngestCheck { .. } => "ingest-check",
    }
}

fn seed_or_fresh(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(fresh_seed)
}

fn dispatch(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Enumerate { n, out } => {
            let lines: Vec<String> = enumerate_classes(*n)?.iter().map(|c| emit_graph6(&c.graph)).collect();
            match out {
                None => Ok(Outcome {
                    payload: Payload::Text(lines),
                    seeds: Vec::new(),
                }),
                Some(path) => {
                    let mut text = lines.join("\n");
                    text.push('\n');
                    std::fs::write(path, text)?;
                    Outcome::json(json!({"n": n, "count": lines.len(), "out": path}))
                }
            }
        }
        Command::Polya { max_n } => Outcome::json(json!({ "reports": polya_reports(*max_n)? })),
        Command::FExact { n, spanning } => Outcome::json(f_max_exact(*n, universe(*spanning))?),
        Command::FOfH {
            g6,
            spanning,
            allow_large,
        } => Outcome::json(f_of_h(&graph(g6)?, universe(*spanning), *allow_large)?),
        Command::Estimate { g6, trials } => {
            let seed = seed_or_fresh(cli.seed);
            let h = graph(g6)?;
            let est = estimate_unique_prob(&h, *trials, seed)?;
            let f = f_of_h(&h, Universe::AllSizes, false).ok();
            let mut v = to_value(&est);
            if let Some(f) = f {
                v["f"] = json!(f.f);
                v["f_exact"] = json!(f.f_exact);
            }
            Ok(Outcome {
                payload: Payload::Json(v),
                seeds: vec![seed],
            })
        }
        Command::Process {
            g6,
            traces,
            l,
            scan_all,
        } => {
            let seed = seed_or_fresh(cli.seed);
            let h = graph(g6)?;
            let n = h.order();
            let window = x_window(n, *l)?;
            let lines = (0..*traces)
                .into_par_iter()
                .map(|i| process_line(&h, derive_seed(seed, i), i, window, *l, *scan_all))
                .collect::<Result<Vec<Value>, Error>>()?;
            Ok(Outcome {
                payload: Payload::JsonLines(lines),
                seeds: vec![seed],
            })
        }
        Command::Completion {
            n,
            e_h,
            m_star,
            m2,
            conditioned,
        } => {
            let seed = seed_or_fresh(cli.seed);
            let total = crate::graph::pair_count(*n);
            let exact = supergraph_completion_prob(*e_h, total, *m_star, *m2)?;
            let sim = simulate_completion(*n, *e_h, *m_star, *m2, *conditioned, seed)?;
            let p = crate::numeric::ratio_to_f64(&exact);
            let sigma = (p * (1.0 - p) / sim.conditioned as f64).sqrt();
            Ok(Outcome {
                payload: Payload::Json(json!({
                    "n": n, "e_H": e_h, "N": total, "m_star": m_star, "m2": m2,
                    "exact": exact.to_string(), "exact_f64": p,
                    "conditioned": sim.conditioned, "completed": sim.completed,
                    "attempts": sim.attempts, "frequency": sim.frequency(),
                    "sigma": sigma, "seed": seed,
                })),
                seeds: vec![seed],
            })
        }
        Command::Switch {
            hc,
            g,
            pi,
            pairs,
            pair,
        } => switch_cmd(hc, g, pi, pairs.as_deref(), pair.as_deref()),
        Command::RefineT { hc, c, schedule } => {
            let hc = graph(hc)?;
            let cls = classify_degrees(&hc, *c)?;
            let schedule = schedule.clone().unwrap_or_else(|| default_schedule(cls.b_prime.len(), *c));
            let refined = refine_t(&hc, &cls.b_prime, &schedule)?;
            let holds = match (refined.status, refined.final_threshold) {
                (RefineStatus::Fixpoint, Some(t)) => Some(refinement_holds(&hc, &refined.t, t)),
                _ => None,
            };
            Outcome::json(json!({
                "classes": cls,
                "schedule": schedule,
                "refinement": refined,
                "postcondition_holds": holds,
            }))
        }
        Command::Bounds { bound } => Outcome::json(bound_cmd(bound)?),
        Command::IngestCheck { path, skip_bad } => {
            let mut reader = ingest_corpus(path, IngestOptions { skip_bad: *skip_bad })?;
            let mut by_order: BTreeMap<usize, usize> = BTreeMap::new();
            let mut graphs = 0usize;
            for g in reader.by_ref() {
                let g = g?;
                graphs += 1;
                *by_order.entry(g.order()).or_default() += 1;
            }
            Outcome::json(json!({
                "path": path,
                "graphs": graphs,
                "skipped": reader.skipped(),
                "lines": reader.line(),
                "by_order": by_order,
            }))
        }
    }
}

fn process_line(
    h: &Graph,
    seed: u64,
    index: u64,
    window: Option<(usize, usize)>,
    l: f64,
    scan_all: bool,
) -> Result<Value, Error> {
    let trace = sample_trace(h.order(), seed)?;
    let search = uniqueness_interval_probed(&trace, h)?;
    let x = window.map_or(0, |(a, b)| search.interval.overlap(a, b));
    let mut v = json!({
        "trace": index,
        "seed": seed,
        "interval": search.interval,
        "X": x,
        "L": l,
        "window": window,
        "probes": search.probes.len(),
        "verified": search.verified,
    });
    if scan_all {
        let classes = scan_classes(&trace, h)?;
        let non_increasing = classes.windows(2).all(|w| w[0] >= w[1]);
        let scanned = interval_from_scan(&classes);
        v["scan"] = json!({
            "non_increasing": non_increasing,
            "contiguous": scanned.is_some(),
            "agrees": scanned == Some(search.interval),
        });
    }
    Ok(v)
}

fn switch_cmd(
    hc: &str,
    g: &str,
    pi: &str,
    within: Option<&[usize]>,
    pair: Option<&[usize]>,
) -> Result<Outcome, Error> {
    let hc = graph(hc)?;
    let pi = VertexMap::parse_bijection(pi)?;
    let ctx = SwitchContext::new(hc.clone(), graph(g)?, pi.clone())?;
    let candidates = within.map(pairs_within);
    let found = find_switch(&ctx, candidates.as_deref())?;
    let describe = |u: usize, v: usize| -> Result<Value, Error> {
        let p = switch_probability(&hc, &pi, u, v)?;
        let switched = if ctx.pi_is_embedding() && crate::switch::is_pi_switch(&ctx, u, v)? {
            Some(apply_switch(&ctx, u, v)?.image().to_vec())
        } else {
            None
        };
        Ok(json!({
            "pair": [u, v],
            "is_switch": crate::switch::is_pi_switch(&ctx, u, v)?,
            "required_pairs": required_pairs(&hc, &pi, u, v)?,
            "probability_neg_log2": p.neg_log2,
            "probability": p.to_f64(),
            "switched_pi": switched,
        }))
    };
    let mut v = json!({
        "n": hc.order(),
        "pi": pi.image(),
        "pi_is_embedding": ctx.pi_is_embedding(),
        "first_switch": found.map(|(u, w)| describe(u, w)).transpose()?,
    });
    if let Some(p) = pair {
        let &[a, b] = p else {
            return Err(Error::Domain("--pair takes exactly two vertices u,v".into()));
        };
        v["query"] = describe(a, b)?;
    }
    Outcome::json(v)
}

fn bound_cmd(b: &BoundCmd) -> Result<bounds::BoundReport, Error> {
    match b {
        BoundCmd::PointMass { big_n } => bounds::point_mass_report(*big_n),
        BoundCmd::ChernoffL { delta, n } => bounds::chernoff_report(*delta, *n),
        BoundCmd::Azuma(a) => bounds::azuma_report(a.t, &a.b),
        BoundCmd::ExpectedEmbeddings { n, e_h } => bounds::expected_embeddings_report(*n, *e_h),
        BoundCmd::DensityDecay {
            e_h,
            big_n,
            steps,
            m_star,
        } => bounds::density_decay_report(*e_h, *big_n, *steps, *m_star),
        BoundCmd::UnionBudget { n, base } => bounds::union_budget_report(*n, bounds::LogBase::parse(base)?),
        BoundCmd::Final { c, n, delta, l } => bounds::final_inequality_report(*c, *n, *delta, *l),
    }
}
