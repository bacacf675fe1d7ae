//! The `regfree` command line.
//!
//! Exit status: 0 on success, 2 when a result is inconclusive (a search
//! budget or column limit ran out, or a certificate was not issued), 1 on
//! error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bounds::{self, ChainReport, Density};
use crate::construction::{build, explicit_params, paper_params, LayeredGraph};
use crate::density::{
    prefix_certificate_3reg_bipartite, prefix_certificate_4reg, CertificateOutcome, Verdict,
};
use crate::error::{Error, Result};
use crate::experiment::{self, Check, SweepConfig};
use crate::fractional::{chi_f_exact_with_limit, mwis, DEFAULT_COLUMN_LIMIT};
use crate::graph::{Graph, GraphFile};
use crate::hiprec::{Hp, SizeExpr};
use crate::rational::{self, Rational};
use crate::regular::{find_k_regular, Detection, DEFAULT_BUDGET};
use crate::subsample::{self, SubsampleParams};
use crate::weighting::Weighting;

#[derive(Parser, Debug)]
#[command(
    name = "regfree",
    version,
    about = "Layered random graphs without 4-regular subgraphs"
)]
pub struct Cli {
    /// Input graph file.
    #[arg(long = "in", global = true, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a layered graph. Suggested desk-scale ladders shrink by a
    /// factor of 4 to 32 per layer, e.g. 256,64,16,4 or 4096,256,16.
    Construct(ConstructArgs),
    /// Prefix-density certificate of 4-regular (or bipartite 3-regular) freeness.
    Certify(CertifyArgs),
    /// Exact search for a k-regular subgraph.
    DetectRegular(DetectArgs),
    /// Fractional chromatic number, exact or as a weighted lower bound.
    Chif(ChifArgs),
    /// Degeneracy and a witnessing ordering.
    Degeneracy,
    /// Random triangle-free subsampling trials.
    Subsample(SubsampleArgs),
    /// Replay the probability estimates at high precision.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Run checks over a range of seeds.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    /// Comma-separated layer sizes.
    #[arg(
        long,
        value_delimiter = ',',
        conflicts_with = "paper_n",
        required_unless_present = "paper_n"
    )]
    pub sizes: Vec<usize>,
    /// Derive the sizes from n, e.g. 'e^e^40'.
    #[arg(long)]
    pub paper_n: Option<String>,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    #[arg(long, default_value = "11/10")]
    pub threshold: String,
}

#[derive(Args, Debug)]
pub struct DetectArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WeightChoice {
    /// `1/|B_i|` on layer `B_i`.
    Paper,
    Uniform,
}

#[derive(Args, Debug)]
pub struct ChifArgs {
    #[arg(long, conflicts_with = "lower_bound")]
    pub exact: bool,
    #[arg(long)]
    pub lower_bound: bool,
    #[arg(long, value_enum, default_value_t = WeightChoice::Paper)]
    pub weights: WeightChoice,
    #[arg(long, default_value_t = DEFAULT_COLUMN_LIMIT)]
    pub column_limit: usize,
}

#[derive(Args, Debug)]
pub struct SubsampleArgs {
    #[arg(long, default_value = "1/4")]
    pub p: String,
    /// Back-degree threshold; defaults to the degeneracy.
    #[arg(long)]
    pub threshold: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    #[arg(long, value_enum, default_value_t = WeightChoice::Uniform)]
    pub weights: WeightChoice,
}

#[derive(Subcommand, Debug)]
pub enum BoundsCommand {
    Reg {
        #[arg(long)]
        n: String,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        x: u64,
    },
    Frac {
        #[arg(long)]
        n: String,
        #[arg(long)]
        i: usize,
        /// A rational in [ln C / C, 1], or `min` for ln C / C.
        #[arg(long, default_value = "min")]
        p: String,
    },
    Union {
        #[arg(long)]
        n: String,
    },
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', required_unless_present = "replay")]
    pub sizes: Vec<usize>,
    /// Half-open range such as `0..100`.
    #[arg(long, default_value = "0..10")]
    pub seeds: String,
    #[arg(long, value_delimiter = ',', default_value = "degeneracy")]
    pub checks: Vec<String>,
    #[arg(long, default_value = "11/10")]
    pub threshold: String,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, default_value = "1/4")]
    pub subsample_p: String,
    #[arg(long)]
    pub subsample_threshold: Option<usize>,
    /// Where to write the CSV summary; printed after the records otherwise.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Re-run the records in this file and report any that differ.
    #[arg(long, value_name = "FILE")]
    pub replay: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    Inconclusive,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Inconclusive => 2,
        }
    }
}

/// Parses `args` (program name first) and runs the command, writing results
/// to `stdout` unless `--out` is given. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli, stdout) {
        Ok(status) => status.code(),
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

fn read_graph_file(cli: &Cli) -> Result<GraphFile> {
    let path = cli
        .input
        .as_ref()
        .ok_or_else(|| Error::Param("--in is required for this command".into()))?;
    GraphFile::from_json(&fs::read_to_string(path)?)
}

struct Output<'a> {
    path: Option<&'a Path>,
    stdout: &'a mut dyn Write,
}

impl Output<'_> {
    fn write(&mut self, text: &str) -> Result<()> {
        match self.path {
            Some(p) => fs::write(p, text)?,
            None => self.stdout.write_all(text.as_bytes())?,
        }
        Ok(())
    }

    fn json<T: Serialize>(&mut self, value: &T) -> Result<()> {
        self.write(&(serde_json::to_string_pretty(value)? + "\n"))
    }

    fn csv(&mut self, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| Error::Format(e.to_string());
        w.write_record(header).map_err(fail)?;
        for r in rows {
            w.write_record(&r).map_err(fail)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
        self.write(&String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn weights_for(file: &GraphFile, g: &Graph, choice: WeightChoice) -> Result<Weighting> {
    match choice {
        WeightChoice::Uniform => Ok(Weighting::uniform(g.vertex_count())),
        WeightChoice::Paper => Ok(LayeredGraph::from_file(file)?.paper_weighting()),
    }
}

fn parse_seeds(s: &str) -> Result<std::ops::Range<u64>> {
    let bad = || Error::Parse {
        what: "seed range",
        input: s.to_string(),
    };
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    Ok(a..b)
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<Status> {
    let mut out = Output {
        path: cli.out.as_deref(),
        stdout,
    };
    let csv = cli.format == Format::Csv;
    let seed = cli.seed.unwrap_or(0);
    match &cli.command {
        Command::Construct(args) => {
            let params = match &args.paper_n {
                Some(expr) => {
                    let mut hp = Hp::from_env();
                    let pp = paper_params(&SizeExpr::parse(expr)?, &mut hp)?;
                    match pp.to_construction(seed, &mut hp) {
                        Ok(p) => p,
                        Err(e) => {
                            let report = pp.report(&mut hp);
                            let reason = match e {
                                Error::Param(m) => m,
                                other => other.to_string(),
                            };
                            return Err(Error::Param(format!(
                                "{reason}; regime parameters: {}",
                                serde_json::to_string(&report)?
                            )));
                        }
                    }
                }
                None => explicit_params(&args.sizes, seed)?,
            };
            let lg = build(&params)?;
            out.write(&(lg.to_file().to_json() + "\n"))?;
            Ok(Status::Success)
        }
        Command::Certify(args) => {
            let lg = LayeredGraph::from_file(&read_graph_file(cli)?)?;
            let threshold = rational::parse(&args.threshold)?;
            let outcome = match args.k {
                4 => prefix_certificate_4reg(&lg, &threshold),
                3 => prefix_certificate_3reg_bipartite(&lg, &threshold),
                k => {
                    return Err(Error::Param(format!(
                        "certificates exist for k = 3 and k = 4, not {k}"
                    )))
                }
            };
            if csv {
                out.csv(&certificate_header(), certificate_rows(&outcome))?;
            } else {
                out.json(&outcome)?;
            }
            Ok(match outcome.verdict {
                Verdict::Certified => Status::Success,
                Verdict::Inconclusive => Status::Inconclusive,
            })
        }
        Command::DetectRegular(args) => {
            if args.k == 0 || args.budget == 0 {
                return Err(Error::Param("k and budget must be positive".into()));
            }
            let g = read_graph_file(cli)?.graph()?;
            let report = find_k_regular(&g, args.k, args.budget);
            let j = report.to_json();
            if csv {
                let size = j
                    .witness
                    .as_ref()
                    .map_or(String::new(), |w| w.vertices.len().to_string());
                out.csv(
                    &["outcome", "nodes_expanded", "witness_vertices"],
                    vec![vec![j.outcome.clone(), j.nodes_expanded.to_string(), size]],
                )?;
            } else {
                out.json(&j)?;
            }
            Ok(match report.outcome {
                Detection::BudgetExceeded => Status::Inconclusive,
                _ => Status::Success,
            })
        }
        Command::Chif(args) => {
            let file = read_graph_file(cli)?;
            let g = file.graph()?;
            if args.lower_bound {
                let w = weights_for(&file, &g, args.weights)?;
                let total = w.total();
                if total == Rational::from_integer(0.into()) {
                    return Err(Error::ZeroWeight);
                }
                let (set, best) = mwis(&g, &w);
                let bound = &total / &best;
                let value = json!({
                    "lower_bound": rational::to_string(&bound),
                    "total_weight": rational::to_string(&total),
                    "mwis_weight": rational::to_string(&best),
                    "independent_set": set,
                });
                if csv {
                    out.csv(
                        &["lower_bound", "total_weight", "mwis_weight"],
                        vec![vec![
                            rational::to_string(&bound),
                            rational::to_string(&total),
                            rational::to_string(&best),
                        ]],
                    )?;
                } else {
                    out.json(&value)?;
                }
                return Ok(Status::Success);
            }
            match chi_f_exact_with_limit(&g, args.column_limit) {
                Ok(r) => {
                    if csv {
                        let rows = r
                            .primal
                            .columns
                            .iter()
                            .map(|c| {
                                let set: Vec<String> =
                                    c.set.iter().map(|v| v.to_string()).collect();
                                vec![set.join(" "), rational::to_string(&c.coefficient)]
                            })
                            .collect();
                        out.csv(&["column", "coefficient"], rows)?;
                    } else {
                        out.json(&json!({
                            "chi_f": rational::to_string(&r.value),
                            "columns": r.primal.columns,
                            "dual": r.dual,
                        }))?;
                    }
                    Ok(Status::Success)
                }
                Err(Error::ColumnLimitExceeded {
                    limit,
                    lower,
                    upper,
                }) => {
                    out.json(&json!({
                        "chi_f": null,
                        "column_limit": limit,
                        "lower": rational::to_string(&lower),
                        "upper": rational::to_string(&upper),
                    }))?;
                    Ok(Status::Inconclusive)
                }
                Err(e) => Err(e),
            }
        }
        Command::Degeneracy => {
            let g = read_graph_file(cli)?.graph()?;
            let (d, ord) = g.degeneracy();
            if csv {
                let rows = ord
                    .order
                    .iter()
                    .enumerate()
                    .map(|(i, v)| vec![i.to_string(), v.to_string()])
                    .collect();
                out.csv(&["position", "vertex"], rows)?;
            } else {
                out.json(&json!({"degeneracy": d, "ordering": ord.order}))?;
            }
            Ok(Status::Success)
        }
        Command::Subsample(args) => {
            let file = read_graph_file(cli)?;
            let g = file.graph()?;
            let (degen, ord) = g.degeneracy();
            let threshold = args.threshold.unwrap_or(degen.max(1));
            let params = SubsampleParams::new(rational::parse(&args.p)?, threshold, seed)?;
            let w = weights_for(&file, &g, args.weights)?;
            let summary = subsample::run_trials(&g, &ord, &params, &w, args.trials)?;
            if csv {
                let rows = summary
                    .x_sizes
                    .iter()
                    .zip(&summary.retained_weights)
                    .enumerate()
                    .map(|(t, (s, wt))| {
                        vec![
                            params.seed.wrapping_add(t as u64).to_string(),
                            s.to_string(),
                            rational::to_string(wt),
                        ]
                    })
                    .collect();
                out.csv(&["seed", "x_size", "retained_weight"], rows)?;
            } else {
                out.json(&json!({
                    "params": params,
                    "degeneracy": degen,
                    "total_weight": rational::to_string(&w.total()),
                    "summary": summary,
                }))?;
            }
            Ok(Status::Success)
        }
        Command::Bounds(b) => {
            let mut hp = Hp::from_env();
            let report = run_bounds(b, &mut hp)?;
            if csv {
                let rows = report
                    .steps
                    .iter()
                    .map(|s| {
                        vec![
                            s.label.clone(),
                            format!("{:?}", s.kind).to_lowercase(),
                            s.scale.clone(),
                            s.left.clone(),
                            s.right.clone(),
                            s.holds.to_string(),
                        ]
                    })
                    .collect();
                out.csv(&["label", "kind", "scale", "left", "right", "holds"], rows)?;
            } else {
                out.json(&report)?;
            }
            Ok(Status::Success)
        }
        Command::Sweep(args) => run_sweep(args, &mut out, csv),
    }
}

fn run_bounds(b: &BoundsCommand, hp: &mut Hp) -> Result<ChainReport> {
    match b {
        BoundsCommand::Reg { n, i, x } => {
            let e = SizeExpr::parse(n)?;
            let r = bounds::reg_chain(&e, n, *i, *x, hp)?;
            bounds::with_reverification(r, |hp| bounds::reg_chain(&e, n, *i, *x, hp))
        }
        BoundsCommand::Frac { n, i, p } => {
            let e = SizeExpr::parse(n)?;
            let d = Density::parse(p)?;
            let r = bounds::frac_chain(&e, n, *i, &d, hp)?;
            bounds::with_reverification(r, |hp| bounds::frac_chain(&e, n, *i, &d, hp))
        }
        BoundsCommand::Union { n } => {
            let e = SizeExpr::parse(n)?;
            let r = bounds::union_bounds(&e, n, hp)?;
            bounds::with_reverification(r, |hp| bounds::union_bounds(&e, n, hp))
        }
    }
}

fn run_sweep(args: &SweepArgs, out: &mut Output<'_>, csv: bool) -> Result<Status> {
    if let Some(path) = &args.replay {
        let records = experiment::parse_ndjson(&fs::read_to_string(path)?)?;
        let mismatched = experiment::replay(&records)?;
        out.json(&json!({
            "records": records.len(),
            "mismatched_seeds": mismatched,
            "reproduced": mismatched.is_empty(),
        }))?;
        return if mismatched.is_empty() {
            Ok(Status::Success)
        } else {
            Err(Error::Format(format!(
                "{} records did not reproduce",
                mismatched.len()
            )))
        };
    }
    let checks = args
        .checks
        .iter()
        .map(|c| c.parse())
        .collect::<Result<Vec<Check>>>()?;
    let mut cfg = SweepConfig::new(args.sizes.clone(), parse_seeds(&args.seeds)?, checks);
    cfg.threshold = rational::parse(&args.threshold)?;
    cfg.budget = args.budget;
    cfg.subsample_p = rational::parse(&args.subsample_p)?;
    cfg.subsample_threshold = args.subsample_threshold;
    let records = experiment::sweep(&cfg)?;
    let summary = experiment::summarize(&records);
    let ndjson = experiment::to_ndjson(&records);
    let summary_csv = experiment::summary_csv(&summary)?;
    match out.path {
        Some(p) => {
            let mut f = fs::OpenOptions::new().create(true).append(true).open(p)?;
            f.write_all(ndjson.as_bytes())?;
            let summary_path = args
                .summary
                .clone()
                .unwrap_or_else(|| p.with_extension("summary.csv"));
            fs::write(summary_path, &summary_csv)?;
        }
        None => {
            if let Some(sp) = &args.summary {
                fs::write(sp, &summary_csv)?;
                out.write(&ndjson)?;
            } else if csv {
                out.write(&summary_csv)?;
            } else {
                out.write(&ndjson)?;
                out.write(&summary_csv)?;
            }
        }
    }
    Ok(if records.iter().any(|r| r.is_inconclusive()) {
        Status::Inconclusive
    } else {
        Status::Success
    })
}

fn certificate_header() -> Vec<&'static str> {
    vec![
        "i",
        "prefix_vertices",
        "active",
        "worst_case_s",
        "tail_vertices",
        "side_condition",
        "max_density",
        "below_threshold",
    ]
}

fn certificate_rows(c: &CertificateOutcome) -> Vec<Vec<String>> {
    let opt = |o: Option<String>| o.unwrap_or_default();
    c.checks
        .iter()
        .map(|p| {
            vec![
                p.i.to_string(),
                p.prefix_vertices.to_string(),
                p.active.to_string(),
                opt(p.worst_case_s.map(|s| s.to_string())),
                p.tail_vertices.to_string(),
                opt(p.side_condition.map(|s| s.to_string())),
                opt(p.max_density.as_ref().map(rational::to_string)),
                p.below_threshold.to_string(),
            ]
        })
        .collect()
}
