//! Command-line front end. One JSON object (or one TSV row) per run on
//! stdout; warnings on stderr. Exit codes: 0 success, 1 domain error,
//! 2 usage error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::assumptions::{check_assumptions, AssumptionParams};
use crate::beta::{approx_beta, solve_beta, BetaState, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::cumulant::DEFAULT_TUPLE_BUDGET;
use crate::error::{Error, Result};
use crate::estimate::{
    beta_state, default_sigma, edge_probability_estimate, estimate_log_count, BetaSource,
    EstimateOptions,
};
use crate::exact::{exact_edge_probability, exact_factor_count_with_budget, DEFAULT_STATE_BUDGET};
use crate::graph::{complete_graph, parse_edge_list, parse_graph6, DegreeSequence, Graph};
use crate::regular::rg_log_expansion;
use crate::selftest::run_selftest;

#[derive(Debug, Parser)]
#[command(
    name = "factorx",
    version,
    about = "Count and estimate d-factors of graphs"
)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,
    /// Worker threads for the cumulant stage (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    Edgelist,
    Graph6,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact number of d-factors.
    Exact {
        #[command(flatten)]
        input: Instance,
        /// Maximum number of DP states.
        #[arg(long, default_value_t = DEFAULT_STATE_BUDGET as u128)]
        budget: u128,
    },
    /// Asymptotic estimate from the cumulant expansion.
    Estimate {
        #[command(flatten)]
        input: Instance,
        /// Target accuracy exponent: the error is O(n^-p) (default 1).
        #[arg(long)]
        p: Option<f64>,
        /// Density exponent (default derived from the degree margins).
        #[arg(long)]
        sigma: Option<f64>,
        /// Largest Taylor order kept in the exponent (overrides p).
        #[arg(long)]
        ell0: Option<usize>,
        /// Highest cumulant order (overrides p).
        #[arg(long)]
        r0: Option<usize>,
        /// Maximum number of term tuples per cumulant.
        #[arg(long, default_value_t = DEFAULT_TUPLE_BUDGET)]
        budget: u128,
        #[command(flatten)]
        solver: Solver,
    },
    /// Expansion for the number of d-regular graphs on n vertices.
    Regular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 7)]
        k: usize,
        /// Allow the conjectured terms k = 8, 9.
        #[arg(long)]
        conjectural: bool,
    },
    /// Solve the beta-equations.
    Beta {
        #[command(flatten)]
        input: Instance,
        #[command(flatten)]
        solver: Solver,
    },
    /// Probability that edge uv lies in a uniform random d-factor.
    Edgeprob {
        #[command(flatten)]
        input: Instance,
        /// 1-based endpoint.
        #[arg(long)]
        u: usize,
        /// 1-based endpoint.
        #[arg(long)]
        v: usize,
        /// Also compute the exact probability.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        solver: Solver,
    },
    /// Evaluate the hypotheses of the estimate on an instance.
    Check {
        #[command(flatten)]
        input: Instance,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long = "B", default_value_t = AssumptionParams::default().b)]
        b: f64,
        #[arg(long = "C", default_value_t = AssumptionParams::default().c)]
        c: f64,
        #[arg(long, default_value_t = AssumptionParams::default().tau_q)]
        tau_q: f64,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value_t = AssumptionParams::default().p)]
        p: f64,
        #[command(flatten)]
        solver: Solver,
    },
    /// Run the built-in checks.
    Selftest,
}

#[derive(Debug, Args)]
struct Instance {
    /// Use the complete graph on N vertices.
    #[arg(
        long,
        value_name = "N",
        conflicts_with = "graph",
        required_unless_present = "graph"
    )]
    kn: Option<usize>,
    /// Read the graph from a file.
    #[arg(long, value_name = "PATH")]
    graph: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = GraphFormat::Edgelist)]
    format: GraphFormat,
    /// Every target degree equals D.
    #[arg(long, value_name = "D", group = "degree_source")]
    regular: Option<usize>,
    /// Comma- or space-separated target degrees.
    #[arg(long, value_name = "LIST", group = "degree_source")]
    degrees: Option<String>,
    /// File of target degrees.
    #[arg(long, value_name = "PATH", group = "degree_source")]
    degrees_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Solver {
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
    /// Use the closed-form approximate beta instead of solving.
    #[arg(long)]
    approx: bool,
}

impl Solver {
    fn source(&self) -> BetaSource {
        if self.approx {
            BetaSource::Approx
        } else {
            BetaSource::Solve {
                tol: self.tol,
                max_iter: self.max_iter,
            }
        }
    }
}

impl Instance {
    fn load(&self) -> Result<(Graph, DegreeSequence)> {
        let g = match (&self.kn, &self.graph) {
            (Some(n), _) => complete_graph(*n)?,
            (None, Some(path)) => {
                let text = read(path)?;
                match self.format {
                    GraphFormat::Edgelist => parse_edge_list(&text)?,
                    GraphFormat::Graph6 => parse_graph6(&text)?,
                }
            }
            (None, None) => return Err(Error::domain("no graph given")),
        };
        let d = if let Some(r) = self.regular {
            DegreeSequence::regular(g.n(), r)
        } else if let Some(list) = &self.degrees {
            parse_degrees(list)?
        } else if let Some(path) = &self.degrees_file {
            parse_degrees(&read(path)?)?
        } else {
            return Err(Error::domain(
                "no degree sequence given; use --regular, --degrees or --degrees-file",
            ));
        };
        if d.len() != g.n() {
            return Err(Error::Dimension {
                expected: g.n(),
                found: d.len(),
            });
        }
        Ok((g, d))
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::domain(format!("cannot read {}: {e}", path.display())))
}

fn parse_degrees(text: &str) -> Result<DegreeSequence> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let d = tok.parse::<usize>().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("invalid degree {tok:?}"),
            })?;
            out.push(d);
        }
    }
    Ok(DegreeSequence::new(out))
}

fn one_based(g: &Graph, x: usize, name: &str) -> Result<usize> {
    if x < 1 || x > g.n() {
        return Err(Error::domain(format!(
            "--{name} {x} is not a vertex of G (1..={})",
            g.n()
        )));
    }
    Ok(x - 1)
}

fn solve_state(g: &Graph, d: &DegreeSequence, solver: &Solver) -> Result<BetaState> {
    if solver.approx {
        BetaState::from_beta(g, d, approx_beta(g, d)?)
    } else {
        solve_beta(g, d, solver.tol, solver.max_iter)
    }
}

/// Runs the CLI on `argv` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    if let Some(t) = cli.threads {
        // the global pool can only be built once per process
        if rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .is_err()
        {
            let _ = writeln!(
                err,
                "warning: thread pool already initialised; --threads ignored"
            );
        }
    }
    let format = cli.output;
    match dispatch(cli.command, err) {
        Ok((value, code)) => {
            let _ = emit(out, err, &value, format);
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn dispatch(command: Command, err: &mut dyn Write) -> Result<(Value, i32)> {
    let value = match command {
        Command::Exact { input, budget } => {
            let (g, d) = input.load()?;
            let budget = usize::try_from(budget).unwrap_or(usize::MAX);
            let count = exact_factor_count_with_budget(&g, &d, budget)?;
            json!({ "count": count.to_string() })
        }
        Command::Estimate {
            input,
            p,
            sigma,
            ell0,
            r0,
            budget,
            solver,
        } => {
            let (g, d) = input.load()?;
            let opts = EstimateOptions {
                p,
                sigma,
                ell0,
                r0,
                budget,
                beta: solver.source(),
                parallel: true,
            };
            let e = estimate_log_count(&g, &d, &opts)?;
            let s = e.scientific();
            let mut v = serde_json::to_value(&e).map_err(json_error)?;
            v["mantissa"] = json!(s.mantissa_string(11));
            v["exponent"] = json!(s.exponent);
            v
        }
        Command::Regular {
            n,
            d,
            k,
            conjectural,
        } => {
            let r = rg_log_expansion(n, d, k, conjectural)?;
            if r.conjectural {
                let _ = writeln!(err, "warning: terms p_8 and p_9 are conjectural");
            }
            let s = r.scientific();
            let mut v = serde_json::to_value(&r).map_err(json_error)?;
            v["n"] = json!(n);
            v["d"] = json!(d);
            v["mantissa"] = json!(s.mantissa_string(11));
            v["exponent"] = json!(s.exponent);
            v
        }
        Command::Beta { input, solver } => {
            let (g, d) = input.load()?;
            let state = solve_state(&g, &d, &solver)?;
            let mut v = serde_json::to_value(&state).map_err(json_error)?;
            v["delta_inf"] = json!(state.delta_inf());
            v["delta_l1"] = json!(state.delta_l1());
            v
        }
        Command::Edgeprob {
            input,
            u,
            v,
            exact,
            solver,
        } => {
            let (g, d) = input.load()?;
            let (u, v) = (one_based(&g, u, "u")?, one_based(&g, v, "v")?);
            if !g.has_edge(u, v) {
                return Err(Error::domain(format!(
                    "{{{}, {}}} is not an edge of G",
                    u + 1,
                    v + 1
                )));
            }
            let state = beta_state(&g, &d, solver.source())?;
            let mut out = Map::new();
            out.insert("u".into(), json!(u + 1));
            out.insert("v".into(), json!(v + 1));
            out.insert(
                "estimate".into(),
                json!(edge_probability_estimate(&g, &state, u, v)?),
            );
            if exact {
                let p = exact_edge_probability(&g, &d, u, v)?;
                let approx = num_traits::ToPrimitive::to_f64(&p);
                out.insert("exact".into(), json!(p.to_string()));
                out.insert("exact_value".into(), json!(approx));
            }
            Value::Object(out)
        }
        Command::Check {
            input,
            sigma,
            b,
            c,
            tau_q,
            eps,
            p,
            solver,
        } => {
            let (g, d) = input.load()?;
            let sigma = match sigma {
                Some(s) => s,
                None => default_sigma(&g, &d)?,
            };
            let params = AssumptionParams {
                sigma,
                b,
                c,
                tau_q,
                eps: eps.unwrap_or(sigma / 32.0),
                p,
            };
            let beta = match solve_state(&g, &d, &solver) {
                Ok(s) => s.beta,
                Err(e) => {
                    let _ = writeln!(
                        err,
                        "warning: beta solve failed ({e}); using approximate beta"
                    );
                    approx_beta(&g, &d)?
                }
            };
            let report = check_assumptions(&g, &d, &beta, &params)?;
            let failures = report.failures();
            let _ = if failures.is_empty() {
                writeln!(err, "all assumption clauses hold")
            } else {
                writeln!(err, "failing clauses: {}", failures.join("; "))
            };
            let mut v = serde_json::to_value(&report).map_err(json_error)?;
            v["params"] = serde_json::to_value(params).map_err(json_error)?;
            v["all_pass"] = json!(report.all_pass());
            v
        }
        Command::Selftest => {
            let report = run_selftest();
            for c in &report.checks {
                let _ = writeln!(
                    err,
                    "{} {}: {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            let code = if report.ok() { 0 } else { 1 };
            return Ok((serde_json::to_value(&report).map_err(json_error)?, code));
        }
    };
    Ok((value, 0))
}

fn json_error(e: serde_json::Error) -> Error {
    Error::domain(format!("serialisation failed: {e}"))
}

fn emit(
    out: &mut dyn Write,
    err: &mut dyn Write,
    value: &Value,
    format: OutputFormat,
) -> std::io::Result<()> {
    match format {
        OutputFormat::Json => writeln!(out, "{value}"),
        OutputFormat::Tsv => {
            let mut cols = Vec::new();
            flatten("", value, &mut cols);
            let (keys, vals): (Vec<String>, Vec<String>) = cols.into_iter().unzip();
            writeln!(err, "{}", keys.join("\t"))?;
            writeln!(out, "{}", vals.join("\t"))
        }
    }
}

/// Dotted keys for nested objects; arrays of scalars become comma lists.
fn flatten(prefix: &str, value: &Value, cols: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, cols);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let joined: Vec<String> = items.iter().map(scalar).collect();
            cols.push((prefix.to_string(), joined.join(",")));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), v, cols);
            }
        }
        other => cols.push((prefix.to_string(), scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}
