//! The `liehom` command line: catalog inspection, classification of single
//! pairs, canonical forms, table regeneration and the verification suites.
//!
//! [`run`] returns the process exit code: 0 on success, 1 when a
//! verification finds a mismatch, 2 on usage or input errors.

pub mod checks;
mod pool;
pub mod tables;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use canonical::{CanonError, Sheet};
use catalog::{Catalog, CatalogError, Params, Variant};
use clap::{Parser, Subcommand, ValueEnum};
use classify::{ClassifyError, ClassifyOptions};
use scalarlin::{parse_rational, RatVec, Rational};
use serde_json::{json, Map, Value};
use thiserror::Error;
use vfields::VfError;

pub use checks::{Check, Suite, VerifyOptions};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Canon(#[from] CanonError),
    #[error(transparent)]
    Vf(#[from] VfError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Md,
}

#[derive(Debug, Parser)]
#[command(name = "liehom", version, about = "Low-dimensional homogeneous spaces from Lie algebra data")]
pub struct Cli {
    /// Seed for every randomised stage.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Tolerance for approximate comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Catalog file to use instead of the embedded one.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    /// Random trials in the admissibility search.
    #[arg(long, global = true, default_value_t = 256)]
    trials: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Inspect the catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogCommand,
    },
    /// Classify the pair spanned by one isotropy vector.
    Classify {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Comma-separated rationals, e.g. "1/2,0,1/2,1/2".
        #[arg(long)]
        isotropy: String,
        /// Complement vectors separated by `;`. Searched for when absent.
        #[arg(long)]
        complement: Option<String>,
    },
    /// Classify every listed representative of an algebra.
    Enumerate {
        #[command(flatten)]
        algebra: AlgebraArgs,
    },
    /// Bring a vector to its canonical representative.
    Canonicalize {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long)]
        vector: String,
    },
    /// Run verification suites.
    Verify {
        /// Suites to run; all of them when none is given.
        #[arg(value_enum)]
        suites: Vec<Suite>,
        /// Further suites, or `all`.
        #[arg(long = "suite", value_name = "SUITE")]
        extra: Vec<String>,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        jobs: Option<usize>,
        /// Print the regenerated tables instead of the report.
        #[arg(long)]
        emit: bool,
    },
    /// Vector-field realisations.
    Vf {
        #[command(subcommand)]
        action: VfCommand,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogCommand {
    /// One line per algebra.
    List,
    /// Brackets, parameters and constraints of one algebra.
    Show { key: String },
    /// The full catalog in its on-disk schema.
    Dump,
}

#[derive(Debug, Subcommand)]
enum VfCommand {
    Verify {
        /// Petrov id; every action when absent.
        #[arg(long)]
        id: Option<String>,
        #[arg(long, value_enum, default_value_t = VariantArg::Corrected)]
        variant: VariantArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Corrected,
    Typo,
}

#[derive(Debug, clap::Args)]
struct AlgebraArgs {
    /// Catalog key, e.g. "L(4,-7)" or "L(3,2,x)".
    #[arg(long)]
    algebra: String,
    /// Parameter binding `name=rational`; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
}

impl AlgebraArgs {
    fn params(&self) -> Result<Params, CliError> {
        self.params
            .iter()
            .map(|p| {
                let (k, v) = p.split_once('=').ok_or_else(|| CliError::Usage(format!("expected NAME=VALUE, got `{p}`")))?;
                Ok((k.trim().to_string(), rational(v)?))
            })
            .collect()
    }
}

fn rational(s: &str) -> Result<Rational, CliError> {
    parse_rational(s.trim()).ok_or_else(|| CliError::Usage(format!("`{}` is not a rational number", s.trim())))
}

fn parse_vector(s: &str) -> Result<RatVec, CliError> {
    s.split(',').map(rational).collect()
}

/// Output of one command.
enum Outcome {
    Value(Value),
    Text(String),
}

struct Report {
    outcome: Outcome,
    ok: bool,
}

impl Report {
    fn ok(v: Value) -> Self {
        Self { outcome: Outcome::Value(v), ok: true }
    }
}

/// Parses `argv` (program name first), runs the command and writes its
/// report to `out`. Diagnostics go to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let text = match report.outcome {
                Outcome::Value(v) => render(&v, cli.format),
                Outcome::Text(t) => t,
            };
            if let Err(e) = out.write_all(text.as_bytes()) {
                let _ = writeln!(err, "error: {e}");
                return 2;
            }
            if report.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn execute(cli: &Cli) -> Result<Report, CliError> {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", cli.tol)));
    }
    scalarlin::set_tolerance(cli.tol);
    let owned;
    let catalog = match &cli.catalog {
        Some(path) => {
            owned = Catalog::load(path)?;
            &owned
        }
        None => Catalog::embedded(),
    };
    let opts = ClassifyOptions { seed: cli.seed, trials: cli.trials };
    match &cli.command {
        Command::Catalog { action } => catalog_command(catalog, action, cli.format),
        Command::Classify { algebra, isotropy, complement } => {
            let g = catalog.get(&algebra.algebra, &algebra.params()?)?;
            let h0 = parse_vector(isotropy)?;
            let m = complement.as_deref().map(|c| c.split(';').map(parse_vector).collect::<Result<Vec<_>, _>>()).transpose()?;
            let r = classify::classify_pair(catalog, &g, &h0, m.as_deref(), opts)?;
            Ok(Report::ok(r.to_json()))
        }
        Command::Enumerate { algebra } => {
            let rows = canonical::enumerate_subalgebras(catalog, &algebra.algebra, &algebra.params()?, opts)?;
            let rows = rows
                .iter()
                .map(|e| {
                    let mut v = e.report.to_json();
                    if let Value::Object(m) = &mut v {
                        m.insert("representative".into(), json!(e.row.rep.to_string()));
                        m.insert("listed_petrov".into(), json!(e.row.petrov));
                    }
                    v
                })
                .collect();
            Ok(Report::ok(Value::Array(rows)))
        }
        Command::Canonicalize { algebra, vector } => {
            let (_, key, params) = catalog.get_routed(&algebra.algebra, &algebra.params()?)?;
            let sheet = Sheet::load(catalog, &key, &params)?;
            let v = canonical::exact(&parse_vector(vector)?);
            Ok(Report::ok(sheet.canonicalize(&v)?.to_json()))
        }
        Command::Verify { suites, extra, jobs, emit } => {
            let suites = selected_suites(suites, extra)?;
            let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            if jobs == 0 {
                return Err(CliError::Usage("--jobs must be at least 1".into()));
            }
            let vopts = VerifyOptions { seed: cli.seed, trials: cli.trials, ..VerifyOptions::default() };
            if *emit {
                return emit_tables(catalog, opts, cli.format);
            }
            let report = verify(catalog, &suites, &vopts, jobs);
            let ok = report["passed"] == json!(true);
            Ok(Report { outcome: Outcome::Value(report), ok })
        }
        Command::Vf { action: VfCommand::Verify { id, variant } } => {
            let variant = match variant {
                VariantArg::Corrected => Variant::Corrected,
                VariantArg::Typo => Variant::Typo,
            };
            let ids: Vec<String> = match id {
                Some(id) => vec![catalog.resolve_action_id(id)?],
                None if variant == Variant::Typo => catalog.typo_ids().into_iter().map(str::to_string).collect(),
                None => catalog.actions().map(|a| a.id.clone()).collect(),
            };
            let reports = ids.iter().map(|id| vfields::verify_action(catalog, id, variant)).collect::<Result<Vec<_>, _>>()?;
            let ok = reports.iter().all(|r| r.passes());
            Ok(Report { outcome: Outcome::Value(Value::Array(reports.iter().map(|r| r.to_json()).collect())), ok })
        }
    }
}

fn catalog_command(catalog: &Catalog, action: &CatalogCommand, format: Format) -> Result<Report, CliError> {
    match action {
        CatalogCommand::List => Ok(Report::ok(Value::Array(
            catalog
                .algebras()
                .iter()
                .map(|a| {
                    json!({
                        "key": a.key,
                        "dim": a.dim,
                        "params": a.params.join(","),
                        "constraints": a.constraints.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
                        "worksheet": catalog.worksheet(&a.key).is_ok(),
                    })
                })
                .collect(),
        ))),
        CatalogCommand::Show { key } => {
            let a = catalog.entry(key)?;
            let brackets: Map<String, Value> = a
                .brackets
                .iter()
                .map(|(i, j, v)| (format!("[e{i},e{j}]"), json!(v.iter().map(ToString::to_string).collect::<Vec<_>>())))
                .collect();
            Ok(Report::ok(json!({
                "key": a.key,
                "dim": a.dim,
                "params": a.params,
                "constraints": a.constraints.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "brackets": brackets,
                "decomposition": a.decomposition.as_ref().map(|d| json!({
                    "component": d.component,
                    "component_basis": d.component_basis,
                    "abelian": d.abelian,
                })),
            })))
        }
        CatalogCommand::Dump => {
            if format != Format::Json {
                return Err(CliError::Usage("catalog dump only writes json".into()));
            }
            Ok(Report { outcome: Outcome::Text(catalog.to_json()), ok: true })
        }
    }
}

fn selected_suites(positional: &[Suite], extra: &[String]) -> Result<Vec<Suite>, CliError> {
    let mut out: Vec<Suite> = positional.to_vec();
    for name in extra {
        if name == "all" {
            out.extend(Suite::ALL);
        } else {
            out.push(Suite::from_str(name, true).map_err(|_| CliError::Usage(format!("unknown suite `{name}`")))?);
        }
    }
    if out.is_empty() {
        out.extend(Suite::ALL);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Runs `suites` on `jobs` workers. The report lists checks in suite order
/// and then task order, whatever order they finish in.
pub fn verify(catalog: &Catalog, suites: &[Suite], opts: &VerifyOptions, jobs: usize) -> Value {
    let tasks: Vec<_> = suites.iter().flat_map(|&s| checks::tasks(catalog, s)).collect();
    let results = pool::run_ordered(&tasks, jobs, |t| t.run(catalog, opts));
    let passed = results.iter().all(Check::passed);
    json!({
        "seed": opts.seed,
        "suites": suites.iter().map(|s| s.name()).collect::<Vec<_>>(),
        "checks": results.iter().map(Check::to_json).collect::<Vec<_>>(),
        "passed": passed,
    })
}

fn emit_tables(catalog: &Catalog, opts: ClassifyOptions, format: Format) -> Result<Report, CliError> {
    let pairs = tables::regenerate_tables(catalog, opts)?;
    let ok = pairs.iter().all(|(golden, got)| tables::diff(golden, got).is_empty());
    let outcome = match format {
        Format::Json => Outcome::Value(Value::Array(pairs.iter().map(|(_, t)| t.to_json()).collect())),
        Format::Csv => Outcome::Text(pairs.iter().map(|(_, t)| format!("# {}\n{}", t.title, t.to_csv())).collect::<Vec<_>>().join("\n")),
        Format::Md => Outcome::Text(pairs.iter().map(|(_, t)| t.to_md()).collect::<Vec<_>>().join("\n")),
    };
    Ok(Report { outcome, ok })
}

/// Flattens a report for tabular formats: arrays of objects become rows,
/// an object becomes one row, and a `checks` list is tabulated on its own.
fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv | Format::Md => {
            let rows: Vec<&Map<String, Value>> = match v {
                Value::Array(items) => items.iter().filter_map(Value::as_object).collect(),
                Value::Object(m) => match m.get("checks") {
                    Some(Value::Array(items)) => items.iter().filter_map(Value::as_object).collect(),
                    _ => vec![m],
                },
                _ => Vec::new(),
            };
            let mut columns: Vec<&str> = Vec::new();
            for r in &rows {
                for k in r.keys() {
                    if !columns.contains(&k.as_str()) {
                        columns.push(k);
                    }
                }
            }
            let cell = |r: &Map<String, Value>, c: &str| match r.get(c) {
                None | Some(Value::Null) => String::new(),
                Some(Value::String(s)) => s.clone(),
                Some(other) => other.to_string(),
            };
            let cells: Vec<Vec<String>> = rows.iter().map(|r| columns.iter().map(|c| cell(r, c)).collect()).collect();
            let line = |cells: Vec<&str>| {
                if format == Format::Csv {
                    tables::csv_line(cells.into_iter())
                } else {
                    tables::md_line(cells.into_iter())
                }
            };
            let mut out = line(columns.clone());
            if format == Format::Md {
                out.push_str(&line(vec!["---"; columns.len()]));
            }
            for r in &cells {
                out.push_str(&line(r.iter().map(String::as_str).collect()));
            }
            out
        }
    }
}
