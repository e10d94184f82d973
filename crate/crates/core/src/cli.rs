//! The `minrel` command-line front end.
//!
//! Input is comma-separated UTF-8 with a header row; lines starting with `#`
//! are ignored. Every output starts with the effective configuration (JSON:
//! a `config` object; CSV: `# key=value` lines), so runs can be repeated.
//!
//! Exit codes: 0 success, 2 validation, 3 degenerate result under
//! `--strict`, 4 I/O failure.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::coeff::{self, CoefficientValue, Sign};
use crate::error::Error;
use crate::experiment::{self, ExperimentName};
use crate::matrix::{self, CoefficientMatrix, Dataset, Metric};
use crate::ranking::{self, Criterion, LeastSquares, TargetTask};
use crate::synth::{self, Family};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("degenerate result: {0}")]
    Degenerate(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Degenerate(_) => EXIT_DEGENERATE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NaPolicy {
    /// Reject missing or non-finite cells.
    Error,
    /// Drop every row holding a missing or non-finite cell.
    DropRows,
}

#[derive(Debug, Parser)]
#[command(name = "minrel", version, about = "Rank minrelation coefficient toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,

    /// Handling of missing or non-finite input cells.
    #[arg(long, global = true, value_enum, default_value = "error")]
    pub na: NaPolicy,

    /// Exit with code 3 when a coefficient is degenerate.
    #[arg(long, global = true)]
    pub strict: bool,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads (default: all cores). Does not affect results.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One coefficient between two columns.
    Coeff {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// pearson, spearman, iota, iota2, max_iota_sq or minrel_simple.
        #[arg(long, default_value = "iota")]
        metric: String,
        /// Signs applied to x and y before ranking (iota only), e.g. `+,-`.
        #[arg(long, allow_hyphen_values = true)]
        orientation: Option<String>,
    },
    /// Pairwise matrix over all columns.
    Matrix {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value = "iota")]
        metric: String,
    },
    /// Rank the other columns against a target.
    Rank {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        target: String,
        /// rho2, max_iota_sq or iota.
        #[arg(long, default_value = "max_iota_sq")]
        criterion: String,
        /// Comma-separated relevant columns; prints their average position.
        #[arg(long)]
        relevant: Option<String>,
    },
    /// Monte-Carlo reproduction of a toy-experiment table.
    Experiment {
        /// table2, table3 or table4.
        name: String,
        #[arg(long, default_value_t = 200)]
        reps: usize,
        #[arg(long, default_value_t = 1000)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Write a synthetic dataset as CSV.
    Gen {
        /// multiplication, linear, combined or triangle.
        family: String,
        #[arg(long, default_value_t = 1000)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Win/loss comparison of two criteria on targets with known relevant
    /// variables.
    Compare {
        /// Dataset; omit to use the built-in synthetic suite.
        #[arg(long)]
        input: Option<PathBuf>,
        /// `TARGET=REL1,REL2,...`, repeatable.
        #[arg(long = "task")]
        tasks: Vec<String>,
        #[arg(long, default_value = "max_iota_sq")]
        first: String,
        #[arg(long, default_value = "rho2")]
        second: String,
        /// Skip targets with fewer relevant variables.
        #[arg(long, default_value_t = 1)]
        min_relevant: usize,
        /// Number of synthetic datasets when no input is given.
        #[arg(long, default_value_t = 50)]
        datasets: usize,
        #[arg(long, default_value_t = 300)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Split-half ranking plus cross-validated least squares on top-k
    /// subsets.
    Cv {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        target: String,
        #[arg(long, default_value = "max_iota_sq")]
        criterion: String,
        /// Subset sizes, e.g. `2,3,5` or `2..10`.
        #[arg(long, default_value = "2..10")]
        sizes: String,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// Parses `args` (including the program name), runs the command and writes
/// its output to `out` unless `--output` is given. Diagnostics go to `err`.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    let body = match cli.global.threads {
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;
            pool.install(|| render(cli))?
        }
        None => render(cli)?,
    };
    match &cli.global.output {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            w.write_all(body.as_bytes())
                .and_then(|_| w.flush())
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => out
            .write_all(body.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

/// Formats a number with 12 significant digits, dropping trailing zeros.
pub fn fmt_sig(v: f64) -> String {
    let rounded: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> CliResult<T> {
    s.parse::<T>().map_err(CliError::from)
}

/// Effective configuration, echoed into every output.
fn config(cli: &Cli) -> Value {
    let g = &cli.global;
    let mut cfg = json!({
        "format": g.format,
        "na": g.na,
        "strict": g.strict,
        "ties": "average",
        "output": g.output.as_ref().map(|p| p.display().to_string()),
    });
    let input = |p: &Option<PathBuf>| p.as_ref().map_or("-".to_string(), |p| p.display().to_string());
    let extra = match &cli.command {
        Command::Coeff { input: i, x, y, metric, orientation } => json!({
            "command": "coeff", "input": input(i), "x": x, "y": y, "metric": metric,
            "orientation": orientation.clone().unwrap_or_else(|| "+,+".into()),
        }),
        Command::Matrix { input: i, metric } => json!({
            "command": "matrix", "input": input(i), "metric": metric,
        }),
        Command::Rank { input: i, target, criterion, relevant } => json!({
            "command": "rank", "input": input(i), "target": target, "criterion": criterion,
            "relevant": relevant,
        }),
        Command::Experiment { name, reps, m, seed } => json!({
            "command": "experiment", "name": name, "reps": reps, "m": m, "seed": seed,
        }),
        Command::Gen { family, m, seed } => json!({
            "command": "gen", "family": family, "m": m, "seed": seed,
        }),
        Command::Compare { input: i, tasks, first, second, min_relevant, datasets, m, seed } => {
            if i.is_some() {
                json!({
                    "command": "compare", "input": input(i), "tasks": tasks, "first": first,
                    "second": second, "min_relevant": min_relevant,
                })
            } else {
                json!({
                    "command": "compare", "input": "synthetic", "first": first, "second": second,
                    "datasets": datasets, "m": m, "seed": seed,
                })
            }
        }
        Command::Cv { input: i, target, criterion, sizes, folds, seed } => json!({
            "command": "cv", "input": input(i), "target": target, "criterion": criterion,
            "sizes": sizes, "folds": folds, "seed": seed, "regressor": "least_squares",
            "ridge_fallback": ranking::RIDGE_FALLBACK,
        }),
    };
    if let (Value::Object(cfg), Value::Object(extra)) = (&mut cfg, extra) {
        cfg.extend(extra);
    }
    cfg
}

/// `# key=value` lines for CSV output, keys sorted.
fn config_comments(cfg: &Value) -> String {
    let mut s = String::new();
    if let Value::Object(map) = cfg {
        for (k, v) in map {
            let v = match v {
                Value::String(s) => s.clone(),
                Value::Null => "-".into(),
                other => other.to_string(),
            };
            s.push_str(&format!("# {k}={v}\n"));
        }
    }
    s
}

fn json_doc(cfg: Value, result: Value) -> String {
    let mut s = serde_json::to_string_pretty(&json!({ "config": cfg, "result": result }))
        .expect("json serializes");
    s.push('\n');
    s
}

fn render(cli: &Cli) -> CliResult<String> {
    let cfg = config(cli);
    let format = cli.global.format;
    match &cli.command {
        Command::Coeff { input, x, y, metric, orientation } => {
            let ds = read_dataset(input, cli.global.na, Some(&[x.as_str(), y.as_str()]))?;
            cmd_coeff(&ds, x, y, metric, orientation.as_deref(), cli.global.strict, format, cfg)
        }
        Command::Matrix { input, metric } => {
            let ds = read_dataset(input, cli.global.na, None)?;
            cmd_matrix(&ds, metric, cli.global.strict, format, cfg)
        }
        Command::Rank { input, target, criterion, relevant } => {
            let ds = read_dataset(input, cli.global.na, None)?;
            cmd_rank(&ds, target, criterion, relevant.as_deref(), format, cfg)
        }
        Command::Experiment { name, reps, m, seed } => cmd_experiment(name, *reps, *m, *seed, format, cfg),
        Command::Gen { family, m, seed } => cmd_gen(family, *m, *seed, cfg),
        Command::Compare { input, tasks, first, second, min_relevant, datasets, m, seed } => {
            let first = parse::<Criterion>(first)?;
            let second = parse::<Criterion>(second)?;
            let record = match input {
                Some(_) => {
                    if tasks.is_empty() {
                        return Err(CliError::Validation("compare needs at least one --task".into()));
                    }
                    let tasks = tasks.iter().map(|t| parse::<TargetTask>(t)).collect::<CliResult<Vec<_>>>()?;
                    let ds = read_dataset(input, cli.global.na, None)?;
                    ranking::compare_criteria(&ds, &tasks, first, second, *min_relevant)?
                }
                None => ranking::synthetic_comparison(*datasets, *m, *seed, first, second)?,
            };
            Ok(render_record(&record, format, cfg))
        }
        Command::Cv { input, target, criterion, sizes, folds, seed } => {
            let ds = read_dataset(input, cli.global.na, None)?;
            let criterion = parse::<Criterion>(criterion)?;
            let sizes = parse_sizes(sizes, ds.n().saturating_sub(1))?;
            let summary = ranking::split_half_cv_eval(&ds, target, criterion, &sizes, *folds, *seed, &LeastSquares)?;
            Ok(match format {
                Format::Json => json_doc(cfg, serde_json::to_value(&summary).expect("serializable")),
                Format::Csv => {
                    let mut s = config_comments(&cfg);
                    s.push_str("size,mse,features\n");
                    for row in &summary.per_size {
                        s.push_str(&format!("{},{},{}\n", row.size, fmt_sig(row.mse), row.features.join(" ")));
                    }
                    s.push_str(&format!("# mean_mse={}\n", fmt_sig(summary.mean_mse)));
                    s.push_str(&format!("# ridge_used={}\n", summary.ridge_used));
                    s
                }
            })
        }
    }
}

/// `2,3,5` or `2..10` (inclusive); a range is clipped to `max`.
fn parse_sizes(s: &str, max: usize) -> CliResult<Vec<usize>> {
    let bad = || CliError::Validation(format!("bad subset sizes `{s}`"));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        let sizes: Vec<usize> = (lo..=hi.min(max)).collect();
        if sizes.is_empty() {
            return Err(bad());
        }
        Ok(sizes)
    } else {
        s.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect()
    }
}

fn parse_orientation(s: Option<&str>) -> CliResult<(Sign, Sign)> {
    let Some(s) = s else {
        return Ok((Sign::Pos, Sign::Pos));
    };
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [a, b] => Ok((parse::<Sign>(a)?, parse::<Sign>(b)?)),
        _ => Err(CliError::Validation(format!("orientation `{s}` must be two signs like `+,-`"))),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_coeff(
    ds: &Dataset,
    x: &str,
    y: &str,
    metric: &str,
    orientation: Option<&str>,
    strict: bool,
    format: Format,
    cfg: Value,
) -> CliResult<String> {
    let metric = parse::<Metric>(metric)?;
    let (sx, sy) = parse_orientation(orientation)?;
    if (sx, sy) != (Sign::Pos, Sign::Pos) && metric != Metric::Iota {
        return Err(CliError::Validation("--orientation applies to metric iota only".into()));
    }
    let (xv, yv) = (ds.column(x)?, ds.column(y)?);
    let value = match metric {
        Metric::Pearson => coeff::pearson(xv, yv)?,
        Metric::Spearman => coeff::spearman(xv, yv)?,
        Metric::Iota => coeff::iota_oriented(xv, yv, sx, sy)?,
        Metric::Iota2 => coeff::iota2(xv, yv)?,
        Metric::MaxIotaSq => CoefficientValue::new(coeff::max_iota_sq(xv, yv)?),
        Metric::MinrelSimple => coeff::minrel_simple(xv, yv)?,
    };
    if strict && value.degenerate {
        return Err(CliError::Degenerate(format!("{metric}({x}, {y})")));
    }
    Ok(match format {
        Format::Json => json_doc(
            cfg,
            json!({ "metric": metric, "value": value.value, "degenerate": value.degenerate, "m": ds.m() }),
        ),
        Format::Csv => format!(
            "{}metric,value,degenerate,m\n{},{},{},{}\n",
            config_comments(&cfg),
            metric,
            fmt_sig(value.value),
            value.degenerate,
            ds.m()
        ),
    })
}

fn cmd_matrix(ds: &Dataset, metric: &str, strict: bool, format: Format, cfg: Value) -> CliResult<String> {
    let metric = parse::<Metric>(metric)?;
    let mat = matrix::pairwise_matrix(ds, metric)?;
    if strict && mat.degenerate_mask().iter().any(|&d| d) {
        return Err(CliError::Degenerate(format!("{metric} matrix has degenerate cells")));
    }
    Ok(match format {
        Format::Json => json_doc(cfg, matrix_json(&mat)),
        Format::Csv => {
            let mut s = config_comments(&cfg);
            write_matrix_csv(&mut s, &mat, |i, j| fmt_sig(mat.value(i, j)));
            s.push_str("# degenerate\n");
            write_matrix_csv(&mut s, &mat, |i, j| u8::from(mat.is_degenerate(i, j)).to_string());
            s
        }
    })
}

fn write_matrix_csv(s: &mut String, mat: &CoefficientMatrix, cell: impl Fn(usize, usize) -> String) {
    s.push_str("name");
    for name in &mat.names {
        s.push(',');
        s.push_str(name);
    }
    s.push('\n');
    for (i, name) in mat.names.iter().enumerate() {
        s.push_str(name);
        for j in 0..mat.n() {
            s.push(',');
            s.push_str(&cell(i, j));
        }
        s.push('\n');
    }
}

fn matrix_json(mat: &CoefficientMatrix) -> Value {
    let nested = |f: &dyn Fn(usize, usize) -> Value| {
        let mut rows = serde_json::Map::new();
        for (i, ri) in mat.names.iter().enumerate() {
            let mut row = serde_json::Map::new();
            for (j, cj) in mat.names.iter().enumerate() {
                row.insert(cj.clone(), f(i, j));
            }
            rows.insert(ri.clone(), Value::Object(row));
        }
        Value::Object(rows)
    };
    json!({
        "metric": mat.metric,
        "names": mat.names,
        "values": nested(&|i, j| json!(mat.value(i, j))),
        "degenerate": nested(&|i, j| json!(mat.is_degenerate(i, j))),
    })
}

fn cmd_rank(
    ds: &Dataset,
    target: &str,
    criterion: &str,
    relevant: Option<&str>,
    format: Format,
    cfg: Value,
) -> CliResult<String> {
    let criterion = parse::<Criterion>(criterion)?;
    let ranking = ranking::rank_variables(ds, target, criterion)?;
    let relevance = relevant
        .map(|r| {
            let names: Vec<&str> = r.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            ranking::average_position(&ranking, &names)
        })
        .transpose()?;
    Ok(match format {
        Format::Json => json_doc(cfg, json!({ "ranking": ranking, "relevance": relevance })),
        Format::Csv => {
            let mut s = config_comments(&cfg);
            s.push_str("position,name,score\n");
            for (k, (name, score)) in ranking.ordered.iter().enumerate() {
                s.push_str(&format!("{},{},{}\n", k + 1, name, fmt_sig(*score)));
            }
            if let Some(rel) = relevance {
                s.push_str(&format!("# relevant={}\n", rel.relevant.join(",")));
                s.push_str(&format!("# avg_position={}\n", fmt_sig(rel.avg_position)));
            }
            s
        }
    })
}

fn cmd_experiment(name: &str, reps: usize, m: usize, seed: u64, format: Format, cfg: Value) -> CliResult<String> {
    let name = parse::<ExperimentName>(name)?;
    let report = experiment::run_experiment(name, reps, m, seed)?;
    Ok(match format {
        Format::Json => json_doc(cfg, serde_json::to_value(&report).expect("serializable")),
        Format::Csv => {
            let mut s = config_comments(&cfg);
            s.push_str("quantity,x,y,mean,std_err,reference,tolerance,result\n");
            for c in &report.cells {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    c.label,
                    c.x,
                    c.y,
                    fmt_sig(c.mean),
                    fmt_sig(c.std_err),
                    c.reference,
                    c.tolerance,
                    if c.pass { "pass" } else { "fail" }
                ));
            }
            for c in &report.checks {
                s.push_str(&format!(
                    "# check {}: {} ({})\n",
                    c.name,
                    if c.pass { "pass" } else { "fail" },
                    c.detail
                ));
            }
            s.push_str(&format!("# overall={}\n", if report.pass { "pass" } else { "fail" }));
            s
        }
    })
}

/// Data cells use the shortest representation that round-trips, so a
/// re-ingested file reproduces the generated values exactly.
fn cmd_gen(family: &str, m: usize, seed: u64, cfg: Value) -> CliResult<String> {
    let family = parse::<Family>(family)?;
    let generated = synth::generate(family, m, seed)?;
    let ds = &generated.dataset;
    let mut s = config_comments(&cfg);
    s.push_str(&ds.names().join(","));
    s.push('\n');
    for i in 0..ds.m() {
        let row: Vec<String> = ds.columns().iter().map(|c| format!("{}", c.values()[i])).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    Ok(s)
}

fn render_record(record: &ranking::WinLossRecord, format: Format, cfg: Value) -> String {
    match format {
        Format::Json => json_doc(cfg, serde_json::to_value(record).expect("serializable")),
        Format::Csv => {
            let mut s = config_comments(&cfg);
            s.push_str(&format!(
                "target,{}_avg_position,{}_avg_position,outcome\n",
                record.first, record.second
            ));
            for t in &record.outcomes {
                let outcome = match t.outcome {
                    ranking::Outcome::Win => "win",
                    ranking::Outcome::Loss => "loss",
                    ranking::Outcome::Draw => "draw",
                };
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    t.target,
                    fmt_sig(t.first_avg_position),
                    fmt_sig(t.second_avg_position),
                    outcome
                ));
            }
            s.push_str(&format!(
                "# {} wins={} {} wins={} draws={} skipped={}\n",
                record.first,
                record.wins,
                record.second,
                record.losses,
                record.draws,
                record.skipped.len()
            ));
            s
        }
    }
}

// ---------------------------------------------------------------------------
// CSV ingestion
// ---------------------------------------------------------------------------

/// Raw table: header names and, per column, parsed cells (`None` = missing
/// or non-finite).
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub names: Vec<String>,
    pub columns: Vec<Vec<Option<f64>>>,
    /// 1-based line number of each data row.
    pub lines: Vec<u64>,
}

pub fn parse_csv(reader: impl Read) -> CliResult<RawTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let names: Vec<String> = rdr
        .headers()
        .map_err(|e| CliError::Validation(format!("bad header: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();
    if names.is_empty() || names.iter().any(String::is_empty) {
        return Err(CliError::Validation("header has empty column names".into()));
    }
    let mut columns = vec![Vec::new(); names.len()];
    let mut lines = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| CliError::Validation(format!("bad csv: {e}")))?;
        let line = record.position().map_or(0, |p| p.line());
        for (col, (cell, name)) in record.iter().zip(&names).enumerate() {
            let parsed = match cell {
                "" | "NA" | "na" | "NaN" | "nan" => None,
                text => {
                    let v: f64 = text.parse().map_err(|_| {
                        CliError::Validation(format!(
                            "line {line}, column `{name}`: cannot parse `{text}` as a number"
                        ))
                    })?;
                    v.is_finite().then_some(v)
                }
            };
            columns[col].push(parsed);
        }
        lines.push(line);
    }
    Ok(RawTable { names, columns, lines })
}

impl RawTable {
    /// Builds a dataset from the selected columns (all when `None`),
    /// applying the missing-value policy listwise over those columns.
    pub fn into_dataset(self, na: NaPolicy, select: Option<&[&str]>) -> CliResult<Dataset> {
        let idx: Vec<usize> = match select {
            Some(names) => names
                .iter()
                .map(|n| {
                    self.names
                        .iter()
                        .position(|h| h == n)
                        .ok_or_else(|| CliError::Validation(format!("unknown column `{n}`")))
                })
                .collect::<CliResult<_>>()?,
            None => (0..self.names.len()).collect(),
        };
        let rows = self.lines.len();
        let mut keep = Vec::with_capacity(rows);
        for r in 0..rows {
            let missing = idx.iter().find(|&&c| self.columns[c][r].is_none());
            match (missing, na) {
                (None, _) => keep.push(r),
                (Some(&c), NaPolicy::Error) => {
                    return Err(CliError::Validation(format!(
                        "line {}, column `{}`: missing or non-finite value (use --na drop-rows to skip)",
                        self.lines[r], self.names[c]
                    )))
                }
                (Some(_), NaPolicy::DropRows) => {}
            }
        }
        let mut names = Vec::new();
        let mut columns = Vec::new();
        for &c in &idx {
            if names.contains(&self.names[c]) {
                continue;
            }
            names.push(self.names[c].clone());
            columns.push(keep.iter().map(|&r| self.columns[c][r].expect("kept rows are complete")).collect());
        }
        Ok(Dataset::new(names, columns)?)
    }
}

fn read_dataset(input: &Option<PathBuf>, na: NaPolicy, select: Option<&[&str]>) -> CliResult<Dataset> {
    let table = match input {
        Some(path) if path.as_os_str() != "-" => {
            let file = File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            parse_csv(file)?
        }
        _ => parse_csv(io::stdin().lock())?,
    };
    table.into_dataset(na, select)
}
