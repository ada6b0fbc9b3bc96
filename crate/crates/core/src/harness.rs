//! The `symtree` command line tool.
//!
//! [`run_cli`] parses arguments and dispatches to the `cmd_*` functions,
//! which are also usable directly. Every command is deterministic for a fixed
//! seed; timings are left out of report files unless `--timing` is given.

use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::bench::{benchmark, random_polynomial, recovered, sample, PolySpec, BENCHMARK_IDS, DEFAULT_COEFF_TOL};
use crate::dataset::{read_table, Dataset};
use crate::error::{Error, Result};
use crate::expression::{format_sig6, Expression};
use crate::fit::mae;
use crate::search::{grid_search, SearchConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

/// Default cap on filtered candidates per expansion.
pub const DESK_MAX_TERMS: usize = 5;
/// Default cap on leaves per generation.
pub const DESK_MAX_LEAVES: usize = 3;

pub const REPORT_HEADER: [&str; 11] = [
    "id",
    "tau",
    "min_i",
    "min_t",
    "extra_iters",
    "train_mae",
    "test_mae",
    "n_terms",
    "expr_size",
    "wall_ms",
    "expr",
];

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NonFiniteData | Error::EmptyData => EXIT_DATA,
        Error::NumericFailure | Error::IndeterminateTerm => EXIT_NUMERIC,
        Error::InvalidDimension(_)
        | Error::InvalidArgument(_)
        | Error::InvalidTerm { .. }
        | Error::UnknownBenchmark(_)
        | Error::Parse(_) => EXIT_USAGE,
    }
}

/// One fitted model with the configuration that produced it.
#[derive(Debug, Clone)]
pub struct RunReport {
    /// Benchmark id or dataset path.
    pub id: String,
    pub config: SearchConfig,
    pub train_mae: f64,
    pub test_mae: f64,
    pub wall_ms: u64,
    pub expression: Expression,
}

impl RunReport {
    pub fn n_terms(&self) -> usize {
        self.expression.len()
    }

    pub fn expression_size(&self) -> usize {
        self.expression.size()
    }

    pub fn expression_json(&self) -> String {
        self.expression.to_json()
    }

    pub fn record(&self) -> [String; 11] {
        [
            self.id.clone(),
            self.config.tau.to_string(),
            self.config.min_i.to_string(),
            self.config.min_t.to_string(),
            self.config.extra_iters.to_string(),
            format_sig6(self.train_mae),
            format_sig6(self.test_mae),
            self.n_terms().to_string(),
            self.expression_size().to_string(),
            self.wall_ms.to_string(),
            self.expression.render(),
        ]
    }
}

/// Writes the header and one line per report.
pub fn write_reports<W: Write>(w: W, reports: &[RunReport]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(REPORT_HEADER).map_err(csv_err)?;
    for r in reports {
        out.write_record(r.record()).map_err(csv_err)?;
    }
    out.flush().map_err(io_err)
}

/// Grid selection shared by every searching command.
#[derive(Debug, Clone, Args)]
pub struct GridOptions {
    /// Use the full 1350-configuration grid instead of the 24-entry desk grid.
    #[arg(long)]
    pub full_grid: bool,
    /// Filtered candidates kept per expansion (0 = unlimited).
    #[arg(long, default_value_t = DESK_MAX_TERMS)]
    pub max_terms: usize,
    /// Leaves kept per generation (0 = unlimited).
    #[arg(long, default_value_t = DESK_MAX_LEAVES)]
    pub max_leaves: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions {
            full_grid: false,
            max_terms: DESK_MAX_TERMS,
            max_leaves: DESK_MAX_LEAVES,
        }
    }
}

impl GridOptions {
    pub fn grid(&self) -> Vec<SearchConfig> {
        let base = if self.full_grid {
            SearchConfig::paper_grid()
        } else {
            SearchConfig::desk_grid()
        };
        let cap = |v: usize| (v > 0).then_some(v);
        base.into_iter()
            .map(|c| c.with_caps(cap(self.max_terms), cap(self.max_leaves)))
            .collect()
    }
}

#[derive(Debug, Clone, Args)]
pub struct FitOptions {
    /// Headed numeric CSV.
    pub data: PathBuf,
    /// Where to write the model JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Target column, by name or zero-based index (default: last).
    #[arg(long)]
    pub target_col: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    pub test_fraction: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Record wall time in the report instead of 0.
    #[arg(long)]
    pub timing: bool,
    #[command(flatten)]
    pub grid: GridOptions,
}

#[derive(Debug, Clone, Args)]
pub struct BenchmarkOptions {
    /// Comma-separated benchmark ids (default: all of F1..F17).
    #[arg(long, value_delimiter = ',')]
    pub ids: Vec<String>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Report CSV path (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record wall time in the report instead of 0.
    #[arg(long)]
    pub timing: bool,
    #[command(flatten)]
    pub grid: GridOptions,
}

#[derive(Debug, Clone, Args)]
pub struct PolyrecOptions {
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2])]
    pub dims: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 3])]
    pub orders: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2])]
    pub bases: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Recovery table CSV path (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub grid: GridOptions,
}

#[derive(Debug, Clone, Args)]
pub struct PredictOptions {
    /// Model JSON written by `fit`.
    pub model: PathBuf,
    /// Headed numeric CSV with one column per model variable.
    pub data: PathBuf,
    /// Column to drop before predicting, by name or zero-based index.
    #[arg(long)]
    pub target_col: Option<String>,
    /// Predictions CSV path (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(name = "symtree", version, about = "Interaction-Transformation symbolic regression")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a model to a CSV dataset.
    Fit(FitOptions),
    /// Run the analytic benchmark functions and write a report.
    Benchmark(BenchmarkOptions),
    /// Count exact recoveries of random polynomials.
    Polyrec(PolyrecOptions),
    /// Evaluate a saved model on a CSV dataset.
    Predict(PredictOptions),
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Fit(o) => cmd_fit(o, stdout, stderr).map(|_| ()),
        Command::Benchmark(o) => cmd_benchmark(o, stdout, stderr).map(|_| ()),
        Command::Polyrec(o) => cmd_polyrec(o, stdout, stderr).map(|_| ()),
        Command::Predict(o) => cmd_predict(o, stdout).map(|_| ()),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => stdout.write_all(bytes).map_err(io_err),
    }
}

fn elapsed_ms(start: Instant, timing: bool) -> u64 {
    if timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    }
}

/// Fits a CSV dataset: split, grid search on the training part, evaluate the
/// winner on the held-out part (or on the training part when none is held
/// out).
pub fn cmd_fit(o: &FitOptions, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<RunReport> {
    let data = Dataset::read_csv(open(&o.data)?, o.target_col.as_deref())?;
    let (train, test) = data.split(o.test_fraction, o.seed)?;
    let start = Instant::now();
    let (config, node) = grid_search(&train, &o.grid.grid())?;
    let wall_ms = elapsed_ms(start, o.timing);
    let expression = node.expression().clone();
    let test_mae = mae(&expression, test.as_ref().unwrap_or(&train))?;
    let report = RunReport {
        id: o.data.display().to_string(),
        config,
        train_mae: node.fit.train_mae,
        test_mae,
        wall_ms,
        expression,
    };
    if let Some(out) = &o.out {
        std::fs::write(out, report.expression_json())
            .map_err(|e| Error::Parse(format!("{}: {e}", out.display())))?;
    }
    if test.is_none() {
        let _ = writeln!(stderr, "note: no rows held out; test MAE is the training MAE");
    }
    writeln!(stdout, "expression: {}", report.expression.render()).map_err(io_err)?;
    writeln!(stdout, "train_mae: {}", format_sig6(report.train_mae)).map_err(io_err)?;
    writeln!(stdout, "test_mae: {}", format_sig6(report.test_mae)).map_err(io_err)?;
    Ok(report)
}

/// Samples each benchmark, grid-searches its training half and scores the
/// winner on the test half. Rows follow the order of `ids`.
pub fn cmd_benchmark(
    o: &BenchmarkOptions,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<Vec<RunReport>> {
    let ids: Vec<String> = if o.ids.is_empty() {
        BENCHMARK_IDS.iter().map(|s| s.to_string()).collect()
    } else {
        o.ids.iter().map(|s| s.trim().to_string()).collect()
    };
    let specs = ids
        .iter()
        .map(|id| benchmark(id))
        .collect::<Result<Vec<_>>>()?;
    let grid = o.grid.grid();
    let mut reports = Vec::with_capacity(specs.len());
    for spec in &specs {
        let (train, test) = sample(spec, o.seed)?;
        let start = Instant::now();
        let (config, node) = grid_search(&train, &grid)?;
        let wall_ms = elapsed_ms(start, o.timing);
        let expression = node.expression().clone();
        let test_mae = mae(&expression, &test)?;
        let _ = writeln!(stderr, "{}: test_mae={}", spec.id, format_sig6(test_mae));
        reports.push(RunReport {
            id: spec.id.to_string(),
            config,
            train_mae: node.fit.train_mae,
            test_mae,
            wall_ms,
            expression,
        });
    }
    let mut bytes = Vec::new();
    write_reports(&mut bytes, &reports)?;
    write_output(o.out.as_deref(), &bytes, stdout)?;
    Ok(reports)
}

/// Recovery counts for one (dim, order) row; `None` marks a base count above
/// the order.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryRow {
    pub dim: usize,
    pub order: u32,
    pub counts: Vec<Option<usize>>,
}

fn trial_seed(seed: u64, dim: usize, order: u32, base: usize, trial: usize) -> u64 {
    seed.wrapping_mul(1_000_003)
        .wrapping_add((dim * 1000 + order as usize * 100 + base * 10) as u64 * 1000)
        .wrapping_add(trial as u64)
}

/// Random polynomial recovery laid out with rows `dim x order` and one
/// column per base term count.
pub fn cmd_polyrec(o: &PolyrecOptions, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<Vec<RecoveryRow>> {
    for &d in &o.dims {
        if !(1..=3).contains(&d) {
            return Err(Error::InvalidArgument(format!("dimension {d} outside 1..=3")));
        }
    }
    for &k in &o.orders {
        if !(1..=4).contains(&k) {
            return Err(Error::InvalidArgument(format!("order {k} outside 1..=4")));
        }
    }
    for &b in &o.bases {
        if !(1..=4).contains(&b) {
            return Err(Error::InvalidArgument(format!("base term count {b} outside 1..=4")));
        }
    }
    let grid = o.grid.grid();
    let mut rows = Vec::new();
    for &dim in &o.dims {
        for &order in &o.orders {
            let mut counts = Vec::with_capacity(o.bases.len());
            for &base in &o.bases {
                if base > order as usize {
                    counts.push(None);
                    continue;
                }
                let mut hits = 0;
                for trial in 0..o.trials {
                    let spec = PolySpec::new(dim, order, base, trial_seed(o.seed, dim, order, base, trial));
                    let (target, train, _test) = random_polynomial(&spec)?;
                    let (_, node) = grid_search(&train, &grid)?;
                    if recovered(node.expression(), &target, DEFAULT_COEFF_TOL) {
                        hits += 1;
                    }
                }
                let _ = writeln!(stderr, "dim={dim} order={order} base={base}: {hits}/{}", o.trials);
                counts.push(Some(hits));
            }
            rows.push(RecoveryRow { dim, order, counts });
        }
    }
    let mut out = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["dim".to_string(), "order".to_string()];
    header.extend(o.bases.iter().map(|b| format!("base{b}")));
    out.write_record(&header).map_err(csv_err)?;
    for row in &rows {
        let mut rec = vec![row.dim.to_string(), row.order.to_string()];
        rec.extend(row.counts.iter().map(|c| match c {
            None => "--".to_string(),
            Some(_) if o.trials == 0 => String::new(),
            Some(h) => format!("{h}/{}", o.trials),
        }));
        out.write_record(&rec).map_err(csv_err)?;
    }
    let bytes = out.into_inner().map_err(|e| io_err(e.into_error()))?;
    write_output(o.out.as_deref(), &bytes, stdout)?;
    Ok(rows)
}

/// Evaluates a saved model on every row of a CSV file.
pub fn cmd_predict(o: &PredictOptions, stdout: &mut dyn Write) -> Result<Vec<f64>> {
    let json = std::fs::read_to_string(&o.model).map_err(|e| Error::Parse(format!("{}: {e}", o.model.display())))?;
    let model = Expression::from_json(&json)?;
    let table = read_table(open(&o.data)?)?;
    let drop = match o.target_col.as_deref() {
        None => None,
        Some(name) => Some(
            table
                .header
                .iter()
                .position(|h| h == name)
                .or_else(|| name.parse::<usize>().ok().filter(|&i| i < table.header.len()))
                .ok_or_else(|| Error::Parse(format!("no column `{name}`")))?,
        ),
    };
    let width = table.header.len() - usize::from(drop.is_some());
    if width != model.dim() {
        return Err(Error::InvalidArgument(format!(
            "model has {} variables but the data has {width} columns",
            model.dim()
        )));
    }
    let mut predictions = Vec::with_capacity(table.rows.len());
    let mut text = String::from("prediction\n");
    for row in &table.rows {
        let x: Vec<f64> = row
            .iter()
            .enumerate()
            .filter(|(j, _)| Some(*j) != drop)
            .map(|(_, v)| *v)
            .collect();
        let p = model.eval(&x)?;
        if p.is_finite() {
            text.push_str(&format!("{p}\n"));
        } else {
            text.push_str("nan\n");
        }
        predictions.push(p);
    }
    write_output(o.out.as_deref(), text.as_bytes(), stdout)?;
    Ok(predictions)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

fn io_err(e: io::Error) -> Error {
    Error::Parse(e.to_string())
}
