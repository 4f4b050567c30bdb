//! Command-line front end: parse an experiment description, dispatch to the
//! library, and emit a deterministic CSV or JSON report.
//!
//! Output goes to `--output` (relative paths resolve against
//! `INFOCOMP_OUT_DIR` when set) or to stdout. Identical arguments and seeds
//! produce identical bytes. Exit codes: 0 success, 1 precondition violation
//! (for example `width` with m > 10), 2 malformed invocation or config.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DVector;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::function_values::{std_vs_all, GridModel, GridModelSpec};
use crate::information::{radius_nonadaptive, InformationMap};
use crate::l1_ball::{
    gelfand_width_bounds, rmse_sweep, separation_report, L1Vector,
};
use crate::randomized::{
    avg_case_error_closed_form, avg_case_error_mc_profile, sandwich_report, SphereSampler,
};
use crate::report::{fmt_float, Table};
use crate::sequence_model::{
    transform_information, truncated_radius_ladder, ModelSpace, SymbolicFunctional,
};
use crate::spectral::{worst_case_error, ProblemSpec};

/// Environment variable naming the default output directory for relative
/// `--output` paths.
pub const OUT_DIR_ENV: &str = "INFOCOMP_OUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "infocomp",
    version,
    about = "Minimal errors, radii of information, and randomized bounds at desk scale"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report file; stdout when omitted. Relative paths resolve against
    /// INFOCOMP_OUT_DIR when that variable is set.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the singular values of a spectrum
    Spectrum {
        /// Spectrum such as power-law:p=1:m=64 or explicit:2,2,1
        #[arg(long)]
        spectrum: SpectrumArg,
    },
    /// Radius of information for a problem and a functional list
    Radius {
        /// JSON problem description ({"kind": ...})
        #[arg(long)]
        problem: PathBuf,
        /// JSON array of coefficient arrays
        #[arg(long)]
        info: PathBuf,
    },
    /// Average-case errors on the sphere: closed form against Monte Carlo
    Avgcase {
        #[arg(long)]
        spectrum: SpectrumArg,
        /// Cardinalities, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Sphere dimension; defaults to the spectrum length
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Lower and upper bounds on the n-th minimal randomized error
    Sandwich {
        #[arg(long)]
        spectrum: SpectrumArg,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
    },
    /// Replace information by continuous information and compare radii
    Transform {
        /// Weight exponent of the sequence-space model
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        /// JSON array of symbolic functionals
        #[arg(long)]
        functionals: PathBuf,
        /// Truncation dimensions, strictly increasing
        #[arg(long, value_delimiter = ',', default_values_t = [16usize, 64, 256])]
        dims: Vec<usize>,
        /// Also write the transformation trace as JSON
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Empirical RMSE of the sign-based norm-squared estimator
    Mcnorm {
        /// Total l1 mass of the spread input vector
        #[arg(long, default_value_t = 0.9)]
        l1: f64,
        /// Input dimension
        #[arg(long, default_value_t = 16)]
        m: usize,
        /// JSON array overriding the input vector
        #[arg(long)]
        x: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 10_000)]
        reps: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Gelfand width of the l1 ball under n functionals
    Width {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Worst-case floor against randomized RMSE
    Separation {
        #[arg(long, default_value_t = 8)]
        m: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 10_000)]
        reps: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Best function values against best arbitrary functionals
    Stdinfo {
        /// JSON grid model ({"grid": ..., "gram": ..., "S": ...})
        #[arg(long, conflicts_with = "random_m")]
        model: Option<PathBuf>,
        /// Use a random model of this dimension instead
        #[arg(long, requires = "seed")]
        random_m: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
    },
    /// Run a JSON batch of experiments
    Batch {
        /// JSON file: {"experiments": [{"command": ..., ...}]}
        config: PathBuf,
    },
}

/// Compact spectrum syntax: `power-law:p=1:m=64` or `explicit:2,2,1`.
#[derive(Clone, Debug)]
struct SpectrumArg(ProblemSpec);

impl FromStr for SpectrumArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let mut parts = s.split(':');
        let kind = parts.next().unwrap_or_default();
        match kind {
            "power-law" => {
                let mut p = None;
                let mut m = None;
                for seg in parts {
                    let (key, value) = seg
                        .split_once('=')
                        .ok_or_else(|| format!("expected key=value, got '{seg}'"))?;
                    match key {
                        "p" => p = Some(value.parse::<f64>().map_err(|e| e.to_string())?),
                        "m" => m = Some(value.parse::<usize>().map_err(|e| e.to_string())?),
                        other => return Err(format!("unknown power-law key '{other}'")),
                    }
                }
                Ok(SpectrumArg(ProblemSpec::PowerLaw {
                    p: p.ok_or("power-law needs p=<real>")?,
                    m: m.ok_or("power-law needs m=<count>")?,
                }))
            }
            "explicit" => {
                let rest: Vec<&str> = parts.collect();
                if rest.len() != 1 || rest[0].is_empty() {
                    return Err("explicit needs a comma-separated value list".into());
                }
                let values = rest[0]
                    .split(',')
                    .map(|v| v.parse::<f64>().map_err(|e| e.to_string()))
                    .collect::<std::result::Result<Vec<f64>, _>>()?;
                Ok(SpectrumArg(ProblemSpec::Explicit { values }))
            }
            other => Err(format!(
                "unknown spectrum kind '{other}' (expected power-law or explicit)"
            )),
        }
    }
}

/// Error with the exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Malformed invocation, config, or IO problem: exit 2.
    Usage(String),
    /// A library precondition was violated: exit 1.
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Precondition(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Precondition(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Precondition(e.to_string())
    }
}

/// Parse and execute; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successful exits; real parse errors are 2.
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> std::result::Result<(), CliError> {
    match &cli.command {
        Command::Spectrum { spectrum } => {
            let s = spectrum.0.spectrum()?;
            let mut table = Table::new(vec!["i", "sigma"]);
            for (i, v) in s.values().iter().enumerate() {
                table.push_row(vec![(i + 1).to_string(), fmt_float(*v)]);
            }
            emit_table(&table, cli)
        }
        Command::Radius { problem, info } => {
            let spec: ProblemSpec = read_json(problem)?;
            let p = spec.problem()?;
            let rows: Vec<Vec<f64>> = read_json(info)?;
            let map = if rows.is_empty() {
                InformationMap::empty(p.source_dim())
            } else {
                InformationMap::from_nested(rows)?
            };
            let report = radius_nonadaptive(&p, &map)?;
            match cli.format {
                Format::Csv => {
                    let mut table = Table::new(vec!["radius", "kernel_dim"]);
                    table.push_row(vec![
                        fmt_float(report.radius),
                        report.kernel_dim.to_string(),
                    ]);
                    emit_table(&table, cli)
                }
                Format::Json => {
                    let witness: Vec<f64> =
                        report.witness.coefficients().iter().copied().collect();
                    emit_json(
                        &json!({
                            "radius": report.radius,
                            "kernel_dim": report.kernel_dim,
                            "witness": witness,
                        }),
                        cli,
                    )
                }
            }
        }
        Command::Avgcase {
            spectrum,
            n,
            m,
            samples,
            seed,
        } => {
            validate_grid(n)?;
            let s = spectrum.0.spectrum()?;
            let problem = spectrum.0.problem()?;
            let sphere_dim = m.unwrap_or(s.len());
            let mut sampler = SphereSampler::new(sphere_dim, *seed)?;
            let profile = avg_case_error_mc_profile(&problem, &mut sampler, *samples)?;
            let mut table = Table::new(vec![
                "n",
                "lower",
                "closed_form_avg",
                "mc_avg",
                "mc_se",
                "upper",
            ]);
            for &ni in n {
                if ni > sphere_dim {
                    return Err(Error::CardinalityOutOfRange {
                        n: ni,
                        dim: sphere_dim,
                    }
                    .into());
                }
                let closed = avg_case_error_closed_form(&s, ni, sphere_dim)?;
                let est = profile[ni];
                let lower = if ni >= 1 && 4 * ni <= s.len() {
                    fmt_float(sandwich_report(&s, ni)?.lower)
                } else {
                    String::new()
                };
                table.push_row(vec![
                    ni.to_string(),
                    lower,
                    fmt_float(closed),
                    fmt_float(est.value),
                    fmt_float(est.standard_error),
                    fmt_float(worst_case_error(&s, ni)),
                ]);
            }
            emit_table(&table, cli)
        }
        Command::Sandwich { spectrum, n } => {
            validate_grid(n)?;
            let s = spectrum.0.spectrum()?;
            let mut table = Table::new(vec!["n", "lower", "upper"]);
            for &ni in n {
                let bounds = sandwich_report(&s, ni)?;
                table.push_row(vec![
                    ni.to_string(),
                    fmt_float(bounds.lower),
                    fmt_float(bounds.upper),
                ]);
            }
            emit_table(&table, cli)
        }
        Command::Transform {
            q,
            functionals,
            dims,
            trace,
        } => {
            let space = ModelSpace::new(*q)?;
            let fns: Vec<SymbolicFunctional> = read_json(functionals)?;
            let ladder = truncated_radius_ladder(&fns, &space, dims)?;
            if let Some(trace_path) = trace {
                let t = transform_information(&fns, &space);
                let body = serde_json::to_string_pretty(&t)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                write_file(trace_path, &format!("{body}\n"))?;
            }
            let mut table = Table::new(vec!["d", "radius_input", "radius_transformed", "gap"]);
            for row in &ladder {
                table.push_row(vec![
                    row.dim.to_string(),
                    fmt_float(row.radius_input),
                    fmt_float(row.radius_transformed),
                    fmt_float(row.gap()),
                ]);
            }
            emit_table(&table, cli)
        }
        Command::Mcnorm {
            l1,
            m,
            x,
            n,
            reps,
            seed,
        } => {
            let input = match x {
                Some(path) => {
                    let coords: Vec<f64> = read_json(path)?;
                    L1Vector::new(DVector::from_vec(coords))?
                }
                None => L1Vector::spread(*l1, *m)?,
            };
            let rows = rmse_sweep(&input, n, *reps, *seed)?;
            let mut table = Table::new(vec!["n", "rmse", "envelope", "reps", "seed"]);
            for row in &rows {
                table.push_row(vec![
                    row.n.to_string(),
                    fmt_float(row.rmse),
                    fmt_float(row.envelope),
                    row.reps.to_string(),
                    row.seed.to_string(),
                ]);
            }
            emit_table(&table, cli)
        }
        Command::Width {
            m,
            n,
            restarts,
            seed,
        } => {
            let est = gelfand_width_bounds(*m, *n, *restarts, *seed)?;
            let mut table = Table::new(vec!["m", "n", "lower", "upper", "restarts", "seed"]);
            table.push_row(vec![
                m.to_string(),
                n.to_string(),
                fmt_float(est.lower_bound),
                fmt_float(est.upper_bound),
                restarts.to_string(),
                seed.to_string(),
            ]);
            emit_table(&table, cli)
        }
        Command::Separation { m, n, reps, seed } => {
            let rows = separation_report(*m, n, *reps, *seed)?;
            let mut table = Table::new(vec!["n", "wc_floor", "ran_rmse"]);
            for row in &rows {
                table.push_row(vec![
                    row.n.to_string(),
                    fmt_float(row.wc_floor),
                    row.ran_rmse.map(fmt_float).unwrap_or_default(),
                ]);
            }
            emit_table(&table, cli)
        }
        Command::Stdinfo {
            model,
            random_m,
            seed,
            n,
        } => {
            validate_grid(n)?;
            let grid_model = match (model, random_m) {
                (Some(path), None) => {
                    let spec: GridModelSpec = read_json(path)?;
                    spec.build()?
                }
                (None, Some(m)) => GridModel::random(*m, seed.unwrap_or(0))?,
                _ => {
                    return Err(CliError::Usage(
                        "stdinfo needs exactly one of --model or --random-m".into(),
                    ))
                }
            };
            let mut table = Table::new(vec!["n", "e_std", "e_all"]);
            for &ni in n {
                let cmp = std_vs_all(&grid_model, ni)?;
                table.push_row(vec![
                    ni.to_string(),
                    fmt_float(cmp.e_std),
                    fmt_float(cmp.e_all),
                ]);
            }
            emit_table(&table, cli)
        }
        Command::Batch { config } => {
            let batch: BatchConfig = read_json(config)?;
            for experiment in &batch.experiments {
                let args = experiment.to_args();
                let sub = Cli::try_parse_from(&args)
                    .map_err(|e| CliError::Usage(format!("batch entry: {e}")))?;
                execute(&sub)?;
            }
            Ok(())
        }
    }
}

fn validate_grid(grid: &[usize]) -> std::result::Result<(), CliError> {
    if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid.into());
    }
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> std::result::Result<T, CliError> {
    let body = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&body)
        .map_err(|e| CliError::Usage(format!("cannot parse {}: {e}", path.display())))
}

fn resolve_output(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
            if !dir.is_empty() {
                return PathBuf::from(dir).join(path);
            }
        }
    }
    path.to_path_buf()
}

fn write_file(path: &Path, content: &str) -> std::result::Result<(), CliError> {
    let target = resolve_output(path);
    std::fs::write(&target, content)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", target.display())))
}

fn emit(content: &str, cli: &Cli) -> std::result::Result<(), CliError> {
    match &cli.output {
        Some(path) => write_file(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn emit_table(table: &Table, cli: &Cli) -> std::result::Result<(), CliError> {
    match cli.format {
        Format::Csv => emit(&table.to_csv(), cli),
        Format::Json => {
            let value = table_to_json(table);
            emit_json(&value, cli)
        }
    }
}

fn emit_json(value: &Value, cli: &Cli) -> std::result::Result<(), CliError> {
    let body = serde_json::to_string_pretty(value).map_err(|e| CliError::Usage(e.to_string()))?;
    emit(&format!("{body}\n"), cli)
}

fn table_to_json(table: &Table) -> Value {
    // Values stay strings: the CSV and JSON bodies then agree digit for
    // digit.
    let csv = table.to_csv();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap_or_default().split(',').collect();
    let rows: Vec<Value> = lines
        .map(|line| {
            let mut obj = serde_json::Map::new();
            for (key, cell) in header.iter().zip(line.split(',')) {
                obj.insert((*key).to_string(), Value::String(cell.to_string()));
            }
            Value::Object(obj)
        })
        .collect();
    Value::Array(rows)
}

#[derive(Debug, Deserialize)]
struct BatchConfig {
    experiments: Vec<ExperimentConfig>,
}

/// One batch entry; fields mirror the subcommand flags.
#[derive(Debug, Deserialize)]
struct ExperimentConfig {
    command: String,
    #[serde(default)]
    spectrum: Option<String>,
    #[serde(default)]
    problem: Option<String>,
    #[serde(default)]
    info: Option<String>,
    #[serde(default)]
    functionals: Option<String>,
    #[serde(default)]
    model: Option<String>,
    #[serde(default)]
    random_m: Option<usize>,
    #[serde(default)]
    q: Option<f64>,
    #[serde(default)]
    m: Option<usize>,
    #[serde(default)]
    n: Option<OneOrMany>,
    #[serde(default)]
    dims: Option<OneOrMany>,
    #[serde(default)]
    l1: Option<f64>,
    #[serde(default)]
    x: Option<String>,
    #[serde(default)]
    reps: Option<usize>,
    #[serde(default)]
    restarts: Option<usize>,
    #[serde(default)]
    samples: Option<usize>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    trace: Option<String>,
    #[serde(default)]
    output: Option<String>,
    #[serde(default)]
    format: Option<String>,
}

impl ExperimentConfig {
    fn to_args(&self) -> Vec<String> {
        let mut args = vec!["infocomp".to_string(), self.command.clone()];
        let mut push_opt = |flag: &str, value: Option<String>| {
            if let Some(v) = value {
                args.push(format!("--{flag}"));
                args.push(v);
            }
        };
        push_opt("spectrum", self.spectrum.clone());
        push_opt("problem", self.problem.clone());
        push_opt("info", self.info.clone());
        push_opt("functionals", self.functionals.clone());
        push_opt("model", self.model.clone());
        push_opt("random-m", self.random_m.map(|v| v.to_string()));
        push_opt("q", self.q.map(|v| v.to_string()));
        push_opt("m", self.m.map(|v| v.to_string()));
        push_opt("n", self.n.as_ref().map(OneOrMany::join));
        push_opt("dims", self.dims.as_ref().map(OneOrMany::join));
        push_opt("l1", self.l1.map(|v| v.to_string()));
        push_opt("x", self.x.clone());
        push_opt("reps", self.reps.map(|v| v.to_string()));
        push_opt("restarts", self.restarts.map(|v| v.to_string()));
        push_opt("samples", self.samples.map(|v| v.to_string()));
        push_opt("seed", self.seed.map(|v| v.to_string()));
        push_opt("trace", self.trace.clone());
        push_opt("output", self.output.clone());
        push_opt("format", self.format.clone());
        args
    }
}

/// Batch fields that take one count or a list of counts.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(usize),
    Many(Vec<usize>),
}

impl OneOrMany {
    fn join(&self) -> String {
        match self {
            OneOrMany::One(v) => v.to_string(),
            OneOrMany::Many(values) => values
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(","),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_arg_parsing() {
        let arg: SpectrumArg = "power-law:p=1:m=64".parse().unwrap();
        assert!(matches!(arg.0, ProblemSpec::PowerLaw { p, m } if p == 1.0 && m == 64));
        let arg: SpectrumArg = "explicit:2,2,1".parse().unwrap();
        assert!(matches!(arg.0, ProblemSpec::Explicit { ref values } if values.len() == 3));
        assert!("gaussian:p=1".parse::<SpectrumArg>().is_err());
        assert!("power-law:p=1".parse::<SpectrumArg>().is_err());
        assert!("explicit:".parse::<SpectrumArg>().is_err());
    }

    #[test]
    fn experiment_config_to_args() {
        let config: ExperimentConfig = serde_json::from_str(
            r#"{"command": "sandwich", "spectrum": "power-law:p=1:m=64", "n": [1, 2, 4]}"#,
        )
        .unwrap();
        assert_eq!(
            config.to_args(),
            vec![
                "infocomp",
                "sandwich",
                "--spectrum",
                "power-law:p=1:m=64",
                "--n",
                "1,2,4"
            ]
        );
    }

    #[test]
    fn table_json_mirrors_csv_cells() {
        let mut t = Table::new(vec!["n", "value"]);
        t.push_row(vec!["1".into(), fmt_float(0.5)]);
        let v = table_to_json(&t);
        assert_eq!(v[0]["n"], "1");
        assert_eq!(v[0]["value"], "5.00000000000e-1");
    }
}
