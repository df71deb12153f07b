//! Subcommands. Each writes its primary output to `out` and diagnostics to
//! `err`; numbers are printed with 9 decimal places.

use std::io::Write;
use std::path::{Path, PathBuf};

use bisim_core::{
    aggregation_report_with_metric, convergence_experiment, epsilon_partition, fixed_point_metric,
    greedy_policy, perturbation_bound, quotient_mdp, toy_mdp, validate_mdp, value_iteration,
    AggregationReport, ConvergenceRow, FiniteMdp,
};
use clap::{Parser, Subcommand};

use crate::document::MdpDocument;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Core(#[from] bisim_core::Error),
}

impl CliError {
    /// 1 for domain failures, 2 for I/O and parse failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Parse(_) => 2,
            CliError::Domain(_) | CliError::Core(_) => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "bisim",
    version,
    about = "Bisimulation metrics for finite MDPs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a document describes a valid MDP.
    Validate { path: PathBuf },
    /// Print the fixed-point bisimulation metric as a dense table.
    Metric {
        path: PathBuf,
        #[arg(short = 'c', long = "metric-discount", default_value_t = 0.9)]
        c: f64,
        #[arg(short, long, default_value_t = 1e-6)]
        epsilon: f64,
    },
    /// Optimal values and a greedy policy, as CSV.
    Solve {
        path: PathBuf,
        #[arg(short = 'g', long = "discount", default_value_t = 0.9)]
        gamma: f64,
        #[arg(short, long, default_value_t = 1e-9)]
        epsilon: f64,
    },
    /// Aggregate states into blocks of metric diameter at most `target`.
    Aggregate {
        path: PathBuf,
        #[arg(short = 'c', long = "metric-discount", default_value_t = 0.9)]
        c: f64,
        #[arg(short = 'g', long = "discount", default_value_t = 0.9)]
        gamma: f64,
        /// Largest allowed block diameter.
        #[arg(short, long)]
        target: f64,
        /// Accuracy of the metric used for blocking.
        #[arg(short, long, default_value_t = 1e-6)]
        epsilon: f64,
        /// Where to write the quotient MDP.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Discretize the interval model and compare against its closed forms.
    Toy {
        /// Grid sizes, comma separated.
        #[arg(value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(short = 'g', long = "discount", default_value_t = 0.5)]
        gamma: f64,
        #[arg(short = 'c', long = "metric-discount", default_value_t = 0.5)]
        c: f64,
        /// Write each discretized MDP; `-n<size>` is appended when several sizes are given.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare the metrics of two MDPs with the perturbation bound.
    Perturb {
        first: PathBuf,
        second: PathBuf,
        #[arg(short = 'c', long = "metric-discount", default_value_t = 0.9)]
        c: f64,
        #[arg(short, long, default_value_t = 1e-8)]
        epsilon: f64,
    },
}

/// Runs one command and returns the exit code for domain-level outcomes.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, CliError> {
    match &cli.command {
        Command::Validate { path } => validate(path, out),
        Command::Metric { path, c, epsilon } => metric(path, *c, *epsilon, out),
        Command::Solve {
            path,
            gamma,
            epsilon,
        } => solve(path, *gamma, *epsilon, out),
        Command::Aggregate {
            path,
            c,
            gamma,
            target,
            epsilon,
            output,
        } => aggregate(
            path,
            *c,
            *gamma,
            *target,
            *epsilon,
            output.as_deref(),
            out,
            err,
        ),
        Command::Toy {
            sizes,
            gamma,
            c,
            output,
        } => toy(sizes, *gamma, *c, output.as_deref(), out),
        Command::Perturb {
            first,
            second,
            c,
            epsilon,
        } => perturb(first, second, *c, *epsilon, out),
    }
}

fn load(path: &Path) -> Result<FiniteMdp, CliError> {
    let mdp = MdpDocument::read(path)?.to_mdp()?;
    let report = validate_mdp(&mdp);
    if report.is_valid() {
        Ok(mdp)
    } else {
        Err(CliError::Domain(format!(
            "{}: invalid MDP\n{report}",
            path.display()
        )))
    }
}

fn validate(path: &Path, out: &mut dyn Write) -> Result<u8, CliError> {
    let mdp = MdpDocument::read(path)?.to_mdp()?;
    let report = validate_mdp(&mdp);
    if report.is_valid() {
        writeln!(
            out,
            "valid: {} states, {} actions",
            mdp.n_states(),
            mdp.n_actions()
        )?;
        Ok(0)
    } else {
        write!(out, "{report}")?;
        if !report.to_string().ends_with('\n') {
            writeln!(out)?;
        }
        Ok(1)
    }
}

fn metric(path: &Path, c: f64, epsilon: f64, out: &mut dyn Write) -> Result<u8, CliError> {
    let mdp = load(path)?;
    let sol = fixed_point_metric(&mdp, c, epsilon)?;
    for row in sol.metric.rows() {
        let cells: Vec<String> = row.iter().map(|d| format!("{d:.9}")).collect();
        writeln!(out, "{}", cells.join(" "))?;
    }
    writeln!(out, "certified_error ≤ {:.9}", sol.certified_error)?;
    Ok(0)
}

fn solve(path: &Path, gamma: f64, epsilon: f64, out: &mut dyn Write) -> Result<u8, CliError> {
    let mdp = load(path)?;
    let sol = value_iteration(&mdp, gamma, epsilon)?;
    let policy = greedy_policy(&mdp, &sol.values, gamma);
    writeln!(out, "state,value,action")?;
    for s in 0..mdp.n_states() {
        writeln!(
            out,
            "{s},{:.9},{}",
            sol.values[s],
            mdp.actions()[policy.action(s)]
        )?;
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn aggregate(
    path: &Path,
    c: f64,
    gamma: f64,
    target: f64,
    epsilon: f64,
    output: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<u8, CliError> {
    let mdp = load(path)?;
    let metric = fixed_point_metric(&mdp, c, epsilon)?.metric;
    let partition = epsilon_partition(&metric, target)?;
    let report: AggregationReport =
        aggregation_report_with_metric(&mdp, &partition, gamma, c, &metric, epsilon)?;
    if let Some(path) = output {
        MdpDocument::from_mdp(&quotient_mdp(&mdp, &partition, None)?).write(path)?;
    }
    writeln!(out, "{}", AggregationReport::CSV_HEADER)?;
    for line in report.csv_rows() {
        writeln!(out, "{line}")?;
    }
    writeln!(
        err,
        "{} states -> {} blocks; largest diameter {:.9}; observed value error {:.9}",
        mdp.n_states(),
        partition.n_blocks(),
        report.global_bound,
        report.empirical_value_error
    )?;
    Ok(0)
}

/// `dir/name.ext` becomes `dir/name-n10.ext`.
fn sized_path(base: &Path, n: usize) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}-n{n}.{}", ext.to_string_lossy()),
        None => format!("{stem}-n{n}"),
    };
    base.with_file_name(name)
}

fn toy(
    sizes: &[usize],
    gamma: f64,
    c: f64,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    if let Some(base) = output {
        for &n in sizes {
            let path = if sizes.len() == 1 {
                base.to_path_buf()
            } else {
                sized_path(base, n)
            };
            MdpDocument::from_mdp(&toy_mdp(n)?).write(&path)?;
        }
    }
    let rows = convergence_experiment(sizes, c, gamma)?;
    writeln!(out, "{}", ConvergenceRow::CSV_HEADER)?;
    for row in rows {
        writeln!(out, "{}", row.csv_row())?;
    }
    Ok(0)
}

fn perturb(
    first: &Path,
    second: &Path,
    c: f64,
    epsilon: f64,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let a = load(first)?;
    let b = load(second)?;
    let bound = perturbation_bound(&a, &b, c, epsilon)?;
    writeln!(out, "lhs,rhs,pass")?;
    writeln!(out, "{:.9},{:.9},{}", bound.lhs, bound.rhs, bound.holds())?;
    Ok(if bound.holds() { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sized_paths() {
        assert_eq!(
            sized_path(Path::new("out/toy.json"), 10),
            PathBuf::from("out/toy-n10.json")
        );
        assert_eq!(sized_path(Path::new("toy"), 4), PathBuf::from("toy-n4"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Parse("x".into()).exit_code(), 2);
        assert_eq!(CliError::Io("x".into()).exit_code(), 2);
        assert_eq!(CliError::Domain("x".into()).exit_code(), 1);
        assert_eq!(
            CliError::Core(bisim_core::Error::SolverStalled(1)).exit_code(),
            1
        );
    }
}
