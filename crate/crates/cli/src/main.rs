use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use ipgap::linalg::rank;
use ipgap::matrix::{parse_vector, IntMatrix};
use ipgap::model::{build_named_model, model_to_file, named_matrix, parse_model_file, NamedFamily};
use ipgap::opt::{cell_bounds_with, gap_with, unit_cost, IpOptions};
use ipgap::pairs::{analyze_pairs, verify_sullivant_certificates, GapSchedule};
use ipgap::rarity::{dimension_report, rarity_run, Distribution, SampleConfig};
use ipgap::toric::{
    graver_basis, graver_basis_with, markov_entry_check, orient_basis, reduced_groebner, BasisKind, BasisSet,
    GraverOptions, TermOrder,
};
use ipgap::Error;

const EXIT_VERIFICATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "ipgap", version, about = "Integer programming gaps of hierarchical log-linear models")]
struct Cli {
    /// Worker threads for parallel stages (rarity runs, pair analysis).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Source {
    /// Named family: B, Gamma, Delta or graph-edges.
    #[arg(long)]
    model: Option<String>,
    /// Number of variables for a named family.
    #[arg(long)]
    n: Option<usize>,
    /// Model file (JSON with n, levels, facets).
    #[arg(long, conflicts_with_all = ["model", "matrix"])]
    model_file: Option<PathBuf>,
    /// Matrix in exchange format.
    #[arg(long, conflicts_with = "model")]
    matrix: Option<PathBuf>,
}

#[derive(Args, Clone, Copy)]
struct Budget {
    /// Branch-and-bound node limit per integer program.
    #[arg(long, default_value_t = 200_000)]
    node_limit: usize,
}

impl Budget {
    fn ip(self) -> IpOptions {
        IpOptions { node_limit: self.node_limit }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a model and export its margin matrix or model file.
    Model {
        /// Named family (alias of --model).
        #[arg(long)]
        name: Option<String>,
        #[command(flatten)]
        source: Source,
        /// Write the margin matrix here.
        #[arg(long)]
        export: Option<PathBuf>,
        /// Write the model file here.
        #[arg(long)]
        save_model: Option<PathBuf>,
    },
    /// Integer and linear optimum of one cell, and their difference.
    Gap {
        #[command(flatten)]
        source: Source,
        /// Margin vector file (one integer per line).
        #[arg(long)]
        margin: PathBuf,
        /// Column whose entry is minimized.
        #[arg(long, default_value_t = 0)]
        cell: usize,
        #[command(flatten)]
        budget: Budget,
    },
    /// Integer and linear lower and upper bounds of one cell.
    Bounds {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        margin: PathBuf,
        #[arg(long, default_value_t = 0)]
        cell: usize,
        #[command(flatten)]
        budget: Budget,
    },
    /// Graver basis or reduced Gröbner basis (Lawrence liftings only).
    Basis {
        #[command(flatten)]
        source: Source,
        /// graver or gb.
        #[arg(long, default_value = "graver")]
        kind: String,
        /// Column whose entry is the cost for --kind gb.
        #[arg(long, default_value_t = 0)]
        cell: usize,
        /// Element cap for the completion.
        #[arg(long, default_value_t = 200_000)]
        max_elements: usize,
        /// Write the basis here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Standard pairs of the cost-minimization family and their gap brackets.
    Stdpairs {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 0)]
        cell: usize,
        /// Largest evaluation parameter T (doubling from 1).
        #[arg(long, default_value_t = 16)]
        t_max: i64,
        /// Only run the certificate report for this n.
        #[arg(long)]
        verify_sullivant: Option<usize>,
    },
    /// Certificates for the Sullivant standard pairs of Δ^n.
    VerifySullivant {
        #[arg(long)]
        n: usize,
    },
    /// Sample tables and record gaps and Sullivant-pair hits.
    Rarity {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// uniform-composition or multinomial-uniform.
        #[arg(long, default_value = "uniform-composition")]
        dist: String,
        /// Per-sample CSV output.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Cone and slice dimensions for Δ^n.
    Dims {
        #[arg(long)]
        n: usize,
    },
    /// Entry check on basis elements with more nonzeros than the rank.
    MarkovCheck {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "graver")]
        kind: String,
    },
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded(_) => EXIT_BUDGET,
            Error::CertificateFailed(_) => EXIT_VERIFICATION,
            _ => EXIT_USAGE,
        };
        Self { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn print_json<T: Serialize>(value: &T) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(|e| usage(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn family(name: &str, n: Option<usize>) -> Result<(NamedFamily, usize), Failure> {
    let family: NamedFamily = name.parse()?;
    let n = n.ok_or_else(|| usage("--n is required with a named model"))?;
    Ok((family, n))
}

fn load_matrix(source: &Source) -> Result<IntMatrix, Failure> {
    if let Some(path) = &source.matrix {
        return Ok(IntMatrix::from_text(&read(path)?)?);
    }
    if let Some(path) = &source.model_file {
        return Ok(parse_model_file(&read(path)?)?.margin_matrix().into_matrix());
    }
    if let Some(name) = &source.model {
        let (f, n) = family(name, source.n)?;
        return Ok(named_matrix(f, n)?);
    }
    Err(usage("one of --model, --model-file or --matrix is required"))
}

fn load_margin(path: &Path, a: &IntMatrix) -> Result<Vec<i64>, Failure> {
    let b = parse_vector(&read(path)?)?;
    if b.len() != a.rows() {
        return Err(Error::Dimension { expected: a.rows(), found: b.len() }.into());
    }
    Ok(b)
}

fn check_cell(a: &IntMatrix, cell: usize) -> Outcome {
    if cell >= a.cols() {
        return Err(usage(format!("--cell {cell} out of range for {} columns", a.cols())));
    }
    Ok(())
}

fn compute_basis(a: &IntMatrix, kind: &str, cell: usize, max_elements: usize) -> Result<BasisSet, Failure> {
    check_cell(a, cell)?;
    let kind: BasisKind = kind.parse()?;
    Ok(match kind {
        BasisKind::Graver => graver_basis_with(a, GraverOptions { max_elements, ..GraverOptions::default() })?,
        BasisKind::ReducedGroebner => reduced_groebner(a, &TermOrder::unit(a.cols(), cell))?,
    })
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Model { name, source, export, save_model } => {
            let name = name.or(source.model.clone());
            let (model, matrix) = match (&name, &source.model_file) {
                (Some(name), None) => {
                    let (f, n) = family(name, source.n)?;
                    (build_named_model(f, n)?, named_matrix(f, n)?)
                }
                (None, Some(path)) => {
                    let m = parse_model_file(&read(path)?)?;
                    let a = m.margin_matrix().into_matrix();
                    (m, a)
                }
                _ => return Err(usage("model needs exactly one of --name or --model-file")),
            };
            if let Some(path) = export {
                write(&path, &matrix.to_text())?;
            }
            if let Some(path) = save_model {
                write(&path, &model_to_file(&model))?;
            }
            print_json(&serde_json::json!({
                "variables": model.ground_size(),
                "levels": model.levels(),
                "facets": model.facets(),
                "rows": matrix.rows(),
                "cols": matrix.cols(),
                "rank": rank(&matrix),
            }))
        }
        Command::Gap { source, margin, cell, budget } => {
            let a = load_matrix(&source)?;
            check_cell(&a, cell)?;
            let b = load_margin(&margin, &a)?;
            print_json(&gap_with(&a, &unit_cost(a.cols(), cell), &b, budget.ip())?)
        }
        Command::Bounds { source, margin, cell, budget } => {
            let a = load_matrix(&source)?;
            check_cell(&a, cell)?;
            let b = load_margin(&margin, &a)?;
            print_json(&cell_bounds_with(&a, &b, cell, budget.ip())?)
        }
        Command::Basis { source, kind, cell, max_elements, out } => {
            let a = load_matrix(&source)?;
            let basis = compute_basis(&a, &kind, cell, max_elements)?;
            match out {
                Some(path) => write(&path, &basis.to_text()),
                None => {
                    print!("{}", basis.to_text());
                    Ok(())
                }
            }
        }
        Command::Stdpairs { source, cell, t_max, verify_sullivant } => {
            if let Some(n) = verify_sullivant {
                return print_json(&verify_sullivant_certificates(n)?);
            }
            let a = load_matrix(&source)?;
            check_cell(&a, cell)?;
            let basis = orient_basis(&graver_basis(&a)?, &TermOrder::unit(a.cols(), cell));
            print_json(&analyze_pairs(&basis, &a, &GapSchedule::doubling(t_max))?)
        }
        Command::VerifySullivant { n } => print_json(&verify_sullivant_certificates(n)?),
        Command::Rarity { n, q, samples, seed, dist, csv } => {
            let distribution: Distribution = dist.parse()?;
            let report = rarity_run(&SampleConfig { n, q, samples, seed, distribution })?;
            if let Some(path) = csv {
                write(&path, &report.to_csv())?;
            }
            print_json(&report)
        }
        Command::Dims { n } => print_json(&dimension_report(n)?),
        Command::MarkovCheck { source, kind } => {
            let a = load_matrix(&source)?;
            let basis = compute_basis(&a, &kind, 0, GraverOptions::default().max_elements)?;
            let report = markov_entry_check(&basis, &a);
            print_json(&report)?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure { code: EXIT_VERIFICATION, message: format!("{} violations", report.violations.len()) })
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.max(1)).build_global() {
        eprintln!("ipgap: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("ipgap: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
