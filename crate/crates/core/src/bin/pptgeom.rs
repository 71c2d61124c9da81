use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use pptgeom::bipartite::{pt_spectrum_analytic, pt_spectrum_numeric, schmidt, BipartiteSplit};
use pptgeom::bounds::{bounds_table, classify, BoundsTable, ZoneClassification};
use pptgeom::distill::{find_schmidt2_witness, DEFAULT_ITERS, DEFAULT_RESTARTS};
use pptgeom::harness::{claim_check, shell_scan, uniform_grid, werner_sweep, DEFAULT_CLAIM_SAMPLES};
use pptgeom::harness::sweep::{DEFAULT_BISECTION_TOL, DEFAULT_GRID_POINTS};
use pptgeom::io::{MatrixJson, ReportHeader};
use pptgeom::linalg::hermitian_eigen;
use pptgeom::{DensityMatrix, Error, PureState, Result};

/// Pure states given as density matrices must have purity within this of 1.
const PURITY_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "pptgeom", version, about = "PPT geometry of bipartite density matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the radius table for N = d^n as JSON.
    Bounds {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Zone and numeric PPT status of a density matrix.
    Classify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        split: BipartiteSplit,
    },
    /// Closed-form and numeric PT spectra of a pure state.
    PtSpectrum {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        split: BipartiteSplit,
    },
    /// Werner-family sweep with bisection for the PPT threshold (CSV).
    WernerSweep {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// PPT fraction on fixed-distance shells around I/N (CSV).
    ShellScan {
        #[arg(long = "N")]
        big_n: usize,
        #[arg(long)]
        split: BipartiteSplit,
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<f64>,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full claim check for d x d (JSON).
    ClaimCheck {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = DEFAULT_CLAIM_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a Schmidt-rank-2 vector with negative PT expectation.
    DistillWitness {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        split: BipartiteSplit,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Serialize)]
struct BoundsOutput {
    header: ReportHeader,
    #[serde(flatten)]
    table: BoundsTable,
}

#[derive(Serialize)]
struct ClassifyOutput {
    header: ReportHeader,
    split: String,
    #[serde(flatten)]
    classification: ZoneClassification,
}

#[derive(Serialize)]
struct SpectrumOutput {
    header: ReportHeader,
    split: String,
    schmidt_coefficients: Vec<f64>,
    schmidt_rank: usize,
    analytic: Vec<f64>,
    numeric: Vec<f64>,
    max_deviation: f64,
}

#[derive(Serialize)]
struct WitnessOutput {
    header: ReportHeader,
    split: String,
    restarts: usize,
    iters: usize,
    found: bool,
    value: f64,
    restarts_used: usize,
    witness: Option<MatrixJson>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Bounds { d, n } => emit_json(
            &BoundsOutput {
                header: ReportHeader::new(None),
                table: bounds_table(d, n)?,
            },
            None,
        ),
        Command::Classify { input, split } => {
            let rho = read_density(&input)?;
            split.check_dim(rho.dim())?;
            if split.m() != split.n() {
                return Err(Error::InvalidParameter(format!(
                    "classify needs a d x d split, got {split}"
                )));
            }
            let table = bounds_table(split.m(), 2)?;
            emit_json(
                &ClassifyOutput {
                    header: ReportHeader::new(None),
                    split: split.to_string(),
                    classification: classify(&rho, split, &table)?,
                },
                None,
            )
        }
        Command::PtSpectrum { input, split } => {
            let psi = read_pure(&input)?;
            split.check_dim(psi.dim())?;
            let sd = schmidt(&psi, split)?;
            let analytic = pt_spectrum_analytic(&sd, split)?;
            let numeric = pt_spectrum_numeric(&psi, split)?;
            let max_deviation = analytic
                .iter()
                .zip(&numeric)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            emit_json(
                &SpectrumOutput {
                    header: ReportHeader::new(None),
                    split: split.to_string(),
                    schmidt_coefficients: sd.coefficients.clone(),
                    schmidt_rank: sd.rank,
                    analytic,
                    numeric,
                    max_deviation,
                },
                None,
            )
        }
        Command::WernerSweep { d, grid, out } => {
            let report = werner_sweep(d, &uniform_grid(grid), DEFAULT_BISECTION_TOL)?;
            with_output(out.as_deref(), |w| report.write_csv(w))
        }
        Command::ShellScan {
            big_n,
            split,
            radii,
            samples,
            seed,
            out,
        } => {
            let report = shell_scan(big_n, split, &radii, samples, seed)?;
            with_output(out.as_deref(), |w| report.write_csv(w))
        }
        Command::ClaimCheck { d, samples, seed, out } => {
            let report = claim_check(d, samples, seed)?;
            emit_json(&report, out.as_deref())
        }
        Command::DistillWitness {
            input,
            split,
            restarts,
            seed,
        } => {
            let rho = read_density(&input)?;
            let r = find_schmidt2_witness(&rho, split, restarts, DEFAULT_ITERS, seed)?;
            emit_json(
                &WitnessOutput {
                    header: ReportHeader::new(Some(seed)),
                    split: split.to_string(),
                    restarts,
                    iters: DEFAULT_ITERS,
                    found: r.found,
                    value: r.value,
                    restarts_used: r.restarts_used,
                    witness: r
                        .witness
                        .as_ref()
                        .map(|w| MatrixJson::from_vector(w.amplitudes(), Some(split))),
                },
                None,
            )
        }
    }
}

fn read_density(path: &Path) -> Result<DensityMatrix> {
    DensityMatrix::new(MatrixJson::read(path)?.to_matrix()?)
}

/// Accepts a state vector, or a rank-one density matrix whose dominant
/// eigenvector is taken (global phase is irrelevant to the spectra).
fn read_pure(path: &Path) -> Result<PureState> {
    let json = MatrixJson::read(path)?;
    if json.is_vector() {
        return PureState::new(json.to_vector()?);
    }
    let rho = DensityMatrix::new(json.to_matrix()?)?;
    let purity = rho.purity();
    if (purity - 1.0).abs() > PURITY_TOL {
        return Err(Error::InvalidParameter(format!(
            "input is not a pure state (purity {purity})"
        )));
    }
    let eig = hermitian_eigen(rho.matrix())?;
    let top = eig.eigenvector(rho.dim() - 1);
    PureState::normalized(top)
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    with_output(out, |mut w| {
        serde_json::to_writer_pretty(&mut w, value)?;
        writeln!(w)?;
        Ok(())
    })
}

fn with_output(out: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            f(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}
