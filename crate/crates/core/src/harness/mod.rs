//! Experiment drivers: Werner sweeps, shell scans, spectrum checks and the claim check.

pub mod claim;
pub mod shell;
pub mod spectrum;
pub mod sweep;

pub use claim::{claim_check, ClaimCheckReport, Counterexample, Verdict, DEFAULT_CLAIM_SAMPLES};
pub use shell::{default_radii, shell_scan, shell_scan_with_worst, ShellReport, ShellRow, WorstSample};
pub use spectrum::{spectrum_check, SpectrumCheck, SpectrumRow};
pub use sweep::{uniform_grid, werner_sweep, SweepReport, SweepRow};
