//! Frequency-domain analysis and the sweep/CLI layer on top of `lgcp-core`.
//!
//! [`spectral`] turns buildup curves into dipolar spectra and extracts the
//! scale factor; [`driver`] fans powder averages and parameter sweeps out to
//! a thread pool while keeping every reduction deterministic; [`config`]
//! parses the flat key = value run files; [`csvio`] owns the output formats;
//! [`report`] renders the analytic predictions next to the numeric results.

pub mod config;
pub mod csvio;
pub mod driver;
pub mod report;
pub mod spectral;

pub use config::FileConfig;
pub use driver::{run_single, run_sweep, ContourTable, SingleRun};
pub use spectral::{
    measure_scale_factor, pick_peaks, to_spectrum, Apodization, DipolarSpectrum, Peak,
    ScaleFactorResult,
};
