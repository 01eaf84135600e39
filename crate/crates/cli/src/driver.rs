//! Powder averages and parameter sweeps, fanned out to a thread pool.
//!
//! Crystallites (and only crystallites) are parallelized: each is an
//! independent simulation, and the results are collected back into scheme
//! order before the weighted sum, so the average is bit-identical to the
//! sequential one no matter how many workers ran it. Sweep points then run
//! in grid order, each reusing the parallel powder underneath.

use rayon::prelude::*;

use lgcp_core::dipole::DipoleCoupling;
use lgcp_core::powder::{orientations, weighted_sum, PowderScheme};
use lgcp_core::sequence::{simulate_crystallite, BuildupCurve, SequenceConfig};
use lgcp_core::CoreError;

use crate::config::{FileConfig, SweepParameter};
use crate::spectral::{
    measure_scale_factor, to_spectrum, Apodization, DipolarSpectrum, ScaleFactorOptions,
    ScaleFactorResult, SpectralError,
};

#[derive(Debug, thiserror::Error)]
pub enum DriverError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("config has no sweep section")]
    NoSweepSection,
}

/// Powder average with the per-crystallite work parallelized.
pub fn powder_average_parallel(
    cfg: &SequenceConfig,
    coupling: &DipoleCoupling,
    scheme: PowderScheme,
) -> Result<BuildupCurve, DriverError> {
    let orients = orientations(scheme)?;
    let curves: Vec<BuildupCurve> = orients
        .par_iter()
        .map(|o| simulate_crystallite(cfg, o, coupling))
        .collect::<Result<_, _>>()?;
    let weights: Vec<f64> = orients.iter().map(|o| o.weight).collect();
    Ok(weighted_sum(&weights, &curves)?)
}

/// Everything one simulation produces.
pub struct SingleRun {
    pub curve: BuildupCurve,
    pub spectrum: DipolarSpectrum,
    /// `None` when no transfer was detected above the floor.
    pub scale: Option<ScaleFactorResult>,
    pub coupling: DipoleCoupling,
}

/// Simulate one configuration end to end: powder average, spectrum, scale
/// factor.
pub fn run_single(file_cfg: &FileConfig) -> Result<SingleRun, DriverError> {
    let cfg = file_cfg.sequence_config()?;
    let coupling = file_cfg.coupling()?;
    let curve = powder_average_parallel(&cfg, &coupling, file_cfg.powder_scheme())?;
    let spectrum = to_spectrum(&curve, file_cfg.zero_fill, Apodization::Cosine)?;
    let scale = match measure_scale_factor(&spectrum, &coupling, &ScaleFactorOptions::default()) {
        Ok(s) => Some(s),
        Err(SpectralError::NoTransferDetected { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(SingleRun { curve, spectrum, scale, coupling })
}

/// One sweep grid point: the spectrum row and its scale-factor result.
pub struct SweepRow {
    pub value_khz: f64,
    pub amps: Vec<f64>,
    pub scale: Option<ScaleFactorResult>,
    /// Strongest peak amplitude beyond the DC guard, the detection signal
    /// used to delimit transfer regions.
    pub peak_amp: f64,
}

/// Full result of a parameter sweep: one spectrum per grid value on a shared
/// frequency grid, plus the scale-factor table.
pub struct ContourTable {
    pub parameter: SweepParameter,
    pub freqs: Vec<f64>,
    pub rows: Vec<SweepRow>,
}

/// Run the sweep described by the config's sweep section. Per-point
/// no-transfer outcomes are recorded in the row and the sweep continues.
pub fn run_sweep(file_cfg: &FileConfig) -> Result<ContourTable, DriverError> {
    let sweep = file_cfg.sweep.ok_or(DriverError::NoSweepSection)?;
    let grid = sweep.grid_khz();

    let mut freqs: Option<Vec<f64>> = None;
    let mut rows = Vec::with_capacity(grid.len());
    for &value_khz in &grid {
        let point_cfg = file_cfg.with_sweep_value(sweep.parameter, value_khz);
        let run = run_single(&point_cfg)?;
        let guard = ScaleFactorOptions::default().dc_guard_bins * run.spectrum.prefill_bin_hz();
        let peak_amp = run
            .spectrum
            .freqs
            .iter()
            .zip(&run.spectrum.amps)
            .filter(|(f, _)| f.abs() > guard)
            .map(|(_, a)| *a)
            .fold(0.0f64, f64::max);
        if freqs.is_none() {
            freqs = Some(run.spectrum.freqs.clone());
        }
        rows.push(SweepRow { value_khz, amps: run.spectrum.amps, scale: run.scale, peak_amp });
    }

    Ok(ContourTable {
        parameter: sweep.parameter,
        freqs: freqs.expect("sweep grid is never empty"),
        rows,
    })
}

impl ContourTable {
    /// The maximal contiguous run of detected-transfer points that starts at
    /// the strongest-transfer grid point and follows strictly decreasing
    /// peak amplitude — one coherent transfer branch, the region a
    /// scale-factor-versus-power plot reads.
    pub fn rising_flank(&self) -> Vec<usize> {
        let Some(anchor) = self
            .rows
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.peak_amp.total_cmp(&b.1.peak_amp))
            .map(|(i, _)| i)
        else {
            return Vec::new();
        };
        let mut idx = vec![anchor];
        let mut last_amp = self.rows[anchor].peak_amp;
        for i in anchor + 1..self.rows.len() {
            let row = &self.rows[i];
            if row.scale.is_none() || row.peak_amp >= last_amp {
                break;
            }
            last_amp = row.peak_amp;
            idx.push(i);
        }
        idx
    }
}
