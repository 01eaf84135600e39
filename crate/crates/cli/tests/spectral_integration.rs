//! Powder-level properties of the full pipeline: scale-factor stability
//! against processing choices, spectral symmetry, coupling-strength
//! independence at a matched condition, and mode fidelity.

use lgcp_core::dipole::{coupling_from_distance, DipoleCoupling, IsotopePair, RotorConfig};
use lgcp_core::frames::ChannelSettings;
use lgcp_core::powder::{powder_average, PowderScheme};
use lgcp_core::sequence::{LgMode, SequenceConfig};

use lgcp_cli::spectral::{
    measure_scale_factor, pick_peaks, to_spectrum, Apodization, ScaleFactorOptions,
};

fn experiment_a(n_points: usize) -> SequenceConfig {
    SequenceConfig::new(
        ChannelSettings::new(50.00e3, 36.451e3).unwrap(),
        ChannelSettings::on_resonance(53.05e3).unwrap(),
        RotorConfig::new(10.0e3, 200).unwrap(),
        n_points,
        30.0e-6,
        LgMode::ConstantOffset,
    )
    .unwrap()
}

/// Matched condition: H effective field at the magic angle, N power on the
/// first rotor sideband of the effective-field difference.
fn matched(n_points: usize, lg_mode: LgMode) -> SequenceConfig {
    SequenceConfig::new(
        ChannelSettings::new(56.18e3, 39.725e3).unwrap(),
        ChannelSettings::on_resonance(58.80e3).unwrap(),
        RotorConfig::new(10.0e3, 200).unwrap(),
        n_points,
        30.0e-6,
        lg_mode,
    )
    .unwrap()
}

fn k_of(
    cfg: &SequenceConfig,
    coupling: &DipoleCoupling,
    powder_n: usize,
    zero_fill: usize,
) -> f64 {
    let curve = powder_average(cfg, coupling, PowderScheme::GoldenSpiral { n: powder_n }).unwrap();
    let spec = to_spectrum(&curve, zero_fill, Apodization::Cosine).unwrap();
    measure_scale_factor(&spec, coupling, &ScaleFactorOptions::default())
        .unwrap()
        .k
}

#[test]
fn scale_factor_insensitive_to_zero_fill() {
    let cfg = experiment_a(128);
    let coupling = coupling_from_distance(1.04, IsotopePair::N15H1).unwrap();
    let ks: Vec<f64> = [4, 8, 16]
        .into_iter()
        .map(|zf| k_of(&cfg, &coupling, 64, zf))
        .collect();
    let spread = ks.iter().cloned().fold(f64::MIN, f64::max)
        - ks.iter().cloned().fold(f64::MAX, f64::min);
    // allowed wiggle: one pre-fill bin over the coupling
    let bin_limit = (1.0 / (128.0 * 30e-6)) / coupling.delta_hz;
    assert!(spread < bin_limit, "k spread {spread} over zero_fill choices (limit {bin_limit})");
}

#[test]
fn dominant_peaks_are_symmetric() {
    let cfg = experiment_a(128);
    let coupling = coupling_from_distance(1.04, IsotopePair::N15H1).unwrap();
    let curve = powder_average(&cfg, &coupling, PowderScheme::GoldenSpiral { n: 64 }).unwrap();
    let spec = to_spectrum(&curve, 8, Apodization::Cosine).unwrap();
    let peaks = pick_peaks(&spec, 0.05);
    let guard = 2.0 * spec.prefill_bin_hz();
    let pos = peaks.iter().find(|p| p.freq_hz > guard).unwrap();
    let neg = peaks.iter().find(|p| p.freq_hz < -guard).unwrap();
    assert!(
        (pos.freq_hz + neg.freq_hz).abs() < spec.grid_spacing_hz(),
        "asymmetric dominant peaks: {} vs {}",
        pos.freq_hz,
        neg.freq_hz
    );
}

#[test]
fn splitting_grows_with_coupling_but_k_does_not() {
    // at a matched condition the scale factor is a property of the rf
    // geometry: doubling δ doubles the splitting and leaves k alone
    let cfg = matched(128, LgMode::ConstantOffset);
    let weak = DipoleCoupling::from_delta_hz(5.0e3, IsotopePair::N15H1).unwrap();
    let strong = DipoleCoupling::from_delta_hz(12.0e3, IsotopePair::N15H1).unwrap();

    let observed = |c: &DipoleCoupling| {
        let curve = powder_average(&cfg, c, PowderScheme::GoldenSpiral { n: 64 }).unwrap();
        let spec = to_spectrum(&curve, 8, Apodization::Cosine).unwrap();
        measure_scale_factor(&spec, c, &ScaleFactorOptions::default()).unwrap()
    };
    let lo = observed(&weak);
    let hi = observed(&strong);
    assert!(hi.observed_hz > lo.observed_hz, "splitting must grow with the coupling");
    assert!(
        (hi.k - lo.k).abs() < 0.02,
        "k drifted with coupling strength: {} vs {}",
        lo.k,
        hi.k
    );
}

#[test]
fn increasing_distance_shrinks_the_splitting() {
    let cfg = matched(128, LgMode::ConstantOffset);
    let near = coupling_from_distance(1.04, IsotopePair::N15H1).unwrap();
    let far = coupling_from_distance(1.20, IsotopePair::N15H1).unwrap();
    let split = |c: &DipoleCoupling| {
        let curve = powder_average(&cfg, c, PowderScheme::GoldenSpiral { n: 64 }).unwrap();
        let spec = to_spectrum(&curve, 8, Apodization::Cosine).unwrap();
        measure_scale_factor(&spec, c, &ScaleFactorOptions::default())
            .unwrap()
            .observed_hz
    };
    assert!(split(&far) < split(&near));
}

#[test]
fn fslg_mode_measures_a_scale_factor_of_its_own() {
    // the toggled sequence transfers polarization and yields a well-defined
    // splitting, but the toggling shifts the sideband matching, so its scale
    // factor is NOT the constant-offset one (measured ~0.38 vs ~0.60 at
    // experiment-A settings); assert a detected, physically bounded result
    // that differs from the constant-offset mode
    let coupling = coupling_from_distance(1.04, IsotopePair::N15H1).unwrap();
    let mut cfg = experiment_a(128);
    let k_const = k_of(&cfg, &coupling, 64, 8);
    cfg.lg_mode = LgMode::FslgToggled;
    let k_fslg = k_of(&cfg, &coupling, 64, 8);
    assert!(k_fslg > 0.05 && k_fslg < 1.5, "fslg k = {k_fslg}");
    assert!(
        (k_const - k_fslg).abs() > 1e-6,
        "toggling had no spectral effect (k = {k_const})"
    );
}

#[test]
fn zcw_and_golden_spiral_agree() {
    let cfg = experiment_a(128);
    let coupling = coupling_from_distance(1.04, IsotopePair::N15H1).unwrap();
    let k_spiral = k_of(&cfg, &coupling, 144, 8);
    let curve = powder_average(&cfg, &coupling, PowderScheme::Zcw { n: 144 }).unwrap();
    let spec = to_spectrum(&curve, 8, Apodization::Cosine).unwrap();
    let k_zcw = measure_scale_factor(&spec, &coupling, &ScaleFactorOptions::default())
        .unwrap()
        .k;
    assert!((k_spiral - k_zcw).abs() < 0.01, "spiral {k_spiral} vs zcw {k_zcw}");
}
