//! Cross-checks of the propagation machinery against independent routes:
//! a Taylor-series matrix exponential, eigenvalue-multiset conservation,
//! and a brute-force finer-step integrator for the buildup dynamics.

use core::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lgcp_core::dipole::{
    coupling_from_distance, hamiltonian_at, mas_coefficients, CrystalliteOrientation,
    IsotopePair, RotorConfig,
};
use lgcp_core::frames::ChannelSettings;
use lgcp_core::sequence::{simulate_crystallite, LgMode, SequenceConfig};
use lgcp_core::{build_operators, evolve, expectation, matrix_exponential, Complex64, Matrix4};

fn random_hermitian(rng: &mut ChaCha8Rng, scale: f64) -> Matrix4 {
    let mut h = Matrix4::zeros();
    for i in 0..4 {
        h[(i, i)] = Complex64::new(rng.gen_range(-scale..scale), 0.0);
        for j in (i + 1)..4 {
            let z = Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

/// 12th-order Taylor series with scaling and squaring — the independent
/// algorithm the eigendecomposition route is checked against.
fn expm_taylor(h: &Matrix4, dt: f64) -> Matrix4 {
    let mut a = Matrix4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            a[(i, j)] = h[(i, j)] * Complex64::new(0.0, -TAU * dt);
        }
    }
    let mut squarings = 0u32;
    let mut scaled = a;
    while scaled.max_abs() > 0.25 {
        scaled.scale_into(0.5);
        squarings += 1;
        assert!(squarings < 64);
    }
    let mut sum = Matrix4::identity();
    let mut term = Matrix4::identity();
    for k in 1..=12 {
        term = term * scaled;
        term.scale_into(1.0 / k as f64);
        sum = sum + term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

#[test]
fn eigendecomposition_agrees_with_taylor_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let dt = 1e-6;
    for _ in 0..200 {
        let h = random_hermitian(&mut rng, 100.0e3);
        let u = matrix_exponential(&h, dt).unwrap();
        let reference = expm_taylor(&h, dt);
        let diff = u.max_abs_diff(&reference);
        assert!(diff < 1e-10, "routes disagree by {diff}");
        assert!(u.unitarity_defect() < 1e-10);
    }
}

#[test]
fn pi_pulse_inverts_longitudinal_magnetization() {
    // ω1·dt = 1/2 about x takes ⟨Iz⟩ from +1 to −1 (in trace units)
    let ops = build_operators();
    let mut h = Matrix4::zeros();
    h.add_scaled(50.0e3, &ops.ix);
    let dt = 0.5 / 50.0e3;
    let u = matrix_exponential(&h, dt).unwrap();
    let rho = evolve(&ops.iz, &u);
    assert!((expectation(&rho, &ops.iz) + 1.0).abs() < 1e-12);
}

#[test]
fn random_evolutions_preserve_spectrum_and_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let ops = build_operators();

    // a mixed state with known trace
    let mut rho = ops.identity.scaled(0.25);
    rho.add_scaled(0.3, &ops.iz);
    rho.add_scaled(0.2, &ops.sx);
    rho.add_scaled(0.1, &ops.izsz);

    let initial_purity = expectation(&rho, &rho);
    let initial_trace = rho.trace();
    let mut initial_eigs = lgcp_core::matrix::eigh(&rho).values;
    initial_eigs.sort_by(f64::total_cmp);

    for _ in 0..1000 {
        let h = random_hermitian(&mut rng, 80.0e3);
        let u = matrix_exponential(&h, 1e-6).unwrap();
        rho = evolve(&rho, &u);
    }

    assert!((rho.trace() - initial_trace).norm() < 1e-12);
    assert!((expectation(&rho, &rho) - initial_purity).abs() < 1e-10);
    let mut final_eigs = lgcp_core::matrix::eigh(&rho).values;
    final_eigs.sort_by(f64::total_cmp);
    for (a, b) in initial_eigs.iter().zip(&final_eigs) {
        assert!((a - b).abs() < 1e-10, "eigenvalue drifted: {a} vs {b}");
    }
}

#[test]
fn maximally_mixed_state_is_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let id4 = Matrix4::identity().scaled(0.25);
    let h = random_hermitian(&mut rng, 50.0e3);
    let u = matrix_exponential(&h, 3e-6).unwrap();
    assert!(evolve(&id4, &u).max_abs_diff(&id4) < 1e-14);
}

#[test]
fn propagators_along_a_contact_are_unitary() {
    let ops = build_operators();
    let coupling = coupling_from_distance(1.04, IsotopePair::N15H1).unwrap();
    let orientation = CrystalliteOrientation {
        alpha_rad: 0.0,
        beta_rad: 1.2,
        gamma_rad: 0.5,
        weight: 1.0,
    };
    let modulation = mas_coefficients(&coupling, &orientation);
    let rotor = RotorConfig::new(10.0e3, 200).unwrap();
    let i_ch = ChannelSettings::new(50.0e3, 36.451e3).unwrap();
    let s_ch = ChannelSettings::on_resonance(53.05e3).unwrap();
    let dt = rotor.step_s();
    for k in 0..400 {
        let h = hamiltonian_at((k as f64 + 0.5) * dt, i_ch, s_ch, &modulation, &rotor, &ops);
        let u = matrix_exponential(&h, dt).unwrap();
        assert!(u.unitarity_defect() < 1e-10);
    }
}

/// Dominant oscillation frequency by scanning a discrete-time Fourier sum
/// on a fine frequency grid (test-local; no FFT dependency down here).
fn dominant_frequency(signal: &[f64], dwell: f64, f_lo: f64, f_hi: f64, df: f64) -> f64 {
    let mean = signal.iter().sum::<f64>() / signal.len() as f64;
    let mut best = (0.0, f_lo);
    let mut f = f_lo;
    while f <= f_hi {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, s) in signal.iter().enumerate() {
            let phi = TAU * f * k as f64 * dwell;
            re += (s - mean) * phi.cos();
            im -= (s - mean) * phi.sin();
        }
        let mag = re * re + im * im;
        if mag > best.0 {
            best = (mag, f);
        }
        f += df;
    }
    best.1
}

/// Brute-force reference: plain midpoint sampling at a 10× finer step,
/// sharing only the Hamiltonian construction with the production path.
fn midpoint_reference_curve(
    cfg: &SequenceConfig,
    orientation: &CrystalliteOrientation,
    delta_refine: u32,
) -> Vec<f64> {
    let ops = build_operators();
    let coupling = coupling_from_distance(1.04, IsotopePair::N15H1).unwrap();
    let modulation = mas_coefficients(&coupling, orientation);
    let i_frame = lgcp_core::frames::tilt(cfg.i_channel).unwrap();
    let s_frame = lgcp_core::frames::tilt(cfg.s_channel).unwrap();
    let mut rho = lgcp_core::sequence::initial_state(i_frame, &ops);
    let det = lgcp_core::sequence::detect_operator(s_frame, &ops);

    let step = cfg.rotor.step_s() / delta_refine as f64;
    let steps_per_dwell = (cfg.dwell_s / step).round() as u64;
    let mut out = Vec::with_capacity(cfg.n_points);
    out.push(expectation(&rho, &det));
    let mut gstep = 0u64;
    for _ in 1..cfg.n_points {
        for _ in 0..steps_per_dwell {
            let t_mid = (gstep as f64 + 0.5) * step;
            let h = hamiltonian_at(t_mid, cfg.i_channel, cfg.s_channel, &modulation, &cfg.rotor, &ops);
            let u = matrix_exponential(&h, step).unwrap();
            rho = evolve(&rho, &u);
            gstep += 1;
        }
        out.push(expectation(&rho, &det));
    }
    out
}

#[test]
fn matched_sideband_oscillation_survives_step_refinement() {
    // on-resonance Hartmann-Hahn sideband match: ω1I − ω1S = ω_r
    let cfg = SequenceConfig::new(
        ChannelSettings::on_resonance(60.0e3).unwrap(),
        ChannelSettings::on_resonance(50.0e3).unwrap(),
        RotorConfig::new(10.0e3, 200).unwrap(),
        128,
        30.0e-6,
        LgMode::ConstantOffset,
    )
    .unwrap();
    let orientation = CrystalliteOrientation {
        alpha_rad: 0.0,
        beta_rad: core::f64::consts::FRAC_PI_4,
        gamma_rad: 0.3,
        weight: 1.0,
    };
    let coupling = coupling_from_distance(1.04, IsotopePair::N15H1).unwrap();

    let curve = simulate_crystallite(&cfg, &orientation, &coupling).unwrap();
    let reference = midpoint_reference_curve(&cfg, &orientation, 10);

    let dwell = curve.dwell_s();
    let f_engine = dominant_frequency(&curve.signal, dwell, 1.0e3, 8.0e3, 1.0);
    let f_reference = dominant_frequency(&reference, dwell, 1.0e3, 8.0e3, 1.0);
    assert!(
        (f_engine - f_reference).abs() <= 2.0,
        "engine {f_engine} Hz vs refined reference {f_reference} Hz"
    );
    // the matched-sideband coupling for this orientation is δ·√2/4·sin(2β)
    let expected = coupling.delta_hz * core::f64::consts::SQRT_2 / 4.0;
    assert!(
        (f_engine - expected).abs() < 0.05 * expected,
        "oscillation {f_engine} Hz far from first-order estimate {expected} Hz"
    );
}
