//! Text rendering of the analytic layer: tilt angles, effective fields,
//! term survival, zero-quantum peak predictions — alone (`predict`) or next
//! to the numeric spectrum (`report`).

use std::fmt::Write;

use lgcp_core::frames::{
    predict_zq_peak, predict_zq_peak_difference_form, scale_products, sum_diff, term_survival,
    tilt, ChannelSettings, TiltedFrame, DEFAULT_SURVIVAL_TOLERANCE_HZ,
};
use lgcp_core::CoreError;

use crate::config::FileConfig;
use crate::driver::SingleRun;

struct AnalyticBlock {
    i_frame: TiltedFrame,
    s_frame: TiltedFrame,
    text: String,
}

fn analytic_block(
    label: &str,
    i_ch: ChannelSettings,
    s_ch: ChannelSettings,
    rotor_hz: f64,
    delta_hz: f64,
) -> Result<AnalyticBlock, CoreError> {
    let i_frame = tilt(i_ch)?;
    let s_frame = tilt(s_ch)?;
    let (sigma, diff) = sum_diff(i_frame, s_frame);
    let products = scale_products(i_frame, s_frame);
    let report = term_survival(i_frame, s_frame, rotor_hz, DEFAULT_SURVIVAL_TOLERANCE_HZ)?;

    let mut text = String::new();
    let _ = writeln!(text, "analytic frame report ({label})");
    let _ = writeln!(
        text,
        "  I channel: nutation {:9.3} kHz, offset {:9.3} kHz -> theta_I = {:7.3} deg, omega_eff = {:9.3} kHz",
        i_ch.nutation_hz / 1e3,
        i_ch.offset_hz / 1e3,
        i_frame.theta_deg(),
        i_frame.omega_eff_hz / 1e3
    );
    let _ = writeln!(
        text,
        "  S channel: nutation {:9.3} kHz, offset {:9.3} kHz -> theta_S = {:7.3} deg, omega_eff = {:9.3} kHz",
        s_ch.nutation_hz / 1e3,
        s_ch.offset_hz / 1e3,
        s_frame.theta_deg(),
        s_frame.omega_eff_hz / 1e3
    );
    let _ = writeln!(
        text,
        "  sigma_eff = {:9.3} kHz, delta_eff = {:9.3} kHz",
        sigma / 1e3,
        diff / 1e3
    );
    let _ = writeln!(
        text,
        "  scale products: zq/dq = {:8.5}, i-flip = {:8.5}, s-flip = {:8.5}",
        products.zq_dq, products.i_flip, products.s_flip
    );
    let _ = writeln!(
        text,
        "  term survival vs rotor {:6.3} kHz (tolerance {:5.0} Hz):",
        rotor_hz / 1e3,
        report.tolerance_hz
    );
    let _ = writeln!(
        text,
        "    {:<26} {:>12} {:>4} {:>14} {:>10}",
        "term", "exponent_khz", "n", "mismatch_khz", "surviving"
    );
    for e in &report.entries {
        let _ = writeln!(
            text,
            "    {:<26} {:>12.3} {:>4} {:>14.3} {:>10}",
            e.term.label(),
            e.exponent_hz / 1e3,
            e.n,
            e.mismatch_hz / 1e3,
            if e.surviving { "yes" } else { "no" }
        );
    }
    let q_sum = predict_zq_peak(delta_hz, i_frame, s_frame);
    let q_diff = predict_zq_peak_difference_form(delta_hz, i_frame, s_frame);
    let _ = writeln!(
        text,
        "  zero-quantum peak, printed sum form:   q = {:9.3} kHz",
        q_sum / 1e3
    );
    let _ = writeln!(
        text,
        "  zero-quantum peak, difference variant: q = {:9.3} kHz",
        q_diff / 1e3
    );
    Ok(AnalyticBlock { i_frame, s_frame, text })
}

/// The `predict` command body.
pub fn predict_text(cfg: &FileConfig) -> Result<String, CoreError> {
    let delta = cfg.coupling()?.delta_hz;
    let block = analytic_block(
        "offset as configured",
        cfg.i_channel()?,
        cfg.s_channel()?,
        cfg.rotor_khz * 1e3,
        delta,
    )?;
    let mut out = block.text;
    let _ = writeln!(
        out,
        "  coupling: {:7.3} kHz at r = {:5.3} A",
        delta / 1e3,
        cfg.distance_angstrom
    );
    Ok(out)
}

/// The `report` command body: analytics for the configured offset and for
/// the alternate √2-scaled offset convention some simulation tools use,
/// side by side with the numeric spectrum.
pub fn report_text(cfg: &FileConfig, run: &SingleRun) -> Result<String, CoreError> {
    let delta = run.coupling.delta_hz;
    let rotor_hz = cfg.rotor_khz * 1e3;
    let as_configured = analytic_block(
        "offset as configured",
        cfg.i_channel()?,
        cfg.s_channel()?,
        rotor_hz,
        delta,
    )?;
    let alt_i = ChannelSettings::new(
        cfg.i_nutation_khz * 1e3,
        cfg.i_offset_khz * 1e3 * std::f64::consts::SQRT_2,
    )?;
    let alternate = analytic_block(
        "alternate convention, offset x sqrt(2)",
        alt_i,
        cfg.s_channel()?,
        rotor_hz,
        delta,
    )?;

    let mut out = String::new();
    out.push_str(&as_configured.text);
    out.push('\n');
    out.push_str(&alternate.text);
    out.push('\n');

    let _ = writeln!(out, "numeric result (powder {} crystallites):", cfg.powder_n);
    match &run.scale {
        Some(s) => {
            let _ = writeln!(
                out,
                "  dominant peak at {:+9.4} kHz, splitting {:8.4} kHz",
                s.peak_freq_hz / 1e3,
                s.observed_hz / 1e3
            );
            let _ = writeln!(
                out,
                "  scale factor k = {:.4} +/- {:.4} (true coupling {:7.3} kHz)",
                s.k, s.uncertainty, delta / 1e3
            );
            let q_sum = predict_zq_peak(delta, as_configured.i_frame, as_configured.s_frame);
            let q_diff = predict_zq_peak_difference_form(
                delta,
                as_configured.i_frame,
                as_configured.s_frame,
            );
            let _ = writeln!(out, "  analytic vs numeric dominant peak:");
            let _ = writeln!(
                out,
                "    printed sum form:   q = {:9.3} kHz, |q - peak| = {:9.3} kHz",
                q_sum / 1e3,
                (q_sum - s.peak_freq_hz).abs() / 1e3
            );
            let _ = writeln!(
                out,
                "    difference variant: q = {:9.3} kHz, |q - peak| = {:9.3} kHz",
                q_diff / 1e3,
                (q_diff - s.peak_freq_hz).abs() / 1e3
            );
        }
        None => {
            let _ = writeln!(out, "  no transfer detected above the floor");
        }
    }
    Ok(out)
}
