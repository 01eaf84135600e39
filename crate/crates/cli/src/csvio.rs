//! CSV output: header row mandatory, floats at 9 significant digits in
//! scientific notation, `\n` line endings. The formatting is deterministic
//! so reruns are byte-identical and golden-file diffs stay quiet.

use std::io::{self, Write};

use lgcp_core::sequence::BuildupCurve;

use crate::driver::ContourTable;
use crate::spectral::{DipolarSpectrum, ScaleFactorResult};

/// 9 significant digits, locale-independent.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.8e}")
}

pub fn write_buildup(w: &mut impl Write, curve: &BuildupCurve) -> io::Result<()> {
    writeln!(w, "time_s,signal")?;
    for (t, s) in curve.times.iter().zip(&curve.signal) {
        writeln!(w, "{},{}", fmt_float(*t), fmt_float(*s))?;
    }
    Ok(())
}

pub fn write_spectrum(w: &mut impl Write, spec: &DipolarSpectrum) -> io::Result<()> {
    writeln!(w, "freq_hz,amplitude")?;
    for (f, a) in spec.freqs.iter().zip(&spec.amps) {
        writeln!(w, "{},{}", fmt_float(*f), fmt_float(*a))?;
    }
    Ok(())
}

pub fn write_scale_factor(
    w: &mut impl Write,
    scale: Option<&ScaleFactorResult>,
    true_delta_hz: f64,
) -> io::Result<()> {
    writeln!(w, "true_delta_hz,detected,observed_hz,k,peak_freq_hz,uncertainty")?;
    match scale {
        Some(s) => writeln!(
            w,
            "{},1,{},{},{},{}",
            fmt_float(s.true_delta_hz),
            fmt_float(s.observed_hz),
            fmt_float(s.k),
            fmt_float(s.peak_freq_hz),
            fmt_float(s.uncertainty),
        ),
        None => writeln!(w, "{},0,,,,", fmt_float(true_delta_hz)),
    }
}

/// Long-format contour: one row per (parameter value, frequency bin).
pub fn write_contour(w: &mut impl Write, table: &ContourTable) -> io::Result<()> {
    writeln!(w, "parameter_khz,freq_hz,amplitude")?;
    for row in &table.rows {
        for (f, a) in table.freqs.iter().zip(&row.amps) {
            writeln!(w, "{},{},{}", fmt_float(row.value_khz), fmt_float(*f), fmt_float(*a))?;
        }
    }
    Ok(())
}

pub fn write_scale_table(w: &mut impl Write, table: &ContourTable) -> io::Result<()> {
    writeln!(w, "parameter_khz,detected,observed_hz,k,peak_freq_hz,uncertainty")?;
    for row in &table.rows {
        match &row.scale {
            Some(s) => writeln!(
                w,
                "{},1,{},{},{},{}",
                fmt_float(row.value_khz),
                fmt_float(s.observed_hz),
                fmt_float(s.k),
                fmt_float(s.peak_freq_hz),
                fmt_float(s.uncertainty),
            )?,
            None => writeln!(w, "{},0,,,,", fmt_float(row.value_khz))?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_is_nine_significant_digits() {
        assert_eq!(fmt_float(3222.65625), "3.22265625e3");
        assert_eq!(fmt_float(-0.5774), "-5.77400000e-1");
        assert_eq!(fmt_float(0.0), "0.00000000e0");
        assert_eq!(fmt_float(3.0e-5), "3.00000000e-5");
    }

    #[test]
    fn buildup_header_and_shape() {
        let curve = BuildupCurve {
            times: vec![0.0, 30e-6],
            signal: vec![0.0, 0.25],
            dwell_adjusted_s: None,
        };
        let mut out = Vec::new();
        write_buildup(&mut out, &curve).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("time_s,signal"));
        assert_eq!(lines.next(), Some("0.00000000e0,0.00000000e0"));
        assert_eq!(lines.next(), Some("3.00000000e-5,2.50000000e-1"));
        assert_eq!(lines.next(), None);
    }
}
