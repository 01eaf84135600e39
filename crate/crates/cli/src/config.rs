//! Flat `key = value` run files.
//!
//! The key set is closed: anything unrecognized is an error naming the key,
//! so typos cannot silently fall back to defaults. Frequencies are given in
//! kHz and times in µs in the file (matching how such parameters are quoted
//! on a spectrometer); conversion to Hz/seconds happens here, once.
//!
//! ```text
//! # experiment A
//! i_nutation_khz   = 50.00    # H rf power
//! i_offset_khz     = 36.451   # LG offset
//! s_nutation_khz   = 53.05    # N rf power
//! rotor_khz        = 10.0
//! distance_angstrom = 1.04
//! ```

use std::collections::BTreeMap;

use lgcp_core::dipole::{
    coupling_from_distance, DipoleCoupling, IsotopePair, RotorConfig, DEFAULT_STEPS_PER_PERIOD,
};
use lgcp_core::frames::ChannelSettings;
use lgcp_core::powder::{PowderScheme, DEFAULT_POWDER_N};
use lgcp_core::sequence::{LgMode, SequenceConfig};
use lgcp_core::CoreError;

use crate::spectral::DEFAULT_ZERO_FILL;

pub const KNOWN_KEYS: [&str; 16] = [
    "i_nutation_khz",
    "i_offset_khz",
    "s_nutation_khz",
    "s_offset_khz",
    "rotor_khz",
    "distance_angstrom",
    "n_points",
    "dwell_us",
    "powder_n",
    "steps_per_period",
    "zero_fill",
    "sweep_param",
    "sweep_start_khz",
    "sweep_stop_khz",
    "sweep_step_khz",
    "lg_mode",
];

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("duplicate key `{0}`")]
    DuplicateKey(String),
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("key `{key}`: {detail}")]
    BadValue { key: String, detail: String },
    #[error("invalid parameters: {0}")]
    Invalid(#[from] CoreError),
}

/// Which knob a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    /// S-channel (N) rf power.
    NPower,
    /// I-channel (H) rf power.
    HPower,
    /// I-channel resonance offset.
    LgOffset,
}

impl SweepParameter {
    pub fn label(&self) -> &'static str {
        match self {
            SweepParameter::NPower => "n_power",
            SweepParameter::HPower => "h_power",
            SweepParameter::LgOffset => "lg_offset",
        }
    }
}

/// Grid description of a parameter sweep, kHz units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub start_khz: f64,
    pub stop_khz: f64,
    pub step_khz: f64,
}

impl SweepSpec {
    pub fn grid_khz(&self) -> Vec<f64> {
        let n = ((self.stop_khz - self.start_khz) / self.step_khz + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.start_khz + i as f64 * self.step_khz).collect()
    }
}

/// A fully parsed run file, with defaults applied.
#[derive(Debug, Clone, PartialEq)]
pub struct FileConfig {
    pub i_nutation_khz: f64,
    pub i_offset_khz: f64,
    pub s_nutation_khz: f64,
    pub s_offset_khz: f64,
    pub rotor_khz: f64,
    pub distance_angstrom: f64,
    pub n_points: usize,
    pub dwell_us: f64,
    pub powder_n: usize,
    pub steps_per_period: u32,
    pub zero_fill: usize,
    pub lg_mode: LgMode,
    pub sweep: Option<SweepSpec>,
}

pub fn parse_config(text: &str) -> Result<FileConfig, ConfigError> {
    let mut seen: BTreeMap<String, String> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ConfigError::Malformed { line: idx + 1, text: line.to_string() })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey(key));
        }
        if seen.insert(key.clone(), value).is_some() {
            return Err(ConfigError::DuplicateKey(key));
        }
    }
    build(&seen)
}

fn build(map: &BTreeMap<String, String>) -> Result<FileConfig, ConfigError> {
    let required_f64 = |key: &'static str| -> Result<f64, ConfigError> {
        let raw = map.get(key).ok_or(ConfigError::MissingKey(key))?;
        parse_f64(key, raw)
    };
    let optional_f64 = |key: &'static str, default: f64| -> Result<f64, ConfigError> {
        match map.get(key) {
            Some(raw) => parse_f64(key, raw),
            None => Ok(default),
        }
    };
    let optional_usize = |key: &'static str, default: usize| -> Result<usize, ConfigError> {
        match map.get(key) {
            Some(raw) => raw.parse::<usize>().map_err(|e| ConfigError::BadValue {
                key: key.to_string(),
                detail: e.to_string(),
            }),
            None => Ok(default),
        }
    };

    let lg_mode = match map.get("lg_mode").map(String::as_str) {
        None | Some("constant-offset") => LgMode::ConstantOffset,
        Some("fslg-toggled") => LgMode::FslgToggled,
        Some(other) => {
            return Err(ConfigError::BadValue {
                key: "lg_mode".to_string(),
                detail: format!(
                    "expected `constant-offset` or `fslg-toggled`, got `{other}`"
                ),
            })
        }
    };

    let sweep = match map.get("sweep_param") {
        None => {
            // a partial sweep section is a config error, not silence
            for key in ["sweep_start_khz", "sweep_stop_khz", "sweep_step_khz"] {
                if map.contains_key(key) {
                    return Err(ConfigError::MissingKey("sweep_param"));
                }
            }
            None
        }
        Some(raw) => {
            let parameter = match raw.as_str() {
                "n_power" => SweepParameter::NPower,
                "h_power" => SweepParameter::HPower,
                "lg_offset" => SweepParameter::LgOffset,
                other => {
                    return Err(ConfigError::BadValue {
                        key: "sweep_param".to_string(),
                        detail: format!(
                            "expected `n_power`, `h_power` or `lg_offset`, got `{other}`"
                        ),
                    })
                }
            };
            let spec = SweepSpec {
                parameter,
                start_khz: required_f64("sweep_start_khz")?,
                stop_khz: required_f64("sweep_stop_khz")?,
                step_khz: required_f64("sweep_step_khz")?,
            };
            validate_sweep(&spec)?;
            Some(spec)
        }
    };

    let cfg = FileConfig {
        i_nutation_khz: required_f64("i_nutation_khz")?,
        i_offset_khz: required_f64("i_offset_khz")?,
        s_nutation_khz: required_f64("s_nutation_khz")?,
        s_offset_khz: optional_f64("s_offset_khz", 0.0)?,
        rotor_khz: required_f64("rotor_khz")?,
        distance_angstrom: required_f64("distance_angstrom")?,
        n_points: optional_usize("n_points", 128)?,
        dwell_us: optional_f64("dwell_us", 30.0)?,
        powder_n: optional_usize("powder_n", DEFAULT_POWDER_N)?,
        steps_per_period: optional_usize("steps_per_period", DEFAULT_STEPS_PER_PERIOD as usize)?
            as u32,
        zero_fill: optional_usize("zero_fill", DEFAULT_ZERO_FILL)?,
        lg_mode,
        sweep,
    };
    // fail fast on physics-level validation
    cfg.sequence_config()?;
    cfg.coupling()?;
    Ok(cfg)
}

fn parse_f64(key: &str, raw: &str) -> Result<f64, ConfigError> {
    raw.parse::<f64>().map_err(|e| ConfigError::BadValue {
        key: key.to_string(),
        detail: e.to_string(),
    })
}

fn validate_sweep(spec: &SweepSpec) -> Result<(), ConfigError> {
    if !(spec.step_khz > 0.0) {
        return Err(ConfigError::BadValue {
            key: "sweep_step_khz".to_string(),
            detail: "step must be positive".to_string(),
        });
    }
    if spec.start_khz >= spec.stop_khz {
        return Err(ConfigError::BadValue {
            key: "sweep_start_khz".to_string(),
            detail: "start must be below stop".to_string(),
        });
    }
    let points = (spec.stop_khz - spec.start_khz) / spec.step_khz;
    if points > 10_000.0 {
        return Err(ConfigError::BadValue {
            key: "sweep_step_khz".to_string(),
            detail: format!("{points:.0} grid points exceed the 10000-point cap"),
        });
    }
    Ok(())
}

impl FileConfig {
    pub fn i_channel(&self) -> Result<ChannelSettings, CoreError> {
        ChannelSettings::new(self.i_nutation_khz * 1e3, self.i_offset_khz * 1e3)
    }

    pub fn s_channel(&self) -> Result<ChannelSettings, CoreError> {
        ChannelSettings::new(self.s_nutation_khz * 1e3, self.s_offset_khz * 1e3)
    }

    pub fn sequence_config(&self) -> Result<SequenceConfig, CoreError> {
        SequenceConfig::new(
            self.i_channel()?,
            self.s_channel()?,
            RotorConfig::new(self.rotor_khz * 1e3, self.steps_per_period)?,
            self.n_points,
            self.dwell_us * 1e-6,
            self.lg_mode,
        )
    }

    pub fn coupling(&self) -> Result<DipoleCoupling, CoreError> {
        coupling_from_distance(self.distance_angstrom, IsotopePair::N15H1)
    }

    pub fn powder_scheme(&self) -> PowderScheme {
        PowderScheme::GoldenSpiral { n: self.powder_n }
    }

    /// Clone with the swept parameter replaced.
    pub fn with_sweep_value(&self, parameter: SweepParameter, value_khz: f64) -> FileConfig {
        let mut out = self.clone();
        match parameter {
            SweepParameter::NPower => out.s_nutation_khz = value_khz,
            SweepParameter::HPower => out.i_nutation_khz = value_khz,
            SweepParameter::LgOffset => out.i_offset_khz = value_khz,
        }
        out
    }
}
