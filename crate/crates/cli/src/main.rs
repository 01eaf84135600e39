//! `lgcp` — simulate LGCP contact experiments, sweep rf parameters, and
//! compare the numeric spectra against the tilted-frame analytics.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lgcp_cli::config::{parse_config, ConfigError, FileConfig};
use lgcp_cli::csvio;
use lgcp_cli::driver::{run_single, run_sweep};
use lgcp_cli::report::{predict_text, report_text};

#[derive(Parser)]
#[command(name = "lgcp", version, about = "two-spin LGCP simulator and scale-factor sweeper")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory for CSV files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one powder simulation: buildup CSV, spectrum CSV, scale factor.
    Simulate { config: PathBuf },
    /// Sweep a parameter: contour CSV (long format) and scale-factor table.
    Sweep { config: PathBuf },
    /// Print the analytic frame report for a configuration.
    Predict { config: PathBuf },
    /// Run the simulation and print numeric vs analytic side by side.
    Report { config: PathBuf },
}

const EXIT_CONFIG: u8 = 1;
const EXIT_RUNTIME: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_CONFIG);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(EXIT_RUNTIME);
        }
    }

    let config_path = match &cli.command {
        Command::Simulate { config }
        | Command::Sweep { config }
        | Command::Predict { config }
        | Command::Report { config } => config.clone(),
    };
    let cfg = match load_config(&config_path) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };

    let result = match cli.command {
        Command::Simulate { .. } => cmd_simulate(&cfg, &cli.out),
        Command::Sweep { .. } => cmd_sweep(&cfg, &cli.out),
        Command::Predict { .. } => cmd_predict(&cfg),
        Command::Report { .. } => cmd_report(&cfg),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum AppError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("config has no sweep section (sweep_param and friends)")]
    NoSweep,
    #[error("{0}")]
    Runtime(String),
    #[error("writing {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl AppError {
    fn exit_code(&self) -> u8 {
        match self {
            AppError::Config(_) | AppError::NoSweep => EXIT_CONFIG,
            AppError::Runtime(_) | AppError::Io { .. } => EXIT_RUNTIME,
        }
    }
}

fn load_config(path: &Path) -> Result<FileConfig, AppError> {
    let text = fs::read_to_string(path).map_err(|source| AppError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(parse_config(&text)?)
}

fn create(out_dir: &Path, name: &str) -> Result<(PathBuf, fs::File), AppError> {
    fs::create_dir_all(out_dir).map_err(|source| AppError::Io {
        path: out_dir.display().to_string(),
        source,
    })?;
    let path = out_dir.join(name);
    let file = fs::File::create(&path).map_err(|source| AppError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok((path, file))
}

fn write_out(
    out_dir: &Path,
    name: &str,
    f: impl FnOnce(&mut std::io::BufWriter<fs::File>) -> std::io::Result<()>,
) -> Result<PathBuf, AppError> {
    let (path, file) = create(out_dir, name)?;
    let mut w = std::io::BufWriter::new(file);
    f(&mut w)
        .and_then(|()| w.flush())
        .map_err(|source| AppError::Io { path: path.display().to_string(), source })?;
    Ok(path)
}

fn cmd_simulate(cfg: &FileConfig, out_dir: &Path) -> Result<(), AppError> {
    let run = run_single(cfg).map_err(|e| AppError::Runtime(e.to_string()))?;

    let buildup = write_out(out_dir, "buildup.csv", |w| csvio::write_buildup(w, &run.curve))?;
    let spectrum =
        write_out(out_dir, "spectrum.csv", |w| csvio::write_spectrum(w, &run.spectrum))?;
    let scale_path = write_out(out_dir, "scale_factor.csv", |w| {
        csvio::write_scale_factor(w, run.scale.as_ref(), run.coupling.delta_hz)
    })?;

    println!(
        "buildup: {} points x {:.3} us -> {}",
        run.curve.len(),
        run.curve.dwell_s() * 1e6,
        buildup.display()
    );
    println!(
        "spectrum: {} bins x {:.3} Hz -> {}",
        run.spectrum.freqs.len(),
        run.spectrum.grid_spacing_hz(),
        spectrum.display()
    );
    match &run.scale {
        Some(s) => {
            println!(
                "dominant peak {:+.1} Hz, observed splitting {:.1} Hz, true coupling {:.1} Hz",
                s.peak_freq_hz, s.observed_hz, s.true_delta_hz
            );
            println!("scale factor k = {:.4} +/- {:.4} -> {}", s.k, s.uncertainty, scale_path.display());
        }
        None => println!("no transfer detected -> {}", scale_path.display()),
    }
    Ok(())
}

fn cmd_sweep(cfg: &FileConfig, out_dir: &Path) -> Result<(), AppError> {
    if cfg.sweep.is_none() {
        return Err(AppError::NoSweep);
    }
    let table = run_sweep(cfg).map_err(|e| AppError::Runtime(e.to_string()))?;
    let contour = write_out(out_dir, "contour.csv", |w| csvio::write_contour(w, &table))?;
    let scales = write_out(out_dir, "scale_table.csv", |w| csvio::write_scale_table(w, &table))?;
    let detected = table.rows.iter().filter(|r| r.scale.is_some()).count();
    println!(
        "swept {} over {} points ({} with transfer) -> {}, {}",
        table.parameter.label(),
        table.rows.len(),
        detected,
        contour.display(),
        scales.display()
    );
    Ok(())
}

fn cmd_predict(cfg: &FileConfig) -> Result<(), AppError> {
    let text = predict_text(cfg).map_err(|e| AppError::Runtime(e.to_string()))?;
    print!("{text}");
    Ok(())
}

fn cmd_report(cfg: &FileConfig) -> Result<(), AppError> {
    let run = run_single(cfg).map_err(|e| AppError::Runtime(e.to_string()))?;
    let text = report_text(cfg, &run).map_err(|e| AppError::Runtime(e.to_string()))?;
    print!("{text}");
    Ok(())
}
