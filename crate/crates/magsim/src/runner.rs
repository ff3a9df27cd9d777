//! Command orchestration: turn a validated config into deterministic CSV
//! tables plus a JSON metadata sidecar.
//!
//! Numeric CSV fields carry 17 significant digits, UTF-8, LF line endings;
//! rerunning a command with the same config and seed reproduces the files
//! byte for byte. Sweep rows are emitted in axis order no matter how the
//! points were scheduled.

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::{detection, mzi, optics, pbs, spin};

/// The CLI commands; each reproduces one study.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Fig2a,
    Fig2b,
    Fig3,
    Fig6,
    Snr,
    Saturation,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Fig2a => "fig2a",
            Command::Fig2b => "fig2b",
            Command::Fig3 => "fig3",
            Command::Fig6 => "fig6",
            Command::Snr => "snr",
            Command::Saturation => "saturation",
        }
    }

    pub fn all() -> [Command; 6] {
        [
            Command::Fig2a,
            Command::Fig2b,
            Command::Fig3,
            Command::Fig6,
            Command::Snr,
            Command::Saturation,
        ]
    }
}

/// An in-memory CSV table with preformatted cells.
#[derive(Debug, Clone)]
pub struct CsvTable {
    /// File stem; written as `<name>.csv`.
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Full-precision float cell: 17 significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_u64(x: u64) -> String {
    x.to_string()
}

/// 64-bit FNV-1a of the raw config text. Platform-independent, so the same
/// config bytes hash identically everywhere.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Sidecar describing one command run.
#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata {
    pub command: String,
    /// FNV-1a 64 of the config file bytes, hex.
    pub config_hash: String,
    pub artifact_version: String,
    pub seed: u64,
    pub timestamp_unix_s: u64,
    pub wall_time_s: f64,
    pub outputs: Vec<String>,
}

/// Run a command end to end: compute tables, write CSVs and metadata into
/// `out_dir`, return the written paths.
pub fn execute(
    command: Command,
    config: &RunConfig,
    config_text: &str,
    out_dir: &Path,
    seed_override: Option<u64>,
) -> Result<Vec<PathBuf>> {
    let seed = seed_override.unwrap_or(config.seed);
    let started = Instant::now();
    let tables = run_command(command, config, seed)?;
    let metadata = RunMetadata {
        command: command.name().to_string(),
        config_hash: format!("{:016x}", fnv1a64(config_text.as_bytes())),
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        seed,
        timestamp_unix_s: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        wall_time_s: started.elapsed().as_secs_f64(),
        outputs: tables.iter().map(|t| format!("{}.csv", t.name)).collect(),
    };
    write_outputs(&tables, &metadata, out_dir)
}

/// Compute the tables for a command without touching the filesystem.
pub fn run_command(command: Command, config: &RunConfig, seed: u64) -> Result<Vec<CsvTable>> {
    match command {
        Command::Fig2a => Ok(vec![run_fig2a(config)?]),
        Command::Fig2b => Ok(vec![run_fig2b(config)?]),
        Command::Fig3 => run_fig3(config),
        Command::Fig6 => Ok(vec![run_fig6(config)?]),
        Command::Snr => Ok(vec![run_snr(config)?]),
        Command::Saturation => Ok(vec![run_saturation(config, seed)?]),
    }
}

/// Fisher information per postselected photon over a rotation-angle sweep,
/// one block per configured postselection phase, with the entangled-state
/// reference value alongside.
pub fn run_fig2a(config: &RunConfig) -> Result<CsvTable> {
    let betas = &config.require_mzi()?.betas;
    let thetas = config.require_theta_axis()?.values();
    let mut table = CsvTable::new("fig2a", &["theta_rad", "beta_rad", "qfi_ps", "qfi_ref"]);
    for &beta in betas {
        let rows: Vec<_> = thetas
            .par_iter()
            .map(|&theta| {
                let cell = match mzi::qfi_postselected(theta, beta) {
                    Ok(qfi) => fmt_f64(qfi),
                    Err(Error::DarkPort { .. }) => "rejected".to_string(),
                    Err(e) => return Err(e),
                };
                Ok(vec![
                    fmt_f64(theta),
                    fmt_f64(beta),
                    cell,
                    fmt_f64(mzi::qfi_entangled(theta)),
                ])
            })
            .collect::<Result<_>>()?;
        for row in rows {
            table.push_row(row);
        }
    }
    Ok(table)
}

/// Amplified angle versus true angle, one block per postselection phase.
/// The last column repeats `theta` itself: the no-postselection diagonal.
pub fn run_fig2b(config: &RunConfig) -> Result<CsvTable> {
    let betas = &config.require_mzi()?.betas;
    let thetas = config.require_theta_axis()?.values();
    let mut table = CsvTable::new(
        "fig2b",
        &[
            "theta_rad",
            "beta_rad",
            "p_f",
            "pv_tilde",
            "theta_tilde_rad",
            "eta",
            "qfi_ps",
            "theta_ref_rad",
        ],
    );
    for &beta in betas {
        let points = mzi::amplification_curve(&thetas, beta);
        for pt in points {
            let row = match pt.outcome {
                Some(out) => vec![
                    fmt_f64(pt.theta),
                    fmt_f64(beta),
                    fmt_f64(out.p_f),
                    fmt_f64(out.pv_tilde),
                    fmt_f64(out.theta_tilde),
                    out.eta.map(fmt_f64).unwrap_or_else(|| "undefined".into()),
                    fmt_f64(mzi::qfi_postselected(pt.theta, beta)?),
                    fmt_f64(pt.theta),
                ],
                None => vec![
                    fmt_f64(pt.theta),
                    fmt_f64(beta),
                    "rejected".into(),
                    "rejected".into(),
                    "rejected".into(),
                    "rejected".into(),
                    "rejected".into(),
                    fmt_f64(pt.theta),
                ],
            };
            table.push_row(row);
        }
    }
    Ok(table)
}

/// Time-dependent rotation signals: integrate the spin dynamics, convert to
/// the true angle, and amplify per configured phase. Emits the post-transient
/// window only, at the configured output stride, plus the raw polarization
/// and angle series as separate tables.
pub fn run_fig3(config: &RunConfig) -> Result<Vec<CsvTable>> {
    let spin_cfg = config.require_spin()?;
    let optics_params = config.require_optics()?.to_params();
    let betas = &config.require_mzi()?.betas;

    let rates = spin_cfg.rates();
    let fields = spin_cfg.fields();
    let q_mode = spin_cfg.q_mode()?;

    let response = spin::linear_response(&rates, &fields, &q_mode)?;
    if !response.is_weak_drive() {
        eprintln!(
            "warning: drive is not weak (r_op / (gamma_e by_amp) = {:.1} < 100); \
             the amplified signal may deviate from the linear response",
            response.drive_ratio
        );
    }

    let trajectory = spin::integrate_bloch(
        &rates,
        &fields,
        &q_mode,
        spin_cfg.initial_state(),
        spin_cfg.t_end,
        spin_cfg.dt,
    )?;

    let transient = spin_cfg.transient_time();
    let stride = spin_cfg.output_stride.max(1);
    let kept: Vec<(f64, spin::BlochVector)> = trajectory
        .samples
        .iter()
        .filter(|(t, _)| *t >= transient)
        .copied()
        .step_by(stride)
        .collect();
    if kept.is_empty() {
        return Err(Error::Config(format!(
            "t_end = {} leaves no samples after the {:.3e} s transient",
            spin_cfg.t_end, transient
        )));
    }

    let mut bloch = CsvTable::new("bloch", &["t_s", "px", "py", "pz"]);
    for (t, p) in &kept {
        bloch.push_row(vec![fmt_f64(*t), fmt_f64(p.px), fmt_f64(p.py), fmt_f64(p.pz)]);
    }

    let px_series: Vec<(f64, f64)> = kept.iter().map(|(t, p)| (*t, p.px)).collect();
    let angles = optics::faraday_series(&px_series, &optics_params)?;

    let mut faraday = CsvTable::new("faraday", &["t_s", "theta_rad"]);
    for &(t, theta) in &angles.samples {
        faraday.push_row(vec![fmt_f64(t), fmt_f64(theta)]);
    }

    let mut columns = vec!["t_s".to_string(), "theta_rad".to_string()];
    for i in 1..=betas.len() {
        columns.push(format!("theta_tilde_rad_b{i}"));
    }
    let mut fig3 = CsvTable {
        name: "fig3".into(),
        columns,
        rows: Vec::new(),
    };
    for &(t, theta) in &angles.samples {
        let mut row = vec![fmt_f64(t), fmt_f64(theta)];
        for &beta in betas {
            // The analyzer reads |theta_tilde|; carry the drive sign through
            // so the emitted waveform oscillates like the true angle.
            let out = mzi::postselect(theta, beta)?;
            row.push(fmt_f64(theta.signum() * out.theta_tilde));
        }
        fig3.push_row(row);
    }
    Ok(vec![fig3, bloch, faraday])
}

/// Calibration error ratio versus true polarization ratio for each
/// configured cross-talk pair.
pub fn run_fig6(config: &RunConfig) -> Result<CsvTable> {
    let pbs_cfg = config.require_pbs()?;
    let v0s = config.require_v0_axis()?.values();
    let mut table = CsvTable::new(
        "fig6",
        &[
            "v0", "delta1", "delta2", "t_h", "r_v", "v_meas", "v_cal", "v_tilde", "phi",
        ],
    );
    for &[d1, d2] in &pbs_cfg.delta_pairs {
        let params = pbs_cfg.params_for(d1, d2);
        for &v0 in &v0s {
            let v_meas = pbs::measured_ratio(v0, &params)?;
            let v_cal = pbs::calibration_ratio(&params);
            let v_tilde = pbs::calibrated_ratio(v0, &params)?;
            let phi = pbs::error_ratio(v0, &params)?;
            table.push_row(vec![
                fmt_f64(v0),
                fmt_f64(d1),
                fmt_f64(d2),
                fmt_f64(params.t_h),
                fmt_f64(params.r_v),
                fmt_f64(v_meas),
                fmt_f64(v_cal),
                fmt_f64(v_tilde),
                fmt_f64(phi),
            ]);
        }
    }
    Ok(table)
}

/// Analytic signal-to-noise comparison over the configured angle/phase grid.
pub fn run_snr(config: &RunConfig) -> Result<CsvTable> {
    let betas = &config.require_mzi()?.betas;
    let thetas = config.require_theta_axis()?.values();
    let n_photons = config.require_detector_photons()?;
    let mut table = CsvTable::new(
        "snr",
        &[
            "theta_rad",
            "beta_rad",
            "n_photons",
            "p_f",
            "theta_tilde_rad",
            "snr_psa",
            "snr_conv",
            "snr_ratio",
        ],
    );
    for &beta in betas {
        for &theta in &thetas {
            let c = detection::snr_compare(theta, beta, n_photons)?;
            table.push_row(vec![
                fmt_f64(theta),
                fmt_f64(beta),
                fmt_f64(n_photons),
                fmt_f64(c.p_f),
                fmt_f64(c.theta_tilde),
                fmt_f64(c.snr_psa),
                fmt_f64(c.snr_conventional),
                fmt_f64(c.ratio()),
            ]);
        }
    }
    Ok(table)
}

/// Monte Carlo saturation study over the photon-number sweep.
pub fn run_saturation(config: &RunConfig, seed: u64) -> Result<CsvTable> {
    let sat = config.require_saturation()?;
    let n_grid = config.require_n_photons_axis()?.values();
    let i_sat = config.detector.as_ref().and_then(|d| d.i_sat);
    let beta = sat.beta()?;
    let rows = detection::saturation_study(sat.theta, beta, &n_grid, i_sat, sat.trials, seed)?;
    let mut table = CsvTable::new(
        "saturation",
        &[
            "n_photons",
            "p_f",
            "theta_true_rad",
            "rms_err_psa_rad",
            "rms_err_conv_rad",
            "trials",
            "seed",
        ],
    );
    for row in rows {
        table.push_row(vec![
            fmt_f64(row.n_photons),
            fmt_f64(row.p_f),
            fmt_f64(row.theta_true),
            fmt_f64(row.rms_err_psa),
            fmt_f64(row.rms_err_conv),
            fmt_u64(row.trials),
            fmt_u64(row.seed),
        ]);
    }
    Ok(table)
}

/// Write each table as `<name>.csv` plus a `<command>.metadata.json`
/// sidecar. Returns the written paths.
pub fn write_outputs(
    tables: &[CsvTable],
    metadata: &RunMetadata,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    for table in tables {
        let path = dir.join(format!("{}.csv", table.name));
        std::fs::write(&path, table.to_csv_string()).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        written.push(path);
    }
    let meta_path = dir.join(format!("{}.metadata.json", metadata.command));
    let mut json = serde_json::to_string_pretty(metadata).expect("metadata serializes");
    json.push('\n');
    std::fs::write(&meta_path, json).map_err(|source| Error::Io {
        path: meta_path.clone(),
        source,
    })?;
    written.push(meta_path);
    Ok(written)
}
