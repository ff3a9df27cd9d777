//! Run configuration: file ingestion, fail-closed validation, and the bridge
//! from config sections to module parameter types.
//!
//! Configs are TOML (or JSON, keyed by file extension) with one section per
//! subsystem. Unknown keys are rejected, and every module invariant is
//! checked at load time so a bad value can never surface mid-run.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::{detection, mzi, optics, pbs, spin};

/// Full experiment description. Sections are optional; each command states
/// which ones it needs.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Run-level RNG seed; overridable from the command line.
    pub seed: u64,
    #[serde(default)]
    pub output: OutputConfig,
    pub spin: Option<SpinSection>,
    pub optics: Option<OpticsSection>,
    pub mzi: Option<MziSection>,
    pub detector: Option<DetectorSection>,
    pub sweep: Option<SweepSection>,
    pub pbs: Option<PbsSection>,
    pub saturation: Option<SaturationSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Directory CSV and metadata files land in.
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
        }
    }
}

/// Spin dynamics parameters plus integration controls.
/// Units: nT, 1/s, rad/(s nT), s.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinSection {
    pub gamma_e: f64,
    pub r_op: f64,
    pub r_rel: f64,
    pub bz: f64,
    pub by_amp: f64,
    pub by_freq: f64,
    #[serde(default)]
    pub by_phase: f64,
    /// `"polarization-dependent"` or `"constant"` (the latter needs `q_value`).
    pub q_mode: String,
    pub q_value: Option<f64>,
    #[serde(default)]
    pub p0: [f64; 3],
    pub dt: f64,
    pub t_end: f64,
    /// Transients are discarded for `transient_multiplier * q / (r_op + r_rel)`
    /// seconds in response comparisons and figure outputs.
    #[serde(default = "default_transient_multiplier")]
    pub transient_multiplier: f64,
    /// Keep every n-th sample when writing time-series CSV.
    #[serde(default = "default_stride")]
    pub output_stride: usize,
}

fn default_transient_multiplier() -> f64 {
    5.0
}

fn default_stride() -> usize {
    1
}

impl SpinSection {
    pub fn rates(&self) -> spin::RateParams {
        spin::RateParams {
            gamma_e: self.gamma_e,
            r_op: self.r_op,
            r_rel: self.r_rel,
        }
    }

    pub fn fields(&self) -> spin::FieldConfig {
        spin::FieldConfig {
            bz: self.bz,
            by_amp: self.by_amp,
            by_freq: self.by_freq,
            by_phase: self.by_phase,
        }
    }

    pub fn q_mode(&self) -> Result<spin::SlowingFactor> {
        match self.q_mode.as_str() {
            "polarization-dependent" => {
                if self.q_value.is_some() {
                    return Err(Error::Config(
                        "q_value is only meaningful with q_mode = \"constant\"".into(),
                    ));
                }
                Ok(spin::SlowingFactor::PolarizationDependent)
            }
            "constant" => {
                let q = self.q_value.ok_or_else(|| {
                    Error::Config("q_mode = \"constant\" requires q_value".into())
                })?;
                Ok(spin::SlowingFactor::Constant(q))
            }
            other => Err(Error::Config(format!(
                "unknown q_mode {other:?}; expected \"constant\" or \"polarization-dependent\""
            ))),
        }
    }

    pub fn initial_state(&self) -> spin::BlochVector {
        spin::BlochVector::new(self.p0[0], self.p0[1], self.p0[2])
    }

    /// Seconds of transient to discard before treating the response as
    /// periodic.
    pub fn transient_time(&self) -> f64 {
        let q = match self.q_mode().expect("validated at load") {
            spin::SlowingFactor::Constant(q) => q,
            spin::SlowingFactor::PolarizationDependent => {
                let pz0 = self.r_op / (self.r_op + self.r_rel);
                spin::SlowingFactor::PolarizationDependent.value(pz0)
            }
        };
        self.transient_multiplier * q / (self.r_op + self.r_rel)
    }

    fn validate(&self) -> Result<()> {
        let rates = self.rates();
        rates.validate()?;
        let fields = self.fields();
        fields.validate()?;
        let q_mode = self.q_mode()?;
        q_mode.validate()?;
        spin::validate_resolution(&rates, &fields, &q_mode, self.dt)?;
        if !self.t_end.is_finite() || self.t_end <= 0.0 {
            return Err(Error::Config(format!("t_end must be positive, got {}", self.t_end)));
        }
        if !self.transient_multiplier.is_finite() || self.transient_multiplier <= 0.0 {
            return Err(Error::Config(format!(
                "transient_multiplier must be positive, got {}",
                self.transient_multiplier
            )));
        }
        if self.output_stride == 0 {
            return Err(Error::Config("output_stride must be at least 1".into()));
        }
        let p0 = self.initial_state();
        if p0.norm() > 1.0 + 1e-12 {
            return Err(Error::Config(format!(
                "initial polarization must lie in the unit ball, |p0| = {}",
                p0.norm()
            )));
        }
        Ok(())
    }
}

/// Optical constants. Atom density is quoted in cm^-3 and converted on load.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpticsSection {
    pub path_length: f64,
    #[serde(default = "default_r_e")]
    pub r_e: f64,
    #[serde(default = "default_c")]
    pub c: f64,
    pub oscillator_strength: f64,
    pub atom_density_cm3: f64,
    pub probe_freq: f64,
    pub resonance_freq: f64,
    pub fwhm: f64,
}

fn default_r_e() -> f64 {
    optics::CLASSICAL_ELECTRON_RADIUS_M
}

fn default_c() -> f64 {
    optics::SPEED_OF_LIGHT_M_PER_S
}

impl OpticsSection {
    pub fn to_params(&self) -> optics::OpticalParams {
        optics::OpticalParams {
            path_length: self.path_length,
            r_e: self.r_e,
            c: self.c,
            oscillator_strength: self.oscillator_strength,
            atom_density: optics::OpticalParams::density_from_cm3(self.atom_density_cm3),
            probe_freq: self.probe_freq,
            resonance_freq: self.resonance_freq,
            fwhm: self.fwhm,
        }
    }
}

/// Postselection phases to sweep.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MziSection {
    pub betas: Vec<f64>,
}

impl MziSection {
    fn validate(&self) -> Result<()> {
        if self.betas.is_empty() {
            return Err(Error::Config("mzi.betas must list at least one phase".into()));
        }
        for &beta in &self.betas {
            mzi::MziConfig::new(beta)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorSection {
    pub n_photons: Option<f64>,
    pub i_sat: Option<f64>,
}

impl DetectorSection {
    fn validate(&self, seed: u64) -> Result<()> {
        detection::DetectorConfig {
            n_photons: self.n_photons.unwrap_or(1.0),
            i_sat: self.i_sat,
            seed,
        }
        .validate()?;
        if let Some(n) = self.n_photons {
            if !n.is_finite() || n <= 0.0 {
                return Err(Error::Config(format!("n_photons must be positive, got {n}")));
            }
        }
        Ok(())
    }
}

/// Named sweep axes; commands pick the ones they need.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub theta: Option<AxisSpec>,
    pub v0: Option<AxisSpec>,
    pub n_photons: Option<AxisSpec>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub scale: AxisScale,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisScale {
    Linear,
    Log,
}

impl AxisSpec {
    pub fn validate(&self, name: &str) -> Result<()> {
        if self.count < 2 {
            return Err(Error::Config(format!(
                "sweep.{name}.count must be at least 2, got {}",
                self.count
            )));
        }
        let ordered = self.min < self.max;
        if !ordered {
            return Err(Error::Config(format!(
                "sweep.{name} requires min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        if self.scale == AxisScale::Log && self.min <= 0.0 {
            return Err(Error::Config(format!(
                "sweep.{name} uses a log scale, so min must be positive"
            )));
        }
        Ok(())
    }

    /// Grid points, inclusive of both ends.
    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| {
                let f = i as f64 / (n - 1) as f64;
                match self.scale {
                    AxisScale::Linear => self.min + f * (self.max - self.min),
                    AxisScale::Log => {
                        (self.min.ln() + f * (self.max.ln() - self.min.ln())).exp()
                    }
                }
            })
            .collect()
    }
}

/// Analyzer cross-talk settings. `delta_pairs` sweeps curve families;
/// `t_h`/`r_v` default to the energy-conserving `1 - delta`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PbsSection {
    pub delta_pairs: Vec<[f64; 2]>,
    pub t_h: Option<f64>,
    pub r_v: Option<f64>,
    #[serde(default = "default_eta")]
    pub eta_t: f64,
    #[serde(default = "default_eta")]
    pub eta_r: f64,
}

fn default_eta() -> f64 {
    1.0
}

impl PbsSection {
    pub fn params_for(&self, delta1: f64, delta2: f64) -> pbs::PbsParams {
        pbs::PbsParams {
            t_h: self.t_h.unwrap_or(1.0 - delta1),
            r_v: self.r_v.unwrap_or(1.0 - delta2),
            delta1,
            delta2,
            eta_t: self.eta_t,
            eta_r: self.eta_r,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.delta_pairs.is_empty() {
            return Err(Error::Config(
                "pbs.delta_pairs must list at least one cross-talk pair".into(),
            ));
        }
        for &[d1, d2] in &self.delta_pairs {
            self.params_for(d1, d2).validate()?;
        }
        Ok(())
    }
}

/// Saturation study knobs. Exactly one of `beta` or `p_f_target` selects the
/// postselection phase.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SaturationSection {
    pub trials: usize,
    pub theta: f64,
    pub beta: Option<f64>,
    pub p_f_target: Option<f64>,
}

impl SaturationSection {
    /// Resolve the postselection phase.
    pub fn beta(&self) -> Result<f64> {
        match (self.beta, self.p_f_target) {
            (Some(beta), None) => Ok(beta),
            (None, Some(p_f)) => mzi::beta_for_postselection_probability(self.theta, p_f),
            _ => Err(Error::Config(
                "saturation needs exactly one of beta or p_f_target".into(),
            )),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials < 100 {
            return Err(Error::Config(format!(
                "saturation.trials must be at least 100, got {}",
                self.trials
            )));
        }
        if !self.theta.is_finite() || self.theta <= 0.0 {
            return Err(Error::Config(format!(
                "saturation.theta must be positive, got {}",
                self.theta
            )));
        }
        let beta = self.beta()?;
        mzi::MziConfig::new(beta)?;
        Ok(())
    }
}

impl RunConfig {
    /// Check every present section against its module invariants.
    pub fn validate(&self) -> Result<()> {
        if let Some(spin) = &self.spin {
            spin.validate()?;
        }
        if let Some(optics) = &self.optics {
            optics.to_params().validate()?;
        }
        if let Some(mzi) = &self.mzi {
            mzi.validate()?;
        }
        if let Some(detector) = &self.detector {
            detector.validate(self.seed)?;
        }
        if let Some(sweep) = &self.sweep {
            if let Some(axis) = &sweep.theta {
                axis.validate("theta")?;
            }
            if let Some(axis) = &sweep.v0 {
                axis.validate("v0")?;
            }
            if let Some(axis) = &sweep.n_photons {
                axis.validate("n_photons")?;
            }
        }
        if let Some(pbs) = &self.pbs {
            pbs.validate()?;
        }
        if let Some(sat) = &self.saturation {
            sat.validate()?;
        }
        Ok(())
    }

    fn section_missing(&self, what: &str) -> Error {
        Error::Config(format!("this command requires the [{what}] config section"))
    }

    pub fn require_spin(&self) -> Result<&SpinSection> {
        self.spin.as_ref().ok_or_else(|| self.section_missing("spin"))
    }

    pub fn require_optics(&self) -> Result<&OpticsSection> {
        self.optics.as_ref().ok_or_else(|| self.section_missing("optics"))
    }

    pub fn require_mzi(&self) -> Result<&MziSection> {
        self.mzi.as_ref().ok_or_else(|| self.section_missing("mzi"))
    }

    pub fn require_pbs(&self) -> Result<&PbsSection> {
        self.pbs.as_ref().ok_or_else(|| self.section_missing("pbs"))
    }

    pub fn require_saturation(&self) -> Result<&SaturationSection> {
        self.saturation
            .as_ref()
            .ok_or_else(|| self.section_missing("saturation"))
    }

    pub fn require_theta_axis(&self) -> Result<&AxisSpec> {
        self.sweep
            .as_ref()
            .and_then(|s| s.theta.as_ref())
            .ok_or_else(|| self.section_missing("sweep.theta"))
    }

    pub fn require_v0_axis(&self) -> Result<&AxisSpec> {
        self.sweep
            .as_ref()
            .and_then(|s| s.v0.as_ref())
            .ok_or_else(|| self.section_missing("sweep.v0"))
    }

    pub fn require_n_photons_axis(&self) -> Result<&AxisSpec> {
        self.sweep
            .as_ref()
            .and_then(|s| s.n_photons.as_ref())
            .ok_or_else(|| self.section_missing("sweep.n_photons"))
    }

    pub fn require_detector_photons(&self) -> Result<f64> {
        self.detector
            .as_ref()
            .and_then(|d| d.n_photons)
            .ok_or_else(|| Error::Config("this command requires detector.n_photons".into()))
    }
}

/// Load and fully validate a config file. TOML by default, JSON for `.json`.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let config = parse_config(&text, path)?;
    config.validate()?;
    Ok(config)
}

/// Parse config text without touching the filesystem; `path` is only used in
/// error messages and format detection.
pub fn parse_config(text: &str, path: &Path) -> Result<RunConfig> {
    let is_json = path.extension().is_some_and(|e| e == "json");
    if is_json {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    } else {
        toml::from_str(text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}
