//! Electron-spin polarization dynamics in the vapor cell.
//!
//! The polarization vector `P = 2<S>` obeys the reduced Bloch equation
//!
//! ```text
//! dP/dt = (1/q) [ gamma_e B x P + R_op (e_z - P) - R_rel P ]
//! ```
//!
//! with a bias field `B_z` along the pump axis and a weak transverse drive
//! `B_y(t) = B_y cos(2 pi nu t + phi)`. The nuclear slowing-down factor `q`
//! is either a constant or the spin-3/2 form `2 (3 + P^2)/(1 + P^2)`.
//!
//! Units throughout: fields in nT, rates in 1/s, `gamma_e` in rad/(s nT),
//! time in s.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum number of integrator steps per shortest dynamical period.
pub const MIN_STEPS_PER_PERIOD: f64 = 50.0;

/// Electron-spin polarization vector, dimensionless components of `P = 2<S>`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochVector {
    pub px: f64,
    pub py: f64,
    pub pz: f64,
}

impl BlochVector {
    pub fn new(px: f64, py: f64, pz: f64) -> Self {
        Self { px, py, pz }
    }

    pub fn norm(&self) -> f64 {
        (self.px * self.px + self.py * self.py + self.pz * self.pz).sqrt()
    }

    fn scaled(&self, s: f64) -> Self {
        Self::new(self.px * s, self.py * s, self.pz * s)
    }

    fn plus(&self, other: &Self) -> Self {
        Self::new(self.px + other.px, self.py + other.py, self.pz + other.pz)
    }
}

/// Pumping, relaxation, and gyromagnetic rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateParams {
    /// Gyromagnetic ratio in rad/(s nT).
    pub gamma_e: f64,
    /// Optical pumping rate in 1/s.
    pub r_op: f64,
    /// Spin relaxation rate in 1/s.
    pub r_rel: f64,
}

impl RateParams {
    pub fn validate(&self) -> Result<()> {
        if !self.gamma_e.is_finite() || self.gamma_e <= 0.0 {
            return Err(Error::Config(format!(
                "gamma_e must be positive, got {}",
                self.gamma_e
            )));
        }
        if self.r_op < 0.0 || self.r_rel < 0.0 {
            return Err(Error::Config(format!(
                "pumping and relaxation rates must be nonnegative, got r_op={} r_rel={}",
                self.r_op, self.r_rel
            )));
        }
        if self.r_op + self.r_rel <= 0.0 {
            return Err(Error::Config(
                "r_op + r_rel must be positive; the spin never reaches a steady state".into(),
            ));
        }
        Ok(())
    }
}

/// Static bias field plus the transverse drive under measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldConfig {
    /// Bias field along z, nT.
    pub bz: f64,
    /// Drive amplitude along y, nT.
    pub by_amp: f64,
    /// Drive frequency, Hz.
    pub by_freq: f64,
    /// Drive phase at t = 0, rad.
    pub by_phase: f64,
}

impl FieldConfig {
    pub fn validate(&self) -> Result<()> {
        if self.by_freq < 0.0 {
            return Err(Error::Config(format!(
                "drive frequency must be nonnegative, got {}",
                self.by_freq
            )));
        }
        Ok(())
    }

    /// Transverse drive value at time `t`.
    pub fn by_at(&self, t: f64) -> f64 {
        self.by_amp * (std::f64::consts::TAU * self.by_freq * t + self.by_phase).cos()
    }
}

/// Nuclear slowing-down factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SlowingFactor {
    Constant(f64),
    /// Spin-3/2 form `2 (3 + P^2)/(1 + P^2)`, evaluated at the instantaneous
    /// `|P|` during integration.
    PolarizationDependent,
}

impl SlowingFactor {
    pub fn validate(&self) -> Result<()> {
        if let SlowingFactor::Constant(q) = self {
            if !q.is_finite() || *q <= 0.0 {
                return Err(Error::Config(format!(
                    "constant slowing factor must be positive, got {q}"
                )));
            }
        }
        Ok(())
    }

    /// Factor at polarization magnitude `p`.
    pub fn value(&self, p: f64) -> f64 {
        match self {
            SlowingFactor::Constant(q) => *q,
            SlowingFactor::PolarizationDependent => {
                let p2 = p * p;
                2.0 * (3.0 + p2) / (1.0 + p2)
            }
        }
    }

    /// Smallest value the factor can take over `|P| <= 1`; sets the fastest
    /// precession the integrator must resolve.
    pub fn minimum(&self) -> f64 {
        match self {
            SlowingFactor::Constant(q) => *q,
            SlowingFactor::PolarizationDependent => 4.0,
        }
    }
}

/// Spin-3/2 slowing factor `2 (3 + p^2)/(1 + p^2)` for `p` in `[0, 1]`.
pub fn q_factor(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!(
            "polarization must lie in [0, 1], got {p}"
        )));
    }
    Ok(SlowingFactor::PolarizationDependent.value(p))
}

/// Longitudinal steady state `r_op / (r_op + r_rel)`. The slowing factor
/// scales the whole right-hand side, so it drops out of the fixed point.
pub fn steady_state_pz(rates: &RateParams) -> Result<f64> {
    let total = rates.r_op + rates.r_rel;
    if total <= 0.0 {
        return Err(Error::Domain(
            "r_op + r_rel must be positive to define a steady state".into(),
        ));
    }
    Ok(rates.r_op / total)
}

/// Right-hand side of the Bloch equation at time `t`.
pub fn bloch_rhs(
    p: &BlochVector,
    t: f64,
    rates: &RateParams,
    fields: &FieldConfig,
    q_mode: &SlowingFactor,
) -> BlochVector {
    let by = fields.by_at(t);
    let bz = fields.bz;
    // B x P with B = (0, by, bz)
    let cx = by * p.pz - bz * p.py;
    let cy = bz * p.px;
    let cz = -by * p.px;
    let g = rates.gamma_e;
    let q = q_mode.value(p.norm());
    BlochVector {
        px: (g * cx - (rates.r_op + rates.r_rel) * p.px) / q,
        py: (g * cy - (rates.r_op + rates.r_rel) * p.py) / q,
        pz: (g * cz + rates.r_op * (1.0 - p.pz) - rates.r_rel * p.pz) / q,
    }
}

/// Time series produced by the fixed-step integrator.
#[derive(Debug, Clone)]
pub struct BlochTrajectory {
    pub samples: Vec<(f64, BlochVector)>,
}

impl BlochTrajectory {
    pub fn final_state(&self) -> (f64, BlochVector) {
        *self.samples.last().expect("trajectory is never empty")
    }

    /// `P_x` values only, in time order.
    pub fn px_samples(&self) -> Vec<f64> {
        self.samples.iter().map(|(_, p)| p.px).collect()
    }

    /// `(t, P_x)` pairs, the input shape for the optics stage.
    pub fn px_series(&self) -> Vec<(f64, f64)> {
        self.samples.iter().map(|(t, p)| (*t, p.px)).collect()
    }
}

/// Check that `dt` resolves both the Larmor period `2 pi q / (gamma_e B_z)`
/// and the drive period `1 / by_freq` with at least [`MIN_STEPS_PER_PERIOD`]
/// steps. Run at config load as well, so a bad step size never surfaces
/// mid-run.
pub fn validate_resolution(
    rates: &RateParams,
    fields: &FieldConfig,
    q_mode: &SlowingFactor,
    dt: f64,
) -> Result<()> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::Config(format!("dt must be positive, got {dt}")));
    }
    let mut shortest = f64::INFINITY;
    if fields.bz != 0.0 {
        let larmor = std::f64::consts::TAU * q_mode.minimum() / (rates.gamma_e * fields.bz.abs());
        shortest = shortest.min(larmor);
    }
    if fields.by_freq > 0.0 && fields.by_amp != 0.0 {
        shortest = shortest.min(1.0 / fields.by_freq);
    }
    if shortest.is_finite() && dt > shortest / MIN_STEPS_PER_PERIOD {
        return Err(Error::Config(format!(
            "dt = {dt:.3e} s is too coarse: the shortest period is {shortest:.3e} s and needs \
             at least {MIN_STEPS_PER_PERIOD} steps (dt <= {:.3e} s)",
            shortest / MIN_STEPS_PER_PERIOD
        )));
    }
    Ok(())
}

/// Integrate the Bloch equation with classical fixed-step RK4 from `p0` to
/// `t_end`. The fixed step keeps repeated runs bit-identical; the final time
/// is always included (via a shortened last step when `t_end` is not a
/// multiple of `dt`).
pub fn integrate_bloch(
    rates: &RateParams,
    fields: &FieldConfig,
    q_mode: &SlowingFactor,
    p0: BlochVector,
    t_end: f64,
    dt: f64,
) -> Result<BlochTrajectory> {
    rates.validate()?;
    fields.validate()?;
    q_mode.validate()?;
    if !t_end.is_finite() || t_end <= 0.0 {
        return Err(Error::Config(format!("t_end must be positive, got {t_end}")));
    }
    validate_resolution(rates, fields, q_mode, dt)?;

    let n_full = ((t_end / dt) * (1.0 + 1e-12)).floor() as u64;
    let mut samples = Vec::with_capacity(n_full as usize + 2);
    let mut p = p0;
    samples.push((0.0, p));
    for k in 0..n_full {
        let t = k as f64 * dt;
        p = rk4_step(&p, t, dt, rates, fields, q_mode);
        samples.push(((k + 1) as f64 * dt, p));
    }
    let t_last = n_full as f64 * dt;
    if t_end - t_last > dt * 1e-9 {
        p = rk4_step(&p, t_last, t_end - t_last, rates, fields, q_mode);
        samples.push((t_end, p));
    }
    Ok(BlochTrajectory { samples })
}

fn rk4_step(
    p: &BlochVector,
    t: f64,
    h: f64,
    rates: &RateParams,
    fields: &FieldConfig,
    q_mode: &SlowingFactor,
) -> BlochVector {
    let k1 = bloch_rhs(p, t, rates, fields, q_mode);
    let k2 = bloch_rhs(&p.plus(&k1.scaled(h / 2.0)), t + h / 2.0, rates, fields, q_mode);
    let k3 = bloch_rhs(&p.plus(&k2.scaled(h / 2.0)), t + h / 2.0, rates, fields, q_mode);
    let k4 = bloch_rhs(&p.plus(&k3.scaled(h)), t + h, rates, fields, q_mode);
    let incr = k1
        .plus(&k2.scaled(2.0))
        .plus(&k3.scaled(2.0))
        .plus(&k4)
        .scaled(h / 6.0);
    p.plus(&incr)
}

/// Steady drive response from linearizing the Bloch equation around
/// `(0, 0, pz0)`.
#[derive(Debug, Clone, Copy)]
pub struct LinearResponseSolution {
    /// Longitudinal steady state `r_op / (r_op + r_rel)`.
    pub pz0: f64,
    /// Amplitude modulation factor, 1/nT: the post-transient response is
    /// `P_x(t) = amp_factor * pz0 * by_amp * cos(2 pi nu t + by_phase + phase_delay)`.
    pub amp_factor: f64,
    /// Phase delay of the response relative to the drive, rad.
    pub phase_delay: f64,
    /// Slowing factor frozen at `|P| = pz0`.
    pub q_frozen: f64,
    /// `r_op / (gamma_e * by_amp)`; the linearization assumes this is large.
    pub drive_ratio: f64,
}

impl LinearResponseSolution {
    /// Predicted `P_x` oscillation amplitude for the given drive amplitude.
    pub fn px_amplitude(&self, by_amp: f64) -> f64 {
        self.amp_factor * self.pz0 * by_amp
    }

    /// Whether the weak-drive assumption `r_op >> gamma_e * by_amp` holds
    /// (ratio at least 100). A violation degrades accuracy but is not fatal.
    pub fn is_weak_drive(&self) -> bool {
        self.drive_ratio >= 100.0
    }
}

/// Solve the driven, linearized transverse dynamics at the drive frequency.
///
/// Dropping terms quadratic in `(P_x, P_y, B_y)` and freezing `P_z = pz0`
/// (and `q` at `pz0`) leaves a 2x2 linear system for the transverse
/// components, solved here as a complex phasor at angular frequency
/// `2 pi by_freq`. `B_z` is kept to all orders.
pub fn linear_response(
    rates: &RateParams,
    fields: &FieldConfig,
    q_mode: &SlowingFactor,
) -> Result<LinearResponseSolution> {
    rates.validate()?;
    fields.validate()?;
    q_mode.validate()?;
    let pz0 = steady_state_pz(rates)?;
    let q = q_mode.value(pz0);
    let relax = (rates.r_op + rates.r_rel) / q;
    let larmor = rates.gamma_e * fields.bz / q;
    let omega = std::f64::consts::TAU * fields.by_freq;

    // (i w + a) X = -wL Y + d, (i w + a) Y = wL X  with d the drive term;
    // eliminate Y.
    let s = num_complex::Complex64::new(relax, omega);
    let denom = s * s + larmor * larmor;
    let transfer = s / denom; // X / (gamma_e pz0 By / q)
    let amp_factor = rates.gamma_e / q * transfer.norm();
    let phase_delay = transfer.arg();

    let drive_ratio = if fields.by_amp == 0.0 {
        f64::INFINITY
    } else {
        rates.r_op / (rates.gamma_e * fields.by_amp.abs())
    };

    Ok(LinearResponseSolution {
        pz0,
        amp_factor,
        phase_delay,
        q_frozen: q,
        drive_ratio,
    })
}

/// Sublevel occupations of the F = 2 ground manifold under a
/// spin-temperature distribution, `rho(m) = e^{beta_st m} / Z`.
#[derive(Debug, Clone, Copy)]
pub struct SpinTemperatureDistribution {
    /// Inverse spin temperature `ln[(1 + P_z)/(1 - P_z)]`.
    pub beta_st: f64,
    occupations: [f64; 5],
}

impl SpinTemperatureDistribution {
    /// Occupation of sublevel `m_f` in `-2..=2`.
    pub fn occupation(&self, m_f: i32) -> f64 {
        assert!((-2..=2).contains(&m_f), "m_f must lie in -2..=2");
        self.occupations[(m_f + 2) as usize]
    }

    /// All five occupations, ordered `m_f = -2..=2`.
    pub fn occupations(&self) -> [f64; 5] {
        self.occupations
    }
}

/// Boltzmann-like sublevel distribution at longitudinal polarization `pz`.
/// Diverges as `|pz| -> 1`, where the inverse spin temperature is infinite.
pub fn spin_temperature_distribution(pz: f64) -> Result<SpinTemperatureDistribution> {
    if pz.abs() >= 1.0 {
        return Err(Error::Domain(format!(
            "spin-temperature distribution needs |pz| < 1, got {pz}"
        )));
    }
    let beta_st = ((1.0 + pz) / (1.0 - pz)).ln();
    let mut occupations = [0.0; 5];
    let mut z = 0.0;
    for (i, occ) in occupations.iter_mut().enumerate() {
        let m = i as f64 - 2.0;
        *occ = (beta_st * m).exp();
        z += *occ;
    }
    for occ in &mut occupations {
        *occ /= z;
    }
    Ok(SpinTemperatureDistribution {
        beta_st,
        occupations,
    })
}

/// Amplitude of the tone completing exactly `cycles` periods over `samples`,
/// from a single-bin discrete Fourier projection. The window must span an
/// integer number of periods for the projection to be leakage-free.
pub fn projected_amplitude(samples: &[f64], cycles: usize) -> f64 {
    let n = samples.len() as f64;
    let w = std::f64::consts::TAU * cycles as f64 / n;
    let (mut re, mut im) = (0.0, 0.0);
    for (m, &x) in samples.iter().enumerate() {
        let phase = w * m as f64;
        re += x * phase.cos();
        im -= x * phase.sin();
    }
    2.0 * (re * re + im * im).sqrt() / n
}
