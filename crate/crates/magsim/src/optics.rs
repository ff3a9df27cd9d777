//! Faraday rotation of the probe beam.
//!
//! The transverse spin polarization `P_x` rotates the probe's linear
//! polarization by
//!
//! ```text
//! theta = (1/4) l r_e c f n D(nu) P_x
//! ```
//!
//! where `D(nu) = (nu - nu0) / [(nu - nu0)^2 + (fwhm/2)^2]` is the Lorentzian
//! detuning lineshape of the probed transition.

use crate::error::{Error, Result};

/// Classical electron radius, m.
pub const CLASSICAL_ELECTRON_RADIUS_M: f64 = 2.8e-15;
/// Speed of light, m/s.
pub const SPEED_OF_LIGHT_M_PER_S: f64 = 2.998e8;

/// Constants of the probe/vapor optical path. All internal units are SI;
/// atom density is per cubic metre (configs quote cm^-3 and convert).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalParams {
    /// Optical path length through the cell, m.
    pub path_length: f64,
    /// Classical electron radius, m.
    pub r_e: f64,
    /// Speed of light, m/s.
    pub c: f64,
    /// Oscillator strength of the probed transition, in (0, 1].
    pub oscillator_strength: f64,
    /// Atom number density, m^-3.
    pub atom_density: f64,
    /// Probe frequency, Hz.
    pub probe_freq: f64,
    /// Transition resonance frequency, Hz.
    pub resonance_freq: f64,
    /// Full width at half maximum of the transition, Hz.
    pub fwhm: f64,
}

impl OpticalParams {
    /// Convert a density quoted in cm^-3 to the internal m^-3.
    pub fn density_from_cm3(n_cm3: f64) -> f64 {
        n_cm3 * 1e6
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("path_length", self.path_length),
            ("r_e", self.r_e),
            ("c", self.c),
            ("atom_density", self.atom_density),
            ("probe_freq", self.probe_freq),
            ("resonance_freq", self.resonance_freq),
            ("fwhm", self.fwhm),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Config(format!("optics {name} must be positive, got {v}")));
            }
        }
        if !(self.oscillator_strength > 0.0 && self.oscillator_strength <= 1.0) {
            return Err(Error::Config(format!(
                "oscillator strength must lie in (0, 1], got {}",
                self.oscillator_strength
            )));
        }
        Ok(())
    }

    /// Lineshape value at the configured probe detuning.
    pub fn lineshape(&self) -> Result<f64> {
        lorentzian_d(self.probe_freq, self.resonance_freq, self.fwhm)
    }

    /// Rotation per unit `P_x`, rad: `(1/4) l r_e c f n D(nu)`.
    pub fn rotation_prefactor(&self) -> Result<f64> {
        Ok(0.25
            * self.path_length
            * self.r_e
            * self.c
            * self.oscillator_strength
            * self.atom_density
            * self.lineshape()?)
    }
}

/// Lorentzian detuning lineshape `(nu - nu0) / [(nu - nu0)^2 + (fwhm/2)^2]`,
/// in 1/Hz. Antisymmetric about resonance; only `nu == nu0` with zero width
/// is singular.
pub fn lorentzian_d(nu: f64, nu0: f64, delta_nu: f64) -> Result<f64> {
    let d = nu - nu0;
    if d == 0.0 && delta_nu == 0.0 {
        return Err(Error::Domain(
            "lineshape is singular at zero detuning with zero width".into(),
        ));
    }
    Ok(d / (d * d + (delta_nu / 2.0).powi(2)))
}

/// Faraday rotation angle for a transverse polarization `px`, rad.
pub fn faraday_angle(px: f64, params: &OpticalParams) -> Result<f64> {
    if px.abs() > 1.0 {
        return Err(Error::Domain(format!(
            "|P_x| cannot exceed 1, got {px}"
        )));
    }
    Ok(params.rotation_prefactor()? * px)
}

/// Rotation-angle time series.
#[derive(Debug, Clone)]
pub struct FaradaySeries {
    /// `(t, theta)` pairs with strictly increasing `t`.
    pub samples: Vec<(f64, f64)>,
}

/// Apply the rotation pointwise to a `(t, P_x)` series.
pub fn faraday_series(px_series: &[(f64, f64)], params: &OpticalParams) -> Result<FaradaySeries> {
    if px_series.is_empty() {
        return Err(Error::Domain("cannot convert an empty P_x series".into()));
    }
    let prefactor = params.rotation_prefactor()?;
    let mut samples = Vec::with_capacity(px_series.len());
    let mut prev_t = f64::NEG_INFINITY;
    for (i, &(t, px)) in px_series.iter().enumerate() {
        if t <= prev_t {
            return Err(Error::Domain(format!(
                "P_x series times must increase strictly (sample {i}, t = {t})"
            )));
        }
        if px.abs() > 1.0 {
            return Err(Error::Domain(format!(
                "|P_x| cannot exceed 1 (sample {i}, value {px})"
            )));
        }
        samples.push((t, prefactor * px));
        prev_t = t;
    }
    Ok(FaradaySeries { samples })
}
