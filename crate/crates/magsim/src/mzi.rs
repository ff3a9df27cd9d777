//! Probe photon in the Mach-Zehnder interferometer: joint path/polarization
//! state, exit-port postselection, and quantum Fisher information.
//!
//! A photon entering the interferometer carries two degrees of freedom: the
//! arm it travels (`1` or `2`) and its optical polarization (`H` or `V`).
//! The vapor cell sits in arm 1 and rotates the polarization there by the
//! Faraday angle `theta`; arm 2 carries a phase shifter `beta`. Keeping only
//! photons that exit through one chosen port projects the path state onto
//! `|f> = (|1> + e^{i beta}|2>)/sqrt(2)`, which is the postselection knob.
//!
//! Near the dark port (`beta` close to `pi`) the surviving photons carry a
//! polarization tilted by an effective angle `theta_tilde` much larger than
//! `theta`, and more Fisher information about `theta` per photon than either
//! the pre-selection state or a bare polarization measurement.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default floor on the postselection probability. Outcomes below it are
/// reported as dark-port rejections instead of near-singular amplified states.
pub const P_MIN_DEFAULT: f64 = 1e-15;

/// Joint path/polarization state. Amplitudes are ordered as
/// `(1,H), (1,V), (2,H), (2,V)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPolarizationState {
    pub amplitudes: [Complex64; 4],
}

impl PathPolarizationState {
    /// Euclidean norm of the amplitude vector.
    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn to_vec(&self) -> Vec<Complex64> {
        self.amplitudes.to_vec()
    }
}

/// Postselection phase of the exit-port projector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MziConfig {
    beta: f64,
}

impl MziConfig {
    /// `beta` must lie in `[0, 2*pi)`.
    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() || !(0.0..std::f64::consts::TAU).contains(&beta) {
            return Err(Error::Config(format!(
                "mzi beta must lie in [0, 2*pi), got {beta}"
            )));
        }
        Ok(Self { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Result of projecting the photon onto the chosen exit port.
#[derive(Debug, Clone, Copy)]
pub struct PostselectionOutcome {
    /// Probability that the photon survives the postselection.
    pub p_f: f64,
    /// Normalized polarization state `(H, V)` of the surviving photon.
    pub pol_state: [Complex64; 2],
    /// Probability of the `V` component in `pol_state`.
    pub pv_tilde: f64,
    /// Effective rotation angle, `arcsin(sqrt(pv_tilde))` on `[0, pi/2]`.
    pub theta_tilde: f64,
    /// Amplification factor `theta_tilde / theta`; `None` at `theta == 0`.
    pub eta: Option<f64>,
}

/// State after the path-dependent Faraday rotation, starting from an `H`
/// photon split evenly over both arms. Amplitudes come out as
/// `(cos(theta), -i sin(theta), 1, 0) / sqrt(2)`.
pub fn entangled_state(theta: f64) -> PathPolarizationState {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    PathPolarizationState {
        amplitudes: [
            Complex64::new(theta.cos() * inv_sqrt2, 0.0),
            Complex64::new(0.0, -theta.sin() * inv_sqrt2),
            Complex64::new(inv_sqrt2, 0.0),
            Complex64::new(0.0, 0.0),
        ],
    }
}

/// Polarization state of a bare rotation measurement, `(cos theta, -i sin theta)`.
pub fn conventional_state(theta: f64) -> [Complex64; 2] {
    [
        Complex64::new(theta.cos(), 0.0),
        Complex64::new(0.0, -theta.sin()),
    ]
}

/// Success probability of the exit-port postselection,
/// `(1 + cos(theta) cos(beta)) / 2`.
pub fn postselection_probability(theta: f64, beta: f64) -> f64 {
    0.5 * (1.0 + theta.cos() * beta.cos())
}

/// Same probability computed the long way, as `|<f|Psi(theta)>|^2` from the
/// raw amplitudes. Kept as an independent route for consistency checks.
pub fn postselection_probability_from_amplitudes(theta: f64, beta: f64) -> f64 {
    let (h, v) = projected_polarization(theta, beta);
    h.norm_sqr() + v.norm_sqr()
}

/// Unnormalized `(H, V)` amplitudes after the projection `<f| applied to
/// |Psi(theta)>`, i.e. `((e^{-i beta} + cos theta)/2, -i sin(theta)/2)`.
fn projected_polarization(theta: f64, beta: f64) -> (Complex64, Complex64) {
    let phase = Complex64::from_polar(1.0, -beta);
    let h = (phase + theta.cos()) * 0.5;
    let v = Complex64::new(0.0, -theta.sin() * 0.5);
    (h, v)
}

/// Postselect with the default dark-port floor.
pub fn postselect(theta: f64, beta: f64) -> Result<PostselectionOutcome> {
    postselect_with_floor(theta, beta, P_MIN_DEFAULT)
}

/// Postselect the photon on the exit port and package everything the
/// downstream detection chain needs.
///
/// Fails with a dark-port error when `p_f <= p_min`: in that regime the
/// normalization `1/(2 sqrt(p_f))` blows up and the detectors see essentially
/// no light.
pub fn postselect_with_floor(theta: f64, beta: f64, p_min: f64) -> Result<PostselectionOutcome> {
    let p_f = postselection_probability(theta, beta);
    if p_f <= p_min {
        return Err(Error::DarkPort { p_f, floor: p_min });
    }
    let (h, v) = projected_polarization(theta, beta);
    let inv = 1.0 / p_f.sqrt();
    let pol_state = [h * inv, v * inv];
    // |V|^2 of the normalized state; clamp fp residue at the boundary.
    let pv = (theta.sin().powi(2) / (4.0 * p_f)).clamp(0.0, 1.0);
    let theta_tilde = pv.sqrt().asin();
    let eta = if theta != 0.0 {
        Some(theta_tilde / theta)
    } else {
        None
    };
    Ok(PostselectionOutcome {
        p_f,
        pol_state,
        pv_tilde: pv,
        theta_tilde,
        eta,
    })
}

/// Probability of the `V` component in the postselected state,
/// `sin^2(theta) / (4 p_f)`. Always lands in `[0, 1]`.
pub fn pv_tilde(theta: f64, beta: f64) -> Result<f64> {
    let p_f = postselection_probability(theta, beta);
    if p_f <= 0.0 {
        return Err(Error::DarkPort { p_f, floor: 0.0 });
    }
    Ok((theta.sin().powi(2) / (4.0 * p_f)).clamp(0.0, 1.0))
}

/// Fisher information about `theta` per postselected photon,
/// `(4 p_f - sin^2 theta) / (4 p_f^2)`.
pub fn qfi_postselected(theta: f64, beta: f64) -> Result<f64> {
    let p_f = postselection_probability(theta, beta);
    if p_f <= 0.0 {
        return Err(Error::DarkPort { p_f, floor: 0.0 });
    }
    let s2 = theta.sin().powi(2);
    Ok((4.0 * p_f - s2) / (4.0 * p_f * p_f))
}

/// Fisher information carried by the path/polarization entangled state.
/// Independent of `theta`; the photon picks up the rotation with only half
/// probability, which halves the information of the bare rotation.
pub fn qfi_entangled(theta: f64) -> f64 {
    debug_assert!(
        (qfi_numeric(|t| entangled_state(t).to_vec(), theta, 1e-5) - 2.0).abs() < 1e-6,
        "entangled-state QFI drifted from 2 at theta={theta}"
    );
    2.0
}

/// Fisher information of the bare polarization rotation `theta`.
pub fn qfi_conventional(theta: f64) -> f64 {
    debug_assert!(
        (qfi_numeric(|t| conventional_state(t).to_vec(), theta, 1e-5) - 4.0).abs() < 1e-6,
        "conventional-state QFI drifted from 4 at theta={theta}"
    );
    4.0
}

/// Finite-difference Fisher information of an arbitrary pure-state family,
/// `4 (<d psi|d psi> - |<psi|d psi>|^2)` with a central difference of step
/// `h`. Second-order accurate; serves as the independent oracle for the
/// closed forms above.
pub fn qfi_numeric<F>(family: F, theta: f64, h: f64) -> f64
where
    F: Fn(f64) -> Vec<Complex64>,
{
    assert!(h > 0.0, "qfi_numeric requires a positive step");
    let psi = family(theta);
    let plus = family(theta + h);
    let minus = family(theta - h);
    assert_eq!(psi.len(), plus.len());
    assert_eq!(psi.len(), minus.len());
    let dpsi: Vec<Complex64> = plus
        .iter()
        .zip(minus.iter())
        .map(|(p, m)| (p - m) / (2.0 * h))
        .collect();
    let dd: f64 = dpsi.iter().map(|d| d.norm_sqr()).sum();
    let overlap: Complex64 = psi.iter().zip(dpsi.iter()).map(|(p, d)| p.conj() * d).sum();
    4.0 * (dd - overlap.norm_sqr())
}

/// One point of an amplification sweep. `outcome` is `None` where the grid
/// point fell below the dark-port floor.
#[derive(Debug, Clone, Copy)]
pub struct CurvePoint {
    pub theta: f64,
    pub outcome: Option<PostselectionOutcome>,
}

/// Pointwise postselection over a grid of true rotation angles at fixed
/// `beta`. Dark-port points are flagged, not fatal.
pub fn amplification_curve(theta_grid: &[f64], beta: f64) -> Vec<CurvePoint> {
    theta_grid
        .iter()
        .map(|&theta| CurvePoint {
            theta,
            outcome: postselect(theta, beta).ok(),
        })
        .collect()
}

/// Phase `beta` that realizes a requested postselection probability at a
/// given `theta`, from `cos(beta) = (2 p_f - 1)/cos(theta)`.
pub fn beta_for_postselection_probability(theta: f64, p_f: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_f) {
        return Err(Error::Domain(format!(
            "target postselection probability must lie in [0, 1], got {p_f}"
        )));
    }
    let c = theta.cos();
    if c == 0.0 {
        return Err(Error::Domain(
            "cos(theta) = 0: postselection probability is 1/2 for every beta".into(),
        ));
    }
    let cos_beta = (2.0 * p_f - 1.0) / c;
    if cos_beta.abs() > 1.0 {
        return Err(Error::Domain(format!(
            "no beta reaches p_f = {p_f} at theta = {theta}"
        )));
    }
    Ok(cos_beta.acos())
}
