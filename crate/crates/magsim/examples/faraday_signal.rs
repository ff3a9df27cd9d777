//! From transverse polarization to rotation angle: run the spin dynamics,
//! map P_x(t) through the optical rotation, and show the amplified angle a
//! dark-port postselection would read.

use std::f64::consts::{PI, TAU};

use magsim::optics::{self, OpticalParams};
use magsim::spin::{self, BlochVector, FieldConfig, RateParams, SlowingFactor};
use magsim::mzi;

fn main() {
    let rates = RateParams { gamma_e: TAU * 28.0, r_op: 2800.0, r_rel: 1000.0 };
    let fields = FieldConfig { bz: 759.0, by_amp: 0.03, by_freq: 8.96, by_phase: 0.0 };
    let q_mode = SlowingFactor::PolarizationDependent;

    let params = OpticalParams {
        path_length: 0.01,
        r_e: optics::CLASSICAL_ELECTRON_RADIUS_M,
        c: optics::SPEED_OF_LIGHT_M_PER_S,
        oscillator_strength: 2.0 / 3.0,
        atom_density: OpticalParams::density_from_cm3(1e14),
        probe_freq: 3.8426e14 + 110e9, // blue-detuned 110 GHz
        resonance_freq: 3.8426e14,
        fwhm: 59.0,
    };
    println!(
        "rotation prefactor: {:.6} rad per unit P_x  (lineshape {:.4e} 1/Hz)",
        params.rotation_prefactor().unwrap(),
        params.lineshape().unwrap()
    );

    let dt = 1.0 / (fields.by_freq * 60000.0);
    let sol = spin::linear_response(&rates, &fields, &q_mode).unwrap();
    let transient = 10.0 * sol.q_frozen / (rates.r_op + rates.r_rel);
    let t_end = transient + 1.0 / fields.by_freq;
    let traj = spin::integrate_bloch(&rates, &fields, &q_mode, BlochVector::default(), t_end, dt)
        .unwrap();

    let px_series: Vec<(f64, f64)> = traj
        .px_series()
        .into_iter()
        .filter(|(t, _)| *t >= transient)
        .step_by(6000)
        .collect();
    let angles = optics::faraday_series(&px_series, &params).unwrap();

    let beta = 0.997 * PI;
    println!();
    println!("{:>10} {:>14} {:>14} {:>14} {:>8}", "t [s]", "P_x", "theta [rad]", "theta~ [rad]", "ratio");
    for (&(t, px), &(_, theta)) in px_series.iter().zip(&angles.samples) {
        let out = mzi::postselect(theta, beta).unwrap();
        let amplified = theta.signum() * out.theta_tilde;
        let ratio = if theta != 0.0 { amplified / theta } else { f64::NAN };
        println!("{t:>10.5} {px:>14.4e} {theta:>14.4e} {amplified:>14.4e} {ratio:>8.2}");
    }
}
