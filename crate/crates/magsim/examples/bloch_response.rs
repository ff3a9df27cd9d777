//! Spin dynamics at the reference operating point: pump-up to the steady
//! state, then the driven transverse response checked against the phasor
//! solution of the linearized equations.

use std::f64::consts::TAU;

use magsim::spin::{
    self, BlochVector, FieldConfig, RateParams, SlowingFactor,
};

fn main() {
    let rates = RateParams {
        gamma_e: TAU * 28.0, // rad/(s nT)
        r_op: 2800.0,
        r_rel: 1000.0,
    };
    let fields = FieldConfig {
        bz: 759.0,
        by_amp: 0.03, // 30 pT
        by_freq: 8.96,
        by_phase: 0.0,
    };
    let q_mode = SlowingFactor::PolarizationDependent;

    let pz0 = spin::steady_state_pz(&rates).unwrap();
    println!("steady state: pz0 = {pz0:.6}, q(pz0) = {:.4}", q_mode.value(pz0));

    // Pump-up without drive.
    let still = FieldConfig { by_amp: 0.0, ..fields };
    let t_relax = 20.0 * 6.0 / (rates.r_op + rates.r_rel);
    let traj = spin::integrate_bloch(&rates, &still, &q_mode, BlochVector::default(), t_relax, 2e-6)
        .unwrap();
    let (t, p) = traj.final_state();
    println!("pump-up:      pz({t:.4} s) = {:.6}  (residual {:.1e})", p.pz, (p.pz - pz0).abs());

    // Driven response against the phasor solution.
    let sol = spin::linear_response(&rates, &fields, &q_mode).unwrap();
    println!(
        "phasor:       M = {:.6e} 1/nT, phase delay = {:.4} rad, drive ratio = {:.0}",
        sol.amp_factor, sol.phase_delay, sol.drive_ratio
    );

    let dt = 1.0 / (fields.by_freq * 60000.0);
    let spp = 60000usize;
    let transient = 10.0 * sol.q_frozen / (rates.r_op + rates.r_rel);
    let skip = (transient / dt).ceil() as usize;
    let t_end = (skip + 2 * spp) as f64 * dt;
    let traj = spin::integrate_bloch(&rates, &fields, &q_mode, BlochVector::default(), t_end, dt)
        .unwrap();
    let px = traj.px_samples();
    let amp = spin::projected_amplitude(&px[skip..skip + 2 * spp], 2);
    let predicted = sol.px_amplitude(fields.by_amp);
    println!(
        "ODE tone:     {amp:.6e}  vs phasor {predicted:.6e}  (relative {:.1e})",
        (amp / predicted - 1.0).abs()
    );

    // Sublevel occupations at the pumped polarization.
    let dist = spin::spin_temperature_distribution(pz0).unwrap();
    println!();
    println!("spin-temperature occupations at pz = {pz0:.4}:");
    for m in -2..=2 {
        println!("  m_F = {m:+}: {:.4}", dist.occupation(m));
    }
}
