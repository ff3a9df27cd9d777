//! Shot-noise bookkeeping: Monte Carlo spreads of the analyzer ratio and the
//! measured angle against their closed-form predictions, and the
//! signal-to-noise parity between the postselected and bare chains.

use std::f64::consts::PI;

use magsim::detection;
use magsim::mzi;
use magsim::rng::substream;

fn std_dev(xs: &[f64]) -> f64 {
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64).sqrt()
}

fn main() {
    let theta = 0.02;
    let beta = 0.9 * PI;
    let n = 1e7;
    let out = mzi::postselect(theta, beta).unwrap();
    let expected = detection::expected_counts(n, out.p_f, out.theta_tilde);
    println!(
        "operating point: theta = {theta}, beta = 0.9 pi, N = {n:.0e}: p_f = {:.4e}, theta~ = {:.4e}",
        out.p_f, out.theta_tilde
    );
    println!(
        "expected counts: H = {:.1}, V = {:.1}",
        expected.n_h, expected.n_v
    );

    let trials = 10_000u64;
    let mut ratios = Vec::with_capacity(trials as usize);
    let mut angles = Vec::with_capacity(trials as usize);
    for k in 0..trials {
        let counts = detection::sample_counts_with(&expected, &mut substream(1, k));
        let d = detection::daq_result(&counts).unwrap();
        ratios.push(d.ratio_r);
        angles.push(d.theta_est);
    }
    let delta_r_pred = (2.0 * out.theta_tilde).sin() / (out.p_f * n).sqrt();
    let delta_t_pred = detection::shot_noise_delta_theta(out.p_f, n).unwrap();
    println!();
    println!("Monte Carlo over {trials} trials:");
    println!(
        "  std R      = {:.4e}   formula sin(2 theta~)/sqrt(p_f N) = {:.4e}",
        std_dev(&ratios),
        delta_r_pred
    );
    println!(
        "  std theta~ = {:.4e}   formula 1/(2 sqrt(p_f N))         = {:.4e}",
        std_dev(&angles),
        delta_t_pred
    );

    println!();
    println!("signal-to-noise parity across the small-angle grid (N = 1e6):");
    println!("{:>10} {:>10} {:>12} {:>12} {:>10}", "theta", "beta/pi", "snr_psa", "snr_conv", "ratio");
    for beta in [0.5 * PI, 0.9 * PI] {
        for theta in [1e-4, 1e-3, 1e-2] {
            let c = detection::snr_compare(theta, beta, 1e6).unwrap();
            println!(
                "{theta:>10.0e} {:>10.2} {:>12.4e} {:>12.4e} {:>10.6}",
                beta / PI,
                c.snr_psa,
                c.snr_conventional,
                c.ratio()
            );
        }
    }
}
