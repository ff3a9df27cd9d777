//! Postselected amplification of the rotation angle: theta_tilde versus
//! theta for a family of postselection phases, and the small-angle
//! amplification factor 1/(2 sqrt(p_f)).

use std::f64::consts::PI;

use magsim::mzi;

fn main() {
    let betas = [0.5 * PI, 0.9 * PI, 0.99 * PI, 0.997 * PI];
    let thetas: Vec<f64> = (-6..=-1).map(|e| 10f64.powi(e)).collect();

    for &beta in &betas {
        println!("beta = {:.3} pi  (p_f at theta->0: {:.3e})",
            beta / PI,
            mzi::postselection_probability(0.0, beta),
        );
        println!("{:>10} {:>14} {:>14} {:>10}", "theta", "theta_tilde", "p_f", "eta");
        for pt in mzi::amplification_curve(&thetas, beta) {
            match pt.outcome {
                Some(out) => println!(
                    "{:>10.0e} {:>14.6e} {:>14.6e} {:>10.3}",
                    pt.theta,
                    out.theta_tilde,
                    out.p_f,
                    out.eta.unwrap()
                ),
                None => println!("{:>10.0e} {:>14} {:>14} {:>10}", pt.theta, "-", "rejected", "-"),
            }
        }
        println!();
    }

    let out = mzi::postselect(1e-3, 0.997 * PI).unwrap();
    println!(
        "anchor: theta = 1e-3 at beta = 0.997 pi amplifies to {:.4} rad, eta = {:.1} (> 100)",
        out.theta_tilde,
        out.eta.unwrap()
    );
}
