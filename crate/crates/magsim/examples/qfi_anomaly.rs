//! Fisher information of the three state families: the path/polarization
//! entangled state (2), the bare rotation (4), and the postselected photon,
//! which near the dark port carries anomalously more than both.

use std::f64::consts::PI;

use magsim::mzi;

fn main() {
    let betas = [0.5 * PI, 0.9 * PI, 0.99 * PI, 0.997 * PI];

    println!("references: entangled I = {}, conventional I^cm = {}",
        mzi::qfi_entangled(0.01),
        mzi::qfi_conventional(0.01),
    );
    println!();
    println!("{:>10} {:>12} {:>14} {:>14}", "theta", "beta/pi", "qfi_ps", "oracle");
    for &beta in &betas {
        for theta in [1e-3, 1e-2, 1e-1, 0.5] {
            let closed = mzi::qfi_postselected(theta, beta).unwrap();
            let family = |t: f64| mzi::postselect(t, beta).unwrap().pol_state.to_vec();
            let numeric = mzi::qfi_numeric(family, theta, 1e-6);
            println!("{theta:>10.0e} {:>12.3} {closed:>14.4e} {numeric:>14.4e}", beta / PI);
        }
    }

    // Where does the postselected photon beat the conventional bound of 4?
    let beta = 0.997 * PI;
    let anomalous: Vec<f64> = (1..200)
        .map(|i| i as f64 * 0.5 * PI / 200.0)
        .filter(|&t| mzi::qfi_postselected(t, beta).map(|q| q > 4.0).unwrap_or(false))
        .collect();
    println!();
    println!(
        "beta = 0.997 pi: qfi_ps > 4 on theta in [{:.4}, {:.4}] ({} of 199 grid points)",
        anomalous.first().unwrap(),
        anomalous.last().unwrap(),
        anomalous.len()
    );
}
