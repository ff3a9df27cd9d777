//! Analyzer cross talk: how the calibrated polarization ratio degrades as
//! the true ratio shrinks, and why amplifying the rotation angle first
//! rescues the measurement.

use magsim::pbs::{self, PbsParams};

fn main() {
    let pairs = [(0.001, 0.001), (0.005, 0.005), (0.01, 0.01)];

    println!("{:>10} {:>12} {:>12} {:>12}", "v0", "d=1e-3", "d=5e-3", "d=1e-2");
    for i in 0..=12 {
        let v0 = 10f64.powf(-4.0 + 4.0 * i as f64 / 12.0);
        let phis: Vec<f64> = pairs
            .iter()
            .map(|&(d1, d2)| {
                pbs::error_ratio(v0, &PbsParams::energy_conserving(d1, d2)).unwrap()
            })
            .collect();
        println!(
            "{v0:>10.2e} {:>12.4e} {:>12.4e} {:>12.4e}",
            phis[0], phis[1], phis[2]
        );
    }

    // Calibration cancels detector converter imbalance exactly.
    let mut skewed = PbsParams::energy_conserving(0.005, 0.005);
    skewed.eta_r = 3.7;
    skewed.eta_t = 0.4;
    let balanced = PbsParams::energy_conserving(0.005, 0.005);
    println!();
    println!(
        "converter imbalance: raw ratio {:.6e} vs {:.6e}, calibrated {:.6e} vs {:.6e}",
        pbs::measured_ratio(0.01, &skewed).unwrap(),
        pbs::measured_ratio(0.01, &balanced).unwrap(),
        pbs::calibrated_ratio(0.01, &skewed).unwrap(),
        pbs::calibrated_ratio(0.01, &balanced).unwrap(),
    );

    // The ratio the analyzer sees before and after postselected
    // amplification of a 1 mrad rotation (eta ~ 106 at beta = 0.997 pi).
    let bare = pbs::v0_from_angle(1e-3).unwrap().v0;
    let amplified = pbs::v0_from_angle(0.1057).unwrap().v0;
    let p = PbsParams::energy_conserving(0.005, 0.005);
    println!();
    println!(
        "bare rotation 1e-3 rad: v0 = {bare:.3e}, error ratio {:.2}",
        pbs::error_ratio(bare, &p).unwrap()
    );
    println!(
        "amplified to 0.1057 rad: v0 = {amplified:.3e}, error ratio {:.4}",
        pbs::error_ratio(amplified, &p).unwrap()
    );
}
