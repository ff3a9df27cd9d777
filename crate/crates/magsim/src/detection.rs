//! Photo-detectors and the difference-signal data analyzer.
//!
//! Both exit polarizations hit their own detector; the analyzer forms
//! `R = (I_V - I_H)/(I_V + I_H) = 2 P_V - 1` and the measured angle follows
//! from `P_V` by the arcsin of its square root. Counts are Poissonian, which
//! reproduces the `sqrt(N)` shot-noise model, and each detector can clip at
//! a saturation threshold. The postselected chain trades photon number for
//! angle amplification: `p_f N` photons at angle `theta_tilde` carry the same
//! signal-to-noise as the full `N` at `theta`, while staying far below the
//! saturation threshold.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mzi;
use crate::rng::substream;

/// Detector front-end description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorConfig {
    /// Expected number of probe photons per acquisition.
    pub n_photons: f64,
    /// Per-detector saturation count; `None` means unlimited.
    pub i_sat: Option<f64>,
    /// Run-level RNG seed.
    pub seed: u64,
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.n_photons.is_finite() || self.n_photons <= 0.0 {
            return Err(Error::Config(format!(
                "photon number must be positive, got {}",
                self.n_photons
            )));
        }
        if let Some(i_sat) = self.i_sat {
            if !i_sat.is_finite() || i_sat <= 0.0 {
                return Err(Error::Config(format!(
                    "saturation count must be positive, got {i_sat}"
                )));
            }
        }
        Ok(())
    }
}

/// Real-valued expected counts at the two detectors, before sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectedCounts {
    /// Transmission branch (`H`).
    pub n_h: f64,
    /// Reflection branch (`V`).
    pub n_v: f64,
}

impl ExpectedCounts {
    pub fn total(&self) -> f64 {
        self.n_h + self.n_v
    }
}

/// Integer counts registered by the two detectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountPair {
    pub n_h: u64,
    pub n_v: u64,
}

impl CountPair {
    pub fn total(&self) -> u64 {
        self.n_h + self.n_v
    }
}

/// Analyzer output: the normalized difference ratio and the angle read off it.
#[derive(Debug, Clone, Copy)]
pub struct DaqResult {
    /// `(I_V - I_H)/(I_V + I_H)`, in [-1, 1].
    pub ratio_r: f64,
    /// `(R + 1)/2`, the V-component probability estimate.
    pub pv_est: f64,
    /// `arcsin(sqrt(pv_est))`: the rotation angle in the measured frame
    /// (`theta_tilde` for the postselected chain, `theta` for the bare one).
    pub theta_est: f64,
}

/// Normalized difference of the two detector currents.
pub fn daq_ratio(i_v: f64, i_h: f64) -> Result<f64> {
    let total = i_v + i_h;
    if total <= 0.0 {
        return Err(Error::NoSignal);
    }
    Ok((i_v - i_h) / total)
}

/// Run the analyzer on a pair of counts.
pub fn daq_result(counts: &CountPair) -> Result<DaqResult> {
    let ratio_r = daq_ratio(counts.n_v as f64, counts.n_h as f64)?;
    let pv_est = ((ratio_r + 1.0) / 2.0).clamp(0.0, 1.0);
    Ok(DaqResult {
        ratio_r,
        pv_est,
        theta_est: pv_est.sqrt().asin(),
    })
}

/// Expected counts for `n_photons` arriving at the analyzer with success
/// probability `p_f` and measured angle `theta_tilde`:
/// `(p_f N cos^2, p_f N sin^2)`. Use `p_f = 1` for the bare chain.
pub fn expected_counts(n_photons: f64, p_f: f64, theta_tilde: f64) -> ExpectedCounts {
    let surviving = p_f * n_photons;
    let s2 = theta_tilde.sin().powi(2);
    ExpectedCounts {
        n_h: surviving * (1.0 - s2),
        n_v: surviving * s2,
    }
}

/// Independent Poisson draws around the expected counts, from a dedicated
/// ChaCha8 stream of `seed`. The `H` channel is drawn first.
pub fn sample_counts(expected: &ExpectedCounts, seed: u64) -> CountPair {
    sample_counts_with(expected, &mut substream(seed, 0))
}

/// Same as [`sample_counts`] but drawing from a caller-managed generator, so
/// Monte Carlo loops can run one substream per trial.
pub fn sample_counts_with<R: Rng>(expected: &ExpectedCounts, rng: &mut R) -> CountPair {
    CountPair {
        n_h: poisson_draw(expected.n_h, rng),
        n_v: poisson_draw(expected.n_v, rng),
    }
}

fn poisson_draw<R: Rng>(mean: f64, rng: &mut R) -> u64 {
    assert!(mean >= 0.0, "Poisson mean must be nonnegative, got {mean}");
    if mean == 0.0 {
        return 0;
    }
    let dist = Poisson::new(mean).expect("positive finite mean");
    dist.sample(rng) as u64
}

/// Hard-clip both channels at the saturation count.
pub fn saturate(counts: &CountPair, i_sat: f64) -> CountPair {
    assert!(i_sat > 0.0, "saturation threshold must be positive");
    let cap = i_sat as u64;
    CountPair {
        n_h: counts.n_h.min(cap),
        n_v: counts.n_v.min(cap),
    }
}

/// Shot-noise limit on the measured angle, `1 / (2 sqrt(p_f N))`.
/// Independent of the angle itself: the arcsin-square-root readout is the
/// variance-stabilizing transform of Poisson counts.
pub fn shot_noise_delta_theta(p_f: f64, n_photons: f64) -> Result<f64> {
    let detected = p_f * n_photons;
    if detected <= 0.0 {
        return Err(Error::DarkPort {
            p_f,
            floor: 0.0,
        });
    }
    Ok(1.0 / (2.0 * detected.sqrt()))
}

/// Angle estimate mapped back from the postselected frame,
/// `theta = arcsin(2 sqrt(p_f) sin(theta_tilde_est))`. Arguments pushed past
/// 1 by noise or clipping are clamped and flagged.
#[derive(Debug, Clone, Copy)]
pub struct PsaEstimate {
    pub theta: f64,
    pub clamped: bool,
}

pub fn invert_psa_angle(theta_tilde_est: f64, p_f: f64) -> PsaEstimate {
    let arg = 2.0 * p_f.sqrt() * theta_tilde_est.sin();
    if arg > 1.0 {
        PsaEstimate {
            theta: std::f64::consts::FRAC_PI_2,
            clamped: true,
        }
    } else {
        PsaEstimate {
            theta: arg.asin(),
            clamped: false,
        }
    }
}

/// Signal-to-noise of the postselected chain against the bare measurement.
#[derive(Debug, Clone, Copy)]
pub struct SnrComparison {
    /// `theta_tilde / delta_theta_tilde` with `delta = 1/(2 sqrt(p_f N))`.
    pub snr_psa: f64,
    /// `theta / delta_theta` with the bare shot-noise scaling
    /// `delta_theta = 1/sqrt(N)`.
    pub snr_conventional: f64,
    pub theta_tilde: f64,
    pub p_f: f64,
}

impl SnrComparison {
    pub fn ratio(&self) -> f64 {
        self.snr_psa / self.snr_conventional
    }
}

/// Compare the two chains at the same input photon number.
///
/// In the small-angle regime `theta_tilde ~ theta / (2 sqrt(p_f))`, so the
/// `p_f` factors cancel and the ratio tends to 1: the few surviving photons
/// hold essentially all the information the full beam had.
pub fn snr_compare(theta: f64, beta: f64, n_photons: f64) -> Result<SnrComparison> {
    let small_angle = theta > 0.0 && theta < 0.05;
    if !small_angle {
        return Err(Error::Domain(format!(
            "snr comparison is defined for the small-angle regime 0 < theta < 0.05, got {theta}"
        )));
    }
    if !n_photons.is_finite() || n_photons <= 0.0 {
        return Err(Error::Domain(format!(
            "photon number must be positive, got {n_photons}"
        )));
    }
    let out = mzi::postselect(theta, beta)?;
    let delta_psa = shot_noise_delta_theta(out.p_f, n_photons)?;
    let snr_psa = out.theta_tilde / delta_psa;
    let snr_conventional = theta * n_photons.sqrt();
    Ok(SnrComparison {
        snr_psa,
        snr_conventional,
        theta_tilde: out.theta_tilde,
        p_f: out.p_f,
    })
}

/// One row of the saturation study.
#[derive(Debug, Clone, Copy)]
pub struct SaturationRow {
    pub n_photons: f64,
    pub p_f: f64,
    pub theta_true: f64,
    pub rms_err_psa: f64,
    pub rms_err_conv: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Monte Carlo comparison of the two chains under a common saturation
/// threshold, swept over input photon number.
///
/// Per trial, each chain runs end to end: expected counts, Poisson draws,
/// clipping, analyzer inversion, and (for the postselected chain) the map
/// back to the true angle. Reported is the RMS error of the true-angle
/// estimate. Trials run in parallel; trial `k` of grid point `g` always uses
/// substream `g * trials + k`, so the table is independent of scheduling.
pub fn saturation_study(
    theta: f64,
    beta: f64,
    n_grid: &[f64],
    i_sat: Option<f64>,
    trials: usize,
    seed: u64,
) -> Result<Vec<SaturationRow>> {
    if trials < 100 {
        return Err(Error::Config(format!(
            "saturation study needs at least 100 trials for a stable RMS, got {trials}"
        )));
    }
    if let Some(i) = i_sat {
        if !i.is_finite() || i <= 0.0 {
            return Err(Error::Config(format!("saturation count must be positive, got {i}")));
        }
    }
    let out = mzi::postselect(theta, beta)?;
    let mut rows = Vec::with_capacity(n_grid.len());
    for (gi, &n) in n_grid.iter().enumerate() {
        if !n.is_finite() || n <= 0.0 {
            return Err(Error::Config(format!("photon grid values must be positive, got {n}")));
        }
        let exp_conv = expected_counts(n, 1.0, theta);
        let exp_psa = expected_counts(n, out.p_f, out.theta_tilde);

        let squared: Vec<(f64, f64)> = (0..trials)
            .into_par_iter()
            .map(|trial| {
                let stream = (gi * trials + trial) as u64;
                let mut rng = substream(seed, stream);

                let mut conv = sample_counts_with(&exp_conv, &mut rng);
                let mut psa = sample_counts_with(&exp_psa, &mut rng);
                if let Some(cap) = i_sat {
                    conv = saturate(&conv, cap);
                    psa = saturate(&psa, cap);
                }

                // An empty readout carries no angle information; score it as
                // an estimate of zero.
                let theta_conv = daq_result(&conv).map(|d| d.theta_est).unwrap_or(0.0);
                let theta_psa = daq_result(&psa)
                    .map(|d| invert_psa_angle(d.theta_est, out.p_f).theta)
                    .unwrap_or(0.0);
                (
                    (theta_psa - theta).powi(2),
                    (theta_conv - theta).powi(2),
                )
            })
            .collect();

        let (sum_psa, sum_conv) = squared
            .iter()
            .fold((0.0, 0.0), |(a, b), (p, c)| (a + p, b + c));
        rows.push(SaturationRow {
            n_photons: n,
            p_f: out.p_f,
            theta_true: theta,
            rms_err_psa: (sum_psa / trials as f64).sqrt(),
            rms_err_conv: (sum_conv / trials as f64).sqrt(),
            trials: trials as u64,
            seed,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn daq_ratio_anchors() {
        assert_eq!(daq_ratio(5.0, 5.0).unwrap(), 0.0);
        assert_eq!(daq_ratio(3.0, 0.0).unwrap(), 1.0);
        assert_relative_eq!(daq_ratio(25.0, 75.0).unwrap(), -0.5, max_relative = 1e-15);
        assert_eq!(daq_ratio(0.0, 0.0).unwrap_err().category(), "no-signal");
    }

    #[test]
    fn expected_counts_anchors() {
        let e = expected_counts(1e6, 0.5, 0.0);
        assert_eq!((e.n_h, e.n_v), (5e5, 0.0));
        let e = expected_counts(100.0, 1.0, std::f64::consts::FRAC_PI_4);
        assert_relative_eq!(e.n_h, 50.0, max_relative = 1e-12);
        assert_relative_eq!(e.n_v, 50.0, max_relative = 1e-12);
        let e = expected_counts(1e6, 0.5, 0.1057);
        assert_relative_eq!(e.n_h, 494434.528122, max_relative = 1e-9);
        assert_relative_eq!(e.n_v, 5565.47187761, max_relative = 1e-9);
        assert_relative_eq!(e.total(), 5e5, max_relative = 1e-12);
    }

    #[test]
    fn sampling_is_seeded_and_poissonian() {
        let e = ExpectedCounts { n_h: 1e6, n_v: 0.0 };
        let a = sample_counts(&e, 42);
        let b = sample_counts(&e, 42);
        assert_eq!(a, b);
        assert_eq!(a.n_v, 0);
        // 5-sigma window around the mean.
        assert!((a.n_h as f64 - 1e6).abs() < 5.0 * 1e3);

        // Empirical mean and variance over many trials stay within 5% of the
        // Poisson mean.
        let mean = 400.0;
        let trials = 20_000;
        let e = ExpectedCounts { n_h: mean, n_v: mean };
        let mut sum = 0.0;
        let mut sum2 = 0.0;
        for k in 0..trials {
            let c = sample_counts_with(&e, &mut substream(7, k));
            let x = c.n_h as f64;
            sum += x;
            sum2 += x * x;
        }
        let m = sum / trials as f64;
        let var = sum2 / trials as f64 - m * m;
        assert!((m / mean - 1.0).abs() < 0.05, "mean {m}");
        assert!((var / mean - 1.0).abs() < 0.05, "variance {var}");
    }

    #[test]
    fn saturation_clips_hard() {
        let c = CountPair { n_h: 2_000_000, n_v: 10 };
        let clipped = saturate(&c, 1e5);
        assert_eq!(clipped, CountPair { n_h: 100_000, n_v: 10 });
        let below = CountPair { n_h: 10, n_v: 20 };
        assert_eq!(saturate(&below, 1e5), below);
        // Both channels pinned: the analyzer reads zero rotation.
        let both = saturate(&CountPair { n_h: 2_000_000, n_v: 3_000_000 }, 1e5);
        assert_eq!(daq_result(&both).unwrap().ratio_r, 0.0);
    }

    #[test]
    fn shot_noise_anchors() {
        assert_relative_eq!(
            shot_noise_delta_theta(0.5, 1e6).unwrap(),
            7.071067811865475e-4,
            max_relative = 1e-12
        );
        assert_eq!(shot_noise_delta_theta(1.0, 4.0).unwrap(), 0.25);
        let base = shot_noise_delta_theta(0.3, 1e6).unwrap();
        let quad = shot_noise_delta_theta(0.3, 4e6).unwrap();
        assert_relative_eq!(base / quad, 2.0, max_relative = 1e-12);
        assert!(shot_noise_delta_theta(0.0, 1e6).is_err());
    }

    #[test]
    fn snr_ratio_near_unity() {
        let c = snr_compare(1e-3, std::f64::consts::FRAC_PI_2, 1e6).unwrap();
        assert!((c.ratio() - 1.0).abs() < 1e-3, "ratio {}", c.ratio());
        let c = snr_compare(1e-3, 0.997 * PI, 1e8).unwrap();
        assert!((c.ratio() - 1.0).abs() < 1e-2, "ratio {}", c.ratio());
        // Photon number cancels from the ratio.
        let lo = snr_compare(1e-3, 0.9 * PI, 1e6).unwrap();
        let hi = snr_compare(1e-3, 0.9 * PI, 1e10).unwrap();
        assert_relative_eq!(lo.ratio(), hi.ratio(), max_relative = 1e-12);
        assert!(snr_compare(0.1, 0.9 * PI, 1e6).is_err());
    }

    #[test]
    fn mc_spread_matches_formulas_without_clipping() {
        // Regime with healthy counts in both channels: the Monte Carlo
        // spread of R and of the angle estimators must match the error
        // propagation formulas.
        let theta = 0.02;
        let beta = 0.9 * PI;
        let n = 1e7;
        let out = mzi::postselect(theta, beta).unwrap();
        let exp_psa = expected_counts(n, out.p_f, out.theta_tilde);
        let exp_conv = expected_counts(n, 1.0, theta);

        let trials = 10_000u64;
        let mut r = Vec::with_capacity(trials as usize);
        let mut tt = Vec::with_capacity(trials as usize);
        let mut tc = Vec::with_capacity(trials as usize);
        for k in 0..trials {
            let mut rng = substream(11, k);
            let psa = sample_counts_with(&exp_psa, &mut rng);
            let conv = sample_counts_with(&exp_conv, &mut rng);
            let d = daq_result(&psa).unwrap();
            r.push(d.ratio_r);
            tt.push(d.theta_est);
            tc.push(daq_result(&conv).unwrap().theta_est);
        }
        let std = |xs: &[f64]| {
            let m = xs.iter().sum::<f64>() / xs.len() as f64;
            (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64).sqrt()
        };

        let detected = out.p_f * n;
        let delta_r_pred = (2.0 * out.theta_tilde).sin() / detected.sqrt();
        assert!(
            (std(&r) / delta_r_pred - 1.0).abs() < 0.05,
            "delta R: mc {} vs {}",
            std(&r),
            delta_r_pred
        );

        let delta_tt_pred = shot_noise_delta_theta(out.p_f, n).unwrap();
        assert!((std(&tt) / delta_tt_pred - 1.0).abs() < 0.05);

        let delta_tc_pred = shot_noise_delta_theta(1.0, n).unwrap();
        assert!((std(&tc) / delta_tc_pred - 1.0).abs() < 0.05);
    }

    #[test]
    fn unlimited_saturation_matches_error_propagation() {
        // With no clipping each chain's RMS error sits on its own shot-noise
        // prediction; mapping theta_tilde back to theta costs the
        // postselected chain a factor d(theta)/d(theta_tilde).
        let theta = 0.02;
        let beta = 0.9 * PI;
        let out = mzi::postselect(theta, beta).unwrap();
        let rows = saturation_study(theta, beta, &[1e7], None, 4000, 3).unwrap();
        let row = &rows[0];

        let slope = 2.0 * out.p_f.sqrt() * out.theta_tilde.cos() / theta.cos();
        let pred_psa = shot_noise_delta_theta(out.p_f, 1e7).unwrap() * slope;
        let pred_conv = shot_noise_delta_theta(1.0, 1e7).unwrap();
        assert!(
            (row.rms_err_psa / pred_psa - 1.0).abs() < 0.05,
            "psa rms {} vs {}",
            row.rms_err_psa,
            pred_psa
        );
        assert!(
            (row.rms_err_conv / pred_conv - 1.0).abs() < 0.05,
            "conv rms {} vs {}",
            row.rms_err_conv,
            pred_conv
        );
    }

    #[test]
    fn clipped_conventional_chain_loses() {
        let theta = 1e-4;
        let beta = mzi::beta_for_postselection_probability(theta, 1e-3).unwrap();
        let rows = saturation_study(theta, beta, &[1e8], Some(1e5), 200, 9).unwrap();
        let row = &rows[0];
        assert!(
            row.rms_err_psa < row.rms_err_conv,
            "psa {} should beat conventional {}",
            row.rms_err_psa,
            row.rms_err_conv
        );
        // Same seed, same table.
        let again = saturation_study(theta, beta, &[1e8], Some(1e5), 200, 9).unwrap();
        assert_eq!(row.rms_err_psa, again[0].rms_err_psa);
        assert_eq!(row.rms_err_conv, again[0].rms_err_conv);
    }

    #[test]
    fn study_rejects_thin_trials() {
        assert!(saturation_study(1e-4, 0.9 * PI, &[1e6], None, 10, 0).is_err());
    }

    #[test]
    fn psa_inversion_round_trips_and_clamps() {
        let out = mzi::postselect(2e-3, 0.9 * PI).unwrap();
        let est = invert_psa_angle(out.theta_tilde, out.p_f);
        assert!(!est.clamped);
        assert_relative_eq!(est.theta, 2e-3, max_relative = 1e-12);
        // A wildly amplified estimate clamps instead of producing NaN.
        let est = invert_psa_angle(std::f64::consts::FRAC_PI_2, 0.9);
        assert!(est.clamped);
        assert_eq!(est.theta, std::f64::consts::FRAC_PI_2);
    }

    proptest! {
        #[test]
        fn ratio_stays_bounded(n_v in 0u64..1_000_000, n_h in 0u64..1_000_000) {
            prop_assume!(n_v + n_h > 0);
            let r = daq_ratio(n_v as f64, n_h as f64).unwrap();
            prop_assert!((-1.0..=1.0).contains(&r));
            let d = daq_result(&CountPair { n_h, n_v }).unwrap();
            prop_assert!((d.ratio_r - (2.0 * d.pv_est - 1.0)).abs() < 1e-12);
        }

        #[test]
        fn noiseless_inversion_recovers_pv(theta in 1e-3f64..1.5, beta in 0.0f64..PI) {
            // Feed expected counts straight into the analyzer: the ratio
            // inverts exactly back to pv_tilde.
            if let Ok(out) = mzi::postselect(theta, beta) {
                let e = expected_counts(1e9, out.p_f, out.theta_tilde);
                if e.total() > 0.0 {
                    let r = daq_ratio(e.n_v, e.n_h).unwrap();
                    let pv = (r + 1.0) / 2.0;
                    prop_assert!((pv - out.pv_tilde).abs() < 1e-12);
                }
            }
        }
    }
}
