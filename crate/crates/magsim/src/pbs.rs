//! Polarization cross talk in the analyzing beam splitter and its
//! natural-light calibration.
//!
//! A real polarizing beam splitter leaks a little `H` into the reflection
//! port (`delta1`) and a little `V` into the transmission port (`delta2`).
//! The measured intensity ratio through the two photo-detectors therefore
//! deviates from the true polarization ratio `V0 = I_V / I_H`, most severely
//! when `V0` is small. Calibrating against natural light cancels the
//! detector converter coefficients but not the cross talk itself.

use crate::error::{Error, Result};

/// Transmission/reflection coefficients of the analyzer and the converter
/// coefficients of the two detectors behind it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PbsParams {
    /// Transmission of the `H` component, (0, 1].
    pub t_h: f64,
    /// Reflection of the `V` component, (0, 1].
    pub r_v: f64,
    /// Cross talk: `H` reflected into the wrong port, [0, 1).
    pub delta1: f64,
    /// Cross talk: `V` transmitted into the wrong port, [0, 1).
    pub delta2: f64,
    /// Photo-electric converter coefficient, transmission branch, > 0.
    pub eta_t: f64,
    /// Photo-electric converter coefficient, reflection branch, > 0.
    pub eta_r: f64,
}

impl PbsParams {
    /// Energy-conserving defaults: `t_h = 1 - delta1`, `r_v = 1 - delta2`,
    /// unit converters.
    pub fn energy_conserving(delta1: f64, delta2: f64) -> Self {
        Self {
            t_h: 1.0 - delta1,
            r_v: 1.0 - delta2,
            delta1,
            delta2,
            eta_t: 1.0,
            eta_r: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let t_h_ok = self.t_h > 0.0 && self.t_h <= 1.0;
        let r_v_ok = self.r_v > 0.0 && self.r_v <= 1.0;
        if !t_h_ok || !r_v_ok {
            return Err(Error::Config(format!(
                "t_h and r_v must lie in (0, 1], got t_h={} r_v={}",
                self.t_h, self.r_v
            )));
        }
        if !(0.0..1.0).contains(&self.delta1) || !(0.0..1.0).contains(&self.delta2) {
            return Err(Error::Config(format!(
                "cross-talk coefficients must lie in [0, 1), got delta1={} delta2={}",
                self.delta1, self.delta2
            )));
        }
        // Energy conservation per polarization.
        if self.t_h + self.delta1 > 1.0 + 1e-12 {
            return Err(Error::Config(format!(
                "t_h + delta1 = {} exceeds 1",
                self.t_h + self.delta1
            )));
        }
        if self.r_v + self.delta2 > 1.0 + 1e-12 {
            return Err(Error::Config(format!(
                "r_v + delta2 = {} exceeds 1",
                self.r_v + self.delta2
            )));
        }
        let eta_ok = self.eta_t > 0.0 && self.eta_r > 0.0;
        if !eta_ok {
            return Err(Error::Config(format!(
                "converter coefficients must be positive, got eta_t={} eta_r={}",
                self.eta_t, self.eta_r
            )));
        }
        Ok(())
    }
}

/// True intensity ratio of the two polarization components entering the
/// analyzer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationRatio {
    pub v0: f64,
}

fn check_v0(v0: f64) -> Result<()> {
    if !v0.is_finite() || v0 <= 0.0 {
        return Err(Error::Domain(format!(
            "polarization ratio must be finite and positive, got {v0}"
        )));
    }
    Ok(())
}

/// Raw measured ratio of reflection- to transmission-branch currents,
/// `eta_r (delta1 + v0 r_v) / (eta_t (t_h + v0 delta2))`.
pub fn measured_ratio(v0: f64, pbs: &PbsParams) -> Result<f64> {
    check_v0(v0)?;
    let denom = pbs.t_h + v0 * pbs.delta2;
    if denom == 0.0 {
        return Err(Error::Domain(
            "transmission branch carries no light; measured ratio undefined".into(),
        ));
    }
    Ok(pbs.eta_r * (pbs.delta1 + v0 * pbs.r_v) / (pbs.eta_t * denom))
}

/// Ratio read with natural light (equal `H`/`V` weights),
/// `eta_r (delta1 + r_v) / (eta_t (t_h + delta2))`.
pub fn calibration_ratio(pbs: &PbsParams) -> f64 {
    pbs.eta_r * (pbs.delta1 + pbs.r_v) / (pbs.eta_t * (pbs.t_h + pbs.delta2))
}

/// Measured ratio divided by the calibration ratio. The converter
/// coefficients cancel exactly; only the cross talk remains.
pub fn calibrated_ratio(v0: f64, pbs: &PbsParams) -> Result<f64> {
    Ok(measured_ratio(v0, pbs)? / calibration_ratio(pbs))
}

/// Relative estimation error `|calibrated_ratio - v0| / v0`.
pub fn error_ratio(v0: f64, pbs: &PbsParams) -> Result<f64> {
    Ok((calibrated_ratio(v0, pbs)? - v0).abs() / v0)
}

/// Polarization ratio produced by a rotation angle: `tan^2(angle)`.
/// Links the amplified rotation to the ratio the analyzer must resolve.
pub fn v0_from_angle(angle: f64) -> Result<PolarizationRatio> {
    if !(angle > 0.0 && angle < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Domain(format!(
            "angle must lie strictly inside (0, pi/2), got {angle}"
        )));
    }
    Ok(PolarizationRatio {
        v0: angle.tan().powi(2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn fig6_params() -> PbsParams {
        PbsParams {
            t_h: 0.995,
            r_v: 0.995,
            delta1: 0.005,
            delta2: 0.005,
            eta_t: 1.0,
            eta_r: 1.0,
        }
    }

    #[test]
    fn ideal_pbs_reads_the_truth() {
        let ideal = PbsParams {
            t_h: 0.98,
            r_v: 0.98,
            delta1: 0.0,
            delta2: 0.0,
            eta_t: 1.0,
            eta_r: 1.0,
        };
        for v0 in [1e-4, 0.01, 0.5, 1.0] {
            assert_relative_eq!(measured_ratio(v0, &ideal).unwrap(), v0, max_relative = 1e-14);
            assert_relative_eq!(calibrated_ratio(v0, &ideal).unwrap(), v0, max_relative = 1e-14);
            assert!(error_ratio(v0, &ideal).unwrap() < 1e-14);
        }
        assert_relative_eq!(calibration_ratio(&ideal), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn converter_imbalance_passes_through_calibration_only() {
        let mut p = fig6_params();
        p.eta_r = 2.0;
        assert_relative_eq!(calibration_ratio(&p), 2.0, max_relative = 1e-14);
        // ... but cancels from the calibrated ratio.
        assert_relative_eq!(
            calibrated_ratio(0.01, &p).unwrap(),
            calibrated_ratio(0.01, &fig6_params()).unwrap(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn crosstalk_anchor_values() {
        let p = fig6_params();
        assert_relative_eq!(
            measured_ratio(0.01, &p).unwrap(),
            0.015024370634641475,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            calibrated_ratio(0.01, &p).unwrap(),
            0.015024370634641475,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            error_ratio(0.01, &p).unwrap(),
            0.5024370634641475,
            max_relative = 1e-12
        );
        // Error shrinks at larger v0 and the v0 -> 0 floor is delta-limited.
        assert!(error_ratio(0.1, &p).unwrap() < error_ratio(0.01, &p).unwrap());
        let floor = p.delta1 * (p.t_h + p.delta2) / (p.t_h * (p.delta1 + p.r_v));
        assert_relative_eq!(
            calibrated_ratio(1e-12, &p).unwrap(),
            floor,
            max_relative = 1e-6
        );
    }

    #[test]
    fn error_diverges_at_small_v0() {
        let p = fig6_params();
        assert!(
            error_ratio(1e-6, &p).unwrap() > 100.0 * error_ratio(1e-2, &p).unwrap()
        );
    }

    #[test]
    fn angle_to_ratio_anchors() {
        assert_relative_eq!(
            v0_from_angle(std::f64::consts::FRAC_PI_4).unwrap().v0,
            1.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            v0_from_angle(0.001).unwrap().v0,
            1.000000667e-6,
            max_relative = 1e-9
        );
        // The amplified angle from the dark-port example: four orders of
        // magnitude above the bare tan^2(1e-3).
        let amplified = v0_from_angle(0.1057).unwrap().v0;
        assert_relative_eq!(amplified, 0.01125623629, max_relative = 1e-9);
        assert!(amplified / v0_from_angle(0.001).unwrap().v0 > 1e4);
        assert!(v0_from_angle(0.0).is_err());
        assert!(v0_from_angle(std::f64::consts::FRAC_PI_2).is_err());
    }

    #[test]
    fn invalid_params_are_rejected() {
        let mut p = fig6_params();
        p.delta1 = 0.01; // t_h + delta1 > 1
        assert!(p.validate().is_err());
        let mut p = fig6_params();
        p.eta_t = 0.0;
        assert!(p.validate().is_err());
        assert!(fig6_params().validate().is_ok());
    }

    proptest! {
        #[test]
        fn calibrated_ratio_ignores_converter_rescaling(
            v0 in 1e-4f64..1.0,
            scale_t in 0.1f64..10.0,
            scale_r in 0.1f64..10.0,
        ) {
            let base = fig6_params();
            let mut rescaled = base;
            rescaled.eta_t *= scale_t;
            rescaled.eta_r *= scale_r;
            let a = calibrated_ratio(v0, &base).unwrap();
            let b = calibrated_ratio(v0, &rescaled).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        }

        #[test]
        fn zero_crosstalk_is_exact_for_any_v0(v0 in 1e-6f64..1e3, d in 0.5f64..1.0) {
            let p = PbsParams {
                t_h: d, r_v: d, delta1: 0.0, delta2: 0.0, eta_t: 0.7, eta_r: 1.9,
            };
            let got = calibrated_ratio(v0, &p).unwrap();
            prop_assert!((got - v0).abs() <= 1e-12 * v0);
        }

        #[test]
        fn error_ratio_decreases_with_v0(
            d1 in 1e-3f64..1e-2,
            d2 in 1e-3f64..1e-2,
        ) {
            let p = PbsParams::energy_conserving(d1, d2);
            let mut prev = f64::INFINITY;
            for i in 0..=40 {
                let v0 = 10f64.powf(-4.0 + 4.0 * i as f64 / 40.0);
                let phi = error_ratio(v0, &p).unwrap();
                prop_assert!(phi < prev, "phi not strictly decreasing at v0={v0}");
                prev = phi;
            }
        }
    }
}
