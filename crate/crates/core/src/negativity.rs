//! Negative-volume decay curves, the threshold decay time at which the
//! Wigner function turns nonnegative, and the closed-form threshold
//! relations.

use crate::channel::{evolve_pacs, scaled_time};
use crate::error::{Error, Result};
use crate::phase_space::{GridSpec, WignerField, NEGATIVITY_FLOOR};
use crate::states::{spacs_negative_disc, wigner_spacs_evolved, ChannelParams, PacsSpec};

/// How a threshold value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThresholdMethod {
    /// Closed form ln((2 + 2n)/(1 + 2n)).
    AnalyticThermal,
    /// Closed-form map from a known pure-loss threshold.
    AnalyticMapped,
    /// Bisection on the evolved field's minimum.
    BisectionNumeric,
}

impl ThresholdMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            ThresholdMethod::AnalyticThermal => "analytic_thermal",
            ThresholdMethod::AnalyticMapped => "analytic_mapped",
            ThresholdMethod::BisectionNumeric => "bisection_numeric",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ThresholdResult {
    pub gamma_t_c: f64,
    pub method: ThresholdMethod,
    /// Final bracket width; 0 for analytic results.
    pub bisection_width: f64,
}

/// Threshold decay time of the single-photon-added state in a thermal
/// channel: ln((2 + 2n)/(1 + 2n)). Independent of the seed amplitude.
pub fn threshold_analytic(n_bar: f64) -> Result<ThresholdResult> {
    if !(n_bar.is_finite() && n_bar >= 0.0) {
        return Err(Error::InvalidChannel(format!("n_bar = {}", n_bar)));
    }
    Ok(ThresholdResult {
        gamma_t_c: (1.0 / (1.0 + 2.0 * n_bar)).ln_1p(),
        method: ThresholdMethod::AnalyticThermal,
        bisection_width: 0.0,
    })
}

/// Map a pure-loss threshold onto the thermal channel:
/// t_c(n) = ln((e^{t_c(0)} + 2n)/(1 + 2n)). Strictly decreasing in n,
/// strictly increasing in t_c(0), fixed point at n = 0.
pub fn threshold_map(gamma_t_c0: f64, n_bar: f64) -> Result<ThresholdResult> {
    if !(gamma_t_c0.is_finite() && gamma_t_c0 > 0.0) {
        return Err(Error::InvalidTimes(format!("gamma_t_c0 = {}", gamma_t_c0)));
    }
    if !(n_bar.is_finite() && n_bar >= 0.0) {
        return Err(Error::InvalidChannel(format!("n_bar = {}", n_bar)));
    }
    Ok(ThresholdResult {
        gamma_t_c: (gamma_t_c0.exp_m1() / (1.0 + 2.0 * n_bar)).ln_1p(),
        method: ThresholdMethod::AnalyticMapped,
        bisection_width: 0.0,
    })
}

/// Large-n and small-n approximants of the threshold map:
/// (e^{t_c(0)} - 1)/(2n) and t_c(0) - 2(1 - e^{-t_c(0)}) n.
pub fn asymptotic_thresholds(gamma_t_c0: f64, n_bar: f64) -> Result<(f64, f64)> {
    if !(gamma_t_c0.is_finite() && gamma_t_c0 > 0.0) {
        return Err(Error::InvalidTimes(format!("gamma_t_c0 = {}", gamma_t_c0)));
    }
    if !(n_bar.is_finite() && n_bar > 0.0) {
        return Err(Error::InvalidChannel(format!(
            "n_bar = {} (must be positive)",
            n_bar
        )));
    }
    let large = gamma_t_c0.exp_m1() / (2.0 * n_bar);
    let small = gamma_t_c0 - 2.0 * (-(-gamma_t_c0).exp_m1()) * n_bar;
    Ok((large, small))
}

/// Negative-volume curve (gamma_t, P_NW) on the default window.
pub fn pnw_curve(spec: &PacsSpec, n_bar: f64, times: &[f64]) -> Result<Vec<(f64, f64)>> {
    pnw_curve_on(spec, n_bar, times, &GridSpec::default_window())
}

/// Negative-volume curve on an explicit grid. The m = 1 state uses its exact
/// evolved form; other orders go through the smoothing quadrature.
pub fn pnw_curve_on(
    spec: &PacsSpec,
    n_bar: f64,
    times: &[f64],
    grid: &GridSpec,
) -> Result<Vec<(f64, f64)>> {
    spec.validate()?;
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidTimes("times must be sorted ascending".into()));
    }
    if times.iter().any(|&t| !(t.is_finite() && t >= 0.0)) {
        return Err(Error::InvalidTimes(
            "times must be finite and nonnegative".into(),
        ));
    }
    let mut curve = Vec::with_capacity(times.len());
    for &t in times {
        let ch = ChannelParams::new(t, n_bar)?;
        let field = evolved_field(spec, &ch, grid)?;
        curve.push((t, field.negative_volume()?.p_nw));
    }
    Ok(curve)
}

fn evolved_field(spec: &PacsSpec, ch: &ChannelParams, grid: &GridSpec) -> Result<WignerField> {
    if spec.m == 1 {
        wigner_spacs_evolved(spec.alpha, ch, *grid)
    } else {
        evolve_pacs(spec, ch, grid)
    }
}

/// Local refinement step used around candidate minima.
const REFINE_STEP: f64 = 0.005;

/// Window of `half_cells` refinement steps on each side of (qc, pc).
fn refined_window(qc: f64, pc: f64, half_cells: usize) -> Result<GridSpec> {
    GridSpec::centered(qc, pc, half_cells as f64 * REFINE_STEP, 2 * half_cells + 1)
}

/// Predicate: does the evolved field still dip below -NEGATIVITY_FLOOR?
fn has_negativity(spec: &PacsSpec, n_bar: f64, gamma_t: f64) -> Result<bool> {
    let ch = ChannelParams::new(gamma_t, n_bar)?;
    if spec.m == 1 {
        // The negative region of the exact evolved field is a disc whose
        // center is known; a refined window around it decides the predicate.
        let (qc, pc) = match spacs_negative_disc(spec.alpha, &ch) {
            Some((qc, pc, _)) => (qc, pc),
            None => return Ok(false),
        };
        let local = refined_window(qc, pc, 40)?;
        let field = wigner_spacs_evolved(spec.alpha, &ch, local)?;
        Ok(field.min_value()? < -NEGATIVITY_FLOOR)
    } else {
        let coarse = evolve_pacs(spec, &ch, &GridSpec::default_window())?;
        let (qm, pm, vm) = coarse.min_location()?;
        if vm < -NEGATIVITY_FLOOR {
            return Ok(true);
        }
        // One refinement pass around the coarse minimum.
        let local = refined_window(qm, pm, 30)?;
        let fine = evolve_pacs(spec, &ch, &local)?;
        Ok(fine.min_value()? < -NEGATIVITY_FLOOR)
    }
}

/// Locate the threshold decay time by bisection on the field minimum.
///
/// The bracket starts at [0, 1] and its upper end doubles (at most 8 times)
/// while negativity persists there. Requires an initially nonclassical
/// state (m in {1, 2} with a negative region at gamma_t = 0).
pub fn threshold_numeric(spec: &PacsSpec, n_bar: f64, tol: f64) -> Result<ThresholdResult> {
    spec.validate()?;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidTimes(format!("tol = {}", tol)));
    }
    if spec.m == 0 || !has_negativity(spec, n_bar, 0.0)? {
        return Err(Error::NotNonclassical);
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    let mut widenings = 0;
    while has_negativity(spec, n_bar, hi)? {
        widenings += 1;
        if widenings > 8 {
            return Err(Error::BracketNotFound(hi));
        }
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if has_negativity(spec, n_bar, mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ThresholdResult {
        gamma_t_c: 0.5 * (lo + hi),
        method: ThresholdMethod::BisectionNumeric,
        bisection_width: hi - lo,
    })
}

/// Default bisection tolerance.
pub const THRESHOLD_TOL: f64 = 1e-6;

/// Scaled-time counterpart of a curve point, exposed for conjugacy checks:
/// P_NW in the thermal channel at gamma_t equals P_NW in the pure-loss
/// channel at the scaled time.
pub fn loss_channel_time(ch: &ChannelParams) -> Result<f64> {
    scaled_time(ch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn real(a: f64) -> Complex64 {
        Complex64::new(a, 0.0)
    }

    #[test]
    fn analytic_threshold_values() {
        let t0 = threshold_analytic(0.0).unwrap();
        assert!((t0.gamma_t_c - 2.0f64.ln()).abs() < 1e-15);
        assert_eq!(t0.method, ThresholdMethod::AnalyticThermal);
        assert_eq!(t0.bisection_width, 0.0);

        let t1 = threshold_analytic(1.0).unwrap();
        assert!((t1.gamma_t_c - (4.0f64 / 3.0).ln()).abs() < 1e-15);

        // Exact value at n = 50 from the closed form, and ~1.5% agreement
        // with the 0.5/n large-n asymptote.
        let t50 = threshold_analytic(50.0).unwrap();
        assert!((t50.gamma_t_c - (102.0f64 / 101.0).ln()).abs() < 1e-15);
        assert!((t50.gamma_t_c - 0.01).abs() / 0.01 < 0.02);
    }

    #[test]
    fn threshold_map_values() {
        let ln2 = 2.0f64.ln();
        let mapped = threshold_map(ln2, 1.0).unwrap();
        assert!((mapped.gamma_t_c - (4.0f64 / 3.0).ln()).abs() < 1e-15);
        assert_eq!(mapped.method, ThresholdMethod::AnalyticMapped);

        let fixed = threshold_map(ln2, 0.0).unwrap();
        assert!((fixed.gamma_t_c - ln2).abs() < 1e-15);

        // Exact value at n = 100: ln(202/201); the 1/(2n) approximant 0.005
        // sits 3.72e-5 above it.
        let far = threshold_map(ln2, 100.0).unwrap();
        assert!((far.gamma_t_c - (202.0f64 / 201.0).ln()).abs() < 1e-15);
        assert!(((far.gamma_t_c - 0.005).abs() - 3.72e-5).abs() < 2e-7);
    }

    #[test]
    fn threshold_map_is_monotone() {
        let ln2 = 2.0f64.ln();
        let mut prev = threshold_map(ln2, 0.0).unwrap().gamma_t_c;
        for k in 1..=20 {
            let cur = threshold_map(ln2, k as f64 * 0.25).unwrap().gamma_t_c;
            assert!(cur < prev);
            prev = cur;
        }
        let lo = threshold_map(0.3, 1.0).unwrap().gamma_t_c;
        let hi = threshold_map(0.6, 1.0).unwrap().gamma_t_c;
        assert!(hi > lo);
    }

    #[test]
    fn asymptotic_forms() {
        let ln2 = 2.0f64.ln();
        let (large, _) = asymptotic_thresholds(ln2, 100.0).unwrap();
        assert!((large - 0.005).abs() < 1e-15);
        let mapped = threshold_map(ln2, 100.0).unwrap().gamma_t_c;
        assert!((mapped - large).abs() / mapped < 0.01);

        let (_, small) = asymptotic_thresholds(ln2, 0.01).unwrap();
        assert!((small - (ln2 - 0.01)).abs() < 1e-15);
        // The first-order remainder is (3/2) n^2 + O(n^3) = 1.4766e-4 here.
        let mapped_small = threshold_map(ln2, 0.01).unwrap().gamma_t_c;
        let remainder = (mapped_small - small).abs();
        assert!(
            (remainder - 1.4766e-4).abs() < 2e-6,
            "remainder = {}",
            remainder
        );

        let (_, tiny) = asymptotic_thresholds(ln2, 1e-12).unwrap();
        assert!((tiny - ln2).abs() < 1e-11);
    }

    #[test]
    fn numeric_threshold_single_photon() {
        let spec = PacsSpec::new(real(0.5), 1).unwrap();
        let res = threshold_numeric(&spec, 1.0, THRESHOLD_TOL).unwrap();
        assert_eq!(res.method, ThresholdMethod::BisectionNumeric);
        assert!(res.bisection_width <= THRESHOLD_TOL);
        assert!(
            (res.gamma_t_c - (4.0f64 / 3.0).ln()).abs() < 1e-3,
            "t_c = {}",
            res.gamma_t_c
        );
    }

    #[test]
    fn numeric_threshold_is_alpha_independent() {
        let a =
            threshold_numeric(&PacsSpec::new(real(0.1), 1).unwrap(), 0.0, THRESHOLD_TOL).unwrap();
        let b =
            threshold_numeric(&PacsSpec::new(real(1.5), 1).unwrap(), 0.0, THRESHOLD_TOL).unwrap();
        let ln2 = 2.0f64.ln();
        assert!((a.gamma_t_c - ln2).abs() < 1e-3);
        assert!((b.gamma_t_c - ln2).abs() < 1e-3);
    }

    #[test]
    fn coherent_state_is_not_nonclassical() {
        let spec = PacsSpec::new(real(0.5), 0).unwrap();
        let err = threshold_numeric(&spec, 1.0, THRESHOLD_TOL).unwrap_err();
        assert_eq!(err.to_string(), "state not nonclassical");
    }

    #[test]
    fn curve_anchor_and_vanishing_tail() {
        // Fock |1> anchor at t = 0.
        let spec = PacsSpec::new(real(0.0), 1).unwrap();
        let curve = pnw_curve(&spec, 0.0, &[0.0]).unwrap();
        let expected = 2.0 * (-0.5f64).exp() - 1.0;
        assert!(
            (curve[0].1 - expected).abs() < 1e-4,
            "p_nw = {}",
            curve[0].1
        );

        // Beyond the threshold ln(3/2) at n = 0.5 the curve is exactly zero.
        let spec = PacsSpec::new(real(1.5), 1).unwrap();
        let t_c = 1.5f64.ln();
        let curve = pnw_curve(&spec, 0.5, &[t_c + 0.01, t_c + 0.1]).unwrap();
        assert_eq!(curve[0].1, 0.0);
        assert_eq!(curve[1].1, 0.0);
    }

    #[test]
    fn curve_is_nonincreasing() {
        let spec = PacsSpec::new(real(1.5), 1).unwrap();
        let times: Vec<f64> = (0..9).map(|k| k as f64 * 0.05).collect();
        let curve = pnw_curve(&spec, 0.5, &times).unwrap();
        for w in curve.windows(2) {
            assert!(w[1].1 <= w[0].1 + 1e-6, "curve rose: {:?}", w);
        }
    }

    #[test]
    fn unsorted_times_are_rejected() {
        let spec = PacsSpec::new(real(0.5), 1).unwrap();
        assert!(pnw_curve(&spec, 0.0, &[0.2, 0.1]).is_err());
        assert!(pnw_curve(&spec, 0.0, &[-0.1, 0.1]).is_err());
    }

    #[test]
    fn two_photon_initial_negativity_matches_radial_integral() {
        // |2><2|: integrating the closed form over the negative ring gives
        // e^{-u2}(2 u2^2 + 1) - e^{-u1}(2 u1^2 + 1), u_{1,2} = (2 -+ sqrt2)/2
        // (antiderivative of L_2(2u) e^{-u} is -e^{-u}(2u^2 + 1)).
        let u1 = (2.0 - 2.0f64.sqrt()) / 2.0;
        let u2 = (2.0 + 2.0f64.sqrt()) / 2.0;
        let expected = (-u2).exp() * (2.0 * u2 * u2 + 1.0) - (-u1).exp() * (2.0 * u1 * u1 + 1.0);
        let spec = PacsSpec::new(real(0.0), 2).unwrap();
        let curve = pnw_curve(&spec, 0.0, &[0.0]).unwrap();
        assert!(
            (curve[0].1 - expected).abs() < 1e-4,
            "p_nw = {} vs {}",
            curve[0].1,
            expected
        );
    }
}
