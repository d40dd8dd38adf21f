//! Optical-qubit encoding on {vacuum, single-photon-added coherent state},
//! closed-form beam-splitter overlaps, their small-angle approximation, and
//! a truncated number-basis oracle that exponentiates the beam-splitter
//! generator directly.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::states::{pacs_norm, PacsSpec};

/// Tail mass allowed past the truncation cutoff.
const TRUNCATION_TAIL: f64 = 1e-12;

/// Relative tolerance of the series exponential.
const SERIES_TOL: f64 = 1e-12;

/// Terms allowed per substep before the series is declared non-convergent.
const SERIES_MAX_TERMS: usize = 300;

/// State vector in the truncated number basis, indices 0..=cutoff.
#[derive(Clone, Debug)]
pub struct FockVector {
    amplitudes: Vec<Complex64>,
}

impl FockVector {
    pub fn cutoff(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Cutoff rule max(30, ceil(|alpha|^2 + 10 sqrt(|alpha|^2 + 1))): a Poisson
/// tail bound keeping the truncated mass below 1e-12 for |alpha|^2 <= 100.
pub fn required_cutoff(alpha: Complex64) -> usize {
    let a2 = alpha.norm_sqr();
    let rule = (a2 + 10.0 * (a2 + 1.0).sqrt()).ceil() as usize;
    rule.max(30)
}

/// Beam-splitter configuration: seed amplitude, mixing angle, truncation.
#[derive(Clone, Copy, Debug)]
pub struct GateConfig {
    pub alpha: Complex64,
    pub phi: f64,
    pub cutoff: usize,
}

impl GateConfig {
    /// Configuration with the default cutoff rule.
    pub fn new(alpha: Complex64, phi: f64) -> Result<Self> {
        GateConfig::with_cutoff(alpha, phi, required_cutoff(alpha))
    }

    pub fn with_cutoff(alpha: Complex64, phi: f64, cutoff: usize) -> Result<Self> {
        if !(alpha.re.is_finite() && alpha.im.is_finite() && phi.is_finite()) {
            return Err(Error::InvalidState(format!(
                "alpha = {}, phi = {}",
                alpha, phi
            )));
        }
        if cutoff < required_cutoff(alpha) {
            return Err(Error::Truncation(format!(
                "cutoff {} below the required {} for |alpha|^2 = {}",
                cutoff,
                required_cutoff(alpha),
                alpha.norm_sqr()
            )));
        }
        Ok(GateConfig { alpha, phi, cutoff })
    }
}

/// Logical basis state of the optical qubit: bit 0 is the vacuum, bit 1 the
/// single-photon-added coherent state expanded in the number basis
/// (amplitude_k proportional to sqrt(k) alpha^{k-1} e^{-|alpha|^2/2} / sqrt((k-1)!)).
pub fn logical_state(bit: bool, alpha: Complex64, cutoff: usize) -> Result<FockVector> {
    if cutoff < required_cutoff(alpha) {
        return Err(Error::Truncation(format!(
            "cutoff {} below the required {} for |alpha|^2 = {}",
            cutoff,
            required_cutoff(alpha),
            alpha.norm_sqr()
        )));
    }
    let mut amplitudes = vec![Complex64::ZERO; cutoff + 1];
    if !bit {
        amplitudes[0] = Complex64::ONE;
        return Ok(FockVector { amplitudes });
    }
    // coherent coefficients c_k = alpha^k e^{-|alpha|^2/2} / sqrt(k!);
    // adding one photon sends c_k to sqrt(k+1) c_k at index k+1.
    let mut coherent = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    let mut total = 0.0;
    for (k, slot) in amplitudes.iter_mut().enumerate().skip(1) {
        let amp = coherent * (k as f64).sqrt();
        *slot = amp;
        total += amp.norm_sqr();
        coherent *= alpha / (k as f64).sqrt();
    }
    let exact = pacs_norm(&PacsSpec::new(alpha, 1)?)?;
    if ((exact - total) / exact).abs() > TRUNCATION_TAIL {
        return Err(Error::Truncation(format!(
            "tail mass {:.3e} past cutoff {}",
            (exact - total) / exact,
            cutoff
        )));
    }
    let scale = 1.0 / total.sqrt();
    for amp in &mut amplitudes {
        *amp *= scale;
    }
    Ok(FockVector { amplitudes })
}

/// Closed-form overlap between the beam-splitter output and input for one
/// pair of logical bits:
///
/// (0,0): 1
/// (1,0), (0,1): (cos^2(phi) |a|^2 + cos(phi)) / N(a,1) * e^{|a|^2 (cos(phi) - 1)}
/// (1,1): (|a|^4 e^{4 i phi} + 2 |a|^2 e^{3 i phi} + cos(2 phi)) / N(a,1)^2
///        * e^{2 |a|^2 (e^{i phi} - 1)}
pub fn overlap_analytic(bits: (bool, bool), cfg: &GateConfig) -> Complex64 {
    let a2 = cfg.alpha.norm_sqr();
    let phi = cfg.phi;
    let norm = 1.0 + a2;
    match bits {
        (false, false) => Complex64::ONE,
        (true, false) | (false, true) => {
            let value =
                (phi.cos().powi(2) * a2 + phi.cos()) / norm * (a2 * (phi.cos() - 1.0)).exp();
            Complex64::new(value, 0.0)
        }
        (true, true) => {
            let i = Complex64::I;
            let poly = a2 * a2 * (4.0 * phi * i).exp()
                + 2.0 * a2 * (3.0 * phi * i).exp()
                + (2.0 * phi).cos();
            let envelope = (2.0 * a2 * ((phi * i).exp() - 1.0)).exp();
            poly / (norm * norm) * envelope
        }
    }
}

/// Small-angle limit of [`overlap_analytic`], valid when phi^2 |alpha|^2 is
/// small while phi |alpha|^2 stays of order one:
/// (0,0), (1,0), (0,1) -> 1 and (1,1) -> e^{2 i phi |alpha|^2}.
pub fn overlap_approx(bits: (bool, bool), cfg: &GateConfig) -> Complex64 {
    match bits {
        (true, true) => (2.0 * cfg.phi * cfg.alpha.norm_sqr() * Complex64::I).exp(),
        _ => Complex64::ONE,
    }
}

/// Whether the small-angle regime condition phi^2 |alpha|^2 << 1 holds
/// (pinned at < 0.1). Violations are reported, not rejected.
pub fn phase_regime_ok(alpha: Complex64, phi: f64) -> bool {
    phi * phi * alpha.norm_sqr() < 0.1
}

/// Beam-splitter angle realizing a controlled-pi phase on the (1,1) pair:
/// phi = pi / (2 |alpha|^2).
pub fn cz_phase(alpha: Complex64) -> Result<f64> {
    let a2 = alpha.norm_sqr();
    if a2 == 0.0 {
        return Err(Error::UndefinedPhase);
    }
    Ok(PI / (2.0 * a2))
}

/// Apply exp(i phi T) to a coefficient vector on the total-photon block N,
/// where T is the tridiagonal generator with couplings
/// t_k = sqrt((k+1)(N-k)) between occupations k and k+1 of the first mode.
///
/// The spectral radius of T on block N is N, so the exponential is taken in
/// ceil(|phi| N) scaled substeps, each summed as a Taylor series on the
/// vector to relative tolerance 1e-12.
fn expi_block_apply(phi: f64, block_n: usize, v: &[Complex64]) -> Result<Vec<Complex64>> {
    debug_assert_eq!(v.len(), block_n + 1);
    if block_n == 0 {
        return Ok(v.to_vec());
    }
    let couplings: Vec<f64> = (0..block_n)
        .map(|k| (((k + 1) * (block_n - k)) as f64).sqrt())
        .collect();
    let apply_t = |x: &[Complex64]| -> Vec<Complex64> {
        let mut y = vec![Complex64::ZERO; x.len()];
        for (k, &t) in couplings.iter().enumerate() {
            y[k] += t * x[k + 1];
            y[k + 1] += t * x[k];
        }
        y
    };
    let substeps = ((phi.abs() * block_n as f64).ceil() as usize).max(1);
    let step = Complex64::I * (phi / substeps as f64);
    let input_norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if input_norm == 0.0 {
        return Ok(v.to_vec());
    }
    let mut w = v.to_vec();
    for _ in 0..substeps {
        let mut acc = w.clone();
        let mut term = w.clone();
        let mut converged = false;
        for j in 1..=SERIES_MAX_TERMS {
            let tv = apply_t(&term);
            for (slot, t) in term.iter_mut().zip(tv) {
                *slot = t * step / j as f64;
            }
            for (a, t) in acc.iter_mut().zip(&term) {
                *a += t;
            }
            let tail = term.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if tail <= SERIES_TOL * input_norm {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::SeriesNotConverged(format!(
                "block {} needed more than {} terms",
                block_n, SERIES_MAX_TERMS
            )));
        }
        w = acc;
    }
    Ok(w)
}

/// Brute-force overlap: build the two-mode input from [`logical_state`],
/// apply exp(i phi (a b^dag + a^dag b)) block by block (the generator
/// conserves total photon number), and project back onto the input.
pub fn overlap_numeric(bits: (bool, bool), cfg: &GateConfig) -> Result<Complex64> {
    // The generator is symmetric under mode swap, so (0,1) is computed as
    // (1,0); this also makes the symmetry exact in floating point.
    let bits = if bits == (false, true) {
        (true, false)
    } else {
        bits
    };
    let state_a = logical_state(bits.0, cfg.alpha, cfg.cutoff)?;
    let state_b = logical_state(bits.1, cfg.alpha, cfg.cutoff)?;
    let a = state_a.amplitudes();
    let b = state_b.amplitudes();
    let cutoff = cfg.cutoff;

    let mut overlap = Complex64::ZERO;
    for total in 0..=2 * cutoff {
        let lo = total.saturating_sub(cutoff);
        let hi = total.min(cutoff);
        if lo > hi {
            continue;
        }
        let mut v = vec![Complex64::ZERO; total + 1];
        let mut occupied = false;
        for k in lo..=hi {
            let amp = a[k] * b[total - k];
            if amp != Complex64::ZERO {
                occupied = true;
            }
            v[k] = amp;
        }
        if !occupied {
            continue;
        }
        let w = expi_block_apply(cfg.phi, total, &v)?;
        for (vk, wk) in v.iter().zip(&w) {
            overlap += vk.conj() * wk;
        }
    }
    Ok(overlap)
}

/// Overlap record for one bit pair, as produced for the JSON table.
#[derive(Clone, Copy, Debug)]
pub struct OverlapRecord {
    pub bits: (bool, bool),
    pub analytic: Complex64,
    pub numeric: Complex64,
    pub approx: Complex64,
    pub regime_ok: bool,
}

/// All four bit-pair overlaps of one configuration.
pub fn overlap_table(cfg: &GateConfig) -> Result<Vec<OverlapRecord>> {
    let pairs = [(false, false), (true, false), (false, true), (true, true)];
    let regime_ok = phase_regime_ok(cfg.alpha, cfg.phi);
    pairs
        .iter()
        .map(|&bits| {
            Ok(OverlapRecord {
                bits,
                analytic: overlap_analytic(bits, cfg),
                numeric: overlap_numeric(bits, cfg)?,
                approx: overlap_approx(bits, cfg),
                regime_ok,
            })
        })
        .collect()
}
