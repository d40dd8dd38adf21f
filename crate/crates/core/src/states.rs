//! Closed-form Wigner functions: thermal states, coherent states, and
//! photon-added coherent states (one or two added photons), plus the exact
//! time-evolved form of the single-photon-added state in a thermal channel.
//!
//! All evaluators take dimensionless quadratures (q, p), the real and
//! imaginary parts of the phase-space coordinate.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phase_space::{GridSpec, WignerField};

/// Largest decay time accepted by [`ChannelParams`]; beyond this e^{gamma t}
/// overflows intermediate expressions, and all physics of interest happens
/// below gamma t = 1.
pub const MAX_GAMMA_T: f64 = 50.0;

/// Photon-added coherent state descriptor: seed amplitude `alpha` and the
/// number of added photons `m` (0 = plain coherent state).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PacsSpec {
    pub alpha: Complex64,
    pub m: u32,
}

impl PacsSpec {
    pub fn new(alpha: Complex64, m: u32) -> Result<Self> {
        let spec = PacsSpec { alpha, m };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m > 2 {
            return Err(Error::UnsupportedOrder(self.m));
        }
        if !self.alpha.re.is_finite() || !self.alpha.im.is_finite() {
            return Err(Error::InvalidState(format!(
                "alpha = {} is not finite",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// Thermal-channel parameters: dimensionless decay time `gamma_t` and mean
/// thermal photon number `n_bar` (0 = photon-loss channel).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelParams {
    pub gamma_t: f64,
    pub n_bar: f64,
}

impl ChannelParams {
    pub fn new(gamma_t: f64, n_bar: f64) -> Result<Self> {
        let ch = ChannelParams { gamma_t, n_bar };
        ch.validate()?;
        Ok(ch)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_t.is_finite() && self.gamma_t >= 0.0) {
            return Err(Error::InvalidChannel(format!("gamma_t = {}", self.gamma_t)));
        }
        if self.gamma_t > MAX_GAMMA_T {
            return Err(Error::InvalidChannel(format!(
                "gamma_t = {} exceeds the supported bound {}",
                self.gamma_t, MAX_GAMMA_T
            )));
        }
        if !(self.n_bar.is_finite() && self.n_bar >= 0.0) {
            return Err(Error::InvalidChannel(format!("n_bar = {}", self.n_bar)));
        }
        Ok(())
    }
}

/// Laguerre polynomial L_m(x) for m in {0, 1, 2}.
///
/// Only these orders appear in the closed forms implemented here; higher
/// orders are rejected rather than silently extrapolated.
pub fn laguerre(m: u32, x: f64) -> Result<f64> {
    match m {
        0 => Ok(1.0),
        1 => Ok(1.0 - x),
        2 => Ok(1.0 - 2.0 * x + 0.5 * x * x),
        _ => Err(Error::UnsupportedOrder(m)),
    }
}

/// Normalization N(alpha, m) = m! L_m(-|alpha|^2) of the photon-added
/// coherent state. Strictly positive.
pub fn pacs_norm(spec: &PacsSpec) -> Result<f64> {
    spec.validate()?;
    let factorial = [1.0, 1.0, 2.0][spec.m as usize];
    Ok(factorial * laguerre(spec.m, -spec.alpha.norm_sqr())?)
}

/// Thermal-state Wigner value at (q, p):
/// 2 / (pi (1 + 2 n)) * exp(-2 (q^2 + p^2) / (1 + 2 n)).
pub fn thermal_at(n_bar: f64, q: f64, p: f64) -> f64 {
    let width = 1.0 + 2.0 * n_bar;
    2.0 / (PI * width) * (-2.0 * (q * q + p * p) / width).exp()
}

pub fn wigner_thermal(n_bar: f64, grid: GridSpec) -> Result<WignerField> {
    if !(n_bar.is_finite() && n_bar >= 0.0) {
        return Err(Error::InvalidChannel(format!("n_bar = {}", n_bar)));
    }
    WignerField::sample(grid, |q, p| thermal_at(n_bar, q, p))
}

/// Initial (gamma t = 0) Wigner value of the photon-added coherent state.
///
/// m = 0: (2/pi) exp(-2 |z - alpha|^2)
/// m = 1: -2 L_1(|2z - alpha|^2) exp(-2 |z - alpha|^2) / (pi L_1(-|alpha|^2))
/// m = 2: +2 L_2(|2z - alpha|^2) exp(-2 |z - alpha|^2) / (pi L_2(-|alpha|^2))
///
/// with z = q + i p.
pub fn pacs_initial_at(spec: &PacsSpec, q: f64, p: f64) -> f64 {
    let a = spec.alpha.re;
    let b = spec.alpha.im;
    let dq = q - a;
    let dp = p - b;
    let envelope = (-2.0 * (dq * dq + dp * dp)).exp();
    match spec.m {
        0 => 2.0 / PI * envelope,
        1 => {
            let u = (2.0 * q - a).powi(2) + (2.0 * p - b).powi(2);
            let norm = 1.0 + spec.alpha.norm_sqr();
            // -L_1(u) = u - 1
            2.0 * (u - 1.0) * envelope / (PI * norm)
        }
        2 => {
            let u = (2.0 * q - a).powi(2) + (2.0 * p - b).powi(2);
            let l2 = 1.0 - 2.0 * u + 0.5 * u * u;
            let a2 = spec.alpha.norm_sqr();
            let norm = 1.0 + 2.0 * a2 + 0.5 * a2 * a2;
            2.0 * l2 * envelope / (PI * norm)
        }
        _ => unreachable!("PacsSpec validation bounds m"),
    }
}

pub fn wigner_pacs_initial(spec: &PacsSpec, grid: GridSpec) -> Result<WignerField> {
    spec.validate()?;
    let spec = *spec;
    WignerField::sample(grid, move |q, p| pacs_initial_at(&spec, q, p))
}

/// Exact thermal-channel evolution of the single-photon-added coherent
/// state Wigner function at decay time `ch.gamma_t`:
///
/// W(q,p,t) = 2 e^t [ (xi - c^2 Re a)^2 + (zeta - c^2 Im a)^2 + c^4 - 1 ]
///            exp(-2 (mu^2 + nu^2) / (1 + c^2))
///            / ( pi (1 + |a|^2) (1 + c^2)^3 ),
///
/// c^2 = (e^t - 1)(1 + 2 n),  mu = Re a - q e^{t/2},  nu = Im a - p e^{t/2},
/// xi = Re a - 2 q e^{t/2},   zeta = Im a - 2 p e^{t/2}   (t = gamma t).
///
/// At t = 0 this reduces term by term to the initial m = 1 form. The value
/// is negative exactly on the disc
/// (Re a (1-c^2) - 2 q e^{t/2})^2 + (Im a (1-c^2) - 2 p e^{t/2})^2 < 1 - c^4,
/// which is nonempty iff c < 1; c = 1 gives the threshold decay time
/// ln((2 + 2n)/(1 + 2n)).
pub fn spacs_evolved_at(alpha: Complex64, ch: &ChannelParams, q: f64, p: f64) -> f64 {
    let a = alpha.re;
    let b = alpha.im;
    let e_t = ch.gamma_t.exp();
    let e_half = (0.5 * ch.gamma_t).exp();
    let c2 = ch.gamma_t.exp_m1() * (1.0 + 2.0 * ch.n_bar);
    let mu = a - q * e_half;
    let nu = b - p * e_half;
    let xi = a - 2.0 * q * e_half;
    let zeta = b - 2.0 * p * e_half;
    let one_c2 = 1.0 + c2;
    let bracket = (xi - c2 * a).powi(2) + (zeta - c2 * b).powi(2) + c2 * c2 - 1.0;
    let envelope = (-2.0 * (mu * mu + nu * nu) / one_c2).exp();
    // Denominator factor 1 + |alpha|^2 = N(alpha, 1); same source as pacs_norm.
    let norm = 1.0 + alpha.norm_sqr();
    2.0 * e_t * bracket * envelope / (PI * norm * one_c2.powi(3))
}

pub fn wigner_spacs_evolved(
    alpha: Complex64,
    ch: &ChannelParams,
    grid: GridSpec,
) -> Result<WignerField> {
    ch.validate()?;
    PacsSpec::new(alpha, 1)?;
    let ch = *ch;
    WignerField::sample(grid, move |q, p| spacs_evolved_at(alpha, &ch, q, p))
}

/// Center and squared radius (in the contracted coordinates) of the disc on
/// which the evolved m = 1 Wigner function is negative. Returns `None` once
/// c >= 1, i.e. at or past the threshold decay time.
pub fn spacs_negative_disc(alpha: Complex64, ch: &ChannelParams) -> Option<(f64, f64, f64)> {
    let c2 = ch.gamma_t.exp_m1() * (1.0 + 2.0 * ch.n_bar);
    if c2 >= 1.0 {
        return None;
    }
    let e_half = (0.5 * ch.gamma_t).exp();
    let qc = alpha.re * (1.0 - c2) / (2.0 * e_half);
    let pc = alpha.im * (1.0 - c2) / (2.0 * e_half);
    let radius = (1.0 - c2 * c2).sqrt() / (2.0 * e_half);
    Some((qc, pc, radius))
}
