//! Thermal-channel evolution of Wigner functions by Gaussian-smoothing
//! quadrature, and the scaled-time reduction to the pure-loss channel.
//!
//! Evolution is implemented as Gaussian smoothing of amplitude-contracted
//! coordinates:
//!
//! ```text
//! W(q, p, t) = ∬ G_sigma(q - s q0, p - s p0) W(q0, p0, 0) dq0 dp0,
//! s = e^{-t/2},   sigma = (1 + 2n)(1 - e^{-t}) / 4   per axis  (t = gamma t),
//! ```
//!
//! where `G_sigma` is the normalized bivariate Gaussian with per-axis
//! variance `sigma`. This is the change-of-variables form of the propagator
//! usually written with an `e^t` prefactor against the thermal weight:
//!
//! ```text
//! W(q, p, t) = e^t ∬ W_T(x, y) W((q - sqrt(1 - e^{-t}) x) e^{t/2},
//!                                (p - sqrt(1 - e^{-t}) y) e^{t/2}, 0) dx dy,
//! W_T(x, y)  = 2 / (pi (1 + 2n)) exp(-2 (x^2 + y^2) / (1 + 2n)).
//! ```
//!
//! Substituting `q0 = (q - sqrt(1 - e^{-t}) x) e^{t/2}` (and likewise `p0`)
//! has Jacobian `dx dy = e^{-t} / (1 - e^{-t}) dq0 dp0`, and
//!
//! ```text
//! e^t * e^{-t}/(1 - e^{-t}) * W_T((q - s q0)/sqrt(1 - e^{-t}), ...)
//!   = 1/(2 pi sigma) exp(-((q - s q0)^2 + (p - s p0)^2) / (2 sigma))
//!   = G_sigma(q - s q0, p - s p0),
//! ```
//!
//! with `sigma` as above: the prefactor cancels against the Jacobian, so the
//! smoothing form preserves normalization identically. The smoothing form is
//! what is evaluated: the Gaussian kernel is absorbed into a tensor-product
//! Gauss-Hermite rule, with nodes placed at `q0 = (q - sqrt(2 sigma) x_k)/s`
//! against the weight `e^{-x^2}`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::phase_space::{GridSpec, WignerField};
use crate::states::{pacs_initial_at, wigner_spacs_evolved, ChannelParams, PacsSpec};

/// Starting node count per axis for the smoothing quadrature.
pub const MIN_GH_NODES: usize = 40;

/// Upper bound on the per-axis node count; doubling past this raises a
/// convergence error.
pub const MAX_GH_NODES: usize = 1280;

/// Probe agreement required between a rule and its doubled version.
pub const GH_PROBE_TOL: f64 = 1e-9;

/// Precomputed smoothing-kernel parameters for one channel setting.
#[derive(Clone, Copy, Debug)]
pub struct KernelParams {
    pub channel: ChannelParams,
    /// Per-axis variance of the smoothing Gaussian: (1 + 2n)(1 - e^{-t})/4.
    pub sigma: f64,
    /// Amplitude contraction e^{-t/2}.
    pub scale: f64,
}

impl KernelParams {
    pub fn new(ch: &ChannelParams) -> Result<Self> {
        ch.validate()?;
        let sigma = (1.0 + 2.0 * ch.n_bar) * (-(-ch.gamma_t).exp_m1()) / 4.0;
        let scale = (-0.5 * ch.gamma_t).exp();
        Ok(KernelParams {
            channel: *ch,
            sigma,
            scale,
        })
    }
}

/// Gauss-Hermite rule for the weight e^{-x^2}: sum_k w_k f(x_k) integrates
/// e^{-x^2} f(x) exactly for polynomials up to degree 2n - 1.
#[derive(Debug)]
pub struct GhRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Orthonormalized Hermite recurrence; returns (h_n(x), h_{n-1}(x)).
/// Orthonormal values stay O(1), so no overflow up to large n.
fn hermite_orthonormal(n: usize, x: f64) -> (f64, f64) {
    let mut p1 = PI.powf(-0.25);
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        p1 = x * (2.0 / j as f64).sqrt() * p2 - (((j - 1) as f64) / j as f64).sqrt() * p3;
    }
    (p1, p2)
}

fn compute_gh_rule(n: usize) -> GhRule {
    assert!(n >= 2);
    let m = n.div_ceil(2);
    let mut roots = vec![0.0f64; m];
    for i in 0..m {
        // Initial guesses (largest root first), then Newton on the
        // orthonormal recurrence.
        let mut z = match i {
            0 => {
                let an = (2 * n + 1) as f64;
                an.sqrt() - 1.85575 * an.powf(-1.0 / 6.0)
            }
            1 => roots[0] - 1.14 * (n as f64).powf(0.426) / roots[0],
            2 => 1.86 * roots[1] - 0.86 * roots[0],
            3 => 1.91 * roots[2] - 0.91 * roots[1],
            _ => 2.0 * roots[i - 1] - roots[i - 2],
        };
        for _ in 0..200 {
            let (h, hm1) = hermite_orthonormal(n, z);
            let dh = (2.0 * n as f64).sqrt() * hm1;
            let dz = h / dh;
            z -= dz;
            if dz.abs() <= 1e-15 * (1.0 + z.abs()) {
                break;
            }
        }
        roots[i] = z;
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for (i, &z) in roots.iter().enumerate() {
        let (_, hm1) = hermite_orthonormal(n, z);
        let w = 1.0 / (n as f64 * hm1 * hm1);
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[m - 1] = 0.0;
    }
    GhRule { nodes, weights }
}

/// Cached rule lookup; rules are immutable and shared.
pub fn gh_rule(n: usize) -> Arc<GhRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GhRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("gh rule cache poisoned");
    map.entry(n)
        .or_insert_with(|| Arc::new(compute_gh_rule(n)))
        .clone()
}

/// One smoothed value of a generic initial evaluator.
pub fn smooth_at<F>(initial: &F, kp: &KernelParams, rule: &GhRule, q: f64, p: f64) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    if kp.sigma == 0.0 {
        return initial(q, p);
    }
    let r = (2.0 * kp.sigma).sqrt();
    let s = kp.scale;
    let n = rule.nodes.len();
    let mut total = 0.0;
    for k in 0..n {
        let q0 = (q - r * rule.nodes[k]) / s;
        let mut row = 0.0;
        for l in 0..n {
            row += rule.weights[l] * initial(q0, (p - r * rule.nodes[l]) / s);
        }
        total += rule.weights[k] * row;
    }
    total / (s * s * PI)
}

/// Per-axis Gauss-Hermite moments of the photon-added state's separable
/// envelope: M_j = sum_k w_k u^j exp(-2 (c - a)^2) with c the mapped node
/// and u = (2c - a)^2. The polynomial prefactor of the initial state has
/// degree <= 4 and splits over the axes, so the full tensor sum reduces to
/// products of these moments.
fn pacs_axis_moments(
    rule: &GhRule,
    coord: f64,
    a_axis: f64,
    r: f64,
    s: f64,
    order: u32,
) -> [f64; 3] {
    let mut m = [0.0f64; 3];
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let c = (coord - r * x) / s;
        let d = c - a_axis;
        let g = w * (-2.0 * d * d).exp();
        m[0] += g;
        if order >= 1 {
            let u = (2.0 * c - a_axis) * (2.0 * c - a_axis);
            m[1] += u * g;
            if order >= 2 {
                m[2] += u * u * g;
            }
        }
    }
    m
}

/// One smoothed value of a photon-added initial state via axis moments.
/// Same rule and nodes as [`smooth_at`], restructured to O(nodes) work.
pub fn pacs_smooth_at(spec: &PacsSpec, kp: &KernelParams, rule: &GhRule, q: f64, p: f64) -> f64 {
    if kp.sigma == 0.0 {
        return pacs_initial_at(spec, q, p);
    }
    let r = (2.0 * kp.sigma).sqrt();
    let s = kp.scale;
    let a = spec.alpha.re;
    let b = spec.alpha.im;
    let mq = pacs_axis_moments(rule, q, a, r, s, spec.m);
    let mp = pacs_axis_moments(rule, p, b, r, s, spec.m);
    let a2 = spec.alpha.norm_sqr();
    let combo = match spec.m {
        0 => 2.0 / PI * mq[0] * mp[0],
        1 => {
            // -L_1(u + v) = u + v - 1
            let num = mq[1] * mp[0] + mq[0] * mp[1] - mq[0] * mp[0];
            2.0 * num / (PI * (1.0 + a2))
        }
        2 => {
            // L_2(u + v) = 1 - 2(u + v) + (u + v)^2 / 2
            let num = mq[0] * mp[0] - 2.0 * (mq[1] * mp[0] + mq[0] * mp[1])
                + 0.5 * mq[2] * mp[0]
                + mq[1] * mp[1]
                + 0.5 * mq[0] * mp[2];
            let l2 = 1.0 + 2.0 * a2 + 0.5 * a2 * a2;
            2.0 * num / (PI * l2)
        }
        _ => unreachable!("PacsSpec validation bounds m"),
    };
    combo / (s * s * PI)
}

/// Five probe points spread over a window, used for the node-doubling check.
fn grid_probes(grid: &GridSpec) -> [(f64, f64); 5] {
    let q = |f: f64| grid.q_min + f * (grid.q_max - grid.q_min);
    let p = |f: f64| grid.p_min + f * (grid.p_max - grid.p_min);
    [
        (q(0.5), p(0.5)),
        (q(0.25), p(0.25)),
        (q(0.75), p(0.25)),
        (q(0.25), p(0.75)),
        (q(0.75), p(0.75)),
    ]
}

/// Doubles the node count until the probe values move by less than
/// [`GH_PROBE_TOL`]; the coarser rule is kept once its doubling is confirmed
/// not to change the probes.
fn converged_rule<E>(eval: E) -> Result<Arc<GhRule>>
where
    E: Fn(&GhRule) -> Vec<f64>,
{
    let mut n = MIN_GH_NODES;
    let mut rule = gh_rule(n);
    let mut vals = eval(&rule);
    loop {
        if 2 * n > MAX_GH_NODES {
            return Err(Error::QuadratureNotConverged(format!(
                "probe values still moving at {} nodes per axis",
                n
            )));
        }
        let doubled = gh_rule(2 * n);
        let dvals = eval(&doubled);
        let drift = vals
            .iter()
            .zip(&dvals)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        if drift < GH_PROBE_TOL {
            return Ok(rule);
        }
        n *= 2;
        rule = doubled;
        vals = dvals;
    }
}

fn fill_evolved<V>(grid: &GridSpec, value_at: V) -> Result<WignerField>
where
    V: Fn(f64, f64) -> f64 + Sync,
{
    WignerField::sample(*grid, value_at)
}

/// Evolve a generic continuous Wigner evaluator through the thermal channel
/// and sample the result on `grid`. `gamma_t = 0` returns direct sampling.
pub fn evolve_wigner<F>(initial: &F, ch: &ChannelParams, grid: &GridSpec) -> Result<WignerField>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    grid.validate()?;
    let kp = KernelParams::new(ch)?;
    if kp.sigma == 0.0 {
        return WignerField::sample(*grid, initial);
    }
    let probes = grid_probes(grid);
    let rule = converged_rule(|r| {
        probes
            .iter()
            .map(|&(q, p)| smooth_at(initial, &kp, r, q, p))
            .collect()
    })?;
    evolve_wigner_with_rule(initial, &kp, &rule, grid)
}

/// Same as [`evolve_wigner`] but with a caller-pinned rule (used by tests
/// that feed resampled fields, whose interpolation noise sits above the
/// probe tolerance).
pub fn evolve_wigner_with_rule<F>(
    initial: &F,
    kp: &KernelParams,
    rule: &GhRule,
    grid: &GridSpec,
) -> Result<WignerField>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    grid.validate()?;
    fill_evolved(grid, |q, p| smooth_at(initial, kp, rule, q, p))
}

/// Evolve a photon-added coherent state (m in {0, 1, 2}) through the thermal
/// channel via the axis-moment fast path. Identical rule and node placement
/// as [`evolve_wigner`] on the state's closed-form evaluator.
pub fn evolve_pacs(spec: &PacsSpec, ch: &ChannelParams, grid: &GridSpec) -> Result<WignerField> {
    spec.validate()?;
    grid.validate()?;
    let kp = KernelParams::new(ch)?;
    if kp.sigma == 0.0 {
        let spec = *spec;
        return WignerField::sample(*grid, move |q, p| pacs_initial_at(&spec, q, p));
    }
    let probes = grid_probes(grid);
    let rule = converged_rule(|r| {
        probes
            .iter()
            .map(|&(q, p)| pacs_smooth_at(spec, &kp, r, q, p))
            .collect()
    })?;
    let spec = *spec;
    fill_evolved(grid, move |q, p| pacs_smooth_at(&spec, &kp, &rule, q, p))
}

/// Scaled decay time mapping the thermal channel onto the pure-loss channel:
/// t' = ln(1 + (1 + 2n)(e^t - 1)). Satisfies t' >= t, with equality at n = 0.
pub fn scaled_time(ch: &ChannelParams) -> Result<f64> {
    ch.validate()?;
    Ok(((1.0 + 2.0 * ch.n_bar) * ch.gamma_t.exp_m1()).ln_1p())
}

/// Max deviation, over `sample_points`, of the identity
/// `W(q, p, t) / e^t = W0(q', p', t') / e^{t'}`, where the primed side is the
/// pure-loss (n = 0) evolution at the scaled time and
/// `q' = q e^{t/2} / e^{t'/2}`. Both sides are evaluated by their own
/// independently converged quadratures.
pub fn scaling_identity_residual<F>(
    initial: &F,
    ch: &ChannelParams,
    sample_points: &[(f64, f64)],
) -> Result<f64>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    ch.validate()?;
    if ch.gamma_t <= 0.0 {
        return Err(Error::InvalidChannel(
            "scaling identity needs gamma_t > 0".into(),
        ));
    }
    let t = ch.gamma_t;
    let t_prime = scaled_time(ch)?;
    let loss = ChannelParams::new(t_prime, 0.0)?;
    let kp_thermal = KernelParams::new(ch)?;
    let kp_loss = KernelParams::new(&loss)?;
    let shrink = (0.5 * (t - t_prime)).exp();

    let rule_thermal = converged_rule(|r| {
        sample_points
            .iter()
            .map(|&(q, p)| smooth_at(initial, &kp_thermal, r, q, p))
            .collect()
    })?;
    let rule_loss = converged_rule(|r| {
        sample_points
            .iter()
            .map(|&(q, p)| smooth_at(initial, &kp_loss, r, q * shrink, p * shrink))
            .collect()
    })?;

    let et = t.exp();
    let etp = t_prime.exp();
    let mut worst = 0.0f64;
    for &(q, p) in sample_points {
        let left = smooth_at(initial, &kp_thermal, &rule_thermal, q, p) / et;
        let right = smooth_at(initial, &kp_loss, &rule_loss, q * shrink, p * shrink) / etp;
        worst = worst.max((left - right).abs());
    }
    Ok(worst)
}

/// Max-norm residual of the phase-space diffusion equation
/// dW/dt = (1/2)(d_q(q W) + d_p(p W)) + ((2n + 1)/8) Laplacian(W)
/// for the exact evolved m = 1 field, with fourth-order central stencils in
/// space and a centered difference of half-width `delta` in decay time.
pub fn fokker_planck_residual(
    alpha: Complex64,
    ch: &ChannelParams,
    grid: &GridSpec,
    delta: f64,
) -> Result<f64> {
    ch.validate()?;
    grid.validate()?;
    if !(delta > 0.0 && ch.gamma_t >= delta) {
        return Err(Error::InvalidTimes(format!(
            "need 0 < delta <= gamma_t, got delta = {}, gamma_t = {}",
            delta, ch.gamma_t
        )));
    }
    let before = ChannelParams::new(ch.gamma_t - delta, ch.n_bar)?;
    let after = ChannelParams::new(ch.gamma_t + delta, ch.n_bar)?;
    let w_minus = wigner_spacs_evolved(alpha, &before, *grid)?;
    let w_now = wigner_spacs_evolved(alpha, ch, *grid)?;
    let w_plus = wigner_spacs_evolved(alpha, &after, *grid)?;

    let (nq, np) = (grid.nq, grid.np);
    if nq < 5 || np < 5 {
        return Err(Error::InvalidGrid(
            "residual stencils need at least 5 points per axis".into(),
        ));
    }
    let hq = grid.hq();
    let hp = grid.hp();
    let diff = (2.0 * ch.n_bar + 1.0) / 8.0;

    let worst = (2..nq - 2)
        .into_par_iter()
        .map(|i| {
            let mut local = 0.0f64;
            for j in 2..np - 2 {
                let qw = |di: isize| {
                    let ii = (i as isize + di) as usize;
                    grid.q(ii) * w_now.at(ii, j)
                };
                let pw = |dj: isize| {
                    let jj = (j as isize + dj) as usize;
                    grid.p(jj) * w_now.at(i, jj)
                };
                let wq = |di: isize| w_now.at((i as isize + di) as usize, j);
                let wp = |dj: isize| w_now.at(i, (j as isize + dj) as usize);

                let drift_q = (-qw(2) + 8.0 * qw(1) - 8.0 * qw(-1) + qw(-2)) / (12.0 * hq);
                let drift_p = (-pw(2) + 8.0 * pw(1) - 8.0 * pw(-1) + pw(-2)) / (12.0 * hp);
                let lap_q = (-wq(2) + 16.0 * wq(1) - 30.0 * wq(0) + 16.0 * wq(-1) - wq(-2))
                    / (12.0 * hq * hq);
                let lap_p = (-wp(2) + 16.0 * wp(1) - 30.0 * wp(0) + 16.0 * wp(-1) - wp(-2))
                    / (12.0 * hp * hp);

                let rhs = 0.5 * (drift_q + drift_p) + diff * (lap_q + lap_p);
                let dt = (w_plus.at(i, j) - w_minus.at(i, j)) / (2.0 * delta);
                local = local.max((rhs - dt).abs());
            }
            local
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::WIGNER_BOUND;
    use crate::states::spacs_evolved_at;

    fn real(a: f64) -> Complex64 {
        Complex64::new(a, 0.0)
    }

    fn vacuum(q: f64, p: f64) -> f64 {
        WIGNER_BOUND * (-2.0 * (q * q + p * p)).exp()
    }

    #[test]
    fn gh_rule_integrates_even_moments() {
        // int e^{-x^2} x^{2k} = sqrt(pi) (2k-1)!! / 2^k
        let sqrt_pi = PI.sqrt();
        for n in [2usize, 7, 40, 80, 160] {
            let rule = gh_rule(n);
            let moment = |k: u32| -> f64 {
                rule.nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(&x, &w)| w * x.powi(2 * k as i32))
                    .sum()
            };
            assert!((moment(0) - sqrt_pi).abs() < 1e-12 * sqrt_pi, "n = {}", n);
            if 2 * n > 2 {
                assert!((moment(1) - 0.5 * sqrt_pi).abs() < 1e-12, "n = {}", n);
            }
            if 2 * n > 8 {
                let expected = sqrt_pi * 105.0 / 16.0; // k = 4: 7!!/2^4
                assert!((moment(4) - expected).abs() < 1e-10, "n = {}", n);
            }
        }
    }

    #[test]
    fn gh_rule_handles_degree_just_below_exactness_limit() {
        // n = 3 integrates degree 5 exactly but not degree 6.
        let rule = gh_rule(3);
        let m4: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&x, &w)| w * x.powi(4))
            .sum();
        assert!((m4 - 0.75 * PI.sqrt()).abs() < 1e-13);
        let m6: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&x, &w)| w * x.powi(6))
            .sum();
        assert!((m6 - 15.0 / 8.0 * PI.sqrt()).abs() > 1e-3);
    }

    #[test]
    fn kernel_params_shape() {
        let kp = KernelParams::new(&ChannelParams::new(0.0, 3.0).unwrap()).unwrap();
        assert_eq!(kp.sigma, 0.0);
        assert_eq!(kp.scale, 1.0);
        let kp = KernelParams::new(&ChannelParams::new(0.3, 1.0).unwrap()).unwrap();
        assert!(kp.sigma > 0.0 && kp.scale < 1.0);
        let expected = 3.0 * (1.0 - (-0.3f64).exp()) / 4.0;
        assert!((kp.sigma - expected).abs() < 1e-15);
    }

    #[test]
    fn zero_time_is_identity() {
        let ch = ChannelParams::new(0.0, 2.0).unwrap();
        let grid = GridSpec::new(-3.0, 3.0, -3.0, 3.0, 61, 61).unwrap();
        let evolved = evolve_wigner(&vacuum, &ch, &grid).unwrap();
        for i in 0..grid.nq {
            for j in 0..grid.np {
                assert_eq!(evolved.at(i, j), vacuum(grid.q(i), grid.p(j)));
            }
        }
    }

    #[test]
    fn evolved_vacuum_origin_matches_gaussian_convolution() {
        // Closed form: 2 / (pi (1 + 2 n (1 - e^{-t}))).
        let grid = GridSpec::new(-1.0, 1.0, -1.0, 1.0, 5, 5).unwrap();
        for (n, t) in [(0.0, 0.2), (1.0, 0.1), (2.5, 0.7), (0.5, 1.5)] {
            let ch = ChannelParams::new(t, n).unwrap();
            let kp = KernelParams::new(&ch).unwrap();
            let rule = gh_rule(80);
            let got = smooth_at(&vacuum, &kp, &rule, 0.0, 0.0);
            let expected = 2.0 / (PI * (1.0 + 2.0 * n * (1.0 - (-t).exp())));
            assert!(
                (got - expected).abs() < 1e-8,
                "n = {}, t = {}: {} vs {}",
                n,
                t,
                got,
                expected
            );
            let _ = grid;
        }
    }

    #[test]
    fn quadrature_matches_exact_evolved_field() {
        let alpha = real(0.5);
        let ch = ChannelParams::new(0.1, 1.0).unwrap();
        let spec = PacsSpec::new(alpha, 1).unwrap();
        let grid = GridSpec::new(-4.0, 4.0, -4.0, 4.0, 81, 81).unwrap();
        let numeric = evolve_wigner(&|q, p| pacs_initial_at(&spec, q, p), &ch, &grid).unwrap();
        let mut worst = 0.0f64;
        for i in 0..grid.nq {
            for j in 0..grid.np {
                let exact = spacs_evolved_at(alpha, &ch, grid.q(i), grid.p(j));
                worst = worst.max((numeric.at(i, j) - exact).abs());
            }
        }
        assert!(worst < 1e-6, "max diff = {}", worst);
    }

    #[test]
    fn exact_point_value_against_quadrature() {
        let alpha = real(0.5);
        let ch = ChannelParams::new(0.1, 1.0).unwrap();
        let spec = PacsSpec::new(alpha, 1).unwrap();
        let kp = KernelParams::new(&ch).unwrap();
        let rule = gh_rule(80);
        let numeric = smooth_at(&|q, p| pacs_initial_at(&spec, q, p), &kp, &rule, 0.2, 0.0);
        let exact = spacs_evolved_at(alpha, &ch, 0.2, 0.0);
        assert!((numeric - exact).abs() < 1e-6);
    }

    #[test]
    fn fast_path_agrees_with_tensor_path() {
        let rule = gh_rule(40);
        for m in 0..=2u32 {
            let spec = PacsSpec::new(Complex64::new(0.7, -0.3), m).unwrap();
            for (t, n) in [(0.1, 1.0), (0.4, 0.3)] {
                let kp = KernelParams::new(&ChannelParams::new(t, n).unwrap()).unwrap();
                for (q, p) in [(0.0, 0.0), (0.5, -0.25), (-1.3, 2.0)] {
                    let fast = pacs_smooth_at(&spec, &kp, &rule, q, p);
                    let slow =
                        smooth_at(&|qq, pp| pacs_initial_at(&spec, qq, pp), &kp, &rule, q, p);
                    assert!(
                        (fast - slow).abs() < 1e-12,
                        "m = {}: {} vs {}",
                        m,
                        fast,
                        slow
                    );
                }
            }
        }
    }

    #[test]
    fn evolved_fields_stay_normalized() {
        let grid = GridSpec::default_window();
        for m in [1u32, 2] {
            let spec = PacsSpec::new(real(0.5), m).unwrap();
            let ch = ChannelParams::new(0.15, 0.8).unwrap();
            let field = evolve_pacs(&spec, &ch, &grid).unwrap();
            let total = field.integrate().unwrap();
            assert!(
                (total - 1.0).abs() < 1e-6,
                "m = {}: integral = {}",
                m,
                total
            );
        }
    }

    #[test]
    fn scaled_time_values() {
        assert_eq!(
            scaled_time(&ChannelParams::new(0.0, 5.0).unwrap()).unwrap(),
            0.0
        );
        let loss = scaled_time(&ChannelParams::new(0.7, 0.0).unwrap()).unwrap();
        assert!((loss - 0.7).abs() < 1e-15);
        let mapped = scaled_time(&ChannelParams::new((4.0f64 / 3.0).ln(), 1.0).unwrap()).unwrap();
        assert!((mapped - 2.0f64.ln()).abs() < 1e-12);
        // t' >= t
        for (t, n) in [(0.05, 0.2), (0.3, 1.0), (0.9, 3.0)] {
            let tp = scaled_time(&ChannelParams::new(t, n).unwrap()).unwrap();
            assert!(tp >= t);
        }
    }

    fn probe_lattice() -> Vec<(f64, f64)> {
        let mut pts = Vec::new();
        for i in 0..5 {
            for j in 0..5 {
                pts.push((-2.0 + i as f64, -2.0 + j as f64));
            }
        }
        pts
    }

    #[test]
    fn scaling_identity_for_single_added_photon() {
        let spec = PacsSpec::new(real(0.5), 1).unwrap();
        let ch = ChannelParams::new(0.15, 1.0).unwrap();
        let resid =
            scaling_identity_residual(&|q, p| pacs_initial_at(&spec, q, p), &ch, &probe_lattice())
                .unwrap();
        assert!(resid < 1e-6, "residual = {}", resid);
    }

    #[test]
    fn scaling_identity_for_two_added_photons() {
        let spec = PacsSpec::new(real(0.5), 2).unwrap();
        let ch = ChannelParams::new(0.1, 0.5).unwrap();
        let resid =
            scaling_identity_residual(&|q, p| pacs_initial_at(&spec, q, p), &ch, &probe_lattice())
                .unwrap();
        assert!(resid < 1e-6, "residual = {}", resid);
    }

    #[test]
    fn scaling_identity_trivial_at_zero_temperature() {
        let spec = PacsSpec::new(real(0.5), 1).unwrap();
        let ch = ChannelParams::new(0.2, 0.0).unwrap();
        let resid =
            scaling_identity_residual(&|q, p| pacs_initial_at(&spec, q, p), &ch, &probe_lattice())
                .unwrap();
        assert!(resid < 1e-12, "residual = {}", resid);
    }

    #[test]
    fn semigroup_composition() {
        let alpha = real(0.5);
        let spec = PacsSpec::new(alpha, 1).unwrap();
        let n = 1.0;
        let first = ChannelParams::new(0.05, n).unwrap();
        let second = ChannelParams::new(0.05, n).unwrap();
        let total = ChannelParams::new(0.1, n).unwrap();

        let stage_one = evolve_pacs(&spec, &first, &GridSpec::default_window()).unwrap();
        let resampled = move |q: f64, p: f64| stage_one.sample_bicubic(q, p);

        let probe = GridSpec::new(-4.0, 4.0, -4.0, 4.0, 81, 81).unwrap();
        let kp = KernelParams::new(&second).unwrap();
        let rule = gh_rule(80);
        let two_step = evolve_wigner_with_rule(&resampled, &kp, &rule, &probe).unwrap();
        let one_step = evolve_pacs(&spec, &total, &probe).unwrap();

        let mut worst = 0.0f64;
        for i in 0..probe.nq {
            for j in 0..probe.np {
                worst = worst.max((two_step.at(i, j) - one_step.at(i, j)).abs());
            }
        }
        assert!(worst < 1e-6, "semigroup max diff = {}", worst);
    }

    #[test]
    fn diffusion_equation_residual_is_small() {
        let ch = ChannelParams::new(0.1, 1.0).unwrap();
        let resid =
            fokker_planck_residual(real(0.5), &ch, &GridSpec::default_window(), 1e-4).unwrap();
        assert!(resid < 1e-3, "residual = {}", resid);
    }

    #[test]
    fn invalid_channel_is_rejected() {
        let grid = GridSpec::new(-1.0, 1.0, -1.0, 1.0, 5, 5).unwrap();
        assert!(ChannelParams::new(-0.1, 1.0).is_err());
        let bad = ChannelParams {
            gamma_t: -0.1,
            n_bar: 1.0,
        };
        assert!(evolve_wigner(&vacuum, &bad, &grid).is_err());
        let bad_n = ChannelParams {
            gamma_t: 0.1,
            n_bar: -1.0,
        };
        assert!(evolve_wigner(&vacuum, &bad_n, &grid).is_err());
    }
}
