//! End-to-end verification suite shared by the CLI `verify` subcommand and
//! the acceptance integration tests.
//!
//! Each criterion pins its tolerances in code and reports one pass/fail
//! line. Criterion 7's small-n clause is expected to fail: the demanded
//! bound (1e-4 at n = 0.01) sits below the exact first-order Taylor
//! remainder of the threshold map, which is (3/2) n^2 + O(n^3) = 1.477e-4
//! there. The check is kept as stated rather than loosened.

use std::time::Instant;

use num_complex::Complex64;

use crate::channel::{
    evolve_pacs, evolve_wigner_with_rule, fokker_planck_residual, gh_rule, scaled_time,
    KernelParams,
};
use crate::error::Result;
use crate::gate::{overlap_analytic, overlap_approx, overlap_numeric, GateConfig};
use crate::negativity::{
    asymptotic_thresholds, threshold_analytic, threshold_map, threshold_numeric, THRESHOLD_TOL,
};
use crate::phase_space::GridSpec;
use crate::states::{wigner_pacs_initial, wigner_spacs_evolved, ChannelParams, PacsSpec};

/// Outcome of one verification criterion.
#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "criterion {}: {} — {} [{}]",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.details
        )
    }
}

fn real(a: f64) -> Complex64 {
    Complex64::new(a, 0.0)
}

fn report(id: usize, name: &'static str, outcome: Result<(bool, String)>) -> CriterionReport {
    match outcome {
        Ok((passed, details)) => CriterionReport {
            id,
            name,
            passed,
            details,
        },
        Err(e) => CriterionReport {
            id,
            name,
            passed: false,
            details: format!("error: {}", e),
        },
    }
}

/// Numeric thresholds of the single-photon-added state match the closed
/// form within 1e-3 over a 4 x 5 (alpha, n) grid, in under 60 s.
pub fn criterion_1() -> CriterionReport {
    report(
        1,
        "thermal threshold formula, m = 1",
        (|| {
            let start = Instant::now();
            let mut worst = 0.0f64;
            for &alpha in &[0.1, 0.5, 1.0, 1.5] {
                for &n in &[0.0, 0.3, 0.5, 1.0, 2.0] {
                    let spec = PacsSpec::new(real(alpha), 1)?;
                    let numeric = threshold_numeric(&spec, n, THRESHOLD_TOL)?.gamma_t_c;
                    let analytic = threshold_analytic(n)?.gamma_t_c;
                    worst = worst.max((numeric - analytic).abs());
                }
            }
            let elapsed = start.elapsed().as_secs_f64();
            let passed = worst < 1e-3 && elapsed < 60.0;
            Ok((
                passed,
                format!(
                    "worst |numeric - analytic| = {:.2e} over 20 cases, {:.1} s",
                    worst, elapsed
                ),
            ))
        })(),
    )
}

fn tpacs_threshold_violations() -> Result<(f64, Vec<String>)> {
    let mut worst = 0.0f64;
    let mut violations = Vec::new();
    for &alpha in &[0.5, 1.0] {
        for &n in &[0.0, 1.0] {
            let spec = PacsSpec::new(real(alpha), 2)?;
            let numeric = threshold_numeric(&spec, n, THRESHOLD_TOL)?.gamma_t_c;
            let analytic = threshold_analytic(n)?.gamma_t_c;
            let diff = (numeric - analytic).abs();
            worst = worst.max(diff);
            if diff >= 2e-3 {
                violations.push(format!(
                    "alpha = {}, n = {}: numeric {:.6} vs analytic {:.6}",
                    alpha, n, numeric, analytic
                ));
            }
        }
    }
    Ok((worst, violations))
}

/// The two-photon-added state shares the m = 1 threshold formula within
/// 2e-3. A violation is reported as a finding; it fails the criterion only
/// if the numeric pipeline itself fails criteria 3-4.
pub fn criterion_2() -> CriterionReport {
    criterion_2_given(None)
}

fn criterion_2_given(
    cross_checks: Option<(&CriterionReport, &CriterionReport)>,
) -> CriterionReport {
    report(
        2,
        "thermal threshold claim, m = 2",
        (|| {
            let (worst, violations) = tpacs_threshold_violations()?;
            if violations.is_empty() {
                return Ok((
                    true,
                    format!("worst |numeric - analytic| = {:.2e} over 4 cases", worst),
                ));
            }
            let pipeline_ok = match cross_checks {
                Some((c3, c4)) => c3.passed && c4.passed,
                None => criterion_3().passed && criterion_4().passed,
            };
            let finding = format!(
                "FINDING: threshold formula violated for m = 2 ({}); pipeline cross-checks {}",
                violations.join("; "),
                if pipeline_ok {
                    "pass, so the finding stands"
                } else {
                    "FAIL"
                }
            );
            Ok((pipeline_ok, finding))
        })(),
    )
}

/// The exact evolved m = 1 field and the smoothing quadrature agree to 1e-6
/// pointwise on the default window.
pub fn criterion_3() -> CriterionReport {
    report(
        3,
        "exact vs quadrature evolution, m = 1",
        (|| {
            let grid = GridSpec::default_window();
            let mut worst = 0.0f64;
            for &(alpha, n, t) in &[(0.5, 1.0, 0.1), (1.5, 0.5, 0.2), (0.1, 2.0, 0.05)] {
                let ch = ChannelParams::new(t, n)?;
                let spec = PacsSpec::new(real(alpha), 1)?;
                let numeric = evolve_pacs(&spec, &ch, &grid)?;
                let exact = wigner_spacs_evolved(real(alpha), &ch, grid)?;
                let diff = numeric
                    .values()
                    .iter()
                    .zip(exact.values())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max);
                worst = worst.max(diff);
            }
            Ok((
                worst < 1e-6,
                format!("worst pointwise diff = {:.2e} over 3 cases", worst),
            ))
        })(),
    )
}

fn probe_lattice() -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(25);
    for i in 0..5 {
        for j in 0..5 {
            pts.push((-2.0 + i as f64, -2.0 + j as f64));
        }
    }
    pts
}

/// Scaled-time identity: pointwise residual < 1e-6 at 25 probes, and
/// negative-volume conjugacy with the pure-loss channel within 1e-4.
pub fn criterion_4() -> CriterionReport {
    report(
        4,
        "pure-loss scaling identity",
        (|| {
            let points = probe_lattice();
            let mut worst_resid = 0.0f64;
            for &(m, n, t) in &[(1u32, 1.0, 0.15), (2u32, 0.5, 0.1)] {
                let spec = PacsSpec::new(real(0.5), m)?;
                let ch = ChannelParams::new(t, n)?;
                let resid = crate::channel::scaling_identity_residual(
                    &|q, p| crate::states::pacs_initial_at(&spec, q, p),
                    &ch,
                    &points,
                )?;
                worst_resid = worst_resid.max(resid);
            }

            let grid = GridSpec::default_window();
            let mut worst_pnw = 0.0f64;
            for &m in &[1u32, 2] {
                let spec = PacsSpec::new(real(0.5), m)?;
                for &(n, t) in &[(0.5, 0.1), (1.0, 0.1), (1.0, 0.2)] {
                    let ch = ChannelParams::new(t, n)?;
                    let thermal = evolve_pacs(&spec, &ch, &grid)?.negative_volume()?.p_nw;
                    let loss_ch = ChannelParams::new(scaled_time(&ch)?, 0.0)?;
                    let loss = evolve_pacs(&spec, &loss_ch, &grid)?.negative_volume()?.p_nw;
                    worst_pnw = worst_pnw.max((thermal - loss).abs());
                }
            }
            let passed = worst_resid < 1e-6 && worst_pnw < 1e-4;
            Ok((passed, format!(
            "worst residual = {:.2e} at 25 probes; worst |P_NW(thermal) - P_NW(loss)| = {:.2e} over 6 pairs x 2 states",
            worst_resid, worst_pnw
        )))
        })(),
    )
}

/// Closed-form negativity anchor: the single-photon Fock state's volume is
/// 2 e^{-1/2} - 1 within 1e-4; coherent states carry exactly zero.
pub fn criterion_5() -> CriterionReport {
    report(
        5,
        "negativity anchors",
        (|| {
            let grid = GridSpec::default_window();
            let fock =
                wigner_pacs_initial(&PacsSpec::new(real(0.0), 1)?, grid)?.negative_volume()?;
            let expected = 2.0 * (-0.5f64).exp() - 1.0;
            let anchor_ok = (fock.p_nw - expected).abs() < 1e-4;

            let mut coherent_ok = true;
            for alpha in [real(0.0), real(0.5), Complex64::new(0.3, 1.2)] {
                let res =
                    wigner_pacs_initial(&PacsSpec::new(alpha, 0)?, grid)?.negative_volume()?;
                coherent_ok &= res.p_nw == 0.0 && res.negative_cells == 0;
            }
            Ok((
                anchor_ok && coherent_ok,
                format!(
            "Fock|1> volume = {:.6} vs {:.6} (diff {:.2e}); coherent volumes exactly zero: {}",
            fock.p_nw, expected, (fock.p_nw - expected).abs(), coherent_ok
        ),
            ))
        })(),
    )
}

/// Decay-curve shape: monotone in decay time, ordered in n, two-photon
/// initial volume above single-photon, and a normalized-fragility crossover.
pub fn criterion_6() -> CriterionReport {
    report(
        6,
        "curve shape properties",
        (|| {
            let grid = GridSpec::default_window();
            let mut notes = Vec::new();

            // (a) monotone decrease in decay time, slack 1e-6.
            let mut monotone = true;
            let times: Vec<f64> = (0..9).map(|k| k as f64 * 0.05).collect();
            let spacs_curve =
                crate::negativity::pnw_curve(&PacsSpec::new(real(1.5), 1)?, 0.5, &times)?;
            monotone &= spacs_curve.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-6);
            let tpacs_times = [0.0, 0.05, 0.1, 0.15, 0.2, 0.25];
            let tpacs_curve =
                crate::negativity::pnw_curve(&PacsSpec::new(real(0.5), 2)?, 0.5, &tpacs_times)?;
            monotone &= tpacs_curve.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-6);
            notes.push(format!("monotone: {}", monotone));

            // (b) strict ordering in n at fixed decay time 0.1 (m = 1, alpha = 1.5).
            let mut ordered = true;
            let mut prev = f64::INFINITY;
            for k in 1..=9 {
                let n = k as f64 * 0.1;
                let ch = ChannelParams::new(0.1, n)?;
                let p = wigner_spacs_evolved(real(1.5), &ch, grid)?
                    .negative_volume()?
                    .p_nw;
                ordered &= p + 1e-6 < prev;
                prev = p;
            }
            notes.push(format!("n-ordering: {}", ordered));

            // (c) initial two-photon volume exceeds single-photon for equal alpha.
            let mut initial_order = true;
            for &alpha in &[0.1, 0.5, 1.0, 1.5] {
                let single = wigner_pacs_initial(&PacsSpec::new(real(alpha), 1)?, grid)?
                    .negative_volume()?
                    .p_nw;
                let double = wigner_pacs_initial(&PacsSpec::new(real(alpha), 2)?, grid)?
                    .negative_volume()?
                    .p_nw;
                initial_order &= double > single;
            }
            notes.push(format!("initial m=2 > m=1: {}", initial_order));

            // (d) normalized fragility: some decay time where the two-photon
            // curve has lost a larger fraction than the single-photon curve.
            let spacs0 = spacs_fraction_curve(real(0.5), 1, 0.5, &tpacs_times)?;
            let tpacs0 = spacs_fraction_curve(real(0.5), 2, 0.5, &tpacs_times)?;
            let crossover = tpacs0
                .iter()
                .zip(&spacs0)
                .skip(1)
                .any(|((_, ft), (_, fs))| ft < fs);
            notes.push(format!("fragility crossover: {}", crossover));

            let passed = monotone && ordered && initial_order && crossover;
            Ok((passed, notes.join("; ")))
        })(),
    )
}

fn spacs_fraction_curve(
    alpha: Complex64,
    m: u32,
    n: f64,
    times: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let spec = PacsSpec::new(alpha, m)?;
    let curve = crate::negativity::pnw_curve(&spec, n, times)?;
    let base = curve[0].1;
    Ok(curve.into_iter().map(|(t, p)| (t, p / base)).collect())
}

/// Threshold-map asymptotics. The small-n clause is a knowingly red check:
/// the demanded 1e-4 sits below the exact remainder 1.477e-4 at n = 0.01.
pub fn criterion_7() -> CriterionReport {
    report(
        7,
        "threshold asymptotics",
        (|| {
            let ln2 = 2.0f64.ln();
            let mapped_large = threshold_map(ln2, 100.0)?.gamma_t_c;
            let (large, _) = asymptotic_thresholds(ln2, 100.0)?;
            let rel = (mapped_large - large).abs() / mapped_large;
            let large_ok = rel < 0.01;

            let mapped_small = threshold_map(ln2, 0.01)?.gamma_t_c;
            let (_, small) = asymptotic_thresholds(ln2, 0.01)?;
            let abs = (mapped_small - small).abs();
            let small_ok = abs < 1e-4;

            Ok((large_ok && small_ok, format!(
            "large-n: rel err {:.3}% (< 1%: {}); small-n: |map - approx| = {:.4e} (< 1e-4: {}; exact remainder is 1.5 n^2 + O(n^3) = 1.48e-4 at n = 0.01)",
            rel * 100.0, large_ok, abs, small_ok
        )))
        })(),
    )
}

/// Beam-splitter overlaps: closed form vs truncated-basis oracle to 1e-8,
/// decreasing small-angle error along 2 phi |alpha|^2 = pi, and an exactly
/// unit vacuum-pair overlap.
pub fn criterion_8() -> CriterionReport {
    report(
        8,
        "gate overlaps",
        (|| {
            let mut worst = 0.0f64;
            for &alpha in &[0.5, 1.0, 2.0] {
                for &phi in &[0.1, 0.3, std::f64::consts::FRAC_PI_4] {
                    let cfg = GateConfig::new(real(alpha), phi)?;
                    for bits in [(false, false), (true, false), (false, true), (true, true)] {
                        let diff =
                            (overlap_analytic(bits, &cfg) - overlap_numeric(bits, &cfg)?).norm();
                        worst = worst.max(diff);
                    }
                }
            }
            let grid_ok = worst < 1e-8;

            let mut errs = Vec::new();
            for &a2 in &[10.0f64, 25.0, 50.0, 100.0] {
                let cfg = GateConfig::new(real(a2.sqrt()), std::f64::consts::PI / (2.0 * a2))?;
                errs.push(
                    (overlap_analytic((true, true), &cfg) - overlap_approx((true, true), &cfg))
                        .norm(),
                );
            }
            let decreasing = errs.windows(2).all(|w| w[1] < w[0]);

            let cfg = GateConfig::new(real(1.0), 0.3)?;
            let vacuum_exact = overlap_analytic((false, false), &cfg) == Complex64::ONE
                && overlap_numeric((false, false), &cfg)? == Complex64::ONE;

            Ok((grid_ok && decreasing && vacuum_exact, format!(
            "worst oracle diff = {:.2e} over 36 overlaps; approx err over |alpha|^2 = 10..100: {:.3} -> {:.3} -> {:.3} -> {:.3} decreasing: {}; vacuum pair exact: {}",
            worst, errs[0], errs[1], errs[2], errs[3], decreasing, vacuum_exact
        )))
        })(),
    )
}

/// Conservation: unit normalization of every generated and evolved field,
/// semigroup composition to 1e-6, and the phase-space diffusion residual
/// below 1e-3.
pub fn criterion_9() -> CriterionReport {
    report(
        9,
        "conservation and consistency",
        (|| {
            let grid = GridSpec::default_window();
            let mut worst_norm = 0.0f64;
            for m in 0..=2u32 {
                for &alpha in &[0.5, 1.5] {
                    let spec = PacsSpec::new(real(alpha), m)?;
                    let total = wigner_pacs_initial(&spec, grid)?.integrate()?;
                    worst_norm = worst_norm.max((total - 1.0).abs());
                }
            }
            for &(m, alpha, n, t) in &[
                (1u32, 0.5, 1.0, 0.1),
                (2u32, 0.5, 1.0, 0.1),
                (0u32, 1.5, 2.0, 0.3),
            ] {
                let spec = PacsSpec::new(real(alpha), m)?;
                let ch = ChannelParams::new(t, n)?;
                let total = evolve_pacs(&spec, &ch, &grid)?.integrate()?;
                worst_norm = worst_norm.max((total - 1.0).abs());
            }
            let ch = ChannelParams::new(0.1, 1.0)?;
            let total = wigner_spacs_evolved(real(0.5), &ch, grid)?.integrate()?;
            worst_norm = worst_norm.max((total - 1.0).abs());
            let norm_ok = worst_norm < 1e-6;

            // semigroup: two half-steps against one full step.
            let spec = PacsSpec::new(real(0.5), 1)?;
            let half = ChannelParams::new(0.05, 1.0)?;
            let full = ChannelParams::new(0.1, 1.0)?;
            let stage_one = evolve_pacs(&spec, &half, &grid)?;
            let resampled = |q: f64, p: f64| stage_one.sample_bicubic(q, p);
            let probe = GridSpec::new(-4.0, 4.0, -4.0, 4.0, 81, 81)?;
            let kp = KernelParams::new(&half)?;
            let rule = gh_rule(80);
            let two_step = evolve_wigner_with_rule(&resampled, &kp, &rule, &probe)?;
            let one_step = evolve_pacs(&spec, &full, &probe)?;
            let semi = two_step
                .values()
                .iter()
                .zip(one_step.values())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            let semi_ok = semi < 1e-6;

            let resid = fokker_planck_residual(real(0.5), &ch, &grid, 1e-4)?;
            let resid_ok = resid < 1e-3;

            Ok((norm_ok && semi_ok && resid_ok, format!(
            "worst |integral - 1| = {:.2e}; semigroup max diff = {:.2e}; diffusion residual = {:.2e}",
            worst_norm, semi, resid
        )))
        })(),
    )
}

/// Run every criterion in order. Criterion 2 reuses 3 and 4 as its
/// pipeline cross-checks.
pub fn run_all() -> Vec<CriterionReport> {
    let c1 = criterion_1();
    let c3 = criterion_3();
    let c4 = criterion_4();
    let c2 = criterion_2_given(Some((&c3, &c4)));
    let mut out = vec![
        c1,
        c2,
        c3,
        c4,
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
    ];
    out.sort_by_key(|r| r.id);
    out
}
