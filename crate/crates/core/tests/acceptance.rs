//! Acceptance suite: one test per verification criterion, each printing its
//! pass/fail line (visible with `--nocapture`).
//!
//! Criterion 7 is a knowingly red check: its small-n clause demands 1e-4
//! agreement at n = 0.01 while the exact first-order remainder of the
//! threshold map is (3/2) n^2 + O(n^3) = 1.477e-4 there. The bound is kept
//! as stated rather than loosened; see the criterion's printed details.

use pacs_wigner::verify;

fn check(report: verify::CriterionReport) {
    println!("{}", report.line());
    assert!(report.passed, "{}", report.line());
}

#[test]
fn criterion_1_threshold_formula_m1() {
    check(verify::criterion_1());
}

#[test]
fn criterion_2_threshold_claim_m2() {
    check(verify::criterion_2());
}

#[test]
fn criterion_3_exact_vs_quadrature() {
    check(verify::criterion_3());
}

#[test]
fn criterion_4_scaling_identity() {
    check(verify::criterion_4());
}

#[test]
fn criterion_5_negativity_anchors() {
    check(verify::criterion_5());
}

#[test]
fn criterion_6_curve_shape() {
    check(verify::criterion_6());
}

#[test]
fn criterion_7_threshold_asymptotics() {
    check(verify::criterion_7());
}

#[test]
fn criterion_8_gate_overlaps() {
    check(verify::criterion_8());
}

#[test]
fn criterion_9_conservation() {
    check(verify::criterion_9());
}
