//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line with the criterion's detail. Run with `--nocapture` to see every
//! line even on success.

use hwlab_core::verify;

fn check(report: hwlab_core::verify::CriterionReport) {
    println!("{}", report.line());
    assert!(report.passed, "{}", report.line());
}

#[test]
fn criterion_1_lp_vs_vertex_enumeration() {
    check(verify::criterion_1());
}

#[test]
fn criterion_2_dual_certificates() {
    check(verify::criterion_2());
}

#[test]
fn criterion_3_anticoncentration_lower_bound() {
    check(verify::criterion_3());
}

#[test]
fn criterion_4_mod_class_point_mass() {
    check(verify::criterion_4());
}

#[test]
fn criterion_5_pipeline_certification() {
    check(verify::criterion_5());
}

#[test]
fn criterion_6_concentrated_support() {
    check(verify::criterion_6());
}

#[test]
fn criterion_7_noise_kernels() {
    check(verify::criterion_7());
}

#[test]
fn criterion_8_analytic_facts() {
    check(verify::criterion_8());
}

#[test]
fn criterion_9_separations() {
    check(verify::criterion_9());
}

#[test]
fn criterion_10_certificates() {
    check(verify::criterion_10());
}
