//! Acceptance suite: one test per criterion, each printing its pass/fail
//! line with the measured quantities (visible with `--nocapture`).  The same
//! checks back the CLI `verify-all` command.

use plunge::verify;

fn check(result: verify::CriterionResult) {
    println!("{}", result.line());
    assert!(result.passed, "{}", result.line());
}

#[test]
fn c01_trace_identity() {
    check(verify::c01_trace_identity());
}

#[test]
fn c02_trs2_cross_oracle() {
    check(verify::c02_trs2_cross_oracle());
}

#[test]
fn c03_asymptotic_series() {
    check(verify::c03_asymptotic_series());
}

#[test]
fn c04_slepian() {
    check(verify::c04_slepian());
}

#[test]
fn c05_karnik_grid() {
    check(verify::c05_karnik_grid());
}

#[test]
fn c06_tensor_sandwich() {
    check(verify::c06_tensor_sandwich());
}

#[test]
fn c07_jr_tail_bound() {
    check(verify::c07_jr_tail_bound());
}

#[test]
fn c08_ir_decay() {
    check(verify::c08_ir_decay());
}

#[test]
fn c09_schatten_count() {
    check(verify::c09_schatten_count());
}

#[test]
fn c10_whitney_invariants() {
    check(verify::c10_whitney_invariants());
}

#[test]
fn c11_geometry_censuses() {
    check(verify::c11_geometry_censuses());
}

#[test]
fn c12_area_law_slope() {
    check(verify::c12_area_law_slope());
}

#[test]
fn c13_admissibility_classifier() {
    check(verify::c13_admissibility_classifier());
}

#[test]
fn c14_counterexample_demo() {
    check(verify::c14_counterexample_demo());
}

#[test]
fn c15_envelope_stability() {
    check(verify::c15_envelope_stability());
}
