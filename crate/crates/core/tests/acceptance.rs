//! Acceptance suite: every exit criterion at its stated tolerance, one
//! pass/fail line per criterion (run with `--nocapture` to see the table).

use lorentz_seq::verify::{self, SuiteReport, VerifyParams};

fn params() -> VerifyParams {
    VerifyParams {
        seed: 7,
        trials: None,
        truncation: None,
    }
}

fn report(criterion: &str, reps: &[SuiteReport]) {
    let pass = reps.iter().all(|r| r.pass);
    let trials: u64 = reps.iter().map(|r| r.trials).sum();
    let max_residual = reps.iter().fold(0.0f64, |m, r| m.max(r.max_residual));
    println!(
        "{} {criterion}: trials={trials} max_residual={max_residual:.3e}",
        if pass { "PASS" } else { "FAIL" },
    );
    for r in reps {
        assert!(
            r.pass,
            "{criterion} failed in {} ({} failures): {:?}",
            r.label, r.failures, r.details
        );
    }
}

#[test]
fn criterion_01_isometry() {
    let rep = verify::isometry_battery(&params()).unwrap();
    report(
        "criterion-01 isometry gamma1 = d1(v) (exact wA/wC, 1e-9 wB)",
        &[rep],
    );
}

#[test]
fn criterion_02_fundamental_identity() {
    let rep = verify::fundamental_identity_battery(&params()).unwrap();
    report(
        "criterion-02 phi(n) = sum v(i) for n <= 100 (exact wA/wC, 1e-9 wB)",
        &[rep],
    );
}

#[test]
fn criterion_03_duality() {
    let holder = verify::holder_bound_battery(&params()).unwrap();
    let attain = verify::norming_attainment_battery(&params()).unwrap();
    report(
        "criterion-03 duality: Holder bound and exact norming attainment",
        &[holder, attain],
    );
}

#[test]
fn criterion_04_norming_element() {
    let rep = verify::norming_element_battery(&params()).unwrap();
    report(
        "criterion-04 norming element: unit norm and pairing within 1e-9",
        &[rep],
    );
}

#[test]
fn criterion_05_extreme_points() {
    let rep = verify::extreme_battery(&params()).unwrap();
    report(
        "criterion-05 extreme points: classifier vs midpoint oracle (budget 1e5)",
        &[rep],
    );
}

#[test]
fn criterion_06_strict_convexity() {
    let rep = verify::sc_battery(&params()).unwrap();
    report(
        "criterion-06 strict convexity: bundles exact, converse margin 1e-12",
        &[rep],
    );
}

#[test]
fn criterion_07_monotonicity_oc() {
    let oc = verify::oc_battery(&params()).unwrap();
    let sm = verify::sm_battery(&params()).unwrap();
    report(
        "criterion-07 OC/SM dichotomies: bundles exact, truncation tails below 1e-6",
        &[oc, sm],
    );
}

#[test]
fn criterion_08_rearrangement_convergence() {
    let rep = verify::rearrangement_convergence_battery(&params()).unwrap();
    report(
        "criterion-08 rearrangement convergence: 1000 trials, final gap below 1e-8",
        &[rep],
    );
}

#[test]
fn criterion_09_additivity_equivalence() {
    let rep = verify::additivity_battery(&params()).unwrap();
    report(
        "criterion-09 additivity equivalence: exhaustive, zero discrepancies",
        &[rep],
    );
}

#[test]
fn criterion_10_embedding() {
    let rep = verify::embedding_battery(&params()).unwrap();
    report(
        "criterion-10 embedding constant 1: gap >= -1e-12, e1 tight within 1e-9",
        &[rep],
    );
}

#[test]
fn criterion_11_projection() {
    let rep = verify::projection_battery(&params()).unwrap();
    report(
        "criterion-11 projection: oracle gap <= 1e-6, coordinate projections exact",
        &[rep],
    );
}

#[test]
fn criterion_12_dual_classifiers() {
    let extreme = verify::extreme_dual_battery(&params()).unwrap();
    let sg = verify::smooth_gamma_battery(&params()).unwrap();
    let sp = verify::smooth_predual_battery(&params()).unwrap();
    let sd = verify::smooth_dual_battery(&params()).unwrap();
    report(
        "criterion-12 dual/smooth classifiers: fixtures exact, verdicts permutation-invariant",
        &[extreme, sg, sp, sd],
    );
}
