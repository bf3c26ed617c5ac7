use adhoc_progress::validation::Criterion;
use adhoc_progress_validation::run_and_report;

fn check(criterion: Criterion) {
    let report = run_and_report(criterion);
    assert!(report.passed, "{}", report.line());
}

#[test]
fn a1_capture_probability() {
    check(Criterion::A1);
}

#[test]
fn a2_nfp_closed_form() {
    check(Criterion::A2);
}

#[test]
fn a3_msr_upper_bound() {
    check(Criterion::A3);
}

#[test]
fn a4_lower_bound_ordering() {
    check(Criterion::A4);
}

#[test]
fn a5_optimal_contention() {
    check(Criterion::A5);
}

#[test]
fn a6_antenna_gain() {
    check(Criterion::A6);
}

#[test]
fn a7_density_scaling() {
    check(Criterion::A7);
}

#[test]
fn a8_downdate_equivalence() {
    check(Criterion::A8);
}

#[test]
fn a9_quadrature_oracles() {
    check(Criterion::A9);
}
