//! Shared state for the acceptance suite: one validator per process so the
//! studies behind several criteria run once.

use std::io::Write;
use std::sync::OnceLock;

use adhoc_progress::validation::{Criterion, CriterionReport, ValidationConfig, Validator};

pub fn validator() -> &'static Validator {
    static VALIDATOR: OnceLock<Validator> = OnceLock::new();
    VALIDATOR.get_or_init(|| Validator::new(ValidationConfig::default()))
}

/// Runs `criterion` and writes its pass/fail line and details to stderr,
/// bypassing the test harness's output capture.
pub fn run_and_report(criterion: Criterion) -> CriterionReport {
    let report = validator()
        .run(criterion)
        .unwrap_or_else(|e| panic!("{criterion} could not be evaluated: {e}"));
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "\n{}", report.line());
    for line in &report.details {
        let _ = writeln!(err, "    {criterion} {line}");
    }
    report
}
