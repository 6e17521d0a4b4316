//! Acceptance suite: every criterion runs at its stated scale and tolerance
//! (exact arithmetic throughout) and prints one pass/fail line. Criteria
//! needing the command-line binary live in the binary crate's own suite.

use trianguline::check::{run_suite, SuiteOptions};

fn run(criterion: &str, suite: &str, opts: SuiteOptions, budget_secs: Option<u64>) {
    let start = std::time::Instant::now();
    let report = run_suite(suite, &opts).expect("suite runs");
    let elapsed = start.elapsed();
    let status = if report.pass { "PASS" } else { "FAIL" };
    println!(
        "{status} {criterion} [{suite}, {} ms]: {}",
        report.elapsed_ms,
        report.details.join("; ")
    );
    assert!(
        report.pass,
        "{criterion} failed: {}",
        report.counterexample.unwrap_or_default()
    );
    if let Some(budget) = budget_secs {
        assert!(
            elapsed.as_secs() < budget,
            "{criterion} exceeded its {budget} s budget: {elapsed:?}"
        );
    }
}

#[test]
fn criterion_01_kl_cross_validation() {
    // both algorithms on all of S_4 and S_5; S_3 all ones; unitriangularity
    run(
        "criterion 1 (KL cross-validation)",
        "kl",
        SuiteOptions::default(),
        Some(60),
    );
}

#[test]
fn criterion_02_displacement_rank_consistency() {
    run(
        "criterion 2 (displacement-rank consistency)",
        "dw",
        SuiteOptions::default(),
        Some(60),
    );
}

#[test]
fn criterion_03_weight_map_relation() {
    run(
        "criterion 3 (weight-map twist relation)",
        "kappa",
        SuiteOptions {
            samples: Some(100),
            seed: 7,
            ..Default::default()
        },
        None,
    );
}

#[test]
fn criterion_04_relative_position() {
    run(
        "criterion 4 (relative position vs oracle)",
        "relpos",
        SuiteOptions {
            samples: Some(200),
            seed: 11,
            ..Default::default()
        },
        None,
    );
}

#[test]
fn criterion_05_schubert_tangents() {
    run(
        "criterion 5 (fixed-point tangents)",
        "schubert",
        SuiteOptions::default(),
        Some(300),
    );
}

#[test]
fn criterion_06_tangent_bounds() {
    run(
        "criterion 6 (tangent bounds)",
        "tangent",
        SuiteOptions::default(),
        None,
    );
}

#[test]
fn criterion_07_singularity_criterion() {
    run(
        "criterion 7 (singularity criterion)",
        "singular",
        SuiteOptions::default(),
        None,
    );
}

#[test]
fn criterion_08_cycle_identities() {
    run(
        "criterion 8 (cycle identities)",
        "cycles",
        SuiteOptions::default(),
        None,
    );
}

#[test]
fn criterion_09_companion_sets() {
    run(
        "criterion 9 (companion sets)",
        "companions",
        SuiteOptions::default(),
        None,
    );
}

#[test]
fn criterion_10_induction_replay_and_diamond() {
    run(
        "criterion 10a (induction replay)",
        "replay",
        SuiteOptions::default(),
        None,
    );
    run(
        "criterion 10b (diamond uniqueness)",
        "diamond",
        SuiteOptions::default(),
        None,
    );
}

#[test]
fn criterion_11_conjecture_probe() {
    run(
        "criterion 11a (exact rank-two probe)",
        "conjinter-n2",
        SuiteOptions {
            samples: Some(50),
            seed: 3,
            ..Default::default()
        },
        None,
    );
    run(
        "criterion 11b (rank-three degeneration search)",
        "conjinter-n3",
        SuiteOptions {
            samples: Some(100),
            seed: 5,
            ..Default::default()
        },
        None,
    );
}
