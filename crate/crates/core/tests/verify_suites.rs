use ps12::verify::{run, Suite};

fn assert_suite(suite: Suite) {
    let checks = run(suite).unwrap();
    for c in &checks {
        println!("{} / {}: {} ({})", suite.name(), c.name, if c.passed { "ok" } else { "FAILED" }, c.detail);
    }
    assert!(checks.iter().all(|c| c.passed));
}

#[test]
fn rules_suite() {
    assert_suite(Suite::Rules);
}

#[test]
fn nullity_suite() {
    assert_suite(Suite::Nullity);
}

#[test]
fn reproduction_suite() {
    assert_suite(Suite::Reproduction);
}

#[test]
fn smoothness_suite() {
    assert_suite(Suite::Smoothness);
}

#[test]
fn examples_suite() {
    assert_suite(Suite::Examples);
}
