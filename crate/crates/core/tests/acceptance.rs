//! The acceptance gate: every numbered criterion runs, prints one line,
//! and must pass. Run with `--nocapture` to watch the lines appear as the
//! criteria finish.

use trop_core::report::run_all;

#[test]
fn acceptance() {
    let results = run_all();
    for r in &results {
        println!("{}", r.line());
    }
    let failed: Vec<String> = results.iter().filter(|r| !r.passed).map(|r| r.line()).collect();
    assert!(
        failed.is_empty(),
        "{} of 10 criteria failed:\n{}",
        failed.len(),
        failed.join("\n")
    );
}
