//! One PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.

use experiments::run_acceptance;

fn main() {
    let results = run_acceptance();
    for r in &results {
        println!("{}", r.line());
    }
    let ids: Vec<&str> = results.iter().map(|r| r.id.as_str()).collect();
    assert_eq!(ids, ["A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10", "A11"]);
    let failed: Vec<&str> = results.iter().filter(|r| !r.pass).map(|r| r.id.as_str()).collect();
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
