//! Runner for the acceptance suite: each criterion is a function returning
//! a one-line detail on success or the reason for failure.

use std::panic;
use std::time::Instant;

pub type Outcome = Result<String, String>;

/// A named acceptance criterion.
pub type Check = (&'static str, fn() -> Outcome);

pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs every criterion, printing one PASS/FAIL line each, and returns the
/// number of failures. A panicking criterion counts as failed.
pub fn run_all(criteria: &[Check]) -> usize {
    let mut failed = 0;
    for &(name, check) in criteria {
        let t = Instant::now();
        let r = panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("criterion {name}: PASS ({detail}) [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({why}) [{secs:.1}s]");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    failed
}
