//! Runs the quick invariant suite, then again against a deliberately broken
//! norm to show the equivalence checks catching it.

use std::io;

use aqrm::verify::{flipped_norm_terms, verify, verify_with, VerifyLevel};

fn main() -> io::Result<()> {
    let report = verify(VerifyLevel::Quick);
    report.write_csv(&mut io::stdout().lock())?;
    println!("all passed: {}\n", report.passed());

    let broken = verify_with(VerifyLevel::Quick, flipped_norm_terms);
    for p in broken.failed() {
        println!("{} failed {} of {} cases", p.property, p.failures, p.cases);
    }
    Ok(())
}
