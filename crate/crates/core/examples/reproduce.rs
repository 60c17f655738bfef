//! Runs every headline check and prints a table.

use sleeping_kelly::reproduce::run_all;

fn main() {
    let report = run_all();
    for c in &report.claims {
        println!(
            "{:<26} {:<4} {:>7.3}s  {}",
            c.id,
            if c.passed { "ok" } else { "FAIL" },
            c.elapsed.as_secs_f64(),
            c.description
        );
    }
    std::process::exit(if report.all_passed { 0 } else { 1 });
}
