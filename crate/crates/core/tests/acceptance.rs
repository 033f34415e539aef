//! Acceptance battery: one line per criterion, non-zero exit on any failure.
//!
//! Tolerances are pinned in `harnack::verify`.

use harnack::verify::acceptance_suite;

fn main() {
    let checks = acceptance_suite();
    for c in &checks {
        println!("{}", c.line());
    }
    let failed: Vec<usize> = checks.iter().filter(|c| !c.pass).map(|c| c.id).collect();
    println!("acceptance: {} of {} criteria pass", checks.len() - failed.len(), checks.len());
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
