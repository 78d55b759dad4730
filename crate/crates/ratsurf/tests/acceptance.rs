//! The full acceptance suite: one line per criterion.
//!
//! Criterion 11 is known to fail: the dihedral group of the hexagon has three
//! edge-transitive subgroups (C6, D12 and the S3 generated by the rotation of
//! order 3 together with the vertex reflections), not two. The run prints the
//! failure and only tolerates that one.

use ratsurf::acceptance::{run_all, CRITERIA, DEFAULT_SEED};
use ratsurf::Exec;

const KNOWN_FAILURES: &[usize] = &[11];

fn main() {
    let reports = run_all(Exec::default(), DEFAULT_SEED);
    assert_eq!(reports.len(), CRITERIA);
    println!();
    for r in &reports {
        println!("{}", r.line());
    }
    let failed: Vec<usize> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    let unexpected: Vec<usize> = failed.iter().copied().filter(|id| !KNOWN_FAILURES.contains(id)).collect();
    println!(
        "acceptance: {} of {CRITERIA} passed; failed {failed:?}; known failures {KNOWN_FAILURES:?}",
        CRITERIA - failed.len()
    );
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
