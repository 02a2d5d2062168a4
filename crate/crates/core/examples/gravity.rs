//! Metric-affine gravity: the BRST operator and proper solution do not
//! depend on the Lagrangian, so they are checked with a placeholder.

use std::error::Error;

use ktbrst::models::build_gravity;
use ktbrst::report::{run_checks, CheckKind};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let m = build_gravity(2)?;
    println!("{}: {}", m.name, m.description);
    for note in &m.notes {
        println!("note: {note}");
    }
    let report = run_checks(&m, &CheckKind::default_selection(), 2);
    for r in &report.records {
        println!("{:<30} {}", r.id, r.status);
    }
    assert!(report.all_passed());
    assert!(report.tally().not_evaluated > 0);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
