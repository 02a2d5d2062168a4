//! Topological BF theories for several form degrees, including the ghost
//! tower counts and the full check report.

use std::error::Error;

use ktbrst::models::{build_bf, BFSpec};
use ktbrst::report::{run_checks, CheckKind};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for (n, p, q) in [(3, 1, 1), (4, 1, 2), (5, 2, 2)] {
        let m = build_bf(&BFSpec::new(n, p, q)?)?;
        let towers: Vec<String> = m.ghosts_by_stage().iter().map(|(k, g)| format!("stage {k}: {}", g.len())).collect();
        let report = run_checks(&m, &CheckKind::default_selection(), 2);
        let t = report.tally();
        println!("{:<12} fields {:>2}  ghosts [{}]  {} pass, {} fail", m.name, m.original_fields().len(), towers.join(", "), t.pass, t.fail);
        assert!(report.all_passed());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
