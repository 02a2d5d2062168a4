//! Yang–Mills theory for a user-supplied Lie algebra: su(2) in four
//! dimensions, with the closed-form field strength and ghost term.

use std::error::Error;

use ktbrst::models::{build_yang_mills, field_strength, minkowski, LieSuperAlgebraSpec, YangMillsFields};
use ktbrst::report::{run_checks, CheckKind};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let alg = LieSuperAlgebraSpec::su2();
    let n = 4;
    let m = build_yang_mills(&alg, n, &minkowski(n))?;
    let f = YangMillsFields::new(&alg, n);
    println!("F^1_01 = {}", m.render_poly(&field_strength(&alg, &f, n, 0, 0, 1)));
    println!("L has {} terms", m.lagrangian.len());
    if let Some(xi) = &m.brst_xi {
        for (ghost, comp) in xi.components() {
            println!("ξ({}) = {}", ghost.name, m.render_poly(comp));
        }
    }
    let report = run_checks(&m, &[CheckKind::Noether, CheckKind::Gauge, CheckKind::Brst, CheckKind::Master], 4);
    for r in &report.records {
        println!("{:<24} {}", r.id, r.status);
    }
    assert!(report.all_passed());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
