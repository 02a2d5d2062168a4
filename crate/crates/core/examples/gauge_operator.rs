//! The gauge operator of a reducible theory, stage by stage, and the gauge
//! symmetry conditions it satisfies.

use std::error::Error;

use ktbrst::brst::{build_gauge_operator, check_gauge_symmetry_conditions, check_stage_identity, nilpotency_verdict};
use ktbrst::models::{build_bf, BFSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let m = build_bf(&BFSpec::new(4, 1, 2)?)?;
    println!("{}: {} fields, reducibility {:?}", m.name, m.original_fields().len(), m.reducibility());
    let u = build_gauge_operator(&m)?;
    for (k, part) in u.parts.iter().enumerate() {
        println!("u_({k}):");
        for (f, comp) in part.components().iter().take(3) {
            println!("  {} ↦ {}", f.name, m.render_poly(comp));
        }
    }
    for (id, v) in check_gauge_symmetry_conditions(&m, &u)? {
        println!("{id}: {} {}", v.status, v.note.as_deref().unwrap_or(""));
        assert!(v.passed());
    }
    for (bar, v) in check_stage_identity(&m, 1)? {
        println!("stage-1 identity {bar}: {}", v.status);
    }
    // For BF the gauge operator is the exterior derivative down the ghost
    // towers and squares to zero on its own.
    assert!(nilpotency_verdict(&u.total).passed());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
