//! Proper solutions: the antibracket, the classical master equation and the
//! four equivalent characterizations, with and without the ghost term ξ.

use std::error::Error;

use ktbrst::brst::{
    antibracket, build_extended_lagrangian, build_proper_solution, check_master_equation, equivalence_suite,
};
use ktbrst::models::builtin;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let m = builtin("yang-mills:su2:n3")?;
    let le = build_extended_lagrangian(&m);
    let lp = build_proper_solution(&m)?;
    println!("L_e: {} terms, L_E: {} terms", le.len(), lp.len());
    println!("{{L_E, L_E}} has {} terms before reduction to its Euler–Lagrange form", antibracket(&m, &lp, &lp)?.len());

    for (label, p) in [("L_E", &lp), ("L_e", &le)] {
        println!("{label}: master equation {}", check_master_equation(&m, p)?.status);
        let suite = equivalence_suite(&m, p)?;
        for (id, v) in &suite {
            println!("  {id}: {}", v.status);
        }
        // The four conditions always agree.
        assert!(suite.windows(2).all(|w| w[0].1.status == w[1].1.status));
    }
    assert!(check_master_equation(&m, &lp)?.passed());
    assert!(check_master_equation(&m, &le)?.failed());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
