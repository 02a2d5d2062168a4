//! Graded derivations: prolongation to jets, variational symmetries and
//! nilpotency.

use std::collections::BTreeMap;
use std::error::Error;

use ktbrst::derivation::{is_nilpotent, NilpotencyVerdict, is_variational_symmetry, Chirality, Derivation};
use ktbrst::jet::total_derivative;
use ktbrst::{Density, Field, GradedPoly, MultiIndex, Parity};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let n = 1;
    let q = Field::field("q", Parity::Even);
    let theta = Field::field("theta", Parity::Odd);
    let qv = GradedPoly::var(q.var(n));
    let qt = GradedPoly::var(q.jet(MultiIndex::unit(n, 0)));
    let th = GradedPoly::var(theta.var(n));

    // Free particle L = q_t² and the rigid shift q ↦ q + const.
    let l = Density::new(qt.pow(2));
    let shift = Derivation::infer(Chirality::Left, BTreeMap::from([(q.clone(), GradedPoly::one())]))?;
    println!("shift: {shift}, parity {}", shift.parity());
    let verdict = is_variational_symmetry(&shift, &l);
    println!("variational symmetry of q_t^2: {}", verdict.holds);
    assert!(verdict.holds);

    // A potential term breaks it; the residual names the offending field.
    let massive = Density::new(qt.pow(2) - qv.pow(2));
    let broken_symmetry = is_variational_symmetry(&shift, &massive);
    println!("with a mass term: {} (residual {:?})", broken_symmetry.holds, broken_symmetry.residual.values().map(|p| p.to_string()).collect::<Vec<_>>());
    assert!(!broken_symmetry.holds);

    // The odd derivation q ↦ θ is prolonged to jets and squares to zero.
    let odd = Derivation::infer(Chirality::Left, BTreeMap::from([(q.clone(), th.clone())]))?;
    println!("{odd}: q_t^2 ↦ {}", odd.apply(l.coeff()));
    assert_eq!(odd.apply(&total_derivative(&qv, 0)), total_derivative(&odd.apply(&qv), 0));
    assert!(is_nilpotent(&odd).holds());

    // Adding θ ↦ q breaks nilpotency: the square maps q to q.
    let broken = Derivation::infer(Chirality::Left, BTreeMap::from([(q.clone(), th), (theta.clone(), qv)]))?;
    match is_nilpotent(&broken) {
        NilpotencyVerdict::Fails(map) => {
            for (f, p) in map {
                println!("with θ ↦ q: square sends {} to {p}", f.name);
            }
        }
        other => return Err(format!("expected a failure, got {other:?}").into()),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
