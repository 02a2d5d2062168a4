//! Total derivatives, Euler–Lagrange equations, adjoint operators and the
//! exactness test on the jet space of a scalar field.

use std::error::Error;

use ktbrst::graded::ratio;
use ktbrst::jet::{adjoint, euler_lagrange, is_dh_exact, total_derivative, LinearDiffOp};
use ktbrst::{Density, Field, GradedPoly, MultiIndex, Parity};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let n = 2;
    let phi = Field::field("phi", Parity::Even);
    let dphi = |c| GradedPoly::var(phi.jet(MultiIndex::unit(n, c)));
    let p0 = GradedPoly::var(phi.var(n));

    // Wave equation with a quartic potential: L = ½(φ_t² − φ_x²) − ¼ φ⁴.
    let l = (dphi(0).pow(2) - dphi(1).pow(2)).scale(&ratio(1, 2)) - p0.pow(4).scale(&ratio(1, 4));
    let el = euler_lagrange(&Density::new(l.clone()), std::slice::from_ref(&phi));
    println!("L = {l}\nE(phi) = {}", el.get(&phi));

    // d_t(φ φ_x) is a total divergence, so its Euler–Lagrange form vanishes.
    let div = total_derivative(&p0.mul(&dphi(1)), 0);
    println!("d_t(phi phi_x) = {div}   exact: {}", is_dh_exact(&Density::new(div.clone())).exact);
    assert!(is_dh_exact(&Density::new(div)).exact);
    assert!(!is_dh_exact(&Density::new(l)).exact);

    // The adjoint of φ d_x is −d_x∘φ = −φ_x − φ d_x, and η∘η = id.
    let mut op = LinearDiffOp::new();
    op.insert(phi.clone(), MultiIndex::unit(n, 1), p0.clone());
    let eta = adjoint(&op);
    for ((f, idx), c) in &eta.coeffs {
        println!("η(f)^{{{f}, {idx}}} = {c}");
    }
    assert_eq!(adjoint(&eta), op);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
