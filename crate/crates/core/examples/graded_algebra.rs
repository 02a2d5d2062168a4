//! Grassmann-graded polynomials: Koszul signs, odd nilpotency and left/right
//! partial derivatives.

use std::error::Error;

use ktbrst::graded::ratio;
use ktbrst::{Field, GradedPoly, Parity};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let n = 1;
    let x = GradedPoly::var(Field::field("x", Parity::Even).var(n));
    let psi = GradedPoly::var(Field::field("psi", Parity::Odd).var(n));
    let chi = GradedPoly::var(Field::field("chi", Parity::Odd).var(n));

    // Odd variables anticommute; canonical ordering records the sign.
    let a = psi.mul(&chi);
    let b = chi.mul(&psi);
    println!("psi*chi = {a}\nchi*psi = {b}");
    assert_eq!(a, -b);
    assert!(psi.mul(&psi).is_zero());

    let p = x.pow(2).mul(&psi).mul(&chi).scale(&ratio(3, 2)) + x.clone();
    println!("p = {p}   (parity {:?})", p.parity());

    // Left and right derivatives differ by the sign of the remaining factor.
    let v = Field::field("psi", Parity::Odd).var(n);
    println!("∂→p/∂psi = {}", p.partial_left(&v));
    println!("p∂←/∂psi = {}", p.partial_right(&v));
    assert_eq!(p.partial_left(&v), -p.partial_right(&v));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
