//! Assembling a gauge model by hand (Maxwell theory in two dimensions),
//! checking its Noether identity and the nilpotency of its Koszul–Tate
//! operator.

use std::error::Error;

use ktbrst::brst::{build_kt_operator, check_noether_identities, nilpotency_verdict, Generator, Model, NoetherStage};
use ktbrst::graded::ratio;
use ktbrst::{Field, GradedPoly, MultiIndex, Parity};

pub fn maxwell() -> Result<Model, Box<dyn Error>> {
    let n = 2;
    let a: Vec<Field> = (0..n).map(|l| Field::field(format!("a{l}"), Parity::Even)).collect();
    let a_bar: Vec<Field> = a.iter().map(|f| Field::antifield_of(format!("{}_bar", f.name), f)).collect();
    let c = Field::ghost("c", Parity::Odd, 0);
    let c_bar = Field::antifield_of("c_bar", &c);
    let d = |f: &Field, l| GradedPoly::var(f.jet(MultiIndex::unit(n, l)));

    let f01 = d(&a[1], 0) - d(&a[0], 1);
    let lagrangian = f01.pow(2).scale(&ratio(1, 2));
    // Δ = −d_λ ā^λ, the generator dual to a_λ ↦ a_λ + c_λ.
    let delta: GradedPoly = (0..n).map(|l| -d(&a_bar[l], l)).sum();
    let stage0 = NoetherStage {
        stage: 0,
        generators: vec![Generator { ghost: c.clone(), antifield: c_bar.clone(), density: delta }],
    };
    let mut fields = Vec::new();
    for (f, b) in a.iter().zip(&a_bar) {
        fields.push(f.clone());
        fields.push(b.clone());
    }
    fields.extend([c, c_bar]);
    Ok(Model::new("maxwell", "Maxwell theory on R^2", n, vec!["t".into(), "x".into()], fields, lagrangian, vec![stage0], None)?)
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let m = maxwell()?;
    println!("L = {}", m.render_poly(&m.lagrangian));
    for (ghost, v) in check_noether_identities(&m)? {
        println!("identity for {ghost}: {}", v.status);
        assert!(v.passed());
    }
    let kt = build_kt_operator(&m)?;
    for (f, comp) in kt.components() {
        println!("δ({}) = {}", f.name, m.render_poly(comp));
    }
    assert!(nilpotency_verdict(&kt).passed());

    // A wrong generator makes both the identity and δ² fail.
    let mut bad = m.clone();
    let g = &mut bad.stages[0].generators[0];
    g.density = g.density.filter(|mono| !mono.render(&m.coords).contains("a1"));
    let v = &check_noether_identities(&bad)?[0].1;
    println!("broken generator: {} ({})", v.status, v.witnesses[0].value);
    assert!(v.failed() && nilpotency_verdict(&build_kt_operator(&bad)?).failed());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
