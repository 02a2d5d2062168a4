//! Reading a model from `.ktb` source, reporting diagnostics, and rendering
//! a model back to source.

use std::error::Error;

use ktbrst::dsl::{parse_model, render_model};
use ktbrst::report::{run_checks, CheckKind};

const SOURCE: &str = r#"
model "chern-simons-abelian"
description "abelian Chern–Simons theory on R^3"
base 3 [t, x, y]
field a_t even
antifield a_t_bar odd of a_t
field a_x even
antifield a_x_bar odd of a_x
field a_y even
antifield a_y_bar odd of a_y
ghost c odd stage 0
antifield c_bar even of c
lagrangian = a_t*(a_y[x] - a_x[y]) + a_x*(a_t[y] - a_y[t]) + a_y*(a_x[t] - a_t[x])
stage 0 { c = -d(a_t_bar, t) - d(a_x_bar, x) - d(a_y_bar, y) }
"#;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let parsed = parse_model(SOURCE)?;
    let m = parsed.model;
    let report = run_checks(&m, &CheckKind::default_selection(), 1);
    println!("{}: {} checks, all passed: {}", m.name, report.records.len(), report.all_passed());
    assert!(report.all_passed());

    let rendered = render_model(&m);
    println!("{rendered}");
    assert_eq!(parse_model(&rendered)?.model, m);

    // Diagnostics carry a position and a category.
    let err = parse_model("base 3\nfield a even\nlagrangian = a * b\n").unwrap_err();
    println!("error: {err}");
    let warned = parse_model("base 1\nfield c odd\nlagrangian = c^2\n")?;
    for w in &warned.warnings {
        println!("warning: {w}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
