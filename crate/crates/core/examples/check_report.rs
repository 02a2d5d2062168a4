//! Running a selection of checks in parallel and emitting the report as text
//! and as structured JSON.

use std::error::Error;

use ktbrst::models::builtin;
use ktbrst::report::{comparable_json, emit_report, parse_selection, run_checks, Format};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let m = builtin("bf:n3p1q1")?;
    let selection = parse_selection("noether,kt,brst,master")?;
    let report = run_checks(&m, &selection, 4);
    print!("{}", emit_report(&report, Format::Text));

    let json: serde_json::Value = serde_json::from_str(&emit_report(&report, Format::Structured))?;
    println!("records: {}", json["comparable"]["records"].as_array().map_or(0, Vec::len));
    println!("timing keys: {:?}", json["timing"].as_object().map(|o| o.keys().cloned().collect::<Vec<_>>()));

    // The comparable section does not depend on timing or thread count.
    let again = run_checks(&m, &selection, 1);
    assert_eq!(comparable_json(&report), comparable_json(&again));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
