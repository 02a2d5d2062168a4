//! Graded jet calculus and verification of the Koszul–Tate / BRST data of
//! degenerate Lagrangian field theories.
//!
//! ```
//! use ktbrst::models::builtin;
//! use ktbrst::report::{run_checks, CheckKind};
//!
//! let model = builtin("bf:n3p1q1").unwrap();
//! let report = run_checks(&model, &[CheckKind::Noether, CheckKind::KtNilpotency, CheckKind::Master], 1);
//! assert!(report.all_passed());
//! ```

pub mod graded;
pub mod jet;
pub mod derivation;
pub mod brst;
pub mod models;
pub mod report;
pub mod dsl;

pub use graded::{Density, Field, GradedPoly, JetVar, MultiIndex, Parity};
