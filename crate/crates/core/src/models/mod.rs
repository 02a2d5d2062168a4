//! Built-in, component-expanded models: Yang–Mills theory of a Lie
//! superalgebra, topological BF theory, and metric-affine gravity.

mod bf;
mod gravity;
mod lie;
mod yang_mills;

use thiserror::Error;

pub use bf::{bf_lagrangian, build_bf, increasing_tuples, permutation_sign, BFFields, BFSpec, FormComponents};
pub use gravity::{build_gravity, build_gravity_with, gravity_gauge_components, gravity_xi, GravityFields};
pub use lie::LieSuperAlgebraSpec;
pub use yang_mills::{
    build_yang_mills, field_strength, minkowski, yang_mills_lagrangian, yang_mills_xi, YangMillsFields,
};

use crate::brst::{Model, ModelError};
use crate::derivation::DerivationError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelsError {
    #[error("invalid Lie superalgebra: {0}")]
    Algebra(String),
    #[error("invalid model parameters: {0}")]
    Invalid(String),
    #[error("unknown built-in model `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl From<DerivationError> for ModelsError {
    fn from(e: DerivationError) -> Self {
        ModelsError::Model(ModelError::Derivation(e))
    }
}

/// Names accepted by [`builtin`], with a one-line description each.
pub const BUILTIN_MODELS: &[(&str, &str)] = &[
    ("yang-mills:su2:n3", "Yang–Mills su(2) on 3-dimensional Minkowski space"),
    ("bf:n4p1q2", "topological BF theory, n = 4, p = 1, q = 2"),
    ("gravity:n4", "metric-affine gravity, n = 4, zero placeholder Lagrangian"),
];

/// Resolves a built-in model by name. Besides the listed defaults,
/// `yang-mills:su2:nN`, `yang-mills:abelianM:nN`, `bf:nNpPqQ` and
/// `gravity:nN` are accepted.
pub fn builtin(name: &str) -> Result<Model, ModelsError> {
    let unknown = || ModelsError::Unknown(name.to_string());
    let parts: Vec<&str> = name.split(':').collect();
    match parts.as_slice() {
        ["yang-mills", alg, dim] => {
            let n = parse_prefixed(dim, 'n').ok_or_else(unknown)?;
            let alg = match *alg {
                "su2" => LieSuperAlgebraSpec::su2(),
                other => {
                    let m = other.strip_prefix("abelian").and_then(|s| s.parse().ok()).ok_or_else(unknown)?;
                    let mut a = LieSuperAlgebraSpec::abelian(m);
                    a.name = other.to_string();
                    a
                }
            };
            build_yang_mills(&alg, n, &minkowski(n))
        }
        ["bf", rest] => {
            let (n, rest) = rest.strip_prefix('n').and_then(|s| s.split_once('p')).ok_or_else(unknown)?;
            let (p, q) = rest.split_once('q').ok_or_else(unknown)?;
            let parse = |s: &str| s.parse::<usize>().map_err(|_| unknown());
            build_bf(&BFSpec::new(parse(n)?, parse(p)?, parse(q)?)?)
        }
        ["gravity", dim] => build_gravity(parse_prefixed(dim, 'n').ok_or_else(unknown)?),
        _ => Err(unknown()),
    }
}

fn parse_prefixed(s: &str, prefix: char) -> Option<usize> {
    s.strip_prefix(prefix)?.parse().ok()
}
