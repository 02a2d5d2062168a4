//! Vertical graded derivations, stored by their zero-jet components and
//! prolonged on demand: a jet variable `s^A_Λ` is sent to `d_Λ υ^A`.
//!
//! Right derivations `∂←_A υ^A` are evaluated through their associated left
//! derivation `υ^l = (−1)^{[υ][A]} υ^A ∂_A`, using `υ←(f) = (−1)^{[υ][f]} υ^l(f)`
//! on each parity-homogeneous part of `f`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::graded::{Density, Field, GradedPoly, Homogeneity, Parity};
use crate::jet::{self, is_dh_exact, total_derivative_multi};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Chirality {
    Left,
    Right,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DerivationError {
    #[error("component on `{field}` is not parity-homogeneous")]
    MixedComponentParity { field: String },
    #[error("component on `{field}` is not homogeneous in total ghost number")]
    MixedComponentGhost { field: String },
    #[error("component on `{field}` shifts parity by {found}, expected {expected}")]
    ParityShift {
        field: String,
        expected: Parity,
        found: Parity,
    },
    #[error("component on `{field}` shifts total ghost number by {found}, expected {expected}")]
    GhostShift {
        field: String,
        expected: i32,
        found: i32,
    },
    #[error("cannot add derivations of different chirality or parity")]
    IncompatibleSum,
}

/// A vertical contact graded derivation `υ = υ^A ∂_A`.
///
/// `ghost_shift` is measured in total ghost number `gh − Ant`, the grading
/// that every field-antifield construction preserves.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Derivation {
    components: BTreeMap<Field, GradedPoly>,
    chirality: Chirality,
    parity: Parity,
    ghost_shift: i32,
}

impl Derivation {
    /// Builds a derivation with declared gradings; every nonzero component
    /// must shift parity and total ghost number by exactly these amounts.
    pub fn new(
        chirality: Chirality,
        parity: Parity,
        ghost_shift: i32,
        components: BTreeMap<Field, GradedPoly>,
    ) -> Result<Derivation, DerivationError> {
        let components: BTreeMap<Field, GradedPoly> =
            components.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        for (field, comp) in &components {
            let (p, g) = component_shift(field, comp)?;
            if p != parity {
                return Err(DerivationError::ParityShift {
                    field: field.name.clone(),
                    expected: parity,
                    found: p,
                });
            }
            if g != ghost_shift {
                return Err(DerivationError::GhostShift {
                    field: field.name.clone(),
                    expected: ghost_shift,
                    found: g,
                });
            }
        }
        Ok(Derivation {
            components,
            chirality,
            parity,
            ghost_shift,
        })
    }

    /// Builds a derivation inferring its gradings from the components. An
    /// all-zero derivation is reported as odd with ghost shift 1.
    pub fn infer(
        chirality: Chirality,
        components: BTreeMap<Field, GradedPoly>,
    ) -> Result<Derivation, DerivationError> {
        let first = components.iter().find(|(_, p)| !p.is_zero());
        let (parity, shift) = match first {
            Some((f, p)) => component_shift(f, p)?,
            None => (Parity::Odd, 1),
        };
        Derivation::new(chirality, parity, shift, components)
    }

    pub fn zero(chirality: Chirality, parity: Parity, ghost_shift: i32) -> Derivation {
        Derivation {
            components: BTreeMap::new(),
            chirality,
            parity,
            ghost_shift,
        }
    }

    pub fn components(&self) -> &BTreeMap<Field, GradedPoly> {
        &self.components
    }

    pub fn component(&self, field: &Field) -> GradedPoly {
        self.components.get(field).cloned().unwrap_or_default()
    }

    pub fn chirality(&self) -> Chirality {
        self.chirality
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn ghost_shift(&self) -> i32 {
        self.ghost_shift
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// The associated left derivation.
    pub fn to_left(&self) -> Derivation {
        match self.chirality {
            Chirality::Left => self.clone(),
            Chirality::Right => Derivation {
                components: self
                    .components
                    .iter()
                    .map(|(f, p)| {
                        let p = if self.parity.sign_swap(f.parity) { -p } else { p.clone() };
                        (f.clone(), p)
                    })
                    .collect(),
                chirality: Chirality::Left,
                parity: self.parity,
                ghost_shift: self.ghost_shift,
            },
        }
    }

    /// Component-wise sum; both summands must share chirality and parity.
    pub fn add(&self, other: &Derivation) -> Result<Derivation, DerivationError> {
        if self.chirality != other.chirality || self.parity != other.parity {
            return Err(DerivationError::IncompatibleSum);
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.ghost_shift != other.ghost_shift {
            return Err(DerivationError::IncompatibleSum);
        }
        let mut components = self.components.clone();
        for (f, p) in &other.components {
            *components.entry(f.clone()).or_default() += p;
        }
        Derivation::new(self.chirality, self.parity, self.ghost_shift, components)
    }

    /// Applies the prolonged derivation to a polynomial.
    pub fn apply(&self, p: &GradedPoly) -> GradedPoly {
        match self.chirality {
            Chirality::Left => self.apply_left(p),
            Chirality::Right => {
                let left = self.to_left();
                if !self.parity.is_odd() {
                    return left.apply_left(p);
                }
                let (even, odd) = p.split_parity();
                left.apply_left(&even) - left.apply_left(&odd)
            }
        }
    }

    fn apply_left(&self, p: &GradedPoly) -> GradedPoly {
        if self.components.is_empty() {
            return GradedPoly::zero();
        }
        p.derive_left(self.parity, |v| {
            self.components
                .get(&v.field)
                .map(|comp| total_derivative_multi(comp, &v.index))
        })
    }

    /// Lie derivative of a horizontal density.
    pub fn apply_density(&self, l: &Density) -> Density {
        Density::new(self.apply(l.coeff()))
    }
}

fn component_shift(field: &Field, comp: &GradedPoly) -> Result<(Parity, i32), DerivationError> {
    let parity = match comp.parity() {
        Homogeneity::Pure(p) => p,
        Homogeneity::Zero => Parity::Even,
        Homogeneity::Mixed => {
            return Err(DerivationError::MixedComponentParity {
                field: field.name.clone(),
            })
        }
    };
    let ghost = match comp.total_ghost_number() {
        Homogeneity::Pure(g) => g,
        Homogeneity::Zero => 0,
        Homogeneity::Mixed => {
            return Err(DerivationError::MixedComponentGhost {
                field: field.name.clone(),
            })
        }
    };
    Ok((parity + field.parity, ghost - field.total_ghost_number()))
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|(field, p)| match self.chirality {
                Chirality::Left => format!("({p}) ∂/∂{field}"),
                Chirality::Right => format!("∂←/∂{field} ({p})"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Verdict of a variational-symmetry test. `density` is `υ⌋δL`; `residual`
/// holds its nonzero Euler–Lagrange components on failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryVerdict {
    pub holds: bool,
    pub density: GradedPoly,
    pub residual: BTreeMap<Field, GradedPoly>,
}

/// The density `υ⌋δL`: `Σ υ^A 𝓔_A` for a left derivation and
/// `Σ (δ←𝓛/δs^A) υ^A` for a right one.
pub fn contraction_with_el(d: &Derivation, l: &Density) -> GradedPoly {
    let mut out = GradedPoly::zero();
    for (field, comp) in d.components() {
        match d.chirality() {
            Chirality::Left => {
                let e = jet::variational_derivative_left(l.coeff(), field);
                out += comp.mul(&e);
            }
            Chirality::Right => {
                let e = jet::variational_derivative_right(l.coeff(), field);
                out += e.mul(comp);
            }
        }
    }
    out
}

/// `d` is a variational symmetry of `L` iff `υ⌋δL` is d_H-exact.
pub fn is_variational_symmetry(d: &Derivation, l: &Density) -> SymmetryVerdict {
    let density = contraction_with_el(d, l);
    let ex = is_dh_exact(&Density::new(density.clone()));
    SymmetryVerdict {
        holds: ex.exact,
        density,
        residual: ex.residual,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NilpotencyVerdict {
    Nilpotent,
    /// Even derivations are never nilpotent.
    EvenParity,
    /// Fields whose component is not annihilated, with `υ(υ^A)`.
    Fails(BTreeMap<Field, GradedPoly>),
}

impl NilpotencyVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, NilpotencyVerdict::Nilpotent)
    }
}

/// An odd derivation is nilpotent iff it annihilates its own components.
pub fn is_nilpotent(d: &Derivation) -> NilpotencyVerdict {
    if !d.parity().is_odd() {
        return NilpotencyVerdict::EvenParity;
    }
    let failing: BTreeMap<Field, GradedPoly> = compose_on_components(d, d)
        .into_iter()
        .filter(|(_, p)| !p.is_zero())
        .collect();
    if failing.is_empty() {
        NilpotencyVerdict::Nilpotent
    } else {
        NilpotencyVerdict::Fails(failing)
    }
}

/// `A ↦ d1(υ2^A)` for every component of `d2`.
pub fn compose_on_components(d1: &Derivation, d2: &Derivation) -> BTreeMap<Field, GradedPoly> {
    d2.components()
        .iter()
        .map(|(f, comp)| (f.clone(), d1.apply(comp)))
        .collect()
}
