//! Canonical-form arithmetic for polynomials in Grassmann-graded jet
//! variables.
//!
//! A [`GradedPoly`] is a sum of [`Monomial`]s with exact rational
//! coefficients. Factors are kept in a fixed total order (antifield number,
//! role, field name, multi-index), so two equal polynomials always have the
//! same representation and zero-testing is structural.

mod field;
mod multi_index;
mod poly;

pub use field::{Field, FieldDecl, JetVar, Parity, Role};
pub use multi_index::MultiIndex;
pub(crate) use multi_index::binomial;
pub use poly::{default_coords, int, ratio, GradedPoly, Homogeneity, Monomial, Rational};

/// A horizontal density `𝓛 dⁿx`, stored by its coefficient.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Density(pub GradedPoly);

impl Density {
    pub fn new(coeff: GradedPoly) -> Density {
        Density(coeff)
    }

    pub fn zero() -> Density {
        Density(GradedPoly::zero())
    }

    pub fn coeff(&self) -> &GradedPoly {
        &self.0
    }

    pub fn into_coeff(self) -> GradedPoly {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Multiplies the density by a function on the left.
    pub fn times(&self, f: &GradedPoly) -> Density {
        Density(f.mul(&self.0))
    }
}

impl From<GradedPoly> for Density {
    fn from(p: GradedPoly) -> Self {
        Density(p)
    }
}

impl std::ops::Add for &Density {
    type Output = Density;
    fn add(self, rhs: &Density) -> Density {
        Density(&self.0 + &rhs.0)
    }
}

impl std::ops::Sub for &Density {
    type Output = Density;
    fn sub(self, rhs: &Density) -> Density {
        Density(&self.0 - &rhs.0)
    }
}

impl std::fmt::Display for Density {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}) d^nx", self.0)
    }
}
