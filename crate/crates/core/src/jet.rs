//! Total derivatives, Euler–Lagrange operators, adjoints of linear
//! differential operators and the d_H-exactness test.
//!
//! Polynomials carry no explicit dependence on base coordinates, so the total
//! derivative `d_λ` reduces to its vertical part `Σ s^A_{λ+Λ} ∂^Λ_A`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use num_traits::Zero;

use crate::graded::{binomial, int, Density, Field, GradedPoly, JetVar, MultiIndex, Parity};

/// `d_λ p`.
pub fn total_derivative(p: &GradedPoly, coord: usize) -> GradedPoly {
    p.derive_left(Parity::Even, |v| Some(GradedPoly::var(v.shifted(coord))))
}

/// `d_Λ p`, the iterated total derivative.
pub fn total_derivative_multi(p: &GradedPoly, index: &MultiIndex) -> GradedPoly {
    index
        .coords()
        .into_iter()
        .fold(p.clone(), |acc, c| total_derivative(&acc, c))
}

fn sign(order: usize) -> i64 {
    if order.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Jet indices of `field` occurring in `p`.
fn jets_of(p: &GradedPoly, field: &Field) -> Vec<MultiIndex> {
    p.jet_vars()
        .into_iter()
        .filter(|v| &v.field == field)
        .map(|v| v.index)
        .collect()
}

/// Left variational derivative `δ𝓛/δs^A = Σ (−1)^{|Λ|} d_Λ(∂^Λ_A 𝓛)`.
pub fn variational_derivative_left(l: &GradedPoly, field: &Field) -> GradedPoly {
    variational(l, field, true)
}

/// Right variational derivative `δ←𝓛/δs^A = Σ (−1)^{|Λ|} d_Λ(∂←^Λ_A 𝓛)`.
pub fn variational_derivative_right(l: &GradedPoly, field: &Field) -> GradedPoly {
    variational(l, field, false)
}

fn variational(l: &GradedPoly, field: &Field, left: bool) -> GradedPoly {
    let mut out = GradedPoly::zero();
    for index in jets_of(l, field) {
        let v = JetVar::new(field.clone(), index.clone());
        let partial = if left { l.partial_left(&v) } else { l.partial_right(&v) };
        let term = total_derivative_multi(&partial, &index);
        if sign(index.order()) < 0 {
            out -= term;
        } else {
            out += term;
        }
    }
    out
}

/// The Euler–Lagrange components `𝓔_A` of a density.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct EulerLagrange {
    pub components: BTreeMap<Field, GradedPoly>,
}

impl EulerLagrange {
    pub fn get(&self, field: &Field) -> GradedPoly {
        self.components.get(field).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(GradedPoly::is_zero)
    }

    /// The components that do not vanish.
    pub fn nonzero(&self) -> BTreeMap<Field, GradedPoly> {
        self.components
            .iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(f, p)| (f.clone(), p.clone()))
            .collect()
    }
}

/// `𝓔_A` for every field in `fields`, plus any field occurring in `l`.
pub fn euler_lagrange(l: &Density, fields: &[Field]) -> EulerLagrange {
    let mut all: BTreeSet<Field> = fields.iter().cloned().collect();
    all.extend(l.coeff().fields());
    let components = all
        .into_iter()
        .map(|f| {
            let e = variational_derivative_left(l.coeff(), &f);
            (f, e)
        })
        .collect();
    EulerLagrange { components }
}

/// Outcome of the exactness test: `exact` iff all Euler–Lagrange components
/// vanish; `residual` holds the nonzero ones otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exactness {
    pub exact: bool,
    pub residual: BTreeMap<Field, GradedPoly>,
}

/// Decides whether `ω` is a total divergence by testing δω = 0.
pub fn is_dh_exact(omega: &Density) -> Exactness {
    let residual = euler_lagrange(omega, &[]).nonzero();
    Exactness {
        exact: residual.is_empty(),
        residual,
    }
}

/// A linear differential operator `Σ f^{A,Λ} d_Λ` acting on a tuple of
/// fields, stored by its coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LinearDiffOp {
    pub coeffs: BTreeMap<(Field, MultiIndex), GradedPoly>,
}

impl LinearDiffOp {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, field: Field, index: MultiIndex, coeff: GradedPoly) {
        let slot = self.coeffs.entry((field, index)).or_default();
        *slot += coeff;
        self.coeffs.retain(|_, c| !c.is_zero());
    }

    pub fn get(&self, field: &Field, index: &MultiIndex) -> GradedPoly {
        self.coeffs
            .get(&(field.clone(), index.clone()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(GradedPoly::is_zero)
    }

    pub fn max_order(&self) -> usize {
        self.coeffs.keys().map(|(_, i)| i.order()).max().unwrap_or(0)
    }

    pub fn fields(&self) -> BTreeSet<Field> {
        self.coeffs.keys().map(|(f, _)| f.clone()).collect()
    }

    /// Coefficients of one field, `Λ ↦ f^{A,Λ}`.
    pub fn component(&self, field: &Field) -> BTreeMap<MultiIndex, GradedPoly> {
        self.coeffs
            .iter()
            .filter(|((f, _), _)| f == field)
            .map(|((_, i), c)| (i.clone(), c.clone()))
            .collect()
    }

    /// `Σ_{A,Λ} f^{A,Λ} d_Λ φ_A` with `φ_A` supplied per field.
    pub fn apply(&self, mut phi: impl FnMut(&Field) -> GradedPoly) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for ((f, idx), c) in &self.coeffs {
            out += c.mul(&total_derivative_multi(&phi(f), idx));
        }
        out
    }
}

/// Reserved even test field used to expand adjoints.
fn test_field() -> &'static Field {
    static PHI: OnceLock<Field> = OnceLock::new();
    PHI.get_or_init(|| Field::field("__phi", Parity::Even))
}

/// The adjoint `η(f)`, obtained by expanding `Σ (−1)^{|Λ|} d_Λ(f^Λ φ)` with a
/// fresh even field `φ` and collecting the coefficients of `φ_Λ`.
pub fn adjoint(op: &LinearDiffOp) -> LinearDiffOp {
    let phi = test_field();
    let mut out = LinearDiffOp::new();
    for field in op.fields() {
        let comp = op.component(&field);
        let n = comp.keys().next().map(MultiIndex::dim).unwrap_or(0);
        let phi0 = GradedPoly::var(phi.var(n));
        let mut expanded = GradedPoly::zero();
        for (idx, f) in &comp {
            let t = total_derivative_multi(&f.mul(&phi0), idx);
            if idx.order() % 2 == 1 {
                expanded -= t;
            } else {
                expanded += t;
            }
        }
        for v in expanded.jet_vars().into_iter().filter(|v| &v.field == phi) {
            let coeff = expanded.partial_left(&v);
            out.insert(field.clone(), v.index, coeff);
        }
    }
    out
}

/// Conventions for the closed-form adjoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdjointConvention {
    /// Coefficients indexed by count vectors with binomial weights
    /// `Π (σ_i + λ_i)! / (σ_i! λ_i!)`.
    Componentwise,
    /// Weights `|Σ+Λ|! / (|Σ|! |Λ|!)` applied literally to count-vector
    /// coefficients.
    TotalDegree,
    /// Weights `|Σ+Λ|! / (|Σ|! |Λ|!)` with sums over ordered coordinate
    /// tuples: coefficients are divided by their multiplicity before the
    /// formula and multiplied back afterwards.
    TotalDegreeOrderedTuples,
}

/// `η(f)^Λ = Σ_Σ (−1)^{|Σ+Λ|} w(Σ,Λ) d_Σ f^{Σ+Λ}` in the chosen convention.
pub fn adjoint_closed_form(op: &LinearDiffOp, convention: AdjointConvention) -> LinearDiffOp {
    let mut out = LinearDiffOp::new();
    for field in op.fields() {
        let comp = op.component(&field);
        for (top, f) in &comp {
            // f^{top} contributes to η^Λ for every Λ ≤ top, with Σ = top − Λ.
            for lambda in top.sub_indices() {
                let sigma = top.checked_minus(&lambda).expect("sub-index");
                let weight = match convention {
                    AdjointConvention::Componentwise => {
                        let w: u64 = top
                            .counts()
                            .iter()
                            .zip(lambda.counts())
                            .map(|(&t, &l)| binomial(t as u64, l as u64))
                            .product();
                        int(w as i64)
                    }
                    AdjointConvention::TotalDegree => int(binomial(
                        top.order() as u64,
                        lambda.order() as u64,
                    ) as i64),
                    AdjointConvention::TotalDegreeOrderedTuples => {
                        // Ordered sums over Σ of a fixed multiset contribute
                        // mult(Σ) copies; η is rescaled from the ordered
                        // coefficient back to the count-vector one.
                        let w = binomial(top.order() as u64, lambda.order() as u64) as i64;
                        crate::graded::ratio(
                            w * sigma.multiplicity() as i64 * lambda.multiplicity() as i64,
                            top.multiplicity() as i64,
                        )
                    }
                };
                if weight.is_zero() {
                    continue;
                }
                let sign = if top.order() % 2 == 1 { -1 } else { 1 };
                let term = total_derivative_multi(f, &sigma).scale(&(weight * int(sign)));
                out.insert(field.clone(), lambda, term);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::ratio;

    fn y1() -> Field {
        Field::field("y", Parity::Even)
    }

    fn jet(f: &Field, n: usize, coords: &[usize]) -> GradedPoly {
        GradedPoly::var(f.jet(MultiIndex::from_coords(n, coords)))
    }

    #[test]
    fn total_derivative_examples() {
        let y = y1();
        assert_eq!(total_derivative(&jet(&y, 1, &[]), 0), jet(&y, 1, &[0]));

        let p = &jet(&y, 1, &[]) * &jet(&y, 1, &[0]);
        let expected = &jet(&y, 1, &[0]).pow(2) + &(&jet(&y, 1, &[]) * &jet(&y, 1, &[0, 0]));
        assert_eq!(total_derivative(&p, 0), expected);

        let c1 = Field::ghost("c1", Parity::Odd, 0);
        let c2 = Field::ghost("c2", Parity::Odd, 0);
        let cc = &jet(&c1, 1, &[]) * &jet(&c2, 1, &[]);
        let expected = &(&jet(&c1, 1, &[0]) * &jet(&c2, 1, &[])) + &(&jet(&c1, 1, &[]) * &jet(&c2, 1, &[0]));
        assert_eq!(total_derivative(&cc, 0), expected);
    }

    #[test]
    fn total_derivative_multi_examples() {
        let y = y1();
        let p = jet(&y, 2, &[]);
        assert_eq!(total_derivative_multi(&p, &MultiIndex::zero(2)), p);
        assert_eq!(
            total_derivative_multi(&p, &MultiIndex::from_coords(2, &[0, 1])),
            jet(&y, 2, &[0, 1])
        );
        let yy = jet(&y, 1, &[]).pow(2);
        let expected = &jet(&y, 1, &[0]).pow(2).scale(&int(2))
            + &(&jet(&y, 1, &[]) * &jet(&y, 1, &[0, 0])).scale(&int(2));
        assert_eq!(total_derivative_multi(&yy, &MultiIndex::from_coords(1, &[0, 0])), expected);
    }

    #[test]
    fn euler_lagrange_examples() {
        let y = y1();
        let l = Density::new(jet(&y, 1, &[0]).pow(2).scale(&ratio(1, 2)));
        let el = euler_lagrange(&l, std::slice::from_ref(&y));
        assert_eq!(el.get(&y), -jet(&y, 1, &[0, 0]));

        let l = Density::new((&jet(&y, 1, &[]) * &jet(&y, 1, &[0])).scale(&int(2)));
        assert!(euler_lagrange(&l, std::slice::from_ref(&y)).is_zero());

        let el = euler_lagrange(&Density::zero(), std::slice::from_ref(&y));
        assert!(el.is_zero());
        assert!(el.components.contains_key(&y));
    }

    #[test]
    fn right_variational_derivative_examples() {
        let y = y1();
        let ybar = Field::antifield_of("y_bar", &y);
        let f = &jet(&y, 1, &[]).pow(2) + &GradedPoly::int(1);
        // ȳ·f(y) with ȳ odd: the right derivative strips ȳ with no sign.
        let l = jet(&ybar, 1, &[]).mul(&f);
        assert_eq!(variational_derivative_right(&l, &ybar), f);
        assert_eq!(variational_derivative_left(&l, &ybar), f);

        // Even variable: left and right agree.
        let l = jet(&y, 1, &[0]).pow(2);
        assert_eq!(
            variational_derivative_right(&l, &y),
            variational_derivative_left(&l, &y)
        );

        // c̄·Δ with Δ = ȳ odd, c̄ even: left and right differ by (−1)^{[c̄]([L]+1)} = +1,
        // and for an odd c̄ by the parity of the rest.
        let c = Field::ghost("c", Parity::Odd, 0);
        let cbar = Field::antifield_of("c_bar", &c);
        let delta = jet(&ybar, 1, &[0]);
        let l = jet(&cbar, 1, &[]).mul(&delta);
        // l is odd, c̄ even: right = left.
        assert_eq!(variational_derivative_right(&l, &cbar), delta);
        let c2 = Field::ghost("k", Parity::Even, 1);
        let kbar = Field::antifield_of("k_bar", &c2);
        let l = jet(&kbar, 1, &[]).mul(&delta);
        // l even, k̄ odd: right = −left.
        assert_eq!(
            variational_derivative_right(&l, &kbar),
            -variational_derivative_left(&l, &kbar)
        );
    }

    #[test]
    fn exactness_examples() {
        let y = y1();
        let w = Density::new((&jet(&y, 1, &[]) * &jet(&y, 1, &[0])).scale(&int(2)));
        assert!(is_dh_exact(&w).exact);
        let w = Density::new(&jet(&y, 1, &[]) * &jet(&y, 1, &[0, 0]));
        let ex = is_dh_exact(&w);
        assert!(!ex.exact);
        assert_eq!(ex.residual[&y], jet(&y, 1, &[0, 0]).scale(&int(2)));
        assert!(is_dh_exact(&Density::zero()).exact);
    }

    #[test]
    fn adjoint_examples() {
        let y = y1();
        let g = &jet(&y, 1, &[]).pow(2) + &jet(&y, 1, &[0]);
        let mut op = LinearDiffOp::new();
        op.insert(y.clone(), MultiIndex::zero(1), g.clone());
        assert_eq!(adjoint(&op), op);

        let mut op = LinearDiffOp::new();
        op.insert(y.clone(), MultiIndex::unit(1, 0), g.clone());
        let eta = adjoint(&op);
        let mut expected = LinearDiffOp::new();
        expected.insert(y.clone(), MultiIndex::zero(1), -total_derivative(&g, 0));
        expected.insert(y.clone(), MultiIndex::unit(1, 0), -g);
        assert_eq!(eta, expected);
        assert_eq!(adjoint(&eta), op);
    }

    #[test]
    fn closed_forms_agree_in_one_dimension() {
        let y = y1();
        let mut op = LinearDiffOp::new();
        op.insert(y.clone(), MultiIndex::from_coords(1, &[0, 0]), jet(&y, 1, &[]).pow(2));
        op.insert(y.clone(), MultiIndex::unit(1, 0), jet(&y, 1, &[0]));
        for conv in [
            AdjointConvention::Componentwise,
            AdjointConvention::TotalDegree,
            AdjointConvention::TotalDegreeOrderedTuples,
        ] {
            assert_eq!(adjoint_closed_form(&op, conv), adjoint(&op), "{conv:?}");
        }
    }

    #[test]
    fn total_degree_weights_differ_in_two_dimensions() {
        // f^{(x0,x1)} = y: the literal total-degree weight double-counts the
        // mixed index.
        let y = y1();
        let mut op = LinearDiffOp::new();
        op.insert(y.clone(), MultiIndex::from_coords(2, &[0, 1]), jet(&y, 2, &[]));
        let constructive = adjoint(&op);
        assert_eq!(adjoint_closed_form(&op, AdjointConvention::Componentwise), constructive);
        assert_eq!(
            adjoint_closed_form(&op, AdjointConvention::TotalDegreeOrderedTuples),
            constructive
        );
        assert_ne!(adjoint_closed_form(&op, AdjointConvention::TotalDegree), constructive);
    }
}
