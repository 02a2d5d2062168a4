use std::collections::BTreeMap;

use super::ModelsError;
use crate::brst::{generators_from_gauge, Generator, Model, NoetherStage};
use crate::derivation::{Chirality, Derivation};
use crate::graded::{default_coords, Field, GradedPoly, MultiIndex, Parity};

/// Metric, connection and ghost fields of metric-affine gravity.
pub struct GravityFields {
    n: usize,
    /// `sigma[(α, β)]` for `α ≤ β`.
    pub sigma: BTreeMap<(usize, usize), Field>,
    /// `k[(μ, α, β)] = k_μ^α_β`.
    pub k: BTreeMap<(usize, usize, usize), Field>,
    pub ghosts: Vec<Field>,
}

impl GravityFields {
    pub fn new(n: usize) -> Self {
        let mut sigma = BTreeMap::new();
        let mut k = BTreeMap::new();
        for a in 0..n {
            for b in a..n {
                sigma.insert((a, b), Field::field(format!("sigma_{a}{b}"), Parity::Even));
            }
            for mu in 0..n {
                for b in 0..n {
                    k.insert((mu, a, b), Field::field(format!("k_{mu}_{a}_{b}"), Parity::Even));
                }
            }
        }
        let ghosts = (0..n).map(|l| Field::ghost(format!("c_{l}"), Parity::Odd, 0)).collect();
        GravityFields { n, sigma, k, ghosts }
    }

    fn sigma(&self, a: usize, b: usize, jet: &[usize]) -> GradedPoly {
        let f = &self.sigma[&(a.min(b), a.max(b))];
        GradedPoly::var(f.jet(MultiIndex::from_coords(self.n, jet)))
    }

    fn k(&self, mu: usize, a: usize, b: usize, jet: &[usize]) -> GradedPoly {
        GradedPoly::var(self.k[&(mu, a, b)].jet(MultiIndex::from_coords(self.n, jet)))
    }

    fn c(&self, l: usize, jet: &[usize]) -> GradedPoly {
        GradedPoly::var(self.ghosts[l].jet(MultiIndex::from_coords(self.n, jet)))
    }

    pub fn originals(&self) -> Vec<Field> {
        self.sigma.values().chain(self.k.values()).cloned().collect()
    }
}

/// Components of the gauge operator, the vertical part of the functorial
/// lift with vector fields replaced by ghosts `c^λ`:
/// `σ^{αβ} ↦ σ^{νβ} c^α_ν + σ^{αν} c^β_ν − c^λ σ^{αβ}_λ` and
/// `k_μ^α_β ↦ c^α_ν k_μ^ν_β − c^ν_β k_μ^α_ν − c^ν_μ k_ν^α_β + c^α_{μβ} − c^λ k_{λμ}^α_β`.
pub fn gravity_gauge_components(f: &GravityFields) -> BTreeMap<Field, GradedPoly> {
    let n = f.n;
    let mut out = BTreeMap::new();
    for (&(a, b), field) in &f.sigma {
        let mut comp = GradedPoly::zero();
        for nu in 0..n {
            comp += f.sigma(nu, b, &[]).mul(&f.c(a, &[nu]));
            comp += f.sigma(a, nu, &[]).mul(&f.c(b, &[nu]));
            comp -= f.c(nu, &[]).mul(&f.sigma(a, b, &[nu]));
        }
        out.insert(field.clone(), comp);
    }
    for (&(mu, a, b), field) in &f.k {
        let mut comp = f.c(a, &[mu, b]);
        for nu in 0..n {
            comp += f.c(a, &[nu]).mul(&f.k(mu, nu, b, &[]));
            comp -= f.c(nu, &[b]).mul(&f.k(mu, a, nu, &[]));
            comp -= f.c(nu, &[mu]).mul(&f.k(nu, a, b, &[]));
            comp -= f.c(nu, &[]).mul(&f.k(mu, a, b, &[nu]));
        }
        out.insert(field.clone(), comp);
    }
    out
}

/// `ξ^λ = c^λ_μ c^μ`.
pub fn gravity_xi(f: &GravityFields) -> BTreeMap<Field, GradedPoly> {
    (0..f.n)
        .map(|l| {
            let xi: GradedPoly = (0..f.n).map(|mu| f.c(l, &[mu]).mul(&f.c(mu, &[]))).sum();
            (f.ghosts[l].clone(), xi)
        })
        .collect()
}

/// Metric-affine gravity on `R^n` with the Lagrangian left as a zero
/// placeholder; Noether generators are read off the gauge operator.
pub fn build_gravity(n: usize) -> Result<Model, ModelsError> {
    build_gravity_with(n, GradedPoly::zero())
}

/// As [`build_gravity`], with a caller-supplied invariant Lagrangian.
pub fn build_gravity_with(n: usize, lagrangian: GradedPoly) -> Result<Model, ModelsError> {
    if !(1..=10).contains(&n) {
        return Err(ModelsError::Invalid("gravity supports 1 ≤ n ≤ 10".into()));
    }
    let f = GravityFields::new(n);
    let mut fields = Vec::new();
    for x in f.originals().iter().chain(f.ghosts.iter()) {
        fields.push(x.clone());
        fields.push(Field::antifield_of(format!("{}_bar", x.name), x));
    }
    let gauge = gravity_gauge_components(&f);
    let mut generators = Vec::new();
    for ghost in &f.ghosts {
        let contributions: BTreeMap<Field, GradedPoly> = gauge
            .iter()
            .map(|(t, p)| {
                let part = p.filter(|m| m.factors().iter().any(|(v, _)| &v.field == ghost));
                (t.clone(), part)
            })
            .filter(|(_, p)| !p.is_zero())
            .collect();
        let density = generators_from_gauge(&fields, n, ghost, &contributions)?;
        let antifield = fields
            .iter()
            .find(|a| a.dual_of.as_deref() == Some(ghost.name.as_str()))
            .expect("ghost antifield declared")
            .clone();
        generators.push(Generator {
            ghost: ghost.clone(),
            antifield,
            density,
        });
    }
    let xi = Derivation::new(Chirality::Left, Parity::Odd, 1, gravity_xi(&f))?;
    let placeholder = lagrangian.is_zero();
    let mut model = Model::new(
        format!("gravity:n{n}"),
        format!("Metric-affine gravity on R^{n}: metric, linear connection, diffeomorphism ghosts"),
        n,
        default_coords(n),
        fields,
        lagrangian,
        vec![NoetherStage {
            stage: 0,
            generators,
        }],
        Some(xi),
    )?;
    if placeholder {
        model.notes.push("the Lagrangian is a zero placeholder".into());
    }
    Ok(model)
}
