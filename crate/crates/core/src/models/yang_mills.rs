use std::collections::BTreeMap;

use num_traits::Zero;

use super::lie::LieSuperAlgebraSpec;
use super::ModelsError;
use crate::brst::{generators_from_gauge, Generator, Model, NoetherStage};
use crate::derivation::{Chirality, Derivation};
use crate::graded::{default_coords, int, ratio, Field, GradedPoly, MultiIndex, Parity, Rational};
use crate::jet::total_derivative;

/// Diagonal Minkowski signature `(+, −, …, −)`.
pub fn minkowski(n: usize) -> Vec<i64> {
    (0..n).map(|i| if i == 0 { 1 } else { -1 }).collect()
}

/// Field handles of a Yang–Mills model, indexed by algebra and spacetime
/// indices.
pub struct YangMillsFields {
    /// `potentials[r][λ] = a^r_λ`.
    pub potentials: Vec<Vec<Field>>,
    pub potential_bars: Vec<Vec<Field>>,
    pub ghosts: Vec<Field>,
    pub ghost_bars: Vec<Field>,
}

impl YangMillsFields {
    pub fn new(alg: &LieSuperAlgebraSpec, n: usize) -> Self {
        let m = alg.dim();
        let mut potentials = Vec::with_capacity(m);
        let mut potential_bars = Vec::with_capacity(m);
        let mut ghosts = Vec::with_capacity(m);
        let mut ghost_bars = Vec::with_capacity(m);
        for r in 0..m {
            let parity = alg.parities[r];
            let row: Vec<Field> = (0..n).map(|l| Field::field(format!("a{}_{l}", r + 1), parity)).collect();
            potential_bars.push(row.iter().map(|a| Field::antifield_of(format!("{}_bar", a.name), a)).collect());
            potentials.push(row);
            let c = Field::ghost(format!("c{}", r + 1), parity.flip(), 0);
            ghost_bars.push(Field::antifield_of(format!("{}_bar", c.name), &c));
            ghosts.push(c);
        }
        YangMillsFields {
            potentials,
            potential_bars,
            ghosts,
            ghost_bars,
        }
    }

    /// Declaration order: potentials, their antifields, ghosts, theirs.
    pub fn all(&self) -> Vec<Field> {
        let mut out: Vec<Field> = self.potentials.iter().flatten().cloned().collect();
        out.extend(self.potential_bars.iter().flatten().cloned());
        out.extend(self.ghosts.iter().cloned());
        out.extend(self.ghost_bars.iter().cloned());
        out
    }
}

fn v(f: &Field, n: usize) -> GradedPoly {
    GradedPoly::var(f.var(n))
}

/// `𝓕^r_{λμ} = d_λ a^r_μ − d_μ a^r_λ + c^r_{ij} a^i_λ a^j_μ`.
pub fn field_strength(alg: &LieSuperAlgebraSpec, f: &YangMillsFields, n: usize, r: usize, l: usize, mu: usize) -> GradedPoly {
    let a = &f.potentials;
    let mut out = total_derivative(&v(&a[r][mu], n), l) - total_derivative(&v(&a[r][l], n), mu);
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            let c = alg.c(r, i, j);
            if !c.is_zero() {
                out += v(&a[i][l], n).mul(&v(&a[j][mu], n)).scale(c);
            }
        }
    }
    out
}

/// `¼ h_{ij} η^{λμ} η^{βν} 𝓕^i_{λβ} 𝓕^j_{μν}` for a diagonal `η`.
pub fn yang_mills_lagrangian(alg: &LieSuperAlgebraSpec, f: &YangMillsFields, n: usize, signature: &[i64]) -> GradedPoly {
    let h = alg.metric_inverse();
    let m = alg.dim();
    let strengths: Vec<Vec<Vec<GradedPoly>>> = (0..m)
        .map(|r| (0..n).map(|l| (0..n).map(|b| field_strength(alg, f, n, r, l, b)).collect()).collect())
        .collect();
    let mut out = GradedPoly::zero();
    for i in 0..m {
        for j in 0..m {
            if h[i][j].is_zero() {
                continue;
            }
            for l in 0..n {
                for b in 0..n {
                    if l == b {
                        continue;
                    }
                    let w = h[i][j].clone() * int(signature[l] * signature[b]) * ratio(1, 4);
                    out += strengths[i][l][b].mul(&strengths[j][l][b]).scale(&w);
                }
            }
        }
    }
    out
}

/// Contribution of ghost `c^j` to the component of `u_e` on `a^r_λ`:
/// `−c^r_{ji} c^j a^i_λ + δ^r_j c^j_λ`.
fn gauge_contribution(alg: &LieSuperAlgebraSpec, f: &YangMillsFields, n: usize, j: usize, r: usize, l: usize) -> GradedPoly {
    let cj = v(&f.ghosts[j], n);
    let mut out = GradedPoly::zero();
    for i in 0..alg.dim() {
        let c = alg.c(r, j, i);
        if !c.is_zero() {
            out -= cj.mul(&v(&f.potentials[i][l], n)).scale(c);
        }
    }
    if r == j {
        out += GradedPoly::var(f.ghosts[j].jet(MultiIndex::unit(n, l)));
    }
    out
}

/// `ξ^r = −½ (−1)^{[i]} c^r_{ij} c^i c^j`.
pub fn yang_mills_xi(alg: &LieSuperAlgebraSpec, f: &YangMillsFields, n: usize) -> BTreeMap<Field, GradedPoly> {
    let m = alg.dim();
    let mut out = BTreeMap::new();
    for r in 0..m {
        let mut xi = GradedPoly::zero();
        for i in 0..m {
            for j in 0..m {
                let c = alg.c(r, i, j);
                if c.is_zero() {
                    continue;
                }
                let sign: Rational = if alg.parities[i].is_odd() { ratio(1, 2) } else { ratio(-1, 2) };
                xi += v(&f.ghosts[i], n).mul(&v(&f.ghosts[j], n)).scale(&(sign * c));
            }
        }
        out.insert(f.ghosts[r].clone(), xi);
    }
    out
}

/// Yang–Mills theory of `alg` on `R^n` with a diagonal metric signature.
/// Stage-0 generators are read off the gauge operator
/// `u^r_λ = −c^r_{ji} c^j a^i_λ + c^r_λ`, giving
/// `Δ_j = −(c^r_{ji} a^i_λ ā^λ_r + d_λ ā^λ_j)`.
pub fn build_yang_mills(alg: &LieSuperAlgebraSpec, n: usize, signature: &[i64]) -> Result<Model, ModelsError> {
    if n < 2 {
        return Err(ModelsError::Invalid("Yang–Mills needs base dimension ≥ 2".into()));
    }
    if signature.len() != n || signature.iter().any(|s| s.abs() != 1) {
        return Err(ModelsError::Invalid("signature must be n entries of ±1".into()));
    }
    let m = alg.dim();
    let f = YangMillsFields::new(alg, n);
    let fields = f.all();
    let lagrangian = yang_mills_lagrangian(alg, &f, n, signature);

    let mut generators = Vec::with_capacity(m);
    for j in 0..m {
        let mut contributions = BTreeMap::new();
        for r in 0..m {
            for l in 0..n {
                let c = gauge_contribution(alg, &f, n, j, r, l);
                if !c.is_zero() {
                    contributions.insert(f.potentials[r][l].clone(), c);
                }
            }
        }
        let density = generators_from_gauge(&fields, n, &f.ghosts[j], &contributions)?;
        generators.push(Generator {
            ghost: f.ghosts[j].clone(),
            antifield: f.ghost_bars[j].clone(),
            density,
        });
    }
    let xi = Derivation::new(Chirality::Left, Parity::Odd, 1, yang_mills_xi(alg, &f, n))?;
    let sig: Vec<String> = signature.iter().map(|s| if *s > 0 { "+" } else { "-" }.to_string()).collect();
    Ok(Model::new(
        format!("yang-mills:{}:n{n}", alg.name),
        format!("Yang–Mills theory of {} on R^{n}, signature ({})", alg.name, sig.join(",")),
        n,
        default_coords(n),
        fields,
        lagrangian,
        vec![NoetherStage {
            stage: 0,
            generators,
        }],
        Some(xi),
    )?)
}
