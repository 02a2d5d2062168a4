use std::collections::BTreeMap;

use super::ModelsError;
use crate::brst::{generators_from_gauge, Generator, Model, NoetherStage};
use crate::graded::{default_coords, Field, GradedPoly, MultiIndex, Parity};
use crate::jet::total_derivative;

/// Form degrees of topological BF theory: `A` a p-form, `B` a q-form on
/// `R^n` with `p + q = n − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BFSpec {
    pub n: usize,
    pub p: usize,
    pub q: usize,
}

impl BFSpec {
    pub fn new(n: usize, p: usize, q: usize) -> Result<Self, ModelsError> {
        if p + q + 1 != n {
            return Err(ModelsError::Invalid(format!("p + q must equal n − 1 (got p={p}, q={q}, n={n})")));
        }
        if p < 1 || q < p {
            return Err(ModelsError::Invalid(format!("need q ≥ p ≥ 1 (got p={p}, q={q})")));
        }
        if n > 10 {
            return Err(ModelsError::Invalid("component names support n ≤ 10".into()));
        }
        Ok(BFSpec { n, p, q })
    }

    /// Reducibility depth `N = q − 1`.
    pub fn depth(&self) -> usize {
        self.q - 1
    }
}

/// Increasing index tuples of length `k` from `0..n`.
pub fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for i in start..n {
            prefix.push(i);
            rec(i + 1, n, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Sign of the permutation sorting `idx`, or 0 on a repeated index.
pub fn permutation_sign(idx: &[usize]) -> i64 {
    let mut sign = 1;
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            if idx[a] == idx[b] {
                return 0;
            }
            if idx[a] > idx[b] {
                sign = -sign;
            }
        }
    }
    sign
}

/// The components of one exterior form, keyed by increasing index tuple.
#[derive(Clone, Debug)]
pub struct FormComponents {
    pub degree: usize,
    pub components: BTreeMap<Vec<usize>, Field>,
}

impl FormComponents {
    fn new(n: usize, degree: usize, make: impl Fn(String) -> Field, stem: &str) -> Self {
        let components = increasing_tuples(n, degree)
            .into_iter()
            .map(|t| {
                let name = if t.is_empty() {
                    stem.to_string()
                } else {
                    let digits: String = t.iter().map(|i| i.to_string()).collect();
                    format!("{stem}_{digits}")
                };
                (t, make(name))
            })
            .collect();
        FormComponents { degree, components }
    }

    pub fn get(&self, idx: &[usize]) -> &Field {
        &self.components[idx]
    }

    pub fn fields(&self) -> impl Iterator<Item = &Field> {
        self.components.values()
    }
}

/// `(dω)_I = Σ_a (−1)^a d_{i_a} ω_{I∖i_a}` for an increasing tuple `I`.
fn exterior_derivative(omega: &FormComponents, idx: &[usize], n: usize) -> GradedPoly {
    let mut out = GradedPoly::zero();
    for a in 0..idx.len() {
        let mut rest = idx.to_vec();
        let coord = rest.remove(a);
        let term = total_derivative(&GradedPoly::var(omega.get(&rest).var(n)), coord);
        if a % 2 == 0 {
            out += term;
        } else {
            out -= term;
        }
    }
    out
}

/// Field content of a BF model: the two forms, their ghost towers (stage
/// `k` carries forms of degree `p−k−1` and `q−k−1`), and all antifields.
pub struct BFFields {
    pub a: FormComponents,
    pub b: FormComponents,
    pub eps: Vec<FormComponents>,
    pub xi: Vec<FormComponents>,
}

impl BFFields {
    pub fn new(spec: &BFSpec) -> Self {
        let n = spec.n;
        let a = FormComponents::new(n, spec.p, |s| Field::field(s, Parity::Even), "A");
        let b = FormComponents::new(n, spec.q, |s| Field::field(s, Parity::Even), "B");
        let tower = |top: usize, stem: &str| -> Vec<FormComponents> {
            (0..top)
                .map(|k| {
                    let parity = Parity::from_bits(k as u32 + 1);
                    FormComponents::new(n, top - k - 1, |s| Field::ghost(s, parity, k as u32), stem)
                })
                .collect()
        };
        BFFields {
            a,
            b,
            eps: tower(spec.p, "eps"),
            xi: tower(spec.q, "xi"),
        }
    }

    /// Fields, then ghosts by stage, each followed by its antifield.
    pub fn all(&self) -> Vec<Field> {
        let mut out = Vec::new();
        let forms = [&self.a, &self.b].into_iter().chain(self.eps.iter()).chain(self.xi.iter());
        for form in forms {
            for f in form.fields() {
                out.push(f.clone());
                out.push(Field::antifield_of(format!("{}_bar", f.name), f));
            }
        }
        out
    }
}

/// `L = A ∧ d_H B` in components: `Σ sign(I, λ, J) A_I d_λ B_J`.
pub fn bf_lagrangian(spec: &BFSpec, f: &BFFields) -> GradedPoly {
    let n = spec.n;
    let mut out = GradedPoly::zero();
    for (i, a) in &f.a.components {
        for (j, b) in &f.b.components {
            for l in 0..n {
                let mut idx = i.clone();
                idx.push(l);
                idx.extend(j);
                let s = permutation_sign(&idx);
                if s == 0 {
                    continue;
                }
                let term = GradedPoly::var(a.var(n)).mul(&GradedPoly::var(b.jet(MultiIndex::unit(n, l))));
                if s > 0 {
                    out += term;
                } else {
                    out -= term;
                }
            }
        }
    }
    out
}

/// Topological BF theory. The gauge operator is the exterior derivative
/// down each ghost tower, and every Noether generator is read off it.
pub fn build_bf(spec: &BFSpec) -> Result<Model, ModelsError> {
    let n = spec.n;
    let f = BFFields::new(spec);
    let fields = f.all();
    let lagrangian = bf_lagrangian(spec, &f);

    let mut stages: Vec<NoetherStage> = (0..spec.q)
        .map(|k| NoetherStage {
            stage: k as u32,
            generators: Vec::new(),
        })
        .collect();
    // (target form, its tower of ghost forms)
    for (target, tower) in [(&f.a, &f.eps), (&f.b, &f.xi)] {
        let mut upper = target;
        for (k, ghosts) in tower.iter().enumerate() {
            for ghost in ghosts.fields() {
                let mut contributions = BTreeMap::new();
                for tidx in upper.components.keys() {
                    let d = exterior_derivative(ghosts, tidx, n);
                    let part = d.filter(|m| m.factors().iter().any(|(v, _)| &v.field == ghost));
                    if !part.is_zero() {
                        contributions.insert(upper.get(tidx).clone(), part);
                    }
                }
                let density = generators_from_gauge(&fields, n, ghost, &contributions)?;
                let antifield = fields
                    .iter()
                    .find(|a| a.dual_of.as_deref() == Some(ghost.name.as_str()))
                    .expect("every ghost has an antifield")
                    .clone();
                stages[k].generators.push(Generator {
                    ghost: ghost.clone(),
                    antifield,
                    density,
                });
            }
            upper = ghosts;
        }
    }
    let mut model = Model::new(
        format!("bf:n{n}p{}q{}", spec.p, spec.q),
        format!("Topological BF theory on R^{n}: {}-form A, {}-form B", spec.p, spec.q),
        n,
        default_coords(n),
        fields,
        lagrangian,
        stages,
        None,
    )?;
    if spec.q % 2 == 1 {
        model
            .notes
            .push(format!("q = {} is odd; the construction does not depend on the parity of q", spec.q));
    }
    Ok(model)
}
