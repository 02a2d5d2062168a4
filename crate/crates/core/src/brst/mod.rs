//! The field-antifield constructions built on a [`Model`]: Noether and
//! higher-stage identities, the Koszul–Tate operator, the gauge operator,
//! extended Lagrangians, the antibracket and the master equation.
//!
//! Generators and extended Lagrangians are written with coefficients to the
//! left of antifields, `Δ = Σ Δ^{A,Λ} s̄_{ΛA}`, so that right variational
//! derivatives with respect to antifields strip them off without signs.

mod model;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

pub use model::{AlphaWitness, Generator, Model, ModelError, NoetherStage};

use crate::derivation::{
    compose_on_components, is_nilpotent, is_variational_symmetry, Chirality, Derivation, NilpotencyVerdict,
};
use crate::graded::{Density, Field, GradedPoly, Parity, Role};
use crate::jet::{
    adjoint, euler_lagrange, is_dh_exact, total_derivative_multi, variational_derivative_left,
    variational_derivative_right, EulerLagrange, LinearDiffOp,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotEvaluated,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotEvaluated => "not-evaluated",
        })
    }
}

/// A nonzero polynomial that explains a failed check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub label: String,
    pub value: GradedPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub witnesses: Vec<Witness>,
    pub note: Option<String>,
}

impl Verdict {
    pub fn pass() -> Verdict {
        Verdict {
            status: Status::Pass,
            witnesses: Vec::new(),
            note: None,
        }
    }

    pub fn fail(note: impl Into<String>) -> Verdict {
        Verdict {
            status: Status::Fail,
            witnesses: Vec::new(),
            note: Some(note.into()),
        }
    }

    pub fn not_evaluated(note: impl Into<String>) -> Verdict {
        Verdict {
            status: Status::NotEvaluated,
            witnesses: Vec::new(),
            note: Some(note.into()),
        }
    }

    /// Pass iff every witness vanishes; zero witnesses are dropped.
    pub fn from_residuals<I>(residuals: I) -> Verdict
    where
        I: IntoIterator<Item = (String, GradedPoly)>,
    {
        let witnesses: Vec<Witness> = residuals
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(label, value)| Witness { label, value })
            .collect();
        Verdict {
            status: if witnesses.is_empty() { Status::Pass } else { Status::Fail },
            witnesses,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Verdict {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

fn el_witnesses(residual: BTreeMap<Field, GradedPoly>) -> Vec<(String, GradedPoly)> {
    residual
        .into_iter()
        .map(|(f, p)| (format!("δ/δ{}", f.name), p))
        .collect()
}

fn exactness_verdict(density: GradedPoly) -> Verdict {
    let ex = is_dh_exact(&Density::new(density));
    Verdict::from_residuals(el_witnesses(ex.residual))
}

/// `𝓔_A` of the model's Lagrangian for every original field.
pub fn model_euler_lagrange(m: &Model) -> EulerLagrange {
    euler_lagrange(&Density::new(m.lagrangian.clone()), &m.original_fields())
}

/// The field an operator key refers to: original fields stand for
/// themselves, their antifields for their duals.
fn resolve_original(m: &Model, key: &Field) -> Result<Field, ModelError> {
    let declared = m.lookup(&key.name)?;
    match declared.role {
        Role::Field => Ok(declared.clone()),
        Role::Antifield => m
            .dual_of(declared)
            .cloned()
            .ok_or_else(|| ModelError::UnknownField(key.name.clone())),
        _ => Err(ModelError::UnknownField(key.name.clone())),
    }
}

/// Verifies `Σ Φ^{A,Λ} d_Λ 𝓔_A = 0` exactly.
pub fn check_noether_identity(m: &Model, phi: &LinearDiffOp) -> Result<Verdict, ModelError> {
    let el = model_euler_lagrange(m);
    let mut residual = GradedPoly::zero();
    for ((key, idx), coeff) in &phi.coeffs {
        let field = resolve_original(m, key)?;
        residual += coeff.mul(&total_derivative_multi(&el.get(&field), idx));
    }
    Ok(Verdict::from_residuals([("residual".to_string(), residual)]))
}

/// The Noether identity of every stage-0 generator, labelled by its ghost.
pub fn check_noether_identities(m: &Model) -> Result<Vec<(String, Verdict)>, ModelError> {
    let Ok(stage) = m.stage(0) else {
        return Ok(Vec::new());
    };
    stage
        .generators
        .iter()
        .map(|g| Ok((g.ghost.name.clone(), check_noether_identity(m, &g.linear_part())?)))
        .collect()
}

/// `δ̄ = ∂←^A 𝓔_A` on the antifields of the original fields.
pub fn delta_bar(m: &Model) -> Result<Derivation, ModelError> {
    kt_up_to(m, None)
}

/// The Koszul–Tate operator with generators of stages `< limit` only.
fn kt_up_to(m: &Model, limit: Option<u32>) -> Result<Derivation, ModelError> {
    let el = model_euler_lagrange(m);
    let mut comps = BTreeMap::new();
    for f in m.original_fields() {
        if let Some(bar) = m.antifield_of(&f) {
            comps.insert(bar.clone(), el.get(&f));
        }
    }
    if let Some(limit) = limit {
        for (k, g) in m.generators() {
            if k < limit {
                comps.insert(g.antifield.clone(), g.density.clone());
            }
        }
    }
    Ok(Derivation::new(Chirality::Right, Parity::Odd, 1, comps)?)
}

/// The Koszul–Tate operator: `s̄_A ↦ 𝓔_A`, `c̄_{r_k} ↦ Δ_{r_k}`.
pub fn build_kt_operator(m: &Model) -> Result<Derivation, ModelError> {
    kt_up_to(m, Some(u32::MAX))
}

/// Checks the stage-k identities `δ_KT(Δ_{r_k}) = 0`, where only generators
/// of stages below `k` enter: the linear part yields
/// `Σ Δ^{r_{k−1},Λ} d_Λ Δ_{r_{k−1}}` and the h-part supplies the δ̄-exact
/// right side.
pub fn check_stage_identity(m: &Model, k: u32) -> Result<Vec<(String, Verdict)>, ModelError> {
    if k == 0 {
        return Err(ModelError::MissingStage(0));
    }
    m.stage(k - 1)?;
    let stage = m.stage(k)?;
    let kt = kt_up_to(m, Some(k))?;
    Ok(stage
        .generators
        .iter()
        .map(|g| {
            let residual = kt.apply(&g.density);
            (g.antifield.name.clone(), Verdict::from_residuals([("residual".to_string(), residual)]))
        })
        .collect())
}

/// The gauge operator split by stage: `parts[k]` is `u_(k)`, with components
/// on the stage-(k−1) ghosts (the original fields for `k = 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeOperator {
    pub parts: Vec<Derivation>,
    pub total: Derivation,
}

/// `u^{A} = Σ_Λ c^{r}_Λ η(Δ^{A}_{r})^Λ`, stage by stage.
pub fn build_gauge_operator(m: &Model) -> Result<GaugeOperator, ModelError> {
    let mut parts = Vec::with_capacity(m.stages.len());
    for stage in &m.stages {
        let mut comps: BTreeMap<Field, GradedPoly> = BTreeMap::new();
        for g in &stage.generators {
            let eta = adjoint(&g.linear_part());
            for ((bar, idx), coeff) in &eta.coeffs {
                let target = m
                    .dual_of(bar)
                    .cloned()
                    .ok_or_else(|| ModelError::UnknownField(bar.name.clone()))?;
                let ghost = GradedPoly::var(g.ghost.jet(idx.clone()));
                *comps.entry(target).or_default() += ghost.mul(coeff);
            }
        }
        parts.push(Derivation::new(Chirality::Left, Parity::Odd, 1, comps)?);
    }
    let mut total = Derivation::zero(Chirality::Left, Parity::Odd, 1);
    for p in &parts {
        total = total.add(p)?;
    }
    Ok(GaugeOperator { parts, total })
}

/// Stage 0: `u` is a variational symmetry of `L`. Stage `k ≥ 1`:
/// `u_(k)(u_(k−1)^T)` vanishes, or equals `δ̄(α^T)` when an α-witness is
/// supplied for the target `T`.
pub fn check_gauge_symmetry_conditions(
    m: &Model,
    u: &GaugeOperator,
) -> Result<Vec<(String, Verdict)>, ModelError> {
    let l = Density::new(m.lagrangian.clone());
    let stage0 = u
        .parts
        .first()
        .cloned()
        .unwrap_or_else(|| Derivation::zero(Chirality::Left, Parity::Odd, 1));
    let sym = is_variational_symmetry(&stage0, &l);
    let mut out = vec![(
        "stage-0".to_string(),
        Verdict::from_residuals(el_witnesses(sym.residual)),
    )];
    let dbar = delta_bar(m)?;
    for k in 1..u.parts.len() {
        let composed = compose_on_components(&u.parts[k], &u.parts[k - 1]);
        let mut used_alpha = false;
        let residuals: Vec<(String, GradedPoly)> = composed
            .into_iter()
            .map(|(target, value)| {
                let alpha = m
                    .alpha_witnesses
                    .iter()
                    .find(|w| w.stage == k as u32 && w.target.name == target.name);
                let value = match alpha {
                    Some(w) => {
                        used_alpha = true;
                        value - dbar.apply(&w.alpha)
                    }
                    None => value,
                };
                (target.name.clone(), value)
            })
            .collect();
        let note = if used_alpha { "on-shell via α" } else { "off-shell" };
        out.push((format!("stage-{k}"), Verdict::from_residuals(residuals).with_note(note)));
    }
    Ok(out)
}

/// `L_e = L + Σ c^{r_k} Δ_{r_k}`.
pub fn build_extended_lagrangian(m: &Model) -> GradedPoly {
    let mut out = m.lagrangian.clone();
    for (_, g) in m.generators() {
        out += GradedPoly::var(g.ghost.var(m.base_dim)).mul(&g.density);
    }
    out
}

/// `u_E = u_e + ξ`.
pub fn build_brst_operator(m: &Model) -> Result<Derivation, ModelError> {
    Ok(build_gauge_operator(m)?.total.add(&m.xi())?)
}

/// `L_E = L_e + Σ ξ^{g} ḡ` over the ghosts `g`.
pub fn build_proper_solution(m: &Model) -> Result<GradedPoly, ModelError> {
    let mut out = build_extended_lagrangian(m);
    for (ghost, xi) in m.xi().components() {
        let bar = m
            .antifield_of(ghost)
            .ok_or_else(|| ModelError::MissingGhostAntifield(ghost.name.clone()))?;
        out += xi.mul(&GradedPoly::var(bar.var(m.base_dim)));
    }
    Ok(out)
}

/// `Σ_a z^a z̄_a` over every dual pair.
pub fn pairing_density(m: &Model) -> Result<GradedPoly, ModelError> {
    let mut out = GradedPoly::zero();
    for (z, bar) in m.dual_pairs()? {
        out += GradedPoly::var(z.var(m.base_dim)).mul(&GradedPoly::var(bar.var(m.base_dim)));
    }
    Ok(out)
}

/// Checks that `L_E − L − u_E(Σ z^a z̄_a)`, with its part of antifield
/// degree ≥ 2 removed, is a total divergence. The same check applies to
/// `L_e` and `u_e` when `use_xi` is false.
pub fn check_lagrangian_consistency(m: &Model, use_xi: bool) -> Result<Verdict, ModelError> {
    let (extended, op) = if use_xi {
        (build_proper_solution(m)?, build_brst_operator(m)?)
    } else {
        (build_extended_lagrangian(m), build_gauge_operator(m)?.total)
    };
    let diff = extended - m.lagrangian.clone() - op.apply(&pairing_density(m)?);
    let diff = diff.filter(|mono| mono.antifield_degree() < 2);
    Ok(exactness_verdict(diff))
}

/// `{P, Q} = (δ←P/δz̄_a)(δQ/δz^a) + (−1)^{[Q]([Q]+1)} (δ←Q/δz̄_a)(δP/δz^a)`.
/// The twist exponent `[Q]([Q]+1)` is even for either parity, so the second
/// term always enters with a plus sign.
pub fn antibracket(m: &Model, p: &GradedPoly, q: &GradedPoly) -> Result<GradedPoly, ModelError> {
    let mut out = GradedPoly::zero();
    for (z, bar) in m.dual_pairs()? {
        out += variational_derivative_right(p, &bar).mul(&variational_derivative_left(q, &z));
        out += variational_derivative_right(q, &bar).mul(&variational_derivative_left(p, &z));
    }
    Ok(out)
}

/// `{P, P}` is a total divergence.
pub fn check_master_equation(m: &Model, p: &GradedPoly) -> Result<Verdict, ModelError> {
    Ok(exactness_verdict(antibracket(m, p, p)?))
}

/// `υ_P = (δ←P/δz̄_a) ∂/∂z^a`.
pub fn upsilon(m: &Model, p: &GradedPoly) -> Result<Derivation, ModelError> {
    let mut comps = BTreeMap::new();
    for (z, bar) in m.dual_pairs()? {
        comps.insert(z, variational_derivative_right(p, &bar));
    }
    Ok(Derivation::infer(Chirality::Left, comps)?)
}

/// `ῡ_P = ∂←/∂z̄_a (δP/δz^a)`.
pub fn upsilon_bar(m: &Model, p: &GradedPoly) -> Result<Derivation, ModelError> {
    let mut comps = BTreeMap::new();
    for (z, bar) in m.dual_pairs()? {
        comps.insert(bar, variational_derivative_left(p, &z));
    }
    Ok(Derivation::infer(Chirality::Right, comps)?)
}

/// `ϑ_P = υ_P + ῡ_P`, the latter converted to a left derivation.
pub fn theta(m: &Model, p: &GradedPoly) -> Result<Derivation, ModelError> {
    Ok(upsilon(m, p)?.add(&upsilon_bar(m, p)?.to_left())?)
}

/// The four equivalent conditions on `P`: the master equation, `υ_P` and
/// `ῡ_P` as variational symmetries of `P`, and nilpotency of `ϑ_P`.
pub fn equivalence_suite(m: &Model, p: &GradedPoly) -> Result<Vec<(String, Verdict)>, ModelError> {
    let density = Density::new(p.clone());
    let symmetry = |d: Result<Derivation, ModelError>| match d {
        Ok(d) => Verdict::from_residuals(el_witnesses(is_variational_symmetry(&d, &density).residual)),
        Err(e) => Verdict::fail(e.to_string()),
    };
    let nilpotent = match theta(m, p) {
        Ok(t) => match is_nilpotent(&t) {
            NilpotencyVerdict::Nilpotent => Verdict::pass(),
            NilpotencyVerdict::EvenParity => Verdict::fail("ϑ is even"),
            NilpotencyVerdict::Fails(map) => {
                Verdict::from_residuals(map.into_iter().map(|(f, p)| (format!("ϑ²({})", f.name), p)))
            }
        },
        Err(e) => Verdict::fail(e.to_string()),
    };
    Ok(vec![
        ("master-equation".to_string(), check_master_equation(m, p)?),
        ("upsilon-symmetry".to_string(), symmetry(upsilon(m, p))),
        ("upsilon-bar-symmetry".to_string(), symmetry(upsilon_bar(m, p))),
        ("theta-nilpotent".to_string(), nilpotent),
    ])
}

/// Renders a nilpotency verdict as a [`Verdict`].
pub fn nilpotency_verdict(d: &Derivation) -> Verdict {
    match is_nilpotent(d) {
        NilpotencyVerdict::Nilpotent => Verdict::pass(),
        NilpotencyVerdict::EvenParity => Verdict::fail("derivation is even"),
        NilpotencyVerdict::Fails(map) => {
            Verdict::from_residuals(map.into_iter().map(|(f, p)| (format!("on {}", f.name), p)))
        }
    }
}

/// Reads off Noether generators from gauge-operator components. Each
/// contribution `Σ_Λ g_Λ f^{T,Λ}` of ghost `g` to the component on `T`
/// yields `Δ_g = Σ η(f)^{T,Λ} T̄_Λ`, the inverse of [`build_gauge_operator`]
/// since `η∘η = id`.
pub fn generators_from_gauge(
    m_fields: &[Field],
    base_dim: usize,
    ghost: &Field,
    contributions: &BTreeMap<Field, GradedPoly>,
) -> Result<GradedPoly, ModelError> {
    let mut op = LinearDiffOp::new();
    for (target, contrib) in contributions {
        let bar = m_fields
            .iter()
            .find(|a| a.role.is_antifield() && a.dual_of.as_deref() == Some(target.name.as_str()))
            .ok_or_else(|| ModelError::Unpaired(target.name.clone()))?;
        for v in contrib.jet_vars() {
            if &v.field == ghost {
                op.insert(bar.clone(), v.index.clone(), contrib.partial_left(&v));
            }
        }
    }
    let eta = adjoint(&op);
    let mut out = GradedPoly::zero();
    for ((bar, idx), coeff) in &eta.coeffs {
        debug_assert_eq!(idx.dim(), base_dim);
        out += coeff.mul(&GradedPoly::var(bar.jet(idx.clone())));
    }
    Ok(out)
}
