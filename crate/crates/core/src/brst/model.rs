use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::derivation::{Chirality, Derivation, DerivationError};
use crate::graded::{Field, GradedPoly, Homogeneity, Parity, Role};
use crate::jet::LinearDiffOp;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("duplicate field name `{0}`")]
    DuplicateField(String),
    #[error("unknown field `{0}`")]
    UnknownField(String),
    #[error("antifield `{name}` is dual to `{dual}`, which is not declared")]
    DanglingDual { name: String, dual: String },
    #[error("antifield `{name}` has parity {found}, expected {expected}")]
    AntifieldParity {
        name: String,
        expected: Parity,
        found: Parity,
    },
    #[error("`{0}` has inconsistent gradings for its role")]
    RoleGrading(String),
    #[error("the Lagrangian must be even with zero ghost and antifield number")]
    LagrangianGrading,
    #[error("stages must be numbered 0, 1, … in order; found stage {0}")]
    StageOrder(u32),
    #[error("generator for `{ghost}`: {reason}")]
    Generator { ghost: String, reason: String },
    #[error("ghost `{0}` has no Noether generator at its stage")]
    MissingGenerator(String),
    #[error("ghost `{0}` has no antifield")]
    MissingGhostAntifield(String),
    #[error("stage {0} is not present")]
    MissingStage(u32),
    #[error("`{0}` has no dual antifield")]
    Unpaired(String),
    #[error("ξ component on `{0}`, which is not a ghost")]
    XiTarget(String),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
}

/// One generator `Δ_{r_k}` of the stage-k Noether identities, attached to
/// its ghost `c^{r_k}` and ghost-antifield `c̄_{r_k}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Generator {
    pub ghost: Field,
    pub antifield: Field,
    /// `Δ_{r_k}` in the antifield basis; antifield number `k + 1`.
    pub density: GradedPoly,
}

impl Generator {
    /// Terms of antifield degree one: `Σ Δ^{B,Λ} b̄_{ΛB}`.
    pub fn linear_density(&self) -> GradedPoly {
        self.density.filter(|m| m.antifield_degree() == 1)
    }

    /// The remainder of antifield degree at least two.
    pub fn h_part(&self) -> GradedPoly {
        self.density.filter(|m| m.antifield_degree() >= 2)
    }

    /// The coefficients `Δ^{B,Λ}` of the linear part, keyed by the antifield
    /// `b̄_B` they multiply. Coefficients sit to the left of the antifield.
    pub fn linear_part(&self) -> LinearDiffOp {
        let lin = self.linear_density();
        let mut op = LinearDiffOp::new();
        let antifield_jets: BTreeSet<_> = lin
            .jet_vars()
            .into_iter()
            .filter(|v| v.field.role.is_antifield())
            .collect();
        for v in antifield_jets {
            let coeff = lin.partial_right(&v);
            op.insert(v.field.clone(), v.index.clone(), coeff);
        }
        op
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NoetherStage {
    pub stage: u32,
    pub generators: Vec<Generator>,
}

/// Optional right-hand side of a k-stage gauge symmetry condition:
/// `u_(k)(u^{T}) = δ̄(α^{T})` for a stage-(k−2) target `T`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlphaWitness {
    pub stage: u32,
    pub target: Field,
    pub alpha: GradedPoly,
}

/// Complete field content and Noether data of a Lagrangian theory.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Model {
    pub name: String,
    pub description: String,
    pub base_dim: usize,
    pub coords: Vec<String>,
    pub fields: Vec<Field>,
    pub lagrangian: GradedPoly,
    pub stages: Vec<NoetherStage>,
    /// The ξ terms of the BRST operator, a left derivation on ghosts.
    pub brst_xi: Option<Derivation>,
    pub alpha_witnesses: Vec<AlphaWitness>,
    pub notes: Vec<String>,
}

impl Model {
    /// Assembles and validates a model.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        description: impl Into<String>,
        base_dim: usize,
        coords: Vec<String>,
        fields: Vec<Field>,
        lagrangian: GradedPoly,
        stages: Vec<NoetherStage>,
        brst_xi: Option<Derivation>,
    ) -> Result<Model, ModelError> {
        let m = Model {
            name: name.into(),
            description: description.into(),
            base_dim,
            coords,
            fields,
            lagrangian,
            stages,
            brst_xi,
            alpha_witnesses: Vec::new(),
            notes: Vec::new(),
        };
        m.validate()?;
        Ok(m)
    }

    pub fn field(&self, name: &str) -> Option<&Field> {
        self.fields.iter().find(|f| f.name == name)
    }

    pub fn lookup(&self, name: &str) -> Result<&Field, ModelError> {
        self.field(name)
            .ok_or_else(|| ModelError::UnknownField(name.to_string()))
    }

    pub fn original_fields(&self) -> Vec<Field> {
        self.fields
            .iter()
            .filter(|f| f.role == Role::Field)
            .cloned()
            .collect()
    }

    pub fn ghosts(&self) -> Vec<Field> {
        self.fields
            .iter()
            .filter(|f| matches!(f.role, Role::Ghost { .. }))
            .cloned()
            .collect()
    }

    /// The antifield declared dual to `f`.
    pub fn antifield_of(&self, f: &Field) -> Option<&Field> {
        self.fields
            .iter()
            .find(|a| a.role.is_antifield() && a.dual_of.as_deref() == Some(f.name.as_str()))
    }

    /// The field an antifield is dual to.
    pub fn dual_of(&self, antifield: &Field) -> Option<&Field> {
        antifield.dual_of.as_deref().and_then(|d| self.field(d))
    }

    /// All `(z^a, z̄_a)` pairs; fails if a field or ghost has no antifield.
    pub fn dual_pairs(&self) -> Result<Vec<(Field, Field)>, ModelError> {
        self.fields
            .iter()
            .filter(|f| !f.role.is_antifield())
            .map(|f| {
                self.antifield_of(f)
                    .map(|a| (f.clone(), a.clone()))
                    .ok_or_else(|| ModelError::Unpaired(f.name.clone()))
            })
            .collect()
    }

    pub fn stage(&self, k: u32) -> Result<&NoetherStage, ModelError> {
        self.stages
            .get(k as usize)
            .filter(|s| s.stage == k)
            .ok_or(ModelError::MissingStage(k))
    }

    /// Reducibility depth `N`, or `None` for a model with no stage data.
    pub fn reducibility(&self) -> Option<u32> {
        self.stages.last().map(|s| s.stage)
    }

    pub fn generators(&self) -> impl Iterator<Item = (u32, &Generator)> {
        self.stages
            .iter()
            .flat_map(|s| s.generators.iter().map(move |g| (s.stage, g)))
    }

    /// `ξ` as a left derivation, zero when the model supplies none.
    pub fn xi(&self) -> Derivation {
        self.brst_xi
            .clone()
            .unwrap_or_else(|| Derivation::zero(Chirality::Left, Parity::Odd, 1))
    }

    pub fn render_poly(&self, p: &GradedPoly) -> String {
        p.render(&self.coords)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let mut names = BTreeSet::new();
        for f in &self.fields {
            if !names.insert(f.name.as_str()) {
                return Err(ModelError::DuplicateField(f.name.clone()));
            }
        }
        for f in &self.fields {
            self.validate_decl(f)?;
        }
        let l = &self.lagrangian;
        let ok = matches!(l.parity(), Homogeneity::Zero | Homogeneity::Pure(Parity::Even))
            && matches!(l.ghost_number(), Homogeneity::Zero | Homogeneity::Pure(0))
            && matches!(l.antifield_number(), Homogeneity::Zero | Homogeneity::Pure(0));
        if !ok {
            return Err(ModelError::LagrangianGrading);
        }
        self.check_declared(l)?;

        let mut covered = BTreeSet::new();
        for (i, stage) in self.stages.iter().enumerate() {
            if stage.stage != i as u32 {
                return Err(ModelError::StageOrder(stage.stage));
            }
            for g in &stage.generators {
                self.validate_generator(stage.stage, g)?;
                covered.insert(g.ghost.name.clone());
            }
        }
        for ghost in self.ghosts() {
            if self.antifield_of(&ghost).is_none() {
                return Err(ModelError::MissingGhostAntifield(ghost.name.clone()));
            }
            if !covered.contains(&ghost.name) {
                return Err(ModelError::MissingGenerator(ghost.name.clone()));
            }
        }
        if let Some(xi) = &self.brst_xi {
            for (f, p) in xi.components() {
                if !matches!(f.role, Role::Ghost { .. }) {
                    return Err(ModelError::XiTarget(f.name.clone()));
                }
                self.check_declared(p)?;
            }
        }
        for w in &self.alpha_witnesses {
            self.check_declared(&w.alpha)?;
            if self.field(&w.target.name).is_none() {
                return Err(ModelError::UnknownField(w.target.name.clone()));
            }
        }
        Ok(())
    }

    fn validate_decl(&self, f: &Field) -> Result<(), ModelError> {
        match f.role {
            Role::Field => {
                if f.ghost_number != 0 || f.antifield_number != 0 || f.dual_of.is_some() {
                    return Err(ModelError::RoleGrading(f.name.clone()));
                }
            }
            Role::Ghost { stage } => {
                if f.ghost_number != stage as i32 + 1 || f.antifield_number != 0 || f.dual_of.is_some() {
                    return Err(ModelError::RoleGrading(f.name.clone()));
                }
            }
            Role::Antifield | Role::GhostAntifield { .. } => {
                let dual_name = f
                    .dual_of
                    .as_deref()
                    .ok_or_else(|| ModelError::RoleGrading(f.name.clone()))?;
                let dual = self.field(dual_name).ok_or_else(|| ModelError::DanglingDual {
                    name: f.name.clone(),
                    dual: dual_name.to_string(),
                })?;
                let expected_ant = match (f.role, dual.role) {
                    (Role::Antifield, Role::Field) => 1,
                    (Role::GhostAntifield { stage }, Role::Ghost { stage: s }) if stage == s => stage + 2,
                    _ => return Err(ModelError::RoleGrading(f.name.clone())),
                };
                if f.antifield_number != expected_ant || f.ghost_number != 0 {
                    return Err(ModelError::RoleGrading(f.name.clone()));
                }
                if f.parity != dual.parity.flip() {
                    return Err(ModelError::AntifieldParity {
                        name: f.name.clone(),
                        expected: dual.parity.flip(),
                        found: f.parity,
                    });
                }
            }
        }
        Ok(())
    }

    fn validate_generator(&self, k: u32, g: &Generator) -> Result<(), ModelError> {
        let fail = |reason: String| ModelError::Generator {
            ghost: g.ghost.name.clone(),
            reason,
        };
        if g.ghost.role != (Role::Ghost { stage: k }) {
            return Err(fail(format!("`{}` is not a stage-{k} ghost", g.ghost.name)));
        }
        if g.antifield.dual_of.as_deref() != Some(g.ghost.name.as_str()) {
            return Err(fail(format!("`{}` is not the antifield of the ghost", g.antifield.name)));
        }
        if self.field(&g.ghost.name) != Some(&g.ghost) || self.field(&g.antifield.name) != Some(&g.antifield) {
            return Err(fail("ghost or antifield not declared in the model".into()));
        }
        self.check_declared(&g.density)?;
        match g.density.antifield_number() {
            Homogeneity::Zero => {}
            Homogeneity::Pure(a) if a == k + 1 => {}
            other => return Err(fail(format!("antifield number {other:?}, expected {}", k + 1))),
        }
        if !matches!(g.density.ghost_number(), Homogeneity::Zero | Homogeneity::Pure(0)) {
            return Err(fail("generators must be ghost-free".into()));
        }
        match g.density.parity() {
            Homogeneity::Zero => {}
            Homogeneity::Pure(p) if p.flip() == g.antifield.parity => {}
            Homogeneity::Pure(p) => {
                return Err(fail(format!(
                    "generator parity {p} requires an antifield of parity {}",
                    p.flip()
                )))
            }
            Homogeneity::Mixed => return Err(fail("generator is not parity-homogeneous".into())),
        }
        Ok(())
    }

    fn check_declared(&self, p: &GradedPoly) -> Result<(), ModelError> {
        for f in p.fields() {
            match self.field(&f.name) {
                Some(decl) if *decl == f => {}
                _ => return Err(ModelError::UnknownField(f.name.clone())),
            }
        }
        Ok(())
    }

    /// Field counts by role: (fields, ghosts, antifields).
    pub fn counts(&self) -> (usize, usize, usize) {
        let mut c = (0, 0, 0);
        for f in &self.fields {
            match f.role {
                Role::Field => c.0 += 1,
                Role::Ghost { .. } => c.1 += 1,
                _ => c.2 += 1,
            }
        }
        c
    }

    /// Ghosts grouped by stage.
    pub fn ghosts_by_stage(&self) -> BTreeMap<u32, Vec<Field>> {
        let mut out: BTreeMap<u32, Vec<Field>> = BTreeMap::new();
        for f in &self.fields {
            if let Role::Ghost { stage } = f.role {
                out.entry(stage).or_default().push(f.clone());
            }
        }
        out
    }
}
