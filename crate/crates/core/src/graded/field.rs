use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Deref};
use std::sync::Arc;

use super::MultiIndex;

/// Grassmann parity.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bits(bits: u32) -> Parity {
        if bits.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// `(−1)^{[a][b]}` as a boolean "negate".
    pub fn sign_swap(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bits(self.bit() + rhs.bit())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What a basis element is in the field-antifield basis. Ghost stages count
/// from zero (`c^r` is stage 0, `c^{r_k}` is stage k).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Role {
    Field,
    Ghost { stage: u32 },
    Antifield,
    GhostAntifield { stage: u32 },
}

impl Role {
    fn rank(self) -> (u32, u32) {
        match self {
            Role::Field => (0, 0),
            Role::Ghost { stage } => (1, stage),
            Role::Antifield => (2, 0),
            Role::GhostAntifield { stage } => (3, stage),
        }
    }

    pub fn is_antifield(self) -> bool {
        matches!(self, Role::Antifield | Role::GhostAntifield { .. })
    }
}

/// Declaration of one scalar basis element.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldDecl {
    pub name: String,
    pub parity: Parity,
    /// `gh`: `k + 1` for a stage-k ghost, zero otherwise.
    pub ghost_number: i32,
    /// `Ant`: 1 for `s̄_A`, `k + 2` for `c̄_{r_k}`, zero otherwise.
    pub antifield_number: u32,
    pub role: Role,
    pub dual_of: Option<String>,
}

impl FieldDecl {
    /// Total ghost number `gh − Ant`, the grading preserved by every
    /// KT-BRST construction.
    pub fn total_ghost_number(&self) -> i32 {
        self.ghost_number - self.antifield_number as i32
    }
}

/// Shared handle to a [`FieldDecl`]. Ordering is the canonical factor order:
/// antifield number, then role, then name.
#[derive(Clone, Debug)]
pub struct Field(Arc<FieldDecl>);

impl Field {
    pub fn new(decl: FieldDecl) -> Field {
        Field(Arc::new(decl))
    }

    /// An original (physical) field `s^A`.
    #[allow(clippy::self_named_constructors)]
    pub fn field(name: impl Into<String>, parity: Parity) -> Field {
        Field::new(FieldDecl {
            name: name.into(),
            parity,
            ghost_number: 0,
            antifield_number: 0,
            role: Role::Field,
            dual_of: None,
        })
    }

    /// A ghost `c^{r_k}` of the given stage, with `gh = k + 1`.
    pub fn ghost(name: impl Into<String>, parity: Parity, stage: u32) -> Field {
        Field::new(FieldDecl {
            name: name.into(),
            parity,
            ghost_number: stage as i32 + 1,
            antifield_number: 0,
            role: Role::Ghost { stage },
            dual_of: None,
        })
    }

    /// The antifield dual to `of`: opposite parity, antifield number 1 for a
    /// field and `k + 2` for a stage-k ghost.
    pub fn antifield_of(name: impl Into<String>, of: &Field) -> Field {
        let (role, ant) = match of.role {
            Role::Field => (Role::Antifield, 1),
            Role::Ghost { stage } => (Role::GhostAntifield { stage }, stage + 2),
            Role::Antifield | Role::GhostAntifield { .. } => {
                panic!("cannot take the antifield of antifield `{}`", of.name)
            }
        };
        Field::new(FieldDecl {
            name: name.into(),
            parity: of.parity.flip(),
            ghost_number: 0,
            antifield_number: ant,
            role,
            dual_of: Some(of.name.clone()),
        })
    }

    pub fn decl(&self) -> &FieldDecl {
        &self.0
    }

    /// The zero-order jet variable of this field.
    pub fn var(&self, n: usize) -> JetVar {
        JetVar::new(self.clone(), MultiIndex::zero(n))
    }

    pub fn jet(&self, index: MultiIndex) -> JetVar {
        JetVar::new(self.clone(), index)
    }

    fn sort_key(&self) -> (u32, (u32, u32), &str) {
        (self.antifield_number, self.role.rank(), self.name.as_str())
    }
}

impl Deref for Field {
    type Target = FieldDecl;
    fn deref(&self) -> &FieldDecl {
        &self.0
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl Ord for Field {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.sort_key().cmp(&other.sort_key()).then_with(|| {
            let a = &*self.0;
            let b = &*other.0;
            (a.parity, a.ghost_number, &a.dual_of).cmp(&(b.parity, b.ghost_number, &b.dual_of))
        })
    }
}

impl PartialOrd for Field {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// A jet coordinate `s^A_Λ`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct JetVar {
    pub field: Field,
    pub index: MultiIndex,
}

impl JetVar {
    pub fn new(field: Field, index: MultiIndex) -> Self {
        JetVar { field, index }
    }

    pub fn parity(&self) -> Parity {
        self.field.parity
    }

    pub fn is_odd(&self) -> bool {
        self.field.parity.is_odd()
    }

    /// `s^A_{λ+Λ}`.
    pub fn shifted(&self, coord: usize) -> JetVar {
        JetVar::new(self.field.clone(), self.index.plus_coord(coord))
    }

    pub fn render(&self, coord_names: &[String]) -> String {
        if self.index.is_zero() {
            self.field.name.clone()
        } else {
            format!("{}{}", self.field.name, self.index.render(coord_names))
        }
    }
}

impl fmt::Display for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index.is_zero() {
            write!(f, "{}", self.field.name)
        } else {
            write!(f, "{}{}", self.field.name, self.index)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antifield_gradings() {
        let y = Field::field("y", Parity::Even);
        let ybar = Field::antifield_of("y_bar", &y);
        assert_eq!(ybar.parity, Parity::Odd);
        assert_eq!(ybar.antifield_number, 1);
        assert_eq!(ybar.role, Role::Antifield);

        let c = Field::ghost("c", Parity::Even, 1);
        assert_eq!(c.ghost_number, 2);
        let cbar = Field::antifield_of("c_bar", &c);
        assert_eq!(cbar.antifield_number, 3);
        assert_eq!(cbar.parity, Parity::Odd);
        assert_eq!(cbar.total_ghost_number(), -3);
        assert_eq!(cbar.dual_of.as_deref(), Some("c"));
    }

    #[test]
    fn canonical_field_order_groups_antifields_last() {
        let y = Field::field("z", Parity::Even);
        let c = Field::ghost("a", Parity::Odd, 0);
        let ybar = Field::antifield_of("b", &y);
        let cbar = Field::antifield_of("a_bar", &c);
        let mut v = vec![cbar.clone(), ybar.clone(), c.clone(), y.clone()];
        v.sort();
        assert_eq!(v, vec![y, c, ybar, cbar]);
    }

    #[test]
    fn jet_parity_follows_field() {
        let c = Field::ghost("c", Parity::Odd, 0);
        let v = c.var(2).shifted(1).shifted(1);
        assert!(v.is_odd());
        assert_eq!(v.to_string(), "c[x1,x1]");
    }
}
