use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Field, JetVar, Parity};

pub type Rational = BigRational;

/// Shorthand for an integer rational.
pub fn int(k: i64) -> Rational {
    Rational::from_integer(BigInt::from(k))
}

/// Shorthand for `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Result of a grading query on a polynomial.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Homogeneity<T> {
    Zero,
    Pure(T),
    Mixed,
}

impl<T: PartialEq + Copy> Homogeneity<T> {
    fn absorb(self, value: T) -> Self {
        match self {
            Homogeneity::Zero => Homogeneity::Pure(value),
            Homogeneity::Pure(v) if v == value => self,
            _ => Homogeneity::Mixed,
        }
    }

    pub fn pure(self) -> Option<T> {
        match self {
            Homogeneity::Pure(v) => Some(v),
            _ => None,
        }
    }
}

/// A product of jet variables in canonical order, without coefficient.
/// Odd variables carry exponent one; factors are strictly increasing.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    factors: Vec<(JetVar, u32)>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial { factors: Vec::new() }
    }

    pub fn from_var(v: JetVar) -> Monomial {
        Monomial { factors: vec![(v, 1)] }
    }

    pub fn factors(&self) -> &[(JetVar, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bits(self.odd_count() as u32)
    }

    fn odd_count(&self) -> usize {
        self.factors.iter().filter(|(v, _)| v.is_odd()).count()
    }

    pub fn ghost_number(&self) -> i32 {
        self.factors.iter().map(|(v, e)| v.field.ghost_number * *e as i32).sum()
    }

    pub fn antifield_number(&self) -> u32 {
        self.factors.iter().map(|(v, e)| v.field.antifield_number * e).sum()
    }

    /// Polynomial degree in antifield variables.
    pub fn antifield_degree(&self) -> u32 {
        self.factors
            .iter()
            .filter(|(v, _)| v.field.role.is_antifield())
            .map(|(_, e)| e)
            .sum()
    }

    pub fn exponent_of(&self, v: &JetVar) -> u32 {
        self.factors
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    /// Canonical product. Returns `None` when an odd factor repeats, and
    /// otherwise whether the Koszul sign is negative.
    pub fn mul(&self, other: &Monomial) -> Option<(bool, Monomial)> {
        let a = &self.factors;
        let b = &other.factors;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let mut neg = false;
        let mut odd_left_in_a = self.odd_count();
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    if a[i].0.is_odd() {
                        odd_left_in_a -= 1;
                    }
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    if b[j].0.is_odd() && odd_left_in_a % 2 == 1 {
                        neg = !neg;
                    }
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    if a[i].0.is_odd() {
                        return None;
                    }
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Some((neg, Monomial { factors: out }))
    }

    pub fn render(&self, coord_names: &[String]) -> String {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(v, e)| {
                if *e == 1 {
                    v.render(coord_names)
                } else {
                    format!("{}^{}", v.render(coord_names), e)
                }
            })
            .collect();
        parts.join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.factors.cmp(&other.factors))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in Grassmann-graded jet variables with exact rational
/// coefficients, always held in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GradedPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl GradedPoly {
    pub fn zero() -> GradedPoly {
        GradedPoly::default()
    }

    pub fn one() -> GradedPoly {
        GradedPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> GradedPoly {
        GradedPoly::term(c, Monomial::one())
    }

    pub fn int(k: i64) -> GradedPoly {
        GradedPoly::constant(int(k))
    }

    pub fn var(v: JetVar) -> GradedPoly {
        GradedPoly::term(Rational::one(), Monomial::from_var(v))
    }

    pub fn term(c: Rational, m: Monomial) -> GradedPoly {
        let mut p = GradedPoly::zero();
        p.add_term(m, c);
        p
    }

    /// Brings raw products of jet variables into canonical form: sorts
    /// factors with Koszul signs, kills repeated odd factors, merges powers
    /// and combines like terms.
    pub fn normalize<I>(raw_terms: I) -> GradedPoly
    where
        I: IntoIterator<Item = (Rational, Vec<JetVar>)>,
    {
        let mut out = GradedPoly::zero();
        for (coeff, vars) in raw_terms {
            if let Some((neg, m)) = canonical_product(vars) {
                out.add_term(m, if neg { -coeff } else { coeff });
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Rational)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The constant term, if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> GradedPoly {
        if c.is_zero() {
            return GradedPoly::zero();
        }
        GradedPoly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Keeps the terms whose monomial satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> GradedPoly {
        GradedPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn parity(&self) -> Homogeneity<Parity> {
        self.terms
            .keys()
            .fold(Homogeneity::Zero, |h, m| h.absorb(m.parity()))
    }

    pub fn ghost_number(&self) -> Homogeneity<i32> {
        self.terms
            .keys()
            .fold(Homogeneity::Zero, |h, m| h.absorb(m.ghost_number()))
    }

    pub fn antifield_number(&self) -> Homogeneity<u32> {
        self.terms
            .keys()
            .fold(Homogeneity::Zero, |h, m| h.absorb(m.antifield_number()))
    }

    /// Grading by `gh − Ant`.
    pub fn total_ghost_number(&self) -> Homogeneity<i32> {
        self.terms.keys().fold(Homogeneity::Zero, |h, m| {
            h.absorb(m.ghost_number() - m.antifield_number() as i32)
        })
    }

    /// Splits into (even, odd) parts.
    pub fn split_parity(&self) -> (GradedPoly, GradedPoly) {
        (
            self.filter(|m| m.parity() == Parity::Even),
            self.filter(|m| m.parity() == Parity::Odd),
        )
    }

    /// All jet variables present.
    pub fn jet_vars(&self) -> BTreeSet<JetVar> {
        self.terms
            .keys()
            .flat_map(|m| m.factors.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    /// All fields present.
    pub fn fields(&self) -> BTreeSet<Field> {
        self.terms
            .keys()
            .flat_map(|m| m.factors.iter().map(|(v, _)| v.field.clone()))
            .collect()
    }

    /// Largest jet order of any variable, zero for constants.
    pub fn max_order(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|m| m.factors.iter().map(|(v, _)| v.index.order()))
            .max()
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &GradedPoly) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((neg, m)) = ma.mul(mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> GradedPoly {
        let mut acc = GradedPoly::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Left graded partial derivative `∂^Λ_A` with respect to the jet
    /// variable `v`.
    pub fn partial_left(&self, v: &JetVar) -> GradedPoly {
        self.partial(v, true)
    }

    /// Right graded partial derivative `∂←^Λ_A`.
    pub fn partial_right(&self, v: &JetVar) -> GradedPoly {
        self.partial(v, false)
    }

    fn partial(&self, v: &JetVar, left: bool) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (m, c) in &self.terms {
            let Ok(pos) = m.factors.binary_search_by(|(w, _)| w.cmp(v)) else {
                continue;
            };
            let e = m.factors[pos].1;
            let mut neg = false;
            if v.is_odd() {
                let passed = if left {
                    m.factors[..pos].iter().filter(|(w, _)| w.is_odd()).count()
                } else {
                    m.factors[pos + 1..].iter().filter(|(w, _)| w.is_odd()).count()
                };
                neg = passed % 2 == 1;
            }
            let mut factors = m.factors.clone();
            if e == 1 {
                factors.remove(pos);
            } else {
                factors[pos].1 -= 1;
            }
            let k = c * int(e as i64);
            out.add_term(Monomial { factors }, if neg { -k } else { k });
        }
        out
    }

    /// Applies the left graded derivation of parity `parity` determined by
    /// its values on jet variables. `image` returns `None` for variables the
    /// derivation annihilates.
    pub fn derive_left<F>(&self, parity: Parity, mut image: F) -> GradedPoly
    where
        F: FnMut(&JetVar) -> Option<GradedPoly>,
    {
        let mut cache: BTreeMap<JetVar, Option<GradedPoly>> = BTreeMap::new();
        let mut out = GradedPoly::zero();
        for (m, c) in &self.terms {
            let mut odd_before = 0usize;
            for (i, (v, e)) in m.factors.iter().enumerate() {
                let img = cache.entry(v.clone()).or_insert_with(|| image(v));
                if let Some(img) = img.as_ref().filter(|p| !p.is_zero()) {
                    let mut prefix = m.factors[..i].to_vec();
                    if *e > 1 {
                        prefix.push((v.clone(), e - 1));
                    }
                    let suffix = Monomial {
                        factors: m.factors[i + 1..].to_vec(),
                    };
                    let prefix = Monomial { factors: prefix };
                    let mut k = c * int(*e as i64);
                    if parity.is_odd() && odd_before % 2 == 1 {
                        k = -k;
                    }
                    for (mi, ci) in &img.terms {
                        let Some((n1, m1)) = prefix.mul(mi) else { continue };
                        let Some((n2, m2)) = m1.mul(&suffix) else { continue };
                        let t = &k * ci;
                        out.add_term(m2, if n1 != n2 { -t } else { t });
                    }
                }
                if v.is_odd() {
                    odd_before += 1;
                }
            }
        }
        out
    }

    /// Renders with the given coordinate names. Terms appear in canonical
    /// order; the zero polynomial renders as `0`.
    pub fn render(&self, coord_names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let body = m.render(coord_names);
            if body.is_empty() {
                out.push_str(&render_rational(&abs));
            } else if abs.is_one() {
                out.push_str(&body);
            } else {
                out.push_str(&render_rational(&abs));
                out.push('*');
                out.push_str(&body);
            }
        }
        out
    }
}

/// Default coordinate names `x0, x1, …`.
pub fn default_coords(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

fn render_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Sorts a raw product into canonical order. `None` if an odd variable
/// occurs twice; otherwise the Koszul sign of the reordering.
fn canonical_product(mut vars: Vec<JetVar>) -> Option<(bool, Monomial)> {
    let mut neg = false;
    for i in 0..vars.len() {
        if !vars[i].is_odd() {
            continue;
        }
        for j in i + 1..vars.len() {
            if !vars[j].is_odd() {
                continue;
            }
            match vars[i].cmp(&vars[j]) {
                Ordering::Equal => return None,
                Ordering::Greater => neg = !neg,
                Ordering::Less => {}
            }
        }
    }
    vars.sort();
    let mut factors: Vec<(JetVar, u32)> = Vec::with_capacity(vars.len());
    for v in vars {
        match factors.last_mut() {
            Some((w, e)) if *w == v => *e += 1,
            _ => factors.push((v, 1)),
        }
    }
    Some((neg, Monomial { factors }))
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self
            .terms
            .keys()
            .flat_map(|m| m.factors.first().map(|(v, _)| v.index.dim()))
            .next()
            .unwrap_or(0);
        f.write_str(&self.render(&default_coords(n)))
    }
}

impl From<JetVar> for GradedPoly {
    fn from(v: JetVar) -> Self {
        GradedPoly::var(v)
    }
}

impl From<Rational> for GradedPoly {
    fn from(c: Rational) -> Self {
        GradedPoly::constant(c)
    }
}

impl AddAssign<&GradedPoly> for GradedPoly {
    fn add_assign(&mut self, rhs: &GradedPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign for GradedPoly {
    fn add_assign(&mut self, rhs: GradedPoly) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl SubAssign<&GradedPoly> for GradedPoly {
    fn sub_assign(&mut self, rhs: &GradedPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl SubAssign for GradedPoly {
    fn sub_assign(&mut self, rhs: GradedPoly) {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
    }
}

impl Add for &GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for GradedPoly {
    type Output = GradedPoly;
    fn add(mut self, rhs: GradedPoly) -> GradedPoly {
        self += rhs;
        self
    }
}

impl Sub for &GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for GradedPoly {
    type Output = GradedPoly;
    fn sub(mut self, rhs: GradedPoly) -> GradedPoly {
        self -= rhs;
        self
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        GradedPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        -&self
    }
}

impl Mul for &GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &GradedPoly) -> GradedPoly {
        GradedPoly::mul(self, rhs)
    }
}

impl std::iter::Sum for GradedPoly {
    fn sum<I: Iterator<Item = GradedPoly>>(iter: I) -> GradedPoly {
        let mut acc = GradedPoly::zero();
        for p in iter {
            acc += p;
        }
        acc
    }
}
