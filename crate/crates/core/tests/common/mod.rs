//! Seeded generators of random polynomials, operators and model perturbations
//! shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ktbrst::derivation::{Chirality, Derivation};
use ktbrst::graded::{ratio, Monomial};
use ktbrst::jet::LinearDiffOp;
use ktbrst::{Field, GradedPoly, JetVar, MultiIndex, Parity};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A pool of two even and two odd fields.
pub struct Pool {
    pub n: usize,
    pub fields: Vec<Field>,
}

impl Pool {
    pub fn new(n: usize) -> Pool {
        Pool {
            n,
            fields: vec![
                Field::field("u", Parity::Even),
                Field::field("v", Parity::Even),
                Field::field("psi", Parity::Odd),
                Field::field("chi", Parity::Odd),
            ],
        }
    }

    pub fn even(&self) -> Vec<Field> {
        self.fields.iter().filter(|f| !f.parity.is_odd()).cloned().collect()
    }

    pub fn odd(&self) -> Vec<Field> {
        self.fields.iter().filter(|f| f.parity.is_odd()).cloned().collect()
    }

    pub fn index(&self, rng: &mut impl Rng, max_order: usize) -> MultiIndex {
        let order = rng.gen_range(0..=max_order);
        let coords: Vec<usize> = (0..order).map(|_| rng.gen_range(0..self.n)).collect();
        MultiIndex::from_coords(self.n, &coords)
    }

    pub fn jet(&self, rng: &mut impl Rng, max_order: usize) -> JetVar {
        let f = self.fields.choose(rng).unwrap();
        f.jet(self.index(rng, max_order))
    }

    pub fn coeff(&self, rng: &mut impl Rng) -> GradedPoly {
        let mut num = rng.gen_range(-5i64..=5);
        if num == 0 {
            num = 1;
        }
        GradedPoly::constant(ratio(num, rng.gen_range(1i64..=3)))
    }

    /// A product of up to `max_factors` jet variables with a random rational
    /// coefficient.
    pub fn monomial(&self, rng: &mut impl Rng, max_factors: usize, max_order: usize) -> GradedPoly {
        let k = rng.gen_range(0..=max_factors);
        (0..k).fold(self.coeff(rng), |acc, _| acc.mul(&GradedPoly::var(self.jet(rng, max_order))))
    }

    pub fn poly(&self, rng: &mut impl Rng, max_terms: usize, max_factors: usize, max_order: usize) -> GradedPoly {
        let k = rng.gen_range(1..=max_terms);
        (0..k).map(|_| self.monomial(rng, max_factors, max_order)).sum()
    }

    /// A random polynomial restricted to one parity; may be zero.
    pub fn homogeneous(&self, rng: &mut impl Rng, parity: Parity, max_terms: usize, max_order: usize) -> GradedPoly {
        self.poly(rng, max_terms, 3, max_order)
            .filter(|m| m.parity() == parity)
    }

    /// A random linear operator on the pool's fields.
    pub fn operator(&self, rng: &mut impl Rng, max_order: usize) -> LinearDiffOp {
        let mut op = LinearDiffOp::new();
        for _ in 0..rng.gen_range(1..=4) {
            let f = self.fields.choose(rng).unwrap().clone();
            let idx = self.index(rng, max_order);
            op.insert(f, idx, self.poly(rng, 2, 2, 1));
        }
        op
    }

    /// A random left derivation of the given parity; components are the
    /// parts of random polynomials with the matching parity shift.
    pub fn derivation(&self, rng: &mut impl Rng, parity: Parity) -> Derivation {
        let mut comps = BTreeMap::new();
        for f in &self.fields {
            let p = self.homogeneous(rng, f.parity + parity, 2, 1);
            comps.insert(f.clone(), p);
        }
        Derivation::infer(Chirality::Left, comps).unwrap_or_else(|_| Derivation::zero(Chirality::Left, parity, 0))
    }
}

/// Every single-term perturbation of `p`: each term dropped, doubled, or
/// negated, followed by the addition of `extra`.
pub fn single_term_perturbations(p: &GradedPoly, extra: &[GradedPoly]) -> Vec<(String, GradedPoly)> {
    let mut out = Vec::new();
    for (m, c) in p.terms() {
        let term = GradedPoly::term(c.clone(), m.clone());
        out.push((format!("drop {}", term), p - &term));
        out.push((format!("double {}", term), p + &term));
        out.push((format!("negate {}", term), p - &term.scale(&ratio(2, 1))));
    }
    for e in extra {
        out.push((format!("add {}", e), p + e));
    }
    out
}

/// The variable monomial of a jet var, handy for asserting on witnesses.
pub fn var(v: JetVar) -> GradedPoly {
    GradedPoly::term(ratio(1, 1), Monomial::from_var(v))
}
