//! Property tests of the algebraic identities the engine relies on.

mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;

use common::{rng, Pool};
use ktbrst::derivation::{is_nilpotent, is_variational_symmetry, Chirality, Derivation};
use ktbrst::graded::{int, Homogeneity};
use ktbrst::jet::{
    adjoint, adjoint_closed_form, euler_lagrange, is_dh_exact, total_derivative, total_derivative_multi,
    AdjointConvention,
};
use ktbrst::{Density, Field, GradedPoly, MultiIndex, Parity};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        ..ProptestConfig::default()
    }
}

fn parity_of(p: &GradedPoly) -> Option<Parity> {
    p.parity().pure()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn normalize_is_idempotent(seed: u64) {
        let pool = Pool::new(2);
        let p = pool.poly(&mut rng(seed), 6, 3, 2);
        let raw = p.terms().map(|(m, c)| {
            let vars = m
                .factors()
                .iter()
                .flat_map(|(v, e)| std::iter::repeat_n(v.clone(), *e as usize))
                .collect::<Vec<_>>();
            (c.clone(), vars)
        });
        let again = GradedPoly::normalize(raw);
        prop_assert_eq!(again, p);
    }

    #[test]
    fn multiplication_is_graded_commutative(seed: u64) {
        let pool = Pool::new(2);
        let mut r = rng(seed);
        for (pa, pb) in [(Parity::Even, Parity::Even), (Parity::Even, Parity::Odd), (Parity::Odd, Parity::Odd)] {
            let a = pool.homogeneous(&mut r, pa, 4, 2);
            let b = pool.homogeneous(&mut r, pb, 4, 2);
            let ba = b.mul(&a);
            let expected = if pa.is_odd() && pb.is_odd() { -ba } else { ba };
            prop_assert_eq!(a.mul(&b), expected);
        }
    }

    #[test]
    fn multiplication_is_associative_and_distributive(seed: u64) {
        let pool = Pool::new(2);
        let mut r = rng(seed);
        let a = pool.poly(&mut r, 3, 2, 1);
        let b = pool.poly(&mut r, 3, 2, 1);
        let c = pool.poly(&mut r, 3, 2, 1);
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&(&b + &c)), a.mul(&b) + a.mul(&c));
    }

    #[test]
    fn left_partial_obeys_graded_leibniz(seed: u64) {
        let pool = Pool::new(2);
        let mut r = rng(seed);
        let pa = if r.next_u32_bit() { Parity::Odd } else { Parity::Even };
        let a = pool.homogeneous(&mut r, pa, 4, 1);
        let b = pool.poly(&mut r, 4, 3, 1);
        let v = pool.jet(&mut r, 1);
        let lhs = a.mul(&b).partial_left(&v);
        let tail = a.mul(&b.partial_left(&v));
        let twist = v.is_odd() && pa.is_odd();
        let rhs = a.partial_left(&v).mul(&b) + if twist { -tail } else { tail };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn right_partial_obeys_graded_leibniz(seed: u64) {
        let pool = Pool::new(2);
        let mut r = rng(seed);
        let pb = if r.next_u32_bit() { Parity::Odd } else { Parity::Even };
        let a = pool.poly(&mut r, 4, 3, 1);
        let b = pool.homogeneous(&mut r, pb, 4, 1);
        let v = pool.jet(&mut r, 1);
        let lhs = a.mul(&b).partial_right(&v);
        let head = a.partial_right(&v).mul(&b);
        let twist = v.is_odd() && pb.is_odd();
        let rhs = a.mul(&b.partial_right(&v)) + if twist { -head } else { head };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn odd_monomials_square_to_zero(seed: u64) {
        let pool = Pool::new(2);
        let mut r = rng(seed);
        let m = pool.monomial(&mut r, 3, 2);
        if parity_of(&m) == Some(Parity::Odd) {
            prop_assert!(m.mul(&m).is_zero());
        }
    }

    #[test]
    fn gradings_add_under_multiplication(seed: u64) {
        let pool = Pool::new(2);
        let mut r = rng(seed);
        let a = pool.monomial(&mut r, 3, 2);
        let b = pool.monomial(&mut r, 3, 2);
        let ab = a.mul(&b);
        if !ab.is_zero() {
            prop_assert_eq!(parity_of(&ab), Some(parity_of(&a).unwrap() + parity_of(&b).unwrap()));
            let gh = |p: &GradedPoly| match p.ghost_number() { Homogeneity::Pure(g) => g, _ => unreachable!() };
            prop_assert_eq!(gh(&ab), gh(&a) + gh(&b));
        }
    }

    #[test]
    fn total_derivatives_commute(seed: u64) {
        let pool = Pool::new(2);
        let p = pool.poly(&mut rng(seed), 5, 3, 2);
        prop_assert_eq!(
            total_derivative(&total_derivative(&p, 0), 1),
            total_derivative(&total_derivative(&p, 1), 0)
        );
    }

    #[test]
    fn total_divergences_have_vanishing_euler_lagrange(seed: u64) {
        let pool = Pool::new(2);
        let sigma = pool.poly(&mut rng(seed), 5, 3, 2);
        for coord in 0..2 {
            let el = euler_lagrange(&Density::new(total_derivative(&sigma, coord)), &pool.fields);
            prop_assert!(el.is_zero());
        }
    }

    #[test]
    fn adjoint_is_an_involution(seed: u64, n in 1usize..=2) {
        let pool = Pool::new(n);
        let op = pool.operator(&mut rng(seed), 3);
        prop_assert_eq!(adjoint(&adjoint(&op)), op);
    }

    #[test]
    fn closed_form_adjoint_matches_expansion(seed: u64, n in 1usize..=2) {
        let pool = Pool::new(n);
        let op = pool.operator(&mut rng(seed), 3);
        let eta = adjoint(&op);
        prop_assert_eq!(&adjoint_closed_form(&op, AdjointConvention::Componentwise), &eta);
        prop_assert_eq!(&adjoint_closed_form(&op, AdjointConvention::TotalDegreeOrderedTuples), &eta);
    }

    #[test]
    fn integration_by_parts_is_exact(seed: u64, n in 1usize..=2) {
        let pool = Pool::new(n);
        let mut r = rng(seed);
        let f_prime = pool.poly(&mut r, 2, 2, 1);
        let mut density = GradedPoly::zero();
        for _ in 0..3 {
            let idx = pool.index(&mut r, 3);
            let f = pool.poly(&mut r, 2, 2, 1);
            density += f.mul(&total_derivative_multi(&f_prime, &idx));
            let moved = total_derivative_multi(&f, &idx).mul(&f_prime);
            density -= if idx.order().is_multiple_of(2) { moved } else { -moved };
        }
        prop_assert!(is_dh_exact(&Density::new(density)).exact);
    }

    #[test]
    fn adjoint_satisfies_defining_identity(seed: u64, n in 1usize..=2) {
        let pool = Pool::new(n);
        let mut r = rng(seed);
        let target = pool.fields[0].clone();
        let op = pool.operator(&mut r, 3);
        let phi = GradedPoly::var(Field::field("phi", Parity::Even).var(n));
        let mut lhs = GradedPoly::zero();
        for ((_, idx), f) in op.coeffs.iter().filter(|((g, _), _)| *g == target) {
            let t = total_derivative_multi(&f.mul(&phi), idx);
            lhs += if idx.order() % 2 == 0 { t } else { -t };
        }
        let eta = adjoint(&op);
        let rhs: GradedPoly = eta
            .coeffs
            .iter()
            .filter(|((g, _), _)| *g == target)
            .map(|((_, idx), f)| f.mul(&total_derivative_multi(&phi, idx)))
            .sum();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivations_obey_graded_leibniz(seed: u64, odd: bool) {
        let pool = Pool::new(2);
        let mut r = rng(seed);
        let parity = if odd { Parity::Odd } else { Parity::Even };
        let d = pool.derivation(&mut r, parity);
        let pa = if r.next_u32_bit() { Parity::Odd } else { Parity::Even };
        let a = pool.homogeneous(&mut r, pa, 3, 1);
        let b = pool.poly(&mut r, 3, 2, 1);
        let tail = a.mul(&d.apply(&b));
        let twist = parity.is_odd() && pa.is_odd();
        prop_assert_eq!(d.apply(&a.mul(&b)), d.apply(&a).mul(&b) + if twist { -tail } else { tail });
    }

    #[test]
    fn right_derivations_obey_right_leibniz(seed: u64) {
        let pool = Pool::new(2);
        let mut r = rng(seed);
        let left = pool.derivation(&mut r, Parity::Odd);
        let right = Derivation::new(Chirality::Right, left.parity(), left.ghost_shift(), left.components().clone()).unwrap();
        let a = pool.poly(&mut r, 3, 2, 1);
        let pb = if r.next_u32_bit() { Parity::Odd } else { Parity::Even };
        let b = pool.homogeneous(&mut r, pb, 3, 1);
        let head = right.apply(&a).mul(&b);
        let rhs = a.mul(&right.apply(&b)) + if pb.is_odd() { -head } else { head };
        prop_assert_eq!(right.apply(&a.mul(&b)), rhs);
    }

    #[test]
    fn derivations_commute_with_total_derivatives(seed: u64, odd: bool) {
        let pool = Pool::new(2);
        let mut r = rng(seed);
        let d = pool.derivation(&mut r, if odd { Parity::Odd } else { Parity::Even });
        let p = pool.poly(&mut r, 4, 3, 2);
        for coord in 0..2 {
            prop_assert_eq!(d.apply(&total_derivative(&p, coord)), total_derivative(&d.apply(&p), coord));
        }
    }

    #[test]
    fn nilpotent_derivations_square_to_zero(seed: u64) {
        // d = ψ ∂_u + χ ∂_v is odd and nilpotent; perturb by an odd multiple
        // of ψχ-free terms to also exercise the failing direction.
        let pool = Pool::new(2);
        let mut r = rng(seed);
        let mut comps = BTreeMap::new();
        comps.insert(pool.fields[0].clone(), GradedPoly::var(pool.fields[2].var(2)));
        comps.insert(pool.fields[1].clone(), GradedPoly::var(pool.fields[3].var(2)));
        if r.next_u32_bit() {
            comps.insert(pool.fields[2].clone(), GradedPoly::var(pool.fields[0].var(2)));
        }
        let d = Derivation::infer(Chirality::Left, comps).unwrap();
        let p = pool.poly(&mut r, 4, 3, 1);
        if is_nilpotent(&d).holds() {
            prop_assert!(d.apply(&d.apply(&p)).is_zero());
        } else {
            prop_assert!(!d.component(&pool.fields[2]).is_zero());
        }
    }

    #[test]
    fn symmetry_verdict_ignores_total_divergences(seed: u64) {
        let pool = Pool::new(2);
        let mut r = rng(seed);
        let d = pool.derivation(&mut r, Parity::Even);
        let l = pool.homogeneous(&mut r, Parity::Even, 4, 1);
        let sigma = pool.homogeneous(&mut r, Parity::Even, 3, 1);
        let shifted = &l + &total_derivative(&sigma, r.next_u32_bit() as usize);
        prop_assert_eq!(
            is_variational_symmetry(&d, &Density::new(l)).holds,
            is_variational_symmetry(&d, &Density::new(shifted)).holds
        );
    }

    #[test]
    fn scaling_by_zero_annihilates(seed: u64) {
        let pool = Pool::new(1);
        let p = pool.poly(&mut rng(seed), 4, 3, 2);
        prop_assert!(p.scale(&int(0)).is_zero());
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(total_derivative_multi(&p, &MultiIndex::zero(1)), p);
    }
}

trait Bits {
    fn next_u32_bit(&mut self) -> bool;
}

impl<R: rand::RngCore> Bits for R {
    fn next_u32_bit(&mut self) -> bool {
        self.next_u32() & 1 == 1
    }
}
