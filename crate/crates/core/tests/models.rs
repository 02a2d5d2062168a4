//! Built-in models checked end to end, plus hand-written cross-checks of the
//! derived gauge operators against their closed forms.

mod common;

use std::collections::BTreeMap;

use ktbrst::brst::{
    antibracket, build_brst_operator, build_extended_lagrangian, build_gauge_operator, build_proper_solution,
    check_master_equation, check_noether_identity, check_stage_identity, equivalence_suite, nilpotency_verdict,
    Status,
};
use ktbrst::graded::{int, ratio};
use ktbrst::jet::{total_derivative, variational_derivative_right, LinearDiffOp};
use ktbrst::models::{
    build_bf, build_gravity, build_yang_mills, builtin, minkowski, BFSpec, LieSuperAlgebraSpec, YangMillsFields,
};
use ktbrst::report::{run_checks, CheckKind};
use ktbrst::{GradedPoly, MultiIndex, Parity};

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn assert_all_pass(name: &str) {
    let m = builtin(name).unwrap();
    let report = run_checks(&m, &CheckKind::default_selection(), 2);
    for r in &report.records {
        assert_eq!(r.status, Status::Pass, "{name}: {} {:?} {:?}", r.id, r.note, r.witnesses);
    }
}

#[test]
fn su2_yang_mills_passes_every_check() {
    assert_all_pass("yang-mills:su2:n3");
}

#[test]
fn abelian_yang_mills_passes_every_check() {
    assert_all_pass("yang-mills:abelian2:n2");
    assert_all_pass("yang-mills:abelian1:n4");
}

#[test]
fn small_bf_instances_pass_every_check() {
    for name in ["bf:n3p1q1", "bf:n4p1q2", "bf:n5p2q2"] {
        assert_all_pass(name);
    }
}

#[test]
fn yang_mills_field_counts() {
    for n in 2..=4 {
        let m = builtin(&format!("yang-mills:su2:n{n}")).unwrap();
        assert_eq!(m.original_fields().len(), 3 * n);
        assert_eq!(m.ghosts().len(), 3);
        assert_eq!(m.reducibility(), Some(0));
    }
}

#[test]
fn bf_field_counts_follow_ghost_towers() {
    for (n, p, q) in [(3, 1, 1), (4, 1, 2), (5, 2, 2), (5, 1, 3)] {
        let m = build_bf(&BFSpec::new(n, p, q).unwrap()).unwrap();
        assert_eq!(m.original_fields().len(), binom(n, p) + binom(n, q));
        let by_stage = m.ghosts_by_stage();
        for (k, ghosts) in &by_stage {
            let k = *k as usize;
            let eps = if k < p { binom(n, p - k - 1) } else { 0 };
            let xi = if k < q { binom(n, q - k - 1) } else { 0 };
            assert_eq!(ghosts.len(), eps + xi, "stage {k} of ({n},{p},{q})");
        }
        assert_eq!(m.reducibility(), Some(q as u32 - 1));
    }
}

#[test]
fn expansion_is_deterministic() {
    for name in ["yang-mills:su2:n3", "bf:n4p1q2", "gravity:n2"] {
        let a = builtin(name).unwrap();
        let b = builtin(name).unwrap();
        assert_eq!(a.render_poly(&a.lagrangian), b.render_poly(&b.lagrangian));
        assert_eq!(a, b);
    }
}

/// `u^r_λ = −c^r_{ji} c^j a^i_λ + c^r_λ` and `u^r = 0` on ghosts.
#[test]
fn yang_mills_gauge_operator_has_closed_form() {
    let alg = LieSuperAlgebraSpec::su2();
    let n = 3;
    let m = build_yang_mills(&alg, n, &minkowski(n)).unwrap();
    let f = YangMillsFields::new(&alg, n);
    let u = build_gauge_operator(&m).unwrap().total;
    for r in 0..3 {
        for l in 0..n {
            let mut expected = total_derivative(&GradedPoly::var(f.ghosts[r].var(n)), l);
            for i in 0..3 {
                for j in 0..3 {
                    let c = alg.c(r, j, i);
                    if *c != int(0) {
                        let term = GradedPoly::var(f.ghosts[j].var(n)).mul(&GradedPoly::var(f.potentials[i][l].var(n)));
                        expected -= term.scale(c);
                    }
                }
            }
            assert_eq!(u.component(&f.potentials[r][l]), expected, "a^{r}_{l}");
        }
    }
    for g in &f.ghosts {
        assert!(u.component(g).is_zero());
    }
}

/// The gauge operator equals the right variational derivative of `Σ c Δ`
/// with respect to each antifield.
#[test]
fn gauge_operator_is_derivative_of_ghost_coupling() {
    for name in ["yang-mills:su2:n3", "bf:n4p1q2", "gravity:n2"] {
        let m = builtin(name).unwrap();
        let coupling = &build_extended_lagrangian(&m) - &m.lagrangian;
        let u = build_gauge_operator(&m).unwrap().total;
        for (z, bar) in m.dual_pairs().unwrap() {
            if z.role.is_antifield() {
                continue;
            }
            let d = variational_derivative_right(&coupling, &bar);
            assert_eq!(u.component(&z), d, "{name}: component on {}", z.name);
        }
    }
}

/// The Noether identity in the form `Δ_j = c^r_{ji} a^i_λ ā^λ_r + d_λ ā^λ_j`,
/// written independently of the model's stored generators.
#[test]
fn yang_mills_identity_in_textbook_form() {
    let alg = LieSuperAlgebraSpec::su2();
    let n = 3;
    let m = build_yang_mills(&alg, n, &minkowski(n)).unwrap();
    let f = YangMillsFields::new(&alg, n);
    for j in 0..3 {
        let mut op = LinearDiffOp::new();
        for l in 0..n {
            op.insert(f.potentials[j][l].clone(), MultiIndex::unit(n, l), GradedPoly::one());
            for r in 0..3 {
                for i in 0..3 {
                    let c = alg.c(r, j, i);
                    if *c != int(0) {
                        op.insert(
                            f.potentials[r][l].clone(),
                            MultiIndex::zero(n),
                            GradedPoly::var(f.potentials[i][l].var(n)).scale(c),
                        );
                    }
                }
            }
        }
        assert!(check_noether_identity(&m, &op).unwrap().passed(), "generator {j}");
        // Flipping the structure-constant term breaks it.
        let mut broken = op.clone();
        broken.insert(f.potentials[(j + 1) % 3][0].clone(), MultiIndex::zero(n), GradedPoly::var(f.potentials[(j + 2) % 3][0].var(n)));
        assert!(check_noether_identity(&m, &broken).unwrap().failed());
    }
}

#[test]
fn bf_stage_identities_hold_at_every_stage() {
    let m = build_bf(&BFSpec::new(5, 1, 3).unwrap()).unwrap();
    for k in 1..=2 {
        for (name, v) in check_stage_identity(&m, k).unwrap() {
            assert!(v.passed(), "stage {k} {name}: {:?}", v.witnesses);
        }
    }
}

#[test]
fn gravity_brst_data_is_consistent() {
    let m = build_gravity(2).unwrap();
    assert!(nilpotency_verdict(&build_brst_operator(&m).unwrap()).passed());
    let le = build_proper_solution(&m).unwrap();
    assert!(check_master_equation(&m, &le).unwrap().passed());
    let report = run_checks(&m, &[CheckKind::Noether, CheckKind::Gauge], 1);
    assert!(report.records.iter().any(|r| r.status == Status::NotEvaluated));
    assert!(report.all_passed());
}

#[test]
fn gravity_without_xi_fails_the_master_equation() {
    let mut m = build_gravity(2).unwrap();
    m.brst_xi = None;
    let le = build_proper_solution(&m).unwrap();
    let verdicts = equivalence_suite(&m, &le).unwrap();
    assert!(verdicts.iter().all(|(_, v)| v.failed()), "{verdicts:?}");
}

#[test]
fn antibracket_is_symmetric_as_displayed() {
    let m = builtin("bf:n3p1q1").unwrap();
    let le = build_proper_solution(&m).unwrap();
    let terms: Vec<GradedPoly> = le.terms().map(|(mo, c)| GradedPoly::term(c.clone(), mo.clone())).collect();
    let mut r = common::rng(7);
    use rand::seq::SliceRandom;
    for _ in 0..20 {
        let p: GradedPoly = terms.choose_multiple(&mut r, 3).cloned().sum();
        let q: GradedPoly = terms.choose_multiple(&mut r, 3).cloned().sum();
        assert_eq!(antibracket(&m, &p, &q).unwrap(), antibracket(&m, &q, &p).unwrap());
    }
}

/// For random sub-sums and rescalings of a proper solution, the four
/// equivalent verdicts always agree.
#[test]
fn equivalence_suite_verdicts_agree_on_random_densities() {
    use rand::Rng;
    for name in ["bf:n3p1q1", "yang-mills:abelian1:n2"] {
        let m = builtin(name).unwrap();
        let le = build_proper_solution(&m).unwrap();
        let mut r = common::rng(11);
        for trial in 0..12 {
            let p: GradedPoly = le
                .terms()
                .map(|(mo, c)| {
                    let w = if trial == 0 { 1 } else { r.gen_range(0..=2) };
                    GradedPoly::term(c * ratio(w, 1), mo.clone())
                })
                .sum();
            let verdicts = equivalence_suite(&m, &p).unwrap();
            let statuses: Vec<Status> = verdicts.iter().map(|(_, v)| v.status).collect();
            assert!(statuses.windows(2).all(|w| w[0] == w[1]), "{name} trial {trial}: {statuses:?}");
        }
    }
}

#[test]
fn algebra_validation_rejects_broken_data() {
    let mut bad = LieSuperAlgebraSpec::su2();
    bad.structure[0][1][2] = int(2);
    assert!(LieSuperAlgebraSpec::new(bad.name, bad.parities, bad.structure, bad.metric).is_err());
    assert!(BFSpec::new(4, 2, 2).is_err());
    assert!(builtin("bf:n4p1").is_err());
    assert!(builtin("yang-mills:so3:n3").is_err());
}

#[test]
fn odd_generators_of_a_superalgebra_are_parity_consistent() {
    // One even and two odd generators with the trivial bracket and a
    // graded-symmetric metric.
    let alg = LieSuperAlgebraSpec::new(
        "ab12",
        vec![Parity::Even, Parity::Odd, Parity::Odd],
        vec![vec![vec![int(0); 3]; 3]; 3],
        vec![
            vec![int(1), int(0), int(0)],
            vec![int(0), int(0), int(1)],
            vec![int(0), int(-1), int(0)],
        ],
    )
    .expect("abelian superalgebra");
    let m = build_yang_mills(&alg, 2, &minkowski(2)).unwrap();
    assert!(m.field("a2_0").unwrap().parity.is_odd());
    assert!(!m.field("c2").unwrap().parity.is_odd());
    assert!(!m.lagrangian.is_zero());
    let report = run_checks(&m, &CheckKind::default_selection(), 1);
    let ids: BTreeMap<_, _> = report.records.iter().map(|r| (r.id.clone(), r.status)).collect();
    assert!(ids.values().all(|s| *s == Status::Pass), "{ids:?}");
}
