//! Public API checks against brute-force oracles and published values.

use pgw_core::bounds::{
    check_ellis_exponent, check_jones_bounds, check_rank_class_bound, full_report, BoundInputs,
    CheckStatus,
};
use pgw_core::family::{build_family, FamilySpec};
use pgw_core::group::{GroupTable, SubgroupRelation, IDENTITY};
use pgw_core::multiplier::{catalog_lookup, pst_multiplier, AbelianPGroup, Catalog};
use pgw_core::report::run_analysis;
use pgw_core::residue::{ResidueMatrix, ResidueModulus};
use pgw_core::Error;

#[test]
fn residue_inverse_matches_exhaustive_search() {
    for (p, k) in [(2, 5), (3, 3), (5, 2), (7, 2)] {
        let md = ResidueModulus::new(p, k).unwrap();
        let m = md.modulus();
        for a in 0..m {
            let brute = (1..m).find(|b| a * b % m == 1);
            assert_eq!(md.inv(a).ok(), brute, "{a} mod {m}");
        }
    }
}

#[test]
fn matrix_inverse_of_every_unit_2x2_mod_4() {
    let md = ResidueModulus::new(2, 2).unwrap();
    let mut units = 0;
    for code in 0..256u32 {
        let e: Vec<i64> = (0..4).map(|i| i64::from((code >> (2 * i)) & 3)).collect();
        let m = ResidueMatrix::from_rows(md, &[vec![e[0], e[1]], vec![e[2], e[3]]]).unwrap();
        let det = (e[0] * e[3] - e[1] * e[2]).rem_euclid(4);
        assert_eq!(m.is_invertible(), det % 2 == 1);
        if let Ok(inv) = m.mat_inv() {
            units += 1;
            assert!(m.mat_mul(&inv).unwrap().is_identity());
        }
    }
    // |GL_2(Z/4)| = 16 * |GL_2(F_2)| = 96.
    assert_eq!(units, 96);
}

fn element_orders(g: &GroupTable) -> Vec<u64> {
    (0..g.order() as u32)
        .map(|a| {
            let m = g.element(a);
            let mut acc = m.clone();
            let mut k = 1;
            while !acc.is_identity() {
                acc = acc.mat_mul(&m).unwrap();
                k += 1;
            }
            k
        })
        .collect()
}

#[test]
fn element_orders_agree_with_repeated_multiplication() {
    for spec in [FamilySpec::Sd16, FamilySpec::Mod27, FamilySpec::Dihedral8] {
        let g = build_family(&spec).unwrap().table.unwrap();
        let brute = element_orders(&g);
        for (a, want) in brute.iter().enumerate() {
            assert_eq!(g.element_order(a as u32), *want, "{spec:?}");
        }
        assert_eq!(g.element_order(IDENTITY), 1);
    }
}

#[test]
fn small_groups_have_expected_invariants() {
    let sd = build_family(&FamilySpec::Sd16).unwrap();
    assert_eq!(sd.table.as_ref().unwrap().order(), 16);
    let inv = &sd.invariants;
    assert_eq!((inv.d, inv.e, inv.cl, inv.sr), (2, 3, 2, Some(2)));
    assert_eq!(sd.gamma_exp(2), 1);

    let d8 = build_family(&FamilySpec::Dihedral8).unwrap();
    assert_eq!((d8.invariants.cl, d8.invariants.center_exp), (2, 1));
    assert!(!d8.invariants.powerful);
    // Exponent 4, so two levels are evaluated.
    let levels = d8.ellis_levels.unwrap();
    assert_eq!(levels.len(), 2);
}

#[test]
fn omega_gamma_comparison_on_a_powerful_group() {
    let g = build_family(&FamilySpec::LmExample { p: 3, l: 1 })
        .unwrap()
        .table
        .unwrap();
    let rel = g.compare_omega_gamma(1, 1).unwrap();
    assert!(matches!(
        rel,
        SubgroupRelation::Equal | SubgroupRelation::LeftInRight
    ));
}

#[test]
fn multiplier_catalog_values() {
    let sd = catalog_lookup("sd16", 2).unwrap().multiplier().unwrap();
    let s = sd.structure_invariants();
    assert_eq!((s.order_exp, s.d, s.e), (2, 2, 1));
    let m27 = catalog_lookup("mod27", 2).unwrap().multiplier().unwrap();
    assert_eq!(m27, AbelianPGroup::new(3, vec![1, 1]).unwrap());
    assert!(matches!(
        catalog_lookup("sd16", 5),
        Err(Error::NotInCatalog { .. })
    ));
    assert_eq!(Catalog::builtin().entries().len(), 2);
}

#[test]
fn pst_closed_form_for_two_generators() {
    let m = pst_multiplier(5, 2, 3, 2, 1).unwrap();
    assert_eq!(m.alphas(), [3, 2, 2]);
    assert!(matches!(
        pst_multiplier(5, 2, 1, 2, 1),
        Err(Error::InvalidParameters(_))
    ));
    assert!(pst_multiplier(2, 2, 1, 1, 1).is_err());
}

#[test]
fn jones_examples() {
    // Z_p + Z_p with c = 1: |M| = p, |G'| = 1, n = 2.
    let j = check_jones_bounds(1, 0, 2, 1);
    assert!(j[1].holds && j[1].attained);
    let doc = run_analysis(
        &FamilySpec::Abelian {
            p: 3,
            alphas: vec![1, 1, 1],
        },
        1,
        &Catalog::builtin(),
    )
    .unwrap();
    let jd = doc.check("jones_derived").unwrap();
    assert_eq!((jd.lhs, jd.rhs, jd.attained), (Some(3), Some(3), true));
    assert!(doc.passed());
}

#[test]
fn rank_class_and_ellis_examples() {
    let r = check_rank_class_bound(2, 2, 2, 2, 2, true);
    assert_eq!((r.lhs, r.rhs), (Some(2), Some(10)));
    let e = check_ellis_exponent(1, 2, 2, 2);
    assert_eq!((e.lhs, e.rhs, e.holds), (Some(1), Some(2), true));
    assert_eq!(
        check_ellis_exponent(1, 2, 1, 2).status,
        CheckStatus::Skipped
    );
}

#[test]
fn every_check_present_once() {
    let built = build_family(&FamilySpec::Mod27).unwrap();
    let input = BoundInputs {
        invariants: built.invariants.clone(),
        gamma_exp: built.gamma_exp(3),
        derived_exp: built.gamma_exp(2),
        multiplier: None,
        schur: None,
        ellis_levels: built.ellis_levels.clone(),
    };
    let r = full_report("mod27", 3, 2, &input);
    let mut names: Vec<&str> = r.checks.iter().map(|c| c.name.as_str()).collect();
    let n = names.len();
    names.sort_unstable();
    names.dedup();
    assert_eq!(names.len(), n);
    for c in &r.checks {
        assert!(!c.attained || c.holds, "{}", c.name);
    }
}
