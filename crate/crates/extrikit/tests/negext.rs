mod common;

use std::sync::OnceLock;

use common::{fx, q};
use extrikit::instances::FIXTURES;
use extrikit::negext::{
    acyclicity_check, alternating_sum_check, balance_report, comparison_images, kernel_iteration, kernel_iteration_dual,
    NegKind, Towers,
};
use extrikit::{QInstance, Rational};
use proptest::prelude::*;

#[test]
fn periodic_point_negative_extensions() {
    let inst = fx("pt");
    let t = Towers::build(&inst, 6, 6).unwrap();
    for n in 0..=6 {
        assert_eq!(t.neg_i.level(n).unwrap().dim(0, 0), 1, "E_I^-{n}");
        assert_eq!(t.neg_ii.level(n).unwrap().dim(0, 0), 1, "E_II^-{n}");
    }
}

#[test]
fn split_and_extension_closed_fixtures_have_no_negative_extensions() {
    for name in ["split1", "split2", "extclosed_m"] {
        let inst = fx(name);
        let t = Towers::build(&inst, 3, 3).unwrap();
        for n in 1..=3 {
            assert!(t.neg_i.level(n).unwrap().is_zero(), "{name} E_I^-{n}");
            assert!(t.neg_ii.level(n).unwrap().is_zero(), "{name} E_II^-{n}");
        }
    }
}

#[test]
fn non_bivariant_example() {
    let inst = fx("a4sub");
    let t = Towers::build(&inst, 2, 2).unwrap();
    let x = inst.cat.index_of("3[-1]").unwrap();
    let y = inst.cat.index_of("[4;3]").unwrap();
    for z in 0..inst.n() {
        assert_eq!(t.neg_ii.level(1).unwrap().dim(x, z), 0);
    }
    assert_eq!(t.neg_i.level(1).unwrap().dim(x, y), 1);
    let rep = balance_report(&inst, &t, 2).unwrap();
    assert_eq!(rep.unbalanced, vec![(x, y, 1)]);
    assert!(!rep.ni.holds);
    assert!(rep.nii.holds);
    assert!(rep.balance_matches_conditions());
}

#[test]
fn acyclicity_on_every_fixture() {
    for name in FIXTURES {
        let inst = fx(name);
        let t = Towers::build(&inst, 4, 4).unwrap();
        for conf in &inst.conflations {
            for kind in [NegKind::I, NegKind::II] {
                let rep = acyclicity_check(&inst.cat, &t, kind, conf, -4, 3).unwrap();
                assert!(rep.ok(), "{name}/{} {kind:?}: {:?}", conf.name, rep.violations);
            }
        }
    }
}

#[test]
fn kernel_iteration_matches_the_end() {
    for name in ["pt", "twoterm_k", "twoterm_a2", "twoterm_a3", "a4sub"] {
        let inst = fx(name);
        let t = Towers::build(&inst, 4, 4).unwrap();
        let ki = kernel_iteration(&inst.cat, &inst.e, &inst.dominant_family().unwrap(), 4).unwrap();
        let kd = kernel_iteration_dual(&inst.cat, &inst.e, &inst.codominant_family().unwrap(), 4).unwrap();
        for n in 0..=4 {
            assert_eq!(ki[n].dims(), t.neg_i.level(n).unwrap().dims(), "{name} E_I^-{n}");
            assert_eq!(kd[n].dims(), t.neg_ii.level(n).unwrap().dims(), "{name} E_II^-{n}");
        }
    }
}

#[test]
fn twoterm_a2_is_balanced() {
    let inst = fx("twoterm_a2");
    let t = Towers::build(&inst, 4, 4).unwrap();
    let rep = balance_report(&inst, &t, 4).unwrap();
    assert!(rep.balanced());
    for d in &rep.dims {
        if d.n > 1 {
            assert_eq!((d.dim_i, d.dim_ii), (0, 0));
        }
    }
    assert!(rep.ni.holds && rep.nii.holds && rep.ni_plus.holds && rep.nii_plus.holds);
    assert!(rep.ni_table.holds && rep.nii_table.holds);
    assert_eq!(rep.comparisons.len(), 25);
    assert!(rep.comparisons_equal());
}

#[test]
fn comparison_images_in_the_non_bivariant_example() {
    let inst = fx("a4sub");
    let t = Towers::build(&inst, 1, 1).unwrap();
    let x = inst.cat.index_of("3[-1]").unwrap();
    let y = inst.cat.index_of("[4;3]").unwrap();
    let c = comparison_images(&inst, &t, x, y).unwrap();
    // the E_I class lands in the injective ideal, so both images vanish
    assert_eq!(c.image_i.dim(), 0);
    assert_eq!(c.image_ii.dim(), 0);
}

#[test]
fn alternating_sums_over_resolutions() {
    for name in ["twoterm_k", "twoterm_a2", "twoterm_a3", "split2"] {
        let inst = fx(name);
        assert!(!inst.resolutions.is_empty(), "{name}");
        let t = Towers::build(&inst, 3, 3).unwrap();
        for chain in &inst.resolutions {
            for x in 0..inst.n() {
                let s = alternating_sum_check(&inst, &t, chain, x).unwrap();
                assert!(s.holds(), "{name}: {s:?}");
            }
        }
    }
}

#[test]
fn periodic_point_connecting_maps_are_isomorphisms() {
    let inst = fx("pt");
    let t = Towers::build(&inst, 4, 4).unwrap();
    let conf = &inst.conflations[0];
    for n in 0..3 {
        let d = t.neg_i.connecting(&inst.cat, &t.pos, n, &conf.c, &conf.a, &conf.delta, 0).unwrap();
        assert_eq!(d.shape(), (1, 1));
        assert_eq!(d.rank(), 1);
    }
}

fn a2() -> &'static (QInstance, Towers<Rational>) {
    static CELL: OnceLock<(QInstance, Towers<Rational>)> = OnceLock::new();
    CELL.get_or_init(|| {
        let inst = fx("twoterm_a2");
        let t = Towers::build(&inst, 2, 2).unwrap();
        (inst, t)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// `(b∘b')_* = b_* b'_*` on `E_I^{-1}` for composable basis morphisms,
    /// and likewise on the contravariant side of `E_II^{-1}`.
    #[test]
    fn negative_actions_are_functorial(i in 0usize..5, j in 0usize..5, k in 0usize..5, z in 0usize..5, s in -3i64..4) {
        let (inst, t) = a2();
        let cat = &inst.cat;
        for kind in [NegKind::I, NegKind::II] {
            let b = t.neg(kind).level(1).unwrap();
            for f in 0..cat.hom_dim(i, j) {
                for g in 0..cat.hom_dim(j, k) {
                    let gf = cat.compose_basis(i, j, k, f, g).to_vec();
                    let gf: Vec<Rational> = gf.into_iter().map(|v| v * q(s)).collect();
                    let lhs = b.left_indec(i, k, &gf, z);
                    let rhs = b.left_basis(j, k, g, z).mul(b.left_basis(i, j, f, z)).scale(&q(s));
                    prop_assert_eq!(lhs, rhs);
                    let lhs = b.right_indec(i, k, &gf, z);
                    let rhs = b.right_basis(i, j, f, z).mul(b.right_basis(j, k, g, z)).scale(&q(s));
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
