mod common;

use std::sync::OnceLock;

use common::{fx, q};
use extrikit::instances::FIXTURES;
use extrikit::posext::{has_trivialization, les_check, pos_gldim, satellite_tower, ExtTower, GlDim};
use extrikit::{QInstance, Rational};
use num_traits::Zero;
use proptest::prelude::*;

#[test]
fn long_exact_sequences_hold_on_every_table_conflation() {
    for name in FIXTURES {
        let inst = fx(name);
        let tower = inst.tower(3).unwrap();
        for conf in &inst.conflations {
            let rep = les_check(&inst.cat, &tower, conf, 3).unwrap();
            assert!(rep.ok(), "{name}/{}: {:?}", conf.name, rep.violations);
            assert!(rep.positions > 0);
        }
    }
}

#[test]
fn coend_and_satellite_agree() {
    for name in ["pt", "twoterm_k", "twoterm_a2", "twoterm_a3"] {
        let inst = fx(name);
        let tower = inst.tower(3).unwrap();
        let sat = satellite_tower(&inst.cat, &inst.e, &inst.dominant_family().unwrap(), 3).unwrap();
        for n in 0..=3 {
            assert_eq!(tower.level(n).unwrap().dims(), sat[n].dims(), "{name} level {n}");
        }
    }
}

#[test]
fn global_dimensions() {
    let gl = |name: &str, n: usize| pos_gldim(&fx(name).tower(n).unwrap());
    assert_eq!(gl("twoterm_a2", 4), GlDim::Exact(1));
    assert_eq!(gl("twoterm_a3", 4), GlDim::Exact(1));
    assert_eq!(gl("twoterm_k", 4), GlDim::Exact(1));
    assert_eq!(gl("split2", 4), GlDim::Exact(0));
    assert_eq!(gl("extclosed_m", 4), GlDim::Exact(0));
    assert_eq!(gl("pt", 6), GlDim::AtLeast(6));
    assert_eq!(GlDim::AtLeast(6).to_string(), "≥ 6");
}

#[test]
fn periodic_point_is_one_dimensional_in_every_degree() {
    let tower = fx("pt").tower(6).unwrap();
    for n in 0..=6 {
        assert_eq!(tower.level(n).unwrap().dim(0, 0), 1, "level {n}");
    }
}

#[test]
fn coend_relations_vanish_under_the_projection() {
    for name in ["pt", "twoterm_a2", "twoterm_a3", "a4sub"] {
        let inst = fx(name);
        let tower = inst.tower(3).unwrap();
        for n in 1..=3 {
            for x in 0..inst.n() {
                for y in 0..inst.n() {
                    let rel = tower.relations(n, x, y);
                    assert!(tower.projection(n, x, y).mul(rel.basis()).is_zero(), "{name} level {n}");
                }
            }
        }
        for n in 0..3 {
            assert!(tower.relation_violations(&inst.cat, n).is_empty(), "{name} level {}", n + 1);
        }
    }
}

fn a2() -> &'static (QInstance, ExtTower<Rational>) {
    static CELL: OnceLock<(QInstance, ExtTower<Rational>)> = OnceLock::new();
    CELL.get_or_init(|| {
        let inst = fx("twoterm_a2");
        let tower = inst.tower(3).unwrap();
        (inst, tower)
    })
}

fn combo(coeffs: &[i64], len: usize) -> Vec<Rational> {
    (0..len).map(|k| q(coeffs[k % coeffs.len()])).collect()
}

#[test]
fn trivialization_iff_vanishing() {
    let (inst, tower) = a2();
    for conf in &inst.conflations {
        for n in 0..=2 {
            for x in 0..inst.n() {
                let d = tower.level(n).unwrap().dim_obj(&inst.cat.indec(x), &conf.c);
                for k in 0..d {
                    let mut lambda = vec![Rational::zero(); d];
                    lambda[k] = q(1);
                    let class = tower.class_of(n, &conf.c, &conf.a, &conf.delta, x, &lambda).unwrap();
                    let triv = has_trivialization(&inst.cat, tower, conf, &conf.delta, n, x, &lambda).unwrap();
                    assert_eq!(triv, class.iter().all(|v| v.is_zero()), "{} n={n} x={x} k={k}", conf.name);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn class_of_is_bilinear(
        conf_idx in 0usize..64,
        x in 0usize..5,
        n in 0usize..3,
        r1 in prop::collection::vec(-3i64..4, 1..4),
        r2 in prop::collection::vec(-3i64..4, 1..4),
        l1 in prop::collection::vec(-3i64..4, 1..6),
        l2 in prop::collection::vec(-3i64..4, 1..6),
        s in -3i64..4,
    ) {
        let (inst, tower) = a2();
        let conf = &inst.conflations[conf_idx % inst.conflations.len()];
        let rd = inst.e.dim_obj(&conf.c, &conf.a);
        let ld = tower.level(n).unwrap().dim_obj(&inst.cat.indec(x), &conf.c);
        let (rho1, rho2) = (combo(&r1, rd), combo(&r2, rd));
        let (lam1, lam2) = (combo(&l1, ld), combo(&l2, ld));
        let class = |rho: &[Rational], lam: &[Rational]| tower.class_of(n, &conf.c, &conf.a, rho, x, lam).unwrap();
        let lin = |a: &[Rational], b: &[Rational]| -> Vec<Rational> {
            a.iter().zip(b).map(|(u, v)| u.clone() * q(s) + v.clone()).collect()
        };
        prop_assert_eq!(class(&lin(&rho1, &rho2), &lam1), lin(&class(&rho1, &lam1), &class(&rho2, &lam1)));
        prop_assert_eq!(class(&rho1, &lin(&lam1, &lam2)), lin(&class(&rho1, &lam1), &class(&rho1, &lam2)));
    }
}
