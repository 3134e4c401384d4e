mod common;

use common::fx;
use extrikit::defects::{
    conflation_defect, defect_module, dominant_for, is_pointwise_epi, lifting_check, projective_cover, reflect_fp_functor,
    reflection_check, reflection_check_fp, stable_yoneda_check, FpPresentation,
};
use extrikit::fincat::Obj;
use extrikit::funcat::{stable_hom, Ideal};
use extrikit::instances::FIXTURES;
use extrikit::posext::Conflation;

/// `dim Θ_δ(m) = dim C(m,C) - rank y_*`, read off the exact sequence
/// `C(m,B) -> C(m,C) -> E(m,A)`.
fn defect_dims_by_exactness(inst: &extrikit::QInstance, conf: &Conflation<extrikit::Rational>) -> Vec<usize> {
    (0..inst.n())
        .map(|m| {
            let mo = inst.cat.indec(m);
            inst.cat.hom_layout(&mo, &conf.c).total - inst.cat.post_matrix(&conf.y, &mo).rank()
        })
        .collect()
}

#[test]
fn defect_dimensions_match_exactness() {
    for name in FIXTURES {
        let inst = fx(name);
        for conf in &inst.conflations {
            let d = conflation_defect(&inst.cat, &inst.e, conf).unwrap();
            assert_eq!(d.dims(), defect_dims_by_exactness(&inst, conf), "{name}/{}", conf.name);
            assert!(d.module.validate(&inst.cat).is_empty());
        }
    }
}

#[test]
fn zero_extension_has_zero_defect() {
    let inst = fx("twoterm_a2");
    let (a, c) = (inst.cat.indec(0), inst.cat.indec(3));
    let zero = vec![extrikit::Rational::from_integer(0.into()); inst.e.dim_obj(&c, &a)];
    assert!(defect_module(&inst.cat, &inst.e, &c, &a, &zero).unwrap().is_zero());
}

#[test]
fn periodic_point_defect() {
    let inst = fx("pt");
    let d = conflation_defect(&inst.cat, &inst.e, &inst.conflations[0]).unwrap();
    assert_eq!(d.dims(), [1]);
}

#[test]
fn stable_yoneda_on_designated_dominant_conflations() {
    for name in FIXTURES {
        let inst = fx(name);
        for c in 0..inst.n() {
            let theta = &inst.conflations[inst.dominant[c].unwrap()];
            let sy = stable_yoneda_check(&inst.cat, &inst.e, theta).unwrap();
            assert!(sy.holds(), "{name}: {sy:?}");
            let d = conflation_defect(&inst.cat, &inst.e, theta).unwrap();
            for m in 0..inst.n() {
                let st = stable_hom(&inst.cat, &inst.e, &inst.cat.indec(m), &theta.c, Ideal::Projective);
                assert_eq!(d.dims()[m], st.quotient_dim, "{name}");
            }
        }
    }
}

#[test]
fn reflection_holds_exactly_for_dominant_extensions() {
    for name in ["pt", "twoterm_k", "twoterm_a2", "a4sub"] {
        let inst = fx(name);
        let samples: Vec<_> = inst
            .conflations
            .iter()
            .map(|c| conflation_defect(&inst.cat, &inst.e, c).unwrap())
            .collect();
        for conf in &inst.conflations {
            let d = conflation_defect(&inst.cat, &inst.e, conf).unwrap();
            let all = samples.iter().all(|s| reflection_check(&inst.cat, &d, s).unwrap().holds());
            assert_eq!(all, conf.dominant, "{name}/{}", conf.name);
        }
    }
}

#[test]
fn reflections_of_representables_and_zero() {
    let inst = fx("twoterm_a2");
    for c in 0..inst.n() {
        let x = inst.cat.indec(c);
        let theta = conflation_defect(&inst.cat, &inst.e, &inst.conflations[inst.dominant[c].unwrap()]).unwrap();
        let refl = reflect_fp_functor(&inst, &FpPresentation::representable(&inst.cat, &x)).unwrap();
        assert_eq!(refl.module.dims, theta.module.dims);
        let refl = reflect_fp_functor(&inst, &FpPresentation { c: inst.cat.identity(&x) }).unwrap();
        assert!(refl.module.is_zero());
    }
}

#[test]
fn reflection_of_a_defect_reproduces_it() {
    for name in ["twoterm_a2", "twoterm_a3", "a4sub"] {
        let inst = fx(name);
        for conf in inst.conflations.iter().filter(|c| !c.dominant) {
            let pres = FpPresentation { c: conf.y.clone() };
            let refl = reflect_fp_functor(&inst, &pres).unwrap();
            let d = conflation_defect(&inst.cat, &inst.e, conf).unwrap();
            assert_eq!(refl.module.dims, d.module.dims, "{name}/{}", conf.name);
            // the defect's own epi factors uniquely through the unit
            let rc = reflection_check_fp(&inst.cat, &pres, &refl, &d.module).unwrap();
            assert!(rc.holds(), "{name}/{}: {rc:?}", conf.name);
        }
    }
}

#[test]
fn enough_projectives_and_lifting() {
    for name in ["twoterm_a2", "a4sub", "pt"] {
        let inst = fx(name);
        for conf in &inst.conflations {
            let (_, cover) = projective_cover(&inst, conf).unwrap();
            assert!(is_pointwise_epi(&cover), "{name}/{}", conf.name);
            for c in 0..inst.n() {
                let theta = conflation_defect(&inst.cat, &inst.e, &inst.conflations[inst.dominant[c].unwrap()]).unwrap();
                assert!(lifting_check(&inst.cat, &theta, &cover).unwrap(), "{name}/{}", conf.name);
            }
        }
    }
}

#[test]
fn dominant_conflations_for_sums() {
    let inst = fx("twoterm_a2");
    let x = Obj(vec![0, 1, 1, 0, 2]);
    let theta = dominant_for(&inst, &x).unwrap();
    assert!(theta.validate(&inst.cat, &inst.e).is_empty());
    assert_eq!(theta.c, x);
    assert!(stable_yoneda_check(&inst.cat, &inst.e, &theta).unwrap().holds());
}
