mod common;

use std::panic;
use std::process::ExitCode;

use common::{fx, q, unit};
use extrikit::defects::{
    conflation_defect, reflect_fp_functor, reflection_check, reflection_check_fp, stable_yoneda_check, FpPresentation,
};
use extrikit::instances::FIXTURES;
use extrikit::negext::{
    acyclicity_check, alternating_sum_check, balance_report, kernel_iteration, kernel_iteration_dual, NegKind, Towers,
};
use extrikit::posext::{has_trivialization, les_check, pos_gldim, satellite_tower, GlDim};
use extrikit::Rational;
use num_traits::Zero;

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn gldim_twoterm() -> Check {
    for name in ["twoterm_a2", "twoterm_a3"] {
        let g = pos_gldim(&fx(name).tower(4).map_err(|e| e.to_string())?);
        ensure!(g == GlDim::Exact(1), "{name}: gldim {g}");
    }
    Ok(())
}

fn periodic_point() -> Check {
    let inst = fx("pt");
    let t = Towers::build(&inst, 6, 6).map_err(|e| e.to_string())?;
    for n in 0..=6 {
        let pos = t.pos.level(n).unwrap().dim(0, 0);
        let neg = t.neg_i.level(n).unwrap().dim(0, 0);
        ensure!(pos == 1 && neg == 1, "n={n}: E^n={pos}, E_I^-n={neg}");
    }
    let g = pos_gldim(&t.pos);
    ensure!(g.to_string() == "≥ 6", "gldim reported {g}");
    Ok(())
}

fn split_vanishing() -> Check {
    for name in ["split1", "split2", "extclosed_m"] {
        let inst = fx(name);
        let t = Towers::build(&inst, 4, 4).map_err(|e| e.to_string())?;
        for n in 1..=4 {
            ensure!(t.neg_i.level(n).unwrap().is_zero(), "{name}: E_I^-{n} nonzero");
            ensure!(t.neg_ii.level(n).unwrap().is_zero(), "{name}: E_II^-{n} nonzero");
        }
    }
    Ok(())
}

fn non_bivariant() -> Check {
    let inst = fx("a4sub");
    let t = Towers::build(&inst, 1, 1).map_err(|e| e.to_string())?;
    let x = inst.cat.index_of("3[-1]").map_err(|e| e.to_string())?;
    let y = inst.cat.index_of("[4;3]").map_err(|e| e.to_string())?;
    for z in 0..inst.n() {
        let d = t.neg_ii.level(1).unwrap().dim(x, z);
        ensure!(d == 0, "E_II^-1(3[-1], {}) = {d}", inst.cat.name(z));
    }
    let d = t.neg_i.level(1).unwrap().dim(x, y);
    ensure!(d == 1, "E_I^-1(3[-1], [4;3]) = {d}");
    Ok(())
}

fn les_exactness() -> Check {
    for name in FIXTURES {
        let inst = fx(name);
        let tower = inst.tower(3).map_err(|e| e.to_string())?;
        for conf in &inst.conflations {
            let rep = les_check(&inst.cat, &tower, conf, 3).map_err(|e| e.to_string())?;
            ensure!(rep.ok(), "{name}/{}: {:?}", conf.name, rep.violations);
        }
    }
    Ok(())
}

fn acyclicity() -> Check {
    for name in FIXTURES {
        let inst = fx(name);
        let t = Towers::build(&inst, 4, 4).map_err(|e| e.to_string())?;
        for conf in &inst.conflations {
            for kind in [NegKind::I, NegKind::II] {
                let rep = acyclicity_check(&inst.cat, &t, kind, conf, -4, 3).map_err(|e| e.to_string())?;
                ensure!(rep.ok(), "{name}/{} {kind:?}: {:?}", conf.name, rep.violations);
            }
        }
    }
    Ok(())
}

fn method_agreement() -> Check {
    for name in ["twoterm_k", "twoterm_a2", "twoterm_a3", "pt"] {
        let inst = fx(name);
        let t = Towers::build(&inst, 4, 4).map_err(|e| e.to_string())?;
        let sat = satellite_tower(&inst.cat, &inst.e, &inst.dominant_family().unwrap(), 3).map_err(|e| e.to_string())?;
        for n in 0..=3 {
            ensure!(t.pos.level(n).unwrap().dims() == sat[n].dims(), "{name}: coend/satellite differ at {n}");
        }
        let ki = kernel_iteration(&inst.cat, &inst.e, &inst.dominant_family().unwrap(), 4).map_err(|e| e.to_string())?;
        let kd = kernel_iteration_dual(&inst.cat, &inst.e, &inst.codominant_family().unwrap(), 4).map_err(|e| e.to_string())?;
        for n in 0..=4 {
            ensure!(ki[n].dims() == t.neg_i.level(n).unwrap().dims(), "{name}: E_I end/kernel differ at -{n}");
            ensure!(kd[n].dims() == t.neg_ii.level(n).unwrap().dims(), "{name}: E_II end/kernel differ at -{n}");
        }
    }
    Ok(())
}

fn coend_soundness() -> Check {
    let inst = fx("twoterm_a2");
    let tower = inst.tower(3).map_err(|e| e.to_string())?;
    for n in 1..=3 {
        for x in 0..inst.n() {
            for y in 0..inst.n() {
                let rel = tower.relations(n, x, y);
                ensure!(tower.projection(n, x, y).mul(rel.basis()).is_zero(), "relation outside Ker π at level {n}");
            }
        }
    }
    for conf in &inst.conflations {
        let rd = inst.e.dim_obj(&conf.c, &conf.a);
        for n in 0..=2 {
            for x in 0..inst.n() {
                let ld = tower.level(n).unwrap().dim_obj(&inst.cat.indec(x), &conf.c);
                let class = |rho: &[Rational], lam: &[Rational]| tower.class_of(n, &conf.c, &conf.a, rho, x, lam).unwrap();
                let lin = |a: &[Rational], b: &[Rational], s: i64| -> Vec<Rational> {
                    a.iter().zip(b).map(|(u, v)| u.clone() * q(s) + v.clone()).collect()
                };
                for k in 0..ld {
                    let lam = unit(ld, k);
                    let vanishes = class(&conf.delta, &lam).iter().all(|v| v.is_zero());
                    let triv = has_trivialization(&inst.cat, &tower, conf, &conf.delta, n, x, &lam).map_err(|e| e.to_string())?;
                    ensure!(triv == vanishes, "{} n={n} x={x}: trivialization {triv}, vanishing {vanishes}", conf.name);
                    for r in 0..rd {
                        let e = unit(rd, r);
                        let lhs = class(&lin(&conf.delta, &e, -2), &lam);
                        ensure!(lhs == lin(&class(&conf.delta, &lam), &class(&e, &lam), -2), "{} not additive in ρ", conf.name);
                    }
                    if ld > 1 {
                        let l2 = unit(ld, (k + 1) % ld);
                        let lhs = class(&conf.delta, &lin(&lam, &l2, 3));
                        ensure!(lhs == lin(&class(&conf.delta, &lam), &class(&conf.delta, &l2), 3), "{} not additive in λ", conf.name);
                    }
                }
            }
        }
    }
    Ok(())
}

fn balance_twoterm() -> Check {
    let inst = fx("twoterm_a2");
    let t = Towers::build(&inst, 4, 4).map_err(|e| e.to_string())?;
    let rep = balance_report(&inst, &t, 4).map_err(|e| e.to_string())?;
    ensure!(rep.balanced(), "unbalanced at {:?}", rep.unbalanced);
    for d in &rep.dims {
        ensure!(d.n <= 1 || (d.dim_i == 0 && d.dim_ii == 0), "nonzero at n={}", d.n);
    }
    ensure!(rep.ni.holds && rep.nii.holds, "NI {} NII {}", rep.ni.holds, rep.nii.holds);
    ensure!(rep.ni_plus.holds && rep.nii_plus.holds, "NI+ {} NII+ {}", rep.ni_plus.holds, rep.nii_plus.holds);
    ensure!(rep.comparisons_equal(), "comparison images differ");
    Ok(())
}

fn conditions_vs_balance() -> Check {
    let inst = fx("a4sub");
    let t = Towers::build(&inst, 2, 2).map_err(|e| e.to_string())?;
    let rep = balance_report(&inst, &t, 2).map_err(|e| e.to_string())?;
    ensure!(!rep.balanced(), "a4sub reported balanced");
    ensure!(!(rep.ni.holds && rep.nii.holds), "a4sub: NI and NII both hold");
    ensure!(rep.balance_matches_conditions(), "a4sub: conditions disagree with balance");
    let inst = fx("twoterm_a2");
    let t = Towers::build(&inst, 2, 2).map_err(|e| e.to_string())?;
    let rep = balance_report(&inst, &t, 2).map_err(|e| e.to_string())?;
    ensure!(rep.balanced() && rep.ni.holds && rep.nii.holds, "twoterm_a2 conditions or balance fail");
    Ok(())
}

fn defects() -> Check {
    for name in FIXTURES {
        let inst = fx(name);
        let samples: Vec<_> = inst
            .conflations
            .iter()
            .map(|c| conflation_defect(&inst.cat, &inst.e, c))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        for c in 0..inst.n() {
            let conf = &inst.conflations[inst.dominant[c].ok_or("no dominant")?];
            let sy = stable_yoneda_check(&inst.cat, &inst.e, conf).map_err(|e| e.to_string())?;
            ensure!(sy.holds(), "{name}: stable Yoneda fails at {}", sy.c);
            let theta = conflation_defect(&inst.cat, &inst.e, conf).map_err(|e| e.to_string())?;
            for s in &samples {
                let rc = reflection_check(&inst.cat, &theta, s).map_err(|e| e.to_string())?;
                ensure!(rc.existence && rc.uniqueness, "{name}/{}: {rc:?}", conf.name);
            }
            let x = inst.cat.indec(c);
            let refl = reflect_fp_functor(&inst, &FpPresentation::representable(&inst.cat, &x)).map_err(|e| e.to_string())?;
            ensure!(refl.module.dims == theta.module.dims, "{name}: representable reflection at {c}");
        }
        for conf in &inst.conflations {
            let pres = FpPresentation { c: conf.y.clone() };
            let refl = reflect_fp_functor(&inst, &pres).map_err(|e| e.to_string())?;
            let d = conflation_defect(&inst.cat, &inst.e, conf).map_err(|e| e.to_string())?;
            ensure!(refl.module.dims == d.module.dims, "{name}/{}: round trip", conf.name);
            let rc = reflection_check_fp(&inst.cat, &pres, &refl, &d.module).map_err(|e| e.to_string())?;
            ensure!(rc.holds(), "{name}/{}: {rc:?}", conf.name);
        }
    }
    Ok(())
}

fn alternating_sums() -> Check {
    let inst = fx("twoterm_a2");
    let t = Towers::build(&inst, 3, 3).map_err(|e| e.to_string())?;
    ensure!(!inst.resolutions.is_empty(), "no resolution chains");
    for chain in &inst.resolutions {
        for x in 0..inst.n() {
            let s = alternating_sum_check(&inst, &t, chain, x).map_err(|e| e.to_string())?;
            ensure!(s.holds(), "{s:?}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let checks: [(&str, fn() -> Check); 12] = [
        ("twoterm global dimension is 1", gldim_twoterm),
        ("periodic point is 1-dimensional in every degree", periodic_point),
        ("split fixtures have no negative extensions", split_vanishing),
        ("a4sub non-bivariant negative extension", non_bivariant),
        ("long exact sequences up to level 3", les_exactness),
        ("E_I/E_II sequences acyclic over -4..3", acyclicity),
        ("coend/satellite and end/kernel agree", method_agreement),
        ("coend soundness", coend_soundness),
        ("twoterm_a2 balance and conditions", balance_twoterm),
        ("conditions fail exactly where balance fails", conditions_vs_balance),
        ("defects, reflections and stable Yoneda", defects),
        ("alternating sums over resolution chains", alternating_sums),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (label, check)) in checks.iter().enumerate() {
        let res = panic::catch_unwind(check).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match res {
            Ok(()) => println!("PASS {:>2} {label}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {label}: {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", checks.len() - failed, checks.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
