use anyhow::{bail, Result};
use extrikit::defects::{
    conflation_defect, is_pointwise_epi, projective_cover, reflect_fp_functor, reflection_check, reflection_check_fp,
    stable_yoneda_check, FpPresentation,
};
use extrikit::funcat::Bimodule;
use extrikit::instances::{validate_instance, ExtriInstance};
use extrikit::negext::{
    acyclicity_check, alternating_sum_check, balance_report, kernel_iteration, kernel_iteration_dual, NegKind, NegSequence,
    Towers,
};
use extrikit::posext::{self, pos_gldim, satellite_tower, GlDim};
use extrikit::relstruct::{acyclic_witness_subfunctor, gamma_cohomology, ConnectedSequence, Truncated};
use extrikit::Scalar;
use serde_json::{json, Map, Value};

use crate::Method;

#[derive(Debug, Default)]
pub struct Outcome {
    pub text: Vec<String>,
    pub json: Map<String, Value>,
    /// Violated identities: always fatal.
    pub violations: Vec<String>,
    /// Mathematical findings that are not errors.
    pub findings: Vec<String>,
}

impl Outcome {
    fn absorb(&mut self, key: &str, o: Outcome) {
        self.text.extend(o.text);
        self.json.insert(key.into(), Value::Object(o.json));
        self.violations.extend(o.violations);
        self.findings.extend(o.findings);
    }
}

fn pairs_of<S: Scalar>(inst: &ExtriInstance<S>, spec: &[String]) -> Result<Vec<(usize, usize)>> {
    let n = inst.n();
    if spec.is_empty() {
        return Ok((0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect());
    }
    spec.iter()
        .map(|p| {
            let Some((c, a)) = p.split_once(',') else {
                bail!("pair {p:?} is not of the form C,A");
            };
            Ok((inst.cat.index_of(c.trim())?, inst.cat.index_of(a.trim())?))
        })
        .collect()
}

fn table<S: Scalar>(inst: &ExtriInstance<S>, levels: &[Bimodule<S>], pairs: &[(usize, usize)], from: usize) -> Vec<Value> {
    let mut rows = Vec::new();
    for (n, b) in levels.iter().enumerate().skip(from) {
        for &(x, y) in pairs {
            rows.push(json!({"n": n, "c": inst.cat.name(x), "a": inst.cat.name(y), "dim": b.dim(x, y)}));
        }
    }
    rows
}

fn diff_tables(label: &str, a: &[Value], b: &[Value], out: &mut Outcome) {
    for (ra, rb) in a.iter().zip(b) {
        if ra != rb {
            out.violations.push(format!("{label}: {ra} vs {rb}"));
        }
    }
}

fn print_table(out: &mut Outcome, label: &str, sign: &str, rows: &[Value]) {
    for r in rows {
        out.text.push(format!(
            "{label}^{sign}{}({}, {}) = {}",
            r["n"],
            r["c"].as_str().unwrap_or(""),
            r["a"].as_str().unwrap_or(""),
            r["dim"]
        ));
    }
}

pub fn validate<S: Scalar>(inst: &ExtriInstance<S>) -> Outcome {
    let rep = validate_instance(inst);
    let mut out = Outcome::default();
    out.text.push(format!(
        "{}: {} indecomposables, {} conflations, {}",
        inst.name,
        inst.n(),
        inst.conflations.len(),
        if rep.ok() { "valid" } else { "INVALID" }
    ));
    out.text.extend(rep.caveats.iter().map(|c| format!("caveat: {c}")));
    out.json.insert("valid".into(), rep.ok().into());
    out.json.insert("caveats".into(), rep.caveats.clone().into());
    out.violations.extend(rep.failures);
    out
}

pub fn ext<S: Scalar>(
    inst: &ExtriInstance<S>,
    pos: Option<usize>,
    neg: Option<usize>,
    pairs: &[String],
    method: Option<Method>,
    cross_check: bool,
) -> Result<Outcome> {
    let pairs = pairs_of(inst, pairs)?;
    let mut out = Outcome::default();
    if let Some(n) = pos {
        let coend = || -> Result<Vec<Value>> { Ok(table(inst, inst.tower(n)?.levels(), &pairs, 1)) };
        let satellite = || -> Result<Vec<Value>> {
            let Some(dom) = inst.dominant_family() else {
                bail!("satellite method needs a designated dominant conflation for every indecomposable");
            };
            Ok(table(inst, &satellite_tower(&inst.cat, &inst.e, &dom, n)?, &pairs, 1))
        };
        let method = method.unwrap_or(Method::Coend);
        let rows = match method {
            Method::Coend => coend()?,
            Method::Satellite => satellite()?,
            _ => bail!("--pos takes --method coend or satellite"),
        };
        if cross_check {
            let other = if method == Method::Coend { satellite()? } else { coend()? };
            diff_tables("coend vs satellite", &rows, &other, &mut out);
            out.text.push(format!("cross-check coend/satellite: {}", if out.violations.is_empty() { "agree" } else { "DIFFER" }));
        }
        print_table(&mut out, "E", "", &rows);
        out.json.insert("method".into(), format!("{method:?}").to_lowercase().into());
        out.json.insert("pos".into(), rows.into());
    }
    if let Some(n) = neg {
        let end = || -> Result<(Vec<Value>, Vec<Value>)> {
            let t = Towers::build(inst, n, n)?;
            let lv = |k: NegKind| -> Result<Vec<Bimodule<S>>> { (0..=n).map(|i| Ok(t.neg(k).level(i)?.clone())).collect() };
            Ok((table(inst, &lv(NegKind::I)?, &pairs, 1), table(inst, &lv(NegKind::II)?, &pairs, 1)))
        };
        let kernel = || -> Result<(Vec<Value>, Vec<Value>)> {
            let (Some(dom), Some(codom)) = (inst.dominant_family(), inst.codominant_family()) else {
                bail!("kernel method needs designated dominant and codominant conflations everywhere");
            };
            let i = kernel_iteration(&inst.cat, &inst.e, &dom, n)?;
            let ii = kernel_iteration_dual(&inst.cat, &inst.e, &codom, n)?;
            Ok((table(inst, &i, &pairs, 1), table(inst, &ii, &pairs, 1)))
        };
        let method = method.unwrap_or(Method::End);
        let (ri, rii) = match method {
            Method::End => end()?,
            Method::Kernel => kernel()?,
            _ => bail!("--neg takes --method end or kernel"),
        };
        if cross_check {
            let (oi, oii) = if method == Method::End { kernel()? } else { end()? };
            diff_tables("E_I end vs kernel", &ri, &oi, &mut out);
            diff_tables("E_II end vs kernel", &rii, &oii, &mut out);
            out.text.push(format!("cross-check end/kernel: {}", if out.violations.is_empty() { "agree" } else { "DIFFER" }));
        }
        print_table(&mut out, "E_I", "-", &ri);
        print_table(&mut out, "E_II", "-", &rii);
        out.json.insert("method".into(), format!("{method:?}").to_lowercase().into());
        out.json.insert("neg_i".into(), ri.into());
        out.json.insert("neg_ii".into(), rii.into());
    }
    Ok(out)
}

pub fn les_check<S: Scalar>(inst: &ExtriInstance<S>, nmax: usize) -> Result<Outcome> {
    let mut out = Outcome::default();
    let towers = Towers::build(inst, nmax, nmax)?;
    let mut positions = 0;
    let mut per = Vec::new();
    for conf in &inst.conflations {
        let pos = posext::les_check(&inst.cat, &towers.pos, conf, nmax)?;
        let lo = -(nmax as i64);
        let hi = nmax as i64 - 1;
        let i = acyclicity_check(&inst.cat, &towers, NegKind::I, conf, lo, hi)?;
        let ii = acyclicity_check(&inst.cat, &towers, NegKind::II, conf, lo, hi)?;
        positions += pos.positions + i.positions + ii.positions;
        per.push(json!({"conflation": conf.name, "positive": pos.ok(), "e_i": i.ok(), "e_ii": ii.ok()}));
        out.violations.extend(pos.violations);
        out.violations.extend(i.violations);
        out.violations.extend(ii.violations);
    }
    out.text.push(format!(
        "{} conflations, {positions} positions checked, {} violations",
        inst.conflations.len(),
        out.violations.len()
    ));
    out.json.insert("nmax".into(), nmax.into());
    out.json.insert("positions".into(), positions.into());
    out.json.insert("conflations".into(), per.into());
    Ok(out)
}

fn condition(name: &str, c: &extrikit::negext::ConditionCheck, out: &mut Outcome) -> Value {
    out.text.push(format!("{name}: {} ({} witnesses)", if c.holds { "holds" } else { "fails" }, c.witnesses));
    for f in &c.failures {
        out.findings.push(format!("{name}: {f}"));
    }
    json!({"holds": c.holds, "witnesses": c.witnesses, "failures": c.failures})
}

pub fn balance<S: Scalar>(inst: &ExtriInstance<S>, nmax: usize) -> Result<Outcome> {
    let mut out = Outcome::default();
    let towers = Towers::build(inst, nmax, nmax)?;
    let rep = balance_report(inst, &towers, nmax)?;
    let name = |i: usize| inst.cat.name(i).to_string();
    let dims: Vec<Value> = rep
        .dims
        .iter()
        .map(|d| json!({"c": name(d.x), "a": name(d.y), "n": d.n, "e_i": d.dim_i, "e_ii": d.dim_ii}))
        .collect();
    let unbalanced: Vec<Value> = rep.unbalanced.iter().map(|&(x, y, n)| json!([name(x), name(y), n])).collect();
    out.text.push(format!("balanced: {}", rep.balanced()));
    for &(x, y, n) in &rep.unbalanced {
        out.text.push(format!("unbalanced at ({}, {}, {n})", name(x), name(y)));
        out.findings.push(format!("unbalanced at ({}, {}, {n})", name(x), name(y)));
    }
    let ni = condition("NI", &rep.ni, &mut out);
    let ni_t = condition("NI (table inflations)", &rep.ni_table, &mut out);
    let nii = condition("NII", &rep.nii, &mut out);
    let nii_t = condition("NII (table deflations)", &rep.nii_table, &mut out);
    let nip = condition("NI+ (witness-bounded)", &rep.ni_plus, &mut out);
    let niip = condition("NII+ (witness-bounded)", &rep.nii_plus, &mut out);
    if !rep.balance_matches_conditions() {
        out.violations.push("dimension balance disagrees with (NI) and (NII)".into());
    }
    let cmp: Vec<Value> = rep
        .comparisons
        .iter()
        .map(|c| {
            json!({"c": name(c.x), "a": name(c.y), "omega": c.omega, "iota": c.iota,
                   "dim_i": c.image_i.dim(), "dim_ii": c.image_ii.dim(), "equal": c.equal()})
        })
        .collect();
    let unequal = rep.comparisons.iter().filter(|c| !c.equal()).count();
    out.text.push(format!("image comparisons: {} pairs, {unequal} unequal", rep.comparisons.len()));
    for c in rep.comparisons.iter().filter(|c| !c.equal()) {
        out.findings.push(format!("images differ at ({}, {})", name(c.x), name(c.y)));
    }
    out.text.extend(rep.caveats.iter().map(|c| format!("caveat: {c}")));
    out.json.insert("nmax".into(), rep.nmax.into());
    out.json.insert("dims".into(), dims.into());
    out.json.insert("unbalanced".into(), unbalanced.into());
    out.json.insert("ni".into(), ni);
    out.json.insert("ni_table".into(), ni_t);
    out.json.insert("nii".into(), nii);
    out.json.insert("nii_table".into(), nii_t);
    out.json.insert("ni_plus".into(), nip);
    out.json.insert("nii_plus".into(), niip);
    out.json.insert("comparisons".into(), cmp.into());
    out.json.insert("caveats".into(), rep.caveats.clone().into());
    let mut sums = Vec::new();
    for chain in &inst.resolutions {
        if chain.conflations.len() + 1 > nmax {
            continue;
        }
        for x in 0..inst.n() {
            let s = alternating_sum_check(inst, &towers, chain, x)?;
            if !s.holds() {
                out.violations.push(format!("alternating sum fails for X={}, Y={}: {} != {}", name(x), name(s.y), s.lhs, s.rhs()));
            }
            sums.push(json!({"x": name(x), "y": name(s.y), "lhs": s.lhs, "rhs": s.rhs()}));
        }
    }
    out.json.insert("alternating_sums".into(), sums.into());
    Ok(out)
}

pub fn gldim<S: Scalar>(inst: &ExtriInstance<S>, nmax: usize) -> Result<Outcome> {
    let mut out = Outcome::default();
    let g = pos_gldim(&inst.tower(nmax)?);
    out.text.push(format!("gldim: {g}"));
    let v = match g {
        GlDim::Exact(d) => json!({"exact": d}),
        GlDim::AtLeast(d) => json!({"at_least": d}),
    };
    out.json.insert("gldim".into(), v);
    Ok(out)
}

pub fn defect<S: Scalar>(inst: &ExtriInstance<S>, reflect: bool) -> Result<Outcome> {
    let mut out = Outcome::default();
    let (cat, e) = (&inst.cat, &inst.e);
    let mut dims = Vec::new();
    for conf in &inst.conflations {
        let d = conflation_defect(cat, e, conf)?;
        out.text.push(format!("Θ[{}] = {:?}", conf.name, d.dims()));
        dims.push(json!({"conflation": conf.name, "dims": d.dims()}));
    }
    out.json.insert("defects".into(), dims.into());
    let mut yoneda = Vec::new();
    for c in 0..inst.n() {
        let Some(k) = inst.dominant[c] else { continue };
        let sy = stable_yoneda_check(cat, e, &inst.conflations[k])?;
        if !sy.holds() {
            out.violations.push(format!("stable Yoneda fails for {}", sy.c));
        }
        yoneda.push(json!({"conflation": sy.c, "holds": sy.holds()}));
    }
    out.text.push(format!("stable Yoneda: {} dominant conflations checked", yoneda.len()));
    out.json.insert("stable_yoneda".into(), yoneda.into());
    if reflect {
        let samples = inst
            .conflations
            .iter()
            .map(|c| conflation_defect(cat, e, c))
            .collect::<Result<Vec<_>, _>>()?;
        let mut checks = 0;
        for c in 0..inst.n() {
            let Some(k) = inst.dominant[c] else { continue };
            let th = conflation_defect(cat, e, &inst.conflations[k])?;
            for (s, conf) in samples.iter().zip(&inst.conflations) {
                checks += 1;
                if !reflection_check(cat, &th, s)?.holds() {
                    out.violations.push(format!("reflection fails for {} against {}", inst.conflations[k].name, conf.name));
                }
            }
        }
        for (conf, d) in inst.conflations.iter().zip(&samples) {
            let (_, cover) = projective_cover(inst, conf)?;
            if !is_pointwise_epi(&cover) {
                out.violations.push(format!("no epi from the dominant defect onto Θ[{}]", conf.name));
            }
            let pres = FpPresentation { c: conf.y.clone() };
            let refl = reflect_fp_functor(inst, &pres)?;
            checks += 1;
            if refl.module.dims != d.module.dims || !reflection_check_fp(cat, &pres, &refl, &d.module)?.holds() {
                out.violations.push(format!("reflection of the cokernel of y fails for {}", conf.name));
            }
        }
        out.text.push(format!("reflection checks: {checks}"));
        out.json.insert("reflection_checks".into(), checks.into());
    }
    Ok(out)
}

fn gamma_scan<S: Scalar>(
    inst: &ExtriInstance<S>,
    seq: &dyn ConnectedSequence<S>,
    label: &str,
    lo: i64,
    hi: i64,
    out: &mut Outcome,
) -> Result<Value> {
    let mut rows = Vec::new();
    for conf in &inst.conflations {
        let h = gamma_cohomology(seq, &inst.cat, conf, lo, hi)?;
        let nz: Vec<Value> = h
            .nonzero()
            .into_iter()
            .map(|(d, m, k)| json!({"degree": d, "at": inst.cat.name(m), "dim": k}))
            .collect();
        if !h.acyclic() {
            out.findings.push(format!("{label}: Γ({}) is not acyclic", conf.name));
        }
        rows.push(json!({"conflation": conf.name, "acyclic": h.acyclic(), "nonzero": nz}));
    }
    let sub = acyclic_witness_subfunctor(inst, seq, lo, hi)?;
    out.text.push(format!(
        "{label}: {} acyclic, {} rejected, sub-bifunctor dims {:?}",
        sub.acyclic.len(),
        sub.rejected.len(),
        sub.dims()
    ));
    Ok(json!({"gamma": rows, "acyclic": sub.acyclic, "rejected": sub.rejected,
              "rejected_inside": sub.rejected_inside, "sub_dims": sub.dims(), "caveats": sub.caveats}))
}

pub fn relstruct<S: Scalar>(inst: &ExtriInstance<S>, nmax: usize) -> Result<Outcome> {
    let mut out = Outcome::default();
    let towers = Towers::build(inst, nmax, nmax)?;
    let (lo, hi) = (-(nmax as i64), nmax as i64 - 1);
    let full = NegSequence { towers: &towers, kind: NegKind::I };
    let v = gamma_scan(inst, &full, "E_I sequence", lo, hi, &mut out)?;
    // Γ of the full sequence is acyclic for every conflation; a failure is a bug.
    let bad: Vec<String> = out.findings.drain(..).collect();
    out.violations.extend(bad);
    out.json.insert("e_i".into(), v);
    let trunc = Truncated { tower: &towers.pos };
    let v = gamma_scan(inst, &trunc, "truncated sequence", lo, hi, &mut out)?;
    out.json.insert("truncated".into(), v);
    Ok(out)
}

pub fn report<S: Scalar>(inst: &ExtriInstance<S>, nmax: usize) -> Result<Outcome> {
    let mut out = Outcome::default();
    out.absorb("validate", validate(inst));
    out.absorb("ext_pos", ext(inst, Some(nmax), None, &[], None, false)?);
    out.absorb("ext_neg", ext(inst, None, Some(nmax), &[], None, false)?);
    out.absorb("les_check", les_check(inst, nmax)?);
    out.absorb("balance", balance(inst, nmax)?);
    out.absorb("gldim", gldim(inst, nmax)?);
    out.absorb("defect", defect(inst, true)?);
    out.absorb("relstruct", relstruct(inst, nmax)?);
    Ok(out)
}
