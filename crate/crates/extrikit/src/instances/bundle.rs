//! JSON bundle format. Every map is a `BTreeMap`, so serialization is
//! canonical and byte-stable.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::fincat::{FinAddCategory, Morphism, Obj};
use crate::funcat::Bimodule;
use crate::linalg::Matrix;
use crate::posext::Conflation;
use crate::scalar::{check_characteristic, format_ratio, parse_ratio, ratio_fits_i64, Scalar};

use super::complexes::{ChainMap, ComplexCategory, Decomposition};
use super::{ExtriInstance, InstanceError, ResolutionChain};

pub const SCHEMA: &str = "extrikit-bundle/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JScalar {
    Int(i64),
    Str(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldSpec {
    pub characteristic: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub dim: usize,
    pub basis: Vec<String>,
}

type Mat = Vec<Vec<JScalar>>;
type ObjSpec = BTreeMap<String, usize>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConflationSpec {
    pub name: String,
    pub a: ObjSpec,
    pub b: ObjSpec,
    pub c: ObjSpec,
    pub x: Vec<Vec<Vec<JScalar>>>,
    pub y: Vec<Vec<Vec<JScalar>>>,
    pub delta: Vec<JScalar>,
    #[serde(default)]
    pub dominant: bool,
    #[serde(default)]
    pub codominant: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResolutionSpec {
    pub y: String,
    pub projectives: Vec<ObjSpec>,
    pub conflations: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Bundle {
    pub schema: String,
    pub name: String,
    pub field: FieldSpec,
    pub indecomposables: Vec<String>,
    pub hom: BTreeMap<String, SpaceSpec>,
    pub identity: BTreeMap<String, Vec<JScalar>>,
    /// `"i|j|k"` → `[a][b][t]`: coefficient of basis `t` of `Hom(i,k)` in `g_b ∘ f_a`.
    #[serde(default)]
    pub comp: BTreeMap<String, Vec<Vec<Vec<JScalar>>>>,
    pub ext: BTreeMap<String, SpaceSpec>,
    /// Basis morphism `j -> j2` → `i` → matrix `E(i,j) -> E(i,j2)`.
    #[serde(default)]
    pub ext_left_act: BTreeMap<String, BTreeMap<String, Mat>>,
    /// Basis morphism `i2 -> i` → `j` → matrix `E(i,j) -> E(i2,j)`.
    #[serde(default)]
    pub ext_right_act: BTreeMap<String, BTreeMap<String, Mat>>,
    #[serde(default)]
    pub conflations: Vec<ConflationSpec>,
    #[serde(default)]
    pub designated_dominant: BTreeMap<String, String>,
    #[serde(default)]
    pub designated_codominant: BTreeMap<String, String>,
    #[serde(default)]
    pub resolutions: Vec<ResolutionSpec>,
}

fn to_j<S: Scalar>(s: &S) -> JScalar {
    let r = s.to_ratio();
    match ratio_fits_i64(&r) {
        Some(v) => JScalar::Int(v),
        None => JScalar::Str(format_ratio(&r)),
    }
}

fn from_j<S: Scalar>(j: &JScalar, ch: u32) -> Result<S, InstanceError> {
    let r = match j {
        JScalar::Int(v) => num_rational::BigRational::from_integer((*v).into()),
        JScalar::Str(s) => parse_ratio(s)?,
    };
    Ok(S::from_ratio(&r, ch)?)
}

fn vec_from_j<S: Scalar>(v: &[JScalar], ch: u32) -> Result<Vec<S>, InstanceError> {
    v.iter().map(|j| from_j(j, ch)).collect()
}

fn mat_to_j<S: Scalar>(m: &Matrix<S>) -> Mat {
    (0..m.rows()).map(|i| m.row(i).iter().map(to_j).collect()).collect()
}

fn mat_from_j<S: Scalar>(rows: usize, cols: usize, m: &Mat, ch: u32, what: &str) -> Result<Matrix<S>, InstanceError> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(InstanceError::Bundle(format!("{what}: expected a {rows}x{cols} matrix")));
    }
    let mut out = Matrix::zeros(rows, cols);
    for (i, r) in m.iter().enumerate() {
        for (j, v) in r.iter().enumerate() {
            out.set(i, j, from_j(v, ch)?);
        }
    }
    Ok(out)
}

fn obj_to_spec<S: Scalar>(cat: &FinAddCategory<S>, o: &Obj) -> ObjSpec {
    o.0.iter()
        .enumerate()
        .filter(|(_, &m)| m > 0)
        .map(|(i, &m)| (cat.name(i).to_string(), m))
        .collect()
}

fn obj_from_spec<S: Scalar>(cat: &FinAddCategory<S>, s: &ObjSpec) -> Result<Obj, InstanceError> {
    let mut o = Obj::zero(cat.n());
    for (name, &m) in s {
        o.0[cat.index_of(name)?] += m;
    }
    Ok(o)
}

fn morphism_from_spec<S: Scalar>(
    cat: &FinAddCategory<S>,
    x: &Obj,
    y: &Obj,
    blocks: &[Vec<Vec<JScalar>>],
    ch: u32,
) -> Result<Morphism<S>, InstanceError> {
    let b: Vec<Vec<Vec<S>>> = blocks
        .iter()
        .map(|row| row.iter().map(|v| vec_from_j(v, ch)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    Ok(cat.morphism_from_blocks(x, y, &b)?)
}

fn key2(a: &str, b: &str) -> String {
    format!("{a}|{b}")
}

pub fn to_bundle<S: Scalar>(inst: &ExtriInstance<S>) -> Bundle {
    let cat = &inst.cat;
    let n = cat.n();
    let names: Vec<String> = cat.names().to_vec();
    let mut hom = BTreeMap::new();
    let mut ext = BTreeMap::new();
    let mut comp = BTreeMap::new();
    let mut identity = BTreeMap::new();
    let mut left = BTreeMap::new();
    let mut right = BTreeMap::new();
    for i in 0..n {
        identity.insert(names[i].clone(), cat.id_coeffs(i).iter().map(to_j).collect());
        for j in 0..n {
            hom.insert(
                key2(&names[i], &names[j]),
                SpaceSpec {
                    dim: cat.hom_dim(i, j),
                    basis: cat.hom_labels(i, j).to_vec(),
                },
            );
            ext.insert(
                key2(&names[i], &names[j]),
                SpaceSpec {
                    dim: inst.e.dim(i, j),
                    basis: (0..inst.e.dim(i, j)).map(|k| format!("e{k}")).collect(),
                },
            );
            for k in 0..n {
                let (dij, djk, dik) = (cat.hom_dim(i, j), cat.hom_dim(j, k), cat.hom_dim(i, k));
                if dij * djk * dik == 0 {
                    continue;
                }
                let arr: Vec<Vec<Vec<JScalar>>> = (0..dij)
                    .map(|a| (0..djk).map(|b| cat.compose_basis(i, j, k, a, b).iter().map(to_j).collect()).collect())
                    .collect();
                comp.insert(format!("{}|{}|{}", names[i], names[j], names[k]), arr);
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for (k, lab) in cat.hom_labels(a, b).iter().enumerate() {
                let mut lm = BTreeMap::new();
                let mut rm = BTreeMap::new();
                for c in 0..n {
                    let l = inst.e.left_basis(a, b, k, c);
                    if l.rows() * l.cols() > 0 {
                        lm.insert(names[c].clone(), mat_to_j(l));
                    }
                    let r = inst.e.right_basis(a, b, k, c);
                    if r.rows() * r.cols() > 0 {
                        rm.insert(names[c].clone(), mat_to_j(r));
                    }
                }
                if !lm.is_empty() {
                    left.insert(lab.clone(), lm);
                }
                if !rm.is_empty() {
                    right.insert(lab.clone(), rm);
                }
            }
        }
    }
    let conflations = inst
        .conflations
        .iter()
        .map(|c| ConflationSpec {
            name: c.name.clone(),
            a: obj_to_spec(cat, &c.a),
            b: obj_to_spec(cat, &c.b),
            c: obj_to_spec(cat, &c.c),
            x: blocks_to_j(cat, &c.x),
            y: blocks_to_j(cat, &c.y),
            delta: c.delta.iter().map(to_j).collect(),
            dominant: c.dominant,
            codominant: c.codominant,
        })
        .collect();
    let designated = |d: &[Option<usize>]| -> BTreeMap<String, String> {
        d.iter()
            .enumerate()
            .filter_map(|(i, k)| k.map(|k| (names[i].clone(), inst.conflations[k].name.clone())))
            .collect()
    };
    let resolutions = inst
        .resolutions
        .iter()
        .map(|r| ResolutionSpec {
            y: names[r.y].clone(),
            projectives: r.projectives.iter().map(|p| obj_to_spec(cat, p)).collect(),
            conflations: r.conflations.iter().map(|&k| inst.conflations[k].name.clone()).collect(),
        })
        .collect();
    Bundle {
        schema: SCHEMA.into(),
        name: inst.name.clone(),
        field: FieldSpec {
            characteristic: inst.characteristic as u64,
        },
        indecomposables: names.clone(),
        hom,
        identity,
        comp,
        ext,
        ext_left_act: left,
        ext_right_act: right,
        conflations,
        designated_dominant: designated(&inst.dominant),
        designated_codominant: designated(&inst.codominant),
        resolutions,
    }
}

fn blocks_to_j<S: Scalar>(cat: &FinAddCategory<S>, f: &Morphism<S>) -> Vec<Vec<Vec<JScalar>>> {
    cat.blocks(f)
        .iter()
        .map(|row| row.iter().map(|b| b.iter().map(to_j).collect()).collect())
        .collect()
}

pub fn to_bundle_json<S: Scalar>(inst: &ExtriInstance<S>) -> String {
    let mut s = serde_json::to_string_pretty(&to_bundle(inst)).expect("bundle serializes");
    s.push('\n');
    s
}

/// Reads a bundle; `characteristic` overrides the field declared in it.
pub fn parse_instance<S: Scalar>(json: &str, characteristic: Option<u32>) -> Result<ExtriInstance<S>, InstanceError> {
    let b: Bundle = serde_json::from_str(json).map_err(|e| InstanceError::Bundle(e.to_string()))?;
    from_bundle(&b, characteristic)
}

pub fn load_instance<S: Scalar>(path: &Path, characteristic: Option<u32>) -> Result<ExtriInstance<S>, InstanceError> {
    let text = std::fs::read_to_string(path).map_err(|e| InstanceError::Io(format!("{}: {e}", path.display())))?;
    parse_instance(&text, characteristic)
}

pub fn from_bundle<S: Scalar>(b: &Bundle, characteristic: Option<u32>) -> Result<ExtriInstance<S>, InstanceError> {
    let bad = |m: String| InstanceError::Bundle(m);
    if b.schema != SCHEMA {
        return Err(bad(format!("unsupported schema {:?}", b.schema)));
    }
    let ch = match characteristic {
        Some(c) => c,
        None => check_characteristic(b.field.characteristic)?,
    };
    S::from_i64(1, ch)?;
    let names = &b.indecomposables;
    let n = names.len();
    let mut seen = std::collections::BTreeSet::new();
    for nm in names {
        if !seen.insert(nm) {
            return Err(bad(format!("duplicate indecomposable {nm:?}")));
        }
    }
    let space = |tbl: &BTreeMap<String, SpaceSpec>, what: &str, i: usize, j: usize| -> Result<SpaceSpec, InstanceError> {
        match tbl.get(&key2(&names[i], &names[j])) {
            Some(s) if s.basis.len() == s.dim => Ok(s.clone()),
            Some(_) => Err(bad(format!("{what} {}|{}: basis length differs from dim", names[i], names[j]))),
            None => Ok(SpaceSpec { dim: 0, basis: vec![] }),
        }
    };
    let mut hom_dim = vec![vec![0; n]; n];
    let mut labels = vec![vec![Vec::new(); n]; n];
    let mut label_of = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let s = space(&b.hom, "hom", i, j)?;
            hom_dim[i][j] = s.dim;
            for (k, l) in s.basis.iter().enumerate() {
                if label_of.insert(l.clone(), (i, j, k)).is_some() {
                    return Err(bad(format!("duplicate basis morphism label {l:?}")));
                }
            }
            labels[i][j] = s.basis;
        }
    }
    for k in b.hom.keys() {
        let ok = k.split_once('|').is_some_and(|(x, y)| names.contains(&x.to_string()) && names.contains(&y.to_string()));
        if !ok {
            return Err(bad(format!("hom key {k:?} does not name two indecomposables")));
        }
    }
    let mut comp = vec![vec![vec![Vec::new(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (dij, djk, dik) = (hom_dim[i][j], hom_dim[j][k], hom_dim[i][k]);
                let key = format!("{}|{}|{}", names[i], names[j], names[k]);
                let mut flat = vec![S::zero(); dij * djk * dik];
                if let Some(arr) = b.comp.get(&key) {
                    if arr.len() != dij || arr.iter().any(|r| r.len() != djk || r.iter().any(|t| t.len() != dik)) {
                        return Err(bad(format!("comp {key} has the wrong shape")));
                    }
                    for (a, r) in arr.iter().enumerate() {
                        for (bb, t) in r.iter().enumerate() {
                            for (tt, v) in t.iter().enumerate() {
                                flat[(a * djk + bb) * dik + tt] = from_j(v, ch)?;
                            }
                        }
                    }
                }
                comp[i][j][k] = flat;
            }
        }
    }
    let ids = names
        .iter()
        .map(|nm| {
            let v = b.identity.get(nm).ok_or_else(|| bad(format!("identity of {nm} missing")))?;
            vec_from_j(v, ch)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let cat = FinAddCategory::new(names.clone(), hom_dim.clone(), labels, comp, ids)?;
    let mut edims = vec![vec![0; n]; n];
    for (i, row) in edims.iter_mut().enumerate() {
        for (j, d) in row.iter_mut().enumerate() {
            *d = space(&b.ext, "ext", i, j)?.dim;
        }
    }
    let mut left = vec![vec![Vec::new(); n]; n];
    let mut right = vec![vec![Vec::new(); n]; n];
    for a in 0..n {
        for bb in 0..n {
            for lab in cat.hom_labels(a, bb) {
                let lm = b.ext_left_act.get(lab);
                let rm = b.ext_right_act.get(lab);
                let mut lf = Vec::with_capacity(n);
                let mut rf = Vec::with_capacity(n);
                for c in 0..n {
                    let (r, co) = (edims[c][bb], edims[c][a]);
                    lf.push(match lm.and_then(|m| m.get(&names[c])) {
                        Some(m) => mat_from_j(r, co, m, ch, &format!("left action {lab} at {}", names[c]))?,
                        None => Matrix::zeros(r, co),
                    });
                    let (r, co) = (edims[a][c], edims[bb][c]);
                    rf.push(match rm.and_then(|m| m.get(&names[c])) {
                        Some(m) => mat_from_j(r, co, m, ch, &format!("right action {lab} at {}", names[c]))?,
                        None => Matrix::zeros(r, co),
                    });
                }
                left[a][bb].push(lf);
                right[a][bb].push(rf);
            }
        }
    }
    for lab in b.ext_left_act.keys().chain(b.ext_right_act.keys()) {
        if !label_of.contains_key(lab) {
            return Err(bad(format!("action keyed by unknown morphism {lab:?}")));
        }
    }
    let e = Bimodule::new(&cat, edims, left, right)?;
    let mut conflations = Vec::with_capacity(b.conflations.len());
    for cs in &b.conflations {
        let a = obj_from_spec(&cat, &cs.a)?;
        let bo = obj_from_spec(&cat, &cs.b)?;
        let c = obj_from_spec(&cat, &cs.c)?;
        let x = morphism_from_spec(&cat, &a, &bo, &cs.x, ch).map_err(|e| bad(format!("{}: x: {e}", cs.name)))?;
        let y = morphism_from_spec(&cat, &bo, &c, &cs.y, ch).map_err(|e| bad(format!("{}: y: {e}", cs.name)))?;
        let delta = vec_from_j(&cs.delta, ch)?;
        if delta.len() != e.dim_obj(&c, &a) {
            return Err(bad(format!("{}: δ has length {}, expected {}", cs.name, delta.len(), e.dim_obj(&c, &a))));
        }
        conflations.push(Conflation {
            name: cs.name.clone(),
            a,
            b: bo,
            c,
            x,
            y,
            delta,
            dominant: cs.dominant,
            codominant: cs.codominant,
        });
    }
    let find = |nm: &str| -> Result<usize, InstanceError> {
        conflations
            .iter()
            .position(|c| c.name == nm)
            .ok_or_else(|| bad(format!("unknown conflation {nm:?}")))
    };
    let mut dominant = vec![None; n];
    for (k, v) in &b.designated_dominant {
        dominant[cat.index_of(k)?] = Some(find(v)?);
    }
    let mut codominant = vec![None; n];
    for (k, v) in &b.designated_codominant {
        codominant[cat.index_of(k)?] = Some(find(v)?);
    }
    let mut resolutions = Vec::new();
    for r in &b.resolutions {
        resolutions.push(ResolutionChain {
            y: cat.index_of(&r.y)?,
            projectives: r.projectives.iter().map(|p| obj_from_spec(&cat, p)).collect::<Result<_, _>>()?,
            conflations: r.conflations.iter().map(|c| find(c)).collect::<Result<_, _>>()?,
        });
    }
    Ok(ExtriInstance {
        name: b.name.clone(),
        characteristic: ch,
        cat,
        e,
        conflations,
        dominant,
        codominant,
        resolutions,
    })
}

fn chain_map_to_j<S: Scalar>(p: &FinAddCategory<S>, lo: i32, f: &ChainMap<S>) -> BTreeMap<String, Vec<Vec<Vec<JScalar>>>> {
    f.comps
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.src.is_zero() && !m.tgt.is_zero())
        .map(|(k, m)| ((lo + k as i32).to_string(), blocks_to_j(p, m)))
        .collect()
}

/// Complexes behind a complexes-built instance and, for every conflation,
/// the mutually inverse chain maps identifying its cone with the listed
/// middle term.
pub fn complexes_provenance<S: Scalar>(cc: &ComplexCategory<S>, inst: &ExtriInstance<S>, decs: &[Decomposition<S>]) -> String {
    let p = &cc.proj;
    let obj = |o: &Obj| -> BTreeMap<String, usize> {
        o.0.iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(i, &m)| (p.name(i).to_string(), m))
            .collect()
    };
    let complexes: Vec<serde_json::Value> = cc
        .complexes
        .iter()
        .zip(&cc.names)
        .map(|(c, nm)| {
            let objs: BTreeMap<String, _> = c
                .objs
                .iter()
                .enumerate()
                .filter(|(_, o)| !o.is_zero())
                .map(|(k, o)| ((cc.lo + k as i32).to_string(), obj(o)))
                .collect();
            let diffs: BTreeMap<String, _> = c
                .diffs
                .iter()
                .enumerate()
                .filter(|(_, d)| !d.src.is_zero() && !d.tgt.is_zero())
                .map(|(k, d)| ((cc.lo + k as i32).to_string(), blocks_to_j(p, d)))
                .collect();
            serde_json::json!({ "name": nm, "objects": objs, "differentials": diffs })
        })
        .collect();
    let splittings: Vec<serde_json::Value> = inst
        .conflations
        .iter()
        .zip(decs)
        .map(|(c, d)| {
            serde_json::json!({
                "conflation": c.name,
                "middle": obj_to_spec(&inst.cat, &d.summands),
                "to_cone": chain_map_to_j(p, cc.lo, &d.inclusion),
                "from_cone": chain_map_to_j(p, cc.lo, &d.projection),
            })
        })
        .collect();
    let proj_names: Vec<&str> = p.names().iter().map(|s| s.as_str()).collect();
    let v = serde_json::json!({
        "instance": inst.name,
        "projectives": proj_names,
        "projective_homs": "Hom(Pi,Pj) = K for i <= j, spanned by p{i}_{j}, composing to p{i}_{k}",
        "complexes": complexes,
        "cone_splittings": splittings,
    });
    let mut s = serde_json::to_string_pretty(&v).expect("provenance serializes");
    s.push('\n');
    s
}
