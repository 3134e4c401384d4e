//! Instance bundles: a category, its extension bimodule and a table of
//! realized conflations, plus the shipped fixtures.

pub mod bundle;
pub mod complexes;

use thiserror::Error;

use crate::fincat::{CatError, FinAddCategory, Obj};
use crate::funcat::{Bimodule, FunError};
use crate::linalg::{LinalgError, Matrix};
use crate::posext::{les_check, verify_codominant, verify_dominant, Conflation, ExtError, ExtTower};
use crate::scalar::{FieldError, Scalar};

pub use bundle::{load_instance, parse_instance, to_bundle_json};
pub use complexes::{ComplexCategory, ComplexData};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error(transparent)]
    Fun(#[from] FunError),
    #[error(transparent)]
    Ext(#[from] ExtError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("bundle: {0}")]
    Bundle(String),
    #[error("complexes: {0}")]
    Complex(String),
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("io: {0}")]
    Io(String),
}

/// `Ω^k Y -> P_{k-1} -> Ω^{k-1} Y` for `k = 1..n`, with `Ω^0 Y = Y` and
/// `Ω^n Y = P_n`. `conflations[k-1]` indexes the instance table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionChain {
    pub y: usize,
    pub projectives: Vec<Obj>,
    pub conflations: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ExtriInstance<S> {
    pub name: String,
    pub characteristic: u32,
    pub cat: FinAddCategory<S>,
    pub e: Bimodule<S>,
    pub conflations: Vec<Conflation<S>>,
    pub dominant: Vec<Option<usize>>,
    pub codominant: Vec<Option<usize>>,
    pub resolutions: Vec<ResolutionChain>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<String>,
    pub caveats: Vec<String>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub const FIXTURES: [&str; 8] = [
    "split1",
    "split2",
    "pt",
    "twoterm_k",
    "twoterm_a2",
    "twoterm_a3",
    "a4sub",
    "extclosed_m",
];

impl<S: Scalar> ExtriInstance<S> {
    pub fn n(&self) -> usize {
        self.cat.n()
    }

    pub fn conflation_index(&self, name: &str) -> Option<usize> {
        self.conflations.iter().position(|c| c.name == name)
    }

    /// Indecomposables `i` with `E(i,-) = 0`.
    pub fn projectives(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| (0..self.n()).all(|j| self.e.dim(i, j) == 0)).collect()
    }

    /// Indecomposables `i` with `E(-,i) = 0`.
    pub fn injectives(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| (0..self.n()).all(|j| self.e.dim(j, i) == 0)).collect()
    }

    pub fn is_projective(&self, x: &Obj) -> bool {
        let p = self.projectives();
        x.slots().iter().all(|s| p.contains(s))
    }

    pub fn is_injective(&self, x: &Obj) -> bool {
        let p = self.injectives();
        x.slots().iter().all(|s| p.contains(s))
    }

    /// Designated dominant conflation of every indecomposable, if all exist.
    pub fn dominant_family(&self) -> Option<Vec<&Conflation<S>>> {
        self.dominant.iter().map(|d| d.map(|k| &self.conflations[k])).collect()
    }

    pub fn codominant_family(&self) -> Option<Vec<&Conflation<S>>> {
        self.codominant.iter().map(|d| d.map(|k| &self.conflations[k])).collect()
    }

    pub fn tower(&self, nmax: usize) -> Result<ExtTower<S>, ExtError> {
        ExtTower::build(&self.cat, &self.e, nmax)
    }

    /// Recomputes the dominant/codominant flags of every table conflation.
    pub fn refresh_flags(&mut self) -> Result<(), ExtError> {
        let t = self.tower(1)?;
        for k in 0..self.conflations.len() {
            let d = verify_dominant(&self.cat, &t, &self.conflations[k])?.holds();
            let c = verify_codominant(&self.cat, &t, &self.conflations[k])?.holds();
            self.conflations[k].dominant = d;
            self.conflations[k].codominant = c;
        }
        Ok(())
    }

    /// Resolution chains of length at most one: the first table conflation
    /// `Ω -> P -> Y` with `Ω` and `P` projective.
    pub fn derive_resolutions(&mut self) {
        let mut out = Vec::new();
        for y in 0..self.n() {
            let yo = self.cat.indec(y);
            if self.is_projective(&yo) {
                out.push(ResolutionChain {
                    y,
                    projectives: vec![yo],
                    conflations: vec![],
                });
                continue;
            }
            let found = self
                .conflations
                .iter()
                .position(|c| c.c == yo && self.is_projective(&c.b) && self.is_projective(&c.a));
            if let Some(k) = found {
                let c = &self.conflations[k];
                out.push(ResolutionChain {
                    y,
                    projectives: vec![c.b.clone(), c.a.clone()],
                    conflations: vec![k],
                });
            }
        }
        self.resolutions = out;
    }
}

pub fn validate_resolution<S: Scalar>(inst: &ExtriInstance<S>, r: &ResolutionChain) -> Result<(), String> {
    let n = r.conflations.len();
    if r.projectives.len() != n + 1 {
        return Err(format!("chain for {} needs {} projectives", inst.cat.name(r.y), n + 1));
    }
    for p in &r.projectives {
        if !inst.is_projective(p) {
            return Err(format!("chain for {}: {:?} is not projective", inst.cat.name(r.y), p.0));
        }
    }
    let mut omega = inst.cat.indec(r.y);
    for (k, &ci) in r.conflations.iter().enumerate() {
        let c = inst
            .conflations
            .get(ci)
            .ok_or_else(|| format!("chain for {}: missing conflation", inst.cat.name(r.y)))?;
        if c.c != omega || c.b != r.projectives[k] {
            return Err(format!("chain for {}: step {} does not match", inst.cat.name(r.y), k + 1));
        }
        omega = c.a.clone();
    }
    if omega != r.projectives[n] {
        return Err(format!("chain for {}: last syzygy is not P_n", inst.cat.name(r.y)));
    }
    Ok(())
}

/// Checks the necessary conditions that finite data can certify.
pub fn validate_instance<S: Scalar>(inst: &ExtriInstance<S>) -> ValidationReport {
    let mut rep = ValidationReport::default();
    rep.failures.extend(inst.cat.validate());
    rep.failures.extend(inst.e.validate(&inst.cat));
    rep.caveats
        .push("realizations are checked for y∘x=0, x_*δ=0, y^*δ=0 and exactness; (ET3)/(ET4) are not certified".into());
    if !rep.failures.is_empty() {
        return rep;
    }
    let n = inst.n();
    for c in &inst.conflations {
        for o in [&c.a, &c.b, &c.c] {
            if let Err(e) = inst.cat.check_obj(o) {
                rep.failures.push(format!("{}: {e}", c.name));
            }
        }
    }
    if !rep.failures.is_empty() {
        return rep;
    }
    for c in &inst.conflations {
        rep.failures.extend(c.validate(&inst.cat, &inst.e));
    }
    if inst.dominant.len() != n || inst.codominant.len() != n {
        rep.failures.push("designated maps must have one entry per indecomposable".into());
        return rep;
    }
    let tower = match inst.tower(1) {
        Ok(t) => t,
        Err(e) => {
            rep.failures.push(e.to_string());
            return rep;
        }
    };
    for (i, d) in inst.dominant.iter().enumerate() {
        if let Some(k) = *d {
            let c = &inst.conflations[k];
            if c.c != inst.cat.indec(i) {
                rep.failures.push(format!("designated dominant {} does not end in {}", c.name, inst.cat.name(i)));
            }
        }
    }
    for (i, d) in inst.codominant.iter().enumerate() {
        if let Some(k) = *d {
            let c = &inst.conflations[k];
            if c.a != inst.cat.indec(i) {
                rep.failures.push(format!("designated codominant {} does not start in {}", c.name, inst.cat.name(i)));
            }
        }
    }
    for c in &inst.conflations {
        let designated_dom = inst.dominant.iter().any(|d| d.is_some_and(|k| inst.conflations[k].name == c.name));
        let designated_codom = inst.codominant.iter().any(|d| d.is_some_and(|k| inst.conflations[k].name == c.name));
        match verify_dominant(&inst.cat, &tower, c) {
            Ok(chk) if (c.dominant || designated_dom) && !chk.holds() => {
                rep.failures.push(format!("{} is flagged dominant but is not", c.name))
            }
            Err(e) => rep.failures.push(format!("{}: {e}", c.name)),
            _ => {}
        }
        match verify_codominant(&inst.cat, &tower, c) {
            Ok(chk) if (c.codominant || designated_codom) && !chk.holds() => {
                rep.failures.push(format!("{} is flagged codominant but is not", c.name))
            }
            Err(e) => rep.failures.push(format!("{}: {e}", c.name)),
            _ => {}
        }
        match les_check(&inst.cat, &tower, c, 1) {
            Ok(r) => {
                for v in r.violations {
                    rep.failures.push(format!("{}: {v}", c.name));
                }
            }
            Err(e) => rep.failures.push(format!("{}: {e}", c.name)),
        }
    }
    for r in &inst.resolutions {
        if let Err(m) = validate_resolution(inst, r) {
            rep.failures.push(m);
        }
    }
    rep
}

/// Category with `End(i) = K` and no other morphisms.
pub fn semisimple_category<S: Scalar>(names: &[&str]) -> FinAddCategory<S> {
    let n = names.len();
    let hom_dim = (0..n).map(|i| (0..n).map(|j| usize::from(i == j)).collect()).collect();
    let labels = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { vec![format!("id_{}", names[i])] } else { vec![] })
                .collect()
        })
        .collect();
    let comp = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| if i == j && j == k { vec![S::one()] } else { vec![] }).collect())
                .collect()
        })
        .collect();
    let ids = (0..n).map(|_| vec![S::one()]).collect();
    FinAddCategory::new(names.iter().map(|s| s.to_string()).collect(), hom_dim, labels, comp, ids)
        .expect("semisimple tables")
}

/// `E = 0` with every split conflation `A -> A ⊕ C -> C` between
/// indecomposables, and `0 -> C -> C`, `A -> A -> 0` as designated data.
pub fn build_split<S: Scalar>(name: &str, characteristic: u32, cat: FinAddCategory<S>) -> ExtriInstance<S> {
    let e = Bimodule::zero(&cat);
    let n = cat.n();
    let mut confs = Vec::new();
    for a in 0..n {
        for c in 0..n {
            let nm = format!("split:{}:{}", cat.name(a), cat.name(c));
            confs.push(Conflation::split(&cat, &e, &nm, &cat.indec(a), &cat.indec(c)));
        }
    }
    let mut dominant = Vec::with_capacity(n);
    for c in 0..n {
        dominant.push(Some(confs.len()));
        confs.push(Conflation::split(&cat, &e, &format!("dom:{}", cat.name(c)), &Obj::zero(n), &cat.indec(c)));
    }
    let mut codominant = Vec::with_capacity(n);
    for a in 0..n {
        codominant.push(Some(confs.len()));
        confs.push(Conflation::split(&cat, &e, &format!("codom:{}", cat.name(a)), &cat.indec(a), &Obj::zero(n)));
    }
    let mut inst = ExtriInstance {
        name: name.to_string(),
        characteristic,
        cat,
        e,
        conflations: confs,
        dominant,
        codominant,
        resolutions: vec![],
    };
    inst.refresh_flags().expect("zero bimodule");
    inst.derive_resolutions();
    inst
}

/// One object `T` with `End(T) = E(T,T) = K` and the triangle `T -> 0 -> T`.
pub fn build_periodic_point<S: Scalar>(characteristic: u32) -> ExtriInstance<S> {
    let cat = semisimple_category::<S>(&["T"]);
    let one = || vec![vec![vec![vec![Matrix::identity(1)]]]];
    let e = Bimodule::new(&cat, vec![vec![1]], one(), one()).expect("1x1 actions");
    let t = cat.indec(0);
    let z = Obj::zero(1);
    let conf = Conflation {
        name: "tri:T".into(),
        a: t.clone(),
        b: z.clone(),
        c: t.clone(),
        x: cat.zero_morphism(&t, &z),
        y: cat.zero_morphism(&z, &t),
        delta: vec![S::one()],
        dominant: true,
        codominant: true,
    };
    ExtriInstance {
        name: "pt".into(),
        characteristic,
        cat,
        e,
        conflations: vec![conf],
        dominant: vec![Some(0)],
        codominant: vec![Some(0)],
        resolutions: vec![],
    }
}

/// Instance spanned by a list of indecomposable complexes over `proj`.
pub fn build_from_complexes<S: Scalar>(
    name: &str,
    characteristic: u32,
    proj: FinAddCategory<S>,
    data: &[ComplexData<S>],
) -> Result<(ExtriInstance<S>, ComplexCategory<S>, Vec<complexes::Decomposition<S>>), InstanceError> {
    let cc = ComplexCategory::build(proj, data)?;
    let (confs, decs, dom, codom) = cc.conflations()?;
    let mut inst = ExtriInstance {
        name: name.to_string(),
        characteristic,
        cat: cc.cat.clone(),
        e: cc.e.clone(),
        conflations: confs,
        dominant: dom.into_iter().map(Some).collect(),
        codominant: codom.into_iter().map(Some).collect(),
        resolutions: vec![],
    };
    inst.refresh_flags()?;
    inst.derive_resolutions();
    Ok((inst, cc, decs))
}

/// Two-term complexes `P_i -> P_j` in degrees `-1, 0` over the path category
/// `1 <- … <- n`, with all stalks in degrees `0` and `-1`.
pub fn two_term_path_complexes<S: Scalar>(p: &FinAddCategory<S>) -> Vec<ComplexData<S>> {
    let n = p.n();
    let mut out = Vec::new();
    for i in 0..n {
        out.push(complexes::stalk(p, &format!("P{}", i + 1), i, 0));
    }
    for i in 0..n {
        out.push(complexes::stalk(p, &format!("P{}[1]", i + 1), i, -1));
    }
    for i in 0..n {
        for j in i + 1..n {
            out.push(complexes::two_term(p, &format!("P{}->P{}", i + 1, j + 1), i, j, vec![S::one()], -1));
        }
    }
    out
}

pub fn a4sub_complexes<S: Scalar>(p: &FinAddCategory<S>) -> Vec<ComplexData<S>> {
    vec![
        complexes::two_term(p, "3[-1]", 1, 2, vec![S::one()], 0),
        complexes::two_term(p, "2", 0, 1, vec![S::one()], -1),
        complexes::two_term(p, "[4;3;2]", 0, 3, vec![S::one()], -1),
        complexes::two_term(p, "[4;3]", 1, 3, vec![S::one()], -1),
    ]
}

pub fn extclosed_complexes<S: Scalar>(p: &FinAddCategory<S>) -> Vec<ComplexData<S>> {
    vec![
        complexes::stalk(p, "1[1]", 0, -1),
        complexes::two_term(p, "[3;2][-1]", 0, 2, vec![S::one()], 0),
    ]
}

pub const A4SUB_BUNDLE: &str = include_str!("../../fixtures/a4sub.json");
pub const A4SUB_PROVENANCE: &str = include_str!("../../fixtures/a4sub.provenance.json");

/// Builds the a4sub instance from its complexes instead of the shipped bundle.
#[allow(clippy::type_complexity)]
pub fn build_a4sub<S: Scalar>(
    characteristic: u32,
) -> Result<(ExtriInstance<S>, ComplexCategory<S>, Vec<complexes::Decomposition<S>>), InstanceError> {
    let p = complexes::linear_proj_category::<S>(4);
    let data = a4sub_complexes(&p);
    build_from_complexes("a4sub", characteristic, p, &data)
}

pub fn fixture<S: Scalar>(name: &str, characteristic: u32) -> Result<ExtriInstance<S>, InstanceError> {
    match name {
        "split1" => Ok(build_split(name, characteristic, semisimple_category(&["X"]))),
        "split2" => Ok(build_split(name, characteristic, semisimple_category(&["X", "Y"]))),
        "pt" => Ok(build_periodic_point(characteristic)),
        "twoterm_k" | "twoterm_a2" | "twoterm_a3" => {
            let n = match name {
                "twoterm_k" => 1,
                "twoterm_a2" => 2,
                _ => 3,
            };
            let p = complexes::linear_proj_category::<S>(n);
            let data = two_term_path_complexes(&p);
            Ok(build_from_complexes(name, characteristic, p, &data)?.0)
        }
        "a4sub" => parse_instance(A4SUB_BUNDLE, Some(characteristic)),
        "extclosed_m" => {
            let p = complexes::linear_proj_category::<S>(3);
            let data = extclosed_complexes(&p);
            Ok(build_from_complexes(name, characteristic, p, &data)?.0)
        }
        _ => Err(InstanceError::UnknownFixture(name.to_string())),
    }
}
