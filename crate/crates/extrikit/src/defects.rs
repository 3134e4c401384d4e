//! Contravariant defects `Θ_δ = Im(δ_♯ : C(-,C) -> E(-,A))` and their
//! reflections.

use crate::fincat::{FinAddCategory, Morphism, Obj};
use crate::funcat::{module_cokernel, nat_space, projective_ideal, Bimodule, CModule, ModuleMorphism, NatSpace};
use crate::instances::ExtriInstance;
use crate::linalg::{Matrix, Subspace};
use crate::posext::{direct_sum_conflation, morphism_of_conflations, Conflation, ExtError};
use crate::scalar::Scalar;

/// `Θ_δ` stored pointwise, with `℘_δ : C(-,C) ↠ Θ_δ` and `i_δ : Θ_δ ↪ E(-,A)`.
#[derive(Debug, Clone)]
pub struct Defect<S> {
    pub c: Obj,
    pub a: Obj,
    pub delta: Vec<S>,
    pub module: CModule<S>,
    pub epi: ModuleMorphism<S>,
    pub mono: ModuleMorphism<S>,
}

impl<S: Scalar> Defect<S> {
    pub fn dims(&self) -> &[usize] {
        &self.module.dims
    }

    pub fn is_zero(&self) -> bool {
        self.module.is_zero()
    }
}

/// `δ_♯ : C(m,C) -> E(m,A)`, `f ↦ f^*δ`.
pub fn delta_sharp_at<S: Scalar>(cat: &FinAddCategory<S>, e: &Bimodule<S>, c: &Obj, a: &Obj, delta: &[S], m: usize) -> Matrix<S> {
    let mo = cat.indec(m);
    let d = cat.hom_layout(&mo, c).total;
    let cols: Vec<Vec<S>> = (0..d)
        .map(|k| e.right_matrix(cat, &cat.unit_vector(&mo, c, k), a).apply(delta))
        .collect();
    Matrix::from_columns(e.dim_obj(&mo, a), &cols)
}

pub fn defect_module<S: Scalar>(cat: &FinAddCategory<S>, e: &Bimodule<S>, c: &Obj, a: &Obj, delta: &[S]) -> Result<Defect<S>, ExtError> {
    let sharps: Vec<Matrix<S>> = (0..cat.n()).map(|m| delta_sharp_at(cat, e, c, a, delta, m)).collect();
    let images: Vec<Subspace<S>> = sharps.iter().map(|s| Subspace::span(s.rows(), s)).collect();
    let mono = e.contra_slice(a).submodule(&images)?;
    let comps = sharps
        .iter()
        .zip(&images)
        .map(|(s, im)| im.coords_matrix(s).expect("image contains its generators"))
        .collect();
    let epi = ModuleMorphism {
        src: Bimodule::hom(cat).contra_slice(c),
        tgt: mono.src.clone(),
        comps,
    };
    epi.check_natural(cat)?;
    Ok(Defect {
        c: c.clone(),
        a: a.clone(),
        delta: delta.to_vec(),
        module: mono.src.clone(),
        epi,
        mono,
    })
}

pub fn conflation_defect<S: Scalar>(cat: &FinAddCategory<S>, e: &Bimodule<S>, conf: &Conflation<S>) -> Result<Defect<S>, ExtError> {
    defect_module(cat, e, &conf.c, &conf.a, &conf.delta)
}

/// `η_{(a,c)} : Θ_δ -> Θ_ρ` for a morphism of extensions `(a,c) : δ -> ρ`,
/// i.e. `a_*δ = c^*ρ`.
pub fn eta<S: Scalar>(
    cat: &FinAddCategory<S>,
    e: &Bimodule<S>,
    src: &Defect<S>,
    tgt: &Defect<S>,
    a: &Morphism<S>,
    c: &Morphism<S>,
) -> Result<ModuleMorphism<S>, ExtError> {
    let pushed = e.left_matrix(cat, a, &src.c).apply(&src.delta);
    let pulled = e.right_matrix(cat, c, &tgt.a).apply(&tgt.delta);
    if pushed != pulled {
        return Err(ExtError::NotWellDefined("(a,c) is not a morphism of extensions".into()));
    }
    let comps = (0..cat.n())
        .map(|m| {
            let moved = e.left_matrix(cat, a, &cat.indec(m)).mul(&src.mono.comps[m]);
            tgt.mono.tgt_coords(m, &moved)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let out = ModuleMorphism {
        src: src.module.clone(),
        tgt: tgt.module.clone(),
        comps,
    };
    out.check_natural(cat)?;
    Ok(out)
}

trait InclusionCoords<S> {
    fn tgt_coords(&self, m: usize, v: &Matrix<S>) -> Result<Matrix<S>, ExtError>;
}

impl<S: Scalar> InclusionCoords<S> for ModuleMorphism<S> {
    fn tgt_coords(&self, m: usize, v: &Matrix<S>) -> Result<Matrix<S>, ExtError> {
        let sub = Subspace::span(self.comps[m].rows(), &self.comps[m]);
        sub.coords_matrix(v)
            .ok_or_else(|| ExtError::NotWellDefined("image leaves the defect".into()))
    }
}

/// `Ker ℘_θ(m) = P(m,C)` and the resulting dimension identity, per `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableYoneda {
    pub c: String,
    /// `(dim Θ_θ(m), dim C(m,C), dim P(m,C))`.
    pub dims: Vec<(usize, usize, usize)>,
    pub kernels_match: bool,
}

impl StableYoneda {
    pub fn holds(&self) -> bool {
        self.kernels_match && self.dims.iter().all(|&(t, h, p)| t + p == h)
    }
}

pub fn stable_yoneda_check<S: Scalar>(cat: &FinAddCategory<S>, e: &Bimodule<S>, theta: &Conflation<S>) -> Result<StableYoneda, ExtError> {
    let d = conflation_defect(cat, e, theta)?;
    let mut dims = Vec::new();
    let mut kernels_match = true;
    for m in 0..cat.n() {
        let p = projective_ideal(cat, e, &cat.indec(m), &theta.c);
        let k = d.epi.comps[m].kernel_basis();
        kernels_match &= k.same_as(&p);
        dims.push((d.module.dims[m], cat.hom_layout(&cat.indec(m), &theta.c).total, p.dim()));
    }
    Ok(StableYoneda {
        c: theta.name.clone(),
        dims,
        kernels_match,
    })
}

fn vectorize_all<S: Scalar>(nat: &NatSpace<S>, maps: &[Vec<Matrix<S>>]) -> Matrix<S> {
    let cols: Vec<Vec<S>> = maps.iter().map(|c| nat.vectorize(c)).collect();
    Matrix::from_columns(nat.space.ambient(), &cols)
}

/// Precomposition with `u : F => G` as a matrix `Nat(G,T) -> Nat(F,T)` in the
/// bases of the two solution spaces.
fn precompose<S: Scalar>(
    g_to_t: &NatSpace<S>,
    f_to_t: &NatSpace<S>,
    u: &ModuleMorphism<S>,
) -> Result<Matrix<S>, ExtError> {
    let composed: Vec<Vec<Matrix<S>>> = g_to_t
        .basis_components()
        .iter()
        .map(|phi| phi.iter().zip(&u.comps).map(|(p, uc)| p.mul(uc)).collect())
        .collect();
    f_to_t
        .space
        .coords_matrix(&vectorize_all(f_to_t, &composed))
        .ok_or_else(|| ExtError::NotWellDefined("composite is not natural".into()))
}

/// Existence and uniqueness of factorizations through a unit `u : F => R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReflectionCheck {
    /// `dim Nat(F, Θ)` for the sample.
    pub targets: usize,
    pub existence: bool,
    pub uniqueness: bool,
}

impl ReflectionCheck {
    pub fn holds(&self) -> bool {
        self.existence && self.uniqueness
    }
}

/// Checks that `-∘u : Nat(R, Θ) -> Nat(F, Θ)` is bijective, where `F` is the
/// source of `u` restricted to the subspace `allowed ⊆ Nat(F, Θ)` when given.
fn factorization_check<S: Scalar>(
    cat: &FinAddCategory<S>,
    u: &ModuleMorphism<S>,
    sample: &CModule<S>,
    allowed: Option<&dyn Fn(&NatSpace<S>) -> Result<Subspace<S>, ExtError>>,
) -> Result<ReflectionCheck, ExtError> {
    let r_t = nat_space(cat, &u.tgt, sample)?;
    let f_t = nat_space(cat, &u.src, sample)?;
    let pre = precompose(&r_t, &f_t, u)?;
    let target = match allowed {
        Some(f) => f(&f_t)?,
        None => Subspace::full(f_t.dim()),
    };
    let image = Subspace::span(f_t.dim(), &pre);
    Ok(ReflectionCheck {
        targets: target.dim(),
        existence: image.contains_subspace(&target) && target.contains_subspace(&image),
        uniqueness: pre.rank() == r_t.dim(),
    })
}

/// Every `φ : C(-,C) => Θ` factors uniquely as `η∘℘_θ`.
pub fn reflection_check<S: Scalar>(cat: &FinAddCategory<S>, theta: &Defect<S>, sample: &Defect<S>) -> Result<ReflectionCheck, ExtError> {
    factorization_check(cat, &theta.epi, &sample.module, None)
}

/// `F = Cok(C(-,c) : C(-,C') -> C(-,C))`.
#[derive(Debug, Clone)]
pub struct FpPresentation<S> {
    pub c: Morphism<S>,
}

impl<S: Scalar> FpPresentation<S> {
    pub fn representable(cat: &FinAddCategory<S>, x: &Obj) -> Self {
        FpPresentation {
            c: cat.zero_morphism(&Obj::zero(cat.n()), x),
        }
    }

    /// Pointwise values of `F` as quotients of `C(m,C)`.
    pub fn dims(&self, cat: &FinAddCategory<S>) -> Vec<usize> {
        (0..cat.n())
            .map(|m| {
                let mo = cat.indec(m);
                cat.hom_layout(&mo, &self.c.tgt).total - cat.post_matrix(&self.c, &mo).rank()
            })
            .collect()
    }
}

/// The reflection `Γ_F` of a finitely presented functor, with `γ_F` given by
/// its composite with `C(-,C) ↠ F`.
#[derive(Debug, Clone)]
pub struct Reflection<S> {
    pub eta: ModuleMorphism<S>,
    pub module: CModule<S>,
    /// `C(-,C) -> Γ_F`, vanishing on the image of `C(-,C')`.
    pub unit: ModuleMorphism<S>,
}

/// The dominant conflation for an arbitrary object, as the direct sum of
/// designated ones.
pub fn dominant_for<S: Scalar>(inst: &ExtriInstance<S>, x: &Obj) -> Result<Conflation<S>, ExtError> {
    let cat = &inst.cat;
    let parts: Vec<&Conflation<S>> = x
        .slots()
        .iter()
        .map(|&s| {
            inst.dominant[s]
                .map(|k| &inst.conflations[k])
                .ok_or_else(|| ExtError::MissingDominant(cat.name(s).to_string()))
        })
        .collect::<Result<_, _>>()?;
    if parts.is_empty() {
        let z = Obj::zero(cat.n());
        return Ok(Conflation::split(cat, &inst.e, "dom:0", &z, &z));
    }
    direct_sum_conflation(cat, &inst.e, "dom", &parts)
}

pub fn reflect_fp_functor<S: Scalar>(inst: &ExtriInstance<S>, pres: &FpPresentation<S>) -> Result<Reflection<S>, ExtError> {
    let cat = &inst.cat;
    let e = &inst.e;
    let theta_src = dominant_for(inst, &pres.c.src)?;
    let theta = dominant_for(inst, &pres.c.tgt)?;
    let (a, _) = morphism_of_conflations(cat, e, &theta_src, &theta, &pres.c)?;
    let d_src = conflation_defect(cat, e, &theta_src)?;
    let d = conflation_defect(cat, e, &theta)?;
    let eta = eta(cat, e, &d_src, &d, &a, &pres.c)?;
    let (proj, _) = module_cokernel(cat, &eta)?;
    let unit = d.epi.compose(&proj);
    for m in 0..cat.n() {
        let kill = unit.comps[m].mul(&cat.post_matrix(&pres.c, &cat.indec(m)));
        if !kill.is_zero() {
            return Err(ExtError::NotWellDefined("γ_F does not vanish on the relations".into()));
        }
    }
    Ok(Reflection {
        eta,
        module: proj.tgt.clone(),
        unit,
    })
}

/// Every `φ : F => Θ` factors uniquely through `γ_F`. Transformations out of
/// `F` are those out of `C(-,C)` killing `C(-,C')`.
pub fn reflection_check_fp<S: Scalar>(
    cat: &FinAddCategory<S>,
    pres: &FpPresentation<S>,
    refl: &Reflection<S>,
    sample: &CModule<S>,
) -> Result<ReflectionCheck, ExtError> {
    let hom = Bimodule::hom(cat);
    let rel = ModuleMorphism {
        src: hom.contra_slice(&pres.c.src),
        tgt: hom.contra_slice(&pres.c.tgt),
        comps: (0..cat.n()).map(|m| cat.post_matrix(&pres.c, &cat.indec(m))).collect(),
    };
    let rel_t = nat_space(cat, &rel.src, sample)?;
    let allowed = |f_t: &NatSpace<S>| -> Result<Subspace<S>, ExtError> { Ok(precompose(f_t, &rel_t, &rel)?.kernel_basis()) };
    factorization_check(cat, &refl.unit, sample, Some(&allowed))
}

/// `η : Θ_θ ↠ Θ_δ` over `id_C`, from the dominant `θ` for `C`.
pub fn projective_cover<S: Scalar>(inst: &ExtriInstance<S>, conf: &Conflation<S>) -> Result<(Defect<S>, ModuleMorphism<S>), ExtError> {
    let cat = &inst.cat;
    let e = &inst.e;
    let theta = dominant_for(inst, &conf.c)?;
    let id = cat.identity(&conf.c);
    let (a, _) = morphism_of_conflations(cat, e, &theta, conf, &id)?;
    let dt = conflation_defect(cat, e, &theta)?;
    let dd = conflation_defect(cat, e, conf)?;
    let eta = eta(cat, e, &dt, &dd, &a, &id)?;
    Ok((dt, eta))
}

pub fn is_pointwise_epi<S: Scalar>(u: &ModuleMorphism<S>) -> bool {
    u.comps.iter().zip(&u.tgt.dims).all(|(m, &d)| m.rank() == d)
}

/// `Nat(Θ_θ, P) -> Nat(Θ_θ, Q)` is onto for a sampled epi `P ↠ Q` of defects.
pub fn lifting_check<S: Scalar>(cat: &FinAddCategory<S>, theta: &Defect<S>, epi: &ModuleMorphism<S>) -> Result<bool, ExtError> {
    let to_p = nat_space(cat, &theta.module, &epi.src)?;
    let to_q = nat_space(cat, &theta.module, &epi.tgt)?;
    let composed: Vec<Vec<Matrix<S>>> = to_p
        .basis_components()
        .iter()
        .map(|phi| phi.iter().zip(&epi.comps).map(|(p, u)| u.mul(p)).collect())
        .collect();
    let m = to_q
        .space
        .coords_matrix(&vectorize_all(&to_q, &composed))
        .ok_or_else(|| ExtError::NotWellDefined("composite is not natural".into()))?;
    Ok(m.rank() == to_q.dim())
}
