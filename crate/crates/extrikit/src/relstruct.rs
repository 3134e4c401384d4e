//! Connected sequences on realized extensions, the cohomology of their
//! complexes `Γ(δ)`, and the sub-bifunctor generated by the table
//! extensions on which `Γ(δ)` is acyclic.

use crate::fincat::{FinAddCategory, Morphism, Obj};
use crate::funcat::{Bimodule, Variance};
use crate::instances::ExtriInstance;
use crate::linalg::{Matrix, Subspace};
use crate::posext::{Conflation, ExtError, ExtTower};
use crate::scalar::Scalar;

/// A family `F^n`, `n ∈ Z`, with connecting maps, evaluated pointwise at an
/// indecomposable `m` in the variable that is held fixed.
///
/// Covariant: `F^n(m,A) -> F^n(m,B) -> F^n(m,C) -> F^{n+1}(m,A)`.
/// Contravariant: `F^n(C,m) -> F^n(B,m) -> F^n(A,m) -> F^{n+1}(C,m)`.
pub trait ConnectedSequence<S: Scalar> {
    fn variance(&self) -> Variance;
    fn dim(&self, cat: &FinAddCategory<S>, n: i64, m: usize, x: &Obj) -> Result<usize, ExtError>;
    fn induced(&self, cat: &FinAddCategory<S>, n: i64, m: usize, f: &Morphism<S>) -> Result<Matrix<S>, ExtError>;
    fn connecting(&self, cat: &FinAddCategory<S>, n: i64, m: usize, conf: &Conflation<S>) -> Result<Matrix<S>, ExtError>;
}

/// `E^n` for `n ≥ 0` and zero below, covariant.
pub struct Truncated<'a, S> {
    pub tower: &'a ExtTower<S>,
}

impl<S: Scalar> ConnectedSequence<S> for Truncated<'_, S> {
    fn variance(&self) -> Variance {
        Variance::Co
    }

    fn dim(&self, cat: &FinAddCategory<S>, n: i64, m: usize, x: &Obj) -> Result<usize, ExtError> {
        if n < 0 {
            return Ok(0);
        }
        Ok(self.tower.level(n as usize)?.dim_obj(&cat.indec(m), x))
    }

    fn induced(&self, cat: &FinAddCategory<S>, n: i64, m: usize, f: &Morphism<S>) -> Result<Matrix<S>, ExtError> {
        if n < 0 {
            return Ok(Matrix::zeros(0, 0));
        }
        Ok(self.tower.level(n as usize)?.left_matrix(cat, f, &cat.indec(m)))
    }

    fn connecting(&self, cat: &FinAddCategory<S>, n: i64, m: usize, conf: &Conflation<S>) -> Result<Matrix<S>, ExtError> {
        if n < 0 {
            let rows = self.dim(cat, n + 1, m, &conf.a)?;
            return Ok(Matrix::zeros(rows, 0));
        }
        self.tower.delta_lower(n as usize, &conf.c, &conf.a, &conf.delta, m)
    }
}

/// One map of `Γ(δ)`, starting at cohomological degree `degree`.
#[derive(Debug, Clone)]
pub struct GammaMap<S> {
    pub degree: i64,
    pub label: String,
    pub map: Matrix<S>,
}

/// The maps of `Γ(δ)` at `m` for levels `lo..=hi`; level `n` occupies
/// degrees `3n-2, 3n-1, 3n`.
pub fn sequence_chain<S: Scalar>(
    seq: &dyn ConnectedSequence<S>,
    cat: &FinAddCategory<S>,
    conf: &Conflation<S>,
    m: usize,
    lo: i64,
    hi: i64,
) -> Result<Vec<GammaMap<S>>, ExtError> {
    let (first, second) = match seq.variance() {
        Variance::Co => (&conf.x, &conf.y),
        Variance::Contra => (&conf.y, &conf.x),
    };
    let mut out = Vec::new();
    for n in lo..=hi {
        out.push(GammaMap {
            degree: 3 * n - 2,
            label: format!("{}[{n}]", if seq.variance() == Variance::Co { "x_*" } else { "y^*" }),
            map: seq.induced(cat, n, m, first)?,
        });
        out.push(GammaMap {
            degree: 3 * n - 1,
            label: format!("{}[{n}]", if seq.variance() == Variance::Co { "y_*" } else { "x^*" }),
            map: seq.induced(cat, n, m, second)?,
        });
        if n < hi {
            out.push(GammaMap {
                degree: 3 * n,
                label: format!("δ[{n}]"),
                map: seq.connecting(cat, n, m, conf)?,
            });
        }
    }
    Ok(out)
}

/// Pointwise cohomology of `Γ(δ)`: `h[k][m]` at degree `degrees[k]`.
/// Only interior degrees of the window are reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaCohomology {
    pub conflation: String,
    pub degrees: Vec<i64>,
    pub h: Vec<Vec<usize>>,
}

impl GammaCohomology {
    pub fn acyclic(&self) -> bool {
        self.h.iter().flatten().all(|&d| d == 0)
    }

    /// `(degree, m, dim)` for every nonzero entry.
    pub fn nonzero(&self) -> Vec<(i64, usize, usize)> {
        let mut out = Vec::new();
        for (k, row) in self.h.iter().enumerate() {
            for (m, &d) in row.iter().enumerate() {
                if d != 0 {
                    out.push((self.degrees[k], m, d));
                }
            }
        }
        out
    }
}

pub fn gamma_cohomology<S: Scalar>(
    seq: &dyn ConnectedSequence<S>,
    cat: &FinAddCategory<S>,
    conf: &Conflation<S>,
    lo: i64,
    hi: i64,
) -> Result<GammaCohomology, ExtError> {
    let mut degrees = Vec::new();
    let mut h: Vec<Vec<usize>> = Vec::new();
    for m in 0..cat.n() {
        let chain = sequence_chain(seq, cat, conf, m, lo, hi)?;
        for (k, w) in chain.windows(2).enumerate() {
            let (f, g) = (&w[0].map, &w[1].map);
            if !g.mul(f).is_zero() {
                return Err(ExtError::NotWellDefined(format!(
                    "{}: composite {} then {} is nonzero at {}",
                    conf.name,
                    w[0].label,
                    w[1].label,
                    cat.name(m)
                )));
            }
            let d = g.cols() - g.rank() - f.rank();
            if m == 0 {
                degrees.push(w[1].degree);
                h.push(Vec::new());
            }
            h[k].push(d);
        }
    }
    Ok(GammaCohomology {
        conflation: conf.name.clone(),
        degrees,
        h,
    })
}

/// Sub-bifunctor of `E` generated by the table extensions with acyclic
/// `Γ(δ)`. Only table conflations are inspected, so this is a lower
/// approximation of the largest relative structure for the sequence.
#[derive(Debug, Clone)]
pub struct WitnessSubfunctor<S> {
    /// `sub[i][j] ⊆ E(i,j)`.
    pub sub: Vec<Vec<Subspace<S>>>,
    pub acyclic: Vec<String>,
    pub rejected: Vec<String>,
    /// Rejected extensions that nevertheless lie in `sub`.
    pub rejected_inside: Vec<String>,
    pub caveats: Vec<String>,
}

impl<S: Scalar> WitnessSubfunctor<S> {
    pub fn dims(&self) -> Vec<Vec<usize>> {
        self.sub.iter().map(|r| r.iter().map(|s| s.dim()).collect()).collect()
    }

    pub fn contains(&self, e: &Bimodule<S>, conf: &Conflation<S>) -> bool {
        blocks(e, conf).iter().all(|(t, s, v)| self.sub[*t][*s].contains(v))
    }
}

fn blocks<S: Scalar>(e: &Bimodule<S>, conf: &Conflation<S>) -> Vec<(usize, usize, Vec<S>)> {
    let l = e.layout(&conf.c, &conf.a);
    let mut out = Vec::new();
    for (t, &ct) in l.src.iter().enumerate() {
        for (s, &as_) in l.tgt.iter().enumerate() {
            out.push((ct, as_, conf.delta[l.range(t, s)].to_vec()));
        }
    }
    out
}

/// Closes indecomposable-pair subspaces under every basis action of `e`.
pub fn close_under_actions<S: Scalar>(cat: &FinAddCategory<S>, e: &Bimodule<S>, mut sub: Vec<Vec<Subspace<S>>>) -> Vec<Vec<Subspace<S>>> {
    let nn = cat.n();
    loop {
        let mut changed = false;
        for i in 0..nn {
            for j in 0..nn {
                if sub[i][j].dim() == 0 {
                    continue;
                }
                for j2 in 0..nn {
                    for b in 0..cat.hom_dim(j, j2) {
                        let img = sub[i][j].image_under(e.left_basis(j, j2, b, i));
                        if !sub[i][j2].contains_subspace(&img) {
                            sub[i][j2] = sub[i][j2].sum(&img);
                            changed = true;
                        }
                    }
                }
                for i2 in 0..nn {
                    for b in 0..cat.hom_dim(i2, i) {
                        let img = sub[i][j].image_under(e.right_basis(i2, i, b, j));
                        if !sub[i2][j].contains_subspace(&img) {
                            sub[i2][j] = sub[i2][j].sum(&img);
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            return sub;
        }
    }
}

/// `true` when `sub` is stable under all basis actions of `e`.
pub fn is_sub_bifunctor<S: Scalar>(cat: &FinAddCategory<S>, e: &Bimodule<S>, sub: &[Vec<Subspace<S>>]) -> bool {
    let nn = cat.n();
    (0..nn).all(|i| {
        (0..nn).all(|j| {
            (0..nn).all(|k| {
                (0..cat.hom_dim(j, k)).all(|b| sub[i][k].contains_subspace(&sub[i][j].image_under(e.left_basis(j, k, b, i))))
                    && (0..cat.hom_dim(k, i)).all(|b| sub[k][j].contains_subspace(&sub[i][j].image_under(e.right_basis(k, i, b, j))))
            })
        })
    })
}

pub fn acyclic_witness_subfunctor<S: Scalar>(
    inst: &ExtriInstance<S>,
    seq: &dyn ConnectedSequence<S>,
    lo: i64,
    hi: i64,
) -> Result<WitnessSubfunctor<S>, ExtError> {
    let cat = &inst.cat;
    let e = &inst.e;
    let nn = cat.n();
    let mut sub: Vec<Vec<Subspace<S>>> = (0..nn).map(|i| (0..nn).map(|j| Subspace::zero(e.dim(i, j))).collect()).collect();
    let mut acyclic = Vec::new();
    let mut rejected = Vec::new();
    for conf in &inst.conflations {
        if gamma_cohomology(seq, cat, conf, lo, hi)?.acyclic() {
            acyclic.push(conf.name.clone());
            for (t, s, v) in blocks(e, conf) {
                sub[t][s] = sub[t][s].sum(&Subspace::from_vectors(v.len(), &[v]));
            }
        } else {
            rejected.push(conf.name.clone());
        }
    }
    let sub = close_under_actions(cat, e, sub);
    if !is_sub_bifunctor(cat, e, &sub) {
        return Err(ExtError::NotWellDefined("closure is not a sub-bifunctor".into()));
    }
    let out = WitnessSubfunctor {
        sub,
        acyclic,
        rejected: Vec::new(),
        rejected_inside: Vec::new(),
        caveats: vec!["witness-bounded: a lower approximation generated by table conflations only".into()],
    };
    let rejected_inside = inst
        .conflations
        .iter()
        .filter(|c| rejected.contains(&c.name) && out.contains(e, c))
        .map(|c| c.name.clone())
        .collect();
    Ok(WitnessSubfunctor {
        rejected,
        rejected_inside,
        ..out
    })
}
