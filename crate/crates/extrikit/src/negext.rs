//! Negative extensions as duals of the positive tower:
//! `E_I^{-n}(X,A) = Nat(E^n(A,-), C(X,-))` and
//! `E_II^{-n}(X,Y) = Nat(E^n(-,X), C(-,Y))`.

use crate::fincat::{FinAddCategory, Obj};
use crate::funcat::{injective_ideal, nat_space, projective_ideal, stable_hom, Bimodule, Ideal, NatSpace, Variance};
use crate::instances::{ExtriInstance, ResolutionChain};
use crate::linalg::{preimage_of_subspace, Matrix, Subspace};
use crate::posext::{morphism_of_conflations, Conflation, ExactnessReport, ExtError, ExtTower};
use crate::relstruct::{sequence_chain, ConnectedSequence};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NegKind {
    /// Covariant in the second variable, dual in the first slot of `E^n`.
    I,
    /// Contravariant in the first variable, dual in the second slot of `E^n`.
    II,
}

/// Levels `0..=nmax` of `E_I^{-n}` or `E_II^{-n}` as bimodules, with the
/// natural-transformation spaces that carry their elements.
#[derive(Debug, Clone)]
pub struct NegTower<S> {
    kind: NegKind,
    levels: Vec<Bimodule<S>>,
    /// `nats[n][x][y]` carries the value at `(x, y)`; empty at `n = 0`.
    nats: Vec<Vec<Vec<NatSpace<S>>>>,
}

fn coords<S: Scalar>(nat: &NatSpace<S>, comps: &[Matrix<S>], what: &str) -> Result<Vec<S>, ExtError> {
    nat.space
        .coords(&nat.vectorize(comps))
        .ok_or_else(|| ExtError::NotWellDefined(format!("{what} is not natural")))
}

impl<S: Scalar> NegTower<S> {
    pub fn build(cat: &FinAddCategory<S>, tower: &ExtTower<S>, kind: NegKind, nmax: usize) -> Result<Self, ExtError> {
        if nmax > tower.nmax() {
            return Err(ExtError::TooShallow(nmax, tower.nmax() + 1));
        }
        let nn = cat.n();
        let hom = tower.level(0)?.clone();
        let mut levels = vec![hom.clone()];
        let mut nats = vec![Vec::new()];
        for n in 1..=nmax {
            let en = tower.level(n)?;
            let mut sp = Vec::with_capacity(nn);
            for x in 0..nn {
                let mut row = Vec::with_capacity(nn);
                for y in 0..nn {
                    let (xo, yo) = (cat.indec(x), cat.indec(y));
                    let nat = match kind {
                        NegKind::I => nat_space(cat, &en.co_slice(&yo), &hom.co_slice(&xo))?,
                        NegKind::II => nat_space(cat, &en.contra_slice(&xo), &hom.contra_slice(&yo))?,
                    };
                    row.push(nat);
                }
                sp.push(row);
            }
            let dims: Vec<Vec<usize>> = sp.iter().map(|r| r.iter().map(|s| s.dim()).collect()).collect();
            let mut left = vec![vec![Vec::new(); nn]; nn];
            let mut right = vec![vec![Vec::new(); nn]; nn];
            for a in 0..nn {
                for b in 0..nn {
                    for k in 0..cat.hom_dim(a, b) {
                        let mut lf = Vec::with_capacity(nn);
                        let mut rf = Vec::with_capacity(nn);
                        for z in 0..nn {
                            // left: a -> b on the second variable, at first variable z
                            let cols: Vec<Vec<S>> = sp[z][a]
                                .basis_components()
                                .iter()
                                .map(|phi| {
                                    let comps: Vec<Matrix<S>> = (0..nn)
                                        .map(|w| match kind {
                                            NegKind::I => phi[w].mul(en.right_basis(a, b, k, w)),
                                            NegKind::II => hom.left_basis(a, b, k, w).mul(&phi[w]),
                                        })
                                        .collect();
                                    coords(&sp[z][b], &comps, "left action")
                                })
                                .collect::<Result<_, _>>()?;
                            lf.push(Matrix::from_columns(dims[z][b], &cols));
                            // right: a -> b on the first variable, at second variable z
                            let cols: Vec<Vec<S>> = sp[b][z]
                                .basis_components()
                                .iter()
                                .map(|phi| {
                                    let comps: Vec<Matrix<S>> = (0..nn)
                                        .map(|w| match kind {
                                            NegKind::I => hom.right_basis(a, b, k, w).mul(&phi[w]),
                                            NegKind::II => phi[w].mul(en.left_basis(a, b, k, w)),
                                        })
                                        .collect();
                                    coords(&sp[a][z], &comps, "right action")
                                })
                                .collect::<Result<_, _>>()?;
                            rf.push(Matrix::from_columns(dims[a][z], &cols));
                        }
                        left[a][b].push(lf);
                        right[a][b].push(rf);
                    }
                }
            }
            levels.push(Bimodule::new(cat, dims, left, right)?);
            nats.push(sp);
        }
        Ok(NegTower { kind, levels, nats })
    }

    pub fn kind(&self) -> NegKind {
        self.kind
    }

    pub fn nmax(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> Result<&Bimodule<S>, ExtError> {
        self.levels.get(n).ok_or(ExtError::TooShallow(n, self.levels.len()))
    }

    pub fn nat(&self, n: usize, x: usize, y: usize) -> &NatSpace<S> {
        &self.nats[n][x][y]
    }

    /// Negative connecting map at an indecomposable `m`, for `δ ∈ E(C,A)`.
    ///
    /// `I`: `E_I^{-(n+1)}(m,C) -> E_I^{-n}(m,A)`, `φ ↦ φ∘δ^♯`.
    /// `II`: `E_II^{-(n+1)}(A,m) -> E_II^{-n}(C,m)`, `ψ ↦ ψ∘δ_♯`.
    /// At `n = 0` the result is read in `Hom` by evaluation at identities.
    pub fn connecting(
        &self,
        cat: &FinAddCategory<S>,
        tower: &ExtTower<S>,
        n: usize,
        c: &Obj,
        a: &Obj,
        delta: &[S],
        m: usize,
    ) -> Result<Matrix<S>, ExtError> {
        if n + 1 > self.nmax() {
            return Err(ExtError::TooShallow(n + 1, self.levels.len()));
        }
        let nn = cat.n();
        let mo = cat.indec(m);
        let up = &self.levels[n + 1];
        let down = &self.levels[n];
        let en = tower.level(n)?;
        let en1 = tower.level(n + 1)?;
        match self.kind {
            NegKind::I => {
                let sharp: Vec<Matrix<S>> = (0..nn)
                    .map(|w| tower.delta_upper(n, c, a, delta, w))
                    .collect::<Result<_, _>>()?;
                let src = up.layout(&mo, c);
                let tgt = down.layout(&mo, a);
                let mut cols = Vec::with_capacity(src.total);
                for (t, &ct) in src.tgt.iter().enumerate() {
                    for phi in self.nats[n + 1][m][ct].basis_components() {
                        let mut out = vec![S::zero(); tgt.total];
                        let psi: Vec<Matrix<S>> = (0..nn)
                            .map(|w| {
                                let rows = en1.layout(c, &cat.indec(w));
                                let blk = sharp[w].block(rows.offsets[t][0], 0, rows.sizes[t][0], sharp[w].cols());
                                phi[w].mul(&blk)
                            })
                            .collect();
                        for (s, &as_) in tgt.tgt.iter().enumerate() {
                            let part: Vec<Matrix<S>> = (0..nn)
                                .map(|w| {
                                    let cl = en.layout(a, &cat.indec(w));
                                    psi[w].block(0, cl.offsets[s][0], psi[w].rows(), cl.sizes[s][0])
                                })
                                .collect();
                            let v = if n == 0 {
                                part[as_].apply(cat.id_coeffs(as_))
                            } else {
                                coords(&self.nats[n][m][as_], &part, "φ∘δ^♯")?
                            };
                            let off = tgt.offsets[0][s];
                            out[off..off + v.len()].clone_from_slice(&v);
                        }
                        cols.push(out);
                    }
                }
                Ok(Matrix::from_columns(tgt.total, &cols))
            }
            NegKind::II => {
                let sharp: Vec<Matrix<S>> = (0..nn)
                    .map(|w| tower.delta_lower(n, c, a, delta, w))
                    .collect::<Result<_, _>>()?;
                let src = up.layout(a, &mo);
                let tgt = down.layout(c, &mo);
                let mut cols = Vec::with_capacity(src.total);
                for (s, &as_) in src.src.iter().enumerate() {
                    for psi in self.nats[n + 1][as_][m].basis_components() {
                        let mut out = vec![S::zero(); tgt.total];
                        let chi: Vec<Matrix<S>> = (0..nn)
                            .map(|w| {
                                let rows = en1.layout(&cat.indec(w), a);
                                let blk = sharp[w].block(rows.offsets[0][s], 0, rows.sizes[0][s], sharp[w].cols());
                                psi[w].mul(&blk)
                            })
                            .collect();
                        for (t, &ct) in tgt.src.iter().enumerate() {
                            let part: Vec<Matrix<S>> = (0..nn)
                                .map(|w| {
                                    let cl = en.layout(&cat.indec(w), c);
                                    chi[w].block(0, cl.offsets[0][t], chi[w].rows(), cl.sizes[0][t])
                                })
                                .collect();
                            let v = if n == 0 {
                                part[ct].apply(cat.id_coeffs(ct))
                            } else {
                                coords(&self.nats[n][ct][m], &part, "ψ∘δ_♯")?
                            };
                            let off = tgt.offsets[t][0];
                            out[off..off + v.len()].clone_from_slice(&v);
                        }
                        cols.push(out);
                    }
                }
                Ok(Matrix::from_columns(tgt.total, &cols))
            }
        }
    }
}

/// Positive tower together with both negative towers.
#[derive(Debug, Clone)]
pub struct Towers<S> {
    pub pos: ExtTower<S>,
    pub neg_i: NegTower<S>,
    pub neg_ii: NegTower<S>,
}

impl<S: Scalar> Towers<S> {
    pub fn build(inst: &ExtriInstance<S>, pos_max: usize, neg_max: usize) -> Result<Self, ExtError> {
        let pos = inst.tower(pos_max.max(neg_max))?;
        let neg_i = NegTower::build(&inst.cat, &pos, NegKind::I, neg_max)?;
        let neg_ii = NegTower::build(&inst.cat, &pos, NegKind::II, neg_max)?;
        Ok(Towers { pos, neg_i, neg_ii })
    }

    pub fn neg(&self, kind: NegKind) -> &NegTower<S> {
        match kind {
            NegKind::I => &self.neg_i,
            NegKind::II => &self.neg_ii,
        }
    }
}

/// The doubly infinite sequence `… E_I^{-1} → Hom → E → E^2 …` (or its
/// contravariant `E_II` counterpart) attached to conflations.
pub struct NegSequence<'a, S> {
    pub towers: &'a Towers<S>,
    pub kind: NegKind,
}

impl<S: Scalar> NegSequence<'_, S> {
    fn value(&self, n: i64) -> Result<&Bimodule<S>, ExtError> {
        if n >= 0 {
            self.towers.pos.level(n as usize)
        } else {
            self.towers.neg(self.kind).level((-n) as usize)
        }
    }
}

impl<S: Scalar> ConnectedSequence<S> for NegSequence<'_, S> {
    fn variance(&self) -> Variance {
        match self.kind {
            NegKind::I => Variance::Co,
            NegKind::II => Variance::Contra,
        }
    }

    fn dim(&self, cat: &FinAddCategory<S>, n: i64, m: usize, x: &Obj) -> Result<usize, ExtError> {
        let b = self.value(n)?;
        Ok(match self.kind {
            NegKind::I => b.dim_obj(&cat.indec(m), x),
            NegKind::II => b.dim_obj(x, &cat.indec(m)),
        })
    }

    fn induced(&self, cat: &FinAddCategory<S>, n: i64, m: usize, f: &crate::fincat::Morphism<S>) -> Result<Matrix<S>, ExtError> {
        let b = self.value(n)?;
        Ok(match self.kind {
            NegKind::I => b.left_matrix(cat, f, &cat.indec(m)),
            NegKind::II => b.right_matrix(cat, f, &cat.indec(m)),
        })
    }

    fn connecting(&self, cat: &FinAddCategory<S>, n: i64, m: usize, conf: &Conflation<S>) -> Result<Matrix<S>, ExtError> {
        let t = self.towers;
        if n >= 0 {
            let n = n as usize;
            return match self.kind {
                NegKind::I => t.pos.delta_lower(n, &conf.c, &conf.a, &conf.delta, m),
                NegKind::II => t.pos.delta_upper(n, &conf.c, &conf.a, &conf.delta, m),
            };
        }
        let k = (-n - 1) as usize;
        self.towers
            .neg(self.kind)
            .connecting(cat, &t.pos, k, &conf.c, &conf.a, &conf.delta, m)
    }
}

/// Exactness of the `E_I` (covariant) or `E_II` (contravariant) sequence of
/// a conflation over levels `lo..=hi`, pointwise at every indecomposable.
pub fn acyclicity_check<S: Scalar>(
    cat: &FinAddCategory<S>,
    towers: &Towers<S>,
    kind: NegKind,
    conf: &Conflation<S>,
    lo: i64,
    hi: i64,
) -> Result<ExactnessReport, ExtError> {
    let seq = NegSequence { towers, kind };
    let mut rep = ExactnessReport::default();
    for m in 0..cat.n() {
        let chain = sequence_chain(&seq, cat, conf, m, lo, hi)?;
        let maps: Vec<(String, Matrix<S>)> = chain.into_iter().map(|p| (p.label, p.map)).collect();
        rep.check_chain(&maps, &format!("{} {:?} at {}", conf.name, kind, cat.name(m)));
    }
    Ok(rep)
}

/// `E_I^{-n}(-,C)` by iterated kernels along designated dominant conflations
/// `F_c -> G_c -> c`: `K^n(x,c) = Ker(K^{n-1}(x,F_c) -> K^{n-1}(x,G_c))`.
pub fn kernel_iteration<S: Scalar>(
    cat: &FinAddCategory<S>,
    e: &Bimodule<S>,
    dominant: &[&Conflation<S>],
    nmax: usize,
) -> Result<Vec<Bimodule<S>>, ExtError> {
    let nn = cat.n();
    let mut lifts = vec![vec![Vec::new(); nn]; nn];
    for c in 0..nn {
        for c2 in 0..nn {
            for b in 0..cat.hom_dim(c, c2) {
                let bm = cat.basis_morphism(crate::fincat::BasisMor { src: c, tgt: c2, idx: b });
                lifts[c][c2].push(morphism_of_conflations(cat, e, dominant[c], dominant[c2], &bm)?.0);
            }
        }
    }
    let mut levels = vec![Bimodule::hom(cat)];
    for k in 1..=nmax {
        let prev = &levels[k - 1];
        // kernels[x][c] ⊆ K^{k-1}(x, F_c)
        let mut kernels = vec![Vec::with_capacity(nn); nn];
        for (x, row) in kernels.iter_mut().enumerate() {
            for d in dominant.iter() {
                row.push(prev.left_matrix(cat, &d.x, &cat.indec(x)).kernel_basis());
            }
        }
        let dims: Vec<Vec<usize>> = kernels.iter().map(|r| r.iter().map(|s| s.dim()).collect()).collect();
        let mut left = vec![vec![Vec::new(); nn]; nn];
        let mut right = vec![vec![Vec::new(); nn]; nn];
        for c in 0..nn {
            for c2 in 0..nn {
                for (b, a) in lifts[c][c2].iter().enumerate() {
                    let per_x = (0..nn)
                        .map(|x| {
                            let l = prev.left_matrix(cat, a, &cat.indec(x));
                            let img = l.mul(kernels[x][c].basis());
                            kernels[x][c2]
                                .coords_matrix(&img)
                                .ok_or_else(|| ExtError::NotWellDefined(format!("kernel iteration left action at {k}")))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    left[c][c2].push(per_x);
                    let bm = cat.basis_morphism(crate::fincat::BasisMor { src: c, tgt: c2, idx: b });
                    let per_y = (0..nn)
                        .map(|y| {
                            let r = prev.right_matrix(cat, &bm, &dominant[y].a);
                            let img = r.mul(kernels[c2][y].basis());
                            kernels[c][y]
                                .coords_matrix(&img)
                                .ok_or_else(|| ExtError::NotWellDefined(format!("kernel iteration right action at {k}")))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    right[c][c2].push(per_y);
                }
            }
        }
        levels.push(Bimodule::new(cat, dims, left, right)?);
    }
    Ok(levels)
}

/// Dual of [`kernel_iteration`] along designated codominant conflations
/// `a -> I_a -> J_a`: `K^n(a,y) = Ker(K^{n-1}(J_a,y) -> K^{n-1}(I_a,y))`.
pub fn kernel_iteration_dual<S: Scalar>(
    cat: &FinAddCategory<S>,
    e: &Bimodule<S>,
    codominant: &[&Conflation<S>],
    nmax: usize,
) -> Result<Vec<Bimodule<S>>, ExtError> {
    let nn = cat.n();
    // lifts of b : a2 -> a to morphisms J_{a2} -> J_a
    let mut lifts = vec![vec![Vec::new(); nn]; nn];
    for a2 in 0..nn {
        for a in 0..nn {
            for b in 0..cat.hom_dim(a2, a) {
                let bm = cat.basis_morphism(crate::fincat::BasisMor { src: a2, tgt: a, idx: b });
                lifts[a2][a].push(lift_codominant(cat, e, codominant[a2], codominant[a], &bm)?);
            }
        }
    }
    let mut levels = vec![Bimodule::hom(cat)];
    for k in 1..=nmax {
        let prev = &levels[k - 1];
        let mut kernels = vec![Vec::with_capacity(nn); nn];
        for (a, row) in kernels.iter_mut().enumerate() {
            for y in 0..nn {
                row.push(prev.right_matrix(cat, &codominant[a].y, &cat.indec(y)).kernel_basis());
            }
        }
        let dims: Vec<Vec<usize>> = kernels.iter().map(|r| r.iter().map(|s| s.dim()).collect()).collect();
        let mut left = vec![vec![Vec::new(); nn]; nn];
        let mut right = vec![vec![Vec::new(); nn]; nn];
        for a2 in 0..nn {
            for a in 0..nn {
                for (b, j) in lifts[a2][a].iter().enumerate() {
                    let bm = cat.basis_morphism(crate::fincat::BasisMor { src: a2, tgt: a, idx: b });
                    let per_x = (0..nn)
                        .map(|x| {
                            let l = prev.left_matrix(cat, &bm, &codominant[x].c);
                            let img = l.mul(kernels[x][a2].basis());
                            kernels[x][a]
                                .coords_matrix(&img)
                                .ok_or_else(|| ExtError::NotWellDefined(format!("dual kernel iteration left action at {k}")))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    left[a2][a].push(per_x);
                    let per_y = (0..nn)
                        .map(|y| {
                            let r = prev.right_matrix(cat, j, &cat.indec(y));
                            let img = r.mul(kernels[a][y].basis());
                            kernels[a2][y]
                                .coords_matrix(&img)
                                .ok_or_else(|| ExtError::NotWellDefined(format!("dual kernel iteration right action at {k}")))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    right[a2][a].push(per_y);
                }
            }
        }
        levels.push(Bimodule::new(cat, dims, left, right)?);
    }
    Ok(levels)
}

/// A morphism `J_{src} -> J_{tgt}` completing `b : src.A -> tgt.A` to a
/// morphism of conflations.
fn lift_codominant<S: Scalar>(
    cat: &FinAddCategory<S>,
    e: &Bimodule<S>,
    src: &Conflation<S>,
    tgt: &Conflation<S>,
    b: &crate::fincat::Morphism<S>,
) -> Result<crate::fincat::Morphism<S>, ExtError> {
    // unknowns [m : src.B -> tgt.B | c : src.C -> tgt.C]
    let dm = cat.hom_layout(&src.b, &tgt.b).total;
    let dc = cat.hom_layout(&src.c, &tgt.c).total;
    let eq1 = cat.pre_matrix(&src.x, &tgt.b);
    let rhs1 = cat.compose(&tgt.x, b)?.coeffs;
    let eq2_m = cat.post_matrix(&tgt.y, &src.b);
    let eq2_c = cat.pre_matrix(&src.y, &tgt.c).scale(&-S::one());
    let r1 = eq1.rows();
    let r2 = eq2_m.rows();
    let r3 = e.dim_obj(&src.c, &tgt.a);
    let cols: Vec<Vec<S>> = (0..dc)
        .map(|k| e.right_matrix(cat, &cat.unit_vector(&src.c, &tgt.c, k), &tgt.a).apply(&tgt.delta))
        .collect();
    let eq3_c = Matrix::from_columns(r3, &cols);
    let rhs3 = e.left_matrix(cat, b, &src.c).apply(&src.delta);
    let mut sys = Matrix::zeros(r1 + r2 + r3, dm + dc);
    sys.add_block(0, 0, &eq1);
    sys.add_block(r1, 0, &eq2_m);
    sys.add_block(r1, dm, &eq2_c);
    sys.add_block(r1 + r2, dm, &eq3_c);
    let mut rhs = rhs1;
    rhs.extend(vec![S::zero(); r2]);
    rhs.extend(rhs3);
    let sol = sys
        .solve(&rhs)
        .map_err(|err| ExtError::NoLift(err.to_string()))?
        .ok_or_else(|| ExtError::NoLift(format!("{} -> {}", src.name, tgt.name)))?;
    Ok(crate::fincat::Morphism {
        src: src.c.clone(),
        tgt: tgt.c.clone(),
        coeffs: sol.particular[dm..].to_vec(),
    })
}

/// Dimensions of `E_I^{-n}` and `E_II^{-n}` at one pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairDims {
    pub x: usize,
    pub y: usize,
    pub n: usize,
    pub dim_i: usize,
    pub dim_ii: usize,
}

/// `Im(ι^♯∘ω_♯)` on `E_I^{-1}(X,Y)` and `Im(ω_♯∘ι^♯)` on `E_II^{-1}(X,Y)`
/// inside `E(J,Q)`.
#[derive(Debug, Clone)]
pub struct Comparison<S> {
    pub x: usize,
    pub y: usize,
    pub omega: String,
    pub iota: String,
    pub image_i: Subspace<S>,
    pub image_ii: Subspace<S>,
}

impl<S: Scalar> Comparison<S> {
    pub fn equal(&self) -> bool {
        self.image_i.same_as(&self.image_ii)
    }
}

#[derive(Debug, Clone)]
pub struct ConditionCheck {
    pub holds: bool,
    /// Number of witnesses inspected.
    pub witnesses: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct BalanceReport<S> {
    pub nmax: usize,
    pub dims: Vec<PairDims>,
    pub unbalanced: Vec<(usize, usize, usize)>,
    /// `E_I^{-1}(I,-) = 0` for injective indecomposables, exact.
    pub ni: ConditionCheck,
    /// `C(I,x)` mono for injective `I` and every table inflation `x`.
    pub ni_table: ConditionCheck,
    pub nii: ConditionCheck,
    pub nii_table: ConditionCheck,
    /// `(ω_♯)^{-1}(I(X,Q)) = 0`, over table conflations flagged dominant.
    pub ni_plus: ConditionCheck,
    pub nii_plus: ConditionCheck,
    pub comparisons: Vec<Comparison<S>>,
    pub caveats: Vec<String>,
}

impl<S: Scalar> BalanceReport<S> {
    pub fn balanced(&self) -> bool {
        self.unbalanced.is_empty()
    }

    /// Dimension balance agrees with `(NI) ∧ (NII)`.
    pub fn balance_matches_conditions(&self) -> bool {
        self.balanced() == (self.ni.holds && self.nii.holds)
    }

    pub fn comparisons_equal(&self) -> bool {
        self.comparisons.iter().all(|c| c.equal())
    }
}

fn check(failures: Vec<String>, witnesses: usize) -> ConditionCheck {
    ConditionCheck {
        holds: failures.is_empty(),
        witnesses,
        failures,
    }
}

/// `f ↦ f_*ι : C(X,Q) -> E(J,Q)` for `ι ∈ E(J,X)`.
fn push_along<S: Scalar>(cat: &FinAddCategory<S>, e: &Bimodule<S>, x: &Obj, q: &Obj, j: &Obj, iota: &[S]) -> Matrix<S> {
    let d = cat.hom_layout(x, q).total;
    let cols: Vec<Vec<S>> = (0..d)
        .map(|k| e.left_matrix(cat, &cat.unit_vector(x, q, k), j).apply(iota))
        .collect();
    Matrix::from_columns(e.dim_obj(j, q), &cols)
}

/// `g ↦ g^*ω : C(J,Y) -> E(J,Q)` for `ω ∈ E(Y,Q)`.
fn pull_along<S: Scalar>(cat: &FinAddCategory<S>, e: &Bimodule<S>, j: &Obj, y: &Obj, q: &Obj, omega: &[S]) -> Matrix<S> {
    let d = cat.hom_layout(j, y).total;
    let cols: Vec<Vec<S>> = (0..d)
        .map(|k| e.right_matrix(cat, &cat.unit_vector(j, y, k), q).apply(omega))
        .collect();
    Matrix::from_columns(e.dim_obj(j, q), &cols)
}

pub fn comparison_images<S: Scalar>(
    inst: &ExtriInstance<S>,
    towers: &Towers<S>,
    x: usize,
    y: usize,
) -> Result<Comparison<S>, ExtError> {
    let cat = &inst.cat;
    let e = &inst.e;
    let om = inst.dominant[y]
        .map(|k| &inst.conflations[k])
        .ok_or_else(|| ExtError::MissingDominant(cat.name(y).to_string()))?;
    let io = inst.codominant[x]
        .map(|k| &inst.conflations[k])
        .ok_or_else(|| ExtError::MissingDominant(format!("codominant {}", cat.name(x))))?;
    let (q, j) = (&om.a, &io.c);
    let xo = cat.indec(x);
    let yo = cat.indec(y);
    let om_sharp = towers.neg_i.connecting(cat, &towers.pos, 0, &om.c, &om.a, &om.delta, x)?;
    let iota_up = push_along(cat, e, &xo, q, j, &io.delta);
    let img_i = iota_up.mul(&om_sharp);
    let io_sharp = towers.neg_ii.connecting(cat, &towers.pos, 0, &io.c, &io.a, &io.delta, y)?;
    let om_down = pull_along(cat, e, j, &yo, q, &om.delta);
    let img_ii = om_down.mul(&io_sharp);
    let amb = e.dim_obj(j, q);
    Ok(Comparison {
        x,
        y,
        omega: om.name.clone(),
        iota: io.name.clone(),
        image_i: Subspace::span(amb, &img_i),
        image_ii: Subspace::span(amb, &img_ii),
    })
}

pub fn balance_report<S: Scalar>(inst: &ExtriInstance<S>, towers: &Towers<S>, nmax: usize) -> Result<BalanceReport<S>, ExtError> {
    let cat = &inst.cat;
    let e = &inst.e;
    let nn = cat.n();
    let nmax = nmax.min(towers.neg_i.nmax());
    let mut dims = Vec::new();
    let mut unbalanced = Vec::new();
    for n in 1..=nmax {
        let (bi, bii) = (towers.neg_i.level(n)?, towers.neg_ii.level(n)?);
        for x in 0..nn {
            for y in 0..nn {
                let (di, dii) = (bi.dim(x, y), bii.dim(x, y));
                if di != dii {
                    unbalanced.push((x, y, n));
                }
                dims.push(PairDims {
                    x,
                    y,
                    n,
                    dim_i: di,
                    dim_ii: dii,
                });
            }
        }
    }
    let injectives = inst.injectives();
    let projectives = inst.projectives();
    let mut ni = Vec::new();
    let mut nii = Vec::new();
    if nmax >= 1 {
        for &i in &injectives {
            for y in 0..nn {
                let d = towers.neg_i.level(1)?.dim(i, y);
                if d != 0 {
                    ni.push(format!("E_I^-1({}, {}) has dim {d}", cat.name(i), cat.name(y)));
                }
            }
        }
        for &p in &projectives {
            for x in 0..nn {
                let d = towers.neg_ii.level(1)?.dim(x, p);
                if d != 0 {
                    nii.push(format!("E_II^-1({}, {}) has dim {d}", cat.name(x), cat.name(p)));
                }
            }
        }
    }
    let mut ni_table = Vec::new();
    let mut nii_table = Vec::new();
    let mut witnesses = 0;
    for c in &inst.conflations {
        for &i in &injectives {
            witnesses += 1;
            let m = cat.post_matrix(&c.x, &cat.indec(i));
            if m.rank() != m.cols() {
                ni_table.push(format!("C({}, x) is not mono for {}", cat.name(i), c.name));
            }
        }
        for &p in &projectives {
            let m = cat.pre_matrix(&c.y, &cat.indec(p));
            if m.rank() != m.cols() {
                nii_table.push(format!("C(y, {}) is not mono for {}", cat.name(p), c.name));
            }
        }
    }
    let mut ni_plus = Vec::new();
    let mut nii_plus = Vec::new();
    let mut plus_witnesses = 0;
    let mut comparisons = Vec::new();
    if nmax >= 1 {
        for x in 0..nn {
            for y in 0..nn {
                let xo = cat.indec(x);
                let yo = cat.indec(y);
                for om in inst.conflations.iter().filter(|c| c.dominant && c.c == yo) {
                    plus_witnesses += 1;
                    let sh = towers.neg_i.connecting(cat, &towers.pos, 0, &om.c, &om.a, &om.delta, x)?;
                    let inj = injective_ideal(cat, e, &xo, &om.a);
                    let pre = preimage_of_subspace(&sh, &inj);
                    if pre.dim() != 0 {
                        ni_plus.push(format!(
                            "(ω_♯)^-1(I) has dim {} on E_I^-1({}, {}) for {}",
                            pre.dim(),
                            cat.name(x),
                            cat.name(y),
                            om.name
                        ));
                    }
                }
                for io in inst.conflations.iter().filter(|c| c.codominant && c.a == xo) {
                    plus_witnesses += 1;
                    let sh = towers.neg_ii.connecting(cat, &towers.pos, 0, &io.c, &io.a, &io.delta, y)?;
                    let proj = projective_ideal(cat, e, &io.c, &yo);
                    let pre = preimage_of_subspace(&sh, &proj);
                    if pre.dim() != 0 {
                        nii_plus.push(format!(
                            "(ι^♯)^-1(P) has dim {} on E_II^-1({}, {}) for {}",
                            pre.dim(),
                            cat.name(x),
                            cat.name(y),
                            io.name
                        ));
                    }
                }
                if inst.dominant[y].is_some() && inst.codominant[x].is_some() {
                    comparisons.push(comparison_images(inst, towers, x, y)?);
                }
            }
        }
    }
    Ok(BalanceReport {
        nmax,
        dims,
        unbalanced,
        ni: check(ni, injectives.len() * nn),
        ni_table: check(ni_table, witnesses),
        nii: check(nii, projectives.len() * nn),
        nii_table: check(nii_table, inst.conflations.len() * projectives.len()),
        ni_plus: check(ni_plus, plus_witnesses),
        nii_plus: check(nii_plus, plus_witnesses),
        comparisons,
        caveats: vec![
            "(NI+)/(NII+) are witness-bounded: only table conflations flagged dominant/codominant are inspected".into(),
        ],
    })
}

/// Both sides of the alternating-sum identity for a resolution chain of `Y`
/// and a test object `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingSum {
    pub x: usize,
    pub y: usize,
    pub lhs: i64,
    pub stable: i64,
    pub projective: i64,
}

impl AlternatingSum {
    pub fn rhs(&self) -> i64 {
        self.stable + self.projective
    }

    pub fn holds(&self) -> bool {
        self.lhs == self.rhs()
    }
}

pub fn alternating_sum_check<S: Scalar>(
    inst: &ExtriInstance<S>,
    towers: &Towers<S>,
    chain: &ResolutionChain,
    x: usize,
) -> Result<AlternatingSum, ExtError> {
    crate::instances::validate_resolution(inst, chain).map_err(|m| ExtError::BadConflation("resolution".into(), m))?;
    let cat = &inst.cat;
    let e = &inst.e;
    let n = chain.conflations.len();
    if n + 1 > towers.neg_i.nmax() {
        return Err(ExtError::TooShallow(n + 1, towers.neg_i.nmax() + 1));
    }
    let xo = cat.indec(x);
    let yo = cat.indec(chain.y);
    let sign = |k: usize| if k.is_multiple_of(2) { 1 } else { -1 };
    let mut lhs = 0i64;
    for k in 0..=towers.neg_i.nmax() {
        lhs += sign(k) * towers.neg_i.level(k)?.dim_obj(&xo, &yo) as i64;
    }
    let mut omegas = vec![yo.clone()];
    for &ci in &chain.conflations {
        omegas.push(inst.conflations[ci].a.clone());
    }
    let mut stable = 0i64;
    for (k, om) in omegas.iter().enumerate() {
        stable += sign(k) * stable_hom(cat, e, &xo, om, Ideal::Projective).quotient_dim as i64;
    }
    let mut projective = 0i64;
    for (k, p) in chain.projectives.iter().enumerate() {
        projective += sign(k) * cat.hom_layout(&xo, p).total as i64;
    }
    Ok(AlternatingSum {
        x,
        y: chain.y,
        lhs,
        stable,
        projective,
    })
}
