//! Bilinear functors `C^op × C -> Vect` and one-sided modules, stored
//! pointwise on indecomposables.

use thiserror::Error;

use crate::fincat::{BlockLayout, FinAddCategory, Morphism, Obj};
use crate::linalg::{Cokernel, Matrix, Subspace};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunError {
    #[error("modules have different variance")]
    VarianceMismatch,
    #[error("not natural: {0}")]
    NotNatural(String),
    #[error("subspaces are not stable under the action: {0}")]
    NotStable(String),
    #[error("bad shape: {0}")]
    Shape(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variance {
    Co,
    Contra,
}

/// `E(i,j)` with the actions of basis morphisms on either side.
#[derive(Debug, Clone)]
pub struct Bimodule<S> {
    dims: Vec<Vec<usize>>,
    /// `left[j][j2][b][i] : E(i,j) -> E(i,j2)` for the basis morphism `b: j -> j2`.
    left: Vec<Vec<Vec<Vec<Matrix<S>>>>>,
    /// `right[i2][i][b][j] : E(i,j) -> E(i2,j)` for the basis morphism `b: i2 -> i`.
    right: Vec<Vec<Vec<Vec<Matrix<S>>>>>,
}

/// Actions indexed `[src][tgt][basis]`; direction depends on variance.
#[derive(Debug, Clone)]
pub struct CModule<S> {
    pub variance: Variance,
    pub dims: Vec<usize>,
    /// For `b: i -> j`, `act[i][j][b]` is `F(i) -> F(j)` (covariant) or
    /// `F(j) -> F(i)` (contravariant).
    pub act: Vec<Vec<Vec<Matrix<S>>>>,
}

#[derive(Debug, Clone)]
pub struct ModuleMorphism<S> {
    pub src: CModule<S>,
    pub tgt: CModule<S>,
    /// `comps[m] : src(m) -> tgt(m)`.
    pub comps: Vec<Matrix<S>>,
}

/// Solution space of a naturality system, unknowns `vec(φ_m)` row-major.
#[derive(Debug, Clone)]
pub struct NatSpace<S> {
    pub shapes: Vec<(usize, usize)>,
    pub offsets: Vec<usize>,
    pub space: Subspace<S>,
}

impl<S: Scalar> NatSpace<S> {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn components(&self, v: &[S]) -> Vec<Matrix<S>> {
        self.shapes
            .iter()
            .zip(&self.offsets)
            .map(|(&(r, c), &o)| Matrix::from_fn(r, c, |i, j| v[o + i * c + j].clone()))
            .collect()
    }

    pub fn vectorize(&self, comps: &[Matrix<S>]) -> Vec<S> {
        let mut out = Vec::with_capacity(self.space.ambient());
        for m in comps {
            for i in 0..m.rows() {
                out.extend_from_slice(m.row(i));
            }
        }
        out
    }

    pub fn basis_components(&self) -> Vec<Vec<Matrix<S>>> {
        self.space.vectors().iter().map(|v| self.components(v)).collect()
    }
}

fn combine<S: Scalar>(mats: &[Matrix<S>], coeffs: &[S], rows: usize, cols: usize) -> Matrix<S> {
    let mut out = Matrix::zeros(rows, cols);
    for (m, c) in mats.iter().zip(coeffs) {
        if !c.is_zero() {
            out.add_scaled(c, m);
        }
    }
    out
}

impl<S: Scalar> Bimodule<S> {
    pub fn new(
        cat: &FinAddCategory<S>,
        dims: Vec<Vec<usize>>,
        left: Vec<Vec<Vec<Vec<Matrix<S>>>>>,
        right: Vec<Vec<Vec<Vec<Matrix<S>>>>>,
    ) -> Result<Self, FunError> {
        let n = cat.n();
        let bad = |m: String| Err(FunError::Shape(m));
        if dims.len() != n || left.len() != n || right.len() != n {
            return bad("one row per indecomposable".into());
        }
        for a in 0..n {
            if dims[a].len() != n || left[a].len() != n || right[a].len() != n {
                return bad(format!("row {a}"));
            }
            for b in 0..n {
                if left[a][b].len() != cat.hom_dim(a, b) || right[a][b].len() != cat.hom_dim(a, b) {
                    return bad(format!("action count for Hom({},{})", cat.name(a), cat.name(b)));
                }
                for k in 0..cat.hom_dim(a, b) {
                    if left[a][b][k].len() != n || right[a][b][k].len() != n {
                        return bad(format!("action family ({a},{b},{k})"));
                    }
                    for c in 0..n {
                        // left: a=j, b=j2, c=i
                        if left[a][b][k][c].shape() != (dims[c][b], dims[c][a]) {
                            return bad(format!("left action ({a},{b},{k}) at {c}"));
                        }
                        // right: a=i2, b=i, c=j
                        if right[a][b][k][c].shape() != (dims[a][c], dims[b][c]) {
                            return bad(format!("right action ({a},{b},{k}) at {c}"));
                        }
                    }
                }
            }
        }
        Ok(Bimodule { dims, left, right })
    }

    pub fn zero(cat: &FinAddCategory<S>) -> Self {
        let n = cat.n();
        let act = |a: usize, b: usize| -> Vec<Vec<Matrix<S>>> {
            (0..cat.hom_dim(a, b)).map(|_| (0..n).map(|_| Matrix::zeros(0, 0)).collect()).collect()
        };
        let tbl: Vec<Vec<Vec<Vec<Matrix<S>>>>> =
            (0..n).map(|a| (0..n).map(|b| act(a, b)).collect()).collect();
        Bimodule {
            dims: vec![vec![0; n]; n],
            left: tbl.clone(),
            right: tbl,
        }
    }

    /// `Hom` as a bimodule, acting by composition.
    pub fn hom(cat: &FinAddCategory<S>) -> Self {
        let n = cat.n();
        let d = |a: usize, b: usize| cat.hom_dim(a, b);
        let left = (0..n)
            .map(|j| {
                (0..n)
                    .map(|j2| {
                        (0..d(j, j2))
                            .map(|b| {
                                (0..n)
                                    .map(|i| {
                                        Matrix::from_fn(d(i, j2), d(i, j), |t, a| {
                                            cat.compose_basis(i, j, j2, a, b)[t].clone()
                                        })
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let right = (0..n)
            .map(|i2| {
                (0..n)
                    .map(|i| {
                        (0..d(i2, i))
                            .map(|b| {
                                (0..n)
                                    .map(|j| {
                                        Matrix::from_fn(d(i2, j), d(i, j), |t, a| {
                                            cat.compose_basis(i2, i, j, b, a)[t].clone()
                                        })
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Bimodule {
            dims: (0..n).map(|i| (0..n).map(|j| d(i, j)).collect()).collect(),
            left,
            right,
        }
    }

    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self, i: usize, j: usize) -> usize {
        self.dims[i][j]
    }

    pub fn dims(&self) -> &[Vec<usize>] {
        &self.dims
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().flatten().all(|&d| d == 0)
    }

    pub fn left_basis(&self, j: usize, j2: usize, b: usize, i: usize) -> &Matrix<S> {
        &self.left[j][j2][b][i]
    }

    pub fn right_basis(&self, i2: usize, i: usize, b: usize, j: usize) -> &Matrix<S> {
        &self.right[i2][i][b][j]
    }

    /// `f_* : E(i,j) -> E(i,j2)` for `f = Σ coeffs[b] b`.
    pub fn left_indec(&self, j: usize, j2: usize, coeffs: &[S], i: usize) -> Matrix<S> {
        let mats: Vec<Matrix<S>> = self.left[j][j2].iter().map(|v| v[i].clone()).collect();
        combine(&mats, coeffs, self.dims[i][j2], self.dims[i][j])
    }

    /// `g^* : E(i,j) -> E(i2,j)` for `g = Σ coeffs[b] b : i2 -> i`.
    pub fn right_indec(&self, i2: usize, i: usize, coeffs: &[S], j: usize) -> Matrix<S> {
        let mats: Vec<Matrix<S>> = self.right[i2][i].iter().map(|v| v[j].clone()).collect();
        combine(&mats, coeffs, self.dims[i2][j], self.dims[i][j])
    }

    pub fn layout(&self, x: &Obj, y: &Obj) -> BlockLayout {
        BlockLayout::new(x.slots(), y.slots(), |a, b| self.dims[a][b])
    }

    pub fn dim_obj(&self, x: &Obj, y: &Obj) -> usize {
        self.layout(x, y).total
    }

    /// `f_* : E(X, src f) -> E(X, tgt f)`.
    pub fn left_matrix(&self, cat: &FinAddCategory<S>, f: &Morphism<S>, x: &Obj) -> Matrix<S> {
        let lf = cat.hom_layout(&f.src, &f.tgt);
        let from = self.layout(x, &f.src);
        let to = self.layout(x, &f.tgt);
        let mut m = Matrix::zeros(to.total, from.total);
        for (s, &xs) in from.src.iter().enumerate() {
            for (t, &yt) in lf.src.iter().enumerate() {
                for (u, &yu) in lf.tgt.iter().enumerate() {
                    let c = &f.coeffs[lf.range(t, u)];
                    if c.iter().all(|v| v.is_zero()) {
                        continue;
                    }
                    let b = self.left_indec(yt, yu, c, xs);
                    m.add_block(to.offsets[s][u], from.offsets[s][t], &b);
                }
            }
        }
        m
    }

    /// `g^* : E(tgt g, Y) -> E(src g, Y)`.
    pub fn right_matrix(&self, cat: &FinAddCategory<S>, g: &Morphism<S>, y: &Obj) -> Matrix<S> {
        let lg = cat.hom_layout(&g.src, &g.tgt);
        let from = self.layout(&g.tgt, y);
        let to = self.layout(&g.src, y);
        let mut m = Matrix::zeros(to.total, from.total);
        for (s2, &a2) in lg.src.iter().enumerate() {
            for (s, &a) in lg.tgt.iter().enumerate() {
                let c = &g.coeffs[lg.range(s2, s)];
                if c.iter().all(|v| v.is_zero()) {
                    continue;
                }
                for (t, &yt) in from.tgt.iter().enumerate() {
                    let b = self.right_indec(a2, a, c, yt);
                    m.add_block(to.offsets[s2][t], from.offsets[s][t], &b);
                }
            }
        }
        m
    }

    /// The direct sum `⊕ δ_k ∈ E(⊕C_k, ⊕A_k)`, placed on the diagonal blocks.
    pub fn direct_sum_element(&self, parts: &[(&Obj, &Obj, &[S])]) -> (Obj, Obj, Vec<S>) {
        let n = self.n();
        let mut c = Obj::zero(n);
        let mut a = Obj::zero(n);
        for (ck, ak, _) in parts {
            c = c.sum(ck);
            a = a.sum(ak);
        }
        let lay = self.layout(&c, &a);
        let mut v = vec![S::zero(); lay.total];
        let (mut cpos, mut apos) = (Obj::zero(n), Obj::zero(n));
        for (ck, ak, d) in parts {
            let (_, cslots) = cpos.sum_positions(ck);
            let (_, aslots) = apos.sum_positions(ak);
            let sub = self.layout(ck, ak);
            let cs = slot_map(&cpos.sum(ck), &cslots, &c);
            let as_ = slot_map(&apos.sum(ak), &aslots, &a);
            for (s, &gs) in cs.iter().enumerate() {
                for (t, &gt) in as_.iter().enumerate() {
                    let src = sub.range(s, t);
                    let dst = lay.offsets[gs][gt];
                    for (k, idx) in src.enumerate() {
                        v[dst + k] = d[idx].clone();
                    }
                }
            }
            cpos = cpos.sum(ck);
            apos = apos.sum(ak);
        }
        (c, a, v)
    }

    /// Covariant slice `E(X, -)`.
    pub fn co_slice(&self, x: &Obj) -> CModule<S> {
        let n = self.n();
        let slots = x.slots();
        let dims = (0..n).map(|j| slots.iter().map(|&s| self.dims[s][j]).sum()).collect();
        let act = (0..n)
            .map(|j| {
                (0..n)
                    .map(|j2| {
                        (0..self.left[j][j2].len())
                            .map(|b| {
                                let parts: Vec<&Matrix<S>> = slots.iter().map(|&s| &self.left[j][j2][b][s]).collect();
                                Matrix::block_diag(&parts)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        CModule {
            variance: Variance::Co,
            dims,
            act,
        }
    }

    /// Contravariant slice `E(-, Y)`.
    pub fn contra_slice(&self, y: &Obj) -> CModule<S> {
        let n = self.n();
        let slots = y.slots();
        let dims = (0..n).map(|i| slots.iter().map(|&t| self.dims[i][t]).sum()).collect();
        let act = (0..n)
            .map(|i2| {
                (0..n)
                    .map(|i| {
                        (0..self.right[i2][i].len())
                            .map(|b| {
                                let parts: Vec<&Matrix<S>> = slots.iter().map(|&t| &self.right[i2][i][b][t]).collect();
                                Matrix::block_diag(&parts)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        CModule {
            variance: Variance::Contra,
            dims,
            act,
        }
    }

    /// Unit, composition and commutation laws. Returns the violations.
    pub fn validate(&self, cat: &FinAddCategory<S>) -> Vec<String> {
        let n = cat.n();
        let mut out = Vec::new();
        let nm = |i: usize| cat.name(i).to_string();
        for i in 0..n {
            for j in 0..n {
                let d = self.dims[i][j];
                if self.left_indec(j, j, cat.id_coeffs(j), i) != Matrix::identity(d) {
                    out.push(format!("left unit fails on E({},{})", nm(i), nm(j)));
                }
                if self.right_indec(i, i, cat.id_coeffs(i), j) != Matrix::identity(d) {
                    out.push(format!("right unit fails on E({},{})", nm(i), nm(j)));
                }
            }
        }
        for j in 0..n {
            for j2 in 0..n {
                for j3 in 0..n {
                    for a in 0..cat.hom_dim(j, j2) {
                        for b in 0..cat.hom_dim(j2, j3) {
                            let gf = cat.compose_basis(j, j2, j3, a, b);
                            for i in 0..n {
                                let lhs = self.left_indec(j, j3, gf, i);
                                let rhs = self.left[j2][j3][b][i].mul(&self.left[j][j2][a][i]);
                                if lhs != rhs {
                                    out.push(format!(
                                        "left action not multiplicative on {}->{}->{} at {}",
                                        nm(j),
                                        nm(j2),
                                        nm(j3),
                                        nm(i)
                                    ));
                                }
                                // right: h = a : j -> j2 and g = b : j2 -> j3, (g∘h)^* = h^* g^*
                                let lhs = self.right_indec(j, j3, gf, i);
                                let rhs = self.right[j][j2][a][i].mul(&self.right[j2][j3][b][i]);
                                if lhs != rhs {
                                    out.push(format!(
                                        "right action not multiplicative on {}->{}->{} at {}",
                                        nm(j),
                                        nm(j2),
                                        nm(j3),
                                        nm(i)
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        for i2 in 0..n {
            for i in 0..n {
                for c in 0..cat.hom_dim(i2, i) {
                    for j in 0..n {
                        for j2 in 0..n {
                            for b in 0..cat.hom_dim(j, j2) {
                                let lhs = self.left[j][j2][b][i2].mul(&self.right[i2][i][c][j]);
                                let rhs = self.right[i2][i][c][j2].mul(&self.left[j][j2][b][i]);
                                if lhs != rhs {
                                    out.push(format!(
                                        "actions do not commute: {}->{} against {}->{}",
                                        nm(i2),
                                        nm(i),
                                        nm(j),
                                        nm(j2)
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Positions inside `whole` of the copies listed in `positions` (relative to
/// `part`, a prefix-closed sub-object in canonical order).
fn slot_map(part: &Obj, positions: &[usize], whole: &Obj) -> Vec<usize> {
    let part_slots = part.slots();
    let mut start_whole = Vec::new();
    let mut acc = 0;
    for &m in &whole.0 {
        start_whole.push(acc);
        acc += m;
    }
    let mut start_part = Vec::new();
    let mut acc = 0;
    for &m in &part.0 {
        start_part.push(acc);
        acc += m;
    }
    positions
        .iter()
        .map(|&p| {
            let i = part_slots[p];
            start_whole[i] + (p - start_part[i])
        })
        .collect()
}

impl<S: Scalar> CModule<S> {
    pub fn zero(cat: &FinAddCategory<S>, variance: Variance) -> Self {
        let n = cat.n();
        CModule {
            variance,
            dims: vec![0; n],
            act: (0..n)
                .map(|i| (0..n).map(|j| vec![Matrix::zeros(0, 0); cat.hom_dim(i, j)]).collect())
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Action of `Σ coeffs[b] b` for morphisms `i -> j`.
    pub fn act_indec(&self, i: usize, j: usize, coeffs: &[S]) -> Matrix<S> {
        let (r, c) = match self.variance {
            Variance::Co => (self.dims[j], self.dims[i]),
            Variance::Contra => (self.dims[i], self.dims[j]),
        };
        combine(&self.act[i][j], coeffs, r, c)
    }

    pub fn dim_obj(&self, x: &Obj) -> usize {
        x.slots().iter().map(|&s| self.dims[s]).sum()
    }

    fn offsets(&self, x: &Obj) -> Vec<usize> {
        let mut acc = 0;
        x.slots()
            .iter()
            .map(|&s| {
                let o = acc;
                acc += self.dims[s];
                o
            })
            .collect()
    }

    /// `F(f)` for a morphism between arbitrary objects.
    pub fn act_morphism(&self, cat: &FinAddCategory<S>, f: &Morphism<S>) -> Matrix<S> {
        let l = cat.hom_layout(&f.src, &f.tgt);
        let os = self.offsets(&f.src);
        let ot = self.offsets(&f.tgt);
        let (ds, dt) = (self.dim_obj(&f.src), self.dim_obj(&f.tgt));
        let mut m = match self.variance {
            Variance::Co => Matrix::zeros(dt, ds),
            Variance::Contra => Matrix::zeros(ds, dt),
        };
        for (s, &a) in l.src.iter().enumerate() {
            for (t, &b) in l.tgt.iter().enumerate() {
                let c = &f.coeffs[l.range(s, t)];
                if c.iter().all(|v| v.is_zero()) {
                    continue;
                }
                let blk = self.act_indec(a, b, c);
                match self.variance {
                    Variance::Co => m.add_block(ot[t], os[s], &blk),
                    Variance::Contra => m.add_block(os[s], ot[t], &blk),
                }
            }
        }
        m
    }

    pub fn validate(&self, cat: &FinAddCategory<S>) -> Vec<String> {
        let n = cat.n();
        let mut out = Vec::new();
        for i in 0..n {
            if self.act_indec(i, i, cat.id_coeffs(i)) != Matrix::identity(self.dims[i]) {
                out.push(format!("identity of {} does not act as 1", cat.name(i)));
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for a in 0..cat.hom_dim(i, j) {
                        for b in 0..cat.hom_dim(j, k) {
                            let gf = self.act_indec(i, k, cat.compose_basis(i, j, k, a, b));
                            let (f, g) = (&self.act[i][j][a], &self.act[j][k][b]);
                            let prod = match self.variance {
                                Variance::Co => g.mul(f),
                                Variance::Contra => f.mul(g),
                            };
                            if gf != prod {
                                out.push(format!(
                                    "action not functorial on {}->{}->{}",
                                    cat.name(i),
                                    cat.name(j),
                                    cat.name(k)
                                ));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Submodule given pointwise by stable subspaces, with its inclusion.
    pub fn submodule(&self, subs: &[Subspace<S>]) -> Result<ModuleMorphism<S>, FunError> {
        let n = self.n();
        let mut act = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let mut fam = Vec::with_capacity(self.act[i][j].len());
                for m in &self.act[i][j] {
                    let (from, to) = match self.variance {
                        Variance::Co => (i, j),
                        Variance::Contra => (j, i),
                    };
                    let moved = m.mul(subs[from].basis());
                    let c = subs[to]
                        .coords_matrix(&moved)
                        .ok_or_else(|| FunError::NotStable(format!("action {i}->{j}")))?;
                    fam.push(c);
                }
                row.push(fam);
            }
            act.push(row);
        }
        let sub = CModule {
            variance: self.variance,
            dims: subs.iter().map(|s| s.dim()).collect(),
            act,
        };
        Ok(ModuleMorphism {
            src: sub,
            tgt: self.clone(),
            comps: subs.iter().map(|s| s.basis().clone()).collect(),
        })
    }

    /// Quotient by stable subspaces, with the projection and its sections.
    pub fn quotient(&self, subs: &[Subspace<S>]) -> Result<(ModuleMorphism<S>, Vec<Matrix<S>>), FunError> {
        let n = self.n();
        let coks: Vec<Cokernel<S>> = subs.iter().map(|s| s.quotient()).collect();
        let mut act = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let mut fam = Vec::with_capacity(self.act[i][j].len());
                for m in &self.act[i][j] {
                    let (from, to) = match self.variance {
                        Variance::Co => (i, j),
                        Variance::Contra => (j, i),
                    };
                    if !coks[to].projection.mul(&m.mul(subs[from].basis())).is_zero() {
                        return Err(FunError::NotStable(format!("action {i}->{j}")));
                    }
                    fam.push(coks[to].projection.mul(m).mul(&coks[from].section));
                }
                row.push(fam);
            }
            act.push(row);
        }
        let q = CModule {
            variance: self.variance,
            dims: coks.iter().map(|c| c.quotient_dim).collect(),
            act,
        };
        let sections = coks.iter().map(|c| c.section.clone()).collect();
        Ok((
            ModuleMorphism {
                src: self.clone(),
                tgt: q,
                comps: coks.into_iter().map(|c| c.projection).collect(),
            },
            sections,
        ))
    }
}

impl<S: Scalar> ModuleMorphism<S> {
    pub fn zero(src: &CModule<S>, tgt: &CModule<S>) -> Self {
        ModuleMorphism {
            src: src.clone(),
            tgt: tgt.clone(),
            comps: src.dims.iter().zip(&tgt.dims).map(|(&a, &b)| Matrix::zeros(b, a)).collect(),
        }
    }

    pub fn identity(m: &CModule<S>) -> Self {
        ModuleMorphism {
            src: m.clone(),
            tgt: m.clone(),
            comps: m.dims.iter().map(|&d| Matrix::identity(d)).collect(),
        }
    }

    pub fn check_natural(&self, cat: &FinAddCategory<S>) -> Result<(), FunError> {
        if self.src.variance != self.tgt.variance {
            return Err(FunError::VarianceMismatch);
        }
        for i in 0..cat.n() {
            for j in 0..cat.n() {
                for b in 0..cat.hom_dim(i, j) {
                    let (f, g) = (&self.src.act[i][j][b], &self.tgt.act[i][j][b]);
                    let ok = match self.src.variance {
                        Variance::Co => g.mul(&self.comps[i]) == self.comps[j].mul(f),
                        Variance::Contra => g.mul(&self.comps[j]) == self.comps[i].mul(f),
                    };
                    if !ok {
                        return Err(FunError::NotNatural(format!(
                            "square for {} -> {} basis {b}",
                            cat.name(i),
                            cat.name(j)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn compose(&self, g: &ModuleMorphism<S>) -> ModuleMorphism<S> {
        ModuleMorphism {
            src: self.src.clone(),
            tgt: g.tgt.clone(),
            comps: self.comps.iter().zip(&g.comps).map(|(f, g)| g.mul(f)).collect(),
        }
    }

    /// Component at an arbitrary object (block diagonal over copies).
    pub fn at(&self, x: &Obj) -> Matrix<S> {
        let parts: Vec<&Matrix<S>> = x.slots().iter().map(|&s| &self.comps[s]).collect();
        Matrix::block_diag(&parts)
    }

    pub fn kernels(&self) -> Vec<Subspace<S>> {
        self.comps.iter().map(|m| m.kernel_basis()).collect()
    }

    pub fn images(&self) -> Vec<Subspace<S>> {
        self.comps
            .iter()
            .zip(&self.tgt.dims)
            .map(|(m, &d)| Subspace::span(d, m))
            .collect()
    }
}

pub fn module_kernel<S: Scalar>(cat: &FinAddCategory<S>, phi: &ModuleMorphism<S>) -> Result<ModuleMorphism<S>, FunError> {
    phi.check_natural(cat)?;
    phi.src.submodule(&phi.kernels())
}

pub fn module_image<S: Scalar>(cat: &FinAddCategory<S>, phi: &ModuleMorphism<S>) -> Result<ModuleMorphism<S>, FunError> {
    phi.check_natural(cat)?;
    phi.tgt.submodule(&phi.images())
}

pub fn module_cokernel<S: Scalar>(
    cat: &FinAddCategory<S>,
    phi: &ModuleMorphism<S>,
) -> Result<(ModuleMorphism<S>, Vec<Matrix<S>>), FunError> {
    phi.check_natural(cat)?;
    phi.tgt.quotient(&phi.images())
}

/// Natural transformations `F => G` as one linear system.
pub fn nat_space<S: Scalar>(cat: &FinAddCategory<S>, f: &CModule<S>, g: &CModule<S>) -> Result<NatSpace<S>, FunError> {
    if f.variance != g.variance {
        return Err(FunError::VarianceMismatch);
    }
    let n = cat.n();
    let shapes: Vec<(usize, usize)> = (0..n).map(|m| (g.dims[m], f.dims[m])).collect();
    let mut offsets = Vec::with_capacity(n);
    let mut total = 0;
    for &(r, c) in &shapes {
        offsets.push(total);
        total += r * c;
    }
    let mut eqs: Vec<Vec<S>> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for b in 0..cat.hom_dim(i, j) {
                let (fb, gb) = (&f.act[i][j][b], &g.act[i][j][b]);
                // G(b) φ_p = φ_q F(b): p is the source of the action, q the target.
                let (p, q) = match f.variance {
                    Variance::Co => (i, j),
                    Variance::Contra => (j, i),
                };
                let (rows, cols) = (g.dims[q], f.dims[p]);
                for r in 0..rows {
                    for c in 0..cols {
                        let mut eq = vec![S::zero(); total];
                        for k in 0..g.dims[p] {
                            let v = gb.get(r, k);
                            if !v.is_zero() {
                                eq[offsets[p] + k * f.dims[p] + c] += v.clone();
                            }
                        }
                        for k in 0..f.dims[q] {
                            let v = fb.get(k, c);
                            if !v.is_zero() {
                                eq[offsets[q] + r * f.dims[q] + k] -= v.clone();
                            }
                        }
                        if eq.iter().any(|x| !x.is_zero()) {
                            eqs.push(eq);
                        }
                    }
                }
            }
        }
    }
    let space = if eqs.is_empty() {
        Subspace::full(total)
    } else {
        Matrix::from_rows(eqs).kernel_basis()
    };
    Ok(NatSpace {
        shapes,
        offsets,
        space,
    })
}

/// Projective morphisms `P(X,Y)`: those `f` with `f^* = 0` on `E(Y,-)`.
pub fn projective_ideal<S: Scalar>(cat: &FinAddCategory<S>, e: &Bimodule<S>, x: &Obj, y: &Obj) -> Subspace<S> {
    let d = cat.hom_layout(x, y).total;
    let cols: Vec<Vec<S>> = (0..d)
        .map(|k| {
            let f = cat.unit_vector(x, y, k);
            let mut col = Vec::new();
            for a in 0..cat.n() {
                let m = e.right_matrix(cat, &f, &cat.indec(a));
                for c in m.columns() {
                    col.extend(c);
                }
            }
            col
        })
        .collect();
    let rows = cols.first().map_or(0, |c| c.len());
    Matrix::from_columns(rows, &cols).kernel_basis()
}

/// Injective morphisms `I(X,Y)`: those `f` with `f_* = 0` on `E(-,X)`.
pub fn injective_ideal<S: Scalar>(cat: &FinAddCategory<S>, e: &Bimodule<S>, x: &Obj, y: &Obj) -> Subspace<S> {
    let d = cat.hom_layout(x, y).total;
    let cols: Vec<Vec<S>> = (0..d)
        .map(|k| {
            let f = cat.unit_vector(x, y, k);
            let mut col = Vec::new();
            for b in 0..cat.n() {
                let m = e.left_matrix(cat, &f, &cat.indec(b));
                for c in m.columns() {
                    col.extend(c);
                }
            }
            col
        })
        .collect();
    let rows = cols.first().map_or(0, |c| c.len());
    Matrix::from_columns(rows, &cols).kernel_basis()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ideal {
    Projective,
    Injective,
}

/// `Hom(X,Y)` modulo the chosen ideal.
pub fn stable_hom<S: Scalar>(
    cat: &FinAddCategory<S>,
    e: &Bimodule<S>,
    x: &Obj,
    y: &Obj,
    ideal: Ideal,
) -> Cokernel<S> {
    match ideal {
        Ideal::Projective => projective_ideal(cat, e, x, y).quotient(),
        Ideal::Injective => injective_ideal(cat, e, x, y).quotient(),
    }
}

/// Checks that the ideal is closed under composition with basis morphisms
/// on both sides, between indecomposables.
pub fn ideal_is_two_sided<S: Scalar>(cat: &FinAddCategory<S>, e: &Bimodule<S>, ideal: Ideal) -> bool {
    let n = cat.n();
    let get = |i: usize, j: usize| match ideal {
        Ideal::Projective => projective_ideal(cat, e, &cat.indec(i), &cat.indec(j)),
        Ideal::Injective => injective_ideal(cat, e, &cat.indec(i), &cat.indec(j)),
    };
    let ideals: Vec<Vec<Subspace<S>>> = (0..n).map(|i| (0..n).map(|j| get(i, j)).collect()).collect();
    for i in 0..n {
        for j in 0..n {
            for v in ideals[i][j].vectors() {
                for k in 0..n {
                    for b in 0..cat.hom_dim(j, k) {
                        let mut g = vec![S::zero(); cat.hom_dim(j, k)];
                        g[b] = S::one();
                        if !ideals[i][k].contains(&cat.compose_indec(i, j, k, &v, &g)) {
                            return false;
                        }
                    }
                    for b in 0..cat.hom_dim(k, i) {
                        let mut h = vec![S::zero(); cat.hom_dim(k, i)];
                        h[b] = S::one();
                        if !ideals[k][j].contains(&cat.compose_indec(k, i, j, &h, &v)) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}
