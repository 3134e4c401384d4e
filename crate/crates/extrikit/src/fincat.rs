//! Finite K-linear Krull–Schmidt categories given by structure constants.
//!
//! Objects are multiplicity vectors over the indecomposables. A morphism
//! `X -> Y` is a flat coefficient vector laid out block by block: for each
//! copy `s` of an indecomposable in `X`, then each copy `t` in `Y`, the
//! coordinates in the basis of `Hom(x_s, y_t)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{Matrix, Subspace};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatError {
    #[error("unknown indecomposable {0:?}")]
    UnknownIndecomposable(String),
    #[error("object has {got} entries, category has {expected} indecomposables")]
    ObjectLength { expected: usize, got: usize },
    #[error("cannot compose: target of f is {0:?} but source of g is {1:?}")]
    Mismatch(Obj, Obj),
    #[error("bad shape: {0}")]
    Shape(String),
    #[error("radical of End({0}) needs characteristic 0 or above {1}")]
    RadicalCharacteristic(String, usize),
}

/// Multiplicity vector over the indecomposables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Obj(pub Vec<usize>);

impl Obj {
    pub fn zero(n: usize) -> Obj {
        Obj(vec![0; n])
    }

    pub fn indec(n: usize, i: usize) -> Obj {
        let mut v = vec![0; n];
        v[i] = 1;
        Obj(v)
    }

    pub fn from_slots(n: usize, slots: &[usize]) -> Obj {
        let mut v = vec![0; n];
        for &s in slots {
            v[s] += 1;
        }
        Obj(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&m| m == 0)
    }

    /// Indecomposable index of each copy, in canonical order.
    pub fn slots(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &m)| std::iter::repeat_n(i, m))
            .collect()
    }

    pub fn sum(&self, o: &Obj) -> Obj {
        Obj(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    /// Positions of the copies of `self` and of `o` inside `self ⊕ o`
    /// (for each indecomposable, copies of `self` come first).
    pub fn sum_positions(&self, o: &Obj) -> (Vec<usize>, Vec<usize>) {
        let total = self.sum(o);
        let mut start = Vec::with_capacity(total.0.len());
        let mut acc = 0;
        for &m in &total.0 {
            start.push(acc);
            acc += m;
        }
        let mut left = Vec::new();
        let mut right = Vec::new();
        for i in 0..total.0.len() {
            for c in 0..self.0[i] {
                left.push(start[i] + c);
            }
            for c in 0..o.0[i] {
                right.push(start[i] + self.0[i] + c);
            }
        }
        (left, right)
    }
}

/// The sum of `parts` and, for each part, the positions of its copies in
/// the sum (earlier parts first within each indecomposable).
pub fn positions_in_sum(n: usize, parts: &[&Obj]) -> (Obj, Vec<Vec<usize>>) {
    let mut total = Obj::zero(n);
    for p in parts {
        total = total.sum(p);
    }
    let mut start = Vec::with_capacity(n);
    let mut acc = 0;
    for &m in &total.0 {
        start.push(acc);
        acc += m;
    }
    let mut seen = vec![0; n];
    let mut out = Vec::with_capacity(parts.len());
    for p in parts {
        let mut pos = Vec::new();
        for (i, &m) in p.0.iter().enumerate() {
            for c in 0..m {
                pos.push(start[i] + seen[i] + c);
            }
            seen[i] += m;
        }
        out.push(pos);
    }
    (total, out)
}

/// Offsets of the `(s, t)` blocks of a bimodule value on two objects.
#[derive(Debug, Clone)]
pub struct BlockLayout {
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    pub offsets: Vec<Vec<usize>>,
    pub sizes: Vec<Vec<usize>>,
    pub total: usize,
}

impl BlockLayout {
    pub fn new(src: Vec<usize>, tgt: Vec<usize>, dim: impl Fn(usize, usize) -> usize) -> Self {
        let mut offsets = Vec::with_capacity(src.len());
        let mut sizes = Vec::with_capacity(src.len());
        let mut total = 0;
        for &x in &src {
            let mut o = Vec::with_capacity(tgt.len());
            let mut z = Vec::with_capacity(tgt.len());
            for &y in &tgt {
                o.push(total);
                let d = dim(x, y);
                z.push(d);
                total += d;
            }
            offsets.push(o);
            sizes.push(z);
        }
        BlockLayout {
            src,
            tgt,
            offsets,
            sizes,
            total,
        }
    }

    pub fn range(&self, s: usize, t: usize) -> std::ops::Range<usize> {
        self.offsets[s][t]..self.offsets[s][t] + self.sizes[s][t]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisMor {
    pub src: usize,
    pub tgt: usize,
    pub idx: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Morphism<S> {
    pub src: Obj,
    pub tgt: Obj,
    pub coeffs: Vec<S>,
}

#[derive(Debug, Clone)]
pub struct FinAddCategory<S> {
    names: Vec<String>,
    hom_dim: Vec<Vec<usize>>,
    hom_labels: Vec<Vec<Vec<String>>>,
    /// `comp[i][j][k][(a * d_jk + b) * d_ik + t]`: coefficient of the `t`-th
    /// basis vector of `Hom(i,k)` in `g_b ∘ f_a`.
    comp: Vec<Vec<Vec<Vec<S>>>>,
    id_coeffs: Vec<Vec<S>>,
}

impl<S: Scalar> FinAddCategory<S> {
    pub fn new(
        names: Vec<String>,
        hom_dim: Vec<Vec<usize>>,
        hom_labels: Vec<Vec<Vec<String>>>,
        comp: Vec<Vec<Vec<Vec<S>>>>,
        id_coeffs: Vec<Vec<S>>,
    ) -> Result<Self, CatError> {
        let n = names.len();
        let bad = |m: String| Err(CatError::Shape(m));
        if hom_dim.len() != n || hom_labels.len() != n || comp.len() != n || id_coeffs.len() != n {
            return bad("tables must have one row per indecomposable".into());
        }
        for i in 0..n {
            if hom_dim[i].len() != n || hom_labels[i].len() != n || comp[i].len() != n {
                return bad(format!("row {i} has the wrong length"));
            }
            if id_coeffs[i].len() != hom_dim[i][i] {
                return bad(format!("identity of {} has the wrong length", names[i]));
            }
            for j in 0..n {
                if hom_labels[i][j].len() != hom_dim[i][j] {
                    return bad(format!("labels of Hom({},{})", names[i], names[j]));
                }
                if comp[i][j].len() != n {
                    return bad(format!("composition row ({i},{j})"));
                }
                for k in 0..n {
                    let want = hom_dim[i][j] * hom_dim[j][k] * hom_dim[i][k];
                    if comp[i][j][k].len() != want {
                        return bad(format!(
                            "composition {}->{}->{} has {} constants, expected {want}",
                            names[i],
                            names[j],
                            names[k],
                            comp[i][j][k].len()
                        ));
                    }
                }
            }
        }
        Ok(FinAddCategory {
            names,
            hom_dim,
            hom_labels,
            comp,
            id_coeffs,
        })
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, CatError> {
        self.names
            .iter()
            .position(|x| x == name)
            .ok_or_else(|| CatError::UnknownIndecomposable(name.to_string()))
    }

    pub fn hom_dim(&self, i: usize, j: usize) -> usize {
        self.hom_dim[i][j]
    }

    pub fn hom_labels(&self, i: usize, j: usize) -> &[String] {
        &self.hom_labels[i][j]
    }

    pub fn comp_table(&self, i: usize, j: usize, k: usize) -> &[S] {
        &self.comp[i][j][k]
    }

    pub fn id_coeffs(&self, i: usize) -> &[S] {
        &self.id_coeffs[i]
    }

    pub fn obj(&self, mult: &[(usize, usize)]) -> Obj {
        let mut o = Obj::zero(self.n());
        for &(i, m) in mult {
            o.0[i] += m;
        }
        o
    }

    pub fn indec(&self, i: usize) -> Obj {
        Obj::indec(self.n(), i)
    }

    pub fn check_obj(&self, x: &Obj) -> Result<(), CatError> {
        if x.0.len() != self.n() {
            return Err(CatError::ObjectLength {
                expected: self.n(),
                got: x.0.len(),
            });
        }
        Ok(())
    }

    pub fn basis_morphisms(&self) -> Vec<BasisMor> {
        let mut out = Vec::new();
        for src in 0..self.n() {
            for tgt in 0..self.n() {
                for idx in 0..self.hom_dim[src][tgt] {
                    out.push(BasisMor { src, tgt, idx });
                }
            }
        }
        out
    }

    /// `g_b ∘ f_a` in the basis of `Hom(i,k)`.
    pub fn compose_basis(&self, i: usize, j: usize, k: usize, a: usize, b: usize) -> &[S] {
        let dik = self.hom_dim[i][k];
        let start = (a * self.hom_dim[j][k] + b) * dik;
        &self.comp[i][j][k][start..start + dik]
    }

    pub fn compose_indec(&self, i: usize, j: usize, k: usize, f: &[S], g: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.hom_dim[i][k]];
        for (a, fa) in f.iter().enumerate() {
            if fa.is_zero() {
                continue;
            }
            for (b, gb) in g.iter().enumerate() {
                if gb.is_zero() {
                    continue;
                }
                let c = fa.mul_ref(gb);
                for (t, v) in self.compose_basis(i, j, k, a, b).iter().enumerate() {
                    if !v.is_zero() {
                        out[t] += c.mul_ref(v);
                    }
                }
            }
        }
        out
    }

    pub fn hom_layout(&self, x: &Obj, y: &Obj) -> BlockLayout {
        BlockLayout::new(x.slots(), y.slots(), |a, b| self.hom_dim[a][b])
    }

    /// Dimension and basis labels of `Hom(X,Y)` in canonical order.
    pub fn hom_space(&self, x: &Obj, y: &Obj) -> Result<(usize, Vec<String>), CatError> {
        self.check_obj(x)?;
        self.check_obj(y)?;
        let l = self.hom_layout(x, y);
        let mut labels = Vec::with_capacity(l.total);
        for (s, &a) in l.src.iter().enumerate() {
            for (t, &b) in l.tgt.iter().enumerate() {
                for lab in &self.hom_labels[a][b] {
                    labels.push(format!("{lab}@{s}.{t}"));
                }
            }
        }
        Ok((l.total, labels))
    }

    pub fn zero_morphism(&self, x: &Obj, y: &Obj) -> Morphism<S> {
        Morphism {
            src: x.clone(),
            tgt: y.clone(),
            coeffs: vec![S::zero(); self.hom_layout(x, y).total],
        }
    }

    pub fn identity(&self, x: &Obj) -> Morphism<S> {
        let mut m = self.zero_morphism(x, x);
        let l = self.hom_layout(x, x);
        for (s, &a) in l.src.iter().enumerate() {
            let r = l.range(s, s);
            m.coeffs[r].clone_from_slice(&self.id_coeffs[a]);
        }
        m
    }

    /// Morphism between indecomposables (as one-copy objects).
    pub fn indec_morphism(&self, i: usize, j: usize, coeffs: Vec<S>) -> Morphism<S> {
        assert_eq!(coeffs.len(), self.hom_dim[i][j], "coefficient count");
        Morphism {
            src: self.indec(i),
            tgt: self.indec(j),
            coeffs,
        }
    }

    pub fn basis_morphism(&self, b: BasisMor) -> Morphism<S> {
        let mut c = vec![S::zero(); self.hom_dim[b.src][b.tgt]];
        c[b.idx] = S::one();
        self.indec_morphism(b.src, b.tgt, c)
    }

    /// Builds a morphism from per-copy blocks `blocks[s][t]`.
    pub fn morphism_from_blocks(&self, x: &Obj, y: &Obj, blocks: &[Vec<Vec<S>>]) -> Result<Morphism<S>, CatError> {
        let l = self.hom_layout(x, y);
        if blocks.len() != l.src.len() {
            return Err(CatError::Shape(format!("expected {} source blocks", l.src.len())));
        }
        let mut coeffs = vec![S::zero(); l.total];
        for (s, row) in blocks.iter().enumerate() {
            if row.len() != l.tgt.len() {
                return Err(CatError::Shape(format!("expected {} target blocks", l.tgt.len())));
            }
            for (t, b) in row.iter().enumerate() {
                if b.len() != l.sizes[s][t] {
                    return Err(CatError::Shape(format!("block ({s},{t}) has length {}", b.len())));
                }
                coeffs[l.range(s, t)].clone_from_slice(b);
            }
        }
        Ok(Morphism {
            src: x.clone(),
            tgt: y.clone(),
            coeffs,
        })
    }

    pub fn blocks(&self, f: &Morphism<S>) -> Vec<Vec<Vec<S>>> {
        let l = self.hom_layout(&f.src, &f.tgt);
        (0..l.src.len())
            .map(|s| (0..l.tgt.len()).map(|t| f.coeffs[l.range(s, t)].to_vec()).collect())
            .collect()
    }

    pub fn compose(&self, g: &Morphism<S>, f: &Morphism<S>) -> Result<Morphism<S>, CatError> {
        if f.tgt != g.src {
            return Err(CatError::Mismatch(f.tgt.clone(), g.src.clone()));
        }
        let lf = self.hom_layout(&f.src, &f.tgt);
        let lg = self.hom_layout(&g.src, &g.tgt);
        let lh = self.hom_layout(&f.src, &g.tgt);
        let mut coeffs = vec![S::zero(); lh.total];
        for (s, &x) in lf.src.iter().enumerate() {
            for (t, &y) in lf.tgt.iter().enumerate() {
                let fb = &f.coeffs[lf.range(s, t)];
                if fb.iter().all(|v| v.is_zero()) {
                    continue;
                }
                for (u, &z) in lg.tgt.iter().enumerate() {
                    let gb = &g.coeffs[lg.range(t, u)];
                    let h = self.compose_indec(x, y, z, fb, gb);
                    for (k, v) in lh.range(s, u).zip(h) {
                        coeffs[k] += v;
                    }
                }
            }
        }
        Ok(Morphism {
            src: f.src.clone(),
            tgt: g.tgt.clone(),
            coeffs,
        })
    }

    pub fn add(&self, f: &Morphism<S>, g: &Morphism<S>) -> Morphism<S> {
        assert!(f.src == g.src && f.tgt == g.tgt, "adding morphisms with different ends");
        Morphism {
            src: f.src.clone(),
            tgt: f.tgt.clone(),
            coeffs: f.coeffs.iter().zip(&g.coeffs).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn unit_vector(&self, x: &Obj, y: &Obj, k: usize) -> Morphism<S> {
        let mut m = self.zero_morphism(x, y);
        m.coeffs[k] = S::one();
        m
    }

    /// Matrix of `g ∘ - : Hom(X, src g) -> Hom(X, tgt g)`.
    pub fn post_matrix(&self, g: &Morphism<S>, x: &Obj) -> Matrix<S> {
        let d = self.hom_layout(x, &g.src).total;
        let cols: Vec<Vec<S>> = (0..d)
            .map(|k| self.compose(g, &self.unit_vector(x, &g.src, k)).unwrap().coeffs)
            .collect();
        Matrix::from_columns(self.hom_layout(x, &g.tgt).total, &cols)
    }

    /// Matrix of `- ∘ f : Hom(tgt f, Y) -> Hom(src f, Y)`.
    pub fn pre_matrix(&self, f: &Morphism<S>, y: &Obj) -> Matrix<S> {
        let d = self.hom_layout(&f.tgt, y).total;
        let cols: Vec<Vec<S>> = (0..d)
            .map(|k| self.compose(&self.unit_vector(&f.tgt, y, k), f).unwrap().coeffs)
            .collect();
        Matrix::from_columns(self.hom_layout(&f.src, y).total, &cols)
    }

    /// Left multiplication `a ∘ -` on `End(i)` for the basis element `a`.
    fn left_mult(&self, i: usize, a: usize) -> Matrix<S> {
        let d = self.hom_dim[i][i];
        Matrix::from_fn(d, d, |t, x| self.compose_basis(i, i, i, x, a)[t].clone())
    }

    /// Jacobson radical of `End(i)` via the trace form, exact in
    /// characteristic 0 or above `dim End(i)`.
    pub fn radical_end(&self, i: usize) -> Result<Subspace<S>, CatError> {
        let d = self.hom_dim[i][i];
        if d <= 1 {
            // End(i) = K is the only local algebra of dimension 1.
            return Ok(Subspace::zero(d));
        }
        let ch = self
            .id_coeffs(i)
            .iter()
            .find_map(|x| x.characteristic())
            .unwrap_or(0) as usize;
        if ch != 0 && ch <= d {
            return Err(CatError::RadicalCharacteristic(self.names[i].clone(), d));
        }
        let l: Vec<Matrix<S>> = (0..d).map(|a| self.left_mult(i, a)).collect();
        let form = Matrix::from_fn(d, d, |a, b| {
            let p = l[a].mul(&l[b]);
            (0..d).fold(S::zero(), |acc, k| acc + p.get(k, k).clone())
        });
        Ok(form.transpose().kernel_basis())
    }

    pub fn radical(&self, i: usize, j: usize) -> Result<Subspace<S>, CatError> {
        if i == j {
            self.radical_end(i)
        } else {
            Ok(Subspace::full(self.hom_dim[i][j]))
        }
    }

    /// `rad(X,Y)` assembled from the blocks.
    pub fn radical_obj(&self, x: &Obj, y: &Obj) -> Result<Subspace<S>, CatError> {
        let l = self.hom_layout(x, y);
        let mut gens = Vec::new();
        for (s, &a) in l.src.iter().enumerate() {
            for (t, &b) in l.tgt.iter().enumerate() {
                let r = self.radical(a, b)?;
                for v in r.vectors() {
                    let mut w = vec![S::zero(); l.total];
                    w[l.range(s, t)].clone_from_slice(&v);
                    gens.push(w);
                }
            }
        }
        Ok(Subspace::from_vectors(l.total, &gens))
    }

    /// No nonzero summand of the source is killed by `f`: for every
    /// indecomposable `i`, `{ι : f∘ι = 0} ⊆ rad(i, src f)`.
    pub fn is_right_minimal(&self, f: &Morphism<S>) -> Result<bool, CatError> {
        for i in 0..self.n() {
            let x = self.indec(i);
            let killed = self.post_matrix(f, &x).kernel_basis();
            if killed.dim() == 0 {
                continue;
            }
            if !self.radical_obj(&x, &f.src)?.contains_subspace(&killed) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Associativity, unit laws, locality of endomorphism rings, and
    /// non-isomorphism of distinct indecomposables. Returns the violations.
    pub fn validate(&self) -> Vec<String> {
        let n = self.n();
        let mut out = Vec::new();
        let unit = |d: usize, k: usize| {
            let mut v = vec![S::zero(); d];
            v[k] = S::one();
            v
        };
        for i in 0..n {
            for j in 0..n {
                for a in 0..self.hom_dim[i][j] {
                    let f = unit(self.hom_dim[i][j], a);
                    if self.compose_indec(i, j, j, &f, &self.id_coeffs[j]) != f {
                        out.push(format!("id_{} ∘ f ≠ f for basis {a} of Hom({},{})", self.names[j], self.names[i], self.names[j]));
                    }
                    if self.compose_indec(i, i, j, &self.id_coeffs[i], &f) != f {
                        out.push(format!("f ∘ id_{} ≠ f for basis {a} of Hom({},{})", self.names[i], self.names[i], self.names[j]));
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let (dij, djk, dkl) = (self.hom_dim[i][j], self.hom_dim[j][k], self.hom_dim[k][l]);
                        if dij * djk * dkl == 0 {
                            continue;
                        }
                        for a in 0..dij {
                            for b in 0..djk {
                                let gf = self.compose_basis(i, j, k, a, b).to_vec();
                                for c in 0..dkl {
                                    let h = unit(dkl, c);
                                    let left = self.compose_indec(i, k, l, &gf, &h);
                                    let hg = self.compose_basis(j, k, l, b, c).to_vec();
                                    let right = self.compose_indec(i, j, l, &unit(dij, a), &hg);
                                    if left != right {
                                        out.push(format!(
                                            "associativity fails on {}->{}->{}->{} basis ({a},{b},{c})",
                                            self.names[i], self.names[j], self.names[k], self.names[l]
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        for i in 0..n {
            match self.radical_end(i) {
                Ok(r) => {
                    if self.hom_dim[i][i] == 0 || self.hom_dim[i][i] - r.dim() != 1 {
                        out.push(format!("End({}) is not local with residue field K", self.names[i]));
                    }
                    for j in (0..n).filter(|&j| j != i) {
                        for a in 0..self.hom_dim[i][j] {
                            for b in 0..self.hom_dim[j][i] {
                                let c = self.compose_basis(i, j, i, a, b);
                                if !r.contains(c) {
                                    out.push(format!(
                                        "{} is a summand of {}: composite outside rad End",
                                        self.names[i], self.names[j]
                                    ));
                                }
                            }
                        }
                    }
                }
                Err(e) => out.push(e.to_string()),
            }
        }
        out
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::{One, Zero};

    /// `P1 -> P2` with `Hom(P1,P2) = K`, the projectives of `KA2`.
    pub(crate) fn a2_proj() -> FinAddCategory<Rational> {
        let one = Rational::one();
        let names = vec!["P1".to_string(), "P2".to_string()];
        let hom_dim = vec![vec![1, 1], vec![0, 1]];
        let labels = vec![
            vec![vec!["e1".into()], vec!["p".into()]],
            vec![vec![], vec!["e2".into()]],
        ];
        let mut comp = vec![vec![vec![Vec::new(); 2]; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let d = hom_dim[i][j] * hom_dim[j][k] * hom_dim[i][k];
                    comp[i][j][k] = vec![one.clone(); d];
                }
            }
        }
        FinAddCategory::new(names, hom_dim, labels, comp, vec![vec![one.clone()], vec![one]]).unwrap()
    }

    #[test]
    fn hom_space_is_additive() {
        let c = a2_proj();
        let x = c.obj(&[(0, 2), (1, 1)]);
        let y = c.indec(1);
        assert_eq!(c.hom_space(&x, &y).unwrap().0, 3);
        assert_eq!(c.hom_space(&y, &x).unwrap().0, 1);
    }

    #[test]
    fn identity_and_zero_compose() {
        let c = a2_proj();
        let x = c.obj(&[(0, 1), (1, 1)]);
        let f = Morphism {
            src: x.clone(),
            tgt: x.clone(),
            coeffs: vec![Rational::from_integer(2.into()), Rational::one(), Rational::from_integer(3.into())],
        };
        assert_eq!(c.compose(&c.identity(&x), &f).unwrap(), f);
        assert_eq!(c.compose(&f, &c.identity(&x)).unwrap(), f);
        let z = c.zero_morphism(&x, &x);
        assert!(c.compose(&f, &z).unwrap().coeffs.iter().all(|v| v.is_zero()));
        assert!(c.compose(&f, &c.zero_morphism(&c.indec(0), &c.indec(1))).is_err());
    }

    #[test]
    fn validation_catches_corruption() {
        let c = a2_proj();
        assert!(c.validate().is_empty());
        let mut bad = c.clone();
        bad.comp[0][0][1][0] = Rational::from_integer(2.into());
        assert!(!bad.validate().is_empty());
    }

    #[test]
    fn right_minimality() {
        let c = a2_proj();
        let x = c.indec(1);
        assert!(c.is_right_minimal(&c.identity(&x)).unwrap());
        let g = c.obj(&[(0, 1), (1, 1)]);
        let f = c
            .morphism_from_blocks(&g, &x, &[vec![vec![Rational::zero()]], vec![vec![Rational::one()]]])
            .unwrap();
        assert!(!c.is_right_minimal(&f).unwrap());
    }
}
