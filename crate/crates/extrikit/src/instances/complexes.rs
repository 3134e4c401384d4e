//! Bounded complexes over a finite additive category of projectives, and the
//! extriangulated category spanned by a finite list of indecomposable
//! complexes: `Hom` is chain maps modulo homotopy and `E(X,Y) = Hom_K(X, Y[1])`.

use crate::fincat::{FinAddCategory, Morphism, Obj};
use crate::funcat::Bimodule;
use crate::linalg::{Cokernel, Matrix, Subspace};
use crate::posext::{find_codominant_extension, find_dominant_extension, Conflation};
use crate::scalar::Scalar;

use super::InstanceError;

/// Input description of a complex: `objs[k]` sits in degree `lo + k` and
/// `diffs[k] : objs[k] -> objs[k+1]`.
#[derive(Debug, Clone)]
pub struct ComplexData<S> {
    pub name: String,
    pub lo: i32,
    pub objs: Vec<Obj>,
    pub diffs: Vec<Morphism<S>>,
}

/// A complex padded to the ambient degree window.
#[derive(Debug, Clone, PartialEq)]
pub struct Complex<S> {
    pub objs: Vec<Obj>,
    pub diffs: Vec<Morphism<S>>,
}

/// Degreewise components, `comps[k] : X_k -> Y_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainMap<S> {
    pub comps: Vec<Morphism<S>>,
}

/// Path category of `1 <- 2 <- … <- n`: indecomposable projectives
/// `P1..Pn` with `Hom(Pi,Pj) = K` for `i <= j`.
pub fn linear_proj_category<S: Scalar>(n: usize) -> FinAddCategory<S> {
    let names = (1..=n).map(|i| format!("P{i}")).collect();
    let hd = |i: usize, j: usize| usize::from(i <= j);
    let hom_dim = (0..n).map(|i| (0..n).map(|j| hd(i, j)).collect()).collect();
    let labels = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i <= j { vec![format!("p{}_{}", i + 1, j + 1)] } else { vec![] })
                .collect()
        })
        .collect();
    let comp = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n)
                        .map(|k| if i <= j && j <= k { vec![S::one()] } else { vec![] })
                        .collect()
                })
                .collect()
        })
        .collect();
    let ids = (0..n).map(|_| vec![S::one()]).collect();
    FinAddCategory::new(names, hom_dim, labels, comp, ids).expect("path category tables")
}

/// `P_i` in a single degree.
pub fn stalk<S: Scalar>(p: &FinAddCategory<S>, name: &str, i: usize, deg: i32) -> ComplexData<S> {
    ComplexData {
        name: name.to_string(),
        lo: deg,
        objs: vec![p.indec(i)],
        diffs: vec![],
    }
}

/// `P_i -> P_j` in degrees `deg, deg+1`, the differential given by coefficients.
pub fn two_term<S: Scalar>(p: &FinAddCategory<S>, name: &str, i: usize, j: usize, coeffs: Vec<S>, deg: i32) -> ComplexData<S> {
    ComplexData {
        name: name.to_string(),
        lo: deg,
        objs: vec![p.indec(i), p.indec(j)],
        diffs: vec![p.indec_morphism(i, j, coeffs)],
    }
}

fn scale_morphism<S: Scalar>(f: &Morphism<S>, s: &S) -> Morphism<S> {
    Morphism {
        src: f.src.clone(),
        tgt: f.tgt.clone(),
        coeffs: f.coeffs.iter().map(|v| v.mul_ref(s)).collect(),
    }
}

/// Inclusion of the `part`-th summand of `⊕ parts` in a category over objects.
fn summand_inclusion<S: Scalar>(p: &FinAddCategory<S>, parts: &[Obj], part: usize) -> Morphism<S> {
    let n = p.n();
    let total = parts.iter().fold(Obj::zero(n), |acc, o| acc.sum(o));
    let src = &parts[part];
    let lay = p.hom_layout(src, &total);
    let mut m = p.zero_morphism(src, &total);
    let mut u = 0;
    for j in 0..n {
        let start: usize = total.0[..j].iter().sum();
        let before: usize = parts[..part].iter().map(|o| o.0[j]).sum();
        for c in 0..src.0[j] {
            let r = lay.range(u, start + before + c);
            m.coeffs[r].clone_from_slice(p.id_coeffs(j));
            u += 1;
        }
    }
    m
}

fn summand_projection<S: Scalar>(p: &FinAddCategory<S>, parts: &[Obj], part: usize) -> Morphism<S> {
    let inc = summand_inclusion(p, parts, part);
    let lay_i = p.hom_layout(&inc.src, &inc.tgt);
    let lay = p.hom_layout(&inc.tgt, &inc.src);
    let mut m = p.zero_morphism(&inc.tgt, &inc.src);
    for s in 0..lay_i.src.len() {
        for t in 0..lay_i.tgt.len() {
            let r = lay_i.range(s, t);
            if inc.coeffs[r.clone()].iter().any(|v| !v.is_zero()) {
                m.coeffs[lay.range(t, s)].clone_from_slice(&inc.coeffs[r]);
            }
        }
    }
    m
}

/// Chain maps modulo null-homotopic maps between two padded complexes.
#[derive(Debug, Clone)]
pub struct HomK<S> {
    offsets: Vec<usize>,
    srcs: Vec<Obj>,
    tgts: Vec<Obj>,
    cycles: Subspace<S>,
    quotient: Cokernel<S>,
}

impl<S: Scalar> HomK<S> {
    pub fn new(p: &FinAddCategory<S>, x: &Complex<S>, y: &Complex<S>) -> Self {
        let len = x.objs.len();
        let fdim: Vec<usize> = (0..len).map(|k| p.hom_layout(&x.objs[k], &y.objs[k]).total).collect();
        let mut offsets = vec![0];
        for d in &fdim {
            offsets.push(offsets.last().unwrap() + d);
        }
        let total = offsets[len];
        // d_Y f^k - f^{k+1} d_X at each k
        let rdim: Vec<usize> = (0..len - 1).map(|k| p.hom_layout(&x.objs[k], &y.objs[k + 1]).total).collect();
        let mut roff = vec![0];
        for d in &rdim {
            roff.push(roff.last().unwrap() + d);
        }
        let mut dmat = Matrix::zeros(roff[len - 1], total);
        for k in 0..len - 1 {
            dmat.add_block(roff[k], offsets[k], &p.post_matrix(&y.diffs[k], &x.objs[k]));
            let pre = p.pre_matrix(&x.diffs[k], &y.objs[k + 1]);
            dmat.add_block(roff[k], offsets[k + 1], &pre.scale(&-S::one()));
        }
        let cycles = dmat.kernel_basis();
        // h^k : X_k -> Y_{k-1}, k >= 1
        let hdim: Vec<usize> = (1..len).map(|k| p.hom_layout(&x.objs[k], &y.objs[k - 1]).total).collect();
        let mut hoff = vec![0];
        for d in &hdim {
            hoff.push(hoff.last().unwrap() + d);
        }
        let mut nmat = Matrix::zeros(total, hoff[len - 1]);
        for k in 1..len {
            let col = hoff[k - 1];
            nmat.add_block(offsets[k], col, &p.post_matrix(&y.diffs[k - 1], &x.objs[k]));
            nmat.add_block(offsets[k - 1], col, &p.pre_matrix(&x.diffs[k - 1], &y.objs[k - 1]));
        }
        let bz = cycles.coords_matrix(&nmat).expect("null-homotopic maps are chain maps");
        let quotient = bz.cokernel();
        HomK {
            offsets,
            srcs: x.objs.clone(),
            tgts: y.objs.clone(),
            cycles,
            quotient,
        }
    }

    pub fn dim(&self) -> usize {
        self.quotient.quotient_dim
    }

    pub fn vectorize(&self, f: &ChainMap<S>) -> Vec<S> {
        f.comps.iter().flat_map(|m| m.coeffs.iter().cloned()).collect()
    }

    /// Class of a chain map, or `None` if it is not a chain map.
    pub fn reduce(&self, f: &ChainMap<S>) -> Option<Vec<S>> {
        let z = self.cycles.coords(&self.vectorize(f))?;
        Some(self.quotient.projection.apply(&z))
    }

    pub fn rep(&self, k: usize) -> ChainMap<S> {
        let z = self.quotient.section.column(k);
        let v = self.cycles.basis().apply(&z);
        self.devectorize(&v)
    }

    pub fn combination(&self, coeffs: &[S]) -> ChainMap<S> {
        let z = self.quotient.section.apply(coeffs);
        let v = self.cycles.basis().apply(&z);
        self.devectorize(&v)
    }

    fn devectorize(&self, v: &[S]) -> ChainMap<S> {
        let comps = (0..self.srcs.len())
            .map(|k| Morphism {
                src: self.srcs[k].clone(),
                tgt: self.tgts[k].clone(),
                coeffs: v[self.offsets[k]..self.offsets[k + 1]].to_vec(),
            })
            .collect();
        ChainMap { comps }
    }
}

/// Splitting of a complex into listed indecomposables: `p ∘ i = id` and
/// `i ∘ p ≃ id` up to homotopy.
#[derive(Debug, Clone)]
pub struct Decomposition<S> {
    pub summands: Obj,
    pub inclusion: ChainMap<S>,
    pub projection: ChainMap<S>,
}

/// The additive category spanned by a list of indecomposable complexes.
#[derive(Debug, Clone)]
pub struct ComplexCategory<S> {
    pub proj: FinAddCategory<S>,
    pub lo: i32,
    pub complexes: Vec<Complex<S>>,
    pub names: Vec<String>,
    homs: Vec<Vec<HomK<S>>>,
    exts: Vec<Vec<HomK<S>>>,
    pub cat: FinAddCategory<S>,
    pub e: Bimodule<S>,
    residue: Vec<Vec<S>>,
}

impl<S: Scalar> ComplexCategory<S> {
    pub fn build(proj: FinAddCategory<S>, data: &[ComplexData<S>]) -> Result<Self, InstanceError> {
        let bad = |m: String| InstanceError::Complex(m);
        if data.is_empty() {
            return Err(bad("no complexes".into()));
        }
        let lo = data.iter().map(|c| c.lo).min().unwrap() - 2;
        let hi = data.iter().map(|c| c.lo + c.objs.len() as i32 - 1).max().unwrap() + 2;
        let len = (hi - lo + 1) as usize;
        let n = proj.n();
        let mut complexes = Vec::with_capacity(data.len());
        for c in data {
            if c.diffs.len() + 1 != c.objs.len() {
                return Err(bad(format!("{}: need one differential between consecutive degrees", c.name)));
            }
            let mut objs = vec![Obj::zero(n); len];
            for (k, o) in c.objs.iter().enumerate() {
                proj.check_obj(o)?;
                objs[(c.lo - lo) as usize + k] = o.clone();
            }
            let mut diffs: Vec<Morphism<S>> = (0..len - 1).map(|k| proj.zero_morphism(&objs[k], &objs[k + 1])).collect();
            for (k, d) in c.diffs.iter().enumerate() {
                let at = (c.lo - lo) as usize + k;
                if d.src != objs[at] || d.tgt != objs[at + 1] {
                    return Err(bad(format!("{}: differential {k} has the wrong ends", c.name)));
                }
                diffs[at] = d.clone();
            }
            let cx = Complex { objs, diffs };
            check_complex(&proj, &cx).map_err(|m| bad(format!("{}: {m}", c.name)))?;
            complexes.push(cx);
        }
        let names: Vec<String> = data.iter().map(|c| c.name.clone()).collect();
        let nc = complexes.len();
        let shifted: Vec<Complex<S>> = complexes.iter().map(|c| shift(&proj, c)).collect();
        let homs: Vec<Vec<HomK<S>>> = (0..nc)
            .map(|i| (0..nc).map(|j| HomK::new(&proj, &complexes[i], &complexes[j])).collect())
            .collect();
        let exts: Vec<Vec<HomK<S>>> = (0..nc)
            .map(|i| (0..nc).map(|j| HomK::new(&proj, &complexes[i], &shifted[j])).collect())
            .collect();
        let hom_dim: Vec<Vec<usize>> = (0..nc).map(|i| (0..nc).map(|j| homs[i][j].dim()).collect()).collect();
        let labels = (0..nc)
            .map(|i| {
                (0..nc)
                    .map(|j| (0..hom_dim[i][j]).map(|k| format!("{}>{}:{k}", names[i], names[j])).collect())
                    .collect()
            })
            .collect();
        let mut comp = vec![vec![vec![Vec::new(); nc]; nc]; nc];
        for i in 0..nc {
            for j in 0..nc {
                let fs: Vec<ChainMap<S>> = (0..hom_dim[i][j]).map(|a| homs[i][j].rep(a)).collect();
                for k in 0..nc {
                    let mut t = Vec::with_capacity(hom_dim[i][j] * hom_dim[j][k] * hom_dim[i][k]);
                    for f in &fs {
                        for b in 0..hom_dim[j][k] {
                            let g = homs[j][k].rep(b);
                            let h = compose_cm(&proj, &g, f);
                            t.extend(homs[i][k].reduce(&h).expect("composite of chain maps"));
                        }
                    }
                    comp[i][j][k] = t;
                }
            }
        }
        let ids: Vec<Vec<S>> = (0..nc)
            .map(|i| homs[i][i].reduce(&identity_cm(&proj, &complexes[i])).expect("identity"))
            .collect();
        let cat = FinAddCategory::new(names.clone(), hom_dim.clone(), labels, comp, ids)?;
        let edims: Vec<Vec<usize>> = (0..nc).map(|i| (0..nc).map(|j| exts[i][j].dim()).collect()).collect();
        let mut left = vec![vec![Vec::new(); nc]; nc];
        let mut right = vec![vec![Vec::new(); nc]; nc];
        for a in 0..nc {
            for b in 0..nc {
                for k in 0..hom_dim[a][b] {
                    let g = homs[a][b].rep(k);
                    let g1 = shift_cm(&proj, &g);
                    // left: g : a -> b acting E(i,a) -> E(i,b)
                    let lf: Vec<Matrix<S>> = (0..nc)
                        .map(|i| {
                            let cols: Vec<Vec<S>> = (0..edims[i][a])
                                .map(|t| exts[i][b].reduce(&compose_cm(&proj, &g1, &exts[i][a].rep(t))).unwrap())
                                .collect();
                            Matrix::from_columns(edims[i][b], &cols)
                        })
                        .collect();
                    // right: g : a -> b acting E(b,j) -> E(a,j)
                    let rt: Vec<Matrix<S>> = (0..nc)
                        .map(|j| {
                            let cols: Vec<Vec<S>> = (0..edims[b][j])
                                .map(|t| exts[a][j].reduce(&compose_cm(&proj, &exts[b][j].rep(t), &g)).unwrap())
                                .collect();
                            Matrix::from_columns(edims[a][j], &cols)
                        })
                        .collect();
                    left[a][b].push(lf);
                    right[a][b].push(rt);
                }
            }
        }
        let e = Bimodule::new(&cat, edims, left, right)?;
        let mut residue = Vec::with_capacity(nc);
        for i in 0..nc {
            let rad = cat.radical_end(i)?;
            let mut rows: Vec<Vec<S>> = rad.vectors();
            rows.push(cat.id_coeffs(i).to_vec());
            let mut rhs = vec![S::zero(); rows.len()];
            *rhs.last_mut().unwrap() = S::one();
            let sol = Matrix::from_rows(rows)
                .solve(&rhs)?
                .ok_or_else(|| bad(format!("End({}) is not local", names[i])))?;
            if sol.kernel.dim() != 0 {
                return Err(bad(format!("End({}) has a residue field larger than K", names[i])));
            }
            residue.push(sol.particular);
        }
        Ok(ComplexCategory {
            proj,
            lo,
            complexes,
            names,
            homs,
            exts,
            cat,
            e,
            residue,
        })
    }

    pub fn window(&self) -> usize {
        self.complexes[0].objs.len()
    }

    pub fn hom_k(&self, i: usize, j: usize) -> &HomK<S> {
        &self.homs[i][j]
    }

    pub fn ext_k(&self, i: usize, j: usize) -> &HomK<S> {
        &self.exts[i][j]
    }

    fn parts(&self, x: &Obj) -> Vec<usize> {
        x.slots()
    }

    /// The complex `⊕ L_s` over the slots of `x`.
    pub fn total(&self, x: &Obj) -> Complex<S> {
        let parts: Vec<&Complex<S>> = self.parts(x).into_iter().map(|s| &self.complexes[s]).collect();
        sum_complex(&self.proj, &parts, self.window())
    }

    fn inclusions(&self, x: &Obj) -> (Vec<ChainMap<S>>, Vec<ChainMap<S>>) {
        let parts: Vec<&Complex<S>> = self.parts(x).into_iter().map(|s| &self.complexes[s]).collect();
        sum_maps(&self.proj, &parts, self.window())
    }

    /// Chain map realizing a morphism between objects of the category.
    pub fn realize(&self, f: &Morphism<S>) -> ChainMap<S> {
        let (_, px) = self.inclusions(&f.src);
        let (iy, _) = self.inclusions(&f.tgt);
        let lay = self.cat.hom_layout(&f.src, &f.tgt);
        let mut out = zero_cm(&self.proj, &self.total(&f.src), &self.total(&f.tgt));
        for (s, &a) in lay.src.iter().enumerate() {
            for (t, &b) in lay.tgt.iter().enumerate() {
                let c = &f.coeffs[lay.range(s, t)];
                if c.iter().all(|v| v.is_zero()) {
                    continue;
                }
                let m = self.homs[a][b].combination(c);
                let term = compose_cm(&self.proj, &iy[t], &compose_cm(&self.proj, &m, &px[s]));
                out = add_cm(&self.proj, &out, &term);
            }
        }
        out
    }

    /// Chain map `tot(C) -> tot(A)[1]` realizing `δ ∈ E(C,A)`.
    pub fn realize_ext(&self, c: &Obj, a: &Obj, delta: &[S]) -> ChainMap<S> {
        let (_, pc) = self.inclusions(c);
        let (ia, _) = self.inclusions(a);
        let lay = self.e.layout(c, a);
        let ta1 = shift(&self.proj, &self.total(a));
        let mut out = zero_cm(&self.proj, &self.total(c), &ta1);
        for (s, &i) in lay.src.iter().enumerate() {
            for (t, &j) in lay.tgt.iter().enumerate() {
                let d = &delta[lay.range(s, t)];
                if d.iter().all(|v| v.is_zero()) {
                    continue;
                }
                let m = self.exts[i][j].combination(d);
                let inc = shift_cm(&self.proj, &ia[t]);
                let term = compose_cm(&self.proj, &inc, &compose_cm(&self.proj, &m, &pc[s]));
                out = add_cm(&self.proj, &out, &term);
            }
        }
        out
    }

    /// Morphism of the category represented by a chain map `tot(X) -> tot(Y)`.
    pub fn classify(&self, x: &Obj, y: &Obj, f: &ChainMap<S>) -> Result<Morphism<S>, InstanceError> {
        let (ix, _) = self.inclusions(x);
        let (_, py) = self.inclusions(y);
        let lay = self.cat.hom_layout(x, y);
        let mut m = self.cat.zero_morphism(x, y);
        for (s, &a) in lay.src.iter().enumerate() {
            for (t, &b) in lay.tgt.iter().enumerate() {
                let blk = compose_cm(&self.proj, &py[t], &compose_cm(&self.proj, f, &ix[s]));
                let v = self.homs[a][b]
                    .reduce(&blk)
                    .ok_or_else(|| InstanceError::Complex("not a chain map".into()))?;
                m.coeffs[lay.range(s, t)].clone_from_slice(&v);
            }
        }
        Ok(m)
    }

    /// Splits a complex into the listed indecomposables.
    pub fn decompose(&self, b: &Complex<S>) -> Result<Decomposition<S>, InstanceError> {
        let nc = self.complexes.len();
        let mut mult = vec![0; nc];
        let mut ins: Vec<ChainMap<S>> = Vec::new();
        let mut outs: Vec<ChainMap<S>> = Vec::new();
        for l in 0..nc {
            let to_b = HomK::new(&self.proj, &self.complexes[l], b);
            let from_b = HomK::new(&self.proj, b, &self.complexes[l]);
            let us: Vec<ChainMap<S>> = (0..to_b.dim()).map(|k| to_b.rep(k)).collect();
            let vs: Vec<ChainMap<S>> = (0..from_b.dim()).map(|k| from_b.rep(k)).collect();
            if us.is_empty() || vs.is_empty() {
                continue;
            }
            let pairing = Matrix::from_fn(us.len(), vs.len(), |a, c| {
                let end = self.homs[l][l].reduce(&compose_cm(&self.proj, &vs[c], &us[a])).unwrap();
                end.iter().zip(&self.residue[l]).fold(S::zero(), |acc, (x, y)| acc + x.mul_ref(y))
            });
            let cols = pairing.rref().pivots;
            let rows = pairing.transpose().rref().pivots;
            mult[l] = cols.len();
            for (&r, &c) in rows.iter().zip(&cols) {
                ins.push(us[r].clone());
                outs.push(vs[c].clone());
            }
        }
        let o = Obj(mult);
        let to = self.total(&o);
        let (io, po) = self.inclusions(&o);
        let mut i = zero_cm(&self.proj, &to, b);
        let mut p = zero_cm(&self.proj, b, &to);
        for s in 0..ins.len() {
            i = add_cm(&self.proj, &i, &compose_cm(&self.proj, &ins[s], &po[s]));
            p = add_cm(&self.proj, &p, &compose_cm(&self.proj, &io[s], &outs[s]));
        }
        let g = self.classify(&o, &o, &compose_cm(&self.proj, &p, &i))?;
        let id = self.cat.identity(&o);
        let w = self
            .cat
            .post_matrix(&g, &o)
            .solve(&id.coeffs)?
            .ok_or_else(|| InstanceError::Complex("selected summands do not split off".into()))?
            .particular;
        let w = Morphism {
            src: o.clone(),
            tgt: o.clone(),
            coeffs: w,
        };
        let projection = compose_cm(&self.proj, &self.realize(&w), &p);
        let idem = compose_cm(&self.proj, &i, &projection);
        let rest = add_cm(&self.proj, &identity_cm(&self.proj, b), &scale_cm(&idem, &-S::one()));
        let endb = HomK::new(&self.proj, b, b);
        if endb.reduce(&rest).is_none_or(|v| v.iter().any(|x| !x.is_zero())) {
            return Err(InstanceError::Complex(
                "complex has a summand outside the listed indecomposables".into(),
            ));
        }
        Ok(Decomposition {
            summands: o,
            inclusion: i,
            projection,
        })
    }

    /// Conflation `A -> B -> C` realizing `δ ∈ E(C,A)` via the shifted cone.
    pub fn realize_conflation(
        &self,
        name: &str,
        a: &Obj,
        c: &Obj,
        delta: &[S],
    ) -> Result<(Conflation<S>, Decomposition<S>), InstanceError> {
        let ta = self.total(a);
        let tc = self.total(c);
        let phi = self.realize_ext(c, a, delta);
        let (b, x, y) = cone(&self.proj, &ta, &tc, &phi);
        let dec = self.decompose(&b)?;
        let xo = self.classify(a, &dec.summands, &compose_cm(&self.proj, &dec.projection, &x))?;
        let yo = self.classify(&dec.summands, c, &compose_cm(&self.proj, &y, &dec.inclusion))?;
        let conf = Conflation {
            name: name.to_string(),
            a: a.clone(),
            b: dec.summands.clone(),
            c: c.clone(),
            x: xo,
            y: yo,
            delta: delta.to_vec(),
            dominant: false,
            codominant: false,
        };
        Ok((conf, dec))
    }

    /// One conflation per basis extension, then the designated dominant and
    /// codominant conflations of every indecomposable.
    #[allow(clippy::type_complexity)]
    pub fn conflations(&self) -> Result<(Vec<Conflation<S>>, Vec<Decomposition<S>>, Vec<usize>, Vec<usize>), InstanceError> {
        let nc = self.complexes.len();
        let mut confs = Vec::new();
        let mut decs = Vec::new();
        for c in 0..nc {
            for a in 0..nc {
                for k in 0..self.e.dim(c, a) {
                    let mut d = vec![S::zero(); self.e.dim(c, a)];
                    d[k] = S::one();
                    let name = format!("ext:{}:{}:{k}", self.names[c], self.names[a]);
                    let (cf, dec) = self.realize_conflation(&name, &self.cat.indec(a), &self.cat.indec(c), &d)?;
                    confs.push(cf);
                    decs.push(dec);
                }
            }
        }
        let mut dom = Vec::with_capacity(nc);
        for c in 0..nc {
            let (f, theta) = find_dominant_extension(&self.cat, &self.e, c);
            let (cf, dec) = self.realize_conflation(&format!("dom:{}", self.names[c]), &f, &self.cat.indec(c), &theta)?;
            dom.push(confs.len());
            confs.push(cf);
            decs.push(dec);
        }
        let mut codom = Vec::with_capacity(nc);
        for a in 0..nc {
            let (j, iota) = find_codominant_extension(&self.cat, &self.e, a);
            let (cf, dec) = self.realize_conflation(&format!("codom:{}", self.names[a]), &self.cat.indec(a), &j, &iota)?;
            codom.push(confs.len());
            confs.push(cf);
            decs.push(dec);
        }
        Ok((confs, decs, dom, codom))
    }
}

pub fn check_complex<S: Scalar>(p: &FinAddCategory<S>, c: &Complex<S>) -> Result<(), String> {
    for k in 0..c.diffs.len().saturating_sub(1) {
        let dd = p.compose(&c.diffs[k + 1], &c.diffs[k]).map_err(|e| e.to_string())?;
        if dd.coeffs.iter().any(|v| !v.is_zero()) {
            return Err(format!("d∘d ≠ 0 at window position {k}"));
        }
    }
    Ok(())
}

/// `X[1]^k = X^{k+1}` with differential `-d`.
pub fn shift<S: Scalar>(p: &FinAddCategory<S>, c: &Complex<S>) -> Complex<S> {
    let len = c.objs.len();
    let n = p.n();
    assert!(c.objs[0].is_zero(), "shift leaves the degree window");
    let mut objs: Vec<Obj> = c.objs[1..].to_vec();
    objs.push(Obj::zero(n));
    let mut diffs: Vec<Morphism<S>> = c.diffs[1..].iter().map(|d| scale_morphism(d, &-S::one())).collect();
    diffs.push(p.zero_morphism(&objs[len - 2], &objs[len - 1]));
    Complex { objs, diffs }
}

pub fn shift_cm<S: Scalar>(p: &FinAddCategory<S>, f: &ChainMap<S>) -> ChainMap<S> {
    let n = p.n();
    let mut comps: Vec<Morphism<S>> = f.comps[1..].to_vec();
    comps.push(p.zero_morphism(&Obj::zero(n), &Obj::zero(n)));
    ChainMap { comps }
}

pub fn compose_cm<S: Scalar>(p: &FinAddCategory<S>, g: &ChainMap<S>, f: &ChainMap<S>) -> ChainMap<S> {
    ChainMap {
        comps: g
            .comps
            .iter()
            .zip(&f.comps)
            .map(|(gk, fk)| p.compose(gk, fk).expect("composable chain maps"))
            .collect(),
    }
}

pub fn add_cm<S: Scalar>(p: &FinAddCategory<S>, f: &ChainMap<S>, g: &ChainMap<S>) -> ChainMap<S> {
    ChainMap {
        comps: f.comps.iter().zip(&g.comps).map(|(a, b)| p.add(a, b)).collect(),
    }
}

pub fn scale_cm<S: Scalar>(f: &ChainMap<S>, s: &S) -> ChainMap<S> {
    ChainMap {
        comps: f.comps.iter().map(|m| scale_morphism(m, s)).collect(),
    }
}

pub fn zero_cm<S: Scalar>(p: &FinAddCategory<S>, x: &Complex<S>, y: &Complex<S>) -> ChainMap<S> {
    ChainMap {
        comps: x.objs.iter().zip(&y.objs).map(|(a, b)| p.zero_morphism(a, b)).collect(),
    }
}

pub fn identity_cm<S: Scalar>(p: &FinAddCategory<S>, x: &Complex<S>) -> ChainMap<S> {
    ChainMap {
        comps: x.objs.iter().map(|a| p.identity(a)).collect(),
    }
}

fn sum_maps<S: Scalar>(p: &FinAddCategory<S>, parts: &[&Complex<S>], len: usize) -> (Vec<ChainMap<S>>, Vec<ChainMap<S>>) {
    let mut inc = Vec::with_capacity(parts.len());
    let mut prj = Vec::with_capacity(parts.len());
    for s in 0..parts.len() {
        let mut ic = Vec::with_capacity(len);
        let mut pc = Vec::with_capacity(len);
        for k in 0..len {
            let objs: Vec<Obj> = parts.iter().map(|c| c.objs[k].clone()).collect();
            ic.push(summand_inclusion(p, &objs, s));
            pc.push(summand_projection(p, &objs, s));
        }
        inc.push(ChainMap { comps: ic });
        prj.push(ChainMap { comps: pc });
    }
    (inc, prj)
}

pub fn sum_complex<S: Scalar>(p: &FinAddCategory<S>, parts: &[&Complex<S>], len: usize) -> Complex<S> {
    let n = p.n();
    let objs: Vec<Obj> = (0..len)
        .map(|k| parts.iter().fold(Obj::zero(n), |acc, c| acc.sum(&c.objs[k])))
        .collect();
    let (inc, prj) = sum_maps(p, parts, len);
    let diffs = (0..len - 1)
        .map(|k| {
            let mut d = p.zero_morphism(&objs[k], &objs[k + 1]);
            for (s, c) in parts.iter().enumerate() {
                let t = p.compose(&c.diffs[k], &prj[s].comps[k]).unwrap();
                d = p.add(&d, &p.compose(&inc[s].comps[k + 1], &t).unwrap());
            }
            d
        })
        .collect();
    Complex { objs, diffs }
}

/// `B = A ⊕ C` with `d_B = [[d_A, φ], [0, d_C]]` for `φ : C -> A[1]`, with
/// the inclusion `A -> B` and projection `B -> C`.
pub fn cone<S: Scalar>(
    p: &FinAddCategory<S>,
    a: &Complex<S>,
    c: &Complex<S>,
    phi: &ChainMap<S>,
) -> (Complex<S>, ChainMap<S>, ChainMap<S>) {
    let len = a.objs.len();
    let mut b = sum_complex(p, &[a, c], len);
    let (inc, prj) = sum_maps(p, &[a, c], len);
    for k in 0..len - 1 {
        let t = p.compose(&phi.comps[k], &prj[1].comps[k]).unwrap();
        let t = p.compose(&inc[0].comps[k + 1], &t).unwrap();
        b.diffs[k] = p.add(&b.diffs[k], &t);
    }
    debug_assert!(check_complex(p, &b).is_ok());
    let x = inc[0].clone();
    let y = prj[1].clone();
    (b, x, y)
}
