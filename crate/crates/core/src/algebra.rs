//! Finite-dimensional basic algebras given by structure constants, and the
//! construction of the preprojective algebra Λ.
//!
//! Basis elements carry ends `(src, tgt)`: the element `b` satisfies
//! `b = e_tgt · b · e_src`, and a product `x·y` can only be nonzero when
//! `src(x) = tgt(y)`. Left modules are [`Module`]s over the signature whose
//! arrows are the algebra generators.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{column_space, complement_units, Field, Matrix, Scalar};
use crate::module::{find_isomorphism, hom_space, Module, Morphism, Signature};
use crate::quiver::DynkinType;

/// Sparse vector in an algebra basis.
pub type SparseVec = Vec<(usize, Scalar)>;

/// A homological dimension that is either known or bounded below by a cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Dimension {
    Finite(usize),
    AtLeast(usize),
}

impl Dimension {
    pub fn finite(self) -> Option<usize> {
        match self {
            Dimension::Finite(d) => Some(d),
            Dimension::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::Finite(d) => write!(f, "{d}"),
            Dimension::AtLeast(d) => write!(f, ">= {d}"),
        }
    }
}

/// Multiplicities of indecomposable projectives in each term of a minimal
/// projective resolution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Resolution {
    pub terms: Vec<Vec<usize>>,
    pub complete: bool,
}

impl Resolution {
    pub fn projective_dimension(&self) -> Dimension {
        if self.complete {
            Dimension::Finite(self.terms.len().saturating_sub(1))
        } else {
            Dimension::AtLeast(self.terms.len())
        }
    }

    pub fn length(&self) -> usize {
        self.terms.len()
    }
}

pub struct FinDimAlgebra {
    field: Field,
    sig: Arc<Signature>,
    labels: Vec<String>,
    ends: Vec<(usize, usize)>,
    idempotents: Vec<usize>,
    table: HashMap<(usize, usize), SparseVec>,
    generators: Vec<SparseVec>,
    projectives: OnceLock<Vec<Module>>,
}

impl fmt::Debug for FinDimAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinDimAlgebra")
            .field("dim", &self.dim())
            .field("vertices", &self.sig.vertices)
            .field("generators", &self.generators.len())
            .finish()
    }
}

impl FinDimAlgebra {
    /// Builds an algebra from its multiplication table. When `generators` is
    /// `None` they are computed as lifts of `rad/rad²`, which needs the
    /// radical and therefore characteristic zero.
    pub fn new(
        field: Field,
        vertex_labels: Vec<String>,
        labels: Vec<String>,
        ends: Vec<(usize, usize)>,
        idempotents: Vec<usize>,
        table: HashMap<(usize, usize), SparseVec>,
        generators: Option<Vec<SparseVec>>,
    ) -> Result<FinDimAlgebra> {
        let vertices = idempotents.len();
        let provisional = Signature::new(vertices, Vec::new(), Vec::new(), vertex_labels.clone());
        let mut alg = FinDimAlgebra {
            field,
            sig: provisional,
            labels,
            ends,
            idempotents,
            table,
            generators: Vec::new(),
            projectives: OnceLock::new(),
        };
        let gens = match generators {
            Some(g) => g,
            None => alg.compute_generators()?,
        };
        let mut arrows = Vec::with_capacity(gens.len());
        let mut names = Vec::with_capacity(gens.len());
        for (k, g) in gens.iter().enumerate() {
            let (first, _) = g.first().ok_or_else(|| Error::Invalid("zero generator".into()))?;
            let e = alg.ends[*first];
            if g.iter().any(|(i, _)| alg.ends[*i] != e) {
                return Err(Error::Invalid("generator mixes ends".into()));
            }
            arrows.push(e);
            names.push(if g.len() == 1 { alg.labels[*first].clone() } else { format!("g{}", k + 1) });
        }
        alg.sig = Signature::new(vertices, arrows, names, vertex_labels);
        alg.generators = gens;
        Ok(alg)
    }

    /// Product of `vertices` copies of the ground field.
    pub fn semisimple(field: Field, vertices: usize) -> FinDimAlgebra {
        let mut table = HashMap::new();
        for v in 0..vertices {
            table.insert((v, v), vec![(v, field.one())]);
        }
        FinDimAlgebra::new(
            field,
            (1..=vertices).map(|v| v.to_string()).collect(),
            (1..=vertices).map(|v| format!("e{v}")).collect(),
            (0..vertices).map(|v| (v, v)).collect(),
            (0..vertices).collect(),
            table,
            Some(Vec::new()),
        )
        .expect("semisimple algebra is well formed")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.ends.len()
    }

    pub fn vertices(&self) -> usize {
        self.idempotents.len()
    }

    pub fn sig(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn ends(&self) -> &[(usize, usize)] {
        &self.ends
    }

    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }

    pub fn generators(&self) -> &[SparseVec] {
        &self.generators
    }

    pub fn table(&self) -> &HashMap<(usize, usize), SparseVec> {
        &self.table
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        self.table.get(&(i, j)).map_or(&[], Vec::as_slice)
    }

    pub fn mul_sparse(&self, x: &[(usize, Scalar)], y: &[(usize, Scalar)]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim()];
        for (i, a) in x {
            for (j, b) in y {
                let ab = a * b;
                for (k, c) in self.mul_basis(*i, *j) {
                    out[*k] = &out[*k] + &(&ab * c);
                }
            }
        }
        out
    }

    fn sparse(v: &[Scalar]) -> SparseVec {
        v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
    }

    /// Exact associativity check over all composable basis triples.
    pub fn is_associative(&self) -> bool {
        let n = self.dim();
        for a in 0..n {
            for b in 0..n {
                if self.ends[a].0 != self.ends[b].1 {
                    continue;
                }
                let ab = self.mul_basis(a, b).to_vec();
                for c in 0..n {
                    if self.ends[b].0 != self.ends[c].1 {
                        continue;
                    }
                    let left = self.mul_sparse(&ab, &[(c, self.field.one())]);
                    let bc = self.mul_basis(b, c).to_vec();
                    let right = self.mul_sparse(&[(a, self.field.one())], &bc);
                    if left != right {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Checks that the idempotents are orthogonal, sum to 1, and act on the
    /// ends as declared.
    pub fn idempotents_are_complete(&self) -> bool {
        let one = self.field.one();
        for b in 0..self.dim() {
            let (s, t) = self.ends[b];
            for (v, &e) in self.idempotents.iter().enumerate() {
                let left = Self::sparse(&self.mul_sparse(&[(e, one.clone())], &[(b, one.clone())]));
                let right = Self::sparse(&self.mul_sparse(&[(b, one.clone())], &[(e, one.clone())]));
                let unit = vec![(b, one.clone())];
                let expect_left = if v == t { unit.clone() } else { Vec::new() };
                let expect_right = if v == s { unit } else { Vec::new() };
                if left != expect_left || right != expect_right {
                    return false;
                }
            }
        }
        true
    }

    /// `τ(b) = tr(L_b)` on the regular representation.
    fn trace_functional(&self) -> Vec<Scalar> {
        let mut tau = vec![self.field.zero(); self.dim()];
        for (&(i, j), prod) in &self.table {
            for (k, c) in prod {
                if *k == j {
                    tau[i] = &tau[i] + c;
                }
            }
        }
        tau
    }

    /// Basis (columns) of the Jacobson radical: the radical of the trace form
    /// `(x, y) ↦ tr(L_{xy})`, valid in characteristic zero.
    pub fn radical(&self) -> Result<Matrix> {
        let n = self.dim();
        let tau = self.trace_functional();
        let mut g = Matrix::zeros(self.field, n, n);
        for (&(i, j), prod) in &self.table {
            let v = prod.iter().fold(self.field.zero(), |acc, (k, c)| &acc + &(c * &tau[*k]));
            g.set(i, j, v);
        }
        let k = g.kernel();
        // split into (src, tgt) blocks; rad is a two-sided ideal so each piece stays inside
        let mut cols: Vec<Vec<Scalar>> = Vec::new();
        for j in 0..k.cols() {
            let v = k.col_vec(j);
            let mut blocks: HashMap<(usize, usize), Vec<Scalar>> = HashMap::new();
            for (i, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    blocks.entry(self.ends[i]).or_insert_with(|| vec![self.field.zero(); n])[i] = c.clone();
                }
            }
            let mut keys: Vec<_> = blocks.keys().copied().collect();
            keys.sort();
            for key in keys {
                cols.push(blocks.remove(&key).unwrap());
            }
        }
        let m = Matrix::from_fn(self.field, n, cols.len(), |i, j| cols[j][i].clone());
        let rad = column_space(&m);
        if n - rad.cols() != self.vertices() {
            return Err(Error::RadicalCodimension(n - rad.cols(), self.vertices()));
        }
        Ok(rad)
    }

    fn block_of(&self, v: &[Scalar]) -> Option<(usize, usize)> {
        v.iter().enumerate().find(|(_, c)| !c.is_zero()).map(|(i, _)| self.ends[i])
    }

    fn compute_generators(&self) -> Result<Vec<SparseVec>> {
        let n = self.dim();
        let rad = self.radical()?;
        let rad_cols: Vec<Vec<Scalar>> = (0..rad.cols()).map(|j| rad.col_vec(j)).collect();
        let mut by_block: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (j, c) in rad_cols.iter().enumerate() {
            by_block.entry(self.block_of(c).expect("nonzero radical vector")).or_default().push(j);
        }
        let sparse_cols: Vec<SparseVec> = rad_cols.iter().map(|c| Self::sparse(c)).collect();
        let mut keys: Vec<(usize, usize)> = by_block.keys().copied().collect();
        keys.sort_by_key(|&(s, t)| (s, t));
        let mut gens = Vec::new();
        for (s, t) in keys {
            let mut sq: Vec<Vec<Scalar>> = Vec::new();
            for (&(s2, u), ys) in &by_block {
                if s2 != s {
                    continue;
                }
                if let Some(xs) = by_block.get(&(u, t)) {
                    for &x in xs {
                        for &y in ys {
                            let p = self.mul_sparse(&sparse_cols[x], &sparse_cols[y]);
                            if p.iter().any(|c| !c.is_zero()) {
                                sq.push(p);
                            }
                        }
                    }
                }
            }
            let own = &by_block[&(s, t)];
            let total: Vec<&Vec<Scalar>> = sq.iter().chain(own.iter().map(|&j| &rad_cols[j])).collect();
            let m = Matrix::from_fn(self.field, n, total.len(), |i, j| total[j][i].clone());
            for p in m.rref().pivots {
                if p >= sq.len() {
                    gens.push(Self::sparse(total[p]));
                }
            }
        }
        Ok(gens)
    }

    /// Cartan matrix `c_ij = dim e_i A e_j`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let m = self.vertices();
        let mut c = vec![vec![0i64; m]; m];
        for &(s, t) in &self.ends {
            c[t][s] += 1;
        }
        c
    }

    /// The opposite algebra, generated by the same elements.
    pub fn opposite(&self) -> FinDimAlgebra {
        let table = self.table.iter().map(|(&(i, j), v)| ((j, i), v.clone())).collect();
        let ends = self.ends.iter().map(|&(s, t)| (t, s)).collect();
        FinDimAlgebra::new(
            self.field,
            self.sig.vertex_labels.clone(),
            self.labels.clone(),
            ends,
            self.idempotents.clone(),
            table,
            Some(self.generators.clone()),
        )
        .expect("opposite of a valid algebra")
    }

    /// Basis elements with source `v`, in ascending order: the basis of `A e_v`.
    fn projective_basis(&self, v: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&b| self.ends[b].0 == v).collect()
    }

    /// The indecomposable projective `A e_v`.
    pub fn projective(&self, v: usize) -> &Module {
        &self.projectives.get_or_init(|| (0..self.vertices()).map(|w| self.build_projective(w)).collect())[v]
    }

    fn build_projective(&self, v: usize) -> Module {
        let basis = self.projective_basis(v);
        let m = self.vertices();
        let mut pos = vec![usize::MAX; self.dim()];
        let mut dims = vec![0usize; m];
        for &b in &basis {
            let t = self.ends[b].1;
            pos[b] = dims[t];
            dims[t] += 1;
        }
        let maps = self
            .generators
            .iter()
            .zip(&self.sig.arrows)
            .map(|(g, &(s, t))| {
                let mut mat = Matrix::zeros(self.field, dims[t], dims[s]);
                for &b in basis.iter().filter(|&&b| self.ends[b].1 == s) {
                    let prod = self.mul_sparse(g, &[(b, self.field.one())]);
                    for (k, c) in prod.iter().enumerate() {
                        if !c.is_zero() {
                            mat.set(pos[k], pos[b], c.clone());
                        }
                    }
                }
                mat
            })
            .collect();
        Module::new(self.field, self.sig.clone(), dims, maps).expect("projective has consistent shapes")
    }

    /// Position of `e_v` inside the vertex-`v` space of `A e_v`.
    fn top_position(&self, v: usize) -> usize {
        let e = self.idempotents[v];
        (0..e).filter(|&b| self.ends[b] == (v, v)).count()
    }

    pub fn simple(&self, v: usize) -> Module {
        Module::simple(self.field, self.sig.clone(), v)
    }

    /// Projective cover `⊕ A e_v → M`: the list of vertices (with repetition)
    /// and the covering map.
    pub fn projective_cover(&self, m: &Module) -> Result<(Vec<usize>, Morphism)> {
        if *m.sig().as_ref() != *self.sig.as_ref() {
            return Err(Error::SignatureMismatch);
        }
        let rad = m.radical();
        let mut verts = Vec::new();
        let mut parts = Vec::new();
        for (w, r) in rad.iter().enumerate() {
            let tops = complement_units(self.field, m.dims()[w], r);
            if tops.is_empty() {
                continue;
            }
            let p = self.projective(w).clone().with_signature(m.sig().clone());
            let h = hom_space(&p, m)?;
            let at = self.top_position(w);
            // evaluation Hom(A e_w, M) → M_w is an isomorphism
            let eval = Matrix::from_fn(self.field, m.dims()[w], h.dim(), |i, j| h.basis[j].comps[w].get(i, at).clone());
            let inv = eval.inverse()?;
            for u in tops {
                let coeffs = inv.col_vec(u);
                parts.push(h.combine(&coeffs));
                verts.push(w);
            }
        }
        let refs: Vec<&Morphism> = parts.iter().collect();
        Ok((verts, Morphism::stack_sources(self.field, &refs, m.dims())))
    }

    /// Kernel of the projective cover, with the cover's vertex multiplicities.
    pub fn syzygy(&self, m: &Module) -> Result<(Module, Vec<usize>)> {
        let (verts, cover) = self.projective_cover(m)?;
        let mut mult = vec![0usize; self.vertices()];
        for &v in &verts {
            mult[v] += 1;
        }
        let parts: Vec<&Module> = verts.iter().map(|&v| self.projective(v)).collect();
        let p = Module::direct_sum_all(self.field, m.sig().clone(), &parts);
        let k = p.submodule(&cover.kernel_bases());
        Ok((k, mult))
    }

    /// Minimal projective resolution, computed through the term of index `cap`.
    pub fn minimal_projective_resolution(&self, m: &Module, cap: usize) -> Result<Resolution> {
        let mut terms = Vec::new();
        let mut cur = m.clone();
        for _ in 0..=cap {
            if cur.is_zero() {
                return Ok(Resolution { terms, complete: true });
            }
            let (k, mult) = self.syzygy(&cur)?;
            terms.push(mult);
            cur = k;
        }
        Ok(Resolution { terms, complete: cur.is_zero() })
    }

    pub fn projective_dimension(&self, m: &Module, cap: usize) -> Result<Dimension> {
        Ok(self.minimal_projective_resolution(m, cap)?.projective_dimension())
    }

    pub fn simple_resolutions(&self, cap: usize) -> Result<Vec<Resolution>> {
        (0..self.vertices()).map(|v| self.minimal_projective_resolution(&self.simple(v), cap)).collect()
    }

    /// `dim Ext^k(S_i, S_j)`; `None` when `k` lies beyond a truncated resolution.
    pub fn ext_dim(&self, i: usize, j: usize, k: usize, cap: usize) -> Result<Option<usize>> {
        let r = self.minimal_projective_resolution(&self.simple(i), cap.max(k))?;
        Ok(ext_from_resolution(&r, j, k))
    }

    pub fn global_dimension(&self, cap: usize) -> Result<Dimension> {
        let mut best = 0;
        for r in self.simple_resolutions(cap)? {
            match r.projective_dimension() {
                Dimension::Finite(d) => best = best.max(d),
                d @ Dimension::AtLeast(_) => return Ok(d),
            }
        }
        Ok(Dimension::Finite(best))
    }

    /// Vertices `i` whose injective `D(e_i A)` is also projective.
    pub fn projective_injective_vertices(&self) -> Result<Vec<usize>> {
        let op = self.opposite();
        let mut out = Vec::new();
        for i in 0..self.vertices() {
            let inj = op.projective(i).dual_opposite().with_signature(self.sig.clone());
            for j in 0..self.vertices() {
                let p = self.projective(j);
                if p.dims() == inj.dims() && find_isomorphism(p, &inj, 11)?.is_some() {
                    out.push(i);
                    break;
                }
            }
        }
        Ok(out)
    }

    /// Number of leading projective terms of the minimal injective
    /// coresolution of `A`, obtained by resolving the duals `D(A e_j)` over
    /// the opposite algebra.
    pub fn dominant_dimension(&self, cap: usize) -> Result<Dimension> {
        let op = self.opposite();
        let pi = self.projective_injective_vertices()?;
        let mut finite: Option<usize> = None;
        let mut bound: Option<usize> = None;
        for j in 0..self.vertices() {
            let d = self.projective(j).dual_opposite().with_signature(op.sig.clone());
            let r = op.minimal_projective_resolution(&d, cap)?;
            let lead = r
                .terms
                .iter()
                .take_while(|t| t.iter().enumerate().all(|(i, &m)| m == 0 || pi.contains(&i)))
                .count();
            if lead < r.terms.len() {
                finite = Some(finite.map_or(lead, |f| f.min(lead)));
            } else if !r.complete {
                bound = Some(bound.map_or(lead, |b| b.min(lead)));
            }
        }
        Ok(match (finite, bound) {
            (Some(f), Some(b)) if b < f => Dimension::AtLeast(b),
            (Some(f), _) => Dimension::Finite(f),
            (None, Some(b)) => Dimension::AtLeast(b),
            (None, None) => Dimension::AtLeast(cap + 1),
        })
    }

    /// Structure constants as JSON.
    pub fn to_json(&self) -> serde_json::Value {
        let mut keys: Vec<&(usize, usize)> = self.table.keys().collect();
        keys.sort();
        let products: Vec<serde_json::Value> = keys
            .into_iter()
            .map(|&(i, j)| {
                let terms: Vec<serde_json::Value> =
                    self.table[&(i, j)].iter().map(|(k, c)| serde_json::json!([k, c.to_string()])).collect();
                serde_json::json!({"left": i, "right": j, "terms": terms})
            })
            .collect();
        serde_json::json!({
            "dim": self.dim(),
            "field": self.field.to_string(),
            "vertices": self.vertices(),
            "basis": self.labels.iter().zip(&self.ends).map(|(l, &(s, t))| serde_json::json!({
                "label": l, "src": s + 1, "tgt": t + 1
            })).collect::<Vec<_>>(),
            "idempotents": self.idempotents,
            "products": products,
        })
    }
}

pub fn ext_from_resolution(r: &Resolution, j: usize, k: usize) -> Option<usize> {
    match r.terms.get(k) {
        Some(t) => Some(t[j]),
        None if r.complete => Some(0),
        None => None,
    }
}

/// Λ presented by its indecomposable projectives `P_i = Λ e_i`.
///
/// Each `P_i` is built degree by degree:
/// `Λ_ℓ e_i = (V ⊗ Λ_{ℓ−1} e_i) / c·Λ_{ℓ−2} e_i`, where `V` spans the
/// arrows of the double quiver and `c = Σ_α (α*α − αα*)`. Words are read
/// right to left as compositions, so `α β` means "first β, then α"; a basis
/// word is stored as the sequence of arrows in the order they are applied.
#[derive(Clone, Debug)]
pub struct Preprojective {
    pub dynkin: DynkinType,
    pub sig: Arc<Signature>,
    pub projectives: Vec<Module>,
    /// `words[i][w]` lists the basis words of `P_i` ending at vertex `w`, in
    /// the order of the vertex-`w` basis.
    pub words: Vec<Vec<Vec<Vec<usize>>>>,
}

pub fn build_preprojective(t: DynkinType) -> Preprojective {
    build_preprojective_over(t, Field::Rational)
}

pub fn build_preprojective_over(t: DynkinType, field: Field) -> Preprojective {
    let sig = Signature::preprojective(t);
    let mut projectives = Vec::new();
    let mut words = Vec::new();
    for i in 0..sig.vertices {
        let (p, w) = build_projective_layers(&sig, field, i);
        projectives.push(p);
        words.push(w);
    }
    Preprojective { dynkin: t, sig, projectives, words }
}

struct Layer {
    elems: Vec<(usize, Vec<usize>)>,
    /// `(arrow, element of previous layer)` → coordinates in this layer
    action: HashMap<(usize, usize), Vec<Scalar>>,
}

fn build_projective_layers(sig: &Signature, field: Field, i: usize) -> (Module, Vec<Vec<Vec<usize>>>) {
    let half = sig.half();
    let mut layers: Vec<Layer> = vec![Layer { elems: vec![(i, Vec::new())], action: HashMap::new() }];
    loop {
        let cur = layers.last().unwrap();
        let mut cands: Vec<(usize, usize)> = Vec::new();
        for (u, (v, _)) in cur.elems.iter().enumerate() {
            for (a, &(s, _)) in sig.arrows.iter().enumerate() {
                if s == *v {
                    cands.push((a, u));
                }
            }
        }
        if cands.is_empty() {
            break;
        }
        let cand_index: HashMap<(usize, usize), usize> = cands.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let mut rels: Vec<Vec<Scalar>> = Vec::new();
        if layers.len() >= 2 {
            let prev = &layers[layers.len() - 2];
            for (w, (v, _)) in prev.elems.iter().enumerate() {
                let mut rel = vec![field.zero(); cands.len()];
                for a in 0..half {
                    let (s, t) = sig.arrows[a];
                    // +α*α at the source of α, −αα* at its target
                    let terms: Vec<(usize, usize, i64)> = [(s, a, sig.star(a), 1), (t, sig.star(a), a, -1)]
                        .iter()
                        .filter(|&&(at, _, _, _)| at == *v)
                        .map(|&(_, first, second, sign)| (first, second, sign))
                        .collect();
                    for (first, second, sign) in terms {
                        let mid = &cur.action[&(first, w)];
                        for (u, c) in mid.iter().enumerate() {
                            if c.is_zero() {
                                continue;
                            }
                            let k = cand_index[&(second, u)];
                            let add = c * &field.from_i64(sign);
                            rel[k] = &rel[k] + &add;
                        }
                    }
                }
                if rel.iter().any(|c| !c.is_zero()) {
                    rels.push(rel);
                }
            }
        }
        // reversed columns so that the earliest candidates survive as basis words
        let n = cands.len();
        let rmat = Matrix::from_fn(field, rels.len(), n, |r, c| rels[r][n - 1 - c].clone());
        let rref = rmat.rref();
        let mut dependent = vec![None; n];
        for (row, &p) in rref.pivots.iter().enumerate() {
            dependent[n - 1 - p] = Some(row);
        }
        let free: Vec<usize> = (0..n).filter(|&k| dependent[k].is_none()).collect();
        if free.is_empty() {
            break;
        }
        let mut basis_pos = vec![usize::MAX; n];
        for (b, &k) in free.iter().enumerate() {
            basis_pos[k] = b;
        }
        let mut action = HashMap::new();
        for (k, &(a, u)) in cands.iter().enumerate() {
            let mut v = vec![field.zero(); free.len()];
            match dependent[k] {
                None => v[basis_pos[k]] = field.one(),
                Some(row) => {
                    for &f in &free {
                        let c = rref.reduced.get(row, n - 1 - f);
                        if !c.is_zero() {
                            v[basis_pos[f]] = -c;
                        }
                    }
                }
            }
            action.insert((a, u), v);
        }
        let elems = free
            .iter()
            .map(|&k| {
                let (a, u) = cands[k];
                let mut w = cur.elems[u].1.clone();
                w.push(a);
                (sig.arrows[a].1, w)
            })
            .collect();
        layers.push(Layer { elems, action });
    }
    // assemble the representation
    let m = sig.vertices;
    let mut dims = vec![0usize; m];
    let mut pos: Vec<Vec<usize>> = Vec::new();
    let mut words = vec![Vec::new(); m];
    for layer in &layers {
        let mut p = Vec::new();
        for (v, w) in &layer.elems {
            p.push(dims[*v]);
            dims[*v] += 1;
            words[*v].push(w.clone());
        }
        pos.push(p);
    }
    let mut maps: Vec<Matrix> = sig.arrows.iter().map(|&(s, t)| Matrix::zeros(field, dims[t], dims[s])).collect();
    for l in 1..layers.len() {
        for (&(a, u), v) in &layers[l].action {
            for (b, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    maps[a].set(pos[l][b], pos[l - 1][u], c.clone());
                }
            }
        }
    }
    let module = Module::new(field, Arc::new(sig.clone()), dims, maps).expect("layers produce consistent shapes");
    (module, words)
}

impl Preprojective {
    pub fn dim(&self) -> usize {
        self.projectives.iter().map(Module::total_dim).sum()
    }

    pub fn projective(&self, i: usize) -> Module {
        self.projectives[i].clone().with_signature(self.sig.clone())
    }

    pub fn word_label(&self, i: usize, word: &[usize]) -> String {
        if word.is_empty() {
            format!("e{}", i + 1)
        } else {
            word.iter().rev().map(|&a| self.sig.labels[a].clone()).collect::<Vec<_>>().join(" ")
        }
    }

    /// Λ as a structure-constant algebra. Basis: the words of `P_1`, then of
    /// `P_2`, …; generators: the arrows of the double quiver.
    pub fn algebra(&self) -> FinDimAlgebra {
        let field = self.projectives[0].field();
        let m = self.sig.vertices;
        let mut labels = Vec::new();
        let mut ends = Vec::new();
        let mut index: HashMap<(usize, usize, usize), usize> = HashMap::new();
        let mut idempotents = vec![0; m];
        for i in 0..m {
            for w in 0..m {
                for (k, word) in self.words[i][w].iter().enumerate() {
                    index.insert((i, w, k), labels.len());
                    if word.is_empty() {
                        idempotents[i] = labels.len();
                    }
                    labels.push(self.word_label(i, word));
                    ends.push((i, w));
                }
            }
        }
        let mut table = HashMap::new();
        for v in 0..m {
            for tw in 0..m {
                for (kx, xword) in self.words[v][tw].iter().enumerate() {
                    let x = index[&(v, tw, kx)];
                    for i in 0..m {
                        let p = &self.projectives[i];
                        for ky in 0..self.words[i][v].len() {
                            let y = index[&(i, v, ky)];
                            // apply the arrows of x to the basis vector y of P_i
                            let mut vec = Matrix::zeros(field, p.dims()[v], 1);
                            vec.set(ky, 0, field.one());
                            for &a in xword {
                                vec = p.map(a) * &vec;
                            }
                            let prod: SparseVec = (0..vec.rows())
                                .filter(|&r| !vec.get(r, 0).is_zero())
                                .map(|r| (index[&(i, tw, r)], vec.get(r, 0).clone()))
                                .collect();
                            if !prod.is_empty() {
                                table.insert((x, y), prod);
                            }
                        }
                    }
                }
            }
        }
        let generators = (0..self.sig.arrows.len())
            .map(|a| {
                let (s, t) = self.sig.arrows[a];
                let k = self.words[s][t].iter().position(|w| w == &vec![a]).expect("arrows are basis words");
                vec![(index[&(s, t, k)], field.one())]
            })
            .collect();
        let alg = FinDimAlgebra::new(
            field,
            self.sig.vertex_labels.clone(),
            labels,
            ends,
            idempotents,
            table,
            Some(generators),
        )
        .expect("preprojective algebra is well formed");
        let mut alg = alg;
        debug_assert_eq!(alg.sig.arrows, self.sig.arrows);
        alg.sig = self.sig.clone();
        alg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_projectives() {
        let l = build_preprojective(DynkinType::a(2));
        assert_eq!(l.dim(), 4);
        assert_eq!(l.projectives[0].dims(), &[1, 1]);
        assert_eq!(l.projectives[1].dims(), &[1, 1]);
        assert_eq!(l.projectives[0].socle_profile(), "1 / 2");
        assert_eq!(l.projectives[1].socle_profile(), "2 / 1");
    }

    #[test]
    fn a3_middle_projective() {
        let l = build_preprojective(DynkinType::a(3));
        assert_eq!(l.projectives[1].dims(), &[1, 2, 1]);
        assert_eq!(l.projectives[1].socle_profile(), "2 / 1 3 / 2");
        assert_eq!(l.dim(), 10);
    }

    #[test]
    fn a2_algebra_structure() {
        let a = build_preprojective(DynkinType::a(2)).algebra();
        assert!(a.is_associative());
        assert!(a.idempotents_are_complete());
        assert_eq!(a.radical().unwrap().cols(), 2);
        assert_eq!(a.global_dimension(4).unwrap(), Dimension::AtLeast(5));
    }

    #[test]
    fn semisimple_radical() {
        let a = FinDimAlgebra::semisimple(Field::Rational, 2);
        assert_eq!(a.radical().unwrap().cols(), 0);
        assert_eq!(a.global_dimension(3).unwrap(), Dimension::Finite(0));
    }
}
