//! Finite-dimensional modules presented as quiver representations.
//!
//! A [`Signature`] lists vertices and generating arrows. The same machinery
//! serves Λ-modules (signature = double quiver) and modules over the
//! endomorphism algebra of a rigid module (signature = arrows of its quiver).
//! Because the arrows generate the algebra together with the vertex
//! idempotents, module homomorphisms are exactly the vertex-wise linear maps
//! that intertwine every arrow.

use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{column_space, complement_units, Field, Matrix, Scalar, SubspaceBasis};
use crate::quiver::{build_quiver, double_quiver, DynkinType};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub vertices: usize,
    /// `(source, target)` per arrow.
    pub arrows: Vec<(usize, usize)>,
    pub labels: Vec<String>,
    pub vertex_labels: Vec<String>,
    /// Set when the signature is the double quiver of a Dynkin quiver.
    pub dynkin: Option<DynkinType>,
}

impl Signature {
    pub fn preprojective(t: DynkinType) -> Arc<Signature> {
        let q = double_quiver(&build_quiver(t));
        Arc::new(Signature {
            vertices: q.vertices(),
            arrows: q.arrows().iter().map(|a| (a.src, a.tgt)).collect(),
            labels: q.arrows().iter().map(|a| a.id.clone()).collect(),
            vertex_labels: (1..=q.vertices()).map(|v| v.to_string()).collect(),
            dynkin: Some(t),
        })
    }

    pub fn new(vertices: usize, arrows: Vec<(usize, usize)>, labels: Vec<String>, vertex_labels: Vec<String>) -> Arc<Signature> {
        assert_eq!(arrows.len(), labels.len());
        assert_eq!(vertex_labels.len(), vertices);
        Arc::new(Signature { vertices, arrows, labels, vertex_labels, dynkin: None })
    }

    /// All arrows reversed.
    pub fn opposite(&self) -> Signature {
        Signature {
            vertices: self.vertices,
            arrows: self.arrows.iter().map(|&(s, t)| (t, s)).collect(),
            labels: self.labels.clone(),
            vertex_labels: self.vertex_labels.clone(),
            dynkin: None,
        }
    }

    /// For a double quiver: index of `α*` given `α` and vice versa.
    pub fn star(&self, a: usize) -> usize {
        let m = self.arrows.len() / 2;
        if a < m {
            a + m
        } else {
            a - m
        }
    }

    /// Number of arrows of the underlying single quiver.
    pub fn half(&self) -> usize {
        self.arrows.len() / 2
    }
}

#[derive(Clone, Debug)]
pub struct Module {
    field: Field,
    sig: Arc<Signature>,
    dims: Vec<usize>,
    maps: Vec<Matrix>,
}

impl PartialEq for Module {
    fn eq(&self, other: &Module) -> bool {
        self.field == other.field && *self.sig == *other.sig && self.dims == other.dims && self.maps == other.maps
    }
}

impl Eq for Module {}

impl Module {
    pub fn new(field: Field, sig: Arc<Signature>, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Module> {
        if dims.len() != sig.vertices {
            return Err(Error::Shape(format!("{} vertex dimensions for {} vertices", dims.len(), sig.vertices)));
        }
        if maps.len() != sig.arrows.len() {
            return Err(Error::Shape(format!("{} matrices for {} arrows", maps.len(), sig.arrows.len())));
        }
        for (a, (&(s, t), m)) in sig.arrows.iter().zip(&maps).enumerate() {
            if m.rows() != dims[t] || m.cols() != dims[s] {
                return Err(Error::Shape(format!(
                    "arrow {} needs a {}x{} matrix, got {}x{}",
                    sig.labels[a],
                    dims[t],
                    dims[s],
                    m.rows(),
                    m.cols()
                )));
            }
            if m.field() != field {
                return Err(Error::Shape(format!("arrow {} is over {}", sig.labels[a], m.field())));
            }
        }
        Ok(Module { field, sig, dims, maps })
    }

    pub fn zero(field: Field, sig: Arc<Signature>) -> Module {
        let dims = vec![0; sig.vertices];
        Module::with_dims_zero_maps(field, sig, dims)
    }

    pub fn simple(field: Field, sig: Arc<Signature>, v: usize) -> Module {
        let mut dims = vec![0; sig.vertices];
        dims[v] = 1;
        Module::with_dims_zero_maps(field, sig, dims)
    }

    /// Semisimple module with the given dimension vector.
    pub fn with_dims_zero_maps(field: Field, sig: Arc<Signature>, dims: Vec<usize>) -> Module {
        let maps = sig.arrows.iter().map(|&(s, t)| Matrix::zeros(field, dims[t], dims[s])).collect();
        Module { field, sig, dims, maps }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn sig(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn map(&self, a: usize) -> &Matrix {
        &self.maps[a]
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn same_signature(&self, other: &Module) -> bool {
        Arc::ptr_eq(&self.sig, &other.sig) || *self.sig == *other.sig
    }

    fn check_same(&self, other: &Module) -> Result<()> {
        if self.same_signature(other) && self.field == other.field {
            Ok(())
        } else {
            Err(Error::SignatureMismatch)
        }
    }

    pub fn direct_sum(&self, other: &Module) -> Module {
        Module::direct_sum_all(self.field, self.sig.clone(), &[self, other])
    }

    pub fn direct_sum_all(field: Field, sig: Arc<Signature>, parts: &[&Module]) -> Module {
        let dims: Vec<usize> = (0..sig.vertices).map(|v| parts.iter().map(|p| p.dims[v]).sum()).collect();
        let maps = (0..sig.arrows.len())
            .map(|a| {
                let blocks: Vec<Matrix> = parts.iter().map(|p| p.maps[a].clone()).collect();
                Matrix::block_diag(field, &blocks)
            })
            .collect();
        Module { field, sig, dims, maps }
    }

    pub fn power(&self, k: usize) -> Module {
        let parts: Vec<&Module> = std::iter::repeat(self).take(k).collect();
        Module::direct_sum_all(self.field, self.sig.clone(), &parts)
    }

    /// Same vector spaces, new bases: `P_v` are invertible base-change matrices
    /// and the new maps are `P_t⁻¹ f_α P_s`.
    pub fn conjugate(&self, p: &[Matrix]) -> Result<Module> {
        let inv: Vec<Matrix> = p.iter().map(|m| m.inverse()).collect::<std::result::Result<_, _>>()?;
        let maps = self
            .sig
            .arrows
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| &(&inv[t] * &self.maps[a]) * &p[s])
            .collect();
        Module::new(self.field, self.sig.clone(), self.dims.clone(), maps)
    }

    /// The module over the opposite signature given by transposed maps.
    pub fn dual_opposite(&self) -> Module {
        let sig = Arc::new(self.sig.opposite());
        Module { field: self.field, sig, dims: self.dims.clone(), maps: self.maps.iter().map(Matrix::transpose).collect() }
    }

    /// Reinterprets a module over a signature equal in value to `sig`.
    pub fn with_signature(mut self, sig: Arc<Signature>) -> Module {
        assert_eq!(*self.sig, *sig);
        self.sig = sig;
        self
    }

    /// Restriction to an invariant subspace; `bases[v]` has independent columns.
    pub fn submodule(&self, bases: &[Matrix]) -> Module {
        let coords: Vec<SubspaceBasis> = bases.iter().map(|b| SubspaceBasis::new(b.clone())).collect();
        let dims: Vec<usize> = bases.iter().map(|b| b.cols()).collect();
        let maps = self
            .sig
            .arrows
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| {
                let img = &self.maps[a] * &bases[s];
                debug_assert!(coords[t].contains(&img), "subspace is not invariant");
                coords[t].coords(&img)
            })
            .collect();
        Module { field: self.field, sig: self.sig.clone(), dims, maps }
    }

    /// Quotient by an invariant subspace. The complement basis consists of unit
    /// vectors picked in ascending order; also returns the projection matrices.
    pub fn quotient(&self, bases: &[Matrix]) -> (Module, Vec<Matrix>) {
        let mut projs = Vec::with_capacity(self.sig.vertices);
        let mut units = Vec::with_capacity(self.sig.vertices);
        for (v, b) in bases.iter().enumerate() {
            let n = self.dims[v];
            let comp = complement_units(self.field, n, b);
            let full = b.hstack(&Matrix::identity(self.field, n).select_cols(&comp));
            let inv = full.inverse().expect("complement completes a basis");
            let proj = inv.submatrix(b.cols(), 0, comp.len(), n);
            projs.push(proj);
            units.push(comp);
        }
        let dims: Vec<usize> = units.iter().map(|u| u.len()).collect();
        let maps = self
            .sig
            .arrows
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| {
                let lift = Matrix::identity(self.field, self.dims[s]).select_cols(&units[s]);
                &projs[t] * &(&self.maps[a] * &lift)
            })
            .collect();
        (Module { field: self.field, sig: self.sig.clone(), dims, maps }, projs)
    }

    /// Per-vertex basis of the socle: vectors killed by every arrow.
    pub fn socle(&self) -> Vec<Matrix> {
        (0..self.sig.vertices)
            .map(|v| {
                let outgoing: Vec<usize> = (0..self.sig.arrows.len()).filter(|&a| self.sig.arrows[a].0 == v).collect();
                if outgoing.is_empty() {
                    return Matrix::identity(self.field, self.dims[v]);
                }
                let mut stacked = self.maps[outgoing[0]].clone();
                for &a in &outgoing[1..] {
                    stacked = stacked.vstack(&self.maps[a]);
                }
                stacked.kernel()
            })
            .collect()
    }

    /// Per-vertex basis of the radical: the sum of all arrow images.
    pub fn radical(&self) -> Vec<Matrix> {
        (0..self.sig.vertices)
            .map(|v| {
                let mut acc = Matrix::zeros(self.field, self.dims[v], 0);
                for (a, &(_, t)) in self.sig.arrows.iter().enumerate() {
                    if t == v {
                        acc = acc.hstack(&self.maps[a]);
                    }
                }
                column_space(&acc)
            })
            .collect()
    }

    pub fn top_dims(&self) -> Vec<usize> {
        self.radical().iter().zip(&self.dims).map(|(r, d)| d - r.cols()).collect()
    }

    /// Dimension vectors of the socle series, socle first.
    pub fn socle_layers(&self) -> Vec<Vec<usize>> {
        let mut layers = Vec::new();
        let mut cur = self.clone();
        while !cur.is_zero() {
            let soc = cur.socle();
            layers.push(soc.iter().map(Matrix::cols).collect());
            cur = cur.quotient(&soc).0;
        }
        layers
    }

    /// Socle series written from the top layer down, e.g. `"2 / 1 3 / 2"`.
    pub fn socle_profile(&self) -> String {
        let layers = self.socle_layers();
        let parts: Vec<String> = layers
            .iter()
            .rev()
            .map(|layer| {
                let mut names = Vec::new();
                for (v, &m) in layer.iter().enumerate() {
                    for _ in 0..m {
                        names.push(self.sig.vertex_labels[v].clone());
                    }
                }
                names.join(" ")
            })
            .collect();
        parts.join(" / ")
    }

    /// Direct-sum-of-vertex-spaces matrix of a morphism component list.
    pub fn identity(&self) -> Morphism {
        Morphism { comps: self.dims.iter().map(|&d| Matrix::identity(self.field, d)).collect() }
    }
}

/// A family of vertex-wise linear maps `g_v : X_v → Y_v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub comps: Vec<Matrix>,
}

impl Morphism {
    pub fn zero(field: Field, from: &[usize], to: &[usize]) -> Morphism {
        Morphism { comps: from.iter().zip(to).map(|(&f, &t)| Matrix::zeros(field, t, f)).collect() }
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Morphism) -> Morphism {
        Morphism { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a * b).collect() }
    }

    pub fn add(&self, other: &Morphism) -> Morphism {
        Morphism { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> Morphism {
        Morphism { comps: self.comps.iter().map(|m| m.scale(s)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Matrix::is_zero)
    }

    pub fn is_iso(&self) -> bool {
        self.comps.iter().all(|m| m.is_square() && m.rank() == m.rows())
    }

    pub fn is_injective(&self) -> bool {
        self.comps.iter().all(|m| m.rank() == m.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.comps.iter().all(|m| m.rank() == m.rows())
    }

    pub fn trace(&self, field: Field) -> Scalar {
        self.comps.iter().fold(field.zero(), |acc, m| &acc + &m.trace())
    }

    pub fn rank(&self) -> usize {
        self.comps.iter().map(Matrix::rank).sum()
    }

    /// All entries, vertex by vertex, row-major.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.comps.iter().flat_map(|m| m.entries().iter().cloned()).collect()
    }

    pub fn from_flat(field: Field, from: &[usize], to: &[usize], flat: &[Scalar]) -> Morphism {
        let mut pos = 0;
        let comps = from
            .iter()
            .zip(to)
            .map(|(&f, &t)| {
                let m = Matrix::from_scalars(field, t, f, flat[pos..pos + t * f].to_vec()).unwrap();
                pos += t * f;
                m
            })
            .collect();
        Morphism { comps }
    }

    /// `X → Y_1 ⊕ … ⊕ Y_k` from its components.
    pub fn stack_targets(field: Field, parts: &[&Morphism], from: &[usize]) -> Morphism {
        let comps = (0..from.len())
            .map(|v| {
                let mut acc = Matrix::zeros(field, 0, from[v]);
                for p in parts {
                    acc = acc.vstack(&p.comps[v]);
                }
                acc
            })
            .collect();
        Morphism { comps }
    }

    /// `X_1 ⊕ … ⊕ X_k → Y` from its components.
    pub fn stack_sources(field: Field, parts: &[&Morphism], to: &[usize]) -> Morphism {
        let comps = (0..to.len())
            .map(|v| {
                let mut acc = Matrix::zeros(field, to[v], 0);
                for p in parts {
                    acc = acc.hstack(&p.comps[v]);
                }
                acc
            })
            .collect();
        Morphism { comps }
    }

    pub fn kernel_bases(&self) -> Vec<Matrix> {
        self.comps.iter().map(Matrix::kernel).collect()
    }

    pub fn image_bases(&self) -> Vec<Matrix> {
        self.comps.iter().map(column_space).collect()
    }

    /// Intertwining check against the given modules.
    pub fn is_homomorphism(&self, x: &Module, y: &Module) -> bool {
        x.sig.arrows.iter().enumerate().all(|(a, &(s, t))| &self.comps[t] * x.map(a) == &y.maps[a] * &self.comps[s])
    }
}

/// A basis of `Hom(X, Y)` with an exact coordinate map.
#[derive(Debug)]
pub struct HomSpace {
    field: Field,
    pub from: Vec<usize>,
    pub to: Vec<usize>,
    pub basis: Vec<Morphism>,
    coords: OnceLock<Option<SubspaceBasis>>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a homomorphism in this basis.
    pub fn coords(&self, g: &Morphism) -> Vec<Scalar> {
        if self.basis.is_empty() {
            return Vec::new();
        }
        let sb = self
            .coords
            .get_or_init(|| {
                let cols: Vec<Vec<Scalar>> = self.basis.iter().map(Morphism::flatten).collect();
                let n = cols[0].len();
                let m = Matrix::from_fn(self.field, n, cols.len(), |i, j| cols[j][i].clone());
                Some(SubspaceBasis::new(m))
            })
            .as_ref()
            .unwrap();
        let v = Matrix::column(self.field, g.flatten());
        sb.coords(&v).col_vec(0)
    }

    pub fn combine(&self, coeffs: &[Scalar]) -> Morphism {
        let mut acc = Morphism::zero(self.field, &self.from, &self.to);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                acc = acc.add(&b.scale(c));
            }
        }
        acc
    }
}

/// Solves the intertwiner system `g_t X_α = Y_α g_s` for all arrows.
pub fn hom_space(x: &Module, y: &Module) -> Result<HomSpace> {
    x.check_same(y)?;
    let field = x.field;
    let sig = &x.sig;
    let mut offs = Vec::with_capacity(sig.vertices);
    let mut n = 0;
    for v in 0..sig.vertices {
        offs.push(n);
        n += x.dims[v] * y.dims[v];
    }
    let var = |v: usize, r: usize, c: usize| offs[v] + r * x.dims[v] + c;
    let mut rows: Vec<Vec<(usize, Scalar)>> = Vec::new();
    for (a, &(s, t)) in sig.arrows.iter().enumerate() {
        let xa = &x.maps[a];
        let ya = &y.maps[a];
        for i in 0..y.dims[t] {
            for j in 0..x.dims[s] {
                let mut row: Vec<(usize, Scalar)> = Vec::new();
                for k in 0..x.dims[t] {
                    let c = xa.get(k, j);
                    if !c.is_zero() {
                        row.push((var(t, i, k), c.clone()));
                    }
                }
                for k in 0..y.dims[s] {
                    let c = ya.get(i, k);
                    if !c.is_zero() {
                        row.push((var(s, k, j), -c));
                    }
                }
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    let mut m = Matrix::zeros(field, rows.len(), n);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, c) in row {
            let cur = m.get(i, j).clone();
            m.set(i, j, &cur + &c);
        }
    }
    let k = m.kernel();
    let basis = (0..k.cols()).map(|j| Morphism::from_flat(field, &x.dims, &y.dims, &k.col_vec(j))).collect();
    Ok(HomSpace { field, from: x.dims.clone(), to: y.dims.clone(), basis, coords: OnceLock::new() })
}

pub fn hom_dim(x: &Module, y: &Module) -> Result<usize> {
    Ok(hom_space(x, y)?.dim())
}

fn random_coeffs(field: Field, rng: &mut ChaCha8Rng, k: usize) -> Vec<Scalar> {
    (0..k).map(|_| field.from_i64(rng.gen_range(-(1i64 << 20)..=(1i64 << 20)))).collect()
}

/// An invertible intertwiner `X → Y` if one exists.
///
/// Random combinations of a Hom basis are tried first; if all fail, a
/// deterministic sweep over small coefficients follows.
pub fn find_isomorphism(x: &Module, y: &Module, seed: u64) -> Result<Option<Morphism>> {
    x.check_same(y)?;
    if x.dims != y.dims {
        return Ok(None);
    }
    let h = hom_space(x, y)?;
    if x.is_zero() {
        return Ok(Some(x.identity()));
    }
    if h.dim() == 0 {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..4 {
        let g = h.combine(&random_coeffs(x.field, &mut rng, h.dim()));
        if g.is_iso() {
            return Ok(Some(g));
        }
    }
    let k = h.dim();
    let limit = 3usize.saturating_pow(k as u32).min(729);
    for t in 0..limit {
        let mut digits = t;
        let coeffs: Vec<Scalar> = (0..k)
            .map(|_| {
                let d = digits % 3;
                digits /= 3;
                x.field.from_i64(d as i64 + 1)
            })
            .collect();
        let g = h.combine(&coeffs);
        if g.is_iso() {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

pub fn is_isomorphic(x: &Module, y: &Module) -> Result<bool> {
    Ok(find_isomorphism(x, y, 0x5eed)?.is_some())
}

/// `dim End(M)/rad End(M)`, via the rank of the trace form of End(M) on M.
pub fn top_of_endomorphisms(m: &Module) -> Result<usize> {
    let end = hom_space(m, m)?;
    Ok(trace_gram(m.field, &end.basis).rank())
}

fn trace_gram(field: Field, basis: &[Morphism]) -> Matrix {
    Matrix::from_fn(field, basis.len(), basis.len(), |i, j| basis[i].compose(&basis[j]).trace(field))
}

/// True when End(M) is local with one-dimensional top.
pub fn is_certified_indecomposable(m: &Module) -> Result<bool> {
    Ok(!m.is_zero() && top_of_endomorphisms(m)? == 1)
}

/// Krull–Schmidt decomposition by Fitting splittings; leaves grouped by
/// isomorphism class in order of first appearance.
pub fn decompose(m: &Module, seed: u64) -> Result<Vec<(Module, usize)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut leaves = Vec::new();
    split_into(m, &mut rng, &mut leaves)?;
    let mut groups: Vec<(Module, usize)> = Vec::new();
    'leaf: for leaf in leaves {
        for (rep, mult) in groups.iter_mut() {
            if find_isomorphism(rep, &leaf, seed)?.is_some() {
                *mult += 1;
                continue 'leaf;
            }
        }
        groups.push((leaf, 1));
    }
    Ok(groups)
}

fn split_into(m: &Module, rng: &mut ChaCha8Rng, out: &mut Vec<Module>) -> Result<()> {
    if m.is_zero() {
        return Ok(());
    }
    let end = hom_space(m, m)?;
    let top = trace_gram(m.field, &end.basis).rank();
    if top == 1 {
        out.push(m.clone());
        return Ok(());
    }
    match fitting_split(m, &end, rng) {
        Some((k, i)) => {
            split_into(&m.submodule(&k), rng, out)?;
            split_into(&m.submodule(&i), rng, out)
        }
        None => Err(Error::NonSplit(top)),
    }
}

fn fitting_split(m: &Module, end: &HomSpace, rng: &mut ChaCha8Rng) -> Option<(Vec<Matrix>, Vec<Matrix>)> {
    let field = m.field;
    let mut candidates: Vec<Morphism> = end.basis.clone();
    candidates.push(end.combine(&random_coeffs(field, rng, end.dim())));
    let b = &end.basis;
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            candidates.push(b[i].add(&b[j]));
            candidates.push(b[i].compose(&b[j]));
        }
    }
    for cand in candidates {
        let mut eigen: Vec<Scalar> = Vec::new();
        for c in &cand.comps {
            if c.rows() == 0 {
                continue;
            }
            for e in c.rational_eigenvalues() {
                if !eigen.contains(&e) {
                    eigen.push(e);
                }
            }
        }
        for lambda in eigen {
            let psi = cand.add(&m.identity().scale(&-&lambda));
            let powered: Vec<Matrix> =
                psi.comps.iter().zip(&m.dims).map(|(c, &d)| c.pow(d.max(1) as u32)).collect();
            let k: Vec<Matrix> = powered.iter().map(Matrix::kernel).collect();
            let kd: usize = k.iter().map(Matrix::cols).sum();
            if kd > 0 && kd < m.total_dim() {
                let i: Vec<Matrix> = powered.iter().map(column_space).collect();
                return Some((k, i));
            }
        }
    }
    None
}
