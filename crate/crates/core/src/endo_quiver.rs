//! The endomorphism algebra `E = End_Λ(T)` of a basic rigid module, its
//! quiver Γ_T, the exchange matrices and the functor `F_T = Hom_Λ(−, T)`.
//!
//! Summand order is always explicit. For complete rigid modules the
//! non-projective summands come first, as in the exchange-matrix
//! conventions; [`crate::approximation::canonical_order`] produces such an
//! order.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algebra::{FinDimAlgebra, SparseVec};
use crate::approximation::ext_defect;
use crate::catalog::{Catalog, CatalogId, ModuleSum};
use crate::error::{Error, Result};
use crate::intmat::{self, IntMatrix};
use crate::linalg::{Field, Matrix, Scalar};
use crate::module::Module;

fn unit(n: usize, k: usize) -> Vec<Scalar> {
    (0..n).map(|i| if i == k { Field::Rational.one() } else { Field::Rational.zero() }).collect()
}

fn check_basic(cat: &Catalog, order: &[CatalogId]) -> Result<()> {
    for &i in order {
        if i >= cat.len() {
            return Err(Error::OutOfRange(i, cat.len()));
        }
    }
    if ModuleSum::from_ids(order).distinct() != order.len() {
        return Err(Error::NotBasic);
    }
    Ok(())
}

/// Spanning set of `rad²(T_i, T_j)` relative to add(T), as coordinates in
/// the catalog basis of `Hom(T_i, T_j)`.
fn rad_squared(cat: &Catalog, order: &[CatalogId], a: CatalogId, b: CatalogId) -> Vec<Vec<Scalar>> {
    let mut out = Vec::new();
    for &k in order {
        let left = cat.radical_coords(a, k);
        if left.is_empty() {
            continue;
        }
        let right = cat.radical_coords(k, b);
        for g in &left {
            for h in &right {
                let v = cat.compose_coords(a, k, b, g, h);
                if v.iter().any(|x| !x.is_zero()) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// Irreducible maps `T_a → T_b`: vectors of `rad(T_a, T_b)` completing a
/// basis of `rad²(T_a, T_b)`.
fn irreducible_maps(cat: &Catalog, order: &[CatalogId], a: CatalogId, b: CatalogId) -> Vec<Vec<Scalar>> {
    let rad = cat.radical_coords(a, b);
    if rad.is_empty() {
        return Vec::new();
    }
    let sq = rad_squared(cat, order, a, b);
    let n = cat.hom_dim(a, b);
    let all: Vec<&Vec<Scalar>> = sq.iter().chain(rad.iter()).collect();
    let m = Matrix::from_fn(Field::Rational, n, all.len(), |i, j| all[j][i].clone());
    m.rref().pivots.into_iter().filter(|&p| p >= sq.len()).map(|p| all[p].clone()).collect()
}

/// `arrows[i][j]` = number of arrows `T_i → T_j` in Γ_T, positions as in `order`.
pub fn gamma_quiver(cat: &Catalog, order: &[CatalogId]) -> Result<Vec<Vec<usize>>> {
    check_basic(cat, order)?;
    Ok(order.iter().map(|&a| order.iter().map(|&b| irreducible_maps(cat, order, a, b).len()).collect()).collect())
}

/// `E = End_Λ(T)` as a finite-dimensional algebra whose vertices are the
/// positions of `order`. The element of `Hom(T_i, T_j)` has ends `(i, j)`
/// and the product is composition, so `E`-modules are covariant
/// representations of Γ_T.
pub struct EndoAlgebra {
    pub order: Vec<CatalogId>,
    pub alg: FinDimAlgebra,
    /// Per block `(i, j)`: first global basis index and the basis as
    /// catalog coordinates.
    blocks: HashMap<(usize, usize), (usize, Vec<Vec<Scalar>>)>,
    /// For each generator: its block and catalog coordinates.
    gens: Vec<((usize, usize), Vec<Scalar>)>,
}

impl EndoAlgebra {
    pub fn new(cat: &Catalog, order: &[CatalogId]) -> Result<EndoAlgebra> {
        check_basic(cat, order)?;
        let r = order.len();
        let f = Field::Rational;
        let mut blocks = HashMap::new();
        let mut labels = Vec::new();
        let mut ends = Vec::new();
        let mut idempotents = vec![0; r];
        for i in 0..r {
            for j in 0..r {
                let (a, b) = (order[i], order[j]);
                let n = cat.hom_dim(a, b);
                let basis: Vec<Vec<Scalar>> = if i == j {
                    let mut v = vec![cat.identity_coords(a)];
                    v.extend(cat.radical_coords(a, a));
                    v
                } else {
                    (0..n).map(|k| unit(n, k)).collect()
                };
                if i == j {
                    idempotents[i] = labels.len();
                }
                let start = labels.len();
                for k in 0..basis.len() {
                    labels.push(if i == j && k == 0 { format!("e{}", i + 1) } else { format!("h{}_{}.{}", i + 1, j + 1, k + 1) });
                    ends.push((i, j));
                }
                blocks.insert((i, j), (start, basis));
            }
        }
        // Change of basis back from catalog coordinates, per block.
        let mut inverses: HashMap<(usize, usize), Matrix> = HashMap::new();
        for (&key, (_, basis)) in &blocks {
            if key.0 == key.1 && !basis.is_empty() {
                let n = basis.len();
                let m = Matrix::from_fn(f, n, n, |p, q| basis[q][p].clone());
                inverses.insert(key, m.inverse()?);
            }
        }
        let to_block = |key: (usize, usize), coords: Vec<Scalar>| -> Vec<Scalar> {
            match inverses.get(&key) {
                Some(inv) => (inv * &Matrix::column(f, coords)).col_vec(0),
                None => coords,
            }
        };
        let mut table: HashMap<(usize, usize), SparseVec> = HashMap::new();
        for k in 0..r {
            for i in 0..r {
                for j in 0..r {
                    // x ∈ Hom(T_i, T_j), y ∈ Hom(T_k, T_i), x·y = x ∘ y ∈ Hom(T_k, T_j)
                    let (xs, xb) = &blocks[&(i, j)];
                    let (ys, yb) = &blocks[&(k, i)];
                    let (zs, _) = &blocks[&(k, j)];
                    for (p, x) in xb.iter().enumerate() {
                        for (q, y) in yb.iter().enumerate() {
                            let z = to_block((k, j), cat.compose_coords(order[k], order[i], order[j], y, x));
                            let sparse: SparseVec =
                                z.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(t, c)| (zs + t, c)).collect();
                            if !sparse.is_empty() {
                                table.insert((xs + p, ys + q), sparse);
                            }
                        }
                    }
                }
            }
        }
        let mut gens = Vec::new();
        let mut gen_vecs = Vec::new();
        for i in 0..r {
            for j in 0..r {
                for g in irreducible_maps(cat, order, order[i], order[j]) {
                    let (start, _) = blocks[&(i, j)];
                    let local = to_block((i, j), g.clone());
                    gen_vecs.push(
                        local.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(t, c)| (start + t, c)).collect(),
                    );
                    gens.push(((i, j), g));
                }
            }
        }
        let vertex_labels = (0..r).map(|i| format!("T{}", i + 1)).collect();
        let alg = FinDimAlgebra::new(f, vertex_labels, labels, ends, idempotents, table, Some(gen_vecs))?;
        Ok(EndoAlgebra { order: order.to_vec(), alg, blocks, gens })
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    /// Number of arrows of Γ_T.
    pub fn arrow_count(&self) -> usize {
        self.gens.len()
    }

    /// `F_T(X) = Hom_Λ(X, T)`: vertex `a` carries `Hom(X, T_a)` and an arrow
    /// `h : T_i → T_j` acts by `g ↦ h ∘ g`.
    pub fn ft_module(&self, cat: &Catalog, x: CatalogId) -> Result<Module> {
        let dims: Vec<usize> = self.order.iter().map(|&t| cat.hom_dim(x, t)).collect();
        let maps = self
            .gens
            .iter()
            .map(|((i, j), h)| {
                let (a, b) = (self.order[*i], self.order[*j]);
                let cols: Vec<Vec<Scalar>> =
                    (0..dims[*i]).map(|p| cat.compose_coords(x, a, b, &unit(dims[*i], p), h)).collect();
                Matrix::from_fn(Field::Rational, dims[*j], dims[*i], |row, col| cols[col][row].clone())
            })
            .collect();
        Module::new(Field::Rational, self.alg.sig().clone(), dims, maps)
    }

    /// Dimension of block `(i, j)`, i.e. `dim Hom(T_i, T_j)`.
    pub fn block_dim(&self, i: usize, j: usize) -> usize {
        self.blocks[&(i, j)].1.len()
    }
}

/// Matrices attached to a basic complete rigid module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeData {
    pub order: Vec<CatalogId>,
    /// `r − n`: the first `exchangeable` positions are non-projective.
    pub exchangeable: usize,
    /// `arrows[i][j]`: arrows `T_i → T_j` in Γ_T.
    pub arrows: Vec<Vec<usize>>,
    /// `B(T)`, with `t_ij = #(j → i) − #(i → j)`.
    pub b: IntMatrix,
    /// `B(T)°`: the exchangeable columns of `B(T)`.
    pub b_circ: IntMatrix,
    /// `c_ij = dim Hom(T_j, T_i)`.
    pub cartan: IntMatrix,
    /// `R_T = C_T^{-t}`.
    pub ringel: IntMatrix,
}

pub fn exchange_data(cat: &Catalog, order: &[CatalogId]) -> Result<ExchangeData> {
    check_basic(cat, order)?;
    let r = cat.dynkin().positive_roots();
    if order.len() != r {
        return Err(Error::NotComplete(order.len(), r));
    }
    let defect = ext_defect(cat, order);
    if defect != 0 {
        return Err(Error::NotRigid(defect));
    }
    let ex = order.iter().filter(|&&i| !cat.entry(i).projective).count();
    if order[..ex].iter().any(|&i| cat.entry(i).projective) {
        return Err(Error::Invalid("exchangeable summands must precede the projectives".into()));
    }
    let arrows = gamma_quiver(cat, order)?;
    let b: IntMatrix =
        (0..r).map(|i| (0..r).map(|j| arrows[j][i] as i64 - arrows[i][j] as i64).collect()).collect();
    let cartan: IntMatrix =
        order.iter().map(|&ti| order.iter().map(|&tj| cat.hom_dim(tj, ti) as i64).collect()).collect();
    let ringel = intmat::transpose(&intmat::inverse(&cartan)?);
    Ok(ExchangeData { order: order.to_vec(), exchangeable: ex, b_circ: intmat::left_columns(&b, ex), arrows, b, cartan, ringel })
}

impl ExchangeData {
    pub fn r(&self) -> usize {
        self.order.len()
    }

    /// `R_T°`: the exchangeable columns of `R_T`.
    pub fn ringel_circ(&self) -> IntMatrix {
        intmat::left_columns(&self.ringel, self.exchangeable)
    }

    /// Structural checks on Γ_T and the matrices; returns the violations.
    pub fn violations(&self) -> Vec<String> {
        let r = self.r();
        let mut out = Vec::new();
        for i in 0..r {
            if self.arrows[i][i] != 0 {
                out.push(format!("loop at T{}", i + 1));
            }
            for j in i + 1..r {
                if self.arrows[i][j] > 0 && self.arrows[j][i] > 0 {
                    out.push(format!("2-cycle between T{} and T{}", i + 1, j + 1));
                }
            }
            if (0..r).all(|j| self.arrows[i][j] == 0) {
                out.push(format!("T{} is a sink", i + 1));
            }
            if (0..r).all(|j| self.arrows[j][i] == 0) {
                out.push(format!("T{} is a source", i + 1));
            }
        }
        match intmat::determinant(&self.cartan) {
            Ok(d) if d.abs() == 1 => {}
            Ok(d) => out.push(format!("det C_T = {d}")),
            Err(e) => out.push(e.to_string()),
        }
        if intmat::mul(&self.ringel, &intmat::transpose(&self.cartan)) != intmat::identity(r) {
            out.push("R_T C_T^t is not the identity".into());
        }
        if self.ringel_circ() != self.b_circ {
            out.push("R_T° differs from B(T)°".into());
        }
        out
    }

    pub fn to_dot(&self, cat: &Catalog) -> String {
        let mut s = String::from("digraph gamma {\n");
        for (i, &id) in self.order.iter().enumerate() {
            let shape = if i < self.exchangeable { "ellipse" } else { "box" };
            let _ = writeln!(s, "  T{} [label=\"T{}: {}\", shape={}];", i + 1, i + 1, cat.entry(id).profile, shape);
        }
        for i in 0..self.r() {
            for j in 0..self.r() {
                for _ in 0..self.arrows[i][j] {
                    let _ = writeln!(s, "  T{} -> T{};", i + 1, j + 1);
                }
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }
}

/// `S(B, k)`: identity except row `k`, where
/// `s_kj = −δ_kj + (|b_kj| − b_kj)/2`.
pub fn s_matrix(b: &[Vec<i64>], k: usize) -> Result<IntMatrix> {
    let r = b.len();
    if k >= r || b.iter().any(|row| row.len() != r) {
        return Err(Error::OutOfRange(k + 1, r));
    }
    let mut s = intmat::identity(r);
    for j in 0..r {
        s[k][j] = -i64::from(j == k) + (b[k][j].abs() - b[k][j]) / 2;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approximation::initial_module;
    use crate::quiver::DynkinType;

    #[test]
    fn a2_matrices() {
        let cat = Catalog::enumerate(DynkinType::a(2)).unwrap();
        let t = initial_module(&cat).unwrap();
        let d = exchange_data(&cat, &t).unwrap();
        assert_eq!(d.cartan, vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 1, 1]]);
        assert_eq!(d.ringel, vec![vec![0, 1, -1], vec![-1, 1, 0], vec![1, -1, 1]]);
        assert_eq!(d.b_circ, vec![vec![0], vec![-1], vec![1]]);
        assert_eq!(s_matrix(&d.ringel, 0).unwrap(), vec![vec![-1, 0, 1], vec![0, 1, 0], vec![0, 0, 1]]);
        // T3 → T1 → T4 → T3
        assert_eq!(d.arrows, vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
        assert!(d.violations().is_empty());
    }

    #[test]
    fn s_squared_is_identity() {
        let b = vec![vec![0, 1, -1], vec![-1, 0, 2], vec![1, -2, 0]];
        for k in 0..3 {
            let s = s_matrix(&b, k).unwrap();
            assert_eq!(intmat::mul(&s, &s), intmat::identity(3));
        }
        assert!(s_matrix(&b, 3).is_err());
    }

    #[test]
    fn a2_endo_algebra() {
        let cat = Catalog::enumerate(DynkinType::a(2)).unwrap();
        let t = initial_module(&cat).unwrap();
        let e = EndoAlgebra::new(&cat, &t).unwrap();
        assert!(e.alg.is_associative());
        assert_eq!(e.arrow_count(), 3);
        assert_eq!(e.alg.radical().unwrap().cols(), e.dim() - 3);
        for (pos, &id) in t.iter().enumerate() {
            let m = e.ft_module(&cat, id).unwrap();
            assert!(crate::module::is_isomorphic(&m, e.alg.projective(pos)).unwrap());
        }
    }
}
