//! Λ-modules as representations of the double quiver.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{build_preprojective, FinDimAlgebra, Preprojective};
use crate::error::{Error, Result};
use crate::linalg::{column_space, Field, Matrix, Scalar};
use crate::module::{decompose, hom_dim, hom_space, Module, Signature};
use crate::quiver::{bilinear_form, DynkinType};

/// A module over the preprojective algebra: one matrix per arrow of the
/// double quiver, `f_α` of shape `β_{t(α)} × β_{s(α)}`.
pub type Representation = Module;

/// Λ together with its projectives and structure constants.
#[derive(Debug)]
pub struct Lambda {
    pub dynkin: DynkinType,
    pub pre: Preprojective,
    pub alg: FinDimAlgebra,
}

impl Lambda {
    pub fn new(t: DynkinType) -> Lambda {
        let pre = build_preprojective(t);
        let alg = pre.algebra();
        Lambda { dynkin: t, pre, alg }
    }

    pub fn sig(&self) -> &Arc<Signature> {
        &self.pre.sig
    }

    pub fn field(&self) -> Field {
        Field::Rational
    }

    pub fn vertices(&self) -> usize {
        self.pre.sig.vertices
    }

    pub fn simple(&self, v: usize) -> Representation {
        Module::simple(Field::Rational, self.sig().clone(), v)
    }

    pub fn projective(&self, v: usize) -> Representation {
        self.pre.projective(v)
    }

    /// True when the module is projective: its projective cover is an isomorphism.
    pub fn is_projective(&self, m: &Representation) -> Result<bool> {
        let (verts, _) = self.alg.projective_cover(m)?;
        let cover_dim: usize = verts.iter().map(|&v| self.pre.projectives[v].total_dim()).sum();
        Ok(cover_dim == m.total_dim())
    }

    /// Kernel of the projective cover.
    pub fn syzygy(&self, m: &Representation) -> Result<Representation> {
        Ok(self.alg.syzygy(m)?.0)
    }

    /// Cokernel of the injective hull, computed as `D Ω D`.
    pub fn cosyzygy(&self, m: &Representation) -> Result<Representation> {
        for (part, _) in decompose(m, 3)? {
            if self.is_projective(&part)? {
                return Err(Error::ProjectiveSummand(part.socle_profile()));
            }
        }
        Ok(dual(&self.syzygy(&dual(m))?))
    }

    /// `Ext¹(X, Y)` from a projective presentation of `X`:
    /// `dim Hom(ΩX, Y) − rank(Hom(P_0, Y) → Hom(ΩX, Y))`.
    pub fn ext1_dim_oracle(&self, x: &Representation, y: &Representation) -> Result<usize> {
        let (verts, cover) = self.alg.projective_cover(x)?;
        let parts: Vec<&Module> = verts.iter().map(|&v| self.alg.projective(v)).collect();
        let p0 = Module::direct_sum_all(x.field(), x.sig().clone(), &parts);
        let kb = cover.kernel_bases();
        let omega = p0.submodule(&kb);
        let h_omega = hom_dim(&omega, y)?;
        let h_p = hom_space(&p0, y)?;
        let restricted: Vec<Vec<Scalar>> = h_p
            .basis
            .iter()
            .map(|g| g.comps.iter().zip(&kb).flat_map(|(c, k)| (c * k).into_entries()).collect())
            .collect();
        let rank = if restricted.is_empty() || restricted[0].is_empty() {
            0
        } else {
            Matrix::from_fn(x.field(), restricted.len(), restricted[0].len(), |i, j| restricted[i][j].clone()).rank()
        };
        Ok(h_omega - rank)
    }
}

pub fn simple(t: DynkinType, v: usize) -> Representation {
    Module::simple(Field::Rational, Signature::preprojective(t), v)
}

pub fn dimension_vector(m: &Representation) -> Vec<i64> {
    m.dims().iter().map(|&d| d as i64).collect()
}

/// Per-vertex value of `Σ_{s(α)=i} f_{α*} f_α − Σ_{t(α)=i} f_α f_{α*}`.
#[derive(Clone, Debug)]
pub struct RelationReport {
    pub holds: bool,
    pub defects: Vec<Matrix>,
}

impl RelationReport {
    pub fn defective_vertices(&self) -> Vec<usize> {
        (0..self.defects.len()).filter(|&v| !self.defects[v].is_zero()).collect()
    }
}

pub fn check_relations(m: &Representation) -> Result<RelationReport> {
    let sig = m.sig();
    if sig.dynkin.is_none() {
        return Err(Error::Invalid("not a double-quiver representation".into()));
    }
    let field = m.field();
    let mut defects: Vec<Matrix> = m.dims().iter().map(|&d| Matrix::zeros(field, d, d)).collect();
    for a in 0..sig.half() {
        let (s, t) = sig.arrows[a];
        let st = sig.star(a);
        let loop_s = m.map(st) * m.map(a);
        let loop_t = m.map(a) * m.map(st);
        defects[s] = &defects[s] + &loop_s;
        defects[t] = &defects[t] - &loop_t;
    }
    let holds = defects.iter().all(Matrix::is_zero);
    Ok(RelationReport { holds, defects })
}

/// `D M` with `f'_α = (f_{α*})ᵗ`; again a Λ-module on the same signature.
pub fn dual(m: &Representation) -> Representation {
    let sig = m.sig().clone();
    let maps = (0..sig.arrows.len()).map(|a| m.map(sig.star(a)).transpose()).collect();
    Module::new(m.field(), sig, m.dims().to_vec(), maps).expect("dual keeps shapes")
}

/// `dim Hom(X,Y) + dim Hom(Y,X) − (dim X, dim Y)`.
pub fn ext1_dim(x: &Representation, y: &Representation) -> Result<usize> {
    let t = x.sig().dynkin.ok_or(Error::SignatureMismatch)?;
    let form = bilinear_form(t, &dimension_vector(x), &dimension_vector(y))?;
    let h = (hom_dim(x, y)? + hom_dim(y, x)?) as i64;
    let e = h - form;
    if e < 0 {
        return Err(Error::Invalid(format!("negative Ext dimension {e}")));
    }
    Ok(e as usize)
}

pub fn is_rigid(m: &Representation) -> Result<bool> {
    Ok(ext1_dim(m, m)? == 0)
}

/// `Σ_{α∈Q1} β_s β_t − (Σ β_i² − dim End M)`.
pub fn orbit_codim(m: &Representation) -> Result<usize> {
    let sig = m.sig();
    let d = m.dims();
    let var: usize = (0..sig.half()).map(|a| d[sig.arrows[a].0] * d[sig.arrows[a].1]).sum();
    let group: usize = d.iter().map(|x| x * x).sum();
    let end = hom_dim(m, m)?;
    let orbit = group - end;
    var.checked_sub(orbit).ok_or_else(|| Error::Invalid("orbit larger than the module variety".into()))
}

/// Extensions `0 → A → E → B → 0`. A class is represented by maps
/// `c_α : B_{s(α)} → A_{t(α)}`; `E` has vertex spaces `A_v ⊕ B_v` and arrow
/// matrices `[[A_α, c_α], [0, B_α]]`.
#[derive(Clone, Debug)]
pub struct ExtensionSpace {
    pub sub: Representation,
    pub quot: Representation,
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
    /// Cocycles whose classes form a basis of `Ext¹(B, A)`.
    pub classes: Vec<Vec<Matrix>>,
}

impl ExtensionSpace {
    pub fn dim(&self) -> usize {
        self.classes.len()
    }

    pub fn middle_term(&self, c: &[Matrix]) -> Representation {
        middle_term(&self.sub, &self.quot, c)
    }

    /// Linear combination of the class representatives.
    pub fn combine(&self, coeffs: &[Scalar]) -> Vec<Matrix> {
        let field = self.sub.field();
        let sig = self.sub.sig();
        let mut acc: Vec<Matrix> = sig
            .arrows
            .iter()
            .map(|&(s, t)| Matrix::zeros(field, self.sub.dims()[t], self.quot.dims()[s]))
            .collect();
        for (k, c) in coeffs.iter().enumerate() {
            for (a, m) in acc.iter_mut().enumerate() {
                *m = &*m + &self.classes[k][a].scale(c);
            }
        }
        acc
    }
}

pub fn middle_term(a: &Representation, b: &Representation, c: &[Matrix]) -> Representation {
    let field = a.field();
    let sig = a.sig().clone();
    let dims: Vec<usize> = a.dims().iter().zip(b.dims()).map(|(x, y)| x + y).collect();
    let maps = sig
        .arrows
        .iter()
        .enumerate()
        .map(|(k, &(s, t))| {
            let mut m = Matrix::zeros(field, dims[t], dims[s]);
            m.set_block(0, 0, a.map(k));
            m.set_block(0, a.dims()[s], &c[k]);
            m.set_block(a.dims()[t], a.dims()[s], b.map(k));
            m
        })
        .collect();
    Module::new(field, sig, dims, maps).expect("extension shapes")
}

/// Cocycles modulo coboundaries for extensions of `b` by `a`.
pub fn extension_space(a: &Representation, b: &Representation) -> Result<ExtensionSpace> {
    if !a.same_signature(b) {
        return Err(Error::SignatureMismatch);
    }
    let sig = a.sig().clone();
    if sig.dynkin.is_none() {
        return Err(Error::Invalid("extensions are computed for Λ-modules".into()));
    }
    let field = a.field();
    let (ad, bd) = (a.dims(), b.dims());
    // unknowns: entries of c_α (A_t × B_s), arrow by arrow
    let mut offs = Vec::new();
    let mut n = 0;
    for &(s, t) in &sig.arrows {
        offs.push(n);
        n += ad[t] * bd[s];
    }
    let cvar = |k: usize, r: usize, col: usize| offs[k] + r * bd[sig.arrows[k].0] + col;
    // linearized relation at vertex i, an A_i × B_i matrix equation:
    // Σ_{s(α)=i} (A_{α*} c_α + c_{α*} B_α) − Σ_{t(α)=i} (A_α c_{α*} + c_α B_{α*}) = 0
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for i in 0..sig.vertices {
        let mut eqs = vec![vec![field.zero(); n]; ad[i] * bd[i]];
        let eq = |r: usize, col: usize| r * bd[i] + col;
        for al in 0..sig.half() {
            let (s, t) = sig.arrows[al];
            let st = sig.star(al);
            // (first applied, second applied, sign): path "second ∘ first"
            let mut terms = Vec::new();
            if s == i {
                terms.push((al, st, 1i64));
            }
            if t == i {
                terms.push((st, al, -1i64));
            }
            for (first, second, sign) in terms {
                let sg = field.from_i64(sign);
                let mid = sig.arrows[first].1;
                // A_second · c_first
                let am = a.map(second);
                for r in 0..ad[i] {
                    for col in 0..bd[i] {
                        for k in 0..ad[mid] {
                            let v = am.get(r, k);
                            if !v.is_zero() {
                                let e = &mut eqs[eq(r, col)][cvar(first, k, col)];
                                *e = &*e + &(&sg * v);
                            }
                        }
                    }
                }
                // c_second · B_first
                let bm = b.map(first);
                for r in 0..ad[i] {
                    for col in 0..bd[i] {
                        for k in 0..bd[mid] {
                            let v = bm.get(k, col);
                            if !v.is_zero() {
                                let e = &mut eqs[eq(r, col)][cvar(second, r, k)];
                                *e = &*e + &(&sg * v);
                            }
                        }
                    }
                }
            }
        }
        rows.extend(eqs.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())));
    }
    let sys = Matrix::from_fn(field, rows.len(), n, |r, c| rows[r][c].clone());
    let z = sys.kernel();
    // coboundaries: c_α = g_t B_α − A_α g_s for vertex maps g_v : B_v → A_v
    let mut bcols: Vec<Vec<Scalar>> = Vec::new();
    for v in 0..sig.vertices {
        for r in 0..ad[v] {
            for col in 0..bd[v] {
                let mut vec = vec![field.zero(); n];
                for (k, &(s, t)) in sig.arrows.iter().enumerate() {
                    if t == v {
                        // (g_t B_α)[r, j] = Σ g[r, col] B_α[col, j]
                        for j in 0..bd[s] {
                            let x = b.map(k).get(col, j);
                            if !x.is_zero() {
                                let e = &mut vec[cvar(k, r, j)];
                                *e = &*e + x;
                            }
                        }
                    }
                    if s == v {
                        // (A_α g_s)[i, col] = Σ A_α[i, r] g[r, col]
                        for i2 in 0..ad[t] {
                            let x = a.map(k).get(i2, r);
                            if !x.is_zero() {
                                let e = &mut vec[cvar(k, i2, col)];
                                *e = &*e - x;
                            }
                        }
                    }
                }
                bcols.push(vec);
            }
        }
    }
    let bmat = Matrix::from_fn(field, n, bcols.len(), |r, c| bcols[c][r].clone());
    let bspace = column_space(&bmat);
    let combined = bspace.hstack(&z);
    let piv = combined.rref().pivots;
    let classes = piv
        .iter()
        .filter(|&&p| p >= bspace.cols())
        .map(|&p| {
            let col = combined.col_vec(p);
            sig.arrows
                .iter()
                .enumerate()
                .map(|(k, &(s, t))| Matrix::from_fn(field, ad[t], bd[s], |r, c| col[cvar(k, r, c)].clone()))
                .collect()
        })
        .collect();
    Ok(ExtensionSpace {
        sub: a.clone(),
        quot: b.clone(),
        cocycle_dim: z.cols(),
        coboundary_dim: bspace.cols(),
        classes,
    })
}

#[derive(Serialize, Deserialize)]
struct RepJson {
    #[serde(rename = "type")]
    dynkin: DynkinType,
    dim: Vec<usize>,
    mats: BTreeMap<String, Vec<Vec<String>>>,
}

/// `{"type":"A3","dim":[..],"mats":{"a1":[[..]],"a1*":[[..]],…}}` with
/// entries written as `"p/q"` strings.
pub fn to_json(m: &Representation) -> Result<serde_json::Value> {
    let sig = m.sig();
    let dynkin = sig.dynkin.ok_or_else(|| Error::Invalid("not a Λ-module".into()))?;
    let mats = (0..sig.arrows.len())
        .map(|a| {
            let mat = m.map(a);
            let rows = (0..mat.rows()).map(|i| mat.row(i).iter().map(|x| x.to_string()).collect()).collect();
            (sig.labels[a].clone(), rows)
        })
        .collect();
    serde_json::to_value(RepJson { dynkin, dim: m.dims().to_vec(), mats }).map_err(|e| Error::Invalid(e.to_string()))
}

pub fn from_json(v: &serde_json::Value) -> Result<Representation> {
    let j: RepJson = serde_json::from_value(v.clone()).map_err(|e| Error::Invalid(e.to_string()))?;
    let sig = Signature::preprojective(j.dynkin);
    let field = Field::Rational;
    if j.dim.len() != sig.vertices {
        return Err(Error::Shape(format!("{} dimensions for {} vertices", j.dim.len(), sig.vertices)));
    }
    let mut maps = Vec::new();
    for (a, &(s, t)) in sig.arrows.iter().enumerate() {
        let (rows, cols) = (j.dim[t], j.dim[s]);
        let mat = match j.mats.get(&sig.labels[a]) {
            None => Matrix::zeros(field, rows, cols),
            Some(data) => {
                if data.len() != rows || data.iter().any(|r| r.len() != cols) {
                    return Err(Error::Shape(format!("arrow {} needs a {rows}x{cols} matrix", sig.labels[a])));
                }
                let mut entries = Vec::with_capacity(rows * cols);
                for x in data.iter().flatten() {
                    entries.push(Scalar::parse(field, x).ok_or_else(|| Error::Invalid(format!("bad scalar {x:?}")))?);
                }
                Matrix::from_scalars(field, rows, cols, entries)?
            }
        };
        maps.push(mat);
    }
    Module::new(field, sig, j.dim, maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::is_isomorphic;

    fn a2() -> Lambda {
        Lambda::new(DynkinType::a(2))
    }

    #[test]
    fn relation_examples() {
        let t = DynkinType::a(2);
        let f = Field::Rational;
        let z = Module::with_dims_zero_maps(f, Signature::preprojective(t), vec![2, 3]);
        assert!(check_relations(&z).unwrap().holds);
        assert!(check_relations(&simple(t, 0)).unwrap().holds);
        let one = Matrix::from_i64(f, &[vec![1]]);
        let bad = Module::new(f, Signature::preprojective(t), vec![1, 1], vec![one.clone(), one]).unwrap();
        let r = check_relations(&bad).unwrap();
        assert!(!r.holds);
        assert_eq!(r.defective_vertices(), vec![0, 1]);
    }

    #[test]
    fn ext_examples() {
        let l = a2();
        let (s1, s2) = (l.simple(0), l.simple(1));
        assert_eq!(ext1_dim(&s1, &s2).unwrap(), 1);
        assert_eq!(l.ext1_dim_oracle(&s1, &s2).unwrap(), 1);
        assert_eq!(l.ext1_dim_oracle(&l.projective(0), &s2).unwrap(), 0);
        let e = extension_space(&s2, &s1).unwrap();
        assert_eq!(e.dim(), 1);
        let mid = e.middle_term(&e.classes[0]);
        assert!(is_isomorphic(&mid, &l.projective(0)).unwrap());
    }

    #[test]
    fn cosyzygy_examples() {
        let l = a2();
        let (s1, s2) = (l.simple(0), l.simple(1));
        assert!(is_isomorphic(&l.cosyzygy(&s2).unwrap(), &s1).unwrap());
        assert!(is_isomorphic(&l.cosyzygy(&s1).unwrap(), &s2).unwrap());
        assert!(matches!(l.cosyzygy(&l.projective(0)), Err(Error::ProjectiveSummand(_))));
    }

    #[test]
    fn orbit_examples() {
        let l = a2();
        assert_eq!(orbit_codim(&l.projective(0)).unwrap(), 0);
        let m = l.simple(0).direct_sum(&l.simple(1));
        assert_eq!(orbit_codim(&m).unwrap(), 1);
        assert_eq!(ext1_dim(&m, &m).unwrap(), 2);
    }

    #[test]
    fn json_round_trip() {
        let l = Lambda::new(DynkinType::a(3));
        let p = l.projective(1);
        let v = to_json(&p).unwrap();
        assert_eq!(v["type"], "A3");
        assert_eq!(from_json(&v).unwrap(), p);
    }
}
