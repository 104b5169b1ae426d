//! Minimal add(T)-approximations, exchange sequences and mutation of basic
//! rigid modules.
//!
//! All targets are catalog entries. The source of an approximation may be a
//! catalog entry, in which case the cached Hom spaces and composition tables
//! of the catalog are used, or an arbitrary representation.

use std::sync::Arc;

use serde::Serialize;

use crate::catalog::{Catalog, CatalogId, ModuleSum};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};
use crate::module::{hom_space, HomSpace, Module, Morphism};
use crate::module_rep::Representation;

#[derive(Clone, Copy, Debug)]
pub enum Source<'a> {
    Id(CatalogId),
    Rep(&'a Representation),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `f : X → M`
    Left,
    /// `g : M → X`
    Right,
}

#[derive(Clone, Debug)]
pub struct ApproximationResult {
    pub side: Side,
    /// Left: `X → M`; right: `M → X`.
    pub map: Morphism,
    pub middle: ModuleSum,
    /// Copies making up `M`, in block order: catalog id and the index of the
    /// Hom basis element used as that component.
    pub copies: Vec<(CatalogId, usize)>,
    pub middle_rep: Representation,
    /// Cokernel (left) or kernel (right).
    pub cone: Representation,
    /// Projection onto the cokernel (left) or inclusion of the kernel (right).
    pub cone_map: Morphism,
}

/// `0 → X → T' → Y → 0`
#[derive(Clone, Debug)]
pub struct ExchangeSequence {
    pub x: CatalogId,
    pub middle: ModuleSum,
    pub y: CatalogId,
    pub f: Morphism,
    pub g: Morphism,
    pub middle_rep: Representation,
}

impl ExchangeSequence {
    /// Dimension count, `f` injective, `g` surjective and `g ∘ f = 0`.
    pub fn is_exact(&self, cat: &Catalog) -> bool {
        let (x, y) = (cat.rep(self.x), cat.rep(self.y));
        let dims_ok = (0..x.dims().len()).all(|v| x.dims()[v] + y.dims()[v] == self.middle_rep.dims()[v]);
        dims_ok
            && self.f.is_homomorphism(x, &self.middle_rep)
            && self.g.is_homomorphism(&self.middle_rep, y)
            && self.f.is_injective()
            && self.g.is_surjective()
            && self.g.compose(&self.f).is_zero()
    }

    pub fn render(&self, cat: &Catalog) -> String {
        let middle: Vec<String> = self
            .middle
            .0
            .iter()
            .flat_map(|(&id, &m)| std::iter::repeat(format!("({})", cat.entry(id).profile)).take(m))
            .collect();
        format!(
            "0 → ({}) → {} → ({}) → 0",
            cat.entry(self.x).profile,
            middle.join(" ⊕ "),
            cat.entry(self.y).profile
        )
    }

    pub fn summary(&self, cat: &Catalog) -> SequenceSummary {
        SequenceSummary {
            x: self.x,
            middle: self.middle.0.iter().flat_map(|(&id, &m)| std::iter::repeat(id).take(m)).collect(),
            y: self.y,
            text: self.render(cat),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceSummary {
    pub x: CatalogId,
    pub middle: Vec<CatalogId>,
    pub y: CatalogId,
    pub text: String,
}

struct Homs {
    /// One Hom space per distinct target (left) or source (right).
    spaces: Vec<Arc<HomSpace>>,
}

fn source_homs(cat: &Catalog, x: Source<'_>, targets: &[CatalogId], side: Side) -> Result<Homs> {
    let mut spaces = Vec::with_capacity(targets.len());
    for &u in targets {
        let h = match (x, side) {
            (Source::Id(i), Side::Left) => cat.hom(i, u),
            (Source::Id(i), Side::Right) => cat.hom(u, i),
            (Source::Rep(r), Side::Left) => Arc::new(hom_space(r, cat.rep(u))?),
            (Source::Rep(r), Side::Right) => Arc::new(hom_space(cat.rep(u), r)?),
        };
        spaces.push(h);
    }
    Ok(Homs { spaces })
}

/// Coordinates in `Hom(X, u)` (left) or `Hom(u, X)` (right) of the element
/// obtained from copy `(uj, p)` by composing with basis element `q` of
/// `Hom(uj, u)` (left) or `Hom(u, uj)` (right).
fn pushed(cat: &Catalog, x: Source<'_>, homs: &Homs, targets: &[CatalogId], side: Side, ju: usize, p: usize, u: usize) -> Vec<Vec<Scalar>> {
    let uj = targets[ju];
    let uu = targets[u];
    match (x, side) {
        (Source::Id(i), Side::Left) => {
            let comp = cat.composition(i, uj, uu);
            (0..comp.right).map(|q| comp.get(p, q).to_vec()).collect()
        }
        (Source::Id(i), Side::Right) => {
            let comp = cat.composition(uu, uj, i);
            (0..comp.left).map(|q| comp.get(q, p).to_vec()).collect()
        }
        (Source::Rep(_), Side::Left) => {
            let g = &homs.spaces[ju].basis[p];
            cat.hom(uj, uu).basis.iter().map(|h| homs.spaces[u].coords(&h.compose(g))).collect()
        }
        (Source::Rep(_), Side::Right) => {
            let g = &homs.spaces[ju].basis[p];
            cat.hom(uu, uj).basis.iter().map(|h| homs.spaces[u].coords(&g.compose(h))).collect()
        }
    }
}

fn spans(vectors: &[Vec<Scalar>], dim: usize) -> bool {
    if dim == 0 {
        return true;
    }
    if vectors.len() < dim {
        return false;
    }
    Matrix::from_fn(Field::Rational, vectors.len(), dim, |i, j| vectors[i][j].clone()).rank() == dim
}

/// Minimal left (or right) add(T)-approximation of `x`.
///
/// Starts from the universal map built from Hom bases and strips copies,
/// by ascending catalog id and last copy first, while every map to (from)
/// a summand of `T` still factors.
pub fn minimal_approx(cat: &Catalog, x: Source<'_>, t: &ModuleSum, side: Side) -> Result<ApproximationResult> {
    let targets = t.ids();
    let homs = source_homs(cat, x, &targets, side)?;
    let mut kept: Vec<(usize, usize)> = Vec::new();
    for (ju, h) in homs.spaces.iter().enumerate() {
        for p in 0..h.dim() {
            kept.push((ju, p));
        }
    }
    let generated = |kept: &[(usize, usize)], u: usize| -> bool {
        let mut vecs = Vec::new();
        for &(ju, p) in kept {
            vecs.extend(pushed(cat, x, &homs, &targets, side, ju, p, u));
        }
        spans(&vecs, homs.spaces[u].dim())
    };
    for ju in 0..targets.len() {
        for p in (0..homs.spaces[ju].dim()).rev() {
            let trial: Vec<(usize, usize)> = kept.iter().copied().filter(|&c| c != (ju, p)).collect();
            if (0..targets.len()).all(|u| generated(&trial, u)) {
                kept = trial;
            }
        }
    }
    let field = Field::Rational;
    let sig = cat.sig().clone();
    let parts: Vec<&Module> = kept.iter().map(|&(ju, _)| cat.rep(targets[ju])).collect();
    let middle_rep = Module::direct_sum_all(field, sig, &parts);
    let comps: Vec<&Morphism> = kept.iter().map(|&(ju, p)| &homs.spaces[ju].basis[p]).collect();
    let copies: Vec<(CatalogId, usize)> = kept.iter().map(|&(ju, p)| (targets[ju], p)).collect();
    let middle = ModuleSum::from_ids(&copies.iter().map(|c| c.0).collect::<Vec<_>>());
    let (map, cone, cone_map) = match side {
        Side::Left => {
            let from = match x {
                Source::Id(i) => cat.rep(i).dims().to_vec(),
                Source::Rep(r) => r.dims().to_vec(),
            };
            let f = Morphism::stack_targets(field, &comps, &from);
            let (q, projs) = middle_rep.quotient(&f.image_bases());
            (f, q, Morphism { comps: projs })
        }
        Side::Right => {
            let to = match x {
                Source::Id(i) => cat.rep(i).dims().to_vec(),
                Source::Rep(r) => r.dims().to_vec(),
            };
            let g = Morphism::stack_sources(field, &comps, &to);
            let kb = g.kernel_bases();
            let k = middle_rep.submodule(&kb);
            (g, k, Morphism { comps: kb })
        }
    };
    Ok(ApproximationResult { side, map, middle, copies, middle_rep, cone, cone_map })
}

pub fn minimal_left_approx(cat: &Catalog, x: Source<'_>, t: &ModuleSum) -> Result<ApproximationResult> {
    minimal_approx(cat, x, t, Side::Left)
}

pub fn minimal_right_approx(cat: &Catalog, x: Source<'_>, t: &ModuleSum) -> Result<ApproximationResult> {
    minimal_approx(cat, x, t, Side::Right)
}

/// Approximation property: every map from `X` to (left) or from (right) a
/// summand of `T` factors through the approximation.
pub fn is_approximation(cat: &Catalog, x: Source<'_>, t: &ModuleSum, a: &ApproximationResult) -> Result<bool> {
    let targets = t.ids();
    let homs = source_homs(cat, x, &targets, a.side)?;
    for u in 0..targets.len() {
        let mut vecs = Vec::new();
        for &(cid, p) in &a.copies {
            let ju = targets.iter().position(|&k| k == cid).expect("copy targets lie in T");
            vecs.extend(pushed(cat, x, &homs, &targets, a.side, ju, p, u));
        }
        if !spans(&vecs, homs.spaces[u].dim()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Removing any single copy destroys the approximation property.
pub fn is_minimal(cat: &Catalog, x: Source<'_>, t: &ModuleSum, a: &ApproximationResult) -> Result<bool> {
    for skip in 0..a.copies.len() {
        let mut b = a.clone();
        b.copies.remove(skip);
        if is_approximation(cat, x, t, &b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sum of `dim Ext¹(T_i, T_j)` over unordered pairs, including `i = j`.
pub fn ext_defect(cat: &Catalog, ids: &[CatalogId]) -> usize {
    let mut total = 0;
    for (k, &a) in ids.iter().enumerate() {
        for &b in &ids[k..] {
            total += cat.ext1(a, b);
        }
    }
    total
}

pub fn is_maximal_rigid(cat: &Catalog, ids: &[CatalogId]) -> bool {
    if ext_defect(cat, ids) != 0 {
        return false;
    }
    !cat.entries().iter().any(|e| !ids.contains(&e.id) && e.rigid && ids.iter().all(|&t| cat.ext1(e.id, t) == 0))
}

#[derive(Clone, Debug)]
pub struct Mutation {
    pub position: usize,
    /// The summand list with position `k` replaced.
    pub result: Vec<CatalogId>,
    /// `0 → T_k → T' → T_k* → 0`
    pub left: ExchangeSequence,
    /// `0 → T_k* → T'' → T_k → 0`
    pub right: ExchangeSequence,
}

fn precheck(cat: &Catalog, ids: &[CatalogId]) -> Result<()> {
    for &i in ids {
        if i >= cat.len() {
            return Err(Error::OutOfRange(i, cat.len()));
        }
    }
    if ModuleSum::from_ids(ids).distinct() != ids.len() {
        return Err(Error::NotBasic);
    }
    let defect = ext_defect(cat, ids);
    if defect != 0 {
        return Err(Error::NotRigid(defect));
    }
    for p in cat.projective_ids() {
        if !ids.contains(&p) {
            return Err(Error::Invalid(format!("projective {} is not a summand", cat.entry(p).profile)));
        }
    }
    Ok(())
}

/// `μ_{T_k}(T)`: the summand at position `k` (0-based) is replaced by the
/// cokernel of its minimal left add(T/T_k)-approximation.
pub fn mutate(cat: &Catalog, ids: &[CatalogId], k: usize) -> Result<Mutation> {
    if k >= ids.len() {
        return Err(Error::OutOfRange(k + 1, ids.len()));
    }
    precheck(cat, ids)?;
    let x = ids[k];
    if cat.entry(x).projective {
        return Err(Error::ProjectiveDirection(k + 1));
    }
    let rest = ModuleSum::from_ids(ids).without(x);
    let left = minimal_left_approx(cat, Source::Id(x), &rest)?;
    let y = cat.identify(&left.cone)?;
    if y == x {
        return Err(Error::Invalid("complement coincides with the mutated summand".into()));
    }
    let right = minimal_right_approx(cat, Source::Id(x), &rest)?;
    let y2 = cat.identify(&right.cone)?;
    if y2 != y {
        return Err(Error::Invalid(format!(
            "left and right approximations give different complements ({} and {})",
            cat.entry(y).profile,
            cat.entry(y2).profile
        )));
    }
    // Transport cokernel projection and kernel inclusion along isomorphisms
    // with the catalog entry.
    let iso_l = crate::module::find_isomorphism(&left.cone, cat.rep(y), 37)?
        .ok_or_else(|| Error::Invalid("cokernel identification failed".into()))?;
    let left_seq = ExchangeSequence {
        x,
        middle: left.middle.clone(),
        y,
        f: left.map.clone(),
        g: iso_l.compose(&left.cone_map),
        middle_rep: left.middle_rep.clone(),
    };
    let iso = crate::module::find_isomorphism(cat.rep(y), &right.cone, 31)?
        .ok_or_else(|| Error::Invalid("kernel identification failed".into()))?;
    let right_seq = ExchangeSequence {
        x: y,
        middle: right.middle.clone(),
        y: x,
        f: right.cone_map.compose(&iso),
        g: right.map.clone(),
        middle_rep: right.middle_rep.clone(),
    };
    let mut result = ids.to_vec();
    result[k] = y;
    Ok(Mutation { position: k, result, left: left_seq, right: right_seq })
}

/// Orders a basic complete rigid module: non-projective summands by
/// catalog id, then projectives by vertex.
pub fn canonical_order(cat: &Catalog, s: &ModuleSum) -> Vec<CatalogId> {
    let mut out: Vec<CatalogId> = s.ids().into_iter().filter(|&i| !cat.entry(i).projective).collect();
    out.extend(cat.projective_ids().into_iter().filter(|p| s.contains(*p)));
    out
}

/// The built-in initial complete rigid module. For A2 and A3 these are the
/// worked examples (`T_1, T_3, T_4` and `T_1, …, T_6`); for A4 the
/// projectives are completed greedily by ascending catalog id.
pub fn initial_module(cat: &Catalog) -> Result<Vec<CatalogId>> {
    let named = match cat.dynkin().rank() {
        2 => Some(vec!["1", "1 / 2", "2 / 1"]),
        3 => Some(vec!["1", "1 / 2", "2 / 1", "1 / 2 / 3", "2 / 1 3 / 2", "3 / 2 / 1"]),
        _ => None,
    };
    if let Some(profiles) = named {
        return profiles
            .iter()
            .map(|p| cat.by_profile(p).ok_or_else(|| Error::NotInCatalog(p.to_string())))
            .collect();
    }
    let projectives = cat.projective_ids();
    let mut chosen: Vec<CatalogId> = Vec::new();
    for e in cat.entries() {
        if e.projective || !e.rigid {
            continue;
        }
        if chosen.iter().all(|&c| cat.ext1(c, e.id) == 0) {
            chosen.push(e.id);
        }
    }
    chosen.extend(projectives);
    let r = cat.dynkin().positive_roots();
    if chosen.len() != r {
        return Err(Error::NotComplete(chosen.len(), r));
    }
    Ok(chosen)
}

/// Names of the summands of [`initial_module`]: `T1, T3, T4` for A2 (as in
/// the worked example) and `T1, …, Tr` otherwise.
pub fn initial_labels(cat: &Catalog) -> Vec<String> {
    if cat.dynkin().rank() == 2 {
        return ["T1", "T3", "T4"].iter().map(|s| s.to_string()).collect();
    }
    (1..=cat.dynkin().positive_roots()).map(|i| format!("T{i}")).collect()
}

/// Cluster variable names matching [`initial_labels`].
pub fn initial_variable_names(cat: &Catalog) -> Vec<String> {
    initial_labels(cat).iter().map(|l| format!("x{}", &l[1..])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::DynkinType;

    #[test]
    fn a2_left_approx_of_s2() {
        let cat = Catalog::enumerate(DynkinType::a(2)).unwrap();
        let t = ModuleSum::from_ids(&initial_module(&cat).unwrap());
        let s2 = cat.by_profile("2").unwrap();
        let a = minimal_left_approx(&cat, Source::Id(s2), &t).unwrap();
        assert_eq!(a.middle, ModuleSum::from_ids(&[cat.by_profile("1 / 2").unwrap()]));
        assert_eq!(cat.identify(&a.cone).unwrap(), cat.by_profile("1").unwrap());
        assert!(is_approximation(&cat, Source::Id(s2), &t, &a).unwrap());
        assert!(is_minimal(&cat, Source::Id(s2), &t, &a).unwrap());
        let rep = cat.rep(s2).clone();
        let b = minimal_left_approx(&cat, Source::Rep(&rep), &t).unwrap();
        assert_eq!(b.middle, a.middle);
    }

    #[test]
    fn approx_of_summand_is_identity_like() {
        let cat = Catalog::enumerate(DynkinType::a(2)).unwrap();
        let ids = initial_module(&cat).unwrap();
        let t = ModuleSum::from_ids(&ids);
        let a = minimal_left_approx(&cat, Source::Id(ids[1]), &t).unwrap();
        assert_eq!(a.middle, ModuleSum::from_ids(&[ids[1]]));
        assert!(a.map.is_iso());
        assert!(a.cone.is_zero());
    }

    #[test]
    fn a2_mutation_and_errors() {
        let cat = Catalog::enumerate(DynkinType::a(2)).unwrap();
        let ids = initial_module(&cat).unwrap();
        let m = mutate(&cat, &ids, 0).unwrap();
        assert_eq!(cat.entry(m.result[0]).profile, "2");
        assert_eq!(m.left.render(&cat), "0 → (1) → (2 / 1) → (2) → 0");
        assert_eq!(m.right.render(&cat), "0 → (2) → (1 / 2) → (1) → 0");
        assert!(m.left.is_exact(&cat) && m.right.is_exact(&cat));
        assert_eq!(mutate(&cat, &m.result, 0).unwrap().result, ids);
        assert_eq!(mutate(&cat, &ids, 1).unwrap_err(), Error::ProjectiveDirection(2));
        let s1 = cat.by_profile("1").unwrap();
        let s2 = cat.by_profile("2").unwrap();
        assert!(matches!(mutate(&cat, &[s1, s2, ids[1], ids[2]], 0), Err(Error::NotRigid(_))));
        assert!(is_maximal_rigid(&cat, &ids));
        assert!(!is_maximal_rigid(&cat, &ids[1..]));
    }
}
