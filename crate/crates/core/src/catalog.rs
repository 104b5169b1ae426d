//! Indecomposable Λ-modules for A2, A3, A4, with cached Hom spaces.
//!
//! Enumeration is a closure: start from simples and indecomposable
//! projectives, then repeatedly add syzygies, cosyzygies and the summands of
//! middle terms of nonsplit extensions until nothing new appears. Entries are
//! finally sorted by total dimension, then dimension vector in decreasing
//! lexicographic order, then socle profile and top profile, which fixes the ids.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar, SubspaceBasis};
use crate::module::{decompose, find_isomorphism, hom_space, HomSpace, Module, Morphism, Signature};
use crate::module_rep::{check_relations, dimension_vector, extension_space, Lambda, Representation};
use crate::quiver::{bilinear_form, DynkinType, Family};

pub type CatalogId = usize;

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: CatalogId,
    pub rep: Representation,
    pub dims: Vec<usize>,
    /// Socle series dimension vectors, socle first.
    pub layers: Vec<Vec<usize>>,
    pub profile: String,
    pub projective: bool,
    pub rigid: bool,
    /// How the entry was first reached during the closure.
    pub method: String,
}

/// A formal direct sum of catalog entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModuleSum(pub BTreeMap<CatalogId, usize>);

impl ModuleSum {
    pub fn from_ids(ids: &[CatalogId]) -> ModuleSum {
        let mut m = BTreeMap::new();
        for &i in ids {
            *m.entry(i).or_insert(0) += 1;
        }
        ModuleSum(m)
    }

    /// Distinct summand ids in ascending order.
    pub fn ids(&self) -> Vec<CatalogId> {
        self.0.keys().copied().collect()
    }

    pub fn multiplicity(&self, id: CatalogId) -> usize {
        self.0.get(&id).copied().unwrap_or(0)
    }

    pub fn contains(&self, id: CatalogId) -> bool {
        self.0.contains_key(&id)
    }

    /// Number of pairwise non-isomorphic summands.
    pub fn distinct(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn is_basic(&self) -> bool {
        self.0.values().all(|&m| m == 1)
    }

    pub fn basic(&self) -> ModuleSum {
        ModuleSum(self.0.keys().map(|&k| (k, 1)).collect())
    }

    pub fn without(&self, id: CatalogId) -> ModuleSum {
        let mut m = self.0.clone();
        m.remove(&id);
        ModuleSum(m)
    }

    pub fn with(&self, id: CatalogId) -> ModuleSum {
        let mut m = self.0.clone();
        *m.entry(id).or_insert(0) += 1;
        ModuleSum(m)
    }
}

impl fmt::Display for ModuleSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.0.iter().map(|(k, m)| if *m == 1 { format!("#{k}") } else { format!("#{k}^{m}") }).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Coordinates of compositions: `get(p, q)` is the coordinate vector in
/// `Hom(A, C)` of `h_q ∘ g_p` for `g_p ∈ Hom(A, B)`, `h_q ∈ Hom(B, C)`.
#[derive(Debug)]
pub struct Composition {
    pub left: usize,
    pub right: usize,
    data: Vec<Vec<Scalar>>,
}

impl Composition {
    pub fn get(&self, p: usize, q: usize) -> &[Scalar] {
        &self.data[p * self.right + q]
    }
}

pub struct Catalog {
    pub lambda: Lambda,
    entries: Vec<CatalogEntry>,
    homs: Vec<OnceLock<Arc<HomSpace>>>,
    comps: RwLock<HashMap<(CatalogId, CatalogId, CatalogId), Arc<Composition>>>,
    rad: Vec<OnceLock<Arc<SubspaceBasis>>>,
}

impl fmt::Debug for Catalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Catalog").field("type", &self.lambda.dynkin).field("entries", &self.entries.len()).finish()
    }
}

pub fn check_catalog_type(t: DynkinType) -> Result<()> {
    if t.family() == Family::A && (2..=4).contains(&t.rank()) {
        Ok(())
    } else {
        Err(Error::UnsupportedType(t.to_string()))
    }
}

struct Closure<'a> {
    lambda: &'a Lambda,
    found: Vec<(Representation, String)>,
}

impl Closure<'_> {
    fn position(&self, m: &Representation) -> Result<Option<usize>> {
        for (k, (x, _)) in self.found.iter().enumerate() {
            if x.dims() == m.dims() && find_isomorphism(x, m, 17)?.is_some() {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    fn add(&mut self, m: Representation, method: &str) -> Result<()> {
        if self.position(&m)?.is_none() {
            self.found.push((m, method.to_string()));
        }
        Ok(())
    }

    fn add_summands(&mut self, m: &Representation, method: &str) -> Result<()> {
        for (part, _) in decompose(m, 5)? {
            self.add(part, method)?;
        }
        Ok(())
    }
}

impl Catalog {
    /// Runs the closure enumeration for A2, A3 or A4.
    pub fn enumerate(t: DynkinType) -> Result<Catalog> {
        check_catalog_type(t)?;
        let lambda = Lambda::new(t);
        let n = lambda.vertices();
        let mut cl = Closure { lambda: &lambda, found: Vec::new() };
        for v in 0..n {
            cl.add(lambda.simple(v), "simple")?;
        }
        for v in 0..n {
            cl.add(lambda.projective(v), "projective")?;
        }
        let mut projective_flags: Vec<bool> = Vec::new();
        let mut i = 0;
        while i < cl.found.len() {
            let x = cl.found[i].0.clone();
            let proj = cl.lambda.is_projective(&x)?;
            projective_flags.push(proj);
            if !proj {
                let om = cl.lambda.syzygy(&x)?;
                cl.add_summands(&om, "syzygy")?;
                let co = cl.lambda.cosyzygy(&x)?;
                cl.add_summands(&co, "cosyzygy")?;
            }
            for j in 0..=i {
                let y = cl.found[j].0.clone();
                for (sub, quot) in [(&x, &y), (&y, &x)] {
                    let e = extension_space(sub, quot)?;
                    for c in &e.classes {
                        cl.add_summands(&e.middle_term(c), "extension")?;
                    }
                    if e.dim() > 1 {
                        let all = e.combine(&vec![Field::Rational.one(); e.dim()]);
                        cl.add_summands(&e.middle_term(&all), "extension")?;
                    }
                    if i == j {
                        break;
                    }
                }
            }
            i += 1;
        }
        let mut staged: Vec<(Representation, String)> = cl.found;
        let mut keyed: Vec<((usize, std::cmp::Reverse<Vec<usize>>, String, String), usize)> = staged
            .iter()
            .enumerate()
            .map(|(k, (m, _))| ((m.total_dim(), std::cmp::Reverse(m.dims().to_vec()), m.socle_profile(), top_profile(m)), k))
            .collect();
        keyed.sort();
        let mut entries = Vec::with_capacity(keyed.len());
        for (id, (_, k)) in keyed.into_iter().enumerate() {
            let (rep, method) = std::mem::replace(&mut staged[k], (Module::zero(Field::Rational, lambda.sig().clone()), String::new()));
            entries.push(Catalog::make_entry(&lambda, id, rep, method)?);
        }
        Ok(Catalog::from_entries(lambda, entries))
    }

    fn make_entry(lambda: &Lambda, id: CatalogId, rep: Representation, method: String) -> Result<CatalogEntry> {
        let rigid = crate::module_rep::ext1_dim(&rep, &rep)? == 0;
        Ok(CatalogEntry {
            id,
            dims: rep.dims().to_vec(),
            layers: rep.socle_layers(),
            profile: rep.socle_profile(),
            projective: lambda.is_projective(&rep)?,
            rigid,
            rep,
            method,
        })
    }

    fn from_entries(lambda: Lambda, entries: Vec<CatalogEntry>) -> Catalog {
        let n = entries.len();
        Catalog {
            lambda,
            entries,
            homs: (0..n * n).map(|_| OnceLock::new()).collect(),
            comps: RwLock::new(HashMap::new()),
            rad: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn dynkin(&self) -> DynkinType {
        self.lambda.dynkin
    }

    pub fn sig(&self) -> &Arc<Signature> {
        self.lambda.sig()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn entry(&self, id: CatalogId) -> &CatalogEntry {
        &self.entries[id]
    }

    pub fn rep(&self, id: CatalogId) -> &Representation {
        &self.entries[id].rep
    }

    /// Looks an entry up by its socle profile, e.g. `"2 / 1 3"`.
    pub fn by_profile(&self, profile: &str) -> Option<CatalogId> {
        let norm = |s: &str| s.split('/').map(|p| p.split_whitespace().collect::<Vec<_>>().join(" ")).collect::<Vec<_>>().join(" / ");
        let want = norm(profile);
        let hits: Vec<CatalogId> = self.entries.iter().filter(|e| e.profile == want).map(|e| e.id).collect();
        (hits.len() == 1).then(|| hits[0])
    }

    /// Ids of the indecomposable projectives, ordered by vertex.
    pub fn projective_ids(&self) -> Vec<CatalogId> {
        (0..self.lambda.vertices())
            .map(|v| self.identify(&self.lambda.projective(v)).expect("projectives are catalogued"))
            .collect()
    }

    pub fn simple_ids(&self) -> Vec<CatalogId> {
        (0..self.lambda.vertices())
            .map(|v| self.identify(&self.lambda.simple(v)).expect("simples are catalogued"))
            .collect()
    }

    /// The unique isomorphic entry of an indecomposable module.
    pub fn identify(&self, m: &Representation) -> Result<CatalogId> {
        for e in &self.entries {
            if e.dims == m.dims() && find_isomorphism(&e.rep, m, 23)?.is_some() {
                return Ok(e.id);
            }
        }
        Err(Error::NotInCatalog(format!("{:?} ({})", m.dims(), m.socle_profile())))
    }

    /// Decompose and identify.
    pub fn canonical_sum(&self, m: &Representation) -> Result<ModuleSum> {
        let mut out = BTreeMap::new();
        for (part, mult) in decompose(m, 29)? {
            *out.entry(self.identify(&part)?).or_insert(0) += mult;
        }
        Ok(ModuleSum(out))
    }

    pub fn sum_rep(&self, s: &ModuleSum) -> Representation {
        let mut parts: Vec<&Module> = Vec::new();
        for (&id, &m) in &s.0 {
            for _ in 0..m {
                parts.push(&self.entries[id].rep);
            }
        }
        Module::direct_sum_all(Field::Rational, self.sig().clone(), &parts)
    }

    pub fn hom(&self, a: CatalogId, b: CatalogId) -> Arc<HomSpace> {
        self.homs[a * self.len() + b]
            .get_or_init(|| Arc::new(hom_space(&self.entries[a].rep, &self.entries[b].rep).expect("same signature")))
            .clone()
    }

    pub fn hom_dim(&self, a: CatalogId, b: CatalogId) -> usize {
        self.hom(a, b).dim()
    }

    pub fn ext1(&self, a: CatalogId, b: CatalogId) -> usize {
        let form = bilinear_form(
            self.dynkin(),
            &dimension_vector(&self.entries[a].rep),
            &dimension_vector(&self.entries[b].rep),
        )
        .expect("matching lengths");
        (self.hom_dim(a, b) as i64 + self.hom_dim(b, a) as i64 - form) as usize
    }

    /// Ext¹ vanishing between all summands, including each with itself.
    pub fn is_rigid_sum(&self, s: &ModuleSum) -> bool {
        let ids = s.ids();
        ids.iter().enumerate().all(|(k, &a)| ids[k..].iter().all(|&b| self.ext1(a, b) == 0))
    }

    pub fn composition(&self, a: CatalogId, b: CatalogId, c: CatalogId) -> Arc<Composition> {
        if let Some(x) = self.comps.read().unwrap().get(&(a, b, c)) {
            return x.clone();
        }
        let (hab, hbc, hac) = (self.hom(a, b), self.hom(b, c), self.hom(a, c));
        let mut data = Vec::with_capacity(hab.dim() * hbc.dim());
        for g in &hab.basis {
            for h in &hbc.basis {
                data.push(hac.coords(&h.compose(g)));
            }
        }
        let comp = Arc::new(Composition { left: hab.dim(), right: hbc.dim(), data });
        self.comps.write().unwrap().insert((a, b, c), comp.clone());
        comp
    }

    /// Coordinates (in `Hom(a, c)`) of `h ∘ g` for coordinate vectors
    /// `g ∈ Hom(a, b)`, `h ∈ Hom(b, c)`.
    pub fn compose_coords(&self, a: CatalogId, b: CatalogId, c: CatalogId, g: &[Scalar], h: &[Scalar]) -> Vec<Scalar> {
        let comp = self.composition(a, b, c);
        let mut out = vec![Field::Rational.zero(); self.hom_dim(a, c)];
        for (p, gp) in g.iter().enumerate() {
            if gp.is_zero() {
                continue;
            }
            for (q, hq) in h.iter().enumerate() {
                if hq.is_zero() {
                    continue;
                }
                let w = gp * hq;
                for (k, x) in comp.get(p, q).iter().enumerate() {
                    if !x.is_zero() {
                        out[k] = &out[k] + &(&w * x);
                    }
                }
            }
        }
        out
    }

    /// Coordinates of the identity of entry `a` in `Hom(a, a)`.
    pub fn identity_coords(&self, a: CatalogId) -> Vec<Scalar> {
        self.hom(a, a).coords(&self.entries[a].rep.identity())
    }

    /// The radical of `End(a)`: the endomorphisms of trace zero, as a
    /// subspace of coordinate space. Entries have local endomorphism rings
    /// with one-dimensional top, so nilpotent ⇔ trace zero.
    pub fn radical_end(&self, a: CatalogId) -> Arc<SubspaceBasis> {
        self.rad[a]
            .get_or_init(|| {
                let h = self.hom(a, a);
                let tr = Matrix::from_fn(Field::Rational, 1, h.dim(), |_, j| h.basis[j].trace(Field::Rational));
                Arc::new(SubspaceBasis::new(tr.kernel()))
            })
            .clone()
    }

    /// Basis of `rad(a, b)` as coordinate vectors in `Hom(a, b)`.
    pub fn radical_coords(&self, a: CatalogId, b: CatalogId) -> Vec<Vec<Scalar>> {
        if a != b {
            let d = self.hom_dim(a, b);
            return (0..d)
                .map(|k| (0..d).map(|j| if j == k { Field::Rational.one() } else { Field::Rational.zero() }).collect())
                .collect();
        }
        let r = self.radical_end(a);
        (0..r.dim()).map(|j| r.basis().col_vec(j)).collect()
    }

    pub fn morphism(&self, a: CatalogId, b: CatalogId, coords: &[Scalar]) -> Morphism {
        self.hom(a, b).combine(coords)
    }

    /// Entries as JSON (representations included).
    pub fn to_json(&self) -> serde_json::Value {
        let list: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|e| {
                serde_json::json!({
                    "id": e.id,
                    "dim": e.dims,
                    "profile": e.profile,
                    "layers": e.layers,
                    "projective": e.projective,
                    "rigid": e.rigid,
                    "method": e.method,
                    "rep": crate::module_rep::to_json(&e.rep).expect("catalog entries are Λ-modules"),
                })
            })
            .collect();
        serde_json::json!({"type": self.dynkin().to_string(), "count": self.len(), "entries": list})
    }

    /// Every entry passes the relation check.
    pub fn relations_hold(&self) -> Result<bool> {
        for e in &self.entries {
            if !check_relations(&e.rep)?.holds {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn top_profile(m: &Module) -> String {
    let mut cur = m.clone();
    let mut layers = Vec::new();
    while !cur.is_zero() {
        layers.push(cur.top_dims());
        cur = cur.submodule(&cur.radical());
    }
    layers.iter().map(|l| format!("{l:?}")).collect::<Vec<_>>().join("/")
}

/// Hand-written modules from the socle-series descriptions of the A2 and A3
/// examples, used to check the enumerator independently.
pub mod fixtures {
    use super::*;

    /// Builds a representation from dimension vector and named arrow
    /// matrices; unnamed arrows act by zero.
    pub fn rep(t: DynkinType, dims: &[usize], mats: &[(&str, Vec<Vec<i64>>)]) -> Representation {
        let sig = Signature::preprojective(t);
        let f = Field::Rational;
        let maps = sig
            .arrows
            .iter()
            .enumerate()
            .map(|(a, &(s, tg))| match mats.iter().find(|(n, _)| *n == sig.labels[a]) {
                Some((_, rows)) => Matrix::from_i64(f, rows),
                None => Matrix::zeros(f, dims[tg], dims[s]),
            })
            .collect();
        Module::new(f, sig, dims.to_vec(), maps).expect("fixture shapes")
    }

    /// `T_1 = 1`, `T_2 = 2`, `T_3 = 1/2`, `T_4 = 2/1`.
    pub fn a2() -> Vec<(&'static str, Representation)> {
        let t = DynkinType::a(2);
        vec![
            ("T1", rep(t, &[1, 0], &[])),
            ("T2", rep(t, &[0, 1], &[])),
            ("T3", rep(t, &[1, 1], &[("a1", vec![vec![1]])])),
            ("T4", rep(t, &[1, 1], &[("a1*", vec![vec![1]])])),
        ]
    }

    /// All twelve A3 indecomposables keyed by socle profile (top first).
    pub fn a3_all() -> Vec<(&'static str, Representation)> {
        let t = DynkinType::a(3);
        let one = || vec![vec![1]];
        vec![
            ("1", rep(t, &[1, 0, 0], &[])),
            ("2", rep(t, &[0, 1, 0], &[])),
            ("3", rep(t, &[0, 0, 1], &[])),
            ("1 / 2", rep(t, &[1, 1, 0], &[("a1", one())])),
            ("2 / 1", rep(t, &[1, 1, 0], &[("a1*", one())])),
            ("2 / 3", rep(t, &[0, 1, 1], &[("a2", one())])),
            ("3 / 2", rep(t, &[0, 1, 1], &[("a2*", one())])),
            ("2 / 1 3", rep(t, &[1, 1, 1], &[("a1*", one()), ("a2", one())])),
            ("1 3 / 2", rep(t, &[1, 1, 1], &[("a1", one()), ("a2*", one())])),
            ("1 / 2 / 3", rep(t, &[1, 1, 1], &[("a1", one()), ("a2", one())])),
            ("3 / 2 / 1", rep(t, &[1, 1, 1], &[("a2*", one()), ("a1*", one())])),
            (
                "2 / 1 3 / 2",
                rep(
                    t,
                    &[1, 2, 1],
                    &[
                        ("a1*", vec![vec![1, 0]]),
                        ("a2", vec![vec![1, 0]]),
                        ("a1", vec![vec![0], vec![1]]),
                        ("a2*", vec![vec![0], vec![1]]),
                    ],
                ),
            ),
        ]
    }

    /// The six summands `T_1, …, T_6` of the A3 example and `T_2*`.
    pub fn a3_t() -> Vec<(&'static str, Representation)> {
        let all = a3_all();
        let get = |p: &str| all.iter().find(|(k, _)| *k == p).unwrap().1.clone();
        vec![
            ("T1", get("1")),
            ("T2", get("1 / 2")),
            ("T3", get("2 / 1")),
            ("T4", get("1 / 2 / 3")),
            ("T5", get("2 / 1 3 / 2")),
            ("T6", get("3 / 2 / 1")),
            ("T2*", get("2 / 1 3")),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_catalog() {
        let c = Catalog::enumerate(DynkinType::a(2)).unwrap();
        assert_eq!(c.len(), 4);
        let profiles: Vec<&str> = c.entries().iter().map(|e| e.profile.as_str()).collect();
        assert_eq!(profiles, vec!["1", "2", "1 / 2", "2 / 1"]);
        assert!(c.entries().iter().all(|e| e.rigid));
        assert_eq!(c.projective_ids(), vec![2, 3]);
        for (_, r) in fixtures::a2() {
            c.identify(&r).unwrap();
        }
    }

    #[test]
    fn sums_and_identification() {
        let c = Catalog::enumerate(DynkinType::a(2)).unwrap();
        let s1 = c.rep(0).clone();
        assert_eq!(c.canonical_sum(&s1.power(2)).unwrap(), ModuleSum::from_ids(&[0, 0]));
        let p = vec![Matrix::from_i64(Field::Rational, &[vec![2]]), Matrix::from_i64(Field::Rational, &[vec![-3]])];
        let conj = c.rep(2).conjugate(&p).unwrap();
        assert_eq!(c.identify(&conj).unwrap(), 2);
        assert!(c.is_rigid_sum(&ModuleSum::from_ids(&[0, 2, 3])));
        assert!(!c.is_rigid_sum(&ModuleSum::from_ids(&[0, 1])));
    }
}
