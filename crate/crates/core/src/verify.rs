//! Named invariant suites over a catalog and its exchange graph.
//!
//! Each suite records pass/fail counts per check tag in a [`Tally`]. Graph
//! suites for `A4` are skipped unless `deep` is set.

use std::sync::OnceLock;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::Dimension;
use crate::approximation::{initial_module, mutate};
use crate::catalog::{Catalog, CatalogId, ModuleSum};
use crate::cluster::{cluster_monomials, complete_rigid_search, exchange_graph, ExchangeGraph, GraphOptions, Tally};
use crate::endo_quiver::{exchange_data, s_matrix, EndoAlgebra};
use crate::error::{Error, Result};
use crate::intmat::{self, IntMatrix};
use crate::module::{find_isomorphism, is_isomorphic, Module};
use crate::module_rep::{ext1_dim, orbit_codim, Lambda};
use crate::quiver::DynkinType;
use crate::semicanonical::{phi_evaluate, PhiTable, MAX_PHI_DIM};

pub const SUITES: &[&str] = &[
    "counts",
    "golden",
    "thm-mutation",
    "prop-mutation3",
    "thm-quivershape",
    "homological",
    "functor",
    "thm-multform",
    "cluster",
    "endo",
    "all",
];

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Build the full `A4` exchange graph.
    pub deep: bool,
    /// Seed for sampled pairs.
    pub seed: u64,
    /// Cap on resolution lengths.
    pub cap: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { deep: false, seed: 0, cap: 6 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub dynkin: String,
    pub suite: String,
    pub tally: Tally,
    /// Checks that were not run, with the reason.
    pub skipped: Vec<(String, String)>,
    pub elapsed_ms: u128,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.tally.all_passed()
    }

    /// One line per check tag: `PASS tag 42/42` or `FAIL tag 40/42`.
    pub fn lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .tally
            .counts
            .iter()
            .map(|(tag, &(p, f))| {
                if f == 0 {
                    format!("PASS {tag} {p}/{p}")
                } else {
                    format!("FAIL {tag} {p}/{}", p + f)
                }
            })
            .collect();
        for (tag, why) in &self.skipped {
            out.push(format!("SKIP {tag} ({why})"));
        }
        out
    }
}

/// Expected counts: catalog size, rank `r`, exchange graph vertices.
fn expected_counts(t: DynkinType) -> Option<(usize, usize, usize)> {
    match t.rank() {
        2 => Some((4, 3, 2)),
        3 => Some((12, 6, 14)),
        4 => Some((40, 10, 672)),
        _ => None,
    }
}

struct Golden {
    c_t: IntMatrix,
    r_t: IntMatrix,
    k: usize,
    s: IntMatrix,
    c_star: IntMatrix,
    r_star: IntMatrix,
}

fn golden(t: DynkinType) -> Option<Golden> {
    match t.rank() {
        2 => Some(Golden {
            c_t: vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 1, 1]],
            r_t: vec![vec![0, 1, -1], vec![-1, 1, 0], vec![1, -1, 1]],
            k: 0,
            s: vec![vec![-1, 0, 1], vec![0, 1, 0], vec![0, 0, 1]],
            c_star: vec![vec![1, 0, 1], vec![1, 1, 1], vec![0, 1, 1]],
            r_star: vec![vec![0, -1, 1], vec![1, 1, -1], vec![-1, 0, 1]],
        }),
        3 => Some(Golden {
            c_t: vec![
                vec![1, 1, 0, 1, 0, 0],
                vec![0, 1, 1, 1, 1, 0],
                vec![1, 1, 1, 1, 1, 0],
                vec![0, 0, 0, 1, 1, 1],
                vec![0, 1, 1, 1, 2, 1],
                vec![1, 1, 1, 1, 1, 1],
            ],
            r_t: vec![
                vec![0, 1, -1, 0, 0, 0],
                vec![-1, 0, 1, 1, -1, 0],
                vec![1, -1, 0, 0, 1, -1],
                vec![0, -1, 0, 1, 0, 0],
                vec![0, 1, -1, -1, 1, 0],
                vec![0, 0, 1, 0, -1, 1],
            ],
            k: 1,
            s: vec![
                vec![1, 0, 0, 0, 0, 0],
                vec![1, -1, 0, 0, 1, 0],
                vec![0, 0, 1, 0, 0, 0],
                vec![0, 0, 0, 1, 0, 0],
                vec![0, 0, 0, 0, 1, 0],
                vec![0, 0, 0, 0, 0, 1],
            ],
            c_star: vec![
                vec![1, 0, 0, 1, 0, 0],
                vec![1, 1, 0, 1, 1, 1],
                vec![1, 1, 1, 1, 1, 0],
                vec![0, 1, 0, 1, 1, 1],
                vec![0, 1, 1, 1, 2, 1],
                vec![1, 1, 1, 1, 1, 1],
            ],
            r_star: vec![
                vec![0, -1, 0, 1, 0, 0],
                vec![1, 0, -1, -1, 1, 0],
                vec![0, 1, 0, 0, 0, -1],
                vec![-1, 1, 0, 1, -1, 0],
                vec![0, -1, 0, 0, 1, 0],
                vec![0, 0, 1, 0, -1, 1],
            ],
        }),
        _ => None,
    }
}

/// Shared state for the suites of one type: the catalog and, lazily, the
/// exchange graph.
pub struct Verifier {
    pub cat: Catalog,
    pub opts: VerifyOptions,
    initial: Vec<CatalogId>,
    graph: OnceLock<Result<ExchangeGraph>>,
}

impl Verifier {
    pub fn new(t: DynkinType, opts: VerifyOptions) -> Result<Verifier> {
        let cat = Catalog::enumerate(t)?;
        Verifier::from_catalog(cat, opts)
    }

    pub fn from_catalog(cat: Catalog, opts: VerifyOptions) -> Result<Verifier> {
        if opts.cap < 3 {
            return Err(Error::Invalid(format!("resolution cap {} is below 3", opts.cap)));
        }
        let initial = initial_module(&cat)?;
        Ok(Verifier { cat, opts, initial, graph: OnceLock::new() })
    }

    fn graph_allowed(&self) -> bool {
        self.cat.dynkin().rank() <= 3 || self.opts.deep
    }

    fn graph(&self) -> Result<&ExchangeGraph> {
        self.graph
            .get_or_init(|| exchange_graph(&self.cat, &self.initial, GraphOptions::default(), None))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Vertex orders to run per-vertex checks on.
    fn vertex_orders(&self) -> Result<Vec<Vec<CatalogId>>> {
        if self.graph_allowed() {
            Ok(self.graph()?.vertices.iter().map(|v| v.order.clone()).collect())
        } else {
            Ok(vec![self.initial.clone()])
        }
    }

    pub fn run(&self, suite: &str) -> Result<Report> {
        let start = Instant::now();
        let mut tally = Tally::default();
        let mut skipped = Vec::new();
        let names: Vec<&str> = if suite == "all" {
            SUITES.iter().copied().filter(|s| *s != "all").collect()
        } else if SUITES.contains(&suite) {
            vec![suite]
        } else {
            return Err(Error::Invalid(format!("unknown suite {suite}; expected one of {}", SUITES.join(", "))));
        };
        for s in names {
            match s {
                "counts" => self.counts(&mut tally, &mut skipped)?,
                "golden" => self.golden(&mut tally, &mut skipped)?,
                "thm-mutation" => self.graph_tags(
                    &[
                        "thm-mutation",
                        "cor-mutation4",
                        "cor-mutation5",
                        "exchange-middles",
                        "middles-disjoint",
                        "ext-pair",
                        "involution",
                    ],
                    &mut tally,
                    &mut skipped,
                )?,
                "prop-mutation3" => self.graph_tags(&["prop-mutation3"], &mut tally, &mut skipped)?,
                "thm-quivershape" => self.quivershape(&mut tally, &mut skipped)?,
                "homological" => self.homological(&mut tally)?,
                "functor" => self.functor(&mut tally)?,
                "thm-multform" => self.multform(&mut tally)?,
                "cluster" => self.cluster(&mut tally, &mut skipped)?,
                "endo" => self.endo(&mut tally)?,
                _ => unreachable!(),
            }
        }
        skipped.sort();
        skipped.dedup();
        Ok(Report {
            dynkin: self.cat.dynkin().to_string(),
            suite: suite.to_string(),
            tally,
            skipped,
            elapsed_ms: start.elapsed().as_millis(),
        })
    }

    fn counts(&self, tally: &mut Tally, skipped: &mut Vec<(String, String)>) -> Result<()> {
        let cat = &self.cat;
        let Some((n_cat, r, n_graph)) = expected_counts(cat.dynkin()) else {
            return Err(Error::UnsupportedType(cat.dynkin().to_string()));
        };
        tally.record("catalog-count", cat.len() == n_cat, || format!("{} indecomposables, expected {n_cat}", cat.len()));
        for e in cat.entries() {
            tally.record("catalog-rigid", e.rigid, || format!("#{} ({}) is not rigid", e.id, e.profile));
        }
        tally.record("rank", self.initial.len() == r, || format!("r = {}, expected {r}", self.initial.len()));
        if self.graph_allowed() {
            let g = self.graph()?;
            tally.record("graph-vertices", g.vertices.len() == n_graph, || {
                format!("{} vertices, expected {n_graph}", g.vertices.len())
            });
            tally.record("graph-regular", g.is_regular(), || "vertex degrees differ from r − n".into());
        } else {
            skipped.push(("graph-vertices".into(), "requires --deep".into()));
        }
        Ok(())
    }

    fn golden(&self, tally: &mut Tally, skipped: &mut Vec<(String, String)>) -> Result<()> {
        let Some(g) = golden(self.cat.dynkin()) else {
            skipped.push(("golden".into(), format!("no reference matrices for {}", self.cat.dynkin())));
            return Ok(());
        };
        let d = exchange_data(&self.cat, &self.initial)?;
        let s = s_matrix(&d.ringel, g.k)?;
        let m = mutate(&self.cat, &self.initial, g.k)?;
        let d2 = exchange_data(&self.cat, &m.result)?;
        let checks: [(&str, &IntMatrix, &IntMatrix); 5] = [
            ("C_T", &d.cartan, &g.c_t),
            ("R_T", &d.ringel, &g.r_t),
            ("S", &s, &g.s),
            ("C_T*", &d2.cartan, &g.c_star),
            ("R_T*", &d2.ringel, &g.r_star),
        ];
        for (name, got, want) in checks {
            tally.record("golden", got == want, || format!("{name}:\n{}", intmat::render(got)));
        }
        let st = intmat::transpose(&s);
        tally.record("golden", intmat::mul(&intmat::mul(&s, &d.cartan), &st) == g.c_star, || "S C_T Sᵗ".into());
        tally.record("golden", intmat::mul(&intmat::mul(&st, &d.ringel), &s) == g.r_star, || "Sᵗ R_T S".into());
        Ok(())
    }

    fn graph_tags(&self, tags: &[&str], tally: &mut Tally, skipped: &mut Vec<(String, String)>) -> Result<()> {
        if !self.graph_allowed() {
            for t in tags {
                skipped.push((t.to_string(), "requires --deep".into()));
            }
            return Ok(());
        }
        let g = self.graph()?;
        for tag in tags {
            if let Some(&c) = g.tally.counts.get(*tag) {
                let e = tally.counts.entry(tag.to_string()).or_insert((0, 0));
                e.0 += c.0;
                e.1 += c.1;
            }
        }
        for f in &g.tally.failures {
            if tags.iter().any(|t| f.starts_with(&format!("{t}:"))) {
                tally.failures.push(f.clone());
            }
        }
        Ok(())
    }

    fn quivershape(&self, tally: &mut Tally, skipped: &mut Vec<(String, String)>) -> Result<()> {
        let cap = self.opts.cap;
        for order in self.vertex_orders()? {
            let d = exchange_data(&self.cat, &order)?;
            let shape: Vec<String> = d
                .violations()
                .into_iter()
                .filter(|v| v.contains("loop") || v.contains("2-cycle") || v.contains("sink") || v.contains("source"))
                .collect();
            tally.record("thm-quivershape", shape.is_empty(), || format!("{order:?}: {}", shape.join(", ")));
        }
        let orders = self.vertex_orders()?;
        let parts: Vec<Result<Tally>> = orders.par_iter().map(|o| vertex_homological(&self.cat, o, cap)).collect();
        for p in parts {
            tally.merge(p?);
        }
        if !self.graph_allowed() {
            skipped.push(("thm-quivershape".into(), "initial vertex only; --deep covers the graph".into()));
        }
        Ok(())
    }

    fn homological(&self, tally: &mut Tally) -> Result<()> {
        let cat = &self.cat;
        let lambda = Lambda::new(cat.dynkin());
        let n = cat.len();
        let rows: Vec<Result<Tally>> = (0..n)
            .into_par_iter()
            .map(|x| {
                let mut t = Tally::default();
                for y in 0..n {
                    let e = ext1_dim(cat.rep(x), cat.rep(y))?;
                    let o = lambda.ext1_dim_oracle(cat.rep(x), cat.rep(y))?;
                    t.record("ext1-oracle", e == o, || format!("Ext¹(#{x}, #{y}) = {e}, oracle {o}"));
                    let back = ext1_dim(cat.rep(y), cat.rep(x))?;
                    t.record("ext1-symmetry", e == back, || format!("#{x}, #{y}: {e} vs {back}"));
                    t.record("ext1-formula", cat.ext1(x, y) == e, || format!("#{x}, #{y}"));
                    if x <= y {
                        let m = Module::direct_sum(cat.rep(x), cat.rep(y));
                        let self_ext = ext1_dim(&m, &m)?;
                        t.record("ext1-even", self_ext % 2 == 0, || format!("#{x} ⊕ #{y}: {self_ext}"));
                    }
                }
                let self_ext = ext1_dim(cat.rep(x), cat.rep(x))?;
                let c = orbit_codim(cat.rep(x))?;
                t.record("orbit-codim", 2 * c == self_ext, || format!("#{x}: codim {c}, Ext¹ {self_ext}"));
                Ok(t)
            })
            .collect();
        for r in rows {
            tally.merge(r?);
        }
        Ok(())
    }

    fn functor(&self, tally: &mut Tally) -> Result<()> {
        let cap = self.opts.cap;
        let orders = self.vertex_orders()?;
        let parts: Vec<Result<Tally>> = orders.par_iter().map(|o| vertex_functor(&self.cat, o, cap)).collect();
        for p in parts {
            tally.merge(p?);
        }
        if self.cat.dynkin().rank() == 2 {
            let e = EndoAlgebra::new(&self.cat, &self.initial)?;
            // layers of F_T(X), socle first, over the positions T1, T3, T4
            let table: [(&str, Vec<Vec<usize>>); 4] = [
                ("1", vec![vec![0, 0, 1], vec![1, 0, 0]]),
                ("2", vec![vec![0, 1, 0]]),
                ("1 / 2", vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]),
                ("2 / 1", vec![vec![0, 1, 0], vec![0, 0, 1]]),
            ];
            for (p, layers) in table {
                let id = self.cat.by_profile(p).ok_or_else(|| Error::NotInCatalog(p.into()))?;
                let got = e.ft_module(&self.cat, id)?.socle_layers();
                tally.record("ft-table", got == layers, || format!("F_T({p}) has layers {got:?}"));
            }
        }
        Ok(())
    }

    fn multform(&self, tally: &mut Tally) -> Result<()> {
        let cat = &self.cat;
        let phi = PhiTable::new(cat)?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.opts.seed);
        let n = cat.len();
        let small = |ids: &[CatalogId]| ids.iter().map(|&i| cat.rep(i).total_dim()).sum::<usize>() <= MAX_PHI_DIM;
        let mut pairs: Vec<(CatalogId, CatalogId)> =
            (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).filter(|&(a, b)| small(&[a, b])).collect();
        let exhaustive = cat.dynkin().rank() == 2;
        if !exhaustive {
            pairs.shuffle(&mut rng);
            pairs.truncate(20);
        }
        for &(a, b) in &pairs {
            let sum = Module::direct_sum(cat.rep(a), cat.rep(b));
            let direct = phi_evaluate(&sum, phi.pattern())?;
            let prod = phi.get(a)?.mul(&phi.get(b)?);
            tally.record("multiplicativity", direct == prod, || format!("#{a} ⊕ #{b}: {direct} vs {prod}"));
        }
        let mut ext_pairs: Vec<(CatalogId, CatalogId)> = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| cat.ext1(y, x) == 1 && small(&[x, y]))
            .collect();
        if !exhaustive {
            // unordered: φ_X φ_Y is symmetric in X and Y
            ext_pairs.retain(|&(x, y)| x < y);
            ext_pairs.shuffle(&mut rng);
            ext_pairs.truncate(10);
        }
        for (x, y) in ext_pairs {
            let c = phi.multform(x, y)?;
            tally.record("thm-multform", c.holds, || {
                format!("#{x}, #{y}: {} ≠ {} (E1 = {}, E2 = {})", c.lhs, c.rhs, c.e1, c.e2)
            });
        }
        if exhaustive {
            let id = |p: &str| cat.by_profile(p).ok_or_else(|| Error::NotInCatalog(p.into()));
            let lhs = phi.get(id("1")?)?.mul(&phi.get(id("2")?)?);
            let rhs = phi.get(id("1 / 2")?)?.add(&phi.get(id("2 / 1")?)?);
            tally.record("phi-golden", lhs == rhs && lhs.to_string() == "t1*t2 + t2*t3", || format!("{lhs} vs {rhs}"));
        }
        Ok(())
    }

    fn cluster(&self, tally: &mut Tally, skipped: &mut Vec<(String, String)>) -> Result<()> {
        self.graph_tags(&["regular", "seed-consistency", "seed-matrix", "laurent", "variables-well-defined"], tally, skipped)?;
        if !self.graph_allowed() {
            skipped.push(("phi-exchange".into(), "requires --deep".into()));
            skipped.push(("connected".into(), "requires --deep".into()));
            return Ok(());
        }
        let g = self.graph()?;
        if self.cat.dynkin().rank() <= 3 {
            let phi = PhiTable::new(&self.cat)?;
            for e in &g.directed {
                let v = &g.vertices[e.from];
                let ok = phi.exchange_relation(&v.order, &v.data.b, e.k, e.added)?;
                tally.record("phi-exchange", ok, || format!("vertex {} position {}", e.from, e.k + 1));
            }
        } else {
            skipped.push(("phi-exchange".into(), "A2 and A3 only".into()));
        }
        let found: Vec<&ModuleSum> = g.vertices.iter().map(|v| &v.sum).collect();
        let search = complete_rigid_search(&self.cat);
        let missing = search.iter().filter(|s| !found.contains(s)).count();
        tally.record("connected", missing == 0 && search.len() == found.len(), || {
            format!("{missing} complete rigid modules outside the graph")
        });
        let mons = cluster_monomials(g, 2)?;
        let mut forms: Vec<String> = mons.values().map(|m| m.to_string()).collect();
        let total = forms.len();
        forms.sort();
        forms.dedup();
        tally.record("monomials-distinct", forms.len() == total, || "two cluster monomials coincide".into());
        tally.record("monomials-laurent", mons.values().all(|m| m.is_laurent()), || "non-Laurent monomial".into());
        Ok(())
    }

    fn endo(&self, tally: &mut Tally) -> Result<()> {
        for order in self.vertex_orders()? {
            let d = exchange_data(&self.cat, &order)?;
            let viol = d.violations();
            tally.record("exchange-data", viol.is_empty(), || format!("{order:?}: {}", viol.join(", ")));
            let e = EndoAlgebra::new(&self.cat, &order)?;
            let sum_c: i64 = d.cartan.iter().flatten().sum();
            tally.record("endo-dim", e.dim() as i64 == sum_c, || format!("dim E = {}, Σ C_T = {sum_c}", e.dim()));
            let arrows: usize = d.arrows.iter().flatten().sum();
            tally.record("endo-arrows", e.arrow_count() == arrows, || format!("{order:?}"));
            tally.record("endo-associative", e.alg.is_associative(), || format!("{order:?}"));
        }
        Ok(())
    }
}

/// `gl.dim E = dom.dim E = 3`, `Ext^{1,2}(S, S) = 0` for simple `E`-modules,
/// and `Ext^{3−i}(S_X, S) = Ext^i(S, S_X)` for `X` non-projective.
pub fn vertex_homological(cat: &Catalog, order: &[CatalogId], cap: usize) -> Result<Tally> {
    let mut t = Tally::default();
    let e = EndoAlgebra::new(cat, order)?;
    let gl = e.alg.global_dimension(cap)?;
    t.record("gldim-3", gl == Dimension::Finite(3), || format!("{order:?}: gl.dim {gl:?}"));
    let dom = e.alg.dominant_dimension(cap)?;
    t.record("domdim-3", dom == Dimension::Finite(3), || format!("{order:?}: dom.dim {dom:?}"));
    let r = order.len();
    for v in 0..r {
        for k in 1..=2 {
            let d = e.alg.ext_dim(v, v, k, cap)?;
            t.record("ext-simples", d == Some(0), || format!("{order:?}: Ext^{k}(S{}, S{}) = {d:?}", v + 1, v + 1));
        }
    }
    let ex = order.iter().filter(|&&i| !cat.entry(i).projective).count();
    for x in 0..ex {
        for s in 0..r {
            for i in 0..=3 {
                let a = e.alg.ext_dim(x, s, 3 - i, cap)?;
                let b = e.alg.ext_dim(s, x, i, cap)?;
                t.record("calabi-yau", a == b, || format!("{order:?}: S{} S{} degree {i}", x + 1, s + 1));
            }
        }
    }
    Ok(t)
}

/// `pd F_T(X) ≤ 1`, `F_T` reflects isomorphism on catalog modules, and
/// `F_T(T_i)` is the `i`-th indecomposable projective.
pub fn vertex_functor(cat: &Catalog, order: &[CatalogId], cap: usize) -> Result<Tally> {
    let mut t = Tally::default();
    let e = EndoAlgebra::new(cat, order)?;
    let fts = (0..cat.len()).map(|x| e.ft_module(cat, x)).collect::<Result<Vec<_>>>()?;
    for (x, m) in fts.iter().enumerate() {
        let pd = e.alg.projective_dimension(m, cap)?;
        t.record("ft-pd", matches!(pd, Dimension::Finite(d) if d <= 1), || format!("{order:?}: pd F_T(#{x}) = {pd:?}"));
    }
    for x in 0..fts.len() {
        for y in 0..x {
            let iso = fts[x].dims() == fts[y].dims() && find_isomorphism(&fts[x], &fts[y], 3)?.is_some();
            t.record("ft-reflects-iso", !iso, || format!("{order:?}: F_T(#{x}) ≅ F_T(#{y})"));
        }
    }
    for (pos, &id) in order.iter().enumerate() {
        let ok = is_isomorphic(&fts[id], e.alg.projective(pos))?;
        t.record("ft-projectives", ok, || format!("{order:?}: F_T(T{}) is not P{}", pos + 1, pos + 1));
    }
    Ok(t)
}

pub fn run_suite(t: DynkinType, suite: &str, opts: VerifyOptions) -> Result<Report> {
    Verifier::new(t, opts)?.run(suite)
}
