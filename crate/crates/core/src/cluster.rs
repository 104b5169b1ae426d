//! Matrix mutation, seeds of Laurent expressions and the exchange graph of
//! basic complete rigid modules.
//!
//! The exchange graph is built by breadth-first search. Each frontier is
//! mutated in parallel; new vertices are then inserted sequentially in
//! frontier order, so vertex numbering does not depend on scheduling. A new
//! vertex keeps the summand order of the vertex it was first reached from,
//! with the mutated position replaced.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::approximation::{mutate, Mutation};
use crate::catalog::{Catalog, CatalogId, ModuleSum};
use crate::endo_quiver::{exchange_data, s_matrix, ExchangeData};
use crate::error::{Error, Result};
use crate::intmat::{self, IntMatrix};
use crate::poly::LaurentExpr;

/// Fomin–Zelevinsky mutation of an `r × m` matrix in column `k < m`.
pub fn matrix_mutate(b: &[Vec<i64>], k: usize) -> Result<IntMatrix> {
    let m = b.first().map_or(0, Vec::len);
    if k >= m || k >= b.len() {
        return Err(Error::OutOfRange(k + 1, m));
    }
    Ok((0..b.len())
        .map(|i| {
            (0..m)
                .map(|j| {
                    if i == k || j == k {
                        -b[i][j]
                    } else {
                        b[i][j] + (b[i][k].abs() * b[k][j] + b[i][k] * b[k][j].abs()) / 2
                    }
                })
                .collect()
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    pub vars: Vec<LaurentExpr>,
    /// `r × (r − n)` exchange matrix.
    pub b: IntMatrix,
}

impl Seed {
    /// Variables `x_1, …, x_r`.
    pub fn initial(b: IntMatrix) -> Seed {
        let r = b.len();
        Seed { vars: (0..r).map(|i| LaurentExpr::var(r, i)).collect(), b }
    }

    pub fn exchangeable(&self) -> usize {
        self.b.first().map_or(0, Vec::len)
    }

    /// `x_k' = (∏_{b_ik>0} x_i^{b_ik} + ∏_{b_ik<0} x_i^{−b_ik}) / x_k`
    pub fn mutate(&self, k: usize) -> Result<Seed> {
        if k >= self.exchangeable() {
            return Err(Error::OutOfRange(k + 1, self.exchangeable()));
        }
        let n = self.vars.len();
        let mut pos = LaurentExpr::one(n);
        let mut neg = LaurentExpr::one(n);
        for (i, row) in self.b.iter().enumerate() {
            let e = row[k];
            if e > 0 {
                pos = pos.mul(&self.vars[i].pow(e as u32));
            } else if e < 0 {
                neg = neg.mul(&self.vars[i].pow((-e) as u32));
            }
        }
        let mut vars = self.vars.clone();
        vars[k] = pos.add(&neg).div(&self.vars[k]);
        Ok(Seed { vars, b: matrix_mutate(&self.b, k)? })
    }

    /// Reorders positions: new position `i` is old position `perm[i]`.
    /// `perm` must fix the exchangeable block setwise.
    pub fn permuted(&self, perm: &[usize]) -> Seed {
        let ex = self.exchangeable();
        Seed {
            vars: perm.iter().map(|&p| self.vars[p].clone()).collect(),
            b: perm.iter().map(|&p| (0..ex).map(|j| self.b[p][perm[j]]).collect()).collect(),
        }
    }
}

fn permute_square(m: &[Vec<i64>], perm: &[usize]) -> IntMatrix {
    perm.iter().map(|&p| perm.iter().map(|&q| m[p][q]).collect()).collect()
}

/// Exchange data with positions reordered: new position `i` is old `perm[i]`.
pub fn permute_data(d: &ExchangeData, perm: &[usize]) -> ExchangeData {
    let arrows: Vec<Vec<usize>> = perm.iter().map(|&p| perm.iter().map(|&q| d.arrows[p][q]).collect()).collect();
    let b = permute_square(&d.b, perm);
    ExchangeData {
        order: perm.iter().map(|&p| d.order[p]).collect(),
        exchangeable: d.exchangeable,
        b_circ: intmat::left_columns(&b, d.exchangeable),
        arrows,
        b,
        cartan: permute_square(&d.cartan, perm),
        ringel: permute_square(&d.ringel, perm),
    }
}

/// Positions of `target`'s entries inside `source`.
fn permutation(source: &[CatalogId], target: &[CatalogId]) -> Vec<usize> {
    target.iter().map(|t| source.iter().position(|s| s == t).expect("same summands")).collect()
}

#[derive(Clone, Debug)]
pub struct Vertex {
    pub sum: ModuleSum,
    pub order: Vec<CatalogId>,
    pub data: ExchangeData,
    pub seed: Option<Seed>,
    /// BFS tree parent and the position mutated there.
    pub parent: Option<(usize, usize)>,
}

/// Mutation of vertex `from` at position `k`, landing on `to`.
#[derive(Clone, Debug)]
pub struct DirectedEdge {
    pub from: usize,
    pub k: usize,
    pub to: usize,
    /// Position of the new summand in `to`'s stored order.
    pub to_pos: usize,
    pub order_after: Vec<CatalogId>,
    pub removed: CatalogId,
    pub added: CatalogId,
    pub left_middle: ModuleSum,
    pub right_middle: ModuleSum,
}

/// Pass/fail counts per named check, with the first few failure messages.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Tally {
    pub counts: BTreeMap<String, (usize, usize)>,
    pub failures: Vec<String>,
}

impl Tally {
    pub fn record(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        let e = self.counts.entry(name.to_string()).or_insert((0, 0));
        if ok {
            e.0 += 1;
        } else {
            e.1 += 1;
            if self.failures.len() < 50 {
                self.failures.push(format!("{name}: {}", detail()));
            }
        }
    }

    pub fn merge(&mut self, other: Tally) {
        for (k, (p, f)) in other.counts {
            let e = self.counts.entry(k).or_insert((0, 0));
            e.0 += p;
            e.1 += f;
        }
        for f in other.failures {
            if self.failures.len() < 50 {
                self.failures.push(f);
            }
        }
    }

    pub fn all_passed(&self) -> bool {
        self.counts.values().all(|&(_, f)| f == 0)
    }

    pub fn passed(&self, name: &str) -> Option<bool> {
        self.counts.get(name).map(|&(p, f)| f == 0 && p > 0)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GraphOptions {
    pub seeds: bool,
    pub checks: bool,
}

impl Default for GraphOptions {
    fn default() -> Self {
        GraphOptions { seeds: true, checks: true }
    }
}

#[derive(Clone, Debug)]
pub struct ExchangeGraph {
    pub exchangeable: usize,
    pub vertices: Vec<Vertex>,
    pub directed: Vec<DirectedEdge>,
    pub tally: Tally,
}

impl ExchangeGraph {
    /// Undirected edges `(a, b, position at a)` with `a < b`.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out: Vec<(usize, usize, usize)> =
            self.directed.iter().filter(|e| e.from < e.to).map(|e| (e.from, e.to, e.k)).collect();
        out.sort();
        out
    }

    pub fn is_regular(&self) -> bool {
        let mut nb: Vec<HashSet<usize>> = vec![HashSet::new(); self.vertices.len()];
        for e in &self.directed {
            nb[e.from].insert(e.to);
            nb[e.to].insert(e.from);
        }
        nb.iter().all(|s| s.len() == self.exchangeable)
    }

    /// Cluster variable attached to each catalog id reached by the search.
    pub fn cluster_variables(&self) -> BTreeMap<CatalogId, LaurentExpr> {
        let mut out = BTreeMap::new();
        for v in &self.vertices {
            if let Some(s) = &v.seed {
                for (i, &id) in v.order.iter().enumerate() {
                    out.entry(id).or_insert_with(|| s.vars[i].clone());
                }
            }
        }
        out
    }

    pub fn to_json(&self, cat: &Catalog) -> serde_json::Value {
        let names = crate::approximation::initial_variable_names(cat);
        let vertices: Vec<serde_json::Value> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let mut o = serde_json::json!({
                    "id": i,
                    "summands": v.order,
                    "profiles": v.order.iter().map(|&x| cat.entry(x).profile.clone()).collect::<Vec<_>>(),
                    "b_circ": v.data.b_circ,
                });
                if let Some(s) = &v.seed {
                    o["seed"] = s.vars.iter().map(|x| x.render(&names)).collect::<Vec<_>>().into();
                }
                o
            })
            .collect();
        let edges: Vec<serde_json::Value> = self
            .edges()
            .into_iter()
            .map(|(a, b, k)| serde_json::json!({"from": a, "to": b, "direction": k + 1}))
            .collect();
        serde_json::json!({
            "type": cat.dynkin().to_string(),
            "vertex_count": self.vertices.len(),
            "edge_count": edges.len(),
            "vertices": vertices,
            "edges": edges,
        })
    }

    pub fn to_dot(&self, cat: &Catalog) -> String {
        let mut s = String::from("graph exchange {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let label: Vec<String> = v.order[..self.exchangeable].iter().map(|&x| cat.entry(x).profile.clone()).collect();
            s.push_str(&format!("  v{i} [label=\"{}\"];\n", label.join(" | ")));
        }
        for (a, b, k) in self.edges() {
            s.push_str(&format!("  v{a} -- v{b} [label=\"{}\"];\n", k + 1));
        }
        s.push_str("}\n");
        s
    }
}

fn mutate_all(cat: &Catalog, order: &[CatalogId], ex: usize) -> Result<Vec<Mutation>> {
    (0..ex).map(|k| mutate(cat, order, k)).collect()
}

/// Breadth-first closure of `initial` under mutation at every exchangeable
/// position. `progress` receives (vertices, frontier size) after each level.
pub fn exchange_graph(
    cat: &Catalog,
    initial: &[CatalogId],
    opts: GraphOptions,
    progress: Option<&(dyn Fn(usize, usize) + Sync)>,
) -> Result<ExchangeGraph> {
    let data0 = exchange_data(cat, initial)?;
    let ex = data0.exchangeable;
    let seed0 = opts.seeds.then(|| Seed::initial(data0.b_circ.clone()));
    let mut vertices = vec![Vertex {
        sum: ModuleSum::from_ids(initial),
        order: initial.to_vec(),
        data: data0,
        seed: seed0,
        parent: None,
    }];
    let mut index: HashMap<ModuleSum, usize> = HashMap::new();
    index.insert(vertices[0].sum.clone(), 0);
    let mut directed = Vec::new();
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let results: Vec<Result<Vec<Mutation>>> =
            frontier.par_iter().map(|&u| mutate_all(cat, &vertices[u].order, ex)).collect();
        let mut fresh: Vec<(usize, Vec<CatalogId>, usize, usize)> = Vec::new();
        let mut pending = Vec::new();
        for (&u, res) in frontier.iter().zip(results) {
            for m in res? {
                let key = ModuleSum::from_ids(&m.result);
                let to = match index.get(&key) {
                    Some(&v) => v,
                    None => {
                        let v = index.len();
                        index.insert(key, v);
                        fresh.push((v, m.result.clone(), u, m.position));
                        v
                    }
                };
                pending.push((u, to, m));
            }
        }
        let new_data: Vec<Result<ExchangeData>> = fresh.par_iter().map(|(_, order, _, _)| exchange_data(cat, order)).collect();
        let mut next = Vec::with_capacity(fresh.len());
        for ((v, order, u, k), data) in fresh.into_iter().zip(new_data) {
            debug_assert_eq!(v, vertices.len());
            let seed = match &vertices[u].seed {
                Some(s) => Some(s.mutate(k)?),
                None => None,
            };
            vertices.push(Vertex { sum: ModuleSum::from_ids(&order), order, data: data?, seed, parent: Some((u, k)) });
            next.push(v);
        }
        for (u, to, m) in pending {
            let added = m.result[m.position];
            let to_pos = vertices[to].order.iter().position(|&x| x == added).expect("new summand present");
            directed.push(DirectedEdge {
                from: u,
                k: m.position,
                to,
                to_pos,
                order_after: m.result,
                removed: m.left.x,
                added,
                left_middle: m.left.middle,
                right_middle: m.right.middle,
            });
        }
        if let Some(p) = progress {
            p(vertices.len(), next.len());
        }
        frontier = next;
    }
    let mut g = ExchangeGraph { exchangeable: ex, vertices, directed, tally: Tally::default() };
    if opts.checks {
        g.tally = check_graph(cat, &g);
    }
    Ok(g)
}

fn check_edge(cat: &Catalog, g: &ExchangeGraph, e: &DirectedEdge) -> Tally {
    let mut t = Tally::default();
    let u = &g.vertices[e.from];
    let v = &g.vertices[e.to];
    let perm = permutation(&v.order, &e.order_after);
    let after = permute_data(&v.data, &perm);
    let k = e.k;
    let here = || format!("{} --{}--> {}", e.from, k + 1, e.to);
    t.record("thm-mutation", matrix_mutate(&u.data.b_circ, k).ok().as_ref() == Some(&after.b_circ), here);
    let s = s_matrix(&u.data.ringel, k).expect("square");
    let st = intmat::transpose(&s);
    t.record("prop-mutation3", intmat::mul(&intmat::mul(&s, &u.data.cartan), &st) == after.cartan, here);
    t.record("cor-mutation4", intmat::mul(&intmat::mul(&st, &u.data.ringel), &s) == after.ringel, here);
    t.record(
        "cor-mutation5",
        matrix_mutate(&u.data.ringel_circ(), k).ok().as_ref() == Some(&after.ringel_circ()),
        here,
    );
    let mut plus = BTreeMap::new();
    let mut minus = BTreeMap::new();
    for (i, row) in u.data.ringel.iter().enumerate() {
        if row[k] > 0 {
            plus.insert(u.order[i], row[k] as usize);
        } else if row[k] < 0 {
            minus.insert(u.order[i], (-row[k]) as usize);
        }
    }
    t.record("exchange-middles", ModuleSum(plus) == e.left_middle && ModuleSum(minus) == e.right_middle, here);
    t.record("middles-disjoint", e.left_middle.ids().iter().all(|i| !e.right_middle.contains(*i)), here);
    t.record("ext-pair", cat.ext1(e.removed, e.added) == 1 && cat.ext1(e.added, e.removed) == 1, here);
    if let (Some(su), Some(sv)) = (&u.seed, &v.seed) {
        let ok = su.mutate(k).map(|m| m == sv.permuted(&perm)).unwrap_or(false);
        t.record("seed-consistency", ok, here);
    }
    t
}

fn check_graph(cat: &Catalog, g: &ExchangeGraph) -> Tally {
    let mut tally = g
        .directed
        .par_iter()
        .map(|e| check_edge(cat, g, e))
        .reduce(Tally::default, |mut a, b| {
            a.merge(b);
            a
        });
    let back: HashSet<(usize, usize, usize)> = g.directed.iter().map(|e| (e.from, e.k, e.to)).collect();
    for e in &g.directed {
        tally.record("involution", back.contains(&(e.to, e.to_pos, e.from)), || format!("{} --{}--> {}", e.from, e.k + 1, e.to));
    }
    tally.record("regular", g.is_regular(), || "vertex degrees differ from r − n".into());
    for (i, v) in g.vertices.iter().enumerate() {
        let viol = v.data.violations();
        tally.record("thm-quivershape", viol.is_empty(), || format!("vertex {i}: {}", viol.join(", ")));
        if let Some(s) = &v.seed {
            tally.record("seed-matrix", s.b == v.data.b_circ, || format!("vertex {i}"));
            for x in &s.vars {
                tally.record("laurent", x.is_laurent(), || format!("vertex {i}: {x}"));
            }
        }
    }
    if g.vertices.iter().any(|v| v.seed.is_some()) {
        let mut seen: HashMap<CatalogId, &LaurentExpr> = HashMap::new();
        let mut ok = true;
        for v in &g.vertices {
            let s = v.seed.as_ref().expect("seeds everywhere");
            for (i, id) in v.order.iter().enumerate() {
                if let Some(prev) = seen.insert(*id, &s.vars[i]) {
                    ok &= *prev == s.vars[i];
                }
            }
        }
        let distinct: HashSet<&LaurentExpr> = seen.values().copied().collect();
        tally.record("variables-well-defined", ok && distinct.len() == seen.len(), || "module/variable map".into());
    }
    tally
}

/// All basic complete rigid modules by exhaustive search: cliques of size
/// `r − n` among the non-projective entries, plus all projectives.
pub fn complete_rigid_search(cat: &Catalog) -> Vec<ModuleSum> {
    let cand: Vec<CatalogId> = cat.entries().iter().filter(|e| !e.projective && e.rigid).map(|e| e.id).collect();
    let need = cat.dynkin().positive_roots() - cat.lambda.vertices();
    let proj = cat.projective_ids();
    let mut out = Vec::new();
    let mut stack: Vec<CatalogId> = Vec::new();
    fn go(cat: &Catalog, cand: &[CatalogId], start: usize, need: usize, stack: &mut Vec<CatalogId>, proj: &[CatalogId], out: &mut Vec<ModuleSum>) {
        if stack.len() == need {
            let mut ids = stack.clone();
            ids.extend_from_slice(proj);
            out.push(ModuleSum::from_ids(&ids));
            return;
        }
        for i in start..cand.len() {
            let c = cand[i];
            if stack.iter().all(|&s| cat.ext1(s, c) == 0) {
                stack.push(c);
                go(cat, cand, i + 1, need, stack, proj, out);
                stack.pop();
            }
        }
    }
    go(cat, &cand, 0, need, &mut stack, &proj, &mut out);
    out
}

/// Cluster monomials of degree at most `max_degree`, keyed by the rigid
/// module they correspond to. Fails if two different modules give the same
/// reduced expression.
pub fn cluster_monomials(g: &ExchangeGraph, max_degree: usize) -> Result<BTreeMap<ModuleSum, LaurentExpr>> {
    let mut out: BTreeMap<ModuleSum, LaurentExpr> = BTreeMap::new();
    for v in &g.vertices {
        let seed = v.seed.as_ref().ok_or_else(|| Error::Invalid("graph was built without seeds".into()))?;
        let r = v.order.len();
        let n = seed.vars.len();
        // multisets of positions as nondecreasing sequences
        let mut stack: Vec<(Vec<usize>, LaurentExpr)> = vec![(Vec::new(), LaurentExpr::one(n))];
        while let Some((pos, expr)) = stack.pop() {
            let ids: Vec<CatalogId> = pos.iter().map(|&p| v.order[p]).collect();
            out.entry(ModuleSum::from_ids(&ids)).or_insert_with(|| expr.clone());
            if pos.len() < max_degree {
                let from = pos.last().copied().unwrap_or(0);
                for p in from..r {
                    let mut next = pos.clone();
                    next.push(p);
                    stack.push((next, expr.mul(&seed.vars[p])));
                }
            }
        }
    }
    let distinct: HashSet<&LaurentExpr> = out.values().collect();
    if distinct.len() != out.len() {
        return Err(Error::Invalid("two rigid modules give the same cluster monomial".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approximation::initial_module;
    use crate::quiver::DynkinType;

    #[test]
    fn matrix_mutation_examples() {
        let b = vec![vec![0], vec![-1], vec![1]];
        assert_eq!(matrix_mutate(&b, 0).unwrap(), vec![vec![0], vec![1], vec![-1]]);
        assert!(matrix_mutate(&b, 1).is_err());
        let sq = vec![vec![0, 1, -2], vec![-1, 0, 3], vec![2, -3, 0]];
        for k in 0..3 {
            assert_eq!(matrix_mutate(&matrix_mutate(&sq, k).unwrap(), k).unwrap(), sq);
        }
    }

    #[test]
    fn a2_seed() {
        let s = Seed::initial(vec![vec![0], vec![-1], vec![1]]);
        let m = s.mutate(0).unwrap();
        assert_eq!(m.vars[0].to_string(), "(x2 + x3)/x1");
        assert_eq!(m.mutate(0).unwrap(), s);
    }

    #[test]
    fn a2_graph() {
        let cat = Catalog::enumerate(DynkinType::a(2)).unwrap();
        let t = initial_module(&cat).unwrap();
        let g = exchange_graph(&cat, &t, GraphOptions::default(), None).unwrap();
        assert_eq!(g.vertices.len(), 2);
        assert_eq!(g.edges().len(), 1);
        assert!(g.tally.all_passed(), "{:?}", g.tally.failures);
        assert_eq!(g.vertices[1].data.b_circ, vec![vec![0], vec![1], vec![-1]]);
        let mons = cluster_monomials(&g, 1).unwrap();
        let texts: Vec<String> = mons.values().map(|e| e.to_string()).collect();
        assert_eq!(texts.len(), 5);
        assert!(texts.contains(&"1".to_string()) && texts.contains(&"(x2 + x3)/x1".to_string()));
        let names = crate::approximation::initial_variable_names(&cat);
        assert_eq!(g.vertices[1].seed.as_ref().unwrap().vars[0].render(&names), "(x3 + x4)/x1");
        assert_eq!(complete_rigid_search(&cat).len(), 2);
    }
}
