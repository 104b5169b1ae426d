//! Mutation sessions: a basic complete rigid module, its seed and the
//! history of mutations leading to it.

use std::sync::Arc;

use ppalg_core::approximation::{initial_module, initial_variable_names, mutate, Mutation};
use ppalg_core::catalog::{Catalog, CatalogId};
use ppalg_core::cluster::Seed;
use ppalg_core::endo_quiver::{exchange_data, ExchangeData};
use ppalg_core::Error;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistoryEntry {
    /// 1-based position.
    pub k: usize,
    pub removed: String,
    pub added: String,
    /// `0 → T_k → T' → T_k* → 0`
    pub left: String,
    /// `0 → T_k* → T'' → T_k → 0`
    pub right: String,
}

#[derive(Debug)]
pub enum SessionError {
    Domain(Error),
    /// An internal consistency check failed; the payload describes it.
    Bug(Value),
}

impl From<Error> for SessionError {
    fn from(e: Error) -> Self {
        SessionError::Domain(e)
    }
}

pub struct Session {
    pub id: String,
    pub cat: Arc<Catalog>,
    pub order: Vec<CatalogId>,
    pub data: ExchangeData,
    pub seed: Seed,
    pub history: Vec<HistoryEntry>,
    names: Vec<String>,
}

impl Session {
    pub fn create(id: String, cat: Arc<Catalog>) -> Result<Session, Error> {
        let order = initial_module(&cat)?;
        let data = exchange_data(&cat, &order)?;
        let seed = Seed::initial(data.b_circ.clone());
        let names = initial_variable_names(&cat);
        Ok(Session { id, cat, order, data, seed, history: Vec::new(), names })
    }

    /// A fresh session with `ks` (1-based positions) applied in order.
    pub fn replay(id: String, cat: Arc<Catalog>, ks: &[usize]) -> Result<Session, SessionError> {
        let mut s = Session::create(id, cat)?;
        for &k in ks {
            s.mutate(k)?;
        }
        Ok(s)
    }

    /// Mutation at the 1-based position `k`. Checks that mutating again at
    /// `k` returns the previous module and seed before committing.
    pub fn mutate(&mut self, k: usize) -> Result<Mutation, SessionError> {
        let r = self.order.len();
        if k == 0 || k > r {
            return Err(Error::OutOfRange(k, r).into());
        }
        let pos = k - 1;
        let m = mutate(&self.cat, &self.order, pos)?;
        let data = exchange_data(&self.cat, &m.result)?;
        let seed = self.seed.mutate(pos)?;
        let back = mutate(&self.cat, &m.result, pos)?;
        let seed_back = seed.mutate(pos)?;
        let mut problems = Vec::new();
        if back.result != self.order {
            problems.push("mutating twice does not restore the module");
        }
        if seed_back != self.seed {
            problems.push("mutating the seed twice does not restore it");
        }
        if seed.b != data.b_circ {
            problems.push("seed matrix differs from B(T)° of the mutated module");
        }
        if !problems.is_empty() {
            return Err(SessionError::Bug(json!({
                "problems": problems,
                "type": self.cat.dynkin().to_string(),
                "order": self.order,
                "k": k,
                "result": m.result,
                "history": self.history.iter().map(|h| h.k).collect::<Vec<_>>(),
            })));
        }
        self.history.push(HistoryEntry {
            k,
            removed: self.cat.entry(self.order[pos]).profile.clone(),
            added: self.cat.entry(m.result[pos]).profile.clone(),
            left: m.left.render(&self.cat),
            right: m.right.render(&self.cat),
        });
        self.order = m.result.clone();
        self.data = data;
        self.seed = seed;
        Ok(m)
    }

    fn body(&self) -> Value {
        let cat = &self.cat;
        let d = &self.data;
        let summands: Vec<Value> = self
            .order
            .iter()
            .enumerate()
            .map(|(i, &id)| {
                json!({
                    "position": i + 1,
                    "catalog_id": id,
                    "profile": cat.entry(id).profile,
                    "exchangeable": i < d.exchangeable,
                })
            })
            .collect();
        let nodes: Vec<Value> = self
            .order
            .iter()
            .enumerate()
            .map(|(i, &id)| json!({"id": i + 1, "label": cat.entry(id).profile, "exchangeable": i < d.exchangeable}))
            .collect();
        let mut edges = Vec::new();
        for (i, row) in d.arrows.iter().enumerate() {
            for (j, &m) in row.iter().enumerate() {
                if m > 0 {
                    edges.push(json!({"from": i + 1, "to": j + 1, "multiplicity": m}));
                }
            }
        }
        let arrow_count: usize = d.arrows.iter().flatten().sum();
        let variables: Vec<Value> = self
            .seed
            .vars
            .iter()
            .enumerate()
            .map(|(i, x)| json!({"position": i + 1, "catalog_id": self.order[i], "expr": x.render(&self.names)}))
            .collect();
        json!({
            "type": cat.dynkin().to_string(),
            "summands": summands,
            "exchangeable": (1..=d.exchangeable).collect::<Vec<_>>(),
            "quiver": {"nodes": nodes, "edges": edges, "arrow_count": arrow_count},
            "b": d.b,
            "b_circ": d.b_circ,
            "cartan": d.cartan,
            "ringel": d.ringel,
            "cluster_variables": variables,
            "history": self.history,
        })
    }

    /// SHA-256 of the canonical JSON of everything but the session id.
    pub fn state_hash(&self) -> String {
        let digest = Sha256::digest(self.body().to_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn state(&self) -> Value {
        let mut v = self.body();
        v["id"] = json!(self.id);
        v["state_hash"] = json!(self.state_hash());
        v
    }

    pub fn export(&self) -> Value {
        json!({
            "type": self.cat.dynkin().to_string(),
            "history": self.history.iter().map(|h| h.k).collect::<Vec<_>>(),
            "state_hash": self.state_hash(),
        })
    }
}
