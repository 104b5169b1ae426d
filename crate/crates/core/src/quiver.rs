//! Dynkin quivers, their doubles, and the symmetric bilinear form.
//!
//! Vertices are 0-based internally and 1-based in every user-facing string
//! and JSON document. Orientations are fixed:
//!
//! | family | arrows (1-based)                                   |
//! |--------|----------------------------------------------------|
//! | A_n    | 1→2, 2→3, …, (n−1)→n                               |
//! | D_n    | 1→3, 2→3, 3→4, …, (n−1)→n                          |
//! | E_n    | 1→3, 2→4, 3→4, 4→5, …, (n−1)→n (Bourbaki labels)   |
//!
//! Arrow `a{k}` is the k-th arrow of this list; its reverse in the double
//! quiver is `a{k}*`. Double quivers list the original arrows first.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DynkinType {
    family: Family,
    rank: usize,
}

impl DynkinType {
    pub fn new(family: Family, rank: usize) -> Result<DynkinType> {
        let ok = match family {
            Family::A => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
        };
        if ok {
            Ok(DynkinType { family, rank })
        } else {
            Err(Error::InvalidType(format!("{family:?}{rank}")))
        }
    }

    pub fn a(n: usize) -> DynkinType {
        DynkinType::new(Family::A, n).expect("A_n needs n >= 2")
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of positive roots.
    pub fn positive_roots(&self) -> usize {
        let n = self.rank;
        match (self.family, n) {
            (Family::A, _) => n * (n + 1) / 2,
            (Family::D, _) => n * n - n,
            (Family::E, 6) => 36,
            (Family::E, 7) => 63,
            (Family::E, _) => 120,
        }
    }

    /// Arrows of the fixed orientation as 0-based (source, target) pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.rank;
        match self.family {
            Family::A => (0..n - 1).map(|i| (i, i + 1)).collect(),
            Family::D => {
                let mut e = vec![(0, 2), (1, 2)];
                e.extend((2..n - 1).map(|i| (i, i + 1)));
                e
            }
            Family::E => {
                let mut e = vec![(0, 2), (1, 3), (2, 3)];
                e.extend((3..n - 1).map(|i| (i, i + 1)));
                e
            }
        }
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for DynkinType {
    type Err = Error;

    fn from_str(s: &str) -> Result<DynkinType> {
        let s = s.trim();
        let bad = || Error::InvalidType(s.to_string());
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('D') => Family::D,
            Some('E') => Family::E,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().trim_start_matches('_').parse().map_err(|_| bad())?;
        DynkinType::new(family, rank)
    }
}

impl Serialize for DynkinType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for DynkinType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub id: String,
    pub src: usize,
    pub tgt: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: usize,
    arrows: Vec<Arrow>,
}

#[derive(Serialize, Deserialize)]
struct ArrowJson {
    id: String,
    src: usize,
    tgt: usize,
}

#[derive(Serialize, Deserialize)]
struct QuiverJson {
    vertices: usize,
    arrows: Vec<ArrowJson>,
}

impl Quiver {
    pub fn new(vertices: usize, arrows: Vec<Arrow>) -> Result<Quiver> {
        for (i, a) in arrows.iter().enumerate() {
            if a.src >= vertices || a.tgt >= vertices {
                return Err(Error::Invalid(format!("arrow {} leaves the vertex range", a.id)));
            }
            if arrows[..i].iter().any(|b| b.id == a.id) {
                return Err(Error::Invalid(format!("duplicate arrow id {}", a.id)));
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }

    /// JSON with 1-based vertices.
    pub fn to_json(&self) -> serde_json::Value {
        let j = QuiverJson {
            vertices: self.vertices,
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowJson { id: a.id.clone(), src: a.src + 1, tgt: a.tgt + 1 })
                .collect(),
        };
        serde_json::to_value(j).expect("quiver serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Quiver> {
        let j: QuiverJson = serde_json::from_value(v.clone()).map_err(|e| Error::Invalid(e.to_string()))?;
        let mut arrows = Vec::with_capacity(j.arrows.len());
        for a in j.arrows {
            if a.src == 0 || a.tgt == 0 {
                return Err(Error::Invalid("vertices are numbered from 1".into()));
            }
            arrows.push(Arrow { id: a.id, src: a.src - 1, tgt: a.tgt - 1 });
        }
        Quiver::new(j.vertices, arrows)
    }
}

pub fn build_quiver(t: DynkinType) -> Quiver {
    let arrows = t
        .edges()
        .into_iter()
        .enumerate()
        .map(|(k, (s, d))| Arrow { id: format!("a{}", k + 1), src: s, tgt: d })
        .collect();
    Quiver { vertices: t.rank(), arrows }
}

/// Appends `α*` with swapped endpoints for every arrow `α`.
pub fn double_quiver(q: &Quiver) -> Quiver {
    let mut arrows = q.arrows.clone();
    arrows.extend(q.arrows.iter().map(|a| Arrow { id: format!("{}*", a.id), src: a.tgt, tgt: a.src }));
    Quiver { vertices: q.vertices, arrows }
}

/// `(d,e) = 2 Σ d_i e_i − Σ_α (d_{s(α)} e_{t(α)} + e_{s(α)} d_{t(α)})`.
pub fn bilinear_form(t: DynkinType, d: &[i64], e: &[i64]) -> Result<i64> {
    bilinear_form_quiver(&build_quiver(t), d, e)
}

pub fn bilinear_form_quiver(q: &Quiver, d: &[i64], e: &[i64]) -> Result<i64> {
    let n = q.vertices();
    if d.len() != n || e.len() != n {
        return Err(Error::Shape(format!("dimension vectors of length {} and {} for {n} vertices", d.len(), e.len())));
    }
    let diag: i64 = d.iter().zip(e).map(|(a, b)| a * b).sum();
    let off: i64 = q.arrows().iter().map(|a| d[a.src] * e[a.tgt] + e[a.src] * d[a.tgt]).sum();
    Ok(2 * diag - off)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts() {
        assert_eq!(DynkinType::a(2).positive_roots(), 3);
        assert_eq!(DynkinType::a(3).positive_roots(), 6);
        assert_eq!("E8".parse::<DynkinType>().unwrap().positive_roots(), 120);
        assert_eq!("D4".parse::<DynkinType>().unwrap().positive_roots(), 12);
        assert!("A1".parse::<DynkinType>().is_err());
        assert!("E9".parse::<DynkinType>().is_err());
    }

    #[test]
    fn double_has_twice_the_arrows() {
        let q = build_quiver(DynkinType::a(2));
        assert_eq!(q.arrows().len(), 1);
        let d = double_quiver(&q);
        assert_eq!(d.arrows().len(), 2);
        assert_eq!(d.arrows()[1].id, "a1*");
        assert_eq!((d.arrows()[1].src, d.arrows()[1].tgt), (1, 0));
    }

    #[test]
    fn form_examples() {
        let a2 = DynkinType::a(2);
        assert_eq!(bilinear_form(a2, &[1, 0], &[1, 0]).unwrap(), 2);
        assert_eq!(bilinear_form(a2, &[1, 0], &[0, 1]).unwrap(), -1);
        assert_eq!(bilinear_form(DynkinType::a(3), &[1, 1, 1], &[1, 1, 1]).unwrap(), 2);
        assert!(bilinear_form(a2, &[1], &[1, 0]).is_err());
    }

    #[test]
    fn quiver_json_round_trip() {
        let q = build_quiver("E6".parse().unwrap());
        let v = q.to_json();
        assert_eq!(v["arrows"][0]["src"], 1);
        assert_eq!(Quiver::from_json(&v).unwrap(), q);
    }
}
