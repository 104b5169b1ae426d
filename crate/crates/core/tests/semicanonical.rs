use std::time::Instant;

use ppalg_core::approximation::initial_module;
use ppalg_core::catalog::Catalog;
use ppalg_core::cluster::{exchange_graph, GraphOptions};
use ppalg_core::module::Module;
use ppalg_core::quiver::DynkinType;
use ppalg_core::semicanonical::{phi_evaluate, PhiTable};

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect()
}

#[test]
fn a2_golden_identity() {
    let cat = Catalog::enumerate(DynkinType::a(2)).unwrap();
    let phi = PhiTable::new(&cat).unwrap();
    let id = |p: &str| cat.by_profile(p).unwrap();
    let lhs = phi.get(id("1")).unwrap().mul(&phi.get(id("2")).unwrap());
    let rhs = phi.get(id("1 / 2")).unwrap().add(&phi.get(id("2 / 1")).unwrap());
    assert_eq!(lhs, rhs);
    assert_eq!(lhs.to_string(), "t1*t2 + t2*t3");
}

#[test]
fn a2_multiplicativity_all_pairs() {
    let cat = Catalog::enumerate(DynkinType::a(2)).unwrap();
    let phi = PhiTable::new(&cat).unwrap();
    for (a, b) in pairs(cat.len()) {
        let sum = Module::direct_sum(cat.rep(a), cat.rep(b));
        let direct = phi_evaluate(&sum, phi.pattern()).unwrap();
        assert_eq!(direct, phi.get(a).unwrap().mul(&phi.get(b).unwrap()), "#{a} ⊕ #{b}");
    }
}

#[test]
fn a2_multform_exhaustive() {
    let cat = Catalog::enumerate(DynkinType::a(2)).unwrap();
    let phi = PhiTable::new(&cat).unwrap();
    let mut n = 0;
    for x in 0..cat.len() {
        for y in 0..cat.len() {
            if cat.ext1(y, x) == 1 {
                let c = phi.multform(x, y).unwrap();
                assert!(c.holds, "{} vs {}", c.lhs, c.rhs);
                n += 1;
            }
        }
    }
    assert_eq!(n, 2);
}

#[test]
fn a3_multiplicativity_and_multform() {
    let cat = Catalog::enumerate(DynkinType::a(3)).unwrap();
    let phi = PhiTable::new(&cat).unwrap();
    let start = Instant::now();
    // a fixed spread of pairs, including self-sums
    let all = pairs(cat.len());
    for &(a, b) in all.iter().step_by(4).take(20) {
        let sum = Module::direct_sum(cat.rep(a), cat.rep(b));
        let direct = phi_evaluate(&sum, phi.pattern()).unwrap();
        assert_eq!(direct, phi.get(a).unwrap().mul(&phi.get(b).unwrap()), "#{a} ⊕ #{b}");
    }
    let ext_pairs: Vec<(usize, usize)> =
        all.iter().copied().filter(|&(x, y)| x != y && cat.ext1(y, x) == 1).collect();
    assert!(ext_pairs.len() >= 10);
    for &(x, y) in ext_pairs.iter().take(10) {
        let c = phi.multform(x, y).unwrap();
        assert!(c.holds, "#{x}, #{y}: {} vs {}", c.lhs, c.rhs);
    }
    eprintln!("A3 phi checks {:?}", start.elapsed());
}

#[test]
fn exchange_relations_match_phi() {
    for n in [2, 3] {
        let cat = Catalog::enumerate(DynkinType::a(n)).unwrap();
        let phi = PhiTable::new(&cat).unwrap();
        let g = exchange_graph(&cat, &initial_module(&cat).unwrap(), GraphOptions::default(), None).unwrap();
        for e in &g.directed {
            let v = &g.vertices[e.from];
            assert!(phi.exchange_relation(&v.order, &v.data.b, e.k, e.added).unwrap(), "A{n} edge {e:?}");
        }
    }
    // the A2 seed relation x1·x1' = x3 + x4
    let cat = Catalog::enumerate(DynkinType::a(2)).unwrap();
    let phi = PhiTable::new(&cat).unwrap();
    let t = initial_module(&cat).unwrap();
    assert_eq!(t, vec![0, 2, 3]);
    let new = cat.by_profile("2").unwrap();
    let lhs = phi.get(t[0]).unwrap().mul(&phi.get(new).unwrap());
    assert_eq!(lhs, phi.get(t[1]).unwrap().add(&phi.get(t[2]).unwrap()));
}
