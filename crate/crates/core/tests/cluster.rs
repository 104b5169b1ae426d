use ppalg_core::approximation::{canonical_order, initial_module, initial_variable_names};
use ppalg_core::catalog::{Catalog, ModuleSum};
use ppalg_core::cluster::{cluster_monomials, complete_rigid_search, exchange_graph, GraphOptions};
use ppalg_core::quiver::DynkinType;

#[test]
fn a3_exchange_graph() {
    let cat = Catalog::enumerate(DynkinType::a(3)).unwrap();
    let t = initial_module(&cat).unwrap();
    let start = std::time::Instant::now();
    let g = exchange_graph(&cat, &t, GraphOptions::default(), None).unwrap();
    eprintln!("A3 graph {:?}", start.elapsed());
    assert_eq!(g.vertices.len(), 14);
    assert_eq!(g.edges().len(), 21);
    assert!(g.tally.all_passed(), "{:?}", g.tally.failures);
    for name in ["thm-mutation", "prop-mutation3", "cor-mutation4", "cor-mutation5", "seed-consistency", "laurent"] {
        assert_eq!(g.tally.passed(name), Some(true), "{name}");
    }
    let names = initial_variable_names(&cat);
    let v = g.vertices.iter().position(|v| v.parent == Some((0, 1))).unwrap();
    assert_eq!(g.vertices[v].seed.as_ref().unwrap().vars[1].render(&names), "(x1*x5 + x3*x4)/x2");
    let search = complete_rigid_search(&cat);
    assert_eq!(search.len(), 14);
    let found: Vec<ModuleSum> = g.vertices.iter().map(|v| v.sum.clone()).collect();
    assert!(search.iter().all(|s| found.contains(s)));
    let vars = g.cluster_variables();
    assert_eq!(vars.len(), 12);
    let mons = cluster_monomials(&g, 2).unwrap();
    assert!(mons.values().all(|m| m.is_laurent()));
    for v in &g.vertices {
        assert_eq!(canonical_order(&cat, &v.sum).len(), 6);
    }
}

#[test]
fn a4_complete_rigid_count() {
    let cat = Catalog::enumerate(DynkinType::a(4)).unwrap();
    assert_eq!(complete_rigid_search(&cat).len(), 672);
}
