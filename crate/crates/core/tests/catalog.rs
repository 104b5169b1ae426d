use ppalg_core::catalog::{fixtures, Catalog};
use ppalg_core::quiver::DynkinType;

#[test]
fn a3_catalog_matches_fixtures() {
    let c = Catalog::enumerate(DynkinType::a(3)).unwrap();
    assert_eq!(c.len(), 12);
    assert!(c.entries().iter().all(|e| e.rigid));
    let mut seen = Vec::new();
    for (profile, rep) in fixtures::a3_all() {
        let id = c.identify(&rep).unwrap();
        assert_eq!(c.entry(id).profile, profile);
        seen.push(id);
    }
    seen.sort();
    seen.dedup();
    assert_eq!(seen.len(), 12);
    assert!(c.relations_hold().unwrap());
}

#[test]
fn a4_catalog_has_forty_rigid_entries() {
    let t = std::time::Instant::now();
    let c = Catalog::enumerate(DynkinType::a(4)).unwrap();
    eprintln!("A4 catalog in {:?}", t.elapsed());
    assert_eq!(c.len(), 40);
    assert!(c.entries().iter().all(|e| e.rigid));
    assert_eq!(c.entries().iter().filter(|e| e.projective).count(), 4);
}

#[test]
fn ext1_agrees_over_small_prime_fields() {
    use ppalg_core::module_rep::ext1_dim;
    use ppalg_core::semicanonical::reduce_module;
    let cat = Catalog::enumerate(DynkinType::a(3)).unwrap();
    for p in [2, 3, 5] {
        let reps: Vec<_> = (0..cat.len()).map(|i| reduce_module(cat.rep(i), p).unwrap()).collect();
        for x in 0..cat.len() {
            for y in 0..cat.len() {
                assert_eq!(ext1_dim(&reps[x], &reps[y]).unwrap(), cat.ext1(x, y), "p = {p}, #{x}, #{y}");
            }
        }
    }
}
