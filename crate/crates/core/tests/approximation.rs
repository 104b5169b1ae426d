use ppalg_core::approximation::{
    initial_module, is_approximation, is_maximal_rigid, is_minimal, minimal_left_approx, minimal_right_approx, mutate,
    Source,
};
use ppalg_core::catalog::{Catalog, ModuleSum};
use ppalg_core::quiver::DynkinType;

fn a3() -> Catalog {
    Catalog::enumerate(DynkinType::a(3)).unwrap()
}

#[test]
fn a3_approximations_of_t2() {
    let cat = a3();
    let t = initial_module(&cat).unwrap();
    let rest = ModuleSum::from_ids(&t).without(t[1]);
    let p = |s: &str| cat.by_profile(s).unwrap();
    let right = minimal_right_approx(&cat, Source::Id(t[1]), &rest).unwrap();
    assert_eq!(right.middle, ModuleSum::from_ids(&[p("2 / 1"), p("1 / 2 / 3")]));
    assert_eq!(cat.identify(&right.cone).unwrap(), p("2 / 1 3"));
    let left = minimal_left_approx(&cat, Source::Id(t[1]), &rest).unwrap();
    assert_eq!(left.middle, ModuleSum::from_ids(&[p("1"), p("2 / 1 3 / 2")]));
    for a in [&left, &right] {
        assert!(is_approximation(&cat, Source::Id(t[1]), &rest, a).unwrap());
        assert!(is_minimal(&cat, Source::Id(t[1]), &rest, a).unwrap());
    }
}

#[test]
fn a3_mutation_at_t2() {
    let cat = a3();
    let t = initial_module(&cat).unwrap();
    assert!(is_maximal_rigid(&cat, &t));
    let m = mutate(&cat, &t, 1).unwrap();
    assert_eq!(cat.entry(m.result[1]).profile, "2 / 1 3");
    assert_eq!(m.left.render(&cat), "0 → (1 / 2) → (1) ⊕ (2 / 1 3 / 2) → (2 / 1 3) → 0");
    assert_eq!(m.right.render(&cat), "0 → (2 / 1 3) → (2 / 1) ⊕ (1 / 2 / 3) → (1 / 2) → 0");
    assert!(m.left.is_exact(&cat) && m.right.is_exact(&cat));
    assert!(m.left.middle.ids().iter().all(|i| !m.right.middle.contains(*i)));
    assert_eq!(cat.ext1(m.result[1], t[1]), 1);
    assert_eq!(mutate(&cat, &m.result, 1).unwrap().result, t);
}

#[test]
fn projectives_plus_x_gives_cosyzygy() {
    let cat = a3();
    let proj = ModuleSum::from_ids(&cat.projective_ids());
    for e in cat.entries().iter().filter(|e| !e.projective) {
        let a = minimal_left_approx(&cat, Source::Id(e.id), &proj).unwrap();
        let co = cat.lambda.cosyzygy(&e.rep).unwrap();
        assert_eq!(cat.identify(&a.cone).unwrap(), cat.identify(&co).unwrap(), "{}", e.profile);
    }
}

#[test]
fn complements_are_unique() {
    let cat = a3();
    let t = initial_module(&cat).unwrap();
    for k in 0..3 {
        let rest: Vec<usize> = t.iter().copied().filter(|&i| i != t[k]).collect();
        let others: Vec<usize> = cat
            .entries()
            .iter()
            .filter(|e| e.id != t[k] && !rest.contains(&e.id))
            .filter(|e| {
                let mut s = rest.clone();
                s.push(e.id);
                is_maximal_rigid(&cat, &s)
            })
            .map(|e| e.id)
            .collect();
        assert_eq!(others, vec![mutate(&cat, &t, k).unwrap().result[k]]);
    }
}
