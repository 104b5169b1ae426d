use ppalg_core::quiver::DynkinType;
use ppalg_core::verify::{run_suite, VerifyOptions, SUITES};

#[test]
fn all_suites_pass_on_a2_and_a3() {
    for n in [2, 3] {
        let r = run_suite(DynkinType::a(n), "all", VerifyOptions::default()).unwrap();
        for l in r.lines() {
            eprintln!("A{n} {l}");
        }
        eprintln!("A{n} all: {} ms", r.elapsed_ms);
        assert!(r.passed(), "{:?}", r.tally.failures);
        assert!(r.skipped.is_empty());
        for tag in ["thm-mutation", "prop-mutation3", "thm-quivershape", "thm-multform", "golden", "connected"] {
            assert_eq!(r.tally.passed(tag), Some(true), "A{n} {tag}");
        }
    }
}

#[test]
fn suite_names() {
    for s in SUITES {
        let r = run_suite(DynkinType::a(2), s, VerifyOptions::default()).unwrap();
        assert!(r.passed(), "{s}");
        assert!(!r.lines().is_empty(), "{s}");
    }
    assert!(run_suite(DynkinType::a(2), "nope", VerifyOptions::default()).is_err());
    let cap = VerifyOptions { cap: 2, ..VerifyOptions::default() };
    assert!(run_suite(DynkinType::a(2), "counts", cap).is_err());
}

#[test]
fn a4_without_deep_skips_graph_checks() {
    let r = run_suite(DynkinType::a(4), "counts", VerifyOptions::default()).unwrap();
    assert!(r.passed());
    assert_eq!(r.tally.counts["catalog-count"], (1, 0));
    assert!(r.skipped.iter().any(|(t, _)| t == "graph-vertices"));
}
