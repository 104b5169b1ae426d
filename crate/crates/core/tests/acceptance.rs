//! Acceptance criteria, one line each. Runs without the test harness so the
//! lines are always printed; exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use ppalg_core::catalog::Catalog;
use ppalg_core::cluster::{exchange_graph, GraphOptions};
use ppalg_core::approximation::initial_module;
use ppalg_core::quiver::DynkinType;
use ppalg_core::verify::{Verifier, VerifyOptions};

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn verifiers() -> [Verifier; 2] {
    [
        Verifier::new(DynkinType::a(2), VerifyOptions::default()).unwrap(),
        Verifier::new(DynkinType::a(3), VerifyOptions::default()).unwrap(),
    ]
}

/// Runs `suite` on A2 and A3 and requires every listed tag to have passed
/// at least `min[i]` checks (summed over both types) with no failures.
fn suites(vs: &[Verifier; 2], suite: &str, tags: &[(&str, usize)]) -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    let mut totals = vec![0usize; tags.len()];
    for v in vs {
        let r = match v.run(suite) {
            Ok(r) => r,
            Err(e) => return fail(format!("{}: {e}", v.cat.dynkin())),
        };
        if !r.passed() {
            ok = false;
            details.push(format!("{}: {:?}", r.dynkin, r.tally.failures));
        }
        for (i, (tag, _)) in tags.iter().enumerate() {
            match r.tally.counts.get(*tag) {
                Some(&(p, 0)) => totals[i] += p,
                Some(&(p, f)) => {
                    ok = false;
                    details.push(format!("{} {tag}: {f} of {} failed", r.dynkin, p + f));
                }
                None => {
                    ok = false;
                    details.push(format!("{} {tag}: not run", r.dynkin));
                }
            }
        }
    }
    for (i, (tag, min)) in tags.iter().enumerate() {
        if totals[i] < *min {
            ok = false;
            details.push(format!("{tag}: {} checks, expected at least {min}", totals[i]));
        }
        details.push(format!("{tag} {}", totals[i]));
    }
    Outcome { ok, detail: details.join(", ") }
}

fn criterion1() -> Outcome {
    let mut out = Vec::new();
    for (n, count, r) in [(2, 4, 3), (3, 12, 6), (4, 40, 10)] {
        let cat = match Catalog::enumerate(DynkinType::a(n)) {
            Ok(c) => c,
            Err(e) => return fail(format!("A{n}: {e}")),
        };
        if cat.len() != count {
            return fail(format!("A{n}: {} indecomposables, expected {count}", cat.len()));
        }
        if let Some(e) = cat.entries().iter().find(|e| !e.rigid) {
            return fail(format!("A{n}: {} is not rigid", e.profile));
        }
        let t = initial_module(&cat).unwrap();
        if t.len() != r {
            return fail(format!("A{n}: r = {}, expected {r}", t.len()));
        }
        out.push(format!("A{n} {count}/r={r}"));
    }
    pass(out.join(", "))
}

fn criterion2(vs: &[Verifier; 2]) -> Outcome {
    let mut out = Vec::new();
    let start = Instant::now();
    for (v, expected) in vs.iter().zip([2, 14]) {
        let r = v.run("counts").unwrap();
        let regular = r.tally.passed("graph-regular") == Some(true);
        if !r.passed() || !regular {
            return fail(format!("{}: {:?}", r.dynkin, r.tally.failures));
        }
        out.push(format!("{} {expected} vertices, degree r−n", r.dynkin));
    }
    let small = start.elapsed();
    if small > Duration::from_secs(30) {
        return fail(format!("A2/A3 graphs took {small:.1?}, limit 30 s"));
    }
    let start = Instant::now();
    let cat = Catalog::enumerate(DynkinType::a(4)).unwrap();
    let t = initial_module(&cat).unwrap();
    let opts = GraphOptions { seeds: false, checks: true };
    let g = exchange_graph(&cat, &t, opts, None).unwrap();
    let took = start.elapsed();
    if g.vertices.len() != 672 || !g.is_regular() || took > Duration::from_secs(1800) {
        return fail(format!("A4: {} vertices, regular {}, {took:.1?}", g.vertices.len(), g.is_regular()));
    }
    out.push(format!("A4 672 vertices, degree 6 ({took:.1?})"));
    pass(out.join(", "))
}

fn run(n: usize, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = f();
    let took = start.elapsed();
    let ok = o.ok && took <= limit;
    let status = if ok { "PASS" } else { "FAIL" };
    let over = if took > limit { format!(" over the {limit:?} limit") } else { String::new() };
    println!("criterion {n} {status} {name} [{took:.2?}{over}] {}", o.detail);
    ok
}

fn main() {
    let vs = verifiers();
    let mut ok = true;
    ok &= run(1, "catalog counts", Duration::from_secs(60), criterion1);
    // A2/A3 graphs are built here (30 s bound) and reused below; A4 has 30 min
    ok &= run(2, "exchange graph counts", Duration::from_secs(30 + 1800), || criterion2(&vs));
    ok &= run(3, "golden matrices", Duration::from_secs(60), || suites(&vs, "golden", &[("golden", 14)]));
    ok &= run(4, "thm-mutation on every edge", Duration::from_secs(60), || {
        let mut o = suites(
            &vs,
            "thm-mutation",
            &[("thm-mutation", 22), ("cor-mutation4", 22), ("cor-mutation5", 22), ("involution", 22)],
        );
        let p = suites(&vs, "prop-mutation3", &[("prop-mutation3", 22)]);
        o.ok &= p.ok;
        o.detail = format!("{}, {}", o.detail, p.detail);
        o
    });
    ok &= run(5, "thm-quivershape at every vertex", Duration::from_secs(300), || {
        suites(
            &vs,
            "thm-quivershape",
            &[("thm-quivershape", 16), ("gldim-3", 16), ("domdim-3", 16), ("ext-simples", 16), ("calabi-yau", 16)],
        )
    });
    ok &= run(6, "homological cross-checks", Duration::from_secs(60), || {
        suites(
            &vs,
            "homological",
            &[("ext1-oracle", 160), ("ext1-symmetry", 160), ("ext1-even", 88), ("orbit-codim", 16)],
        )
    });
    ok &= run(7, "functor F_T", Duration::from_secs(300), || {
        let mut o = suites(
            &vs,
            "functor",
            &[("ft-pd", 16), ("ft-reflects-iso", 16), ("ft-projectives", 16)],
        );
        let table = vs[0].run("functor").map(|r| r.tally.passed("ft-table") == Some(true)).unwrap_or(false);
        o.ok &= table;
        o.detail = format!("{}, A2 table {}", o.detail, if table { "reproduced" } else { "differs" });
        o
    });
    ok &= run(8, "semicanonical", Duration::from_secs(120), || {
        let mut o = suites(&vs, "thm-multform", &[("multiplicativity", 10), ("thm-multform", 12)]);
        let a2 = vs[0].run("thm-multform").unwrap();
        let golden = a2.tally.passed("phi-golden") == Some(true);
        let exhaustive = a2.tally.counts.get("multiplicativity") == Some(&(10, 0));
        o.ok &= golden && exhaustive;
        o.detail = format!("{}, φ_S1 φ_S2 = φ_P1 + φ_P2 {golden}, all A2 pairs {exhaustive}", o.detail);
        o
    });
    ok &= run(9, "cluster correspondence", Duration::from_secs(120), || {
        let mut o = suites(
            &vs,
            "cluster",
            &[("regular", 2), ("seed-consistency", 22), ("laurent", 16), ("phi-exchange", 22)],
        );
        let a2 = vs[0].run("cluster").unwrap();
        let phi = a2.tally.counts.get("phi-exchange") == Some(&(2, 0));
        o.ok &= phi;
        o.detail = format!("{}, A2 exchange relation matches φ {phi}", o.detail);
        o
    });
    if !ok {
        std::process::exit(1);
    }
}
