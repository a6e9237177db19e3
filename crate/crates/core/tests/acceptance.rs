//! Acceptance criteria, one PASS/FAIL line each. All tolerances are zero.
//! Runs without the libtest harness so the lines always reach stdout.

use std::time::{Duration, Instant};

use krulldim::catalog::{catalog, Grid};
use krulldim::formulas::{af_pair_dim, d_value, pullback_pair_dim, pullback_tensor_dim};
use krulldim::oracle::{brewer_poly_dim, chain_enumerate};
use krulldim::spectra::is_af_poly;
use krulldim::suites::run_suite;
use krulldim::{dim_tensor, dim_tensor_summaries, summarize, AlgebraExpr, Theorem};

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Outcome {
            ok,
            detail: detail.into(),
        }
    }
}

fn criterion(
    results: &mut Vec<(usize, bool)>,
    n: usize,
    name: &str,
    limit: Option<Duration>,
    f: impl FnOnce() -> Outcome,
) {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed >= limit {
            out.ok = false;
            out.detail = format!("{}; took {elapsed:?}, limit {limit:?}", out.detail);
        }
    }
    let status = if out.ok { "PASS" } else { "FAIL" };
    println!("{status} [{n:>2}] {name}: {} ({elapsed:.2?})", out.detail);
    results.push((n, out.ok));
}

fn suite(name: &str) -> Outcome {
    let r = run_suite(name, &Grid::default()).expect("known suite");
    Outcome::new(r.passed() && r.cases > 0, r.to_string())
}

fn main() {
    let total = Instant::now();
    let mut results = Vec::new();
    let grid = Grid::default();

    criterion(&mut results, 1, "sharp grid", Some(Duration::from_secs(1)), || {
        let mut cases = 0;
        let mut bad = Vec::new();
        for s in 0..=6 {
            for t in 0..=6 {
                cases += 1;
                let rep = dim_tensor(&AlgebraExpr::field(s), &AlgebraExpr::field(t)).unwrap();
                if rep.value != s.min(t) || rep.theorem != Theorem::Sharp {
                    bad.push((s, t, rep.value));
                }
            }
        }
        Outcome::new(
            cases == 49 && bad.is_empty(),
            format!("{cases} cases, mismatches {bad:?}"),
        )
    });

    criterion(&mut results, 2, "AF agreement grid", None, || {
        let mut cases = 0;
        let mut bad = Vec::new();
        let afs: Vec<_> = (0..=4u32)
            .flat_map(|t| (0..=t).map(move |d| AlgebraExpr::af(t, d)))
            .map(|e| summarize(&e).unwrap())
            .collect();
        for a in &afs {
            for b in &afs {
                cases += 1;
                let v = [
                    af_pair_dim(a, b).unwrap(),
                    d_value(a.td, a.dim, b).unwrap(),
                    d_value(b.td, b.dim, a).unwrap(),
                    dim_tensor_summaries(a, b).unwrap().value,
                ];
                if v.iter().any(|&x| x != v[0]) {
                    bad.push(v);
                }
            }
        }
        Outcome::new(bad.is_empty(), format!("{cases} pairs, mismatches {bad:?}"))
    });

    criterion(
        &mut results,
        3,
        "A[t.d.(K:D)] is the first AF polynomial ring",
        None,
        || {
            let mut cases = 0;
            let mut bad = Vec::new();
            for e in catalog(&grid).iter().filter(|e| e.is_pullback()) {
                let c = e.summary.pullback.unwrap().td_kd;
                if c == 0 {
                    continue;
                }
                cases += 1;
                let below = (0..c).all(|n| !is_af_poly(&e.summary, n));
                if !(below && is_af_poly(&e.summary, c)) {
                    bad.push(e.name());
                }
            }
            Outcome::new(
                cases > 0 && bad.is_empty(),
                format!("{cases} pullbacks with td_KD >= 1, failures {bad:?}"),
            )
        },
    );

    criterion(&mut results, 4, "k+M ⊗ k[z] anchor", None, || {
        let kpm = AlgebraExpr::k_plus_m();
        let line = AlgebraExpr::poly(AlgebraExpr::field(0), 1);
        let rep = dim_tensor(&kpm, &line).unwrap();
        let (a, b) = (summarize(&kpm).unwrap(), summarize(&line).unwrap());
        let brewer = brewer_poly_dim(&a, 1);
        let chains = chain_enumerate(&a, &b).unwrap();
        Outcome::new(
            rep.value == 3 && rep.theorem == Theorem::PullbackArbitrary && brewer == 3 && chains == 3,
            format!(
                "dim_tensor {} ({}), brewer {brewer}, chains {chains}",
                rep.value, rep.theorem
            ),
        )
    });

    criterion(&mut results, 5, "k+M ⊗ k+M pullback pair", None, || {
        let a = summarize(&AlgebraExpr::k_plus_m()).unwrap();
        let rep = dim_tensor_summaries(&a, &a).unwrap();
        let fwd = pullback_tensor_dim(&a, &a).unwrap().value;
        let pair = pullback_pair_dim(&a, &a).unwrap();
        let labels = ["A as pullback", "B as pullback", "pullback pair formula"];
        let covered = labels.iter().all(|l| rep.terms.iter().any(|t| t.label.starts_with(l)));
        Outcome::new(
            rep.value == 3 && fwd == 3 && pair == 3 && rep.theorem == Theorem::PullbackArbitrary && covered,
            format!(
                "dim_tensor {} ({}), orientation {fwd}, pair {pair}",
                rep.value, rep.theorem
            ),
        )
    });

    criterion(&mut results, 6, "GSCT identity", Some(Duration::from_secs(10)), || {
        suite("gsct-identity")
    });
    criterion(&mut results, 7, "height superadditivity on pair strata", None, || {
        suite("prop24")
    });
    criterion(&mut results, 8, "oracle soundness and tightness", None, || {
        suite("oracle-tightness")
    });
    criterion(&mut results, 9, "valuation towers", None, || {
        let mut cases = 0;
        let mut bad = Vec::new();
        for d in 1..=3 {
            for t in d..=5 {
                cases += 1;
                let s = summarize(&AlgebraExpr::valuation(t, d)).unwrap();
                if s.dim != d || !s.is_af {
                    bad.push((t, d));
                }
            }
        }
        Outcome::new(bad.is_empty(), format!("{cases} towers, failures {bad:?}"))
    });

    criterion(
        &mut results,
        10,
        "full suite wall-clock",
        Some(Duration::from_secs(60)),
        || {
            let reports = krulldim::suites::run_all(&grid);
            let failed: Vec<_> = reports
                .iter()
                .filter(|r| !r.passed())
                .map(|r| r.suite.clone())
                .collect();
            let elapsed = total.elapsed();
            Outcome::new(
                failed.is_empty() && elapsed < Duration::from_secs(60),
                format!("{} suites, failed {failed:?}, total {elapsed:.2?}", reports.len()),
            )
        },
    );

    let failed: Vec<_> = results.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    assert_eq!(results.len(), 10);
    if failed.is_empty() {
        println!("acceptance: 10/10 criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
