//! Named verification suites run over the built-in catalog.
//!
//! Every suite compares two computation routes that do not share an
//! implementation path (a closed formula against the chain oracle, or two
//! different closed formulas) and records each disagreement.

use std::fmt;

use serde::Serialize;

use crate::catalog::{catalog, valuation_towers, CatalogEntry, Grid};
use crate::formulas::{
    af_pair_dim, d_value, dim_tensor, dim_tensor_summaries, fiber_dim, lambda_bound, mixed_ideal_height,
    pullback_height, pullback_tensor_dim, special_chain_height, witness_value, Theorem,
};
use crate::oracle::{brewer_poly_dim, chain_enumerate, column_chains, ext_field_dim, ChainTable, OracleError};
use crate::spectra::{is_af_poly, summarize, AlgebraExpr, PairQuotient, SpectrumSummary, StratumKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub inputs: String,
    pub expected: String,
    pub actual: String,
}

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
}

impl CheckReport {
    fn new(suite: &str) -> Self {
        CheckReport {
            suite: suite.to_string(),
            cases: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(
        &mut self,
        ok: bool,
        inputs: impl FnOnce() -> String,
        expected: impl fmt::Display,
        actual: impl fmt::Display,
    ) {
        self.cases += 1;
        if !ok {
            self.failures.push(Failure {
                inputs: inputs(),
                expected: expected.to_string(),
                actual: actual.to_string(),
            });
        }
    }

    fn expect_eq<T: PartialEq + fmt::Display>(&mut self, inputs: impl FnOnce() -> String, expected: T, actual: T) {
        let ok = expected == actual;
        self.check(ok, inputs, expected, actual);
    }

    fn error(&mut self, inputs: String, err: impl fmt::Display) {
        self.cases += 1;
        self.failures.push(Failure {
            inputs,
            expected: "a value".into(),
            actual: format!("error: {err}"),
        });
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {} ({} cases, {} failures)",
            self.suite,
            self.cases,
            self.failures.len()
        )?;
        for fail in self.failures.iter().take(10) {
            write!(
                f,
                "\n  {}: expected {}, got {}",
                fail.inputs, fail.expected, fail.actual
            )?;
        }
        if self.failures.len() > 10 {
            write!(f, "\n  ... {} more", self.failures.len() - 10)?;
        }
        Ok(())
    }
}

/// Suite names accepted by [`run_suite`], in execution order for `all`.
pub const SUITES: &[&str] = &[
    "sharp-grid",
    "af-agreement",
    "poly-af-threshold",
    "kplusm-anchor",
    "pullback-pair",
    "gsct-identity",
    "prop24",
    "oracle-tightness",
    "valuation-towers",
    "brewer-agreement",
    "ext-field-agreement",
    "lambda-bound",
    "specialization",
    "monotonicity",
];

/// Runs one named suite over the grid.
pub fn run_suite(name: &str, grid: &Grid) -> Result<CheckReport, OracleError> {
    let report = match name {
        "sharp-grid" => sharp_grid(grid),
        "af-agreement" => af_agreement(grid),
        "poly-af-threshold" | "prop23" => poly_af_threshold(grid),
        "kplusm-anchor" => kplusm_anchor(),
        "pullback-pair" => pullback_pair(grid),
        "gsct-identity" => gsct_identity(grid),
        "prop24" => height_superadditivity(grid),
        "oracle-tightness" => oracle_tightness(grid),
        "valuation-towers" => valuation_tower_suite(grid),
        "brewer-agreement" => brewer_agreement(grid),
        "ext-field-agreement" => ext_field_agreement(grid),
        "lambda-bound" => lambda_suite(grid),
        "specialization" => specialization(grid),
        "monotonicity" => monotonicity(grid),
        other => return Err(OracleError::UnknownSuite(other.to_string())),
    };
    Ok(report)
}

/// Runs every suite in [`SUITES`] order.
pub fn run_all(grid: &Grid) -> Vec<CheckReport> {
    SUITES
        .iter()
        .map(|name| run_suite(name, grid).expect("listed suite"))
        .collect()
}

fn sharp_grid(grid: &Grid) -> CheckReport {
    let mut r = CheckReport::new("sharp-grid");
    for s in 0..=grid.sharp_max {
        for t in 0..=grid.sharp_max {
            let inputs = || format!("field({s}) ⊗ field({t})");
            match dim_tensor(&AlgebraExpr::field(s), &AlgebraExpr::field(t)) {
                Ok(rep) => r.check(
                    rep.value == s.min(t) && rep.theorem == Theorem::Sharp,
                    inputs,
                    format!("{} (Sharp)", s.min(t)),
                    format!("{} ({})", rep.value, rep.theorem),
                ),
                Err(e) => r.error(inputs(), e),
            }
        }
    }
    r
}

fn af_agreement(grid: &Grid) -> CheckReport {
    let mut r = CheckReport::new("af-agreement");
    let mut afs = Vec::new();
    for t in 0..=grid.af_td_max {
        for d in 0..=t {
            afs.push(CatalogEntry::new(AlgebraExpr::af(t, d)));
        }
    }
    for x in &afs {
        for y in &afs {
            let inputs = || format!("{} ⊗ {}", x.name(), y.name());
            let (a, b) = (&x.summary, &y.summary);
            let routes = (|| {
                Ok::<_, crate::formulas::FormulaError>([
                    af_pair_dim(a, b)?,
                    d_value(a.td, a.dim, b)?,
                    d_value(b.td, b.dim, a)?,
                    dim_tensor_summaries(a, b)?.value,
                ])
            })();
            match routes {
                Ok(v) => r.check(
                    v.iter().all(|&x| x == v[0]),
                    inputs,
                    "min formula = D(A-side) = D(B-side) = dispatcher",
                    format!("{v:?}"),
                ),
                Err(e) => r.error(inputs(), e),
            }
        }
    }
    r
}

fn pullback_entries(grid: &Grid) -> Vec<CatalogEntry> {
    catalog(grid).into_iter().filter(CatalogEntry::is_pullback).collect()
}

fn poly_af_threshold(grid: &Grid) -> CheckReport {
    let mut r = CheckReport::new("poly-af-threshold");
    for e in pullback_entries(grid) {
        let c = e.summary.pullback.expect("pullback").td_kd;
        for n in 0..=c + 1 {
            let inputs = || format!("{}[{n}] with t.d.(K:D) = {c}", e.name());
            r.expect_eq(inputs, n >= c, is_af_poly(&e.summary, n));
        }
    }
    r
}

fn kplusm_anchor() -> CheckReport {
    let mut r = CheckReport::new("kplusm-anchor");
    let kpm = AlgebraExpr::k_plus_m();
    let line = AlgebraExpr::poly(AlgebraExpr::field(0), 1);
    let (a, b) = (summarize(&kpm).expect("valid"), summarize(&line).expect("valid"));
    match dim_tensor(&kpm, &line) {
        Ok(rep) => r.check(
            rep.value == 3 && rep.theorem == Theorem::PullbackArbitrary,
            || "dim_tensor(k+M, k[z])".into(),
            "3 (Thm 2.8)",
            format!("{} ({})", rep.value, rep.theorem),
        ),
        Err(e) => r.error("dim_tensor(k+M, k[z])".into(), e),
    }
    r.expect_eq(|| "brewer_poly_dim(k+M, 1)".into(), 3, brewer_poly_dim(&a, 1));
    match chain_enumerate(&a, &b) {
        Ok(v) => r.expect_eq(|| "chain_enumerate(k+M, k[z])".into(), 3, v),
        Err(e) => r.error("chain_enumerate(k+M, k[z])".into(), e),
    }
    r
}

fn pullback_pair(grid: &Grid) -> CheckReport {
    let mut r = CheckReport::new("pullback-pair");
    let kpm = summarize(&AlgebraExpr::k_plus_m()).expect("valid");
    let routes = (|| {
        Ok::<_, crate::formulas::FormulaError>([
            pullback_tensor_dim(&kpm, &kpm)?.value,
            crate::formulas::pullback_pair_dim(&kpm, &kpm)?,
            dim_tensor_summaries(&kpm, &kpm)?.value,
        ])
    })();
    match routes {
        Ok(v) => r.expect_eq(
            || "k+M ⊗ k+M: both orientations, pair formula".into(),
            "[3, 3, 3]".to_string(),
            format!("{v:?}"),
        ),
        Err(e) => r.error("k+M ⊗ k+M".into(), e),
    }
    let pbs: Vec<_> = pullback_entries(grid)
        .into_iter()
        .filter(|e| !e.summary.is_af)
        .collect();
    for x in &pbs {
        for y in &pbs {
            let (a, b) = (&x.summary, &y.summary);
            let inputs = || format!("{} ⊗ {}", x.name(), y.name());
            let forward = pullback_tensor_dim(a, b).map(|e| e.value);
            let reverse = pullback_tensor_dim(b, a).map(|e| e.value);
            match (forward, reverse) {
                (Ok(f), Ok(rv)) => {
                    let pair = crate::formulas::pullback_pair_dim(a, b).ok();
                    let ok = f == rv && pair.is_none_or(|p| p == f);
                    r.check(
                        ok,
                        inputs,
                        "orientations and pair formula agree",
                        format!("{f}, {rv}, {pair:?}"),
                    );
                }
                (Err(e), _) | (_, Err(e)) => r.error(inputs(), e),
            }
        }
    }
    r
}

fn gsct_identity(grid: &Grid) -> CheckReport {
    let mut r = CheckReport::new("gsct-identity");
    let cat = catalog(grid);
    for x in cat.iter().filter(|e| e.is_pullback()) {
        for y in &cat {
            let (a, b) = (&x.summary, &y.summary);
            let table = match ChainTable::build(a, b) {
                Ok(t) => t,
                Err(e) => {
                    r.error(format!("{} ⊗ {}", x.name(), y.name()), e);
                    continue;
                }
            };
            let dim = match dim_tensor_summaries(a, b) {
                Ok(rep) => rep.value,
                Err(e) => {
                    r.error(format!("{} ⊗ {}", x.name(), y.name()), e);
                    continue;
                }
            };
            for p in 0..a.strata.len() {
                for q in 0..b.strata.len() {
                    let mixed = match mixed_ideal_height(a, b, p, q) {
                        Ok(v) => v,
                        Err(e) => {
                            r.error(format!("{} ⊗ {} at ({p}, {q})", x.name(), y.name()), e);
                            continue;
                        }
                    };
                    let chained = table.to_anchor(p, q).map(|c| c.total);
                    for delta in 0..=fiber_dim(&a.strata[p], &b.strata[q]) {
                        let inputs = || {
                            format!(
                                "{} ⊗ {}, p = {}, q = {}, delta = {delta}",
                                x.name(),
                                y.name(),
                                a.strata[p].label,
                                b.strata[q].label
                            )
                        };
                        let ht = match pullback_height(a, b, p, q, delta) {
                            Ok(v) => v,
                            Err(e) => {
                                r.error(inputs(), e);
                                continue;
                            }
                        };
                        let mut ok = ht == mixed + delta && ht <= dim;
                        if let Some(c) = chained {
                            ok &= ht == c + delta;
                        }
                        if a.is_af {
                            ok &= special_chain_height(a, b, p, q, delta).is_ok_and(|s| s == ht);
                        }
                        r.check(
                            ok,
                            inputs,
                            format!(
                                "mixed + delta = {}, chain = {chained:?} + delta, <= dim {dim}",
                                mixed + delta
                            ),
                            ht,
                        );
                    }
                }
            }
        }
    }
    r
}

fn all_summaries(grid: &Grid) -> Vec<(String, SpectrumSummary)> {
    let mut out: Vec<_> = catalog(grid).into_iter().map(|e| (e.name(), e.summary)).collect();
    for expr in [
        AlgebraExpr::af_noncatenarian(3, 3),
        AlgebraExpr::af_noncatenarian(4, 2),
        AlgebraExpr::pullback(AlgebraExpr::af_noncatenarian(5, 3), 3, AlgebraExpr::field(0), 2),
        AlgebraExpr::pullback(AlgebraExpr::af(4, 2), 2, AlgebraExpr::af_noncatenarian(2, 2), 1),
    ] {
        out.push((expr.to_string(), summarize(&expr).expect("valid")));
    }
    out
}

fn height_superadditivity(grid: &Grid) -> CheckReport {
    let mut r = CheckReport::new("prop24");
    for (name, s) in all_summaries(grid) {
        for pair in &s.pairs {
            let (lo, hi) = (&s.strata[pair.lower], &s.strata[pair.upper]);
            let inputs = || format!("{name}: {} <= {}", lo.label, hi.label);
            match pair.quotient {
                PairQuotient::Exact(q) => {
                    let mut ok = lo.height <= hi.height && lo.height + q.base <= hi.height;
                    if s.catenarian {
                        ok &= lo.height + q.base == hi.height;
                    }
                    if pair.lower == pair.upper {
                        ok &= q == crate::spectra::HeightFn::ZERO;
                    }
                    r.check(
                        ok,
                        inputs,
                        format!("ht({}) + quotient <= ht({})", lo.label, hi.label),
                        format!("{} + {} vs {}", lo.height, q.base, hi.height),
                    );
                }
                PairQuotient::Unavailable => r.check(
                    lo.height < hi.height,
                    inputs,
                    "lower below upper",
                    format!("{} vs {}", lo.height, hi.height),
                ),
            }
        }
    }
    r
}

fn oracle_tightness(grid: &Grid) -> CheckReport {
    let mut r = CheckReport::new("oracle-tightness");
    let cat = catalog(grid);
    for x in &cat {
        for y in &cat {
            let (a, b) = (&x.summary, &y.summary);
            let inputs = || format!("{} ⊗ {}", x.name(), y.name());
            let formula = dim_tensor_summaries(a, b);
            let swapped = dim_tensor_summaries(b, a);
            let oracle = chain_enumerate(a, b);
            match (formula, swapped, oracle) {
                (Ok(f), Ok(s), Ok(o)) => {
                    let witnesses_ok = f
                        .witnesses
                        .iter()
                        .all(|w| witness_value(a, b, w).is_ok_and(|v| v == f.value));
                    r.check(
                        o == f.value && s.value == f.value && witnesses_ok,
                        inputs,
                        format!("oracle = formula = swapped = {}", f.value),
                        format!("oracle {o}, swapped {}, witnesses ok: {witnesses_ok}", s.value),
                    );
                }
                (Err(e), _, _) | (_, Err(e), _) => r.error(inputs(), e),
                (_, _, Err(e)) => r.error(inputs(), e),
            }
        }
    }
    r
}

fn valuation_tower_suite(grid: &Grid) -> CheckReport {
    let mut r = CheckReport::new("valuation-towers");
    for expr in valuation_towers(grid) {
        let AlgebraExpr::Valuation { dim, .. } = expr else {
            unreachable!()
        };
        let s = summarize(&expr).expect("valid");
        r.check(
            s.dim == dim && s.is_af && s.catenarian,
            || expr.to_string(),
            format!("dim {dim}, AF, catenarian"),
            format!("dim {}, AF {}, catenarian {}", s.dim, s.is_af, s.catenarian),
        );
    }
    r
}

fn brewer_agreement(grid: &Grid) -> CheckReport {
    let mut r = CheckReport::new("brewer-agreement");
    for e in catalog(grid) {
        for n in 0..=4 {
            let inputs = || format!("{}[{n}]", e.name());
            match dim_tensor(&e.expr, &AlgebraExpr::poly(AlgebraExpr::field(0), n)) {
                Ok(rep) => r.expect_eq(inputs, brewer_poly_dim(&e.summary, n), rep.value),
                Err(err) => r.error(inputs(), err),
            }
        }
    }
    r
}

fn ext_field_agreement(grid: &Grid) -> CheckReport {
    let mut r = CheckReport::new("ext-field-agreement");
    for e in catalog(grid) {
        for s in 0..=4 {
            let inputs = || format!("{} ⊗ field({s})", e.name());
            match dim_tensor(&e.expr, &AlgebraExpr::field(s)) {
                Ok(rep) => r.expect_eq(inputs, ext_field_dim(&e.summary, s), rep.value),
                Err(err) => r.error(inputs(), err),
            }
        }
    }
    r
}

/// Chains that stay over `(0)` in `B` and then step once into a prime over `(p, q)`.
fn lambda_suite(grid: &Grid) -> CheckReport {
    let mut r = CheckReport::new("lambda-bound");
    let cat = catalog(grid);
    for x in &cat {
        for y in cat.iter().filter(|e| !e.summary.is_field()) {
            let (a, b) = (&x.summary, &y.summary);
            let chains = match column_chains(a, b) {
                Ok(c) => c,
                Err(e) => {
                    r.error(format!("{} ⊗ {}", x.name(), y.name()), e);
                    continue;
                }
            };
            for chain in &chains {
                let (p_last, _) = chain.last();
                for pair in a.pairs.iter().filter(|pr| pr.lower == p_last) {
                    let p = pair.upper;
                    for q in 1..b.strata.len() {
                        for delta in 0..=fiber_dim(&a.strata[p], &b.strata[q]) {
                            let bound = lambda_bound(a, b, p, q, delta);
                            let realized = chain.total + 1;
                            r.check(
                                realized <= bound,
                                || {
                                    format!(
                                        "{} ⊗ {}: chain to {} then (p, q) = ({}, {}), delta {delta}",
                                        x.name(),
                                        y.name(),
                                        a.strata[p_last].label,
                                        a.strata[p].label,
                                        b.strata[q].label
                                    )
                                },
                                format!("<= {bound}"),
                                realized,
                            );
                        }
                    }
                }
            }
        }
    }
    r
}

/// The inner maximum over `q₁ ⊆ q` dominates its values at `q₁ = q` and `q₁ = (0)`.
fn specialization(grid: &Grid) -> CheckReport {
    let mut r = CheckReport::new("specialization");
    let cat = catalog(grid);
    for x in cat.iter().filter(|e| e.is_pullback()) {
        let a = &x.summary;
        let p = a
            .strata
            .iter()
            .position(|s| s.kind == StratumKind::ContainsM)
            .expect("M stratum");
        for y in &cat {
            let b = &y.summary;
            for q in 0..b.strata.len() {
                let inputs = || format!("{} ⊗ {}, q = {}", x.name(), y.name(), b.strata[q].label);
                let whole = match mixed_ideal_height(a, b, p, q) {
                    Ok(v) => v,
                    Err(e) => {
                        r.error(inputs(), e);
                        continue;
                    }
                };
                let at = |q1: usize| crate::formulas::contains_pair_term(a, b, q1, q);
                // contains_pair_term adds the D-side tail; remove it to compare inner terms
                let pb = a.pullback.expect("pullback");
                let tail = pb.m + pb.td_d.min(pb.dim_d + b.strata[q].residue_td);
                let ht_p = a.strata[p].height;
                match (at(q), at(0)) {
                    (Ok(top), Ok(bottom)) => {
                        let inner = whole - ht_p;
                        r.check(
                            inner >= top - tail && inner >= bottom - tail,
                            inputs,
                            format!(">= {} and >= {}", top - tail, bottom - tail),
                            inner,
                        );
                    }
                    (Err(e), _) | (_, Err(e)) => r.error(inputs(), e),
                }
            }
        }
    }
    r
}

fn monotonicity(grid: &Grid) -> CheckReport {
    let mut r = CheckReport::new("monotonicity");
    let partners = [
        AlgebraExpr::field(2),
        AlgebraExpr::af(1, 1),
        AlgebraExpr::valuation(3, 2),
        AlgebraExpr::k_plus_m(),
    ];
    let dim = |x: &AlgebraExpr, y: &AlgebraExpr| dim_tensor(x, y).map(|rep| rep.value);
    let compare =
        |r: &mut CheckReport, lo: &AlgebraExpr, hi: &AlgebraExpr, y: &AlgebraExpr| match (dim(lo, y), dim(hi, y)) {
            (Ok(u), Ok(v)) => r.check(u <= v, || format!("{lo} -> {hi} against {y}"), format!("<= {v}"), u),
            (Err(e), _) | (_, Err(e)) => r.error(format!("{lo} -> {hi} against {y}"), e),
        };
    for y in &partners {
        for t in 0..grid.af_td_max {
            for d in 0..=t {
                compare(&mut r, &AlgebraExpr::af(t, d), &AlgebraExpr::af(t + 1, d), y);
                compare(&mut r, &AlgebraExpr::af(t + 1, d), &AlgebraExpr::af(t + 1, d + 1), y);
            }
        }
        // pullbacks over valuation towers: td(T), ht(M), td(D) fixed with dim(D) growing
        let pb = |t: u32, m: u32, s: u32, e: u32| {
            AlgebraExpr::pullback(AlgebraExpr::valuation(t, m), m, AlgebraExpr::af(s, e), m - 1)
        };
        for m in 1..=grid.pullback_m_max {
            for s in 0..=2 {
                for e in 0..=s {
                    for t in m + s..=m + s + grid.td_kd_max + 1 {
                        compare(&mut r, &pb(t, m, s, e), &pb(t + 1, m, s, e), y);
                        if t >= m + 1 + s {
                            compare(&mut r, &pb(t, m, s, e), &pb(t, m + 1, s, e), y);
                        }
                        if e < s {
                            compare(&mut r, &pb(t, m, s, e), &pb(t, m, s, e + 1), y);
                        }
                    }
                }
            }
        }
    }
    r
}
