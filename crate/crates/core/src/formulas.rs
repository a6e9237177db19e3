//! Closed dimension and height formulas for tensor products `A ⊗_k B`.
//!
//! Each evaluator works on [`SpectrumSummary`] values. [`dim_tensor`] picks the
//! strongest applicable formula, cross-checks it against every other route that
//! also applies, and returns a [`DimReport`] recording which formula fired and
//! which strata achieved the maximum.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::spectra::{summarize, AlgebraExpr, HeightFn, PullbackData, SpectraError, SpectrumSummary, Stratum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error("{op}: precondition violated: {detail}")]
    Precondition { op: &'static str, detail: String },
    #[error("{op}: the {side} algebra is not an AF-domain")]
    NotAf { op: &'static str, side: Side },
    #[error("{op}: the {side} algebra is not a pullback")]
    NotPullback { op: &'static str, side: Side },
    #[error("{op}: hypothesis failed: {detail}")]
    Hypothesis { op: &'static str, detail: String },
    #[error("delta = {delta} exceeds the fiber dimension {max}")]
    DeltaOutOfRange { delta: u32, max: u32 },
    #[error("no applicable formula: {0}")]
    Unsupported(String),
    #[error("formula routes disagree: {}", fmt_routes(.0))]
    Disagreement(Vec<Term>),
}

fn fmt_routes(routes: &[Term]) -> String {
    routes
        .iter()
        .map(|t| format!("{} = {}", t.label, t.value))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Position of an algebra in `A ⊗ B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "A",
            Side::B => "B",
        })
    }
}

/// Which closed formula produced a dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// `min(t.d.(K), t.d.(L))` for two fields.
    Sharp,
    /// `min(dim A + td B, td A + dim B)` for two AF-domains.
    AfPair,
    /// `D(td A, dim A, B)` for AF `A` and arbitrary `B`.
    AfArbitrary,
    /// The symmetric formula for two pullbacks with `ht(Mᵢ) = dim(Tᵢ)`.
    PullbackPair,
    /// Pullback `A` against arbitrary `B`.
    PullbackArbitrary,
    Unsupported,
}

impl Theorem {
    /// Stable machine label.
    pub fn label(self) -> &'static str {
        match self {
            Theorem::Sharp => "Sharp",
            Theorem::AfPair => "Wadsworth3.8",
            Theorem::AfArbitrary => "Wadsworth3.7",
            Theorem::PullbackPair => "PullbackPair",
            Theorem::PullbackArbitrary => "Thm2.8",
            Theorem::Unsupported => "Unsupported",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::Sharp => "Sharp",
            Theorem::AfPair => "Wadsworth 3.8",
            Theorem::AfArbitrary => "Wadsworth 3.7",
            Theorem::PullbackPair => "PullbackPair",
            Theorem::PullbackArbitrary => "Thm 2.8",
            Theorem::Unsupported => "Unsupported",
        })
    }
}

impl Serialize for Theorem {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

/// Hypothesis gate under which the pullback formulas hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    Af,
    /// `T_M` catenarian.
    Catenarian,
    /// `ht(M) <= 2`.
    SmallMaximal,
    /// `t.d.(K:D) <= 2`.
    SmallResidueDegree,
    Unsupported,
}

impl Gate {
    pub fn label(self) -> &'static str {
        match self {
            Gate::Af => "AF",
            Gate::Catenarian => "Thm2.8-catenarian",
            Gate::SmallMaximal => "Cor2.9-htM≤2",
            Gate::SmallResidueDegree => "Prop2.10-tdKD≤2",
            Gate::Unsupported => "Unsupported",
        }
    }

    /// Gates under which the pullback height and dimension formulas hold.
    pub fn admits_pullback_formulas(self) -> bool {
        matches!(self, Gate::Catenarian | Gate::SmallMaximal | Gate::SmallResidueDegree)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for Gate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Applicability {
    /// Strongest passing gate.
    pub label: Gate,
    /// Every passing gate, strongest first.
    pub passing: Vec<Gate>,
    pub notes: String,
}

/// A labelled numeric term of a formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Term {
    pub label: String,
    pub value: u32,
}

impl Term {
    fn new(label: impl Into<String>, value: u32) -> Self {
        Term {
            label: label.into(),
            value,
        }
    }
}

/// The expression a witness maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessTerm {
    /// `min(td A, td B)`; strata are the two zero ideals.
    SharpMin,
    /// `ht(q[s]) + min(s, dim + t.d.(B/q))` with `(s, dim)` from the AF side.
    DValue,
    /// Primes of the pullback side avoiding `M`: `D(td, d, B)` at stratum `q`.
    OutsideM,
    /// Primes containing `M`: the inner maximum at pair `q₁ ⊆ q`.
    ContainsM,
}

/// A stratum (one label) or pair stratum (two labels) achieving a maximum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub side: Side,
    pub term: WitnessTerm,
    pub strata: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GateEntry {
    pub side: Side,
    pub gate: Gate,
}

/// A dimension answer with provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimReport {
    pub value: u32,
    pub theorem: Theorem,
    pub witnesses: Vec<Witness>,
    pub terms: Vec<Term>,
    pub gates: Vec<GateEntry>,
}

/// `dim(K ⊗ L) = min(t.d.(K), t.d.(L))` for field extensions of `k`.
pub fn sharp_dim(s: u32, t: u32) -> u32 {
    s.min(t)
}

/// `t.d.` of the fiber `(A/p) ⊗ (B/q)`, which is also its dimension.
pub fn fiber_dim(p: &Stratum, q: &Stratum) -> u32 {
    sharp_dim(p.residue_td, q.residue_td)
}

fn d_term(s: u32, d: u32, q: &Stratum) -> u32 {
    q.poly_height.eval(s) + s.min(d + q.residue_td)
}

/// `D(s, d, B) = max_q ht(q[s]) + min(s, d + t.d.(B/q))`.
pub fn d_value(s: u32, d: u32, b: &SpectrumSummary) -> Result<u32, FormulaError> {
    d_value_with_witnesses(s, d, b).map(|(v, _)| v)
}

/// [`d_value`] together with every maximizing stratum index.
pub fn d_value_with_witnesses(s: u32, d: u32, b: &SpectrumSummary) -> Result<(u32, Vec<usize>), FormulaError> {
    if d > s {
        return Err(FormulaError::Precondition {
            op: "d_value",
            detail: format!("d = {d} exceeds s = {s}"),
        });
    }
    Ok(argmax(b.strata.iter().enumerate().map(|(i, q)| (i, d_term(s, d, q)))))
}

fn argmax<K>(items: impl Iterator<Item = (K, u32)>) -> (u32, Vec<K>) {
    let mut best: Option<u32> = None;
    let mut winners = Vec::new();
    for (k, v) in items {
        match best {
            Some(b) if v < b => {}
            Some(b) if v == b => winners.push(k),
            _ => {
                best = Some(v);
                winners.clear();
                winners.push(k);
            }
        }
    }
    (best.unwrap_or(0), winners)
}

/// `min(dim A + td B, td A + dim B)` for two AF-domains.
pub fn af_pair_dim(a: &SpectrumSummary, b: &SpectrumSummary) -> Result<u32, FormulaError> {
    if !a.is_af {
        return Err(FormulaError::NotAf {
            op: "af_pair_dim",
            side: Side::A,
        });
    }
    if !b.is_af {
        return Err(FormulaError::NotAf {
            op: "af_pair_dim",
            side: Side::B,
        });
    }
    Ok((a.dim + b.td).min(a.td + b.dim))
}

fn pullback_data(op: &'static str, s: &SpectrumSummary, side: Side) -> Result<PullbackData, FormulaError> {
    s.pullback.ok_or(FormulaError::NotPullback { op, side })
}

/// `ht(M[n])` of a pullback: `m + min(n, t.d.(K:D))`.
fn maximal_poly_height(pb: &PullbackData, n: u32) -> u32 {
    HeightFn::new(pb.m, pb.td_kd).eval(n)
}

/// Symmetric formula for two pullbacks whose ambient rings satisfy `ht(M) = dim(T)`:
/// `max(ht(M₁[td A₂]) + D(td D₁, dim D₁, A₂), ht(M₂[td A₁]) + D(td D₂, dim D₂, A₁))`.
pub fn pullback_pair_dim(a: &SpectrumSummary, b: &SpectrumSummary) -> Result<u32, FormulaError> {
    const OP: &str = "pullback_pair_dim";
    let pa = pullback_data(OP, a, Side::A)?;
    let pb = pullback_data(OP, b, Side::B)?;
    for (side, p) in [(Side::A, pa), (Side::B, pb)] {
        if p.m != p.ambient_dim {
            return Err(FormulaError::Hypothesis {
                op: OP,
                detail: format!("side {side}: ht(M) = {} but dim(T) = {}", p.m, p.ambient_dim),
            });
        }
    }
    let left = maximal_poly_height(&pa, b.td) + d_value(pa.td_d, pa.dim_d, b)?;
    let right = maximal_poly_height(&pb, a.td) + d_value(pb.td_d, pb.dim_d, a)?;
    Ok(left.max(right))
}

/// Which hypothesis gates an algebra passes.
pub fn applicability(s: &SpectrumSummary) -> Applicability {
    if s.is_af {
        return Applicability {
            label: Gate::Af,
            passing: vec![Gate::Af],
            notes: "AF-domain: the AF formulas apply directly".into(),
        };
    }
    let Some(pb) = s.pullback else {
        return Applicability {
            label: Gate::Unsupported,
            passing: vec![],
            notes: "neither AF nor a pullback".into(),
        };
    };
    gates_for(&pb)
}

/// Gate arithmetic for a non-AF pullback, exposed for hypothetical models.
pub fn gates_for(pb: &PullbackData) -> Applicability {
    let mut passing = Vec::new();
    let mut notes = Vec::new();
    if pb.ambient_catenarian {
        passing.push(Gate::Catenarian);
        notes.push("T_M catenarian".to_string());
    }
    if pb.m <= 2 {
        passing.push(Gate::SmallMaximal);
        notes.push(format!("ht(M) = {} <= 2", pb.m));
    }
    if pb.td_kd <= 2 {
        passing.push(Gate::SmallResidueDegree);
        notes.push(format!("t.d.(K:D) = {} <= 2", pb.td_kd));
    }
    let label = passing.first().copied().unwrap_or(Gate::Unsupported);
    if passing.is_empty() {
        notes.push(format!(
            "T not catenarian, ht(M) = {} > 2 and t.d.(K:D) = {} > 2",
            pb.m, pb.td_kd
        ));
    }
    Applicability {
        label,
        passing,
        notes: notes.join("; "),
    }
}

fn require_gated(op: &'static str, a: &SpectrumSummary) -> Result<PullbackData, FormulaError> {
    let pb = pullback_data(op, a, Side::A)?;
    let gate = applicability(a);
    if gate.label == Gate::Unsupported {
        return Err(FormulaError::Unsupported(format!("{op}: {}", gate.notes)));
    }
    Ok(pb)
}

/// Inner term of the containing-`M` height at pair `q₁ ⊆ q`:
/// `ht(q₁[td A]) + ht((q/q₁)[td D]) + min(t.d.(B/q₁), t.d.(K:D))`.
fn inner_pair_term(a_td: u32, pb: &PullbackData, q1: &Stratum, quotient: HeightFn) -> u32 {
    q1.poly_height.eval(a_td) + quotient.eval(pb.td_d) + q1.residue_td.min(pb.td_kd)
}

/// Maximum of the inner term over all pairs below `q`, with maximizing lower ends.
fn inner_max(a_td: u32, pb: &PullbackData, b: &SpectrumSummary, q: usize) -> Result<(u32, Vec<usize>), FormulaError> {
    let mut items = Vec::new();
    for pair in b.pairs_below(q) {
        let quotient = b.quotient(pair.lower, q)?.expect("pair exists");
        items.push((pair.lower, inner_pair_term(a_td, pb, &b.strata[pair.lower], quotient)));
    }
    Ok(argmax(items.into_iter()))
}

/// Evaluation of the pullback-versus-arbitrary dimension formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackDim {
    pub value: u32,
    /// `D(td A, d, B)`: chains through primes avoiding `M`.
    pub outside_term: u32,
    /// `ht(M) + max_{q₁ ⊆ q} ...`: chains through primes containing `M`.
    pub contains_term: u32,
    pub outside_witnesses: Vec<usize>,
    /// Maximizing `(q₁, q)` pairs of `B`.
    pub contains_witnesses: Vec<(usize, usize)>,
}

/// Term of the containing-`M` maximum at a single pair (used for witness recomputation).
pub fn contains_pair_term(a: &SpectrumSummary, b: &SpectrumSummary, q1: usize, q: usize) -> Result<u32, FormulaError> {
    let pb = pullback_data("contains_pair_term", a, Side::A)?;
    let quotient = b.quotient(q1, q)?.ok_or_else(|| FormulaError::Precondition {
        op: "contains_pair_term",
        detail: format!("{} is not below {}", b.strata[q1].label, b.strata[q].label),
    })?;
    let qs = &b.strata[q];
    Ok(pb.m + inner_pair_term(a.td, &pb, &b.strata[q1], quotient) + pb.td_d.min(pb.dim_d + qs.residue_td))
}

/// `dim(A ⊗ B)` for a gated pullback `A` and arbitrary `B`.
pub fn pullback_tensor_dim(a: &SpectrumSummary, b: &SpectrumSummary) -> Result<PullbackDim, FormulaError> {
    let pb = require_gated("pullback_tensor_dim", a)?;
    if let Some(err) = b.first_unavailable() {
        return Err(err.into());
    }
    let (outside_term, outside_witnesses) = d_value_with_witnesses(a.td, pb.outside, b)?;
    let mut items = Vec::new();
    for pair in &b.pairs {
        let v = contains_pair_term(a, b, pair.lower, pair.upper)?;
        items.push(((pair.lower, pair.upper), v));
    }
    let (contains_term, contains_witnesses) = argmax(items.into_iter());
    Ok(PullbackDim {
        value: outside_term.max(contains_term),
        outside_term,
        contains_term,
        outside_witnesses,
        contains_witnesses,
    })
}

fn check_delta(p: &Stratum, q: &Stratum, delta: u32) -> Result<(), FormulaError> {
    let max = fiber_dim(p, q);
    if delta > max {
        return Err(FormulaError::DeltaOutOfRange { delta, max });
    }
    Ok(())
}

/// `ht(P)` for a prime `P` of `A ⊗ B` over strata `(p, q)` of a gated pullback `A`,
/// with `delta = ht(P / (p⊗B + A⊗q))`.
pub fn pullback_height(
    a: &SpectrumSummary,
    b: &SpectrumSummary,
    p: usize,
    q: usize,
    delta: u32,
) -> Result<u32, FormulaError> {
    let pb = require_gated("pullback_height", a)?;
    let (ps, qs) = (&a.strata[p], &b.strata[q]);
    check_delta(ps, qs, delta)?;
    let middle = match ps.kind {
        crate::spectra::StratumKind::ContainsM => inner_max(a.td, &pb, b, q)?.0,
        _ => qs.poly_height.eval(a.td),
    };
    Ok(ps.height + middle + delta)
}

/// `ht(p⊗B + A⊗q)`: the pullback height at `delta = 0`.
pub fn mixed_ideal_height(a: &SpectrumSummary, b: &SpectrumSummary, p: usize, q: usize) -> Result<u32, FormulaError> {
    pullback_height(a, b, p, q, 0)
}

/// Special-chain height for an AF `A`: `ht(q[td A]) + ht(p) + delta`.
pub fn special_chain_height(
    a: &SpectrumSummary,
    b: &SpectrumSummary,
    p: usize,
    q: usize,
    delta: u32,
) -> Result<u32, FormulaError> {
    if !a.is_af {
        return Err(FormulaError::NotAf {
            op: "special_chain_height",
            side: Side::A,
        });
    }
    let (ps, qs) = (&a.strata[p], &b.strata[q]);
    check_delta(ps, qs, delta)?;
    Ok(qs.poly_height.eval(a.td) + ps.height + delta)
}

/// Upper bound on chains ending at `P` whose other members all lie over `(0)` in `B`:
/// `td(A) - t.d.(A/p) + ht(q[t.d.(A/p)]) + delta`.
pub fn lambda_bound(a: &SpectrumSummary, b: &SpectrumSummary, p: usize, q: usize, delta: u32) -> u32 {
    let (ps, qs) = (&a.strata[p], &b.strata[q]);
    a.td - ps.residue_td + qs.poly_height.eval(ps.residue_td) + delta
}

/// Recomputes the term a witness claims to maximize.
pub fn witness_value(a: &SpectrumSummary, b: &SpectrumSummary, w: &Witness) -> Result<u32, FormulaError> {
    let (own, other) = match w.side {
        Side::A => (a, b),
        Side::B => (b, a),
    };
    let lookup = |label: &str| {
        own.find(label)
            .ok_or_else(|| FormulaError::Spectra(SpectraError::UnknownStratum(label.to_string())))
    };
    match w.term {
        WitnessTerm::SharpMin => Ok(sharp_dim(a.td, b.td)),
        WitnessTerm::DValue => {
            let q = lookup(&w.strata[0])?;
            Ok(d_term(other.td, other.dim, &own.strata[q]))
        }
        WitnessTerm::OutsideM => {
            let pb = pullback_data("witness_value", other, w.side.other())?;
            let q = lookup(&w.strata[0])?;
            Ok(d_term(other.td, pb.outside, &own.strata[q]))
        }
        WitnessTerm::ContainsM => {
            let q1 = lookup(&w.strata[0])?;
            let q = lookup(&w.strata[1])?;
            contains_pair_term(other, own, q1, q)
        }
    }
}

fn gate_entries(a: &SpectrumSummary, b: &SpectrumSummary) -> Vec<GateEntry> {
    let mut gates = Vec::new();
    for (side, s) in [(Side::A, a), (Side::B, b)] {
        for gate in applicability(s).passing {
            gates.push(GateEntry { side, gate });
        }
    }
    gates
}

fn d_witnesses(side: Side, s: &SpectrumSummary, indices: &[usize]) -> Vec<Witness> {
    indices
        .iter()
        .map(|&i| Witness {
            side,
            term: WitnessTerm::DValue,
            strata: vec![s.strata[i].label.clone()],
        })
        .collect()
}

fn agree(terms: &[Term]) -> Result<u32, FormulaError> {
    let first = terms[0].value;
    if terms.iter().all(|t| t.value == first) {
        Ok(first)
    } else {
        Err(FormulaError::Disagreement(terms.to_vec()))
    }
}

/// Oriented pullback evaluation: `pullback_side` plays the role of `A` in the formula.
fn oriented_pullback(
    pullback_side: Side,
    p: &SpectrumSummary,
    other: &SpectrumSummary,
) -> Result<(PullbackDim, Vec<Witness>), FormulaError> {
    let eval = pullback_tensor_dim(p, other)?;
    let mut witnesses = Vec::new();
    let other_side = pullback_side.other();
    if eval.outside_term == eval.value {
        witnesses.extend(eval.outside_witnesses.iter().map(|&q| Witness {
            side: other_side,
            term: WitnessTerm::OutsideM,
            strata: vec![other.strata[q].label.clone()],
        }));
    }
    if eval.contains_term == eval.value {
        witnesses.extend(eval.contains_witnesses.iter().map(|&(q1, q)| Witness {
            side: other_side,
            term: WitnessTerm::ContainsM,
            strata: vec![other.strata[q1].label.clone(), other.strata[q].label.clone()],
        }));
    }
    Ok((eval, witnesses))
}

fn pullback_terms(prefix: &str, eval: &PullbackDim) -> [Term; 2] {
    [
        Term::new(format!("{prefix}D(td, d, other) [outside M]"), eval.outside_term),
        Term::new(
            format!("{prefix}ht(M) + max over q1 <= q [containing M]"),
            eval.contains_term,
        ),
    ]
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::A => "A",
        Side::B => "B",
    }
}

/// `dim(A ⊗ B)` for two spectrum summaries, dispatched to the strongest formula.
pub fn dim_tensor_summaries(a: &SpectrumSummary, b: &SpectrumSummary) -> Result<DimReport, FormulaError> {
    let gates = gate_entries(a, b);

    if a.is_field() && b.is_field() {
        let value = sharp_dim(a.td, b.td);
        return Ok(DimReport {
            value,
            theorem: Theorem::Sharp,
            witnesses: vec![Witness {
                side: Side::A,
                term: WitnessTerm::SharpMin,
                strata: vec![a.zero().label.clone(), b.zero().label.clone()],
            }],
            terms: vec![Term::new("min(td A, td B)", value)],
            gates,
        });
    }

    if a.is_af && b.is_af {
        let min_form = af_pair_dim(a, b)?;
        let (ab, wb) = d_value_with_witnesses(a.td, a.dim, b)?;
        let (ba, wa) = d_value_with_witnesses(b.td, b.dim, a)?;
        let terms = vec![
            Term::new("min(dim A + td B, td A + dim B)", min_form),
            Term::new("D(td A, dim A, B)", ab),
            Term::new("D(td B, dim B, A)", ba),
        ];
        let value = agree(&terms)?;
        let mut witnesses = d_witnesses(Side::B, b, &wb);
        witnesses.extend(d_witnesses(Side::A, a, &wa));
        return Ok(DimReport {
            value,
            theorem: Theorem::AfPair,
            witnesses,
            terms,
            gates,
        });
    }

    if a.is_af != b.is_af {
        let (af_side, af, other) = if a.is_af { (Side::A, a, b) } else { (Side::B, b, a) };
        let other_side = af_side.other();
        let (wad, wad_w) = d_value_with_witnesses(af.td, af.dim, other)?;
        let wad_term = Term::new(
            format!("D(td {0}, dim {0}, {1})", side_name(af_side), side_name(other_side)),
            wad,
        );
        match oriented_pullback(other_side, other, af) {
            Ok((eval, witnesses)) => {
                let [outside, contains] = pullback_terms("", &eval);
                let total = Term::new("pullback formula", eval.value);
                agree(&[total.clone(), wad_term.clone()])?;
                return Ok(DimReport {
                    value: eval.value,
                    theorem: Theorem::PullbackArbitrary,
                    witnesses,
                    terms: vec![outside, contains, wad_term],
                    gates,
                });
            }
            Err(FormulaError::Unsupported(_)) | Err(FormulaError::Spectra(SpectraError::UnavailablePair { .. })) => {
                return Ok(DimReport {
                    value: wad,
                    theorem: Theorem::AfArbitrary,
                    witnesses: d_witnesses(other_side, other, &wad_w),
                    terms: vec![wad_term],
                    gates,
                });
            }
            Err(e) => return Err(e),
        }
    }

    // both sides are non-AF pullbacks
    let forward = oriented_pullback(Side::A, a, b);
    let reverse = oriented_pullback(Side::B, b, a);
    let mut terms = Vec::new();
    let mut checks = Vec::new();
    let mut witnesses = None;
    let mut failures = Vec::new();
    for (orientation, result) in [("A as pullback", forward), ("B as pullback", reverse)] {
        match result {
            Ok((eval, w)) => {
                terms.extend(pullback_terms(&format!("{orientation}: "), &eval));
                checks.push(Term::new(orientation, eval.value));
                witnesses.get_or_insert(w);
            }
            Err(e @ (FormulaError::Unsupported(_) | FormulaError::Spectra(SpectraError::UnavailablePair { .. }))) => {
                failures.push(format!("{orientation}: {e}"));
            }
            Err(e) => return Err(e),
        }
    }
    let Some(witnesses) = witnesses else {
        return Err(FormulaError::Unsupported(failures.join("; ")));
    };
    if let Ok(pair) = pullback_pair_dim(a, b) {
        let t = Term::new("pullback pair formula", pair);
        terms.push(t.clone());
        checks.push(t);
    }
    let value = agree(&checks)?;
    Ok(DimReport {
        value,
        theorem: Theorem::PullbackArbitrary,
        witnesses,
        terms,
        gates,
    })
}

/// `dim(A ⊗ B)` for two algebra expressions.
pub fn dim_tensor(a: &AlgebraExpr, b: &AlgebraExpr) -> Result<DimReport, FormulaError> {
    dim_tensor_summaries(&summarize(a)?, &summarize(b)?)
}
