//! Algebra expressions and their stratified prime spectra.
//!
//! Every expression of the constructor language is compiled into a
//! [`SpectrumSummary`]: a finite set of [`Stratum`] classes (primes sharing
//! height, residue transcendence degree and polynomial-height behaviour)
//! together with the comparable pairs between them. All dimension formulas
//! in [`crate::formulas`] and the chain oracle in [`crate::oracle`] evaluate
//! against these summaries, never against ring elements.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

/// Errors raised while validating an expression or querying a summary.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectraError {
    #[error("constraint `{invariant}` violated: {detail}")]
    Constraint { invariant: &'static str, detail: String },
    #[error("pair {lower} <= {upper} carries no exact quotient data (non-catenarian model)")]
    UnavailablePair { lower: String, upper: String },
    #[error("no stratum matches selector `{0}`")]
    UnknownStratum(String),
    #[error("invalid stratum selector `{0}` (expected `M`, `0`, `out:<h>`, `in:<e>` or `ht:<h>`)")]
    BadSelector(String),
}

fn violated(invariant: &'static str, detail: impl Into<String>) -> SpectraError {
    SpectraError::Constraint {
        invariant,
        detail: detail.into(),
    }
}

/// Abstract syntax of the constructor language.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AlgebraExpr {
    /// Extension field of `k` with the given transcendence degree.
    Field { td: u32 },
    /// Abstract AF-domain with transcendence degree `td` and Krull dimension `dim`.
    AfDomain { td: u32, dim: u32, catenarian: bool },
    /// Polynomial ring in `vars` indeterminates over an AF base.
    PolyRing { base: Box<AlgebraExpr>, vars: u32 },
    /// Iterated `K + M` valuation domain with a chain spectrum.
    Valuation { td: u32, dim: u32 },
    /// `A = φ⁻¹(D)` for the canonical map `T → T/M`.
    ///
    /// `max_height` is `ht(M)` and `outside` is the supremum of heights of
    /// primes of `T` other than `M`.
    Pullback {
        ambient: Box<AlgebraExpr>,
        max_height: u32,
        subring: Box<AlgebraExpr>,
        outside: u32,
    },
}

/// `(td, dim, catenarian)` of an AF constructor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AfProfile {
    pub td: u32,
    pub dim: u32,
    pub catenarian: bool,
}

impl AlgebraExpr {
    pub fn field(td: u32) -> Self {
        AlgebraExpr::Field { td }
    }

    pub fn af(td: u32, dim: u32) -> Self {
        AlgebraExpr::AfDomain {
            td,
            dim,
            catenarian: true,
        }
    }

    pub fn af_noncatenarian(td: u32, dim: u32) -> Self {
        AlgebraExpr::AfDomain {
            td,
            dim,
            catenarian: false,
        }
    }

    pub fn valuation(td: u32, dim: u32) -> Self {
        AlgebraExpr::Valuation { td, dim }
    }

    pub fn poly(base: AlgebraExpr, vars: u32) -> Self {
        AlgebraExpr::PolyRing {
            base: Box::new(base),
            vars,
        }
    }

    pub fn pullback(ambient: AlgebraExpr, max_height: u32, subring: AlgebraExpr, outside: u32) -> Self {
        AlgebraExpr::Pullback {
            ambient: Box::new(ambient),
            max_height,
            subring: Box::new(subring),
            outside,
        }
    }

    /// The classical `k + M` ring: `k + x·k(y)[x]_(x)`.
    pub fn k_plus_m() -> Self {
        Self::pullback(Self::valuation(2, 1), 1, Self::field(0), 0)
    }

    /// Profile of an AF constructor, `None` for pullbacks and anything built on one.
    pub fn af_profile(&self) -> Option<AfProfile> {
        match self {
            AlgebraExpr::Field { td } => Some(AfProfile {
                td: *td,
                dim: 0,
                catenarian: true,
            }),
            AlgebraExpr::AfDomain { td, dim, catenarian } => Some(AfProfile {
                td: *td,
                dim: *dim,
                catenarian: *catenarian,
            }),
            AlgebraExpr::Valuation { td, dim } => Some(AfProfile {
                td: *td,
                dim: *dim,
                catenarian: true,
            }),
            AlgebraExpr::PolyRing { base, vars } => base.af_profile().map(|p| AfProfile {
                td: p.td + vars,
                dim: p.dim + vars,
                catenarian: p.catenarian,
            }),
            AlgebraExpr::Pullback { .. } => None,
        }
    }

    /// Checks every constructor invariant, innermost first.
    pub fn validate(&self) -> Result<(), SpectraError> {
        match self {
            AlgebraExpr::Field { .. } => Ok(()),
            AlgebraExpr::AfDomain { td, dim, .. } => {
                if dim > td {
                    return Err(violated(
                        "af: dim <= td",
                        format!("dimension {dim} exceeds transcendence degree {td}"),
                    ));
                }
                Ok(())
            }
            AlgebraExpr::Valuation { td, dim } => {
                if *dim == 0 {
                    return Err(violated("val: dim >= 1", "a valuation tower has dimension at least 1"));
                }
                if dim > td {
                    return Err(violated(
                        "val: dim <= td",
                        format!("dimension {dim} exceeds transcendence degree {td}"),
                    ));
                }
                Ok(())
            }
            AlgebraExpr::PolyRing { base, .. } => {
                base.validate()?;
                if base.af_profile().is_none() {
                    return Err(violated(
                        "poly: base is AF",
                        "polynomial rings over a pullback are not modeled",
                    ));
                }
                Ok(())
            }
            AlgebraExpr::Pullback {
                ambient,
                max_height,
                subring,
                outside,
            } => {
                ambient.validate()?;
                subring.validate()?;
                let t = ambient
                    .af_profile()
                    .ok_or_else(|| violated("pullback: T is AF", "T must be an AF constructor, not a pullback"))?;
                let d = subring
                    .af_profile()
                    .ok_or_else(|| violated("pullback: D is AF", "D must be an AF constructor, not a pullback"))?;
                let m = *max_height;
                if m > t.dim {
                    return Err(violated(
                        "pullback: m <= dim(T)",
                        format!("ht(M) = {m} but dim(T) = {}", t.dim),
                    ));
                }
                if m == 0 {
                    return Err(violated(
                        "pullback: m >= 1",
                        "M = (0) is maximal only in a field; use the field itself",
                    ));
                }
                if matches!(**ambient, AlgebraExpr::Valuation { .. }) && m != t.dim {
                    return Err(violated(
                        "pullback: m = dim(T) for valuation T",
                        format!("a valuation domain has a unique maximal ideal of height {}", t.dim),
                    ));
                }
                let td_k = t.td - m;
                if d.td > td_k {
                    return Err(violated(
                        "pullback: td(D) <= td(K)",
                        format!("td(D) = {} but td(K) = td(T) - m = {td_k}", d.td),
                    ));
                }
                if *outside + 1 < m {
                    return Err(violated(
                        "pullback: outside >= m - 1",
                        format!("outside = {outside} but ht(M) - 1 = {}", m - 1),
                    ));
                }
                if *outside > t.dim {
                    return Err(violated(
                        "pullback: outside <= dim(T)",
                        format!("outside = {outside} but dim(T) = {}", t.dim),
                    ));
                }
                if matches!(**ambient, AlgebraExpr::Valuation { .. }) && *outside != m - 1 {
                    return Err(violated(
                        "pullback: outside = m - 1 for valuation T",
                        format!("chain spectrum forces outside = {}, got {outside}", m - 1),
                    ));
                }
                if m < t.dim && *outside != t.dim {
                    return Err(violated(
                        "pullback: outside = dim(T) when m < dim(T)",
                        format!("primes of height {} differ from M, so outside must be {}", t.dim, t.dim),
                    ));
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for AlgebraExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraExpr::Field { td } => write!(f, "field({td})"),
            AlgebraExpr::AfDomain {
                td,
                dim,
                catenarian: true,
            } => write!(f, "af({td},{dim})"),
            AlgebraExpr::AfDomain {
                td,
                dim,
                catenarian: false,
            } => write!(f, "af({td},{dim},cat=false)"),
            AlgebraExpr::PolyRing { base, vars } => write!(f, "poly({base},{vars})"),
            AlgebraExpr::Valuation { td, dim } => write!(f, "val({td},{dim})"),
            AlgebraExpr::Pullback {
                ambient,
                max_height,
                subring,
                outside,
            } => write!(f, "pullback(T={ambient},m={max_height},D={subring},outside={outside})"),
        }
    }
}

/// `n ↦ base + min(n, cap)`: the height of `p[n]` in `A[n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct HeightFn {
    pub base: u32,
    pub cap: u32,
}

impl HeightFn {
    pub const ZERO: HeightFn = HeightFn { base: 0, cap: 0 };

    pub fn new(base: u32, cap: u32) -> Self {
        HeightFn { base, cap }
    }

    /// Height function of a locally Jaffard prime: constant in `n`.
    pub fn flat(base: u32) -> Self {
        HeightFn { base, cap: 0 }
    }

    pub fn eval(self, n: u32) -> u32 {
        self.base + n.min(self.cap)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum StratumKind {
    /// Stratum of an AF algebra that is not presented as a pullback.
    Plain,
    /// Primes of a pullback not containing `M`.
    OutsideM,
    /// Primes of a pullback containing `M`, indexed by a stratum of `D`.
    ContainsM,
}

/// A class of primes sharing height, residue transcendence degree and
/// polynomial-height function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub label: String,
    pub kind: StratumKind,
    pub height: u32,
    pub residue_td: u32,
    pub poly_height: HeightFn,
    pub provenance: String,
}

/// Quotient data of a comparable pair `q₁ ⊆ q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "camelCase")]
pub enum PairQuotient {
    /// `n ↦ ht((q/q₁)[n])`, computed in `A/q₁`.
    Exact(HeightFn),
    /// The model cannot certify `ht(q/q₁)` (non-catenarian input).
    Unavailable,
}

impl PairQuotient {
    pub fn exact(self) -> Option<HeightFn> {
        match self {
            PairQuotient::Exact(h) => Some(h),
            PairQuotient::Unavailable => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairStratum {
    pub lower: usize,
    pub upper: usize,
    pub quotient: PairQuotient,
}

/// Numerical data of a `D + M` pullback.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PullbackData {
    /// `ht(M)`.
    pub m: u32,
    pub td_k: u32,
    pub td_d: u32,
    pub dim_d: u32,
    /// `t.d.(K:D) = td_k - td_d`.
    pub td_kd: u32,
    pub outside: u32,
    pub ambient_dim: u32,
    pub ambient_catenarian: bool,
}

/// Finite stratified model of `Spec(A)`.
///
/// Stratum 0 is always the zero ideal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumSummary {
    pub td: u32,
    pub dim: u32,
    pub strata: Vec<Stratum>,
    pub pairs: Vec<PairStratum>,
    pub is_af: bool,
    pub is_domain: bool,
    pub catenarian: bool,
    pub pullback: Option<PullbackData>,
    #[serde(skip)]
    pair_index: Vec<Vec<Option<usize>>>,
}

impl SpectrumSummary {
    fn assemble(td: u32, strata: Vec<Stratum>, pairs: Vec<PairStratum>, pullback: Option<PullbackData>) -> Self {
        let n = strata.len();
        let mut pair_index = vec![vec![None; n]; n];
        for (i, pair) in pairs.iter().enumerate() {
            pair_index[pair.lower][pair.upper] = Some(i);
        }
        let dim = strata.iter().map(|s| s.height).max().unwrap_or(0);
        let is_af = strata
            .iter()
            .all(|s| s.height + s.residue_td == td && s.poly_height.cap == 0);
        let catenarian = pairs.iter().all(|p| match p.quotient {
            PairQuotient::Exact(q) => strata[p.lower].height + q.base == strata[p.upper].height,
            PairQuotient::Unavailable => false,
        });
        SpectrumSummary {
            td,
            dim,
            strata,
            pairs,
            is_af,
            is_domain: true,
            catenarian,
            pullback,
            pair_index,
        }
    }

    pub fn zero(&self) -> &Stratum {
        &self.strata[0]
    }

    pub fn stratum(&self, index: usize) -> &Stratum {
        &self.strata[index]
    }

    /// A dimension-zero AF domain, i.e. a field.
    pub fn is_field(&self) -> bool {
        self.is_af && self.dim == 0
    }

    /// The pair `lower ⊆ upper`, or `None` when the strata are not comparable.
    pub fn pair(&self, lower: usize, upper: usize) -> Option<&PairStratum> {
        self.pair_index[lower][upper].map(|i| &self.pairs[i])
    }

    /// Exact quotient height function of `lower ⊆ upper`.
    ///
    /// `Ok(None)` means the strata are not comparable.
    pub fn quotient(&self, lower: usize, upper: usize) -> Result<Option<HeightFn>, SpectraError> {
        match self.pair(lower, upper) {
            None => Ok(None),
            Some(pair) => match pair.quotient {
                PairQuotient::Exact(h) => Ok(Some(h)),
                PairQuotient::Unavailable => Err(SpectraError::UnavailablePair {
                    lower: self.strata[lower].label.clone(),
                    upper: self.strata[upper].label.clone(),
                }),
            },
        }
    }

    /// Pairs whose upper end is `upper`, including the reflexive one.
    pub fn pairs_below(&self, upper: usize) -> impl Iterator<Item = &PairStratum> + '_ {
        self.pairs.iter().filter(move |p| p.upper == upper)
    }

    pub fn all_pairs_exact(&self) -> bool {
        self.pairs.iter().all(|p| p.quotient.exact().is_some())
    }

    /// First unavailable pair, for error reporting.
    pub fn first_unavailable(&self) -> Option<SpectraError> {
        self.pairs.iter().find_map(|p| match p.quotient {
            PairQuotient::Exact(_) => None,
            PairQuotient::Unavailable => Some(SpectraError::UnavailablePair {
                lower: self.strata[p.lower].label.clone(),
                upper: self.strata[p.upper].label.clone(),
            }),
        })
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.strata.iter().position(|s| s.label == label)
    }

    /// Resolves a stratum selector against this summary.
    pub fn select(&self, selector: StratumSelector) -> Result<usize, SpectraError> {
        let missing = || SpectraError::UnknownStratum(selector.to_string());
        match selector {
            StratumSelector::Zero => Ok(0),
            StratumSelector::Maximal => match self.pullback {
                Some(_) => self.find("in:0").ok_or_else(missing),
                None => self
                    .strata
                    .iter()
                    .position(|s| s.height == self.dim)
                    .ok_or_else(missing),
            },
            StratumSelector::Outside(h) => match self.pullback {
                Some(_) => self.find(&format!("out:{h}")).ok_or_else(missing),
                None => self.find(&format!("ht:{h}")).ok_or_else(missing),
            },
            StratumSelector::Inside(e) => self.find(&format!("in:{e}")).ok_or_else(missing),
            StratumSelector::Height(h) => self.find(&format!("ht:{h}")).ok_or_else(missing),
        }
    }
}

/// Names a stratum on the command line: `M`, `0`, `out:<h>`, `in:<e>`, `ht:<h>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StratumSelector {
    Zero,
    Maximal,
    Outside(u32),
    Inside(u32),
    Height(u32),
}

impl FromStr for StratumSelector {
    type Err = SpectraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SpectraError::BadSelector(s.to_string());
        let s = s.trim();
        match s {
            "0" => return Ok(StratumSelector::Zero),
            "M" => return Ok(StratumSelector::Maximal),
            _ => {}
        }
        let (tag, num) = s.split_once(':').ok_or_else(bad)?;
        let n: u32 = num.trim().parse().map_err(|_| bad())?;
        match tag.trim() {
            "out" => Ok(StratumSelector::Outside(n)),
            "in" => Ok(StratumSelector::Inside(n)),
            "ht" => Ok(StratumSelector::Height(n)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for StratumSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StratumSelector::Zero => f.write_str("0"),
            StratumSelector::Maximal => f.write_str("M"),
            StratumSelector::Outside(h) => write!(f, "out:{h}"),
            StratumSelector::Inside(e) => write!(f, "in:{e}"),
            StratumSelector::Height(h) => write!(f, "ht:{h}"),
        }
    }
}

/// Canonical stratification of an AF-domain: one stratum per height `0..=dim`.
fn af_summary(profile: AfProfile, source: &str) -> SpectrumSummary {
    let AfProfile { td, dim, catenarian } = profile;
    let strata = (0..=dim)
        .map(|h| Stratum {
            label: format!("ht:{h}"),
            kind: StratumKind::Plain,
            height: h,
            residue_td: td - h,
            poly_height: HeightFn::flat(h),
            provenance: format!("{source}/ht:{h}"),
        })
        .collect();
    let mut pairs = Vec::new();
    for lo in 0..=dim {
        for hi in lo..=dim {
            let quotient = if catenarian || lo == 0 || lo == hi {
                PairQuotient::Exact(HeightFn::flat(hi - lo))
            } else {
                PairQuotient::Unavailable
            };
            pairs.push(PairStratum {
                lower: lo as usize,
                upper: hi as usize,
                quotient,
            });
        }
    }
    SpectrumSummary::assemble(td, strata, pairs, None)
}

/// Compiles an expression into its stratified spectrum.
pub fn summarize(expr: &AlgebraExpr) -> Result<SpectrumSummary, SpectraError> {
    expr.validate()?;
    if let Some(profile) = expr.af_profile() {
        return Ok(af_summary(profile, &expr.to_string()));
    }
    let AlgebraExpr::Pullback {
        ambient,
        max_height: m,
        subring,
        outside,
    } = expr
    else {
        unreachable!("validated non-AF expression is a pullback");
    };
    let m = *m;
    let outside = *outside;
    let t = ambient.af_profile().expect("validated");
    let d = summarize(subring)?;
    let td_k = t.td - m;
    let td_kd = td_k - d.td;
    let source = expr.to_string();

    // validation guarantees outside >= m - 1
    let top_outside = outside;
    let mut strata = Vec::new();
    for h in 0..=top_outside {
        strata.push(Stratum {
            label: format!("out:{h}"),
            kind: StratumKind::OutsideM,
            height: h,
            residue_td: t.td - h,
            poly_height: HeightFn::flat(h),
            provenance: format!("{source}/T={ambient}/ht:{h}"),
        });
    }
    let first_inside = strata.len();
    for (e, ds) in d.strata.iter().enumerate() {
        strata.push(Stratum {
            label: format!("in:{e}"),
            kind: StratumKind::ContainsM,
            height: m + ds.height,
            residue_td: ds.residue_td,
            poly_height: HeightFn::new(m + ds.height, td_kd),
            provenance: format!("{source}/D={subring}/{}", ds.label),
        });
    }

    let mut pairs = Vec::new();
    let exact_outside = |h1: u32, h2: u32| t.catenarian || h1 == 0 || h1 == h2;
    for h1 in 0..=top_outside {
        for h2 in h1..=top_outside {
            pairs.push(PairStratum {
                lower: h1 as usize,
                upper: h2 as usize,
                quotient: if exact_outside(h1, h2) {
                    PairQuotient::Exact(HeightFn::flat(h2 - h1))
                } else {
                    PairQuotient::Unavailable
                },
            });
        }
    }
    for h1 in 0..m {
        for (e, ds) in d.strata.iter().enumerate() {
            pairs.push(PairStratum {
                lower: h1 as usize,
                upper: first_inside + e,
                quotient: if t.catenarian || h1 == 0 {
                    PairQuotient::Exact(HeightFn::new(m - h1 + ds.height, td_kd))
                } else {
                    PairQuotient::Unavailable
                },
            });
        }
    }
    for dp in &d.pairs {
        pairs.push(PairStratum {
            lower: first_inside + dp.lower,
            upper: first_inside + dp.upper,
            quotient: dp.quotient,
        });
    }

    let data = PullbackData {
        m,
        td_k,
        td_d: d.td,
        dim_d: d.dim,
        td_kd,
        outside,
        ambient_dim: t.dim,
        ambient_catenarian: t.catenarian,
    };
    Ok(SpectrumSummary::assemble(t.td, strata, pairs, Some(data)))
}

/// True iff `A[n]` is an AF-domain: `ht(p[n]) + t.d.(A/p) = t.d.(A)` for every stratum.
pub fn is_af_poly(summary: &SpectrumSummary, n: u32) -> bool {
    summary
        .strata
        .iter()
        .all(|s| s.poly_height.eval(n) + s.residue_td == summary.td)
}
