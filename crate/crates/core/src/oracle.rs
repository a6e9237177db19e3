//! Independent evaluators that certify the closed formulas from primitive facts.
//!
//! [`chain_enumerate`] builds chains of ideals `p⊗B + A⊗q` through the product
//! of the two stratifications. Each segment's length is the height of a prime
//! minimal over an extended ideal in `(A/p) ⊗ (B/q)`, which only needs `B/q`
//! (or `A/p`) to be a domain; consecutive segments add because ideal height is
//! superadditive along `I ⊆ J`. The terminal fiber step uses the field formula
//! on `k(p) ⊗ k(q)`. None of these moves consult the dimension formulas, so the
//! maximum is a certified lower bound for `dim(A ⊗ B)`.

use serde::Serialize;
use thiserror::Error;

use crate::formulas::fiber_dim;
use crate::spectra::{HeightFn, SpectraError, SpectrumSummary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

/// `ht(P) = ht(q[n]) + ht(P/q[n])` maximized over strata: `dim A[n]`.
pub fn brewer_poly_dim(a: &SpectrumSummary, n: u32) -> u32 {
    a.strata.iter().map(|q| q.poly_height.eval(n) + n).max().unwrap_or(n)
}

/// `dim(A ⊗ k(X₁..X_s))`, a localization of `A[s]`: the fiber over `q` keeps
/// only the primes of `k(q)[s]` meeting `k[s]` trivially, of dimension
/// `min(s, t.d.(A/q))`.
pub fn ext_field_dim(a: &SpectrumSummary, s: u32) -> u32 {
    a.strata
        .iter()
        .map(|q| q.poly_height.eval(s) + s.min(q.residue_td))
        .max()
        .unwrap_or(0)
}

/// Pair of strata indices `(p, q)`: the ideal `p⊗B + A⊗q`.
pub type Anchor = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MoveKind {
    /// `p → p'` at fixed `q`: `ht((p'/p)[t.d.(B/q)])`.
    AdvanceA,
    /// `q → q'` at fixed `p`: `ht((q'/q)[t.d.(A/p)])`.
    AdvanceB,
    /// Both advance with `(A/p)` locally AF at `p'`: `ht((q'/q)[t.d.(A/p)]) + ht(p'/p)`.
    JumpAfA,
    /// Symmetric jump with `(B/q)` locally AF at `q'`.
    JumpAfB,
    /// Saturated chain inside the fiber `k(p) ⊗ k(q)` at the final anchor.
    Fiber,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub kind: MoveKind,
    pub from: Anchor,
    pub to: Anchor,
    pub length: u32,
}

/// A chain of anchors starting at `(0, 0)`, with the length realized on each step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnchoredChain {
    pub anchors: Vec<Anchor>,
    pub segments: Vec<Segment>,
    pub total: u32,
}

impl AnchoredChain {
    fn start() -> Self {
        AnchoredChain {
            anchors: vec![(0, 0)],
            segments: Vec::new(),
            total: 0,
        }
    }

    fn push(&mut self, kind: MoveKind, to: Anchor, length: u32) {
        let from = *self.anchors.last().expect("chains start at (0, 0)");
        if kind != MoveKind::Fiber {
            self.anchors.push(to);
        }
        self.segments.push(Segment { kind, from, to, length });
        self.total += length;
    }

    pub fn last(&self) -> Anchor {
        *self.anchors.last().expect("chains start at (0, 0)")
    }

    pub fn segment_lengths(&self) -> Vec<u32> {
        self.segments.iter().map(|s| s.length).collect()
    }

    pub fn ends_with_fiber(&self) -> bool {
        self.segments.last().is_some_and(|s| s.kind == MoveKind::Fiber)
    }
}

/// Strictly increasing comparable pairs of one side, with their quotient functions.
fn covers(s: &SpectrumSummary) -> Result<Vec<Vec<(usize, HeightFn)>>, SpectraError> {
    if let Some(err) = s.first_unavailable() {
        return Err(err);
    }
    let mut up = vec![Vec::new(); s.strata.len()];
    for pair in s.pairs.iter().filter(|p| p.lower != p.upper) {
        let q = pair.quotient.exact().expect("checked above");
        up[pair.lower].push((pair.upper, q));
    }
    Ok(up)
}

/// Longest anchored chains from `(0, 0)` to every anchor.
///
/// Transitions only move to anchors of strictly larger total height, so a
/// single pass in height order visits every chain.
pub struct ChainTable<'a> {
    a: &'a SpectrumSummary,
    b: &'a SpectrumSummary,
    best: Vec<Vec<Option<AnchoredChain>>>,
}

impl<'a> ChainTable<'a> {
    pub fn build(a: &'a SpectrumSummary, b: &'a SpectrumSummary) -> Result<Self, OracleError> {
        let up_a = covers(a)?;
        let up_b = covers(b)?;
        let mut order: Vec<Anchor> = (0..a.strata.len())
            .flat_map(|p| (0..b.strata.len()).map(move |q| (p, q)))
            .collect();
        order.sort_by_key(|&(p, q)| a.strata[p].height + b.strata[q].height);

        let mut best: Vec<Vec<Option<AnchoredChain>>> = vec![vec![None; b.strata.len()]; a.strata.len()];
        best[0][0] = Some(AnchoredChain::start());

        let relax = |best: &mut Vec<Vec<Option<AnchoredChain>>>, from: &AnchoredChain, kind, to: Anchor, len: u32| {
            let slot = &mut best[to.0][to.1];
            if slot.as_ref().is_none_or(|c| c.total < from.total + len) {
                let mut next = from.clone();
                next.push(kind, to, len);
                *slot = Some(next);
            }
        };

        for (p, q) in order {
            let Some(chain) = best[p][q].clone() else { continue };
            let (rp, rq) = (a.strata[p].residue_td, b.strata[q].residue_td);
            for &(p2, qa) in &up_a[p] {
                relax(&mut best, &chain, MoveKind::AdvanceA, (p2, q), qa.eval(rq));
            }
            for &(q2, qb) in &up_b[q] {
                relax(&mut best, &chain, MoveKind::AdvanceB, (p, q2), qb.eval(rp));
            }
            for &(p2, qa) in &up_a[p] {
                for &(q2, qb) in &up_b[q] {
                    if qa.cap == 0 {
                        relax(&mut best, &chain, MoveKind::JumpAfA, (p2, q2), qb.eval(rp) + qa.base);
                    }
                    if qb.cap == 0 {
                        relax(&mut best, &chain, MoveKind::JumpAfB, (p2, q2), qa.eval(rq) + qb.base);
                    }
                }
            }
        }
        Ok(ChainTable { a, b, best })
    }

    /// Longest chain reaching the anchor, a lower bound for `ht(p⊗B + A⊗q)`.
    pub fn to_anchor(&self, p: usize, q: usize) -> Option<&AnchoredChain> {
        self.best[p][q].as_ref()
    }

    /// Longest chain overall, closed by a fiber step.
    pub fn longest(&self) -> AnchoredChain {
        let mut winner: Option<AnchoredChain> = None;
        for (p, row) in self.best.iter().enumerate() {
            for (q, chain) in row.iter().enumerate() {
                let Some(chain) = chain else { continue };
                let fiber = fiber_dim(&self.a.strata[p], &self.b.strata[q]);
                if winner.as_ref().is_none_or(|w| w.total < chain.total + fiber) {
                    let mut c = chain.clone();
                    c.push(MoveKind::Fiber, (p, q), fiber);
                    winner = Some(c);
                }
            }
        }
        winner.expect("the zero anchor is always reachable")
    }
}

/// Length of the longest anchored chain: a certified lower bound for `dim(A ⊗ B)`.
pub fn chain_enumerate(a: &SpectrumSummary, b: &SpectrumSummary) -> Result<u32, OracleError> {
    Ok(ChainTable::build(a, b)?.longest().total)
}

/// Every chain of `A`-advances that stays over `(0)` in `B`, enumerated explicitly.
pub fn column_chains(a: &SpectrumSummary, b: &SpectrumSummary) -> Result<Vec<AnchoredChain>, OracleError> {
    let up_a = covers(a)?;
    covers(b)?;
    let generic = b.zero().residue_td;
    let mut out = Vec::new();
    let mut stack = vec![AnchoredChain::start()];
    while let Some(chain) = stack.pop() {
        let (p, _) = chain.last();
        for &(p2, qa) in &up_a[p] {
            let mut next = chain.clone();
            next.push(MoveKind::AdvanceA, (p2, 0), qa.eval(generic));
            stack.push(next);
        }
        out.push(chain);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{summarize, AlgebraExpr};

    fn s(expr: &AlgebraExpr) -> SpectrumSummary {
        summarize(expr).unwrap()
    }

    #[test]
    fn brewer_examples() {
        for t in 0..4 {
            for n in 0..4 {
                assert_eq!(brewer_poly_dim(&s(&AlgebraExpr::field(t)), n), n);
            }
        }
        assert_eq!(brewer_poly_dim(&s(&AlgebraExpr::k_plus_m()), 1), 3);
        assert_eq!(brewer_poly_dim(&s(&AlgebraExpr::af(4, 2)), 3), 5);
    }

    #[test]
    fn ext_field_examples() {
        assert_eq!(ext_field_dim(&s(&AlgebraExpr::field(3)), 2), 2);
        assert_eq!(ext_field_dim(&s(&AlgebraExpr::field(1)), 4), 1);
        assert_eq!(ext_field_dim(&s(&AlgebraExpr::k_plus_m()), 1), 2);
        // max over h of h + min(s, t - h) for af(3, 2)
        let af = s(&AlgebraExpr::af(3, 2));
        let brute = (0..=2).map(|h| h + 2u32.min(3 - h)).max().unwrap();
        assert_eq!(ext_field_dim(&af, 2), brute);
    }

    #[test]
    fn enumerator_examples() {
        assert_eq!(
            chain_enumerate(&s(&AlgebraExpr::field(2)), &s(&AlgebraExpr::field(3))).unwrap(),
            2
        );
        assert_eq!(
            chain_enumerate(&s(&AlgebraExpr::k_plus_m()), &s(&AlgebraExpr::af(1, 1))).unwrap(),
            3
        );
        assert_eq!(
            chain_enumerate(&s(&AlgebraExpr::af(2, 2)), &s(&AlgebraExpr::af(1, 1))).unwrap(),
            3
        );
        assert_eq!(
            chain_enumerate(&s(&AlgebraExpr::k_plus_m()), &s(&AlgebraExpr::k_plus_m())).unwrap(),
            3
        );
        let deep = s(&AlgebraExpr::pullback(
            AlgebraExpr::valuation(3, 2),
            2,
            AlgebraExpr::field(0),
            1,
        ));
        assert_eq!(chain_enumerate(&s(&AlgebraExpr::k_plus_m()), &deep).unwrap(), 4);
    }

    #[test]
    fn k_plus_m_chain_shape() {
        let a = s(&AlgebraExpr::k_plus_m());
        let b = s(&AlgebraExpr::af(1, 1));
        let chain = ChainTable::build(&a, &b).unwrap().longest();
        assert_eq!(chain.total, 3);
        assert_eq!(chain.total, chain.segment_lengths().iter().sum::<u32>());
        assert!(chain.ends_with_fiber());
        for w in chain.anchors.windows(2) {
            assert!(w[0].0 <= w[1].0 && w[0].1 <= w[1].1 && w[0] != w[1]);
        }
    }

    #[test]
    fn enumerator_rejects_inexact_pairs() {
        let nc = s(&AlgebraExpr::af_noncatenarian(3, 3));
        assert!(matches!(
            chain_enumerate(&nc, &s(&AlgebraExpr::field(1))),
            Err(OracleError::Spectra(SpectraError::UnavailablePair { .. }))
        ));
    }

    #[test]
    fn column_chains_enumerate_all_subchains() {
        // af(3,3): chains from height 0 through any increasing subset of {1,2,3}
        let a = s(&AlgebraExpr::af(3, 3));
        let chains = column_chains(&a, &s(&AlgebraExpr::field(0))).unwrap();
        assert_eq!(chains.len(), 8);
        assert!(chains.iter().all(|c| c.anchors.iter().all(|&(_, q)| q == 0)));
    }
}
