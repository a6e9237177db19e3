//! Built-in catalog of algebras used by the verification suites.

use crate::spectra::{summarize, AlgebraExpr, SpectrumSummary};

/// Bounds of the verification grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    /// Field pairs `Field(s) ⊗ Field(t)` with `s, t <= sharp_max`.
    pub sharp_max: u32,
    /// AF-domains `af(t, d)` with `t <= af_td_max`.
    pub af_td_max: u32,
    pub val_dim_max: u32,
    pub val_td_max: u32,
    /// Pullbacks with `ht(M) <= pullback_m_max`.
    pub pullback_m_max: u32,
    /// Pullbacks with `t.d.(K:D) <= td_kd_max`.
    pub td_kd_max: u32,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            sharp_max: 6,
            af_td_max: 4,
            val_dim_max: 3,
            val_td_max: 5,
            pullback_m_max: 3,
            td_kd_max: 2,
        }
    }
}

impl Grid {
    pub const ENV_VAR: &'static str = "KRULLDIM_GRID_MAX";

    /// Scales the transcendence-degree bounds to `max`.
    pub fn scaled(max: u32) -> Self {
        Grid {
            sharp_max: max,
            af_td_max: max,
            val_td_max: max.max(1),
            val_dim_max: max.clamp(1, 3),
            ..Grid::default()
        }
    }

    /// Reads `KRULLDIM_GRID_MAX`; falls back to the default grid when unset or invalid.
    pub fn from_env() -> Self {
        std::env::var(Self::ENV_VAR)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Grid::scaled)
            .unwrap_or_default()
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub expr: AlgebraExpr,
    pub summary: SpectrumSummary,
}

impl CatalogEntry {
    pub fn new(expr: AlgebraExpr) -> Self {
        let summary = summarize(&expr).unwrap_or_else(|e| panic!("catalog entry {expr} is invalid: {e}"));
        CatalogEntry { expr, summary }
    }

    pub fn name(&self) -> String {
        self.expr.to_string()
    }

    pub fn is_pullback(&self) -> bool {
        self.summary.pullback.is_some()
    }
}

pub fn fields(grid: &Grid) -> Vec<AlgebraExpr> {
    (0..=grid.af_td_max).map(AlgebraExpr::field).collect()
}

/// Catenarian AF-domains of positive dimension.
pub fn af_domains(grid: &Grid) -> Vec<AlgebraExpr> {
    let mut out = Vec::new();
    for t in 1..=grid.af_td_max {
        for d in 1..=t {
            out.push(AlgebraExpr::af(t, d));
        }
    }
    out
}

/// Iterated `K + M` valuation domains.
pub fn valuation_towers(grid: &Grid) -> Vec<AlgebraExpr> {
    let mut out = Vec::new();
    for d in 1..=grid.val_dim_max {
        for t in d..=grid.val_td_max {
            out.push(AlgebraExpr::valuation(t, d));
        }
    }
    out
}

/// Pullbacks over valuation towers and over abstract AF-domains.
pub fn pullbacks(grid: &Grid) -> Vec<AlgebraExpr> {
    let mut out = Vec::new();
    let subrings = [
        AlgebraExpr::field(0),
        AlgebraExpr::field(1),
        AlgebraExpr::af(1, 1),
        AlgebraExpr::af(2, 2),
    ];
    for m in 1..=grid.pullback_m_max {
        for kd in 0..=grid.td_kd_max {
            for d in &subrings {
                let td_d = d.af_profile().expect("AF").td;
                let t = m + td_d + kd;
                out.push(AlgebraExpr::pullback(AlgebraExpr::valuation(t, m), m, d.clone(), m - 1));
            }
            for d in &subrings[..3] {
                let td_d = d.af_profile().expect("AF").td;
                let t = m + td_d + kd;
                out.push(AlgebraExpr::pullback(AlgebraExpr::af(t, m), m, d.clone(), m));
                if t > m {
                    out.push(AlgebraExpr::pullback(AlgebraExpr::af(t, m + 1), m, d.clone(), m + 1));
                }
            }
        }
    }
    out.push(AlgebraExpr::pullback(
        AlgebraExpr::poly(AlgebraExpr::field(1), 2),
        2,
        AlgebraExpr::field(0),
        2,
    ));
    out
}

/// The full catalog: fields, AF grids, valuation towers, polynomial rings and pullbacks.
pub fn catalog(grid: &Grid) -> Vec<CatalogEntry> {
    let mut exprs = fields(grid);
    exprs.extend(af_domains(grid));
    exprs.extend(valuation_towers(grid));
    exprs.push(AlgebraExpr::poly(AlgebraExpr::field(1), 1));
    exprs.push(AlgebraExpr::poly(AlgebraExpr::valuation(2, 1), 1));
    exprs.push(AlgebraExpr::poly(AlgebraExpr::af(1, 1), 2));
    exprs.extend(pullbacks(grid));
    exprs.into_iter().map(CatalogEntry::new).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_catalog_is_valid_and_covers_every_kind() {
        let cat = catalog(&Grid::default());
        assert!(cat.iter().any(|e| e.summary.is_field()));
        assert!(cat.iter().any(|e| e.is_pullback() && !e.summary.is_af));
        assert!(cat.iter().any(|e| e.is_pullback() && e.summary.is_af));
        let max_m = cat.iter().filter_map(|e| e.summary.pullback).map(|p| p.m).max();
        assert_eq!(max_m, Some(3));
        let max_kd = cat.iter().filter_map(|e| e.summary.pullback).map(|p| p.td_kd).max();
        assert_eq!(max_kd, Some(2));
    }

    #[test]
    fn scaled_grid() {
        let g = Grid::scaled(2);
        assert_eq!((g.sharp_max, g.af_td_max, g.val_dim_max), (2, 2, 2));
        assert_eq!(Grid::scaled(9).val_dim_max, 3);
    }
}
