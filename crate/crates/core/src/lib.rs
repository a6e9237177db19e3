//! Krull dimension of tensor products `A ⊗_k B` of commutative k-algebras.
//!
//! Algebras are described by [`AlgebraExpr`] (or parsed from the constructor
//! language in [`dsl`]), compiled into a [`SpectrumSummary`], and evaluated by
//! the closed formulas in [`formulas`]. The [`oracle`] module computes the same
//! quantities by enumerating chains, and [`suites`] compares the two.
//!
//! ```
//! use krulldim::{dim_tensor, AlgebraExpr, Theorem};
//!
//! let kpm: AlgebraExpr = "pullback(T=val(2,1), m=1, D=field(0))".parse().unwrap();
//! let line = AlgebraExpr::poly(AlgebraExpr::field(0), 1);
//! let report = dim_tensor(&kpm, &line).unwrap();
//! assert_eq!((report.value, report.theorem), (3, Theorem::PullbackArbitrary));
//! ```

pub mod catalog;
pub mod dsl;
pub mod formulas;
pub mod oracle;
pub mod spectra;
pub mod suites;

pub use catalog::Grid;
pub use dsl::{parse_expr, ParseError};
pub use formulas::{dim_tensor, dim_tensor_summaries, DimReport, FormulaError, Theorem};
pub use oracle::{chain_enumerate, OracleError};
pub use spectra::{summarize, AlgebraExpr, SpectraError, SpectrumSummary, StratumSelector};
pub use suites::{run_suite, CheckReport};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/algebras.md")]
    mod algebras {}
    #[doc = include_str!("../../../book/src/spectra.md")]
    mod spectra {}
    #[doc = include_str!("../../../book/src/formulas.md")]
    mod formulas {}
    #[doc = include_str!("../../../book/src/heights.md")]
    mod heights {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
