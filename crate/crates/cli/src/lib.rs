//! Command-line front end: argument model and command execution.
//!
//! [`run`] writes to caller-supplied sinks and returns the process exit code,
//! so the binary and the tests share one code path.

use std::fmt;
use std::io::Write;

use clap::{Parser, Subcommand};
use serde::Serialize;

use krulldim::formulas::{
    applicability, pullback_height, special_chain_height, Applicability, DimReport, Side, Term, Witness,
};
use krulldim::spectra::{is_af_poly, HeightFn, PairQuotient, PullbackData, StratumKind};
use krulldim::suites::{run_all, run_suite, CheckReport};
use krulldim::{dim_tensor, parse_expr, summarize, AlgebraExpr, Grid, ParseError, StratumSelector};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Krull dimension of tensor products of k-algebras.
#[derive(Debug, Parser)]
#[command(name = "krulldim", version)]
pub struct ParsedCommand {
    #[command(subcommand)]
    pub command: Command,
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Krull dimension of A ⊗_k B.
    Dim { a: String, b: String },
    /// Height of a prime P of A ⊗_k B lying over (p, q).
    Ht {
        a: String,
        b: String,
        /// Stratum of A: `0`, `M`, `out:<h>`, `in:<e>` or `ht:<h>`.
        #[arg(long, default_value = "0")]
        p: String,
        /// Stratum of B.
        #[arg(long, default_value = "0")]
        q: String,
        /// ht(P / (p⊗B + A⊗q)), at most the fiber dimension.
        #[arg(long, default_value_t = 0)]
        delta: u32,
    },
    /// Stratified prime spectrum of A.
    Spectrum { a: String },
    /// Run a verification suite (`all` runs every suite).
    Check { suite: String },
    /// Dispatch path, passing gates and maximizing witnesses for A ⊗_k B.
    Explain { a: String, b: String },
}

/// A command failure that maps to exit code 2.
#[derive(Debug)]
pub struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl CliError {
    fn from_parse(text: &str, err: ParseError) -> Self {
        let (start, end) = match &err {
            ParseError::Syntax { pos, .. } => (*pos, *pos + 1),
            ParseError::Constraint { span, .. } => (span.start, span.end.max(span.start + 1)),
        };
        let caret = format!(
            "{}{}",
            " ".repeat(text[..start.min(text.len())].chars().count()),
            "^".repeat(end - start)
        );
        CliError(format!("{err}\n  {text}\n  {caret}"))
    }
}

fn err(e: impl fmt::Display) -> CliError {
    CliError(e.to_string())
}

fn parse(text: &str) -> Result<AlgebraExpr, CliError> {
    parse_expr(text).map_err(|e| CliError::from_parse(text, e))
}

/// Executes a command, writing results to `out` and diagnostics to `errout`.
pub fn run(cmd: &ParsedCommand, out: &mut dyn Write, errout: &mut dyn Write) -> i32 {
    match execute(cmd, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(errout, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn execute(cmd: &ParsedCommand, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cmd.command {
        Command::Dim { a, b } => {
            let report = dim_tensor(&parse(a)?, &parse(b)?).map_err(err)?;
            if cmd.json {
                emit_json(out, &report)?;
            } else {
                emit(out, format_args!("{} ({})\n", report.value, report.theorem))?;
            }
        }
        Command::Ht { a, b, p, q, delta } => {
            let report = height(&parse(a)?, &parse(b)?, p, q, *delta)?;
            if cmd.json {
                emit_json(out, &report)?;
            } else {
                emit(out, format_args!("{} ({})\n", report.value, report.formula))?;
            }
        }
        Command::Spectrum { a } => {
            let report = spectrum(&parse(a)?)?;
            if cmd.json {
                emit_json(out, &report)?;
            } else {
                emit(out, format_args!("{report}"))?;
            }
        }
        Command::Check { suite } => {
            let grid = Grid::from_env();
            let reports = if suite == "all" {
                run_all(&grid)
            } else {
                vec![run_suite(suite, &grid).map_err(err)?]
            };
            if cmd.json {
                emit_json(out, &reports)?;
            } else {
                for r in &reports {
                    emit(out, format_args!("{r}\n"))?;
                }
            }
            let passed = reports.iter().all(CheckReport::passed);
            return Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED });
        }
        Command::Explain { a, b } => {
            let (a, b) = (parse(a)?, parse(b)?);
            let report = explain(&a, &b)?;
            if cmd.json {
                emit_json(out, &report)?;
            } else {
                emit(out, format_args!("{report}"))?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn emit(out: &mut dyn Write, args: fmt::Arguments<'_>) -> Result<(), CliError> {
    out.write_fmt(args).map_err(err)
}

fn emit_json(out: &mut dyn Write, value: &impl Serialize) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(err)?;
    writeln!(out).map_err(err)
}

#[derive(Debug, Serialize)]
pub struct HeightReport {
    pub value: u32,
    pub formula: &'static str,
    pub p: String,
    pub q: String,
    pub delta: u32,
}

/// Height via the pullback formula when `A` is a pullback, the special chain formula when `A` is AF.
pub fn height(a: &AlgebraExpr, b: &AlgebraExpr, p: &str, q: &str, delta: u32) -> Result<HeightReport, CliError> {
    let (sa, sb) = (summarize(a).map_err(err)?, summarize(b).map_err(err)?);
    let ps = sa.select(p.parse::<StratumSelector>().map_err(err)?).map_err(err)?;
    let qs = sb.select(q.parse::<StratumSelector>().map_err(err)?).map_err(err)?;
    let (value, formula) = if sa.pullback.is_some() {
        (pullback_height(&sa, &sb, ps, qs, delta).map_err(err)?, "Thm 2.8")
    } else {
        (
            special_chain_height(&sa, &sb, ps, qs, delta).map_err(err)?,
            "special chain",
        )
    };
    Ok(HeightReport {
        value,
        formula,
        p: sa.strata[ps].label.clone(),
        q: sb.strata[qs].label.clone(),
        delta,
    })
}

#[derive(Debug, Serialize)]
pub struct StratumView {
    pub label: String,
    pub kind: StratumKind,
    pub height: u32,
    pub residue_td: u32,
    pub poly_height: HeightFn,
}

#[derive(Debug, Serialize)]
pub struct PairView {
    pub lower: String,
    pub upper: String,
    pub quotient: PairQuotient,
}

#[derive(Debug, Serialize)]
pub struct SpectrumFlags {
    pub td: u32,
    pub dim: u32,
    pub is_af: bool,
    pub is_domain: bool,
    pub catenarian: bool,
    /// Least `n` with `A[n]` AF.
    pub af_poly_threshold: Option<u32>,
    pub applicability: Applicability,
    pub pullback: Option<PullbackData>,
}

#[derive(Debug, Serialize)]
pub struct SpectrumReport {
    pub expr: String,
    pub strata: Vec<StratumView>,
    pub pairs: Vec<PairView>,
    pub flags: SpectrumFlags,
}

pub fn spectrum(a: &AlgebraExpr) -> Result<SpectrumReport, CliError> {
    let s = summarize(a).map_err(err)?;
    let threshold = (0..=s.td).find(|&n| is_af_poly(&s, n));
    let label = |i: usize| s.strata[i].label.clone();
    Ok(SpectrumReport {
        expr: a.to_string(),
        strata: s
            .strata
            .iter()
            .map(|st| StratumView {
                label: st.label.clone(),
                kind: st.kind,
                height: st.height,
                residue_td: st.residue_td,
                poly_height: st.poly_height,
            })
            .collect(),
        pairs: s
            .pairs
            .iter()
            .map(|pr| PairView {
                lower: label(pr.lower),
                upper: label(pr.upper),
                quotient: pr.quotient,
            })
            .collect(),
        flags: SpectrumFlags {
            td: s.td,
            dim: s.dim,
            is_af: s.is_af,
            is_domain: s.is_domain,
            catenarian: s.catenarian,
            af_poly_threshold: threshold,
            applicability: applicability(&s),
            pullback: s.pullback,
        },
    })
}

fn fmt_height_fn(h: HeightFn) -> String {
    if h.cap == 0 {
        h.base.to_string()
    } else {
        format!("{} + min(n, {})", h.base, h.cap)
    }
}

impl fmt::Display for SpectrumReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fl = &self.flags;
        writeln!(f, "{}", self.expr)?;
        writeln!(
            f,
            "td {}, dim {}, AF {}, catenarian {}",
            fl.td, fl.dim, fl.is_af, fl.catenarian
        )?;
        if let Some(pb) = fl.pullback {
            writeln!(
                f,
                "pullback: ht(M) {}, td(K) {}, td(D) {}, dim(D) {}, td(K:D) {}, outside {}",
                pb.m, pb.td_k, pb.td_d, pb.dim_d, pb.td_kd, pb.outside
            )?;
        }
        if let Some(n) = fl.af_poly_threshold {
            writeln!(f, "A[n] is AF from n = {n}")?;
        }
        writeln!(f, "applicability: {}", fl.applicability.label)?;
        writeln!(f, "strata:")?;
        for s in &self.strata {
            writeln!(
                f,
                "  {:<8} ht {}  t.d.(A/p) {}  ht(p[n]) = {}",
                s.label,
                s.height,
                s.residue_td,
                fmt_height_fn(s.poly_height)
            )?;
        }
        writeln!(f, "pairs:")?;
        for p in &self.pairs {
            let q = match p.quotient {
                PairQuotient::Exact(h) => fmt_height_fn(h),
                PairQuotient::Unavailable => "unavailable".into(),
            };
            writeln!(f, "  {} ⊆ {}: ht((q/q₁)[n]) = {q}", p.lower, p.upper)?;
        }
        Ok(())
    }
}

#[derive(Debug, Serialize)]
pub struct SideGates {
    pub side: Side,
    pub expr: String,
    pub applicability: Applicability,
}

#[derive(Debug, Serialize)]
pub struct ExplainReport {
    pub value: u32,
    pub dispatch: String,
    pub gates: Vec<SideGates>,
    pub terms: Vec<Term>,
    pub witnesses: Vec<Witness>,
}

pub fn explain(a: &AlgebraExpr, b: &AlgebraExpr) -> Result<ExplainReport, CliError> {
    let DimReport {
        value,
        theorem,
        witnesses,
        terms,
        ..
    } = dim_tensor(a, b).map_err(err)?;
    let gates = [(Side::A, a), (Side::B, b)]
        .into_iter()
        .map(|(side, e)| {
            Ok(SideGates {
                side,
                expr: e.to_string(),
                applicability: applicability(&summarize(e).map_err(err)?),
            })
        })
        .collect::<Result<_, CliError>>()?;
    Ok(ExplainReport {
        value,
        dispatch: theorem.to_string(),
        gates,
        terms,
        witnesses,
    })
}

impl fmt::Display for ExplainReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dim = {} via {}", self.value, self.dispatch)?;
        writeln!(f, "gates:")?;
        for g in &self.gates {
            let passing: Vec<String> = g.applicability.passing.iter().map(ToString::to_string).collect();
            let shown = if passing.is_empty() {
                "none".to_string()
            } else {
                passing.join(", ")
            };
            writeln!(f, "  {} = {}: {} ({})", g.side, g.expr, shown, g.applicability.notes)?;
        }
        writeln!(f, "terms:")?;
        for t in &self.terms {
            writeln!(f, "  {} = {}", t.label, t.value)?;
        }
        writeln!(f, "witnesses:")?;
        for w in &self.witnesses {
            let term = serde_json::to_value(w.term)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default();
            writeln!(f, "  {term} at strata of {}: {}", w.side, w.strata.join(" ⊆ "))?;
        }
        Ok(())
    }
}
