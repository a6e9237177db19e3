use krulldim::formulas::{
    af_pair_dim, d_value, fiber_dim, lambda_bound, mixed_ideal_height, pullback_height, special_chain_height,
    FormulaError,
};
use krulldim::oracle::{brewer_poly_dim, chain_enumerate, column_chains, ext_field_dim, ChainTable};
use krulldim::spectra::{is_af_poly, HeightFn, PairQuotient};
use krulldim::{dim_tensor_summaries, parse_expr, summarize, AlgebraExpr, SpectrumSummary};
use proptest::prelude::*;

fn af_expr(max_td: u32) -> impl Strategy<Value = AlgebraExpr> {
    (0..=max_td)
        .prop_flat_map(|t| (Just(t), 0..=t))
        .prop_map(|(t, d)| AlgebraExpr::af(t, d))
}

fn af_like(max_td: u32, catenarian_only: bool) -> BoxedStrategy<AlgebraExpr> {
    let val = (1u32..=3)
        .prop_flat_map(move |d| (d..=max_td.max(d), Just(d)))
        .prop_map(|(t, d)| AlgebraExpr::valuation(t, d));
    let poly = (af_expr(2), 0u32..=2).prop_map(|(b, n)| AlgebraExpr::poly(b, n));
    let field = (0..=max_td).prop_map(AlgebraExpr::field);
    if catenarian_only {
        prop_oneof![field, af_expr(max_td), val, poly].boxed()
    } else {
        let noncat = (2u32..=max_td.max(2))
            .prop_flat_map(|t| (Just(t), 2..=t))
            .prop_map(|(t, d)| AlgebraExpr::af_noncatenarian(t, d));
        prop_oneof![field, af_expr(max_td), val, poly, noncat].boxed()
    }
}

/// Pullbacks built from valid parameter choices.
fn pullback_expr(catenarian_only: bool) -> impl Strategy<Value = AlgebraExpr> {
    let subring = prop_oneof![
        (0u32..=2).prop_map(AlgebraExpr::field),
        af_expr(2),
        Just(AlgebraExpr::af_noncatenarian(2, 2)),
    ];
    (1u32..=3, 0u32..=2, subring, 0u32..3, any::<bool>()).prop_filter_map(
        "invalid pullback",
        move |(m, kd, d, shape, cat)| {
            let d_prof = d.af_profile()?;
            if catenarian_only && !d_prof.catenarian {
                return None;
            }
            let t = m + d_prof.td + kd;
            let expr = match shape {
                0 => AlgebraExpr::pullback(AlgebraExpr::valuation(t, m), m, d, m - 1),
                1 => {
                    let ambient = if cat || catenarian_only {
                        AlgebraExpr::af(t, m)
                    } else {
                        AlgebraExpr::af_noncatenarian(t, m)
                    };
                    AlgebraExpr::pullback(ambient, m, d, m)
                }
                _ => AlgebraExpr::pullback(AlgebraExpr::af(t, m + 1), m, d, m + 1),
            };
            expr.validate().ok().map(|_| expr)
        },
    )
}

fn any_algebra() -> impl Strategy<Value = AlgebraExpr> {
    prop_oneof![af_like(5, false), pullback_expr(false)]
}

fn exact_algebra() -> impl Strategy<Value = AlgebraExpr> {
    prop_oneof![af_like(4, true), pullback_expr(true)]
}

fn summary(e: &AlgebraExpr) -> SpectrumSummary {
    summarize(e).unwrap()
}

fn gated(r: Result<krulldim::DimReport, FormulaError>) -> Option<u32> {
    r.ok().map(|rep| rep.value)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn summary_shape(e in any_algebra()) {
        let s = summary(&e);
        prop_assert_eq!(s.dim, s.strata.iter().map(|x| x.height).max().unwrap());
        let z = s.zero();
        prop_assert_eq!((z.height, z.residue_td, z.poly_height), (0, s.td, HeightFn::ZERO));
        for st in &s.strata {
            prop_assert!(st.height + st.residue_td <= s.td);
        }
        for i in 0..s.strata.len() {
            prop_assert_eq!(s.quotient(i, i).unwrap(), Some(HeightFn::ZERO));
        }
        let af = s.strata.iter().all(|x| x.height + x.residue_td == s.td && x.poly_height.cap == 0);
        prop_assert_eq!(s.is_af, af);
        prop_assert!(s.is_domain);
    }

    #[test]
    fn pair_heights_are_superadditive(e in any_algebra()) {
        let s = summary(&e);
        for p in &s.pairs {
            let (lo, hi) = (&s.strata[p.lower], &s.strata[p.upper]);
            prop_assert!(lo.height <= hi.height);
            if let PairQuotient::Exact(q) = p.quotient {
                prop_assert!(lo.height + q.base <= hi.height);
                if s.catenarian {
                    prop_assert_eq!(lo.height + q.base, hi.height);
                }
            }
        }
    }

    #[test]
    fn catenarian_quotients_add_along_chains(e in exact_algebra()) {
        let s = summary(&e);
        for a in &s.pairs {
            for b in s.pairs.iter().filter(|b| b.lower == a.upper) {
                let (Some(x), Some(y)) = (a.quotient.exact(), b.quotient.exact()) else { continue };
                let whole = s.quotient(a.lower, b.upper).unwrap().unwrap();
                prop_assert_eq!(whole.base, x.base + y.base);
            }
        }
    }

    #[test]
    fn pullback_dim_and_af_threshold(e in pullback_expr(false)) {
        let s = summary(&e);
        let pb = s.pullback.unwrap();
        prop_assert_eq!(s.dim, pb.outside.max(pb.m + pb.dim_d));
        prop_assert_eq!(pb.td_kd, pb.td_k - pb.td_d);
        for n in 0..=pb.td_kd + 2 {
            prop_assert_eq!(is_af_poly(&s, n), n >= pb.td_kd);
        }
    }

    #[test]
    fn poly_over_field_is_canonical_af(t in 0u32..6, n in 0u32..4) {
        let p = summary(&AlgebraExpr::poly(AlgebraExpr::field(t), n));
        let a = summary(&AlgebraExpr::af(t + n, n));
        prop_assert_eq!(p.strata.len(), a.strata.len());
        for (x, y) in p.strata.iter().zip(&a.strata) {
            prop_assert_eq!((x.height, x.residue_td, x.poly_height), (y.height, y.residue_td, y.poly_height));
        }
        prop_assert_eq!(p.pairs, a.pairs);
    }

    #[test]
    fn display_round_trips(e in any_algebra()) {
        prop_assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn af_formulas_agree(a in af_like(5, true), b in af_like(5, true)) {
        let (a, b) = (summary(&a), summary(&b));
        let v = af_pair_dim(&a, &b).unwrap();
        prop_assert_eq!(d_value(a.td, a.dim, &b).unwrap(), v);
        prop_assert_eq!(d_value(b.td, b.dim, &a).unwrap(), v);
        prop_assert_eq!(dim_tensor_summaries(&a, &b).unwrap().value, v);
    }

    #[test]
    fn dim_is_symmetric(a in any_algebra(), b in any_algebra()) {
        let (a, b) = (summary(&a), summary(&b));
        if let (Some(x), Some(y)) = (gated(dim_tensor_summaries(&a, &b)), gated(dim_tensor_summaries(&b, &a))) {
            prop_assert_eq!(x, y);
        }
    }

    #[test]
    fn oracle_is_sound_and_tight(a in exact_algebra(), b in exact_algebra()) {
        let (a, b) = (summary(&a), summary(&b));
        let dim = dim_tensor_summaries(&a, &b).unwrap().value;
        prop_assert_eq!(chain_enumerate(&a, &b).unwrap(), dim);
    }

    #[test]
    fn independent_oracles_agree(a in exact_algebra(), n in 0u32..5) {
        let s = summary(&a);
        let poly = summary(&AlgebraExpr::poly(AlgebraExpr::field(0), n));
        let field = summary(&AlgebraExpr::field(n));
        prop_assert_eq!(brewer_poly_dim(&s, n), dim_tensor_summaries(&s, &poly).unwrap().value);
        prop_assert_eq!(ext_field_dim(&s, n), dim_tensor_summaries(&s, &field).unwrap().value);
    }

    #[test]
    fn heights_decompose(a in exact_algebra(), b in exact_algebra()) {
        let (a, b) = (summary(&a), summary(&b));
        let dim = dim_tensor_summaries(&a, &b).unwrap().value;
        let table = ChainTable::build(&a, &b).unwrap();
        for p in 0..a.strata.len() {
            for q in 0..b.strata.len() {
                for delta in 0..=fiber_dim(&a.strata[p], &b.strata[q]) {
                    let ht = if a.pullback.is_some() {
                        let mixed = mixed_ideal_height(&a, &b, p, q).unwrap();
                        let ht = pullback_height(&a, &b, p, q, delta).unwrap();
                        prop_assert_eq!(ht, mixed + delta);
                        ht
                    } else {
                        special_chain_height(&a, &b, p, q, delta).unwrap()
                    };
                    if a.is_af {
                        prop_assert_eq!(special_chain_height(&a, &b, p, q, delta).unwrap(), ht);
                    }
                    if let Some(c) = table.to_anchor(p, q) {
                        prop_assert_eq!(c.total + delta, ht);
                    }
                    prop_assert!(ht <= dim);
                }
            }
        }
    }

    #[test]
    fn lambda_bound_dominates_column_chains(a in exact_algebra(), b in exact_algebra()) {
        let (a, b) = (summary(&a), summary(&b));
        for chain in column_chains(&a, &b).unwrap() {
            let (last, _) = chain.last();
            let realized = chain.total + 1;
            for pair in a.pairs.iter().filter(|pr| pr.lower == last) {
                for q in 1..b.strata.len() {
                    for delta in 0..=fiber_dim(&a.strata[pair.upper], &b.strata[q]) {
                        prop_assert!(realized <= lambda_bound(&a, &b, pair.upper, q, delta));
                    }
                }
            }
        }
    }

    #[test]
    fn delta_beyond_fiber_is_rejected(a in pullback_expr(true), b in exact_algebra()) {
        let (a, b) = (summary(&a), summary(&b));
        let over = fiber_dim(a.zero(), b.zero()) + 1;
        let is_delta_error = matches!(
            pullback_height(&a, &b, 0, 0, over),
            Err(FormulaError::DeltaOutOfRange { .. })
        );
        prop_assert!(is_delta_error);
    }
}
