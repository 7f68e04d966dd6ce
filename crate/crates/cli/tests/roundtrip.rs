//! Printing a tree and parsing it back gives the same tree.

use chowline_cli::syntax::{parse, parse_bundle, Bundle, ClassKind, Expr, Series};
use proptest::prelude::*;

fn name() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["E", "F", "L", "E'", "E''", "Q_2", "dual", "lam"]).prop_map(String::from)
}

fn bundle(depth: u32) -> BoxedStrategy<Bundle> {
    let leaf = prop_oneof![
        name().prop_map(Bundle::Name),
        Just(Bundle::Trivial),
        prop::collection::vec(-5i64..=5, 1..4).prop_map(Bundle::Line),
        (0i64..=4).prop_map(Bundle::Int),
    ];
    if depth == 0 {
        return leaf.boxed();
    }
    let sub = bundle(depth - 1);
    prop_oneof![
        2 => leaf,
        1 => (sub.clone(), sub.clone()).prop_map(|(a, b)| Bundle::Sum(a.into(), b.into())),
        1 => (sub.clone(), sub.clone()).prop_map(|(a, b)| Bundle::Diff(a.into(), b.into())),
        1 => (sub.clone(), sub.clone()).prop_map(|(a, b)| Bundle::Tensor(a.into(), b.into())),
        1 => sub.clone().prop_map(|a| Bundle::Neg(a.into())),
        1 => sub.clone().prop_map(|a| Bundle::Dual(a.into())),
        1 => sub.clone().prop_map(|a| Bundle::Det(a.into())),
        1 => (-1i64..=3, sub).prop_map(|(p, a)| Bundle::Lam(p, a.into())),
    ]
    .boxed()
}

fn series() -> impl Strategy<Value = Series> {
    prop_oneof![
        Just(Series::Exp),
        Just(Series::Expm1),
        Just(Series::Todd),
        Just(Series::OnePlusT),
        prop::collection::vec((-9i64..=9, 1i64..=7), 1..5).prop_map(Series::List),
    ]
}

fn expr(depth: u32) -> BoxedStrategy<Expr> {
    let b = bundle(2);
    let leaf = prop_oneof![
        (0i64..=20, 1i64..=6).prop_map(|(p, q)| Expr::Num(p, q)),
        (-1i64..=4, b.clone()).prop_map(|(k, v)| Expr::Chern(k, v)),
        (0i64..=4, b.clone()).prop_map(|(k, v)| Expr::Segre(k, v)),
        b.clone().prop_map(Expr::Ch),
        b.clone().prop_map(Expr::Td),
        b.clone().prop_map(Expr::TdStar),
        b.clone().prop_map(Expr::Rk),
        (prop::bool::ANY, series(), b).prop_map(|(phi, s, v)| {
            Expr::Class(if phi { ClassKind::Phi } else { ClassKind::Psi }, s, v)
        }),
    ];
    if depth == 0 {
        return leaf.boxed();
    }
    let sub = expr(depth - 1);
    prop_oneof![
        2 => leaf,
        1 => (sub.clone(), sub.clone()).prop_map(|(a, b)| Expr::Add(a.into(), b.into())),
        1 => (sub.clone(), sub.clone()).prop_map(|(a, b)| Expr::Sub(a.into(), b.into())),
        1 => (sub.clone(), sub.clone()).prop_map(|(a, b)| Expr::Mul(a.into(), b.into())),
        1 => sub.clone().prop_map(|a| Expr::Neg(a.into())),
        1 => (sub, 0u32..=4).prop_map(|(a, n)| Expr::Pow(a.into(), n)),
    ]
    .boxed()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn expressions_round_trip(e in expr(5)) {
        let text = e.to_string();
        let back = parse(&text).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        prop_assert_eq!(back, e);
    }

    #[test]
    fn bundles_round_trip(b in bundle(5)) {
        let text = b.to_string();
        let back = parse_bundle(&text).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        prop_assert_eq!(back, b);
    }

    #[test]
    fn printing_is_a_fixed_point(e in expr(3)) {
        let once = e.to_string();
        prop_assert_eq!(parse(&once).unwrap().to_string(), once);
    }
}
