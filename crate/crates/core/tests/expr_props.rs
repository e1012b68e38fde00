use std::collections::BTreeSet;

use g4_core::expr::BinOp;
use g4_core::{parse_expr, Expr, Func, Jet, Params};
use proptest::prelude::*;

fn params() -> Params {
    [("a".to_string(), 0.75), ("k".to_string(), 1.5)]
        .into_iter()
        .collect()
}

fn names() -> BTreeSet<String> {
    params().keys().cloned().collect()
}

/// Expressions that stay inside every function's domain for s in [-2, 2].
fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(Expr::Var),
        (1u32..400).prop_map(|n| Expr::num(n as f64 / 100.0)),
        prop_oneof![Just("a"), Just("k")].prop_map(Expr::param),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let one = Expr::num(1.0);
        let two = Expr::num(2.0);
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::binary(BinOp::Add, l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::binary(BinOp::Sub, l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::binary(BinOp::Mul, l, r)),
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (inner.clone(), 2u32..4).prop_map(|(e, n)| Expr::binary(
                BinOp::Pow,
                e,
                Expr::num(n as f64)
            )),
            (inner.clone(), prop_oneof![Just(Func::Sin), Just(Func::Cos)])
                .prop_map(|(e, f)| Expr::call(f, e)),
            // bounded arguments for the growing functions
            (
                inner.clone(),
                prop_oneof![
                    Just(Func::Exp),
                    Just(Func::Sinh),
                    Just(Func::Cosh),
                    Just(Func::Tan)
                ]
            )
                .prop_map(|(e, f)| Expr::call(
                    f,
                    Expr::binary(BinOp::Mul, Expr::num(0.5), Expr::call(Func::Sin, e))
                )),
            // positive arguments for log and sqrt
            (
                inner.clone(),
                prop_oneof![Just(Func::Log), Just(Func::Sqrt)]
            )
                .prop_map(move |(e, f)| {
                    Expr::call(
                        f,
                        Expr::binary(
                            BinOp::Add,
                            one.clone(),
                            Expr::binary(BinOp::Pow, e, two.clone()),
                        ),
                    )
                }),
            (inner.clone(), inner).prop_map(|(l, r)| {
                Expr::binary(
                    BinOp::Div,
                    l,
                    Expr::binary(BinOp::Add, Expr::num(2.0), Expr::call(Func::Cos, r)),
                )
            }),
        ]
    })
}

proptest! {
    #[test]
    fn printing_round_trips(e in arb_expr()) {
        let text = e.to_string();
        let back = parse_expr(&text, &names()).unwrap();
        prop_assert_eq!(back, e, "{}", text);
    }

    #[test]
    fn jet_order_zero_matches_real_eval(e in arb_expr(), s in -2.0..2.0f64) {
        let p = params();
        let r = e.eval_real(s, &p);
        let j = e.eval_jet(&Jet::var(s), &p);
        match (r, j) {
            (Ok(r), Ok(j)) => prop_assert!(r == j.value() || (r.is_nan() && j.value().is_nan()), "{} at {}: {} vs {}", e, s, r, j.value()),
            (Err(_), Err(_)) => {}
            (r, j) => prop_assert!(false, "{} at {}: {:?} vs {:?}", e, s, r, j),
        }
    }
}
