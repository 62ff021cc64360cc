use proptest::prelude::*;
use sasaki_core::expr::{parse_expr, BinOp, Expr, ExprField, ExprScalar, Func};
use sasaki_core::{GeomError, ScalarField, VectorField};

fn ev(s: &str, x: &[f64]) -> f64 {
    parse_expr(s).unwrap().eval(x).unwrap()
}

#[test]
fn precedence_and_associativity() {
    assert_eq!(ev("2^3^2", &[]), 512.0);
    assert_eq!(ev("(2^3)^2", &[]), 64.0);
    assert_eq!(ev("-x^2", &[3.0]), -9.0);
    assert_eq!(ev("(-x)^2", &[3.0]), 9.0);
    assert_eq!(ev("1 + 2 * 3", &[]), 7.0);
    assert_eq!(ev("(1 + 2) * 3", &[]), 9.0);
    assert_eq!(ev("10 - 4 - 3", &[]), 3.0);
    assert_eq!(ev("2 * 3 ^ 2", &[]), 18.0);
    assert_eq!(ev("--x", &[2.0]), 2.0);
    assert_eq!(ev("x - -y", &[1.0, 2.0]), 3.0);
    assert_eq!(ev(" 1.5E-1 *  2 ", &[]), 0.3);
}

#[test]
fn variable_aliases() {
    let p = [1.0, 2.0, 3.0, 4.0];
    assert_eq!(ev("x", &p), ev("x1", &p));
    assert_eq!(ev("y", &p), ev("x2", &p));
    assert_eq!(ev("z", &p), ev("x3", &p));
    assert_eq!(ev("x4", &p), 4.0);
    assert_eq!(parse_expr("x4 * y").unwrap().arity(), 4);
    assert!(parse_expr("x0").is_err());
    assert!(parse_expr("x01").is_err());
    assert!(parse_expr("w").is_err());
}

#[test]
fn function_library() {
    let x = 0.7_f64;
    assert!((ev("sin(x)^2 + cos(x)^2", &[x]) - 1.0).abs() < 1e-15);
    assert!((ev("cosh(x)^2 - sinh(x)^2", &[x]) - 1.0).abs() < 1e-14);
    assert!((ev("log(exp(x))", &[x]) - x).abs() < 1e-15);
    assert!((ev("sqrt(x)^2", &[x]) - x).abs() < 1e-15);
    assert!((ev("pow(x, 3)", &[x]) - x.powi(3)).abs() < 1e-15);
    assert!((ev("x^0.5", &[x]) - x.sqrt()).abs() < 1e-15);
}

#[test]
fn malformed_input_is_rejected() {
    for text in ["", "1 +", "(x", "x)", "sin x", "sin(x, y)", "pow(x)", "1..2", "x y", "3 $ 4", "sin()"] {
        assert!(matches!(parse_expr(text), Err(GeomError::Parse { .. })), "{text:?} parsed");
    }
}

#[test]
fn evaluation_domain_errors() {
    for (text, x) in [("log(x)", 0.0), ("sqrt(x)", -1.0), ("1/x", 0.0), ("x^0.5", -2.0)] {
        assert!(matches!(parse_expr(text).unwrap().eval(&[x]), Err(GeomError::EvalDomain { .. })), "{text} at {x}");
    }
    assert!(ExprScalar::parse("log(x)").unwrap().eval(&[-1.0]).is_err());
    // integer powers of negative bases are fine
    assert_eq!(ev("x^3", &[-2.0]), -8.0);
}

#[test]
fn fields_check_their_dimension() {
    let f = ExprField::parse(&["y", "-x"], 2).unwrap();
    assert_eq!(f.dim(), 2);
    assert_eq!(f.eval(&[1.0, 2.0]).unwrap(), vec![2.0, -1.0]);
    assert!(ExprField::parse(&["y"], 2).is_err());
    assert!(ExprField::parse(&["x3", "0"], 2).is_err());
}

fn leaf(nonneg: bool) -> BoxedStrategy<Expr> {
    let num = if nonneg { (0.0..100.0f64).boxed() } else { (-100.0..100.0f64).boxed() };
    prop_oneof![num.prop_map(Expr::Num), (0usize..3).prop_map(Expr::Var)].boxed()
}

fn tree(nonneg: bool) -> impl Strategy<Value = Expr> {
    let funcs = [Func::Sin, Func::Cos, Func::Sinh, Func::Cosh, Func::Exp, Func::Log, Func::Sqrt];
    let ops = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow];
    leaf(nonneg).prop_recursive(6, 64, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (prop::sample::select(ops.to_vec()), inner.clone(), inner.clone())
                .prop_map(|(op, a, b)| Expr::Bin(op, Box::new(a), Box::new(b))),
            (prop::sample::select(funcs.to_vec()), inner.clone()).prop_map(|(f, a)| Expr::Call(f, vec![a])),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::Call(Func::Pow, vec![a, b])),
        ]
    })
}

fn same(a: &sasaki_core::Result<f64>, b: &sasaki_core::Result<f64>) -> bool {
    match (a, b) {
        (Ok(u), Ok(v)) => u.to_bits() == v.to_bits() || (u.is_nan() && v.is_nan()),
        (Err(_), Err(_)) => true,
        _ => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn display_then_parse_is_the_identity(e in tree(true)) {
        prop_assert!(e.depth() <= 7);
        let text = e.to_string();
        let back = parse_expr(&text).unwrap();
        prop_assert_eq!(&back, &e, "{}", text);
    }

    #[test]
    fn display_then_parse_preserves_values(e in tree(false), x in prop::array::uniform3(-2.0..2.0f64)) {
        // a negative literal comes back as a negated positive one, so compare values
        let back = parse_expr(&e.to_string()).unwrap();
        prop_assert!(same(&back.eval(&x), &e.eval(&x)), "{}", e);
        prop_assert_eq!(back.to_string(), parse_expr(&back.to_string()).unwrap().to_string());
    }
}
