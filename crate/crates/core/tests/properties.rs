//! Property tests: algebraic laws of the expression kernel and
//! differential-geometric laws on randomized fields over the built-in
//! geometry.

use lcscheck::connection::lie_deriv_metric_bracket;
use lcscheck::fixtures::load_builtin;
use lcscheck::lcs::Geometry;
use lcscheck::manifold::VectorFieldExpr;
use lcscheck::symexpr::parse;
use lcscheck::{Expr, Symbols, SymbolsRef};
use proptest::prelude::*;

fn syms3() -> SymbolsRef {
    Symbols::new(&["x", "y", "z"], &[])
}

/// A random low-degree polynomial expression. Degrees are kept small so the
/// gcd work in nested products stays fast.
fn arb_poly_expr(syms: SymbolsRef) -> impl Strategy<Value = Expr> {
    let term = (any::<i8>(), prop::array::uniform3(0u8..2u8));
    prop::collection::vec(term, 0..3).prop_map(move |terms| {
        let mut acc = Expr::zero(&syms);
        for (c, exps) in terms {
            let mut t = Expr::int(&syms, c as i64);
            for (v, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&Expr::var(&syms, v));
                }
            }
            acc = acc.add(&t);
        }
        acc
    })
}

/// Rational function: random numerator over a small denominator pool.
fn arb_expr(syms: SymbolsRef) -> impl Strategy<Value = Expr> {
    let pool = syms.clone();
    let den = (0usize..4).prop_map(move |k| match k {
        0 => Expr::one(&pool),
        1 => Expr::var(&pool, 2),
        2 => Expr::var(&pool, 0).add(&Expr::int(&pool, 2)),
        _ => Expr::var(&pool, 2).mul(&Expr::var(&pool, 2)),
    });
    (arb_poly_expr(syms), den).prop_map(|(n, d)| n.div(&d).unwrap())
}

fn geo() -> (Geometry, SymbolsRef) {
    let m = load_builtin("lcs3-corrected-phi")
        .unwrap()
        .def
        .build()
        .unwrap();
    let syms = m.geometry.chart().syms.clone();
    (m.geometry, syms)
}

/// Vector field with small polynomial frame components.
fn arb_vector(syms: SymbolsRef) -> impl Strategy<Value = Vec<Expr>> {
    prop::collection::vec(arb_poly_expr(syms), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalization_is_idempotent(e in arb_expr(syms3())) {
        // Any further arithmetic no-op must not change the representation.
        prop_assert_eq!(e.add(&Expr::zero(e.symbols())), e.clone());
        prop_assert_eq!(e.mul(&Expr::one(e.symbols())), e);
    }

    #[test]
    fn print_then_parse_is_identity(e in arb_expr(syms3())) {
        let s = syms3();
        let reparsed = parse(&e.to_string(), &s).unwrap();
        prop_assert_eq!(reparsed, e);
    }

    #[test]
    fn field_laws(a in arb_expr(syms3()), b in arb_expr(syms3()), c in arb_expr(syms3())) {
        prop_assert!(a.add(&b).sub(&b.add(&a)).is_zero());
        prop_assert!(a.mul(&b).sub(&b.mul(&a)).is_zero());
        prop_assert!(a.add(&b.add(&c)).sub(&a.add(&b).add(&c)).is_zero());
        prop_assert!(a.mul(&b.mul(&c)).sub(&a.mul(&b).mul(&c)).is_zero());
        prop_assert!(a.mul(&b.add(&c)).sub(&a.mul(&b).add(&a.mul(&c))).is_zero());
        if !a.is_zero() {
            prop_assert!(a.div(&a).unwrap().is_one());
        }
    }

    #[test]
    fn derivative_is_linear_and_leibniz(a in arb_expr(syms3()), b in arb_expr(syms3())) {
        for v in 0..3 {
            let da = a.differentiate(v).unwrap();
            let db = b.differentiate(v).unwrap();
            let sum = a.add(&b).differentiate(v).unwrap();
            prop_assert!(sum.sub(&da.add(&db)).is_zero());
            let prod = a.mul(&b).differentiate(v).unwrap();
            prop_assert!(prod.sub(&da.mul(&b).add(&a.mul(&db))).is_zero());
        }
    }

    #[test]
    fn substitution_commutes_with_arithmetic(
        a in arb_poly_expr(syms3()),
        b in arb_poly_expr(syms3()),
        v in 0usize..3,
        k in -5i64..5,
    ) {
        let s = syms3();
        let value = Expr::int(&s, k);
        let lhs = a.mul(&b).substitute(v, &value);
        let rhs = a.substitute(v, &value).mul(&b.substitute(v, &value));
        prop_assert!(lhs.sub(&rhs).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn lie_bracket_laws(
        xc in arb_vector(geo().1),
        yc in arb_vector(geo().1),
        zc in arb_vector(geo().1),
    ) {
        let (geo, _) = geo();
        let x = VectorFieldExpr { components: xc };
        let y = VectorFieldExpr { components: yc };
        let z = VectorFieldExpr { components: zc };
        let f = &geo.frame;

        // Antisymmetry.
        let anti = f.lie_bracket(&x, &y).add(&f.lie_bracket(&y, &x));
        prop_assert!(anti.components.iter().all(Expr::is_zero));

        // Jacobi identity.
        let jac = f
            .lie_bracket(&x, &f.lie_bracket(&y, &z))
            .add(&f.lie_bracket(&y, &f.lie_bracket(&z, &x)))
            .add(&f.lie_bracket(&z, &f.lie_bracket(&x, &y)));
        prop_assert!(jac.components.iter().all(Expr::is_zero));
    }

    #[test]
    fn lie_derivative_routes_agree_on_random_fields(vc in arb_vector(geo().1)) {
        let (geo, _) = geo();
        let v = VectorFieldExpr { components: vc };
        let a = geo.conn.lie_deriv_metric(&geo.frame, &geo.g, &v);
        let b = lie_deriv_metric_bracket(&geo.frame, &geo.g, &v);
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!(a.matrix[i][j].sub(&b.matrix[i][j]).is_zero());
            }
        }
    }

    #[test]
    fn covariant_derivative_is_tensorial_and_leibniz(
        xc in arb_vector(geo().1),
        yc in arb_vector(geo().1),
        f_scal in arb_poly_expr(geo().1),
    ) {
        let (geo, _) = geo();
        let x = VectorFieldExpr { components: xc };
        let y = VectorFieldExpr { components: yc };

        // Tensorial in X: nabla_{fX} Y = f nabla_X Y.
        let lhs = geo.conn.cov_deriv_vec(&geo.frame, &x.scale(&f_scal), &y);
        let rhs = geo.conn.cov_deriv_vec(&geo.frame, &x, &y).scale(&f_scal);
        prop_assert!(lhs.sub(&rhs).components.iter().all(Expr::is_zero));

        // Leibniz in Y: nabla_X (fY) = X(f) Y + f nabla_X Y.
        let lhs = geo.conn.cov_deriv_vec(&geo.frame, &x, &y.scale(&f_scal));
        let rhs = y
            .scale(&geo.frame.apply(&x, &f_scal))
            .add(&geo.conn.cov_deriv_vec(&geo.frame, &x, &y).scale(&f_scal));
        prop_assert!(lhs.sub(&rhs).components.iter().all(Expr::is_zero));
    }
}
