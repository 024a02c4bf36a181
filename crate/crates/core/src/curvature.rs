//! Riemann curvature and the derived conharmonic, projective, concircular
//! and W2 tensors, plus the derived-action operators used by the theorem
//! suite.
//!
//! Curvature-type tensors are stored as frame components: `t[i][j][k]` is
//! the vector field T(e_i, e_j) e_k.

use crate::connection::ConnectionCoeffs;
use crate::manifold::{Chart, EndoField, FrameField, MetricSpec, Tensor02, VectorFieldExpr};
use crate::symexpr::Expr;
use thiserror::Error;

pub type CurvTensor = Vec<Vec<Vec<VectorFieldExpr>>>;

#[derive(Debug, Error)]
pub enum CurvatureError {
    #[error("conharmonic tensor requires dimension >= 3, got {0}")]
    DimensionTooSmall(usize),
}

/// Riemann tensor via operator expansion of
/// R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_{[X,Y]} Z.
pub fn riemann(conn: &ConnectionCoeffs, frame: &FrameField) -> CurvTensor {
    let n = conn.dim();
    let chart = &frame.chart;
    let basis: Vec<VectorFieldExpr> = (0..n)
        .map(|i| VectorFieldExpr::frame_basis(chart, i))
        .collect();
    let mut out = vec![vec![Vec::with_capacity(n); n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let a = conn.cov_deriv_vec(frame, &basis[i], &conn.nabla_basis(chart, j, k));
                let b = conn.cov_deriv_vec(frame, &basis[j], &conn.nabla_basis(chart, i, k));
                let c = conn.cov_deriv_vec(frame, &conn.brackets[i][j], &basis[k]);
                out[i][j].push(a.sub(&b).sub(&c));
            }
        }
    }
    out
}

/// Independent coefficient-formula route for the Riemann tensor:
/// R^l_{ijk} = e_i(G^l_{jk}) - e_j(G^l_{ik})
///           + G^m_{jk} G^l_{im} - G^m_{ik} G^l_{jm} - c^m_{ij} G^l_{mk},
/// with G the connection coefficients and c the bracket structure
/// functions. Used as the oracle against `riemann`.
pub fn riemann_coefficient_route(conn: &ConnectionCoeffs, frame: &FrameField) -> CurvTensor {
    let n = conn.dim();
    let chart = &frame.chart;
    let basis: Vec<VectorFieldExpr> = (0..n)
        .map(|i| VectorFieldExpr::frame_basis(chart, i))
        .collect();
    let mut out = vec![vec![Vec::with_capacity(n); n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut comps = Vec::with_capacity(n);
                for l in 0..n {
                    let mut acc = frame.apply(&basis[i], &conn.gamma[j][k][l]);
                    acc = acc.sub(&frame.apply(&basis[j], &conn.gamma[i][k][l]));
                    for m in 0..n {
                        acc = acc.add(&conn.gamma[j][k][m].mul(&conn.gamma[i][m][l]));
                        acc = acc.sub(&conn.gamma[i][k][m].mul(&conn.gamma[j][m][l]));
                        acc = acc.sub(&conn.brackets[i][j].components[m].mul(&conn.gamma[m][k][l]));
                    }
                    comps.push(acc);
                }
                out[i][j].push(VectorFieldExpr { components: comps });
            }
        }
    }
    out
}

/// Multilinear evaluation T(X,Y)Z for arbitrary frame-component fields.
pub fn apply_curv(
    chart: &Chart,
    t: &CurvTensor,
    x: &VectorFieldExpr,
    y: &VectorFieldExpr,
    z: &VectorFieldExpr,
) -> VectorFieldExpr {
    let n = chart.dim();
    let mut out = VectorFieldExpr::zero(chart);
    for i in 0..n {
        if x.components[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if y.components[j].is_zero() {
                continue;
            }
            for k in 0..n {
                if z.components[k].is_zero() {
                    continue;
                }
                let f = x.components[i].mul(&y.components[j]).mul(&z.components[k]);
                out = out.add(&t[i][j][k].scale(&f));
            }
        }
    }
    out
}

/// Ricci, Ricci operator and scalar curvature from the Riemann tensor.
/// S(Y,Z) is the trace of X -> R(X,Y)Z against the dual coframe;
/// Q = g^{-1} S; r = trace_g(S).
pub fn ricci_and_scalar(
    riemann: &CurvTensor,
    g: &MetricSpec,
    chart: &Chart,
) -> (Tensor02, EndoField, Expr) {
    let n = chart.dim();
    let mut ricci = Tensor02::zero(chart);
    for j in 0..n {
        for k in 0..n {
            let mut acc = Expr::zero(&chart.syms);
            for i in 0..n {
                acc = acc.add(&riemann[i][j][k].components[i]);
            }
            ricci.matrix[j][k] = acc;
        }
    }
    let mut q = EndoField::zero(chart);
    for j in 0..n {
        for k in 0..n {
            let mut acc = Expr::zero(&chart.syms);
            for l in 0..n {
                acc = acc.add(&ricci.matrix[j][l].mul(&g.g_inv[l][k]));
            }
            q.matrix[k][j] = acc;
        }
    }
    let mut scalar = Expr::zero(&chart.syms);
    for i in 0..n {
        for j in 0..n {
            scalar = scalar.add(&g.g_inv[i][j].mul(&ricci.matrix[i][j]));
        }
    }
    (ricci, q, scalar)
}

/// Riemann plus Ricci data in one immutable bundle.
#[derive(Clone, Debug)]
pub struct CurvatureBundle {
    pub riemann: CurvTensor,
    pub ricci: Tensor02,
    pub q_op: EndoField,
    pub scalar: Expr,
}

impl CurvatureBundle {
    pub fn build(conn: &ConnectionCoeffs, frame: &FrameField, g: &MetricSpec) -> CurvatureBundle {
        let r = riemann(conn, frame);
        let (ricci, q_op, scalar) = ricci_and_scalar(&r, g, &frame.chart);
        CurvatureBundle {
            riemann: r,
            ricci,
            q_op,
            scalar,
        }
    }

    /// Bundle with the Ricci data replaced by the Einstein form
    /// S = (lambda/n) g, Q = (lambda/n) I, r = lambda; the Riemann tensor is
    /// kept as computed.
    pub fn with_einstein_hypothesis(
        &self,
        chart: &Chart,
        g: &MetricSpec,
        lambda: &Expr,
    ) -> CurvatureBundle {
        let n = chart.dim();
        let factor = lambda
            .div(&Expr::int(&chart.syms, n as i64))
            .expect("dimension nonzero");
        let ricci = Tensor02::from_metric(g).scale(&factor);
        let mut q_op = EndoField::zero(chart);
        for i in 0..n {
            q_op.matrix[i][i] = factor.clone();
        }
        CurvatureBundle {
            riemann: self.riemann.clone(),
            ricci,
            q_op,
            scalar: lambda.clone(),
        }
    }
}

fn curv_from(
    chart: &Chart,
    n: usize,
    f: impl Fn(usize, usize, usize) -> VectorFieldExpr,
) -> CurvTensor {
    let _ = chart;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| f(i, j, k)).collect())
                .collect()
        })
        .collect()
}

/// Conharmonic tensor H(X,Y)Z = R(X,Y)Z
/// - 1/(n-2) [g(Y,Z)QX - g(X,Z)QY + S(Y,Z)X - S(X,Z)Y].
pub fn conharmonic(
    bundle: &CurvatureBundle,
    g: &MetricSpec,
    chart: &Chart,
) -> Result<CurvTensor, CurvatureError> {
    let n = chart.dim();
    if n < 3 {
        return Err(CurvatureError::DimensionTooSmall(n));
    }
    let inv = Expr::rational(&chart.syms, 1, (n as i64) - 2);
    Ok(curv_from(chart, n, |i, j, k| {
        let ei = VectorFieldExpr::frame_basis(chart, i);
        let ej = VectorFieldExpr::frame_basis(chart, j);
        let mut corr = bundle.q_op.column(i).scale(&g.g[j][k]);
        corr = corr.sub(&bundle.q_op.column(j).scale(&g.g[i][k]));
        corr = corr.add(&ei.scale(&bundle.ricci.matrix[j][k]));
        corr = corr.sub(&ej.scale(&bundle.ricci.matrix[i][k]));
        bundle.riemann[i][j][k].sub(&corr.scale(&inv))
    }))
}

/// Projective tensor P(X,Y)Z = R(X,Y)Z - 1/(n-1) [S(Y,Z)X - S(X,Z)Y].
pub fn projective(bundle: &CurvatureBundle, chart: &Chart) -> CurvTensor {
    let n = chart.dim();
    let inv = Expr::rational(&chart.syms, 1, (n as i64) - 1);
    curv_from(chart, n, |i, j, k| {
        let ei = VectorFieldExpr::frame_basis(chart, i);
        let ej = VectorFieldExpr::frame_basis(chart, j);
        let corr = ei
            .scale(&bundle.ricci.matrix[j][k])
            .sub(&ej.scale(&bundle.ricci.matrix[i][k]));
        bundle.riemann[i][j][k].sub(&corr.scale(&inv))
    })
}

/// Concircular tensor C~(X,Y)Z = R(X,Y)Z
/// - r/(n(n-1)) [g(Y,Z)X - g(X,Z)Y].
pub fn concircular(bundle: &CurvatureBundle, g: &MetricSpec, chart: &Chart) -> CurvTensor {
    let n = chart.dim();
    let factor = bundle
        .scalar
        .mul(&Expr::rational(&chart.syms, 1, (n as i64) * ((n as i64) - 1)));
    curv_from(chart, n, |i, j, k| {
        let ei = VectorFieldExpr::frame_basis(chart, i);
        let ej = VectorFieldExpr::frame_basis(chart, j);
        let corr = ei.scale(&g.g[j][k]).sub(&ej.scale(&g.g[i][k]));
        bundle.riemann[i][j][k].sub(&corr.scale(&factor))
    })
}

/// W2 tensor W2(X,Y)Z = R(X,Y)Z + 1/(n-1) [g(X,Z)QY - g(Y,Z)QX].
pub fn w2(bundle: &CurvatureBundle, g: &MetricSpec, chart: &Chart) -> CurvTensor {
    let n = chart.dim();
    let inv = Expr::rational(&chart.syms, 1, (n as i64) - 1);
    curv_from(chart, n, |i, j, k| {
        let corr = bundle
            .q_op
            .column(j)
            .scale(&g.g[i][k])
            .sub(&bundle.q_op.column(i).scale(&g.g[j][k]));
        bundle.riemann[i][j][k].add(&corr.scale(&inv))
    })
}

/// Sign convention for the derived action of a curvature endomorphism on a
/// (0,2) tensor. `Paper` is the convention of the verified displays
/// ((T.S)(Y,Z) = S(TY,Z) + S(Y,TZ)); `Classical` flips the sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionSign {
    Paper,
    Classical,
}

/// Action of the endomorphism E = T(X0,X1) on a (0,2) tensor:
/// (E.S)(Y,Z) = S(EY,Z) + S(Y,EZ) in the paper convention.
pub fn endo_action_on_02(
    chart: &Chart,
    e: &EndoField,
    t: &Tensor02,
    sign: ActionSign,
) -> Tensor02 {
    let n = chart.dim();
    let mut out = Tensor02::zero(chart);
    for j in 0..n {
        for k in 0..n {
            let ej = VectorFieldExpr::frame_basis(chart, j);
            let ek = VectorFieldExpr::frame_basis(chart, k);
            let v = t.apply(&e.apply(&ej), &ek).add(&t.apply(&ej, &e.apply(&ek)));
            out.matrix[j][k] = match sign {
                ActionSign::Paper => v,
                ActionSign::Classical => v.neg(),
            };
        }
    }
    out
}

/// The endomorphism Y -> T(X0, X1) Y for a curvature-type tensor at fixed
/// first two arguments.
pub fn curv_endo(
    chart: &Chart,
    t: &CurvTensor,
    x0: &VectorFieldExpr,
    x1: &VectorFieldExpr,
) -> EndoField {
    let n = chart.dim();
    let mut out = EndoField::zero(chart);
    for j in 0..n {
        let ej = VectorFieldExpr::frame_basis(chart, j);
        let col = apply_curv(chart, t, x0, x1, &ej);
        for i in 0..n {
            out.matrix[i][j] = col.components[i].clone();
        }
    }
    out
}

/// The eight-term vector expression for (S wedge A).T at arguments
/// (X, Y, Z, W):
///   S(X,T(Y,Z)W)A - S(A,T(Y,Z)W)X + S(X,Y)T(A,Z)W - S(A,Y)T(X,Z)W
/// + S(X,Z)T(Y,A)W - S(A,Z)T(Y,X)W + S(X,W)T(Y,Z)A - S(A,W)T(Y,Z)X,
/// with A the (usually xi) first slot.
#[allow(clippy::too_many_arguments)]
pub fn s_wedge_action_vec(
    chart: &Chart,
    t: &CurvTensor,
    s: &Tensor02,
    a: &VectorFieldExpr,
    x: &VectorFieldExpr,
    y: &VectorFieldExpr,
    z: &VectorFieldExpr,
    w: &VectorFieldExpr,
) -> VectorFieldExpr {
    let tyzw = apply_curv(chart, t, y, z, w);
    let mut out = a.scale(&s.apply(x, &tyzw));
    out = out.sub(&x.scale(&s.apply(a, &tyzw)));
    out = out.add(&apply_curv(chart, t, a, z, w).scale(&s.apply(x, y)));
    out = out.sub(&apply_curv(chart, t, x, z, w).scale(&s.apply(a, y)));
    out = out.add(&apply_curv(chart, t, y, a, w).scale(&s.apply(x, z)));
    out = out.sub(&apply_curv(chart, t, y, x, w).scale(&s.apply(a, z)));
    out = out.add(&apply_curv(chart, t, y, z, a).scale(&s.apply(x, w)));
    out = out.sub(&apply_curv(chart, t, y, z, x).scale(&s.apply(a, w)));
    out
}

/// Companion scalar form: inner product of the eight-term expression
/// with `a` (the xi slot), as in the displayed derivations.
#[allow(clippy::too_many_arguments)]
pub fn s_wedge_action_scalar(
    chart: &Chart,
    g: &MetricSpec,
    t: &CurvTensor,
    s: &Tensor02,
    a: &VectorFieldExpr,
    x: &VectorFieldExpr,
    y: &VectorFieldExpr,
    z: &VectorFieldExpr,
    w: &VectorFieldExpr,
) -> Expr {
    g.inner(&s_wedge_action_vec(chart, t, s, a, x, y, z, w), a)
}

/// Trace over the first slot: out(Y,Z) = sum_i (T(e_i,Y)Z)^i.
pub fn trace_first_slot(chart: &Chart, t: &CurvTensor) -> Tensor02 {
    let n = chart.dim();
    let mut out = Tensor02::zero(chart);
    for j in 0..n {
        for k in 0..n {
            let mut acc = Expr::zero(&chart.syms);
            for i in 0..n {
                acc = acc.add(&t[i][j][k].components[i]);
            }
            out.matrix[j][k] = acc;
        }
    }
    out
}

/// Lowered (0,4) component g(T(e_i,e_j)e_k, e_l).
pub fn lowered(g: &MetricSpec, chart: &Chart, t: &CurvTensor, i: usize, j: usize, k: usize, l: usize) -> Expr {
    g.inner(&t[i][j][k], &VectorFieldExpr::frame_basis(chart, l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::load_builtin;
    use crate::lcs::Geometry;

    fn geo() -> Geometry {
        load_builtin("lcs3-corrected-phi")
            .unwrap()
            .def
            .build()
            .unwrap()
            .geometry
    }

    fn assert_vec(v: &VectorFieldExpr, expected: [i64; 3]) {
        let syms = v.components[0].symbols().clone();
        for (c, e) in v.components.iter().zip(expected) {
            assert!(c.sub(&Expr::int(&syms, e)).is_zero(), "got {v:?}");
        }
    }

    #[test]
    fn riemann_values() {
        let geo = geo();
        // R(e1,e2)e2 = e1; R(e1,e3)e3 = -e1.
        assert_vec(&geo.bundle.riemann[0][1][1], [1, 0, 0]);
        assert_vec(&geo.bundle.riemann[0][2][2], [-1, 0, 0]);
    }

    #[test]
    fn riemann_routes_agree() {
        let geo = geo();
        let alt = riemann_coefficient_route(&geo.conn, &geo.frame);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let d = geo.bundle.riemann[i][j][k].sub(&alt[i][j][k]);
                    assert!(d.components.iter().all(Expr::is_zero));
                }
            }
        }
    }

    #[test]
    fn ricci_and_scalar_values() {
        let geo = geo();
        let syms = &geo.frame.chart.syms;
        for i in 0..3 {
            for j in 0..3 {
                let expected = geo.g.g[i][j].scale_int(2);
                assert!(geo.bundle.ricci.matrix[i][j].sub(&expected).is_zero());
            }
        }
        assert!(geo.bundle.scalar.sub(&Expr::int(syms, 6)).is_zero());
    }

    #[test]
    fn derived_tensor_values() {
        let geo = geo();
        let chart = &geo.frame.chart;
        let h = conharmonic(&geo.bundle, &geo.g, chart).unwrap();
        assert_vec(&h[0][2][2], [3, 0, 0]);
        assert_vec(&h[0][1][1], [-3, 0, 0]);
        let p = projective(&geo.bundle, chart);
        assert_vec(&p[0][2][2], [0, 0, 0]);
        assert_vec(&p[0][1][1], [0, 0, 0]);
        let ct = concircular(&geo.bundle, &geo.g, chart);
        assert_vec(&ct[0][2][2], [0, 0, 0]);
        assert_vec(&ct[0][1][1], [0, 0, 0]);
        let w = w2(&geo.bundle, &geo.g, chart);
        assert_vec(&w[0][1][1], [0, 0, 0]);
        assert_vec(&w[0][2][2], [0, 0, 0]);
    }

    #[test]
    fn conharmonic_needs_three_dimensions() {
        let syms = crate::symexpr::Symbols::new(&["x", "y"], &[]);
        let chart = crate::manifold::Chart::new(syms.clone()).unwrap();
        let frame = crate::manifold::FrameField::new(
            chart.clone(),
            vec![
                vec![Expr::one(&syms), Expr::zero(&syms)],
                vec![Expr::zero(&syms), Expr::one(&syms)],
            ],
        )
        .unwrap();
        let g = crate::manifold::MetricSpec::new(
            vec![
                vec![Expr::one(&syms), Expr::zero(&syms)],
                vec![Expr::zero(&syms), Expr::one(&syms)],
            ],
            &syms,
        )
        .unwrap();
        let geo = Geometry::build(frame, g).unwrap();
        assert!(matches!(
            conharmonic(&geo.bundle, &geo.g, &geo.frame.chart),
            Err(CurvatureError::DimensionTooSmall(2))
        ));
    }

    #[test]
    fn action_sign_flips() {
        let geo = geo();
        let chart = &geo.frame.chart;
        let xi = VectorFieldExpr::frame_basis(chart, 2);
        let e1 = VectorFieldExpr::frame_basis(chart, 0);
        let e = curv_endo(chart, &geo.bundle.riemann, &xi, &e1);
        let paper = endo_action_on_02(chart, &e, &geo.bundle.ricci, ActionSign::Paper);
        let classical = endo_action_on_02(chart, &e, &geo.bundle.ricci, ActionSign::Classical);
        for i in 0..3 {
            for j in 0..3 {
                assert!(paper.matrix[i][j].add(&classical.matrix[i][j]).is_zero());
            }
        }
    }
}
