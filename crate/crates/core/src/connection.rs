//! Levi-Civita connection from the Koszul formula, covariant derivatives of
//! vector / (0,2) / (1,1) fields, Lie derivatives and the exterior
//! derivative of one-forms.

use crate::manifold::{
    Chart, EndoField, FrameField, ManifoldError, MetricSpec, OneForm, Tensor02, VectorFieldExpr,
};
use crate::symexpr::Expr;

/// Connection coefficients: gamma[i][j][k] is the e_k component of
/// nabla_{e_i} e_j. Bracket structure fields are cached alongside.
#[derive(Clone, Debug)]
pub struct ConnectionCoeffs {
    pub gamma: Vec<Vec<Vec<Expr>>>,
    /// brackets[i][j] = [e_i, e_j] in frame components.
    pub brackets: Vec<Vec<VectorFieldExpr>>,
}

/// Solve 2 g(nabla_{e_i} e_j, e_k) = RHS(i,j,k) for the connection
/// coefficients using the full six-term Koszul display.
pub fn koszul(
    g: &MetricSpec,
    frame: &FrameField,
) -> Result<ConnectionCoeffs, ManifoldError> {
    let n = frame.dim();
    let chart = &frame.chart;
    let basis: Vec<VectorFieldExpr> = (0..n)
        .map(|i| VectorFieldExpr::frame_basis(chart, i))
        .collect();
    let brackets: Vec<Vec<VectorFieldExpr>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| frame.lie_bracket(&basis[i], &basis[j]))
                .collect()
        })
        .collect();
    let half = Expr::rational(frame.syms(), 1, 2);
    let mut gamma = vec![vec![vec![Expr::zero(frame.syms()); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            // rhs[k] = 2 g(nabla_{e_i} e_j, e_k)
            let mut rhs = Vec::with_capacity(n);
            for k in 0..n {
                let mut acc = frame.apply(&basis[i], &g.g[j][k]);
                acc = acc.add(&frame.apply(&basis[j], &g.g[k][i]));
                acc = acc.sub(&frame.apply(&basis[k], &g.g[i][j]));
                acc = acc.sub(&g.inner(&basis[i], &brackets[j][k]));
                acc = acc.sub(&g.inner(&basis[j], &brackets[i][k]));
                acc = acc.add(&g.inner(&basis[k], &brackets[i][j]));
                rhs.push(acc);
            }
            for m in 0..n {
                let mut acc = Expr::zero(frame.syms());
                for k in 0..n {
                    acc = acc.add(&rhs[k].mul(&g.g_inv[k][m]));
                }
                gamma[i][j][m] = acc.mul(&half);
            }
        }
    }
    Ok(ConnectionCoeffs { gamma, brackets })
}

impl ConnectionCoeffs {
    pub fn dim(&self) -> usize {
        self.gamma.len()
    }

    /// nabla_{e_i} e_j as a frame-component field.
    pub fn nabla_basis(&self, _chart: &Chart, i: usize, j: usize) -> VectorFieldExpr {
        VectorFieldExpr {
            components: (0..self.dim()).map(|k| self.gamma[i][j][k].clone()).collect(),
        }
    }

    /// nabla_X Y, tensorial in X and Leibniz in Y.
    pub fn cov_deriv_vec(
        &self,
        frame: &FrameField,
        x: &VectorFieldExpr,
        y: &VectorFieldExpr,
    ) -> VectorFieldExpr {
        let n = self.dim();
        let chart = &frame.chart;
        let basis: Vec<VectorFieldExpr> = (0..n)
            .map(|i| VectorFieldExpr::frame_basis(chart, i))
            .collect();
        let mut out = VectorFieldExpr::zero(chart);
        for k in 0..n {
            let mut acc = Expr::zero(frame.syms());
            for i in 0..n {
                let mut term = frame.apply(&basis[i], &y.components[k]);
                for j in 0..n {
                    term = term.add(&y.components[j].mul(&self.gamma[i][j][k]));
                }
                acc = acc.add(&x.components[i].mul(&term));
            }
            out.components[k] = acc;
        }
        out
    }

    /// (nabla_X T)(Y,Z) = X(T(Y,Z)) - T(nabla_X Y, Z) - T(Y, nabla_X Z)
    /// evaluated on all frame pairs.
    pub fn cov_deriv_02(
        &self,
        frame: &FrameField,
        t: &Tensor02,
        x: &VectorFieldExpr,
    ) -> Tensor02 {
        let n = self.dim();
        let chart = &frame.chart;
        let basis: Vec<VectorFieldExpr> = (0..n)
            .map(|i| VectorFieldExpr::frame_basis(chart, i))
            .collect();
        let nabla_x: Vec<VectorFieldExpr> = (0..n)
            .map(|j| self.cov_deriv_vec(frame, x, &basis[j]))
            .collect();
        let mut out = Tensor02::zero(chart);
        for j in 0..n {
            for k in 0..n {
                let mut acc = frame.apply(x, &t.matrix[j][k]);
                for m in 0..n {
                    acc = acc.sub(&nabla_x[j].components[m].mul(&t.matrix[m][k]));
                    acc = acc.sub(&nabla_x[k].components[m].mul(&t.matrix[j][m]));
                }
                out.matrix[j][k] = acc;
            }
        }
        out
    }

    /// (nabla_X A)(Y) = nabla_X (A Y) - A(nabla_X Y) on frame fields.
    pub fn cov_deriv_11(
        &self,
        frame: &FrameField,
        a: &EndoField,
        x: &VectorFieldExpr,
    ) -> EndoField {
        let n = self.dim();
        let chart = &frame.chart;
        let mut out = EndoField::zero(chart);
        for j in 0..n {
            let ej = VectorFieldExpr::frame_basis(chart, j);
            let col = self
                .cov_deriv_vec(frame, x, &a.column(j))
                .sub(&a.apply(&self.cov_deriv_vec(frame, x, &ej)));
            for i in 0..n {
                out.matrix[i][j] = col.components[i].clone();
            }
        }
        out
    }

    /// Lie derivative of the metric along V via the Levi-Civita identity
    /// (L_V g)(X,Y) = g(nabla_X V, Y) + g(nabla_Y V, X).
    pub fn lie_deriv_metric(
        &self,
        frame: &FrameField,
        g: &MetricSpec,
        v: &VectorFieldExpr,
    ) -> Tensor02 {
        let n = self.dim();
        let chart = &frame.chart;
        let basis: Vec<VectorFieldExpr> = (0..n)
            .map(|i| VectorFieldExpr::frame_basis(chart, i))
            .collect();
        let nabla_v: Vec<VectorFieldExpr> = (0..n)
            .map(|i| self.cov_deriv_vec(frame, &basis[i], v))
            .collect();
        let mut out = Tensor02::zero(chart);
        for i in 0..n {
            for j in 0..n {
                out.matrix[i][j] = g
                    .inner(&nabla_v[i], &basis[j])
                    .add(&g.inner(&nabla_v[j], &basis[i]));
            }
        }
        out
    }
}

/// Bracket-expansion route for L_V g, kept as an independent cross-check of
/// `lie_deriv_metric`.
pub fn lie_deriv_metric_bracket(
    frame: &FrameField,
    g: &MetricSpec,
    v: &VectorFieldExpr,
) -> Tensor02 {
    let n = frame.dim();
    let chart = &frame.chart;
    let basis: Vec<VectorFieldExpr> = (0..n)
        .map(|i| VectorFieldExpr::frame_basis(chart, i))
        .collect();
    let mut out = Tensor02::zero(chart);
    for i in 0..n {
        for j in 0..n {
            let mut acc = frame.apply(v, &g.g[i][j]);
            acc = acc.sub(&g.inner(&frame.lie_bracket(v, &basis[i]), &basis[j]));
            acc = acc.sub(&g.inner(&basis[i], &frame.lie_bracket(v, &basis[j])));
            out.matrix[i][j] = acc;
        }
    }
    out
}

/// (L_{X0} omega)(Y) = X0(omega(Y)) - omega([X0, Y]).
pub fn lie_deriv_oneform(frame: &FrameField, x0: &VectorFieldExpr, omega: &OneForm) -> OneForm {
    let n = frame.dim();
    let chart = &frame.chart;
    let mut out = OneForm::zero(chart);
    for i in 0..n {
        let ei = VectorFieldExpr::frame_basis(chart, i);
        out.components[i] = frame
            .apply(x0, &omega.components[i])
            .sub(&omega.apply(&frame.lie_bracket(x0, &ei)));
    }
    out
}

/// (L_{X0} A)(Y) = [X0, A Y] - A([X0, Y]).
pub fn lie_deriv_endo(frame: &FrameField, x0: &VectorFieldExpr, a: &EndoField) -> EndoField {
    let n = frame.dim();
    let chart = &frame.chart;
    let mut out = EndoField::zero(chart);
    for j in 0..n {
        let ej = VectorFieldExpr::frame_basis(chart, j);
        let col = frame
            .lie_bracket(x0, &a.column(j))
            .sub(&a.apply(&frame.lie_bracket(x0, &ej)));
        for i in 0..n {
            out.matrix[i][j] = col.components[i].clone();
        }
    }
    out
}

/// (d omega)(X,Y) = X(omega(Y)) - Y(omega(X)) - omega([X,Y]) on frame pairs.
pub fn d_oneform(frame: &FrameField, omega: &OneForm) -> Tensor02 {
    let n = frame.dim();
    let chart = &frame.chart;
    let basis: Vec<VectorFieldExpr> = (0..n)
        .map(|i| VectorFieldExpr::frame_basis(chart, i))
        .collect();
    let mut out = Tensor02::zero(chart);
    for i in 0..n {
        for j in 0..n {
            out.matrix[i][j] = frame
                .apply(&basis[i], &omega.components[j])
                .sub(&frame.apply(&basis[j], &omega.components[i]))
                .sub(&omega.apply(&frame.lie_bracket(&basis[i], &basis[j])));
        }
    }
    out
}

/// Torsion residuals nabla_{e_i} e_j - nabla_{e_j} e_i - [e_i, e_j]; all
/// components vanish for a Levi-Civita connection.
pub fn torsion_residual(conn: &ConnectionCoeffs, frame: &FrameField) -> Vec<Expr> {
    let n = conn.dim();
    let chart = &frame.chart;
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let d = conn
                .nabla_basis(chart, i, j)
                .sub(&conn.nabla_basis(chart, j, i))
                .sub(&conn.brackets[i][j]);
            out.extend(d.components);
        }
    }
    out
}

/// Metric-compatibility residuals
/// e_i(g(e_j,e_k)) - g(nabla_{e_i} e_j, e_k) - g(e_j, nabla_{e_i} e_k).
pub fn metric_compat_residual(
    conn: &ConnectionCoeffs,
    frame: &FrameField,
    g: &MetricSpec,
) -> Vec<Expr> {
    let n = conn.dim();
    let chart = &frame.chart;
    let basis: Vec<VectorFieldExpr> = (0..n)
        .map(|i| VectorFieldExpr::frame_basis(chart, i))
        .collect();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let r = frame
                    .apply(&basis[i], &g.g[j][k])
                    .sub(&g.inner(&conn.nabla_basis(chart, i, j), &basis[k]))
                    .sub(&g.inner(&basis[j], &conn.nabla_basis(chart, i, k)));
                out.push(r);
            }
        }
    }
    out
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
    fn koszul_reproduces_connection_table() {
        let geo = geo();
        let chart = &geo.frame.chart;
        // nabla_{e1} e3 = -e1, nabla_{e1} e1 = -e3, nabla_{e3} e3 = 0
        assert_vec(&geo.conn.nabla_basis(chart, 0, 2), [-1, 0, 0]);
        assert_vec(&geo.conn.nabla_basis(chart, 0, 0), [0, 0, -1]);
        assert_vec(&geo.conn.nabla_basis(chart, 2, 2), [0, 0, 0]);
        assert_vec(&geo.conn.nabla_basis(chart, 1, 2), [0, -1, 0]);
        assert_vec(&geo.conn.nabla_basis(chart, 1, 0), [0, 0, 0]);
    }

    #[test]
    fn torsion_and_compatibility_vanish() {
        let geo = geo();
        assert!(torsion_residual(&geo.conn, &geo.frame)
            .iter()
            .all(Expr::is_zero));
        assert!(metric_compat_residual(&geo.conn, &geo.frame, &geo.g)
            .iter()
            .all(Expr::is_zero));
    }

    #[test]
    fn leibniz_in_second_argument() {
        // nabla_{e3}(z*e1) = z*nabla_{e3}e1 + e3(z)*e1 = z*e1.
        let geo = geo();
        let chart = &geo.frame.chart;
        let z = Expr::symbol(&chart.syms, "z").unwrap();
        let e1 = VectorFieldExpr::frame_basis(chart, 0);
        let e3 = VectorFieldExpr::frame_basis(chart, 2);
        let out = geo.conn.cov_deriv_vec(&geo.frame, &e3, &e1.scale(&z));
        assert!(out.sub(&e1.scale(&z)).is_zero());
    }

    #[test]
    fn lie_derivative_routes_agree() {
        let geo = geo();
        let chart = &geo.frame.chart;
        let z = Expr::symbol(&chart.syms, "z").unwrap();
        let v = VectorFieldExpr::frame_basis(chart, 0)
            .scale(&z)
            .add(&VectorFieldExpr::frame_basis(chart, 2));
        let a = geo.conn.lie_deriv_metric(&geo.frame, &geo.g, &v);
        let b = lie_deriv_metric_bracket(&geo.frame, &geo.g, &v);
        for i in 0..3 {
            for j in 0..3 {
                assert!(a.matrix[i][j].sub(&b.matrix[i][j]).is_zero());
            }
        }
    }

    #[test]
    fn lie_derivative_along_e3() {
        let geo = geo();
        let chart = &geo.frame.chart;
        let e3 = VectorFieldExpr::frame_basis(chart, 2);
        let lg = geo.conn.lie_deriv_metric(&geo.frame, &geo.g, &e3);
        // (L_{e3} g)(e1,e1) = -2, (e3,e3) = 0.
        assert!(lg.matrix[0][0].add(&Expr::int(&chart.syms, 2)).is_zero());
        assert!(lg.matrix[2][2].is_zero());
    }

    #[test]
    fn eta_is_closed() {
        let geo = geo();
        let s = load_builtin("lcs3-corrected-phi")
            .unwrap()
            .def
            .build()
            .unwrap()
            .structure;
        let d = d_oneform(&geo.frame, &s.eta);
        assert!(d.matrix.iter().flatten().all(Expr::is_zero));
    }
}
