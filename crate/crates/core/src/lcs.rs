//! Lorentzian concircular structure verification: structure axioms, derived
//! curvature identities, Yamabe-soliton residuals and the theorem suite.
//!
//! Every check produces exact residual expressions; a check passes only when
//! each residual is canonically zero.

use crate::connection::{
    d_oneform, koszul, lie_deriv_endo, lie_deriv_oneform, ConnectionCoeffs,
};
use crate::curvature::{
    apply_curv, concircular, conharmonic, curv_endo, endo_action_on_02, projective,
    s_wedge_action_scalar, w2, ActionSign, CurvatureBundle,
};
use crate::manifold::{
    Chart, EndoField, FrameField, ManifoldError, MetricSpec, OneForm, Tensor02, VectorFieldExpr,
};
use crate::report::{CheckLine, Status, VerificationReport};
use crate::symexpr::{Expr, SymbolKind};
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LcsError {
    #[error("alpha is identically zero; the structure requires a nowhere zero alpha")]
    AlphaZero,
    #[error("candidate has b but V - b*xi is nonzero in component {0}")]
    CollinearityViolated(usize),
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
}

/// Frame geometry with its connection and curvature, built once and shared
/// by every suite.
#[derive(Clone, Debug)]
pub struct Geometry {
    pub frame: FrameField,
    pub g: MetricSpec,
    pub conn: ConnectionCoeffs,
    pub bundle: CurvatureBundle,
}

impl Geometry {
    pub fn build(frame: FrameField, g: MetricSpec) -> Result<Geometry, ManifoldError> {
        let conn = koszul(&g, &frame)?;
        let bundle = CurvatureBundle::build(&conn, &frame, &g);
        Ok(Geometry {
            frame,
            g,
            conn,
            bundle,
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.frame.chart
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    fn basis(&self) -> Vec<VectorFieldExpr> {
        (0..self.dim())
            .map(|i| VectorFieldExpr::frame_basis(self.chart(), i))
            .collect()
    }
}

/// The (xi, eta, phi, alpha, rho) data. eta is always derived as g(., xi);
/// a user-supplied eta is kept only for the cross-check line.
#[derive(Clone, Debug)]
pub struct LcsStructure {
    pub xi: VectorFieldExpr,
    pub eta: OneForm,
    pub eta_supplied: Option<OneForm>,
    pub phi: EndoField,
    pub alpha: Expr,
    pub rho: Expr,
}

impl LcsStructure {
    pub fn new(
        chart: &Chart,
        g: &MetricSpec,
        xi: VectorFieldExpr,
        phi: EndoField,
        alpha: Expr,
        rho: Expr,
        eta_supplied: Option<OneForm>,
    ) -> Result<LcsStructure, LcsError> {
        if alpha.is_zero() {
            return Err(LcsError::AlphaZero);
        }
        let eta = g.lower(&xi, chart);
        Ok(LcsStructure {
            xi,
            eta,
            eta_supplied,
            phi,
            alpha,
            rho,
        })
    }

    /// True when the structure relations g(xi,xi) = -1 and dalpha = rho*eta
    /// hold exactly; downstream identity suites gate on this.
    pub fn structure_gate(&self, geo: &Geometry) -> bool {
        let unit = geo
            .g
            .inner(&self.xi, &self.xi)
            .add(&Expr::one(&geo.chart().syms));
        if !unit.is_zero() {
            return false;
        }
        for i in 0..geo.dim() {
            let ei = VectorFieldExpr::frame_basis(geo.chart(), i);
            let res = geo
                .frame
                .apply(&ei, &self.alpha)
                .sub(&self.rho.mul(&self.eta.components[i]));
            if !res.is_zero() {
                return false;
            }
        }
        true
    }
}

/// Yamabe-soliton candidate data (V, lambda, optional collinearity b).
#[derive(Clone, Debug)]
pub struct SolitonCandidate {
    pub v: VectorFieldExpr,
    pub lambda: Expr,
    pub b: Option<Expr>,
}

impl SolitonCandidate {
    pub fn new(
        v: VectorFieldExpr,
        lambda: Expr,
        b: Option<Expr>,
        xi: &VectorFieldExpr,
    ) -> Result<SolitonCandidate, LcsError> {
        if let Some(b) = &b {
            for (i, comp) in v.components.iter().enumerate() {
                if !comp.sub(&b.mul(&xi.components[i])).is_zero() {
                    return Err(LcsError::CollinearityViolated(i));
                }
            }
        }
        Ok(SolitonCandidate { v, lambda, b })
    }
}

fn push_vec_residuals(out: &mut Vec<Expr>, v: &VectorFieldExpr) {
    out.extend(v.components.iter().cloned());
}

/// Structure axiom suite: one line per displayed relation.
pub fn check_axioms(geo: &Geometry, s: &LcsStructure) -> VerificationReport {
    let n = geo.dim();
    let chart = geo.chart();
    let syms = &chart.syms;
    let basis = geo.basis();
    let eta = &s.eta;
    let mut rep = VerificationReport::new();

    // g(xi,xi) = -1
    let unit = geo.g.inner(&s.xi, &s.xi).add(&Expr::one(syms));
    rep.push_residuals("ax-01-unit-timelike", "g(xi,xi) = -1", &[unit]);

    // dalpha = rho*eta
    let mut res = Vec::new();
    for i in 0..n {
        res.push(
            geo.frame
                .apply(&basis[i], &s.alpha)
                .sub(&s.rho.mul(&eta.components[i])),
        );
    }
    rep.push_residuals("ax-02-alpha-gradient", "dalpha(X) = rho*eta(X)", &res);

    // supplied eta cross-check
    match &s.eta_supplied {
        Some(sup) => {
            let res: Vec<Expr> = (0..n)
                .map(|i| sup.components[i].sub(&eta.components[i]))
                .collect();
            rep.push_residuals("ax-03-eta-matches-metric", "eta(X) = g(X,xi)", &res);
        }
        None => rep.push_na("ax-03-eta-matches-metric", "eta(X) = g(X,xi)"),
    }

    // phi^2 = I + eta(x)xi, eta(xi) = -1, phi xi = 0, eta(phi .) = 0
    let mut res = Vec::new();
    for (j, ej) in basis.iter().enumerate() {
        let d = s
            .phi
            .apply(&s.phi.apply(ej))
            .sub(ej)
            .sub(&s.xi.scale(&eta.components[j]));
        push_vec_residuals(&mut res, &d);
    }
    res.push(eta.apply(&s.xi).add(&Expr::one(syms)));
    push_vec_residuals(&mut res, &s.phi.apply(&s.xi));
    for ej in &basis {
        res.push(eta.apply(&s.phi.apply(ej)));
    }
    rep.push_residuals(
        "ax-04-phi-square",
        "phi^2 = I + eta(x)xi; eta(xi) = -1; phi(xi) = 0; eta(phi(X)) = 0",
        &res,
    );

    // g(phi X, phi Y) = g(X,Y) + eta(X)eta(Y); g(phi X, Y) = g(X, phi Y)
    let mut res = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let pi = s.phi.apply(&basis[i]);
            let pj = s.phi.apply(&basis[j]);
            res.push(
                geo.g
                    .inner(&pi, &pj)
                    .sub(&geo.g.g[i][j])
                    .sub(&eta.components[i].mul(&eta.components[j])),
            );
            res.push(geo.g.inner(&pi, &basis[j]).sub(&geo.g.inner(&basis[i], &pj)));
        }
    }
    rep.push_residuals(
        "ax-05-phi-isometry",
        "g(phi X, phi Y) = g(X,Y) + eta(X)eta(Y); g(phi X, Y) = g(X, phi Y)",
        &res,
    );

    // (nabla_X phi)Y = alpha[g(X,Y)xi + 2 eta(X)eta(Y)xi + eta(Y)X]
    let mut res = Vec::new();
    for (i, ei) in basis.iter().enumerate() {
        let nphi = geo.conn.cov_deriv_11(&geo.frame, &s.phi, ei);
        for (j, _) in basis.iter().enumerate() {
            let lhs = nphi.column(j);
            let two_eta = eta.components[i]
                .mul(&eta.components[j])
                .scale_int(2);
            let rhs = s
                .xi
                .scale(&geo.g.g[i][j].add(&two_eta))
                .add(&ei.scale(&eta.components[j]))
                .scale(&s.alpha);
            push_vec_residuals(&mut res, &lhs.sub(&rhs));
        }
    }
    rep.push_residuals(
        "ax-06-nabla-phi",
        "(nabla_X phi)Y = alpha[g(X,Y)xi + 2 eta(X)eta(Y)xi + eta(Y)X]",
        &res,
    );

    // phi X = (1/alpha) nabla_X xi
    let mut res = Vec::new();
    for (j, ej) in basis.iter().enumerate() {
        let nxi = geo.conn.cov_deriv_vec(&geo.frame, ej, &s.xi);
        let rhs = VectorFieldExpr {
            components: nxi
                .components
                .iter()
                .map(|c| c.div(&s.alpha).expect("alpha not identically zero"))
                .collect(),
        };
        push_vec_residuals(&mut res, &s.phi.column(j).sub(&rhs));
    }
    rep.push_residuals(
        "ax-07-phi-from-nabla-xi",
        "phi(X) = (1/alpha) nabla_X xi",
        &res,
    );

    // eta(nabla_X xi) = 0, nabla_xi xi = 0
    let mut res = Vec::new();
    for ej in &basis {
        res.push(eta.apply(&geo.conn.cov_deriv_vec(&geo.frame, ej, &s.xi)));
    }
    push_vec_residuals(&mut res, &geo.conn.cov_deriv_vec(&geo.frame, &s.xi, &s.xi));
    rep.push_residuals(
        "ax-08-xi-geodesic",
        "eta(nabla_X xi) = 0; nabla_xi xi = 0",
        &res,
    );

    rep.sorted()
}

/// Derived curvature identity suite (consequences of the axioms, verified
/// independently). All lines are N/A when the structure relations fail.
pub fn check_derived_identities(geo: &Geometry, s: &LcsStructure) -> VerificationReport {
    let ids: [(&str, &str); 7] = [
        (
            "id-01-constant-curvature",
            "R(X,Y)Z = (alpha^2 - rho)[g(Y,Z)X - g(X,Z)Y]",
        ),
        (
            "id-02-curvature-xi-contractions",
            "R(X,Y)xi = k[eta(Y)X - eta(X)Y]; R(xi,X)Y = k[g(X,Y)xi - eta(Y)X]; eta(R(X,Y)Z) = k[eta(X)g(Y,Z) - eta(Y)g(X,Z)]; k = alpha^2 - rho",
        ),
        ("id-03-eta-of-curvature-xi", "eta(R(X,Y)xi) = 0"),
        (
            "id-04-einstein-factor",
            "S(X,Y) = (alpha^2 - rho)(n-1) g(X,Y)",
        ),
        ("id-05-scalar-curvature", "r = n(n-1)(alpha^2 - rho)"),
        (
            "id-06-nabla-eta",
            "nabla eta = alpha(g + eta(x)eta); nabla_xi eta = 0",
        ),
        (
            "id-07-lie-derivatives-along-xi",
            "L_xi phi = 0; L_xi eta = 0; L_xi g = 2 alpha (g + eta(x)eta)",
        ),
    ];

    let mut rep = VerificationReport::new();
    if !s.structure_gate(geo) {
        for (id, anchor) in ids {
            rep.push_na(id, anchor);
        }
        return rep.sorted();
    }

    let n = geo.dim();
    let chart = geo.chart();
    let basis = geo.basis();
    let eta = &s.eta;
    let kappa = s.alpha.mul(&s.alpha).sub(&s.rho);
    let riem = &geo.bundle.riemann;

    // id-01
    let mut res = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let rhs = basis[i]
                    .scale(&geo.g.g[j][k])
                    .sub(&basis[j].scale(&geo.g.g[i][k]))
                    .scale(&kappa);
                push_vec_residuals(&mut res, &riem[i][j][k].sub(&rhs));
            }
        }
    }
    rep.push_residuals(ids[0].0, ids[0].1, &res);

    // id-02
    let mut res = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let rxy_xi = apply_curv(chart, riem, &basis[i], &basis[j], &s.xi);
            let rhs = basis[i]
                .scale(&eta.components[j])
                .sub(&basis[j].scale(&eta.components[i]))
                .scale(&kappa);
            push_vec_residuals(&mut res, &rxy_xi.sub(&rhs));

            let rxi = apply_curv(chart, riem, &s.xi, &basis[i], &basis[j]);
            let rhs = s
                .xi
                .scale(&geo.g.g[i][j])
                .sub(&basis[i].scale(&eta.components[j]))
                .scale(&kappa);
            push_vec_residuals(&mut res, &rxi.sub(&rhs));

            for k in 0..n {
                let lhs = eta.apply(&riem[i][j][k]);
                let rhs = eta.components[i]
                    .mul(&geo.g.g[j][k])
                    .sub(&eta.components[j].mul(&geo.g.g[i][k]))
                    .mul(&kappa);
                res.push(lhs.sub(&rhs));
            }
        }
    }
    rep.push_residuals(ids[1].0, ids[1].1, &res);

    // id-03
    let mut res = Vec::new();
    for i in 0..n {
        for j in 0..n {
            res.push(eta.apply(&apply_curv(chart, riem, &basis[i], &basis[j], &s.xi)));
        }
    }
    rep.push_residuals(ids[2].0, ids[2].1, &res);

    // id-04
    let factor = kappa.scale_int((n as i64) - 1);
    let mut res = Vec::new();
    for i in 0..n {
        for j in 0..n {
            res.push(geo.bundle.ricci.matrix[i][j].sub(&factor.mul(&geo.g.g[i][j])));
        }
    }
    rep.push_residuals(ids[3].0, ids[3].1, &res);

    // id-05
    let expected = kappa.scale_int((n as i64) * ((n as i64) - 1));
    rep.push_residuals(ids[4].0, ids[4].1, &[geo.bundle.scalar.sub(&expected)]);

    // id-06
    let mut res = Vec::new();
    for (i, ei) in basis.iter().enumerate() {
        for (j, _) in basis.iter().enumerate() {
            let nabla_eta = geo
                .frame
                .apply(ei, &eta.components[j])
                .sub(&eta.apply(&geo.conn.cov_deriv_vec(&geo.frame, ei, &basis[j])));
            let rhs = s.alpha.mul(
                &geo.g.g[i][j].add(&eta.components[i].mul(&eta.components[j])),
            );
            res.push(nabla_eta.sub(&rhs));
        }
    }
    for ej in &basis {
        let r = geo
            .frame
            .apply(&s.xi, &eta.apply(ej))
            .sub(&eta.apply(&geo.conn.cov_deriv_vec(&geo.frame, &s.xi, ej)));
        res.push(r);
    }
    rep.push_residuals(ids[5].0, ids[5].1, &res);

    // id-07
    let mut res = Vec::new();
    let lphi = lie_deriv_endo(&geo.frame, &s.xi, &s.phi);
    res.extend(lphi.matrix.into_iter().flatten());
    let leta = lie_deriv_oneform(&geo.frame, &s.xi, eta);
    res.extend(leta.components);
    let lg = geo.conn.lie_deriv_metric(&geo.frame, &geo.g, &s.xi);
    for i in 0..n {
        for j in 0..n {
            let rhs = s
                .alpha
                .mul(&geo.g.g[i][j].add(&eta.components[i].mul(&eta.components[j])))
                .scale_int(2);
            res.push(lg.matrix[i][j].sub(&rhs));
        }
    }
    rep.push_residuals(ids[6].0, ids[6].1, &res);

    rep.sorted()
}

/// Outcome of the linear-in-lambda solver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LambdaSolution {
    /// Every lambda works (all residuals identically zero).
    Any,
    /// Exactly one admissible value.
    Unique(Expr),
    /// No lambda makes every residual vanish.
    NoSolution,
    /// lambda was not a free parameter; nothing to solve.
    NotSolved,
}

fn solve_lambda(residuals: &[Expr], lambda: &Expr) -> LambdaSolution {
    // Solvable only when lambda is literally a single free parameter.
    let syms = lambda.symbols().clone();
    let li = match (0..syms.len()).find(|&i| {
        syms.kind(i) == SymbolKind::Parameter
            && lambda.sub(&Expr::var(&syms, i)).is_zero()
    }) {
        Some(i) => i,
        None => return LambdaSolution::NotSolved,
    };
    let zero = Expr::zero(&syms);
    let one = Expr::one(&syms);
    // residual = A + B*lambda; reject nonlinear dependence.
    let mut pairs = Vec::new();
    for r in residuals {
        if r.numerator().degree_in(li) > 1 || r.denominator().degree_in(li) > 0 {
            return LambdaSolution::NoSolution;
        }
        let a = r.substitute(li, &zero);
        let b = r.substitute(li, &one).sub(&a);
        pairs.push((a, b));
    }
    let pivot = pairs.iter().find(|(_, b)| !b.is_zero());
    match pivot {
        None => {
            if pairs.iter().all(|(a, _)| a.is_zero()) {
                LambdaSolution::Any
            } else {
                LambdaSolution::NoSolution
            }
        }
        Some((a, b)) => {
            let candidate = a.neg().div(b).expect("pivot nonzero");
            if candidate.depends_on(li) {
                return LambdaSolution::NoSolution;
            }
            for r in residuals {
                if !r.substitute(li, &candidate).is_zero() {
                    return LambdaSolution::NoSolution;
                }
            }
            LambdaSolution::Unique(candidate)
        }
    }
}

/// Yamabe-soliton residual (1/2) L_V g - (r - lambda) g, with the
/// admissible-lambda solver and steady/expanding/shrinking classification.
pub fn check_yamabe_soliton(geo: &Geometry, cand: &SolitonCandidate) -> VerificationReport {
    let n = geo.dim();
    let chart = geo.chart();
    let syms = &chart.syms;
    let half = Expr::rational(syms, 1, 2);
    let lv = geo.conn.lie_deriv_metric(&geo.frame, &geo.g, &cand.v);
    let factor = geo.bundle.scalar.sub(&cand.lambda);
    let mut residual = Tensor02::zero(chart);
    for i in 0..n {
        for j in 0..n {
            residual.matrix[i][j] = lv.matrix[i][j]
                .mul(&half)
                .sub(&factor.mul(&geo.g.g[i][j]));
        }
    }

    let mut rep = VerificationReport::new();

    let mut flat = Vec::new();
    let mut details = Vec::new();
    for i in 0..n {
        for j in i..n {
            let r = &residual.matrix[i][j];
            if !r.is_zero() {
                details.push(format!("(e{},e{}): {}", i + 1, j + 1, r));
            }
            flat.push(r.clone());
        }
    }
    let status = if flat.iter().all(Expr::is_zero) {
        Status::Pass
    } else {
        Status::Fail
    };
    let worst = flat
        .iter()
        .find(|r| !r.is_zero())
        .map(|r| r.to_string())
        .unwrap_or_else(|| "0".to_string());
    rep.push_line(CheckLine {
        id: "sol-01-residual".to_string(),
        status,
        residual: worst,
        reference: "(1/2) L_V g = (r - lambda) g".to_string(),
        details,
    });

    // lambda solver over the same residual set
    let solution = solve_lambda(&flat, &cand.lambda);
    let (status, detail) = match &solution {
        LambdaSolution::Any => (Status::Pass, "admissible lambda: any".to_string()),
        LambdaSolution::Unique(v) => (Status::Pass, format!("admissible lambda: {v}")),
        LambdaSolution::NoSolution => (Status::Fail, "admissible lambda: none".to_string()),
        LambdaSolution::NotSolved => (
            Status::NotApplicable,
            "solver applies only when lambda is a free parameter".to_string(),
        ),
    };
    rep.push_line(CheckLine {
        id: "sol-02-lambda-solver".to_string(),
        status,
        residual: "0".to_string(),
        reference: "set of lambda making every residual vanish".to_string(),
        details: vec![detail],
    });

    // classification
    let (status, detail) = match cand.lambda.as_constant() {
        Some(c) => {
            let class = if c.is_zero() {
                "steady"
            } else if c.is_positive() {
                "shrinking"
            } else {
                "expanding"
            };
            (Status::Pass, format!("classification: {class}"))
        }
        None => (
            Status::NotApplicable,
            "classification: unclassified (lambda is not a rational constant)".to_string(),
        ),
    };
    rep.push_line(CheckLine {
        id: "sol-03-classification".to_string(),
        status,
        residual: "0".to_string(),
        reference: "expanding if lambda < 0, steady if lambda = 0, shrinking if lambda > 0"
            .to_string(),
        details: vec![detail],
    });

    rep.sorted()
}

/// Theorem-suite evaluation mode: `Raw` uses the computed Ricci data,
/// `Hypothesis` substitutes the Einstein form S = (lambda/n) g (with
/// Q = (lambda/n) I and r = lambda) the way the derivations do.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Raw,
    Hypothesis,
}

impl Mode {
    fn suffix(&self) -> &'static str {
        match self {
            Mode::Raw => "raw",
            Mode::Hypothesis => "hyp",
        }
    }
}

/// Named residual checks for the soliton theorems, one line per sub-check.
pub fn theorem_suite(
    geo: &Geometry,
    s: &LcsStructure,
    cand: Option<&SolitonCandidate>,
    mode: Mode,
) -> VerificationReport {
    let n = geo.dim();
    let chart = geo.chart();
    let syms = &chart.syms;
    let basis = geo.basis();
    let eta = &s.eta;
    let lambda = cand
        .map(|c| c.lambda.clone())
        .unwrap_or_else(|| geo.bundle.scalar.clone());
    let v = cand.map(|c| c.v.clone()).unwrap_or_else(|| s.xi.clone());

    let bundle = match mode {
        Mode::Raw => geo.bundle.clone(),
        Mode::Hypothesis => geo
            .bundle
            .with_einstein_hypothesis(chart, &geo.g, &lambda),
    };
    let r_cur = bundle.scalar.clone();
    let r_minus_lambda = r_cur.sub(&lambda);
    let sfx = mode.suffix();
    let id = |stem: &str| format!("{stem}.{sfx}");

    let mut rep = VerificationReport::new();

    // (a) soliton chain with V = xi
    let mut res = Vec::new();
    let lg = geo.conn.lie_deriv_metric(&geo.frame, &geo.g, &s.xi);
    for i in 0..n {
        for j in 0..n {
            let gpe = geo.g.g[i][j].add(&eta.components[i].mul(&eta.components[j]));
            res.push(s.alpha.mul(&gpe).sub(&r_minus_lambda.mul(&geo.g.g[i][j])));
        }
    }
    for i in 0..n {
        res.push(r_minus_lambda.mul(&eta.components[i]));
    }
    res.push(r_minus_lambda.clone());
    res.extend(lg.matrix.iter().flatten().cloned());
    rep.push_residuals(
        &id("thm-a-xi-soliton-chain"),
        "alpha[g + eta(x)eta] = (r - lambda) g; (r - lambda) eta = 0; r = lambda; L_xi g = 0",
        &res,
    );

    // (b) Einstein
    let lam_over_n = lambda
        .div(&Expr::int(syms, n as i64))
        .expect("n nonzero");
    let mut res = Vec::new();
    for i in 0..n {
        for j in 0..n {
            res.push(bundle.ricci.matrix[i][j].sub(&lam_over_n.mul(&geo.g.g[i][j])));
        }
    }
    rep.push_residuals(&id("thm-b-einstein"), "S = (lambda/n) g", &res);

    // (c) Ricci symmetric
    let mut res = Vec::new();
    for ei in &basis {
        let d = geo.conn.cov_deriv_02(&geo.frame, &bundle.ricci, ei);
        res.extend(d.matrix.into_iter().flatten());
    }
    rep.push_residuals(&id("thm-c-ricci-parallel"), "nabla S = 0", &res);

    // (d) eta-recurrence
    let mut res = Vec::new();
    for (i, ei) in basis.iter().enumerate() {
        let d = geo.conn.cov_deriv_02(&geo.frame, &bundle.ricci, ei);
        for j in 0..n {
            for k in 0..n {
                res.push(
                    d.matrix[j][k].sub(&eta.components[i].mul(&bundle.ricci.matrix[j][k])),
                );
            }
        }
    }
    rep.push_residuals(
        &id("thm-d-eta-recurrent-ricci"),
        "nabla S = eta(x)S",
        &res,
    );

    // (e) parallel h = L_xi g - 2 r g
    let mut h = Tensor02::zero(chart);
    for i in 0..n {
        for j in 0..n {
            h.matrix[i][j] = lg.matrix[i][j].sub(&r_cur.mul(&geo.g.g[i][j]).scale_int(2));
        }
    }
    let mut res = Vec::new();
    res.push(h.apply(&s.xi, &s.xi).sub(&lambda.scale_int(2)));
    for ei in &basis {
        let d = geo.conn.cov_deriv_02(&geo.frame, &h, ei);
        res.extend(d.matrix.into_iter().flatten());
    }
    rep.push_residuals(
        &id("thm-e-parallel-h"),
        "h = L_xi g - 2 r g: h(xi,xi) = 2 lambda; nabla h = 0",
        &res,
    );

    // (f) Q and S parallel along xi, Q parallel along everything
    let mut res = Vec::new();
    let dq_xi = geo.conn.cov_deriv_11(&geo.frame, &bundle.q_op, &s.xi);
    res.extend(dq_xi.matrix.into_iter().flatten());
    let ds_xi = geo.conn.cov_deriv_02(&geo.frame, &bundle.ricci, &s.xi);
    res.extend(ds_xi.matrix.into_iter().flatten());
    for ei in &basis {
        let d = geo.conn.cov_deriv_11(&geo.frame, &bundle.q_op, ei);
        res.extend(d.matrix.into_iter().flatten());
    }
    rep.push_residuals(
        &id("thm-f-parallel-along-xi"),
        "nabla_xi Q = 0; nabla_xi S = 0; nabla_X Q = 0",
        &res,
    );

    // (g) collinear potential V = b*xi
    match cand.and_then(|c| c.b.as_ref()) {
        None => rep.push_na(
            &id("thm-g-collinear-potential"),
            "V = b*xi: Killing/conformal-Killing dichotomy",
        ),
        Some(b) => {
            let mut res = Vec::new();
            for (i, ei) in basis.iter().enumerate() {
                for (j, ej) in basis.iter().enumerate() {
                    let t1 = b
                        .mul(&s.alpha)
                        .mul(&geo.g.inner(&s.phi.apply(ei), ej));
                    let t2 = geo.frame.apply(ei, b).mul(&eta.components[j]);
                    let t3 = b
                        .mul(&s.alpha)
                        .mul(&geo.g.inner(&s.phi.apply(ej), ei));
                    let t4 = geo.frame.apply(ej, b).mul(&eta.components[i]);
                    let rhs = r_minus_lambda.mul(&geo.g.g[i][j]).scale_int(2);
                    res.push(t1.add(&t2).add(&t3).add(&t4).sub(&rhs));
                }
            }
            for (i, ei) in basis.iter().enumerate() {
                res.push(
                    geo.frame
                        .apply(ei, b)
                        .add(&r_minus_lambda.mul(&eta.components[i])),
                );
            }
            let deta = d_oneform(&geo.frame, eta);
            res.extend(deta.matrix.into_iter().flatten());
            let lvg = geo.conn.lie_deriv_metric(&geo.frame, &geo.g, &v);
            for i in 0..n {
                for j in 0..n {
                    res.push(
                        lvg.matrix[i][j].sub(&r_minus_lambda.mul(&geo.g.g[i][j]).scale_int(2)),
                    );
                }
            }
            rep.push_residuals(
                &id("thm-g-collinear-potential"),
                "b*alpha*g(phi X,Y) + (Xb)eta(Y) + b*alpha*g(phi Y,X) + (Yb)eta(X) = 2(r - lambda)g(X,Y); Xb = -(r - lambda)eta(X); d eta = 0; L_V g = 2(r - lambda)g",
                &res,
            );
        }
    }

    // (h) xi-projectively flat
    let p = projective(&bundle, chart);
    let mut res = Vec::new();
    for i in 0..n {
        for j in 0..n {
            push_vec_residuals(&mut res, &apply_curv(chart, &p, &basis[i], &basis[j], &s.xi));
        }
    }
    rep.push_residuals(&id("thm-h-xi-projectively-flat"), "P(X,Y)xi = 0", &res);

    // (i) xi-concircularly flat
    let ct = concircular(&bundle, &geo.g, chart);
    let mut res = Vec::new();
    for i in 0..n {
        for j in 0..n {
            push_vec_residuals(
                &mut res,
                &apply_curv(chart, &ct, &basis[i], &basis[j], &s.xi),
            );
        }
    }
    rep.push_residuals(&id("thm-i-xi-concircularly-flat"), "C~(X,Y)xi = 0", &res);

    // (j) conharmonic vs steady factor
    match conharmonic(&bundle, &geo.g, chart) {
        Err(_) => rep.push_na(
            &id("thm-j-xi-conharmonic"),
            "H(X,Y)xi = -(lambda/((n-1)(n-2)))[eta(Y)X - eta(X)Y]",
        ),
        Ok(hten) => {
            let factor = lambda
                .div(&Expr::int(syms, ((n as i64) - 1) * ((n as i64) - 2)))
                .expect("n >= 3");
            let mut res = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    let hxyxi = apply_curv(chart, &hten, &basis[i], &basis[j], &s.xi);
                    let corr = basis[i]
                        .scale(&eta.components[j])
                        .sub(&basis[j].scale(&eta.components[i]))
                        .scale(&factor);
                    push_vec_residuals(&mut res, &hxyxi.add(&corr));
                }
            }
            rep.push_residuals(
                &id("thm-j-xi-conharmonic"),
                "H(X,Y)xi = -(lambda/((n-1)(n-2)))[eta(Y)X - eta(X)Y]",
                &res,
            );
        }
    }

    // (k) R(xi,X).S = 0
    let mut res = Vec::new();
    for ex in &basis {
        let e = curv_endo(chart, &bundle.riemann, &s.xi, ex);
        let act = endo_action_on_02(chart, &e, &bundle.ricci, ActionSign::Paper);
        res.extend(act.matrix.into_iter().flatten());
    }
    rep.push_residuals(
        &id("thm-k-ricci-semisymmetric"),
        "R(xi,X).S = 0 via (T.S)(Y,Z) = S(TY,Z) + S(Y,TZ)",
        &res,
    );

    // (l) S(xi,X).R scalar form at Z = W = xi
    let mut res = Vec::new();
    for ex in &basis {
        for ey in &basis {
            res.push(s_wedge_action_scalar(
                chart,
                &geo.g,
                &bundle.riemann,
                &bundle.ricci,
                &s.xi,
                ex,
                ey,
                &s.xi,
                &s.xi,
            ));
        }
    }
    rep.push_residuals(
        &id("thm-l-s-wedge-curvature"),
        "S(xi,X).R = 0 (scalar form at Z = W = xi); factor (lambda/n)(alpha^2 - rho)",
        &res,
    );

    // (m) W2(xi,X).S = 0
    let w2t = w2(&bundle, &geo.g, chart);
    let mut res = Vec::new();
    for ex in &basis {
        let e = curv_endo(chart, &w2t, &s.xi, ex);
        let act = endo_action_on_02(chart, &e, &bundle.ricci, ActionSign::Paper);
        res.extend(act.matrix.into_iter().flatten());
    }
    rep.push_residuals(
        &id("thm-m-w2-dot-ricci"),
        "W2(xi,X).S = 0 via (T.S)(Y,Z) = S(TY,Z) + S(Y,TZ)",
        &res,
    );

    // (n) S(xi,X).W2 scalar form at Z = V = xi
    let mut res = Vec::new();
    for ex in &basis {
        for ey in &basis {
            res.push(s_wedge_action_scalar(
                chart,
                &geo.g,
                &w2t,
                &bundle.ricci,
                &s.xi,
                ex,
                ey,
                &s.xi,
                &s.xi,
            ));
        }
    }
    rep.push_residuals(
        &id("thm-n-s-wedge-w2"),
        "S(xi,X).W2 = 0 (scalar form at Z = V = xi); factor lambda(1 - alpha^2 + rho)",
        &res,
    );

    rep.sorted()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::load_builtin;
    use crate::report::Status;

    fn model() -> (Geometry, LcsStructure) {
        let m = load_builtin("lcs3-corrected-phi")
            .unwrap()
            .def
            .build()
            .unwrap();
        (m.geometry, m.structure)
    }

    #[test]
    fn alpha_zero_rejected() {
        let (geo, s) = model();
        let err = LcsStructure::new(
            geo.chart(),
            &geo.g,
            s.xi.clone(),
            s.phi.clone(),
            Expr::zero(&geo.chart().syms),
            s.rho.clone(),
            None,
        );
        assert!(matches!(err, Err(LcsError::AlphaZero)));
    }

    #[test]
    fn collinearity_invariant_enforced() {
        let (geo, s) = model();
        let syms = &geo.chart().syms;
        let two = Expr::int(syms, 2);
        // V = 2*xi with b = 2 is fine; b = 3 is rejected.
        assert!(SolitonCandidate::new(
            s.xi.scale(&two),
            Expr::int(syms, 6),
            Some(two.clone()),
            &s.xi
        )
        .is_ok());
        assert!(matches!(
            SolitonCandidate::new(
                s.xi.scale(&two),
                Expr::int(syms, 6),
                Some(Expr::int(syms, 3)),
                &s.xi
            ),
            Err(LcsError::CollinearityViolated(2))
        ));
    }

    #[test]
    fn scaled_xi_fails_unit_check_with_expected_residual() {
        let (geo, s) = model();
        let syms = &geo.chart().syms;
        let scaled = LcsStructure::new(
            geo.chart(),
            &geo.g,
            s.xi.scale(&Expr::int(syms, 2)),
            s.phi.clone(),
            s.alpha.clone(),
            s.rho.clone(),
            None,
        )
        .unwrap();
        let rep = check_axioms(&geo, &scaled);
        let line = rep.find("ax-01-unit-timelike").unwrap();
        assert_eq!(line.status, Status::Fail);
        assert_eq!(line.residual, "-3");
    }

    #[test]
    fn solver_finds_unique_lambda() {
        let (geo, s) = model();
        let syms = &geo.chart().syms;
        let li = syms.lookup("lambda").unwrap();
        let l = Expr::var(syms, li);
        // V = 0: residual is -(r - lambda) g, admissible lambda = r = 6.
        let cand = SolitonCandidate::new(
            VectorFieldExpr::zero(geo.chart()),
            l,
            None,
            &s.xi,
        )
        .unwrap();
        let rep = check_yamabe_soliton(&geo, &cand);
        let solver = rep.find("sol-02-lambda-solver").unwrap();
        assert_eq!(solver.status, Status::Pass);
        assert_eq!(solver.details, vec!["admissible lambda: 6".to_string()]);
    }

    #[test]
    fn zero_potential_with_lambda_r_passes_and_classifies() {
        let (geo, s) = model();
        let syms = &geo.chart().syms;
        let cand = SolitonCandidate::new(
            VectorFieldExpr::zero(geo.chart()),
            Expr::int(syms, 6),
            None,
            &s.xi,
        )
        .unwrap();
        let rep = check_yamabe_soliton(&geo, &cand);
        assert_eq!(rep.find("sol-01-residual").unwrap().status, Status::Pass);
        assert_eq!(
            rep.find("sol-03-classification").unwrap().details,
            vec!["classification: shrinking".to_string()]
        );
    }

    #[test]
    fn constant_lambda_skips_solver_and_reports_worst_residual() {
        let (geo, s) = model();
        let syms = &geo.chart().syms;
        let cand =
            SolitonCandidate::new(s.xi.clone(), Expr::int(syms, 6), None, &s.xi).unwrap();
        let rep = check_yamabe_soliton(&geo, &cand);
        let line = rep.find("sol-01-residual").unwrap();
        assert_eq!(line.status, Status::Fail);
        assert_eq!(line.residual, "-1");
        assert_eq!(
            rep.find("sol-02-lambda-solver").unwrap().status,
            Status::NotApplicable
        );
    }

    #[test]
    fn theorem_g_runs_with_collinear_candidate() {
        let (geo, s) = model();
        let syms = &geo.chart().syms;
        let one = Expr::one(syms);
        let cand = SolitonCandidate::new(
            s.xi.clone(),
            Expr::int(syms, 6),
            Some(one),
            &s.xi,
        )
        .unwrap();
        let rep = theorem_suite(&geo, &s, Some(&cand), Mode::Hypothesis);
        let line = rep.find("thm-g-collinear-potential.hyp").unwrap();
        assert_ne!(line.status, Status::NotApplicable);
    }

    #[test]
    fn flat_negative_structure_gate_fails() {
        let m = load_builtin("lcs3-flat-negative")
            .unwrap()
            .def
            .build()
            .unwrap();
        assert!(!m.structure.structure_gate(&m.geometry));
        let rep = check_derived_identities(&m.geometry, &m.structure);
        assert!(rep
            .checks
            .iter()
            .all(|c| c.status == Status::NotApplicable));
        assert_eq!(rep.checks.len(), 7);
    }
}
