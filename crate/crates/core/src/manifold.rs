//! Chart, frame field, frame metric and the basic field operations.
//!
//! All tensor components throughout the crate are taken against the frame
//! `e_1..e_n`; coordinate components appear only transiently inside
//! `lie_bracket` and `apply`.

use crate::symexpr::{Expr, SymbolKind, SymbolsRef};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ManifoldError {
    #[error("chart dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("frame component matrix is not invertible (determinant is identically zero)")]
    DegenerateFrame,
    #[error("metric matrix is not invertible (determinant is identically zero)")]
    DegenerateMetric,
    #[error("metric is not symmetric at entry ({0},{1})")]
    AsymmetricMetric(usize, usize),
}

/// Chart: dimension plus the ordered coordinate symbols.
#[derive(Clone, Debug)]
pub struct Chart {
    pub syms: SymbolsRef,
    /// Symbol-table indices of the coordinates, in chart order.
    pub coords: Vec<usize>,
}

impl Chart {
    pub fn new(syms: SymbolsRef) -> Result<Chart, ManifoldError> {
        let coords: Vec<usize> = syms.coordinates().collect();
        if coords.len() < 2 {
            return Err(ManifoldError::DimensionTooSmall(coords.len()));
        }
        debug_assert!(coords
            .iter()
            .all(|&i| syms.kind(i) == SymbolKind::Coordinate));
        Ok(Chart { syms, coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// Vector field given by frame components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorFieldExpr {
    pub components: Vec<Expr>,
}

impl VectorFieldExpr {
    pub fn zero(chart: &Chart) -> Self {
        VectorFieldExpr {
            components: vec![Expr::zero(&chart.syms); chart.dim()],
        }
    }

    /// The i-th frame field, as frame components (a basis vector).
    pub fn frame_basis(chart: &Chart, i: usize) -> Self {
        let mut v = Self::zero(chart);
        v.components[i] = Expr::one(&chart.syms);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Expr::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        VectorFieldExpr {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        VectorFieldExpr {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        VectorFieldExpr {
            components: self.components.iter().map(Expr::neg).collect(),
        }
    }

    pub fn scale(&self, f: &Expr) -> Self {
        VectorFieldExpr {
            components: self.components.iter().map(|c| c.mul(f)).collect(),
        }
    }
}

/// One-form given by frame components: entry i is omega(e_i).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneForm {
    pub components: Vec<Expr>,
}

impl OneForm {
    pub fn zero(chart: &Chart) -> Self {
        OneForm {
            components: vec![Expr::zero(&chart.syms); chart.dim()],
        }
    }

    pub fn apply(&self, v: &VectorFieldExpr) -> Expr {
        let mut acc = self.components[0].mul(&v.components[0]);
        for i in 1..self.components.len() {
            acc = acc.add(&self.components[i].mul(&v.components[i]));
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Expr::is_zero)
    }
}

/// (1,1) tensor field: column j holds the frame components of A(e_j).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoField {
    pub matrix: Vec<Vec<Expr>>,
}

impl EndoField {
    pub fn zero(chart: &Chart) -> Self {
        let n = chart.dim();
        EndoField {
            matrix: vec![vec![Expr::zero(&chart.syms); n]; n],
        }
    }

    pub fn identity(chart: &Chart) -> Self {
        let mut a = Self::zero(chart);
        for i in 0..chart.dim() {
            a.matrix[i][i] = Expr::one(&chart.syms);
        }
        a
    }

    pub fn apply(&self, v: &VectorFieldExpr) -> VectorFieldExpr {
        let n = self.matrix.len();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = self.matrix[i][0].mul(&v.components[0]);
            for j in 1..n {
                acc = acc.add(&self.matrix[i][j].mul(&v.components[j]));
            }
            out.push(acc);
        }
        VectorFieldExpr { components: out }
    }

    pub fn column(&self, j: usize) -> VectorFieldExpr {
        VectorFieldExpr {
            components: self.matrix.iter().map(|row| row[j].clone()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(Expr::is_zero)
    }
}

/// (0,2) tensor in frame components: entry (i,j) = T(e_i, e_j).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor02 {
    pub matrix: Vec<Vec<Expr>>,
}

impl Tensor02 {
    pub fn zero(chart: &Chart) -> Self {
        let n = chart.dim();
        Tensor02 {
            matrix: vec![vec![Expr::zero(&chart.syms); n]; n],
        }
    }

    pub fn from_metric(g: &MetricSpec) -> Self {
        Tensor02 {
            matrix: g.g.clone(),
        }
    }

    pub fn apply(&self, x: &VectorFieldExpr, y: &VectorFieldExpr) -> Expr {
        let n = self.matrix.len();
        let syms = self.matrix[0][0].symbols().clone();
        let mut acc = Expr::zero(&syms);
        for i in 0..n {
            for j in 0..n {
                acc = acc.add(&self.matrix[i][j].mul(&x.components[i]).mul(&y.components[j]));
            }
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        Tensor02 {
            matrix: self
                .matrix
                .iter()
                .zip(&other.matrix)
                .map(|(r, s)| r.iter().zip(s).map(|(a, b)| a.add(b)).collect())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Tensor02 {
            matrix: self
                .matrix
                .iter()
                .zip(&other.matrix)
                .map(|(r, s)| r.iter().zip(s).map(|(a, b)| a.sub(b)).collect())
                .collect(),
        }
    }

    pub fn scale(&self, f: &Expr) -> Self {
        Tensor02 {
            matrix: self
                .matrix
                .iter()
                .map(|r| r.iter().map(|a| a.mul(f)).collect())
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(Expr::is_zero)
    }
}

/// Exact inverse of a square Expr matrix by Gauss-Jordan elimination.
/// Returns `None` when the determinant is identically zero.
pub fn invert_matrix(m: &[Vec<Expr>], syms: &SymbolsRef) -> Option<Vec<Vec<Expr>>> {
    let n = m.len();
    let mut a: Vec<Vec<Expr>> = m.to_vec();
    let mut inv: Vec<Vec<Expr>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Expr::one(syms)
                    } else {
                        Expr::zero(syms)
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = a[col][j].div(&p).expect("pivot nonzero");
            inv[col][j] = inv[col][j].div(&p).expect("pivot nonzero");
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                a[r][j] = a[r][j].sub(&f.mul(&a[col][j]));
                inv[r][j] = inv[r][j].sub(&f.mul(&inv[col][j]));
            }
        }
    }
    Some(inv)
}

/// Global frame: row i holds the coordinate components of e_i.
#[derive(Clone, Debug)]
pub struct FrameField {
    pub chart: Chart,
    /// mat[i][a]: coefficient of d/dx_a in e_i.
    pub mat: Vec<Vec<Expr>>,
    /// inv[a][i]: coordinate-to-frame conversion matrix.
    inv: Vec<Vec<Expr>>,
}

impl FrameField {
    pub fn new(chart: Chart, mat: Vec<Vec<Expr>>) -> Result<FrameField, ManifoldError> {
        let inv = invert_matrix(&mat, &chart.syms).ok_or(ManifoldError::DegenerateFrame)?;
        Ok(FrameField { chart, mat, inv })
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn syms(&self) -> &SymbolsRef {
        &self.chart.syms
    }

    /// Coordinate components of a frame-component field.
    pub fn to_coordinate(&self, v: &VectorFieldExpr) -> Vec<Expr> {
        let n = self.dim();
        (0..n)
            .map(|a| {
                let mut acc = Expr::zero(self.syms());
                for i in 0..n {
                    acc = acc.add(&v.components[i].mul(&self.mat[i][a]));
                }
                acc
            })
            .collect()
    }

    /// Frame components of a coordinate-component field.
    pub fn to_frame(&self, coord: &[Expr]) -> VectorFieldExpr {
        let n = self.dim();
        VectorFieldExpr {
            components: (0..n)
                .map(|i| {
                    let mut acc = Expr::zero(self.syms());
                    for a in 0..n {
                        acc = acc.add(&coord[a].mul(&self.inv[a][i]));
                    }
                    acc
                })
                .collect(),
        }
    }

    /// Directional derivative X(f) of a scalar by a frame-component field.
    pub fn apply(&self, x: &VectorFieldExpr, f: &Expr) -> Expr {
        let xc = self.to_coordinate(x);
        let mut acc = Expr::zero(self.syms());
        for (a, &ci) in self.chart.coords.iter().enumerate() {
            acc = acc.add(&xc[a].mul(&f.differentiate_unchecked(ci)));
        }
        acc
    }

    /// Lie bracket [X,Y] of frame-component fields, returned in frame
    /// components. Computed in the coordinate basis and converted back.
    pub fn lie_bracket(&self, x: &VectorFieldExpr, y: &VectorFieldExpr) -> VectorFieldExpr {
        let xc = self.to_coordinate(x);
        let yc = self.to_coordinate(y);
        let n = self.dim();
        let mut out = Vec::with_capacity(n);
        for a in 0..n {
            let mut acc = Expr::zero(self.syms());
            for (b, &cb) in self.chart.coords.iter().enumerate() {
                acc = acc.add(&xc[b].mul(&yc[a].differentiate_unchecked(cb)));
                acc = acc.sub(&yc[b].mul(&xc[a].differentiate_unchecked(cb)));
            }
            out.push(acc);
        }
        self.to_frame(&out)
    }
}

/// Frame-component metric with its cached exact inverse.
#[derive(Clone, Debug)]
pub struct MetricSpec {
    pub g: Vec<Vec<Expr>>,
    pub g_inv: Vec<Vec<Expr>>,
}

impl MetricSpec {
    pub fn new(g: Vec<Vec<Expr>>, syms: &SymbolsRef) -> Result<MetricSpec, ManifoldError> {
        let n = g.len();
        for i in 0..n {
            for j in (i + 1)..n {
                if g[i][j] != g[j][i] {
                    return Err(ManifoldError::AsymmetricMetric(i, j));
                }
            }
        }
        let g_inv = invert_matrix(&g, syms).ok_or(ManifoldError::DegenerateMetric)?;
        Ok(MetricSpec { g, g_inv })
    }

    pub fn dim(&self) -> usize {
        self.g.len()
    }

    /// g(X, Y) for frame-component fields.
    pub fn inner(&self, x: &VectorFieldExpr, y: &VectorFieldExpr) -> Expr {
        let n = self.dim();
        let mut acc = self.g[0][0].mul(&x.components[0]).mul(&y.components[0]);
        for i in 0..n {
            for j in 0..n {
                if i == 0 && j == 0 {
                    continue;
                }
                acc = acc.add(&self.g[i][j].mul(&x.components[i]).mul(&y.components[j]));
            }
        }
        acc
    }

    /// One-form g(., xi) of a frame-component field.
    pub fn lower(&self, xi: &VectorFieldExpr, chart: &Chart) -> OneForm {
        let n = self.dim();
        let mut out = OneForm::zero(chart);
        for i in 0..n {
            let ei = VectorFieldExpr::frame_basis(chart, i);
            out.components[i] = self.inner(&ei, xi);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::Symbols;

    /// The 3-dimensional frame e1 = z d/dx, e2 = z d/dy, e3 = z d/dz.
    fn z_frame() -> (FrameField, MetricSpec) {
        let syms = Symbols::new(&["x", "y", "z"], &[]);
        let chart = Chart::new(syms.clone()).unwrap();
        let z = Expr::symbol(&syms, "z").unwrap();
        let zero = Expr::zero(&syms);
        let mat = vec![
            vec![z.clone(), zero.clone(), zero.clone()],
            vec![zero.clone(), z.clone(), zero.clone()],
            vec![zero.clone(), zero.clone(), z.clone()],
        ];
        let frame = FrameField::new(chart, mat).unwrap();
        let one = Expr::one(&syms);
        let g = vec![
            vec![one.clone(), zero.clone(), zero.clone()],
            vec![zero.clone(), one.clone(), zero.clone()],
            vec![zero.clone(), zero.clone(), one.neg()],
        ];
        let metric = MetricSpec::new(g, &syms).unwrap();
        (frame, metric)
    }

    #[test]
    fn brackets_match_expected() {
        let (frame, _) = z_frame();
        let e1 = VectorFieldExpr::frame_basis(&frame.chart, 0);
        let e2 = VectorFieldExpr::frame_basis(&frame.chart, 1);
        let e3 = VectorFieldExpr::frame_basis(&frame.chart, 2);
        // [e1,e3] = -e1
        assert_eq!(frame.lie_bracket(&e1, &e3), e1.neg());
        // [e2,e3] = -e2
        assert_eq!(frame.lie_bracket(&e2, &e3), e2.neg());
        // [e1,e2] = 0
        assert!(frame.lie_bracket(&e1, &e2).is_zero());
        // antisymmetry [X,X] = 0
        assert!(frame.lie_bracket(&e3, &e3).is_zero());
    }

    #[test]
    fn apply_directional_derivative() {
        let (frame, _) = z_frame();
        let syms = frame.syms().clone();
        let z = Expr::symbol(&syms, "z").unwrap();
        let e1 = VectorFieldExpr::frame_basis(&frame.chart, 0);
        let e3 = VectorFieldExpr::frame_basis(&frame.chart, 2);
        // e3 = z d/dz so e3(z) = z
        assert_eq!(frame.apply(&e3, &z), z);
        // e1 = z d/dx so e1(z) = 0
        assert!(frame.apply(&e1, &z).is_zero());
        // X(constant) = 0
        assert!(frame.apply(&e3, &Expr::int(&syms, 5)).is_zero());
    }

    #[test]
    fn inner_products() {
        let (frame, metric) = z_frame();
        let e1 = VectorFieldExpr::frame_basis(&frame.chart, 0);
        let e2 = VectorFieldExpr::frame_basis(&frame.chart, 1);
        let e3 = VectorFieldExpr::frame_basis(&frame.chart, 2);
        assert_eq!(metric.inner(&e3, &e3), Expr::int(frame.syms(), -1));
        assert!(metric.inner(&e1, &e2).is_zero());
        assert!(metric
            .inner(&e1, &VectorFieldExpr::zero(&frame.chart))
            .is_zero());
    }

    #[test]
    fn frame_round_trip() {
        let (frame, _) = z_frame();
        let syms = frame.syms().clone();
        let z = Expr::symbol(&syms, "z").unwrap();
        let v = VectorFieldExpr {
            components: vec![
                z.clone(),
                Expr::one(&syms).div(&z).unwrap(),
                Expr::int(&syms, 3),
            ],
        };
        let coord = frame.to_coordinate(&v);
        assert_eq!(frame.to_frame(&coord), v);
    }

    #[test]
    fn degenerate_frame_rejected() {
        let syms = Symbols::new(&["x", "y"], &[]);
        let chart = Chart::new(syms.clone()).unwrap();
        let x = Expr::symbol(&syms, "x").unwrap();
        let mat = vec![vec![x.clone(), x.clone()], vec![x.clone(), x.clone()]];
        assert!(matches!(
            FrameField::new(chart, mat),
            Err(ManifoldError::DegenerateFrame)
        ));
    }
}
