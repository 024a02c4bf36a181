//! Symbolic tensor calculus and identity verification for frame-defined
//! Lorentzian manifolds.
//!
//! The crate computes Levi-Civita connection data, Riemann/Ricci/scalar
//! curvature and the derived conharmonic, projective, concircular and W2
//! tensors for a manifold given by a global frame with exact
//! rational-function coefficients, then mechanically checks the axioms of a
//! Lorentzian concircular structure and the residuals of a Yamabe-soliton
//! candidate. All arithmetic is exact; a residual is reported zero only when
//! it is canonically the zero rational function.

pub mod cli;
pub mod connection;
pub mod curvature;
pub mod fixtures;
pub mod lcs;
pub mod manifold;
pub mod report;
pub mod symexpr;

pub use symexpr::{Expr, ExprError, SymbolKind, Symbols, SymbolsRef};
