//! Exact verification laboratory for the integrable two-dimensional field
//! systems attached to the rank-2 semisimple Lie algebras A₂, B₂/C₂, G₂
//! under their nontrivial gradings.
//!
//! The crate constructs the fundamental representations in exact rational
//! arithmetic, machine-checks the determinant identities on group matrix
//! elements that the whole construction rests on, generates general
//! solutions of the associated field equations through the composite
//! element K = M⁺(y)·M⁻(x), and certifies that the extracted fields
//! satisfy each derived system — exactly over ℚ where possible, in
//! arbitrary-precision arithmetic where cube roots force it.
//!
//! Module map:
//!
//! - [`algebra`] — Cartan matrices, gradings, grading operators.
//! - [`rep`] — fundamental representations via the lowering-orbit
//!   construction, with exact-rational matrices.
//! - [`group`] — nilpotent exponentials, torus elements, Gauss-factored
//!   random group elements, matrix elements ⟨bra|G|ket⟩.
//! - [`identities`] — first/second/generalized Jacobi checks, the θ/α
//!   differentiation rules, and the G₂ third-order determinant
//!   decomposition.
//! - [`lax`] — the graded operators L± per system, hermitian conjugation,
//!   gauge transformations.
//! - [`solution`] — K = M⁺M⁻ in exact polynomial or high-precision
//!   numeric form, with the insertion calculus for derivatives.
//! - [`systems`] — the five derived integrable systems as residual
//!   functionals plus the verification pipeline.
//! - [`harness`] — command front end, configs, JSON reports.

pub mod algebra;
pub mod bigfloat;
pub mod error;
pub mod formal;
pub mod group;
pub mod harness;
pub mod identities;
pub mod lax;
pub mod matrix;
pub mod poly;
pub mod rational;
pub mod rep;
pub mod solution;
pub mod symderiv;
pub mod systems;
mod vev;

pub use algebra::{cartan_matrix, grading_coeffs, AlgebraId, CartanMatrix, GradingSpec};
pub use error::Error;
pub use matrix::Mat;
pub use rep::{build_fundamental, Representation, WeightWord};
