//! Hybrid High-Order (HHO) kernel for incremental small-deformation plasticity
//! on general polygonal/polyhedral meshes.
//!
//! The building blocks are organized bottom-up:
//!
//! - [`mesh`]: face-based polytopal meshes with boundary tagging, generators,
//!   agglomeration and import/export,
//! - [`quadrature`]: positive-weight rules on segments, simplices, boxes and
//!   star-shaped polytopes,
//! - [`basis`]: scaled monomial bases, mass matrices and local L2 projections,
//! - [`operators`]: the per-cell HHO operator set (strain reconstruction,
//!   displacement reconstruction, stabilization),
//! - [`material`]: J2 elastoplasticity with combined linear hardening and the
//!   radial return map,
//! - [`solver`]: incremental Newton driver with static condensation,
//!   equilibrated-traction and coercivity diagnostics.
//!
//! Per-cell work (operator construction, assembly, behavior integration) is
//! embarrassingly parallel and runs on rayon when the `parallel` feature is
//! enabled (default). Disabling the feature yields a fully sequential build
//! with identical results.

pub mod basis;
pub mod exec;
pub mod material;
pub mod mesh;
pub mod operators;
pub mod quadrature;
pub mod solver;
pub mod tensor;
