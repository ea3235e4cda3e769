//! Kernel-split quadrature for singular and nearly singular 2D layer
//! potentials of the modified Helmholtz equation `(Δ - α²)u = 0`.
//!
//! The classic panel-based kernel-split scheme loses accuracy once the
//! product of the decay parameter `α` and the panel length `h` exceeds a
//! modest constant, because the smooth split components grow like
//! `exp(α|x-y|)` and stop being polynomial-friendly. This crate implements
//! the per-target recursive subdivision cure: each near-evaluation target
//! gets its own partition of the source panel into subintervals that are
//! either short enough for kernel-split quadrature or far enough away for
//! plain Gauss-Legendre, at a cost that grows only like `log α`.
//!
//! Modules:
//! - [`gauss`]: Gauss-Legendre rules and barycentric Lagrange interpolation
//! - [`bessel`]: modified Bessel functions `I0, I1, K0, K1` and the smooth
//!   remainders used by the kernel split
//! - [`geom`]: curves, panels, boundaries, and complex preimages of targets
//! - [`kernels`]: single- and double-layer modified Helmholtz kernels and
//!   their split decompositions
//! - [`prodint`]: target-specific product-integration weights for the log
//!   and Cauchy singularities
//! - [`subdiv`]: the per-target recursive subdivision of the standard
//!   interval
//! - [`eval`]: layer-potential evaluation, correction formulas, and Nyström
//!   matrix assembly
//! - [`solve`]: dense LU solve of the Nyström system and solution evaluation
//! - [`oracle`]: adaptive reference quadrature, independent of the
//!   product-integration path

pub mod bessel;
pub mod eval;
pub mod gauss;
pub mod geom;
pub mod kernels;
pub mod oracle;
pub mod prodint;
pub mod solve;
pub mod subdiv;

pub use eval::{EvalOptions, EvalReport};
pub use gauss::{InterpolationMatrix, QuadratureRule};
pub use geom::{Boundary, Circle, Curve, Panel, Point, Segment};
pub use kernels::{DoubleLayer, Kernel, SingleLayer, SplitEval};
pub use prodint::TargetWeights;
pub use solve::NystromSystem;
pub use subdiv::{SubdivParams, Subdivision};
