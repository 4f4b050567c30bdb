//! Minimal errors of algorithms that learn an element through finitely many
//! linear functionals, computed and tested at desk scale.
//!
//! For a compact linear problem between finite-dimensional inner-product
//! spaces, the n-th minimal worst-case error is the (n+1)-st singular value,
//! attained by truncating the singular expansion. Around that fact the crate
//! builds:
//!
//! - [`spectral`] — problems, spectra, the optimal truncation algorithm, and
//!   a brute-force witness check of `σ_{n+1}`;
//! - [`information`] — information maps, kernels, radii of information, and
//!   invariance under invertible recombination;
//! - [`sequence_model`] — a weighted sequence space where discontinuous
//!   functionals exist, with the exact symbolic transformation that replaces
//!   them by continuous ones and a radius ladder witnessing that nothing is
//!   lost in the limit;
//! - [`randomized`] — average-case errors under the uniform sphere measure
//!   and the `σ₄ₙ/2 ≤ eₙ ≤ σ_{n+1}` sandwich for randomized algorithms;
//! - [`l1_ball`] — the map `x ↦ ‖x‖₂²` on the ℓ₁ ball, where random signs
//!   estimate cheaply what no fixed set of functionals can resolve, with
//!   exact Gelfand widths of cross-polytope sections as certificates;
//! - [`function_values`] — grid models where the best n evaluation points
//!   are compared exhaustively against the best n arbitrary functionals,
//!   plus standard Monte Carlo integration and an exact two-point rule on a
//!   constrained model.
//!
//! Each capability has a runnable example under `examples/`; the `infocomp`
//! binary exposes the same operations as subcommands that emit
//! deterministic CSV/JSON reports.

pub mod cli;
pub mod error;
pub mod function_values;
pub mod information;
pub mod l1_ball;
pub mod randomized;
pub mod report;
pub mod sequence_model;
pub mod spectral;

pub use error::{Error, Result};
