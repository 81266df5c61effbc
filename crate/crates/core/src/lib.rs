//! Exact simulation of reciprocal Archimedean copulas.
//!
//! A reciprocal Archimedean copula in dimension `d` is parameterized by a
//! radial measure `ν` on `(0, ∞]`. The random vector
//! `Y_i = max_k R_k Q_i^(k)` built from the decreasing points `R_k` of a
//! Poisson random measure with mean measure `ν` and independent uniform
//! simplex vectors `Q^(k)` has the copula as its dependence structure. The
//! points are produced as `R_k = S^{-1}(ε_1 + … + ε_k)`, where `S` is the
//! survival function of `ν`, and the infinite maximum stops as soon as the
//! next point cannot exceed the current minimum component.
//!
//! Modules:
//! - [`radial`]: radial measures, their survival functions and pseudo-inverses.
//! - [`generator`]: the generator `F = exp(-Λ)`, its inverse and the
//!   Williamson reconstruction of `S` from `Λ`.
//! - [`points`]: the decreasing Poisson point stream.
//! - [`simplex`]: uniform and Dirichlet laws on the unit simplex.
//! - [`sampler`]: the exact sampler, batches and loop-count telemetry.
//! - [`copula`]: analytic copula CDF and the Monte Carlo max-id CDF.
//! - [`validate`]: statistical self-checks and the truncation oracle.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod copula;
pub mod error;
pub mod generator;
pub mod points;
pub mod radial;
pub mod rng;
pub mod sampler;
pub mod simplex;
pub mod stats;
pub mod validate;

pub use copula::CopulaSpec;
pub use error::{Error, Result};
pub use generator::Generator;
pub use points::PointStream;
pub use radial::{
    DiscreteRadial, GalambosRadial, HarmonicRadial, MeasureSpec, RadialMeasure, SharedMeasure,
};
pub use sampler::{BatchSummary, SampleResult, Sampler};
pub use simplex::SimplexLaw;
