//! Scaling laws for data-constrained visual transfer learning.
//!
//! The crate evaluates and fits the baseline and distilled power-law
//! performance models
//!
//! ```text
//! E(D_p, M, D_f)      = E_inf + D_p^-a / l_p + M^-b / l_m + D_f^-g / l_f
//! E'(D_p, M, D_f, T)  = E'(D_p, M, D_f) + T^-eta / delta
//! ```
//!
//! and analyses where distilling from a smaller teacher stops paying off as
//! pretraining data grows (the distillation boundary). It also carries the
//! logit-level distillation objective with analytic gradients and a planner
//! for the data/model sweep used to collect observations.
//!
//! Everything here is `no_std` + `alloc`; file formats and the CLI live in
//! the `tlscale` crate.

#![no_std]
#![warn(missing_docs)]

extern crate alloc;

pub mod boundary;
pub mod distill;
mod error;
pub mod fitting;
pub mod laws;
mod math;
pub mod planner;

pub use error::{Error, Result};
pub use laws::{
    BaselineLawParams, DistilledLawParams, Law, LawInput, MetricKind, ModelSizeUnit,
};
