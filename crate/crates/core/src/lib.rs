//! Coherent states built from combinatorial sequences.
//!
//! A sequence of positive integers `c(n)` with `c(0) = 1` defines the state
//!
//! ```text
//! |z> = N(|z|²)^(-1/2) Σ zⁿ / √c(n) |n>,     N(x) = Σ xⁿ / c(n)
//! ```
//!
//! and the states resolve the identity exactly when a positive weight `W(x)`
//! on `(0, R)` has the `c(n)` as its moments. This crate generates the
//! sequences exactly ([`sequences`]), evaluates the closed-form weights
//! ([`weights`]) and the special functions they need ([`specialfn`]),
//! integrates the moments numerically and compares them against the exact
//! values ([`moments`]), and computes state-level quantities ([`states`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod moments;
pub mod quadrature;
pub mod report;
pub mod sequences;
pub mod specialfn;
pub mod states;
pub mod weights;

pub use error::{Error, Result};

pub use sequences::{
    dobinski_partial, radius_of_convergence, seq_value, seq_values, spectrum, ExactValue, Example,
    SequenceId, Spectrum,
};

pub use moments::{
    default_scheme, moment, verify_moments, MomentReport, MomentRow, QuadratureConfig, Scheme,
};

pub use weights::{
    bell_atoms, calibrate_constant, cb_weight_eval, positivity_scan, weight_eval, AtomList,
    EndpointBehavior, WeightKind, WeightSpec,
};

pub use states::{normalization, overlap, state_coefficients, StateParams, StateVector};
