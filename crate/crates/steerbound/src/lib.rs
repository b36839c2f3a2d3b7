//! Loss-tolerant steering bounds for Platonic-solid qubit measurement sets.
//!
//! The crate computes, for measurement sets of n in {2, 3, 4, 6, 10} qubit
//! axes arranged as the diameters of a Platonic solid (plus the square),
//! how much detection loss a local-hidden-state model can exploit before a
//! steering test closes the detection loophole. It provides:
//!
//! - exact deterministic bound tables and their loss-dependent concave
//!   envelopes for both a linear correlation criterion and an
//!   inference-variance criterion ([`bounds`]);
//! - enumeration of every optimal cheating ensemble at each null count,
//!   classified by its geometric orbit ([`strategies`]);
//! - a Monte Carlo simulator of honest and cheating parties under three
//!   loss-scoring conventions, with delta-method standard errors
//!   ([`simulator`]);
//! - an independent brute-force oracle (sphere grids, exhaustive plan
//!   enumeration, and a 4x4 density-matrix model) used to cross-check the
//!   analytic modules ([`oracle`]);
//! - stable text formats for curves, catalogs, and scenarios ([`io`]).

// Index loops over matrix coordinates and tally columns read better than
// iterator chains in the numeric code.
#![allow(clippy::needless_range_loop)]

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod io;
pub mod oracle;
pub mod simulator;
pub mod strategies;
pub mod sym3;

pub use error::{Error, Result};
pub use geometry::{
    build_measurement_set, BlochVector, MeasurementSet, Rotation, Solid, WernerParams,
    SUPPORTED_SIZES,
};
