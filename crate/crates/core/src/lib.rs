//! Robust Stackelberg equilibria of bimatrix games.
//!
//! The leader commits to a mixed strategy; the follower may answer with any
//! action within `delta` of its best payoff, and the leader plans against the
//! worst such answer. This crate computes that value exactly, approximates it,
//! generates benchmark instances and simulates learning it from samples.

pub mod approx;
pub mod baseline;
pub mod cli;
pub mod error;
pub mod exact;
pub mod game;
pub mod lab;
pub mod learning;
pub mod lp;
pub mod scalar;

pub use baseline::{induce_strategy, inducibility_gap, solve_maximin, solve_sse, Gap};
pub use error::{Error, Result};
pub use exact::{rse_curve, solve_exact, solve_exact_with, ExactOptions, Method, RseCurve, RseSolution};
pub use game::{br_delta, evaluate, Game, GameValueReport, MixedStrategy, ResponseSet, TieBreaking};
pub use scalar::{Rational, Scalar};
