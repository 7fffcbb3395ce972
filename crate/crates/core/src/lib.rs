//! Overstay penalty design for EV park-and-charge facilities.
//!
//! Users arrive at a lot with `N` chargers, look at the posted charging price
//! and overstay penalty, and decide whether to enter based on how likely it is
//! that the penalty stays below what they are willing to pay. The crate ties
//! that behavior model to an Erlang loss system and provides three ways to
//! look at the resulting utilization and revenue:
//!
//! * [`closedform`]: exact expressions for linear tariffs with exponential
//!   durations and a constant threshold,
//! * [`analytic`]: quadrature for general distributions and tariffs,
//! * [`simulator`]: a seeded discrete-event simulation of operating days.
//!
//! [`optimizer`] searches penalty rates on a grid and [`bandit`] learns the
//! revenue-maximizing rate online with an upper-confidence-bound policy.

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod bandit;
pub mod behavior;
pub mod cli;
pub mod closedform;
pub mod distributions;
pub mod error;
pub mod optimizer;
pub mod queueing;
pub mod simulator;
pub mod special;
pub mod tariff;

pub use behavior::{StayOutcome, UserDraw, UserModel};
pub use distributions::DistributionSpec;
pub use error::{Error, Result};
pub use queueing::{PerformanceReport, QueueParams};
pub use tariff::{PiecewiseLinear, Tariff};
