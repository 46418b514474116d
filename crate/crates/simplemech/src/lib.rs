//! Revenue of simple selling mechanisms versus optimal menus.
//!
//! `simplemech` computes, bounds, and experimentally compares the revenue of
//! simple mechanisms for additive buyers (selling every item separately,
//! selling the grand bundle, partition mechanisms, and posted-price schemes)
//! against the LP-optimal truthful mechanism, at desk scale and with exact
//! arithmetic wherever enumeration is feasible.
//!
//! The main pieces:
//!
//! * [`dist`]: exact algebra over finite-support value distributions.
//! * [`market`]: market instances (independent grids or explicit correlated
//!   joints) and the JSON schema used by the CLI and examples.
//! * [`single_item`]: Myerson machinery: monopoly prices, quantile revenue
//!   curves, ironed virtual values, exact multi-bidder item revenue.
//! * [`benchmarks`]: SRev / BRev / PRev on a market instance.
//! * [`menu_lp`]: the LP oracle for the optimal single-buyer mechanism, plus
//!   structural revenue bounds (marginal mechanism, sub-domain stitching).
//! * [`core_tail`]: core-tail decompositions of an instance, with the tail,
//!   core-welfare, variance and concentration bounds they certify.
//! * [`approx`]: the sampling-based separate-vs-bundle decision rule with its
//!   approximation guarantee checker.
//! * [`pricing`]: posted-price mechanisms for many bidders: the per-profile
//!   split bound, random-reserve pricing, BUNDLE / SHATTER transforms and the
//!   conditional-tail inequality.
//! * [`gaps`]: generators for the logarithmic separation constructions and
//!   the trend experiment harness.
//! * [`reductions`]: point-mass-in-sum and symmetrization transforms that
//!   drive the correlated bundling-vs-separate bound.
//!
//! Run `cargo run --example ddt_analysis` for a tour, or use the `simplemech`
//! binary for batch analysis of instance files.

// Negated comparisons like !(x > 0.0) double as NaN rejection in
// parameter validation; keep them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod benchmarks;
pub mod cli;
pub mod core_tail;
pub mod dist;
pub mod error;
pub mod gaps;
pub mod market;
pub mod menu_lp;
pub mod partitions;
pub mod pricing;
pub mod reductions;
pub mod rng;
pub mod simplex;
pub mod single_item;

pub use dist::DiscreteDist;
pub use error::{Error, Result};
pub use market::{JointDist, MarketInstance, RevenueEstimate};
