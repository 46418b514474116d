//! Sampling-based choice between selling separately and grand bundling.
//!
//! The decision rule, for a single additive buyer with independent items:
//!
//! 1. Compute srev (sum of per-item monopoly revenues) and
//!    p* = (2/5) * Welfare(core), where the core restricts every item value
//!    to at most srev.
//! 2. Draw ceil(ln n / eps^2) i.i.d. profiles (floored at 100; see
//!    [`SAMPLE_FLOOR`]) and let q_hat be the fraction with total value >= p*.
//! 3. If q_hat < 47/72, or q_hat * p* < srev, sell the items separately.
//! 4. Otherwise sell the grand bundle at price p*.
//!
//! Sampling is counter-based on (seed, item, draw), so a decision is a pure
//! function of (instance, epsilon, seed).

use serde::Serialize;

use crate::dist::DiscreteDist;
use crate::error::{Error, Result};
use crate::market::MarketInstance;
use crate::menu_lp::rev_lp_instance;
use crate::rng::stream_u01;
use crate::single_item::monopoly_price;

/// Minimum number of sampled profiles; tiny n would otherwise estimate q from
/// a handful of draws.
pub const SAMPLE_FLOOR: u64 = 100;

/// Acceptance threshold for the sampled sale probability.
pub const Q_THRESHOLD: f64 = 47.0 / 72.0;

/// Which mechanism the rule selected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Choice {
    /// Sell every item separately at its monopoly price.
    Separate,
    /// Sell the grand bundle at p*.
    Bundle,
}

/// Outcome of one run of the decision rule.
#[derive(Clone, Debug, Serialize)]
pub struct ApproxDecision {
    /// Grand-bundle candidate price (2/5 of the core welfare).
    pub p_star: f64,
    /// Sampled probability that the profile total reaches p*.
    pub q_hat: f64,
    /// Selected mechanism.
    pub choice: Choice,
    /// Number of profiles sampled.
    pub samples_used: u64,
    /// True when [`SAMPLE_FLOOR`] overrode ceil(ln n / eps^2).
    pub sample_floor_applied: bool,
    /// Seed of the sampling stream.
    pub seed: u64,
    /// Estimated revenue of the selected mechanism
    /// (srev when separate, q_hat * p* when bundling).
    pub est_revenue: f64,
    /// Selling-separately revenue used by the rule.
    pub srev: f64,
}

/// Run the decision rule on a single-buyer independent instance.
pub fn run_approx(inst: &MarketInstance, epsilon: f64, seed: u64) -> Result<ApproxDecision> {
    if !(epsilon > 0.0) {
        return Err(Error::invalid("epsilon", format!("must be > 0, got {epsilon}")));
    }
    let items = inst.single_buyer_items()?;
    let n = items.len();
    let srev: f64 = items.iter().map(|d| monopoly_price(d).1).sum();

    // Core welfare: every item conditioned on v <= srev. Items whose whole
    // support exceeds srev contribute nothing (null core).
    let mut core_welfare = 0.0;
    for d in &items {
        let (core, _, _) = d.condition_split(srev)?;
        if let Some(core) = core {
            core_welfare += core.mean();
        }
    }
    let p_star = 0.4 * core_welfare;

    let nominal = ((n as f64).ln() / (epsilon * epsilon)).ceil() as u64;
    let samples = nominal.max(SAMPLE_FLOOR);
    let mut hits = 0u64;
    for draw in 0..samples {
        let total: f64 = items
            .iter()
            .enumerate()
            .map(|(i, d)| d.sample_u01(stream_u01(seed, i as u64, draw)))
            .sum();
        if total >= p_star {
            hits += 1;
        }
    }
    let q_hat = hits as f64 / samples as f64;

    let bundle = q_hat >= Q_THRESHOLD && q_hat * p_star >= srev;
    let choice = if bundle { Choice::Bundle } else { Choice::Separate };
    Ok(ApproxDecision {
        p_star,
        q_hat,
        choice,
        samples_used: samples,
        sample_floor_applied: nominal < SAMPLE_FLOOR,
        seed,
        est_revenue: if bundle { q_hat * p_star } else { srev },
        srev,
    })
}

/// Exact Pr[sum of item values >= price] by convolution.
pub fn exact_bundle_prob(items: &[DiscreteDist], price: f64) -> Result<f64> {
    let mut total = DiscreteDist::point_mass(0.0);
    for d in items {
        total = total.convolve_capped(d, crate::benchmarks::BUNDLE_SUPPORT_CAP)?;
    }
    Ok(total.pr_geq(price))
}

/// Evaluation of a decision against the LP-optimal revenue.
#[derive(Clone, Debug, Serialize)]
pub struct ApproxEvaluation {
    /// Exact revenue of the chosen mechanism.
    pub chosen_revenue: f64,
    /// LP-optimal revenue of the instance.
    pub optimal_revenue: f64,
    /// chosen_revenue / optimal_revenue (1 when the optimum is 0).
    pub ratio: f64,
    /// Guarantee floor optimal / (6 (1 + eps)).
    pub floor: f64,
    /// chosen_revenue >= floor - 1e-6.
    pub pass: bool,
}

/// Evaluate a decision: exact revenue of the chosen mechanism against the
/// 6(1+eps) guarantee relative to the LP optimum.
pub fn evaluate_decision(
    decision: &ApproxDecision,
    inst: &MarketInstance,
    epsilon: f64,
) -> Result<ApproxEvaluation> {
    let optimal_revenue = rev_lp_instance(inst)?.objective;
    evaluate_decision_against(decision, inst, epsilon, optimal_revenue)
}

/// As [`evaluate_decision`] with a precomputed optimal revenue, so batteries
/// of decisions on one instance solve its LP once.
pub fn evaluate_decision_against(
    decision: &ApproxDecision,
    inst: &MarketInstance,
    epsilon: f64,
    optimal_revenue: f64,
) -> Result<ApproxEvaluation> {
    let items = inst.single_buyer_items()?;
    let chosen_revenue = match decision.choice {
        Choice::Separate => decision.srev,
        Choice::Bundle => decision.p_star * exact_bundle_prob(&items, decision.p_star)?,
    };
    let floor = optimal_revenue / (6.0 * (1.0 + epsilon));
    Ok(ApproxEvaluation {
        chosen_revenue,
        optimal_revenue,
        ratio: if optimal_revenue > 0.0 {
            chosen_revenue / optimal_revenue
        } else {
            1.0
        },
        floor,
        pass: chosen_revenue >= floor - 1e-6,
    })
}
