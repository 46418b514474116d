//! Posted-price mechanisms for many i.i.d. bidders: the per-profile split
//! bound, random-reserve pricing, the BUNDLE and SHATTER transforms on priced
//! item sets, and the conditional-tail inequality used to remove conditioning.
//!
//! A pricing scheme (S, p) posts price p on the item set S and sells to any
//! bidder willing to pay; ties break arbitrarily, so no competition rent.

use serde::Serialize;

use crate::dist::{neumaier_sum_iter, DiscreteDist};
use crate::error::{Error, Result};
use crate::market::RevenueEstimate;
use crate::rng::{derive_seed, SplitMix64};
use crate::single_item::{
    monopoly_price, posted_price_rev, second_price_reserve_outcome, second_price_reserve_rev,
};

/// A posted price on a set of items.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PricingScheme {
    /// Item indices, nonempty.
    pub items: Vec<usize>,
    /// Posted price, >= 0.
    pub price: f64,
}

impl PricingScheme {
    /// Validate the scheme shape.
    pub fn new(items: Vec<usize>, price: f64) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::invalid("items", "scheme needs at least one item"));
        }
        if !(price >= 0.0) {
            return Err(Error::invalid("price", format!("must be >= 0, got {price}")));
        }
        Ok(PricingScheme { items, price })
    }
}

/// Distribution of one consumer's value for an item set.
pub fn set_value_dist(consumer: &[DiscreteDist], items: &[usize]) -> Result<DiscreteDist> {
    let mut acc = DiscreteDist::point_mass(0.0);
    for &i in items {
        if i >= consumer.len() {
            return Err(Error::invalid("items", format!("item index {i} out of range")));
        }
        acc = acc.convolve_capped(&consumer[i], crate::benchmarks::BUNDLE_SUPPORT_CAP)?;
    }
    Ok(acc)
}

/// Probability that a single consumer purchases the scheme's set at its price.
pub fn purchase_prob(consumer: &[DiscreteDist], scheme: &PricingScheme) -> Result<f64> {
    Ok(set_value_dist(consumer, &scheme.items)?.pr_geq(scheme.price))
}

/// Result of merging disjoint priced sets into one bundle.
#[derive(Clone, Debug, Serialize)]
pub struct BundleCombineOutcome {
    /// The combined scheme: union of the sets at price (1 - sqrt(1-c1)) * sum p_i.
    pub combined: PricingScheme,
    /// Per-scheme purchase probabilities q_i.
    pub qs: Vec<f64>,
    /// c = sum q_i p_i / sum p_i.
    pub c: f64,
    /// Probability floor c1 (all q_i >= c1).
    pub c1: f64,
    /// Price fraction d = 1 - sqrt(1 - c1).
    pub d: f64,
    /// Closed-form guarantee with the worst-case c = c1 in the denominator.
    pub guarantee: f64,
    /// Same expression with the realized c in the denominator (the two
    /// readings coincide at c = c1; this one is never larger).
    pub guarantee_realized_c: f64,
    /// Exact revenue of the combined scheme for one consumer.
    pub exact_revenue: f64,
}

/// BUNDLE: merge disjoint schemes, all purchased with probability >= c1, into
/// a single bundle priced at (1 - sqrt(1 - c1)) * sum of the prices.
pub fn bundle_combine(
    schemes: &[PricingScheme],
    consumer: &[DiscreteDist],
    c1: f64,
) -> Result<BundleCombineOutcome> {
    if schemes.is_empty() {
        return Err(Error::invalid("schemes", "need at least one scheme"));
    }
    if !(c1 > 0.0 && c1 <= 1.0) {
        return Err(Error::invalid("c1", format!("must lie in (0, 1], got {c1}")));
    }
    let mut seen = std::collections::HashSet::new();
    for (k, s) in schemes.iter().enumerate() {
        for &i in &s.items {
            if !seen.insert(i) {
                return Err(Error::invalid(
                    "schemes",
                    format!("schemes are not disjoint: item {i} repeats (scheme {k})"),
                ));
            }
        }
    }
    let mut qs = Vec::with_capacity(schemes.len());
    for (k, s) in schemes.iter().enumerate() {
        let q = purchase_prob(consumer, s)?;
        if q < c1 - 1e-12 {
            return Err(Error::Precondition(format!(
                "scheme {k} sells with probability {q} < c1 = {c1}"
            )));
        }
        qs.push(q);
    }
    let price_sum: f64 = schemes.iter().map(|s| s.price).sum();
    let weighted: f64 = schemes.iter().zip(&qs).map(|(s, q)| s.price * q).sum();
    let c = if price_sum > 0.0 { weighted / price_sum } else { 1.0 };
    let root = (1.0 - c1).sqrt();
    let d = 1.0 - root;
    let combined_items: Vec<usize> = {
        let mut v: Vec<usize> = schemes.iter().flat_map(|s| s.items.clone()).collect();
        v.sort_unstable();
        v
    };
    let combined = PricingScheme::new(combined_items, d * price_sum)?;
    // (1 - sqrt(1-c1)) * (c1 - 1 + sqrt(1-c1)) / (c1 * sqrt(1-c1)) * sum q_i p_i,
    // with the c1 -> 1 limit equal to sum q_i p_i.
    let factor = |denom: f64| -> f64 {
        if root == 0.0 {
            1.0
        } else {
            d * (c1 - 1.0 + root) / (denom * root)
        }
    };
    let exact_revenue = combined.price * purchase_prob(consumer, &combined)?;
    Ok(BundleCombineOutcome {
        combined,
        qs,
        c,
        c1,
        d,
        guarantee: factor(c1) * weighted,
        guarantee_realized_c: factor(c) * weighted,
        exact_revenue,
    })
}

/// Exact check of the Markov step behind BUNDLE: the capped spend
/// X = sum of (p_i if the consumer buys scheme i else 0) satisfies
/// Pr[X >= d * sum p_i] >= (c - d) / (1 - d) for any d < c.
pub fn markov_step_holds(
    schemes: &[PricingScheme],
    consumer: &[DiscreteDist],
    d: f64,
) -> Result<bool> {
    let mut spend = DiscreteDist::point_mass(0.0);
    let mut price_sum = 0.0;
    let mut weighted = 0.0;
    for s in schemes {
        let q = purchase_prob(consumer, s)?;
        price_sum += s.price;
        weighted += q * s.price;
        let two_point = if s.price == 0.0 {
            DiscreteDist::point_mass(0.0)
        } else if q >= 1.0 {
            DiscreteDist::point_mass(s.price)
        } else if q <= 0.0 {
            DiscreteDist::point_mass(0.0)
        } else {
            DiscreteDist::new(vec![(0.0, 1.0 - q), (s.price, q)])?
        };
        spend = spend.convolve(&two_point)?;
    }
    let c = if price_sum > 0.0 { weighted / price_sum } else { 1.0 };
    if d >= c {
        return Err(Error::Precondition(format!("need d < c, got d={d}, c={c}")));
    }
    Ok(spend.pr_geq(d * price_sum) >= (c - d) / (1.0 - d) - 1e-9)
}

/// Result of shattering a priced set into per-item schemes.
#[derive(Clone, Debug, Serialize)]
pub struct ShatterOutcome {
    /// One scheme per item, priced at that item's monopoly price.
    pub schemes: Vec<PricingScheme>,
    /// Exact per-item revenue p_i * Pr[v_i >= p_i].
    pub per_item_revenue: Vec<f64>,
    /// Sum of the per-item revenues.
    pub total: f64,
}

/// SHATTER: replace a priced set by per-item schemes at monopoly prices.
pub fn shatter(scheme: &PricingScheme, consumer: &[DiscreteDist]) -> Result<ShatterOutcome> {
    let mut schemes = Vec::with_capacity(scheme.items.len());
    let mut per_item_revenue = Vec::with_capacity(scheme.items.len());
    for &i in &scheme.items {
        if i >= consumer.len() {
            return Err(Error::invalid("items", format!("item index {i} out of range")));
        }
        let (price, rev) = monopoly_price(&consumer[i]);
        schemes.push(PricingScheme::new(vec![i], price)?);
        per_item_revenue.push(rev);
    }
    let total = per_item_revenue.iter().sum();
    Ok(ShatterOutcome {
        schemes,
        per_item_revenue,
        total,
    })
}

/// One inequality instance of the conditional-tail check.
#[derive(Clone, Debug, Serialize)]
pub struct BrendanCase {
    /// Item index.
    pub item: usize,
    /// Exponent j (threshold p / 2^j).
    pub j: u32,
    /// Pr[v_i >= p/2^j | V >= p].
    pub lhs: f64,
    /// 2 Pr[v_i >= p/2^j] + Pr[v_i >= p/2] / q.
    pub rhs: f64,
    /// lhs <= rhs + 1e-9.
    pub pass: bool,
}

/// Report of the conditional-tail inequality over items and exponents.
#[derive(Clone, Debug, Serialize)]
pub struct BrendanReport {
    /// q = Pr[V >= p] for the set value V.
    pub q: f64,
    /// True when Pr[V >= p/2] > 2q: the reserve-price premise fails,
    /// so the cases are skipped rather than judged.
    pub vacuous: bool,
    /// Individual cases (empty when vacuous).
    pub cases: Vec<BrendanCase>,
    /// All cases pass (true when vacuous).
    pub pass: bool,
}

/// Check Pr[v_i >= p/2^j | V >= p] <= 2 Pr[v_i >= p/2^j] + Pr[v_i >= p/2] / q
/// for every item i in the set and every exponent j in the range.
///
/// The premise Pr[V >= p/2] <= 2q holds whenever p is the set's monopoly
/// price; other prices may violate it, in which case the report is vacuous.
pub fn check_brendan(
    consumer: &[DiscreteDist],
    items: &[usize],
    p: f64,
    j_range: std::ops::RangeInclusive<u32>,
) -> Result<BrendanReport> {
    let set_dist = set_value_dist(consumer, items)?;
    let q = set_dist.pr_geq(p);
    if q <= 0.0 {
        return Err(Error::Precondition(format!("Pr[V >= p] = 0 at p = {p}")));
    }
    if set_dist.pr_geq(p / 2.0) > 2.0 * q + 1e-12 {
        return Ok(BrendanReport {
            q,
            vacuous: true,
            cases: Vec::new(),
            pass: true,
        });
    }
    let mut cases = Vec::new();
    for &i in items {
        // Distribution of the rest of the set, for the exact joint probability.
        let rest: Vec<usize> = items.iter().copied().filter(|&k| k != i).collect();
        let rest_dist = set_value_dist(consumer, &rest)?;
        let d_i = &consumer[i];
        let pr_half = d_i.pr_geq(p / 2.0);
        for j in j_range.clone() {
            let threshold = p / (2.0f64).powi(j as i32);
            // Pr[v_i >= threshold and v_i + rest >= p], exact over atoms.
            let joint: f64 = d_i
                .atoms()
                .filter(|&(v, _)| v >= threshold)
                .map(|(v, pv)| pv * rest_dist.pr_geq(p - v))
                .sum();
            let lhs = joint / q;
            let rhs = 2.0 * d_i.pr_geq(threshold) + pr_half / q;
            cases.push(BrendanCase {
                item: i,
                j,
                lhs,
                rhs,
                pass: lhs <= rhs + 1e-9,
            });
        }
    }
    let pass = cases.iter().all(|c| c.pass);
    Ok(BrendanReport {
        q,
        vacuous: false,
        cases,
        pass,
    })
}

/// Report of the random-reserve pricing check against half of BRev_0.
#[derive(Clone, Debug, Serialize)]
pub struct RandomReserveReport {
    /// Revenue of the random-reserve pricing scheme.
    pub revenue: RevenueEstimate,
    /// Exact BRev_0 = expected second-highest value.
    pub brev0: f64,
    /// revenue >= brev0 / 2 (minus 3 standard errors for simulations).
    pub pass: bool,
}

/// Exact revenue of the random-reserve pricing scheme: draw one reserve sample
/// per bidder, post the maximum as the price, sell iff some real value meets
/// it. Depends only on the maxima of the real and reserve profiles.
pub fn random_reserve_exact(bidders: &[DiscreteDist]) -> Result<f64> {
    if bidders.is_empty() {
        return Err(Error::invalid("bidders", "need at least one bidder"));
    }
    let mut max_dist = bidders[0].clone();
    for d in &bidders[1..] {
        max_dist = max_dist.max_dist(d)?;
    }
    // Reserve max M' and real max M are i.i.d.; revenue = E[M' 1{M >= M'}].
    Ok(neumaier_sum_iter(
        max_dist.atoms().map(|(v, p)| v * p * max_dist.pr_geq(v - 1e-12)),
    ))
}

/// Exact BRev_0: expected revenue of the second-price auction with no reserve.
pub fn brev0_exact(bidders: &[DiscreteDist]) -> Result<f64> {
    second_price_reserve_rev(bidders, 0.0)
}

/// Exact random-reserve check (enumeration-feasible instances).
pub fn check_random_reserve_exact(bidders: &[DiscreteDist]) -> Result<RandomReserveReport> {
    let revenue = random_reserve_exact(bidders)?;
    let brev0 = brev0_exact(bidders)?;
    Ok(RandomReserveReport {
        revenue: RevenueEstimate::exact(revenue),
        brev0,
        pass: revenue >= 0.5 * brev0 - 1e-12,
    })
}

/// Monte Carlo random-reserve check for larger instances.
pub fn random_reserve_sim(
    bidders: &[DiscreteDist],
    trials: u64,
    seed: u64,
) -> Result<RandomReserveReport> {
    if bidders.is_empty() {
        return Err(Error::invalid("bidders", "need at least one bidder"));
    }
    if trials == 0 {
        return Err(Error::invalid("trials", "need at least one trial"));
    }
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for t in 0..trials {
        let mut rng = SplitMix64::new(derive_seed(seed, t));
        let mut reserve: f64 = 0.0;
        for d in bidders {
            reserve = reserve.max(d.sample_u01(rng.next_f64()));
        }
        let mut real: f64 = 0.0;
        for d in bidders {
            real = real.max(d.sample_u01(rng.next_f64()));
        }
        let rev = if real >= reserve { reserve } else { 0.0 };
        sum += rev;
        sum_sq += rev * rev;
    }
    let mean = sum / trials as f64;
    let var = (sum_sq / trials as f64 - mean * mean).max(0.0);
    let se = (var / trials as f64).sqrt();
    let brev0 = brev0_exact(bidders)?;
    Ok(RandomReserveReport {
        revenue: RevenueEstimate::monte_carlo(mean, trials, se, seed),
        brev0,
        pass: mean >= 0.5 * brev0 - 3.0 * se,
    })
}

/// Report of the reserve-vs-posted comparison over a price grid.
#[derive(Clone, Debug, Serialize)]
pub struct PricingCorollaryReport {
    /// max over the grid of the second-price-with-reserve revenue.
    pub best_auction: f64,
    /// max over the grid of the posted-price revenue.
    pub best_posted: f64,
    /// best_auction <= 3 * best_posted + 1e-9.
    pub pass: bool,
}

/// Check max_p BRev_p <= 3 max_p BPricingRev_p over the support price grid.
pub fn check_pricing_corollary(bidders: &[DiscreteDist]) -> Result<PricingCorollaryReport> {
    let mut grid: Vec<f64> = bidders
        .iter()
        .flat_map(|d| d.support().to_vec())
        .collect();
    grid.push(0.0);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let mut best_auction = f64::NEG_INFINITY;
    let mut best_posted = f64::NEG_INFINITY;
    for &p in &grid {
        best_auction = best_auction.max(second_price_reserve_rev(bidders, p)?);
        best_posted = best_posted.max(posted_price_rev(bidders, p)?);
    }
    Ok(PricingCorollaryReport {
        best_auction,
        best_posted,
        pass: best_auction <= 3.0 * best_posted + 1e-9,
    })
}

/// Zero-violation check of the per-profile split bound over a price grid.
pub fn check_split_per_profile(bidders: &[DiscreteDist]) -> Result<bool> {
    let mut grid: Vec<f64> = bidders
        .iter()
        .flat_map(|d| d.support().to_vec())
        .collect();
    grid.push(0.0);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    for &p in &grid {
        if second_price_reserve_outcome(bidders, p, true)?.split_violations > 0 {
            return Ok(false);
        }
    }
    Ok(true)
}
