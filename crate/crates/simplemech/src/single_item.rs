//! Single-item revenue machinery: monopoly pricing, quantile revenue curves,
//! ironed virtual values, and the exact optimal auction revenue for
//! independent bidders.
//!
//! The optimal revenue of selling one item to independent bidders is
//! E[max(0, max_j phibar_j(v_j))], where phibar_j is bidder j's ironed virtual
//! value: the slope of the upper concave envelope of the quantile-space
//! revenue curve. This module computes that expectation exactly by folding the
//! per-bidder distributions of phibar under max, which avoids enumerating the
//! full value-profile product.

use crate::dist::{neumaier_sum_iter, DiscreteDist, VALUE_MERGE_TOL};
use crate::error::{Error, Result};
use crate::market::RevenueEstimate;

/// Cap on the merged support size of intermediate max-folds.
pub const FOLD_SUPPORT_CAP: u64 = 1_000_000;

/// Default cap on profile products for exact profile enumeration.
pub const PROFILE_PRODUCT_CAP: u64 = 1_000_000;

/// Revenue curve in quantile space: points (q, q * price) where q = Pr[v >= price],
/// one per support atom plus the endpoint (0, 0).
#[derive(Clone, Debug)]
pub struct RevenueCurve {
    points: Vec<(f64, f64)>,
}

impl RevenueCurve {
    /// Points (q, revenue) in strictly increasing q order, starting at (0, 0).
    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }
}

/// Ironed virtual values of a distribution: per-atom slopes of the upper
/// concave envelope of its revenue curve.
#[derive(Clone, Debug)]
pub struct IronedVirtuals {
    /// Support values, ascending (parallel to the source distribution).
    pub values: Vec<f64>,
    /// Ironed virtual value phibar(v) per atom; nondecreasing in v.
    pub phi: Vec<f64>,
    /// True for atoms lying inside an ironed (flattened) interval.
    pub ironed: Vec<bool>,
    /// Vertices (q, value) of the upper concave envelope.
    pub envelope: Vec<(f64, f64)>,
}

impl IronedVirtuals {
    /// Envelope height at quantile q (linear interpolation between vertices).
    pub fn envelope_at(&self, q: f64) -> f64 {
        let pts = &self.envelope;
        if q <= pts[0].0 {
            return pts[0].1;
        }
        for w in pts.windows(2) {
            let (q0, r0) = w[0];
            let (q1, r1) = w[1];
            if q <= q1 {
                return r0 + (r1 - r0) * (q - q0) / (q1 - q0);
            }
        }
        pts.last().unwrap().1
    }
}

/// Monopoly (Myerson) price of a single-bidder distribution.
///
/// Returns (price, revenue) where price is a support atom maximizing
/// p * Pr[v >= p]; ties break toward the lowest such price.
pub fn monopoly_price(d: &DiscreteDist) -> (f64, f64) {
    // Suffix-sum the tail from the top so prices deep in a thin tail keep
    // full relative precision (mass there can be many orders below 1).
    let mut best_price = d.max_value();
    let mut best_rev = f64::NEG_INFINITY;
    let mut tail = 0.0;
    for i in (0..d.len()).rev() {
        tail += d.probs()[i];
        let rev = d.support()[i] * tail;
        if rev >= best_rev {
            best_rev = rev;
            best_price = d.support()[i];
        }
    }
    (best_price, best_rev)
}

/// Quantile-space revenue curve of a distribution.
pub fn revenue_curve(d: &DiscreteDist) -> RevenueCurve {
    // Suffix sums give q_i = Pr[v >= v_i]; the highest atom has the smallest q.
    let n = d.len();
    let mut q = vec![0.0f64; n];
    let mut acc = 0.0;
    for i in (0..n).rev() {
        acc += d.probs()[i];
        q[i] = acc;
    }
    let mut points = Vec::with_capacity(n + 1);
    points.push((0.0, 0.0));
    for i in (0..n).rev() {
        points.push((q[i], q[i] * d.support()[i]));
    }
    RevenueCurve { points }
}

/// Ironed virtual values: slopes of the upper concave envelope of the revenue
/// curve, one per atom.
pub fn ironed_virtuals(d: &DiscreteDist) -> IronedVirtuals {
    let curve = revenue_curve(d);
    let pts = curve.points();
    // Upper hull by monotone chain; abscissae are strictly increasing.
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for &p in pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // Keep b only if it lies strictly above chord a->p.
            if (b.0 - a.0) * (p.1 - a.1) >= (p.0 - a.0) * (b.1 - a.1) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }

    let n = d.len();
    // Atom i (ascending value) corresponds to curve point n - i; its quantile
    // interval is [q_{i+1}, q_i] with q_{n} := 0 handled by point index order.
    let mut phi = vec![0.0f64; n];
    let mut ironed = vec![false; n];
    let mut hull_seg = 0usize; // index of the hull vertex starting the current segment
    // Walk curve points left to right (increasing q), assigning slopes.
    // Curve point k (k >= 1) covers atom index n - k.
    for k in 1..pts.len() {
        let q = pts[k].0;
        while hull_seg + 1 < hull.len() && hull[hull_seg + 1].0 < q - 1e-15 {
            hull_seg += 1;
        }
        let (q0, r0) = hull[hull_seg];
        let (q1, r1) = hull[hull_seg + 1];
        let slope = (r1 - r0) / (q1 - q0);
        let atom = n - k;
        phi[atom] = slope;
        // Ironed when the original point sits strictly below the envelope or
        // the segment spans more than one atom gap.
        let env_here = r0 + slope * (q - q0);
        if env_here > pts[k].1 + 1e-12 || (q1 - q0) > (pts[k].0 - pts[k - 1].0) + 1e-12 {
            ironed[atom] = true;
        }
    }
    IronedVirtuals {
        values: d.support().to_vec(),
        phi,
        ironed,
        envelope: hull,
    }
}

/// Distribution of the ironed virtual value of a bidder, as raw
/// (phibar, probability) atoms in ascending phibar order (equal values merged).
fn phi_dist(d: &DiscreteDist) -> Vec<(f64, f64)> {
    let iv = ironed_virtuals(d);
    let mut atoms: Vec<(f64, f64)> = iv
        .phi
        .iter()
        .copied()
        .zip(d.probs().iter().copied())
        .collect();
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    merge_raw(atoms)
}

fn merge_raw(sorted: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(sorted.len());
    for (v, p) in sorted {
        match out.last_mut() {
            Some((lv, lp)) if v - *lv <= VALUE_MERGE_TOL => *lp += p,
            _ => out.push((v, p)),
        }
    }
    out
}

/// Max-fold of two raw sorted atom lists (distribution of the maximum).
fn max_fold(a: &[(f64, f64)], b: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut values: Vec<f64> = a.iter().chain(b).map(|&(v, _)| v).collect();
    values.sort_by(f64::total_cmp);
    values.dedup_by(|x, y| *x - *y <= VALUE_MERGE_TOL);
    let mut out = Vec::with_capacity(values.len());
    let (mut ia, mut ib) = (0usize, 0usize);
    let (mut ca, mut cb) = (0.0f64, 0.0f64);
    let mut prev = 0.0f64;
    for &z in &values {
        while ia < a.len() && a[ia].0 <= z + VALUE_MERGE_TOL {
            ca += a[ia].1;
            ia += 1;
        }
        while ib < b.len() && b[ib].0 <= z + VALUE_MERGE_TOL {
            cb += b[ib].1;
            ib += 1;
        }
        let cur = ca * cb;
        if cur - prev > 0.0 {
            out.push((z, cur - prev));
        }
        prev = cur;
    }
    out
}

/// Exact optimal revenue of selling one item to independent bidders via
/// Myerson's optimal auction.
///
/// Equals E[max(0, max_j phibar_j(v_j))] over the value-profile product; ties
/// among maximal ironed virtuals are revenue-irrelevant (any tie split yields
/// the same expectation). A single bidder reduces to the monopoly revenue.
pub fn optimal_item_rev(bidders: &[DiscreteDist]) -> Result<RevenueEstimate> {
    if bidders.is_empty() {
        return Err(Error::invalid("bidders", "need at least one bidder"));
    }
    if bidders.len() == 1 {
        return Ok(RevenueEstimate::exact(monopoly_price(&bidders[0]).1));
    }
    let mut folded = phi_dist(&bidders[0]);
    for b in &bidders[1..] {
        folded = max_fold(&folded, &phi_dist(b));
        if folded.len() as u64 > FOLD_SUPPORT_CAP {
            return Err(Error::SizeCap {
                what: "ironed-virtual fold support",
                size: folded.len() as u64,
                cap: FOLD_SUPPORT_CAP,
            });
        }
    }
    let rev = neumaier_sum_iter(folded.iter().map(|&(v, p)| v.max(0.0) * p));
    Ok(RevenueEstimate::exact(rev))
}

/// Revenue of posting price `p` on the item: p * Pr[max_j v_j >= p].
///
/// The item goes to any bidder willing to pay, so no competition rent accrues.
pub fn posted_price_rev(bidders: &[DiscreteDist], p: f64) -> Result<f64> {
    if p < 0.0 {
        return Err(Error::invalid("p", format!("price must be >= 0, got {p}")));
    }
    let pr_all_below: f64 = bidders.iter().map(|d| 1.0 - d.pr_geq(p)).product();
    Ok(p * (1.0 - pr_all_below))
}

/// Outcome of an exact second-price-with-reserve computation.
#[derive(Clone, Debug)]
pub struct SecondPriceOutcome {
    /// Expected revenue of the second-price auction with the given reserve.
    pub revenue: f64,
    /// Number of enumerated profiles violating the per-profile split bound
    /// sp_reserve <= posted + sp_no_reserve (0 when the check is off or holds).
    pub split_violations: u64,
    /// Number of profiles enumerated.
    pub profiles: u64,
}

/// Exact expected revenue of a second-price auction with reserve `p`,
/// enumerated over the full value-profile product.
pub fn second_price_reserve_rev(bidders: &[DiscreteDist], p: f64) -> Result<f64> {
    Ok(second_price_reserve_outcome(bidders, p, false)?.revenue)
}

/// As [`second_price_reserve_rev`], optionally asserting the per-profile
/// split bound sp_p <= posted_p + sp_0 on every enumerated profile.
pub fn second_price_reserve_outcome(
    bidders: &[DiscreteDist],
    p: f64,
    check_split: bool,
) -> Result<SecondPriceOutcome> {
    if p < 0.0 {
        return Err(Error::invalid("p", format!("reserve must be >= 0, got {p}")));
    }
    if bidders.is_empty() {
        return Err(Error::invalid("bidders", "need at least one bidder"));
    }
    let mut product: u64 = 1;
    for d in bidders {
        product = product.saturating_mul(d.len() as u64);
        if product > PROFILE_PRODUCT_CAP {
            return Err(Error::SizeCap {
                what: "profile product",
                size: product,
                cap: PROFILE_PRODUCT_CAP,
            });
        }
    }
    let mut idx = vec![0usize; bidders.len()];
    let mut terms: Vec<f64> = Vec::with_capacity(product as usize);
    let mut violations = 0u64;
    loop {
        let mut prob = 1.0f64;
        let mut top = f64::NEG_INFINITY;
        let mut second = f64::NEG_INFINITY;
        for (j, d) in bidders.iter().enumerate() {
            let v = d.support()[idx[j]];
            prob *= d.probs()[idx[j]];
            if v > top {
                second = top;
                top = v;
            } else if v > second {
                second = v;
            }
        }
        if second == f64::NEG_INFINITY {
            second = 0.0; // single bidder: pays the reserve alone
        }
        let sp_reserve = if top >= p { p.max(second) } else { 0.0 };
        if check_split {
            let posted = if top >= p { p } else { 0.0 };
            let sp_zero = second;
            if sp_reserve > posted + sp_zero + 1e-12 {
                violations += 1;
            }
        }
        terms.push(prob * sp_reserve);

        // advance the mixed-radix profile counter
        let mut j = 0;
        loop {
            if j == bidders.len() {
                let revenue = neumaier_sum_iter(terms.into_iter());
                return Ok(SecondPriceOutcome {
                    revenue,
                    split_violations: violations,
                    profiles: product,
                });
            }
            idx[j] += 1;
            if idx[j] < bidders[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}
