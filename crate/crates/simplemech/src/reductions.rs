//! Distribution transformations behind the correlated bundling-vs-separate
//! bound: forcing the value sum onto a point mass at the optimal bundle price,
//! and symmetrizing coordinates by random permutation. Both transformations
//! never decrease the BRev/SRev ratio, which reduces the general bound
//! BRev <= 5 ln(n) SRev to symmetric point-mass-in-sum distributions.

use serde::Serialize;

use crate::dist::neumaier_sum_iter;
use crate::error::{Error, Result};
use crate::market::JointDist;
use crate::single_item::monopoly_price;

/// Budget on n! * |support| for the permutation expansion.
pub const SYMMETRIZE_BUDGET: u64 = 10_000_000;

/// SRev of a correlated single-buyer joint: sum of marginal monopoly revenues.
pub fn srev_joint(joint: &JointDist) -> Result<f64> {
    let mut total = 0.0;
    for i in 0..joint.n_items() {
        total += monopoly_price(&joint.marginal(i)?).1;
    }
    Ok(total)
}

/// BRev of a correlated single-buyer joint: monopoly revenue of the sum.
pub fn brev_joint(joint: &JointDist) -> Result<f64> {
    Ok(monopoly_price(&joint.total_sum()?).1)
}

/// Result of the point-mass-in-sum transformation.
#[derive(Clone, Debug)]
pub struct PointMassReduction {
    /// The optimal grand-bundle price of the input.
    pub bundle_price: f64,
    /// Intermediate distribution: sums above the price lowered onto it,
    /// sums below it zeroed out.
    pub d_double_prime: JointDist,
    /// Final distribution: the intermediate conditioned on sum = price.
    pub d_prime: JointDist,
}

/// Transform a joint into a point-mass-in-sum distribution without decreasing
/// BRev/SRev.
///
/// Types whose coordinates sum beyond the optimal bundle price are lowered
/// coordinate by coordinate in decreasing-value order (ties by index) until
/// the sum hits the price; types below it are zeroed. The final distribution
/// conditions on the sum equaling the price.
pub fn to_pointmass_in_sum(joint: &JointDist) -> Result<PointMassReduction> {
    let sum_dist = joint.total_sum()?;
    let (price, brev) = monopoly_price(&sum_dist);
    if brev <= 0.0 {
        return Err(Error::Precondition(
            "bundle revenue is zero; nothing to condition on".into(),
        ));
    }
    let n = joint.n_items();
    // The price is itself a support sum; classify against it with a tolerance
    // so the defining row cannot fall on the wrong side by a rounding ulp.
    let tol = 1e-9 * price.max(1.0);
    let mut rows_double = Vec::with_capacity(joint.len());
    for (v, p) in joint.rows() {
        let sum: f64 = neumaier_sum_iter(v.iter().copied());
        let new_v = if sum < price - tol {
            vec![0.0; n]
        } else if sum > price + tol {
            lower_to_sum(v, price)
        } else {
            v.to_vec()
        };
        rows_double.push((new_v, p));
    }
    let d_double_prime = JointDist::new(rows_double, 1e-9)?;
    let kept: Vec<(Vec<f64>, f64)> = d_double_prime
        .rows()
        .filter(|(v, _)| (neumaier_sum_iter(v.iter().copied()) - price).abs() <= tol)
        .map(|(v, p)| (v.to_vec(), p))
        .collect();
    let mass: f64 = kept.iter().map(|(_, p)| p).sum();
    if mass <= 0.0 {
        return Err(Error::Precondition(
            "no support mass reaches the bundle price".into(),
        ));
    }
    let d_prime = JointDist::new(
        kept.into_iter().map(|(v, p)| (v, p / mass)).collect(),
        1e-9,
    )?;
    Ok(PointMassReduction {
        bundle_price: price,
        d_double_prime,
        d_prime,
    })
}

/// Lower coordinates in decreasing-value order (ties by index) until the
/// vector sums to `target`.
fn lower_to_sum(v: &[f64], target: f64) -> Vec<f64> {
    let mut out = v.to_vec();
    let mut excess = neumaier_sum_iter(v.iter().copied()) - target;
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[b].total_cmp(&v[a]).then(a.cmp(&b)));
    for idx in order {
        if excess <= 0.0 {
            break;
        }
        let delta = out[idx].min(excess);
        out[idx] -= delta;
        excess -= delta;
    }
    out
}

/// Symmetrize a joint by mixing over all coordinate permutations uniformly.
pub fn symmetrize(joint: &JointDist) -> Result<JointDist> {
    let n = joint.n_items();
    let mut n_fact: u64 = 1;
    for k in 2..=n as u64 {
        n_fact = n_fact.saturating_mul(k);
    }
    let expanded = n_fact.saturating_mul(joint.len() as u64);
    if expanded > SYMMETRIZE_BUDGET {
        return Err(Error::SizeCap {
            what: "permutation expansion",
            size: expanded,
            cap: SYMMETRIZE_BUDGET,
        });
    }
    let perms = permutations(n);
    let weight = 1.0 / perms.len() as f64;
    let mut rows = Vec::with_capacity(joint.len() * perms.len());
    for (v, p) in joint.rows() {
        for perm in &perms {
            let permuted: Vec<f64> = perm.iter().map(|&i| v[i]).collect();
            rows.push((permuted, p * weight));
        }
    }
    JointDist::new(rows, 1e-9)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    // Heap's algorithm.
    let mut items: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k.is_multiple_of(2) {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut items, &mut out);
    out
}

/// Report of the correlated bundling bound BRev <= 5 ln(n) SRev.
#[derive(Clone, Debug, Serialize)]
pub struct CorBoundReport {
    /// Item count.
    pub n: usize,
    /// Sum of marginal monopoly revenues.
    pub srev: f64,
    /// Monopoly revenue of the value sum.
    pub brev: f64,
    /// 5 ln(n) srev.
    pub bound: f64,
    /// brev <= bound + 1e-6.
    pub pass: bool,
}

/// Check BRev <= 5 ln(n) SRev on a correlated joint (n >= 2).
pub fn check_cor_bound(joint: &JointDist) -> Result<CorBoundReport> {
    let n = joint.n_items();
    if n < 2 {
        return Err(Error::Precondition("bound needs n >= 2".into()));
    }
    let srev = srev_joint(joint)?;
    let brev = brev_joint(joint)?;
    let bound = 5.0 * (n as f64).ln() * srev;
    Ok(CorBoundReport {
        n,
        srev,
        brev,
        bound,
        pass: brev <= bound + 1e-6,
    })
}

/// Report of the welfare self-bound for symmetric point-mass-in-sum joints.
#[derive(Clone, Debug, Serialize)]
pub struct PointMassWelfareReport {
    /// The common coordinate sum after scaling SRev to n.
    pub welfare: f64,
    /// n + n ln(welfare).
    pub bound: f64,
    /// welfare <= bound + 1e-9.
    pub pass: bool,
}

/// For a point-mass-in-sum joint, rescale so SRev = n and check that the
/// common sum p satisfies p <= n + n ln p.
pub fn check_pointmass_welfare_bound(joint: &JointDist) -> Result<PointMassWelfareReport> {
    let n = joint.n_items() as f64;
    let sums: Vec<f64> = joint
        .rows()
        .map(|(v, _)| neumaier_sum_iter(v.iter().copied()))
        .collect();
    let p0 = sums[0];
    if sums.iter().any(|&s| (s - p0).abs() > 1e-9 * p0.max(1.0)) {
        return Err(Error::Precondition(
            "joint is not point-mass in sum".into(),
        ));
    }
    let srev = srev_joint(joint)?;
    if srev <= 0.0 {
        return Err(Error::Precondition("srev is zero".into()));
    }
    let welfare = p0 * n / srev; // scale values by n / srev
    Ok(PointMassWelfareReport {
        welfare,
        bound: n + n * welfare.ln(),
        pass: welfare <= n + n * welfare.ln() + 1e-9,
    })
}
