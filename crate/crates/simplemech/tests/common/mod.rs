//! Seeded corpora shared by the integration suites.
#![allow(dead_code)] // each test target compiles its own subset

use simplemech::dist::DiscreteDist;
use simplemech::market::{JointDist, MarketInstance};
use simplemech::rng::SplitMix64;

/// A random finite-support distribution with `1..=max_support` atoms and
/// values in (0, max_value].
pub fn random_dist(rng: &mut SplitMix64, max_support: usize, max_value: f64) -> DiscreteDist {
    let k = 1 + rng.next_below(max_support as u64) as usize;
    loop {
        let mut values: Vec<f64> = (0..k).map(|_| max_value * rng.next_f64()).collect();
        values.sort_by(f64::total_cmp);
        let distinct = values.windows(2).all(|w| w[1] - w[0] > 1e-6) && values[0] > 1e-6;
        if !distinct {
            continue;
        }
        let raw: Vec<f64> = (0..k).map(|_| 0.1 + rng.next_f64()).collect();
        let total: f64 = raw.iter().sum();
        let atoms: Vec<(f64, f64)> = values
            .into_iter()
            .zip(raw.into_iter().map(|p| p / total))
            .collect();
        return DiscreteDist::new(atoms).expect("random atoms are valid");
    }
}

/// A random single-buyer independent instance.
pub fn random_instance(
    rng: &mut SplitMix64,
    max_items: usize,
    max_support: usize,
    max_value: f64,
    label: &str,
) -> MarketInstance {
    let n = 1 + rng.next_below(max_items as u64) as usize;
    let items: Vec<DiscreteDist> = (0..n)
        .map(|_| random_dist(rng, max_support, max_value))
        .collect();
    MarketInstance::single_buyer(label, items).expect("valid instance")
}

/// The seeded corpus used by the constant-factor, decomposition and sampling
/// suites: single-buyer instances with n <= 3 items, supports <= 3, values in
/// (0, 10].
pub fn small_corpus(count: usize, seed: u64) -> Vec<MarketInstance> {
    let mut rng = SplitMix64::new(seed);
    (0..count)
        .map(|i| random_instance(&mut rng, 3, 3, 10.0, &format!("corpus_{i}")))
        .collect()
}

/// Random correlated joints with n in {2, 3} and a handful of support rows.
pub fn joint_corpus(count: usize, seed: u64) -> Vec<JointDist> {
    let mut rng = SplitMix64::new(seed);
    (0..count)
        .map(|_| {
            let n = 2 + rng.next_below(2) as usize;
            let rows = 2 + rng.next_below(5) as usize;
            loop {
                let mut raw: Vec<(Vec<f64>, f64)> = Vec::with_capacity(rows);
                let mut mass = 0.0;
                for _ in 0..rows {
                    let v: Vec<f64> = (0..n).map(|_| 10.0 * rng.next_f64()).collect();
                    let p = 0.1 + rng.next_f64();
                    mass += p;
                    raw.push((v, p));
                }
                let rows_norm: Vec<(Vec<f64>, f64)> = raw
                    .into_iter()
                    .map(|(v, p)| (v, p / mass))
                    .collect();
                // Skip degenerate all-tiny joints where srev ~ 0.
                if rows_norm
                    .iter()
                    .any(|(v, _)| v.iter().any(|&x| x > 0.5))
                {
                    return JointDist::new(rows_norm, 1e-9).expect("valid joint");
                }
            }
        })
        .collect()
}

/// Random i.i.d. bidder populations for the pricing suite: supports <= 4,
/// m in {2, 3}.
pub fn iid_bidder_corpus(count: usize, seed: u64) -> Vec<(DiscreteDist, usize)> {
    let mut rng = SplitMix64::new(seed);
    (0..count)
        .map(|_| {
            let d = random_dist(&mut rng, 4, 10.0);
            let m = 2 + rng.next_below(2) as usize;
            (d, m)
        })
        .collect()
}
