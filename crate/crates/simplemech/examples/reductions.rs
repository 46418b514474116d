//! Reductions used by the correlated bundling bound: force all value vectors
//! to sum to the optimal bundle price, then symmetrize the coordinates; both
//! steps only push the BRev/SRev ratio upward, so the extremal instances are
//! symmetric point-mass-in-sum distributions.
//!
//! ```text
//! cargo run --example reductions
//! ```

use simplemech::dist::DiscreteDist;
use simplemech::market::MarketInstance;
use simplemech::reductions::{
    brev_joint, check_cor_bound, check_pointmass_welfare_bound, srev_joint, symmetrize,
    to_pointmass_in_sum,
};

fn main() {
    let inst = MarketInstance::single_buyer(
        "ddt",
        vec![
            DiscreteDist::new(vec![(1.0, 0.5), (2.0, 0.5)]).unwrap(),
            DiscreteDist::new(vec![(1.0, 0.5), (3.0, 0.5)]).unwrap(),
        ],
    )
    .unwrap();
    let joint = inst.to_joint(512).unwrap();

    let ratio = |j: &simplemech::market::JointDist| {
        brev_joint(j).unwrap() / srev_joint(j).unwrap()
    };
    println!("start: brev/srev = {:.5}", ratio(&joint));

    let red = to_pointmass_in_sum(&joint).unwrap();
    println!("\npoint-mass-in-sum at bundle price {}:", red.bundle_price);
    for (v, p) in red.d_prime.rows() {
        println!("  {v:?} w.p. {p:.4}");
    }
    println!("ratio after conditioning: {:.5}", ratio(&red.d_prime));

    let sym = symmetrize(&red.d_prime).unwrap();
    println!("\nsymmetrized ({} support rows):", sym.len());
    for (v, p) in sym.rows() {
        println!("  {v:?} w.p. {p:.4}");
    }
    println!("ratio after symmetrizing: {:.5}", ratio(&sym));

    let bound = check_cor_bound(&joint).unwrap();
    println!(
        "\nbundle bound on the original joint: brev {:.4} <= 5 ln(n) srev = {:.4}: {}",
        bound.brev, bound.bound, bound.pass
    );
    let welfare = check_pointmass_welfare_bound(&sym).unwrap();
    println!(
        "welfare self-bound on the symmetric point-mass joint: p = {:.4} <= n + n ln p = {:.4}: {}",
        welfare.welfare, welfare.bound, welfare.pass
    );
}
