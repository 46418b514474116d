//! Posted-price machinery for i.i.d. bidders: the per-profile split bound,
//! the random-reserve scheme against half the no-reserve auction revenue,
//! merging priced sets (BUNDLE), splitting them (SHATTER), and the
//! conditional-tail inequality.
//!
//! ```text
//! cargo run --example pricing_toolbox
//! ```

use simplemech::dist::{er_truncated, DiscreteDist};
use simplemech::pricing::{
    bundle_combine, check_brendan, check_pricing_corollary, check_random_reserve_exact,
    check_split_per_profile, purchase_prob, random_reserve_sim, shatter, PricingScheme,
};
use simplemech::single_item::monopoly_price;

fn main() {
    let u12 = DiscreteDist::new(vec![(1.0, 0.5), (2.0, 0.5)]).unwrap();

    // Per-profile split bound and the factor-3 corollary, two i.i.d. bidders.
    let bidders = vec![u12.clone(), u12.clone()];
    println!(
        "split bound holds on every profile: {}",
        check_split_per_profile(&bidders).unwrap()
    );
    let corollary = check_pricing_corollary(&bidders).unwrap();
    println!(
        "best auction {:.4} <= 3 x best posted {:.4}: {}",
        corollary.best_auction, corollary.best_posted, corollary.pass
    );

    // Random-reserve pricing: exact on small supports, simulated on larger.
    let report = check_random_reserve_exact(&bidders).unwrap();
    println!(
        "random reserve (exact): revenue {:.4} vs BRev_0 {:.4} -> at least half: {}",
        report.revenue.value, report.brev0, report.pass
    );
    let er_bidders = vec![er_truncated(8.0).unwrap(); 3];
    let sim = random_reserve_sim(&er_bidders, 100_000, 7).unwrap();
    println!(
        "random reserve (simulated, 3 heavy-tail bidders): {:.4} +- {:.4} vs BRev_0/2 = {:.4}",
        sim.revenue.value,
        sim.revenue.std_error,
        sim.brev0 / 2.0
    );

    // BUNDLE: merge two singleton schemes into one priced bundle.
    let consumer = vec![u12.clone(), DiscreteDist::new(vec![(1.0, 0.5), (3.0, 0.5)]).unwrap()];
    let schemes = vec![
        PricingScheme::new(vec![0], 1.0).unwrap(),
        PricingScheme::new(vec![1], 1.0).unwrap(),
    ];
    let c1 = schemes
        .iter()
        .map(|s| purchase_prob(&consumer, s).unwrap())
        .fold(f64::INFINITY, f64::min);
    let combined = bundle_combine(&schemes, &consumer, c1).unwrap();
    println!(
        "\nBUNDLE: price {:.4} on {:?}, exact revenue {:.4} >= guarantee {:.4} \
         (realized-c reading {:.4})",
        combined.combined.price,
        combined.combined.items,
        combined.exact_revenue,
        combined.guarantee,
        combined.guarantee_realized_c
    );

    // SHATTER: a priced set falls back to per-item monopoly prices.
    let bundle_sum = simplemech::pricing::set_value_dist(&consumer, &[0, 1]).unwrap();
    let (bundle_price, _) = monopoly_price(&bundle_sum);
    let shattered = shatter(&PricingScheme::new(vec![0, 1], bundle_price).unwrap(), &consumer).unwrap();
    println!(
        "SHATTER at bundle price {bundle_price}: per-item revenues {:?}, total {:.4}",
        shattered.per_item_revenue, shattered.total
    );

    // Conditional-tail inequality at the bundle monopoly price.
    let report = check_brendan(&consumer, &[0, 1], bundle_price, 0..=3).unwrap();
    println!(
        "conditional-tail inequality: q = {:.4}, vacuous = {}, all {} cases pass = {}",
        report.q,
        report.vacuous,
        report.cases.len(),
        report.pass
    );
}
