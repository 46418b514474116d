//! Menu LP behavior on joints larger than the usual corpora.

mod common;

use simplemech::benchmarks::{brev, srev};
use simplemech::menu_lp::rev_lp_instance;
use simplemech::rng::SplitMix64;

#[test]
fn lp_handles_mid_size_joints() {
    // 4-atom supports over 2-3 items: up to 64 types. Larger menus solve too
    // (48 types ~ half a minute) but stay out of the routine suite.
    let mut rng = SplitMix64::new(77);
    for trial in 0..8 {
        let n = 2 + (trial % 2);
        let items: Vec<_> = (0..n)
            .map(|_| common::random_dist(&mut rng, 4, 10.0))
            .collect();
        let inst =
            simplemech::market::MarketInstance::single_buyer(format!("mid{trial}"), items).unwrap();
        let menu = rev_lp_instance(&inst).unwrap();
        let s = srev(&inst).unwrap().value;
        let b = brev(&inst).unwrap().value;
        assert!(menu.objective >= s.max(b) - 1e-6, "trial {trial}");
        assert!(menu.objective <= 6.0 * s.max(b) + 1e-6, "trial {trial}");
        menu.certify(1e-7).unwrap();
    }
}
