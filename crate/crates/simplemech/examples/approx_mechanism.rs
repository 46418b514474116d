//! The sampling-based choice between selling separately and bundling:
//! compute srev and the candidate bundle price p* = (2/5) of the core
//! welfare, estimate the sale probability at p* from seeded samples, then
//! bundle only when both the probability and revenue tests pass.
//!
//! ```text
//! cargo run --example approx_mechanism
//! ```

use simplemech::approx::{evaluate_decision, run_approx};
use simplemech::dist::{er_truncated_grid, DiscreteDist};
use simplemech::market::MarketInstance;

fn main() {
    // Two-item instance: bundling at p* cannot reach srev, so it sells separately.
    let ddt = MarketInstance::single_buyer(
        "ddt",
        vec![
            DiscreteDist::new(vec![(1.0, 0.5), (2.0, 0.5)]).unwrap(),
            DiscreteDist::new(vec![(1.0, 0.5), (3.0, 0.5)]).unwrap(),
        ],
    )
    .unwrap();
    let decision = run_approx(&ddt, 0.1, 42).unwrap();
    println!("{}:", ddt.label());
    println!(
        "  p* = {:.4}, q_hat = {:.4} ({} samples), choice = {:?}",
        decision.p_star, decision.q_hat, decision.samples_used, decision.choice
    );
    let eval = evaluate_decision(&decision, &ddt, 0.1).unwrap();
    println!(
        "  chosen revenue {:.4} vs optimal {:.4} (floor {:.4}): pass = {}",
        eval.chosen_revenue, eval.optimal_revenue, eval.floor, eval.pass
    );

    // Sixteen i.i.d. heavy-tailed items: the total concentrates well above
    // p* > srev, so the rule takes the bundle.
    let heavy = MarketInstance::single_buyer(
        "heavy16",
        vec![er_truncated_grid(16.0, 4).unwrap(); 16],
    )
    .unwrap();
    let decision = run_approx(&heavy, 0.1, 42).unwrap();
    println!("\n{}:", heavy.label());
    println!(
        "  srev = {:.4}, p* = {:.4}, q_hat = {:.4}, choice = {:?}, est revenue = {:.4}",
        decision.srev, decision.p_star, decision.q_hat, decision.choice, decision.est_revenue
    );
    let exact_q =
        simplemech::approx::exact_bundle_prob(&heavy.single_buyer_items().unwrap(), decision.p_star)
            .unwrap();
    println!(
        "  exact Pr[total >= p*] = {exact_q:.4}; posted revenue at p* = {:.4}",
        decision.p_star * exact_q
    );
}
