//! The two-item instance with the largest known gap between the optimal
//! mechanism and the better of selling separately / grand bundling:
//! item 1 uniform on {1, 2}, item 2 uniform on {1, 3}.
//!
//! ```text
//! cargo run --example ddt_analysis
//! ```

use simplemech::benchmarks::{brev, prev_exact, srev};
use simplemech::dist::DiscreteDist;
use simplemech::market::MarketInstance;
use simplemech::menu_lp::rev_lp_instance;

fn main() {
    let inst = MarketInstance::single_buyer(
        "ddt",
        vec![
            DiscreteDist::new(vec![(1.0, 0.5), (2.0, 0.5)]).unwrap(),
            DiscreteDist::new(vec![(1.0, 0.5), (3.0, 0.5)]).unwrap(),
        ],
    )
    .unwrap();

    let s = srev(&inst).unwrap().value;
    let b = brev(&inst).unwrap().value;
    let (p, best_partition) = prev_exact(&inst).unwrap();
    let menu = rev_lp_instance(&inst).unwrap();

    println!("instance: {} ({} items)", inst.label(), inst.n_items());
    println!("  selling separately   srev = {s}");
    println!("  grand bundle         brev = {b}");
    println!(
        "  best partition       prev = {} via {:?}",
        p.value,
        best_partition.blocks()
    );
    println!("  optimal mechanism    rev  = {}", menu.objective);
    println!(
        "  rev / max(srev, brev) = {:.6}  (the best known lower bound on that gap)",
        menu.objective / s.max(b)
    );

    println!("\noptimal menu (type -> allocation, payment):");
    for t in 0..menu.types.len() {
        println!(
            "  v = {:?}  ->  x = {:?}, pay = {:.4}",
            menu.types[t],
            menu.alloc[t].iter().map(|a| (a * 1e4).round() / 1e4).collect::<Vec<_>>(),
            menu.pay[t]
        );
    }

    // The same instance as the CLI consumes it.
    println!("\ninstance JSON:\n{}", inst.to_json());
}
