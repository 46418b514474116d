//! Many i.i.d. uniform items: per-item pricing earns ~n/4, while a single
//! posted price on the grand bundle approaches n/2 as the total concentrates.
//!
//! ```text
//! cargo run --example uniform_bundling
//! ```

use simplemech::benchmarks::{brev, srev};
use simplemech::dist::{uniform_grid, DiscreteDist};
use simplemech::market::MarketInstance;
use simplemech::single_item::monopoly_price;

fn main() {
    for n in [2usize, 4, 8, 16] {
        let item = uniform_grid(0.0, 1.0, 200).unwrap();
        let inst = MarketInstance::single_buyer(format!("uniform_{n}"), vec![item.clone(); n])
            .unwrap();
        let s = srev(&inst).unwrap().value;
        let b = brev(&inst).unwrap().value;

        // Where the optimal bundle price sits relative to the mean n/2.
        let mut total = DiscreteDist::point_mass(0.0);
        for _ in 0..n {
            total = total.convolve(&item).unwrap();
        }
        let (price, _) = monopoly_price(&total);
        println!(
            "n = {n:>2}: srev = {s:>7.4} (~n/4 = {:.2}), brev = {b:>7.4} (n/2 = {:.1}), \
             bundle price = {price:.3}, brev/srev = {:.4}",
            n as f64 / 4.0,
            n as f64 / 2.0,
            b / s
        );
    }

    println!("\nrevenue of a posted grand-bundle price, n = 16:");
    let item = uniform_grid(0.0, 1.0, 200).unwrap();
    let mut total = DiscreteDist::point_mass(0.0);
    for _ in 0..16 {
        total = total.convolve(&item).unwrap();
    }
    for price in [4.0, 5.0, 6.0, 6.445, 7.0, 8.0] {
        println!(
            "  price {price:>5.3}: sells w.p. {:.4}, revenue {:.4}",
            total.pr_geq(price),
            price * total.pr_geq(price)
        );
    }
}
