//! Logarithmic separation constructions at desk scale: the reported ratio of
//! each experiment grows with the item count n.
//!
//! This demo sweeps n in {16, 64} with reduced Monte Carlo budgets; the full
//! acceptance-scale sweep ({16, 64, 256}, 1e5 trials) runs via the CLI:
//!
//! ```text
//! simplemech gaps --kind cor --ns 16,64,256 --seed 7 --out results.csv
//! ```

use simplemech::gaps::{results_to_csv, run_gap_experiment, GapConfig, GapKind};

fn main() {
    let cfg = GapConfig {
        sweep_trials: 2_000,
        final_trials: 20_000,
        ..GapConfig::default()
    };
    let ns = [16usize, 64];
    for kind in [GapKind::PrevMax, GapKind::Cor, GapKind::ManyIid] {
        let rows = run_gap_experiment(kind, &ns, 7, &cfg).unwrap();
        println!("{kind}:");
        for r in &rows {
            println!(
                "  n = {:>3}: srev = {:>9.4}, ratio = {:.4}   [{}]",
                r.n, r.srev.value, r.ratio, r.config_echo
            );
        }
    }

    let rows = run_gap_experiment(GapKind::Cor, &ns, 7, &cfg).unwrap();
    println!("\nCSV form:\n{}", results_to_csv(&rows));
}
