//! Core-tail decomposition of a single-buyer instance.
//!
//! Each item's distribution is split at a threshold t_i * r_i (r_i = its
//! monopoly revenue) into a core (values below) and a tail (values above).
//! Thresholds come in three flavors: uniform t_i = c*n, the amplification
//! variant t_i = c*a*n, and revenue-adaptive t_i = c*r/r_i, under which with
//! c = 1 every threshold equals r = SRev. The checks in this module certify,
//! instance by instance, the inequalities that the decomposition supports:
//! the tail-probability bound p_i <= 1/t_i, the per-part revenue bounds
//! Rev(core_i) <= r_i and Rev(tail_i) <= r_i/p_i, the decomposition bound
//! Rev(D) <= Welfare(core) + sum_A p_A Rev(tail_A), the mode-specific tail
//! and core-welfare bounds, the variance bound for revenue-capped supports,
//! and the welfare-concentration dichotomy for many buyers.

use serde::Serialize;

use crate::dist::{DiscreteDist, VALUE_MERGE_TOL};
use crate::error::{Error, Result};
use crate::market::MarketInstance;
use crate::menu_lp::{rev_lp_instance, rev_lp_product};
use crate::single_item::{monopoly_price, optimal_item_rev};

/// Largest number of positive-tail-probability items for exact subset
/// enumeration of tail events.
pub const TAIL_SUBSET_CAP: usize = 16;

/// Support cap when folding buyer maxima and item-welfare convolutions.
pub const WELFARE_SUPPORT_CAP: u64 = 1_000_000;

/// Threshold mode for a core-tail split.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum SplitMode {
    /// t_i = c * n for every item.
    UniformCn {
        /// Scale parameter c > 0.
        c: f64,
    },
    /// t_i = c * a * n for every item (amplification form).
    UniformCan {
        /// Scale parameter c >= 1.
        c: f64,
        /// Amplification parameter a > 1.
        a: f64,
    },
    /// t_i = c * r / r_i; with c = 1 all thresholds equal r.
    Adaptive {
        /// Scale parameter c > 0.
        c: f64,
    },
}

/// A core-tail split of a single-buyer independent instance.
#[derive(Clone, Debug)]
pub struct CoreTailSplit {
    /// Threshold mode.
    pub mode: SplitMode,
    /// Original per-item distributions.
    pub items: Vec<DiscreteDist>,
    /// Per-item monopoly revenues r_i.
    pub r_i: Vec<f64>,
    /// r = sum_i r_i = SRev of the instance.
    pub r: f64,
    /// Per-item threshold multipliers t_i.
    pub t_i: Vec<f64>,
    /// Per-item thresholds t_i * r_i.
    pub thresholds: Vec<f64>,
    /// Tail probabilities `p_i = Pr[v_i > t_i r_i]`.
    pub p_i: Vec<f64>,
    /// Core conditional distributions (None when p_i = 1).
    pub core: Vec<Option<DiscreteDist>>,
    /// Tail conditional distributions (None when p_i = 0).
    pub tail: Vec<Option<DiscreteDist>>,
}

impl CoreTailSplit {
    /// Number of items.
    pub fn n_items(&self) -> usize {
        self.items.len()
    }

    /// Total welfare of the core product: sum of non-null core means.
    pub fn core_welfare(&self) -> f64 {
        self.core.iter().flatten().map(|d| d.mean()).sum()
    }

    /// p_i <= 1/t_i + 1e-12 for every item.
    pub fn ly1_holds(&self) -> bool {
        self.p_i
            .iter()
            .zip(&self.t_i)
            .all(|(&p, &t)| p <= 1.0 / t + 1e-12)
    }
}

/// One tail event: the subset A of items whose value landed in the tail.
#[derive(Clone, Debug, Serialize)]
pub struct TailEvent {
    /// Item indices in A, ascending.
    pub items: Vec<usize>,
    /// Probability (prod_{i in A} p_i)(prod_{i not in A} (1 - p_i)).
    pub p_a: f64,
}

/// Build a core-tail split of a single-buyer independent instance.
pub fn build_split(inst: &MarketInstance, mode: SplitMode) -> Result<CoreTailSplit> {
    let items = inst.single_buyer_items()?;
    split_items(items, mode)
}

fn split_items(items: Vec<DiscreteDist>, mode: SplitMode) -> Result<CoreTailSplit> {
    let n = items.len();
    let r_i: Vec<f64> = items.iter().map(|d| monopoly_price(d).1).collect();
    let r: f64 = r_i.iter().sum();
    let (t_i, thresholds): (Vec<f64>, Vec<f64>) = match mode {
        SplitMode::UniformCn { c } => {
            if !(c > 0.0) {
                return Err(Error::invalid("c", format!("must be > 0, got {c}")));
            }
            let t = c * n as f64;
            (vec![t; n], r_i.iter().map(|&ri| t * ri).collect())
        }
        SplitMode::UniformCan { c, a } => {
            if !(c > 0.0) || !(a > 0.0) {
                return Err(Error::invalid("c", "mode parameters must be positive"));
            }
            let t = c * a * n as f64;
            (vec![t; n], r_i.iter().map(|&ri| t * ri).collect())
        }
        SplitMode::Adaptive { c } => {
            if !(c > 0.0) {
                return Err(Error::invalid("c", format!("must be > 0, got {c}")));
            }
            for (i, &ri) in r_i.iter().enumerate() {
                if ri <= 0.0 {
                    return Err(Error::invalid(
                        "items",
                        format!("item {i} has zero monopoly revenue; adaptive thresholds undefined"),
                    ));
                }
            }
            // Thresholds are c*r exactly by construction.
            (r_i.iter().map(|&ri| c * r / ri).collect(), vec![c * r; n])
        }
    };
    let mut p_i = Vec::with_capacity(n);
    let mut core = Vec::with_capacity(n);
    let mut tail = Vec::with_capacity(n);
    for (d, &theta) in items.iter().zip(&thresholds) {
        let (c, t, p) = d.condition_split(theta)?;
        p_i.push(p);
        core.push(c);
        tail.push(t);
    }
    let split = CoreTailSplit {
        mode,
        items,
        r_i,
        r,
        t_i,
        thresholds,
        p_i,
        core,
        tail,
    };
    debug_assert!(split.ly1_holds());
    Ok(split)
}

/// Enumerate all tail events of a split exactly.
///
/// Items with p_i = 1 are in every event; items with p_i = 0 in none. The
/// subset lattice ranges over the remaining items and is capped at
/// [`TAIL_SUBSET_CAP`] of them.
pub fn tail_events(split: &CoreTailSplit) -> Result<Vec<TailEvent>> {
    let mut forced: Vec<usize> = Vec::new();
    let mut uncertain: Vec<usize> = Vec::new();
    for i in 0..split.n_items() {
        if split.core[i].is_none() {
            forced.push(i);
        } else if split.tail[i].is_some() {
            uncertain.push(i);
        }
    }
    if uncertain.len() > TAIL_SUBSET_CAP {
        return Err(Error::SizeCap {
            what: "tail subset enumeration",
            size: uncertain.len() as u64,
            cap: TAIL_SUBSET_CAP as u64,
        });
    }
    let mut events = Vec::with_capacity(1 << uncertain.len());
    for mask in 0u32..(1u32 << uncertain.len()) {
        let mut items = forced.clone();
        let mut p_a = 1.0f64;
        for (bit, &i) in uncertain.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                items.push(i);
                p_a *= split.p_i[i];
            } else {
                p_a *= 1.0 - split.p_i[i];
            }
        }
        items.sort_unstable();
        events.push(TailEvent { items, p_a });
    }
    Ok(events)
}

/// Per-item revenue bounds of the split parts, LP-verified.
#[derive(Clone, Debug, Serialize)]
pub struct PartRevenueCheck {
    /// Item index.
    pub item: usize,
    /// LP revenue of the core part, if present.
    pub core_rev: Option<f64>,
    /// LP revenue of the tail part, if present.
    pub tail_rev: Option<f64>,
    /// core_rev <= r_i + 1e-6 (vacuous when the core is null).
    pub core_ok: bool,
    /// tail_rev <= r_i / p_i + 1e-6 (vacuous when the tail is null).
    pub tail_ok: bool,
}

/// Report of the core-decomposition inequality.
#[derive(Clone, Debug, Serialize)]
pub struct CoreDecompositionReport {
    /// Rev(D) by the LP oracle.
    pub lhs: f64,
    /// Welfare of the core product.
    pub core_welfare: f64,
    /// sum_A p_A Rev(tail_A), LP oracle per subset.
    pub tail_sum: f64,
    /// core_welfare + tail_sum.
    pub rhs: f64,
    /// lhs <= rhs + 1e-6.
    pub pass: bool,
    /// Per-item core/tail revenue bound checks.
    pub part_checks: Vec<PartRevenueCheck>,
    /// All part checks passed.
    pub parts_pass: bool,
}

/// Certify Rev(D) <= Welfare(core) + sum_A p_A Rev(tail_A) with the LP oracle
/// on both sides, along with the per-item part bounds.
pub fn core_decomposition_bound(
    split: &CoreTailSplit,
    inst: &MarketInstance,
) -> Result<CoreDecompositionReport> {
    let lhs = rev_lp_instance(inst)?.objective;
    let core_welfare = split.core_welfare();
    let tail_sum = tail_revenue_sum(split)?;
    let rhs = core_welfare + tail_sum;

    let mut part_checks = Vec::with_capacity(split.n_items());
    for i in 0..split.n_items() {
        let core_rev = match &split.core[i] {
            Some(d) => Some(rev_lp_product(std::slice::from_ref(d))?.objective),
            None => None,
        };
        let tail_rev = match &split.tail[i] {
            Some(d) => Some(rev_lp_product(std::slice::from_ref(d))?.objective),
            None => None,
        };
        let core_ok = core_rev.is_none_or(|c| c <= split.r_i[i] + 1e-6);
        let tail_ok = tail_rev.is_none_or(|t| t <= split.r_i[i] / split.p_i[i] + 1e-6);
        part_checks.push(PartRevenueCheck {
            item: i,
            core_rev,
            tail_rev,
            core_ok,
            tail_ok,
        });
    }
    let parts_pass = part_checks.iter().all(|c| c.core_ok && c.tail_ok);
    Ok(CoreDecompositionReport {
        lhs,
        core_welfare,
        tail_sum,
        rhs,
        pass: lhs <= rhs + 1e-6,
        part_checks,
        parts_pass,
    })
}

/// sum_A p_A Rev(tail_A) over all tail events, LP oracle per subset.
pub fn tail_revenue_sum(split: &CoreTailSplit) -> Result<f64> {
    let mut total = 0.0;
    for event in tail_events(split)? {
        if event.items.is_empty() || event.p_a == 0.0 {
            continue;
        }
        let tails: Vec<DiscreteDist> = event
            .items
            .iter()
            .map(|&i| split.tail[i].clone().expect("tail present for event items"))
            .collect();
        total += event.p_a * rev_lp_product(&tails)?.objective;
    }
    Ok(total)
}

/// Report of a mode-specific tail revenue bound.
#[derive(Clone, Debug, Serialize)]
pub struct TailBoundReport {
    /// sum_A p_A Rev(tail_A).
    pub tail_sum: f64,
    /// SRev of the instance (= r).
    pub srev: f64,
    /// Bound factor for the active mode.
    pub factor: f64,
    /// tail_sum <= factor * srev + 1e-6.
    pub pass: bool,
}

/// Tail bound for the active mode.
///
/// Uniform t_i = c*n and adaptive t_i = c*r/r_i both give factor 1 + 1/c for a
/// single buyer (c = 1 adaptive is the factor-2 bound); the amplification mode
/// gives 1 + 2 e^{1/(c a)} / c.
pub fn tail_bound_check(split: &CoreTailSplit) -> Result<TailBoundReport> {
    let factor = match split.mode {
        SplitMode::UniformCn { c } => 1.0 + 1.0 / c,
        SplitMode::Adaptive { c } => 1.0 + 1.0 / c,
        SplitMode::UniformCan { c, a } => 1.0 + 2.0 * (1.0 / (c * a)).exp() / c,
    };
    let tail_sum = tail_revenue_sum(split)?;
    Ok(TailBoundReport {
        tail_sum,
        srev: split.r,
        factor,
        pass: tail_sum <= factor * split.r + 1e-6,
    })
}

/// Report of a mode-specific core welfare bound.
#[derive(Clone, Debug, Serialize)]
pub struct CoreWelfareReport {
    /// Welfare of the core product.
    pub core_welfare: f64,
    /// Bound value the welfare is compared against.
    pub bound: f64,
    /// Human-readable bound description.
    pub bound_kind: String,
    /// core_welfare <= bound + 1e-6.
    pub pass: bool,
}

/// Core welfare bound for the active mode.
///
/// Uniform modes bound the core welfare by (1 + ln c + ln n) SRev (plus ln a
/// in the amplification form). The adaptive mode certifies the quarter bound
/// max(SRev, BRev) >= Welfare(core) / 4, which needs the caller to supply BRev.
pub fn core_welfare_bound_check(
    split: &CoreTailSplit,
    brev: Option<f64>,
) -> Result<CoreWelfareReport> {
    let n = split.n_items() as f64;
    let w = split.core_welfare();
    let (bound, kind) = match split.mode {
        SplitMode::UniformCn { c } => (
            (1.0 + c.ln() + n.ln()) * split.r,
            format!("(1 + ln {c} + ln n) * srev"),
        ),
        SplitMode::UniformCan { c, a } => (
            (1.0 + c.ln() + a.ln() + n.ln()) * split.r,
            format!("(1 + ln {c} + ln {a} + ln n) * srev"),
        ),
        SplitMode::Adaptive { .. } => {
            let brev = brev.ok_or_else(|| {
                Error::Precondition("adaptive core-welfare bound needs BRev".into())
            })?;
            (4.0 * split.r.max(brev), "4 * max(srev, brev)".to_string())
        }
    };
    Ok(CoreWelfareReport {
        core_welfare: w,
        bound,
        bound_kind: kind,
        pass: w <= bound + 1e-6,
    })
}

/// Report of the variance bound for a revenue-capped bounded distribution.
#[derive(Clone, Debug, Serialize)]
pub struct VarianceBoundReport {
    /// Variance of the distribution.
    pub variance: f64,
    /// (2t - 1) c^2.
    pub bound: f64,
    /// variance <= bound + 1e-9.
    pub pass: bool,
}

/// Check Var(d) <= (2t - 1) c^2 for d supported on [0, t*c] with monopoly
/// revenue at most c. Both preconditions are verified.
pub fn variance_bound_check(d: &DiscreteDist, c: f64, t: f64) -> Result<VarianceBoundReport> {
    if !(c > 0.0) || !(t >= 1.0) {
        return Err(Error::Precondition(format!(
            "variance bound needs c > 0 and t >= 1, got c={c}, t={t}"
        )));
    }
    if d.max_value() > t * c + 1e-9 {
        return Err(Error::Precondition(format!(
            "support reaches {} beyond t*c = {}",
            d.max_value(),
            t * c
        )));
    }
    let rev = monopoly_price(d).1;
    if rev > c + 1e-9 {
        return Err(Error::Precondition(format!(
            "monopoly revenue {rev} exceeds the cap c = {c}"
        )));
    }
    let variance = d.variance();
    let bound = (2.0 * t - 1.0) * c * c;
    Ok(VarianceBoundReport {
        variance,
        bound,
        pass: variance <= bound + 1e-9,
    })
}

/// Exact probability mass that `welfare_dist` places within [C/2, 3C/2].
pub fn concentration_report(welfare_dist: &DiscreteDist, center: f64) -> f64 {
    welfare_dist
        .atoms()
        .filter(|&(v, _)| v >= 0.5 * center - VALUE_MERGE_TOL && v <= 1.5 * center + VALUE_MERGE_TOL)
        .map(|(_, p)| p)
        .sum()
}

/// Report of the many-buyer concentration dichotomy.
#[derive(Clone, Debug, Serialize)]
pub struct ManyMaxReport {
    /// Parameter c (must be >= 4 sqrt 2).
    pub c: f64,
    /// SRev of the instance.
    pub srev: f64,
    /// Stand-in upper bound on Rev: (2 + 2e^{1/4} + ln 4 + ln n) * srev.
    ///
    /// The exact many-buyer Rev is not computable here; this surrogate is an
    /// upper bound on it, so the first branch is sufficient, not necessary.
    pub rev_upper_surrogate: f64,
    /// (c + 5) * srev >= rev_upper_surrogate.
    pub branch_srev: bool,
    /// Concentration center C = Welfare of the core product.
    pub center: f64,
    /// Observed mass within [C/2, 3C/2] of the welfare distribution.
    pub concentration: f64,
    /// Required concentration level 3/4 - 24/c^2.
    pub required: f64,
    /// concentration >= required.
    pub branch_concentrated: bool,
}

/// Evaluate the dichotomy: either (c+5) SRev exceeds the surrogate Rev upper
/// bound, or the welfare of the instance is (3/4 - 24/c^2)-concentrated around
/// the core welfare. Thresholds use t_i = 4 r / r_i.
pub fn many_max_check(inst: &MarketInstance, c: f64) -> Result<ManyMaxReport> {
    if c < 4.0 * std::f64::consts::SQRT_2 {
        return Err(Error::Precondition(format!(
            "need c >= 4*sqrt(2) ~ 5.657, got {c}"
        )));
    }
    let grid = inst
        .grid()
        .ok_or_else(|| Error::Precondition("independent instance required".into()))?;
    // v*_i = max over buyers; these drive welfare and the split probabilities.
    let mut vstar: Vec<DiscreteDist> = Vec::with_capacity(inst.n_items());
    for row in grid {
        let mut acc = row[0].clone();
        for d in &row[1..] {
            acc = acc.max_dist(d)?;
            if acc.len() as u64 > WELFARE_SUPPORT_CAP {
                return Err(Error::SizeCap {
                    what: "buyer max fold",
                    size: acc.len() as u64,
                    cap: WELFARE_SUPPORT_CAP,
                });
            }
        }
        vstar.push(acc);
    }
    let r_i: Vec<f64> = grid
        .iter()
        .map(|row| optimal_item_rev(row).map(|e| e.value))
        .collect::<Result<_>>()?;
    let r: f64 = r_i.iter().sum();
    let srev = r;
    let theta = 4.0 * r;
    let mut center = 0.0;
    for d in &vstar {
        let (core, _, _) = d.condition_split(theta)?;
        if let Some(core) = core {
            center += core.mean();
        }
    }
    let mut welfare = DiscreteDist::point_mass(0.0);
    for d in &vstar {
        welfare = welfare.convolve_capped(d, WELFARE_SUPPORT_CAP)?;
    }
    let n = inst.n_items() as f64;
    let rev_upper_surrogate = (2.0 + 2.0 * (0.25f64).exp() + 4.0f64.ln() + n.ln()) * srev;
    let concentration = concentration_report(&welfare, center);
    let required = 0.75 - 24.0 / (c * c);
    Ok(ManyMaxReport {
        c,
        srev,
        rev_upper_surrogate,
        branch_srev: (c + 5.0) * srev >= rev_upper_surrogate - 1e-9,
        center,
        concentration,
        required,
        branch_concentrated: concentration >= required,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::uniform_grid;

    fn dist(atoms: &[(f64, f64)]) -> DiscreteDist {
        DiscreteDist::new(atoms.to_vec()).unwrap()
    }

    fn ddt() -> MarketInstance {
        MarketInstance::single_buyer(
            "ddt",
            vec![dist(&[(1.0, 0.5), (2.0, 0.5)]), dist(&[(1.0, 0.5), (3.0, 0.5)])],
        )
        .unwrap()
    }

    #[test]
    fn ddt_adaptive_split_hand_values() {
        let split = build_split(&ddt(), SplitMode::Adaptive { c: 1.0 }).unwrap();
        assert_eq!(split.r_i, vec![1.0, 1.5]);
        assert_eq!(split.r, 2.5);
        assert!((split.t_i[0] - 2.5).abs() <= 1e-12);
        assert!((split.t_i[1] - 5.0 / 3.0).abs() <= 1e-12);
        assert_eq!(split.thresholds, vec![2.5, 2.5]);
        assert_eq!(split.p_i, vec![0.0, 0.5]);
        // p_2 = 0.5 <= 1/t_2 = 0.6
        assert!(split.ly1_holds());
        assert!(split.tail[0].is_none());
        assert_eq!(split.tail[1].as_ref().unwrap().support(), &[3.0]);
    }

    #[test]
    fn thresholds_above_support_trivial_split() {
        let split = build_split(&ddt(), SplitMode::UniformCn { c: 10.0 }).unwrap();
        assert!(split.p_i.iter().all(|&p| p == 0.0));
        assert!(split.tail.iter().all(|t| t.is_none()));
        let events = tail_events(&split).unwrap();
        assert_eq!(events.len(), 1);
        assert!(events[0].items.is_empty());
        assert_eq!(events[0].p_a, 1.0);
    }

    #[test]
    fn adaptive_rejects_zero_revenue_item() {
        let inst = MarketInstance::single_buyer(
            "z",
            vec![DiscreteDist::point_mass(0.0), dist(&[(1.0, 0.5), (3.0, 0.5)])],
        )
        .unwrap();
        match build_split(&inst, SplitMode::Adaptive { c: 1.0 }) {
            Err(Error::InvalidParameter { message, .. }) => assert!(message.contains("item 0")),
            other => panic!("expected degenerate-item error, got {other:?}"),
        }
    }

    #[test]
    fn tail_event_probabilities_sum_to_one() {
        let inst = MarketInstance::single_buyer(
            "mix",
            vec![
                dist(&[(0.5, 0.5), (2.0, 0.5)]),
                dist(&[(1.0, 0.25), (4.0, 0.75)]),
                dist(&[(0.2, 0.9), (9.0, 0.1)]),
            ],
        )
        .unwrap();
        let split = build_split(&inst, SplitMode::Adaptive { c: 0.25 }).unwrap();
        let events = tail_events(&split).unwrap();
        let total: f64 = events.iter().map(|e| e.p_a).sum();
        assert!((total - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn ddt_core_decomposition_hand_assembly() {
        let inst = ddt();
        let split = build_split(&inst, SplitMode::Adaptive { c: 1.0 }).unwrap();
        let report = core_decomposition_bound(&split, &inst).unwrap();
        // core1 = U{1,2} (whole), core2 = point at 1; tail2 = point at 3.
        assert!((report.core_welfare - 2.5).abs() <= 1e-12);
        assert!((report.tail_sum - 1.5).abs() <= 1e-7); // p2 * Rev(point 3) = 0.5 * 3
        assert!((report.lhs - 2.625).abs() <= 1e-7);
        assert!(report.pass);
        assert!(report.parts_pass);
    }

    #[test]
    fn ddt_tail_bound() {
        let inst = ddt();
        let split = build_split(&inst, SplitMode::Adaptive { c: 1.0 }).unwrap();
        let report = tail_bound_check(&split).unwrap();
        assert!((report.tail_sum - 1.5).abs() <= 1e-7);
        assert_eq!(report.factor, 2.0);
        assert!(report.pass);
    }

    #[test]
    fn single_item_tail_bound_collapses() {
        let inst = MarketInstance::single_buyer("one", vec![dist(&[(1.0, 0.5), (3.0, 0.5)])]).unwrap();
        let split = build_split(&inst, SplitMode::Adaptive { c: 1.0 }).unwrap();
        let report = tail_bound_check(&split).unwrap();
        assert!(report.pass);
        assert!(report.tail_sum <= split.r + 1e-9);
    }

    #[test]
    fn core_welfare_bound_uniform_and_adaptive() {
        let inst = ddt();
        let split = build_split(&inst, SplitMode::UniformCn { c: 1.0 }).unwrap();
        let report = core_welfare_bound_check(&split, None).unwrap();
        assert!(report.pass, "{report:?}");

        let split = build_split(&inst, SplitMode::Adaptive { c: 1.0 }).unwrap();
        let brev = crate::benchmarks::brev(&inst).unwrap().value;
        let report = core_welfare_bound_check(&split, Some(brev)).unwrap();
        assert!(report.pass, "{report:?}");
        assert!(core_welfare_bound_check(&split, None).is_err());
    }

    #[test]
    fn variance_bound_examples() {
        let report = variance_bound_check(&DiscreteDist::point_mass(1.0), 1.0, 1.0).unwrap();
        assert_eq!(report.variance, 0.0);
        assert!(report.pass);

        let report = variance_bound_check(&dist(&[(0.0, 0.5), (2.0, 0.5)]), 1.0, 2.0).unwrap();
        assert!((report.variance - 1.0).abs() <= 1e-12);
        assert_eq!(report.bound, 3.0);
        assert!(report.pass);
    }

    #[test]
    fn variance_bound_preconditions() {
        // Support beyond t*c.
        assert!(variance_bound_check(&dist(&[(0.0, 0.5), (5.0, 0.5)]), 1.0, 2.0).is_err());
        // Monopoly revenue above c.
        assert!(variance_bound_check(&DiscreteDist::point_mass(2.0), 1.0, 2.5).is_err());
    }

    #[test]
    fn concentration_hand_cases() {
        assert_eq!(concentration_report(&DiscreteDist::point_mass(3.0), 3.0), 1.0);
        assert_eq!(concentration_report(&dist(&[(0.0, 0.5), (2.0, 0.5)]), 1.0), 0.0);
    }

    #[test]
    fn many_max_uniform_items_concentrates() {
        let items = vec![uniform_grid(0.0, 1.0, 8).unwrap(); 16];
        let inst = MarketInstance::single_buyer("u16", items).unwrap();
        let report = many_max_check(&inst, 8.0).unwrap();
        assert!(report.branch_concentrated, "{report:?}");
        assert!(report.concentration >= report.required);
        assert!(many_max_check(&inst, 2.0).is_err());
    }
}
