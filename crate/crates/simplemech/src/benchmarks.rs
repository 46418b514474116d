//! Simple-mechanism revenue benchmarks on a market instance: selling items
//! separately (SRev), grand bundling (BRev), and partition mechanisms (PRev).

use crate::dist::DiscreteDist;
use crate::error::{Error, Result};
use crate::market::{InstanceKind, MarketInstance, RevenueEstimate};
use crate::partitions::{bell, partitions, rgs_to_blocks};
use crate::single_item::optimal_item_rev;

/// Cap on the support size of per-buyer bundle convolutions.
pub const BUNDLE_SUPPORT_CAP: u64 = 1_000_000;

/// Largest item count for exhaustive partition enumeration (Bell(10) = 115975).
pub const PARTITION_ENUM_CAP: usize = 10;

/// A partition of the item set into disjoint, covering, nonempty blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionSpec {
    blocks: Vec<Vec<usize>>,
}

impl PartitionSpec {
    /// Validate blocks: disjoint, covering {0..n-1}, nonempty.
    pub fn new(blocks: Vec<Vec<usize>>, n_items: usize) -> Result<Self> {
        let mut seen = vec![false; n_items];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::invalid("blocks", "empty block"));
            }
            for &i in block {
                if i >= n_items {
                    return Err(Error::invalid("blocks", format!("item index {i} out of range")));
                }
                if seen[i] {
                    return Err(Error::invalid("blocks", format!("item {i} appears twice")));
                }
                seen[i] = true;
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::invalid("blocks", "blocks do not cover all items"));
        }
        Ok(PartitionSpec { blocks })
    }

    /// One block per item.
    pub fn singletons(n_items: usize) -> Self {
        PartitionSpec {
            blocks: (0..n_items).map(|i| vec![i]).collect(),
        }
    }

    /// A single block containing every item.
    pub fn grand(n_items: usize) -> Self {
        PartitionSpec {
            blocks: vec![(0..n_items).collect()],
        }
    }

    /// The blocks.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// As a restricted growth string (block label per item).
    pub fn to_rgs(&self, n_items: usize) -> Vec<usize> {
        let mut labels = vec![0usize; n_items];
        // Blocks relabeled in order of their smallest element for a canonical RGS.
        let mut order: Vec<usize> = (0..self.blocks.len()).collect();
        order.sort_by_key(|&b| self.blocks[b][0]);
        for (label, &b) in order.iter().enumerate() {
            for &i in &self.blocks[b] {
                labels[i] = label;
            }
        }
        labels
    }
}

/// Per-buyer value distributions for a block of items.
///
/// Independent instances convolve the block's per-item distributions for each
/// buyer; the correlated single buyer sums coordinates of the joint.
pub fn block_value_dists(inst: &MarketInstance, block: &[usize]) -> Result<Vec<DiscreteDist>> {
    match inst.kind() {
        InstanceKind::Independent { grid } => (0..inst.n_buyers())
            .map(|buyer| {
                block.iter().try_fold(DiscreteDist::point_mass(0.0), |acc, &item| {
                    acc.convolve_capped(&grid[item][buyer], BUNDLE_SUPPORT_CAP)
                })
            })
            .collect(),
        InstanceKind::Correlated { joint } => Ok(vec![joint.block_sum(block)?]),
    }
}

/// Revenue of selling every item separately via its optimal auction.
pub fn srev(inst: &MarketInstance) -> Result<RevenueEstimate> {
    let mut total = 0.0;
    match inst.kind() {
        InstanceKind::Independent { grid } => {
            for row in grid {
                total += optimal_item_rev(row)?.value;
            }
        }
        InstanceKind::Correlated { joint } => {
            for i in 0..inst.n_items() {
                total += optimal_item_rev(&[joint.marginal(i)?])?.value;
            }
        }
    }
    Ok(RevenueEstimate::exact(total))
}

/// Revenue of selling the grand bundle as a single item.
pub fn brev(inst: &MarketInstance) -> Result<RevenueEstimate> {
    let all: Vec<usize> = (0..inst.n_items()).collect();
    let bundles = block_value_dists(inst, &all)?;
    optimal_item_rev(&bundles)
}

/// Revenue of the partition mechanism that sells each block as one bundle.
pub fn prev_on(inst: &MarketInstance, part: &PartitionSpec) -> Result<RevenueEstimate> {
    let mut total = 0.0;
    for block in part.blocks() {
        let dists = block_value_dists(inst, block)?;
        total += optimal_item_rev(&dists)?.value;
    }
    Ok(RevenueEstimate::exact(total))
}

/// Exhaustive best partition mechanism.
///
/// Enumerates all set partitions (restricted growth strings); revenue ties
/// (within 1e-12) break toward the partition with more blocks, then toward the
/// lexicographically smallest string.
pub fn prev_exact(inst: &MarketInstance) -> Result<(RevenueEstimate, PartitionSpec)> {
    let n = inst.n_items();
    if n > PARTITION_ENUM_CAP {
        return Err(Error::SizeCap {
            what: "partition enumeration (use prev_on with explicit partitions)",
            size: bell(n.min(26)),
            cap: bell(PARTITION_ENUM_CAP),
        });
    }
    let mut best: Option<(f64, usize, Vec<usize>)> = None;
    for rgs in partitions(n) {
        let blocks = rgs_to_blocks(&rgs);
        let n_blocks = blocks.len();
        let spec = PartitionSpec { blocks };
        let rev = prev_on(inst, &spec)?.value;
        let better = match &best {
            None => true,
            Some((brv, bblocks, brgs)) => {
                rev > brv + 1e-12
                    || ((rev - brv).abs() <= 1e-12
                        && (n_blocks > *bblocks || (n_blocks == *bblocks && rgs < *brgs)))
            }
        };
        if better {
            best = Some((rev, n_blocks, rgs));
        }
    }
    let (rev, _, rgs) = best.expect("n >= 1 yields at least one partition");
    Ok((
        RevenueEstimate::exact(rev),
        PartitionSpec {
            blocks: rgs_to_blocks(&rgs),
        },
    ))
}
