//! Market instances and revenue estimates.
//!
//! A [`MarketInstance`] is either an independent grid of per-(item, buyer)
//! distributions, or an explicit correlated joint over value vectors for a
//! single buyer. The JSON schema consumed by the CLI mirrors the two shapes.

use serde::{Deserialize, Serialize};

use crate::dist::{neumaier_sum, DiscreteDist, VALUE_MERGE_TOL};
use crate::error::{Error, Result};

/// Tolerance on probability sums when loading instance files. Inputs within
/// this tolerance are accepted and renormalized to satisfy the tighter
/// internal invariants.
pub const LOAD_PROB_TOL: f64 = 1e-9;

/// An explicit joint distribution over value vectors (single buyer).
#[derive(Clone, Debug, PartialEq)]
pub struct JointDist {
    support: Vec<Vec<f64>>,
    probs: Vec<f64>,
}

impl JointDist {
    /// Build a joint from (vector, probability) pairs. Duplicates are merged,
    /// zero-probability rows dropped, probabilities renormalized after
    /// validating the total against `tol`.
    pub fn new(mut rows: Vec<(Vec<f64>, f64)>, tol: f64) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::invalid("joint", "empty support"));
        }
        let dim = rows[0].0.len();
        if dim == 0 {
            return Err(Error::invalid("joint", "zero-dimensional value vectors"));
        }
        for (v, p) in &rows {
            if v.len() != dim {
                return Err(Error::invalid("joint", "ragged value vectors"));
            }
            if v.iter().any(|x| !x.is_finite() || *x < 0.0) {
                return Err(Error::invalid("joint", "value vectors must be nonnegative"));
            }
            if !p.is_finite() || *p < 0.0 {
                return Err(Error::invalid("probs", format!("invalid probability {p}")));
            }
        }
        rows.sort_by(|a, b| cmp_vecs(&a.0, &b.0));
        let mut support: Vec<Vec<f64>> = Vec::with_capacity(rows.len());
        let mut probs: Vec<f64> = Vec::with_capacity(rows.len());
        for (v, p) in rows {
            if p == 0.0 {
                continue;
            }
            match support.last() {
                Some(last) if vecs_equal(last, &v) => *probs.last_mut().unwrap() += p,
                _ => {
                    support.push(v);
                    probs.push(p);
                }
            }
        }
        if support.is_empty() {
            return Err(Error::invalid("probs", "no positive-probability rows"));
        }
        let total = neumaier_sum(&probs);
        if (total - 1.0).abs() > tol {
            return Err(Error::invalid(
                "probs",
                format!("probabilities sum to {total}, expected 1"),
            ));
        }
        if total != 1.0 {
            for p in &mut probs {
                *p /= total;
            }
        }
        Ok(JointDist { support, probs })
    }

    /// Number of items (vector dimension).
    pub fn n_items(&self) -> usize {
        self.support[0].len()
    }

    /// Support rows.
    pub fn support(&self) -> &[Vec<f64>] {
        &self.support
    }

    /// Probabilities, parallel to the support.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Number of support rows (types).
    pub fn len(&self) -> usize {
        self.support.len()
    }

    /// Always false; a valid joint has at least one row.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Iterate (row, probability).
    pub fn rows(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.support
            .iter()
            .map(|v| v.as_slice())
            .zip(self.probs.iter().copied())
    }

    /// Marginal distribution of coordinate `i`.
    pub fn marginal(&self, i: usize) -> Result<DiscreteDist> {
        DiscreteDist::new(self.rows().map(|(v, p)| (v[i], p)).collect())
    }

    /// Distribution of the sum of the coordinates in `block`.
    pub fn block_sum(&self, block: &[usize]) -> Result<DiscreteDist> {
        DiscreteDist::new(
            self.rows()
                .map(|(v, p)| (block.iter().map(|&i| v[i]).sum::<f64>(), p))
                .collect(),
        )
    }

    /// Distribution of the total sum of all coordinates.
    pub fn total_sum(&self) -> Result<DiscreteDist> {
        let all: Vec<usize> = (0..self.n_items()).collect();
        self.block_sum(&all)
    }
}

fn cmp_vecs(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            ord => return ord,
        }
    }
    std::cmp::Ordering::Equal
}

fn vecs_equal(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= VALUE_MERGE_TOL)
}

/// Independent grid or explicit correlated joint.
#[derive(Clone, Debug)]
pub enum InstanceKind {
    /// Independent per-(item, buyer) distributions, indexed `grid[item][buyer]`.
    Independent { grid: Vec<Vec<DiscreteDist>> },
    /// Explicit correlated joint for a single buyer.
    Correlated { joint: JointDist },
}

/// A market of `n_items` items and `n_buyers` additive buyers.
#[derive(Clone, Debug)]
pub struct MarketInstance {
    label: String,
    n_items: usize,
    n_buyers: usize,
    kind: InstanceKind,
}

impl MarketInstance {
    /// Build an independent instance from a `grid[item][buyer]` matrix.
    pub fn independent(label: impl Into<String>, grid: Vec<Vec<DiscreteDist>>) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::invalid("grid", "no items"));
        }
        let n_buyers = grid[0].len();
        if n_buyers == 0 {
            return Err(Error::invalid("grid", "no buyers"));
        }
        if grid.iter().any(|row| row.len() != n_buyers) {
            return Err(Error::invalid("grid", "ragged buyer rows"));
        }
        Ok(MarketInstance {
            label: label.into(),
            n_items: grid.len(),
            n_buyers,
            kind: InstanceKind::Independent { grid },
        })
    }

    /// Build a single-buyer correlated instance from an explicit joint.
    pub fn correlated(label: impl Into<String>, joint: JointDist) -> Result<Self> {
        Ok(MarketInstance {
            label: label.into(),
            n_items: joint.n_items(),
            n_buyers: 1,
            kind: InstanceKind::Correlated { joint },
        })
    }

    /// Convenience: single buyer with independent per-item distributions.
    pub fn single_buyer(label: impl Into<String>, items: Vec<DiscreteDist>) -> Result<Self> {
        MarketInstance::independent(label, items.into_iter().map(|d| vec![d]).collect())
    }

    /// Instance label.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Number of items.
    pub fn n_items(&self) -> usize {
        self.n_items
    }

    /// Number of buyers.
    pub fn n_buyers(&self) -> usize {
        self.n_buyers
    }

    /// Underlying representation.
    pub fn kind(&self) -> &InstanceKind {
        &self.kind
    }

    /// The grid, if this is an independent instance.
    pub fn grid(&self) -> Option<&Vec<Vec<DiscreteDist>>> {
        match &self.kind {
            InstanceKind::Independent { grid } => Some(grid),
            InstanceKind::Correlated { .. } => None,
        }
    }

    /// The joint, if this is a correlated instance.
    pub fn joint(&self) -> Option<&JointDist> {
        match &self.kind {
            InstanceKind::Correlated { joint } => Some(joint),
            InstanceKind::Independent { .. } => None,
        }
    }

    /// Per-buyer distributions for one item (independent instances).
    pub fn item_bidders(&self, item: usize) -> Result<Vec<DiscreteDist>> {
        match &self.kind {
            InstanceKind::Independent { grid } => Ok(grid[item].clone()),
            InstanceKind::Correlated { .. } => Err(Error::Precondition(
                "independent instance required".into(),
            )),
        }
    }

    /// Per-item distributions for a single-buyer independent instance.
    pub fn single_buyer_items(&self) -> Result<Vec<DiscreteDist>> {
        match &self.kind {
            InstanceKind::Independent { grid } if self.n_buyers == 1 => {
                Ok(grid.iter().map(|row| row[0].clone()).collect())
            }
            _ => Err(Error::Precondition(
                "single-buyer independent instance required".into(),
            )),
        }
    }

    /// Expand a single-buyer instance into an explicit joint over types.
    ///
    /// Independent instances take the product of their per-item supports;
    /// the number of resulting types is checked against `cap`.
    pub fn to_joint(&self, cap: u64) -> Result<JointDist> {
        match &self.kind {
            InstanceKind::Correlated { joint } => Ok(joint.clone()),
            InstanceKind::Independent { grid } => {
                if self.n_buyers != 1 {
                    return Err(Error::Precondition(
                        "joint expansion needs a single buyer".into(),
                    ));
                }
                let mut total: u64 = 1;
                for row in grid {
                    total = total.saturating_mul(row[0].len() as u64);
                    if total > cap {
                        return Err(Error::SizeCap {
                            what: "joint types",
                            size: total,
                            cap,
                        });
                    }
                }
                let mut rows: Vec<(Vec<f64>, f64)> = vec![(Vec::new(), 1.0)];
                for row in grid {
                    let d = &row[0];
                    let mut next = Vec::with_capacity(rows.len() * d.len());
                    for (prefix, p) in &rows {
                        for (v, pv) in d.atoms() {
                            let mut ext = prefix.clone();
                            ext.push(v);
                            next.push((ext, p * pv));
                        }
                    }
                    rows = next;
                }
                JointDist::new(rows, 1e-9)
            }
        }
    }
}

/// A revenue number with provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RevenueEstimate {
    /// The revenue value.
    pub value: f64,
    /// "exact" or "monte-carlo".
    pub kind: EstimateKind,
    /// Number of Monte Carlo samples (0 for exact values).
    pub samples: u64,
    /// Standard error of the estimate (0 for exact values).
    pub std_error: f64,
    /// Seed of the sampling stream (absent for exact values).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Provenance tag for a revenue figure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateKind {
    /// Computed by exact enumeration / closed form.
    Exact,
    /// Estimated by seeded Monte Carlo.
    MonteCarlo,
}

impl RevenueEstimate {
    /// An exact revenue value.
    pub fn exact(value: f64) -> Self {
        RevenueEstimate {
            value,
            kind: EstimateKind::Exact,
            samples: 0,
            std_error: 0.0,
            seed: None,
        }
    }

    /// A Monte Carlo estimate.
    pub fn monte_carlo(value: f64, samples: u64, std_error: f64, seed: u64) -> Self {
        RevenueEstimate {
            value,
            kind: EstimateKind::MonteCarlo,
            samples,
            std_error,
            seed: Some(seed),
        }
    }
}

// ---------------------------------------------------------------------------
// JSON schema
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct DistJson {
    support: Vec<f64>,
    probs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct JointJson {
    support: Vec<Vec<f64>>,
    probs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    label: String,
    items: usize,
    buyers: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<Vec<Vec<DistJson>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    joint: Option<JointJson>,
}

impl MarketInstance {
    /// Parse an instance from its JSON representation.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: InstanceJson = serde_json::from_str(text)?;
        match (raw.grid, raw.joint) {
            (Some(_), Some(_)) => Err(Error::Schema {
                path: "$".into(),
                message: "exactly one of grid/joint must be present, found both".into(),
            }),
            (None, None) => Err(Error::Schema {
                path: "$".into(),
                message: "exactly one of grid/joint must be present, found neither".into(),
            }),
            (Some(grid), None) => {
                if grid.len() != raw.items {
                    return Err(Error::Schema {
                        path: "$.grid".into(),
                        message: format!("expected {} item rows, found {}", raw.items, grid.len()),
                    });
                }
                let mut dists = Vec::with_capacity(grid.len());
                for (i, row) in grid.into_iter().enumerate() {
                    if row.len() != raw.buyers {
                        return Err(Error::Schema {
                            path: format!("$.grid[{i}]"),
                            message: format!("expected {} buyer columns, found {}", raw.buyers, row.len()),
                        });
                    }
                    let mut col = Vec::with_capacity(row.len());
                    for (j, d) in row.into_iter().enumerate() {
                        let path = format!("$.grid[{i}][{j}]");
                        col.push(parse_dist(d, &path)?);
                    }
                    dists.push(col);
                }
                MarketInstance::independent(raw.label, dists)
            }
            (None, Some(joint)) => {
                if raw.buyers != 1 {
                    return Err(Error::Schema {
                        path: "$.buyers".into(),
                        message: "joint instances must have exactly one buyer".into(),
                    });
                }
                if joint.support.len() != joint.probs.len() {
                    return Err(Error::Schema {
                        path: "$.joint.probs".into(),
                        message: "support and probs lengths differ".into(),
                    });
                }
                if joint.support.iter().any(|v| v.len() != raw.items) {
                    return Err(Error::Schema {
                        path: "$.joint.support".into(),
                        message: format!("value vectors must have length {}", raw.items),
                    });
                }
                let rows = joint.support.into_iter().zip(joint.probs).collect();
                let joint = JointDist::new(rows, LOAD_PROB_TOL).map_err(|e| match e {
                    Error::InvalidParameter { field, message } => Error::Schema {
                        path: format!("$.joint.{field}"),
                        message,
                    },
                    other => other,
                })?;
                MarketInstance::correlated(raw.label, joint)
            }
        }
    }

    /// Serialize the instance to its JSON representation.
    pub fn to_json(&self) -> String {
        let raw = match &self.kind {
            InstanceKind::Independent { grid } => InstanceJson {
                label: self.label.clone(),
                items: self.n_items,
                buyers: self.n_buyers,
                grid: Some(
                    grid.iter()
                        .map(|row| {
                            row.iter()
                                .map(|d| DistJson {
                                    support: d.support().to_vec(),
                                    probs: d.probs().to_vec(),
                                })
                                .collect()
                        })
                        .collect(),
                ),
                joint: None,
            },
            InstanceKind::Correlated { joint } => InstanceJson {
                label: self.label.clone(),
                items: self.n_items,
                buyers: 1,
                grid: None,
                joint: Some(JointJson {
                    support: joint.support().to_vec(),
                    probs: joint.probs().to_vec(),
                }),
            },
        };
        serde_json::to_string_pretty(&raw).expect("instance serialization cannot fail")
    }

    /// Load an instance from a JSON file.
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        MarketInstance::from_json(&text)
    }
}

fn parse_dist(d: DistJson, path: &str) -> Result<DiscreteDist> {
    if d.support.len() != d.probs.len() {
        return Err(Error::Schema {
            path: format!("{path}.probs"),
            message: "support and probs lengths differ".into(),
        });
    }
    let total = neumaier_sum(&d.probs);
    if (total - 1.0).abs() > LOAD_PROB_TOL {
        return Err(Error::Schema {
            path: format!("{path}.probs"),
            message: format!("probabilities sum to {total}, expected 1 within {LOAD_PROB_TOL}"),
        });
    }
    let renorm: Vec<(f64, f64)> = d
        .support
        .iter()
        .zip(&d.probs)
        .map(|(&v, &p)| (v, p / total))
        .collect();
    DiscreteDist::new(renorm).map_err(|e| match e {
        Error::InvalidParameter { field, message } => Error::Schema {
            path: format!("{path}.{field}"),
            message,
        },
        other => other,
    })
}
