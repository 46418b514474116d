//! Finite-support value distributions and exact algebra over them.
//!
//! [`DiscreteDist`] is the atom of the whole crate: a one-dimensional
//! distribution with a strictly increasing nonnegative support and positive
//! probabilities summing to one. All operations (convolution, maximum,
//! conditioning, scaling) return fully re-validated distributions; atoms whose
//! values coincide within [`VALUE_MERGE_TOL`] are merged.

use crate::error::{Error, Result};

/// Absolute tolerance for merging atoms with (numerically) equal values.
pub const VALUE_MERGE_TOL: f64 = 1e-12;

/// Tolerance on the total probability mass of a constructed distribution.
pub const PROB_SUM_TOL: f64 = 1e-12;

/// Default number of grid atoms used by [`er_truncated`].
pub const ER_DEFAULT_ATOMS: usize = 64;

/// A finite-support distribution over nonnegative values.
///
/// Invariants (checked on every construction):
/// * support strictly increasing, all values finite and `>= 0`,
/// * probabilities strictly positive, same length as the support,
/// * probabilities sum to one within [`PROB_SUM_TOL`].
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteDist {
    support: Vec<f64>,
    probs: Vec<f64>,
}

impl DiscreteDist {
    /// Build a distribution from (value, probability) atoms.
    ///
    /// Atoms may arrive unsorted and may repeat values; equal values (within
    /// [`VALUE_MERGE_TOL`]) are merged and zero-probability atoms dropped.
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        let mut atoms = atoms;
        for &(v, p) in &atoms {
            if !v.is_finite() {
                return Err(Error::invalid("support", format!("non-finite value {v}")));
            }
            if v < 0.0 {
                return Err(Error::invalid("support", format!("negative value {v}")));
            }
            if !p.is_finite() || p < 0.0 {
                return Err(Error::invalid("probs", format!("invalid probability {p}")));
            }
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut support = Vec::with_capacity(atoms.len());
        let mut probs: Vec<f64> = Vec::with_capacity(atoms.len());
        for (v, p) in atoms {
            if p == 0.0 {
                continue;
            }
            match support.last() {
                Some(&last) if v - last <= VALUE_MERGE_TOL => {
                    *probs.last_mut().expect("parallel vectors") += p;
                }
                _ => {
                    support.push(v);
                    probs.push(p);
                }
            }
        }
        if support.is_empty() {
            return Err(Error::invalid("probs", "no positive-probability atoms"));
        }
        let total: f64 = neumaier_sum(&probs);
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::invalid(
                "probs",
                format!("probabilities sum to {total}, expected 1"),
            ));
        }
        // Remove the residual rounding drift so downstream sums stay tight.
        if total != 1.0 {
            for p in &mut probs {
                *p /= total;
            }
        }
        Ok(DiscreteDist { support, probs })
    }

    /// The distribution putting all mass on a single value.
    pub fn point_mass(v: f64) -> Self {
        DiscreteDist::new(vec![(v, 1.0)]).expect("point mass is always valid")
    }

    /// Support values, strictly increasing.
    pub fn support(&self) -> &[f64] {
        &self.support
    }

    /// Probabilities, parallel to [`Self::support`].
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Number of atoms.
    pub fn len(&self) -> usize {
        self.support.len()
    }

    /// Always false; a valid distribution has at least one atom.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// True when the distribution is a single point mass.
    pub fn is_point_mass(&self) -> bool {
        self.support.len() == 1
    }

    /// Iterate over (value, probability) atoms in increasing value order.
    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.support.iter().copied().zip(self.probs.iter().copied())
    }

    /// Largest support value.
    pub fn max_value(&self) -> f64 {
        *self.support.last().expect("nonempty support")
    }

    /// Smallest support value.
    pub fn min_value(&self) -> f64 {
        self.support[0]
    }

    /// Expected value.
    pub fn mean(&self) -> f64 {
        neumaier_sum_iter(self.atoms().map(|(v, p)| v * p))
    }

    /// Variance `E[X^2] - E[X]^2`, clamped at zero against rounding.
    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        let second = neumaier_sum_iter(self.atoms().map(|(v, p)| v * v * p));
        (second - mean * mean).max(0.0)
    }

    /// `Pr[X >= x]`.
    pub fn pr_geq(&self, x: f64) -> f64 {
        let idx = self.support.partition_point(|&v| v < x);
        neumaier_sum(&self.probs[idx..])
    }

    /// `Pr[X > x]`.
    pub fn pr_gt(&self, x: f64) -> f64 {
        let idx = self.support.partition_point(|&v| v <= x);
        neumaier_sum(&self.probs[idx..])
    }

    /// Distribution of X + Y for independent X ~ self, Y ~ other.
    pub fn convolve(&self, other: &DiscreteDist) -> Result<Self> {
        self.convolve_capped(other, u64::MAX)
    }

    /// Convolution with a cap on the size of the merged support.
    pub fn convolve_capped(&self, other: &DiscreteDist, cap: u64) -> Result<Self> {
        // Adding a constant preserves order; shift in place.
        if other.is_point_mass() {
            let shift = other.support[0];
            return Ok(DiscreteDist {
                support: self.support.iter().map(|v| v + shift).collect(),
                probs: self.probs.clone(),
            });
        }
        if self.is_point_mass() {
            return other.convolve_capped(self, cap);
        }
        let raw = self.len() as u64 * other.len() as u64;
        if raw > cap {
            return Err(Error::SizeCap {
                what: "convolution support",
                size: raw,
                cap,
            });
        }
        let mut atoms = Vec::with_capacity((self.len() * other.len()).min(1 << 20));
        for (va, pa) in self.atoms() {
            for (vb, pb) in other.atoms() {
                atoms.push((va + vb, pa * pb));
            }
        }
        DiscreteDist::new(atoms)
    }

    /// Distribution of max(X, Y) for independent X ~ self, Y ~ other.
    pub fn max_dist(&self, other: &DiscreteDist) -> Result<Self> {
        // Pr[max = z] = Fa(z)Fb(z) - Fa(z-)Fb(z-) on the union support.
        let mut values: Vec<f64> = Vec::with_capacity(self.len() + other.len());
        values.extend_from_slice(&self.support);
        values.extend_from_slice(&other.support);
        values.sort_by(f64::total_cmp);
        values.dedup_by(|a, b| *a - *b <= VALUE_MERGE_TOL);

        let mut atoms = Vec::with_capacity(values.len());
        let (mut ia, mut ib) = (0usize, 0usize);
        let (mut cdf_a, mut cdf_b) = (0.0f64, 0.0f64);
        let mut prev = 0.0f64;
        for &z in &values {
            while ia < self.len() && self.support[ia] <= z + VALUE_MERGE_TOL {
                cdf_a += self.probs[ia];
                ia += 1;
            }
            while ib < other.len() && other.support[ib] <= z + VALUE_MERGE_TOL {
                cdf_b += other.probs[ib];
                ib += 1;
            }
            let cur = cdf_a * cdf_b;
            atoms.push((z, (cur - prev).max(0.0)));
            prev = cur;
        }
        DiscreteDist::new(atoms)
    }

    /// Condition on the threshold θ: returns (core, tail, p_tail) where
    /// core = `X | X <= θ`, tail = `X | X > θ` and p_tail = `Pr[X > θ]`.
    ///
    /// A conditioning event of probability zero yields `None` for the
    /// corresponding part (the "null distribution").
    pub fn condition_split(&self, theta: f64) -> Result<(Option<Self>, Option<Self>, f64)> {
        if !(theta >= 0.0) {
            return Err(Error::invalid("theta", format!("must be >= 0, got {theta}")));
        }
        let cut = self.support.partition_point(|&v| v <= theta);
        let p_tail = neumaier_sum(&self.probs[cut..]);
        let core = if cut == 0 {
            None
        } else {
            let mass = 1.0 - p_tail;
            Some(DiscreteDist::new(
                self.atoms().take(cut).map(|(v, p)| (v, p / mass)).collect(),
            )?)
        };
        let tail = if cut == self.len() {
            None
        } else {
            Some(DiscreteDist::new(
                self.atoms().skip(cut).map(|(v, p)| (v, p / p_tail)).collect(),
            )?)
        };
        Ok((core, tail, p_tail))
    }

    /// Distribution of λ·X for λ > 0.
    pub fn scale(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::invalid("lambda", format!("must be > 0, got {lambda}")));
        }
        DiscreteDist::new(self.atoms().map(|(v, p)| (v * lambda, p)).collect())
    }

    /// Inverse-CDF sample for a uniform draw u in [0, 1).
    pub fn sample_u01(&self, u: f64) -> f64 {
        let mut acc = 0.0;
        for (v, p) in self.atoms() {
            acc += p;
            if u < acc {
                return v;
            }
        }
        self.max_value()
    }
}

/// Compensated (Neumaier) summation of a slice.
pub(crate) fn neumaier_sum(xs: &[f64]) -> f64 {
    neumaier_sum_iter(xs.iter().copied())
}

/// Compensated (Neumaier) summation of an iterator.
pub(crate) fn neumaier_sum_iter(xs: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Equal-Revenue distribution truncated at `m`, on a geometric grid with
/// [`ER_DEFAULT_ATOMS`] atoms.
///
/// Pr[v >= x] = 1/x is preserved at every grid point, and all mass above the
/// truncation level sits in an atom at `m`, so every posted grid price `p <= m`
/// earns revenue exactly 1.
pub fn er_truncated(m: f64) -> Result<DiscreteDist> {
    er_truncated_grid(m, ER_DEFAULT_ATOMS)
}

/// Equal-Revenue distribution truncated at `m` on a geometric grid with a
/// chosen number of atoms.
pub fn er_truncated_grid(m: f64, atoms: usize) -> Result<DiscreteDist> {
    if !(m >= 1.0) {
        return Err(Error::invalid("m", format!("truncation must be >= 1, got {m}")));
    }
    if atoms == 0 {
        return Err(Error::invalid("atoms", "grid needs at least one atom"));
    }
    if m == 1.0 || atoms == 1 {
        return Ok(DiscreteDist::point_mass(m.max(1.0)));
    }
    let g = atoms;
    let mut grid: Vec<f64> = (0..g)
        .map(|j| m.powf(j as f64 / (g - 1) as f64))
        .collect();
    grid.dedup_by(|a, b| *a - *b <= VALUE_MERGE_TOL);
    let mut dist_atoms = Vec::with_capacity(grid.len());
    for (j, &x) in grid.iter().enumerate() {
        let tail_here = 1.0 / x;
        let tail_next = if j + 1 < grid.len() { 1.0 / grid[j + 1] } else { 0.0 };
        dist_atoms.push((x, tail_here - tail_next));
    }
    DiscreteDist::new(dist_atoms)
}

/// Uniform distribution with `k` equally spaced midpoint atoms on [a, b].
pub fn uniform_grid(a: f64, b: f64, k: usize) -> Result<DiscreteDist> {
    if !(a < b) {
        return Err(Error::invalid("a", format!("need a < b, got a={a}, b={b}")));
    }
    if a < 0.0 {
        return Err(Error::invalid("a", "values must be nonnegative"));
    }
    if k < 2 {
        return Err(Error::invalid("k", format!("need at least 2 atoms, got {k}")));
    }
    let step = (b - a) / k as f64;
    DiscreteDist::new(
        (0..k)
            .map(|i| (a + (i as f64 + 0.5) * step, 1.0 / k as f64))
            .collect(),
    )
}

/// Mixture q·d + (1-q)·point_mass(0).
pub fn zero_inflate(d: &DiscreteDist, q: f64) -> Result<DiscreteDist> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::invalid("q", format!("must lie in [0,1], got {q}")));
    }
    if q == 1.0 {
        return Ok(d.clone());
    }
    let mut atoms = vec![(0.0, 1.0 - q)];
    atoms.extend(d.atoms().map(|(v, p)| (v, p * q)));
    DiscreteDist::new(atoms)
}

/// Convolution power: the distribution of the sum of `k` independent copies.
///
/// `cap` bounds the merged support after every step; the transient pre-merge
/// pair count is allowed to reach cap * |d|.
pub fn convolve_power(d: &DiscreteDist, k: usize, cap: u64) -> Result<DiscreteDist> {
    if k == 0 {
        return Ok(DiscreteDist::point_mass(0.0));
    }
    let step_cap = cap.saturating_mul(d.len() as u64);
    let mut acc = d.clone();
    for _ in 1..k {
        acc = acc.convolve_capped(d, step_cap)?;
        if acc.len() as u64 > cap {
            return Err(Error::SizeCap {
                what: "convolution support",
                size: acc.len() as u64,
                cap,
            });
        }
    }
    Ok(acc)
}
