//! Dense primal simplex for small linear programs.
//!
//! Solves  maximize c'x  subject to  Ax <= b, x >= 0  with b >= 0, which is
//! exactly the shape of the menu LPs built in [`crate::menu_lp`] (the origin
//! is always feasible there, so no phase-one is needed).
//!
//! The menu LPs are heavily degenerate (most right-hand sides are zero), so
//! the right-hand side is perturbed by distinct epsilons on the order of
//! [`RHS_PERTURBATION`]; pivots then strictly improve and cycling cannot
//! occur. The reported objective is recomputed from the unperturbed data; the
//! perturbation can leave constraint slack of that same order, which sits far
//! below every certification tolerance in the crate. A Bland's-rule fallback
//! after a degenerate stall backstops the rare ties that survive.

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-9;
const MAX_ITERS: usize = 500_000;
const STALL_LIMIT: usize = 64;

/// Scale of the anti-degeneracy right-hand-side perturbation.
pub const RHS_PERTURBATION: f64 = 1e-9;

/// An optimal basic solution.
#[derive(Clone, Debug)]
pub struct SimplexSolution {
    /// Values of the structural variables.
    pub x: Vec<f64>,
    /// Optimal objective value.
    pub objective: f64,
    /// Pivots performed.
    pub iterations: usize,
}

/// Maximize `objective . x` subject to `rows[i].0 . x <= rows[i].1`, `x >= 0`.
///
/// Every right-hand side must be nonnegative (slack basis feasible).
pub fn solve_max(objective: &[f64], rows: &[(Vec<f64>, f64)]) -> Result<SimplexSolution> {
    let n = objective.len();
    let m = rows.len();
    for (i, (coeffs, rhs)) in rows.iter().enumerate() {
        if coeffs.len() != n {
            return Err(Error::Solver(format!("row {i} has {} coefficients, expected {n}", coeffs.len())));
        }
        if *rhs < 0.0 {
            return Err(Error::Solver(format!("row {i} has negative rhs {rhs}")));
        }
    }
    let width = n + m + 1; // structural + slack + rhs
    let mut tab: Vec<f64> = vec![0.0; m * width];
    for (i, (coeffs, rhs)) in rows.iter().enumerate() {
        let row = &mut tab[i * width..(i + 1) * width];
        row[..n].copy_from_slice(coeffs);
        row[n + i] = 1.0;
        row[width - 1] = *rhs + RHS_PERTURBATION * (1.0 + i as f64 / m.max(1) as f64);
    }
    // Reduced-cost row; positive entries improve a maximization.
    let mut obj: Vec<f64> = vec![0.0; width];
    obj[..n].copy_from_slice(objective);
    let mut basis: Vec<usize> = (n..n + m).collect();

    let mut iters = 0usize;
    let mut stall = 0usize;
    let mut last_obj = 0.0f64;
    loop {
        if iters > MAX_ITERS {
            return Err(Error::Solver(format!("iteration limit {MAX_ITERS} exceeded")));
        }
        let bland = stall >= STALL_LIMIT;
        // Entering column.
        let mut enter: Option<usize> = None;
        if bland {
            enter = obj[..n + m].iter().position(|&c| c > PIVOT_TOL);
        } else {
            let mut best = PIVOT_TOL;
            for (j, &c) in obj[..n + m].iter().enumerate() {
                if c > best {
                    best = c;
                    enter = Some(j);
                }
            }
        }
        let Some(e) = enter else {
            break; // optimal
        };
        // Ratio test.
        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for i in 0..m {
            let a = tab[i * width + e];
            if a > PIVOT_TOL {
                let ratio = tab[i * width + width - 1] / a;
                let better = ratio < best_ratio - 1e-12
                    || ((ratio - best_ratio).abs() <= 1e-12
                        && leave.is_some_and(|l| basis[i] < basis[l]));
                if leave.is_none() || better {
                    best_ratio = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(r) = leave else {
            return Err(Error::Solver("objective unbounded".into()));
        };

        pivot(&mut tab, &mut obj, width, m, r, e);
        basis[r] = e;
        iters += 1;

        let cur = -obj[width - 1];
        if cur > last_obj + 1e-12 {
            stall = 0;
            last_obj = cur;
        } else {
            stall += 1;
        }
    }

    let mut x = vec![0.0; n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = tab[i * width + width - 1];
        }
    }
    // Purify: re-solve the basis system against the unperturbed right-hand
    // side, clearing both the perturbation offset and accumulated pivot drift.
    if let Some(clean) = purify(&basis, rows, n) {
        x = clean;
    }
    // Report the objective of the unperturbed program at this vertex.
    let objective = objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(SimplexSolution {
        x,
        objective,
        iterations: iters,
    })
}

/// Solve B z = b for the basis columns (structural columns of `rows`, or unit
/// slack columns) by Gaussian elimination with partial pivoting, and scatter
/// the basic structural values into an x vector. Returns None on a (numerically)
/// singular basis.
fn purify(basis: &[usize], rows: &[(Vec<f64>, f64)], n: usize) -> Option<Vec<f64>> {
    let m = rows.len();
    let mut mat = vec![0.0f64; m * m];
    let mut rhs: Vec<f64> = rows.iter().map(|(_, b)| *b).collect();
    for (j, &var) in basis.iter().enumerate() {
        if var < n {
            for i in 0..m {
                mat[i * m + j] = rows[i].0[var];
            }
        } else {
            mat[(var - n) * m + j] = 1.0;
        }
    }
    // Forward elimination.
    let mut perm: Vec<usize> = (0..m).collect();
    for col in 0..m {
        let (mut best_row, mut best_val) = (col, mat[perm[col] * m + col].abs());
        for (r, &p) in perm.iter().enumerate().skip(col + 1) {
            let v = mat[p * m + col].abs();
            if v > best_val {
                best_row = r;
                best_val = v;
            }
        }
        if best_val < 1e-12 {
            return None;
        }
        perm.swap(col, best_row);
        let p = perm[col];
        let inv = 1.0 / mat[p * m + col];
        for &row in perm.iter().skip(col + 1) {
            let factor = mat[row * m + col] * inv;
            if factor != 0.0 {
                for c in col..m {
                    mat[row * m + c] -= factor * mat[p * m + c];
                }
                rhs[row] -= factor * rhs[p];
            }
        }
    }
    // Back substitution.
    let mut z = vec![0.0f64; m];
    for col in (0..m).rev() {
        let p = perm[col];
        let mut acc = rhs[p];
        for c in col + 1..m {
            acc -= mat[p * m + c] * z[c];
        }
        z[col] = acc / mat[p * m + col];
    }
    let mut x = vec![0.0f64; n];
    for (j, &var) in basis.iter().enumerate() {
        if var < n {
            x[var] = z[j];
        }
    }
    Some(x)
}

fn pivot(tab: &mut [f64], obj: &mut [f64], width: usize, m: usize, r: usize, e: usize) {
    let inv = 1.0 / tab[r * width + e];
    for j in 0..width {
        tab[r * width + j] *= inv;
    }
    tab[r * width + e] = 1.0;
    // Split borrows around the pivot row.
    let (before, rest) = tab.split_at_mut(r * width);
    let (prow, after) = rest.split_at_mut(width);
    for (i, row) in before
        .chunks_exact_mut(width)
        .chain(after.chunks_exact_mut(width))
        .enumerate()
    {
        let _ = i;
        let factor = row[e];
        if factor != 0.0 {
            for j in 0..width {
                row[j] -= factor * prow[j];
            }
            row[e] = 0.0;
        }
    }
    let factor = obj[e];
    if factor != 0.0 {
        for j in 0..width {
            obj[j] -= factor * prow[j];
        }
        obj[e] = 0.0;
    }
    debug_assert!(m * width == before.len() + width + after.len());
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_lp() {
        // max 3x + 5y st x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), obj 36
        let sol = solve_max(
            &[3.0, 5.0],
            &[
                (vec![1.0, 0.0], 4.0),
                (vec![0.0, 2.0], 12.0),
                (vec![3.0, 2.0], 18.0),
            ],
        )
        .unwrap();
        assert!((sol.objective - 36.0).abs() <= 1e-9);
        assert!((sol.x[0] - 2.0).abs() <= 1e-9);
        assert!((sol.x[1] - 6.0).abs() <= 1e-9);
    }

    #[test]
    fn degenerate_rows_at_zero() {
        // x - y <= 0 and y <= 1 with max x: optimum x = y = 1.
        let sol = solve_max(&[1.0, 0.0], &[(vec![1.0, -1.0], 0.0), (vec![0.0, 1.0], 1.0)]).unwrap();
        assert!((sol.objective - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn unbounded_detected() {
        assert!(matches!(
            solve_max(&[1.0], &[(vec![-1.0], 1.0)]),
            Err(Error::Solver(_))
        ));
    }

    #[test]
    fn zero_objective() {
        let sol = solve_max(&[0.0, 0.0], &[(vec![1.0, 1.0], 1.0)]).unwrap();
        assert_eq!(sol.objective, 0.0);
    }

    #[test]
    fn negative_rhs_rejected() {
        assert!(solve_max(&[1.0], &[(vec![1.0], -1.0)]).is_err());
    }
}
