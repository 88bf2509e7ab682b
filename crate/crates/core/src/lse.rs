//! Ridge-regularized least squares.
//!
//! Minimizes `‖Xθ − y‖² + λ‖θ‖²` by a thin QR factorization of the stacked
//! matrix `[X; √λ·I]`, which avoids squaring the condition number the way the
//! normal equations would. With `A = QR`, the ridge projector is
//! `X (XᵀX + λI)⁻¹ Xᵀ = Q₁Q₁ᵀ` where `Q₁` is the top `N` rows of `Q`, so the
//! leverages are the squared row norms of `Q₁`.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LseError {
    #[error("least-squares system is singular (rank deficient even with ridge {ridge})")]
    Singular { ridge: f64 },
    #[error("design has {rows} rows but {targets} targets")]
    Shape { rows: usize, targets: usize },
}

#[derive(Debug, Clone)]
pub struct LseFit {
    pub theta: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Diagonal of the (ridge) hat matrix.
    pub leverage: Vec<f64>,
}

/// `design` is row-major with `cols` columns.
pub fn ridge_solve(design: &[f64], cols: usize, targets: &[f64], ridge: f64) -> Result<LseFit, LseError> {
    let rows = targets.len();
    if design.len() != rows * cols {
        return Err(LseError::Shape {
            rows: design.len() / cols.max(1),
            targets: rows,
        });
    }
    let x = DMatrix::from_row_slice(rows, cols, design);
    let y = DVector::from_column_slice(targets);

    let ridge_rows = if ridge > 0.0 { cols } else { 0 };
    let total = rows + ridge_rows;
    if total < cols || cols == 0 {
        return Err(LseError::Singular { ridge });
    }
    let mut a = DMatrix::zeros(total, cols);
    a.view_mut((0, 0), (rows, cols)).copy_from(&x);
    let sqrt_ridge = ridge.max(0.0).sqrt();
    for j in 0..ridge_rows {
        a[(rows + j, j)] = sqrt_ridge;
    }
    let mut b = DVector::zeros(total);
    b.rows_mut(0, rows).copy_from(&y);

    let qr = a.qr();
    let q = qr.q();
    let r = qr.r();
    let diag_max = r.diagonal().iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let tol = diag_max * f64::EPSILON * (total.max(cols) as f64);
    if !diag_max.is_finite() || r.diagonal().iter().any(|d| !(d.abs() > tol)) {
        return Err(LseError::Singular { ridge });
    }
    let qtb = q.transpose() * &b;
    let theta = r.solve_upper_triangular(&qtb).ok_or(LseError::Singular { ridge })?;
    if theta.iter().any(|t| !t.is_finite()) {
        return Err(LseError::Singular { ridge });
    }

    let fitted = &x * &theta;
    let residuals: Vec<f64> = y.iter().zip(fitted.iter()).map(|(yi, fi)| yi - fi).collect();
    let leverage = (0..rows).map(|i| q.row(i).norm_squared().clamp(0.0, 1.0)).collect();
    Ok(LseFit {
        theta: theta.iter().copied().collect(),
        residuals,
        leverage,
    })
}

/// The ridge objective `‖Xθ − y‖² + λ‖θ‖²`.
pub fn ridge_objective(design: &[f64], cols: usize, targets: &[f64], ridge: f64, theta: &[f64]) -> f64 {
    let sse: f64 = design
        .chunks(cols)
        .zip(targets)
        .map(|(row, y)| {
            let f: f64 = row.iter().zip(theta).map(|(a, t)| a * t).sum();
            (y - f).powi(2)
        })
        .sum();
    sse + ridge * theta.iter().map(|t| t * t).sum::<f64>()
}

/// Gradient of [`ridge_objective`] with respect to `theta`.
pub fn ridge_gradient(design: &[f64], cols: usize, targets: &[f64], ridge: f64, theta: &[f64]) -> Vec<f64> {
    let mut g: Vec<f64> = theta.iter().map(|t| 2.0 * ridge * t).collect();
    for (row, y) in design.chunks(cols).zip(targets) {
        let f: f64 = row.iter().zip(theta).map(|(a, t)| a * t).sum();
        let e = f - y;
        for (gj, a) in g.iter_mut().zip(row) {
            *gj += 2.0 * e * a;
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_fit() {
        // y = 2x + 1
        let xs = [0.0, 1.0, 2.0, 3.0];
        let design: Vec<f64> = xs.iter().flat_map(|&x| [x, 1.0]).collect();
        let y: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        let fit = ridge_solve(&design, 2, &y, 0.0).unwrap();
        assert!((fit.theta[0] - 2.0).abs() < 1e-12);
        assert!((fit.theta[1] - 1.0).abs() < 1e-12);
        assert!(fit.residuals.iter().all(|r| r.abs() < 1e-12));
        // OLS leverages sum to the parameter count.
        let trace: f64 = fit.leverage.iter().sum();
        assert!((trace - 2.0).abs() < 1e-12);
    }

    #[test]
    fn huge_ridge_shrinks_to_zero() {
        let design = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let y = [1.0, 2.0, 3.0];
        let fit = ridge_solve(&design, 2, &y, 1e12).unwrap();
        assert!(fit.theta.iter().all(|t| t.abs() < 1e-9));
    }

    #[test]
    fn underdetermined_needs_ridge() {
        let design = [1.0, 2.0, 3.0];
        let y = [1.0];
        assert!(matches!(
            ridge_solve(&design, 3, &y, 0.0),
            Err(LseError::Singular { .. })
        ));
        let fit = ridge_solve(&design, 3, &y, 1e-8).unwrap();
        assert!(fit.residuals[0].abs() < 1e-6);
    }

    #[test]
    fn collinear_columns_are_singular_without_ridge() {
        let design = [1.0, 2.0, 2.0, 4.0, 3.0, 6.0];
        let y = [1.0, 2.0, 3.0];
        assert!(matches!(
            ridge_solve(&design, 2, &y, 0.0),
            Err(LseError::Singular { .. })
        ));
        assert!(ridge_solve(&design, 2, &y, 1e-8).is_ok());
    }

    #[test]
    fn shape_mismatch() {
        assert!(matches!(
            ridge_solve(&[1.0, 2.0, 3.0], 2, &[1.0], 0.0),
            Err(LseError::Shape { .. })
        ));
    }
}
