//! Regression error diagnostics: RMSE and the deleted (leave-one-out) MSE.
//!
//! For a least-squares fit with `p` parameters on `n` records, residual `eᵢ`
//! and leverage `Hᵢᵢ`, the deleted MSE is
//! `MSE₍ᵢ₎ = ((n − p)·MSE − eᵢ²/(1 − Hᵢᵢ)) / (n − p − 1)` with
//! `MSE = Σe²/(n − p)`. It equals the residual variance of the refit that
//! leaves record `i` out.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagnosticError {
    #[error("deleted MSE undefined: n = {n} records with p = {p} parameters (needs n > p + 1)")]
    TooFewRecords { n: usize, p: usize },
    #[error("record {index}: leverage {leverage} leaves no residual degrees of freedom")]
    FullLeverage { index: usize, leverage: f64 },
    #[error("{residuals} residuals but {leverage} leverages")]
    Shape { residuals: usize, leverage: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecordDiagnostics {
    pub residual: f64,
    pub leverage: Option<f64>,
    pub deleted_mse: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalDiagnostics {
    /// `Σe²/n`.
    pub mse: f64,
    pub rmse: f64,
    pub n: usize,
    /// Consequent parameter count, when the model has one.
    pub p: Option<usize>,
    pub per_record: Vec<RecordDiagnostics>,
}

impl EvalDiagnostics {
    /// Plain error summary without leverage information.
    pub fn from_residuals(residuals: &[f64]) -> Self {
        let n = residuals.len();
        let mse = if n == 0 {
            0.0
        } else {
            residuals.iter().map(|e| e * e).sum::<f64>() / n as f64
        };
        EvalDiagnostics {
            mse,
            rmse: mse.sqrt(),
            n,
            p: None,
            per_record: residuals
                .iter()
                .map(|&residual| RecordDiagnostics {
                    residual,
                    leverage: None,
                    deleted_mse: None,
                })
                .collect(),
        }
    }

    /// Adds leverages and, where defined, deleted MSEs. The error summary is
    /// kept even when the deleted MSE cannot be computed; the error is
    /// returned alongside.
    pub fn with_leverage(residuals: &[f64], leverage: &[f64], p: usize) -> (Self, Option<DiagnosticError>) {
        let mut diag = Self::from_residuals(residuals);
        diag.p = Some(p);
        for (r, &h) in diag.per_record.iter_mut().zip(leverage) {
            r.leverage = Some(h);
        }
        match deleted_mse(residuals, leverage, p) {
            Ok(d) => {
                for (r, v) in diag.per_record.iter_mut().zip(d) {
                    r.deleted_mse = Some(v);
                }
                (diag, None)
            }
            Err(e) => (diag, Some(e)),
        }
    }
}

pub fn deleted_mse(residuals: &[f64], leverage: &[f64], p: usize) -> Result<Vec<f64>, DiagnosticError> {
    let n = residuals.len();
    if leverage.len() != n {
        return Err(DiagnosticError::Shape {
            residuals: n,
            leverage: leverage.len(),
        });
    }
    if n <= p + 1 {
        return Err(DiagnosticError::TooFewRecords { n, p });
    }
    let sse: f64 = residuals.iter().map(|e| e * e).sum();
    let dof = (n - p - 1) as f64;
    residuals
        .iter()
        .zip(leverage)
        .enumerate()
        .map(|(index, (e, &h))| {
            let slack = 1.0 - h;
            if !(slack > 1e-12) {
                return Err(DiagnosticError::FullLeverage { index, leverage: h });
            }
            Ok((sse - e * e / slack) / dof)
        })
        .collect()
}
