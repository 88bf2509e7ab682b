//! Hybrid ANFIS learning on first-order TSK models.
//!
//! Each epoch runs a forward pass that fixes the premise (membership)
//! parameters and identifies the consequent coefficients by ridge least
//! squares, then a backward pass that fixes the consequents and moves every
//! premise parameter down the gradient of the squared error. The gradient
//! is assembled by the chain rule through normalization and the t-norm.

use thiserror::Error;

use crate::dataset::Dataset;
use crate::inference::{self, degrees, linear_consequent, raw_strengths, InferenceError};
use crate::lse::{ridge_solve, LseError, LseFit};
use crate::mf::{MembershipFunction, MfError, MfKind};
use crate::model::{Consequent, FisModel, LinguisticVariable, Mode, ModelError, Output, Rule, TNorm, Term};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnfisError {
    #[error("variable `{0}` has no terms")]
    EmptyVariable(String),
    #[error("training requires a TSK model")]
    NotTsk,
    #[error("dataset is empty")]
    EmptyData,
    #[error("dataset arity {got} does not match model inputs {expected}")]
    Arity { expected: usize, got: usize },
    #[error("{} record(s) fire no rule: {indices:?}", indices.len())]
    ZeroFiringRecord { indices: Vec<usize> },
    #[error(transparent)]
    Lse(#[from] LseError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Mf(#[from] MfError),
    #[error(transparent)]
    Inference(#[from] InferenceError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learn_rate: f64,
    pub ridge: f64,
    /// Training stops once the epoch-over-epoch RMSE improvement drops below this.
    pub tol: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 50,
            learn_rate: 0.01,
            ridge: 1e-8,
            tol: 1e-6,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    pub rmse_per_epoch: Vec<f64>,
    /// RMSE of the returned model. Differs from the last trace entry only
    /// when the last epoch was rolled back.
    pub final_train_rmse: f64,
    pub final_test_rmse: Option<f64>,
    pub epochs_run: usize,
    pub stopped_early: bool,
    /// Training records that fired no rule, per epoch.
    pub excluded_per_epoch: Vec<usize>,
    /// Test records that fired no rule.
    pub test_excluded: usize,
}

/// Grid-partition TSK model: one rule per combination of input terms, each
/// term re-expressed in `kind` from its bounds, all coefficients zero.
pub fn build_grid_anfis(
    inputs: &[LinguisticVariable],
    kind: MfKind,
    output_name: &str,
    output_range: (f64, f64),
) -> Result<FisModel, AnfisError> {
    let mut vars = Vec::with_capacity(inputs.len());
    for v in inputs {
        if v.terms().is_empty() {
            return Err(AnfisError::EmptyVariable(v.name().to_string()));
        }
        let terms = v
            .terms()
            .iter()
            .map(|t| {
                let b = t.mf.bounds();
                Ok(Term::new(
                    t.label.clone(),
                    MembershipFunction::from_bounds(kind, b.left, b.mean, b.right)?,
                ))
            })
            .collect::<Result<Vec<_>, MfError>>()?;
        let (lo, hi) = v.range();
        vars.push(LinguisticVariable::new(v.name(), lo, hi, terms)?);
    }
    let sizes: Vec<usize> = vars.iter().map(|v| v.terms().len()).collect();
    let coeffs = vars.len() + 1;
    let rules = grid_antecedents(&sizes)
        .into_iter()
        .map(|a| Rule::new(a, Consequent::Linear(vec![0.0; coeffs])))
        .collect();
    let output = Output::Tsk {
        name: output_name.to_string(),
        lo: output_range.0,
        hi: output_range.1,
    };
    Ok(FisModel::new(vars, output, rules, TNorm::Product)?)
}

/// Every term-index combination, lexicographic with the first variable most
/// significant.
pub fn grid_antecedents(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(sizes.len())];
    for &n in sizes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..n).map(move |t| {
                    let mut a = prefix.clone();
                    a.push(t);
                    a
                })
            })
            .collect();
    }
    out
}

/// Row-major design matrix whose product with the rule-major coefficient
/// vector reproduces the TSK output.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    pub data: Vec<f64>,
    pub cols: usize,
    pub targets: Vec<f64>,
    /// Dataset index of each row.
    pub rows: Vec<usize>,
}

impl DesignMatrix {
    pub fn nrows(&self) -> usize {
        self.targets.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
}

fn check_tsk(model: &FisModel, data: &Dataset) -> Result<(), AnfisError> {
    if model.mode() != Mode::TskFirstOrder {
        return Err(AnfisError::NotTsk);
    }
    if let Some(got) = data.arity() {
        if got != model.inputs().len() {
            return Err(AnfisError::Arity {
                expected: model.inputs().len(),
                got,
            });
        }
    }
    Ok(())
}

/// Builds the design matrix, skipping records that fire no rule; returns the
/// skipped indices alongside.
pub fn design_matrix_skipping(model: &FisModel, data: &Dataset) -> Result<(DesignMatrix, Vec<usize>), AnfisError> {
    check_tsk(model, data)?;
    let n = model.inputs().len();
    let cols = model.rules().len() * (n + 1);
    let mut dm = DesignMatrix {
        data: Vec::with_capacity(data.len() * cols),
        cols,
        targets: Vec::with_capacity(data.len()),
        rows: Vec::with_capacity(data.len()),
    };
    let mut excluded = Vec::new();
    for (idx, s) in data.samples().iter().enumerate() {
        let x = model.clamp_input(&s.input);
        let w = raw_strengths(model, &degrees(model, &x));
        let total: f64 = w.iter().sum();
        if !(total > 0.0) {
            excluded.push(idx);
            continue;
        }
        for wi in &w {
            let wn = wi / total;
            dm.data.extend(x.iter().map(|xj| wn * xj));
            dm.data.push(wn);
        }
        dm.targets.push(s.target);
        dm.rows.push(idx);
    }
    Ok((dm, excluded))
}

pub fn design_matrix(model: &FisModel, data: &Dataset) -> Result<DesignMatrix, AnfisError> {
    let (dm, excluded) = design_matrix_skipping(model, data)?;
    if !excluded.is_empty() {
        return Err(AnfisError::ZeroFiringRecord { indices: excluded });
    }
    Ok(dm)
}

fn solve_and_store(model: &mut FisModel, dm: &DesignMatrix, ridge: f64) -> Result<LseFit, AnfisError> {
    if dm.nrows() == 0 {
        return Err(AnfisError::EmptyData);
    }
    let fit = ridge_solve(&dm.data, dm.cols, &dm.targets, ridge)?;
    model.set_consequent_params(&fit.theta);
    Ok(fit)
}

/// Least-squares identification of the consequent coefficients, written back
/// into `model`.
pub fn forward_lse(model: &mut FisModel, data: &Dataset, ridge: f64) -> Result<LseFit, AnfisError> {
    let dm = design_matrix(model, data)?;
    solve_and_store(model, &dm, ridge)
}

/// Flattened premise parameters: variable, then term, then parameter.
pub fn premise_params(model: &FisModel) -> Vec<f64> {
    model
        .inputs()
        .iter()
        .flat_map(|v| v.terms().iter().flat_map(|t| t.mf.params().iter().copied()))
        .collect()
}

/// Writes premise parameters in [`premise_params`] order, then projects
/// each membership function back to validity.
pub fn set_premise_params(model: &mut FisModel, params: &[f64]) {
    let mut it = params.iter();
    for v in model.inputs_mut() {
        for t in v.terms_mut() {
            for p in t.mf.params_mut() {
                *p = *it.next().expect("premise vector too short");
            }
            t.mf.project();
        }
    }
    assert!(it.next().is_none(), "premise vector too long");
}

/// Sum of squared errors over the records that fire at least one rule.
pub fn sse(model: &FisModel, data: &Dataset) -> Result<f64, AnfisError> {
    check_tsk(model, data)?;
    let mut total = 0.0;
    for s in data.samples() {
        match inference::tsk_output(model, &s.input) {
            Ok(y) => total += (y - s.target).powi(2),
            Err(InferenceError::ZeroFiring) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(total)
}

/// Gradient of [`sse`] with respect to [`premise_params`].
pub fn premise_gradient(model: &FisModel, data: &Dataset) -> Result<Vec<f64>, AnfisError> {
    check_tsk(model, data)?;
    let tnorm = model.tnorm();
    let inputs = model.inputs();
    let coeffs: Vec<&[f64]> = model
        .rules()
        .iter()
        .map(|r| match &r.consequent {
            Consequent::Linear(c) => c.as_slice(),
            Consequent::Term(_) => unreachable!("checked TSK"),
        })
        .collect();

    // dSSE/d(degree) per variable and term, then chained into parameters.
    let mut grad: Vec<Vec<Vec<f64>>> = inputs
        .iter()
        .map(|v| v.terms().iter().map(|t| vec![0.0; t.mf.params().len()]).collect())
        .collect();
    let mut d_deg: Vec<Vec<f64>> = inputs.iter().map(|v| vec![0.0; v.terms().len()]).collect();

    for s in data.samples() {
        let x = model.clamp_input(&s.input);
        let deg = degrees(model, &x);
        let w = raw_strengths(model, &deg);
        let total: f64 = w.iter().sum();
        if !(total > 0.0) {
            continue;
        }
        let f: Vec<f64> = coeffs.iter().map(|c| linear_consequent(c, &x)).collect();
        let y = w.iter().zip(&f).map(|(wi, fi)| wi * fi).sum::<f64>() / total;
        let de = 2.0 * (y - s.target);
        if de == 0.0 {
            continue;
        }
        for row in d_deg.iter_mut() {
            row.fill(0.0);
        }
        for (i, rule) in model.rules().iter().enumerate() {
            let dy_dw = de * (f[i] - y) / total;
            if dy_dw == 0.0 {
                continue;
            }
            let a = &rule.antecedent;
            match tnorm {
                TNorm::Product => {
                    for j in 0..a.len() {
                        let others: f64 = (0..a.len()).filter(|&k| k != j).map(|k| deg[k][a[k]]).product();
                        d_deg[j][a[j]] += dy_dw * others;
                    }
                }
                TNorm::Min => {
                    let mut arg = 0;
                    for k in 1..a.len() {
                        if deg[k][a[k]] < deg[arg][a[arg]] {
                            arg = k;
                        }
                    }
                    d_deg[arg][a[arg]] += dy_dw;
                }
            }
        }
        for (j, v) in inputs.iter().enumerate() {
            for (t, term) in v.terms().iter().enumerate() {
                let g = d_deg[j][t];
                if g == 0.0 {
                    continue;
                }
                for (acc, dp) in grad[j][t].iter_mut().zip(term.mf.grad_params(x[j])) {
                    *acc += g * dp;
                }
            }
        }
    }
    Ok(grad.into_iter().flatten().flatten().collect())
}

/// One gradient-descent step on the premise parameters, followed by
/// projection back onto valid membership functions.
pub fn backward_gd(model: &mut FisModel, data: &Dataset, learn_rate: f64) -> Result<(), AnfisError> {
    let g = premise_gradient(model, data)?;
    let mut p = premise_params(model);
    for (pi, gi) in p.iter_mut().zip(&g) {
        *pi -= learn_rate * gi;
    }
    set_premise_params(model, &p);
    Ok(())
}

fn rmse_of(residuals: &[f64]) -> f64 {
    if residuals.is_empty() {
        return 0.0;
    }
    (residuals.iter().map(|e| e * e).sum::<f64>() / residuals.len() as f64).sqrt()
}

/// RMSE of `model` on `data`, skipping records that fire no rule. Returns
/// the RMSE and the number skipped.
pub fn evaluate_rmse(model: &FisModel, data: &Dataset) -> Result<(f64, usize), AnfisError> {
    check_tsk(model, data)?;
    let mut residuals = Vec::with_capacity(data.len());
    let mut skipped = 0;
    for s in data.samples() {
        match inference::tsk_output(model, &s.input) {
            Ok(y) => residuals.push(s.target - y),
            Err(InferenceError::ZeroFiring) => skipped += 1,
            Err(e) => return Err(e.into()),
        }
    }
    Ok((rmse_of(&residuals), skipped))
}

pub fn train(
    model: &mut FisModel,
    train_data: &Dataset,
    test_data: Option<&Dataset>,
    cfg: &TrainConfig,
) -> Result<TrainReport, AnfisError> {
    check_tsk(model, train_data)?;
    if train_data.is_empty() || test_data.is_some_and(Dataset::is_empty) {
        return Err(AnfisError::EmptyData);
    }
    let epochs = cfg.epochs.max(1);
    let mut rmse_per_epoch = Vec::with_capacity(epochs);
    let mut excluded_per_epoch = Vec::with_capacity(epochs);
    let mut stopped_early = false;
    let mut final_train_rmse = None;
    let mut previous: Option<FisModel> = None;
    for epoch in 0..epochs {
        let (dm, excluded) = design_matrix_skipping(model, train_data)?;
        if dm.nrows() == 0 {
            return Err(AnfisError::ZeroFiringRecord { indices: excluded });
        }
        let fit = solve_and_store(model, &dm, cfg.ridge)?;
        let rmse = rmse_of(&fit.residuals);
        excluded_per_epoch.push(excluded.len());
        let last = rmse_per_epoch.last().copied();
        rmse_per_epoch.push(rmse);
        if let Some(prev) = last {
            if prev - rmse < cfg.tol {
                stopped_early = epoch + 1 < epochs;
                // A step that made things worse is undone.
                if rmse > prev {
                    if let Some(p) = previous.take() {
                        *model = p;
                        final_train_rmse = Some(prev);
                    }
                }
                break;
            }
        }
        // The last epoch keeps its premises so the stored consequents stay
        // the least-squares solution for them.
        if epoch + 1 < epochs {
            previous = Some(model.clone());
            backward_gd(model, train_data, cfg.learn_rate)?;
        }
    }
    let (final_test_rmse, test_excluded) = match test_data {
        Some(t) => {
            let (r, skipped) = evaluate_rmse(model, t)?;
            (Some(r), skipped)
        }
        None => (None, 0),
    };
    Ok(TrainReport {
        final_train_rmse: final_train_rmse.unwrap_or(*rmse_per_epoch.last().expect("at least one epoch")),
        epochs_run: rmse_per_epoch.len(),
        rmse_per_epoch,
        final_test_rmse,
        stopped_early,
        excluded_per_epoch,
        test_excluded,
    })
}

pub fn predict(model: &FisModel, input: &[f64]) -> Result<f64, InferenceError> {
    inference::tsk_output(model, input)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(name: &str, bounds: &[(f64, f64, f64)], lo: f64, hi: f64) -> LinguisticVariable {
        let terms = bounds
            .iter()
            .enumerate()
            .map(|(i, &(l, m, r))| Term::new(format!("t{i}"), MembershipFunction::triangular(l, m, r).unwrap()))
            .collect();
        LinguisticVariable::new(name, lo, hi, terms).unwrap()
    }

    #[test]
    fn grid_sizes() {
        let a = var("a", &[(0.0, 0.0, 1.0), (0.0, 1.0, 1.0)], 0.0, 1.0);
        let b = var("b", &[(0.0, 0.0, 2.0), (0.0, 1.0, 2.0), (0.0, 2.0, 2.0)], 0.0, 2.0);
        let m = build_grid_anfis(std::slice::from_ref(&a), MfKind::Gaussian, "y", (0.0, 1.0)).unwrap();
        assert_eq!(m.rules().len(), 2);
        assert_eq!(m.coeffs_per_rule(), 2);
        let m = build_grid_anfis(&[b, a], MfKind::Triangular, "y", (0.0, 1.0)).unwrap();
        assert_eq!(m.rules().len(), 6);
        assert!(m.is_grid_complete());
        assert!(m.consequent_params().iter().all(|&c| c == 0.0));
        assert_eq!(
            grid_antecedents(&[2, 2]),
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
    }

    #[test]
    fn single_rule_design_row() {
        let a = var("a", &[(0.0, 1.0, 4.0)], 0.0, 4.0);
        let m = build_grid_anfis(&[a], MfKind::Triangular, "y", (0.0, 1.0)).unwrap();
        let data = Dataset::from_pairs(vec![(vec![2.0], 0.0)]).unwrap();
        let dm = design_matrix(&m, &data).unwrap();
        assert_eq!(dm.data, vec![2.0, 1.0]);
    }

    #[test]
    fn zero_firing_records_are_reported() {
        let a = var("a", &[(0.0, 1.0, 2.0)], 0.0, 4.0);
        let m = build_grid_anfis(&[a], MfKind::Triangular, "y", (0.0, 1.0)).unwrap();
        let data = Dataset::from_pairs(vec![(vec![1.0], 0.0), (vec![3.0], 0.0)]).unwrap();
        assert_eq!(
            design_matrix(&m, &data),
            Err(AnfisError::ZeroFiringRecord { indices: vec![1] })
        );
    }

    #[test]
    fn untrained_model_predicts_zero() {
        let a = var("a", &[(0.0, 0.0, 2.0), (0.0, 2.0, 2.0)], 0.0, 2.0);
        let m = build_grid_anfis(&[a], MfKind::Gaussian, "y", (0.0, 1.0)).unwrap();
        for x in [0.0, 0.5, 1.7] {
            assert_eq!(predict(&m, &[x]).unwrap(), 0.0);
        }
    }

    #[test]
    fn zero_learn_rate_keeps_premises() {
        let a = var("a", &[(0.0, 0.0, 2.0), (0.0, 2.0, 2.0)], 0.0, 2.0);
        let mut m = build_grid_anfis(&[a], MfKind::Gaussian, "y", (0.0, 1.0)).unwrap();
        let data = Dataset::from_pairs((0..10).map(|i| (vec![i as f64 / 5.0], (i as f64).sin()))).unwrap();
        forward_lse(&mut m, &data, 1e-8).unwrap();
        let before = premise_params(&m);
        backward_gd(&mut m, &data, 0.0).unwrap();
        assert_eq!(premise_params(&m), before);
    }

    #[test]
    fn constant_targets_fit_after_one_epoch() {
        let a = var("a", &[(0.0, 0.0, 2.0), (0.0, 2.0, 2.0)], 0.0, 2.0);
        let mut m = build_grid_anfis(&[a], MfKind::Triangular, "y", (0.0, 5.0)).unwrap();
        let data = Dataset::from_pairs((0..20).map(|i| (vec![i as f64 / 10.0], 3.0))).unwrap();
        let cfg = TrainConfig {
            epochs: 1,
            ..TrainConfig::default()
        };
        let r = train(&mut m, &data, None, &cfg).unwrap();
        assert_eq!(r.rmse_per_epoch.len(), 1);
        assert!(r.final_train_rmse < 1e-6);
    }

    #[test]
    fn coa_model_is_rejected() {
        let a = var("a", &[(0.0, 0.0, 2.0)], 0.0, 2.0);
        let out = var("o", &[(0.0, 1.0, 2.0)], 0.0, 2.0);
        let mut m = FisModel::new(
            vec![a],
            Output::Linguistic(out),
            vec![Rule::new(vec![0], Consequent::Term(0))],
            TNorm::Product,
        )
        .unwrap();
        let data = Dataset::from_pairs(vec![(vec![1.0], 1.0)]).unwrap();
        assert_eq!(forward_lse(&mut m, &data, 0.0).unwrap_err(), AnfisError::NotTsk);
    }
}
