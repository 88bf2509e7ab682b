//! Layered inference: fuzzification, rule firing, normalization, and the two
//! output stages (first-order TSK sum and center-of-area defuzzification).

use thiserror::Error;

use crate::model::{Consequent, FisModel, Mode, Output};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InferenceError {
    #[error("expected {expected} inputs, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("input #{index} is not finite")]
    NonFiniteInput { index: usize },
    #[error("no rule fires for this input")]
    ZeroFiring,
    #[error("operation requires a {expected:?} model")]
    ModeMismatch { expected: Mode },
    #[error("no records to aggregate")]
    EmptyInput,
}

/// Raw and normalized rule firing strengths.
#[derive(Debug, Clone, PartialEq)]
pub struct FiringVector {
    pub w: Vec<f64>,
    /// `None` when every rule has zero strength.
    pub w_norm: Option<Vec<f64>>,
}

impl FiringVector {
    pub fn from_raw(w: Vec<f64>) -> Self {
        let total: f64 = w.iter().sum();
        let w_norm = (total > 0.0).then(|| w.iter().map(|wi| wi / total).collect());
        FiringVector { w, w_norm }
    }

    pub fn total(&self) -> f64 {
        self.w.iter().sum()
    }

    pub fn normalized(&self) -> Result<&[f64], InferenceError> {
        self.w_norm.as_deref().ok_or(InferenceError::ZeroFiring)
    }
}

fn check_input(model: &FisModel, input: &[f64]) -> Result<Vec<f64>, InferenceError> {
    if input.len() != model.inputs().len() {
        return Err(InferenceError::ArityMismatch {
            expected: model.inputs().len(),
            got: input.len(),
        });
    }
    if let Some(index) = input.iter().position(|x| !x.is_finite()) {
        return Err(InferenceError::NonFiniteInput { index });
    }
    Ok(model.clamp_input(input))
}

/// Per-variable term degrees for an already clamped input.
pub(crate) fn degrees(model: &FisModel, x: &[f64]) -> Vec<Vec<f64>> {
    model.inputs().iter().zip(x).map(|(v, &xi)| v.fuzzify(xi)).collect()
}

pub(crate) fn raw_strengths(model: &FisModel, degrees: &[Vec<f64>]) -> Vec<f64> {
    let tnorm = model.tnorm();
    model
        .rules()
        .iter()
        .map(|r| tnorm.combine(r.antecedent.iter().zip(degrees).map(|(&t, d)| d[t])))
        .collect()
}

pub fn firing_strengths(model: &FisModel, input: &[f64]) -> Result<FiringVector, InferenceError> {
    let x = check_input(model, input)?;
    Ok(FiringVector::from_raw(raw_strengths(model, &degrees(model, &x))))
}

/// Rule `i`'s linear consequent evaluated at `x`.
pub(crate) fn linear_consequent(coeffs: &[f64], x: &[f64]) -> f64 {
    let (intercept, slopes) = coeffs.split_last().expect("non-empty coefficients");
    slopes.iter().zip(x).map(|(p, xi)| p * xi).sum::<f64>() + intercept
}

pub fn tsk_output(model: &FisModel, input: &[f64]) -> Result<f64, InferenceError> {
    if model.mode() != Mode::TskFirstOrder {
        return Err(InferenceError::ModeMismatch {
            expected: Mode::TskFirstOrder,
        });
    }
    let x = check_input(model, input)?;
    let fv = FiringVector::from_raw(raw_strengths(model, &degrees(model, &x)));
    let w_norm = fv.normalized()?;
    Ok(model
        .rules()
        .iter()
        .zip(w_norm)
        .map(|(r, wn)| match &r.consequent {
            Consequent::Linear(c) => wn * linear_consequent(c, &x),
            Consequent::Term(_) => unreachable!("TSK model with a term consequent"),
        })
        .sum())
}

fn coa_parts(model: &FisModel, input: &[f64]) -> Result<(FiringVector, Vec<usize>, Vec<f64>), InferenceError> {
    let Output::Linguistic(out) = model.output() else {
        return Err(InferenceError::ModeMismatch {
            expected: Mode::LinguisticCoa,
        });
    };
    let fv = firing_strengths(model, input)?;
    if fv.w_norm.is_none() {
        return Err(InferenceError::ZeroFiring);
    }
    let terms: Vec<usize> = model
        .rules()
        .iter()
        .map(|r| match r.consequent {
            Consequent::Term(t) => t,
            Consequent::Linear(_) => unreachable!("COA model with a linear consequent"),
        })
        .collect();
    let gravities = out.terms().iter().map(|t| t.mf.gravity()).collect();
    Ok((fv, terms, gravities))
}

/// Gravity-weighted mean over firing rules, each rule contributing the
/// gravity of its consequent term.
pub fn coa_output(model: &FisModel, input: &[f64]) -> Result<f64, InferenceError> {
    let (fv, terms, gravities) = coa_parts(model, input)?;
    let num: f64 = fv.w.iter().zip(&terms).map(|(w, &t)| w * gravities[t]).sum();
    Ok(num / fv.total())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub class_index: usize,
    pub label: String,
    pub crisp: f64,
    /// Summed normalized strength per output term, in term order.
    pub activations: Vec<f64>,
}

pub fn classify(model: &FisModel, input: &[f64]) -> Result<Classification, InferenceError> {
    let (fv, terms, gravities) = coa_parts(model, input)?;
    let Output::Linguistic(out) = model.output() else {
        unreachable!()
    };
    let w_norm = fv.normalized()?;
    let mut activations = vec![0.0; out.terms().len()];
    for (wn, &t) in w_norm.iter().zip(&terms) {
        activations[t] += wn;
    }
    let mut class_index = 0;
    for (i, &a) in activations.iter().enumerate() {
        if a > activations[class_index] {
            class_index = i;
        }
    }
    let num: f64 = fv.w.iter().zip(&terms).map(|(w, &t)| w * gravities[t]).sum();
    Ok(Classification {
        class_index,
        label: out.terms()[class_index].label.clone(),
        crisp: num / fv.total(),
        activations,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassScore {
    pub label: String,
    pub mean_output: f64,
    /// Output-term degree at each classified record's crisp value.
    pub memberships: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassScoreReport {
    pub per_class: Vec<ClassScore>,
    pub classified: usize,
    /// Indices of records that fired no rule.
    pub excluded: Vec<usize>,
}

pub fn aggregate_class_scores<I>(model: &FisModel, records: I) -> Result<ClassScoreReport, InferenceError>
where
    I: IntoIterator,
    I::Item: AsRef<[f64]>,
{
    let Output::Linguistic(out) = model.output() else {
        return Err(InferenceError::ModeMismatch {
            expected: Mode::LinguisticCoa,
        });
    };
    let mut per_class: Vec<ClassScore> = out
        .terms()
        .iter()
        .map(|t| ClassScore {
            label: t.label.clone(),
            mean_output: 0.0,
            memberships: Vec::new(),
        })
        .collect();
    let mut excluded = Vec::new();
    let mut classified = 0usize;
    let mut seen = 0usize;
    for (i, rec) in records.into_iter().enumerate() {
        seen += 1;
        match classify(model, rec.as_ref()) {
            Ok(c) => {
                classified += 1;
                for ((score, act), term) in per_class.iter_mut().zip(&c.activations).zip(out.terms()) {
                    score.mean_output += act;
                    score.memberships.push(term.mf.eval(c.crisp));
                }
            }
            Err(InferenceError::ZeroFiring) => excluded.push(i),
            Err(e) => return Err(e),
        }
    }
    if seen == 0 || classified == 0 {
        return Err(InferenceError::EmptyInput);
    }
    for score in &mut per_class {
        score.mean_output /= classified as f64;
    }
    Ok(ClassScoreReport {
        per_class,
        classified,
        excluded,
    })
}
