//! Linguistic variables, rules and the FIS model container.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::mf::{MembershipFunction, MfError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("variable `{name}`: range [{lo}, {hi}] is empty")]
    EmptyRange { name: String, lo: f64, hi: f64 },
    #[error("variable `{name}` has no terms")]
    EmptyVariable { name: String },
    #[error("variable `{var}`: duplicate term label `{label}`")]
    DuplicateTerm { var: String, label: String },
    #[error("variable `{var}`: term `{label}` has no support inside the range")]
    TermOutsideRange { var: String, label: String },
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("rule {rule}: expected {expected} antecedents, got {got}")]
    RuleArity { rule: usize, expected: usize, got: usize },
    #[error("rule {rule}: term index {index} out of range for variable `{var}`")]
    RuleTermIndex { rule: usize, var: String, index: usize },
    #[error("rule {rule}: consequent does not match model mode")]
    RuleConsequent { rule: usize },
    #[error("rules {first} and {second} share an antecedent")]
    DuplicateAntecedent { first: usize, second: usize },
    #[error("membership function: {0}")]
    Mf(#[from] MfError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub label: String,
    pub mf: MembershipFunction,
}

impl Term {
    pub fn new(label: impl Into<String>, mf: MembershipFunction) -> Self {
        Term {
            label: label.into(),
            mf,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinguisticVariable {
    name: String,
    lo: f64,
    hi: f64,
    terms: Vec<Term>,
}

impl LinguisticVariable {
    pub fn new(name: impl Into<String>, lo: f64, hi: f64, terms: Vec<Term>) -> Result<Self, ModelError> {
        let name = name.into();
        // `!(lo < hi)` also rejects NaN bounds.
        if !(lo < hi) {
            return Err(ModelError::EmptyRange { name, lo, hi });
        }
        let mut seen = HashSet::new();
        for t in &terms {
            if !seen.insert(t.label.as_str()) {
                return Err(ModelError::DuplicateTerm {
                    var: name,
                    label: t.label.clone(),
                });
            }
            let b = t.mf.bounds();
            if b.right < lo || b.left > hi {
                return Err(ModelError::TermOutsideRange {
                    var: name,
                    label: t.label.clone(),
                });
            }
        }
        Ok(LinguisticVariable { name, lo, hi, terms })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn range(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub(crate) fn terms_mut(&mut self) -> &mut [Term] {
        &mut self.terms
    }

    pub fn term_index(&self, label: &str) -> Option<usize> {
        self.terms.iter().position(|t| t.label == label)
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    /// Degree of every term at `x`, after clamping `x` into the range.
    pub fn fuzzify(&self, x: f64) -> Vec<f64> {
        let x = self.clamp(x);
        self.terms.iter().map(|t| t.mf.eval(x)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TNorm {
    #[default]
    Product,
    Min,
}

impl TNorm {
    pub fn name(self) -> &'static str {
        match self {
            TNorm::Product => "product",
            TNorm::Min => "min",
        }
    }

    pub fn combine(self, degrees: impl IntoIterator<Item = f64>) -> f64 {
        match self {
            TNorm::Product => degrees.into_iter().product(),
            TNorm::Min => degrees.into_iter().fold(1.0, f64::min),
        }
    }
}

impl fmt::Display for TNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    LinguisticCoa,
    TskFirstOrder,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Consequent {
    /// Index of an output term.
    Term(usize),
    /// `p_1 .. p_n, p_{n+1}`: one coefficient per input plus an intercept.
    Linear(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub antecedent: Vec<usize>,
    pub consequent: Consequent,
}

impl Rule {
    pub fn new(antecedent: Vec<usize>, consequent: Consequent) -> Self {
        Rule { antecedent, consequent }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Linguistic(LinguisticVariable),
    Tsk { name: String, lo: f64, hi: f64 },
}

#[derive(Debug, Clone)]
pub struct FisModel {
    inputs: Vec<LinguisticVariable>,
    output: Output,
    rules: Vec<Rule>,
    tnorm: TNorm,
}

impl FisModel {
    pub fn new(
        inputs: Vec<LinguisticVariable>,
        output: Output,
        rules: Vec<Rule>,
        tnorm: TNorm,
    ) -> Result<Self, ModelError> {
        let mut names = HashSet::new();
        let out_name = match &output {
            Output::Linguistic(v) => v.name(),
            Output::Tsk { name, lo, hi } => {
                if !(lo < hi) {
                    return Err(ModelError::EmptyRange {
                        name: name.clone(),
                        lo: *lo,
                        hi: *hi,
                    });
                }
                name
            }
        };
        for name in inputs.iter().map(|v| v.name()).chain([out_name]) {
            if !names.insert(name) {
                return Err(ModelError::DuplicateVariable(name.to_string()));
            }
        }
        for v in &inputs {
            if v.terms.is_empty() {
                return Err(ModelError::EmptyVariable { name: v.name.clone() });
            }
        }
        let mut seen: std::collections::HashMap<&[usize], usize> = Default::default();
        for (i, rule) in rules.iter().enumerate() {
            if rule.antecedent.len() != inputs.len() {
                return Err(ModelError::RuleArity {
                    rule: i,
                    expected: inputs.len(),
                    got: rule.antecedent.len(),
                });
            }
            for (&t, v) in rule.antecedent.iter().zip(&inputs) {
                if t >= v.terms.len() {
                    return Err(ModelError::RuleTermIndex {
                        rule: i,
                        var: v.name.clone(),
                        index: t,
                    });
                }
            }
            let ok = match (&output, &rule.consequent) {
                (Output::Linguistic(v), Consequent::Term(t)) => *t < v.terms.len(),
                (Output::Tsk { .. }, Consequent::Linear(c)) => c.len() == inputs.len() + 1,
                _ => false,
            };
            if !ok {
                return Err(ModelError::RuleConsequent { rule: i });
            }
            if let Some(first) = seen.insert(&rule.antecedent, i) {
                return Err(ModelError::DuplicateAntecedent { first, second: i });
            }
        }
        Ok(FisModel {
            inputs,
            output,
            rules,
            tnorm,
        })
    }

    pub fn inputs(&self) -> &[LinguisticVariable] {
        &self.inputs
    }

    pub fn output(&self) -> &Output {
        &self.output
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn tnorm(&self) -> TNorm {
        self.tnorm
    }

    pub fn mode(&self) -> Mode {
        match self.output {
            Output::Linguistic(_) => Mode::LinguisticCoa,
            Output::Tsk { .. } => Mode::TskFirstOrder,
        }
    }

    pub fn output_name(&self) -> &str {
        match &self.output {
            Output::Linguistic(v) => v.name(),
            Output::Tsk { name, .. } => name,
        }
    }

    pub fn output_range(&self) -> (f64, f64) {
        match &self.output {
            Output::Linguistic(v) => v.range(),
            Output::Tsk { lo, hi, .. } => (*lo, *hi),
        }
    }

    /// Whether the rule base holds one rule per combination of input terms.
    pub fn is_grid_complete(&self) -> bool {
        let cells: usize = self.inputs.iter().map(|v| v.terms.len()).product();
        cells == self.rules.len()
    }

    /// Clamps every coordinate into its variable range.
    pub fn clamp_input(&self, input: &[f64]) -> Vec<f64> {
        input.iter().zip(&self.inputs).map(|(&x, v)| v.clamp(x)).collect()
    }

    /// Number of consequent coefficients per rule in TSK mode.
    pub fn coeffs_per_rule(&self) -> usize {
        self.inputs.len() + 1
    }

    /// Flattened consequent coefficients, rule-major. Empty in COA mode.
    pub fn consequent_params(&self) -> Vec<f64> {
        self.rules
            .iter()
            .filter_map(|r| match &r.consequent {
                Consequent::Linear(c) => Some(c.iter().copied()),
                Consequent::Term(_) => None,
            })
            .flatten()
            .collect()
    }

    /// Overwrites the TSK consequents from a rule-major flat vector.
    ///
    /// # Panics
    /// If the model is not TSK or the length differs from
    /// `rules.len() * coeffs_per_rule()`.
    pub fn set_consequent_params(&mut self, theta: &[f64]) {
        let k = self.coeffs_per_rule();
        assert_eq!(theta.len(), self.rules.len() * k, "consequent vector length");
        for (rule, chunk) in self.rules.iter_mut().zip(theta.chunks(k)) {
            match &mut rule.consequent {
                Consequent::Linear(c) => c.copy_from_slice(chunk),
                Consequent::Term(_) => panic!("set_consequent_params on a COA model"),
            }
        }
    }

    pub(crate) fn inputs_mut(&mut self) -> &mut [LinguisticVariable] {
        &mut self.inputs
    }

    /// Rules in canonical order: lexicographic by antecedent indices.
    pub fn canonical_rules(&self) -> Vec<&Rule> {
        let mut rules: Vec<&Rule> = self.rules.iter().collect();
        rules.sort_by(|a, b| a.antecedent.cmp(&b.antecedent));
        rules
    }
}

/// Two models are equal when their variables, t-norm and rule sets agree;
/// rule order is not significant because antecedents are unique.
impl PartialEq for FisModel {
    fn eq(&self, other: &Self) -> bool {
        self.inputs == other.inputs
            && self.output == other.output
            && self.tnorm == other.tnorm
            && self.canonical_rules() == other.canonical_rules()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(name: &str, n: usize) -> LinguisticVariable {
        let terms = (0..n)
            .map(|i| {
                let c = i as f64;
                Term::new(
                    format!("t{i}"),
                    MembershipFunction::triangular(c - 1.0, c, c + 1.0).unwrap(),
                )
            })
            .collect();
        LinguisticVariable::new(name, 0.0, n as f64, terms).unwrap()
    }

    fn tsk_out() -> Output {
        Output::Tsk {
            name: "y".into(),
            lo: 0.0,
            hi: 1.0,
        }
    }

    #[test]
    fn variable_invariants() {
        let mf = MembershipFunction::triangular(0.0, 1.0, 2.0).unwrap();
        assert!(matches!(
            LinguisticVariable::new("x", 1.0, 1.0, vec![]),
            Err(ModelError::EmptyRange { .. })
        ));
        assert!(matches!(
            LinguisticVariable::new(
                "x",
                0.0,
                2.0,
                vec![Term::new("a", mf.clone()), Term::new("a", mf.clone())]
            ),
            Err(ModelError::DuplicateTerm { .. })
        ));
        assert!(matches!(
            LinguisticVariable::new("x", 5.0, 6.0, vec![Term::new("a", mf)]),
            Err(ModelError::TermOutsideRange { .. })
        ));
    }

    #[test]
    fn fuzzify_clamps() {
        let v = var("x", 3);
        assert_eq!(v.fuzzify(-10.0), v.fuzzify(0.0));
        assert_eq!(v.fuzzify(2.0), vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn rule_validation() {
        let inputs = vec![var("a", 2), var("b", 2)];
        let bad_arity = vec![Rule::new(vec![0], Consequent::Linear(vec![0.0; 3]))];
        assert!(matches!(
            FisModel::new(inputs.clone(), tsk_out(), bad_arity, TNorm::Product),
            Err(ModelError::RuleArity { .. })
        ));
        let bad_index = vec![Rule::new(vec![0, 2], Consequent::Linear(vec![0.0; 3]))];
        assert!(matches!(
            FisModel::new(inputs.clone(), tsk_out(), bad_index, TNorm::Product),
            Err(ModelError::RuleTermIndex { .. })
        ));
        let wrong_form = vec![Rule::new(vec![0, 0], Consequent::Term(0))];
        assert!(matches!(
            FisModel::new(inputs.clone(), tsk_out(), wrong_form, TNorm::Product),
            Err(ModelError::RuleConsequent { .. })
        ));
        let dup = vec![
            Rule::new(vec![0, 1], Consequent::Linear(vec![0.0; 3])),
            Rule::new(vec![0, 1], Consequent::Linear(vec![1.0; 3])),
        ];
        assert!(matches!(
            FisModel::new(inputs, tsk_out(), dup, TNorm::Product),
            Err(ModelError::DuplicateAntecedent { first: 0, second: 1 })
        ));
    }

    #[test]
    fn equality_ignores_rule_order() {
        let inputs = vec![var("a", 2)];
        let r0 = Rule::new(vec![0], Consequent::Linear(vec![1.0, 2.0]));
        let r1 = Rule::new(vec![1], Consequent::Linear(vec![3.0, 4.0]));
        let m1 = FisModel::new(inputs.clone(), tsk_out(), vec![r0.clone(), r1.clone()], TNorm::Min).unwrap();
        let m2 = FisModel::new(inputs, tsk_out(), vec![r1, r0], TNorm::Min).unwrap();
        assert_eq!(m1, m2);
        assert_eq!(m1.consequent_params(), vec![1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn tnorm_min_is_dominated_by_product() {
        let d = [0.3, 0.9, 0.5];
        assert!(TNorm::Product.combine(d) <= TNorm::Min.combine(d));
        assert_eq!(TNorm::Min.combine(d), 0.3);
    }
}
