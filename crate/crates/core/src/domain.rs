//! Expert configuration for tactic classification of terrorism events:
//! variable bounds, the 27-rule expert rule base, class codes and a seeded
//! synthetic event generator that labels records with the expert model.

use std::fmt;
use std::str::FromStr;

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dataset::{DataFile, Dataset, Row, Sample};
use crate::inference::{classify, InferenceError};
use crate::mf::{MembershipFunction, MfKind};
use crate::model::{Consequent, FisModel, LinguisticVariable, Output, Rule, TNorm, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TacticClass {
    /// Unsuccessful attack or no important damage.
    VL,
    /// Demolition.
    L,
    /// Assassination.
    M,
    /// Suicide attack.
    H,
}

impl TacticClass {
    pub const ALL: [TacticClass; 4] = [TacticClass::VL, TacticClass::L, TacticClass::M, TacticClass::H];

    pub fn code(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(usize::from(code).checked_sub(1)?).copied()
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn label(self) -> &'static str {
        match self {
            TacticClass::VL => "VL",
            TacticClass::L => "L",
            TacticClass::M => "M",
            TacticClass::H => "H",
        }
    }

    pub fn meaning(self) -> &'static str {
        match self {
            TacticClass::VL => "unsuccessful attack",
            TacticClass::L => "demolition",
            TacticClass::M => "assassination",
            TacticClass::H => "suicide attack",
        }
    }
}

impl fmt::Display for TacticClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown tactic `{0}`")]
pub struct UnknownTactic(pub String);

impl FromStr for TacticClass {
    type Err = UnknownTactic;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.label() == s)
            .ok_or_else(|| UnknownTactic(s.to_string()))
    }
}

/// Nearest class code after clamping to `[1, 4]`; exact midpoints go to the
/// lower code.
pub fn class_of_code(code: f64) -> TacticClass {
    let c = code.clamp(1.0, 4.0);
    let rounded = (c - 0.5).ceil().clamp(1.0, 4.0);
    TacticClass::from_code(rounded as u8).expect("code in 1..=4")
}

/// `(label, left, mean, right)` rows for one variable.
pub type BoundsRow = (&'static str, f64, f64, f64);

pub struct VariableTable {
    pub name: &'static str,
    pub range: (f64, f64),
    pub terms: &'static [BoundsRow],
}

pub const PLACE: VariableTable = VariableTable {
    name: "place",
    range: (0.0, 25.0),
    terms: &[
        ("low", 0.0, 1.0, 9.0),
        ("medium", 6.0, 13.0, 20.0),
        ("high", 16.0, 25.0, 25.0),
    ],
};

pub const VICTIM_STATUS: VariableTable = VariableTable {
    name: "victim_status",
    range: (0.0, 4.0),
    terms: &[
        ("low", 0.0, 0.0, 1.2),
        ("medium", 0.3, 1.5, 2.7),
        ("high", 1.8, 3.0, 4.0),
    ],
};

pub const TERRORIST_STATUS: VariableTable = VariableTable {
    name: "terrorist_status",
    range: (0.0, 4.0),
    terms: &[
        ("low", 0.0, 0.0, 1.2),
        ("medium", 0.3, 1.5, 2.7),
        ("high", 1.8, 3.0, 4.0),
    ],
};

pub const TACTIC: VariableTable = VariableTable {
    name: "tactic",
    range: (1.0, 4.0),
    terms: &[
        ("VL", 1.0, 1.0, 2.2),
        ("L", 1.3, 2.5, 3.7),
        ("M", 1.0, 2.5, 4.0),
        ("H", 2.8, 4.0, 4.0),
    ],
};

pub const INPUT_TABLES: [&VariableTable; 3] = [&PLACE, &VICTIM_STATUS, &TERRORIST_STATUS];

const LOW: usize = 0;
const MED: usize = 1;
const HIGH: usize = 2;

/// The expert rule base as `[place, victim, terrorist] -> tactic`, in the
/// experts' numbering (rule 1 first).
pub const EXPERT_RULES: [([usize; 3], TacticClass); 27] = {
    use TacticClass::*;
    [
        ([HIGH, HIGH, HIGH], H),
        ([HIGH, HIGH, MED], M),
        ([HIGH, HIGH, LOW], M),
        ([HIGH, MED, HIGH], H),
        ([HIGH, MED, MED], L),
        ([HIGH, MED, LOW], L),
        ([HIGH, LOW, HIGH], H),
        ([HIGH, LOW, MED], L),
        ([HIGH, LOW, LOW], L),
        ([MED, HIGH, HIGH], H),
        ([MED, HIGH, MED], M),
        ([MED, HIGH, LOW], M),
        ([MED, MED, HIGH], H),
        ([MED, MED, MED], M),
        ([MED, MED, LOW], M),
        ([MED, LOW, HIGH], H),
        ([MED, LOW, MED], L),
        ([MED, LOW, LOW], L),
        ([LOW, HIGH, HIGH], H),
        ([LOW, HIGH, MED], M),
        ([LOW, HIGH, LOW], M),
        ([LOW, MED, HIGH], H),
        ([LOW, MED, MED], M),
        ([LOW, MED, LOW], M),
        ([LOW, LOW, HIGH], VL),
        ([LOW, LOW, MED], VL),
        ([LOW, LOW, LOW], VL),
    ]
};

pub fn table_variable(table: &VariableTable, kind: MfKind) -> LinguisticVariable {
    let terms = table
        .terms
        .iter()
        .map(|&(label, l, m, r)| {
            Term::new(
                label,
                MembershipFunction::from_bounds(kind, l, m, r).expect("sorted bounds"),
            )
        })
        .collect();
    LinguisticVariable::new(table.name, table.range.0, table.range.1, terms).expect("valid table")
}

/// The expert model (Triangular terms, product t-norm) in `.fis` form.
pub const TERRORISM_FIS: &str = include_str!("../models/terrorism.fis");

/// The expert model with every term built from its bounds in `kind`.
pub fn default_terrorism_fis(kind: MfKind, tnorm: TNorm) -> FisModel {
    let inputs = INPUT_TABLES.iter().map(|t| table_variable(t, kind)).collect();
    let output = Output::Linguistic(table_variable(&TACTIC, kind));
    let rules = EXPERT_RULES
        .iter()
        .map(|(a, c)| Rule::new(a.to_vec(), Consequent::Term(*c as usize)))
        .collect();
    FisModel::new(inputs, output, rules, tnorm).expect("expert tables are consistent")
}

/// Input vector at the peaks of the given term indices.
pub fn prototype_input(antecedent: &[usize; 3]) -> [f64; 3] {
    let mut x = [0.0; 3];
    for ((xi, table), &t) in x.iter_mut().zip(INPUT_TABLES).zip(antecedent) {
        *xi = table.terms[t].2;
    }
    x
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventVector {
    pub place: f64,
    pub victim_status: f64,
    pub terrorist_status: f64,
    pub tactic: Option<TacticClass>,
}

impl EventVector {
    pub fn input(&self) -> [f64; 3] {
        [self.place, self.victim_status, self.terrorist_status]
    }
}

pub const CSV_INPUT_COLUMNS: [&str; 3] = ["place", "victim_status", "terrorist_status"];

pub fn events_to_datafile(events: &[EventVector]) -> DataFile {
    DataFile {
        input_columns: CSV_INPUT_COLUMNS.iter().map(|s| s.to_string()).collect(),
        target_column: Some("tactic".to_string()),
        rows: events
            .iter()
            .map(|e| Row {
                input: e.input().to_vec(),
                target: e.tactic.map(|t| f64::from(t.code())),
            })
            .collect(),
    }
}

/// Labeled events as a regression dataset with class codes 1–4 as targets.
/// Unlabeled events are dropped.
pub fn events_to_dataset(events: &[EventVector]) -> Dataset {
    let samples = events
        .iter()
        .filter_map(|e| {
            e.tactic.map(|t| Sample {
                input: e.input().to_vec(),
                target: f64::from(t.code()),
            })
        })
        .collect();
    Dataset::new(samples).expect("events are finite and 3-dimensional")
}

/// `n` events drawn uniformly over the variable ranges, resampled until at
/// least one rule of `oracle` fires, each labeled with the oracle's class.
pub fn gen_synthetic(n: usize, seed: u64, oracle: &FisModel) -> Result<Vec<EventVector>, InferenceError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dists: Vec<Uniform<f64>> = oracle
        .inputs()
        .iter()
        .map(|v| {
            let (lo, hi) = v.range();
            Uniform::new_inclusive(lo, hi)
        })
        .collect();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x: Vec<f64> = dists.iter().map(|d| d.sample(&mut rng)).collect();
        match classify(oracle, &x) {
            Ok(c) => out.push(EventVector {
                place: x[0],
                victim_status: x[1],
                terrorist_status: x[2],
                tactic: TacticClass::from_index(c.class_index),
            }),
            Err(InferenceError::ZeroFiring) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
