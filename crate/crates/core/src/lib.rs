//! Fuzzy inference and ANFIS toolkit.
//!
//! * [`mf`]: the eight membership-function families and their gradients.
//! * [`model`] / [`inference`]: linguistic variables, rule bases, and the
//!   layered inference pipeline (TSK output and center-of-area).
//! * [`anfis`]: hybrid least-squares / gradient-descent training.
//! * [`domain`]: the expert tactic-classification configuration.
//! * [`dsl`]: the `.fis` text format.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod anfis;
pub mod dataset;
pub mod diagnostics;
pub mod domain;
pub mod dsl;
pub mod formatting;
pub mod inference;
pub mod lse;
pub mod mf;
pub mod model;

pub use anfis::{TrainConfig, TrainReport};
pub use dataset::{DataFile, Dataset, Sample};
pub use domain::{EventVector, TacticClass};
pub use inference::{ClassScoreReport, Classification, FiringVector, InferenceError};
pub use mf::{MembershipFunction, MfKind};
pub use model::{Consequent, FisModel, LinguisticVariable, Mode, Output, Rule, TNorm, Term};
