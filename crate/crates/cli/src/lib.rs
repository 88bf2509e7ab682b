//! Commands behind the `fis` binary.
//!
//! Every command writes line-delimited `key=value` records to stdout (the
//! benchmark adds an aligned table) and reports failures through [`Failure`],
//! whose code is the process exit status.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fis_core::anfis::{self, AnfisError, TrainConfig, TrainReport};
use fis_core::dataset::{DataFile, Dataset, Row};
use fis_core::diagnostics::EvalDiagnostics;
use fis_core::domain::{self, class_of_code, TacticClass, CSV_INPUT_COLUMNS, TERRORISM_FIS};
use fis_core::dsl::{parse_model, serialize_model};
use fis_core::formatting::FormattingMap;
use fis_core::inference::{self, InferenceError};
use fis_core::lse::{ridge_solve, LseError};
use fis_core::{FisModel, MfKind, Mode, TNorm};

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_ZERO_FIRING: u8 = 3;
pub const EXIT_NUMERICAL: u8 = 4;
pub const EXIT_UNDEFINED: u8 = 5;

const RMSE_NOTE: &str = "RMSE is an absolute error on the 1-4 tactic code scale, not a percentage.";

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    fn new(code: u8, error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code,
            error: error.into(),
        }
    }
}

trait ExitCodeExt<T> {
    fn code(self, code: u8) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> ExitCodeExt<T> for Result<T, E> {
    fn code(self, code: u8) -> Result<T, Failure> {
        self.map_err(|e| Failure::new(code, e))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fis",
    version,
    about = "Fuzzy inference and ANFIS training for tactic classification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify records with a linguistic (coa) model.
    Classify(ClassifyArgs),
    /// Train a TSK model with hybrid least squares and gradient descent.
    Train(TrainArgs),
    /// Error diagnostics of a model on a labeled dataset.
    Eval(EvalArgs),
    /// Expert FIS versus ANFIS across membership function families.
    Bench(BenchArgs),
    /// Generate a synthetic dataset labeled by the expert model.
    Gen(GenArgs),
    /// Turn text-valued event records into a numeric dataset.
    Format(FormatArgs),
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Model file; the bundled expert model when omitted.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// A coa model whose input terms seed the grid, or a tsk model to refine.
    /// The expert input terms are used when omitted.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Premise membership family for grids built from a coa model.
    #[arg(long, default_value = "triangular")]
    pub mf: MfKind,
    #[arg(long, default_value_t = 50)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.01)]
    pub lr: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub ridge: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Fraction of records held out for the test RMSE.
    #[arg(long, default_value_t = 0.0)]
    pub split: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out_model: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Model file; the bundled expert model when omitted.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub data: PathBuf,
    /// Ridge used for the leverage of tsk models.
    #[arg(long, default_value_t = 1e-8)]
    pub ridge: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 500)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated families; all eight when omitted.
    #[arg(long, value_delimiter = ',')]
    pub mf: Vec<MfKind>,
    #[arg(long, default_value_t = 50)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.01)]
    pub lr: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub ridge: f64,
    /// Fraction held out for test columns; training fit only by default.
    #[arg(long, default_value_t = 0.0)]
    pub split: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FormatArgs {
    /// Formatting map: `field<TAB>text<TAB>integer` lines.
    #[arg(long)]
    pub map: PathBuf,
    /// CSV whose header names the map's fields (and optionally `tactic`).
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Classify(a) => cmd_classify(&a, stdout),
        Command::Train(a) => cmd_train(&a, stdout),
        Command::Eval(a) => cmd_eval(&a, stdout),
        Command::Bench(a) => cmd_bench(&a, stdout),
        Command::Gen(a) => cmd_gen(&a, stdout),
        Command::Format(a) => cmd_format(&a, stdout),
    }
}

fn load_model(path: Option<&Path>) -> Result<FisModel, Failure> {
    match path {
        None => parse_model(TERRORISM_FIS).code(EXIT_INPUT),
        Some(p) => {
            let text = fs::read_to_string(p)
                .with_context(|| format!("reading {}", p.display()))
                .code(EXIT_INPUT)?;
            parse_model(&text)
                .with_context(|| format!("parsing {}", p.display()))
                .code(EXIT_INPUT)
        }
    }
}

fn load_data(path: &Path) -> Result<DataFile, Failure> {
    let file = File::open(path)
        .with_context(|| format!("opening {}", path.display()))
        .code(EXIT_INPUT)?;
    DataFile::read(BufReader::new(file))
        .with_context(|| format!("reading {}", path.display()))
        .code(EXIT_INPUT)
}

fn check_arity(model: &FisModel, data: &DataFile) -> Result<(), Failure> {
    let expected = model.inputs().len();
    if data.input_columns.len() != expected {
        return Err(Failure::new(
            EXIT_INPUT,
            anyhow!(
                "dataset has {} input columns, model has {expected} inputs",
                data.input_columns.len()
            ),
        ));
    }
    Ok(())
}

fn labeled(data: &DataFile) -> Result<Dataset, Failure> {
    let ds = data.to_dataset().code(EXIT_INPUT)?;
    if ds.is_empty() {
        return Err(Failure::new(EXIT_INPUT, InferenceError::EmptyInput));
    }
    Ok(ds)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents)
        .with_context(|| format!("writing {}", path.display()))
        .code(EXIT_INPUT)
}

fn emit(stdout: &mut dyn Write, text: &str, out: Option<&Path>) -> Result<(), Failure> {
    stdout.write_all(text.as_bytes()).code(EXIT_INPUT)?;
    match out {
        Some(p) => write_file(p, text),
        None => Ok(()),
    }
}

fn anfis_failure(e: AnfisError) -> Failure {
    let code = match &e {
        AnfisError::Lse(_) => EXIT_NUMERICAL,
        AnfisError::ZeroFiringRecord { .. } | AnfisError::Inference(InferenceError::ZeroFiring) => EXIT_ZERO_FIRING,
        _ => EXIT_INPUT,
    };
    Failure::new(code, e)
}

/// Seeded shuffle, then the first `round(fraction·n)` records become the test
/// set. Both index lists come back sorted.
pub fn split_indices(n: usize, fraction: f64, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n_test = ((fraction * n as f64).round() as usize).min(n);
    let (test, train) = idx.split_at(n_test);
    let (mut train, mut test) = (train.to_vec(), test.to_vec());
    train.sort_unstable();
    test.sort_unstable();
    (train, test)
}

fn check_split(split: f64) -> Result<(), Failure> {
    if !(0.0..1.0).contains(&split) {
        return Err(Failure::new(
            EXIT_INPUT,
            anyhow!("--split must be in [0, 1), got {split}"),
        ));
    }
    Ok(())
}

fn fmt_inputs(line: &mut String, names: &[String], input: &[f64]) {
    for (name, x) in names.iter().zip(input) {
        write!(line, " {name}={x}").unwrap();
    }
}

pub fn cmd_classify(args: &ClassifyArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let model = load_model(args.model.as_deref())?;
    if model.mode() != Mode::LinguisticCoa {
        return Err(Failure::new(
            EXIT_INPUT,
            InferenceError::ModeMismatch {
                expected: Mode::LinguisticCoa,
            },
        ));
    }
    let data = load_data(&args.data)?;
    check_arity(&model, &data)?;
    if data.rows.is_empty() {
        return Err(Failure::new(EXIT_INPUT, InferenceError::EmptyInput));
    }
    let mut text = String::new();
    let mut excluded = 0usize;
    let (mut labeled, mut correct) = (0usize, 0usize);
    for (i, row) in data.rows.iter().enumerate() {
        write!(text, "record={i}").unwrap();
        fmt_inputs(&mut text, &data.input_columns, &row.input);
        match inference::classify(&model, &row.input) {
            Ok(c) => {
                write!(text, " crisp={} class={}", c.crisp, c.label).unwrap();
                for (term, a) in model_output_labels(&model).iter().zip(&c.activations) {
                    write!(text, " act_{term}={a}").unwrap();
                }
                if let Some(t) = row.target {
                    let expected = class_of_code(t);
                    labeled += 1;
                    correct += usize::from(expected.label() == c.label);
                    write!(text, " expected={expected}").unwrap();
                }
            }
            Err(InferenceError::ZeroFiring) => {
                excluded += 1;
                text.push_str(" error=zero_firing");
            }
            Err(e) => return Err(Failure::new(EXIT_INPUT, e)),
        }
        text.push('\n');
    }
    let inputs = data.rows.iter().map(|r| r.input.as_slice());
    match inference::aggregate_class_scores(&model, inputs) {
        Ok(report) => {
            writeln!(
                text,
                "summary classified={} excluded={}",
                report.classified,
                report.excluded.len()
            )
            .unwrap();
            for s in &report.per_class {
                let mean_membership = s.memberships.iter().sum::<f64>() / s.memberships.len().max(1) as f64;
                writeln!(
                    text,
                    "class_score label={} mean_activation={} mean_membership={}",
                    s.label, s.mean_output, mean_membership
                )
                .unwrap();
            }
        }
        Err(InferenceError::EmptyInput) => {
            writeln!(text, "summary classified=0 excluded={excluded}").unwrap();
        }
        Err(e) => return Err(Failure::new(EXIT_INPUT, e)),
    }
    if labeled > 0 {
        writeln!(text, "accuracy={}", correct as f64 / labeled as f64).unwrap();
    }
    emit(stdout, &text, args.out.as_deref())?;
    if excluded > 0 {
        return Err(Failure::new(
            EXIT_ZERO_FIRING,
            anyhow!("{excluded} record(s) fire no rule"),
        ));
    }
    Ok(())
}

fn model_output_labels(model: &FisModel) -> Vec<String> {
    match model.output() {
        fis_core::Output::Linguistic(v) => v.terms().iter().map(|t| t.label.clone()).collect(),
        fis_core::Output::Tsk { .. } => Vec::new(),
    }
}

fn initial_tsk(model: Option<FisModel>, kind: MfKind) -> Result<FisModel, Failure> {
    let base = model.unwrap_or_else(|| domain::default_terrorism_fis(kind, TNorm::Product));
    if base.mode() == Mode::TskFirstOrder {
        return Ok(base);
    }
    anfis::build_grid_anfis(base.inputs(), kind, base.output_name(), base.output_range()).map_err(anfis_failure)
}

fn report_text(report: &TrainReport, train_n: usize, test_n: usize) -> String {
    let mut t = String::new();
    writeln!(t, "train_records={train_n}").unwrap();
    writeln!(t, "test_records={test_n}").unwrap();
    writeln!(t, "epochs_run={}", report.epochs_run).unwrap();
    writeln!(t, "stopped_early={}", report.stopped_early).unwrap();
    for (i, (r, x)) in report.rmse_per_epoch.iter().zip(&report.excluded_per_epoch).enumerate() {
        writeln!(t, "epoch={} rmse={r} excluded={x}", i + 1).unwrap();
    }
    writeln!(t, "final_train_rmse={}", report.final_train_rmse).unwrap();
    if let Some(r) = report.final_test_rmse {
        writeln!(t, "final_test_rmse={r}").unwrap();
        writeln!(t, "test_excluded={}", report.test_excluded).unwrap();
    }
    t
}

pub fn cmd_train(args: &TrainArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    if args.epochs == 0 || !(args.lr > 0.0) || !(args.ridge >= 0.0) || !(args.tol >= 0.0) {
        return Err(Failure::new(
            EXIT_INPUT,
            anyhow!("need --epochs >= 1, --lr > 0, --ridge >= 0 and --tol >= 0"),
        ));
    }
    check_split(args.split)?;
    let given = args.model.as_deref().map(|p| load_model(Some(p))).transpose()?;
    let mut model = initial_tsk(given, args.mf)?;
    let data = load_data(&args.data)?;
    check_arity(&model, &data)?;
    let ds = labeled(&data)?;
    let (train_idx, test_idx) = split_indices(ds.len(), args.split, args.seed);
    let min_records = model.inputs().len() + 1;
    if train_idx.len() < min_records {
        return Err(Failure::new(
            EXIT_INPUT,
            anyhow!("{} training records; at least {min_records} required", train_idx.len()),
        ));
    }
    let train = ds.subset(&train_idx);
    let test = (!test_idx.is_empty()).then(|| ds.subset(&test_idx));
    let cfg = TrainConfig {
        epochs: args.epochs,
        learn_rate: args.lr,
        ridge: args.ridge,
        tol: args.tol,
        seed: args.seed,
    };
    let report = anfis::train(&mut model, &train, test.as_ref(), &cfg).map_err(anfis_failure)?;
    write_file(&args.out_model, &serialize_model(&model))?;
    let text = report_text(&report, train.len(), test_idx.len());
    emit(stdout, &text, args.report.as_deref())
}

pub fn cmd_eval(args: &EvalArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    if !(args.ridge >= 0.0) {
        return Err(Failure::new(EXIT_INPUT, anyhow!("--ridge must be >= 0")));
    }
    let model = load_model(args.model.as_deref())?;
    let data = load_data(&args.data)?;
    check_arity(&model, &data)?;
    let ds = labeled(&data)?;

    let mut rows = Vec::with_capacity(ds.len());
    let mut residuals = Vec::with_capacity(ds.len());
    let mut excluded = Vec::new();
    for (i, s) in ds.samples().iter().enumerate() {
        let y = match model.mode() {
            Mode::TskFirstOrder => inference::tsk_output(&model, &s.input),
            Mode::LinguisticCoa => inference::coa_output(&model, &s.input),
        };
        match y {
            Ok(y) => {
                rows.push(i);
                residuals.push(s.target - y);
            }
            Err(InferenceError::ZeroFiring) => excluded.push(i),
            Err(e) => return Err(Failure::new(EXIT_INPUT, e)),
        }
    }
    if residuals.is_empty() {
        return Err(Failure::new(EXIT_ZERO_FIRING, anyhow!("no record fires any rule")));
    }

    let mut undefined = None;
    let diag = match model.mode() {
        Mode::LinguisticCoa => EvalDiagnostics::from_residuals(&residuals),
        Mode::TskFirstOrder => {
            let p = model.consequent_params().len();
            if residuals.len() > p + 1 {
                let (dm, _) = anfis::design_matrix_skipping(&model, &ds).map_err(anfis_failure)?;
                let fit = ridge_solve(&dm.data, dm.cols, &dm.targets, args.ridge).map_err(|e| {
                    let code = match e {
                        LseError::Singular { .. } => EXIT_NUMERICAL,
                        LseError::Shape { .. } => EXIT_INPUT,
                    };
                    Failure::new(code, e)
                })?;
                let (d, err) = EvalDiagnostics::with_leverage(&residuals, &fit.leverage, p);
                undefined = err;
                d
            } else {
                let (d, err) = EvalDiagnostics::with_leverage(&residuals, &[], p);
                undefined = err;
                d
            }
        }
    };

    let mut text = String::new();
    writeln!(text, "n={}", diag.n).unwrap();
    match diag.p {
        Some(p) => writeln!(text, "p={p}").unwrap(),
        None => writeln!(text, "p=n/a").unwrap(),
    }
    writeln!(text, "excluded={}", excluded.len()).unwrap();
    writeln!(text, "mse={}", diag.mse).unwrap();
    writeln!(text, "rmse={}", diag.rmse).unwrap();
    for (&i, r) in rows.iter().zip(&diag.per_record) {
        write!(text, "record={i} residual={}", r.residual).unwrap();
        if let Some(h) = r.leverage {
            write!(text, " leverage={h}").unwrap();
        }
        if let Some(d) = r.deleted_mse {
            write!(text, " deleted_mse={d}").unwrap();
        }
        text.push('\n');
    }
    emit(stdout, &text, args.out.as_deref())?;
    if !excluded.is_empty() {
        return Err(Failure::new(
            EXIT_ZERO_FIRING,
            anyhow!("{} record(s) fire no rule", excluded.len()),
        ));
    }
    if let Some(e) = undefined {
        return Err(Failure::new(EXIT_UNDEFINED, e));
    }
    Ok(())
}

/// RMSE of the crisp COA output against the targets; zero-firing records are
/// skipped.
fn expert_rmse(model: &FisModel, data: &Dataset) -> Option<f64> {
    let se: Vec<f64> = data
        .samples()
        .iter()
        .filter_map(|s| {
            inference::coa_output(model, &s.input)
                .ok()
                .map(|y| (s.target - y).powi(2))
        })
        .collect();
    (!se.is_empty()).then(|| (se.iter().sum::<f64>() / se.len() as f64).sqrt())
}

struct BenchRow {
    kind: MfKind,
    expert_train: Option<f64>,
    expert_test: Option<f64>,
    anfis: Result<TrainReport, AnfisError>,
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.4}"))
}

pub fn cmd_bench(args: &BenchArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    if args.n == 0 || args.epochs == 0 || !(args.lr > 0.0) || !(args.ridge >= 0.0) {
        return Err(Failure::new(
            EXIT_INPUT,
            anyhow!("need --n >= 1, --epochs >= 1, --lr > 0 and --ridge >= 0"),
        ));
    }
    check_split(args.split)?;
    let kinds: Vec<MfKind> = if args.mf.is_empty() {
        MfKind::ALL.to_vec()
    } else {
        args.mf.clone()
    };
    let oracle = domain::default_terrorism_fis(MfKind::Triangular, TNorm::Product);
    let events = domain::gen_synthetic(args.n, args.seed, &oracle).code(EXIT_ZERO_FIRING)?;
    let ds = domain::events_to_dataset(&events);
    let (train_idx, test_idx) = split_indices(ds.len(), args.split, args.seed);
    let train = ds.subset(&train_idx);
    let test = (!test_idx.is_empty()).then(|| ds.subset(&test_idx));
    let cfg = TrainConfig {
        epochs: args.epochs,
        learn_rate: args.lr,
        ridge: args.ridge,
        seed: args.seed,
        ..TrainConfig::default()
    };

    let rows: Vec<BenchRow> = kinds
        .iter()
        .map(|&kind| {
            let expert = domain::default_terrorism_fis(kind, TNorm::Product);
            let anfis = anfis::build_grid_anfis(expert.inputs(), kind, expert.output_name(), expert.output_range())
                .and_then(|mut m| anfis::train(&mut m, &train, test.as_ref(), &cfg));
            BenchRow {
                kind,
                expert_train: expert_rmse(&expert, &train),
                expert_test: test.as_ref().and_then(|t| expert_rmse(&expert, t)),
                anfis,
            }
        })
        .collect();

    let mut table = String::new();
    writeln!(
        table,
        "records={} train={} test={} seed={} epochs={}",
        ds.len(),
        train.len(),
        test_idx.len(),
        args.seed,
        args.epochs
    )
    .unwrap();
    let header = [
        "mf",
        "approach1",
        "expert_train",
        "anfis_train",
        "expert_test",
        "anfis_test",
    ];
    let mut cells: Vec<[String; 6]> = vec![header.map(str::to_string)];
    let mut machine = String::new();
    for r in &rows {
        let (anfis_train, anfis_test) = match &r.anfis {
            Ok(rep) => (cell(Some(rep.final_train_rmse)), cell(rep.final_test_rmse)),
            Err(_) => ("failed".to_string(), "failed".to_string()),
        };
        cells.push([
            r.kind.name().to_string(),
            "n/a".to_string(),
            cell(r.expert_train),
            anfis_train,
            cell(r.expert_test),
            anfis_test,
        ]);
        let opt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |x| x.to_string());
        write!(
            machine,
            "mf={} approach1=n/a expert_train={} expert_test={}",
            r.kind.name(),
            opt(r.expert_train),
            opt(r.expert_test)
        )
        .unwrap();
        match &r.anfis {
            Ok(rep) => writeln!(
                machine,
                " anfis_train={} anfis_test={} epochs_run={}",
                rep.final_train_rmse,
                opt(rep.final_test_rmse),
                rep.epochs_run
            )
            .unwrap(),
            Err(e) => writeln!(machine, " anfis=failed error=\"{e}\"").unwrap(),
        }
    }
    let widths: Vec<usize> = (0..6)
        .map(|c| cells.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    for row in &cells {
        let line: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        writeln!(table, "{}", line.join("  ").trim_end()).unwrap();
    }
    writeln!(
        table,
        "note: {RMSE_NOTE} approach1 (unstructured text) is not applicable."
    )
    .unwrap();

    stdout.write_all(table.as_bytes()).code(EXIT_INPUT)?;
    if let Some(p) = &args.out {
        write_file(p, &format!("{machine}note={RMSE_NOTE}\n"))?;
    }
    Ok(())
}

pub fn cmd_gen(args: &GenArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    if args.n == 0 {
        return Err(Failure::new(EXIT_INPUT, anyhow!("--n must be >= 1")));
    }
    let oracle = domain::default_terrorism_fis(MfKind::Triangular, TNorm::Product);
    let events = domain::gen_synthetic(args.n, args.seed, &oracle).code(EXIT_ZERO_FIRING)?;
    let mut buf = Vec::new();
    domain::events_to_datafile(&events).write(&mut buf).code(EXIT_INPUT)?;
    match &args.out {
        Some(p) => fs::write(p, &buf)
            .with_context(|| format!("writing {}", p.display()))
            .code(EXIT_INPUT),
        None => stdout.write_all(&buf).code(EXIT_INPUT),
    }
}

pub fn cmd_format(args: &FormatArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let map_text = fs::read_to_string(&args.map)
        .with_context(|| format!("reading {}", args.map.display()))
        .code(EXIT_INPUT)?;
    let map = FormattingMap::parse(&map_text).code(EXIT_INPUT)?;
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(&args.data)
        .with_context(|| format!("opening {}", args.data.display()))
        .code(EXIT_INPUT)?;
    let header: Vec<String> = rdr.headers().code(EXIT_INPUT)?.iter().map(str::to_string).collect();
    let has_tactic = header.iter().any(|h| h == "tactic");
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.code(EXIT_INPUT)?;
        let raw: HashMap<String, String> = header
            .iter()
            .cloned()
            .zip(rec.iter().map(str::to_string))
            .filter(|(k, v)| !(k == "tactic" && v.is_empty()))
            .collect();
        let ev = map
            .format_event(&raw)
            .with_context(|| format!("record {i}"))
            .code(EXIT_INPUT)?;
        rows.push(Row {
            input: ev.input().to_vec(),
            target: ev.tactic.map(|t| f64::from(TacticClass::code(t))),
        });
    }
    let file = DataFile {
        input_columns: CSV_INPUT_COLUMNS.iter().map(|s| s.to_string()).collect(),
        target_column: has_tactic.then(|| "tactic".to_string()),
        rows,
    };
    let mut buf = Vec::new();
    file.write(&mut buf).code(EXIT_INPUT)?;
    match &args.out {
        Some(p) => fs::write(p, &buf)
            .with_context(|| format!("writing {}", p.display()))
            .code(EXIT_INPUT),
        None => stdout.write_all(&buf).code(EXIT_INPUT),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_is_deterministic_and_partitions() {
        let (a_train, a_test) = split_indices(10, 0.3, 4);
        let (b_train, b_test) = split_indices(10, 0.3, 4);
        assert_eq!((&a_train, &a_test), (&b_train, &b_test));
        assert_eq!(a_test.len(), 3);
        let mut all: Vec<usize> = a_train.iter().chain(&a_test).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
        assert_eq!(split_indices(5, 0.0, 1), ((0..5).collect(), vec![]));
    }

    #[test]
    fn cli_parses_mf_lists() {
        let cli = Cli::try_parse_from(["fis", "bench", "--mf", "triangular,gaussian"]).unwrap();
        let Command::Bench(b) = cli.command else { panic!() };
        assert_eq!(b.mf, vec![MfKind::Triangular, MfKind::Gaussian]);
        assert!(Cli::try_parse_from(["fis", "bench", "--mf", "blob"]).is_err());
    }
}
