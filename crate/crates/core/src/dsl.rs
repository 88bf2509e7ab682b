//! The `.fis` model text format.
//!
//! ```text
//! fisfmt 1
//! fis mode coa tnorm product
//!
//! var place range 0 25
//!   term low triangular(0, 1, 9)
//! end
//!
//! output tactic range 1 4
//!   term VL triangular(1, 1, 2.2)
//! end
//!
//! rule: if place is low then tactic is VL
//! ```
//!
//! TSK models declare `fis mode tsk`, leave the output block empty and end
//! each rule with `then coeffs(p1, ..., pn, p0)`. `#` starts a comment.
//! Parsing stops at the first error.

use std::collections::HashMap;
use std::fmt::{self, Write};

use thiserror::Error;

use crate::mf::{MembershipFunction, MfError, MfKind};
use crate::model::{Consequent, FisModel, LinguisticVariable, ModelError, Output, Rule, TNorm, Term};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownKeyword,
    BadNumber,
    UndefinedTerm,
    UndefinedVariable,
    DuplicateRule,
    ArityMismatch,
    /// A well-formed definition whose values are rejected (bad MF
    /// parameters, empty range, duplicate names).
    InvalidDefinition,
    /// Missing or out-of-place tokens and blocks.
    Syntax,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ParseErrorKind::UnknownKeyword => "unknown keyword",
            ParseErrorKind::BadNumber => "bad number",
            ParseErrorKind::UndefinedTerm => "undefined term",
            ParseErrorKind::UndefinedVariable => "undefined variable",
            ParseErrorKind::DuplicateRule => "duplicate rule",
            ParseErrorKind::ArityMismatch => "arity mismatch",
            ParseErrorKind::InvalidDefinition => "invalid definition",
            ParseErrorKind::Syntax => "syntax error",
        };
        f.write_str(s)
    }
}

/// Line and column are 1-based and point at the offending token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
    pub message: String,
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl Token<'_> {
    fn error(&self, kind: ParseErrorKind, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            kind,
            message: message.into(),
        }
    }
}

fn tokenize(line: &str, line_no: usize) -> Vec<Token<'_>> {
    let content = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    let mut column = 0;
    for (byte, ch) in content.char_indices() {
        column += 1;
        let punct = matches!(ch, '(' | ')' | ',' | ':');
        if ch.is_whitespace() || punct {
            if let Some((b, c)) = start.take() {
                tokens.push(Token {
                    text: &content[b..byte],
                    line: line_no,
                    column: c,
                });
            }
            if punct {
                tokens.push(Token {
                    text: &content[byte..byte + 1],
                    line: line_no,
                    column,
                });
            }
        } else if start.is_none() {
            start = Some((byte, column));
        }
    }
    if let Some((b, c)) = start {
        tokens.push(Token {
            text: &content[b..],
            line: line_no,
            column: c,
        });
    }
    tokens
}

/// Cursor over the tokens of one line.
struct Line<'a> {
    tokens: Vec<Token<'a>>,
    pos: usize,
}

impl<'a> Line<'a> {
    fn last(&self) -> Token<'a> {
        self.tokens[self.tokens.len() - 1]
    }

    fn next(&mut self, what: &str) -> Result<Token<'a>, ParseError> {
        match self.tokens.get(self.pos) {
            Some(&t) => {
                self.pos += 1;
                Ok(t)
            }
            None => Err(self
                .last()
                .error(ParseErrorKind::Syntax, format!("expected {what} after this token"))),
        }
    }

    fn expect(&mut self, word: &str) -> Result<Token<'a>, ParseError> {
        let t = self.next(&format!("`{word}`"))?;
        if t.text == word {
            Ok(t)
        } else {
            Err(t.error(ParseErrorKind::Syntax, format!("expected `{word}`, found `{}`", t.text)))
        }
    }

    fn ident(&mut self, what: &str) -> Result<Token<'a>, ParseError> {
        let t = self.next(what)?;
        if is_ident(t.text) {
            Ok(t)
        } else {
            Err(t.error(ParseErrorKind::Syntax, format!("expected {what}, found `{}`", t.text)))
        }
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        let t = self.next("a number")?;
        parse_number(t)
    }

    /// `( n1, n2, ... )`
    fn number_list(&mut self) -> Result<Vec<f64>, ParseError> {
        self.expect("(")?;
        let mut values = Vec::new();
        let t = self.next("a number or `)`")?;
        if t.text == ")" {
            return Ok(values);
        }
        values.push(parse_number(t)?);
        loop {
            let t = self.next("`,` or `)`")?;
            match t.text {
                ")" => return Ok(values),
                "," => values.push(self.number()?),
                other => return Err(t.error(ParseErrorKind::Syntax, format!("expected `,` or `)`, found `{other}`"))),
            }
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.tokens.get(self.pos) {
            None => Ok(()),
            Some(t) => Err(t.error(ParseErrorKind::Syntax, format!("unexpected `{}`", t.text))),
        }
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '-')
}

fn parse_number(t: Token<'_>) -> Result<f64, ParseError> {
    t.text.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
        t.error(
            ParseErrorKind::BadNumber,
            format!("`{}` is not a finite number", t.text),
        )
    })
}

struct VarBlock<'a> {
    name: Token<'a>,
    range_tok: Token<'a>,
    lo: f64,
    hi: f64,
    terms: Vec<(Token<'a>, Term)>,
}

impl VarBlock<'_> {
    fn build(self, end: Token<'_>) -> Result<LinguisticVariable, ParseError> {
        let labels: Vec<Token<'_>> = self.terms.iter().map(|(t, _)| *t).collect();
        let terms = self.terms.into_iter().map(|(_, t)| t).collect();
        LinguisticVariable::new(self.name.text, self.lo, self.hi, terms).map_err(|e| {
            let at = match &e {
                ModelError::EmptyRange { .. } => self.range_tok,
                ModelError::DuplicateTerm { label, .. } | ModelError::TermOutsideRange { label, .. } => {
                    labels.iter().rev().find(|t| t.text == label).copied().unwrap_or(end)
                }
                _ => end,
            };
            let kind = ParseErrorKind::InvalidDefinition;
            ParseError {
                line: at.line,
                column: at.column,
                kind,
                message: e.to_string(),
            }
        })
    }
}

enum Section {
    Header,
    Inputs,
    Rules,
}

pub fn parse_model(text: &str) -> Result<FisModel, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| tokenize(l, i + 1))
        .filter(|t| !t.is_empty())
        .map(|tokens| Line { tokens, pos: 0 });

    let Some(mut first) = lines.next() else {
        return Err(ParseError {
            line: 1,
            column: 1,
            kind: ParseErrorKind::Syntax,
            message: "empty document; expected `fisfmt 1`".into(),
        });
    };
    let kw = first.next("`fisfmt`")?;
    if kw.text != "fisfmt" {
        return Err(kw.error(ParseErrorKind::Syntax, "document must start with `fisfmt 1`"));
    }
    let version = first.next("a format version")?;
    if version.text != FORMAT_VERSION {
        return Err(version.error(
            ParseErrorKind::InvalidDefinition,
            format!("unsupported format version `{}`", version.text),
        ));
    }
    first.finish()?;

    let mut mode_tsk: Option<bool> = None;
    let mut tnorm = TNorm::Product;
    let mut section = Section::Header;
    let mut inputs: Vec<LinguisticVariable> = Vec::new();
    let mut output: Option<Output> = None;
    let mut open: Option<(bool, VarBlock<'_>)> = None;
    let mut rules: Vec<Rule> = Vec::new();
    let mut seen_rules: HashMap<Vec<usize>, usize> = HashMap::new();

    for mut line in lines {
        let head = line.next("a keyword")?;
        if let Some((is_output, block)) = open.as_mut() {
            match head.text {
                "term" => {
                    let label = line.ident("a term label")?;
                    let kind_tok = line.next("a membership function kind")?;
                    let kind: MfKind = kind_tok.text.parse().map_err(|_| {
                        kind_tok.error(
                            ParseErrorKind::UnknownKeyword,
                            format!("unknown membership function `{}`", kind_tok.text),
                        )
                    })?;
                    let params = line.number_list()?;
                    line.finish()?;
                    if *is_output && mode_tsk == Some(true) {
                        return Err(head.error(ParseErrorKind::Syntax, "tsk output blocks take no terms"));
                    }
                    let mf = MembershipFunction::new(kind, params).map_err(|e| {
                        let k = match e {
                            MfError::ParamCount { .. } => ParseErrorKind::ArityMismatch,
                            _ => ParseErrorKind::InvalidDefinition,
                        };
                        kind_tok.error(k, e.to_string())
                    })?;
                    block.terms.push((label, Term::new(label.text, mf)));
                }
                "end" => {
                    line.finish()?;
                    let (is_output, block) = open.take().expect("open block");
                    if is_output {
                        output = Some(if mode_tsk == Some(true) {
                            if !(block.lo < block.hi) {
                                return Err(block.range_tok.error(
                                    ParseErrorKind::InvalidDefinition,
                                    format!("range [{}, {}] is empty", block.lo, block.hi),
                                ));
                            }
                            Output::Tsk {
                                name: block.name.text.to_string(),
                                lo: block.lo,
                                hi: block.hi,
                            }
                        } else {
                            if block.terms.is_empty() {
                                return Err(head.error(ParseErrorKind::InvalidDefinition, "coa output needs terms"));
                            }
                            Output::Linguistic(block.build(head)?)
                        });
                        section = Section::Rules;
                    } else {
                        if block.terms.is_empty() {
                            return Err(head.error(
                                ParseErrorKind::InvalidDefinition,
                                format!("variable `{}` has no terms", block.name.text),
                            ));
                        }
                        inputs.push(block.build(head)?);
                    }
                }
                "var" | "output" | "rule" | "fis" | "fisfmt" => {
                    return Err(head.error(
                        ParseErrorKind::Syntax,
                        format!("`{}` inside an open block; expected `end`", head.text),
                    ));
                }
                other => {
                    return Err(head.error(ParseErrorKind::UnknownKeyword, format!("unknown keyword `{other}`")));
                }
            }
            continue;
        }

        match (head.text, &section) {
            ("fis", Section::Header) => {
                line.expect("mode")?;
                let m = line.next("`coa` or `tsk`")?;
                mode_tsk = Some(match m.text {
                    "coa" => false,
                    "tsk" => true,
                    other => return Err(m.error(ParseErrorKind::UnknownKeyword, format!("unknown mode `{other}`"))),
                });
                line.expect("tnorm")?;
                let t = line.next("`product` or `min`")?;
                tnorm = match t.text {
                    "product" => TNorm::Product,
                    "min" => TNorm::Min,
                    other => return Err(t.error(ParseErrorKind::UnknownKeyword, format!("unknown t-norm `{other}`"))),
                };
                line.finish()?;
                section = Section::Inputs;
            }
            ("var" | "output", Section::Inputs) => {
                let name = line.ident("a variable name")?;
                let range_tok = line.expect("range")?;
                let lo = line.number()?;
                let hi = line.number()?;
                line.finish()?;
                let is_output = head.text == "output";
                let taken = inputs.iter().any(|v| v.name() == name.text);
                if taken {
                    return Err(name.error(
                        ParseErrorKind::InvalidDefinition,
                        format!("duplicate variable `{}`", name.text),
                    ));
                }
                if is_output && inputs.is_empty() {
                    return Err(head.error(ParseErrorKind::Syntax, "output declared before any input variable"));
                }
                open = Some((
                    is_output,
                    VarBlock {
                        name,
                        range_tok,
                        lo,
                        hi,
                        terms: Vec::new(),
                    },
                ));
            }
            ("rule", Section::Rules) => {
                let out = output.as_ref().expect("output parsed");
                let (antecedent, consequent) = parse_rule(&mut line, &inputs, out)?;
                if let Some(prev) = seen_rules.insert(antecedent.clone(), head.line) {
                    return Err(head.error(
                        ParseErrorKind::DuplicateRule,
                        format!("same antecedent as the rule on line {prev}"),
                    ));
                }
                rules.push(Rule::new(antecedent, consequent));
            }
            ("fis" | "var" | "output" | "rule" | "fisfmt" | "term" | "end", _) => {
                let expected = match section {
                    Section::Header => "`fis mode ... tnorm ...`",
                    Section::Inputs => "`var` or `output`",
                    Section::Rules => "`rule:`",
                };
                return Err(head.error(
                    ParseErrorKind::Syntax,
                    format!("unexpected `{}`; expected {expected}", head.text),
                ));
            }
            (other, _) => {
                return Err(head.error(ParseErrorKind::UnknownKeyword, format!("unknown keyword `{other}`")));
            }
        }
    }

    let end_of_input = |message: &str| ParseError {
        line: text.lines().count().max(1),
        column: 1,
        kind: ParseErrorKind::Syntax,
        message: message.to_string(),
    };
    if let Some((_, block)) = open {
        return Err(block.name.error(
            ParseErrorKind::Syntax,
            format!("block `{}` is never closed with `end`", block.name.text),
        ));
    }
    let output = output.ok_or_else(|| end_of_input("document has no `output` block"))?;
    FisModel::new(inputs, output, rules, tnorm).map_err(|e| end_of_input(&e.to_string()))
}

fn parse_rule(
    line: &mut Line<'_>,
    inputs: &[LinguisticVariable],
    output: &Output,
) -> Result<(Vec<usize>, Consequent), ParseError> {
    line.expect(":")?;
    line.expect("if")?;
    let mut antecedent: Vec<Option<usize>> = vec![None; inputs.len()];
    loop {
        let var = line.ident("a variable name")?;
        let vi = inputs.iter().position(|v| v.name() == var.text).ok_or_else(|| {
            var.error(
                ParseErrorKind::UndefinedVariable,
                format!("no input variable `{}`", var.text),
            )
        })?;
        line.expect("is")?;
        let term = line.ident("a term label")?;
        let ti = inputs[vi].term_index(term.text).ok_or_else(|| {
            term.error(
                ParseErrorKind::UndefinedTerm,
                format!("variable `{}` has no term `{}`", var.text, term.text),
            )
        })?;
        if antecedent[vi].replace(ti).is_some() {
            return Err(var.error(
                ParseErrorKind::InvalidDefinition,
                format!("variable `{}` appears twice in one rule", var.text),
            ));
        }
        let joiner = line.next("`and` or `then`")?;
        match joiner.text {
            "and" => continue,
            "then" => {
                if antecedent.iter().any(Option::is_none) {
                    let given = antecedent.iter().flatten().count();
                    return Err(joiner.error(
                        ParseErrorKind::ArityMismatch,
                        format!("rule names {given} of {} input variables", inputs.len()),
                    ));
                }
                break;
            }
            other => {
                return Err(joiner.error(
                    ParseErrorKind::Syntax,
                    format!("expected `and` or `then`, found `{other}`"),
                ))
            }
        }
    }
    let antecedent: Vec<usize> = antecedent.into_iter().flatten().collect();

    let head = line.next("a consequent")?;
    let consequent = match output {
        Output::Linguistic(out) => {
            if head.text != out.name() {
                let kind = if head.text == "coeffs" {
                    ParseErrorKind::Syntax
                } else {
                    ParseErrorKind::UndefinedVariable
                };
                return Err(head.error(kind, format!("expected `{} is LABEL`", out.name())));
            }
            line.expect("is")?;
            let label = line.ident("an output term")?;
            let ti = out.term_index(label.text).ok_or_else(|| {
                label.error(
                    ParseErrorKind::UndefinedTerm,
                    format!("output `{}` has no term `{}`", out.name(), label.text),
                )
            })?;
            Consequent::Term(ti)
        }
        Output::Tsk { .. } => {
            if head.text != "coeffs" {
                return Err(head.error(ParseErrorKind::Syntax, "tsk rules end with `coeffs(...)`"));
            }
            let c = line.number_list()?;
            if c.len() != inputs.len() + 1 {
                return Err(head.error(
                    ParseErrorKind::ArityMismatch,
                    format!("expected {} coefficients, got {}", inputs.len() + 1, c.len()),
                ));
            }
            Consequent::Linear(c)
        }
    };
    line.finish()?;
    Ok((antecedent, consequent))
}

fn write_numbers(out: &mut String, values: &[f64]) {
    out.push('(');
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write!(out, "{v}").expect("write to string");
    }
    out.push(')');
}

fn write_block(out: &mut String, keyword: &str, name: &str, lo: f64, hi: f64, terms: &[Term]) {
    writeln!(out, "{keyword} {name} range {lo} {hi}").expect("write to string");
    for t in terms {
        write!(out, "  term {} {}", t.label, t.mf.kind().name()).expect("write to string");
        write_numbers(out, t.mf.params());
        out.push('\n');
    }
    out.push_str("end\n\n");
}

/// Canonical text for `model`: variables and terms in declaration order,
/// rules sorted by antecedent term indices.
pub fn serialize_model(model: &FisModel) -> String {
    let mut out = String::new();
    writeln!(out, "fisfmt {FORMAT_VERSION}").expect("write to string");
    let mode = match model.output() {
        Output::Linguistic(_) => "coa",
        Output::Tsk { .. } => "tsk",
    };
    writeln!(out, "fis mode {mode} tnorm {}\n", model.tnorm().name()).expect("write to string");
    for v in model.inputs() {
        let (lo, hi) = v.range();
        write_block(&mut out, "var", v.name(), lo, hi, v.terms());
    }
    match model.output() {
        Output::Linguistic(v) => {
            let (lo, hi) = v.range();
            write_block(&mut out, "output", v.name(), lo, hi, v.terms());
        }
        Output::Tsk { name, lo, hi } => write_block(&mut out, "output", name, *lo, *hi, &[]),
    }
    for rule in model.canonical_rules() {
        out.push_str("rule: if ");
        for (i, (&t, v)) in rule.antecedent.iter().zip(model.inputs()).enumerate() {
            if i > 0 {
                out.push_str(" and ");
            }
            write!(out, "{} is {}", v.name(), v.terms()[t].label).expect("write to string");
        }
        out.push_str(" then ");
        match (&rule.consequent, model.output()) {
            (Consequent::Term(t), Output::Linguistic(v)) => {
                write!(out, "{} is {}", v.name(), v.terms()[*t].label).expect("write to string");
            }
            (Consequent::Linear(c), _) => {
                out.push_str("coeffs");
                write_numbers(&mut out, c);
            }
            (Consequent::Term(_), Output::Tsk { .. }) => unreachable!("validated model"),
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anfis::build_grid_anfis;
    use crate::domain::{default_terrorism_fis, TERRORISM_FIS};

    const SMALL: &str = "fisfmt 1
fis mode coa tnorm min
# a comment
var x range 0 10
  term lo triangular(0, 0, 5)   # trailing comment
  term hi triangular(5, 10, 10)
end
output y range 0 1
  term no gaussian(0, 0.2)
  term yes gaussian(1, 0.2)
end
rule: if x is hi then y is yes
rule: if x is lo then y is no
";

    fn err(text: &str) -> ParseError {
        parse_model(text).unwrap_err()
    }

    #[test]
    fn parses_small_model() {
        let m = parse_model(SMALL).unwrap();
        assert_eq!(m.inputs().len(), 1);
        assert_eq!(m.rules().len(), 2);
        assert_eq!(m.tnorm(), TNorm::Min);
        let again = parse_model(&serialize_model(&m)).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn bundled_terrorism_model() {
        let m = parse_model(TERRORISM_FIS).unwrap();
        assert_eq!(m.inputs().len(), 3);
        assert_eq!(m.rules().len(), 27);
        assert_eq!(m, default_terrorism_fis(MfKind::Triangular, TNorm::Product));
        assert_eq!(serialize_model(&m), TERRORISM_FIS);
    }

    #[test]
    fn serialize_is_deterministic() {
        let m = default_terrorism_fis(MfKind::Gaussian, TNorm::Min);
        assert_eq!(serialize_model(&m), serialize_model(&m));
    }

    #[test]
    fn tsk_models_carry_coefficients() {
        let inputs = default_terrorism_fis(MfKind::BellShape, TNorm::Product)
            .inputs()
            .to_vec();
        let mut m = build_grid_anfis(&inputs, MfKind::BellShape, "tactic", (1.0, 4.0)).unwrap();
        let theta: Vec<f64> = (0..108).map(|i| i as f64 / 7.0 - 3.0).collect();
        m.set_consequent_params(&theta);
        let text = serialize_model(&m);
        assert_eq!(text.matches("coeffs(").count(), 27);
        assert!(text.contains("fis mode tsk"));
        let back = parse_model(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.consequent_params(), theta);
    }

    #[test]
    fn undefined_term_is_located() {
        let text = SMALL.replace("rule: if x is hi", "rule: if x is huge");
        let e = err(&text);
        assert_eq!(e.kind, ParseErrorKind::UndefinedTerm);
        assert_eq!((e.line, e.column), (12, 15));
    }

    #[test]
    fn duplicate_rule() {
        let text = format!("{SMALL}rule: if x is hi then y is no\n");
        let e = err(&text);
        assert_eq!(e.kind, ParseErrorKind::DuplicateRule);
        assert_eq!((e.line, e.column), (14, 1));
    }

    #[test]
    fn error_kinds_and_positions() {
        let e = err(&SMALL.replace("range 0 10", "range 0 ten"));
        assert_eq!((e.kind, e.line, e.column), (ParseErrorKind::BadNumber, 4, 15));

        let e = err(&SMALL.replace("  term lo", "  trem lo"));
        assert_eq!((e.kind, e.line, e.column), (ParseErrorKind::UnknownKeyword, 5, 3));

        let e = err(&SMALL.replace("triangular(0, 0, 5)", "triangular(0, 5)"));
        assert_eq!((e.kind, e.line, e.column), (ParseErrorKind::ArityMismatch, 5, 11));

        let e = err(&SMALL.replace("triangular(0, 0, 5)", "triangle(0, 0, 5)"));
        assert_eq!(e.kind, ParseErrorKind::UnknownKeyword);

        let e = err(&SMALL.replace("triangular(0, 0, 5)", "triangular(5, 0, 1)"));
        assert_eq!(e.kind, ParseErrorKind::InvalidDefinition);

        let e = err(&SMALL.replace("if x is hi", "if z is hi"));
        assert_eq!((e.kind, e.line, e.column), (ParseErrorKind::UndefinedVariable, 12, 10));

        let e = err(&SMALL.replace("then y is yes", "then y is maybe"));
        assert_eq!(e.kind, ParseErrorKind::UndefinedTerm);

        let e = err(&SMALL.replace("fisfmt 1", "fisfmt 2"));
        assert_eq!((e.line, e.column), (1, 8));

        let e = err(&SMALL.replacen("end\n", "", 1));
        assert_eq!(e.kind, ParseErrorKind::Syntax);

        let e = err(&SMALL.replace("mode coa", "mode fuzzy"));
        assert_eq!((e.kind, e.column), (ParseErrorKind::UnknownKeyword, 10));

        let e = err("");
        assert_eq!(e.kind, ParseErrorKind::Syntax);
    }

    #[test]
    fn rule_arity_mismatch() {
        let text = "fisfmt 1
fis mode tsk tnorm product
var a range 0 1
  term t gaussian(0.5, 0.2)
end
var b range 0 1
  term t gaussian(0.5, 0.2)
end
output y range 0 1
end
rule: if a is t then coeffs(1, 2, 3)
";
        let e = err(text);
        assert_eq!((e.kind, e.line, e.column), (ParseErrorKind::ArityMismatch, 11, 17));
        let e = err(&text
            .replace("if a is t then", "if a is t and b is t then")
            .replace("(1, 2, 3)", "(1, 2)"));
        assert_eq!((e.kind, e.column), (ParseErrorKind::ArityMismatch, 33));
        let ok = text.replace("if a is t then", "if b is t and a is t then");
        assert_eq!(
            parse_model(&ok).unwrap().rules()[0].consequent,
            Consequent::Linear(vec![1.0, 2.0, 3.0])
        );
    }

    #[test]
    fn error_points_at_real_token() {
        let variants = [
            SMALL.replace("range 0 10", "range 0 ten"),
            SMALL.replace("if x is hi", "if z is hi"),
            SMALL.replace("rule: if", "rule if"),
            SMALL.replace("then y is yes", "then y yes"),
            format!("{SMALL}bogus line\n"),
        ];
        for text in variants {
            let e = err(&text);
            let line = text.lines().nth(e.line - 1).unwrap();
            let c = line.chars().nth(e.column - 1).unwrap();
            assert!(!c.is_whitespace(), "{e}");
        }
    }
}
