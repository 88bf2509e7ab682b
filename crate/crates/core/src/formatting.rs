//! Feature formatting: turns structured events whose fields hold text into
//! numeric event vectors.
//!
//! A map file is UTF-8 text with one `field<TAB>text value<TAB>integer` entry
//! per line; `#` starts a comment. The order in which fields first appear is
//! their priority, which fixes the vector layout. A field named `tactic`, if
//! present, maps text to class codes and is not part of the input vector.

use std::collections::HashMap;

use thiserror::Error;

use crate::domain::{EventVector, TacticClass};

pub const TACTIC_FIELD: &str = "tactic";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: expected `field<TAB>value<TAB>integer`")]
    Syntax { line: usize },
    #[error("line {line}: `{value}` is not an integer")]
    BadInteger { line: usize, value: String },
    #[error("line {line}: field `{field}` maps `{value}` twice")]
    DuplicateValue { line: usize, field: String, value: String },
    #[error("line {line}: field `{field}` already uses code {code}")]
    DuplicateCode { line: usize, field: String, code: i64 },
    #[error("map defines {0} input fields; exactly 3 are required")]
    FieldCount(usize),
    #[error("missing field `{0}`")]
    MissingField(String),
    #[error("field `{field}`: unknown value `{value}`")]
    UnknownValue { field: String, value: String },
}

#[derive(Debug, Clone, PartialEq, Default)]
struct FieldMap {
    values: HashMap<String, i64>,
    codes: HashMap<i64, String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FormattingMap {
    priority: Vec<String>,
    fields: HashMap<String, FieldMap>,
}

impl FormattingMap {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut map = FormattingMap::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = content.split('\t').collect();
            let [field, value, code] = parts[..] else {
                return Err(FormatError::Syntax { line });
            };
            let (field, value, code) = (field.trim(), value.trim(), code.trim());
            if field.is_empty() || value.is_empty() {
                return Err(FormatError::Syntax { line });
            }
            let code: i64 = code.parse().map_err(|_| FormatError::BadInteger {
                line,
                value: code.to_string(),
            })?;
            map.insert(line, field, value, code)?;
        }
        let inputs = map.input_fields().count();
        if inputs != 3 {
            return Err(FormatError::FieldCount(inputs));
        }
        Ok(map)
    }

    fn insert(&mut self, line: usize, field: &str, value: &str, code: i64) -> Result<(), FormatError> {
        if !self.fields.contains_key(field) {
            self.priority.push(field.to_string());
        }
        let fm = self.fields.entry(field.to_string()).or_default();
        if fm.values.contains_key(value) {
            return Err(FormatError::DuplicateValue {
                line,
                field: field.to_string(),
                value: value.to_string(),
            });
        }
        if fm.codes.contains_key(&code) {
            return Err(FormatError::DuplicateCode {
                line,
                field: field.to_string(),
                code,
            });
        }
        fm.values.insert(value.to_string(), code);
        fm.codes.insert(code, value.to_string());
        Ok(())
    }

    /// Input fields in priority order.
    pub fn input_fields(&self) -> impl Iterator<Item = &str> {
        self.priority.iter().map(String::as_str).filter(|f| *f != TACTIC_FIELD)
    }

    pub fn code(&self, field: &str, value: &str) -> Option<i64> {
        self.fields.get(field)?.values.get(value).copied()
    }

    /// Formats one raw event. The tactic, when present, is resolved through
    /// the map's `tactic` field if it has one, else read as a class label
    /// (`VL`, `L`, `M`, `H`) or a code 1–4.
    pub fn format_event(&self, raw: &HashMap<String, String>) -> Result<EventVector, FormatError> {
        let mut x = [0.0; 3];
        for (slot, field) in x.iter_mut().zip(self.input_fields()) {
            let value = raw
                .get(field)
                .ok_or_else(|| FormatError::MissingField(field.to_string()))?;
            let code = self
                .code(field, value.trim())
                .ok_or_else(|| FormatError::UnknownValue {
                    field: field.to_string(),
                    value: value.clone(),
                })?;
            *slot = code as f64;
        }
        let tactic = match raw.get(TACTIC_FIELD) {
            None => None,
            Some(v) => Some(self.resolve_tactic(v.trim()).ok_or_else(|| FormatError::UnknownValue {
                field: TACTIC_FIELD.to_string(),
                value: v.clone(),
            })?),
        };
        Ok(EventVector {
            place: x[0],
            victim_status: x[1],
            terrorist_status: x[2],
            tactic,
        })
    }

    fn resolve_tactic(&self, value: &str) -> Option<TacticClass> {
        if self.fields.contains_key(TACTIC_FIELD) {
            let code = self.code(TACTIC_FIELD, value)?;
            return TacticClass::from_code(u8::try_from(code).ok()?);
        }
        value
            .parse::<TacticClass>()
            .ok()
            .or_else(|| TacticClass::from_code(value.parse().ok()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MAP: &str = "# field\tvalue\tcode\n\
        place\tmarket\t1\n\
        place\tgovernment office\t20\n\
        victim_status\tnone died\t1\n\
        victim_status\tdied\t3\n\
        terrorist_status\tescaped\t1\n\
        tactic\tbombing failed\t1\n\
        tactic\tsuicide bombing\t4\n";

    fn raw(pairs: &[(&str, &str)]) -> HashMap<String, String> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn first_categories_give_all_ones() {
        let map = FormattingMap::parse(MAP).unwrap();
        let ev = map
            .format_event(&raw(&[
                ("place", "market"),
                ("victim_status", "none died"),
                ("terrorist_status", "escaped"),
                ("tactic", "bombing failed"),
            ]))
            .unwrap();
        let v = [
            ev.place,
            ev.victim_status,
            ev.terrorist_status,
            f64::from(ev.tactic.unwrap().code()),
        ];
        assert_eq!(v, [1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn unlabeled_without_tactic() {
        let map = FormattingMap::parse(MAP).unwrap();
        let ev = map
            .format_event(&raw(&[
                ("place", "government office"),
                ("victim_status", "died"),
                ("terrorist_status", "escaped"),
            ]))
            .unwrap();
        assert_eq!(ev.place, 20.0);
        assert_eq!(ev.tactic, None);
    }

    #[test]
    fn error_paths() {
        let map = FormattingMap::parse(MAP).unwrap();
        assert_eq!(
            map.format_event(&raw(&[("victim_status", "died"), ("terrorist_status", "escaped")])),
            Err(FormatError::MissingField("place".into()))
        );
        assert!(matches!(
            map.format_event(&raw(&[
                ("place", "beach"),
                ("victim_status", "died"),
                ("terrorist_status", "escaped")
            ])),
            Err(FormatError::UnknownValue { field, .. }) if field == "place"
        ));
        assert!(matches!(
            FormattingMap::parse("place\ta\t1\nplace\ta\t2\n"),
            Err(FormatError::DuplicateValue { line: 2, .. })
        ));
        assert!(matches!(
            FormattingMap::parse("place\ta\t1\nplace\tb\t1\n"),
            Err(FormatError::DuplicateCode { line: 2, .. })
        ));
        assert!(matches!(
            FormattingMap::parse("place a 1\n"),
            Err(FormatError::Syntax { line: 1 })
        ));
        assert!(matches!(
            FormattingMap::parse("place\ta\tx\n"),
            Err(FormatError::BadInteger { .. })
        ));
        assert_eq!(FormattingMap::parse("place\ta\t1\n"), Err(FormatError::FieldCount(1)));
    }

    #[test]
    fn tactic_labels_without_tactic_field() {
        let map = FormattingMap::parse("a\tx\t1\nb\tx\t1\nc\tx\t1\n").unwrap();
        let base = [("a", "x"), ("b", "x"), ("c", "x")];
        let mut r = raw(&base);
        r.insert("tactic".into(), "M".into());
        assert_eq!(map.format_event(&r).unwrap().tactic, Some(TacticClass::M));
        r.insert("tactic".into(), "4".into());
        assert_eq!(map.format_event(&r).unwrap().tactic, Some(TacticClass::H));
        r.insert("tactic".into(), "9".into());
        assert!(map.format_event(&r).is_err());
    }
}
