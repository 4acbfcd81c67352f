//! Line-delimited catalog of q-series.
//!
//! Each non-blank line not starting with `#` is a JSON object
//! `{"name": .., "area": "p/q", "coeffs": ["c0", "c1", ..]}` where `coeffs[k]`
//! is the coefficient of `q^k`. The `1/q` term is implicit; an optional
//! `"principal"` field states its coefficient and must be `"1"`.

use std::collections::HashSet;
use std::io::BufRead;

use num_traits::{One, Zero};
use serde::Deserialize;
use thiserror::Error;

use crate::exactalg::rational::parse_rational;
use crate::exactalg::Rational;
use crate::qseries::QSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("line {line}: entry {name:?} has principal part {principal}/q, expected 1/q")]
    NonMonicPrincipal { line: usize, name: String, principal: String },
    #[error("line {line}: duplicate name {name:?}")]
    DuplicateName { line: usize, name: String },
    #[error("line {line}: {msg}")]
    Invalid { line: usize, msg: String },
    #[error("read failed: {0}")]
    Io(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub area: Rational,
    pub series: QSeries,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    name: String,
    area: String,
    coeffs: Vec<String>,
    #[serde(default)]
    principal: Option<String>,
}

pub fn load_catalog<R: BufRead>(source: R) -> Result<Vec<CatalogEntry>, CatalogError> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let text = line.map_err(|e| CatalogError::Io(e.to_string()))?;
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let raw: RawEntry = serde_json::from_str(trimmed).map_err(|e| CatalogError::Parse {
            line: line_no,
            column: e.column() + (text.len() - text.trim_start().len()),
            msg: e.to_string(),
        })?;
        let entry = validate(raw, line_no)?;
        if !seen.insert(entry.name.clone()) {
            return Err(CatalogError::DuplicateName { line: line_no, name: entry.name });
        }
        out.push(entry);
    }
    Ok(out)
}

pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>, CatalogError> {
    load_catalog(text.as_bytes())
}

fn validate(raw: RawEntry, line: usize) -> Result<CatalogEntry, CatalogError> {
    let invalid = |msg: String| CatalogError::Invalid { line, msg };
    if raw.name.is_empty() {
        return Err(invalid("empty name".into()));
    }
    if let Some(p) = raw.principal {
        let value = parse_rational(&p).ok_or_else(|| invalid(format!("bad principal {p:?}")))?;
        if !value.is_one() {
            return Err(CatalogError::NonMonicPrincipal { line, name: raw.name, principal: p });
        }
    }
    let area = parse_rational(&raw.area).ok_or_else(|| invalid(format!("bad area {:?}", raw.area)))?;
    if area <= Rational::zero() {
        return Err(invalid(format!("area {} is not positive", raw.area)));
    }
    if raw.coeffs.is_empty() {
        return Err(invalid("no coefficients".into()));
    }
    let coeffs = raw
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| parse_rational(c).ok_or_else(|| invalid(format!("bad coefficient {c:?} at q^{k}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CatalogEntry { name: raw.name, area, series: QSeries::new(coeffs) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{rat, ratio};

    #[test]
    fn j_entry() {
        let doc =
            r#"{"name":"1A-like","area":"1","coeffs":["744","196884","21493760","864299970","20245856256"]}"#;
        let cat = parse_catalog(doc).unwrap();
        assert_eq!(cat.len(), 1);
        assert_eq!(cat[0].series.prec(), 4);
        assert_eq!(cat[0].series.coeff(4), &rat(20245856256));
    }

    #[test]
    fn empty_and_comments() {
        assert!(parse_catalog("").unwrap().is_empty());
        let cat =
            parse_catalog("# header\n\n{\"name\":\"a\",\"area\":\"1/3\",\"coeffs\":[\"0\"]}\n").unwrap();
        assert_eq!(cat[0].area, ratio(1, 3));
    }

    #[test]
    fn rejections() {
        let doc = r#"{"name":"b","area":"1","principal":"2","coeffs":["1"]}"#;
        assert!(matches!(parse_catalog(doc), Err(CatalogError::NonMonicPrincipal { line: 1, .. })));
        let dup = "{\"name\":\"a\",\"area\":\"1\",\"coeffs\":[\"1\"]}\n{\"name\":\"a\",\"area\":\"2\",\"coeffs\":[\"1\"]}";
        assert!(matches!(parse_catalog(dup), Err(CatalogError::DuplicateName { line: 2, .. })));
        let broken = "\n{\"name\":\"a\",\"area\":\"1\",\"coeffs\":[1]}";
        assert!(matches!(parse_catalog(broken), Err(CatalogError::Parse { line: 2, .. })));
        let area = r#"{"name":"a","area":"-1","coeffs":["1"]}"#;
        assert!(matches!(parse_catalog(area), Err(CatalogError::Invalid { .. })));
    }
}
