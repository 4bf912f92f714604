//! JSON space specs.
//!
//! Scalar: `{"a": <family>, "b": <family>}`; matrix:
//! `{"d": 2, "Q": [[...]], "channels": [<pair>, ...], "A": {"0": [[...]]}, "B": {...}}`.
//! A family is `{"coeff": [re, im], "base": [re, im], "power": p,
//! "overrides": {"n": [re, im]}}`; complex values may also be bare reals.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Deserialize;

use crate::matrixkernel::{MatrixKernelSpace, RawTables};
use crate::sequences::{SequenceFamily, SequencePair};

/// Parse failure, located by line/column or by JSON path.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecError {
    pub location: String,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for SpecError {}

fn at(location: impl Into<String>, message: impl fmt::Display) -> SpecError {
    SpecError {
        location: location.into(),
        message: message.to_string(),
    }
}

/// Numeric options carried alongside the space.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpecOptions {
    pub name: Option<String>,
    pub truncation: Option<usize>,
    pub horizon: Option<usize>,
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone)]
pub enum SpaceSpec {
    Scalar {
        pair: SequencePair,
        options: SpecOptions,
    },
    Matrix {
        space: Box<MatrixKernelSpace>,
        options: SpecOptions,
    },
}

impl SpaceSpec {
    pub fn options(&self) -> &SpecOptions {
        match self {
            SpaceSpec::Scalar { options, .. } | SpaceSpec::Matrix { options, .. } => options,
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawComplex {
    Pair([f64; 2]),
    Real(f64),
}

impl RawComplex {
    fn value(&self) -> Complex64 {
        match *self {
            RawComplex::Pair([re, im]) => Complex64::new(re, im),
            RawComplex::Real(re) => Complex64::new(re, 0.0),
        }
    }
}

fn one() -> RawComplex {
    RawComplex::Real(1.0)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    #[serde(default = "one")]
    coeff: RawComplex,
    #[serde(default = "one")]
    base: RawComplex,
    #[serde(default)]
    power: f64,
    #[serde(default)]
    overrides: BTreeMap<String, RawComplex>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPair {
    a: RawFamily,
    b: RawFamily,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTolerances {
    tail: Option<f64>,
}

type RawMatrix = Vec<Vec<RawComplex>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(default)]
    name: Option<String>,
    a: Option<RawFamily>,
    b: Option<RawFamily>,
    d: Option<usize>,
    #[serde(rename = "Q")]
    q: Option<RawMatrix>,
    channels: Option<Vec<RawPair>>,
    #[serde(rename = "A")]
    a_tables: Option<BTreeMap<String, RawMatrix>>,
    #[serde(rename = "B")]
    b_tables: Option<BTreeMap<String, RawMatrix>>,
    truncation: Option<usize>,
    horizon: Option<usize>,
    tolerances: Option<RawTolerances>,
}

fn family(raw: &RawFamily, path: &str) -> Result<SequenceFamily, SpecError> {
    let mut f = SequenceFamily::new(raw.coeff.value(), raw.base.value(), raw.power).map_err(|e| at(path, e))?;
    for (key, v) in &raw.overrides {
        let n: usize = key.parse().map_err(|_| {
            at(
                format!("{path}.overrides.{key}"),
                "override key must be a nonnegative index",
            )
        })?;
        f = f
            .with_override(n, v.value())
            .map_err(|e| at(format!("{path}.overrides.{key}"), e))?;
    }
    Ok(f)
}

fn matrix(raw: &RawMatrix, d: usize, path: &str) -> Result<DMatrix<Complex64>, SpecError> {
    if raw.len() != d || raw.iter().any(|row| row.len() != d) {
        return Err(at(path, format!("expected a {d}x{d} matrix")));
    }
    Ok(DMatrix::from_fn(d, d, |i, j| raw[i][j].value()))
}

fn tables(
    raw: &BTreeMap<String, RawMatrix>,
    d: usize,
    path: &str,
) -> Result<BTreeMap<usize, DMatrix<Complex64>>, SpecError> {
    raw.iter()
        .map(|(key, m)| {
            let loc = format!("{path}.{key}");
            let n: usize = key
                .parse()
                .map_err(|_| at(&loc, "table key must be a nonnegative index"))?;
            Ok((n, matrix(m, d, &loc)?))
        })
        .collect()
}

/// Parses a spec; `source` names the input in error locations.
pub fn parse_spec(text: &str, source: &str) -> Result<SpaceSpec, SpecError> {
    let raw: RawSpec =
        serde_json::from_str(text).map_err(|e| at(format!("{source}:{}:{}", e.line(), e.column()), e))?;
    let options = SpecOptions {
        name: raw.name,
        truncation: raw.truncation,
        horizon: raw.horizon,
        tolerance: raw.tolerances.and_then(|t| t.tail),
    };
    let loc = |p: &str| format!("{source}: {p}");
    if let Some(channels) = &raw.channels {
        if raw.a.is_some() || raw.b.is_some() {
            return Err(at(loc("a"), "scalar families cannot be combined with channels"));
        }
        let d = raw.d.unwrap_or(channels.len());
        if d != channels.len() {
            return Err(at(
                loc("channels"),
                format!("expected {d} channels, got {}", channels.len()),
            ));
        }
        let q = match &raw.q {
            Some(q) => matrix(q, d, &loc("Q"))?,
            None => DMatrix::identity(d, d),
        };
        let pairs = channels
            .iter()
            .enumerate()
            .map(|(i, p)| {
                Ok(SequencePair::new(
                    family(&p.a, &loc(&format!("channels.{i}.a")))?,
                    family(&p.b, &loc(&format!("channels.{i}.b")))?,
                ))
            })
            .collect::<Result<Vec<_>, SpecError>>()?;
        let mut space = MatrixKernelSpace::new(q, pairs).map_err(|e| at(loc("Q"), e))?;
        if raw.a_tables.is_some() || raw.b_tables.is_some() {
            let empty = BTreeMap::new();
            let tables = RawTables {
                a: tables(raw.a_tables.as_ref().unwrap_or(&empty), d, &loc("A"))?,
                b: tables(raw.b_tables.as_ref().unwrap_or(&empty), d, &loc("B"))?,
            };
            space = space.with_raw_tables(tables).map_err(|e| at(loc("A"), e))?;
        }
        return Ok(SpaceSpec::Matrix {
            space: Box::new(space),
            options,
        });
    }
    if raw.d.is_some() || raw.q.is_some() || raw.a_tables.is_some() || raw.b_tables.is_some() {
        return Err(at(loc("channels"), "matrix specs require a channels list"));
    }
    let a = raw.a.as_ref().ok_or_else(|| at(loc("a"), "missing family a"))?;
    let b = raw.b.as_ref().ok_or_else(|| at(loc("b"), "missing family b"))?;
    Ok(SpaceSpec::Scalar {
        pair: SequencePair::new(family(a, &loc("a"))?, family(b, &loc("b"))?),
        options,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_spec_round_trip() {
        let s = parse_spec(
            r#"{"a": {"coeff": [1, 0]}, "b": {"coeff": 0.5, "overrides": {"2": [0.25, 1]}}, "truncation": 32}"#,
            "x.json",
        )
        .unwrap();
        let SpaceSpec::Scalar { pair, options } = s else {
            panic!("scalar expected")
        };
        assert_eq!(pair.b.term(2), Complex64::new(0.25, 1.0));
        assert_eq!(pair.b.term(3), Complex64::new(0.5, 0.0));
        assert_eq!(options.truncation, Some(32));
    }

    #[test]
    fn zero_override_names_index() {
        let e = parse_spec(r#"{"a": {}, "b": {"overrides": {"7": [0, 0]}}}"#, "x.json").unwrap_err();
        assert_eq!(e.location, "x.json: b.overrides.7");
        assert!(e.message.contains("index 7"));
    }

    #[test]
    fn syntax_error_is_positional() {
        let e = parse_spec("{\n  \"a\": {,\n}", "s.json").unwrap_err();
        assert!(e.location.starts_with("s.json:2:"), "{e}");
    }

    #[test]
    fn unknown_field_rejected() {
        assert!(parse_spec(r#"{"a": {"cof": 1}, "b": {}}"#, "x").is_err());
    }

    #[test]
    fn matrix_spec_checks_unitarity() {
        let e = parse_spec(
            r#"{"d": 2, "Q": [[1, 0.5], [0, 1]], "channels": [{"a": {}, "b": {"coeff": 0.5}}, {"a": {"power": 1}, "b": {"base": 0.5}}]}"#,
            "m.json",
        )
        .unwrap_err();
        assert_eq!(e.location, "m.json: Q");
        assert!(e.message.contains("not unitary"));
    }

    #[test]
    fn matrix_spec_with_tables() {
        let s = parse_spec(
            r#"{"d": 1, "Q": [[1]], "channels": [{"a": {}, "b": {"coeff": 0.5}}], "A": {"0": [[1]]}, "B": {"0": [[0.5]]}}"#,
            "m.json",
        )
        .unwrap();
        let SpaceSpec::Matrix { space, .. } = s else {
            panic!("matrix expected")
        };
        assert_eq!(space.raw().unwrap().a.len(), 1);
    }
}
