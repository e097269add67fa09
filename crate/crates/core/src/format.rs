//! The JSON file format for algebras and braces.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "kind": "prelie",
//!   "field": "Q",
//!   "dim": 2,
//!   "basis": ["e1", "e2"],
//!   "entries": [
//!     [0, 0, 1, "1/1"]
//!   ]
//! }
//! ```
//!
//! Indices are 0-based. A pre-Lie entry `[i, j, k, c]` means the coefficient
//! of `e_k` in `e_i·e_j` is `c`. A brace file adds `"class_bound"` and has
//! entries `[k, [i_1, …, i_k], j, o, c]`: the coefficient of `e_o` in
//! `Λ_k(e_{i_1}, …, e_{i_k}; e_j)`, with the left indices sorted. A prime
//! field is written `{"p": 7}`. Values are exact strings `"n/d"`.

use std::collections::BTreeSet;
use std::path::Path;

use serde::Deserialize;

use crate::brace::{GradedBrace, Lambda};
use crate::error::{Error, Result};
use crate::field::{Scalar, ScalarField};
use crate::linalg::Vector;
use crate::prelie::PreLieAlgebra;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum FieldSpec {
    Name(String),
    Prime(PrimeSpec),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PrimeSpec {
    p: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    format_version: u32,
    kind: String,
    field: FieldSpec,
    dim: usize,
    basis: Vec<String>,
    #[serde(default)]
    class_bound: Option<usize>,
    entries: Vec<serde_json::Value>,
}

/// The contents of a file, not yet checked against any axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraFile {
    PreLie(PreLieAlgebra),
    Brace(GradedBrace),
}

impl AlgebraFile {
    pub fn kind(&self) -> &'static str {
        match self {
            AlgebraFile::PreLie(_) => "prelie",
            AlgebraFile::Brace(_) => "brace",
        }
    }

    pub fn field(&self) -> ScalarField {
        match self {
            AlgebraFile::PreLie(a) => a.field(),
            AlgebraFile::Brace(b) => b.field(),
        }
    }
}

fn parse_field(spec: &FieldSpec) -> Result<ScalarField> {
    match spec {
        FieldSpec::Name(name) if name == "Q" => Ok(ScalarField::Rationals),
        FieldSpec::Name(name) => Err(Error::Parse(format!(
            "unknown field {name:?}; use \"Q\" or {{\"p\": 7}}"
        ))),
        FieldSpec::Prime(PrimeSpec { p }) => ScalarField::prime(*p),
    }
}

fn check_index(i: usize, dim: usize) -> Result<()> {
    if i >= dim {
        return Err(Error::Parse(format!(
            "index {i} out of range for dimension {dim}"
        )));
    }
    Ok(())
}

/// Parse file text. `field_override` reads the values in another field,
/// e.g. reducing a rational file modulo a prime.
pub fn parse(text: &str, field_override: Option<ScalarField>) -> Result<AlgebraFile> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if raw.format_version != FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported format_version {}",
            raw.format_version
        )));
    }
    let field = match field_override {
        Some(f) => f,
        None => parse_field(&raw.field)?,
    };
    let dim = raw.dim;
    if dim == 0 {
        return Err(Error::Parse("dim must be positive".into()));
    }
    if raw.basis.len() != dim {
        return Err(Error::Parse(format!(
            "{} basis names for dimension {dim}",
            raw.basis.len()
        )));
    }
    let value = |text: &str| {
        field
            .parse(text)
            .map_err(|e| Error::Parse(format!("value {text:?}: {e}")))
    };
    match raw.kind.as_str() {
        "prelie" => {
            if raw.class_bound.is_some() {
                return Err(Error::Parse("class_bound only applies to braces".into()));
            }
            let mut seen = BTreeSet::new();
            let mut entries = Vec::with_capacity(raw.entries.len());
            for e in raw.entries {
                let (i, j, k, c): (usize, usize, usize, String) = serde_json::from_value(e)
                    .map_err(|e| Error::Parse(format!("pre-Lie entry: {e}")))?;
                for x in [i, j, k] {
                    check_index(x, dim)?;
                }
                if !seen.insert((i, j, k)) {
                    return Err(Error::Parse(format!("duplicate entry [{i}, {j}, {k}]")));
                }
                entries.push((i, j, k, value(&c)?));
            }
            let alg = PreLieAlgebra::unchecked_from_entries(field, dim, &entries)?
                .with_basis_names(raw.basis)?;
            Ok(AlgebraFile::PreLie(alg))
        }
        "brace" => {
            let s = raw
                .class_bound
                .ok_or_else(|| Error::Parse("brace files need class_bound".into()))?;
            if s < 2 {
                return Err(Error::Parse("class_bound must be at least 2".into()));
            }
            let mut lambdas: Vec<Lambda> = (1..s).map(|k| Lambda::zero(field, dim, k)).collect();
            let mut seen = BTreeSet::new();
            for e in raw.entries {
                let (k, left, j, o, c): (usize, Vec<usize>, usize, usize, String) =
                    serde_json::from_value(e)
                        .map_err(|e| Error::Parse(format!("brace entry: {e}")))?;
                if k == 0 || k >= s {
                    return Err(Error::Parse(format!("degree {k} outside 1..{}", s - 1)));
                }
                if left.len() != k {
                    return Err(Error::Parse(format!(
                        "degree {k} entry has {} left indices",
                        left.len()
                    )));
                }
                if left.windows(2).any(|w| w[0] > w[1]) {
                    return Err(Error::Parse(format!(
                        "left indices {left:?} are not sorted"
                    )));
                }
                for &x in left.iter().chain([&j, &o]) {
                    check_index(x, dim)?;
                }
                if !seen.insert((k, left.clone(), j, o)) {
                    return Err(Error::Parse(format!(
                        "duplicate entry for degree {k}, {left:?}, {j}, {o}"
                    )));
                }
                let lambda = &mut lambdas[k - 1];
                let mut out: Vector = lambda.entry(&left, j);
                out.set(o, value(&c)?);
                lambda.set(&left, j, out)?;
            }
            let brace =
                GradedBrace::new_unchecked(field, dim, s, lambdas)?.with_basis_names(raw.basis)?;
            Ok(AlgebraFile::Brace(brace))
        }
        other => Err(Error::Parse(format!("unknown kind {other:?}"))),
    }
}

pub fn read(path: &Path, field_override: Option<ScalarField>) -> Result<AlgebraFile> {
    parse(&std::fs::read_to_string(path)?, field_override)
}

fn field_json(field: ScalarField) -> String {
    match field {
        ScalarField::Rationals => "\"Q\"".into(),
        ScalarField::Prime(p) => format!("{{\"p\": {p}}}"),
    }
}

fn quoted(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn value_json(c: &Scalar) -> String {
    quoted(&c.to_string())
}

fn render(
    kind: &str,
    field: ScalarField,
    dim: usize,
    basis: &[String],
    class_bound: Option<usize>,
    entries: Vec<String>,
) -> String {
    let mut out = String::from("{\n");
    out.push_str(&format!("  \"format_version\": {FORMAT_VERSION},\n"));
    out.push_str(&format!("  \"kind\": {},\n", quoted(kind)));
    out.push_str(&format!("  \"field\": {},\n", field_json(field)));
    out.push_str(&format!("  \"dim\": {dim},\n"));
    if let Some(s) = class_bound {
        out.push_str(&format!("  \"class_bound\": {s},\n"));
    }
    let names: Vec<String> = basis.iter().map(|b| quoted(b)).collect();
    out.push_str(&format!("  \"basis\": [{}],\n", names.join(", ")));
    if entries.is_empty() {
        out.push_str("  \"entries\": []\n");
    } else {
        out.push_str("  \"entries\": [\n");
        out.push_str(
            &entries
                .iter()
                .map(|e| format!("    {e}"))
                .collect::<Vec<_>>()
                .join(",\n"),
        );
        out.push_str("\n  ]\n");
    }
    out.push_str("}\n");
    out
}

/// Deterministic rendering: fixed key order, one entry per line, entries sorted.
pub fn to_string(file: &AlgebraFile) -> String {
    match file {
        AlgebraFile::PreLie(alg) => {
            let entries = alg
                .entries()
                .into_iter()
                .map(|(i, j, k, c)| format!("[{i}, {j}, {k}, {}]", value_json(&c)))
                .collect();
            render(
                "prelie",
                alg.field(),
                alg.dim(),
                alg.basis_names(),
                None,
                entries,
            )
        }
        AlgebraFile::Brace(brace) => {
            let entries = brace
                .entries()
                .into_iter()
                .map(|(k, left, j, o, c)| {
                    let left: Vec<String> = left.iter().map(usize::to_string).collect();
                    format!("[{k}, [{}], {j}, {o}, {}]", left.join(", "), value_json(&c))
                })
                .collect();
            render(
                "brace",
                brace.field(),
                brace.dim(),
                brace.basis_names(),
                Some(brace.class_bound()),
                entries,
            )
        }
    }
}

pub fn write(path: &Path, file: &AlgebraFile) -> Result<()> {
    std::fs::write(path, to_string(file))?;
    Ok(())
}
