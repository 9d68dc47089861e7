//! Manifold model files.
//!
//! A model file is a JSON description of one rational homology sphere's
//! algebraic data: a name, its linking form, and optionally a triple form
//! and a dictionary of named homology classes. The linking form comes from
//! exactly one of two sources:
//!
//! * `"linking_matrix"` — an integer surgery/presentation matrix; the
//!   group, the form, and the meridian images are derived from it; or
//! * `"group"` + `"lambda2"` — invariant factors plus the Gram matrix of
//!   the form on the standard generators, entries written as canonical
//!   rationals `"a/b"`.
//!
//! ```json
//! {
//!   "name": "M0",
//!   "group": [3, 3, 3, 3, 3, 3],
//!   "lambda2": [["2/3", "0/1", ...], ...],
//!   "lambda3": [{ "triple": [1, 2, 3], "value": "1/3" }],
//!   "named_elements": { "x": [1, 0, 0, 1, 0, 0] }
//! }
//! ```
//!
//! Parsing is strict: unknown fields, non-canonical rationals (`"4/6"`,
//! `"-1/3"`, a bare `"2"`), non-increasing or out-of-range triple indices,
//! and malformed shapes are all rejected with a field path, and malformed
//! JSON is rejected with the line and column. Triple indices are 1-based
//! in files — matching the usual subscripts `x₁, x₂, …` — and 0-based in
//! the API. Serialization is canonical (sorted triples, zero coefficients
//! dropped, two-space indentation), so `parse(serialize(m))` returns `m`
//! and files diff cleanly.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::{FiniteAbelianGroup, GroupElement, IntMatrix};
use crate::clasper::m0_model;
use crate::linking::{linking_form_from_matrix, LinkingForm, QmodZ};
use crate::triple::TripleForm;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("model parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid model ({field}): {message}")]
    Validation { field: String, message: String },
    /// The file is well-formed and mathematically meaningful, but asks for
    /// something outside the supported exact-checking bounds.
    #[error("unsupported model ({field}): {message}")]
    Scope { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl fmt::Display) -> ModelError {
    ModelError::Validation { field: field.into(), message: message.to_string() }
}

/// Wraps a linking-form construction error, keeping the scope/validation
/// distinction: a too-large group is a refusal, not a malformed file.
fn form_error(field: impl Into<String>, e: crate::linking::LinkingError) -> ModelError {
    use crate::linking::LinkingError;
    match e {
        LinkingError::GroupTooLarge { .. } | LinkingError::UnsupportedScope(_) => {
            ModelError::Scope { field: field.into(), message: e.to_string() }
        }
        other => invalid(field, other),
    }
}

/// The JSON shape, kept separate from the semantic model so that parsing
/// splits cleanly into "is it the right shape" (serde, with locations)
/// and "does it mean anything" (validation, with field paths).
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    linking_matrix: Option<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    group: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda2: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda3: Option<Vec<RawTripleCoefficient>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    named_elements: Option<BTreeMap<String, Vec<i64>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTripleCoefficient {
    /// 1-based generator indices, strictly increasing.
    triple: [usize; 3],
    /// Canonical rational `"a/b"`.
    value: String,
}

/// A parsed, fully validated manifold model.
///
/// Equality ignores the derived meridian images (they are determined by
/// the linking matrix) and compares everything an author wrote: name,
/// source, forms, and named elements.
#[derive(Debug, Clone)]
pub struct ManifoldModel {
    name: String,
    form: LinkingForm,
    /// Retained when the model was given as a matrix, so `snf` and
    /// serialization can reproduce the original presentation.
    source_matrix: Option<IntMatrix>,
    /// Meridian images of the matrix generators, when matrix-sourced.
    meridians: Option<Vec<GroupElement>>,
    triple: Option<TripleForm>,
    named: BTreeMap<String, GroupElement>,
}

impl PartialEq for ManifoldModel {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.form == other.form
            && self.source_matrix == other.source_matrix
            && self.triple == other.triple
            && self.named == other.named
    }
}

impl Eq for ManifoldModel {}

impl ManifoldModel {
    /// A model from an explicit linking form (the `group` + `lambda2`
    /// source).
    pub fn from_form(name: impl Into<String>, form: LinkingForm) -> Self {
        ManifoldModel {
            name: name.into(),
            form,
            source_matrix: None,
            meridians: None,
            triple: None,
            named: BTreeMap::new(),
        }
    }

    /// A model presented by an integer linking matrix. Entries must fit in
    /// `i64` so the presentation survives serialization unchanged.
    pub fn from_matrix(name: impl Into<String>, matrix: IntMatrix) -> Result<Self, ModelError> {
        for i in 0..matrix.rows() {
            for j in 0..matrix.cols() {
                if matrix[(i, j)].to_i64().is_none() {
                    return Err(invalid(
                        "linking_matrix",
                        format!("entry ({i},{j}) does not fit in a 64-bit integer"),
                    ));
                }
            }
        }
        let (form, meridians) =
            linking_form_from_matrix(&matrix).map_err(|e| form_error("linking_matrix", e))?;
        Ok(ManifoldModel {
            name: name.into(),
            form,
            source_matrix: Some(matrix),
            meridians: Some(meridians),
            triple: None,
            named: BTreeMap::new(),
        })
    }

    /// Attaches a triple form, which must live on this model's group.
    pub fn with_triple(mut self, triple: TripleForm) -> Result<Self, ModelError> {
        if triple.group() != self.form.group() {
            return Err(invalid("lambda3", "triple form lives on a different group"));
        }
        self.triple = Some(triple);
        Ok(self)
    }

    /// Adds a named element (reduced into the group).
    pub fn with_named(mut self, name: impl Into<String>, element: GroupElement) -> Self {
        self.named.insert(name.into(), element);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn form(&self) -> &LinkingForm {
        &self.form
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.form.group()
    }

    /// The original presentation matrix, when the model was matrix-sourced.
    pub fn source_matrix(&self) -> Option<&IntMatrix> {
        self.source_matrix.as_ref()
    }

    /// Meridian images of the presentation generators, when matrix-sourced.
    pub fn meridians(&self) -> Option<&[GroupElement]> {
        self.meridians.as_deref()
    }

    pub fn triple(&self) -> Option<&TripleForm> {
        self.triple.as_ref()
    }

    pub fn named_elements(&self) -> &BTreeMap<String, GroupElement> {
        &self.named
    }

    /// Looks up a named element.
    pub fn element(&self, name: &str) -> Option<&GroupElement> {
        self.named.get(name)
    }

    /// The shipped example: the mod-3 clasper-surgery manifold with its
    /// published triple-form values and the classes `x, y, z, l1, l2, l3`
    /// (and the underlying generators `x1 … z2`) available by name.
    pub fn m0() -> ManifoldModel {
        let m0 = m0_model();
        let mut model = ManifoldModel::from_form("M0", m0.family.base_form().clone())
            .with_triple(m0.triple.clone())
            .expect("triple form lives on the base form's group");
        for (name, element) in &m0.named {
            model = model.with_named(name.clone(), element.clone());
        }
        model
    }
}

/// Parses and validates a model file.
pub fn parse_model(text: &str) -> Result<ManifoldModel, ModelError> {
    let raw: RawModel = serde_json::from_str(text).map_err(|e| ModelError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    if raw.name.is_empty() {
        return Err(invalid("name", "must not be empty"));
    }

    let mut model = match (raw.linking_matrix, raw.group, raw.lambda2) {
        (Some(rows), None, None) => {
            let width = rows.first().map_or(0, Vec::len);
            if rows.iter().any(|r| r.len() != width) {
                return Err(invalid("linking_matrix", "rows must all have the same length"));
            }
            if rows.len() != width {
                return Err(invalid(
                    "linking_matrix",
                    format!("must be square, got {}x{}", rows.len(), width),
                ));
            }
            let row_slices: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
            ManifoldModel::from_matrix(raw.name, IntMatrix::from_i64_rows(&row_slices))?
        }
        (None, Some(factors), Some(gram_rows)) => {
            let factors: Vec<BigInt> = factors.into_iter().map(BigInt::from).collect();
            let group = FiniteAbelianGroup::new(factors).map_err(|e| invalid("group", e))?;
            let rank = group.rank();
            if gram_rows.len() != rank {
                return Err(invalid(
                    "lambda2",
                    format!("expected {rank} rows to match the group, got {}", gram_rows.len()),
                ));
            }
            let mut gram = Vec::with_capacity(rank);
            for (i, row) in gram_rows.iter().enumerate() {
                if row.len() != rank {
                    return Err(invalid(
                        format!("lambda2[{i}]"),
                        format!("expected {rank} entries, got {}", row.len()),
                    ));
                }
                let mut parsed = Vec::with_capacity(rank);
                for (j, text) in row.iter().enumerate() {
                    parsed.push(
                        QmodZ::parse_canonical(text)
                            .map_err(|e| invalid(format!("lambda2[{i}][{j}]"), e))?,
                    );
                }
                gram.push(parsed);
            }
            let form = LinkingForm::new(group, gram).map_err(|e| form_error("lambda2", e))?;
            ManifoldModel::from_form(raw.name, form)
        }
        _ => {
            return Err(invalid(
                "linking_matrix/group/lambda2",
                "exactly one linking-form source is required: either linking_matrix, \
                 or group together with lambda2",
            ));
        }
    };

    if let Some(raw_triples) = raw.lambda3 {
        let rank = model.form.group().rank();
        let mut coeffs = BTreeMap::new();
        for (index, entry) in raw_triples.iter().enumerate() {
            let [i, j, k] = entry.triple;
            if !(1 <= i && i < j && j < k && k <= rank) {
                return Err(invalid(
                    format!("lambda3[{index}].triple"),
                    format!(
                        "indices must satisfy 1 <= i < j < k <= {rank} (1-based), got [{i}, {j}, {k}]"
                    ),
                ));
            }
            let value = QmodZ::parse_canonical(&entry.value)
                .map_err(|e| invalid(format!("lambda3[{index}].value"), e))?;
            // Zero coefficients carry no information; dropping them here
            // keeps serialization canonical.
            if value.is_zero() {
                continue;
            }
            if coeffs.insert((i - 1, j - 1, k - 1), value).is_some() {
                return Err(invalid(
                    format!("lambda3[{index}].triple"),
                    format!("triple [{i}, {j}, {k}] appears more than once"),
                ));
            }
        }
        let t = model.form.group().exponent();
        let triple = TripleForm::new(model.form.clone(), t, coeffs)
            .map_err(|e| invalid("lambda3", e))?;
        model = model.with_triple(triple)?;
    }

    if let Some(named) = raw.named_elements {
        let rank = model.form.group().rank();
        for (name, coords) in named {
            if name.is_empty() {
                return Err(invalid("named_elements", "element names must not be empty"));
            }
            if coords.len() != rank {
                return Err(invalid(
                    format!("named_elements.{name}"),
                    format!("expected {rank} coordinates, got {}", coords.len()),
                ));
            }
            let element = model.form.group().element(&coords);
            model = model.with_named(name, element);
        }
    }

    Ok(model)
}

/// Serializes a model to its canonical file form (pretty-printed JSON with
/// a trailing newline). `parse_model` of the output returns an equal model.
pub fn serialize_model(model: &ManifoldModel) -> String {
    let (linking_matrix, group, lambda2) = match &model.source_matrix {
        Some(matrix) => {
            let rows: Vec<Vec<i64>> = (0..matrix.rows())
                .map(|i| {
                    (0..matrix.cols())
                        .map(|j| {
                            matrix[(i, j)]
                                .to_i64()
                                .expect("from_matrix checked the entry range")
                        })
                        .collect()
                })
                .collect();
            (Some(rows), None, None)
        }
        None => {
            let group_factors: Vec<u64> = model
                .form
                .group()
                .factors()
                .iter()
                .map(|t| t.to_u64().expect("form order is bounded, factors fit in u64"))
                .collect();
            let gram: Vec<Vec<String>> = model
                .form
                .gram()
                .iter()
                .map(|row| row.iter().map(QmodZ::to_string).collect())
                .collect();
            (None, Some(group_factors), Some(gram))
        }
    };

    let lambda3 = model.triple.as_ref().map(|triple| {
        triple
            .coefficients()
            .filter(|(_, value)| !value.is_zero())
            .map(|(&(i, j, k), value)| RawTripleCoefficient {
                triple: [i + 1, j + 1, k + 1],
                value: value.to_string(),
            })
            .collect::<Vec<_>>()
    });

    let named_elements = if model.named.is_empty() {
        None
    } else {
        Some(
            model
                .named
                .iter()
                .map(|(name, element)| {
                    let coords: Vec<i64> = element
                        .coords()
                        .iter()
                        .map(|c| c.to_i64().expect("reduced coordinates fit in i64"))
                        .collect();
                    (name.clone(), coords)
                })
                .collect(),
        )
    };

    let raw = RawModel {
        name: model.name.clone(),
        linking_matrix,
        group,
        lambda2,
        lambda3,
        named_elements,
    };
    let value = serde_json::to_value(&raw).expect("model serialization is infallible");
    let mut text = canonical_json(&value);
    text.push('\n');
    text
}

/// The JSON layout used by model files and CLI reports: two-space
/// indentation, with arrays of scalars kept on one line so matrices read
/// row by row. (The stock pretty printer puts every number on its own
/// line, which buries a 6×6 Gram matrix.) No trailing newline.
pub fn canonical_json(value: &serde_json::Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out
}

fn write_value(out: &mut String, value: &serde_json::Value, indent: usize) {
    use serde_json::Value;
    match value {
        Value::Array(items) if items.iter().all(|v| !v.is_array() && !v.is_object()) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&item.to_string());
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(",\n");
                }
                out.push_str(&"  ".repeat(indent + 1));
                write_value(out, item, indent + 1);
            }
            out.push('\n');
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        Value::Object(fields) => {
            out.push_str("{\n");
            for (i, (key, item)) in fields.iter().enumerate() {
                if i > 0 {
                    out.push_str(",\n");
                }
                out.push_str(&"  ".repeat(indent + 1));
                out.push_str(&serde_json::Value::from(key.as_str()).to_string());
                out.push_str(": ");
                write_value(out, item, indent + 1);
            }
            out.push('\n');
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}
