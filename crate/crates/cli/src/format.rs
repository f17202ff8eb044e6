//! The versioned JSON fixture format.
//!
//! A document is `{"format_version": 1, "objects": [...]}`; each object
//! carries a `kind` tag, a unique `name`, and kind-specific fields. Brackets
//! and cocycles are sparse lists `{"args": [...], "value": [...]}` with
//! strictly increasing arguments wherever the stored symmetry calls for it
//! (for the ternary `curly` tables only the first two arguments are
//! ordered). Rationals are strings `"p/q"`, or `"p"` for integers; indices
//! are 0-based.

use serde::{Deserialize, Serialize};

use trilie_core::exactla::{parse_rational, rational_to_string, Mat, Vector};

use crate::error::{CliError, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Document {
    pub format_version: u32,
    pub objects: Vec<ObjectDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SparseEntry {
    pub args: Vec<usize>,
    pub value: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RepLieEntry {
    pub arg: usize,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Rep3Entry {
    pub args: Vec<usize>,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind")]
pub enum ObjectDoc {
    #[serde(rename = "lie")]
    Lie {
        name: String,
        dim: usize,
        brackets: Vec<SparseEntry>,
    },
    #[serde(rename = "3lie")]
    ThreeLie {
        name: String,
        dim: usize,
        brackets: Vec<SparseEntry>,
    },
    #[serde(rename = "rep_lie")]
    RepLie {
        name: String,
        algebra: String,
        space_dim: usize,
        entries: Vec<RepLieEntry>,
    },
    #[serde(rename = "rep3")]
    Rep3 {
        name: String,
        algebra: String,
        space_dim: usize,
        entries: Vec<Rep3Entry>,
    },
    #[serde(rename = "cocycle_lie")]
    CocycleLie {
        name: String,
        algebra: String,
        rep: String,
        values: Vec<SparseEntry>,
    },
    #[serde(rename = "cocycle3")]
    Cocycle3 {
        name: String,
        algebra: String,
        rep: String,
        values: Vec<SparseEntry>,
    },
    #[serde(rename = "linmap")]
    Linmap {
        name: String,
        source_dim: usize,
        target_dim: usize,
        matrix: Vec<Vec<String>>,
    },
    #[serde(rename = "trace")]
    Trace {
        name: String,
        algebra: String,
        coeffs: Vec<String>,
    },
    #[serde(rename = "twisted_op")]
    TwistedOp {
        name: String,
        algebra: String,
        rep: String,
        cocycle: String,
        matrix: Vec<Vec<String>>,
    },
    #[serde(rename = "twisted_op_lie")]
    TwistedOpLie {
        name: String,
        algebra: String,
        rep: String,
        cocycle: String,
        matrix: Vec<Vec<String>>,
    },
    #[serde(rename = "3ns")]
    ThreeNs {
        name: String,
        dim: usize,
        curly: Vec<SparseEntry>,
        bracket2: Vec<SparseEntry>,
    },
    #[serde(rename = "ns")]
    Ns {
        name: String,
        dim: usize,
        curly: Vec<SparseEntry>,
        bracket2: Vec<SparseEntry>,
    },
    #[serde(rename = "deformation_family")]
    DeformationFamily {
        name: String,
        base: String,
        terms: Vec<Vec<Vec<String>>>,
    },
}

impl ObjectDoc {
    pub fn name(&self) -> &str {
        match self {
            ObjectDoc::Lie { name, .. }
            | ObjectDoc::ThreeLie { name, .. }
            | ObjectDoc::RepLie { name, .. }
            | ObjectDoc::Rep3 { name, .. }
            | ObjectDoc::CocycleLie { name, .. }
            | ObjectDoc::Cocycle3 { name, .. }
            | ObjectDoc::Linmap { name, .. }
            | ObjectDoc::Trace { name, .. }
            | ObjectDoc::TwistedOp { name, .. }
            | ObjectDoc::TwistedOpLie { name, .. }
            | ObjectDoc::ThreeNs { name, .. }
            | ObjectDoc::Ns { name, .. }
            | ObjectDoc::DeformationFamily { name, .. } => name,
        }
    }
}

pub fn parse_document(text: &str, origin: &str) -> Result<Document> {
    let doc: Document = serde_json::from_str(text)
        .map_err(|e| CliError::Parse(format!("{origin}: {e}")))?;
    if doc.format_version != FORMAT_VERSION {
        return Err(CliError::Parse(format!(
            "{origin}: unsupported format_version {} (expected {FORMAT_VERSION})",
            doc.format_version
        )));
    }
    Ok(doc)
}

pub fn render_document(doc: &Document) -> String {
    serde_json::to_string_pretty(doc).expect("document serialization cannot fail")
}

// ---------------------------------------------------------------------------
// Scalar/matrix helpers shared by parsing and rendering
// ---------------------------------------------------------------------------

pub fn parse_value(strings: &[String], expected_len: usize, what: &str) -> Result<Vector> {
    if strings.len() != expected_len {
        return Err(CliError::Parse(format!(
            "{what}: value has {} coordinates, expected {expected_len}",
            strings.len()
        )));
    }
    let mut out = Vec::with_capacity(strings.len());
    for s in strings {
        out.push(parse_rational(s).map_err(|e| CliError::Parse(format!("{what}: {e}")))?);
    }
    Ok(Vector::new(out))
}

pub fn parse_matrix(rows: &[Vec<String>], target_dim: usize, source_dim: usize, what: &str) -> Result<Mat> {
    if rows.len() != target_dim {
        return Err(CliError::Parse(format!(
            "{what}: matrix has {} rows, expected {target_dim}",
            rows.len()
        )));
    }
    let mut parsed = Vec::with_capacity(rows.len());
    for row in rows {
        if row.len() != source_dim {
            return Err(CliError::Parse(format!(
                "{what}: matrix row has {} entries, expected {source_dim}",
                row.len()
            )));
        }
        let mut r = Vec::with_capacity(row.len());
        for s in row {
            r.push(parse_rational(s).map_err(|e| CliError::Parse(format!("{what}: {e}")))?);
        }
        parsed.push(r);
    }
    Ok(Mat::from_rows(parsed))
}

pub fn render_vector(v: &Vector) -> Vec<String> {
    v.to_strings()
}

pub fn render_matrix(m: &Mat) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| rational_to_string(m.get(r, c))).collect())
        .collect()
}

/// Enforce strictly increasing arguments of the stated arity; the error
/// message distinguishes repeats from misordering.
pub fn check_increasing(args: &[usize], arity: usize, dim: usize, what: &str) -> Result<()> {
    if args.len() != arity {
        return Err(CliError::Parse(format!(
            "{what}: expected {arity} indices, got {}",
            args.len()
        )));
    }
    for w in args.windows(2) {
        if w[0] == w[1] {
            return Err(CliError::Parse(format!("{what}: repeated index {} in {args:?}", w[0])));
        }
        if w[0] > w[1] {
            return Err(CliError::Parse(format!(
                "{what}: indices {args:?} are not strictly increasing"
            )));
        }
    }
    if let Some(&max) = args.iter().max() {
        if max >= dim {
            return Err(CliError::Parse(format!(
                "{what}: index {max} out of range for dimension {dim}"
            )));
        }
    }
    Ok(())
}
