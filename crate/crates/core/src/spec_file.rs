//! JSON manifold specification files.
//!
//! Indices in the file are 1-based. A bracket entry `{i, j, k, value}` sets
//! `c^k_{ij}`; when only `i < j` is given the `(j, i)` entry is filled by
//! antisymmetry, and an explicit `(j, i)` entry is kept verbatim so that
//! inconsistent input is caught by validation rather than overwritten.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::exact::{Matrix, Rational, Tensor, Variance};
use crate::fixture;
use crate::frame::{validate_manifold, FrameManifold, GeometryError};
use crate::paracontact::ParacontactStructure;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldSpecFile {
    pub dim: usize,
    pub metric: Vec<Vec<Rational>>,
    pub brackets: Vec<BracketEntry>,
    pub phi: Vec<Vec<Rational>>,
    pub xi: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}, column {column}: {field}: {message}")]
    Parse {
        line: usize,
        column: usize,
        field: String,
        message: String,
    },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error("invariant '{invariant}' violated at {witness}")]
    Validation { invariant: String, witness: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl SpecError {
    /// Malformed input as opposed to a well-formed file describing
    /// something that is not a manifold.
    pub fn is_parse(&self) -> bool {
        !matches!(self, SpecError::Validation { .. })
    }
}

fn field(field: impl Into<String>, message: impl Into<String>) -> SpecError {
    SpecError::Field {
        field: field.into(),
        message: message.into(),
    }
}

pub fn parse_spec(text: &str) -> Result<ManifoldSpecFile, SpecError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        SpecError::Parse {
            line: inner.line(),
            column: inner.column(),
            field: if path.is_empty() || path == "." { "<root>".into() } else { path },
            message: strip_location(&inner.to_string()),
        }
    })
}

fn strip_location(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(pos) => message[..pos].to_string(),
        None => message.to_string(),
    }
}

fn square(name: &str, rows: &[Vec<Rational>], n: usize) -> Result<Matrix, SpecError> {
    if rows.len() != n {
        return Err(field(name, format!("expected {n} rows, found {}", rows.len())));
    }
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(field(format!("{name}[{r}]"), format!("expected {n} entries, found {}", row.len())));
        }
    }
    Ok(Matrix::from_rows(rows.to_vec()).expect("rows checked"))
}

fn vector(name: &str, v: &[Rational], n: usize) -> Result<Vec<Rational>, SpecError> {
    if v.len() != n {
        return Err(field(name, format!("expected {n} entries, found {}", v.len())));
    }
    Ok(v.to_vec())
}

impl ManifoldSpecFile {
    /// Build the structures and validate the frame invariants. Paracontact
    /// axioms are not required here; they are what `verify` reports on.
    pub fn build(&self) -> Result<(FrameManifold, ParacontactStructure), SpecError> {
        let n = self.dim;
        if n < 2 {
            return Err(field("dim", format!("must be at least 2, found {n}")));
        }
        let metric = square("metric", &self.metric, n)?;
        let phi = square("phi", &self.phi, n)?;
        let xi = vector("xi", &self.xi, n)?;

        let mut explicit: BTreeMap<(usize, usize, usize), (usize, Rational)> = BTreeMap::new();
        for (pos, b) in self.brackets.iter().enumerate() {
            for (name, v) in [("i", b.i), ("j", b.j), ("k", b.k)] {
                if v == 0 || v > n {
                    return Err(field(format!("brackets[{pos}].{name}"), format!("index {v} outside 1..={n}")));
                }
            }
            let key = (b.i - 1, b.j - 1, b.k - 1);
            if let Some((first, _)) = explicit.insert(key, (pos, b.value.clone())) {
                return Err(field(
                    format!("brackets[{pos}]"),
                    format!("duplicate entry for c^{}_{{{},{}}} (first given at brackets[{first}])", b.k, b.i, b.j),
                ));
            }
        }
        let mut c = Tensor::zeros(&[Variance::Upper, Variance::Lower, Variance::Lower], n);
        for (&(i, j, k), (_, value)) in &explicit {
            c.set(&[k, i, j], value.clone());
            if i < j && !explicit.contains_key(&(j, i, k)) {
                c.set(&[k, j, i], -value);
            }
        }

        let m = FrameManifold::new(metric, c)?;
        if let Some(check) = validate_manifold(&m).failures().next() {
            let witness = check
                .witnesses
                .first()
                .map(|w| {
                    let ix: Vec<String> = w.index.iter().map(ToString::to_string).collect();
                    format!("({}): expected {}, found {}", ix.join(","), w.expected, w.actual)
                })
                .unwrap_or_default();
            return Err(SpecError::Validation {
                invariant: check.name.clone(),
                witness,
            });
        }
        let p = match &self.eta {
            Some(eta) => ParacontactStructure::new(phi, xi, vector("eta", eta, n)?)?,
            None => ParacontactStructure::from_metric(&m, phi, xi)?,
        };
        Ok((m, p))
    }
}

pub fn load_spec_str(text: &str) -> Result<(FrameManifold, ParacontactStructure), SpecError> {
    parse_spec(text)?.build()
}

pub fn load_spec(path: &Path) -> Result<(FrameManifold, ParacontactStructure), SpecError> {
    let text = fs::read_to_string(path).map_err(|source| SpecError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    load_spec_str(&text)
}

/// File form of a structure. Brackets are listed for `i < j` only; `eta` is
/// written only when it differs from the lowering of `ξ`.
pub fn serialize(m: &FrameManifold, p: &ParacontactStructure, notes: Option<String>) -> ManifoldSpecFile {
    let n = m.dim();
    let rows = |a: &Matrix| (0..n).map(|r| a.row(r).to_vec()).collect::<Vec<_>>();
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let v = m.c(k, i, j);
                if !v.is_zero() {
                    brackets.push(BracketEntry {
                        i: i + 1,
                        j: j + 1,
                        k: k + 1,
                        value: v.clone(),
                    });
                }
            }
        }
    }
    let eta = (m.flat(p.xi()) != p.eta()).then(|| p.eta().to_vec());
    ManifoldSpecFile {
        dim: n,
        metric: rows(m.metric()),
        brackets,
        phi: rows(p.phi()),
        xi: p.xi().to_vec(),
        eta,
        notes,
    }
}

pub fn emit_paper_example() -> ManifoldSpecFile {
    let (m, p) = fixture::example_manifold();
    serialize(
        &m,
        &p,
        Some(
            "brackets derived from e_i = exp(x_i + x_4) d/dx_i (i = 1, 2, 3), e_4 = d/dx_4; \
             metric diag(1, 1, 1, -1); xi = e_4; phi = -identity on span(e_1, e_2, e_3), phi(e_4) = 0"
                .into(),
        ),
    )
}

fn inline<T: Serialize>(items: &[T]) -> String {
    let parts: Vec<String> = items
        .iter()
        .map(|x| serde_json::to_string(x).expect("scalars serialize"))
        .collect();
    format!("[{}]", parts.join(", "))
}

fn rows(out: &mut Vec<String>, key: &str, lines: Vec<String>) {
    if lines.is_empty() {
        out.push(format!("  \"{key}\": []"));
    } else {
        out.push(format!("  \"{key}\": [\n    {}\n  ]", lines.join(",\n    ")));
    }
}

/// JSON with one matrix row or bracket entry per line and a trailing
/// newline. Parses back to the same value.
pub fn to_json(spec: &ManifoldSpecFile) -> String {
    let mut fields = vec![format!("  \"dim\": {}", spec.dim)];
    rows(&mut fields, "metric", spec.metric.iter().map(|r| inline(r)).collect());
    rows(
        &mut fields,
        "brackets",
        spec.brackets
            .iter()
            .map(|b| {
                format!(
                    "{{\"i\": {}, \"j\": {}, \"k\": {}, \"value\": {}}}",
                    b.i,
                    b.j,
                    b.k,
                    serde_json::to_string(&b.value).expect("rationals serialize")
                )
            })
            .collect(),
    );
    rows(&mut fields, "phi", spec.phi.iter().map(|r| inline(r)).collect());
    fields.push(format!("  \"xi\": {}", inline(&spec.xi)));
    if let Some(eta) = &spec.eta {
        fields.push(format!("  \"eta\": {}", inline(eta)));
    }
    if let Some(notes) = &spec.notes {
        fields.push(format!(
            "  \"notes\": {}",
            serde_json::to_string(notes).expect("strings serialize")
        ));
    }
    format!("{{\n{}\n}}\n", fields.join(",\n"))
}
