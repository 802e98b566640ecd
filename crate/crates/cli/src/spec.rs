//! Group specification files.
//!
//! A spec is a JSON document:
//!
//! ```json
//! {
//!   "dimension": 2,
//!   "pairs": [
//!     { "sphere": { "center": [1.2, 0.0] }, "paired": { "center": [-1.2, 0.0] } }
//!   ],
//!   "labels": ["g1"]
//! }
//! ```
//!
//! Radii are optional and follow from orthogonality to the unit sphere,
//! `r = sqrt(|c|^2 - 1)`. A stated radius that disagrees is replaced by the
//! derived one and reported as a warning.

use std::fs;
use std::path::{Path, PathBuf};

use ballcollar::group::validate_schottky;
use ballcollar::{InversionSphere, SchottkyGroup, ValidationReport, Vector};
use serde::Deserialize;
use thiserror::Error;

/// Stated radii within this of the derived radius are accepted silently.
pub const RADIUS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read spec file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: line {line}, column {column}: {message}")]
    Syntax {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{field}: {message}")]
    Field { field: String, message: String },
}

fn field_error(field: impl Into<String>, message: impl Into<String>) -> SpecError {
    SpecError::Field {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereSpec {
    pub center: Vec<f64>,
    #[serde(default)]
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub sphere: SphereSpec,
    pub paired: SphereSpec,
}

/// The parsed, checked contents of a spec file. Radii are always filled in.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpecFile {
    pub dimension: usize,
    pub pairs: Vec<PairSpec>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

/// Spec plus any warnings raised while normalizing it.
#[derive(Debug, Clone)]
pub struct ParsedSpec {
    pub spec: GroupSpecFile,
    pub warnings: Vec<String>,
}

pub fn parse_spec(path: &Path) -> Result<ParsedSpec, SpecError> {
    let text = fs::read_to_string(path).map_err(|source| SpecError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_spec_str(&text).map_err(|e| match e {
        SpecError::Syntax {
            line,
            column,
            message,
            ..
        } => SpecError::Syntax {
            path: path.to_path_buf(),
            line,
            column,
            message,
        },
        other => other,
    })
}

pub fn parse_spec_str(text: &str) -> Result<ParsedSpec, SpecError> {
    let mut spec: GroupSpecFile = serde_json::from_str(text).map_err(|e| SpecError::Syntax {
        path: PathBuf::from("<spec>"),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if spec.dimension < 2 {
        return Err(field_error("dimension", format!("must be at least 2, got {}", spec.dimension)));
    }
    if spec.pairs.is_empty() {
        return Err(field_error("pairs", "at least one sphere pair is required"));
    }
    if let Some(labels) = &spec.labels {
        if labels.len() != spec.pairs.len() {
            return Err(field_error(
                "labels",
                format!("{} labels for {} pairs", labels.len(), spec.pairs.len()),
            ));
        }
    }
    let mut warnings = Vec::new();
    let dim = spec.dimension;
    for (i, pair) in spec.pairs.iter_mut().enumerate() {
        for (name, s) in [("sphere", &mut pair.sphere), ("paired", &mut pair.paired)] {
            normalize_sphere(&format!("pairs[{i}].{name}"), dim, s, &mut warnings)?;
        }
    }
    Ok(ParsedSpec { spec, warnings })
}

fn normalize_sphere(field: &str, dim: usize, s: &mut SphereSpec, warnings: &mut Vec<String>) -> Result<(), SpecError> {
    if s.center.len() != dim {
        return Err(field_error(
            format!("{field}.center"),
            format!("has {} coordinates, dimension is {dim}", s.center.len()),
        ));
    }
    if s.center.iter().any(|c| !c.is_finite()) {
        return Err(field_error(format!("{field}.center"), "non-finite coordinate"));
    }
    let norm2: f64 = s.center.iter().map(|c| c * c).sum();
    if norm2 <= 1.0 {
        return Err(field_error(
            format!("{field}.center"),
            format!(
                "|center| = {} <= 1: no sphere centered there is orthogonal to the unit sphere",
                norm2.sqrt()
            ),
        ));
    }
    let derived = (norm2 - 1.0).sqrt();
    match s.radius {
        Some(r) if !(r.is_finite() && r > 0.0) => {
            return Err(field_error(format!("{field}.radius"), format!("must be positive, got {r}")));
        }
        Some(r) if (r - derived).abs() > RADIUS_TOLERANCE => {
            warnings.push(format!(
                "{field}.radius: {r} is not orthogonal to the unit sphere; using sqrt(|c|^2 - 1) = {derived}"
            ));
        }
        _ => {}
    }
    s.radius = Some(derived);
    Ok(())
}

impl GroupSpecFile {
    /// Pairing spheres in the order `D1, D1', D2, D2', ...`.
    pub fn disks(&self) -> Vec<InversionSphere> {
        self.pairs
            .iter()
            .flat_map(|p| [&p.sphere, &p.paired])
            .map(|s| {
                InversionSphere::boundary_orthogonal(Vector::from_column_slice(&s.center))
                    .expect("centers checked at parse time")
            })
            .collect()
    }

    pub fn validate(&self) -> ValidationReport {
        validate_schottky(self.dimension, &self.disks())
    }

    pub fn group(&self) -> ballcollar::Result<SchottkyGroup> {
        let disks = self.disks();
        let pairs = disks.chunks(2).map(|p| (p[0].clone(), p[1].clone())).collect();
        SchottkyGroup::new(self.dimension, pairs)
    }

    pub fn label(&self, pair: usize) -> String {
        self.labels
            .as_ref()
            .and_then(|l| l.get(pair).cloned())
            .unwrap_or_else(|| format!("g{}", pair + 1))
    }
}
