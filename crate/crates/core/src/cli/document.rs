//! JSON documents read and written by the command-line front end.
//!
//! Complex entries are `[re, im]` pairs; matrices are lists of rows.

use std::collections::HashSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::discrimination::{Instrument, Measurement};
use crate::linalg::CMatrix;
use crate::qstate::{DensityMatrix, MultiState};

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

/// Input problem raised while turning a document into library objects, with a JSON path.
#[derive(Debug, Clone, PartialEq)]
pub struct DocumentError {
    pub location: String,
    pub message: String,
}

impl std::fmt::Display for DocumentError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for DocumentError {}

fn fail<T>(location: impl Into<String>, message: impl std::fmt::Display) -> Result<T, DocumentError> {
    Err(DocumentError { location: location.into(), message: message.to_string() })
}

pub fn matrix_to_json(m: &CMatrix) -> JsonMatrix {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

pub fn matrix_from_json(rows: &JsonMatrix, d: usize, location: &str) -> Result<CMatrix, DocumentError> {
    if rows.len() != d {
        return fail(location, format!("expected {d} rows, found {}", rows.len()));
    }
    let mut m = CMatrix::zeros(d, d);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != d {
            return fail(format!("{location}[{i}]"), format!("expected {d} entries, found {}", row.len()));
        }
        for (j, &[re, im]) in row.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return fail(format!("{location}[{i}][{j}]"), "entry is not finite");
            }
            m[(i, j)] = Complex64::new(re, im);
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiStateDocument {
    pub dim: usize,
    pub states: Vec<JsonMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl MultiStateDocument {
    pub fn from_multistate(ms: &MultiState, labels: Option<Vec<String>>) -> Self {
        Self { dim: ms.dim(), states: ms.iter().map(|s| matrix_to_json(s.matrix())).collect(), labels }
    }

    pub fn to_multistate(&self) -> Result<MultiState, DocumentError> {
        if self.dim == 0 {
            return fail("dim", "must be at least 1");
        }
        if self.states.is_empty() {
            return fail("states", "at least one state is required");
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.states.len() {
                return fail("labels", format!("{} labels for {} states", labels.len(), self.states.len()));
            }
            let mut seen = HashSet::new();
            for (i, l) in labels.iter().enumerate() {
                if !seen.insert(l) {
                    return fail(format!("labels[{i}]"), format!("duplicate label {l:?}"));
                }
            }
        }
        let mut states = Vec::with_capacity(self.states.len());
        for (k, rows) in self.states.iter().enumerate() {
            let location = format!("states[{k}]");
            let m = matrix_from_json(rows, self.dim, &location)?;
            match DensityMatrix::new(m) {
                Ok(rho) => states.push(rho),
                Err(e) => return fail(location, e),
            }
        }
        MultiState::new(states).or_else(|e| fail("states", e))
    }

    /// Zero-based index of a 1-based position or a label name.
    pub fn resolve_label(&self, token: &str) -> Result<usize, DocumentError> {
        let token = token.trim();
        if let Ok(k) = token.parse::<usize>() {
            if k == 0 || k > self.states.len() {
                return fail("--seq", format!("label {k} outside 1..={}", self.states.len()));
            }
            return Ok(k - 1);
        }
        self.labels
            .as_ref()
            .and_then(|ls| ls.iter().position(|l| l == token))
            .map_or_else(|| fail("--seq", format!("unknown label {token:?}")), Ok)
    }

    pub fn resolve_sequence(&self, seq: &str) -> Result<Vec<usize>, DocumentError> {
        if seq.trim().is_empty() {
            return fail("--seq", "empty sequence");
        }
        seq.split(',').map(|t| self.resolve_label(t)).collect()
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        serde_json::from_str(text).or_else(|e| fail(format!("line {} column {}", e.line(), e.column()), e))
    }
}

/// A discrimination task: Kraus operators per branch and one effect per branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskDocument {
    pub dim: usize,
    pub maps: Vec<Vec<JsonMatrix>>,
    pub effects: Vec<JsonMatrix>,
}

impl TaskDocument {
    pub fn from_task(t: &Instrument, m: &Measurement) -> Self {
        Self {
            dim: t.dim(),
            maps: (0..t.len()).map(|a| t.kraus(a).iter().map(matrix_to_json).collect()).collect(),
            effects: (0..m.len()).map(|a| matrix_to_json(m.effect(a))).collect(),
        }
    }

    pub fn to_task(&self) -> Result<(Instrument, Measurement), DocumentError> {
        let mut maps = Vec::with_capacity(self.maps.len());
        for (a, kraus) in self.maps.iter().enumerate() {
            let ops = kraus
                .iter()
                .enumerate()
                .map(|(m, k)| matrix_from_json(k, self.dim, &format!("maps[{a}][{m}]")))
                .collect::<Result<Vec<_>, _>>()?;
            maps.push(ops);
        }
        let effects = self
            .effects
            .iter()
            .enumerate()
            .map(|(a, e)| matrix_from_json(e, self.dim, &format!("effects[{a}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let t = Instrument::new(maps).or_else(|e| fail("maps", e))?;
        let m = Measurement::new(effects).or_else(|e| fail("effects", e))?;
        Ok((t, m))
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        serde_json::from_str(text).or_else(|e| fail(format!("line {} column {}", e.line(), e.column()), e))
    }
}
