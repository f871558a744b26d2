//! Machine-readable reports and their plain-text rendering.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::bargmann::{BargmannInvariant, GramMatrix};
use crate::criteria::{Decision, Evidence, Expected, Fixture, Property, RealBasisCertificate, Verdict};
use crate::quantifiers::{QuantifierMethod, QuantifierResult};
use crate::reconstruct::QuadraticCertificate;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictReport {
    pub property: &'static str,
    pub decision: &'static str,
    pub source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sequence: Option<Vec<usize>>,
    pub tolerance: f64,
    pub margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_commutator: Option<f64>,
}

fn property_name(p: Property) -> &'static str {
    match p {
        Property::Imaginarity => "imaginarity",
        Property::Coherence => "coherence",
    }
}

fn decision_name(d: Decision) -> &'static str {
    match d {
        Decision::HasResource => "has-resource",
        Decision::ResourceFree => "resource-free",
        Decision::InconclusiveNecessaryOnly => "inconclusive",
    }
}

impl VerdictReport {
    pub fn new(v: &Verdict, sequence: Option<&[usize]>) -> Self {
        let (rank, rank_bound, witness) = match v.evidence {
            Evidence::Rank { rank, bound } => (Some(rank), Some(bound), None),
            Evidence::Witness { value, .. } => (None, None, Some([value.re, value.im])),
        };
        Self {
            property: property_name(v.property),
            decision: decision_name(v.decision),
            source: v.source,
            rank,
            rank_bound,
            witness,
            sequence: sequence.map(one_based),
            tolerance: v.tolerance,
            margin: v.margin,
            max_commutator: v.max_commutator,
        }
    }
}

pub(crate) fn one_based(seq: &[usize]) -> Vec<usize> {
    seq.iter().map(|k| k + 1).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramReport {
    pub entries: Vec<Vec<f64>>,
    pub singular_values: Vec<f64>,
    pub rank: usize,
    pub rank_tolerance: f64,
}

impl From<&GramMatrix> for GramReport {
    fn from(g: &GramMatrix) -> Self {
        Self {
            entries: g.entries.row_iter().map(|r| r.iter().copied().collect()).collect(),
            singular_values: g.singular_values.clone(),
            rank: g.numerical_rank,
            rank_tolerance: g.rank_tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub p: f64,
    pub q: f64,
    pub roots: [[f64; 2]; 2],
    pub residual: f64,
}

impl From<&QuadraticCertificate> for CertificateReport {
    fn from(c: &QuadraticCertificate) -> Self {
        Self { p: c.p, q: c.q, roots: c.roots.map(|z| [z.re, z.im]), residual: c.residual }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantReport {
    pub sequence: Vec<usize>,
    pub re: f64,
    pub im: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateReport>,
}

impl InvariantReport {
    pub fn new(b: &BargmannInvariant, certificate: Option<&QuadraticCertificate>) -> Self {
        Self { sequence: one_based(&b.index_sequence), re: b.re(), im: b.im(), certificate: certificate.map(Into::into) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantifierReport {
    pub name: &'static str,
    pub value: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub argmin_direction: [f64; 3],
    pub method: &'static str,
}

impl QuantifierReport {
    pub fn new(name: &'static str, q: &QuantifierResult) -> Self {
        let method = match q.method {
            QuantifierMethod::CandidateEnumeration => "candidate-enumeration",
            QuantifierMethod::GridRefine => "grid-refine",
            QuantifierMethod::BothAgree => "both-agree",
        };
        let d = q.argmin_direction;
        Self { name, value: q.value, lower_bound: q.lower_bound, upper_bound: q.upper_bound, argmin_direction: [d.x, d.y, d.z], method }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealBasisReport {
    pub su2_quaternion: [f64; 4],
    pub rotation: [[f64; 3]; 3],
    pub residual: f64,
}

impl From<&RealBasisCertificate> for RealBasisReport {
    fn from(c: &RealBasisCertificate) -> Self {
        let r = c.rotation.matrix();
        Self {
            su2_quaternion: c.unitary.quaternion(),
            rotation: std::array::from_fn(|i| std::array::from_fn(|j| r[(i, j)])),
            residual: c.residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskReport {
    pub state: usize,
    pub p_succ: f64,
    pub real_reference: f64,
    pub ratio: f64,
    pub ceiling: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Provenance {
    pub fn new(command: &'static str) -> Self {
        Self { tool: env!("CARGO_PKG_NAME"), version: env!("CARGO_PKG_VERSION"), command, input: None, tolerance: None, seed: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub dim: usize,
    pub count: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<VerdictReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gram: Option<GramReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub real_basis: Option<RealBasisReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub invariants: Vec<InvariantReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<VerdictReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub quantifiers: Vec<QuantifierReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tasks: Vec<TaskReport>,
    pub provenance: Provenance,
}

impl ReportDocument {
    pub fn new(dim: usize, count: usize, provenance: Provenance) -> Self {
        Self {
            dim,
            count,
            verdicts: Vec::new(),
            gram: None,
            real_basis: None,
            invariants: Vec::new(),
            witnesses: Vec::new(),
            quantifiers: Vec::new(),
            tasks: Vec::new(),
            provenance,
        }
    }

    /// JSON path of the first non-finite number, if any.
    pub fn first_non_finite(&self) -> Option<String> {
        // serde_json writes NaN and ±∞ as null, and no field here is nullable
        fn walk(v: &Value, path: String) -> Option<String> {
            match v {
                Value::Null => Some(path),
                Value::Array(a) => a.iter().enumerate().find_map(|(i, x)| walk(x, format!("{path}[{i}]"))),
                Value::Object(o) => o.iter().find_map(|(k, x)| walk(x, format!("{path}.{k}"))),
                _ => None,
            }
        }
        walk(&serde_json::to_value(self).ok()?, "$".into())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let p = &self.provenance;
        let _ = writeln!(out, "{} {} {}: {} states, d = {}", p.tool, p.version, p.command, self.count, self.dim);
        for v in self.verdicts.iter().chain(&self.witnesses) {
            let _ = write!(out, "  {:<12} {:<14} via {}", v.property, v.decision, v.source);
            if let (Some(r), Some(b)) = (v.rank, v.rank_bound) {
                let _ = write!(out, " (rank {r}, free bound {b})");
            }
            if let Some(seq) = &v.sequence {
                let _ = write!(out, " seq {}", join(seq));
            }
            if let Some([re, im]) = v.witness {
                let _ = write!(out, " value {re:.12} {im:+.12}i");
            }
            let _ = writeln!(out, " margin {:.3e}", v.margin);
        }
        if let Some(g) = &self.gram {
            let _ = writeln!(out, "  gram rank {} (tolerance {:.3e})", g.rank, g.rank_tolerance);
            for row in &g.entries {
                let cells: Vec<String> = row.iter().map(|x| format!("{x:>16.12}")).collect();
                let _ = writeln!(out, "    {}", cells.join(" "));
            }
            let sv: Vec<String> = g.singular_values.iter().map(|s| format!("{s:.6e}")).collect();
            let _ = writeln!(out, "    singular values {}", sv.join(" "));
        }
        if let Some(c) = &self.real_basis {
            let [a, b, cq, d] = c.su2_quaternion;
            let _ = writeln!(out, "  real basis U = {a:.9} + {b:.9}i, {cq:.9} + {d:.9}i (residual {:.3e})", c.residual);
        }
        for inv in &self.invariants {
            let _ = writeln!(out, "  Tr[{}] = {:.15} {:+.15}i", join(&inv.sequence), inv.re, inv.im);
            if let Some(c) = &inv.certificate {
                let _ = writeln!(
                    out,
                    "    quadratic P = {:.15}, Q = {:.15}, roots {:.15} ± {:.15}i, residual {:.3e}",
                    c.p, c.q, c.roots[0][0], c.roots[0][1], c.residual
                );
            }
        }
        for q in &self.quantifiers {
            let [x, y, z] = q.argmin_direction;
            let _ = writeln!(
                out,
                "  {:<5} = {:.12} in [{:.12}, {:.12}] via {} at ({x:.6}, {y:.6}, {z:.6})",
                q.name, q.value, q.lower_bound, q.upper_bound, q.method
            );
        }
        for t in &self.tasks {
            let _ = writeln!(
                out,
                "  task on state {}: p = {:.12}, real max {:.12}, ratio {:.12} <= {:.12}",
                t.state, t.p_succ, t.real_reference, t.ratio, t.ceiling
            );
        }
        out
    }
}

fn join(seq: &[usize]) -> String {
    seq.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub quantity: String,
    pub computed: [f64; 2],
    pub expected: String,
    pub abs_error: f64,
    pub tolerance: f64,
    pub provenance: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixtureReport {
    pub name: &'static str,
    pub summary: &'static str,
    pub passed: bool,
    pub checks: Vec<CheckRow>,
}

fn complex_text(re: f64, im: f64) -> String {
    if im == 0.0 {
        format!("{re:.15}")
    } else {
        format!("{re:.15} {im:+.15}i")
    }
}

impl From<&Fixture> for FixtureReport {
    fn from(f: &Fixture) -> Self {
        let checks = f
            .checks
            .iter()
            .map(|c| CheckRow {
                quantity: c.quantity.clone(),
                computed: [c.computed.re, c.computed.im],
                expected: match c.expected {
                    Expected::Value(v) => complex_text(v.re, v.im),
                    Expected::AtMost(b) => format!("|x| <= {b:e}"),
                    Expected::Above(b) => format!("|x| > {b:e}"),
                },
                abs_error: c.abs_error(),
                tolerance: c.tolerance,
                provenance: c.provenance.clone(),
                passed: c.passed(),
            })
            .collect();
        Self { name: f.name, summary: f.summary, passed: f.passed(), checks }
    }
}

impl FixtureReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} [{}] {}", self.name, if self.passed { "PASS" } else { "FAIL" }, self.summary);
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  {:<4} {:<40} computed {:<42} expected {:<42} err {:.2e}  ({})",
                if c.passed { "ok" } else { "FAIL" },
                c.quantity,
                complex_text(c.computed[0], c.computed[1]),
                c.expected,
                c.abs_error,
                c.provenance
            );
        }
        out
    }
}
