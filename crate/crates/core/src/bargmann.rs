//! Bargmann invariants `Tr(ρ_{i₁}⋯ρ_{iₘ})`, two-state overlaps and Gram matrices of
//! Bloch vectors.
//!
//! Labels are 0-based throughout the library.

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix};
use crate::qstate::{self, DensityMatrix, MultiState};

/// `Tr(ab)` for two states of equal dimension.
pub fn overlap(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(linalg::trace_of_product(a.matrix(), b.matrix()).re)
}

/// A multivariate trace together with the label sequence that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct BargmannInvariant {
    pub order: usize,
    pub value: Complex64,
    pub index_sequence: Vec<usize>,
}

impl BargmannInvariant {
    pub fn re(&self) -> f64 {
        self.value.re
    }

    pub fn im(&self) -> f64 {
        self.value.im
    }
}

/// Trace of a left-to-right product of matrices.
pub fn trace_product(factors: &[&CMatrix]) -> Complex64 {
    match factors {
        [] => c(1.0, 0.0),
        [a] => a.trace(),
        [first, middle @ .., last] => {
            let mut acc = (*first).clone();
            for m in middle {
                acc = &acc * *m;
            }
            linalg::trace_of_product(&acc, last)
        }
    }
}

/// `Tr(ρ_{seq[0]} ⋯ ρ_{seq[m−1]})` by direct multiplication.
pub fn invariant(ms: &MultiState, seq: &[usize]) -> Result<BargmannInvariant> {
    ms.check_labels(seq)?;
    let factors: Vec<&CMatrix> = seq.iter().map(|&i| ms.states()[i].matrix()).collect();
    Ok(BargmannInvariant { order: seq.len(), value: trace_product(&factors), index_sequence: seq.to_vec() })
}

/// State of the qubit product recursion: `ρ₁⋯ρₙ = ((a₀ + i b₀)𝟙 + (a + i b)·σ)/2ⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitProductState {
    pub a0: f64,
    pub b0: f64,
    pub a: Vector3<f64>,
    pub b: Vector3<f64>,
    pub order: usize,
}

impl QubitProductState {
    pub fn start(r1: &Vector3<f64>) -> Self {
        Self { a0: 1.0, b0: 0.0, a: *r1, b: Vector3::zeros(), order: 1 }
    }

    /// Multiplies the product on the right by `(𝟙 + r·σ)/2`.
    pub fn push(&mut self, r: &Vector3<f64>) {
        let a0 = self.a0 + self.a.dot(r);
        let b0 = self.b0 + self.b.dot(r);
        let a = r * self.a0 + self.a - self.b.cross(r);
        let b = r * self.b0 + self.b + self.a.cross(r);
        *self = Self { a0, b0, a, b, order: self.order + 1 };
    }

    /// Runs the recursion over `vectors` (nonempty).
    pub fn from_vectors(vectors: &[Vector3<f64>]) -> Self {
        let mut state = Self::start(&vectors[0]);
        for r in &vectors[1..] {
            state.push(r);
        }
        state
    }

    /// `Tr(ρ₁⋯ρₙ) = (a₀ + i b₀)/2ⁿ⁻¹`.
    pub fn trace(&self) -> Complex64 {
        c(self.a0, self.b0) / 2f64.powi(self.order as i32 - 1)
    }

    /// The product matrix itself.
    pub fn matrix(&self) -> CMatrix {
        let scale = 2f64.powi(self.order as i32);
        let mut m = CMatrix::identity(2, 2) * c(self.a0, self.b0);
        for (k, s) in linalg::pauli().iter().enumerate() {
            m += s * c(self.a[k], self.b[k]);
        }
        m / c(scale, 0.0)
    }
}

/// Qubit invariant through the Bloch-vector recursion rather than matrix products.
pub fn qubit_invariant_recursive(ms: &MultiState, seq: &[usize]) -> Result<BargmannInvariant> {
    ms.require_qubit()?;
    ms.check_labels(seq)?;
    let vectors = ms.bloch_vectors()?;
    let ordered: Vec<Vector3<f64>> = seq.iter().map(|&i| vectors[i]).collect();
    let value = QubitProductState::from_vectors(&ordered).trace();
    Ok(BargmannInvariant { order: seq.len(), value, index_sequence: seq.to_vec() })
}

/// `⟨r₁, r₂ × r₃⟩`, the determinant of the three vectors.
pub fn triple_product(r1: &Vector3<f64>, r2: &Vector3<f64>, r3: &Vector3<f64>) -> f64 {
    r1.dot(&r2.cross(r3))
}

/// Gram matrix of Bloch vectors together with its spectral rank data.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub entries: DMatrix<f64>,
    pub singular_values: Vec<f64>,
    pub numerical_rank: usize,
    pub rank_tolerance: f64,
}

/// Shared spectral threshold: `1e−8 · n · max(σ₁, 1)`.
pub fn default_rank_tolerance(n: usize, largest_singular_value: f64) -> f64 {
    1e-8 * n as f64 * largest_singular_value.max(1.0)
}

impl GramMatrix {
    /// Wraps a symmetric matrix; `tolerance = None` selects [`default_rank_tolerance`].
    pub fn from_entries(entries: DMatrix<f64>, tolerance: Option<f64>) -> Self {
        let mut singular_values: Vec<f64> = entries.clone().svd(false, false).singular_values.iter().copied().collect();
        singular_values.sort_by(|a, b| b.total_cmp(a));
        let largest = singular_values.first().copied().unwrap_or(0.0);
        let rank_tolerance = tolerance.unwrap_or_else(|| default_rank_tolerance(entries.nrows(), largest));
        let numerical_rank = singular_values.iter().filter(|&&s| s > rank_tolerance).count();
        Self { entries, singular_values, numerical_rank, rank_tolerance }
    }

    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    /// Eigenvalues in decreasing order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::symmetric_eigenvalues_desc(&self.entries)
    }

    /// `k`-th largest eigenvalue (0-based), zero beyond the matrix size.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        self.eigenvalues().get(k).copied().unwrap_or(0.0)
    }

    /// Distance of the singular value at position `rank` (the one that decides whether the
    /// rank reaches `rank + 1`) from the threshold. Positive values mean the decision is
    /// clear by that much.
    pub fn margin_at(&self, rank: usize) -> f64 {
        let s = self.singular_values.get(rank).copied().unwrap_or(0.0);
        (s - self.rank_tolerance).abs()
    }
}

/// Gram matrix `⟨rᵢ, rⱼ⟩ = d·Tr(ρᵢρⱼ) − 1` from overlaps of the generalized Bloch vectors
/// normalized by `Tr(UᵢUⱼ) = dδᵢⱼ`.
pub fn gram(ms: &MultiState, tolerance: Option<f64>) -> GramMatrix {
    GramMatrix::from_entries(overlap_gram_entries(ms, ms.dim() as f64), tolerance)
}

/// Gram matrix of the coordinates in the conventional Gell-Mann basis (`Tr λᵢλⱼ = 2δᵢⱼ`),
/// equal to `(d/2)` times [`gram`].
pub fn gram_conventional(ms: &MultiState, tolerance: Option<f64>) -> GramMatrix {
    let d = ms.dim() as f64;
    GramMatrix::from_entries(overlap_gram_entries(ms, d).scale(d / 2.0), tolerance)
}

fn overlap_gram_entries(ms: &MultiState, d: f64) -> DMatrix<f64> {
    let n = ms.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let t = linalg::trace_of_product(ms.states()[i].matrix(), ms.states()[j].matrix()).re;
            g[(i, j)] = d * t - 1.0;
            g[(j, i)] = g[(i, j)];
        }
    }
    g
}

/// Matrix of pairwise overlaps `Tr(ρᵢρⱼ)`.
pub fn overlap_matrix(ms: &MultiState) -> DMatrix<f64> {
    overlap_gram_entries(ms, 1.0).add_scalar(1.0)
}

const INPUT_TOL: f64 = 1e-12;

/// Gram matrix from externally supplied overlaps `Tr(ρᵢρⱼ)` of `d`-level states.
pub fn gram_from_overlaps(overlaps: &DMatrix<f64>, d: usize, tolerance: Option<f64>) -> Result<GramMatrix> {
    check_overlap_table(overlaps, d)?;
    let g = overlaps.map(|t| d as f64 * t - 1.0);
    Ok(GramMatrix::from_entries(g, tolerance))
}

pub(crate) fn check_overlap_table(overlaps: &DMatrix<f64>, d: usize) -> Result<()> {
    if overlaps.nrows() != overlaps.ncols() {
        return Err(Error::NotSquare { rows: overlaps.nrows(), cols: overlaps.ncols() });
    }
    let residual = (overlaps - overlaps.transpose()).abs().max();
    if residual > INPUT_TOL {
        return Err(Error::AsymmetricInput { residual });
    }
    let n = overlaps.nrows();
    for row in 0..n {
        for col in 0..n {
            let value = overlaps[(row, col)];
            let lo = if row == col { 1.0 / d as f64 } else { 0.0 };
            if !value.is_finite() || value < lo - INPUT_TOL || value > 1.0 + INPUT_TOL {
                return Err(Error::EntryOutOfRange { row, col, value });
            }
        }
    }
    Ok(())
}

/// Qubit Gram matrix computed from explicit Bloch coordinates; used as an oracle.
pub fn gram_from_vectors(vectors: &[Vector3<f64>]) -> DMatrix<f64> {
    let a = qstate::coordinate_matrix(vectors);
    a.transpose() * a
}
