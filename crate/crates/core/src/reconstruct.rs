//! Qubit Bargmann invariants from two-state overlaps.
//!
//! Every qubit invariant `Δ = Tr(ρ₁⋯ρₙ)` satisfies `Δ² − 2PΔ + Q = 0` with `P = Re Δ` and
//! `Q = |Δ|²` polynomials in the overlaps `Δᵢⱼ = Tr(ρᵢρⱼ)`. The overlaps therefore fix `Δ`
//! up to complex conjugation; the sign of `Im Δ` is the only extra unitary-invariant datum.
//!
//! Writing `Δ = (a₀ + i b₀)/2ⁿ⁻¹`, `a₀` is a polynomial in the Bloch inner products
//! `⟨rᵢ, rⱼ⟩ = 2Δᵢⱼ − 1` and `b₀` is a combination of triple products `⟨rᵢ × rⱼ, rₖ⟩`.
//! Products of two triple products are overlap data through
//! `det[a b c]·det[d e f] = det(⟨x, y⟩)` for `x ∈ {a, b, c}`, `y ∈ {d, e, f}`.

use nalgebra::{DMatrix, Matrix3, SymmetricEigen, Vector3};
use num_complex::Complex64;

use crate::bargmann::{self, GramMatrix, QubitProductState};
use crate::error::{Error, Result};
use crate::linalg::c;
use crate::qstate::MultiState;

/// Symmetric table of qubit overlaps `Tr(ρᵢρⱼ)` with purities on the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapTable {
    entries: DMatrix<f64>,
}

impl OverlapTable {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        bargmann::check_overlap_table(&entries, 2)?;
        Ok(Self { entries })
    }

    pub fn from_multistate(ms: &MultiState) -> Result<Self> {
        ms.require_qubit()?;
        Self::new(bargmann::overlap_matrix(ms))
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Bloch inner products `2Δᵢⱼ − 1`.
    pub fn inner_products(&self) -> DMatrix<f64> {
        self.entries.map(|t| 2.0 * t - 1.0)
    }

    pub fn gram(&self) -> GramMatrix {
        GramMatrix::from_entries(self.inner_products(), None)
    }
}

fn require_order(n: usize, allowed: &[usize]) -> Result<()> {
    if allowed.contains(&n) {
        Ok(())
    } else {
        Err(Error::WrongOrder { expected: allowed.to_vec(), found: n })
    }
}

/// `P₃ = ½(Δ₁₂ + Δ₁₃ + Δ₂₃ − 1)` and `Q₃ = det(2Δᵢⱼ − 1)/16 + P₃²`.
pub fn p3_q3(t: &OverlapTable) -> Result<(f64, f64)> {
    require_order(t.n(), &[3])?;
    let d = t.entries();
    let p = 0.5 * (d[(0, 1)] + d[(0, 2)] + d[(1, 2)] - 1.0);
    let g = Matrix3::from_fn(|i, j| 2.0 * d[(i, j)] - 1.0);
    Ok((p, g.determinant() / 16.0 + p * p))
}

/// `b₀` as a linear combination of triple products with 0-based label triples.
type TripleExpansion = Vec<(f64, [usize; 3])>;

fn a0_from_inner(g: &DMatrix<f64>) -> f64 {
    let n = g.nrows();
    let s = |i: usize, j: usize| g[(i - 1, j - 1)];
    let pair_sum: f64 = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| g[(i, j)]).sum();
    match n {
        3 => 1.0 + pair_sum,
        4 => (1.0 + s(1, 2)) * (1.0 + s(3, 4)) - (1.0 - s(1, 3)) * (1.0 - s(2, 4)) + (1.0 + s(1, 4)) * (1.0 + s(2, 3)),
        5 => {
            1.0 + pair_sum + s(1, 2) * s(3, 4) - s(1, 3) * s(2, 4)
                + s(1, 4) * s(2, 3)
                + (s(2, 3) + s(2, 4) + s(3, 4)) * s(1, 5)
                + (-s(1, 3) - s(1, 4) + s(3, 4)) * s(2, 5)
                + (s(1, 2) - s(1, 4) - s(2, 4)) * s(3, 5)
                + (s(1, 2) + s(1, 3) + s(2, 3)) * s(4, 5)
        }
        _ => unreachable!("order checked by caller"),
    }
}

fn b0_expansion(g: &DMatrix<f64>) -> TripleExpansion {
    let n = g.nrows();
    let s = |i: usize, j: usize| g[(i - 1, j - 1)];
    match n {
        3 => vec![(1.0, [0, 1, 2])],
        4 => {
            // det(r₁ + r₂, r₂ + r₃, r₃ + r₄) expanded multilinearly
            let mut out = Vec::new();
            for a in [0, 1] {
                for b in [1, 2] {
                    for c in [2, 3] {
                        if a != b && b != c {
                            out.push((1.0, [a, b, c]));
                        }
                    }
                }
            }
            out
        }
        5 => {
            let mut out: TripleExpansion = Vec::new();
            for i in 0..5 {
                for j in i + 1..5 {
                    for k in j + 1..5 {
                        out.push((1.0, [i, j, k]));
                    }
                }
            }
            out.push((s(2, 3), [0, 3, 4]));
            out.push((-s(1, 3), [1, 3, 4]));
            out.push((s(1, 2), [2, 3, 4]));
            out.push((s(4, 5), [0, 1, 2]));
            out
        }
        _ => unreachable!("order checked by caller"),
    }
}

/// `(a₀, b₀)` from the closed-form expressions for `n ∈ {3, 4, 5}`.
pub fn a0_b0_explicit(vectors: &[Vector3<f64>]) -> Result<(f64, f64)> {
    require_order(vectors.len(), &[3, 4, 5])?;
    let g = bargmann::gram_from_vectors(vectors);
    let b0 = b0_expansion(&g)
        .iter()
        .map(|(coef, [i, j, k])| coef * bargmann::triple_product(&vectors[*i], &vectors[*j], &vectors[*k]))
        .sum();
    Ok((a0_from_inner(&g), b0))
}

/// [`a0_b0_explicit`] on the Bloch vectors of every member, in order.
pub fn a0_b0_of(ms: &MultiState) -> Result<(f64, f64)> {
    ms.require_qubit()?;
    a0_b0_explicit(&ms.bloch_vectors()?)
}

/// `det[x₁ x₂ x₃]·det[y₁ y₂ y₃]` from inner products alone.
fn triple_product_pair(g: &DMatrix<f64>, x: &[usize; 3], y: &[usize; 3]) -> f64 {
    Matrix3::from_fn(|i, j| g[(x[i], y[j])]).determinant()
}

/// `b₀²` for `n ∈ {3, 4, 5}` using only Bloch inner products.
fn b0_squared_from_inner(g: &DMatrix<f64>) -> f64 {
    let terms = b0_expansion(g);
    let mut acc = 0.0;
    for (ca, ta) in &terms {
        for (cb, tb) in &terms {
            acc += ca * cb * triple_product_pair(g, ta, tb);
        }
    }
    acc
}

/// Roots `P ± i√(Q − P²)` of the quadratic satisfied by an invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticCertificate {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub roots: [Complex64; 2],
    pub residual: f64,
}

fn roots(p: f64, q: f64) -> [Complex64; 2] {
    let im = (q - p * p).max(0.0).sqrt();
    [c(p, im), c(p, -im)]
}

const CONJUGATE_TOL: f64 = 1e-11;
const RESIDUAL_TOL: f64 = 1e-9;

/// Certifies `Δ² − 2PΔ + Q = 0` for `Δ = Tr(ρ_{seq})` and checks that `P` and `Q` are
/// unchanged on the complex-conjugated multi-state, which shares every overlap.
pub fn quadratic_certificate(ms: &MultiState, seq: &[usize]) -> Result<QuadraticCertificate> {
    let pq = |m: &MultiState| -> Result<(f64, f64, Complex64)> {
        let delta = bargmann::qubit_invariant_recursive(m, seq)?.value;
        Ok((delta.re, delta.norm_sqr(), delta))
    };
    let (p, q, delta) = pq(ms)?;
    let (pc, qc, _) = pq(&ms.conjugate())?;
    if (p - pc).abs() > CONJUGATE_TOL || (q - qc).abs() > CONJUGATE_TOL {
        return Err(Error::CertificateFailed(format!(
            "conjugated copy changes (P, Q) from ({p}, {q}) to ({pc}, {qc})"
        )));
    }
    let residual = (delta * delta - delta * (2.0 * p) + q).norm();
    if residual > RESIDUAL_TOL {
        return Err(Error::CertificateFailed(format!("quadratic residual {residual:e}")));
    }
    Ok(QuadraticCertificate { n: seq.len(), p, q, roots: roots(p, q), residual })
}

/// Tolerance on the smallest Gram eigenvalue when checking realizability.
pub const REALIZABILITY_TOL: f64 = 1e-8;

/// `Tr(ρ₁⋯ρₙ)` up to complex conjugation from an overlap table; the two candidates are
/// returned with the nonnegative imaginary part first.
///
/// Orders 3 to 5 use the closed-form polynomials. Other orders factor the Gram matrix into
/// Bloch vectors, which the overlaps fix up to an orthogonal map, and run the product
/// recursion on them.
pub fn reconstruct_from_overlaps(t: &OverlapTable) -> Result<[Complex64; 2]> {
    let g = t.gram();
    let min_eig = g.eigenvalues().last().copied().unwrap_or(0.0);
    if min_eig < -REALIZABILITY_TOL {
        return Err(Error::NotQubitRealizable(format!("Gram matrix has eigenvalue {min_eig:e}")));
    }
    if g.numerical_rank > 3 {
        return Err(Error::NotQubitRealizable(format!("Gram matrix has rank {}", g.numerical_rank)));
    }
    let n = t.n();
    let scale = 2f64.powi(n as i32 - 1);
    if (3..=5).contains(&n) {
        let a0 = a0_from_inner(&g.entries);
        let b0 = b0_squared_from_inner(&g.entries).max(0.0).sqrt();
        return Ok([c(a0, b0) / scale, c(a0, -b0) / scale]);
    }
    let delta = QubitProductState::from_vectors(&factor_gram(&g.entries)).trace();
    let im = delta.im.abs();
    Ok([c(delta.re, im), c(delta.re, -im)])
}

/// Bloch vectors with the given Gram matrix (rank ≤ 3), unique up to an orthogonal map.
pub fn factor_gram(g: &DMatrix<f64>) -> Vec<Vector3<f64>> {
    let eig = SymmetricEigen::new(g.clone());
    let mut order: Vec<usize> = (0..g.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    (0..g.nrows())
        .map(|j| {
            Vector3::from_fn(|k, _| {
                order.get(k).map_or(0.0, |&col| eig.eigenvalues[col].max(0.0).sqrt() * eig.eigenvectors[(j, col)])
            })
        })
        .collect()
}
