//! Robustness of imaginarity and coherence for single qubits and for qubit multi-states.
//!
//! For a single qubit `Im_R(ρ) = |r_y|` and `C_R(ρ) = √(r_x² + r_y²)`. The multi-state
//! versions minimize the average over a common rotation, which reduces to minimizing over a
//! unit direction `p`:
//!
//! * `Im_R1 = min_p (1/n) Σ |⟨rⱼ, p⟩|`
//! * `C_R1  = min_p (1/n) Σ √(‖rⱼ‖² − ⟨rⱼ, p⟩²)`
//!
//! The first objective is piecewise linear in `p`. Restricted to a great circle it is
//! concave between consecutive zeros of the terms, so its minimum sits at a point where two
//! terms vanish, i.e. at `±rᵢ × rⱼ`. Enumerating those candidates is exact; a lattice search
//! runs alongside as an independent check. The second objective has no such structure and
//! is searched globally.

use nalgebra::{Matrix3, SymmetricEigen, Vector3};

use crate::bargmann::{self, GramMatrix};
use crate::error::{Error, Result};
use crate::linalg;
use crate::qstate::{self, DensityMatrix, MultiState};
use crate::sphere::{self, LocalMinimum};

/// Methods agreeing within this distance are reported as [`QuantifierMethod::BothAgree`].
pub const AGREEMENT_TOL: f64 = 1e-6;
/// Candidate and lattice results further apart than this are an error.
pub const DISAGREEMENT_TOL: f64 = 1e-4;
/// Sign-pattern candidates are enumerated up to this many nonzero Bloch vectors.
pub const SIGN_PATTERN_CAP: usize = 12;

const ZERO: f64 = 1e-14;
const REFINE_TOL: f64 = 1e-12;

/// `|r_y|`.
pub fn im_robustness_single(rho: &DensityMatrix) -> Result<f64> {
    Ok(qstate::bloch3(rho)?.y.abs())
}

/// `½‖ρ − ρᵀ‖₁`, valid in any dimension.
pub fn im_robustness_trace_norm(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    0.5 * linalg::hermitian_trace_norm(&(m - m.transpose()))
}

/// `√(r_x² + r_y²)`.
pub fn coh_robustness_single(rho: &DensityMatrix) -> Result<f64> {
    let r = qstate::bloch3(rho)?;
    Ok(r.x.hypot(r.y))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuantifierMethod {
    CandidateEnumeration,
    GridRefine,
    BothAgree,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantifierResult {
    pub value: f64,
    pub argmin_direction: Vector3<f64>,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub method: QuantifierMethod,
}

fn scatter(vectors: &[Vector3<f64>]) -> Matrix3<f64> {
    vectors.iter().map(|r| r * r.transpose()).sum()
}

/// Unit eigenvectors of `Σ rrᵀ` for the smallest and the largest eigenvalue.
fn extreme_eigenvectors(vectors: &[Vector3<f64>]) -> (Vector3<f64>, Vector3<f64>) {
    let eig = SymmetricEigen::new(scatter(vectors));
    let lo = eig.eigenvalues.imin();
    let hi = eig.eigenvalues.imax();
    (eig.eigenvectors.column(lo).normalize(), eig.eigenvectors.column(hi).normalize())
}

fn im_objective(vectors: &[Vector3<f64>], p: &Vector3<f64>) -> f64 {
    vectors.iter().map(|r| r.dot(p).abs()).sum::<f64>() / vectors.len() as f64
}

fn coh_objective(vectors: &[Vector3<f64>], p: &Vector3<f64>) -> f64 {
    vectors.iter().map(|r| (r.norm_squared() - r.dot(p).powi(2)).max(0.0).sqrt()).sum::<f64>()
        / vectors.len() as f64
}

fn im_candidates(vectors: &[Vector3<f64>]) -> Vec<Vector3<f64>> {
    let nonzero: Vec<Vector3<f64>> = vectors.iter().copied().filter(|r| r.norm() > ZERO).collect();
    if nonzero.is_empty() {
        return vec![Vector3::z()];
    }
    let mut out = Vec::new();
    for (i, a) in nonzero.iter().enumerate() {
        out.push(sphere::orthogonal_unit(&a.normalize()));
        for b in &nonzero[i + 1..] {
            let c = a.cross(b);
            if c.norm() > ZERO * a.norm() * b.norm() {
                out.push(c.normalize());
            }
        }
    }
    if nonzero.len() <= SIGN_PATTERN_CAP {
        for mask in 0u32..(1 << (nonzero.len() - 1)) {
            let signs: Vec<f64> =
                (0..nonzero.len()).map(|j| if j > 0 && mask & (1 << (j - 1)) != 0 { -1.0 } else { 1.0 }).collect();
            let v: Vector3<f64> = nonzero.iter().zip(&signs).map(|(r, s)| r * *s).sum();
            if v.norm() <= ZERO {
                continue;
            }
            let p = v.normalize();
            if nonzero.iter().zip(&signs).all(|(r, s)| s * r.dot(&p) >= -1e-12) {
                out.push(p);
            }
        }
    }
    out.push(extreme_eigenvectors(&nonzero).0);
    out
}

fn lattice_search<F: Fn(&Vector3<f64>) -> f64>(f: &F, starts: usize, extra: &[Vector3<f64>]) -> LocalMinimum {
    let grid = sphere::shared_grid();
    let values: Vec<f64> = grid.iter().map(f).collect();
    let mut best = LocalMinimum { point: grid[0], value: values[0] };
    let seeds = sphere::best_indices(&values, starts).into_iter().map(|i| grid[i]).chain(extra.iter().copied());
    for seed in seeds {
        let m = sphere::refine(f, &seed, 0.05, REFINE_TOL);
        if m.value < best.value {
            best = m;
        }
    }
    best
}

/// Multi-state robustness of imaginarity for qubits.
pub fn im_r1(ms: &MultiState) -> Result<QuantifierResult> {
    ms.require_qubit()?;
    let vectors = ms.bloch_vectors()?;
    let f = |p: &Vector3<f64>| im_objective(&vectors, p);

    let candidate = im_candidates(&vectors)
        .into_iter()
        .map(|p| LocalMinimum { value: f(&p), point: p })
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("at least one candidate");
    let grid = lattice_search(&f, 10, &[]);

    let gap = (grid.value - candidate.value).abs();
    if gap > DISAGREEMENT_TOL {
        return Err(Error::MethodDisagreement { candidate: candidate.value, grid: grid.value });
    }
    let (best, method) = if gap <= AGREEMENT_TOL {
        (if grid.value < candidate.value { grid } else { candidate }, QuantifierMethod::BothAgree)
    } else if grid.value < candidate.value {
        (grid, QuantifierMethod::GridRefine)
    } else {
        (candidate, QuantifierMethod::CandidateEnumeration)
    };
    let (lower_bound, upper_bound) = im_r1_bounds(&bargmann::gram(ms, None))?;
    Ok(QuantifierResult { value: best.value, argmin_direction: best.point, lower_bound, upper_bound, method })
}

/// Multi-state robustness of coherence for qubits.
pub fn c_r1(ms: &MultiState) -> Result<QuantifierResult> {
    ms.require_qubit()?;
    let vectors = ms.bloch_vectors()?;
    let f = |p: &Vector3<f64>| coh_objective(&vectors, p);
    let mut extra: Vec<Vector3<f64>> = vectors.iter().filter(|r| r.norm() > ZERO).map(|r| r.normalize()).collect();
    if !extra.is_empty() {
        extra.push(extreme_eigenvectors(&vectors).1);
    }
    let best = lattice_search(&f, 20, &extra);
    let (lower_bound, upper_bound) = c_r1_bounds(&bargmann::gram(ms, None))?;
    Ok(QuantifierResult {
        value: best.value,
        argmin_direction: best.point,
        lower_bound,
        upper_bound,
        method: QuantifierMethod::GridRefine,
    })
}

fn check_qubit_rank(g: &GramMatrix) -> Result<()> {
    if g.numerical_rank > 3 {
        return Err(Error::RankTooHigh { rank: g.numerical_rank });
    }
    Ok(())
}

/// `(λ₃/n, √(λ₃/n))`; eigenvalues beyond the matrix size count as zero.
pub fn im_r1_bounds(g: &GramMatrix) -> Result<(f64, f64)> {
    check_qubit_rank(g)?;
    let x = g.eigenvalue(2).max(0.0) / g.size() as f64;
    Ok((x, x.sqrt()))
}

/// `((λ₂ + λ₃)/n, √((λ₂ + λ₃)/n))`.
pub fn c_r1_bounds(g: &GramMatrix) -> Result<(f64, f64)> {
    check_qubit_rank(g)?;
    let x = (g.eigenvalue(1).max(0.0) + g.eigenvalue(2).max(0.0)) / g.size() as f64;
    Ok((x, x.sqrt()))
}

/// Outcome of minimizing `(1/n) Σ |2Tr(ρᵢX) − 1|` over all density matrices `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpFormResult {
    pub value: f64,
    /// Bloch vector of the minimizing `X`.
    pub argmin: Vector3<f64>,
    /// The minimum over pure `X`, i.e. [`im_r1`].
    pub sphere_value: f64,
    /// Whether the two minima coincide within [`AGREEMENT_TOL`].
    pub agrees: bool,
}

/// Minimizes the program over the closed Bloch ball on a lattice of `directions` rays and
/// `shells` radii, then compares with the minimum over the sphere.
///
/// Since `2Tr(ρᵢX) − 1 = ⟨rᵢ, x⟩` the objective is homogeneous in the Bloch vector `x` of
/// `X`, so the ball minimum is 0 at `X = 𝟙/2` and differs from [`im_r1`] whenever the latter
/// is positive. The comparison is reported rather than assumed.
pub fn im_r1_sdp_form(ms: &MultiState, directions: usize, shells: usize) -> Result<SdpFormResult> {
    ms.require_qubit()?;
    let vectors = ms.bloch_vectors()?;
    let mut best = (f64::INFINITY, Vector3::zeros());
    let shells = shells.max(1);
    for p in sphere::fibonacci_sphere(directions.max(1)) {
        for k in 0..=shells {
            let x = p * (k as f64 / shells as f64);
            let v = im_objective(&vectors, &x);
            if v < best.0 {
                best = (v, x);
            }
        }
    }
    let sphere_value = im_r1(ms)?.value;
    Ok(SdpFormResult {
        value: best.0,
        argmin: best.1,
        sphere_value,
        agrees: (best.0 - sphere_value).abs() <= AGREEMENT_TOL,
    })
}
