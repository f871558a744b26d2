//! Density matrices, Bloch and generalized Bloch coordinates, and the SU(2) → SO(3)
//! double cover.
//!
//! Qubit Bloch vectors use `ρ = (𝟙 + r·σ)/2`. For a `d`-level system two Gell-Mann
//! normalizations are offered:
//!
//! * [`BlochBasis::Normalized`]: traceless Hermitian `U_j` with `Tr(U_i U_j) = d δ_ij`,
//!   `ρ = (𝟙 + Σ r_j U_j)/d` and `r_j = Tr(ρ U_j)`. Inner products of these vectors satisfy
//!   `⟨r_i, r_j⟩ = d Tr(ρ_i ρ_j) − 1`. Slots are ordered: all symmetric pairs `(j, k)`,
//!   then all antisymmetric pairs, then the `d − 1` diagonal generators.
//! * [`BlochBasis::Conventional`]: the usual `λ_j` with `Tr(λ_i λ_j) = 2 δ_ij` in the
//!   interleaved λ1…λ8 order (for `d = 3`), again with `ρ = (𝟙 + Σ c_j λ_j)/d`.
//!
//! For `d = 2` both reduce to the Pauli basis.

use nalgebra::{DMatrix, Matrix2, Matrix3, Vector3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, I};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
pub const BALL_TOL: f64 = 1e-10;
pub const GROUP_TOL: f64 = 1e-10;

/// A validated quantum state: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: CMatrix,
}

/// Checks the state invariants on `m` and returns a validated copy.
pub fn validate(m: &CMatrix) -> Result<DensityMatrix> {
    DensityMatrix::new(m.clone())
}

impl DensityMatrix {
    pub fn new(entries: CMatrix) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::NotSquare { rows: entries.nrows(), cols: entries.ncols() });
        }
        let residual = linalg::hermiticity_residual(&entries);
        if residual > HERMITIAN_TOL {
            return Err(Error::NotHermitian { residual });
        }
        let trace = entries.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne { trace, residual: (trace - 1.0).abs() });
        }
        let min_eigenvalue = linalg::hermitian_eigenvalues(&entries)[0];
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self { entries })
    }

    pub fn from_real_rows(d: usize, rows: &[f64]) -> Result<Self> {
        let data: Vec<Complex64> = rows.iter().map(|&x| c(x, 0.0)).collect();
        Self::new(CMatrix::from_row_slice(d, d, &data))
    }

    /// `𝟙/d`.
    pub fn maximally_mixed(d: usize) -> Self {
        Self { entries: CMatrix::identity(d, d).scale(1.0 / d as f64) }
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        let d = populations.len();
        let mut m = CMatrix::zeros(d, d);
        for (i, &p) in populations.iter().enumerate() {
            m[(i, i)] = c(p, 0.0);
        }
        Self::new(m)
    }

    /// `|ψ⟩⟨ψ|` for the normalized `psi`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::TraceNotOne { trace: 0.0, residual: 1.0 });
        }
        let d = psi.len();
        let m = CMatrix::from_fn(d, d, |i, j| psi[i] * psi[j].conj() / (norm * norm));
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        linalg::trace_of_product(&self.entries, &self.entries).re
    }

    /// Entrywise complex conjugate, equal to the transpose for a Hermitian matrix.
    pub fn conjugate(&self) -> Self {
        Self { entries: self.entries.map(|z| z.conj()) }
    }

    /// `U ρ U†` for a unitary `u` (not checked).
    pub fn conjugated_by(&self, u: &CMatrix) -> Self {
        Self { entries: u * &self.entries * u.adjoint() }
    }

    /// Largest modulus of an imaginary part among the entries.
    pub fn max_imaginary(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, z| acc.max(z.im.abs()))
    }

    /// Largest modulus of an off-diagonal entry.
    pub fn max_off_diagonal(&self) -> f64 {
        let d = self.dim();
        let mut acc: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    acc = acc.max(self.entries[(i, j)].norm());
                }
            }
        }
        acc
    }
}

/// Which operator basis a [`BlochVector`] is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlochBasis {
    QubitPauli,
    Normalized(usize),
    Conventional(usize),
}

impl BlochBasis {
    pub fn dim(&self) -> usize {
        match *self {
            BlochBasis::QubitPauli => 2,
            BlochBasis::Normalized(d) | BlochBasis::Conventional(d) => d,
        }
    }

    pub fn len(&self) -> usize {
        let d = self.dim();
        d * d - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Traceless Hermitian generators in slot order.
    pub fn operators(&self) -> Vec<CMatrix> {
        match *self {
            BlochBasis::QubitPauli => linalg::pauli().to_vec(),
            BlochBasis::Normalized(d) => {
                let s = (d as f64 / 2.0).sqrt();
                gell_mann_grouped(d).into_iter().map(|m| m.scale(s)).collect()
            }
            BlochBasis::Conventional(d) => gell_mann_interleaved(d),
        }
    }

    /// Factor `k` such that `ρ = (𝟙 + Σ r_j B_j)/d` has `r_j = k · Tr(ρ B_j)`.
    fn coordinate_scale(&self) -> f64 {
        match *self {
            BlochBasis::QubitPauli | BlochBasis::Normalized(_) => 1.0,
            BlochBasis::Conventional(d) => d as f64 / 2.0,
        }
    }
}

fn symmetric_generator(d: usize, j: usize, k: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    m[(j, k)] = c(1.0, 0.0);
    m[(k, j)] = c(1.0, 0.0);
    m
}

fn antisymmetric_generator(d: usize, j: usize, k: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    m[(j, k)] = -I;
    m[(k, j)] = I;
    m
}

/// `l`-th diagonal generator, `1 ≤ l ≤ d − 1`, with `Tr λ² = 2`.
fn diagonal_generator(d: usize, l: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
    for i in 0..l {
        m[(i, i)] = c(norm, 0.0);
    }
    m[(l, l)] = c(-(l as f64) * norm, 0.0);
    m
}

/// Gell-Mann matrices (`Tr λ_i λ_j = 2δ_ij`): symmetric pairs, antisymmetric pairs, diagonal.
pub fn gell_mann_grouped(d: usize) -> Vec<CMatrix> {
    let pairs: Vec<(usize, usize)> =
        (0..d).flat_map(|j| (j + 1..d).map(move |k| (j, k))).collect();
    let mut out: Vec<CMatrix> = pairs.iter().map(|&(j, k)| symmetric_generator(d, j, k)).collect();
    out.extend(pairs.iter().map(|&(j, k)| antisymmetric_generator(d, j, k)));
    out.extend((1..d).map(|l| diagonal_generator(d, l)));
    out
}

/// Gell-Mann matrices in the interleaved order that yields λ1…λ8 for `d = 3`: for each new
/// level `k`, the pairs `(j, k)` as symmetric/antisymmetric couples, then the `k`-th diagonal.
pub fn gell_mann_interleaved(d: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(d * d - 1);
    for k in 1..d {
        for j in 0..k {
            out.push(symmetric_generator(d, j, k));
            out.push(antisymmetric_generator(d, j, k));
        }
        out.push(diagonal_generator(d, k));
    }
    out
}

/// Real coordinates of a state in a traceless operator basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochVector {
    pub basis: BlochBasis,
    pub coords: Vec<f64>,
}

impl BlochVector {
    pub fn qubit(x: f64, y: f64, z: f64) -> Self {
        Self { basis: BlochBasis::QubitPauli, coords: vec![x, y, z] }
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum()
    }

    /// Coordinates as a 3-vector; meaningful only for qubit bases.
    pub fn as_vector3(&self) -> Vector3<f64> {
        Vector3::new(self.coords[0], self.coords[1], self.coords[2])
    }
}

impl From<Vector3<f64>> for BlochVector {
    fn from(v: Vector3<f64>) -> Self {
        Self::qubit(v.x, v.y, v.z)
    }
}

/// Qubit Bloch vector `r_j = Tr(ρ σ_j)`.
pub fn to_bloch(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: rho.dim() });
    }
    let m = rho.matrix();
    let off = m[(0, 1)];
    Ok(BlochVector::qubit(2.0 * off.re, -2.0 * off.im, m[(0, 0)].re - m[(1, 1)].re))
}

/// Qubit Bloch vector as a plain 3-vector.
pub fn bloch3(rho: &DensityMatrix) -> Result<Vector3<f64>> {
    to_bloch(rho).map(|v| v.as_vector3())
}

/// `(𝟙 + r·σ)/2`.
pub fn from_bloch(v: &BlochVector) -> Result<DensityMatrix> {
    if v.basis != BlochBasis::QubitPauli {
        return from_generalized_bloch(v);
    }
    if v.coords.len() != 3 {
        return Err(Error::BadCoordinateLength { expected: 3, found: v.coords.len() });
    }
    let norm = v.norm();
    if norm > 1.0 + BALL_TOL {
        return Err(Error::OutsideBall { norm });
    }
    let (x, y, z) = (v.coords[0], v.coords[1], v.coords[2]);
    let m = CMatrix::from_row_slice(
        2,
        2,
        &[c((1.0 + z) / 2.0, 0.0), c(x / 2.0, -y / 2.0), c(x / 2.0, y / 2.0), c((1.0 - z) / 2.0, 0.0)],
    );
    Ok(DensityMatrix { entries: m })
}

/// Qubit state from a plain 3-vector.
pub fn qubit_state(r: &Vector3<f64>) -> Result<DensityMatrix> {
    from_bloch(&BlochVector::from(*r))
}

/// Generalized Bloch vector in the [`BlochBasis::Normalized`] basis.
pub fn to_generalized_bloch(rho: &DensityMatrix) -> BlochVector {
    to_bloch_in(rho, BlochBasis::Normalized(rho.dim()))
        .expect("basis dimension matches by construction")
}

/// Coordinates of `rho` in the requested basis.
pub fn to_bloch_in(rho: &DensityMatrix, basis: BlochBasis) -> Result<BlochVector> {
    if basis.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), found: rho.dim() });
    }
    let k = basis.coordinate_scale();
    let coords = basis
        .operators()
        .iter()
        .map(|op| k * linalg::trace_of_product(rho.matrix(), op).re)
        .collect();
    Ok(BlochVector { basis, coords })
}

/// Inverse of [`to_bloch_in`]; the result is validated as a state.
pub fn from_generalized_bloch(v: &BlochVector) -> Result<DensityMatrix> {
    let d = v.basis.dim();
    if v.coords.len() != v.basis.len() {
        return Err(Error::BadCoordinateLength { expected: v.basis.len(), found: v.coords.len() });
    }
    let mut m = CMatrix::identity(d, d);
    for (op, &r) in v.basis.operators().iter().zip(&v.coords) {
        m += op.scale(r);
    }
    DensityMatrix::new(m.scale(1.0 / d as f64))
}

/// A validated 2×2 special unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct Su2 {
    m: Matrix2<Complex64>,
}

impl Su2 {
    pub fn new(m: Matrix2<Complex64>) -> Result<Self> {
        let unitarity = (m.adjoint() * m - Matrix2::identity()).iter().fold(0.0f64, |a, z| a.max(z.norm()));
        let det = (m.determinant() - c(1.0, 0.0)).norm();
        let residual = unitarity.max(det);
        if residual > GROUP_TOL {
            return Err(Error::NotSpecialUnitary { residual });
        }
        Ok(Self { m })
    }

    pub fn from_dmatrix(m: &CMatrix) -> Result<Self> {
        if m.nrows() != 2 || m.ncols() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: m.nrows() });
        }
        Self::new(Matrix2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]))
    }

    /// `[[α, β], [−β̄, ᾱ]]` with `α = a + ib`, `β = c + id`; the quaternion is normalized.
    pub fn from_quaternion(a: f64, b: f64, cq: f64, d: f64) -> Self {
        let n = (a * a + b * b + cq * cq + d * d).sqrt();
        let (a, b, cq, d) = (a / n, b / n, cq / n, d / n);
        let alpha = c(a, b);
        let beta = c(cq, d);
        Self { m: Matrix2::new(alpha, beta, -beta.conj(), alpha.conj()) }
    }

    pub fn identity() -> Self {
        Self::from_quaternion(1.0, 0.0, 0.0, 0.0)
    }

    /// `(a, b, c, d)` with `α = a + ib`, `β = c + id`.
    pub fn quaternion(&self) -> [f64; 4] {
        [self.m[(0, 0)].re, self.m[(0, 0)].im, self.m[(0, 1)].re, self.m[(0, 1)].im]
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.m
    }

    pub fn to_dmatrix(&self) -> CMatrix {
        CMatrix::from_fn(2, 2, |i, j| self.m[(i, j)])
    }

    pub fn neg(&self) -> Self {
        Self { m: -self.m }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { m: self.m * other.m }
    }
}

/// A validated proper rotation of ℝ³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation3 {
    m: Matrix3<f64>,
}

impl Rotation3 {
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        let ortho = (m.transpose() * m - Matrix3::identity()).abs().max();
        let det = (m.determinant() - 1.0).abs();
        let residual = ortho.max(det);
        if residual > GROUP_TOL {
            return Err(Error::NotRotation { residual });
        }
        Ok(Self { m })
    }

    pub fn identity() -> Self {
        Self { m: Matrix3::identity() }
    }

    /// Rotation by `angle` about the unit `axis`.
    pub fn about_axis(axis: &Vector3<f64>, angle: f64) -> Self {
        let rot = nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(*axis), angle);
        Self { m: *rot.matrix() }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    pub fn apply(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.m * v
    }
}

/// The rotation `Φ_U` induced on Bloch vectors by `ρ ↦ UρU†`.
pub fn su2_to_so3(u: &Su2) -> Rotation3 {
    let [a, b, cq, d] = u.quaternion();
    #[rustfmt::skip]
    let m = Matrix3::new(
        a * a - b * b - cq * cq + d * d, 2.0 * (a * b + cq * d),          2.0 * (b * d - a * cq),
        2.0 * (cq * d - a * b),          a * a - b * b + cq * cq - d * d, 2.0 * (b * cq + a * d),
        2.0 * (b * d + a * cq),          2.0 * (b * cq - a * d),          a * a + b * b - cq * cq - d * d,
    );
    Rotation3 { m }
}

/// One of the two preimages of `r` under [`su2_to_so3`]; the other is its negation.
///
/// The representative has `a ≥ 0`; when `a` vanishes the first nonzero of `b, c, d` is
/// made nonnegative.
pub fn so3_to_su2(r: &Rotation3) -> Su2 {
    let m = &r.m;
    let sq = [
        (1.0 + m[(0, 0)] + m[(1, 1)] + m[(2, 2)]) / 4.0,
        (1.0 - m[(0, 0)] - m[(1, 1)] + m[(2, 2)]) / 4.0,
        (1.0 - m[(0, 0)] + m[(1, 1)] - m[(2, 2)]) / 4.0,
        (1.0 + m[(0, 0)] - m[(1, 1)] - m[(2, 2)]) / 4.0,
    ];
    // products 4ab, 4ac, 4ad, 4bc, 4bd, 4cd
    let ab = (m[(0, 1)] - m[(1, 0)]) / 4.0;
    let ac = (m[(2, 0)] - m[(0, 2)]) / 4.0;
    let ad = (m[(1, 2)] - m[(2, 1)]) / 4.0;
    let bc = (m[(1, 2)] + m[(2, 1)]) / 4.0;
    let bd = (m[(0, 2)] + m[(2, 0)]) / 4.0;
    let cd = (m[(0, 1)] + m[(1, 0)]) / 4.0;
    let pivot = (0..4).fold(0, |best, i| if sq[i] > sq[best] { i } else { best });
    let p = sq[pivot].max(0.0).sqrt();
    let mut q = match pivot {
        0 => [p, ab / p, ac / p, ad / p],
        1 => [ab / p, p, bc / p, bd / p],
        2 => [ac / p, bc / p, p, cd / p],
        _ => [ad / p, bd / p, cd / p, p],
    };
    const ZERO: f64 = 1e-12;
    let lead = q.iter().copied().find(|x| x.abs() > ZERO).unwrap_or(1.0);
    if lead < 0.0 {
        q.iter_mut().for_each(|x| *x = -*x);
    }
    Su2::from_quaternion(q[0], q[1], q[2], q[3])
}

/// Block-diagonal state `λa ⊕ (1−λ)b`.
pub fn direct_sum(a: &DensityMatrix, b: &DensityMatrix, weight: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&weight) {
        return Err(Error::WeightOutOfRange(weight));
    }
    let m = linalg::block_diag(&a.matrix().scale(weight), &b.matrix().scale(1.0 - weight));
    Ok(DensityMatrix { entries: m })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PurityMode {
    Pure,
    Mixed,
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im)
}

/// Random state from a seed: Haar-random pure state or a Ginibre (Hilbert–Schmidt) mixed state.
pub fn random_state(d: usize, mode: PurityMode, seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_state_with(&mut rng, d, mode)
}

pub fn random_state_with<R: Rng + ?Sized>(rng: &mut R, d: usize, mode: PurityMode) -> DensityMatrix {
    match mode {
        PurityMode::Pure => {
            let psi: Vec<Complex64> = (0..d).map(|_| complex_gaussian(rng)).collect();
            let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
            let m = CMatrix::from_fn(d, d, |i, j| psi[i] * psi[j].conj() / norm2);
            DensityMatrix { entries: hermitize_unit_trace(m) }
        }
        PurityMode::Mixed => {
            let g = CMatrix::from_fn(d, d, |_, _| complex_gaussian(rng));
            let m = &g * g.adjoint();
            DensityMatrix { entries: hermitize_unit_trace(m) }
        }
    }
}

fn hermitize_unit_trace(m: CMatrix) -> CMatrix {
    let h = (&m + m.adjoint()).scale(0.5);
    let t = h.trace().re;
    h.scale(1.0 / t)
}

/// Haar-random unitary via QR of a Ginibre matrix with the phase correction.
pub fn random_unitary_with<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..d {
        let z = r[(j, j)];
        let phase = if z.norm() > 0.0 { z / z.norm() } else { c(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Uniform random element of SU(2).
pub fn random_su2_with<R: Rng + ?Sized>(rng: &mut R) -> Su2 {
    let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    Su2::from_quaternion(q[0], q[1], q[2], q[3])
}

/// Uniform random point in the unit ball.
pub fn random_ball_point<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    let v = random_unit_vector(rng);
    v * rng.random::<f64>().cbrt()
}

pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::new(rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal));
        let n: f64 = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

/// An ordered tuple of states on a common Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiState {
    dim: usize,
    states: Vec<DensityMatrix>,
}

impl MultiState {
    pub fn new(states: Vec<DensityMatrix>) -> Result<Self> {
        let first = states.first().ok_or(Error::EmptyMultiState)?;
        let dim = first.dim();
        if let Some(bad) = states.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        Ok(Self { dim, states })
    }

    /// Qubit multi-state from Bloch vectors.
    pub fn from_bloch_vectors(vectors: &[Vector3<f64>]) -> Result<Self> {
        let states = vectors.iter().map(qubit_state).collect::<Result<Vec<_>>>()?;
        Self::new(states)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn get(&self, label: usize) -> Result<&DensityMatrix> {
        self.states.get(label).ok_or(Error::BadLabel { label, count: self.states.len() })
    }

    pub fn iter(&self) -> impl Iterator<Item = &DensityMatrix> {
        self.states.iter()
    }

    /// `UϱU†` applied to every member.
    pub fn conjugated_by(&self, u: &CMatrix) -> Self {
        Self { dim: self.dim, states: self.states.iter().map(|s| s.conjugated_by(u)).collect() }
    }

    /// Entrywise complex conjugate of every member (equivalently, the transpose).
    pub fn conjugate(&self) -> Self {
        Self { dim: self.dim, states: self.states.iter().map(DensityMatrix::conjugate).collect() }
    }

    /// Componentwise convex combination `p·self + (1−p)·other`.
    pub fn mix(&self, other: &Self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::WeightOutOfRange(p));
        }
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        if other.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: other.len() });
        }
        let states = self
            .states
            .iter()
            .zip(&other.states)
            .map(|(a, b)| DensityMatrix { entries: a.matrix().scale(p) + b.matrix().scale(1.0 - p) })
            .collect();
        Ok(Self { dim: self.dim, states })
    }

    /// Bloch vectors of a qubit multi-state.
    pub fn bloch_vectors(&self) -> Result<Vec<Vector3<f64>>> {
        self.states.iter().map(bloch3).collect()
    }

    /// Generalized Bloch vectors in `basis`.
    pub fn bloch_vectors_in(&self, basis: BlochBasis) -> Result<Vec<BlochVector>> {
        self.states.iter().map(|s| to_bloch_in(s, basis)).collect()
    }

    pub(crate) fn require_qubit(&self) -> Result<()> {
        if self.dim != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: self.dim });
        }
        Ok(())
    }

    pub(crate) fn check_labels(&self, seq: &[usize]) -> Result<()> {
        if seq.is_empty() {
            return Err(Error::EmptySequence);
        }
        if let Some(&label) = seq.iter().find(|&&l| l >= self.len()) {
            return Err(Error::BadLabel { label, count: self.len() });
        }
        Ok(())
    }
}

/// Column matrix `[r_1 … r_n]` of qubit Bloch vectors.
pub(crate) fn coordinate_matrix(vectors: &[Vector3<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(3, vectors.len(), |i, j| vectors[j][i])
}
