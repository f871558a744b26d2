//! Sub-channel discrimination: guess which branch `a` of an instrument `{𝒯ₐ}` acted, by
//! measuring `{Eₐ}`. The success probability is `p(ρ) = Σₐ Tr[𝒯ₐ(ρ)Eₐ]`.
//!
//! For a qubit `p` is affine in the Bloch vector, `p = c₀ + ⟨c, r⟩`, so its maximum over the
//! real states (the disc `r_y = 0`) is attained on the boundary circle and equals
//! `c₀ + √(c_x² + c_z²)`. Mixing with any state `τ` gives `p(ρ) ≤ (1 + Im_R(ρ))·max_real p`,
//! which bounds the advantage ratio.

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix};
use crate::qstate::{self, DensityMatrix, MultiState};
use crate::quantifiers;

pub const INSTRUMENT_TOL: f64 = 1e-10;
/// Smallest real-reference value accepted as a denominator.
pub const MIN_DENOMINATOR: f64 = 1e-12;
/// Default number of angles on the real circle.
pub const REAL_GRID: usize = 4096;

/// A family of completely positive maps in Kraus form whose sum is trace preserving.
#[derive(Debug, Clone, PartialEq)]
pub struct Instrument {
    dim: usize,
    maps: Vec<Vec<CMatrix>>,
}

impl Instrument {
    pub fn new(maps: Vec<Vec<CMatrix>>) -> Result<Self> {
        let dim = maps.iter().flatten().next().map(|k| k.nrows()).ok_or(Error::InvalidInstrument { residual: 1.0 })?;
        let mut total = CMatrix::zeros(dim, dim);
        for k in maps.iter().flatten() {
            if k.nrows() != dim || k.ncols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: k.nrows().max(k.ncols()) });
            }
            total += k.adjoint() * k;
        }
        let residual = linalg::max_abs(&(total - CMatrix::identity(dim, dim)));
        if residual > INSTRUMENT_TOL {
            return Err(Error::InvalidInstrument { residual });
        }
        Ok(Self { dim, maps })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn kraus(&self, a: usize) -> &[CMatrix] {
        &self.maps[a]
    }

    /// `𝒯ₐ(m) = Σ K m K†`, applied to any operator.
    pub fn apply(&self, a: usize, m: &CMatrix) -> CMatrix {
        self.maps[a].iter().fold(CMatrix::zeros(self.dim, self.dim), |acc, k| acc + k * m * k.adjoint())
    }
}

/// A POVM `{Eₐ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    dim: usize,
    effects: Vec<CMatrix>,
}

impl Measurement {
    pub fn new(effects: Vec<CMatrix>) -> Result<Self> {
        let dim = effects.first().map(|e| e.nrows()).ok_or_else(|| Error::InvalidMeasurement("no effects".into()))?;
        let mut total = CMatrix::zeros(dim, dim);
        for (a, e) in effects.iter().enumerate() {
            if e.nrows() != dim || e.ncols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: e.nrows().max(e.ncols()) });
            }
            let herm = linalg::hermiticity_residual(e);
            if herm > INSTRUMENT_TOL {
                return Err(Error::InvalidMeasurement(format!("effect {a} is not Hermitian ({herm:e})")));
            }
            let min = linalg::hermitian_eigenvalues(e)[0];
            if min < -INSTRUMENT_TOL {
                return Err(Error::InvalidMeasurement(format!("effect {a} has eigenvalue {min:e}")));
            }
            total += e;
        }
        let residual = linalg::max_abs(&(total - CMatrix::identity(dim, dim)));
        if residual > INSTRUMENT_TOL {
            return Err(Error::InvalidMeasurement(format!("effects sum to identity only within {residual:e}")));
        }
        Ok(Self { dim, effects })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn effect(&self, a: usize) -> &CMatrix {
        &self.effects[a]
    }
}

fn check_task(dim: usize, t: &Instrument, m: &Measurement) -> Result<()> {
    if t.dim != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: t.dim });
    }
    if m.dim != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: m.dim });
    }
    if t.len() != m.len() {
        return Err(Error::LabelCountMismatch { instrument: t.len(), measurement: m.len() });
    }
    Ok(())
}

/// `Σₐ Tr[𝒯ₐ(x)Eₐ]` for an arbitrary operator `x`; linear in `x`.
fn success_functional(x: &CMatrix, t: &Instrument, m: &Measurement) -> f64 {
    (0..t.len()).map(|a| linalg::trace_of_product(&t.apply(a, x), &m.effects[a]).re).sum()
}

/// Probability of guessing the branch correctly.
pub fn p_succ(rho: &DensityMatrix, t: &Instrument, m: &Measurement) -> Result<f64> {
    check_task(rho.dim(), t, m)?;
    Ok(success_functional(rho.matrix(), t, m))
}

/// `(c₀, c)` with `p_succ = c₀ + ⟨c, r⟩` for qubit tasks.
pub fn affine_coefficients(t: &Instrument, m: &Measurement) -> Result<(f64, Vector3<f64>)> {
    check_task(2, t, m)?;
    let c0 = success_functional(&CMatrix::identity(2, 2).scale(0.5), t, m);
    let paulis = linalg::pauli();
    let coef = Vector3::from_fn(|k, _| success_functional(&paulis[k].scale(0.5), t, m));
    Ok((c0, coef))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealReference {
    pub value: f64,
    pub argmax: DensityMatrix,
    pub bloch: Vector3<f64>,
}

fn circle_point(theta: f64) -> Vector3<f64> {
    Vector3::new(theta.sin(), 0.0, theta.cos())
}

/// Best success probability over real qubit states, by an angle grid on the circle
/// `r_y = 0, r_x² + r_z² = 1` followed by golden-section refinement.
pub fn best_real_reference(t: &Instrument, m: &Measurement, grid: usize) -> Result<RealReference> {
    let (c0, coef) = affine_coefficients(t, m)?;
    let f = |theta: f64| c0 + coef.dot(&circle_point(theta));
    let grid = grid.max(8);
    let h = std::f64::consts::TAU / grid as f64;
    let k = (0..grid).max_by(|&a, &b| f(a as f64 * h).total_cmp(&f(b as f64 * h))).unwrap();
    let (mut lo, mut hi) = ((k as f64 - 1.0) * h, (k as f64 + 1.0) * h);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let x1 = hi - phi * (hi - lo);
        let x2 = lo + phi * (hi - lo);
        if f(x1) < f(x2) {
            lo = x1;
        } else {
            hi = x2;
        }
    }
    let mut theta = 0.5 * (lo + hi);
    if f(k as f64 * h) > f(theta) {
        theta = k as f64 * h;
    }
    let bloch = circle_point(theta);
    Ok(RealReference { value: f(theta), argmax: qstate::qubit_state(&bloch)?, bloch })
}

/// `p_succ(ρ) / max over real σ of p_succ(σ)`.
pub fn advantage_ratio(rho: &DensityMatrix, t: &Instrument, m: &Measurement) -> Result<f64> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: rho.dim() });
    }
    let reference = best_real_reference(t, m, REAL_GRID)?.value;
    if reference < MIN_DENOMINATOR {
        return Err(Error::ZeroDenominator(reference));
    }
    Ok(p_succ(rho, t, m)? / reference)
}

/// `1 + Im_R(ρ)`, the largest ratio any task can reach.
pub fn advantage_ceiling(rho: &DensityMatrix) -> Result<f64> {
    Ok(1.0 + quantifiers::im_robustness_single(rho)?)
}

/// Average of per-state advantage ratios, task `i` applied to state `i`.
pub fn multi_task_average(ms: &MultiState, tasks: &[(Instrument, Measurement)]) -> Result<f64> {
    if tasks.len() != ms.len() {
        return Err(Error::DimensionMismatch { expected: ms.len(), found: tasks.len() });
    }
    let mut acc = 0.0;
    for (rho, (t, m)) in ms.iter().zip(tasks) {
        acc += advantage_ratio(rho, t, m)?;
    }
    Ok(acc / ms.len() as f64)
}

/// `1 + (1/n) Σ Im_R(ρᵢ)` in the computational basis; never below `1 + Im_R1`.
pub fn multi_task_ceiling(ms: &MultiState) -> Result<f64> {
    let mut acc = 0.0;
    for rho in ms.iter() {
        acc += quantifiers::im_robustness_single(rho)?;
    }
    Ok(1.0 + acc / ms.len() as f64)
}

fn scaled(m: CMatrix, s: f64) -> CMatrix {
    m.scale(s)
}

/// Branches `𝟙/√2` and `Z/√2`, measured with the `σ_y` eigenprojectors: `p = (1 + r_y)/2`.
pub fn y_task() -> (Instrument, Measurement) {
    let [_, sy, sz] = linalg::pauli();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let id = CMatrix::identity(2, 2);
    let t = Instrument::new(vec![vec![scaled(id.clone(), h)], vec![scaled(sz, h)]]).unwrap();
    let m = Measurement::new(vec![(&id + &sy).scale(0.5), (&id - &sy).scale(0.5)]).unwrap();
    (t, m)
}

/// Half identity versus half full dephasing, measured in the `|±⟩` basis.
pub fn dephasing_task() -> (Instrument, Measurement) {
    let [sx, _, _] = linalg::pauli();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let id = CMatrix::identity(2, 2);
    let p0 = CMatrix::from_row_slice(2, 2, &[c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let p1 = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]);
    let t = Instrument::new(vec![vec![scaled(id.clone(), h)], vec![p0, p1]]).unwrap();
    let m = Measurement::new(vec![(&id + &sx).scale(0.5), (&id - &sx).scale(0.5)]).unwrap();
    (t, m)
}

/// A single branch carrying the identity channel, measured with `E = 𝟙`.
pub fn identity_task(d: usize) -> (Instrument, Measurement) {
    let id = CMatrix::identity(d, d);
    (Instrument::new(vec![vec![id.clone()]]).unwrap(), Measurement::new(vec![id]).unwrap())
}

/// Two branches, each half of the completely depolarizing channel.
pub fn depolarizing_task() -> (Instrument, Measurement) {
    let id = CMatrix::identity(2, 2);
    let mut kraus = vec![id.scale(0.5)];
    kraus.extend(linalg::pauli().iter().map(|s| s.scale(0.5)));
    let half: Vec<CMatrix> = kraus.iter().map(|k| k.scale(std::f64::consts::FRAC_1_SQRT_2)).collect();
    let t = Instrument::new(vec![half.clone(), half]).unwrap();
    let e0 = CMatrix::from_row_slice(2, 2, &[c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.4, 0.0)]);
    let m = Measurement::new(vec![e0.clone(), id - e0]).unwrap();
    (t, m)
}

/// Random two-outcome qubit task: branch `a` has one or two Kraus operators cut from a
/// Haar isometry, and the POVM has a Haar eigenbasis with uniform eigenvalues in [0, 1].
pub fn random_task<R: Rng + ?Sized>(rng: &mut R) -> (Instrument, Measurement) {
    let counts = [rng.random_range(1..=2usize), rng.random_range(1..=2usize)];
    let total = counts[0] + counts[1];
    let u = qstate::random_unitary_with(rng, 2 * total);
    let v = u.columns(0, 2).into_owned();
    let mut kraus = (0..total).map(|j| v.rows(2 * j, 2).into_owned());
    let maps = counts.iter().map(|&k| kraus.by_ref().take(k).collect()).collect();
    let t = Instrument::new(maps).expect("isometry blocks are trace preserving");

    let w = qstate::random_unitary_with(rng, 2);
    let eig = [rng.random::<f64>(), rng.random::<f64>()];
    let diag = CMatrix::from_row_slice(2, 2, &[c(eig[0], 0.0), c(0.0, 0.0), c(0.0, 0.0), c(eig[1], 0.0)]);
    let e0 = &w * diag * w.adjoint();
    let e0 = (&e0 + e0.adjoint()).scale(0.5);
    let e1 = CMatrix::identity(2, 2) - &e0;
    (t, Measurement::new(vec![e0, e1]).expect("complementary effects"))
}

#[derive(Debug, Clone)]
pub struct TaskSearch {
    pub instrument: Instrument,
    pub measurement: Measurement,
    pub ratio: f64,
    pub ceiling: f64,
}

/// Best advantage ratio for `rho` over the y-task rotated into the Bloch direction of the
/// state's imaginary component, and `trials` random tasks.
pub fn search_task(rho: &DensityMatrix, trials: usize, seed: u64) -> Result<TaskSearch> {
    let ceiling = advantage_ceiling(rho)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates = vec![y_task(), {
        // σ_y ↦ −σ_y flips which sign of r_y is rewarded
        let (t, m) = y_task();
        let m = Measurement::new(vec![m.effect(1).clone(), m.effect(0).clone()]).unwrap();
        (t, m)
    }];
    candidates.extend((0..trials).map(|_| random_task(&mut rng)));
    let mut best: Option<TaskSearch> = None;
    for (t, m) in candidates {
        let ratio = match advantage_ratio(rho, &t, &m) {
            Ok(r) => r,
            Err(Error::ZeroDenominator(_)) => continue,
            Err(e) => return Err(e),
        };
        if best.as_ref().is_none_or(|b| ratio > b.ratio) {
            best = Some(TaskSearch { instrument: t, measurement: m, ratio, ceiling });
        }
    }
    best.ok_or(Error::ZeroDenominator(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{random_state_with, BlochVector, PurityMode};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn state(x: f64, y: f64, z: f64) -> DensityMatrix {
        qstate::from_bloch(&BlochVector::qubit(x, y, z)).unwrap()
    }

    #[test]
    fn p_succ_examples() {
        let rho = random_state_with(&mut ChaCha8Rng::seed_from_u64(1), 2, PurityMode::Mixed);
        let (t, m) = identity_task(2);
        assert_abs_diff_eq!(p_succ(&rho, &t, &m).unwrap(), 1.0, epsilon = 1e-15);

        let id = CMatrix::identity(2, 2);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let t = Instrument::new(vec![vec![id.scale(h)], vec![id.scale(h)]]).unwrap();
        let m = Measurement::new(vec![id.scale(0.5), id.scale(0.5)]).unwrap();
        assert_abs_diff_eq!(p_succ(&rho, &t, &m).unwrap(), 0.5, epsilon = 1e-15);

        let (t, m) = dephasing_task();
        assert_abs_diff_eq!(p_succ(&state(1.0, 0.0, 0.0), &t, &m).unwrap(), 0.75, epsilon = 1e-15);

        let (t1, _) = identity_task(2);
        assert!(matches!(p_succ(&rho, &t1, &m), Err(Error::LabelCountMismatch { instrument: 1, measurement: 2 })));
        let q = DensityMatrix::maximally_mixed(3);
        assert!(matches!(p_succ(&q, &t, &m), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn validation_rejects_bad_tasks() {
        let id = CMatrix::identity(2, 2);
        assert!(matches!(Instrument::new(vec![vec![id.scale(0.5)]]), Err(Error::InvalidInstrument { .. })));
        assert!(matches!(Measurement::new(vec![id.scale(0.5)]), Err(Error::InvalidMeasurement(_))));
        let neg = CMatrix::from_row_slice(2, 2, &[c(1.2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
        assert!(matches!(Measurement::new(vec![neg.clone(), id - neg]), Err(Error::InvalidMeasurement(_))));
    }

    #[test]
    fn real_reference_examples() {
        let (t, m) = depolarizing_task();
        let r = best_real_reference(&t, &m, REAL_GRID).unwrap();
        let a = p_succ(&state(0.0, 0.0, 1.0), &t, &m).unwrap();
        let b = p_succ(&state(0.6, 0.0, -0.8), &t, &m).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        assert_abs_diff_eq!(r.value, a, epsilon = 1e-15);

        let (t, m) = y_task();
        let r = best_real_reference(&t, &m, REAL_GRID).unwrap();
        assert_abs_diff_eq!(r.value, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.bloch.y, 0.0);
        assert_abs_diff_eq!(r.bloch.norm(), 1.0, epsilon = 1e-15);

        let (t, m) = identity_task(2);
        assert_abs_diff_eq!(best_real_reference(&t, &m, REAL_GRID).unwrap().value, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn real_reference_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let (t, m) = random_task(&mut rng);
            let (c0, coef) = affine_coefficients(&t, &m).unwrap();
            let oracle = c0 + coef.x.hypot(coef.z);
            assert_abs_diff_eq!(best_real_reference(&t, &m, REAL_GRID).unwrap().value, oracle, epsilon = 1e-12);
        }
    }

    #[test]
    fn ratio_examples() {
        let (t, m) = y_task();
        let plus_y = state(0.0, 1.0, 0.0);
        assert_abs_diff_eq!(advantage_ratio(&plus_y, &t, &m).unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(advantage_ceiling(&plus_y).unwrap(), 2.0, epsilon = 1e-15);
        assert!(advantage_ratio(&state(0.6, 0.0, 0.8), &t, &m).unwrap() <= 1.0 + 1e-6);
        assert!(advantage_ratio(&DensityMatrix::maximally_mixed(2), &t, &m).unwrap() <= 1.0);

        let zero = CMatrix::zeros(2, 2);
        let id = CMatrix::identity(2, 2);
        let t = Instrument::new(vec![vec![id.clone()], vec![zero.clone()]]).unwrap();
        let m = Measurement::new(vec![zero, id]).unwrap();
        assert!(matches!(advantage_ratio(&plus_y, &t, &m), Err(Error::ZeroDenominator(_))));
    }

    #[test]
    fn search_and_multi_task() {
        let plus_y = state(0.0, -0.7, 0.1);
        let s = search_task(&plus_y, 50, 9).unwrap();
        assert!(s.ratio > 1.0 && s.ratio <= s.ceiling + 1e-6);

        let ms = MultiState::new(vec![state(0.0, 1.0, 0.0), state(0.5, 0.0, 0.5)]).unwrap();
        let tasks = vec![y_task(), dephasing_task()];
        let avg = multi_task_average(&ms, &tasks).unwrap();
        assert!(avg <= multi_task_ceiling(&ms).unwrap() + 1e-6);
        let im_r1 = quantifiers::im_r1(&ms).unwrap().value;
        assert!(multi_task_ceiling(&ms).unwrap() >= 1.0 + im_r1 - 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn soundness_and_affinity(seed in any::<u64>(), w in 0.0f64..1.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (t, m) = random_task(&mut rng);
            let a = random_state_with(&mut rng, 2, PurityMode::Mixed);
            let b = random_state_with(&mut rng, 2, PurityMode::Pure);
            for rho in [&a, &b] {
                let p = p_succ(rho, &t, &m).unwrap();
                prop_assert!((-1e-10..=1.0 + 1e-10).contains(&p));
                let ratio = advantage_ratio(rho, &t, &m).unwrap();
                prop_assert!(ratio <= advantage_ceiling(rho).unwrap() + 1e-6);
            }
            let mix = DensityMatrix::new(a.matrix().scale(w) + b.matrix().scale(1.0 - w)).unwrap();
            let lhs = p_succ(&mix, &t, &m).unwrap();
            let rhs = w * p_succ(&a, &t, &m).unwrap() + (1.0 - w) * p_succ(&b, &t, &m).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }
    }
}
