//! Decision procedures and witnesses for multi-state imaginarity and coherence.
//!
//! For qubits both questions are settled by the numerical rank of the Bloch Gram matrix:
//! imaginarity iff rank 3 (the Bloch vectors are not coplanar) and coherence iff rank ≥ 2
//! (not colinear). For `d ≥ 3` only necessary rank bounds and invariant witnesses are
//! available, so those procedures may answer [`Decision::InconclusiveNecessaryOnly`].

pub mod fixtures;

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use num_complex::Complex64;

use crate::bargmann::{self, GramMatrix};
use crate::error::{Error, Result};
use crate::linalg;
use crate::qstate::{self, MultiState, Rotation3, Su2};

pub use fixtures::{named_fixture, Expected, Fixture, FixtureCheck, FIXTURE_NAMES};

/// Default threshold for invariant-based witnesses.
pub const WITNESS_TOL: f64 = 1e-10;
/// Largest accepted residual of a real-basis certificate.
pub const CERTIFICATE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    Imaginarity,
    Coherence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    HasResource,
    ResourceFree,
    InconclusiveNecessaryOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Evidence {
    /// Numerical Gram rank against the largest rank compatible with the free set.
    Rank { rank: usize, bound: usize },
    /// Modulus of an invariant-based witness, together with the raw complex value.
    Witness { magnitude: f64, value: Complex64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub property: Property,
    pub decision: Decision,
    pub evidence: Evidence,
    pub tolerance: f64,
    /// Distance between the deciding quantity and its threshold.
    pub margin: f64,
    /// Operation that produced the verdict.
    pub source: &'static str,
    pub max_commutator: Option<f64>,
}

impl Verdict {
    pub fn has_resource(&self) -> bool {
        self.decision == Decision::HasResource
    }
}

fn rank_verdict(
    property: Property,
    g: &GramMatrix,
    bound: usize,
    otherwise: Decision,
    source: &'static str,
) -> Verdict {
    let decision = if g.numerical_rank > bound { Decision::HasResource } else { otherwise };
    Verdict {
        property,
        decision,
        evidence: Evidence::Rank { rank: g.numerical_rank, bound },
        tolerance: g.rank_tolerance,
        margin: g.margin_at(bound),
        source,
        max_commutator: None,
    }
}

/// Exact imaginarity test for qubits: rank of the Gram matrix equals 3.
pub fn qubit_imaginarity_test(ms: &MultiState, tol: Option<f64>) -> Result<Verdict> {
    ms.require_qubit()?;
    let g = bargmann::gram(ms, tol);
    Ok(rank_verdict(Property::Imaginarity, &g, 2, Decision::ResourceFree, "qubit_imaginarity_test"))
}

/// Largest Frobenius norm of a pairwise commutator `[ρᵢ, ρⱼ]`.
pub fn max_commutator(ms: &MultiState) -> f64 {
    let s = ms.states();
    let mut best: f64 = 0.0;
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            best = best.max(linalg::commutator_norm(s[i].matrix(), s[j].matrix()));
        }
    }
    best
}

/// Exact coherence test for qubits: rank ≥ 2, cross-checked against commutators.
///
/// For qubits `‖[ρᵢ, ρⱼ]‖² = |rᵢ × rⱼ|²/2`, and the sum of these over pairs equals half the
/// second elementary symmetric function of the Gram spectrum. The rank threshold on
/// `λ₂` therefore brackets the largest commutator between `√(λ₁·tol/(2m))` and
/// `√(3λ₁·tol/2)` (`m` pairs); a commutator outside the bracket for the chosen side
/// is reported as [`Error::InternalDisagreement`].
pub fn qubit_coherence_test(ms: &MultiState, tol: Option<f64>) -> Result<Verdict> {
    ms.require_qubit()?;
    let g = bargmann::gram(ms, tol);
    let mut verdict = rank_verdict(Property::Coherence, &g, 1, Decision::ResourceFree, "qubit_coherence_test");
    let commutator = max_commutator(ms);
    verdict.max_commutator = Some(commutator);

    let n = ms.len();
    let pairs = (n * n.saturating_sub(1) / 2).max(1) as f64;
    let lambda1 = g.eigenvalue(0).max(0.0);
    let slack = 1e-9;
    let disagree = if verdict.has_resource() {
        commutator < (lambda1 * g.rank_tolerance / (2.0 * pairs)).sqrt() * (1.0 - 1e-6) - slack
    } else {
        commutator > (3.0 * lambda1 * g.rank_tolerance / 2.0).sqrt() * (1.0 + 1e-6) + slack
    };
    if disagree {
        return Err(Error::InternalDisagreement { rank: g.numerical_rank, commutator });
    }
    Ok(verdict)
}

/// A unitary that makes every state of a multi-state real in the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct RealBasisCertificate {
    pub unitary: Su2,
    pub rotation: Rotation3,
    /// Orthonormal right-handed frame `(s, u, t)`; the Bloch vectors lie in span{s, t}.
    pub frame: [Vector3<f64>; 3],
    /// Largest |imaginary part| of an entry of `UρU†` over the members.
    pub residual: f64,
}

impl RealBasisCertificate {
    pub fn apply(&self, ms: &MultiState) -> MultiState {
        ms.conjugated_by(&self.unitary.to_dmatrix())
    }
}

/// Builds the rotation taking the Bloch-vector plane onto the X–Z plane and lifts it to SU(2).
pub fn construct_real_basis(ms: &MultiState) -> Result<RealBasisCertificate> {
    let verdict = qubit_imaginarity_test(ms, None)?;
    if verdict.has_resource() {
        return Err(Error::HasImaginarity { rank: 3 });
    }
    let vectors = ms.bloch_vectors()?;
    let a = qstate::coordinate_matrix(&vectors);
    let scatter: Matrix3<f64> = Matrix3::from_fn(|i, j| a.row(i).dot(&a.row(j)));

    let (s, t) = if scatter.abs().max() == 0.0 {
        (Vector3::x(), Vector3::z())
    } else {
        let eig = SymmetricEigen::new(scatter);
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
        let s: Vector3<f64> = eig.eigenvectors.column(order[0]).into();
        let t: Vector3<f64> = eig.eigenvectors.column(order[1]).into();
        (s.normalize(), (t - s * s.dot(&t)).normalize())
    };
    let u = t.cross(&s);
    let rotation = Rotation3::new(Matrix3::from_rows(&[s.transpose(), u.transpose(), t.transpose()]))?;
    let unitary = qstate::so3_to_su2(&rotation);
    let rotated = ms.conjugated_by(&unitary.to_dmatrix());
    let residual = rotated.iter().map(|r| r.max_imaginary()).fold(0.0, f64::max);
    if residual > CERTIFICATE_TOL {
        return Err(Error::CertificateResidual(residual));
    }
    Ok(RealBasisCertificate { unitary, rotation, frame: [s, u, t], residual })
}

/// `𝔅₃|real = [−1/8, 1]`: the real values attained by third-order invariants of qubits.
pub const REAL_THIRD_ORDER_INTERVAL: (f64, f64) = (-0.125, 1.0);

/// Whether a third-order qubit invariant is compatible with a real triple.
pub fn in_real_third_order_set(value: Complex64, tol: f64) -> bool {
    let (lo, hi) = REAL_THIRD_ORDER_INTERVAL;
    value.im.abs() <= tol && value.re >= lo - tol && value.re <= hi + tol
}

/// Imaginarity witness from `Im Tr(ρ_{seq})`. A nonzero imaginary part always witnesses
/// imaginarity. A vanishing one settles the question only for a qubit sequence of length 3
/// that covers every label.
pub fn invariant_witness(ms: &MultiState, seq: &[usize], tol: f64) -> Result<Verdict> {
    let value = bargmann::invariant(ms, seq)?.value;
    let magnitude = value.im.abs();
    let covers_all = (0..ms.len()).all(|l| seq.contains(&l));
    let decision = if magnitude > tol {
        Decision::HasResource
    } else if ms.dim() == 2 && seq.len() == 3 && covers_all {
        Decision::ResourceFree
    } else {
        Decision::InconclusiveNecessaryOnly
    };
    Ok(Verdict {
        property: Property::Imaginarity,
        decision,
        evidence: Evidence::Witness { magnitude, value },
        tolerance: tol,
        margin: (magnitude - tol).abs(),
        source: "invariant_witness",
        max_commutator: None,
    })
}

/// Third-order witness on labels `(k, l, m)`.
pub fn third_order_witness(ms: &MultiState, k: usize, l: usize, m: usize, tol: f64) -> Result<Verdict> {
    let mut v = invariant_witness(ms, &[k, l, m], tol)?;
    v.source = "third_order_witness";
    Ok(v)
}

/// Sequence `seq` rearranged as `seq[perm[0]], seq[perm[1]], …`.
pub fn permuted_sequence(seq: &[usize], perm: &[usize]) -> Result<Vec<usize>> {
    let bad = || Error::BadPermutation { perm: perm.to_vec(), len: seq.len() };
    if perm.len() != seq.len() {
        return Err(bad());
    }
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return Err(bad());
        }
        seen[p] = true;
    }
    Ok(perm.iter().map(|&p| seq[p]).collect())
}

/// Coherence witness: an incoherent multi-state has all invariants invariant under any
/// reordering of the factors, so a difference above `tol` witnesses coherence.
pub fn permutation_equality_witness(ms: &MultiState, seq: &[usize], perm: &[usize], tol: f64) -> Result<Verdict> {
    let permuted = permuted_sequence(seq, perm)?;
    let value = bargmann::invariant(ms, seq)?.value - bargmann::invariant(ms, &permuted)?.value;
    let magnitude = value.norm();
    Ok(Verdict {
        property: Property::Coherence,
        decision: if magnitude > tol { Decision::HasResource } else { Decision::InconclusiveNecessaryOnly },
        evidence: Evidence::Witness { magnitude, value },
        tolerance: tol,
        margin: (magnitude - tol).abs(),
        source: "permutation_equality_witness",
        max_commutator: None,
    })
}

/// Necessary test: an imaginarity-free `d`-level multi-state has Gram rank ≤ d(d+1)/2 − 1.
pub fn high_dim_imaginarity_necessary(ms: &MultiState, tol: Option<f64>) -> Result<Verdict> {
    let d = ms.dim();
    if d == 2 {
        return qubit_imaginarity_test(ms, tol);
    }
    let g = bargmann::gram(ms, tol);
    Ok(rank_verdict(
        Property::Imaginarity,
        &g,
        d * (d + 1) / 2 - 1,
        Decision::InconclusiveNecessaryOnly,
        "high_dim_imaginarity_necessary",
    ))
}

/// Necessary test: an incoherent `d`-level multi-state has Gram rank ≤ d − 1.
pub fn high_dim_coherence_necessary(ms: &MultiState, tol: Option<f64>) -> Result<Verdict> {
    let d = ms.dim();
    if d == 2 {
        return qubit_coherence_test(ms, tol);
    }
    let g = bargmann::gram(ms, tol);
    let mut v = rank_verdict(
        Property::Coherence,
        &g,
        d - 1,
        Decision::InconclusiveNecessaryOnly,
        "high_dim_coherence_necessary",
    );
    v.max_commutator = Some(max_commutator(ms));
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{random_ball_point, random_su2_with, random_unit_vector, DensityMatrix, PurityMode};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pauli_triple() -> MultiState {
        MultiState::from_bloch_vectors(&[Vector3::x(), Vector3::y(), Vector3::z()]).unwrap()
    }

    fn random_rotation(rng: &mut ChaCha8Rng) -> Rotation3 {
        qstate::su2_to_so3(&random_su2_with(rng))
    }

    fn coplanar(rng: &mut ChaCha8Rng, n: usize) -> MultiState {
        let r = random_rotation(rng);
        let vs: Vec<_> = (0..n)
            .map(|_| {
                let p = random_ball_point(rng);
                r.apply(&Vector3::new(p.x, 0.0, p.z))
            })
            .collect();
        MultiState::from_bloch_vectors(&vs).unwrap()
    }

    #[test]
    fn imaginarity_examples() {
        let v = qubit_imaginarity_test(&pauli_triple(), None).unwrap();
        assert_eq!(v.decision, Decision::HasResource);
        assert_eq!(v.evidence, Evidence::Rank { rank: 3, bound: 2 });

        let xz = MultiState::from_bloch_vectors(&[Vector3::x(), Vector3::z(), Vector3::new(0.3, 0.0, -0.5)]).unwrap();
        assert_eq!(qubit_imaginarity_test(&xz, None).unwrap().decision, Decision::ResourceFree);

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let pair = MultiState::new(vec![
                qstate::random_state_with(&mut rng, 2, PurityMode::Mixed),
                qstate::random_state_with(&mut rng, 2, PurityMode::Pure),
            ])
            .unwrap();
            assert_eq!(qubit_imaginarity_test(&pair, None).unwrap().decision, Decision::ResourceFree);
        }
        let q = MultiState::new(vec![DensityMatrix::maximally_mixed(3)]).unwrap();
        assert!(matches!(qubit_imaginarity_test(&q, None), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn coherence_examples() {
        let diag = fixtures::nonconvexity_coherence(1.0);
        let v = qubit_coherence_test(&diag, None).unwrap();
        assert_eq!(v.decision, Decision::ResourceFree);
        assert_eq!(v.max_commutator, Some(0.0));
        let mixed = fixtures::nonconvexity_coherence(0.5);
        assert_eq!(qubit_coherence_test(&mixed, None).unwrap().decision, Decision::HasResource);
        let rho = qstate::random_state(2, PurityMode::Mixed, 3);
        let copies = MultiState::new(vec![rho.clone(), rho.clone(), rho]).unwrap();
        assert_eq!(qubit_coherence_test(&copies, None).unwrap().decision, Decision::ResourceFree);
    }

    #[test]
    fn commutator_matches_cross_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let a = random_ball_point(&mut rng);
            let b = random_ball_point(&mut rng);
            let ms = MultiState::from_bloch_vectors(&[a, b]).unwrap();
            assert_abs_diff_eq!(max_commutator(&ms), a.cross(&b).norm() / 2f64.sqrt(), epsilon = 1e-14);
        }
    }

    #[test]
    fn real_basis_examples() {
        let xz = MultiState::from_bloch_vectors(&[Vector3::x(), Vector3::z(), Vector3::new(-0.6, 0.0, 0.8)]).unwrap();
        let cert = construct_real_basis(&xz).unwrap();
        assert!(cert.residual <= 1e-12);

        let r = Vector3::new(0.2, -0.5, 0.7).normalize();
        let family: Vec<_> = [0.9, -0.3, 0.5, 1.0].iter().map(|x| r * *x).collect();
        let ms = MultiState::from_bloch_vectors(&family).unwrap();
        let cert = construct_real_basis(&ms).unwrap();
        assert!(cert.apply(&ms).iter().all(|s| s.max_imaginary() <= 1e-12));

        let mixed = MultiState::new(vec![DensityMatrix::maximally_mixed(2); 3]).unwrap();
        let cert = construct_real_basis(&mixed).unwrap();
        assert_eq!(cert.unitary.quaternion(), [1.0, 0.0, 0.0, 0.0]);

        assert!(matches!(construct_real_basis(&pauli_triple()), Err(Error::HasImaginarity { rank: 3 })));
    }

    #[test]
    fn third_order_examples() {
        let q = fixtures::qutrit_lambda();
        let v = third_order_witness(&q, 0, 1, 2, WITNESS_TOL).unwrap();
        assert_eq!(v.decision, Decision::HasResource);
        match v.evidence {
            Evidence::Witness { magnitude, .. } => assert_abs_diff_eq!(magnitude, 1.0 / 27.0, epsilon = 1e-15),
            _ => unreachable!(),
        }
        let (_, phi) = fixtures::dim4_counterexample();
        assert_eq!(third_order_witness(&phi, 0, 1, 2, WITNESS_TOL).unwrap().decision, Decision::InconclusiveNecessaryOnly);
        assert_eq!(invariant_witness(&phi, &[0, 0, 1, 2], WITNESS_TOL).unwrap().decision, Decision::HasResource);

        let real = MultiState::from_bloch_vectors(&[Vector3::x(), Vector3::z(), -Vector3::x()]).unwrap();
        assert_eq!(third_order_witness(&real, 0, 1, 2, WITNESS_TOL).unwrap().decision, Decision::ResourceFree);
        assert!(in_real_third_order_set(bargmann::invariant(&real, &[0, 1, 2]).unwrap().value, 1e-12));
        assert!(matches!(third_order_witness(&real, 0, 1, 5, WITNESS_TOL), Err(Error::BadLabel { .. })));
    }

    #[test]
    fn permutation_examples() {
        let xi = fixtures::nonconvexity_coherence(0.5);
        let v = permutation_equality_witness(&xi, &[0, 0, 1, 1], &[0, 2, 1, 3], WITNESS_TOL).unwrap();
        assert_eq!(v.decision, Decision::HasResource);
        match v.evidence {
            Evidence::Witness { value, .. } => assert_abs_diff_eq!(value.re, 1.0 / 2304.0, epsilon = 1e-15),
            _ => unreachable!(),
        }
        let diag = fixtures::nonconvexity_coherence(1.0);
        let v = permutation_equality_witness(&diag, &[0, 0, 1, 1], &[0, 2, 1, 3], WITNESS_TOL).unwrap();
        assert_eq!(v.decision, Decision::InconclusiveNecessaryOnly);

        let q = fixtures::qutrit_lambda();
        let v = permutation_equality_witness(&q, &[0, 1, 2], &[0, 2, 1], WITNESS_TOL).unwrap();
        match v.evidence {
            Evidence::Witness { value, magnitude } => {
                assert_abs_diff_eq!(value.im, 2.0 / 27.0, epsilon = 1e-15);
                assert_abs_diff_eq!(magnitude, 2.0 / 27.0, epsilon = 1e-15);
            }
            _ => unreachable!(),
        }
        assert!(matches!(
            permutation_equality_witness(&q, &[0, 1, 2], &[0, 0, 1], WITNESS_TOL),
            Err(Error::BadPermutation { .. })
        ));
    }

    #[test]
    fn high_dim_examples() {
        let q = fixtures::qutrit_lambda();
        let v = high_dim_imaginarity_necessary(&q, None).unwrap();
        assert_eq!(v.decision, Decision::InconclusiveNecessaryOnly);
        assert_eq!(v.evidence, Evidence::Rank { rank: 3, bound: 5 });
        assert_eq!(high_dim_imaginarity_necessary(&pauli_triple(), None).unwrap().decision, Decision::HasResource);

        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let states: Vec<_> = (0..8)
                .map(|_| {
                    let g = nalgebra::DMatrix::<f64>::from_fn(3, 3, |_, _| rng.random::<f64>() - 0.5);
                    let m = &g * g.transpose();
                    let m = &m / m.trace();
                    DensityMatrix::new(m.map(|x| linalg::c(x, 0.0))).unwrap()
                })
                .collect();
            let v = high_dim_imaginarity_necessary(&MultiState::new(states).unwrap(), None).unwrap();
            assert_eq!(v.decision, Decision::InconclusiveNecessaryOnly);
        }

        let pair = fixtures::prop_vi2_counterexample();
        let v = high_dim_coherence_necessary(&pair, None).unwrap();
        assert_eq!(v.decision, Decision::InconclusiveNecessaryOnly);
        assert!(v.max_commutator.unwrap() > 1e-3);
        let diag = MultiState::new(vec![
            DensityMatrix::diagonal(&[0.2, 0.3, 0.5]).unwrap(),
            DensityMatrix::diagonal(&[0.6, 0.3, 0.1]).unwrap(),
        ])
        .unwrap();
        let v = high_dim_coherence_necessary(&diag, None).unwrap();
        assert_eq!(v.decision, Decision::InconclusiveNecessaryOnly);
        assert_eq!(v.max_commutator, Some(0.0));
        let mub = MultiState::from_bloch_vectors(&[Vector3::x(), Vector3::y(), Vector3::z()]).unwrap();
        assert_eq!(high_dim_coherence_necessary(&mub, None).unwrap().decision, Decision::HasResource);
    }

    #[test]
    fn exactness_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..300 {
            let flat = coplanar(&mut rng, 3);
            assert_eq!(qubit_imaginarity_test(&flat, None).unwrap().decision, Decision::ResourceFree);
            let cert = construct_real_basis(&flat).unwrap();
            assert!(cert.residual <= CERTIFICATE_TOL);
            let generic: Vec<_> = (0..3).map(|_| random_ball_point(&mut rng)).collect();
            let ms = MultiState::from_bloch_vectors(&generic).unwrap();
            assert_eq!(qubit_imaginarity_test(&ms, None).unwrap().decision, Decision::HasResource);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn certificate_survives_y_rotation(seed in any::<u64>(), n in 1usize..7, angle in -3.2f64..3.2) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ms = coplanar(&mut rng, n);
            let cert = construct_real_basis(&ms).unwrap();
            prop_assert!(cert.residual <= CERTIFICATE_TOL);
            let spin = qstate::so3_to_su2(&Rotation3::about_axis(&Vector3::y(), angle));
            let moved = cert.apply(&ms).conjugated_by(&spin.to_dmatrix());
            prop_assert!(moved.iter().all(|s| s.max_imaginary() <= CERTIFICATE_TOL));
        }

        #[test]
        fn witnesses_are_sound(seed in any::<u64>(), n in 3usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let vs: Vec<_> = (0..n).map(|k| {
                if k % 2 == 0 { random_unit_vector(&mut rng) } else { random_ball_point(&mut rng) }
            }).collect();
            let ms = MultiState::from_bloch_vectors(&vs).unwrap();
            let exact_im = qubit_imaginarity_test(&ms, None).unwrap();
            let exact_coh = qubit_coherence_test(&ms, None).unwrap();
            if third_order_witness(&ms, 0, 1, 2, WITNESS_TOL).unwrap().has_resource() {
                prop_assert!(exact_im.has_resource());
            }
            if permutation_equality_witness(&ms, &[0, 1, 2], &[0, 2, 1], WITNESS_TOL).unwrap().has_resource() {
                prop_assert!(exact_coh.has_resource());
            }
        }
    }
}
