//! Named multi-states with known closed-form invariants, and the checks that reproduce them.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::Vector3;
use num_complex::Complex64;

use super::{
    high_dim_coherence_necessary, invariant_witness, permutation_equality_witness, qubit_coherence_test,
    qubit_imaginarity_test, third_order_witness, Decision, WITNESS_TOL,
};
use crate::bargmann::{self, overlap};
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, I};
use crate::qstate::{self, gell_mann_interleaved, DensityMatrix, MultiState};

pub const FIXTURE_NAMES: [&str; 6] = [
    "qutrit-lambda",
    "qubit-rho-sigma",
    "dim4-counterexample",
    "nonconvexity-imaginarity",
    "nonconvexity-coherence",
    "prop-vi2-counterexample",
];

#[derive(Debug, Clone, PartialEq)]
pub enum Expected {
    Value(Complex64),
    AtMost(f64),
    Above(f64),
}

/// One computed-vs-expected row.
#[derive(Debug, Clone, PartialEq)]
pub struct FixtureCheck {
    pub quantity: String,
    pub computed: Complex64,
    pub expected: Expected,
    pub tolerance: f64,
    pub provenance: String,
}

impl FixtureCheck {
    fn value(quantity: impl Into<String>, computed: Complex64, expected: Complex64, provenance: &str) -> Self {
        Self {
            quantity: quantity.into(),
            computed,
            expected: Expected::Value(expected),
            tolerance: 1e-12,
            provenance: provenance.to_string(),
        }
    }

    fn real(quantity: impl Into<String>, computed: f64, expected: f64, provenance: &str) -> Self {
        Self::value(quantity, c(computed, 0.0), c(expected, 0.0), provenance)
    }

    fn flag(quantity: impl Into<String>, holds: bool, provenance: &str) -> Self {
        Self::real(quantity, if holds { 1.0 } else { 0.0 }, 1.0, provenance)
    }

    /// Distance from the expected value, or by how much a bound is violated (0 when met).
    pub fn abs_error(&self) -> f64 {
        match self.expected {
            Expected::Value(v) => (self.computed - v).norm(),
            Expected::AtMost(b) => (self.computed.norm() - b).max(0.0),
            Expected::Above(b) => (b - self.computed.norm()).max(0.0),
        }
    }

    pub fn passed(&self) -> bool {
        match self.expected {
            Expected::Value(_) => self.abs_error() <= self.tolerance,
            Expected::AtMost(b) => self.computed.norm() <= b,
            Expected::Above(b) => self.computed.norm() > b,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub summary: &'static str,
    pub multistate: MultiState,
    pub checks: Vec<FixtureCheck>,
}

impl Fixture {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(FixtureCheck::passed)
    }
}

/// Builds a named fixture together with its expected quantities.
pub fn named_fixture(name: &str) -> Result<Fixture> {
    match name {
        "qutrit-lambda" => Ok(qutrit_lambda_fixture()),
        "qubit-rho-sigma" => Ok(qubit_rho_sigma_fixture()),
        "dim4-counterexample" => Ok(dim4_fixture()),
        "nonconvexity-imaginarity" => Ok(nonconvexity_imaginarity_fixture()),
        "nonconvexity-coherence" => Ok(nonconvexity_coherence_fixture()),
        "prop-vi2-counterexample" => Ok(prop_vi2_fixture()),
        other => Err(Error::UnknownFixture(other.to_string())),
    }
}

fn qutrit_from_lambda(k: usize, weight: f64) -> DensityMatrix {
    let lambda = gell_mann_interleaved(3);
    DensityMatrix::new((CMatrix::identity(3, 3) + lambda[k].scale(weight)).scale(1.0 / 3.0))
        .expect("fixture state is valid")
}

/// `ρ = (𝟙 + λ₁)/3, (𝟙 + λ₄)/3, (𝟙 + λ₇)/3`.
pub fn qutrit_lambda() -> MultiState {
    MultiState::new(vec![qutrit_from_lambda(0, 1.0), qutrit_from_lambda(3, 1.0), qutrit_from_lambda(6, 1.0)])
        .expect("fixture is consistent")
}

fn qubit(a: f64, off: Complex64, b: f64) -> DensityMatrix {
    DensityMatrix::new(CMatrix::from_row_slice(2, 2, &[c(a, 0.0), off, off.conj(), c(b, 0.0)]))
        .expect("fixture state is valid")
}

/// The two qubit triples `(ρ₁, ρ₂, ρ₃)` and `(σ₁, σ₂, σ₃)` used for the direct-sum construction.
pub fn qubit_rho_sigma() -> (MultiState, MultiState) {
    let rho = vec![
        qubit(1.0 / 3.0, I / 3.0, 2.0 / 3.0),
        qubit(1.0 / 4.0, I / 5.0, 3.0 / 4.0),
        qubit(1.0 / 6.0, c(1.0 / 7.0, 0.0), 5.0 / 6.0),
    ];
    let sigma = vec![
        qubit(3.0 / 4.0, I / 4.0, 1.0 / 4.0),
        qubit(4.0 / 5.0, c(1.0 / 8.0, 0.0), 1.0 / 5.0),
        qubit(1.0 / 6.0, I / 7.0, 5.0 / 6.0),
    ];
    (MultiState::new(rho).unwrap(), MultiState::new(sigma).unwrap())
}

const RHO3: (f64, f64, f64) = (1253.0, 36.0, 2520.0);
const SIGMA3: (f64, f64, f64) = (1192.0, -200.0, 6720.0);
const RHO4: (f64, f64, f64) = (3199.0, 108.0, 7560.0);
const SIGMA4: (f64, f64, f64) = (3760.0, -800.0, 26880.0);

fn ratio((re, im, den): (f64, f64, f64)) -> Complex64 {
    c(re / den, im / den)
}

/// Root in (0, 1) of `λ³·Im Tr(ρ₁ρ₂ρ₃) + (1 − λ)³·Im Tr(σ₁σ₂σ₃) = 0`, by bisection.
pub fn dim4_lambda() -> f64 {
    let f = |l: f64| l.powi(3) * ratio(RHO3).im + (1.0 - l).powi(3) * ratio(SIGMA3).im;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `φᵢ = λρᵢ ⊕ (1 − λ)σᵢ` with `λ` from [`dim4_lambda`].
pub fn dim4_counterexample() -> (f64, MultiState) {
    let lambda = dim4_lambda();
    let (rho, sigma) = qubit_rho_sigma();
    let phi = rho
        .iter()
        .zip(sigma.iter())
        .map(|(r, s)| qstate::direct_sum(r, s, lambda).expect("weight in range"))
        .collect();
    (lambda, MultiState::new(phi).unwrap())
}

fn mixed_bloch(p: f64, r: &[Vector3<f64>; 3], s: &[Vector3<f64>; 3]) -> [Vector3<f64>; 3] {
    std::array::from_fn(|i| r[i] * p + s[i] * (1.0 - p))
}

fn nonconvexity_endpoints() -> ([Vector3<f64>; 3], [Vector3<f64>; 3]) {
    let h = FRAC_1_SQRT_2;
    let r = [Vector3::x(), Vector3::y(), Vector3::new(h, h, 0.0)];
    let s = [Vector3::new(0.0, h, h), Vector3::y(), Vector3::z()];
    (r, s)
}

/// `ξ = pϱ + (1 − p)ς` for two coplanar qubit triples whose mixture leaves every plane.
pub fn nonconvexity_imaginarity(p: f64) -> MultiState {
    let (r, s) = nonconvexity_endpoints();
    MultiState::from_bloch_vectors(&mixed_bloch(p, &r, &s)).expect("mixture stays in the ball")
}

/// Determinant of the matrix whose rows are the mixed Bloch vectors.
pub fn nonconvexity_determinant(p: f64) -> f64 {
    let (r, s) = nonconvexity_endpoints();
    let v = mixed_bloch(p, &r, &s);
    bargmann::triple_product(&v[0], &v[1], &v[2])
}

/// `ξ = ωϱ + (1 − ω)ς` with `ϱ` diagonal and `ς` diagonal in the `|±⟩` basis.
pub fn nonconvexity_coherence(omega: f64) -> MultiState {
    let rho = [Vector3::z(), Vector3::new(0.0, 0.0, -1.0 / 3.0)];
    let sigma = [Vector3::x(), Vector3::new(-0.5, 0.0, 0.0)];
    let mixed: Vec<_> = rho.iter().zip(&sigma).map(|(r, s)| r * omega + s * (1.0 - omega)).collect();
    MultiState::from_bloch_vectors(&mixed).expect("mixture stays in the ball")
}

/// `Tr(ξ₁ξ₁ξ₂ξ₂) − Tr(ξ₁ξ₂ξ₁ξ₂)`.
pub fn weak_commutativity_gap(ms: &MultiState) -> Complex64 {
    bargmann::invariant(ms, &[0, 0, 1, 1]).unwrap().value - bargmann::invariant(ms, &[0, 1, 0, 1]).unwrap().value
}

/// Closed form of [`weak_commutativity_gap`] on [`nonconvexity_coherence`]: `¼|a × b|²` for
/// the two mixed Bloch vectors, which is `ω²(1 − ω)²/144`.
pub fn weak_commutativity_closed_form(omega: f64) -> f64 {
    (omega * (1.0 - omega)).powi(2) / 144.0
}

/// The qutrit pair `(𝟙 + ½λ₁)/3, (𝟙 + ½λ₃)/3`.
pub fn prop_vi2_counterexample() -> MultiState {
    MultiState::new(vec![qutrit_from_lambda(0, 0.5), qutrit_from_lambda(2, 0.5)]).unwrap()
}

fn grid_points() -> impl Iterator<Item = f64> {
    (1..=9).map(|k| k as f64 / 10.0)
}

fn qutrit_lambda_fixture() -> Fixture {
    let ms = qutrit_lambda();
    let src = "qutrit Gell-Mann triple (1 + λ1, 1 + λ4, 1 + λ7)/3";
    let mut checks = vec![FixtureCheck::value(
        "Tr(ρ1ρ2ρ3)",
        bargmann::invariant(&ms, &[0, 1, 2]).unwrap().value,
        c(3.0, 1.0) / 27.0,
        "third-order invariant (3 + Tr λ1λ4λ7)/27 with Tr λ1λ4λ7 = i",
    )];
    let s = ms.states();
    for i in 0..3 {
        checks.push(FixtureCheck::real(format!("Tr(ρ{}²)", i + 1), overlap(&s[i], &s[i]).unwrap(), 5.0 / 9.0, src));
        for j in i + 1..3 {
            checks.push(FixtureCheck::real(
                format!("Tr(ρ{}ρ{})", i + 1, j + 1),
                overlap(&s[i], &s[j]).unwrap(),
                1.0 / 3.0,
                src,
            ));
        }
    }
    let g = bargmann::gram(&ms, None);
    checks.push(FixtureCheck::real("Gram rank", g.numerical_rank as f64, 3.0, "rank 3 below the real bound 5"));
    let dev = (&g.entries - nalgebra::DMatrix::<f64>::identity(3, 3).scale(2.0 / 3.0)).abs().max();
    checks.push(FixtureCheck::real("max |G − (2/3)𝟙|", dev, 0.0, "Gram entries d·Tr(ρiρj) − 1"));
    let gc = bargmann::gram_conventional(&ms, None);
    checks.push(FixtureCheck::real("conventional Gram rank", gc.numerical_rank as f64, 3.0, src));
    let w = third_order_witness(&ms, 0, 1, 2, WITNESS_TOL).unwrap();
    checks.push(FixtureCheck::flag("third-order witness detects imaginarity", w.has_resource(), src));
    let p = permutation_equality_witness(&ms, &[0, 1, 2], &[0, 2, 1], WITNESS_TOL).unwrap();
    let gap = match p.evidence {
        super::Evidence::Witness { value, .. } => value,
        _ => unreachable!("permutation witness reports a value"),
    };
    checks.push(FixtureCheck::value("Tr(ρ1ρ2ρ3) − Tr(ρ1ρ3ρ2)", gap, c(0.0, 2.0 / 27.0), "Δ minus its conjugate"));
    Fixture { name: "qutrit-lambda", summary: "qutrit triple with imaginarity but Gram rank 3", multistate: ms, checks }
}

fn qubit_rho_sigma_fixture() -> Fixture {
    let (rho, sigma) = qubit_rho_sigma();
    let src = "explicit 2×2 triples ρ and σ";
    let mut checks = vec![
        FixtureCheck::value("Tr[ρ1ρ2ρ3]", bargmann::invariant(&rho, &[0, 1, 2]).unwrap().value, ratio(RHO3), "(1253 + 36i)/(3·4·5·6·7)"),
        FixtureCheck::value("Tr[σ1σ2σ3]", bargmann::invariant(&sigma, &[0, 1, 2]).unwrap().value, ratio(SIGMA3), "(1192 − 200i)/(4·5·6·7·8)"),
        FixtureCheck::value("Tr[ρ1²ρ2ρ3]", bargmann::invariant(&rho, &[0, 0, 1, 2]).unwrap().value, ratio(RHO4), "(3199 + 108i)/(3²·4·5·6·7)"),
        FixtureCheck::value("Tr[σ1²σ2σ3]", bargmann::invariant(&sigma, &[0, 0, 1, 2]).unwrap().value, ratio(SIGMA4), "(3760 − 800i)/(4²·5·6·7·8)"),
    ];
    for (name, ms) in [("ρ", &rho), ("σ", &sigma)] {
        let r = ms.bloch_vectors().unwrap();
        checks.push(FixtureCheck::real(
            format!("Im Tr[{name}1{name}2{name}3] − det/4"),
            bargmann::invariant(ms, &[0, 1, 2]).unwrap().im() - bargmann::triple_product(&r[0], &r[1], &r[2]) / 4.0,
            0.0,
            "chirality identity Im Tr = det(r1, r2, r3)/4",
        ));
        checks.push(FixtureCheck::flag(
            format!("{name} has imaginarity"),
            qubit_imaginarity_test(ms, None).unwrap().has_resource(),
            src,
        ));
    }
    Fixture { name: "qubit-rho-sigma", summary: "two qubit triples with imaginary third-order invariants", multistate: rho, checks }
}

fn dim4_fixture() -> Fixture {
    let (lambda, phi) = dim4_counterexample();
    let src = "φi = λρi ⊕ (1 − λ)σi with λ cancelling Im Tr(φ1φ2φ3)";
    let cubic = lambda.powi(3) / (1.0 - lambda).powi(3);
    let t3 = bargmann::invariant(&phi, &[0, 1, 2]).unwrap().value;
    let t4 = bargmann::invariant(&phi, &[0, 0, 1, 2]).unwrap().value;
    let t4_expected = ratio(RHO4) * lambda.powi(4) + ratio(SIGMA4) * (1.0 - lambda).powi(4);
    let checks = vec![
        FixtureCheck::real("λ³/(1 − λ)³", cubic, 25.0 / 12.0, "ratio of the imaginary parts (200/6720)/(36/2520)"),
        FixtureCheck { quantity: "|Im Tr(φ1φ2φ3)|".into(), computed: c(t3.im.abs(), 0.0), expected: Expected::AtMost(1e-12), tolerance: 1e-12, provenance: src.into() },
        FixtureCheck { quantity: "|Im Tr(φ1²φ2φ3)|".into(), computed: c(t4.im.abs(), 0.0), expected: Expected::Above(1e-4), tolerance: 1e-4, provenance: src.into() },
        FixtureCheck::value("Tr(φ1²φ2φ3)", t4, t4_expected, "λ⁴Tr[ρ1²ρ2ρ3] + (1 − λ)⁴Tr[σ1²σ2σ3]"),
        FixtureCheck::flag(
            "third-order witness inconclusive on (1,2,3)",
            third_order_witness(&phi, 0, 1, 2, WITNESS_TOL).unwrap().decision == Decision::InconclusiveNecessaryOnly,
            src,
        ),
        FixtureCheck::flag(
            "fourth-order witness detects imaginarity on (1,1,2,3)",
            invariant_witness(&phi, &[0, 0, 1, 2], WITNESS_TOL).unwrap().has_resource(),
            src,
        ),
    ];
    Fixture { name: "dim4-counterexample", summary: "d = 4 triple with real Tr(φ1φ2φ3) that still has imaginarity", multistate: phi, checks }
}

fn nonconvexity_imaginarity_fixture() -> Fixture {
    let src = "mixture of two coplanar qubit triples";
    let mut checks = Vec::new();
    for p in [0.0, 1.0] {
        let v = qubit_imaginarity_test(&nonconvexity_imaginarity(p), None).unwrap();
        checks.push(FixtureCheck::flag(format!("p = {p}: imaginarity-free"), v.decision == Decision::ResourceFree, src));
    }
    for p in grid_points() {
        checks.push(FixtureCheck::real(
            format!("p = {p}: det of mixed Bloch matrix"),
            nonconvexity_determinant(p),
            p * (1.0 - p) / 2.0,
            "det = p(1 − p)/2",
        ));
        let v = qubit_imaginarity_test(&nonconvexity_imaginarity(p), None).unwrap();
        checks.push(FixtureCheck::flag(format!("p = {p}: has imaginarity"), v.has_resource(), src));
    }
    Fixture {
        name: "nonconvexity-imaginarity",
        summary: "imaginarity-free endpoints whose open segment has imaginarity",
        multistate: nonconvexity_imaginarity(0.5),
        checks,
    }
}

fn nonconvexity_coherence_fixture() -> Fixture {
    let src = "ξ = ωϱ + (1 − ω)ς with ϱ diagonal and ς diagonal in the |±⟩ basis";
    let mut checks = Vec::new();
    for omega in [0.0, 1.0] {
        let v = qubit_coherence_test(&nonconvexity_coherence(omega), None).unwrap();
        checks.push(FixtureCheck::flag(format!("ω = {omega}: incoherent"), v.decision == Decision::ResourceFree, src));
    }
    for omega in grid_points() {
        let ms = nonconvexity_coherence(omega);
        checks.push(FixtureCheck::value(
            format!("ω = {omega}: Tr(ξ1ξ1ξ2ξ2) − Tr(ξ1ξ2ξ1ξ2)"),
            weak_commutativity_gap(&ms),
            c(weak_commutativity_closed_form(omega), 0.0),
            "¼|a × b|² = ω²(1 − ω)²/144 for the mixed Bloch vectors a, b",
        ));
        let v = qubit_coherence_test(&ms, None).unwrap();
        checks.push(FixtureCheck::flag(format!("ω = {omega}: has coherence"), v.has_resource(), src));
    }
    Fixture {
        name: "nonconvexity-coherence",
        summary: "incoherent endpoints whose mixtures violate weak commutativity",
        multistate: nonconvexity_coherence(0.5),
        checks,
    }
}

fn prop_vi2_fixture() -> Fixture {
    let ms = prop_vi2_counterexample();
    let src = "qutrit pair (1 + ½λ1)/3, (1 + ½λ3)/3";
    let s = ms.states();
    let g = bargmann::gram(&ms, None);
    let gc = bargmann::gram_conventional(&ms, None);
    let v = high_dim_coherence_necessary(&ms, None).unwrap();
    let checks = vec![
        FixtureCheck::real("Gram rank", g.numerical_rank as f64, 2.0, "rank 2 = d − 1"),
        FixtureCheck::real("conventional Gram rank", gc.numerical_rank as f64, 2.0, src),
        FixtureCheck::real(
            "‖[ρ1, ρ2]‖_F",
            linalg::commutator_norm(s[0].matrix(), s[1].matrix()),
            2f64.sqrt() / 18.0,
            "[λ1, λ3] = −2iσy on the first two levels",
        ),
        FixtureCheck::flag("rank test inconclusive", v.decision == Decision::InconclusiveNecessaryOnly, src),
        FixtureCheck::real("Tr(ρ1ρ2)", overlap(&s[0], &s[1]).unwrap(), 1.0 / 3.0, "Tr λ1λ3 = 0"),
    ];
    Fixture { name: "prop-vi2-counterexample", summary: "coherent qutrit pair within the incoherent rank bound", multistate: ms, checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn every_fixture_passes() {
        for name in FIXTURE_NAMES {
            let f = named_fixture(name).unwrap();
            for check in &f.checks {
                assert!(check.passed(), "{name}: {} computed {} expected {:?}", check.quantity, check.computed, check.expected);
            }
        }
        assert!(matches!(named_fixture("nope"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn dim4_lambda_oracle() {
        let l = dim4_lambda();
        assert_abs_diff_eq!(l, 0.5609, epsilon = 1e-4);
        // independent root: λ/(1 − λ) = (25/12)^(1/3)
        let k = (25.0f64 / 12.0).cbrt();
        assert_abs_diff_eq!(l, k / (1.0 + k), epsilon = 1e-14);
    }

    #[test]
    fn nonconvexity_determinant_matches_closed_form() {
        assert_abs_diff_eq!(nonconvexity_determinant(0.5), 0.125, epsilon = 1e-15);
        assert_abs_diff_eq!(nonconvexity_determinant(0.0), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn weak_commutativity_matches_cross_product() {
        for omega in [0.1, 0.35, 0.5, 0.8] {
            let ms = nonconvexity_coherence(omega);
            let r = ms.bloch_vectors().unwrap();
            let oracle = r[0].cross(&r[1]).norm_squared() / 4.0;
            assert_abs_diff_eq!(weak_commutativity_gap(&ms).re, oracle, epsilon = 1e-15);
            assert_abs_diff_eq!(oracle, weak_commutativity_closed_form(omega), epsilon = 1e-15);
        }
    }
}
