//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::process::Command;
use std::time::Instant;

use nalgebra::Vector3;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use multistate::bargmann::{self, QubitProductState};
use multistate::criteria::{self, fixtures, Decision};
use multistate::discrimination;
use multistate::qstate::{self, random_ball_point, random_state_with, random_unit_vector, MultiState, PurityMode};
use multistate::{quantifiers, reconstruct};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn random_vectors(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vector3<f64>> {
    (0..n).map(|_| if rng.random::<bool>() { random_unit_vector(rng) } else { random_ball_point(rng) }).collect()
}

fn random_multistate(rng: &mut ChaCha8Rng, n: usize) -> MultiState {
    MultiState::from_bloch_vectors(&random_vectors(rng, n)).unwrap()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn qutrit_fixture() -> Outcome {
    let start = Instant::now();
    let ms = fixtures::qutrit_lambda();
    let mut err: f64 = (bargmann::invariant(&ms, &[0, 1, 2]).unwrap().value - c(3.0, 1.0) / 27.0).norm();
    for i in 0..3 {
        for j in 0..3 {
            let expected = if i == j { 5.0 / 9.0 } else { 1.0 / 3.0 };
            err = err.max((bargmann::overlap(ms.get(i).unwrap(), ms.get(j).unwrap()).unwrap() - expected).abs());
        }
    }
    let rank = bargmann::gram(&ms, None).numerical_rank;
    let secs = start.elapsed().as_secs_f64();
    outcome(err <= 1e-12 && rank == 3 && secs < 1.0, format!("max error {err:.2e}, rank {rank}, {secs:.3} s"))
}

fn qubit_fixtures() -> Outcome {
    let (rho, sigma) = fixtures::qubit_rho_sigma();
    let cases = [
        (&rho, vec![0, 1, 2], c(1253.0, 36.0) / 2520.0),
        (&sigma, vec![0, 1, 2], c(1192.0, -200.0) / 6720.0),
        (&rho, vec![0, 0, 1, 2], c(3199.0, 108.0) / 7560.0),
        // 4² · 5 · 6 · 7 · 8 = 26880
        (&sigma, vec![0, 0, 1, 2], c(3760.0, -800.0) / 26880.0),
    ];
    let errs: Vec<f64> =
        cases.iter().map(|(ms, seq, expected)| (bargmann::invariant(ms, seq).unwrap().value - expected).norm()).collect();
    let worst = errs.iter().copied().fold(0.0, f64::max);
    outcome(worst <= 1e-12, format!("max error {worst:.2e} over 4 invariants"))
}

fn dim4_counterexample() -> Outcome {
    let (lambda, ms) = fixtures::dim4_counterexample();
    let third = bargmann::invariant(&ms, &[0, 1, 2]).unwrap().im().abs();
    let fourth = bargmann::invariant(&ms, &[0, 0, 1, 2]).unwrap().im().abs();
    outcome(
        third <= 1e-12 && fourth > 1e-4,
        format!("lambda {lambda:.15}, |Im Tr(123)| {third:.2e}, |Im Tr(1123)| {fourth:.3e}"),
    )
}

fn nonconvexity() -> Outcome {
    let free = |p: f64| {
        criteria::qubit_imaginarity_test(&fixtures::nonconvexity_imaginarity(p), None).unwrap().decision
            == Decision::ResourceFree
    };
    let endpoints = free(0.0) && free(1.0);
    let mut det_err: f64 = 0.0;
    let mut interior = true;
    for k in 1..=9 {
        let p = k as f64 / 10.0;
        det_err = det_err.max((fixtures::nonconvexity_determinant(p).abs() - p * (1.0 - p) / 2.0).abs());
        interior &= criteria::qubit_imaginarity_test(&fixtures::nonconvexity_imaginarity(p), None).unwrap().has_resource();
    }
    outcome(
        endpoints && interior && det_err <= 1e-12,
        format!("endpoints free {endpoints}, interior flagged {interior}, det error {det_err:.2e}"),
    )
}

fn coherence_witness() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut at = 0.0;
    for k in 1..=9 {
        let w = k as f64 / 10.0;
        let gap = fixtures::weak_commutativity_gap(&fixtures::nonconvexity_coherence(w));
        let expected = (w * (1.0 - w)).powi(2) / 36.0;
        let e = (gap - c(expected, 0.0)).norm();
        if e > worst {
            worst = e;
            at = w;
        }
    }
    outcome(worst <= 1e-12, format!("max |gap - w^2(1-w)^2/36| = {worst:.3e} at w = {at}"))
}

fn product_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut recursion: f64 = 0.0;
    for _ in 0..1000 {
        let n = rng.random_range(1..=10);
        let ms = random_multistate(&mut rng, n);
        let seq: Vec<usize> = (0..n).collect();
        let direct = bargmann::invariant(&ms, &seq).unwrap().value;
        let rec = bargmann::qubit_invariant_recursive(&ms, &seq).unwrap().value;
        recursion = recursion.max((direct - rec).norm());
    }
    let mut explicit: f64 = 0.0;
    for n in 3..=5 {
        for _ in 0..500 {
            let v = random_vectors(&mut rng, n);
            let (a0, b0) = reconstruct::a0_b0_explicit(&v).unwrap();
            let p = QubitProductState::from_vectors(&v);
            explicit = explicit.max((a0 - p.a0).abs()).max((b0 - p.b0).abs());
        }
    }
    let mut reflected: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.random_range(3..=8);
        let ms = random_multistate(&mut rng, n);
        let seq: Vec<usize> = (0..n).collect();
        let a = bargmann::invariant(&ms, &seq).unwrap().value;
        let b = bargmann::invariant(&ms.conjugate(), &seq).unwrap().value;
        reflected = reflected.max((a.re - b.re).abs()).max((a.im + b.im).abs());
    }
    let ok = recursion <= 1e-11 && explicit <= 1e-11 && reflected <= 1e-11;
    outcome(ok, format!("recursion {recursion:.2e}, explicit a0/b0 {explicit:.2e}, reflected copy {reflected:.2e}"))
}

fn quantifier_bounds() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut violations = 0;
    let (cap_im, cap_c) = (1.0 / 3f64.sqrt(), (2.0f64 / 3.0).sqrt());
    for _ in 0..1000 {
        let n = rng.random_range(1..=6);
        let ms = random_multistate(&mut rng, n);
        let im = quantifiers::im_r1(&ms).unwrap();
        let co = quantifiers::c_r1(&ms).unwrap();
        for q in [&im, &co] {
            if q.value < q.lower_bound - 1e-6 || q.value > q.upper_bound + 1e-6 {
                violations += 1;
            }
        }
        if im.value > cap_im + 1e-6 || co.value > cap_c + 1e-6 {
            violations += 1;
        }
    }
    let pauli = MultiState::from_bloch_vectors(&[Vector3::x(), Vector3::y(), Vector3::z()]).unwrap();
    let im = quantifiers::im_r1(&pauli).unwrap();
    let co = quantifiers::c_r1(&pauli).unwrap();
    let pauli_ok = (im.value - 1.0 / 3.0).abs() <= 1e-6
        && (co.value - 2.0 / 3.0).abs() <= 1e-6
        && (im.lower_bound - im.value).abs() <= 1e-6
        && (co.lower_bound - co.value).abs() <= 1e-6;
    let secs = start.elapsed().as_secs_f64();
    outcome(
        violations == 0 && pauli_ok && secs < 60.0,
        format!(
            "{violations} violations on 1000 multi-states, Pauli Im_R1 {:.9} C_R1 {:.9}, {secs:.1} s",
            im.value, co.value
        ),
    )
}

fn rank_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut errors = 0;
    let mut worst_residual: f64 = 0.0;
    for _ in 0..1000 {
        let normal = random_unit_vector(&mut rng);
        let v: Vec<Vector3<f64>> = (0..3)
            .map(|_| {
                let p = random_ball_point(&mut rng);
                p - normal * normal.dot(&p)
            })
            .collect();
        let ms = MultiState::from_bloch_vectors(&v).unwrap();
        if criteria::qubit_imaginarity_test(&ms, None).unwrap().decision != Decision::ResourceFree {
            errors += 1;
            continue;
        }
        worst_residual = worst_residual.max(criteria::construct_real_basis(&ms).unwrap().residual);
    }
    let mut generic = 0;
    while generic < 1000 {
        let v: Vec<Vector3<f64>> = (0..3).map(|_| random_unit_vector(&mut rng)).collect();
        // Gram singular values scale like det², so volumes near the rank tolerance are not generic
        if bargmann::triple_product(&v[0], &v[1], &v[2]).abs() < 1e-3 {
            continue;
        }
        generic += 1;
        let ms = MultiState::from_bloch_vectors(&v).unwrap();
        if !criteria::qubit_imaginarity_test(&ms, None).unwrap().has_resource() {
            errors += 1;
        }
    }
    outcome(errors == 0 && worst_residual <= 1e-9, format!("{errors} misclassified, worst certificate residual {worst_residual:.2e}"))
}

fn chirality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let v = random_vectors(&mut rng, 3);
        let ms = MultiState::from_bloch_vectors(&v).unwrap();
        let im = bargmann::invariant(&ms, &[0, 1, 2]).unwrap().im();
        worst = worst.max((im - bargmann::triple_product(&v[0], &v[1], &v[2]) / 4.0).abs());
    }
    outcome(worst <= 1e-12, format!("max error {worst:.2e}"))
}

fn discrimination_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let states: Vec<_> = (0..200)
        .map(|k| random_state_with(&mut rng, 2, if k % 2 == 0 { PurityMode::Pure } else { PurityMode::Mixed }))
        .collect();
    let ceilings: Vec<f64> = states.iter().map(|s| discrimination::advantage_ceiling(s).unwrap()).collect();
    let mut violations = 0;
    let mut best_slack = f64::INFINITY;
    for _ in 0..200 {
        let (t, m) = discrimination::random_task(&mut rng);
        for (rho, ceiling) in states.iter().zip(&ceilings) {
            let ratio = discrimination::advantage_ratio(rho, &t, &m).unwrap();
            best_slack = best_slack.min(ceiling - ratio);
            if ratio > ceiling + 1e-6 {
                violations += 1;
            }
        }
    }
    let (t, m) = discrimination::y_task();
    let plus_y = qstate::qubit_state(&Vector3::y()).unwrap();
    let y_ratio = discrimination::advantage_ratio(&plus_y, &t, &m).unwrap();
    outcome(
        violations == 0 && y_ratio > 1.05,
        format!("{violations} violations in 40000 pairs (min slack {best_slack:.2e}), y-task ratio {y_ratio:.9}"),
    )
}

fn reproduce_all() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_multistate");
    let all = Command::new(bin).args(["reproduce", "--all"]).output().unwrap();
    let mut ok = all.status.code() == Some(0);
    for name in criteria::FIXTURE_NAMES {
        let one = Command::new(bin).args(["reproduce", "--fixture", name]).output().unwrap();
        let text = String::from_utf8_lossy(&one.stdout);
        ok &= one.status.code() == Some(0) && text.contains("computed") && text.contains("expected") && text.contains('(');
    }
    outcome(ok, format!("reproduce --all exit {:?}", all.status.code()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("qutrit fixture", qutrit_fixture),
        ("qubit rho/sigma fixtures", qubit_fixtures),
        ("dim-4 counterexample", dim4_counterexample),
        ("non-convexity of imaginarity-free multi-states", nonconvexity),
        ("weak-commutativity coherence witness", coherence_witness),
        ("product recursion and explicit invariants", product_suite),
        ("quantifier bounds", quantifier_bounds),
        ("exactness of rank criteria", rank_exactness),
        ("chirality identity", chirality),
        ("discrimination soundness", discrimination_soundness),
        ("reproduce --all", reproduce_all),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.passed {
            failed += 1;
        }
        println!("{} criterion {:>2} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, k + 1, o.detail);
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
