//! Coherence from the Gram rank and from reordering the factors of a Bargmann invariant.

use multistate::criteria::{self, fixtures, WITNESS_TOL};

fn main() -> multistate::Result<()> {
    println!("{:>5} {:>14} {:>14} {:>14}", "w", "gap", "closed form", "decision");
    for k in 0..=10 {
        let w = k as f64 / 10.0;
        let xi = fixtures::nonconvexity_coherence(w);
        let gap = fixtures::weak_commutativity_gap(&xi);
        let verdict = criteria::permutation_equality_witness(&xi, &[0, 0, 1, 1], &[0, 2, 1, 3], WITNESS_TOL)?;
        println!(
            "{w:>5.1} {:>14.3e} {:>14.3e} {:>14?}",
            gap.re,
            fixtures::weak_commutativity_closed_form(w),
            verdict.decision
        );
    }

    let xi = fixtures::nonconvexity_coherence(0.5);
    let rank = criteria::qubit_coherence_test(&xi, None)?;
    println!("rank test at w = 0.5: {:?}, largest commutator norm {:.4}", rank.decision, criteria::max_commutator(&xi));

    let qutrits = fixtures::prop_vi2_counterexample();
    let necessary = criteria::high_dim_coherence_necessary(&qutrits, None)?;
    println!("qutrit pair: {:?} from {}", necessary.decision, necessary.source);
    Ok(())
}
