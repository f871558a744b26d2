//! Recovering Tr(ρ1⋯ρn) up to conjugation from the pairwise overlaps of qubit states.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use multistate::bargmann;
use multistate::qstate::random_ball_point;
use multistate::reconstruct::{self, OverlapTable};
use multistate::MultiState;

fn main() -> multistate::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in [3, 4, 5, 7] {
        let v: Vec<_> = (0..n).map(|_| random_ball_point(&mut rng)).collect();
        let ms = MultiState::from_bloch_vectors(&v)?;
        let seq: Vec<usize> = (0..n).collect();
        let truth = bargmann::invariant(&ms, &seq)?.value;
        let table = OverlapTable::from_multistate(&ms)?;
        let [plus, minus] = reconstruct::reconstruct_from_overlaps(&table)?;
        println!("n = {n}: true {truth:.12}, candidates {plus:.12} / {minus:.12}");

        let cert = reconstruct::quadratic_certificate(&ms, &seq)?;
        println!("  Δ² − 2PΔ + Q = 0 with P = {:.12}, Q = {:.12}, residual {:.1e}", cert.p, cert.q, cert.residual);
        if (3..=5).contains(&n) {
            let (a0, b0) = reconstruct::a0_b0_explicit(&v)?;
            println!("  closed form a0 = {a0:.12}, b0 = {b0:.12}");
        }
    }
    Ok(())
}
