//! Bargmann invariants, the qubit product recursion and Gram matrices.

use nalgebra::Vector3;

use multistate::bargmann::{self, QubitProductState};
use multistate::criteria::fixtures;
use multistate::MultiState;

fn main() -> multistate::Result<()> {
    let ms = MultiState::from_bloch_vectors(&[
        Vector3::new(0.8, 0.0, 0.1),
        Vector3::new(0.0, 0.6, 0.3),
        Vector3::new(-0.2, 0.1, 0.9),
    ])?;
    let delta = bargmann::invariant(&ms, &[0, 1, 2])?;
    let reversed = bargmann::invariant(&ms, &[2, 1, 0])?;
    println!("Tr(ρ1ρ2ρ3) = {:.12}, reversed order gives the conjugate {:.12}", delta.value, reversed.value);

    let v = ms.bloch_vectors()?;
    println!("Im Δ = {:.12}, det/4 = {:.12}", delta.im(), bargmann::triple_product(&v[0], &v[1], &v[2]) / 4.0);

    let p = QubitProductState::from_vectors(&v);
    println!("recursion: a0 = {:.12}, b0 = {:.12}, trace {:.12}", p.a0, p.b0, p.trace());

    let g = bargmann::gram(&ms, None);
    println!("Gram matrix\n{}singular values {:?}, rank {}", g.entries, g.singular_values, g.numerical_rank);

    let qutrit = fixtures::qutrit_lambda();
    println!("qutrit overlaps\n{}", bargmann::overlap_matrix(&qutrit));
    println!("qutrit Tr(ρ1ρ2ρ3) = {:.12}", bargmann::invariant(&qutrit, &[0, 1, 2])?.value);
    Ok(())
}
