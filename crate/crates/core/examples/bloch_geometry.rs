//! Bloch vectors, generalized Gell-Mann coordinates and the SU(2) → SO(3) double cover.

use nalgebra::Vector3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use multistate::qstate::{self, BlochBasis, DensityMatrix, PurityMode, Rotation3};

fn main() -> multistate::Result<()> {
    let rho = qstate::qubit_state(&Vector3::new(0.3, -0.4, 0.5))?;
    println!("rho =\n{}", rho.matrix());
    println!("bloch vector {:?}, purity {:.4}", qstate::bloch3(&rho)?.as_slice(), rho.purity());

    let q = qstate::random_state(3, PurityMode::Mixed, 7);
    let normalized = qstate::to_bloch_in(&q, BlochBasis::Normalized(3))?;
    let conventional = qstate::to_bloch_in(&q, BlochBasis::Conventional(3))?;
    println!("qutrit: |r| = {:.6} (normalized), {:.6} (conventional)", normalized.norm(), conventional.norm());
    let back = qstate::from_generalized_bloch(&normalized)?;
    println!("round trip error {:.2e}", (back.matrix() - q.matrix()).norm());

    // U and −U give the same rotation
    let u = qstate::random_su2_with(&mut ChaCha8Rng::seed_from_u64(1));
    let r = qstate::su2_to_so3(&u);
    let r_neg = qstate::su2_to_so3(&u.neg());
    println!("rotation from U equals rotation from -U: {}", (r.matrix() - r_neg.matrix()).norm() < 1e-14);
    let lifted = qstate::so3_to_su2(&r);
    println!("lifted back up to sign: {:?} vs {:?}", lifted.quaternion(), u.quaternion());

    let quarter = Rotation3::about_axis(&Vector3::z(), std::f64::consts::FRAC_PI_2);
    let turned = rho.conjugated_by(&qstate::so3_to_su2(&quarter).to_dmatrix());
    println!("quarter turn about z: {:?}", qstate::bloch3(&turned)?.as_slice());
    println!("maximally mixed qubit has |r| = {}", qstate::bloch3(&DensityMatrix::maximally_mixed(2))?.norm());
    Ok(())
}
