//! Im_R1 and C_R1: basis-optimized average robustness, with the Gram-eigenvalue bounds.

use nalgebra::Vector3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use multistate::bargmann;
use multistate::qstate::random_ball_point;
use multistate::{quantifiers, MultiState};

fn report(name: &str, ms: &MultiState) -> multistate::Result<()> {
    let im = quantifiers::im_r1(ms)?;
    let co = quantifiers::c_r1(ms)?;
    println!("{name}");
    println!("  Im_R1 = {:.9}  bounds [{:.9}, {:.9}]  {:?}", im.value, im.lower_bound, im.upper_bound, im.method);
    println!("  C_R1  = {:.9}  bounds [{:.9}, {:.9}]  {:?}", co.value, co.lower_bound, co.upper_bound, co.method);
    println!("  best y axis {:?}", im.argmin_direction.as_slice());
    Ok(())
}

fn main() -> multistate::Result<()> {
    report("Pauli triple", &MultiState::from_bloch_vectors(&[Vector3::x(), Vector3::y(), Vector3::z()])?)?;

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let random: Vec<_> = (0..6).map(|_| random_ball_point(&mut rng)).collect();
    let ms = MultiState::from_bloch_vectors(&random)?;
    report("six random states", &ms)?;
    println!("  Gram eigenvalues {:?}", bargmann::gram(&ms, None).eigenvalues());

    let single = ms.get(0)?;
    println!(
        "single state: Im_R = {:.6} (trace norm {:.6}), C_R = {:.6}",
        quantifiers::im_robustness_single(single)?,
        quantifiers::im_robustness_trace_norm(single),
        quantifiers::coh_robustness_single(single)?
    );
    let sdp = quantifiers::im_r1_sdp_form(&ms, 2000, 8)?;
    println!("minimization over all X: {:.3e} (sphere value {:.6}, agrees {})", sdp.value, sdp.sphere_value, sdp.agrees);
    Ok(())
}
