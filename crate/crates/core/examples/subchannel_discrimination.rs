//! Sub-channel discrimination: an imaginary state beats every real state by at most 1 + Im_R.

use nalgebra::Vector3;

use multistate::discrimination::{self, REAL_GRID};
use multistate::qstate;

fn main() -> multistate::Result<()> {
    let (t, m) = discrimination::y_task();
    let best_real = discrimination::best_real_reference(&t, &m, REAL_GRID)?;
    println!("y-task: best real state reaches {:.6} at {:?}", best_real.value, best_real.bloch.as_slice());

    for ry in [1.0, 0.6, 0.2, 0.0, -0.5] {
        let rho = qstate::qubit_state(&Vector3::new(0.0, ry, 0.0))?;
        println!(
            "r_y = {ry:+.1}: p = {:.4}, ratio {:.4}, ceiling {:.4}",
            discrimination::p_succ(&rho, &t, &m)?,
            discrimination::advantage_ratio(&rho, &t, &m)?,
            discrimination::advantage_ceiling(&rho)?
        );
    }

    let (t, m) = discrimination::dephasing_task();
    let plus = qstate::qubit_state(&Vector3::x())?;
    println!("identity vs dephasing on |+⟩: p = {:.4}", discrimination::p_succ(&plus, &t, &m)?);

    let rho = qstate::qubit_state(&Vector3::new(0.3, 0.5, -0.2))?;
    let found = discrimination::search_task(&rho, 500, 4)?;
    println!("task search: ratio {:.6} against ceiling {:.6}", found.ratio, found.ceiling);
    Ok(())
}
