//! Recomputes every named fixture and prints computed against expected values.

use multistate::criteria::{self, FIXTURE_NAMES};

fn main() -> multistate::Result<()> {
    let mut all = true;
    for name in FIXTURE_NAMES {
        let f = criteria::named_fixture(name)?;
        println!("{name}: {}", f.summary);
        for c in &f.checks {
            println!(
                "  [{}] {:<36} {:.12}  err {:.1e}  {}",
                if c.passed() { "ok" } else { "FAIL" },
                c.quantity,
                c.computed,
                c.abs_error(),
                c.provenance
            );
        }
        all &= f.passed();
    }
    println!("all fixtures pass: {all}");
    Ok(())
}
