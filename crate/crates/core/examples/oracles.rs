//! Independent oracles on a fixed space and on seeded random families.

use tridiag::verify::{random_pairs, verify_all};
use tridiag::{SequenceFamily, SequencePair, TridiagonalSpace};

pub fn run() -> tridiag::Result<()> {
    let space = TridiagonalSpace::new(
        SequencePair::new(SequenceFamily::power_law(1.0)?, SequenceFamily::geometric(0.5)?),
        64,
    )?;
    let mut pairs = vec![space];
    for p in random_pairs(2024, 5, 0.8) {
        pairs.push(TridiagonalSpace::new(p, 64)?);
    }
    for space in &pairs {
        for r in verify_all(space, 64, 100) {
            println!(
                "{:4} {:15} deviation {:.2e} (tolerance {:.0e})",
                if r.passed { "ok" } else { "FAIL" },
                r.oracle,
                r.max_deviation,
                r.tolerance
            );
            assert!(r.passed, "{}: {}", r.oracle, r.instance);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> tridiag::Result<()> {
    run()
}
