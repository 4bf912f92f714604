//! Hypercyclic / mixing / chaotic verdicts for `λB`, a `|λ|` sweep, and the
//! finite traces attached as evidence.

use tridiag::dynamics::{classify, classify_with_witnesses, DynamicsQuery};
use tridiag::{SequenceFamily, SequencePair, TridiagonalSpace};

pub fn run() -> tridiag::Result<()> {
    let bergman = SequencePair::new(SequenceFamily::power_law(0.5)?, SequenceFamily::geometric(0.5)?);
    let r = classify(&bergman, &DynamicsQuery::real(1.0)?);
    println!(
        "a = sqrt(n+1): hypercyclic {}, mixing {}, chaotic {}",
        r.hypercyclic, r.mixing, r.chaotic
    );

    let example_a = SequencePair::new(SequenceFamily::constant(1.0)?, SequenceFamily::constant(0.5)?);
    println!("a = 1, b = 1/2 sweep:");
    for i in 0..13 {
        let l = 0.5 + 0.125 * i as f64;
        let r = classify(&example_a, &DynamicsQuery::real(l)?);
        println!("  |lambda| = {l:5.3}: chaotic {}", r.chaotic);
    }

    let space = TridiagonalSpace::new(
        SequencePair::new(SequenceFamily::power_law(1.0)?, SequenceFamily::geometric(0.5)?),
        64,
    )?;
    let r = classify_with_witnesses(&space, &DynamicsQuery::real(1.0)?, 40);
    let w = r.witnesses.as_ref().expect("witnesses requested");
    println!("a = n+1: chaotic {}", r.chaotic);
    println!(
        "  ||z^n|| at n = 10, 20, 40: {:.5} {:.5} {:.5}",
        w.gethner_shapiro.values[10], w.gethner_shapiro.values[20], w.gethner_shapiro.values[40]
    );
    println!(
        "  series partial norms at M = 10, 40: {:.8} {:.8} ({:?})",
        w.series.partial_norms[10], w.series.partial_norms[40], w.series.trend
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> tridiag::Result<()> {
    run()
}
