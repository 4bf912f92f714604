//! The backward shift as a matrix: closed-form entries, the weighted
//! shift + diagonal + band decomposition, boundedness and compactness.

use tridiag::operator::{boundedness_report, build_matrix, compactness_check, decompose};
use tridiag::{SequenceFamily, SequencePair, TridiagonalSpace};

pub fn run() -> tridiag::Result<()> {
    let example_a = SequencePair::new(SequenceFamily::constant(1.0)?, SequenceFamily::constant(0.5)?);
    let space = TridiagonalSpace::new(example_a.clone(), 8)?;
    let m = build_matrix(&space, 8)?;
    let col0: Vec<f64> = m.column(0).iter().map(|z| z.re).collect();
    println!("column 0 of B for a = 1, b = 1/2: {col0:?}");

    let report = boundedness_report(&example_a, 32)?;
    println!("boundedness: {:?}, limsup = {}", report.verdict, report.tridiag_limsup);

    let lin_geo = SequencePair::new(SequenceFamily::power_law(1.0)?, SequenceFamily::geometric(0.5)?);
    let space = TridiagonalSpace::new(lin_geo, 64)?;
    let d = decompose(&space, 64, 63)?;
    let diff = (d.reassemble() - build_matrix(&space, 64)?.entries())
        .map(|z| z.norm())
        .max();
    println!("decomposition with every band kept: max |residual| = {diff:e}");
    for band in d.bands.iter().take(4) {
        println!("  ||F_{}|| = {:e}", band.m, band.norm.norm);
    }

    let c = compactness_check(&space, 64, 1e-8)?;
    println!(
        "compactness: {:?}; lower part below 1e-8 from row {:?}",
        c.verdict, c.decay_index
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> tridiag::Result<()> {
    run()
}
