//! Essential-spectrum annulus of the shift and the hypercyclic-subspace
//! test that depends on it.

use num_complex::Complex64;
use tridiag::spectrum::{essential_spectrum, hc_subspace_check};
use tridiag::{SequenceFamily, SequencePair};

pub fn run() -> tridiag::Result<()> {
    let geometric = SequencePair::new(SequenceFamily::geometric(0.9)?, SequenceFamily::geometric(0.3)?);
    let s = essential_spectrum(&geometric, 20, 200)?;
    println!("a = 0.9^n: inner = {}, outer = {}", s.inner, s.outer);

    let linear = SequencePair::new(SequenceFamily::power_law(1.0)?, SequenceFamily::geometric(0.5)?);
    let s = essential_spectrum(&linear, 50, 2000)?;
    println!(
        "a = n+1: analytic radii {} / {}, finite horizon (50, 2000) gives {:.4} / {:.4}",
        s.inner, s.outer, s.finite_horizon_inner, s.finite_horizon_outer
    );
    for row in s.rows.iter().step_by(10) {
        println!(
            "  n = {:2}: inf^(1/n) = {:.5}, sup^(1/n) = {:.5}",
            row.n, row.inf_root, row.sup_root
        );
    }

    for l in [0.5, 1.0, 2.0] {
        let c = hc_subspace_check(&linear, Complex64::new(l, 0.0));
        println!("hypercyclic subspace for lambda = {l}: {:?}", c.result);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> tridiag::Result<()> {
    run()
}
