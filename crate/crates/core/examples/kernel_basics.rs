//! Build a tridiagonal space, evaluate its kernel two ways and compute
//! monomial norms.

use num_complex::Complex64;
use tridiag::{SequenceFamily, SequencePair, TridiagonalSpace};

pub fn run() -> tridiag::Result<()> {
    // a_n = sqrt(n+1), b_n = 2^-n
    let pair = SequencePair::new(SequenceFamily::power_law(0.5)?, SequenceFamily::geometric(0.5)?);
    let space = TridiagonalSpace::new(pair, 200)?;

    let (z, w) = (Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.4));
    let basis = space.kernel_eval(z, w, 200)?;
    let tridiagonal = space.kernel_eval_tridiagonal(z, w, 200)?;
    println!("k(z, w) basis sum       = {basis}");
    println!("k(z, w) tridiagonal sum = {tridiagonal}");
    assert!((basis - tridiagonal).norm() < 1e-12);

    for n in [0, 1, 5, 20, 100] {
        let m = space.monomial_norm_sq(n);
        println!(
            "||z^{n}||^2 = {:.15} (certified: {}, terms: {})",
            m.value, m.certified, m.terms
        );
    }

    // power coefficients <-> basis coordinates
    let poly = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 2.0),
        Complex64::new(-1.0, 0.0),
    ];
    let coords = space.coeffs_to_basis(&poly, 8)?;
    let back = space.basis_to_coeffs(&coords[..3]);
    println!("basis coordinates of 1 + 2iz - z^2: {:?}", &coords[..3]);
    println!("back to coefficients (first 3): {:?}", &back[..3]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> tridiag::Result<()> {
    run()
}
