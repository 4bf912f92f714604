//! Orbit norm traces and the truncated periodic-vector construction.

use num_complex::Complex64;
use tridiag::dynamics::{orbit, periodic_vector, DynamicsQuery, Polynomial};
use tridiag::{SequenceFamily, SequencePair, TridiagonalSpace};

pub fn run() -> tridiag::Result<()> {
    let pair = SequencePair::new(SequenceFamily::power_law(1.0)?, SequenceFamily::geometric(0.5)?);
    let space = TridiagonalSpace::new(pair, 512)?;
    let query = DynamicsQuery::real(1.0)?;

    let w = periodic_vector(&space, &query, 3, &Polynomial::one(), 100, 512)?;
    println!("y - B^3 y for f = 1, p = 3, K = 100:");
    println!("  coefficient at z^300: {}", w.residual_coeffs[300]);
    println!(
        "  residual norm {:.15} vs ||z^300|| {:.15}",
        w.residual_norm,
        space.monomial_norm_sq(300).norm()
    );
    println!(
        "  max deviation from the predicted residual: {:e}",
        w.identity_deviation
    );

    let x: Vec<Complex64> = (0..6).map(|i| Complex64::new(1.0, -(i as f64))).collect();
    let t = orbit(&space, &DynamicsQuery::real(1.5)?, &x, 8, 512)?;
    println!("orbit of a degree-6 vector under 1.5 B:");
    for (k, (m, c)) in t.matrix_norms.iter().zip(&t.coefficient_norms).enumerate() {
        println!("  k = {k}: matrix {m:.6e}, coefficients {c:.6e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> tridiag::Result<()> {
    run()
}
