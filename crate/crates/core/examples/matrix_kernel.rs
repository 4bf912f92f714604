//! Matrix-valued kernels diagonalized by a unitary: kernel agreement,
//! diagonalization checks and the direct-sum classification.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tridiag::matrixkernel::{
    diagonalization_check, direct_sum_classify, direct_sum_kernel_check, generated_tables, random_unitary,
    MatrixKernelSpace,
};
use tridiag::{SequenceFamily, SequencePair};

pub fn run() -> tridiag::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let q = random_unitary(2, &mut rng);
    let channels = vec![
        SequencePair::new(SequenceFamily::power_law(1.0)?, SequenceFamily::geometric(0.5)?),
        SequencePair::new(SequenceFamily::power_law(0.5)?, SequenceFamily::geometric(0.5)?),
    ];
    let ms = MatrixKernelSpace::new(q, channels)?;
    let tables = generated_tables(&ms, 16);
    let ms = ms.with_raw_tables(tables)?;

    let idx: Vec<usize> = (0..16).collect();
    let d = diagonalization_check(&ms, &idx, 1e-10)?;
    println!(
        "diagonalization: passed {}, max deviation {:e}",
        d.passed, d.max_deviation
    );

    let samples: Vec<(Complex64, Complex64)> = (0..50)
        .map(|_| {
            let mut pt = || Complex64::from_polar(rng.gen_range(0.0..0.6), rng.gen_range(0.0..std::f64::consts::TAU));
            (pt(), pt())
        })
        .collect();
    let k = direct_sum_kernel_check(&ms, &samples, 150, 1e-10)?;
    println!(
        "direct-sum kernel: passed {}, max deviation {:e}",
        k.passed, k.max_deviation
    );

    let r = direct_sum_classify(&ms);
    println!(
        "hypercyclic {}, mixing {}, chaotic {} (slowest channel {:?})",
        r.hypercyclic, r.mixing, r.chaotic, r.slowest_channel
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> tridiag::Result<()> {
    run()
}
