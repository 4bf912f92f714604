//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fail.

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tridiag::dynamics::{classify, periodic_vector, DynamicsQuery, HcStatus, Polynomial, Regime};
use tridiag::matrixkernel::{
    diagonalization_check, direct_sum_classify, direct_sum_kernel_check, generated_tables, random_unitary,
    MatrixKernelSpace,
};
use tridiag::operator::{build_matrix, compactness_check, decompose, CompactnessVerdict};
use tridiag::spectrum::{essential_spectrum, hc_subspace_check};
use tridiag::verify::{oracle_matrix_columns, oracle_monomial_norms, random_pairs};
use tridiag::{SequenceFamily, SequencePair, Tri, TridiagonalSpace};

const MATRIX_TOL: f64 = 1e-12;
const NORM_TOL: f64 = 1e-10;
const ORACLE_TOL: f64 = 1e-9;
const COMPACT_TOL: f64 = 1e-8;
const RADIUS_TOL: f64 = 1e-9;
const OUTER_TOL: f64 = 0.05;
const PERIODIC_TOL: f64 = 1e-9;
const KERNEL_TOL: f64 = 1e-10;
const SEED: u64 = 20;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn pair(a: SequenceFamily, b: SequenceFamily) -> SequencePair {
    SequencePair::new(a, b)
}

fn example_a() -> SequencePair {
    pair(
        SequenceFamily::constant(1.0).unwrap(),
        SequenceFamily::constant(0.5).unwrap(),
    )
}

fn bergman() -> SequencePair {
    pair(
        SequenceFamily::power_law(0.5).unwrap(),
        SequenceFamily::geometric(0.5).unwrap(),
    )
}

fn lin_geo() -> SequencePair {
    pair(
        SequenceFamily::power_law(1.0).unwrap(),
        SequenceFamily::geometric(0.5).unwrap(),
    )
}

fn matrix_exactness() -> Outcome {
    let start = Instant::now();
    let space = TridiagonalSpace::new(example_a(), 64).map_err(|e| e.to_string())?;
    let m = build_matrix(&space, 8).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mut err = 0.0f64;
    for i in 0..8 {
        let expected = 0.5 * (-0.5f64).powi(i as i32);
        err = err.max((m.entry(i, 0) - c(expected)).norm());
    }
    for i in 0..7 {
        err = err.max((m.entry(i, i + 1) - c(1.0)).norm());
    }
    ensure(
        err <= MATRIX_TOL && elapsed < Duration::from_secs(1),
        format!("max error {err:e}, {elapsed:?}"),
    )
}

fn norm_identity() -> Outcome {
    let space = TridiagonalSpace::new(example_a(), 64).map_err(|e| e.to_string())?;
    let worst = (0..=100)
        .map(|n| (space.monomial_norm_sq(n).value - 4.0 / 3.0).abs())
        .fold(0.0, f64::max);
    ensure(
        worst <= NORM_TOL,
        format!("max |‖zⁿ‖² − 4/3| = {worst:e} over n <= 100"),
    )
}

fn bergman_classification() -> Outcome {
    let r = classify(&bergman(), &DynamicsQuery::real(1.0).map_err(|e| e.to_string())?);
    let (mixing, chaotic) = (r.mixing.to_string(), r.chaotic.to_string());
    ensure(
        r.mixing.status == HcStatus::YesIff
            && r.chaotic.status == HcStatus::NoIff
            && mixing == "yes[4.3(iii)]"
            && chaotic == "no[4.4(iii)]",
        format!("mixing {mixing}, chaotic {chaotic}"),
    )
}

fn chaos_boundary() -> Outcome {
    let mut mismatches = Vec::new();
    for i in 0..13 {
        let lambda = 0.5 + 0.125 * i as f64;
        let r = classify(&example_a(), &DynamicsQuery::real(lambda).map_err(|e| e.to_string())?);
        if r.chaotic.as_tri() != Tri::from_bool(lambda > 1.0) {
            mismatches.push(format!("λ = {lambda}: {}", r.chaotic));
        }
    }
    let lg = classify(&lin_geo(), &DynamicsQuery::real(1.0).map_err(|e| e.to_string())?);
    if !lg.chaotic.is_yes() {
        mismatches.push(format!("a = n+1 at λ = 1: {}", lg.chaotic));
    }
    ensure(
        mismatches.is_empty(),
        if mismatches.is_empty() {
            "13 grid points and a = n+1 at λ = 1 match".into()
        } else {
            mismatches.join("; ")
        },
    )
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for p in random_pairs(SEED, 5, 0.8) {
        let space = TridiagonalSpace::new(p, 64).map_err(|e| e.to_string())?;
        let cols = oracle_matrix_columns(&space, 64).map_err(|e| e.to_string())?;
        let norms = oracle_monomial_norms(&space, 64).map_err(|e| e.to_string())?;
        worst = worst.max(cols.max_deviation).max(norms.max_deviation);
    }
    let elapsed = start.elapsed();
    ensure(
        worst <= ORACLE_TOL && elapsed < Duration::from_secs(10),
        format!("max deviation {worst:e} on 5 families, {elapsed:?}"),
    )
}

fn decomposition_and_compactness() -> Outcome {
    let n = 64;
    let mut residual = 0.0f64;
    for p in [example_a(), bergman(), lin_geo()] {
        let space = TridiagonalSpace::new(p, n).map_err(|e| e.to_string())?;
        let d = decompose(&space, n, n - 1).map_err(|e| e.to_string())?;
        residual = residual.max(d.residual).max(d.dropped_max);
    }
    let space = TridiagonalSpace::new(lin_geo(), 128).map_err(|e| e.to_string())?;
    let cc = compactness_check(&space, 128, COMPACT_TOL).map_err(|e| e.to_string())?;
    ensure(
        residual == 0.0 && cc.verdict == CompactnessVerdict::Compact && cc.decay_index.is_some(),
        format!(
            "residual {residual:e}, compact {:?}, entries below 1e-8 from row {:?}",
            cc.verdict, cc.decay_index
        ),
    )
}

fn essential_spectrum_radii() -> Outcome {
    let geo = pair(
        SequenceFamily::geometric(0.9).unwrap(),
        SequenceFamily::geometric(0.3).unwrap(),
    );
    let mut geo_err = 0.0f64;
    for (n, k) in [(10, 100), (50, 2000), (200, 500)] {
        let ann = essential_spectrum(&geo, n, k).map_err(|e| e.to_string())?;
        geo_err = geo_err.max((ann.inner - 0.9).abs()).max((ann.outer - 0.9).abs());
        for row in &ann.rows {
            geo_err = geo_err.max((row.inf_root - 0.9).abs()).max((row.sup_root - 0.9).abs());
        }
    }
    let lin = essential_spectrum(&lin_geo(), 50, 2000).map_err(|e| e.to_string())?;
    let outer_gap = (lin.finite_horizon_outer - 1.0).abs();
    let detail = format!(
        "ρ = 0.9 max error {geo_err:e}; a = n+1 analytic ({}, {}), finite-horizon outer {:.6} (gap {outer_gap:.4}, allowed {OUTER_TOL})",
        lin.inner, lin.outer, lin.finite_horizon_outer
    );
    ensure(
        geo_err <= RADIUS_TOL && lin.inner == 1.0 && lin.outer == 1.0 && outer_gap <= OUTER_TOL,
        detail,
    )
}

fn hypercyclic_subspace() -> Outcome {
    let at1 = hc_subspace_check(&lin_geo(), c(1.0));
    let at2 = hc_subspace_check(&lin_geo(), c(2.0));
    ensure(
        at1.result == Tri::Yes && at2.result == Tri::No,
        format!("λ = 1: {:?}, λ = 2: {:?}", at1.result, at2.result),
    )
}

fn periodic_telescoping() -> Outcome {
    let space = TridiagonalSpace::new(lin_geo(), 512).map_err(|e| e.to_string())?;
    let q = DynamicsQuery::real(1.0).map_err(|e| e.to_string())?;
    let w = periodic_vector(&space, &q, 3, &Polynomial::one(), 100, 512).map_err(|e| e.to_string())?;
    let vector_err = w
        .residual_coeffs
        .iter()
        .enumerate()
        .map(|(i, v)| (v - c(if i == 300 { 1.0 } else { 0.0 })).norm())
        .fold(0.0, f64::max);
    let target = space.monomial_norm_sq(300).norm();
    let norm_err = (w.residual_norm - target).abs();
    ensure(
        vector_err <= PERIODIC_TOL && norm_err <= PERIODIC_TOL,
        format!("coefficient error {vector_err:e}, |residual − ‖z^300‖| = {norm_err:e}"),
    )
}

fn matrix_valued() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let q = random_unitary(2, &mut rng);
    let channels = vec![
        pair(
            SequenceFamily::power_law(1.0).unwrap(),
            SequenceFamily::geometric(0.5).unwrap(),
        ),
        pair(
            SequenceFamily::power_law(0.5).unwrap(),
            SequenceFamily::geometric(0.5).unwrap(),
        ),
    ];
    let ms = MatrixKernelSpace::new(q, channels).map_err(|e| e.to_string())?;
    let n = 64;
    let tables = generated_tables(&ms, n);
    let ms = ms.with_raw_tables(tables).map_err(|e| e.to_string())?;
    let diag = diagonalization_check(&ms, &(0..n).collect::<Vec<_>>(), KERNEL_TOL).map_err(|e| e.to_string())?;
    let samples: Vec<(Complex64, Complex64)> = (0..50)
        .map(|_| {
            let mut point = || Complex64::from_polar(rng.gen_range(0.0..0.7), rng.gen_range(-3.2..3.2));
            (point(), point())
        })
        .collect();
    let kc = direct_sum_kernel_check(&ms, &samples, n, KERNEL_TOL).map_err(|e| e.to_string())?;
    let r = direct_sum_classify(&ms);
    ensure(
        diag.passed && kc.passed && r.mixing.is_yes() && r.chaotic.is_no(),
        format!(
            "diagonalization {:e}, kernel {:e} on {} samples, mixing {}, chaotic {}",
            diag.max_deviation, kc.max_deviation, kc.samples, r.mixing, r.chaotic
        ),
    )
}

fn min_eigenvalue(m: DMatrix<Complex64>) -> f64 {
    SymmetricEigen::new(m)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

fn invariant_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = Vec::new();
    for (i, p) in random_pairs(SEED, 10, 0.8).into_iter().enumerate() {
        let r = rng.gen_range(0.2..3.0);
        let theta = rng.gen_range(-3.1..3.1);
        let real = classify(&p, &DynamicsQuery::real(r).map_err(|e| e.to_string())?);
        let rotated = classify(
            &p,
            &DynamicsQuery::new(Complex64::from_polar(r, theta)).map_err(|e| e.to_string())?,
        );
        if (real.hypercyclic, real.mixing, real.chaotic) != (rotated.hypercyclic, rotated.mixing, rotated.chaotic) {
            failures.push(format!("#{i}: rotation"));
        }
        let chain = (!real.chaotic.is_yes() || real.mixing.is_yes())
            && (!real.mixing.is_yes() || real.hypercyclic.is_yes())
            && (real.regime != Regime::Strong || real.hypercyclic.as_tri() != Tri::Indeterminate);
        if !chain {
            failures.push(format!("#{i}: implication chain"));
        }

        let a = p.a.without_overrides();
        let scaled = SequenceFamily::new(
            a.coeff() * Complex64::from_polar(rng.gen_range(0.1..10.0), theta),
            a.base(),
            a.power(),
        )
        .map_err(|e| e.to_string())?;
        let before = essential_spectrum(&pair(a, p.b.clone()), 20, 200).map_err(|e| e.to_string())?;
        let after = essential_spectrum(&pair(scaled, p.b.clone()), 20, 200).map_err(|e| e.to_string())?;
        if before != after {
            failures.push(format!("#{i}: annulus scaling"));
        }

        let space = TridiagonalSpace::new(p, 64).map_err(|e| e.to_string())?;
        let pts: Vec<Complex64> = (0..8)
            .map(|_| Complex64::from_polar(rng.gen_range(0.0..0.8), rng.gen_range(-3.2..3.2)))
            .collect();
        let k = |z, w| space.kernel_eval(z, w, 64).unwrap();
        let gram = DMatrix::from_fn(8, 8, |i, j| k(pts[i], pts[j]));
        let scale = gram.diagonal().iter().map(|v| v.re).fold(1.0, f64::max);
        let hermitian = (&gram - gram.adjoint()).iter().all(|v| v.norm() <= 1e-12 * scale);
        if !hermitian || min_eigenvalue(gram) < -1e-10 * scale {
            failures.push(format!("#{i}: kernel Hermitian/PSD"));
        }
    }
    let elapsed = start.elapsed();
    ensure(
        failures.is_empty() && elapsed < Duration::from_secs(60),
        if failures.is_empty() {
            format!("10 configurations, {elapsed:?}")
        } else {
            failures.join("; ")
        },
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("matrix exactness", matrix_exactness),
        ("norm identity", norm_identity),
        ("Bergman-type shift is mixing, not chaotic", bergman_classification),
        ("chaos boundary", chaos_boundary),
        ("oracle equivalence", oracle_equivalence),
        ("decomposition exactness and compactness", decomposition_and_compactness),
        ("essential spectrum", essential_spectrum_radii),
        ("hypercyclic subspace", hypercyclic_subspace),
        ("periodic-vector telescoping", periodic_telescoping),
        ("matrix-valued kernel", matrix_valued),
        ("invariant suite", invariant_suite),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
