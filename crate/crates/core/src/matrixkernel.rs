//! Matrix-valued tridiagonal kernels
//! `K(z,w) = Σ (Aₙ + Bₙz)(Aₙ* + Bₙ*w̄) zⁿw̄ⁿ` whose coefficients are
//! simultaneously diagonalized by one unitary `Q`: `Aₙ = Q*·diag(a⁽q⁾ₙ)·Q`,
//! `Bₙ = Q*·diag(b⁽q⁾ₙ)·Q`. The space is then unitarily the direct sum of the
//! scalar channel spaces.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::dynamics::{HcStatus, Verdict};
use crate::error::{Result, TridiagError};
use crate::provenance::Clause;
use crate::sequences::{DivergenceTests, SequencePair};
use crate::space::TridiagonalSpace;

pub const UNITARY_TOL: f64 = 1e-10;

/// Truncation stored in each channel space; kernel evaluations take their own.
const CHANNEL_TRUNCATION: usize = 64;

type CMatrix = DMatrix<Complex64>;

/// Finite tables of the raw coefficient matrices, used for verification.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawTables {
    pub a: BTreeMap<usize, CMatrix>,
    pub b: BTreeMap<usize, CMatrix>,
}

#[derive(Debug, Clone)]
pub struct MatrixKernelSpace {
    q: CMatrix,
    channels: Vec<TridiagonalSpace>,
    raw: Option<RawTables>,
    unitarity_deviation: f64,
}

/// `max |QQ* − I|`.
pub fn unitarity_deviation(q: &CMatrix) -> f64 {
    let d = q.nrows();
    let prod = q * q.adjoint();
    let id = CMatrix::identity(d, d);
    (prod - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

impl MatrixKernelSpace {
    pub fn new(q: CMatrix, channels: Vec<SequencePair>) -> Result<Self> {
        let d = channels.len();
        if d == 0 {
            return Err(TridiagError::InvalidParameter(
                "at least one channel is required".into(),
            ));
        }
        if q.nrows() != d || q.ncols() != d {
            return Err(TridiagError::DimensionMismatch {
                expected: d,
                got: if q.nrows() != d { q.nrows() } else { q.ncols() },
            });
        }
        let deviation = unitarity_deviation(&q);
        if deviation.is_nan() || deviation > UNITARY_TOL {
            return Err(TridiagError::NotUnitary { deviation });
        }
        let channels = channels
            .into_iter()
            .map(|p| TridiagonalSpace::new(p, CHANNEL_TRUNCATION))
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixKernelSpace {
            q,
            channels,
            raw: None,
            unitarity_deviation: deviation,
        })
    }

    /// Attach raw `Aₙ`, `Bₙ` tables; each must be `d×d`.
    pub fn with_raw_tables(mut self, raw: RawTables) -> Result<Self> {
        let d = self.d();
        for m in raw.a.values().chain(raw.b.values()) {
            if m.nrows() != d || m.ncols() != d {
                return Err(TridiagError::DimensionMismatch {
                    expected: d,
                    got: if m.nrows() != d { m.nrows() } else { m.ncols() },
                });
            }
        }
        self.raw = Some(raw);
        Ok(self)
    }

    pub fn d(&self) -> usize {
        self.channels.len()
    }

    pub fn q(&self) -> &CMatrix {
        &self.q
    }

    pub fn channels(&self) -> &[TridiagonalSpace] {
        &self.channels
    }

    pub fn raw(&self) -> Option<&RawTables> {
        self.raw.as_ref()
    }

    pub fn unitarity_deviation(&self) -> f64 {
        self.unitarity_deviation
    }

    fn conjugate_diag(&self, diag: impl Iterator<Item = Complex64>) -> CMatrix {
        let dm = CMatrix::from_diagonal(&DVector::from_iterator(self.d(), diag));
        self.q.adjoint() * dm * &self.q
    }

    /// `Q*·diag(a⁽q⁾ₙ)·Q`.
    pub fn generated_a(&self, n: usize) -> CMatrix {
        self.conjugate_diag(self.channels.iter().map(|s| s.a(n)))
    }

    /// `Q*·diag(b⁽q⁾ₙ)·Q`.
    pub fn generated_b(&self, n: usize) -> CMatrix {
        self.conjugate_diag(self.channels.iter().map(|s| s.b(n)))
    }

    /// Raw `Aₙ` if tabulated, else the generated one.
    pub fn a_matrix(&self, n: usize) -> CMatrix {
        self.raw
            .as_ref()
            .and_then(|r| r.a.get(&n).cloned())
            .unwrap_or_else(|| self.generated_a(n))
    }

    pub fn b_matrix(&self, n: usize) -> CMatrix {
        self.raw
            .as_ref()
            .and_then(|r| r.b.get(&n).cloned())
            .unwrap_or_else(|| self.generated_b(n))
    }

    /// `Q*·diag(k_q(z,w))·Q` with each scalar kernel truncated at `n`.
    pub fn reduced_kernel(&self, z: Complex64, w: Complex64, n: usize) -> Result<CMatrix> {
        let diag = self
            .channels
            .iter()
            .map(|s| s.kernel_eval(z, w, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.conjugate_diag(diag.into_iter()))
    }
}

/// `Σ_{n<N} (Aₙ + Bₙz)(Aₙ + Bₙw)* zⁿw̄ⁿ` for arbitrary coefficient matrices.
pub fn direct_kernel_sum(
    a: impl Fn(usize) -> CMatrix,
    b: impl Fn(usize) -> CMatrix,
    z: Complex64,
    w: Complex64,
    truncation: usize,
) -> CMatrix {
    let a0 = a(0);
    let mut acc = CMatrix::zeros(a0.nrows(), a0.ncols());
    let mut zn = Complex64::new(1.0, 0.0);
    let mut wn = Complex64::new(1.0, 0.0);
    for n in 0..truncation {
        let (an, bn) = (a(n), b(n));
        let left = (&an + &bn * z) * zn;
        let right = (&an + &bn * w) * wn;
        acc += left * right.adjoint();
        zn *= z;
        wn *= w;
    }
    acc
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixKernelEval {
    pub reduced: CMatrix,
    /// Present when raw tables are attached.
    pub direct: Option<CMatrix>,
    pub deviation: Option<f64>,
}

/// `K(z,w)` truncated at `n`; with raw tables the direct sum is computed
/// as well and compared entrywise.
pub fn mk_kernel_eval(ms: &MatrixKernelSpace, z: Complex64, w: Complex64, n: usize) -> Result<MatrixKernelEval> {
    let reduced = ms.reduced_kernel(z, w, n)?;
    let direct = ms
        .raw
        .as_ref()
        .map(|_| direct_kernel_sum(|k| ms.a_matrix(k), |k| ms.b_matrix(k), z, w, n));
    let deviation = direct.as_ref().map(|d| max_abs(&(d - &reduced)));
    Ok(MatrixKernelEval {
        reduced,
        direct,
        deviation,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CoefficientMatrix {
    A,
    B,
}

impl fmt::Display for CoefficientMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoefficientMatrix::A => "A",
            CoefficientMatrix::B => "B",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Offender {
    pub index: usize,
    pub matrix: CoefficientMatrix,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalizationDiagnostic {
    pub unitarity_deviation: f64,
    /// Largest Frobenius norm `‖Q·Mₙ·Q* − diag(channel values)‖` over the
    /// sampled tables; unitarily invariant, so it measures the raw defect.
    pub max_deviation: f64,
    pub worst: Option<Offender>,
    pub tol: f64,
    pub passed: bool,
}

/// Checks `Q·Aₙ·Q* = diag(a⁽q⁾ₙ)` and `Q·Bₙ·Q* = diag(b⁽q⁾ₙ)` on the raw
/// tables at `indices`.
pub fn diagonalization_check(ms: &MatrixKernelSpace, indices: &[usize], tol: f64) -> Result<DiagonalizationDiagnostic> {
    let raw = ms.raw.as_ref().ok_or(TridiagError::MissingRawTables)?;
    let mut worst: Option<Offender> = None;
    for &n in indices {
        for (kind, table) in [(CoefficientMatrix::A, &raw.a), (CoefficientMatrix::B, &raw.b)] {
            let m = table
                .get(&n)
                .ok_or_else(|| TridiagError::InvalidParameter(format!("raw table {kind} has no entry at index {n}")))?;
            let expected = CMatrix::from_diagonal(&DVector::from_iterator(
                ms.d(),
                ms.channels.iter().map(|s| match kind {
                    CoefficientMatrix::A => s.a(n),
                    CoefficientMatrix::B => s.b(n),
                }),
            ));
            let deviation = (&ms.q * m * ms.q.adjoint() - expected).norm();
            if worst.is_none_or(|w| deviation > w.deviation) {
                worst = Some(Offender {
                    index: n,
                    matrix: kind,
                    deviation,
                });
            }
        }
    }
    let max_deviation = worst.map_or(0.0, |w| w.deviation).max(ms.unitarity_deviation);
    Ok(DiagonalizationDiagnostic {
        unitarity_deviation: ms.unitarity_deviation,
        max_deviation,
        worst,
        tol,
        passed: max_deviation <= tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelCheckDiagnostic {
    pub samples: usize,
    pub max_deviation: f64,
    pub worst_sample: Option<[[f64; 2]; 2]>,
    pub tol: f64,
    pub passed: bool,
}

/// Compares the direct matrix sum with `Q*·diag(k_q)·Q` at each `(z, w)`.
pub fn direct_sum_kernel_check(
    ms: &MatrixKernelSpace,
    samples: &[(Complex64, Complex64)],
    truncation: usize,
    tol: f64,
) -> Result<KernelCheckDiagnostic> {
    let mut max_deviation = 0.0;
    let mut worst_sample = None;
    for &(z, w) in samples {
        let direct = direct_kernel_sum(|k| ms.a_matrix(k), |k| ms.b_matrix(k), z, w, truncation);
        let reduced = ms.reduced_kernel(z, w, truncation)?;
        let dev = max_abs(&(direct - reduced));
        if worst_sample.is_none() || dev > max_deviation {
            max_deviation = dev;
            worst_sample = Some([[z.re, z.im], [w.re, w.im]]);
        }
    }
    Ok(KernelCheckDiagnostic {
        samples: samples.len(),
        max_deviation,
        worst_sample,
        tol,
        passed: max_deviation <= tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixDynamicsReport {
    pub lambda_abs: f64,
    pub hypercyclic: Verdict,
    pub mixing: Verdict,
    pub chaotic: Verdict,
    /// Channel with the slowest `|a⁽q⁾ₙ|` growth, which governs `min_q`.
    pub slowest_channel: Option<usize>,
    /// Channels meeting `sup |a_{n+1}/aₙ| < ∞` and `limsup |bₙ/aₙ₊₁| < 1`.
    pub channel_hypotheses: Vec<bool>,
    pub channel_tests: Vec<DivergenceTests>,
    /// Set for `λ ≠ 1`: the per-channel reduction is only proven at `λ = 1`
    /// and is extrapolated here.
    pub experimental: bool,
}

/// Classification of the backward shift `B` on the matrix-valued space.
pub fn direct_sum_classify(ms: &MatrixKernelSpace) -> MatrixDynamicsReport {
    classify_scaled(ms, 1.0, false)
}

/// Per-channel classification of `λB`; labeled experimental.
pub fn direct_sum_classify_lambda(ms: &MatrixKernelSpace, lambda: Complex64) -> Result<MatrixDynamicsReport> {
    let lambda_abs = lambda.norm();
    if lambda_abs == 0.0 || !lambda_abs.is_finite() {
        return Err(TridiagError::ZeroLambda);
    }
    Ok(classify_scaled(ms, lambda_abs, true))
}

fn classify_scaled(ms: &MatrixKernelSpace, lambda_abs: f64, experimental: bool) -> MatrixDynamicsReport {
    let channel_hypotheses: Vec<bool> = ms
        .channels
        .iter()
        .map(|s| s.asymptotics().ratio_bounded && s.asymptotics().tridiag_less_than_one)
        .collect();
    let channel_tests: Vec<DivergenceTests> = ms
        .channels
        .iter()
        .map(|s| s.pair().divergence_tests(lambda_abs))
        .collect();
    let growths: Vec<_> = ms
        .channels
        .iter()
        .map(|s| s.pair().a.growth().scaled(lambda_abs))
        .collect();
    let comparable = growths
        .iter()
        .all(|g| g.ln_scale.is_finite() && g.ln_base.is_finite() && g.power.is_finite());
    let slowest_channel = comparable.then(|| {
        (0..growths.len())
            .min_by(|&i, &j| growths[i].cmp_rate(&growths[j]))
            .expect("at least one channel")
    });
    let mut report = MatrixDynamicsReport {
        lambda_abs,
        hypercyclic: Verdict::INDETERMINATE,
        mixing: Verdict::INDETERMINATE,
        chaotic: Verdict::INDETERMINATE,
        slowest_channel,
        channel_hypotheses,
        channel_tests,
        experimental,
    };
    let Some(slowest) = slowest_channel else {
        return report;
    };
    if !report.channel_hypotheses.iter().all(|&h| h) {
        return report;
    }
    let iff = |holds: bool, clause: Clause| Verdict {
        status: if holds { HcStatus::YesIff } else { HcStatus::NoIff },
        clause: Some(clause),
    };
    let tests = &report.channel_tests;
    report.hypercyclic = iff(growths[slowest].diverges(), Clause::Thm5_2i);
    report.mixing = iff(tests.iter().all(|t| t.lim_infinite), Clause::Thm5_2ii);
    report.chaotic = iff(tests.iter().all(|t| t.inverse_square_summable), Clause::Thm5_2iii);
    report
}

/// Haar-like random unitary from the QR factor of a complex Gaussian-ish matrix.
pub fn random_unitary(d: usize, rng: &mut impl Rng) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    g.qr().q()
}

/// Raw tables `Aₙ = Q*·diag(a⁽q⁾ₙ)·Q`, `Bₙ = Q*·diag(b⁽q⁾ₙ)·Q` for `n < len`.
pub fn generated_tables(ms: &MatrixKernelSpace, len: usize) -> RawTables {
    RawTables {
        a: (0..len).map(|n| (n, ms.generated_a(n))).collect(),
        b: (0..len).map(|n| (n, ms.generated_b(n))).collect(),
    }
}
