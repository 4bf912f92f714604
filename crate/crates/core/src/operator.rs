//! Matrix of the backward shift in the basis `{fₙ}`, its boundedness tests,
//! and the splitting `[B] = [B_w] + [D] + Σ [F_m]`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, TridiagError};
use crate::provenance::Clause;
use crate::sequences::{cmp_zero, CAsymptotics, ExtReal, SequencePair, Tri};
use crate::space::TridiagonalSpace;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `N×N` truncation of `[B]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<Complex64>,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        self.entries.column(col).iter().copied().collect()
    }

    /// `λ·[B]·x`, with `x` zero-padded or cut to the truncation.
    pub fn apply_scaled(&self, lambda: Complex64, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        let mut v = nalgebra::DVector::from_element(n, ZERO);
        for (i, xi) in x.iter().take(n).enumerate() {
            v[i] = *xi;
        }
        let y = &self.entries * v * lambda;
        y.iter().copied().collect()
    }

    /// Row-major `[re, im]` cells.
    pub fn to_rows(&self) -> Vec<Vec<[f64; 2]>> {
        self.entries
            .row_iter()
            .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
            .collect()
    }

    pub fn from_entries(entries: DMatrix<Complex64>) -> Self {
        OperatorMatrix { entries }
    }
}

/// Diagonal entry of column `n`: `b₀/a₀` for `n = 0`, else `cₙ`.
fn diagonal_entry(pair: &SequencePair, n: usize) -> Complex64 {
    if n == 0 {
        pair.b_over_a(0)
    } else {
        pair.c(n)
    }
}

/// Builds the `N×N` block of `[B]` from the closed-form entries:
/// superdiagonal `aₙ/aₙ₋₁`, diagonal `b₀/a₀, c₁, c₂, …`, and below the
/// diagonal of column `n` the products `dₙ·∏_{i<j}(−b_{n+i}/a_{n+i+1})`.
pub fn build_matrix(space: &TridiagonalSpace, n: usize) -> Result<OperatorMatrix> {
    if n < 2 {
        return Err(TridiagError::TruncationTooSmall { min: 2, got: n });
    }
    let pair = space.pair();
    let step: Vec<Complex64> = (0..n).map(|m| -pair.tridiag_ratio(m)).collect();
    let mut entries = DMatrix::from_element(n, n, ZERO);
    for col in 0..n {
        if col >= 1 {
            entries[(col - 1, col)] = pair.weight(col);
        }
        let mut v = diagonal_entry(pair, col);
        entries[(col, col)] = v;
        for row in col + 1..n {
            v *= step[row - 1];
            entries[(row, col)] = v;
        }
    }
    Ok(OperatorMatrix { entries })
}

/// Coefficient backward shift: drops the constant term.
pub fn apply_shift_coeffs(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs.iter().skip(1).copied().collect()
}

/// Multiplication by `z` at coefficient level (right inverse of the shift).
pub fn raise_coeffs(coeffs: &[Complex64]) -> Vec<Complex64> {
    std::iter::once(ZERO).chain(coeffs.iter().copied()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum BoundednessVerdict {
    Bounded {
        provenance: Clause,
    },
    /// The sufficient tests fail. When `necessary_violated` holds, the
    /// necessary conditions fail too, so `B` is not bounded at all.
    NotProvenBounded {
        necessary_violated: bool,
    },
    Indeterminate,
}

impl BoundednessVerdict {
    pub fn is_bounded(&self) -> bool {
        matches!(self, BoundednessVerdict::Bounded { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundednessReport {
    /// `{aₙ₊₁/aₙ}` and `{cₙ}` are bounded.
    pub necessary_ok: bool,
    /// Both sup conditions and `Σ‖F_m‖ < ∞`.
    pub sufficient_ok: Tri,
    /// `sup |aₙ₊₁/aₙ| < ∞` and `limsup |bₙ/aₙ₊₁| < 1`.
    pub strong_ok: bool,
    pub tridiag_limsup: ExtReal,
    /// Partial sums `Σ_{m<=M} ‖F_m‖` over the finite horizon (advisory).
    pub band_norm_partial_sums: Vec<ExtReal>,
    pub horizon: usize,
    pub verdict: BoundednessVerdict,
}

/// Analytic decision of the band-series condition `Σ_m ‖F_m‖ < ∞` together
/// with the sup conditions.
fn band_series_condition(pair: &SequencePair) -> Tri {
    let asym = pair.asymptotics();
    if asym.tridiag_less_than_one {
        return Tri::Yes;
    }
    if !asym.c_bounded {
        return Tri::No;
    }
    match asym.tridiag_limsup {
        ExtReal::Infinite => Tri::No,
        ExtReal::Finite(l) if l.is_nan() => Tri::Indeterminate,
        ExtReal::Finite(l) if cmp_zero(l - 1.0).is_gt() => Tri::No,
        ExtReal::Finite(_) => {
            // limsup = 1: |bₙ/aₙ₊₁| = ((n+1)/(n+2))^p eventually, so the
            // products over m consecutive ratios decay like m^{−p}.
            match asym.c_asymptotics {
                CAsymptotics::EventuallyZero => Tri::from_bool(cmp_zero(pair.a.power() - 1.0).is_gt()),
                // |cⱼ| tends to a nonzero constant, so ‖F_m‖ stays bounded below.
                CAsymptotics::Growth(_) => Tri::No,
            }
        }
    }
}

fn ext(v: f64) -> ExtReal {
    if v.is_finite() {
        ExtReal::Finite(v)
    } else {
        ExtReal::Infinite
    }
}

/// `‖F_m‖ = max{ |b₀²b₁⋯b_{m−1}/(a₀⋯a_m)|, sup_{1<=j<=j_max} |cⱼbⱼ⋯b_{j+m−1}/(a_{j+1}⋯a_{j+m})| }`
/// with the sup taken over a finite range of `j`.
pub fn band_norm(pair: &SequencePair, m: usize, j_max: usize) -> BandNorm {
    let ratio = |i: usize| pair.tridiag_ratio(i).norm();
    let mut first = pair.b_over_a(0).norm();
    for i in 0..m {
        first *= ratio(i);
    }
    let mut sup = 0.0f64;
    for j in 1..=j_max {
        let mut t = pair.c(j).norm();
        for i in j..j + m {
            t *= ratio(i);
        }
        sup = sup.max(t);
    }
    BandNorm {
        m,
        first_column: first,
        sup_interior: sup,
        norm: first.max(sup),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandNorm {
    pub m: usize,
    pub first_column: f64,
    pub sup_interior: f64,
    pub norm: f64,
}

pub fn boundedness_report(pair: &SequencePair, horizon: usize) -> Result<BoundednessReport> {
    if horizon < 16 {
        return Err(TridiagError::InvalidParameter(format!(
            "horizon must be at least 16, got {horizon}"
        )));
    }
    let asym = pair.asymptotics();
    let necessary_ok = asym.ratio_bounded && asym.c_bounded;
    let strong_ok = asym.ratio_bounded && asym.tridiag_less_than_one;
    let sufficient_ok = band_series_condition(pair);
    let mut partial = Vec::with_capacity(horizon);
    let mut acc = 0.0;
    for m in 1..=horizon {
        acc += band_norm(pair, m, horizon).norm;
        partial.push(ext(acc));
    }
    let verdict = if strong_ok {
        BoundednessVerdict::Bounded {
            provenance: Clause::Remark2_4,
        }
    } else {
        match sufficient_ok {
            Tri::Yes => BoundednessVerdict::Bounded {
                provenance: Clause::Thm2_3,
            },
            Tri::No => BoundednessVerdict::NotProvenBounded {
                necessary_violated: !necessary_ok,
            },
            Tri::Indeterminate => BoundednessVerdict::Indeterminate,
        }
    };
    debug_assert!(!strong_ok || sufficient_ok.is_yes());
    Ok(BoundednessReport {
        necessary_ok,
        sufficient_ok,
        strong_ok,
        tridiag_limsup: asym.tridiag_limsup,
        band_norm_partial_sums: partial,
        horizon,
        verdict,
    })
}

/// The `m`-th subdiagonal of the truncation: entries `(j+m, j)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Band {
    pub m: usize,
    pub entries: Vec<Complex64>,
    pub norm: BandNorm,
}

impl Band {
    /// The band as an `N×N` matrix.
    pub fn to_matrix(&self, n: usize) -> DMatrix<Complex64> {
        let mut out = DMatrix::from_element(n, n, ZERO);
        for (j, v) in self.entries.iter().enumerate() {
            out[(j + self.m, j)] = *v;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    pub dim: usize,
    /// `wₙ = aₙ/aₙ₋₁` for `n = 1..N`.
    pub weights: Vec<Complex64>,
    /// `b₀/a₀, c₁, …, c_{N−1}`.
    pub diagonal: Vec<Complex64>,
    pub bands: Vec<Band>,
    /// Columns `>= covered_from` have every nonzero entry inside the kept bands.
    pub covered_from: usize,
    /// Entrywise max residual on the covered columns (zero by construction).
    pub residual: f64,
    /// Largest entry of the dropped bands `m > M`.
    pub dropped_max: f64,
}

impl Decomposition {
    /// `[B_w] + [D] + Σ[F_m]` over the kept bands.
    pub fn reassemble(&self) -> DMatrix<Complex64> {
        let n = self.dim;
        let mut out = DMatrix::from_element(n, n, ZERO);
        for (i, w) in self.weights.iter().enumerate() {
            out[(i, i + 1)] += *w;
        }
        for (i, d) in self.diagonal.iter().enumerate() {
            out[(i, i)] += *d;
        }
        for band in &self.bands {
            out += band.to_matrix(n);
        }
        out
    }
}

pub fn decompose(space: &TridiagonalSpace, n: usize, bands: usize) -> Result<Decomposition> {
    if bands < 1 || bands >= n {
        return Err(TridiagError::InvalidParameter(format!(
            "band count must satisfy 1 <= M < N, got M = {bands}, N = {n}"
        )));
    }
    let matrix = build_matrix(space, n)?;
    let b = matrix.entries();
    let weights = (1..n).map(|i| b[(i - 1, i)]).collect();
    let diagonal = (0..n).map(|i| b[(i, i)]).collect();
    let band_list: Vec<Band> = (1..=bands)
        .map(|m| Band {
            m,
            entries: (0..n - m).map(|j| b[(j + m, j)]).collect(),
            norm: band_norm(space.pair(), m, n - 1 - m),
        })
        .collect();
    let mut dec = Decomposition {
        dim: n,
        weights,
        diagonal,
        bands: band_list,
        covered_from: n - 1 - bands,
        residual: 0.0,
        dropped_max: 0.0,
    };
    let diff = b - dec.reassemble();
    for col in 0..n {
        let worst = diff.column(col).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if col >= dec.covered_from {
            dec.residual = dec.residual.max(worst);
        }
        dec.dropped_max = dec.dropped_max.max(worst);
    }
    Ok(dec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CompactnessHypotheses {
    pub ratio_bounded: bool,
    pub limsup_below_one: bool,
    pub c_tends_to_zero: bool,
}

impl CompactnessHypotheses {
    pub fn all(&self) -> bool {
        self.ratio_bounded && self.limsup_below_one && self.c_tends_to_zero
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompactnessVerdict {
    /// `K = D + Σ F_m` is compact; the hypotheses certify it.
    Compact,
    NotCertified,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompactnessDiagnostic {
    pub hypotheses: CompactnessHypotheses,
    pub verdict: CompactnessVerdict,
    pub provenance: Clause,
    pub tol: f64,
    pub dim: usize,
    /// First row index from which every entry of `[D] + Σ[F_m]` in that row
    /// and all later rows is below `tol`; `None` if not reached in the truncation.
    pub decay_index: Option<usize>,
    /// `max |cₙ|` over `n >= decay_index` within the truncation.
    pub diagonal_tail_max: Option<f64>,
}

pub fn compactness_check(space: &TridiagonalSpace, n: usize, tol: f64) -> Result<CompactnessDiagnostic> {
    let asym = space.asymptotics();
    let hypotheses = CompactnessHypotheses {
        ratio_bounded: asym.ratio_bounded,
        limsup_below_one: asym.tridiag_less_than_one,
        c_tends_to_zero: asym.c_limit_zero,
    };
    let matrix = build_matrix(space, n)?;
    let b = matrix.entries();
    // row maxima of the lower triangle (diagonal included), then suffix maxima
    let row_max: Vec<f64> = (0..n)
        .map(|i| (0..=i).map(|j| b[(i, j)].norm()).fold(0.0, f64::max))
        .collect();
    let mut suffix = vec![0.0f64; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1].max(row_max[i]);
    }
    let decay_index = (0..n).find(|&i| suffix[i] < tol);
    let diagonal_tail_max = decay_index.map(|i0| (i0..n).map(|i| b[(i, i)].norm()).fold(0.0, f64::max));
    Ok(CompactnessDiagnostic {
        hypotheses,
        verdict: if hypotheses.all() {
            CompactnessVerdict::Compact
        } else {
            CompactnessVerdict::NotCertified
        },
        provenance: Clause::Thm3_1,
        tol,
        dim: n,
        decay_index,
        diagonal_tail_max,
    })
}
