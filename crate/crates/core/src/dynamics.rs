//! Hypercyclicity, mixing and chaos of `λB`, plus finite witnesses.
//!
//! Verdicts come only from the analytic tests in [`crate::sequences`].
//! Dense orbits are not finitely checkable, so the traces produced here are
//! attached as evidence and never decide anything.

use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Result, TridiagError};
use crate::operator::{apply_shift_coeffs, boundedness_report, build_matrix, BoundednessVerdict};
use crate::provenance::Clause;
use crate::sequences::{CVanishing, SequencePair, Tri};
use crate::space::TridiagonalSpace;
use crate::spectrum::{hc_subspace_check, SubspaceCheck};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Horizon used for the advisory band-norm sums inside [`classify`].
pub const CLASSIFY_HORIZON: usize = 32;

/// A nonzero scalar `λ`; only `|λ|` enters any verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicsQuery {
    lambda: Complex64,
    modulus: f64,
}

impl DynamicsQuery {
    pub fn new(lambda: Complex64) -> Result<Self> {
        if lambda == ZERO || !lambda.is_finite() {
            return Err(TridiagError::ZeroLambda);
        }
        Ok(DynamicsQuery {
            lambda,
            modulus: lambda.norm(),
        })
    }

    pub fn real(lambda: f64) -> Result<Self> {
        Self::new(Complex64::new(lambda, 0.0))
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn modulus(&self) -> f64 {
        self.modulus
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HcStatus {
    /// Decided by an if-and-only-if characterization.
    YesIff,
    /// A sufficient condition holds.
    YesSufficient,
    NoIff,
    /// A necessary condition fails.
    NoNecessary,
    Indeterminate,
}

/// Verdict for one dynamical property with the clause that decided it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub status: HcStatus,
    pub clause: Option<Clause>,
}

impl Verdict {
    fn new(status: HcStatus, clause: Clause) -> Self {
        Verdict {
            status,
            clause: Some(clause),
        }
    }

    pub const INDETERMINATE: Verdict = Verdict {
        status: HcStatus::Indeterminate,
        clause: None,
    };

    pub fn is_yes(&self) -> bool {
        matches!(self.status, HcStatus::YesIff | HcStatus::YesSufficient)
    }

    pub fn is_no(&self) -> bool {
        matches!(self.status, HcStatus::NoIff | HcStatus::NoNecessary)
    }

    pub fn as_tri(&self) -> Tri {
        if self.is_yes() {
            Tri::Yes
        } else if self.is_no() {
            Tri::No
        } else {
            Tri::Indeterminate
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = match self.as_tri() {
            Tri::Yes => "yes",
            Tri::No => "no",
            Tri::Indeterminate => "indeterminate",
        };
        match self.clause {
            Some(c) => write!(f, "{word}[{c}]"),
            None => f.write_str(word),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `limsup |bₙ/aₙ₊₁| < 1`: every property has an iff test.
    Strong,
    /// Bounded through the band series only; sufficient/necessary clauses.
    SufficientOnly,
    NotProvenBounded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DynamicsReport {
    pub lambda_abs: f64,
    pub boundedness: BoundednessVerdict,
    pub regime: Regime,
    pub hypercyclic: Verdict,
    pub mixing: Verdict,
    pub chaotic: Verdict,
    pub hypercyclic_subspace: Option<SubspaceCheck>,
    pub c_vanishing: CVanishing,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Witnesses>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witnesses {
    pub gethner_shapiro: GethnerShapiroTrace,
    pub series: SeriesTrace,
}

/// Classify `λB` on the space defined by `pair`.
pub fn classify(pair: &SequencePair, query: &DynamicsQuery) -> DynamicsReport {
    let lambda_abs = query.modulus();
    let bounded = boundedness_report(pair, CLASSIFY_HORIZON).expect("fixed horizon is valid");
    let asym = pair.asymptotics();
    let c_vanishing = asym.c_vanishing.clone();
    let mut report = DynamicsReport {
        lambda_abs,
        boundedness: bounded.verdict,
        regime: Regime::NotProvenBounded,
        hypercyclic: Verdict::INDETERMINATE,
        mixing: Verdict::INDETERMINATE,
        chaotic: Verdict::INDETERMINATE,
        hypercyclic_subspace: None,
        c_vanishing,
        witnesses: None,
    };
    if !bounded.verdict.is_bounded() {
        return report;
    }
    let tests = pair.divergence_tests(lambda_abs);
    if bounded.strong_ok {
        let iff =
            |holds: bool, clause: Clause| Verdict::new(if holds { HcStatus::YesIff } else { HcStatus::NoIff }, clause);
        report.regime = Regime::Strong;
        report.hypercyclic = iff(tests.sup_infinite, Clause::Thm4_2iii);
        report.mixing = iff(tests.lim_infinite, Clause::Thm4_3iii);
        report.chaotic = iff(tests.inverse_square_summable, Clause::Thm4_4iii);
        report.hypercyclic_subspace = Some(hc_subspace_check(pair, query.lambda()));
        return report;
    }
    report.regime = Regime::SufficientOnly;
    let c_nonzero = matches!(report.c_vanishing, CVanishing::Nowhere);
    let decide = |sufficient: Tri, s_clause: Clause, necessary: bool, n_clause: Clause| {
        if c_nonzero && sufficient == Tri::Yes {
            Verdict::new(HcStatus::YesSufficient, s_clause)
        } else if !necessary {
            Verdict::new(HcStatus::NoNecessary, n_clause)
        } else {
            Verdict::INDETERMINATE
        }
    };
    report.hypercyclic = decide(
        tests.sup_ca_infinite,
        Clause::Thm4_2i,
        tests.sup_kernel_diag_infinite,
        Clause::Thm4_2ii,
    );
    report.mixing = decide(
        tests.lim_ca_infinite,
        Clause::Thm4_3i,
        tests.lim_kernel_diag_infinite,
        Clause::Thm4_3ii,
    );
    report
}

/// [`classify`] with Gethner–Shapiro and series traces attached.
pub fn classify_with_witnesses(space: &TridiagonalSpace, query: &DynamicsQuery, n_max: usize) -> DynamicsReport {
    let mut report = classify(space.pair(), query);
    report.witnesses = Some(Witnesses {
        gethner_shapiro: gethner_shapiro_witness(space, query, 0, n_max),
        series: unconditional_series_check(space, query, n_max),
    });
    report
}

/// Norms `|λ|⁻ⁿ‖z^{n+m}‖` of `λ⁻ⁿSⁿ(z^m)` for `n = 0..=n_max`, `S(zⁿ) = zⁿ⁺¹`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GethnerShapiroTrace {
    pub m: usize,
    pub lambda_abs: f64,
    pub values: Vec<f64>,
    pub ln_values: Vec<f64>,
    /// Every monomial norm in the trace had a certified tail.
    pub certified: bool,
}

impl GethnerShapiroTrace {
    /// Index from which the trace is strictly decreasing to the end.
    pub fn decreasing_from(&self) -> Option<usize> {
        let v = &self.ln_values;
        if v.len() < 2 {
            return None;
        }
        let mut start = v.len() - 1;
        while start > 0 && v[start] < v[start - 1] {
            start -= 1;
        }
        (start < v.len() - 1).then_some(start)
    }
}

pub fn gethner_shapiro_witness(
    space: &TridiagonalSpace,
    query: &DynamicsQuery,
    m: usize,
    n_max: usize,
) -> GethnerShapiroTrace {
    let ln_lambda = query.modulus().ln();
    let mut certified = true;
    let ln_values: Vec<f64> = (0..=n_max)
        .map(|n| {
            let norm = space.monomial_norm_sq(n + m);
            certified &= norm.certified;
            0.5 * norm.ln_value - n as f64 * ln_lambda
        })
        .collect();
    GethnerShapiroTrace {
        m,
        lambda_abs: query.modulus(),
        values: ln_values.iter().map(|v| v.exp()).collect(),
        ln_values,
        certified,
    }
}

/// Truncated periodic-vector construction `y = Σ_{k<=K} S^{kp} f` with
/// `S(zⁿ) = λ⁻¹zⁿ⁺¹`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicWitness {
    pub period: usize,
    pub k: usize,
    pub dim: usize,
    /// `y` in basis coordinates.
    pub y: Vec<Complex64>,
    /// `y − (λB)^p y` in power coefficients, via the truncated matrix.
    pub residual_coeffs: Vec<Complex64>,
    /// `S^{Kp}f − (λB)^p f` in power coefficients, via the coefficient shift.
    pub predicted_coeffs: Vec<Complex64>,
    /// `‖y − (λB)^p y‖` via the truncated matrix.
    pub residual_norm: f64,
    /// `‖S^{Kp}f − (λB)^p f‖` via certified norms.
    pub predicted_norm: f64,
    /// Max coefficient-space deviation between the two residual vectors.
    pub identity_deviation: f64,
    /// Set when the configuration is not in the chaotic regime.
    pub experimental: bool,
}

fn scale_shift_up(coeffs: &[Complex64], by: usize, scale: Complex64, len: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; len];
    for (i, c) in coeffs.iter().enumerate() {
        if i + by < len {
            out[i + by] = c * scale;
        }
    }
    out
}

/// A polynomial given either by power coefficients or as a finite basis
/// combination. `1` has no finite basis expansion, hence both forms.
#[derive(Debug, Clone, PartialEq)]
pub enum Polynomial {
    Coefficients(Vec<Complex64>),
    Basis(Vec<Complex64>),
}

impl Polynomial {
    pub fn one() -> Self {
        Polynomial::Coefficients(vec![Complex64::new(1.0, 0.0)])
    }

    pub fn to_coeffs(&self, space: &TridiagonalSpace) -> Vec<Complex64> {
        match self {
            Polynomial::Coefficients(c) => c.clone(),
            Polynomial::Basis(x) => space.basis_to_coeffs(x),
        }
    }
}

pub fn periodic_vector(
    space: &TridiagonalSpace,
    query: &DynamicsQuery,
    period: usize,
    f: &Polynomial,
    k: usize,
    dim: usize,
) -> Result<PeriodicWitness> {
    if period == 0 {
        return Err(TridiagError::InvalidParameter("period must be positive".into()));
    }
    let f_coeffs = f.to_coeffs(space);
    if f_coeffs.iter().all(|c| *c == ZERO) {
        return Err(TridiagError::InvalidParameter("f must be a nonzero polynomial".into()));
    }
    let degree = f_coeffs.len() - 1;
    let top = degree + k * period;
    let min_dim = top + period + 1;
    if dim < min_dim {
        return Err(TridiagError::TruncationTooSmall { min: min_dim, got: dim });
    }
    let lambda = query.lambda();
    let inv = lambda.inv();
    let len = top + 1;
    let mut y_coeffs = vec![ZERO; len];
    for kk in 0..=k {
        let shifted = scale_shift_up(&f_coeffs, kk * period, inv.powu((kk * period) as u32), len);
        for (acc, v) in y_coeffs.iter_mut().zip(shifted) {
            *acc += v;
        }
    }
    let y = space.coeffs_to_basis(&y_coeffs, dim)?;
    let matrix = build_matrix(space, dim)?;
    let mut image = y.clone();
    for _ in 0..period {
        image = matrix.apply_scaled(lambda, &image);
    }
    let residual: Vec<Complex64> = y.iter().zip(&image).map(|(a, b)| a - b).collect();
    let residual_norm = residual.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let residual_coeffs = space.basis_to_coeffs(&residual);

    // coefficient route: S^{Kp}f − (λB)^p f
    let mut predicted = scale_shift_up(&f_coeffs, k * period, inv.powu((k * period) as u32), len);
    let mut pushed = f_coeffs.clone();
    for _ in 0..period {
        pushed = apply_shift_coeffs(&pushed).into_iter().map(|c| c * lambda).collect();
    }
    for (i, c) in pushed.iter().enumerate() {
        predicted[i] -= c;
    }
    let predicted_norm = space.polynomial_norm_sq(&predicted).norm();
    let identity_deviation = (0..residual_coeffs.len().max(predicted.len()))
        .map(|i| {
            let a = residual_coeffs.get(i).copied().unwrap_or(ZERO);
            let b = predicted.get(i).copied().unwrap_or(ZERO);
            (a - b).norm()
        })
        .fold(0.0, f64::max);
    let chaotic = classify(space.pair(), query).chaotic.is_yes();
    Ok(PeriodicWitness {
        period,
        k,
        dim,
        y,
        residual_coeffs,
        predicted_coeffs: predicted,
        residual_norm,
        predicted_norm,
        identity_deviation,
        experimental: !chaotic,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Converging,
    Diverging,
    Inconclusive,
}

/// Partial sums of `Σ λ⁻ⁿzⁿ` in basis coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesTrace {
    pub n_max: usize,
    /// `‖λ⁻ⁿzⁿ‖`, the Cauchy increments.
    pub increments: Vec<f64>,
    /// `‖Σ_{n<=M} λ⁻ⁿzⁿ‖` for `M = 0..=n_max` (truncated where values stop
    /// being finite).
    pub partial_norms: Vec<f64>,
    /// `(M, ‖P_{n_max} − P_M‖)` at `M = 2^i < n_max`.
    pub cauchy_tails: Vec<(usize, f64)>,
    /// Analytic convergence verdict: `Σ|λⁿaₙ|⁻² < ∞` under the strong hypotheses.
    pub converges: Tri,
    pub trend: Trend,
}

pub fn unconditional_series_check(space: &TridiagonalSpace, query: &DynamicsQuery, n_max: usize) -> SeriesTrace {
    let pair = space.pair();
    let inv = query.lambda().inv();
    let ln_lambda = query.modulus().ln();
    let increments: Vec<f64> = (0..=n_max)
        .map(|n| (0.5 * space.monomial_norm_sq(n).ln_value - n as f64 * ln_lambda).exp())
        .collect();

    // forward substitution is causal, so x_j (j <= M) is shared by every P_M
    let mut x = Vec::with_capacity(n_max + 1);
    let mut coeff = Complex64::new(1.0, 0.0);
    for j in 0..=n_max {
        let carry = if j == 0 { ZERO } else { space.b(j - 1) * x[j - 1] };
        x.push((coeff - carry) / space.a(j));
        coeff *= inv;
        if !x[j].is_finite() {
            x.pop();
            break;
        }
    }
    let mut partial_norms = Vec::with_capacity(x.len());
    let mut head = 0.0;
    for (m, xm) in x.iter().enumerate() {
        head += xm.norm_sqr();
        let tail = space.free_tail_sq(m, xm.norm_sqr());
        partial_norms.push((head + tail).sqrt());
    }
    let mut cauchy_tails = Vec::new();
    let top = x.len().saturating_sub(1);
    let mut m = 1;
    while m < top {
        // P_top − P_m: coordinates x_j − (free continuation of x_m) for j > m
        let mut cont = x[m];
        let mut acc = 0.0;
        for (j, xj) in x.iter().enumerate().take(top + 1).skip(m + 1) {
            cont *= -pair.tridiag_ratio(j - 1);
            acc += (xj - cont).norm_sqr();
        }
        // past `top` both continue freely from their difference at `top`
        let diff_top = if top > m { x[top] - cont } else { ZERO };
        acc += space.free_tail_sq(top, diff_top.norm_sqr());
        cauchy_tails.push((m, acc.sqrt()));
        m *= 2;
    }
    let converges = if space.asymptotics().tridiag_less_than_one {
        Tri::from_bool(pair.divergence_tests(query.modulus()).inverse_square_summable)
    } else {
        Tri::Indeterminate
    };
    let trend = match (increments.first(), increments.last()) {
        _ if x.len() < n_max + 1 => Trend::Diverging,
        (Some(first), Some(last)) if !last.is_finite() || last > first => Trend::Diverging,
        (Some(first), Some(last)) if last < first => Trend::Converging,
        _ => Trend::Inconclusive,
    };
    SeriesTrace {
        n_max,
        increments,
        partial_norms,
        cauchy_tails,
        converges,
        trend,
    }
}

/// Norm trace of `(λB)^k x` for `k = 0..=steps`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitTrace {
    pub steps: usize,
    /// Through the truncated matrix.
    pub matrix_norms: Vec<f64>,
    /// Through the exact coefficient shift and certified norms.
    pub coefficient_norms: Vec<f64>,
    pub max_discrepancy: f64,
}

pub fn orbit(
    space: &TridiagonalSpace,
    query: &DynamicsQuery,
    x: &[Complex64],
    steps: usize,
    dim: usize,
) -> Result<OrbitTrace> {
    let degree = x.len();
    if steps + degree >= dim {
        return Err(TridiagError::TruncationTooSmall {
            min: steps + degree + 1,
            got: dim,
        });
    }
    let lambda = query.lambda();
    let matrix = build_matrix(space, dim)?;
    let mut v: Vec<Complex64> = (0..dim).map(|i| x.get(i).copied().unwrap_or(ZERO)).collect();
    let mut p = space.basis_to_coeffs(x);
    let mut matrix_norms = Vec::with_capacity(steps + 1);
    let mut coefficient_norms = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        matrix_norms.push(v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
        coefficient_norms.push(space.polynomial_norm_sq(&p).norm());
        if k < steps {
            v = matrix.apply_scaled(lambda, &v);
            p = apply_shift_coeffs(&p).into_iter().map(|c| c * lambda).collect();
        }
    }
    let max_discrepancy = matrix_norms
        .iter()
        .zip(&coefficient_norms)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(OrbitTrace {
        steps,
        matrix_norms,
        coefficient_norms,
        max_discrepancy,
    })
}
