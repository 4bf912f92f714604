//! The tridiagonal space with orthonormal basis `fₙ(z) = (aₙ + bₙz)zⁿ`.
//!
//! Functions are handled either by their power-series coefficients or by
//! their coordinates in the basis `{fₙ}`; the two are related by a
//! two-term recurrence, so conversions are triangular solves.

use std::ops::Range;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, TridiagError};
use crate::sequences::{cmp_zero, AsymptoticsReport, CVanishing, SequencePair};

/// Target relative size of the uncovered tail in norm computations.
pub const NORM_REL_TOL: f64 = 1e-12;

/// Hard cap on the number of terms any tail summation may take.
const MAX_TAIL_TERMS: usize = 2_000_000;

#[derive(Debug, Clone)]
pub struct TridiagonalSpace {
    pair: SequencePair,
    truncation: usize,
    tail_safety_factor: f64,
    standing_assumption: bool,
    asymptotics: AsymptoticsReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonomialExpansion {
    pub n: usize,
    /// `α_{n+j}` for `j = 0..=depth`.
    pub coefficients: Vec<Complex64>,
    /// Upper bound on `Σ_{j>depth} |α_{n+j}|²`, when one can be certified.
    pub tail_bound: Option<f64>,
}

/// `‖zⁿ‖²`, or a partial sum of it when the tail cannot be certified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonomialNorm {
    pub n: usize,
    pub value: f64,
    pub ln_value: f64,
    /// Absolute bound on the omitted tail.
    pub tail_bound: Option<f64>,
    /// `tail_bound <= NORM_REL_TOL * value`. When false, `value` is a lower bound.
    pub certified: bool,
    pub terms: usize,
}

impl MonomialNorm {
    pub fn norm(&self) -> f64 {
        self.value.sqrt()
    }
}

/// `‖∂ⁿk(·,0)/∂w̄ⁿ‖`, with its logarithm for when the value overflows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelDerivNorm {
    pub value: f64,
    pub ln_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormEstimateReport {
    pub n_range: (usize, usize),
    pub norms: Vec<f64>,
    /// Smallest `M₁` with `‖zⁿ‖ <= M₁/|cₙaₙ|` on the scanned `n >= 1`; absent
    /// when some `cₙ` vanishes in range.
    pub m1: Option<f64>,
    /// Smallest `M₂` with `‖zⁿ‖ <= M₂/|aₙ|` on the scanned range.
    pub m2: f64,
    /// Same constant restricted to `n >= tail_index`.
    pub m2_tail: Option<f64>,
    /// `tail_safety_factor · (1 − r²)^{−1/2}`.
    pub m2_bound: Option<f64>,
    pub certified: bool,
}

/// Sum of the squared moduli of the free continuation `x_{j} = −b_{j−1}x_{j−1}/a_j`.
#[derive(Debug, Clone, Copy)]
struct Continuation {
    sum: f64,
    remainder: Option<f64>,
    terms: usize,
}

/// Whether the space meets its standing assumption.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StandingAssumption {
    /// The kernel series has radius of convergence one.
    pub unit_radius: bool,
}

impl TridiagonalSpace {
    pub fn new(pair: SequencePair, truncation: usize) -> Result<Self> {
        if truncation < 1 {
            return Err(TridiagError::TruncationTooSmall {
                min: 1,
                got: truncation,
            });
        }
        let radius = pair.a.base().norm().max(pair.b.base().norm());
        let asymptotics = pair.asymptotics();
        Ok(TridiagonalSpace {
            standing_assumption: cmp_zero(radius - 1.0).is_eq(),
            pair,
            truncation,
            tail_safety_factor: 1.0,
            asymptotics,
        })
    }

    pub fn with_tail_safety_factor(mut self, factor: f64) -> Result<Self> {
        if !(factor >= 1.0 && factor.is_finite()) {
            return Err(TridiagError::InvalidParameter(format!(
                "tail safety factor must be >= 1, got {factor}"
            )));
        }
        self.tail_safety_factor = factor;
        Ok(self)
    }

    pub fn pair(&self) -> &SequencePair {
        &self.pair
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn tail_safety_factor(&self) -> f64 {
        self.tail_safety_factor
    }

    pub fn asymptotics(&self) -> &AsymptoticsReport {
        &self.asymptotics
    }

    pub fn standing_assumption(&self) -> StandingAssumption {
        StandingAssumption {
            unit_radius: self.standing_assumption,
        }
    }

    pub fn a(&self, n: usize) -> Complex64 {
        self.pair.a.term(n)
    }

    pub fn b(&self, n: usize) -> Complex64 {
        self.pair.b.term(n)
    }

    /// `fₙ(z) = (aₙ + bₙz)zⁿ`.
    pub fn basis_eval(&self, n: usize, z: Complex64) -> Complex64 {
        (self.a(n) + self.b(n) * z) * z.powu(n as u32)
    }

    /// Power-series coefficients of `fₙ` (length `n + 2`).
    pub fn basis_power_coeffs(&self, n: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); n + 2];
        v[n] = self.a(n);
        v[n + 1] = self.b(n);
        v
    }

    /// Coefficient of `zⁿw̄ⁿ` in the kernel: `|aₙ|² + |bₙ₋₁|²`, with `b₋₁ = 0`.
    pub fn kernel_diag_coeff(&self, n: usize) -> f64 {
        let b_prev = if n == 0 { 0.0 } else { self.b(n - 1).norm_sqr() };
        self.a(n).norm_sqr() + b_prev
    }

    /// `k(z, w) ≈ Σ_{n<N} fₙ(z)·conj(fₙ(w))`.
    pub fn kernel_eval(&self, z: Complex64, w: Complex64, truncation: usize) -> Result<Complex64> {
        if truncation < 1 {
            return Err(TridiagError::TruncationTooSmall {
                min: 1,
                got: truncation,
            });
        }
        Ok((0..truncation)
            .map(|n| self.basis_eval(n, z) * self.basis_eval(n, w).conj())
            .sum())
    }

    /// The same truncated kernel summed along its three diagonals:
    /// `|a₀|² + Σ(|aₙ|²+|bₙ₋₁|²)(zw̄)ⁿ + Σ aₙb̄ₙ zⁿw̄ⁿ⁺¹ + Σ āₙbₙ zⁿ⁺¹w̄ⁿ`.
    pub fn kernel_eval_tridiagonal(&self, z: Complex64, w: Complex64, truncation: usize) -> Result<Complex64> {
        if truncation < 1 {
            return Err(TridiagError::TruncationTooSmall {
                min: 1,
                got: truncation,
            });
        }
        let wc = w.conj();
        let zw = z * wc;
        let mut total = Complex64::new(self.a(0).norm_sqr(), 0.0);
        let mut zw_pow = Complex64::new(1.0, 0.0);
        for n in 0..truncation {
            let (an, bn) = (self.a(n), self.b(n));
            total += an * bn.conj() * zw_pow * wc;
            total += an.conj() * bn * zw_pow * z;
            zw_pow *= zw;
            // diagonal term n + 1; its a-part only belongs to the truncation
            // when n + 1 < N.
            let a_part = if n + 1 < truncation {
                self.a(n + 1).norm_sqr()
            } else {
                0.0
            };
            total += (a_part + bn.norm_sqr()) * zw_pow;
        }
        Ok(total)
    }

    /// Basis coordinates of `K(·, w)`: `conj(fₙ(w))` for `n < N`.
    pub fn kernel_section_coords(&self, w: Complex64, truncation: usize) -> Vec<Complex64> {
        (0..truncation).map(|n| self.basis_eval(n, w).conj()).collect()
    }

    fn continuation(&self, m: usize, start_sq: f64, reference: f64, max_terms: usize) -> Continuation {
        let asym = &self.asymptotics;
        let tail = match (asym.geometric_tail_ratio, asym.tail_index) {
            (Some(r), Some(idx)) if !asym.tail_index_saturated => Some((r * r / (1.0 - r * r), idx)),
            _ => None,
        };
        let mut t = start_sq;
        let mut sum = 0.0;
        let mut terms = 0;
        let mut remainder = None;
        while terms < max_terms {
            let idx = m + terms + 1;
            t *= self.pair.tridiag_ratio(idx - 1).norm_sqr();
            sum += t;
            terms += 1;
            if t == 0.0 {
                remainder = Some(0.0);
                break;
            }
            if let Some((geo, tail_index)) = tail {
                if idx as u64 >= tail_index {
                    let rem = t * geo;
                    remainder = Some(rem);
                    if rem <= NORM_REL_TOL * (reference + sum) {
                        break;
                    }
                } else {
                    remainder = None;
                }
            }
        }
        Continuation { sum, remainder, terms }
    }

    /// `Σ_{i>=1} |x_{m+i}|²` for the free continuation
    /// `x_j = −(b_{j−1}/a_j)·x_{j−1}` started from `|x_m|² = start_sq`.
    pub(crate) fn free_tail_sq(&self, m: usize, start_sq: f64) -> f64 {
        if start_sq == 0.0 {
            return 0.0;
        }
        let cont = self.continuation(m, start_sq, start_sq, self.term_budget(m));
        cont.sum + cont.remainder.unwrap_or(0.0)
    }

    fn term_budget(&self, from: usize) -> usize {
        if self.asymptotics.tridiag_less_than_one && !self.asymptotics.tail_index_saturated {
            let idx = self.asymptotics.tail_index.unwrap_or(0) as usize;
            idx.saturating_sub(from)
                .saturating_add(MAX_TAIL_TERMS / 2)
                .min(MAX_TAIL_TERMS)
        } else {
            self.truncation
        }
    }

    /// `α_{n+j}` for `j = 0..=depth`, by the closed-form product
    /// `α_{n+j} = (−1)ʲ (1/aₙ) ∏_{k<j} b_{n+k}/a_{n+k+1}`.
    pub fn monomial_expand(&self, n: usize, depth: usize) -> MonomialExpansion {
        let mut coefficients = Vec::with_capacity(depth + 1);
        let mut alpha = Complex64::new(1.0, 0.0) / self.a(n);
        coefficients.push(alpha);
        for j in 1..=depth {
            alpha *= -self.pair.tridiag_ratio(n + j - 1);
            coefficients.push(alpha);
        }
        let last = n + depth;
        let start = alpha.norm_sqr();
        let cont = self.continuation(last, start, 0.0, self.term_budget(last));
        let tail_bound = if self.asymptotics.tridiag_less_than_one {
            cont.remainder.map(|r| cont.sum + r)
        } else {
            None
        };
        MonomialExpansion {
            n,
            coefficients,
            tail_bound,
        }
    }

    /// `‖zⁿ‖² = |aₙ|⁻² Σ_j |λ_{n,j}|²`, summed until the certified tail is
    /// below `NORM_REL_TOL` relative.
    pub fn monomial_norm_sq(&self, n: usize) -> MonomialNorm {
        let cont = self.continuation(n, 1.0, 1.0, self.term_budget(n));
        let s = 1.0 + cont.sum;
        let ln_value = s.ln() - 2.0 * self.pair.a.ln_abs(n);
        let value = ln_value.exp();
        let rel = if self.asymptotics.tridiag_less_than_one {
            cont.remainder.map(|r| r / s)
        } else {
            None
        };
        MonomialNorm {
            n,
            value,
            ln_value,
            tail_bound: rel.map(|r| r * value),
            certified: rel.is_some_and(|r| r <= NORM_REL_TOL),
            terms: cont.terms + 1,
        }
    }

    /// Basis coordinates of a polynomial given by power coefficients, by
    /// forward substitution `a_j x_j + b_{j−1} x_{j−1} = coeff_j`. The
    /// result has length `len`; coordinates past the input continue the
    /// recurrence with zero right-hand side.
    pub fn coeffs_to_basis(&self, coeffs: &[Complex64], len: usize) -> Result<Vec<Complex64>> {
        if coeffs.len() > len {
            return Err(TridiagError::InputTooLong {
                len: coeffs.len(),
                truncation: len,
            });
        }
        let zero = Complex64::new(0.0, 0.0);
        let mut x = Vec::with_capacity(len);
        for j in 0..len {
            let rhs = coeffs.get(j).copied().unwrap_or(zero);
            let carry = if j == 0 { zero } else { self.b(j - 1) * x[j - 1] };
            x.push((rhs - carry) / self.a(j));
        }
        Ok(x)
    }

    /// Power coefficients `A₀ = x₀a₀`, `Aₙ = xₙ₋₁bₙ₋₁ + xₙaₙ` of a finite basis
    /// combination (length `coords.len() + 1`).
    pub fn basis_to_coeffs(&self, coords: &[Complex64]) -> Vec<Complex64> {
        if coords.is_empty() {
            return Vec::new();
        }
        let zero = Complex64::new(0.0, 0.0);
        (0..=coords.len())
            .map(|n| {
                let own = coords.get(n).map_or(zero, |x| x * self.a(n));
                let prev = if n == 0 { zero } else { coords[n - 1] * self.b(n - 1) };
                own + prev
            })
            .collect()
    }

    /// `‖p‖²` for a polynomial with the given power coefficients, including
    /// the certified continuation past its degree.
    pub fn polynomial_norm_sq(&self, coeffs: &[Complex64]) -> MonomialNorm {
        let len = coeffs.len().max(1);
        let x = self.coeffs_to_basis(coeffs, len).expect("length chosen to fit");
        let head: f64 = x.iter().map(|v| v.norm_sqr()).sum();
        let last = x[len - 1].norm_sqr();
        let cont = self.continuation(len - 1, last, head, self.term_budget(len - 1));
        let value = head + cont.sum;
        let rem = if self.asymptotics.tridiag_less_than_one {
            cont.remainder
        } else {
            None
        };
        MonomialNorm {
            n: len - 1,
            value,
            ln_value: value.ln(),
            tail_bound: rem,
            certified: rem.is_some_and(|r| r <= NORM_REL_TOL * value.max(f64::MIN_POSITIVE)),
            terms: len + cont.terms,
        }
    }

    /// `(∂²ⁿk/∂zⁿ∂w̄ⁿ(0,0))^{1/2} = n!·(|aₙ|² + |bₙ₋₁|²)^{1/2}`.
    pub fn kernel_deriv_norm(&self, n: usize) -> KernelDerivNorm {
        let ln_fact: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
        let la = 2.0 * self.pair.a.ln_abs(n);
        let ln_diag = if n == 0 {
            la
        } else {
            let lb = 2.0 * self.pair.b.ln_abs(n - 1);
            let hi = la.max(lb);
            hi + ((la - hi).exp() + (lb - hi).exp()).ln()
        };
        let ln_value = ln_fact + 0.5 * ln_diag;
        KernelDerivNorm {
            value: ln_value.exp(),
            ln_value,
        }
    }

    /// Monomial norms over `n_range` with the empirical constants of the
    /// bounds `‖zⁿ‖ <= M₁/|cₙaₙ|` and `‖zⁿ‖ <= M₂/|aₙ|`.
    pub fn norm_estimates(&self, n_range: Range<usize>) -> NormEstimateReport {
        let asym = &self.asymptotics;
        let c_zero_free = matches!(asym.c_vanishing, CVanishing::Nowhere);
        let mut norms = Vec::with_capacity(n_range.len());
        let mut certified = true;
        let mut m1: Option<f64> = c_zero_free.then_some(0.0);
        let mut m2: f64 = 0.0;
        let mut m2_tail: Option<f64> = None;
        let tail_index = asym.tail_index.filter(|_| !asym.tail_index_saturated);
        for n in n_range.clone() {
            let mn = self.monomial_norm_sq(n);
            certified &= mn.certified;
            let norm = mn.norm();
            norms.push(norm);
            let m2_here = (0.5 * mn.ln_value + self.pair.a.ln_abs(n)).exp();
            m2 = m2.max(m2_here);
            if tail_index.is_some_and(|idx| n as u64 >= idx) {
                m2_tail = Some(m2_tail.unwrap_or(0.0).max(m2_here));
            }
            if n >= 1 {
                if let Some(m) = m1.as_mut() {
                    let ca = self.pair.c(n) * self.a(n);
                    *m = m.max(norm * ca.norm());
                }
            }
        }
        let m2_bound = asym
            .geometric_tail_ratio
            .map(|r| self.tail_safety_factor / (1.0 - r * r).sqrt());
        NormEstimateReport {
            n_range: (n_range.start, n_range.end),
            norms,
            m1,
            m2,
            m2_tail,
            m2_bound,
            certified,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::SequenceFamily;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn example_a() -> TridiagonalSpace {
        let pair = SequencePair::new(
            SequenceFamily::constant(1.0).unwrap(),
            SequenceFamily::constant(0.5).unwrap(),
        );
        TridiagonalSpace::new(pair, 200).unwrap()
    }

    fn linear_one() -> TridiagonalSpace {
        let pair = SequencePair::new(
            SequenceFamily::power_law(1.0).unwrap(),
            SequenceFamily::constant(1.0).unwrap(),
        );
        TridiagonalSpace::new(pair, 64).unwrap()
    }

    #[test]
    fn basis_eval_examples() {
        let s = example_a();
        assert_eq!(s.basis_eval(0, c(0.0, 0.0)), c(1.0, 0.0));
        assert_eq!(s.basis_eval(1, c(0.5, 0.0)), c(0.625, 0.0));
        assert_eq!(linear_one().basis_eval(2, c(0.0, 1.0)), c(-3.0, -1.0));
    }

    #[test]
    fn kernel_at_origin() {
        let s = example_a();
        assert_eq!(s.kernel_eval(c(0.0, 0.0), c(0.0, 0.0), 10).unwrap(), c(1.0, 0.0));
        let l = linear_one();
        assert_eq!(
            l.kernel_eval_tridiagonal(c(0.0, 0.0), c(0.0, 0.0), 10).unwrap(),
            c(1.0, 0.0)
        );
        assert!(s.kernel_eval(c(0.0, 0.0), c(0.0, 0.0), 0).is_err());
    }

    #[test]
    fn kernel_forms_agree_at_half() {
        let s = example_a();
        let z = c(0.5, 0.0);
        let k1 = s.kernel_eval(z, z, 200).unwrap();
        let k2 = s.kernel_eval_tridiagonal(z, z, 200).unwrap();
        assert!((k1 - k2).norm() <= 1e-12);
        // closed form: Σ (5/4)(1/4)ⁿ·... = Σ |1 + z/2|² |z|^{2n} = (25/16)/(3/4)
        assert!((k1.re - 25.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn expansion_examples() {
        let s = example_a();
        for n in [0, 3, 17] {
            let e = s.monomial_expand(n, 12);
            for (j, a) in e.coefficients.iter().enumerate() {
                let expected = (-0.5f64).powi(j as i32);
                assert!((a - c(expected, 0.0)).norm() < 1e-15);
            }
            assert!(e.tail_bound.unwrap() >= 0.25f64.powi(13) / 0.75 * (1.0 - 1e-12));
        }
        let e = linear_one().monomial_expand(0, 2);
        assert_eq!(e.coefficients[0], c(1.0, 0.0));
        assert!((e.coefficients[2] - c(1.0 / 6.0, 0.0)).norm() < 1e-16);
        assert_eq!(linear_one().monomial_expand(5, 0).coefficients[0], c(1.0 / 6.0, 0.0));
    }

    #[test]
    fn norm_of_constant_ratio_space() {
        let s = example_a();
        // Oracle: Σ_{j<200} 4^{-j}
        let oracle: f64 = (0..200).map(|j| 0.25f64.powi(j)).sum();
        for n in 0..=100 {
            let m = s.monomial_norm_sq(n);
            assert!(m.certified);
            assert!((m.value - oracle).abs() <= 1e-10, "n={n}: {}", m.value);
        }
    }

    #[test]
    fn norm_dominates_first_term() {
        let s = linear_one();
        for n in 0..30 {
            assert!(s.monomial_norm_sq(n).value >= 1.0 / s.a(n).norm_sqr());
        }
    }

    #[test]
    fn sqrt_family_norm_asymptotics() {
        let pair = SequencePair::new(
            SequenceFamily::power_law(0.5).unwrap(),
            SequenceFamily::geometric(0.5).unwrap(),
        );
        let s = TridiagonalSpace::new(pair, 64).unwrap();
        let scaled = |n: usize| s.monomial_norm_sq(n).value * (n + 1) as f64;
        assert!(scaled(0) - 1.0 > 0.1);
        for n in 0..12 {
            assert!(scaled(n + 1) < scaled(n));
        }
        for n in 30..=200 {
            assert!((scaled(n) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn coordinate_conversions() {
        let s = example_a();
        let f3 = s.basis_power_coeffs(3);
        let x = s.coeffs_to_basis(&f3, 8).unwrap();
        for (i, v) in x.iter().enumerate() {
            assert_eq!(*v, c(if i == 3 { 1.0 } else { 0.0 }, 0.0));
        }
        let mut e5 = vec![c(0.0, 0.0); 6];
        e5[5] = c(1.0, 0.0);
        let x = s.coeffs_to_basis(&e5, 16).unwrap();
        let expand = s.monomial_expand(5, 10);
        for j in 0..=10 {
            assert!((x[5 + j] - expand.coefficients[j]).norm() < 1e-15);
        }
        assert!(x[..5].iter().all(|v| *v == c(0.0, 0.0)));
        assert!(s.coeffs_to_basis(&[], 4).unwrap().iter().all(|v| v.norm() == 0.0));
        assert!(s.coeffs_to_basis(&e5, 3).is_err());
    }

    #[test]
    fn basis_to_coeffs_examples() {
        let s = example_a();
        assert_eq!(s.basis_to_coeffs(&[c(1.0, 0.0)]), vec![c(1.0, 0.0), c(0.5, 0.0)]);
        let l = linear_one();
        let got = l.basis_to_coeffs(&[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(got, vec![c(0.0, 0.0), c(2.0, 0.0), c(4.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn kernel_deriv_norm_examples() {
        let s = example_a();
        assert_eq!(s.kernel_deriv_norm(0).value, 1.0);
        assert!((s.kernel_deriv_norm(1).value - 5f64.sqrt() / 2.0).abs() < 1e-15);
        let l = linear_one();
        assert!((l.kernel_deriv_norm(2).value - 2.0 * 10f64.sqrt()).abs() < 1e-13);
        // log scale survives past the factorial overflow
        let big = s.kernel_deriv_norm(400);
        assert!(big.value.is_infinite());
        assert!(big.ln_value.is_finite() && big.ln_value > 700.0);
    }

    #[test]
    fn standing_assumption_flag() {
        assert!(example_a().standing_assumption().unit_radius);
        let pair = SequencePair::new(
            SequenceFamily::geometric(2.0).unwrap(),
            SequenceFamily::constant(1.0).unwrap(),
        );
        let s = TridiagonalSpace::new(pair, 8).unwrap();
        assert!(!s.standing_assumption().unit_radius);
    }

    #[test]
    fn uncertified_norms_are_flagged() {
        let pair = SequencePair::new(
            SequenceFamily::constant(1.0).unwrap(),
            SequenceFamily::constant(1.0).unwrap(),
        );
        let s = TridiagonalSpace::new(pair, 50).unwrap();
        let m = s.monomial_norm_sq(3);
        assert!(!m.certified);
        assert_eq!(m.tail_bound, None);
        assert_eq!(m.value, 51.0);
        assert_eq!(s.monomial_expand(0, 4).tail_bound, None);
    }

    #[test]
    fn norm_estimate_constants() {
        let pair = SequencePair::new(
            SequenceFamily::power_law(1.0).unwrap(),
            SequenceFamily::geometric(0.5).unwrap(),
        );
        let s = TridiagonalSpace::new(pair, 64).unwrap();
        let rep = s.norm_estimates(0..120);
        assert!(rep.certified);
        assert!(rep.m1.is_some());
        assert!(rep.m2 >= 1.0);
        assert!(rep.m2_tail.unwrap() <= rep.m2_bound.unwrap());
    }

    #[test]
    fn polynomial_norm_matches_monomial_norm() {
        let pair = SequencePair::new(
            SequenceFamily::power_law(1.0).unwrap(),
            SequenceFamily::geometric(0.5).unwrap(),
        );
        let t = TridiagonalSpace::new(pair, 64).unwrap();
        for n in 0..10 {
            let mut e = vec![c(0.0, 0.0); n + 1];
            e[n] = c(1.0, 0.0);
            let p = t.polynomial_norm_sq(&e);
            let m = t.monomial_norm_sq(n);
            assert!((p.value - m.value).abs() <= 1e-12 * m.value);
        }
    }
}
