//! Essential-spectrum annulus of the shift and the hypercyclic-subspace test.
//!
//! The annulus is the one of the weighted shift with weights `aₙ/aₙ₋₁`:
//! `sup_n (inf_k |a_{k+n}/a_k|)^{1/n} <= |z| <= inf_n (sup_k |a_{k+n}/a_k|)^{1/n}`,
//! `k >= 1`. For the parametric families both radii equal `|ρ_a|`; the
//! finite-horizon tables converge slowly when `p ≠ 0` and are diagnostics only.

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, TridiagError};
use crate::provenance::Clause;
use crate::sequences::{cmp_zero, SequencePair, Tri};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HorizonRow {
    pub n: usize,
    /// `(min_{1<=k<=kMax} |a_{k+n}/a_k|)^{1/n}`.
    pub inf_root: f64,
    /// `(max_{1<=k<=kMax} |a_{k+n}/a_k|)^{1/n}`.
    pub sup_root: f64,
    /// Running `sup` of `inf_root` over rows `1..=n`.
    pub running_inner: f64,
    /// Running `inf` of `sup_root` over rows `1..=n`.
    pub running_outer: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralAnnulus {
    pub inner: f64,
    pub outer: f64,
    pub n_max: usize,
    pub k_max: usize,
    pub finite_horizon_inner: f64,
    pub finite_horizon_outer: f64,
    pub rows: Vec<HorizonRow>,
    /// Overrides are present; they shape the tables but not the radii.
    pub overrides_ignored: bool,
    pub provenance: Clause,
}

impl SpectralAnnulus {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "inner": self.inner,
            "outer": self.outer,
            "horizons": {
                "n_max": self.n_max,
                "k_max": self.k_max,
                "finite_inner": self.finite_horizon_inner,
                "finite_outer": self.finite_horizon_outer,
                "rows": self.rows,
            },
            "overrides_ignored": self.overrides_ignored,
        })
    }
}

pub fn essential_spectrum(pair: &SequencePair, n_max: usize, k_max: usize) -> Result<SpectralAnnulus> {
    if n_max < 2 || k_max < 2 {
        return Err(TridiagError::InvalidParameter(format!(
            "annulus horizons must be at least 2, got nMax = {n_max}, kMax = {k_max}"
        )));
    }
    let a = &pair.a;
    let radius = a.base().norm();
    let mut rows = Vec::with_capacity(n_max);
    let mut inner = 0.0f64;
    let mut outer = f64::INFINITY;
    for n in 1..=n_max {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for k in 1..=k_max {
            let d = a.ln_abs_ratio(k + n, k);
            lo = lo.min(d);
            hi = hi.max(d);
        }
        let inf_root = (lo / n as f64).exp();
        let sup_root = (hi / n as f64).exp();
        inner = inner.max(inf_root);
        outer = outer.min(sup_root);
        rows.push(HorizonRow {
            n,
            inf_root,
            sup_root,
            running_inner: inner,
            running_outer: outer,
        });
    }
    Ok(SpectralAnnulus {
        inner: radius,
        outer: radius,
        n_max,
        k_max,
        finite_horizon_inner: inner,
        finite_horizon_outer: outer,
        rows,
        overrides_ignored: !a.overrides().is_empty(),
        provenance: Clause::Thm3_1,
    })
}

/// Outcome of the hypercyclic-subspace test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubspaceCheck {
    pub result: Tri,
    pub provenance: Clause,
    pub sup_infinite: Option<bool>,
    pub inner_radius: f64,
    pub lambda_abs: f64,
}

/// `λB` has a hypercyclic subspace iff `sup |λⁿaₙ| = ∞` and the inner
/// radius is at most `1/|λ|`; only defined under the strong hypotheses.
pub fn hc_subspace_check(pair: &SequencePair, lambda: Complex64) -> SubspaceCheck {
    let lambda_abs = lambda.norm();
    let asym = pair.asymptotics();
    let inner = pair.a.base().norm();
    if !(asym.ratio_bounded && asym.tridiag_less_than_one) || lambda_abs == 0.0 {
        return SubspaceCheck {
            result: Tri::Indeterminate,
            provenance: Clause::Cor4_5,
            sup_infinite: None,
            inner_radius: inner,
            lambda_abs,
        };
    }
    let sup_infinite = pair.divergence_tests(lambda_abs).sup_infinite;
    let meets_disc = cmp_zero(inner * lambda_abs - 1.0) != Ordering::Greater;
    SubspaceCheck {
        result: Tri::from_bool(sup_infinite && meets_disc),
        provenance: Clause::Cor4_5,
        sup_infinite: Some(sup_infinite),
        inner_radius: inner,
        lambda_abs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::SequenceFamily;

    fn lin_geo() -> SequencePair {
        SequencePair::new(
            SequenceFamily::power_law(1.0).unwrap(),
            SequenceFamily::geometric(0.5).unwrap(),
        )
    }

    #[test]
    fn geometric_radii_exact() {
        let p = SequencePair::new(
            SequenceFamily::geometric(0.9).unwrap(),
            SequenceFamily::geometric(0.3).unwrap(),
        );
        let s = essential_spectrum(&p, 20, 50).unwrap();
        assert_eq!((s.inner, s.outer), (0.9, 0.9));
        for row in &s.rows {
            assert!((row.inf_root - 0.9).abs() < 1e-12);
            assert!((row.sup_root - 0.9).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_family_outer_table() {
        let s = essential_spectrum(&lin_geo(), 50, 2000).unwrap();
        assert_eq!(s.outer, 1.0);
        // sup over k sits at k = 1: ((n+2)/2)^{1/n}
        let expected = 26f64.powf(1.0 / 50.0);
        assert!((s.finite_horizon_outer - expected).abs() < 1e-12);
        assert!(s.finite_horizon_inner <= s.finite_horizon_outer);
    }

    #[test]
    fn override_leaves_radii_unchanged() {
        let p = SequencePair::new(
            SequenceFamily::power_law(1.0)
                .unwrap()
                .with_override(0, Complex64::new(100.0, 0.0))
                .unwrap(),
            SequenceFamily::geometric(0.5).unwrap(),
        );
        let s = essential_spectrum(&p, 10, 100).unwrap();
        assert_eq!((s.inner, s.outer), (1.0, 1.0));
        assert!(s.overrides_ignored);
        // k starts at 1, so a₀ never enters the table
        let plain = essential_spectrum(&lin_geo(), 10, 100).unwrap();
        assert_eq!(s.rows, plain.rows);
    }

    #[test]
    fn subspace_examples() {
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(hc_subspace_check(&lin_geo(), one).result, Tri::Yes);
        assert_eq!(hc_subspace_check(&lin_geo(), 2.0 * one).result, Tri::No);
        let flat = SequencePair::new(
            SequenceFamily::constant(1.0).unwrap(),
            SequenceFamily::constant(0.5).unwrap(),
        );
        assert_eq!(hc_subspace_check(&flat, one).result, Tri::No);
        let weak = SequencePair::new(
            SequenceFamily::constant(1.0).unwrap(),
            SequenceFamily::constant(1.0).unwrap(),
        );
        assert_eq!(hc_subspace_check(&weak, one).result, Tri::Indeterminate);
    }
}
