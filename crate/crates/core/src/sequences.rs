//! Parametric coefficient sequences `C·ρⁿ·(n+1)^p` with finitely many
//! overridden terms, and the exact asymptotic tests built on them.
//!
//! Every sup / lim / series test used by the boundedness and dynamics
//! modules reduces to comparing a growth class `scale·baseⁿ·(n+1)^power`
//! against the unit class. Finite overrides never change a verdict, so the
//! analytic tables below ignore them; numeric scans exist only as
//! cross-checks.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::SequenceError;

/// Relative tolerance used when deciding whether a growth base equals one,
/// or whether two exponents coincide.
pub const UNIT_TOL: f64 = 1e-12;

/// Non-negative extended real: a finite value or `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    Infinite,
}

impl ExtReal {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::Infinite => None,
        }
    }

    /// `self < bound`, with `∞ < bound` always false.
    pub fn lt(self, bound: f64) -> bool {
        match self {
            ExtReal::Finite(v) => v < bound,
            ExtReal::Infinite => false,
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(v) => s.serialize_f64(*v),
            ExtReal::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Three-valued outcome of a test that the analytic table may not cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tri {
    Yes,
    No,
    Indeterminate,
}

impl Tri {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Tri::Yes
    }
}

/// Compare `x` with zero, treating `|x| <= UNIT_TOL` as equal.
pub(crate) fn cmp_zero(x: f64) -> Ordering {
    if x.abs() <= UNIT_TOL {
        Ordering::Equal
    } else if x < 0.0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Asymptotic modulus class `|xₙ| ≍ e^{ln_scale} · e^{n·ln_base} · (n+1)^power`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Growth {
    pub ln_scale: f64,
    pub ln_base: f64,
    pub power: f64,
}

impl Growth {
    pub fn new(ln_scale: f64, ln_base: f64, power: f64) -> Self {
        Growth {
            ln_scale,
            ln_base,
            power,
        }
    }

    /// Multiply the sequence by `λⁿ` for `|λ| = lambda_abs`.
    pub fn scaled(self, lambda_abs: f64) -> Self {
        Growth {
            ln_base: self.ln_base + lambda_abs.ln(),
            ..self
        }
    }

    pub fn times(self, other: Growth) -> Self {
        Growth {
            ln_scale: self.ln_scale + other.ln_scale,
            ln_base: self.ln_base + other.ln_base,
            power: self.power + other.power,
        }
    }

    /// Ordering of eventual size: base first, then polynomial power, then scale.
    pub fn cmp_rate(&self, other: &Growth) -> Ordering {
        cmp_zero(self.ln_base - other.ln_base)
            .then(cmp_zero(self.power - other.power))
            .then(cmp_zero(self.ln_scale - other.ln_scale))
    }

    /// Class of `|xₙ| + |yₙ|`: the dominant of the two.
    pub fn dominant(self, other: Growth) -> Self {
        if self.cmp_rate(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    /// `|xₙ| → ∞`; for a single-term class this is also `sup |xₙ| = ∞`.
    pub fn diverges(&self) -> bool {
        match cmp_zero(self.ln_base) {
            Ordering::Greater => true,
            Ordering::Equal => cmp_zero(self.power) == Ordering::Greater,
            Ordering::Less => false,
        }
    }

    pub fn bounded(&self) -> bool {
        !self.diverges()
    }

    /// `|xₙ| → 0`.
    pub fn vanishes(&self) -> bool {
        match cmp_zero(self.ln_base) {
            Ordering::Less => true,
            Ordering::Equal => cmp_zero(self.power) == Ordering::Less,
            Ordering::Greater => false,
        }
    }

    /// `Σ |xₙ|⁻² < ∞`.
    pub fn inverse_square_summable(&self) -> bool {
        match cmp_zero(self.ln_base) {
            Ordering::Greater => true,
            Ordering::Equal => cmp_zero(2.0 * self.power - 1.0) == Ordering::Greater,
            Ordering::Less => false,
        }
    }
}

/// A nonzero complex sequence `term(n) = C·ρⁿ·(n+1)^p`, except at the
/// finitely many overridden indices.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceFamily {
    coeff: Complex64,
    base: Complex64,
    power: f64,
    overrides: BTreeMap<usize, Complex64>,
}

fn nonzero_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite() && z != Complex64::new(0.0, 0.0)
}

impl SequenceFamily {
    pub fn new(coeff: Complex64, base: Complex64, power: f64) -> Result<Self, SequenceError> {
        if !nonzero_finite(coeff) {
            return Err(SequenceError::ZeroCoefficient);
        }
        if !nonzero_finite(base) {
            return Err(SequenceError::ZeroBase);
        }
        if !power.is_finite() {
            return Err(SequenceError::NonFinitePower(power));
        }
        Ok(SequenceFamily {
            coeff,
            base,
            power,
            overrides: BTreeMap::new(),
        })
    }

    /// Real-parameter shorthand for `C·ρⁿ·(n+1)^p`.
    pub fn real(coeff: f64, base: f64, power: f64) -> Result<Self, SequenceError> {
        Self::new(Complex64::new(coeff, 0.0), Complex64::new(base, 0.0), power)
    }

    /// The constant sequence `v`.
    pub fn constant(v: f64) -> Result<Self, SequenceError> {
        Self::real(v, 1.0, 0.0)
    }

    /// `ρⁿ`.
    pub fn geometric(base: f64) -> Result<Self, SequenceError> {
        Self::real(1.0, base, 0.0)
    }

    /// `(n+1)^p`.
    pub fn power_law(power: f64) -> Result<Self, SequenceError> {
        Self::real(1.0, 1.0, power)
    }

    pub fn with_override(mut self, n: usize, value: Complex64) -> Result<Self, SequenceError> {
        if !nonzero_finite(value) {
            return Err(SequenceError::ZeroOverride(n));
        }
        self.overrides.insert(n, value);
        Ok(self)
    }

    pub fn coeff(&self) -> Complex64 {
        self.coeff
    }

    pub fn base(&self) -> Complex64 {
        self.base
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn overrides(&self) -> &BTreeMap<usize, Complex64> {
        &self.overrides
    }

    /// Same family with every override removed.
    pub fn without_overrides(&self) -> Self {
        SequenceFamily {
            overrides: BTreeMap::new(),
            ..self.clone()
        }
    }

    pub fn max_override_index(&self) -> Option<usize> {
        self.overrides.keys().next_back().copied()
    }

    /// The `n`-th term. Very large `n` may overflow or underflow `f64`; use
    /// [`ln_abs`](Self::ln_abs) and the ratio helpers for asymptotic scans.
    pub fn term(&self, n: usize) -> Complex64 {
        if let Some(v) = self.overrides.get(&n) {
            return *v;
        }
        let poly = ((n + 1) as f64).powf(self.power);
        self.coeff * self.base.powu(n as u32) * poly
    }

    /// `ln |term(n)|`, computed without forming the term.
    pub fn ln_abs(&self, n: usize) -> f64 {
        if let Some(v) = self.overrides.get(&n) {
            return v.norm().ln();
        }
        self.coeff.norm().ln() + n as f64 * self.base.norm().ln() + self.power * ((n + 1) as f64).ln()
    }

    /// `ln |term(i)/term(j)|`. Off the overrides the coefficient cancels
    /// symbolically, so the value is unchanged by rescaling the family.
    pub fn ln_abs_ratio(&self, i: usize, j: usize) -> f64 {
        if self.overrides.contains_key(&i) || self.overrides.contains_key(&j) {
            return self.ln_abs(i) - self.ln_abs(j);
        }
        let steps = i as f64 - j as f64;
        let poly = if self.power == 0.0 {
            0.0
        } else {
            self.power * (steps / (j + 1) as f64).ln_1p()
        };
        steps * self.base.norm().ln() + poly
    }

    /// `arg term(n)` (not reduced modulo 2π).
    pub fn arg(&self, n: usize) -> f64 {
        if let Some(v) = self.overrides.get(&n) {
            return v.arg();
        }
        self.coeff.arg() + n as f64 * self.base.arg()
    }

    /// Modulus growth class of the formula part.
    pub fn growth(&self) -> Growth {
        Growth::new(self.coeff.norm().ln(), self.base.norm().ln(), self.power)
    }
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        z.re.to_string()
    } else {
        format!("({}{:+}i)", z.re, z.im)
    }
}

impl fmt::Display for SequenceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = Complex64::new(1.0, 0.0);
        let mut factors = Vec::new();
        if self.coeff != one {
            factors.push(fmt_complex(self.coeff));
        }
        if self.base != one {
            factors.push(format!("{}^n", fmt_complex(self.base)));
        }
        if self.power != 0.0 {
            factors.push(format!("(n+1)^{}", self.power));
        }
        if factors.is_empty() {
            factors.push("1".into());
        }
        f.write_str(&factors.join("·"))?;
        if !self.overrides.is_empty() {
            let k = self.overrides.len();
            write!(f, " [{k} override{}]", if k == 1 { "" } else { "s" })?;
        }
        Ok(())
    }
}

impl fmt::Display for SequencePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a = {}, b = {}", self.a, self.b)
    }
}

/// `num.term(i) / den.term(j)`, falling back to log-polar arithmetic when the
/// terms themselves are not representable.
pub fn term_ratio(num: &SequenceFamily, i: usize, den: &SequenceFamily, j: usize) -> Complex64 {
    let x = num.term(i);
    let y = den.term(j);
    if x.is_normal() && y.is_normal() {
        let q = x / y;
        if q.is_finite() {
            return q;
        }
    }
    Complex64::from_polar((num.ln_abs(i) - den.ln_abs(j)).exp(), num.arg(i) - den.arg(j))
}

/// The pair `(a, b)` defining a tridiagonal space.
#[derive(Debug, Clone, PartialEq)]
pub struct SequencePair {
    pub a: SequenceFamily,
    pub b: SequenceFamily,
}

/// How the derived sequence `cₙ` behaves for `n` past every override.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CAsymptotics {
    /// `bₙ/aₙ` is eventually constant, so `cₙ = 0` for all large `n`.
    EventuallyZero,
    Growth(Growth),
}

/// Where `cₙ ≠ 0` fails, if anywhere.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "indices")]
pub enum CVanishing {
    Nowhere,
    /// Finitely many indices, all at or below the returned values.
    At(Vec<usize>),
    Eventually,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticsReport {
    /// `lim |aₙ₊₁/aₙ| = |ρ_a|`.
    pub ratio_limit_a: f64,
    /// `limsup |bₙ/aₙ₊₁|`.
    pub tridiag_limsup: ExtReal,
    pub tridiag_less_than_one: bool,
    pub c_limit_zero: bool,
    pub ratio_bounded: bool,
    pub c_bounded: bool,
    pub c_asymptotics: CAsymptotics,
    /// Ratio `r < 1` with `|bₙ/aₙ₊₁| <= r` for every `n >= tail_index`.
    pub geometric_tail_ratio: Option<f64>,
    pub tail_index: Option<u64>,
    /// Set when the tail index search hit its cap (`2^53`).
    pub tail_index_saturated: bool,
    pub c_vanishing: CVanishing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DivergenceTests {
    /// `sup |λⁿaₙ| = ∞`.
    pub sup_infinite: bool,
    /// `lim |λⁿaₙ| = ∞`.
    pub lim_infinite: bool,
    /// `Σ |λⁿaₙ|⁻² < ∞`.
    pub inverse_square_summable: bool,
    /// `sup |λⁿcₙaₙ| = ∞`.
    pub sup_ca_infinite: Tri,
    /// `lim |λⁿcₙaₙ| = ∞`.
    pub lim_ca_infinite: Tri,
    /// `sup |λ|ⁿ(|aₙ| + |bₙ₋₁|) = ∞`.
    pub sup_kernel_diag_infinite: bool,
    /// `lim |λ|ⁿ(|aₙ| + |bₙ₋₁|) = ∞`.
    pub lim_kernel_diag_infinite: bool,
}

const TAIL_INDEX_CAP: u64 = 1 << 53;

impl SequencePair {
    pub fn new(a: SequenceFamily, b: SequenceFamily) -> Self {
        SequencePair { a, b }
    }

    pub fn without_overrides(&self) -> Self {
        SequencePair::new(self.a.without_overrides(), self.b.without_overrides())
    }

    /// `bₙ/aₙ`.
    pub fn b_over_a(&self, n: usize) -> Complex64 {
        term_ratio(&self.b, n, &self.a, n)
    }

    /// `cₙ = bₙ/aₙ − bₙ₋₁/aₙ₋₁` for `n >= 1`.
    pub fn c(&self, n: usize) -> Complex64 {
        assert!(n >= 1, "c is defined for n >= 1");
        self.b_over_a(n) - self.b_over_a(n - 1)
    }

    /// `bₙ/aₙ₊₁`.
    pub fn tridiag_ratio(&self, n: usize) -> Complex64 {
        term_ratio(&self.b, n, &self.a, n + 1)
    }

    /// Weight `aₙ/aₙ₋₁` for `n >= 1`.
    pub fn weight(&self, n: usize) -> Complex64 {
        term_ratio(&self.a, n, &self.a, n - 1)
    }

    fn ln_q(&self) -> f64 {
        self.b.base.norm().ln() - self.a.base.norm().ln()
    }

    /// `limsup |bₙ/aₙ₊₁|` from the family parameters.
    pub fn tridiag_limsup(&self) -> ExtReal {
        let (a, b) = (&self.a, &self.b);
        match cmp_zero(self.ln_q()) {
            Ordering::Less => ExtReal::Finite(0.0),
            Ordering::Greater => ExtReal::Infinite,
            Ordering::Equal => match cmp_zero(b.power - a.power) {
                Ordering::Less => ExtReal::Finite(0.0),
                Ordering::Greater => ExtReal::Infinite,
                Ordering::Equal => ExtReal::Finite(b.coeff.norm() / (a.coeff.norm() * a.base.norm())),
            },
        }
    }

    /// `limsup |bₙ/aₙ₊₁| < 1`, treating a limsup within `UNIT_TOL` of one as one.
    pub fn tridiag_less_than_one(&self) -> bool {
        match self.tridiag_limsup() {
            ExtReal::Finite(l) => cmp_zero(l - 1.0) == Ordering::Less,
            ExtReal::Infinite => false,
        }
    }

    /// Asymptotic form of `cₙ`, from `bₙ/aₙ = K·q̃ⁿ·(n+1)^s`.
    pub fn c_asymptotics(&self) -> CAsymptotics {
        let (a, b) = (&self.a, &self.b);
        let k = b.coeff / a.coeff;
        let qt = b.base / a.base;
        let s = b.power - a.power;
        let ln_q = self.ln_q();
        let unit_ratio = (qt - 1.0).norm() <= UNIT_TOL;
        if unit_ratio {
            if cmp_zero(s) == Ordering::Equal {
                CAsymptotics::EventuallyZero
            } else {
                // K·[(n+1)^s − n^s] ~ K·s·n^{s−1}
                CAsymptotics::Growth(Growth::new((k.norm() * s.abs()).ln(), 0.0, s - 1.0))
            }
        } else {
            // h(n−1)·(q̃·((n+1)/n)^s − 1) ~ K·q̃^{n−1}·n^s·(q̃ − 1)
            CAsymptotics::Growth(Growth::new(k.norm().ln() + (qt - 1.0).norm().ln() - ln_q, ln_q, s))
        }
    }

    fn c_is_zero(&self, n: usize) -> bool {
        let x = self.b_over_a(n);
        let y = self.b_over_a(n - 1);
        (x - y).norm() <= 1e-14 * (x.norm() + y.norm())
    }

    /// Exact check of the standing hypothesis `cₙ ≠ 0` for all `n >= 1`.
    pub fn c_vanishing(&self) -> CVanishing {
        if self.c_asymptotics() == CAsymptotics::EventuallyZero {
            return CVanishing::Eventually;
        }
        let last_override = self
            .a
            .max_override_index()
            .max(self.b.max_override_index())
            .unwrap_or(0);
        let scan_end = last_override + 2;
        let mut zeros: Vec<usize> = (1..=scan_end).filter(|&n| self.c_is_zero(n)).collect();

        // Past the overrides cₙ = 0 iff q̃·((n+1)/n)^s = 1, which needs q̃ > 0 real.
        let qt = self.b.base / self.a.base;
        let s = self.b.power - self.a.power;
        if qt.im.abs() <= UNIT_TOL * qt.norm() && qt.re > 0.0 && cmp_zero(s) != Ordering::Equal {
            let t = qt.re.powf(-1.0 / s);
            if t > 1.0 {
                let n = 1.0 / (t - 1.0);
                if n.is_finite() && n < 1e15 {
                    let lo = n.floor().max(1.0) as usize;
                    for m in lo..=lo + 1 {
                        if m > scan_end && self.c_is_zero(m) {
                            zeros.push(m);
                        }
                    }
                }
            }
        }
        if zeros.is_empty() {
            CVanishing::Nowhere
        } else {
            CVanishing::At(zeros)
        }
    }

    /// Smallest `n >= n_min` with `|bₙ/aₙ₊₁| <= r` from there on, using the
    /// formula part (valid past every override).
    fn tail_index(&self, r: f64, n_min: u64) -> (u64, bool) {
        let (a, b) = (&self.a, &self.b);
        let ln_q = self.ln_q();
        let c0 = b.coeff.norm().ln() - a.coeff.norm().ln() - a.base.norm().ln();
        let (pa, pb) = (a.power, b.power);
        let g = |x: f64| c0 + x * ln_q + pb * (x + 1.0).ln() - pa * (x + 2.0).ln();
        // Start of the region where g is non-increasing, or where it stays
        // below its limit.
        let x0 = match cmp_zero(ln_q) {
            Ordering::Less => ((pa.abs() + pb.abs()) / ln_q.abs() - 1.0).max(0.0),
            _ if cmp_zero(pb - pa) == Ordering::Less => ((2.0 * pb - pa) / (pa - pb)).max(0.0),
            _ => 0.0,
        };
        let target = r.ln();
        let start = n_min.max(x0.ceil() as u64);
        let ok = |n: u64| g(n as f64) <= target;
        if ok(start) {
            return (start, false);
        }
        let mut step = 1u64;
        let mut lo = start;
        loop {
            let hi = start.saturating_add(step);
            if hi >= TAIL_INDEX_CAP {
                return (TAIL_INDEX_CAP, true);
            }
            if ok(hi) {
                let mut hi = hi;
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    if ok(mid) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                return (hi, false);
            }
            lo = hi;
            step *= 2;
        }
    }

    pub fn asymptotics(&self) -> AsymptoticsReport {
        let limsup = self.tridiag_limsup();
        let less_than_one = self.tridiag_less_than_one();
        let c_asym = self.c_asymptotics();
        let (c_limit_zero, c_bounded) = match c_asym {
            CAsymptotics::EventuallyZero => (true, true),
            CAsymptotics::Growth(g) => (g.vanishes(), g.bounded()),
        };
        let (ratio, index, saturated) = if less_than_one {
            let l = limsup.finite().unwrap_or(0.0);
            let r = if l == 0.0 { 0.5 } else { 0.5 * (1.0 + l) };
            let n_b = self.b.max_override_index().map_or(0, |n| n + 1);
            let n_a = self.a.max_override_index().unwrap_or(0);
            let (idx, sat) = self.tail_index(r, n_b.max(n_a) as u64);
            (Some(r), Some(idx), sat)
        } else {
            (None, None, false)
        };
        AsymptoticsReport {
            ratio_limit_a: self.a.base.norm(),
            tridiag_limsup: limsup,
            tridiag_less_than_one: less_than_one,
            c_limit_zero,
            // |aₙ₊₁/aₙ| → |ρ_a| for every family, overrides being finite.
            ratio_bounded: true,
            c_bounded,
            c_asymptotics: c_asym,
            geometric_tail_ratio: ratio,
            tail_index: index,
            tail_index_saturated: saturated,
            c_vanishing: self.c_vanishing(),
        }
    }

    /// Growth class of `cₙ·aₙ`, if `cₙ` is not eventually zero.
    pub fn ca_growth(&self) -> Option<Growth> {
        match self.c_asymptotics() {
            CAsymptotics::EventuallyZero => None,
            CAsymptotics::Growth(g) => Some(g.times(self.a.growth())),
        }
    }

    /// Growth class of `|aₙ| + |bₙ₋₁|`.
    pub fn kernel_diag_growth(&self) -> Growth {
        let b = self.b.growth();
        // |b_{n−1}| = |C_b|·|ρ_b|^{n−1}·n^{p_b}
        let b_shifted = Growth::new(b.ln_scale - b.ln_base, b.ln_base, b.power);
        self.a.growth().dominant(b_shifted)
    }

    /// The sup / lim / series tests for `λB`; only `|λ|` matters.
    pub fn divergence_tests(&self, lambda_abs: f64) -> DivergenceTests {
        let a = self.a.growth().scaled(lambda_abs);
        let ca = self.ca_growth().map(|g| g.scaled(lambda_abs));
        let kd = self.kernel_diag_growth().scaled(lambda_abs);
        let tri = |f: fn(&Growth) -> bool| ca.as_ref().map_or(Tri::Indeterminate, |g| Tri::from_bool(f(g)));
        DivergenceTests {
            sup_infinite: a.diverges(),
            lim_infinite: a.diverges(),
            inverse_square_summable: a.inverse_square_summable(),
            sup_ca_infinite: tri(Growth::diverges),
            lim_ca_infinite: tri(Growth::diverges),
            sup_kernel_diag_infinite: kd.diverges(),
            lim_kernel_diag_infinite: kd.diverges(),
        }
    }
}
