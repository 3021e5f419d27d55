//! The four alpha-equations, their roots, and the closed-form sharp bounds.
//!
//! Each equation `F(r) = 0` is a positive multiple of `h'(r)`, where `h` is
//! the radial majorant whose maximum is the sharp bound:
//!
//! | class | `h(r)` | `F(r) / h'(r)` |
//! |---|---|---|
//! | exp starlike | `(1-r^2)(e^{lr}+lr-1)/r` | `r^2` |
//! | sqrt starlike | `c(1-r^2)/(2(1-cr)) + (1-r^2)(1-sqrt(1-cr))/r` | `2r^2(1-cr)^2` |
//! | exp convex | `(1-r^2)(e^{lr}-1)/r` | `r^2` |
//! | sqrt convex | `(1-r^2)(1-sqrt(1-cr))/r` | `2r^2 sqrt(1-cr)` |
//!
//! Roots are bracketed and bisected on the cancellation-free form of `h'`;
//! the residual reported is `|F(alpha)|` from the polynomial-exponential
//! form of `F` as written.

use serde::Serialize;
use thiserror::Error;

use crate::classes::{ClassSpec, Family, Variant};
use crate::numeric::{exprel_prime_real, exprel_real, one_minus_sqrt1m};

/// Residual ceiling for a reported root.
pub const RESIDUAL_LIMIT: f64 = 1e-10;
/// Points in the uniqueness scan.
pub const SCAN_POINTS: usize = 10_000;
/// Interval of the uniqueness scan.
pub const SCAN_RANGE: (f64, f64) = (1e-6, 1.0 - 1e-6);
const BISECTION_WIDTH: f64 = 1e-13;
const EPS_START: f64 = 1e-8;
const COROLLARY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error("no sign change bracket for {spec:?}: h'({lo}) = {f_lo}, h'({hi}) = {f_hi}")]
    BracketFailure {
        spec: ClassSpec,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("uniqueness scan found {count} sign changes for {spec:?}")]
    NotUnique { spec: ClassSpec, count: usize },
    #[error("residual {residual:e} at alpha = {alpha} exceeds {RESIDUAL_LIMIT:e}")]
    Residual { alpha: f64, residual: f64 },
    #[error("theorem bound {theorem} and c = 1 form {corollary} differ by more than {COROLLARY_TOL:e}")]
    CorollaryMismatch { theorem: f64, corollary: f64 },
}

/// The alpha-equation attached to a class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaEquation {
    pub spec: ClassSpec,
}

impl AlphaEquation {
    pub fn new(spec: ClassSpec) -> Self {
        Self { spec }
    }

    /// `F(r)` exactly as written.
    pub fn residual(&self, r: f64) -> f64 {
        let t = self.spec.parameter;
        match (self.spec.family, self.spec.variant) {
            (Family::Exp, Variant::Starlike) => {
                let l = t;
                1.0 + r * r - 2.0 * l * r.powi(3)
                    - (l * r).exp() * (1.0 - l * r + r * r + l * r.powi(3))
            }
            (Family::Sqrt, Variant::Starlike) => {
                let c = t;
                -2.0 + 4.0 * c * r - (2.0 + c * c) * r * r + 2.0 * c * r.powi(3)
                    - c * c * r.powi(4)
                    + (1.0 - c * r).powf(1.5) * (2.0 - c * r + 2.0 * r * r - 3.0 * c * r.powi(3))
            }
            (Family::Exp, Variant::Convex) => {
                let l = t;
                l * r * (l * r).exp() * (1.0 - r * r) - (1.0 + r * r) * ((l * r).exp() - 1.0)
            }
            (Family::Sqrt, Variant::Convex) => {
                let c = t;
                2.0 * (1.0 + r * r) * (1.0 - (1.0 - c * r).sqrt()) - c * (r + 3.0 * r.powi(3))
            }
        }
    }

    /// `h'(r)` in cancellation-free form; same sign as `F` on `(0, 1)`.
    pub fn scaled(&self, r: f64) -> f64 {
        radial_derivative(&self.spec, r)
    }

    /// `F(r) / h'(r)`, the positive multiplier relating the two forms.
    pub fn multiplier(&self, r: f64) -> f64 {
        let c = self.spec.parameter;
        match (self.spec.family, self.spec.variant) {
            (Family::Exp, _) => r * r,
            (Family::Sqrt, Variant::Starlike) => 2.0 * r * r * (1.0 - c * r).powi(2),
            (Family::Sqrt, Variant::Convex) => 2.0 * r * r * (1.0 - c * r).sqrt(),
        }
    }

    /// Sign changes of `F` (raw) or of `h'` over `n` evenly spaced points of `[lo, hi]`.
    pub fn sign_changes(&self, lo: f64, hi: f64, n: usize, raw: bool) -> usize {
        let eval = |r: f64| if raw { self.residual(r) } else { self.scaled(r) };
        count_sign_changes((0..n).map(|i| eval(lo + (hi - lo) * i as f64 / (n - 1) as f64)))
    }
}

/// `-2 - r^2 + (2 + r + 3r^2) sqrt(1 - r)`, the `c = 1` starlike equation.
pub fn corollary_equation(r: f64) -> f64 {
    -2.0 - r * r + (2.0 + r + 3.0 * r * r) * (1.0 - r).sqrt()
}

/// `(1 + a)(2 - a - 2(1 - a)^{3/2}) / (2a)`, the `c = 1` starlike bound.
pub fn corollary_bound(alpha: f64) -> f64 {
    (1.0 + alpha) * (2.0 - alpha - 2.0 * (1.0 - alpha).powf(1.5)) / (2.0 * alpha)
}

fn count_sign_changes(values: impl Iterator<Item = f64>) -> usize {
    let mut last = 0.0f64;
    let mut count = 0;
    for v in values {
        if v == 0.0 || v.is_nan() {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            count += 1;
        }
        last = v;
    }
    count
}

/// The radial majorant `h(r)`, whose maximum on `[0, 1)` is the sharp bound.
pub fn radial_majorant(spec: &ClassSpec, r: f64) -> f64 {
    let t = spec.parameter;
    let w = 1.0 - r * r;
    match (spec.family, spec.variant) {
        (Family::Exp, Variant::Starlike) => w * (t * exprel_real(t * r) + t),
        (Family::Exp, Variant::Convex) => w * t * exprel_real(t * r),
        (Family::Sqrt, Variant::Starlike) => {
            t * w / (2.0 * (1.0 - t * r)) + w * t / (1.0 + (1.0 - t * r).sqrt())
        }
        (Family::Sqrt, Variant::Convex) => w * t / (1.0 + (1.0 - t * r).sqrt()),
    }
}

/// `h'(r)` without cancellation at small `r`.
pub fn radial_derivative(spec: &ClassSpec, s: f64) -> f64 {
    let t = spec.parameter;
    match (spec.family, spec.variant) {
        (Family::Exp, Variant::Starlike) => {
            let b = t * exprel_real(t * s) + t;
            let db = t * t * exprel_prime_real(t * s);
            -2.0 * s * b + (1.0 - s * s) * db
        }
        (Family::Exp, Variant::Convex) => {
            -2.0 * s * t * exprel_real(t * s) + (1.0 - s * s) * t * t * exprel_prime_real(t * s)
        }
        (Family::Sqrt, variant) => {
            let c = t;
            let u = (1.0 - c * s).sqrt();
            let w = 1.0 / (1.0 + u);
            // d/ds of c(1-s^2)/(1 + u) and of (1-s^2)c/(2(1-cs))
            let tail = -2.0 * s * c * w + (1.0 - s * s) * c * c / (2.0 * u * (1.0 + u).powi(2));
            match variant {
                Variant::Convex => tail,
                Variant::Starlike => {
                    let d = 1.0 - c * s;
                    0.5 * c * (c * (1.0 - s).powi(2) - 2.0 * s * (1.0 - c)) / (d * d) + tail
                }
            }
        }
    }
}

/// Root, bound and diagnostics for one class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub spec: ClassSpec,
    pub alpha: f64,
    pub bound: f64,
    /// `|F(alpha)|` from the equation as written.
    pub residual: f64,
    pub bracket: (f64, f64),
    /// Sign changes of `h'` in the uniqueness scan (always 1 on success).
    pub sign_changes: usize,
    /// For the square-root starlike class at `c = 1`, the bound from the `c = 1` form.
    pub corollary_bound: Option<f64>,
}

/// Unique root in `(0, 1)` of the class's alpha-equation.
pub fn alpha_root(spec: &ClassSpec) -> Result<BoundReport, BoundError> {
    let eq = AlphaEquation::new(*spec);
    let bracket_error = |lo: f64, hi: f64| BoundError::BracketFailure {
        spec: *spec,
        lo,
        hi,
        f_lo: eq.scaled(lo),
        f_hi: eq.scaled(hi),
    };

    // F(0) = 0, so step away from the trivial root until F > 0
    let mut lo = EPS_START;
    while !(eq.scaled(lo) > 0.0) {
        lo *= 2.0;
        if lo > 0.5 {
            return Err(bracket_error(EPS_START, 1.0 - EPS_START));
        }
    }
    let mut eps = EPS_START;
    let mut hi = 1.0 - eps;
    while !(eq.scaled(hi) < 0.0) {
        eps *= 2.0;
        hi = 1.0 - eps;
        if hi <= lo {
            return Err(bracket_error(lo, 1.0 - EPS_START));
        }
    }
    let bracket = (lo, hi);

    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if eq.scaled(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha = 0.5 * (lo + hi);

    let count = eq.sign_changes(SCAN_RANGE.0, SCAN_RANGE.1, SCAN_POINTS, false);
    if count != 1 {
        return Err(BoundError::NotUnique { spec: *spec, count });
    }
    let residual = eq.residual(alpha).abs();
    if !(residual <= RESIDUAL_LIMIT) {
        return Err(BoundError::Residual { alpha, residual });
    }
    Ok(BoundReport {
        spec: *spec,
        alpha,
        bound: radial_majorant(spec, alpha),
        residual,
        bracket,
        sign_changes: count,
        corollary_bound: None,
    })
}

/// The sharp bound on the pre-Schwarzian norm over the class.
pub fn norm_bound(spec: &ClassSpec) -> Result<BoundReport, BoundError> {
    let mut report = alpha_root(spec)?;
    if spec.family == Family::Sqrt && spec.variant == Variant::Starlike && spec.parameter == 1.0 {
        let corollary = corollary_bound(report.alpha);
        if (corollary - report.bound).abs() > COROLLARY_TOL {
            return Err(BoundError::CorollaryMismatch {
                theorem: report.bound,
                corollary,
            });
        }
        report.corollary_bound = Some(corollary);
    }
    Ok(report)
}

/// The bound in its closed display form, evaluated at `alpha`.
pub fn theorem_display(spec: &ClassSpec, alpha: f64) -> f64 {
    let t = spec.parameter;
    let a = alpha;
    match (spec.family, spec.variant) {
        (Family::Exp, Variant::Starlike) => (1.0 - a * a) * ((t * a).exp() + t * a - 1.0) / a,
        (Family::Sqrt, Variant::Starlike) => {
            t * (1.0 - a * a) / (2.0 * (1.0 - t * a))
                + (1.0 - a * a) * (1.0 - (1.0 - t * a).sqrt()) / a
        }
        (Family::Exp, Variant::Convex) => (1.0 - a * a) * ((t * a).exp() - 1.0) / a,
        (Family::Sqrt, Variant::Convex) => (1.0 - a * a) * one_minus_sqrt1m(t * a) / a,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn spec(f: Family, t: f64, v: Variant) -> ClassSpec {
        ClassSpec::new(f, t, v).unwrap()
    }

    #[test]
    fn canonical_roots_match_oracle() {
        // alpha and bound from 40-digit bisection of each equation
        let cases = [
            (Family::Exp, 1.0, Variant::Starlike, 0.129_666_061_665_606_73, 2.032_963_177_355_784_2),
            (Family::Sqrt, 1.0, Variant::Starlike, 0.569_485_592_376_949_6, 1.192_732_341_373_418_4),
            (Family::Exp, 1.0, Variant::Convex, 0.244_613_854_430_229_23, 1.065_131_179_297_229_1),
            (Family::Sqrt, 1.0, Variant::Convex, 0.136_882_885_337_042_74, 0.508_679_231_546_411),
        ];
        for (f, t, v, alpha, bound) in cases {
            let r = norm_bound(&spec(f, t, v)).unwrap();
            assert!((r.alpha - alpha).abs() < 1e-12, "{f:?} {v:?}: {}", r.alpha);
            assert!((r.bound - bound).abs() < 1e-12, "{f:?} {v:?}: {}", r.bound);
        }
    }

    #[test]
    fn equations_vanish_at_origin() {
        for (f, v) in [
            (Family::Exp, Variant::Starlike),
            (Family::Sqrt, Variant::Starlike),
            (Family::Exp, Variant::Convex),
            (Family::Sqrt, Variant::Convex),
        ] {
            let eq = AlphaEquation::new(spec(f, 0.7, v));
            assert_eq!(eq.residual(0.0), 0.0);
        }
        assert_eq!(corollary_equation(0.0), 0.0);
    }

    #[test]
    fn scaled_form_times_multiplier_is_raw() {
        for (f, v) in [
            (Family::Exp, Variant::Starlike),
            (Family::Sqrt, Variant::Starlike),
            (Family::Exp, Variant::Convex),
            (Family::Sqrt, Variant::Convex),
        ] {
            for &t in &[0.3, 0.9, 1.0] {
                let eq = AlphaEquation::new(spec(f, t, v));
                for i in 1..50 {
                    let r = i as f64 / 50.0;
                    let raw = eq.residual(r);
                    let via = eq.multiplier(r) * eq.scaled(r);
                    assert!((raw - via).abs() < 1e-13, "{f:?} {v:?} {t} {r}: {raw} vs {via}");
                }
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference_of_majorant() {
        let h = 1e-6;
        for (f, v) in [
            (Family::Exp, Variant::Starlike),
            (Family::Sqrt, Variant::Starlike),
            (Family::Exp, Variant::Convex),
            (Family::Sqrt, Variant::Convex),
        ] {
            let s = spec(f, 0.8, v);
            for &r in &[0.05, 0.3, 0.77] {
                let fd = (radial_majorant(&s, r + h) - radial_majorant(&s, r - h)) / (2.0 * h);
                assert!((fd - radial_derivative(&s, r)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn corollary_agrees_at_c_one() {
        let r = norm_bound(&spec(Family::Sqrt, 1.0, Variant::Starlike)).unwrap();
        let mut lo = 1e-6;
        let mut hi = 1.0 - 1e-12;
        while hi - lo > 1e-14 {
            let m = 0.5 * (lo + hi);
            if corollary_equation(m) > 0.0 {
                lo = m;
            } else {
                hi = m;
            }
        }
        assert!((r.alpha - 0.5 * (lo + hi)).abs() < 1e-10);
        assert!((r.corollary_bound.unwrap() - r.bound).abs() < 1e-12);
    }

    #[test]
    fn displays_match_stable_forms() {
        for (f, v) in [
            (Family::Exp, Variant::Starlike),
            (Family::Sqrt, Variant::Starlike),
            (Family::Exp, Variant::Convex),
            (Family::Sqrt, Variant::Convex),
        ] {
            for &t in &[0.25, 0.5, 1.0] {
                let s = spec(f, t, v);
                let r = norm_bound(&s).unwrap();
                assert!((theorem_display(&s, r.alpha) - r.bound).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn tiny_lambda_bound_degenerates() {
        let r = norm_bound(&spec(Family::Exp, 1e-4, Variant::Starlike)).unwrap();
        assert!(r.bound < 1e-3);
        assert!((r.alpha - 1e-4 / 8.0).abs() < 1e-7);
    }

    #[test]
    fn exp_top_of_range() {
        let r = norm_bound(&spec(Family::Exp, FRAC_PI_2, Variant::Starlike)).unwrap();
        assert!((r.alpha - 0.214_917_621_315_571_15).abs() < 1e-12);
        assert!((r.bound - 3.280_413_161_979_786_7).abs() < 1e-12);
    }

    #[test]
    fn sign_change_counter() {
        assert_eq!(count_sign_changes([1.0, 0.0, -1.0, -2.0].into_iter()), 1);
        assert_eq!(count_sign_changes([1.0, -1.0, 1.0].into_iter()), 2);
        assert_eq!(count_sign_changes([f64::NAN, 1.0].into_iter()), 0);
    }
}
