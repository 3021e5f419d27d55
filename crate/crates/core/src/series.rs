//! Truncated complex power series about the origin.
//!
//! A [`TruncatedSeries`] of order `N` stores the Taylor coefficients
//! `a_0, ..., a_N`. Binary operations on series of different orders
//! truncate to the smaller order; every operation returns a new value.

use num_complex::Complex64;
use thiserror::Error;

use crate::disk::UnitDiskPoint;

/// Default truncation order for class-member series.
pub const DEFAULT_ORDER: usize = 64;

/// Largest radius at which series evaluation is attempted.
pub const R_EVAL: f64 = 0.9;

/// Largest acceptable single-term tail estimate for series-backed evaluation.
pub const TAIL_LIMIT: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("logarithm of a series with zero constant term")]
    ZeroConstantTerm,
    #[error("square root branch cut: constant term {0} lies on the closed negative real axis")]
    BranchCut(Complex64),
    #[error("composition requires an inner series with zero constant term, found {0}")]
    NonvanishingInner(Complex64),
    #[error("evaluation radius {radius} exceeds the series cap {limit}")]
    EvalRadiusExceeded { radius: f64, limit: f64 },
}

/// Value of a truncated series at a point together with the estimate
/// `|a_N| |z|^N / (1 - |z|)` of the discarded tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    pub tail_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    /// Builds a series from its coefficients. Fewer than two coefficients are
    /// zero-padded to order 1.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        if coeffs.len() < 2 {
            coeffs.resize(2, Complex64::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Complex64) -> Self {
        Self::new((0..=order.max(1)).map(f).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::from_fn(order, |_| Complex64::new(0.0, 0.0))
    }

    pub fn constant(order: usize, value: Complex64) -> Self {
        Self::from_fn(order, |k| if k == 0 { value } else { Complex64::new(0.0, 0.0) })
    }

    pub fn one(order: usize) -> Self {
        Self::constant(order, Complex64::new(1.0, 0.0))
    }

    /// The series of the identity map `z`.
    pub fn variable(order: usize) -> Self {
        Self::from_fn(order, |k| {
            if k == 1 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient `a_k`, zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.max(1).min(self.order());
        Self::new(self.coeffs[..=n].to_vec())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(n, |k| self.coeffs[k] + other.coeffs[k])
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(n, |k| self.coeffs[k] - other.coeffs[k])
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * factor).collect())
    }

    pub fn add_constant(&self, value: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += value;
        out
    }

    /// Cauchy product truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(n, |k| {
            (0..=k).map(|i| self.coeffs[i] * other.coeffs[k - i]).sum()
        })
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn recip(&self) -> Result<Self, SeriesError> {
        let a0 = self.coeffs[0];
        if a0 == Complex64::new(0.0, 0.0) {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let n = self.order();
        let mut b = vec![Complex64::new(0.0, 0.0); n + 1];
        b[0] = a0.inv();
        for k in 1..=n {
            let s: Complex64 = (1..=k).map(|i| self.coeffs[i] * b[k - i]).sum();
            b[k] = -s / a0;
        }
        Ok(Self::new(b))
    }

    /// `exp(a)` from the recurrence `n E_n = sum_k k a_k E_{n-k}`.
    pub fn exp(&self) -> Self {
        let n = self.order();
        let mut e = vec![Complex64::new(0.0, 0.0); n + 1];
        e[0] = self.coeffs[0].exp();
        for m in 1..=n {
            let s: Complex64 = (1..=m)
                .map(|k| self.coeffs[k] * e[m - k] * k as f64)
                .sum();
            e[m] = s / m as f64;
        }
        Self::new(e)
    }

    /// Principal logarithm.
    pub fn log(&self) -> Result<Self, SeriesError> {
        let a0 = self.coeffs[0];
        if a0 == Complex64::new(0.0, 0.0) {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let n = self.order();
        let mut l = vec![Complex64::new(0.0, 0.0); n + 1];
        l[0] = a0.ln();
        for m in 1..=n {
            let s: Complex64 = (1..m)
                .map(|k| l[k] * self.coeffs[m - k] * k as f64)
                .sum();
            l[m] = (self.coeffs[m] * m as f64 - s) / (a0 * m as f64);
        }
        Ok(Self::new(l))
    }

    /// Principal square root; the constant term must avoid `(-inf, 0]`.
    pub fn sqrt(&self) -> Result<Self, SeriesError> {
        let a0 = self.coeffs[0];
        if a0.im == 0.0 && a0.re <= 0.0 {
            return Err(SeriesError::BranchCut(a0));
        }
        let n = self.order();
        let mut s = vec![Complex64::new(0.0, 0.0); n + 1];
        s[0] = a0.sqrt();
        let two_s0 = s[0] * 2.0;
        for m in 1..=n {
            let acc: Complex64 = (1..m).map(|k| s[k] * s[m - k]).sum();
            s[m] = (self.coeffs[m] - acc) / two_s0;
        }
        Ok(Self::new(s))
    }

    /// Taylor coefficients of `self(inner(z))`; `inner` must vanish at 0.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        let c0 = inner.coeffs[0];
        if c0 != Complex64::new(0.0, 0.0) {
            return Err(SeriesError::NonvanishingInner(c0));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::constant(n, self.coeffs[n]);
        for k in (0..n).rev() {
            acc = acc.mul(&inner).add_constant(self.coeffs[k]);
        }
        Ok(acc)
    }

    /// Termwise derivative; the result has order `N - 1` (at least 1).
    pub fn derivative(&self) -> Self {
        let n = self.order();
        let m = (n - 1).max(1);
        Self::from_fn(m, |k| {
            if k + 1 <= n {
                self.coeffs[k + 1] * (k + 1) as f64
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Termwise antiderivative vanishing at 0, kept at the same order
    /// (the `z^{N+1}` term is dropped).
    pub fn integrate(&self) -> Self {
        let n = self.order();
        Self::from_fn(n, |k| {
            if k == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                self.coeffs[k - 1] / k as f64
            }
        })
    }

    /// Multiplication by `z`, raising the order by one.
    pub fn mul_z(&self) -> Self {
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(Complex64::new(0.0, 0.0));
        c.extend_from_slice(&self.coeffs);
        Self::new(c)
    }

    /// Division by `z` after discarding the constant term; order drops by one.
    pub fn div_z(&self) -> Self {
        Self::new(self.coeffs[1..].to_vec())
    }

    /// Alexander transform `z -> int_0^z f(t)/t dt` on coefficients:
    /// `b_n = a_n / n` for `n >= 1`, `b_0 = 0`.
    pub fn alexander(&self) -> Self {
        Self::from_fn(self.order(), |k| {
            if k == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                self.coeffs[k] / k as f64
            }
        })
    }

    /// Horner evaluation without a radius check.
    pub fn horner(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Single-term geometric tail estimate at radius `r < 1`.
    pub fn tail_bound(&self, r: f64) -> f64 {
        let n = self.order();
        if r >= 1.0 {
            return f64::INFINITY;
        }
        self.coeffs[n].norm() * r.powi(n as i32) / (1.0 - r)
    }

    /// Evaluates the truncated polynomial at `z`, refusing radii above [`R_EVAL`].
    pub fn eval(&self, z: UnitDiskPoint) -> Result<SeriesValue, SeriesError> {
        let r = z.norm();
        if r > R_EVAL {
            return Err(SeriesError::EvalRadiusExceeded {
                radius: r,
                limit: R_EVAL,
            });
        }
        Ok(SeriesValue {
            value: self.horner(z.value()),
            tail_bound: self.tail_bound(r),
        })
    }
}
