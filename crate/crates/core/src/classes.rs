//! Members and extremal functions of the exponential and square-root
//! Ma–Minda starlike and convex classes.
//!
//! A starlike member is built from a Schwarz function `omega` through
//! `f(z) = z exp(int_0^z (p(t) - 1)/t dt)` with `p = phi(omega)`, where
//! `phi(w) = e^{lambda w}` or `sqrt(1 + c w)`. The convex member attached to
//! the same `omega` is its Alexander transform `g(z) = int_0^z f(t)/t dt`,
//! which satisfies `1 + z g''/g' = p`.
//!
//! Every function carries a Taylor series of order [`DEFAULT_ORDER`] and a
//! closed-form evaluator. The series is used for `|z| <= R_EVAL` when its tail
//! estimate is below [`TAIL_LIMIT`]; otherwise the inner integral is computed
//! in closed form (canonical `omega = ±z`) or by Gauss–Legendre quadrature
//! along `[0, z]`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::disk::UnitDiskPoint;
use crate::numeric::{ein, exprel, ln_1p};
use crate::quadrature::integrate_segment;
use crate::schwarz::{SchwarzError, SchwarzFunction};
use crate::series::{SeriesError, TruncatedSeries, DEFAULT_ORDER, R_EVAL, TAIL_LIMIT};

const QUAD_TOL: f64 = 1e-14;
const UNIVALENCE_FLOOR: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassError {
    #[error("parameter {value} is outside the range of the {family} family")]
    InvalidParameter { family: Family, value: f64 },
    #[error("unknown family {0:?} (expected exp or sqrt)")]
    UnknownFamily(String),
    #[error("unknown variant {0:?} (expected starlike or convex)")]
    UnknownVariant(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Schwarz(#[from] SchwarzError),
    #[error("f'(z) vanishes at z = {0}")]
    LocalUnivalenceViolation(Complex64),
    #[error("series evaluation unavailable at radius {radius} (tail estimate {tail:e})")]
    SeriesUnavailable { radius: f64, tail: f64 },
    #[error("function is not normalized: a0 = {a0}, a1 = {a1}")]
    NotNormalized { a0: Complex64, a1: Complex64 },
    #[error("f or f' vanishes at z = {0}")]
    EvaluationFailure(Complex64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Exp,
    Sqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Starlike,
    Convex,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Exp => "exp",
            Self::Sqrt => "sqrt",
        })
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Starlike => "starlike",
            Self::Convex => "convex",
        })
    }
}

impl FromStr for Family {
    type Err = ClassError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exp" => Ok(Self::Exp),
            "sqrt" => Ok(Self::Sqrt),
            other => Err(ClassError::UnknownFamily(other.to_string())),
        }
    }
}

impl FromStr for Variant {
    type Err = ClassError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "starlike" => Ok(Self::Starlike),
            "convex" => Ok(Self::Convex),
            other => Err(ClassError::UnknownVariant(other.to_string())),
        }
    }
}

impl Family {
    /// Upper end of the admissible parameter range (`pi/2` or `1`).
    pub fn max_parameter(self) -> f64 {
        match self {
            Self::Exp => FRAC_PI_2,
            Self::Sqrt => 1.0,
        }
    }

    pub fn accepts(self, parameter: f64) -> bool {
        parameter.is_finite() && parameter > 0.0 && parameter <= self.max_parameter()
    }
}

/// Selects the class: family, its parameter (`lambda` or `c`) and the variant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassSpec {
    pub family: Family,
    pub parameter: f64,
    pub variant: Variant,
}

impl ClassSpec {
    pub fn new(family: Family, parameter: f64, variant: Variant) -> Result<Self, ClassError> {
        if !family.accepts(parameter) {
            return Err(ClassError::InvalidParameter {
                family,
                value: parameter,
            });
        }
        Ok(Self {
            family,
            parameter,
            variant,
        })
    }

    pub fn exp(lambda: f64, variant: Variant) -> Result<Self, ClassError> {
        Self::new(Family::Exp, lambda, variant)
    }

    pub fn sqrt(c: f64, variant: Variant) -> Result<Self, ClassError> {
        Self::new(Family::Sqrt, c, variant)
    }

    pub fn with_variant(self, variant: Variant) -> Self {
        Self { variant, ..self }
    }

    pub fn phi(&self) -> Phi {
        Phi {
            family: self.family,
            parameter: self.parameter,
        }
    }
}

/// The subordinating function `phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phi {
    pub family: Family,
    pub parameter: f64,
}

impl Phi {
    pub fn value(&self, w: Complex64) -> Complex64 {
        let t = self.parameter;
        match self.family {
            Family::Exp => (w * t).exp(),
            Family::Sqrt => (w * t + 1.0).sqrt(),
        }
    }

    pub fn derivative(&self, w: Complex64) -> Complex64 {
        let t = self.parameter;
        match self.family {
            Family::Exp => (w * t).exp() * t,
            Family::Sqrt => (w * t + 1.0).sqrt().inv() * (0.5 * t),
        }
    }

    /// `phi'(w) / phi(w)`.
    pub fn log_derivative(&self, w: Complex64) -> Complex64 {
        let t = self.parameter;
        match self.family {
            Family::Exp => Complex64::new(t, 0.0),
            Family::Sqrt => (w * t + 1.0).inv() * (0.5 * t),
        }
    }

    /// `(phi(omega) - 1) / z` given `omega` and `omega / z`, without cancellation.
    pub fn difference_quotient(&self, omega: Complex64, quotient: Complex64) -> Complex64 {
        let t = self.parameter;
        match self.family {
            Family::Exp => quotient * t * exprel(omega * t),
            Family::Sqrt => quotient * t / ((omega * t + 1.0).sqrt() + 1.0),
        }
    }

    pub fn series_of(&self, omega: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        let t = Complex64::new(self.parameter, 0.0);
        match self.family {
            Family::Exp => Ok(omega.scale(t).exp()),
            Family::Sqrt => omega.scale(t).add_constant(Complex64::new(1.0, 0.0)).sqrt(),
        }
    }
}

/// `phi(z)` for a class.
pub fn phi_eval(spec: &ClassSpec, z: UnitDiskPoint) -> Complex64 {
    spec.phi().value(z.value())
}

/// Identifies how a function was constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionTag {
    Identity,
    Koebe,
    /// `z exp(int_0^z (e^{lambda t} - 1)/t dt)`.
    F1,
    /// `z exp(int_0^z (sqrt(1 - c t) - 1)/t dt)`.
    F2,
    /// Alexander transform of `F1`.
    F3,
    /// Alexander transform of `F2`.
    F4,
    Member,
    SeriesOnly,
}

/// `f`, `f'` and `f''` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub f: Complex64,
    pub df: Complex64,
    pub d2f: Complex64,
}

/// `p = phi(omega)` together with the series of `(p - 1)/z` and of its integral.
#[derive(Debug, Clone)]
pub struct Generator {
    phi: Phi,
    omega: SchwarzFunction,
    inner_series: TruncatedSeries,
}

impl Generator {
    fn new(phi: Phi, omega: SchwarzFunction, order: usize) -> Result<(Self, TruncatedSeries), ClassError> {
        let omega_series = omega.series(order);
        let p = phi.series_of(&omega_series)?;
        let q = p.add_constant(Complex64::new(-1.0, 0.0)).div_z();
        let inner_series = q.integrate();
        let f = inner_series.exp().mul_z();
        Ok((
            Self {
                phi,
                omega,
                inner_series,
            },
            f,
        ))
    }

    pub fn omega(&self) -> &SchwarzFunction {
        &self.omega
    }

    pub fn phi(&self) -> Phi {
        self.phi
    }

    /// `(p, p', (p - 1)/z)` at `z`.
    fn parts(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        let (quotient, w, dw) = self.omega.eval_all(z);
        let p = self.phi.value(w);
        let dp = self.phi.derivative(w) * dw;
        let q = self.phi.difference_quotient(w, quotient);
        (p, dp, q)
    }

    fn q(&self, z: Complex64) -> Complex64 {
        let w = self.omega.eval(z);
        self.phi.difference_quotient(w, self.omega.quotient(z))
    }

    /// `int_0^z (p(t) - 1)/t dt` in closed form for `omega = ±z`.
    fn closed_inner(&self, z: Complex64) -> Option<Complex64> {
        let sign = match self.omega {
            SchwarzFunction::Identity => 1.0,
            SchwarzFunction::Negation => -1.0,
            SchwarzFunction::Zero => return Some(Complex64::new(0.0, 0.0)),
            SchwarzFunction::Blaschke { .. } => return None,
        };
        let t = self.phi.parameter * sign;
        Some(match self.phi.family {
            Family::Exp => ein(z * t),
            Family::Sqrt => {
                // u = sqrt(1 + t z): integral is 2(u - 1) - 2 log((1 + u)/2)
                let u = (z * t + 1.0).sqrt();
                let um1 = z * t / (u + 1.0);
                um1 * 2.0 - ln_1p(um1 * 0.5) * 2.0
            }
        })
    }

    /// Inner integral by Gauss–Legendre along `[0, z]`.
    pub fn inner_by_quadrature(&self, z: Complex64) -> Complex64 {
        integrate_segment(|t| self.q(t), Complex64::new(0.0, 0.0), z, QUAD_TOL)
    }

    pub fn inner(&self, z: Complex64) -> Complex64 {
        if let Some(v) = self.closed_inner(z) {
            return v;
        }
        let r = z.norm();
        if r <= R_EVAL && self.inner_series.tail_bound(r) <= TAIL_LIMIT {
            return self.inner_series.horner(z);
        }
        self.inner_by_quadrature(z)
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Identity,
    Koebe,
    Starlike(Arc<Generator>),
    Convex(Arc<Generator>),
    SeriesOnly,
}

/// A normalized locally univalent function with closed-form and series evaluators.
#[derive(Debug, Clone)]
pub struct AnalyticFunction {
    tag: FunctionTag,
    spec: Option<ClassSpec>,
    series: TruncatedSeries,
    kind: Kind,
}

impl AnalyticFunction {
    pub fn identity() -> Self {
        Self {
            tag: FunctionTag::Identity,
            spec: None,
            series: TruncatedSeries::variable(DEFAULT_ORDER),
            kind: Kind::Identity,
        }
    }

    /// Koebe function `z / (1 - z)^2`.
    pub fn koebe() -> Self {
        Self {
            tag: FunctionTag::Koebe,
            spec: None,
            series: TruncatedSeries::from_fn(DEFAULT_ORDER, |n| Complex64::new(n as f64, 0.0)),
            kind: Kind::Koebe,
        }
    }

    pub fn tag(&self) -> FunctionTag {
        self.tag
    }

    pub fn spec(&self) -> Option<&ClassSpec> {
        self.spec.as_ref()
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn generator(&self) -> Option<&Generator> {
        match &self.kind {
            Kind::Starlike(g) | Kind::Convex(g) => Some(g),
            _ => None,
        }
    }

    /// True when all Taylor coefficients are real, so `f(conj z) = conj f(z)`.
    pub fn has_real_coefficients(&self) -> bool {
        self.series.coeffs().iter().all(|c| c.im == 0.0)
    }

    /// `f, f', f''` from the closed-form / quadrature path.
    pub fn jet(&self, z: Complex64) -> Jet {
        let one = Complex64::new(1.0, 0.0);
        match &self.kind {
            Kind::Identity => Jet {
                f: z,
                df: one,
                d2f: Complex64::new(0.0, 0.0),
            },
            Kind::Koebe => {
                let d = one - z;
                Jet {
                    f: z / (d * d),
                    df: (one + z) / (d * d * d),
                    d2f: (z * 2.0 + 4.0) / (d * d * d * d),
                }
            }
            Kind::Starlike(g) => {
                let (p, dp, q) = g.parts(z);
                let e = g.inner(z).exp();
                Jet {
                    f: z * e,
                    df: e * p,
                    d2f: e * (p * q + dp),
                }
            }
            Kind::Convex(g) => {
                let (_, _, q) = g.parts(z);
                let e = g.inner(z).exp();
                Jet {
                    f: self.convex_value(g, z),
                    df: e,
                    d2f: e * q,
                }
            }
            Kind::SeriesOnly => {
                let s0 = &self.series;
                let s1 = s0.derivative();
                let s2 = s1.derivative();
                Jet {
                    f: s0.horner(z),
                    df: s1.horner(z),
                    d2f: s2.horner(z),
                }
            }
        }
    }

    fn convex_value(&self, g: &Generator, z: Complex64) -> Complex64 {
        let r = z.norm();
        if r <= R_EVAL && self.series.tail_bound(r) <= TAIL_LIMIT {
            return self.series.horner(z);
        }
        integrate_segment(|t| g.inner(t).exp(), Complex64::new(0.0, 0.0), z, QUAD_TOL)
    }

    /// `f, f', f''` from the backing series; refused beyond `R_EVAL` or when
    /// the tail estimate of any of the three series exceeds `TAIL_LIMIT`.
    pub fn series_jet(&self, z: Complex64) -> Result<Jet, ClassError> {
        let r = z.norm();
        let s0 = &self.series;
        let s1 = s0.derivative();
        let s2 = s1.derivative();
        let tail = s0.tail_bound(r).max(s1.tail_bound(r)).max(s2.tail_bound(r));
        if r > R_EVAL || tail > TAIL_LIMIT {
            return Err(ClassError::SeriesUnavailable { radius: r, tail });
        }
        Ok(Jet {
            f: s0.horner(z),
            df: s1.horner(z),
            d2f: s2.horner(z),
        })
    }

    /// Series jet where available, closed-form path otherwise.
    pub fn eval_jet(&self, z: Complex64) -> Jet {
        self.series_jet(z).unwrap_or_else(|_| self.jet(z))
    }

    /// `f''(z) / f'(z)`.
    ///
    /// For integral-representation members the common factor
    /// `exp(int_0^z (p-1)/t dt)` of `f'` and `f''` is cancelled, leaving
    /// `(p - 1)/z + p'/p` (starlike) or `(p - 1)/z` (convex). The four
    /// extremal functions use their closed-form displays.
    pub fn pre_schwarzian_at(&self, z: Complex64) -> Result<Complex64, ClassError> {
        match &self.kind {
            Kind::Identity => Ok(Complex64::new(0.0, 0.0)),
            Kind::Koebe => {
                let one = Complex64::new(1.0, 0.0);
                let d = one - z;
                if ((one + z) / (d * d * d)).norm() < UNIVALENCE_FLOOR {
                    return Err(ClassError::LocalUnivalenceViolation(z));
                }
                Ok((z * 2.0 + 4.0) / ((one + z) * d))
            }
            Kind::Starlike(g) | Kind::Convex(g) => {
                let convex = matches!(self.kind, Kind::Convex(_));
                if let (Some(spec), true) = (&self.spec, self.is_extremal()) {
                    return Ok(extremal_pre_schwarzian(spec, z));
                }
                let (quotient, w, dw) = g.omega.eval_all(z);
                let p = g.phi.value(w);
                if p.norm() < UNIVALENCE_FLOOR {
                    return Err(ClassError::LocalUnivalenceViolation(z));
                }
                let q = g.phi.difference_quotient(w, quotient);
                if convex {
                    Ok(q)
                } else {
                    Ok(q + g.phi.log_derivative(w) * dw)
                }
            }
            Kind::SeriesOnly => {
                let j = self.series_jet(z)?;
                if j.df.norm() < UNIVALENCE_FLOOR {
                    return Err(ClassError::LocalUnivalenceViolation(z));
                }
                Ok(j.d2f / j.df)
            }
        }
    }

    /// Pre-Schwarzian from the generic member kernel, bypassing the
    /// extremal displays.
    pub fn pre_schwarzian_generic(&self, z: Complex64) -> Option<Complex64> {
        let g = self.generator()?;
        let (p, dp, q) = g.parts(z);
        Some(match self.kind {
            Kind::Convex(_) => q,
            _ => q + dp / p,
        })
    }

    /// Pre-Schwarzian as the quotient of the series jet.
    pub fn series_pre_schwarzian(&self, z: Complex64) -> Result<Complex64, ClassError> {
        let j = self.series_jet(z)?;
        Ok(j.d2f / j.df)
    }

    fn is_extremal(&self) -> bool {
        matches!(
            self.tag,
            FunctionTag::F1 | FunctionTag::F2 | FunctionTag::F3 | FunctionTag::F4
        )
    }
}

/// Pre-Schwarzian derivatives of the extremal functions:
/// `(e^{lz} + l z - 1)/z`, `-c/(2(1-cz)) - (1 - sqrt(1-cz))/z`,
/// `(e^{lz} - 1)/z` and `(sqrt(1-cz) - 1)/z`, with removable singularities
/// resolved.
pub fn extremal_pre_schwarzian(spec: &ClassSpec, z: Complex64) -> Complex64 {
    let t = spec.parameter;
    let one = Complex64::new(1.0, 0.0);
    match (spec.family, spec.variant) {
        (Family::Exp, Variant::Starlike) => exprel(z * t) * t + t,
        (Family::Exp, Variant::Convex) => exprel(z * t) * t,
        (Family::Sqrt, Variant::Starlike) => {
            let u = (one - z * t).sqrt();
            -(one - z * t).inv() * (0.5 * t) - t / (one + u)
        }
        (Family::Sqrt, Variant::Convex) => {
            let u = (one - z * t).sqrt();
            -t / (one + u)
        }
    }
}

/// Builds the class member attached to `omega`; convex specs return the
/// Alexander transform of the starlike member.
pub fn member_from_schwarz(spec: &ClassSpec, omega: SchwarzFunction) -> Result<AnalyticFunction, ClassError> {
    member_with_order(spec, omega, DEFAULT_ORDER)
}

pub fn member_with_order(
    spec: &ClassSpec,
    omega: SchwarzFunction,
    order: usize,
) -> Result<AnalyticFunction, ClassError> {
    let (generator, series) = Generator::new(spec.phi(), omega, order)?;
    let starlike = AnalyticFunction {
        tag: FunctionTag::Member,
        spec: Some(spec.with_variant(Variant::Starlike)),
        series,
        kind: Kind::Starlike(Arc::new(generator)),
    };
    match spec.variant {
        Variant::Starlike => Ok(starlike),
        Variant::Convex => alexander_transform(&starlike),
    }
}

/// The sharpness function of the matching theorem: `omega = z` for the
/// exponential family and `omega = -z` for the square-root family.
pub fn extremal(spec: &ClassSpec) -> AnalyticFunction {
    let omega = match spec.family {
        Family::Exp => SchwarzFunction::Identity,
        Family::Sqrt => SchwarzFunction::Negation,
    };
    let mut f = member_from_schwarz(spec, omega).expect("canonical members always construct");
    f.tag = match (spec.family, spec.variant) {
        (Family::Exp, Variant::Starlike) => FunctionTag::F1,
        (Family::Sqrt, Variant::Starlike) => FunctionTag::F2,
        (Family::Exp, Variant::Convex) => FunctionTag::F3,
        (Family::Sqrt, Variant::Convex) => FunctionTag::F4,
    };
    f
}

/// `J[f](z) = int_0^z f(t)/t dt`.
pub fn alexander_transform(f: &AnalyticFunction) -> Result<AnalyticFunction, ClassError> {
    let a0 = f.series.coeff(0);
    let a1 = f.series.coeff(1);
    if a0.norm() > 1e-14 || (a1 - 1.0).norm() > 1e-12 {
        return Err(ClassError::NotNormalized { a0, a1 });
    }
    let series = f.series.alexander();
    Ok(match &f.kind {
        Kind::Identity => AnalyticFunction::identity(),
        Kind::Starlike(g) => AnalyticFunction {
            tag: match f.tag {
                FunctionTag::F1 => FunctionTag::F3,
                FunctionTag::F2 => FunctionTag::F4,
                other => other,
            },
            spec: f.spec.map(|s| s.with_variant(Variant::Convex)),
            series,
            kind: Kind::Convex(Arc::clone(g)),
        },
        _ => AnalyticFunction {
            tag: FunctionTag::SeriesOnly,
            spec: None,
            series,
            kind: Kind::SeriesOnly,
        },
    })
}

/// Largest violation over `grid` of the sampled membership condition:
/// `|log w| <= lambda` or `|w^2 - 1| <= c`, where `w = z f'/f` (starlike)
/// or `w = 1 + z f''/f'` (convex), and `w = 1` at the origin.
pub fn membership_residual(
    spec: &ClassSpec,
    f: &AnalyticFunction,
    grid: &[UnitDiskPoint],
) -> Result<f64, ClassError> {
    let mut worst = 0.0f64;
    for p in grid {
        let z = p.value();
        let w = if z.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            let j = f.eval_jet(z);
            match spec.variant {
                Variant::Starlike => {
                    if j.f.norm() == 0.0 {
                        return Err(ClassError::EvaluationFailure(z));
                    }
                    z * j.df / j.f
                }
                Variant::Convex => {
                    if j.df.norm() == 0.0 {
                        return Err(ClassError::EvaluationFailure(z));
                    }
                    z * j.d2f / j.df + 1.0
                }
            }
        };
        if !(w.re.is_finite() && w.im.is_finite()) || w.norm() == 0.0 {
            return Err(ClassError::EvaluationFailure(z));
        }
        let excess = match spec.family {
            Family::Exp => w.ln().norm() - spec.parameter,
            Family::Sqrt => (w * w - 1.0).norm() - spec.parameter,
        };
        worst = worst.max(excess);
    }
    Ok(worst)
}
