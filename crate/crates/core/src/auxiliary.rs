//! Auxiliary functions from the monotonicity arguments behind the sharp
//! bounds, with floating-point sign certificates and endpoint checks.
//!
//! The certificates are numerical evidence on finite grids, not proofs.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::bounds::{corollary_equation, radial_derivative};
use crate::classes::{ClassSpec, Family, Variant};
use crate::numeric::one_minus_sqrt1m;

/// Distance kept from the ends of `(0, 1)` by the certificate grids.
pub const GRID_MARGIN: f64 = 1e-3;
/// Central-difference step for first derivatives.
pub const FD_STEP_FIRST: f64 = 1e-5;
/// Central-difference step for second derivatives.
pub const FD_STEP_SECOND: f64 = 1e-4;
/// Smallest accepted certificate grid.
pub const MIN_GRID: usize = 1000;
const ENDPOINT_TOL: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AuxError {
    #[error("{id} is undefined at {point:?}")]
    DomainViolation { id: AuxFunctionId, point: AuxPoint },
    #[error("{id} takes a {expected} argument")]
    WrongArity { id: AuxFunctionId, expected: &'static str },
    #[error("certificate grid of {0} points is below the minimum {MIN_GRID}")]
    GridTooSmall(usize),
    #[error("unknown auxiliary function {0:?}")]
    Unknown(String),
    #[error("probe mixes scalar and pair functions")]
    MixedProbe,
}

/// Closed catalog of auxiliary functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AuxFunctionId {
    /// `(1-s^2)(e^{ls}+ls-1)/s`
    HExpStar,
    /// `l(1-s^2) + (1-r^2)(e^{ls}-1)/r`
    GExpStar,
    /// `c(1-s^2)/(2(1-cs)) + (1-s^2)(1-sqrt(1-cs))/s`
    HSqrtStar,
    /// `c(1-s^2)/(2(1-cs)) + (1-r^2)(1-sqrt(1-cs))/r`
    GSqrtStar,
    /// `(1+r)(2-r-2(1-r)^{3/2})/(2r)`
    G1Sqrt,
    /// `-8+4r+r^2-3r^3+8 sqrt(1-r)`
    G2Sqrt,
    /// `-2+4cs-(2+c^2)s^2+2cs^3-c^2 s^4`
    H1SqrtStar,
    /// `(1-cs)^{3/2}(2-cs+2s^2-3cs^3)`
    H2SqrtStar,
    /// `(k1 + k2)/(1-cs)^{7/2}`
    LemmaK,
    /// `(1-cs)^2(-8+12cs-3c^2s^2-4cs^3+3c^2s^4)`
    LemmaK1,
    /// `-4 sqrt(1-cs)(-2+6cs-6c^2s^2+cs^3+c^3s^3)`
    LemmaK2,
    /// `(1-cs)^2(-8+c^2+12cs-5c^2s^2)`
    LemmaK3,
    /// `-8(1-c^2) sqrt(1-cs)`
    LemmaK4,
    /// `-37+66c-29c^2`, a function of `c`.
    LemmaL,
    /// `(1-c)^2(-8+12c-4c^2) - 8(1-c^2) sqrt(1-c)`, a function of `c`.
    LemmaL1,
    /// `(1-r^2)(e^{lr}-1)/r`
    HExpConvex,
    /// `2(1-e^{lr}) + lr e^{lr}(2+2r^2+lr^3-lr)`, with `h'' = -k/r^3`.
    KExpConvex,
    /// `(1-r^2)(1-sqrt(1-cr))/r`
    HSqrtConvex,
    /// `(-8+12cr-3c^2r^2-4cr^3+3c^2r^4+8(1-cr)^{3/2})/(1-cr)^{3/2}`
    KSqrtConvex,
    /// `-8+c^2+12cr-5c^2r^2`
    K1SqrtConvex,
}

impl AuxFunctionId {
    pub const ALL: [AuxFunctionId; 20] = [
        Self::HExpStar,
        Self::GExpStar,
        Self::HSqrtStar,
        Self::GSqrtStar,
        Self::G1Sqrt,
        Self::G2Sqrt,
        Self::H1SqrtStar,
        Self::H2SqrtStar,
        Self::LemmaK,
        Self::LemmaK1,
        Self::LemmaK2,
        Self::LemmaK3,
        Self::LemmaK4,
        Self::LemmaL,
        Self::LemmaL1,
        Self::HExpConvex,
        Self::KExpConvex,
        Self::HSqrtConvex,
        Self::KSqrtConvex,
        Self::K1SqrtConvex,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::HExpStar => "h_exp_star",
            Self::GExpStar => "g_exp_star",
            Self::HSqrtStar => "h_sqrt_star",
            Self::GSqrtStar => "g_sqrt_star",
            Self::G1Sqrt => "g1_sqrt",
            Self::G2Sqrt => "g2_sqrt",
            Self::H1SqrtStar => "h1_sqrt_star",
            Self::H2SqrtStar => "h2_sqrt_star",
            Self::LemmaK => "lemma_k",
            Self::LemmaK1 => "lemma_k1",
            Self::LemmaK2 => "lemma_k2",
            Self::LemmaK3 => "lemma_k3",
            Self::LemmaK4 => "lemma_k4",
            Self::LemmaL => "lemma_l",
            Self::LemmaL1 => "lemma_l1",
            Self::HExpConvex => "h_exp_convex",
            Self::KExpConvex => "k_exp_convex",
            Self::HSqrtConvex => "h_sqrt_convex",
            Self::KSqrtConvex => "k_sqrt_convex",
            Self::K1SqrtConvex => "k1_sqrt_convex",
        }
    }

    /// Functions of the pair `(r, s)` on `{0 <= s <= r < 1}`.
    pub fn is_pair(self) -> bool {
        matches!(self, Self::GExpStar | Self::GSqrtStar)
    }

    /// Functions of the class parameter `c` rather than of a radius.
    pub fn is_parameter_function(self) -> bool {
        matches!(self, Self::LemmaL | Self::LemmaL1)
    }

    /// The radial majorant `h` whose supremum is the bound for `spec`.
    pub fn majorant_for(spec: &ClassSpec) -> Self {
        match (spec.family, spec.variant) {
            (Family::Exp, Variant::Starlike) => Self::HExpStar,
            (Family::Sqrt, Variant::Starlike) if spec.parameter == 1.0 => Self::G1Sqrt,
            (Family::Sqrt, Variant::Starlike) => Self::HSqrtStar,
            (Family::Exp, Variant::Convex) => Self::HExpConvex,
            (Family::Sqrt, Variant::Convex) => Self::HSqrtConvex,
        }
    }
}

impl fmt::Display for AuxFunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AuxFunctionId {
    type Err = AuxError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| AuxError::Unknown(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum AuxPoint {
    Scalar(f64),
    Pair { r: f64, s: f64 },
}

/// Evaluates a catalog function at a point of its domain.
///
/// Scalar functions accept `[0, 1]` (the parameter functions `l`, `l1`
/// accept `c` in `(0, 1]`); removable singularities at 0 take their limits.
/// Pair functions accept `0 <= s <= r < 1` with `r > 0`.
pub fn aux_eval(id: AuxFunctionId, spec: &ClassSpec, point: AuxPoint) -> Result<f64, AuxError> {
    let violation = || AuxError::DomainViolation { id, point };
    let value = match (id.is_pair(), point) {
        (true, AuxPoint::Pair { r, s }) => {
            if !(r > 0.0 && r < 1.0 && s >= 0.0 && s <= r) {
                return Err(violation());
            }
            pair_raw(id, spec.parameter, r, s)
        }
        (false, AuxPoint::Scalar(x)) => {
            let ok = if id.is_parameter_function() {
                x > 0.0 && x <= 1.0
            } else {
                (0.0..=1.0).contains(&x)
            };
            if !ok {
                return Err(violation());
            }
            if x == 0.0 {
                limit_at_zero(id, spec.parameter)
            } else {
                scalar_raw(id, spec.parameter, x)
            }
        }
        (true, _) => {
            return Err(AuxError::WrongArity {
                id,
                expected: "pair (r, s)",
            })
        }
        (false, _) => {
            return Err(AuxError::WrongArity {
                id,
                expected: "scalar",
            })
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(violation())
    }
}

fn limit_at_zero(id: AuxFunctionId, t: f64) -> f64 {
    match id {
        AuxFunctionId::HExpStar => 2.0 * t,
        AuxFunctionId::HSqrtStar => t,
        AuxFunctionId::G1Sqrt => 1.0,
        AuxFunctionId::HExpConvex => t,
        AuxFunctionId::HSqrtConvex => 0.5 * t,
        other => scalar_raw(other, t, 0.0),
    }
}

fn scalar_raw(id: AuxFunctionId, t: f64, s: f64) -> f64 {
    use AuxFunctionId::*;
    let (l, c) = (t, t);
    match id {
        HExpStar => (1.0 - s * s) * ((l * s).exp_m1() + l * s) / s,
        HSqrtStar => {
            c * (1.0 - s * s) / (2.0 * (1.0 - c * s)) + (1.0 - s * s) * one_minus_sqrt1m(c * s) / s
        }
        G1Sqrt => (1.0 + s) * (2.0 - s - 2.0 * (1.0 - s).powf(1.5)) / (2.0 * s),
        G2Sqrt => -8.0 + 4.0 * s + s * s - 3.0 * s.powi(3) + 8.0 * (1.0 - s).sqrt(),
        H1SqrtStar => {
            -2.0 + 4.0 * c * s - (2.0 + c * c) * s * s + 2.0 * c * s.powi(3) - c * c * s.powi(4)
        }
        H2SqrtStar => (1.0 - c * s).powf(1.5) * (2.0 - c * s + 2.0 * s * s - 3.0 * c * s.powi(3)),
        LemmaK => {
            (scalar_raw(LemmaK1, c, s) + scalar_raw(LemmaK2, c, s)) / (1.0 - c * s).powf(3.5)
        }
        LemmaK1 => {
            (1.0 - c * s).powi(2)
                * (-8.0 + 12.0 * c * s - 3.0 * c * c * s * s - 4.0 * c * s.powi(3)
                    + 3.0 * c * c * s.powi(4))
        }
        LemmaK2 => {
            -4.0 * (1.0 - c * s).sqrt()
                * (-2.0 + 6.0 * c * s - 6.0 * c * c * s * s + c * s.powi(3) + c.powi(3) * s.powi(3))
        }
        LemmaK3 => (1.0 - c * s).powi(2) * (-8.0 + c * c + 12.0 * c * s - 5.0 * c * c * s * s),
        LemmaK4 => -8.0 * (1.0 - c * c) * (1.0 - c * s).sqrt(),
        // parameter functions: the point is c itself
        LemmaL => -37.0 + 66.0 * s - 29.0 * s * s,
        LemmaL1 => {
            (1.0 - s).powi(2) * (-8.0 + 12.0 * s - 4.0 * s * s)
                - 8.0 * (1.0 - s * s) * (1.0 - s).sqrt()
        }
        HExpConvex => (1.0 - s * s) * (l * s).exp_m1() / s,
        KExpConvex => {
            let e = (l * s).exp();
            -2.0 * (l * s).exp_m1() + l * s * e * (2.0 + 2.0 * s * s + l * s.powi(3) - l * s)
        }
        HSqrtConvex => (1.0 - s * s) * one_minus_sqrt1m(c * s) / s,
        KSqrtConvex => {
            let d = (1.0 - c * s).powf(1.5);
            (-8.0 + 12.0 * c * s - 3.0 * c * c * s * s - 4.0 * c * s.powi(3)
                + 3.0 * c * c * s.powi(4)
                + 8.0 * d)
                / d
        }
        K1SqrtConvex => -8.0 + c * c + 12.0 * c * s - 5.0 * c * c * s * s,
        GExpStar | GSqrtStar => f64::NAN,
    }
}

fn pair_raw(id: AuxFunctionId, t: f64, r: f64, s: f64) -> f64 {
    match id {
        AuxFunctionId::GExpStar => t * (1.0 - s * s) + (1.0 - r * r) * (t * s).exp_m1() / r,
        AuxFunctionId::GSqrtStar => {
            t * (1.0 - s * s) / (2.0 * (1.0 - t * s)) + (1.0 - r * r) * one_minus_sqrt1m(t * s) / r
        }
        _ => f64::NAN,
    }
}

/// Direction of differentiation for a probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// Scalar functions.
    Point,
    /// Pair functions, derivative in `r` at fixed `s`.
    R,
    /// Pair functions, derivative in `s` at fixed `r`.
    S,
}

/// The sum of one or more catalog functions, viewed along an axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Probe {
    pub terms: Vec<AuxFunctionId>,
    pub axis: Axis,
}

impl Probe {
    pub fn single(id: AuxFunctionId) -> Self {
        Self {
            terms: vec![id],
            axis: if id.is_pair() { Axis::R } else { Axis::Point },
        }
    }

    pub fn sum(terms: &[AuxFunctionId]) -> Self {
        Self {
            terms: terms.to_vec(),
            axis: Axis::Point,
        }
    }

    pub fn along(id: AuxFunctionId, axis: Axis) -> Self {
        Self {
            terms: vec![id],
            axis,
        }
    }

    pub fn label(&self) -> String {
        let names: Vec<&str> = self.terms.iter().map(|t| t.name()).collect();
        let base = names.join("+");
        match self.axis {
            Axis::Point => base,
            Axis::R => format!("{base}[r]"),
            Axis::S => format!("{base}[s]"),
        }
    }

    fn is_pair(&self) -> Result<bool, AuxError> {
        let pair = self.terms.iter().filter(|t| t.is_pair()).count();
        if pair == 0 {
            Ok(false)
        } else if pair == self.terms.len() {
            Ok(true)
        } else {
            Err(AuxError::MixedProbe)
        }
    }

    fn eval_scalar(&self, t: f64, x: f64) -> f64 {
        self.terms.iter().map(|&id| scalar_raw(id, t, x)).sum()
    }

    fn eval_pair(&self, t: f64, r: f64, s: f64) -> f64 {
        self.terms.iter().map(|&id| pair_raw(id, t, r, s)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    Negative,
    Positive,
    Decreasing,
    Increasing,
    Concave,
    /// The first derivative changes sign exactly once (a unique critical point).
    SingleSignChange,
}

/// Outcome of a sign certificate. `worst_margin > 0` on every pass.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignCertificate {
    pub probe: String,
    pub spec: ClassSpec,
    pub claim: Claim,
    pub grid_size: usize,
    pub pass: bool,
    pub worst_margin: f64,
    pub worst_at: AuxPoint,
}

/// Checks `claim` for `probe` on a uniform grid over `[1e-3, 1 - 1e-3]`
/// (a triangular grid with `s <= r` for pair functions).
pub fn sign_certificate(
    probe: &Probe,
    spec: &ClassSpec,
    claim: Claim,
    grid_size: usize,
) -> Result<SignCertificate, AuxError> {
    if grid_size < MIN_GRID {
        return Err(AuxError::GridTooSmall(grid_size));
    }
    let t = spec.parameter;
    let pair = probe.is_pair()?;
    let (lo, hi) = (GRID_MARGIN, 1.0 - GRID_MARGIN);

    let points: Vec<AuxPoint> = if pair {
        // smallest m with m(m+1)/2 >= grid_size
        let mut m = 2;
        while m * (m + 1) / 2 < grid_size {
            m += 1;
        }
        let node = |i: usize| lo + (hi - lo) * i as f64 / (m - 1) as f64;
        (0..m)
            .flat_map(|i| (0..=i).map(move |j| AuxPoint::Pair { r: node(i), s: node(j) }))
            .collect()
    } else {
        (0..grid_size)
            .map(|i| AuxPoint::Scalar(lo + (hi - lo) * i as f64 / (grid_size - 1) as f64))
            .collect()
    };

    let along = |p: AuxPoint, d: f64| -> f64 {
        match p {
            AuxPoint::Scalar(x) => probe.eval_scalar(t, x + d),
            AuxPoint::Pair { r, s } => match probe.axis {
                Axis::S => probe.eval_pair(t, r, s + d),
                _ => probe.eval_pair(t, r + d, s),
            },
        }
    };
    let first = |p: AuxPoint| {
        let h = FD_STEP_FIRST;
        (along(p, h) - along(p, -h)) / (2.0 * h)
    };
    let second = |p: AuxPoint| {
        let h = FD_STEP_SECOND;
        (along(p, h) - 2.0 * along(p, 0.0) + along(p, -h)) / (h * h)
    };

    let (pass, worst_margin, worst_at) = match claim {
        Claim::SingleSignChange => {
            let derivs: Vec<f64> = points.iter().map(|&p| first(p)).collect();
            let mut changes = 0;
            let mut at = points[0];
            for i in 1..derivs.len() {
                if (derivs[i] > 0.0) != (derivs[i - 1] > 0.0) {
                    changes += 1;
                    at = points[i];
                }
            }
            let margin = derivs[0].abs().min(derivs[derivs.len() - 1].abs());
            let ok = changes == 1 && !pair;
            (ok, if ok { margin } else { -margin }, at)
        }
        _ => {
            let margin_of = |p: AuxPoint| match claim {
                Claim::Negative => -along(p, 0.0),
                Claim::Positive => along(p, 0.0),
                Claim::Decreasing => -first(p),
                Claim::Increasing => first(p),
                Claim::Concave => -second(p),
                Claim::SingleSignChange => unreachable!(),
            };
            let mut worst = f64::INFINITY;
            let mut at = points[0];
            for &p in &points {
                let m = margin_of(p);
                // NaN counts as a failure
                if !(m >= worst) {
                    worst = m;
                    at = p;
                }
            }
            (worst > 0.0, worst, at)
        }
    };
    Ok(SignCertificate {
        probe: probe.label(),
        spec: *spec,
        claim,
        grid_size,
        pass,
        worst_margin,
        worst_at,
    })
}

/// Every (probe, claim) pair the monotonicity arguments for `spec` rely on.
pub fn proof_claims(spec: &ClassSpec) -> Vec<(Probe, Claim)> {
    use AuxFunctionId::*;
    let one = |id| Probe::single(id);
    match (spec.family, spec.variant) {
        (Family::Exp, Variant::Starlike) => vec![
            (Probe::along(GExpStar, Axis::R), Claim::Decreasing),
            (one(HExpStar), Claim::Concave),
            (one(HExpStar), Claim::SingleSignChange),
        ],
        (Family::Sqrt, Variant::Starlike) => {
            let mut v = vec![
                (Probe::along(GSqrtStar, Axis::R), Claim::Decreasing),
                (one(HSqrtStar), Claim::Concave),
                (one(HSqrtStar), Claim::SingleSignChange),
                (one(LemmaK), Claim::Negative),
                (one(LemmaK), Claim::Decreasing),
                (Probe::sum(&[LemmaK3, LemmaK4]), Claim::Increasing),
                (Probe::sum(&[LemmaK3, LemmaK4]), Claim::Negative),
                (one(LemmaK3), Claim::Concave),
                (one(LemmaL), Claim::Increasing),
                (one(LemmaL), Claim::Negative),
                (one(LemmaL1), Claim::Increasing),
                (one(LemmaL1), Claim::Negative),
            ];
            // k4 vanishes identically at c = 1
            if spec.parameter < 1.0 {
                v.push((one(LemmaK4), Claim::Increasing));
            }
            if spec.parameter == 1.0 {
                v.extend([
                    (Probe::along(GSqrtStar, Axis::S), Claim::Increasing),
                    (one(G1Sqrt), Claim::Concave),
                    (one(G1Sqrt), Claim::SingleSignChange),
                    (one(G2Sqrt), Claim::Negative),
                ]);
            }
            v
        }
        (Family::Exp, Variant::Convex) => vec![
            (one(HExpConvex), Claim::Concave),
            (one(KExpConvex), Claim::Positive),
            (one(HExpConvex), Claim::SingleSignChange),
        ],
        (Family::Sqrt, Variant::Convex) => vec![
            (one(HSqrtConvex), Claim::Concave),
            (one(KSqrtConvex), Claim::Negative),
            (one(KSqrtConvex), Claim::Decreasing),
            (one(K1SqrtConvex), Claim::Increasing),
            (one(K1SqrtConvex), Claim::Negative),
            (one(HSqrtConvex), Claim::SingleSignChange),
        ],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedSign {
    Positive,
    Negative,
}

/// A closed-form endpoint value checked against its claimed sign and
/// against a numerical limit of the derivative.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EndpointCheck {
    pub name: String,
    pub display: f64,
    pub numeric: f64,
    pub expected: ExpectedSign,
    pub pass: bool,
    /// A differing value stated for the same limit, kept for the record.
    pub alternate: Option<f64>,
    pub note: Option<String>,
}

fn check(name: &str, display: f64, numeric: f64, expected: ExpectedSign) -> EndpointCheck {
    let sign_ok = match expected {
        ExpectedSign::Positive => display > 0.0,
        ExpectedSign::Negative => display < 0.0,
    };
    let close = (numeric - display).abs() <= ENDPOINT_TOL * display.abs().max(1.0);
    EndpointCheck {
        name: name.to_string(),
        display,
        numeric,
        expected,
        pass: sign_ok && close,
        alternate: None,
        note: None,
    }
}

/// Limit at `0+` by Richardson extrapolation `2 f(s) - f(2s)`.
fn limit_right_of_zero(f: impl Fn(f64) -> f64) -> f64 {
    let s = 1e-4;
    2.0 * f(s) - f(2.0 * s)
}

fn value_at_one(f: impl Fn(f64) -> f64) -> f64 {
    let v = f(1.0);
    if v.is_finite() {
        v
    } else {
        f(1.0 - 1e-10)
    }
}

/// Endpoint values of `h'` (and of `g1'` for the square-root starlike class at `c = 1`).
pub fn endpoint_signs(spec: &ClassSpec) -> Vec<EndpointCheck> {
    let t = spec.parameter;
    let dh = |s: f64| radial_derivative(spec, s);
    let at_zero = limit_right_of_zero(dh);
    let at_one = value_at_one(dh);
    match (spec.family, spec.variant) {
        (Family::Exp, Variant::Starlike) => {
            let mut zero = check("h'(0+)", 0.5 * t * t, at_zero, ExpectedSign::Positive);
            zero.alternate = Some(t * t);
            zero.note = Some("stated limit lambda^2 differs from the Taylor expansion lambda^2/2; both are positive".into());
            vec![
                zero,
                check("h'(1)", -2.0 * t.exp_m1() - 2.0 * t, at_one, ExpectedSign::Negative),
            ]
        }
        (Family::Sqrt, Variant::Starlike) => {
            let mut v = vec![check("h'(0+)", 5.0 * t * t / 8.0, at_zero, ExpectedSign::Positive)];
            if t == 1.0 {
                let dg1 = |r: f64| corollary_equation(r) / (2.0 * r * r);
                v.push(check("g1'(0+)", 5.0 / 8.0, limit_right_of_zero(dg1), ExpectedSign::Positive));
                v.push(check("g1'(1)", -1.5, value_at_one(dg1), ExpectedSign::Negative));
            } else {
                v.push(check(
                    "h'(1)",
                    -2.0 * one_minus_sqrt1m(t) - t / (1.0 - t),
                    at_one,
                    ExpectedSign::Negative,
                ));
            }
            v
        }
        (Family::Exp, Variant::Convex) => vec![
            check("h'(0+)", 0.5 * t * t, at_zero, ExpectedSign::Positive),
            check("h'(1)", -2.0 * t.exp_m1(), at_one, ExpectedSign::Negative),
        ],
        (Family::Sqrt, Variant::Convex) => vec![
            check("h'(0+)", t * t / 8.0, at_zero, ExpectedSign::Positive),
            check("h'(1)", -2.0 * one_minus_sqrt1m(t), at_one, ExpectedSign::Negative),
        ],
    }
}

/// All sign certificates and endpoint checks for one class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertifyReport {
    pub spec: ClassSpec,
    pub certificates: Vec<SignCertificate>,
    pub endpoints: Vec<EndpointCheck>,
    pub pass: bool,
}

pub fn certify_spec(spec: &ClassSpec, grid_size: usize) -> Result<CertifyReport, AuxError> {
    let certificates = proof_claims(spec)
        .iter()
        .map(|(probe, claim)| sign_certificate(probe, spec, *claim, grid_size))
        .collect::<Result<Vec<_>, _>>()?;
    let endpoints = endpoint_signs(spec);
    let pass = certificates.iter().all(|c| c.pass) && endpoints.iter().all(|e| e.pass);
    Ok(CertifyReport {
        spec: *spec,
        certificates,
        endpoints,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::radial_majorant;

    fn exp(l: f64, v: Variant) -> ClassSpec {
        ClassSpec::exp(l, v).unwrap()
    }
    fn sqrt(c: f64, v: Variant) -> ClassSpec {
        ClassSpec::sqrt(c, v).unwrap()
    }

    #[test]
    fn catalog_is_closed_and_named() {
        assert_eq!(AuxFunctionId::ALL.len(), 20);
        for id in AuxFunctionId::ALL {
            assert_eq!(id.name().parse::<AuxFunctionId>().unwrap(), id);
        }
        assert!("lemma_k5".parse::<AuxFunctionId>().is_err());
    }

    #[test]
    fn examples() {
        let s = sqrt(0.5, Variant::Starlike);
        assert_eq!(aux_eval(AuxFunctionId::LemmaK, &s, AuxPoint::Scalar(0.0)).unwrap(), 0.0);
        let e = exp(1.0, Variant::Starlike);
        assert_eq!(aux_eval(AuxFunctionId::HExpStar, &e, AuxPoint::Scalar(0.0)).unwrap(), 2.0);
        let near = aux_eval(AuxFunctionId::HExpStar, &e, AuxPoint::Scalar(1e-9)).unwrap();
        assert!((near - 2.0).abs() < 1e-8);
        let g1 = aux_eval(AuxFunctionId::G1Sqrt, &s, AuxPoint::Scalar(1.0)).unwrap();
        assert!((g1 - 1.0).abs() < 1e-15);
        let near1 = aux_eval(AuxFunctionId::G1Sqrt, &s, AuxPoint::Scalar(1.0 - 1e-12)).unwrap();
        assert!((near1 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn domain_violations() {
        let s = sqrt(1.0, Variant::Starlike);
        let err = |id, p| aux_eval(id, &s, p).unwrap_err();
        assert!(matches!(err(AuxFunctionId::HSqrtStar, AuxPoint::Scalar(1.5)), AuxError::DomainViolation { .. }));
        assert!(matches!(err(AuxFunctionId::HSqrtStar, AuxPoint::Scalar(1.0)), AuxError::DomainViolation { .. }));
        assert!(matches!(err(AuxFunctionId::LemmaL1, AuxPoint::Scalar(0.0)), AuxError::DomainViolation { .. }));
        assert!(matches!(
            err(AuxFunctionId::GSqrtStar, AuxPoint::Pair { r: 0.3, s: 0.4 }),
            AuxError::DomainViolation { .. }
        ));
        assert!(matches!(err(AuxFunctionId::GSqrtStar, AuxPoint::Scalar(0.3)), AuxError::WrongArity { .. }));
        assert!(matches!(
            err(AuxFunctionId::HSqrtStar, AuxPoint::Pair { r: 0.3, s: 0.1 }),
            AuxError::WrongArity { .. }
        ));
    }

    #[test]
    fn h_functions_match_bound_majorant() {
        for spec in [
            exp(0.6, Variant::Starlike),
            sqrt(0.6, Variant::Starlike),
            sqrt(1.0, Variant::Starlike),
            exp(0.6, Variant::Convex),
            sqrt(0.6, Variant::Convex),
        ] {
            let id = AuxFunctionId::majorant_for(&spec);
            for i in 1..100 {
                let r = i as f64 / 100.0;
                let a = aux_eval(id, &spec, AuxPoint::Scalar(r)).unwrap();
                assert!((a - radial_majorant(&spec, r)).abs() < 1e-13, "{id} at {r}");
            }
        }
    }

    #[test]
    fn pair_functions_reduce_on_diagonal() {
        for (id, h, spec) in [
            (AuxFunctionId::GExpStar, AuxFunctionId::HExpStar, exp(1.2, Variant::Starlike)),
            (AuxFunctionId::GSqrtStar, AuxFunctionId::HSqrtStar, sqrt(0.7, Variant::Starlike)),
        ] {
            for &r in &[0.1, 0.5, 0.9] {
                let g = aux_eval(id, &spec, AuxPoint::Pair { r, s: r }).unwrap();
                let hv = aux_eval(h, &spec, AuxPoint::Scalar(r)).unwrap();
                assert!((g - hv).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn second_derivative_relations() {
        // r^3 h'' equals k (sqrt starlike: /4, exp convex: -k, sqrt convex: /4)
        let h = 1e-4;
        let fd2 = |id, spec: &ClassSpec, r: f64| {
            let f = |x| scalar_raw(id, spec.parameter, x);
            (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h)
        };
        for &r in &[0.2f64, 0.5, 0.8] {
            let s = sqrt(0.6, Variant::Starlike);
            let lhs = 4.0 * r.powi(3) * fd2(AuxFunctionId::HSqrtStar, &s, r);
            assert!((lhs - scalar_raw(AuxFunctionId::LemmaK, 0.6, r)).abs() < 1e-5);
            let e = exp(0.7, Variant::Convex);
            let lhs = -r.powi(3) * fd2(AuxFunctionId::HExpConvex, &e, r);
            assert!((lhs - scalar_raw(AuxFunctionId::KExpConvex, 0.7, r)).abs() < 1e-5);
            let q = sqrt(0.6, Variant::Convex);
            let lhs = 4.0 * r.powi(3) * fd2(AuxFunctionId::HSqrtConvex, &q, r);
            assert!((lhs - scalar_raw(AuxFunctionId::KSqrtConvex, 0.6, r)).abs() < 1e-5);
            let lhs = 4.0 * r.powi(3) * (1.0 - r).sqrt() * fd2(AuxFunctionId::G1Sqrt, &s, r);
            assert!((lhs - scalar_raw(AuxFunctionId::G2Sqrt, 1.0, r)).abs() < 1e-5);
        }
    }

    #[test]
    fn h1_plus_h2_tracks_derivative() {
        let c = 0.45;
        let spec = sqrt(c, Variant::Starlike);
        for i in 1..20 {
            let s = i as f64 / 20.0;
            let sum = scalar_raw(AuxFunctionId::H1SqrtStar, c, s) + scalar_raw(AuxFunctionId::H2SqrtStar, c, s);
            let via = 2.0 * s * s * (1.0 - c * s).powi(2) * radial_derivative(&spec, s);
            assert!((sum - via).abs() < 1e-13);
        }
    }

    #[test]
    fn lemma_constants() {
        let s = sqrt(0.5, Variant::Starlike);
        assert_eq!(aux_eval(AuxFunctionId::LemmaL, &s, AuxPoint::Scalar(1.0)).unwrap(), 0.0);
        assert_eq!(aux_eval(AuxFunctionId::LemmaL1, &s, AuxPoint::Scalar(1.0)).unwrap(), 0.0);
        // k3(1) + k4(1) = l1(c)
        for &c in &[0.2, 0.7] {
            let sum = scalar_raw(AuxFunctionId::LemmaK3, c, 1.0) + scalar_raw(AuxFunctionId::LemmaK4, c, 1.0);
            assert!((sum - scalar_raw(AuxFunctionId::LemmaL1, 0.0, c)).abs() < 1e-13);
        }
    }

    #[test]
    fn spec_examples_for_certificates() {
        let s = sqrt(0.5, Variant::Starlike);
        let c = sign_certificate(&Probe::single(AuxFunctionId::LemmaK), &s, Claim::Negative, 10_000).unwrap();
        assert!(c.pass, "{c:?}");
        let e = exp(1.0, Variant::Starlike);
        let c = sign_certificate(&Probe::single(AuxFunctionId::HExpStar), &e, Claim::Concave, 10_000).unwrap();
        assert!(c.pass, "{c:?}");
        let c = sign_certificate(&Probe::along(AuxFunctionId::GExpStar, Axis::R), &e, Claim::Decreasing, 10_000)
            .unwrap();
        assert!(c.pass, "{c:?}");
    }

    #[test]
    fn certificate_can_fail() {
        let e = exp(1.0, Variant::Starlike);
        let c = sign_certificate(&Probe::single(AuxFunctionId::HExpStar), &e, Claim::Positive, 1000).unwrap();
        assert!(c.pass);
        let c = sign_certificate(&Probe::single(AuxFunctionId::HExpStar), &e, Claim::Decreasing, 1000).unwrap();
        assert!(!c.pass);
        assert!(c.worst_margin < 0.0);
        assert!(matches!(
            sign_certificate(&Probe::single(AuxFunctionId::HExpStar), &e, Claim::Negative, 999),
            Err(AuxError::GridTooSmall(999))
        ));
    }

    #[test]
    fn endpoint_values() {
        let e = endpoint_signs(&exp(1.0, Variant::Starlike));
        let h1 = e.iter().find(|c| c.name == "h'(1)").unwrap();
        assert!((h1.display + 5.436_563_656_918_09).abs() < 1e-12);
        assert!(e.iter().all(|c| c.pass), "{e:?}");
        let zero = e.iter().find(|c| c.name == "h'(0+)").unwrap();
        assert_eq!(zero.alternate, Some(1.0));
        let s = endpoint_signs(&sqrt(1.0, Variant::Starlike));
        assert!(s.iter().any(|c| c.name == "g1'(1)" && c.display == -1.5));
        assert!(s.iter().all(|c| c.pass), "{s:?}");
    }

    #[test]
    fn full_certification_passes() {
        for spec in [
            exp(0.1, Variant::Starlike),
            exp(std::f64::consts::FRAC_PI_2, Variant::Convex),
            sqrt(0.3, Variant::Starlike),
            sqrt(1.0, Variant::Starlike),
            sqrt(1.0, Variant::Convex),
        ] {
            let r = certify_spec(&spec, 2000).unwrap();
            for c in &r.certificates {
                assert!(c.pass, "{c:?}");
            }
            assert!(r.pass);
        }
    }
}
