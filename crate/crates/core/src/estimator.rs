//! Numerical pre-Schwarzian norm: `sup (1 - |z|^2) |f''(z)/f'(z)|` over the
//! disk, estimated by a polar grid scan plus local golden-section refinement.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{norm_bound, BoundError, BoundReport};
use crate::classes::{extremal, member_from_schwarz, AnalyticFunction, ClassError, ClassSpec};
use crate::disk::UnitDiskPoint;
use crate::schwarz::{sample_schwarz, SchwarzError, MAX_DEGREE};

/// Default distance of the outermost grid circle from the boundary.
pub const CAP_EPS: f64 = 1e-3;
pub const MIN_RADIAL: usize = 64;
pub const MIN_ANGULAR: usize = 128;
/// Relative sharpness tolerance `|estimate - bound| <= SHARP_REL * bound`.
pub const SHARP_REL: f64 = 1e-4;
/// Absolute slack for `estimate <= bound` on sampled members.
pub const BOUND_TOL: f64 = 1e-6;
const GOLDEN_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimatorError {
    #[error("grid {radial}x{angular} is below the minimum {MIN_RADIAL}x{MIN_ANGULAR}")]
    GridTooCoarse { radial: usize, angular: usize },
    #[error("evaluation cap {0} must lie in (0, 1)")]
    BadCap(f64),
    #[error("profile needs at least 2 points, got {0}")]
    ProfileTooShort(usize),
    #[error("member count must be at least 1")]
    NoMembers,
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Schwarz(#[from] SchwarzError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimatorConfig {
    pub radial: usize,
    pub angular: usize,
    pub refine: usize,
    pub cap_eps: f64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            radial: 256,
            angular: 512,
            refine: 3,
            cap_eps: CAP_EPS,
        }
    }
}

impl EstimatorConfig {
    pub fn validate(&self) -> Result<(), EstimatorError> {
        if self.radial < MIN_RADIAL || self.angular < MIN_ANGULAR {
            return Err(EstimatorError::GridTooCoarse {
                radial: self.radial,
                angular: self.angular,
            });
        }
        if !(self.cap_eps > 0.0 && self.cap_eps < 1.0) {
            return Err(EstimatorError::BadCap(self.cap_eps));
        }
        Ok(())
    }

    fn r_max(&self) -> f64 {
        1.0 - self.cap_eps
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridMeta {
    pub radial: usize,
    pub angular: usize,
    pub refine: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub argmax: UnitDiskPoint,
    /// Polar coordinates of `argmax`, with the angle in `[0, 2 pi)`.
    pub radius: f64,
    pub angle: f64,
    pub grid: GridMeta,
    /// Set when the argmax lies within one radial cell of the evaluation cap.
    pub boundary_limited: bool,
}

/// `f''(z) / f'(z)`.
pub fn pre_schwarzian(f: &AnalyticFunction, z: UnitDiskPoint) -> Result<Complex64, ClassError> {
    f.pre_schwarzian_at(z.value())
}

/// `(1 - |z|^2) |P_f(z)|`.
pub fn weighted_field(f: &AnalyticFunction, z: UnitDiskPoint) -> Result<f64, ClassError> {
    Ok((1.0 - z.norm().powi(2)) * pre_schwarzian(f, z)?.norm())
}

fn field_polar(f: &AnalyticFunction, r: f64, theta: f64) -> Result<f64, ClassError> {
    let z = Complex64::from_polar(r, theta);
    Ok((1.0 - r * r) * f.pre_schwarzian_at(z)?.norm())
}

#[derive(Debug, Clone, Copy)]
struct Incumbent {
    value: f64,
    r: f64,
    theta: f64,
}

/// Maximizes `g` on `[a, b]` by golden-section search; returns `(x, g(x))`.
fn golden_max<F>(g: F, mut a: f64, mut b: f64) -> Result<(f64, f64), ClassError>
where
    F: Fn(f64) -> Result<f64, ClassError>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = g(x1)?;
    let mut f2 = g(x2)?;
    while b - a > GOLDEN_TOL {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = g(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = g(x1)?;
        }
    }
    // the endpoints are candidates too, for maxima on the window's edge
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for x in [a, b] {
        let v = g(x)?;
        if v > best.1 {
            best = (x, v);
        }
    }
    Ok(best)
}

/// Grid maximum of the weighted field followed by `refine` rounds of
/// golden-section search in `r`, then `theta`, within one cell of the
/// incumbent. Refinement only ever replaces the incumbent by a larger value.
pub fn estimate_norm(
    f: &AnalyticFunction,
    radial: usize,
    angular: usize,
    refine: usize,
) -> Result<NormEstimate, EstimatorError> {
    estimate_norm_with(
        f,
        &EstimatorConfig {
            radial,
            angular,
            refine,
            cap_eps: CAP_EPS,
        },
    )
}

pub fn estimate_norm_with(f: &AnalyticFunction, cfg: &EstimatorConfig) -> Result<NormEstimate, EstimatorError> {
    cfg.validate()?;
    let r_max = cfg.r_max();
    let dr = r_max / cfg.radial as f64;
    let dtheta = TAU / cfg.angular as f64;

    // rows are scanned in parallel; each row keeps its first maximum
    let rows: Vec<Result<(f64, usize, usize), ClassError>> = (1..=cfg.radial)
        .into_par_iter()
        .map(|i| {
            let r = r_max * i as f64 / cfg.radial as f64;
            let mut best = (f64::NEG_INFINITY, i, 0);
            for j in 0..cfg.angular {
                let v = field_polar(f, r, dtheta * j as f64)?;
                if v > best.0 {
                    best = (v, i, j);
                }
            }
            Ok(best)
        })
        .collect();

    // origin first, then rows in order of increasing radius: strict `>`
    // breaks ties toward the smaller radius, then the smaller angle
    let mut inc = Incumbent {
        value: field_polar(f, 0.0, 0.0)?,
        r: 0.0,
        theta: 0.0,
    };
    for row in rows {
        let (v, i, j) = row?;
        if v > inc.value {
            inc = Incumbent {
                value: v,
                r: r_max * i as f64 / cfg.radial as f64,
                theta: dtheta * j as f64,
            };
        }
    }

    for _ in 0..cfg.refine {
        let theta = inc.theta;
        let (r, v) = golden_max(
            |r| field_polar(f, r, theta),
            (inc.r - dr).max(0.0),
            (inc.r + dr).min(r_max),
        )?;
        if v > inc.value {
            inc = Incumbent { value: v, r, theta };
        }
        if inc.r > 0.0 {
            let r = inc.r;
            let (t, v) = golden_max(|t| field_polar(f, r, t), inc.theta - dtheta, inc.theta + dtheta)?;
            if v > inc.value {
                inc = Incumbent {
                    value: v,
                    r,
                    theta: t.rem_euclid(TAU),
                };
            }
        }
    }

    let argmax = UnitDiskPoint::from_polar(inc.r, inc.theta).expect("r <= 1 - cap_eps");
    Ok(NormEstimate {
        value: inc.value,
        argmax,
        radius: inc.r,
        angle: inc.theta,
        grid: GridMeta {
            radial: cfg.radial,
            angular: cfg.angular,
            refine: cfg.refine,
        },
        boundary_limited: inc.r >= r_max - dr,
    })
}

/// Weighted field along `z = r`, `r = k (1 - cap_eps) / n` for `k = 1..=n`.
pub fn radial_profile(f: &AnalyticFunction, n: usize) -> Result<Vec<(f64, f64)>, EstimatorError> {
    radial_profile_with(f, n, CAP_EPS)
}

pub fn radial_profile_with(f: &AnalyticFunction, n: usize, cap_eps: f64) -> Result<Vec<(f64, f64)>, EstimatorError> {
    if n < 2 {
        return Err(EstimatorError::ProfileTooShort(n));
    }
    let r_max = 1.0 - cap_eps;
    (1..=n)
        .map(|k| {
            let r = r_max * k as f64 / n as f64;
            Ok((r, field_polar(f, r, 0.0)?))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessCheck {
    pub estimate: NormEstimate,
    pub error: f64,
    pub tolerance: f64,
    /// Argmax angle within one angular cell of 0.
    pub on_positive_axis: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemberMargin {
    pub index: usize,
    pub seed: u64,
    pub degree: usize,
    pub estimate: f64,
    /// `bound - estimate`.
    pub margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub bound: BoundReport,
    pub sharpness: SharpnessCheck,
    pub members: Vec<MemberMargin>,
    pub pass: bool,
}

/// Angular distance from `theta` to the positive real axis.
pub fn angle_from_axis(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    t.min(TAU - t)
}

pub fn sharpness_check(spec: &ClassSpec, bound: f64, cfg: &EstimatorConfig) -> Result<SharpnessCheck, EstimatorError> {
    let estimate = estimate_norm_with(&extremal(spec), cfg)?;
    let error = (estimate.value - bound).abs();
    let tolerance = SHARP_REL * bound;
    let on_positive_axis = angle_from_axis(estimate.angle) <= TAU / cfg.angular as f64;
    Ok(SharpnessCheck {
        estimate,
        error,
        tolerance,
        on_positive_axis,
        pass: error <= tolerance && on_positive_axis,
    })
}

/// Sub-seeds and Blaschke degrees of the sampled members, in order.
pub fn member_plan(seed: u64, count: usize) -> Vec<(u64, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let sub = rng.next_u64();
            let degree = rng.gen_range(0..=MAX_DEGREE);
            (sub, degree)
        })
        .collect()
}

/// Sharpness of the extremal function plus `estimate <= bound` for
/// `member_count` sampled members.
pub fn verify_spec(
    spec: &ClassSpec,
    member_count: usize,
    seed: u64,
    cfg: &EstimatorConfig,
) -> Result<VerifyReport, EstimatorError> {
    if member_count < 1 {
        return Err(EstimatorError::NoMembers);
    }
    verify_spec_allow_empty(spec, member_count, seed, cfg)
}

/// As [`verify_spec`], also accepting zero members (sharpness only).
pub fn verify_spec_allow_empty(
    spec: &ClassSpec,
    member_count: usize,
    seed: u64,
    cfg: &EstimatorConfig,
) -> Result<VerifyReport, EstimatorError> {
    let bound = norm_bound(spec)?;
    let sharpness = sharpness_check(spec, bound.bound, cfg)?;
    let members = member_plan(seed, member_count)
        .into_iter()
        .enumerate()
        .map(|(index, (sub, degree))| {
            let omega = sample_schwarz(sub, degree)?;
            let f = member_from_schwarz(spec, omega)?;
            let estimate = estimate_norm_with(&f, cfg)?.value;
            let margin = bound.bound - estimate;
            Ok(MemberMargin {
                index,
                seed: sub,
                degree,
                estimate,
                margin,
                pass: margin >= -BOUND_TOL,
            })
        })
        .collect::<Result<Vec<_>, EstimatorError>>()?;
    let pass = sharpness.pass && members.iter().all(|m| m.pass);
    Ok(VerifyReport {
        bound,
        sharpness,
        members,
        pass,
    })
}
