//! Points of the open unit disk.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

/// Scalar type used throughout; public operations never return non-finite parts.
pub type ComplexValue = Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiskError {
    #[error("point {0} is not finite")]
    NonFinite(Complex64),
    #[error("point {0} has modulus {1} >= 1")]
    OutsideDisk(Complex64, f64),
}

/// A point `z` with `|z| < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitDiskPoint {
    re: f64,
    im: f64,
}

impl UnitDiskPoint {
    pub fn new(z: Complex64) -> Result<Self, DiskError> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(DiskError::NonFinite(z));
        }
        let r = z.norm();
        if r >= 1.0 {
            return Err(DiskError::OutsideDisk(z, r));
        }
        Ok(Self { re: z.re, im: z.im })
    }

    pub fn from_polar(r: f64, theta: f64) -> Result<Self, DiskError> {
        Self::new(Complex64::from_polar(r, theta))
    }

    pub fn origin() -> Self {
        Self { re: 0.0, im: 0.0 }
    }

    pub fn value(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn norm(self) -> f64 {
        self.value().norm()
    }

    pub fn arg(self) -> f64 {
        self.value().arg()
    }
}

/// Polar grid `{r_i e^{i theta_j}}` with `radial` radii evenly spaced in
/// `(0, r_max]` and `angular` angles evenly spaced in `[0, 2 pi)`.
pub fn polar_grid(radial: usize, angular: usize, r_max: f64) -> Vec<UnitDiskPoint> {
    let mut pts = Vec::with_capacity(radial * angular);
    for i in 1..=radial {
        let r = r_max * i as f64 / radial as f64;
        for j in 0..angular {
            let theta = std::f64::consts::TAU * j as f64 / angular as f64;
            if let Ok(p) = UnitDiskPoint::from_polar(r, theta) {
                pts.push(p);
            }
        }
    }
    pts
}
