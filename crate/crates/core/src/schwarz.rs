//! Schwarz functions: analytic self-maps of the disk fixing the origin.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::series::TruncatedSeries;

/// Largest Blaschke degree the sampler produces.
pub const MAX_DEGREE: usize = 4;

/// Modulus cap for sampled Blaschke zeros.
pub const ZERO_MODULUS_CAP: f64 = 0.8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SchwarzError {
    #[error("Blaschke degree {0} exceeds the maximum {MAX_DEGREE}")]
    DegreeTooLarge(usize),
    #[error("Blaschke zero {0} is not inside the disk")]
    ZeroOutsideDisk(Complex64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SchwarzFunction {
    Identity,
    Negation,
    Zero,
    /// `e^{i theta} z prod_j (z - zeta_j) / (1 - conj(zeta_j) z)`.
    Blaschke {
        rotation: f64,
        #[serde(serialize_with = "serialize_zeros")]
        zeros: Vec<Complex64>,
    },
}

fn serialize_zeros<S: serde::Serializer>(zeros: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(zeros.len()))?;
    for z in zeros {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

impl SchwarzFunction {
    pub fn blaschke(rotation: f64, zeros: Vec<Complex64>) -> Result<Self, SchwarzError> {
        if let Some(&z) = zeros.iter().find(|z| !(z.norm() < 1.0)) {
            return Err(SchwarzError::ZeroOutsideDisk(z));
        }
        Ok(Self::Blaschke { rotation, zeros })
    }

    /// `omega(z) / z`, analytic at the origin.
    pub fn quotient(&self, z: Complex64) -> Complex64 {
        match self {
            Self::Identity => Complex64::new(1.0, 0.0),
            Self::Negation => Complex64::new(-1.0, 0.0),
            Self::Zero => Complex64::new(0.0, 0.0),
            Self::Blaschke { rotation, zeros } => {
                let b: Complex64 = zeros.iter().map(|&zeta| factor(zeta, z)).product();
                Complex64::from_polar(1.0, *rotation) * b
            }
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        z * self.quotient(z)
    }

    /// `(omega(z), omega'(z))`.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let (_, w, dw) = self.eval_all(z);
        (w, dw)
    }

    /// `(omega(z)/z, omega(z), omega'(z))` in one pass.
    pub fn eval_all(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        let one = Complex64::new(1.0, 0.0);
        match self {
            Self::Identity => (one, z, one),
            Self::Negation => (-one, -z, -one),
            Self::Zero => (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
            Self::Blaschke { rotation, zeros } => {
                // product rule accumulated factor by factor
                let mut b = one;
                let mut db = Complex64::new(0.0, 0.0);
                for &zeta in zeros {
                    let f = factor(zeta, z);
                    db = db * f + b * factor_derivative(zeta, z);
                    b *= f;
                }
                let rot = Complex64::from_polar(1.0, *rotation);
                (rot * b, rot * z * b, rot * (b + z * db))
            }
        }
    }

    /// Taylor series of `omega` to the given order.
    pub fn series(&self, order: usize) -> TruncatedSeries {
        match self {
            Self::Identity => TruncatedSeries::variable(order),
            Self::Negation => TruncatedSeries::variable(order).scale(Complex64::new(-1.0, 0.0)),
            Self::Zero => TruncatedSeries::zero(order),
            Self::Blaschke { rotation, zeros } => {
                let mut acc = TruncatedSeries::constant(order, Complex64::from_polar(1.0, *rotation));
                for &zeta in zeros {
                    acc = acc.mul(&factor_series(zeta, order));
                }
                acc.mul_z().truncate(order)
            }
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Self::Blaschke { zeros, .. } => zeros.len(),
            _ => 0,
        }
    }
}

fn factor(zeta: Complex64, z: Complex64) -> Complex64 {
    (z - zeta) / (Complex64::new(1.0, 0.0) - zeta.conj() * z)
}

fn factor_derivative(zeta: Complex64, z: Complex64) -> Complex64 {
    let d = Complex64::new(1.0, 0.0) - zeta.conj() * z;
    (1.0 - zeta.norm_sqr()) / (d * d)
}

/// `(z - zeta) / (1 - conj(zeta) z) = -zeta + sum_{n>=1} conj(zeta)^{n-1} (1 - |zeta|^2) z^n`.
fn factor_series(zeta: Complex64, order: usize) -> TruncatedSeries {
    let cz = zeta.conj();
    let m = 1.0 - zeta.norm_sqr();
    TruncatedSeries::from_fn(order, |n| {
        if n == 0 {
            -zeta
        } else {
            cz.powi(n as i32 - 1) * m
        }
    })
}

/// Deterministic pseudorandom Schwarz function: a uniform rotation times `z`
/// times a Blaschke product whose `degree` zeros are uniform in `|zeta| <= 0.8`.
pub fn sample_schwarz(seed: u64, degree: usize) -> Result<SchwarzFunction, SchwarzError> {
    if degree > MAX_DEGREE {
        return Err(SchwarzError::DegreeTooLarge(degree));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rotation = rng.gen_range(0.0..std::f64::consts::TAU);
    let zeros = (0..degree)
        .map(|_| {
            let r = ZERO_MODULUS_CAP * rng.gen::<f64>().sqrt();
            let t = rng.gen_range(0.0..std::f64::consts::TAU);
            Complex64::from_polar(r, t)
        })
        .collect();
    SchwarzFunction::blaschke(rotation, zeros)
}
