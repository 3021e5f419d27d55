//! Cancellation-free elementary kernels shared by the class and bound code.

use num_complex::Complex64;

const SERIES_RADIUS: f64 = 0.5;

/// `e^w - 1` without cancellation for small `|w|`.
pub fn expm1(w: Complex64) -> Complex64 {
    let (x, y) = (w.re, w.im);
    let s = (0.5 * y).sin();
    Complex64::new(x.exp_m1() * y.cos() - 2.0 * s * s, x.exp() * y.sin())
}

/// `(e^w - 1) / w`, equal to 1 at `w = 0`.
pub fn exprel(w: Complex64) -> Complex64 {
    if w.norm() < SERIES_RADIUS {
        // sum_{n>=0} w^n / (n+1)!
        let mut term = Complex64::new(1.0, 0.0);
        let mut acc = term;
        for n in 1..40 {
            term = term * w / (n as f64 + 1.0);
            acc += term;
            if term.norm() < 1e-18 {
                break;
            }
        }
        acc
    } else {
        expm1(w) / w
    }
}

/// Derivative of [`exprel`]: `(w e^w - e^w + 1) / w^2`, equal to 1/2 at 0.
pub fn exprel_prime(w: Complex64) -> Complex64 {
    if w.norm() < SERIES_RADIUS {
        // sum_{n>=1} n w^{n-1} / (n+1)!
        let mut pow_over_fact = Complex64::new(0.5, 0.0); // w^0 / 2!
        let mut acc = pow_over_fact;
        for n in 2..40 {
            pow_over_fact = pow_over_fact * w / (n as f64 + 1.0);
            let term = pow_over_fact * n as f64;
            acc += term;
            if term.norm() < 1e-18 {
                break;
            }
        }
        acc
    } else {
        (w.exp() * (w - 1.0) + 1.0) / (w * w)
    }
}

pub fn exprel_real(x: f64) -> f64 {
    exprel(Complex64::new(x, 0.0)).re
}

pub fn exprel_prime_real(x: f64) -> f64 {
    exprel_prime(Complex64::new(x, 0.0)).re
}

/// `1 - sqrt(1 - x)` written as `x / (1 + sqrt(1 - x))`.
pub fn one_minus_sqrt1m(x: f64) -> f64 {
    x / (1.0 + (1.0 - x).sqrt())
}

/// `log(1 + w)` accurate for small `|w|`.
pub fn ln_1p(w: Complex64) -> Complex64 {
    let u = w + 1.0;
    let d = u - 1.0;
    if d == Complex64::new(0.0, 0.0) {
        w
    } else {
        u.ln() * (w / d)
    }
}

/// Entire exponential integral `Ein(w) = int_0^w (e^t - 1)/t dt = sum w^n / (n n!)`.
pub fn ein(w: Complex64) -> Complex64 {
    let mut pow_over_fact = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..200 {
        pow_over_fact = pow_over_fact * w / n as f64;
        let term = pow_over_fact / n as f64;
        acc += term;
        if term.norm() < 1e-18 * acc.norm().max(1e-300) {
            break;
        }
    }
    acc
}
