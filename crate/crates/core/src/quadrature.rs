//! Adaptive Gauss–Legendre quadrature along straight complex segments.

use std::sync::OnceLock;

use num_complex::Complex64;

const LOW: usize = 10;
const HIGH: usize = 20;
const MAX_DEPTH: u32 = 40;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// from Newton iteration on `P_n` started at the Chebyshev guesses.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn rule(n: usize) -> &'static (Vec<f64>, Vec<f64>) {
    static LOW_RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    static HIGH_RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    match n {
        LOW => LOW_RULE.get_or_init(|| gauss_legendre(LOW)),
        HIGH => HIGH_RULE.get_or_init(|| gauss_legendre(HIGH)),
        _ => unreachable!("only the 10/20 pair is cached"),
    }
}

fn apply<F: Fn(Complex64) -> Complex64>(f: &F, a: Complex64, b: Complex64, n: usize) -> Complex64 {
    let (x, w) = rule(n);
    let half = (b - a) * 0.5;
    let mid = (a + b) * 0.5;
    x.iter()
        .zip(w)
        .map(|(&xi, &wi)| f(mid + half * xi) * wi)
        .sum::<Complex64>()
        * half
}

/// `int_a^b f(t) dt` along the segment from `a` to `b`, bisecting until the
/// 10- and 20-point rules agree to `tol` (absolute, scaled by `max(1, |I|)`).
pub fn integrate_segment<F>(f: F, a: Complex64, b: Complex64, tol: f64) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    recurse(&f, a, b, tol, 0)
}

fn recurse<F: Fn(Complex64) -> Complex64>(
    f: &F,
    a: Complex64,
    b: Complex64,
    tol: f64,
    depth: u32,
) -> Complex64 {
    let coarse = apply(f, a, b, LOW);
    let fine = apply(f, a, b, HIGH);
    if (fine - coarse).norm() <= tol * fine.norm().max(1.0) || depth >= MAX_DEPTH {
        return fine;
    }
    let m = (a + b) * 0.5;
    recurse(f, a, m, tol * 0.5, depth + 1) + recurse(f, m, b, tol * 0.5, depth + 1)
}
