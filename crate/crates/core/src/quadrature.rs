//! Gauss rules used by the grids and the translation kernel.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::specfun::ln_gamma_complex;
use crate::Complex64;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes increasing.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        dp = if d != 0.0 { d } else { dp };
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let (m, r) = ((a + b) / 2.0, (b - a) / 2.0);
    (x.iter().map(|t| m + r * t).collect(), w.iter().map(|t| r * t).collect())
}

/// Gauss–Jacobi rule for the weight `(1 − t)^a (1 + t)^b` on `[-1, 1]`,
/// from the eigen-decomposition of the Jacobi matrix. Needs `a, b > −1`.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let ab = a + b;
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        let diag = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
        j[(k, k)] = diag;
        if k + 1 < n {
            let k1 = kf + 1.0;
            let s1 = 2.0 * k1 + ab;
            // (k1 + ab) / (s1 - 1) is 1 at k1 = 1; keep it exact for a + b = -1
            let ratio = if k == 0 { 1.0 } else { (k1 + ab) / (s1 - 1.0) };
            let off = (4.0 * k1 * (k1 + a) * (k1 + b) * ratio / (s1 * s1 * (s1 + 1.0))).sqrt();
            j[(k, k + 1)] = off;
            j[(k + 1, k)] = off;
        }
    }
    let lg = |v: f64| ln_gamma_complex(Complex64::new(v, 0.0)).map(|z| z.re).unwrap_or(f64::NAN);
    let mu0 = ((ab + 1.0) * std::f64::consts::LN_2 + lg(a + 1.0) + lg(b + 1.0) - lg(ab + 2.0)).exp();
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let v0 = eig.eigenvectors[(0, k)];
            (eig.eigenvalues[k], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    pairs.into_iter().unzip()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        for deg in 0..16 {
            let q: f64 = x.iter().zip(&w).map(|(t, v)| v * t.powi(deg)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-14, "deg {deg}");
        }
    }

    #[test]
    fn jacobi_reduces_to_legendre() {
        let (x, w) = gauss_jacobi(8, 0.0, 0.0);
        let (y, v) = gauss_legendre(8);
        for i in 0..8 {
            assert!((x[i] - y[i]).abs() < 1e-13);
            assert!((w[i] - v[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn jacobi_chebyshev_weights() {
        // a = b = -1/2: nodes cos((2k-1)π/2n), weights π/n
        let n = 7;
        let (x, w) = gauss_jacobi(n, -0.5, -0.5);
        for (k, (xi, wi)) in x.iter().zip(&w).enumerate() {
            let t = -((2 * k + 1) as f64 * PI / (2 * n) as f64).cos();
            assert!((xi - t).abs() < 1e-13);
            assert!((wi - PI / n as f64).abs() < 1e-13);
        }
    }
}
