//! Jacobi functions, the Opdam eigenfunctions of the Jacobi–Cherednik
//! operator, the c-function and the spectral (Plancherel) density.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{gamma_complex, ln_gamma_complex};
use super::hyp2f1::gauss_2f1;
use crate::error::{Error, Result};
use crate::params::Params;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Spatial weight `A(x) = sinh|x|^(2α+1) cosh|x|^(2β+1)`.
pub fn weight_a(x: f64, p: &Params) -> f64 {
    let ax = x.abs();
    ax.sinh().powf(2.0 * p.alpha() + 1.0) * ax.cosh().powf(2.0 * p.beta() + 1.0)
}

/// Jacobi function `φ_λ(x) = ₂F₁((ρ+iλ)/2, (ρ−iλ)/2; α+1; −sinh²x)`.
pub fn jacobi_phi(lambda: Complex64, x: f64, p: &Params) -> Result<Complex64> {
    let rho = p.rho();
    let a = (rho + I * lambda) / 2.0;
    let b = (rho - I * lambda) / 2.0;
    let c = Complex64::new(p.alpha() + 1.0, 0.0);
    let s = x.sinh();
    gauss_2f1(a, b, c, -s * s)
}

/// Opdam eigenfunction `G_λ`, normalized by `G_λ(0) = 1`:
/// `G_λ(x) = φ_λ(x) + (ρ+iλ)/(4(α+1)) sinh(2x) φ^{α+1,β+1}_λ(x)`.
pub fn opdam_g(lambda: Complex64, x: f64, p: &Params) -> Result<Complex64> {
    let even = jacobi_phi(lambda, x, p)?;
    if x == 0.0 {
        return Ok(even);
    }
    let odd = jacobi_phi(lambda, x, &p.shifted())?;
    let coef = (p.rho() + I * lambda) / (4.0 * (p.alpha() + 1.0));
    Ok(even + coef * (2.0 * x).sinh() * odd)
}

/// The same eigenfunction through `φ_λ − (ρ−iλ)^{-1} dφ_λ/dx`, with the
/// derivative from a fourth-order central difference. Only used to
/// cross-check [`opdam_g`].
pub fn opdam_g_derivative_form(lambda: Complex64, x: f64, p: &Params, h: f64) -> Result<Complex64> {
    let f = |t: f64| jacobi_phi(lambda, t, p);
    let d = (f(x - 2.0 * h)? - 8.0 * f(x - h)? + 8.0 * f(x + h)? - f(x + 2.0 * h)?) / (12.0 * h);
    let denom = p.rho() - I * lambda;
    if denom.norm() == 0.0 {
        return Err(Error::Pole {
            re: lambda.re,
            im: lambda.im,
        });
    }
    Ok(f(x)? - d / denom)
}

/// `C(λ) = 2^{ρ−iλ} Γ(α+1) Γ(iλ) / (Γ((ρ+iλ)/2) Γ((α−β+1+iλ)/2))`,
/// defined off `λ ∈ iℕ`.
pub fn cherednik_c(lambda: Complex64, p: &Params) -> Result<Complex64> {
    let rho = p.rho();
    let il = I * lambda;
    let num =
        (rho - il) * std::f64::consts::LN_2 + ln_gamma_complex(Complex64::new(p.alpha() + 1.0, 0.0))? + ln_gamma_complex(il)?;
    let den = ln_gamma_complex((rho + il) / 2.0)? + ln_gamma_complex((p.alpha() - p.beta() + 1.0 + il) / 2.0)?;
    let v = (num - den).exp();
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite("cherednik_c"))
    }
}

/// Value of the spectral measure density at a real `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDensity {
    /// `dσ/dλ`, complex.
    pub complex: Complex64,
    /// `d|σ|/dλ`.
    pub abs: f64,
}

impl SpectralDensity {
    /// Real part of `dσ/dλ`; the even-in-λ part of the measure and the one
    /// that pairs with even integrands.
    pub fn even(&self) -> f64 {
        self.complex.re
    }
}

/// Spectral density `2^{2ρ} (1 − ρ/(iλ)) / (8π|C(λ)|²)` for real `λ`.
///
/// The factor `2^{2ρ}` matches the density to the weight [`weight_a`], which
/// carries no powers of two; with it the inversion and Plancherel formulas
/// hold exactly. Using `|Γ(iλ)|² = π/(λ sinh πλ)` the density is written as
/// `(λ + iρ) sinh(πλ) |Γ((ρ+iλ)/2) Γ((α−β+1+iλ)/2)|² / (8π² Γ(α+1)²)`,
/// which is regular at `λ = 0` where it vanishes.
pub fn plancherel_density(lambda: f64, p: &Params) -> Result<SpectralDensity> {
    if lambda == 0.0 {
        return Ok(SpectralDensity {
            complex: Complex64::new(0.0, 0.0),
            abs: 0.0,
        });
    }
    let il = Complex64::new(0.0, lambda);
    let g1 = ln_gamma_complex((p.rho() + il) / 2.0)?;
    let g2 = ln_gamma_complex((p.alpha() - p.beta() + 1.0 + il) / 2.0)?;
    let ga = gamma_complex(Complex64::new(p.alpha() + 1.0, 0.0))?.re;
    let l = lambda.abs();
    // ln sinh(πl) without overflow
    let ln_sinh = PI * l + (-(-2.0 * PI * l).exp_m1()).ln() - std::f64::consts::LN_2;
    let scale = (2.0 * (g1.re + g2.re) + ln_sinh).exp() / (8.0 * PI * PI * ga * ga);
    // sinh is odd: (λ + iρ) sinh(πλ) = (|λ| + iρ sgn λ) sinh(π|λ|)
    let complex = Complex64::new(l, p.rho() * lambda.signum()) * scale;
    let out = SpectralDensity {
        complex,
        abs: complex.norm(),
    };
    if out.abs.is_finite() {
        Ok(out)
    } else {
        Err(Error::NonFinite("plancherel_density"))
    }
}

/// Nodes `±(k − 1/2) h`, `k = 1..=half`, increasing; symmetric and free of 0.
pub fn symmetric_uniform_nodes(half: usize, h: f64) -> Vec<f64> {
    let mut nodes: Vec<f64> = (1..=half).rev().map(|k| -(k as f64 - 0.5) * h).collect();
    nodes.extend((1..=half).map(|k| (k as f64 - 0.5) * h));
    nodes
}

/// Applies the Jacobi–Cherednik operator
/// `T f(x) = f'(x) + [(2α+1) coth x + (2β+1) tanh x] (f(x) − f(−x))/2 − ρ f(−x)`
/// to samples on a uniform grid symmetric about 0 that excludes 0.
///
/// `f'` uses second-order central differences (one-sided at the two ends).
pub fn jacobi_cherednik_apply(nodes: &[f64], values: &[Complex64], p: &Params) -> Result<Vec<Complex64>> {
    let n = nodes.len();
    if n < 4 || values.len() != n {
        return Err(Error::ShapeMismatch {
            expected: (n, 1),
            got: (values.len(), 1),
        });
    }
    let h = nodes[1] - nodes[0];
    for i in 0..n {
        let mirror = nodes[n - 1 - i];
        if (nodes[i] + mirror).abs() > 1e-12 * h.max(1.0) || nodes[i] == 0.0 {
            return Err(Error::GridAsymmetry {
                index: i,
                node: nodes[i],
                mirror,
            });
        }
        if i > 0 && ((nodes[i] - nodes[i - 1]) - h).abs() > 1e-9 * h {
            return Err(Error::Unsupported("jacobi_cherednik_apply needs a uniform grid".into()));
        }
    }
    let (a2, b2, rho) = (2.0 * p.alpha() + 1.0, 2.0 * p.beta() + 1.0, p.rho());
    let out = (0..n)
        .map(|i| {
            let d = if i == 0 {
                (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h)
            } else if i == n - 1 {
                (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h)
            } else {
                (values[i + 1] - values[i - 1]) / (2.0 * h)
            };
            let x = nodes[i];
            let reflected = values[n - 1 - i];
            let odd = (values[i] - reflected) / 2.0;
            d + (a2 / x.tanh() + b2 * x.tanh()) * odd - rho * reflected
        })
        .collect();
    Ok(out)
}
