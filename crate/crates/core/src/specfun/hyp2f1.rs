//! Gauss hypergeometric function ₂F₁(a, b; c; z) for complex parameters and
//! real non-positive argument.
//!
//! * `-1/2 <= z <= 0`: the defining power series.
//! * `z < -1/2`: Pfaff's transformation to `t = z/(z-1) ∈ (1/3, 1)`, then the
//!   power series in `t` while it converges within the term budget.
//!
//! Both series alternate and lose digits when the parameters are large (for
//! the Jacobi function, once `λ sinh x` is large). Whenever the peak term
//! exceeds the sum by more than [`CONDITION_LIMIT`], or `t` is close to 1,
//! the `1 - t` connection formula is evaluated as well and the better
//! conditioned value is kept.

use num_complex::Complex64;

use super::gamma::{ln_gamma_complex, POLE_TOLERANCE};
use crate::error::{Error, Result};

/// Relative size of the last accepted term.
pub const SERIES_TOLERANCE: f64 = 1e-15;
/// Maximum number of series terms.
pub const SERIES_BUDGET: usize = 10_000;
/// Above this value of the Pfaff argument the series is replaced by the
/// expansion around 1.
pub const NEAR_ONE_THRESHOLD: f64 = 0.9;
/// Largest accepted ratio of peak term to result before the alternative
/// expansion is tried.
pub const CONDITION_LIMIT: f64 = 1e2;
/// Offset used around a degenerate `c - a - b` in the connection formula,
/// divided by `|ln(1 - t)|`. Gaps below a quarter of the offset count as
/// degenerate.
const DEGENERATE_STEP: f64 = 1e-3;

fn near_nonpositive_integer(c: Complex64) -> bool {
    let n = c.re.round();
    n <= 0.0 && (c - Complex64::new(n, 0.0)).norm() < POLE_TOLERANCE
}

/// A value with its cancellation estimate, the largest intermediate
/// magnitude divided by the magnitude of the result.
#[derive(Debug, Clone, Copy)]
struct Conditioned {
    value: Complex64,
    condition: f64,
}

impl Conditioned {
    fn new(value: Complex64, peak: f64) -> Self {
        let size = value.norm();
        let condition = if size > 0.0 { (peak / size).max(1.0) } else { f64::INFINITY };
        Self { value, condition }
    }

    fn scaled(self, k: Complex64) -> Self {
        Self {
            value: self.value * k,
            condition: self.condition,
        }
    }
}

/// Power series of ₂F₁ at real `t` with `|t| < 1`.
fn series(a: Complex64, b: Complex64, c: Complex64, t: f64) -> Result<Conditioned> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut peak = 1.0_f64;
    if t == 0.0 {
        return Ok(Conditioned::new(sum, peak));
    }
    for n in 0..SERIES_BUDGET {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * t;
        sum += term;
        let size = term.norm();
        peak = peak.max(size);
        if size == 0.0 || size <= SERIES_TOLERANCE * sum.norm() {
            return Ok(Conditioned::new(sum, peak));
        }
    }
    Err(Error::NonConvergence {
        terms: SERIES_BUDGET,
        last: term.norm() / sum.norm(),
    })
}

/// ₂F₁(a, b; c; 1 - s) for `0 < s < 1`.
fn near_one(a: Complex64, b: Complex64, c: Complex64, s: f64) -> Result<Conditioned> {
    let m = c - a - b;
    let k = m.re.round();
    let gap = (m - Complex64::new(k, 0.0)).norm();
    // the dependence on c - a - b enters through s^(c-a-b)
    let step = DEGENERATE_STEP / s.ln().abs().max(1.0);
    if gap < step / 4.0 {
        // The two Gamma-weighted terms blow up with opposite signs. Use
        // symmetric pairs of nearby non-degenerate evaluations and cancel the
        // second-order error by Richardson extrapolation.
        let mut worst = 1.0_f64;
        let mut pair = |h: f64| -> Result<Complex64> {
            let h = Complex64::new(h, 0.0);
            let up = connection(a + h, b, c, s)?;
            let down = connection(a - h, b, c, s)?;
            worst = worst.max(up.condition).max(down.condition);
            Ok(0.5 * (up.value + down.value))
        };
        let near = pair(step)?;
        let far = pair(2.0 * step)?;
        let value = (4.0 * near - far) / 3.0;
        // the perturbed terms are of size 1/step each
        let peak = worst * near.norm().max(far.norm()) / step;
        return Ok(Conditioned::new(value, peak));
    }
    connection(a, b, c, s)
}

fn gamma_ratio(num: &[Complex64], den: &[Complex64]) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for &d in den {
        if near_nonpositive_integer(d) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        acc -= ln_gamma_complex(d)?;
    }
    for &n in num {
        acc += ln_gamma_complex(n)?;
    }
    Ok(acc.exp())
}

fn connection(a: Complex64, b: Complex64, c: Complex64, s: f64) -> Result<Conditioned> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let m = c - a - b;
    let w1 = gamma_ratio(&[c, m], &[c - a, c - b])?;
    let w2 = gamma_ratio(&[c, -m], &[a, b])?;
    let mut value = zero;
    let mut peak = 0.0_f64;
    if w1 != zero {
        let f = series(a, b, one - m, s)?;
        let part = w1 * f.value;
        value += part;
        peak = peak.max(part.norm() * f.condition);
    }
    if w2 != zero {
        let f = series(c - a, c - b, one + m, s)?;
        let part = w2 * (m * s.ln()).exp() * f.value;
        value += part;
        peak = peak.max(part.norm() * f.condition);
    }
    Ok(Conditioned::new(value, peak))
}

/// Analytically continued ₂F₁(a, b; c; z) for real `z <= 0`.
pub fn gauss_2f1(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<Complex64> {
    if near_nonpositive_integer(c) {
        return Err(Error::ParameterPole { re: c.re, im: c.im });
    }
    if !z.is_finite() {
        return Err(Error::NonFinite("gauss_2f1 argument"));
    }
    if z > 0.0 {
        return Err(Error::Unsupported(format!(
            "gauss_2f1 is only implemented for z <= 0 (got {z})"
        )));
    }
    if z == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let q = -z;
    let one_plus_q = 1.0 + q;
    // t = q/(1+q) and s = 1 - t, each formed without cancellation
    let t = q / one_plus_q;
    let s = 1.0 / one_plus_q;
    let prefactor = (-a * one_plus_q.ln()).exp();
    let primary = if q <= 0.5 {
        Some(series(a, b, c, z))
    } else if t <= NEAR_ONE_THRESHOLD {
        Some(series(a, c - b, c, t).map(|v| v.scaled(prefactor)))
    } else {
        None
    };
    let chosen = match primary {
        Some(Ok(v)) if v.condition <= CONDITION_LIMIT => v,
        Some(first) => match near_one(a, c - b, c, s) {
            Ok(alt) => match first {
                Ok(v) if v.condition <= alt.condition => v,
                _ => alt.scaled(prefactor),
            },
            Err(e) => first.map_err(|_| e)?,
        },
        None => near_one(a, c - b, c, s)?.scaled(prefactor),
    };
    let value = chosen.value;
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite("gauss_2f1"))
    }
}
