//! Generalized translation kernel, the translation operator and the
//! convolution it induces.
//!
//! With `t = cos χ` the kernel integral becomes
//! `∫_{t*}^{1} (2abc)^{α−β−1} (t − t*)^{α−β−1} (1 − t)^{β−1/2} (1 + t)^{β−1/2} (P + Q t + S (1 − t²)) dt`
//! where `a, b, c` are the hyperbolic cosines, `t* = (a² + b² + c² − 1)/(2abc)`
//! and the bracket is affine in `t` apart from the `sin²χ` term. The first
//! two powers are absorbed into a Gauss–Jacobi rule; the third is smooth
//! unless `t*` is close to −1 and `β < 1/2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{integrate_a, PanelRule, SampledFunction, SpatialGrid};
use crate::quadrature::{gauss_jacobi, gauss_legendre};
use crate::specfun::weight_a;
use crate::transform::forward_at;
use crate::{Complex64, Params};

/// Default number of Gauss–Jacobi nodes in the χ-integral.
pub const CHI_NODES: usize = 64;
/// Target width of a quadrature panel across the `z`-band, before the
/// endpoint-clustering map.
pub const BAND_PANEL_WIDTH: f64 = 0.25;
/// Gauss–Legendre nodes per band panel.
pub const BAND_ORDER: usize = 8;

/// The χ-integral of the kernel without the constant `M`.
#[derive(Debug, Clone)]
pub struct KernelRule {
    params: Params,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// exponent of `(1 ± t)`, `β − 1/2`
    side: f64,
    /// exponent of `(t − t*)`, `α − β − 1`
    inner: f64,
}

impl KernelRule {
    pub fn new(params: Params, chi_nodes: usize) -> Result<Self> {
        let side = params.beta() - 0.5;
        let inner = params.alpha() - params.beta() - 1.0;
        if params.beta() <= -0.5 {
            return Err(Error::Unsupported(
                "the translation kernel needs β > −1/2 (its sin²χ coefficient is ρ/(β + 1/2))".into(),
            ));
        }
        if inner <= -1.0 {
            return Err(Error::Unsupported(
                "the translation kernel needs α > β (the weight g^(α−β−1) is not integrable at α = β)".into(),
            ));
        }
        let (nodes, weights) = gauss_jacobi(chi_nodes, side, inner);
        Ok(Self {
            params,
            nodes,
            weights,
            side,
            inner,
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn chi_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// `K(x, y, |z|)` and `K(x, y, −|z|)` for `M = 1`.
    pub fn kernel_pair(&self, x: f64, y: f64, az: f64) -> (f64, f64) {
        if x == 0.0 || y == 0.0 || az == 0.0 {
            return (0.0, 0.0);
        }
        let (ax, ay) = (x.abs(), y.abs());
        if !((ax - ay).abs() < az && az < ax + ay) {
            return (0.0, 0.0);
        }
        let (a, b, c) = (x.cosh(), y.cosh(), az.cosh());
        let abc = a * b * c;
        // 1 − t* = (2abc − a² − b² − c² + 1)/(2abc), written to keep the
        // cancellation near the inner band edge small
        let num = 1.0 - a * a - b * b - c * c + 2.0 * abc;
        let one_minus = num / (2.0 * abc);
        if one_minus <= 0.0 {
            return (0.0, 0.0);
        }
        let tstar = 1.0 - one_minus;
        let half = 0.5 * one_minus;
        let (mut j0, mut j1, mut j2) = (0.0, 0.0, 0.0);
        for (u, w) in self.nodes.iter().zip(&self.weights) {
            let t = tstar + half * (1.0 + u);
            let mut wt = *w;
            if self.side != 0.0 {
                wt *= (1.0 + t).powf(self.side);
            }
            j0 += wt;
            j1 += wt * t;
            j2 += wt * (1.0 - t * t);
        }
        let scale = (2.0 * abc).powf(self.inner) * half.powf(self.inner + self.side + 1.0);
        let (j0, j1, j2) = (j0 * scale, j1 * scale, j2 * scale);
        let rho = self.params.rho();
        let alpha = self.params.alpha();
        let beta = self.params.beta();
        let (sx, sy) = (x.sinh(), y.sinh());
        let eval = |z_sign: f64| {
            let sz = z_sign * az.sinh();
            let p = 1.0 - a * b / (sx * sy) + a * c / (sx * sz) + c * b / (sz * sy);
            let q = c / (sx * sy) - b / (sx * sz) - a / (sz * sy);
            let s = rho / (beta + 0.5) * abc / (sx * sy * sz);
            (sx * sy * sz).abs().powf(-2.0 * alpha) * (p * j0 + q * j1 + s * j2)
        };
        (eval(1.0), eval(-1.0))
    }

    /// `K(x, y, z)` for `M = 1`.
    pub fn kernel_unit(&self, x: f64, y: f64, z: f64) -> f64 {
        let (plus, minus) = self.kernel_pair(x, y, z.abs());
        if z >= 0.0 {
            plus
        } else {
            minus
        }
    }
}

/// Nodes and weights over `[lo, hi]` clustered at both ends by
/// `z = lo + (hi − lo)(1 − cos θ)/2`.
fn band_rule(lo: f64, hi: f64, gl: &(Vec<f64>, Vec<f64>)) -> Vec<(f64, f64)> {
    let width = hi - lo;
    let panels = ((width / BAND_PANEL_WIDTH).ceil() as usize).max(2);
    let h = std::f64::consts::PI / panels as f64;
    let mut out = Vec::with_capacity(panels * gl.0.len());
    for k in 0..panels {
        let mid = (k as f64 + 0.5) * h;
        for (t, w) in gl.0.iter().zip(&gl.1) {
            let theta = mid + 0.5 * h * t;
            let z = lo + 0.5 * width * (1.0 - theta.cos());
            let dz = 0.5 * width * theta.sin() * 0.5 * h * w;
            out.push((z, dz));
        }
    }
    out
}

/// Fitted translation constant `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibratedM {
    pub value: f64,
    /// Largest relative residual of the calibration identity at the held-out
    /// points.
    pub residual: f64,
    /// `(x, λ, relative residual)` for every held-out point.
    pub held_out: Vec<(f64, f64, f64)>,
}

/// Translation operator `τ_x` for one parameter pair and constant `M`.
#[derive(Debug, Clone)]
pub struct Translator {
    rule: KernelRule,
    m: f64,
    band_gl: (Vec<f64>, Vec<f64>),
}

impl Translator {
    pub fn new(params: Params, m: f64) -> Result<Self> {
        Self::with_chi_nodes(params, m, CHI_NODES)
    }

    pub fn with_chi_nodes(params: Params, m: f64, chi_nodes: usize) -> Result<Self> {
        Ok(Self {
            rule: KernelRule::new(params, chi_nodes)?,
            m,
            band_gl: gauss_legendre(BAND_ORDER),
        })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn params(&self) -> &Params {
        self.rule.params()
    }

    pub fn kernel_rule(&self) -> &KernelRule {
        &self.rule
    }

    /// `K(x, y, z)`.
    pub fn kernel(&self, x: f64, y: f64, z: f64) -> f64 {
        self.m * self.rule.kernel_unit(x, y, z)
    }

    /// Adds the coefficients `c_k` with `τ_x f(y) ≈ Σ_k c_k f_k` for samples
    /// `f_k` on `rule`, whose weight function is `weight`, to `out`.
    pub fn add_row(&self, rule: &PanelRule, weight: &impl Fn(f64) -> f64, x: f64, y: f64, out: &mut [f64]) {
        if x == 0.0 || y == 0.0 {
            // delta branches: τ_0 f(y) = f(y), τ_x f(0) = f(x)
            let at = if x == 0.0 { y } else { x };
            if let Some((start, coef)) = rule.lagrange_row(at) {
                for (o, c) in out[start..start + coef.len()].iter_mut().zip(coef) {
                    *o += c;
                }
            }
            return;
        }
        let lo = (x.abs() - y.abs()).abs();
        let hi = (x.abs() + y.abs()).min(rule.radius());
        if hi <= lo {
            return;
        }
        for (az, dz) in band_rule(lo, hi, &self.band_gl) {
            let (kp, km) = self.rule.kernel_pair(x, y, az);
            let base = self.m * weight(az) * dz;
            for (z, k) in [(az, kp), (-az, km)] {
                if k == 0.0 {
                    continue;
                }
                if let Some((start, coef)) = rule.lagrange_row(z) {
                    let v = base * k;
                    for (o, c) in out[start..start + coef.len()].iter_mut().zip(coef) {
                        *o += v * c;
                    }
                }
            }
        }
    }

    /// Dense matrix of `τ_x` on the nodes of `rule`.
    pub fn matrix_on(&self, rule: &PanelRule, weight: &impl Fn(f64) -> f64, x: f64) -> TranslationMatrix {
        let n = rule.len();
        let mut values = vec![0.0; n * n];
        for (i, &y) in rule.nodes().iter().enumerate() {
            self.add_row(rule, weight, x, y, &mut values[i * n..(i + 1) * n]);
        }
        TranslationMatrix { n, values }
    }

    /// Matrix of `τ_x` on a spatial grid.
    pub fn matrix(&self, grid: &SpatialGrid, x: f64) -> TranslationMatrix {
        let p = *self.params();
        self.matrix_on(grid.rule(), &|z| weight_a(z, &p), x)
    }

    /// `τ_x f(y)` at one point.
    pub fn translate_at(&self, f: &SampledFunction, x: f64, y: f64) -> Complex64 {
        let grid = f.grid();
        let p = *self.params();
        let mut row = vec![0.0; grid.len()];
        self.add_row(grid.rule(), &|z| weight_a(z, &p), x, y, &mut row);
        row.iter().zip(f.samples()).map(|(c, s)| s * c).sum()
    }

    /// `τ_x f` on the grid of `f`.
    pub fn translate(&self, f: &SampledFunction, x: f64) -> Result<SampledFunction> {
        if x == 0.0 {
            return Ok(f.clone());
        }
        let t = self.matrix(f.grid(), x);
        SampledFunction::new(f.grid().clone(), t.apply(f.samples()))
    }

    /// `(f ∗ g)(x) = ∫ τ_x f(−y) g(y) A(y) dy` on the grid of `f`.
    pub fn convolve(&self, f: &SampledFunction, g: &SampledFunction) -> Result<SampledFunction> {
        let grid = f.grid();
        if g.grid().len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: (grid.len(), 1),
                got: (g.grid().len(), 1),
            });
        }
        let n = grid.len();
        let p = *self.params();
        let weight = |z: f64| weight_a(z, &p);
        let gw: Vec<Complex64> = g.samples().iter().zip(grid.weights()).map(|(s, w)| s * w).collect();
        let mut out = Vec::with_capacity(n);
        let mut row = vec![0.0; n];
        for &x in grid.nodes() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, &y) in grid.nodes().iter().enumerate() {
                if gw[i] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                row.iter_mut().for_each(|r| *r = 0.0);
                self.add_row(grid.rule(), &weight, x, -y, &mut row);
                let tf: Complex64 = row.iter().zip(f.samples()).map(|(c, s)| s * c).sum();
                acc += tf * gw[i];
            }
            out.push(acc);
        }
        SampledFunction::new(grid.clone(), out)
    }
}

/// Dense real matrix of a translation on a grid, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TranslationMatrix {
    n: usize,
    values: Vec<f64>,
}

impl TranslationMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.values[i * self.n + k]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(f).map(|(c, s)| s * c).sum())
            .collect()
    }

    pub fn apply_real(&self, f: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(f).map(|(c, s)| s * c).sum())
            .collect()
    }
}

/// Held-out `(x, λ)` points for [`calibrate_m`].
pub const HELD_OUT: [(f64, f64); 6] = [(0.5, 1.0), (1.0, 0.5), (1.5, 2.0), (0.8, 3.0), (2.0, 1.5), (-0.7, 2.5)];

/// Largest held-out residual accepted by [`calibrate_m`].
pub const CALIBRATION_LIMIT: f64 = 0.05;

/// Fits `M` so that `H(τ_{x0} f)(λ0) = G_{λ0}(x0) Hf(λ0)` at the given point,
/// then measures the same identity at `held_out`.
pub fn calibrate_m(f: &SampledFunction, x0: f64, lambda0: f64, held_out: &[(f64, f64)]) -> Result<CalibratedM> {
    if x0 == 0.0 {
        return Err(Error::DegenerateCalibrationPoint);
    }
    let p = *f.grid().params();
    let unit = Translator::new(p, 1.0)?;
    let (b, a) = identity_sides(&unit, f, x0, lambda0)?;
    if a.norm() < 1e-8 * crate::grid::norm_l2_a(f) || b.norm() == 0.0 {
        return Err(Error::DegenerateCalibrationPoint);
    }
    let m = (b.conj() * a).re / b.norm_sqr();
    let rows = identity_residuals(&Translator::new(p, m)?, f, held_out)?;
    let worst = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    if worst > CALIBRATION_LIMIT {
        return Err(Error::CalibrationFailure {
            residual: worst,
            limit: CALIBRATION_LIMIT,
        });
    }
    Ok(CalibratedM {
        value: m,
        residual: worst,
        held_out: rows,
    })
}

fn identity_sides(t: &Translator, f: &SampledFunction, x: f64, l: f64) -> Result<(Complex64, Complex64)> {
    let lambda = Complex64::new(l, 0.0);
    let lhs = forward_at(&t.translate(f, x)?, lambda)?;
    let rhs = crate::specfun::opdam_g(lambda, x, t.params())? * forward_at(f, lambda)?;
    Ok((lhs, rhs))
}

/// `(x, λ, r)` with `r` the relative residual of
/// `H(τ_x f)(λ) = G_λ(x) Hf(λ)` for every point.
pub fn identity_residuals(t: &Translator, f: &SampledFunction, points: &[(f64, f64)]) -> Result<Vec<(f64, f64, f64)>> {
    points
        .iter()
        .map(|&(x, l)| {
            let (lhs, rhs) = identity_sides(t, f, x, l)?;
            Ok((x, l, (lhs - rhs).norm() / rhs.norm().max(f64::MIN_POSITIVE)))
        })
        .collect()
}

/// `count` triples with `x, y` uniform in `[−radius, radius]` and `|z|`
/// uniform strictly inside the band, random sign.
pub fn admissible_triples(count: usize, radius: f64, seed: u64) -> Vec<(f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x = rng.gen_range(-radius..radius);
        let y = rng.gen_range(-radius..radius);
        let (lo, hi) = ((x.abs() - y.abs()).abs(), x.abs() + y.abs());
        let u: f64 = rng.gen_range(0.02..0.98);
        let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        if hi - lo < 1e-3 {
            continue;
        }
        out.push((x, y, sign * (lo + u * (hi - lo))));
    }
    out
}

/// Largest `|K|` over `count` random triples outside the band, where the
/// kernel must vanish exactly.
pub fn band_violation(rule: &KernelRule, count: usize, radius: f64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let x: f64 = rng.gen_range(-radius..radius);
        let y: f64 = rng.gen_range(-radius..radius);
        let (lo, hi) = ((x.abs() - y.abs()).abs(), x.abs() + y.abs());
        // below the band, on its edges, or above it
        let az = match rng.gen_range(0..4) {
            0 => lo * rng.gen::<f64>(),
            1 => lo,
            2 => hi,
            _ => hi + rng.gen_range(0.0..radius),
        };
        let z = if rng.gen::<bool>() { az } else { -az };
        worst = worst.max(rule.kernel_unit(x, y, z).abs());
    }
    worst
}

/// Largest relative deviation of `K(y,x,z)`, `K(−z,y,−x)` and `K(x,−z,−y)`
/// from `K(x,y,z)`.
pub fn symmetry_defect(rule: &KernelRule, triples: &[(f64, f64, f64)]) -> f64 {
    let mut worst = 0.0_f64;
    for &(x, y, z) in triples {
        let k = rule.kernel_unit(x, y, z);
        for other in [
            rule.kernel_unit(y, x, z),
            rule.kernel_unit(-z, y, -x),
            rule.kernel_unit(x, -z, -y),
        ] {
            let scale = k.abs().max(other.abs());
            if scale > 0.0 {
                worst = worst.max((k - other).abs() / scale);
            }
        }
    }
    worst
}

/// Largest relative change of `∫ f A` under `τ_x` over `xs`.
pub fn mass_defect(t: &Translator, f: &SampledFunction, xs: &[f64]) -> Result<f64> {
    let base = integrate_a(f);
    if base.norm() == 0.0 {
        return Err(Error::InvalidParams(
            "mass defect needs a function with nonzero integral".into(),
        ));
    }
    let mut worst = 0.0_f64;
    for &x in xs {
        let moved = integrate_a(&t.translate(f, x)?);
        worst = worst.max((moved - base).norm() / base.norm());
    }
    Ok(worst)
}
