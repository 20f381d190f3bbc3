//! Truncated quadrature grids, sampled functions, spectra, time–frequency
//! planes, and the integrals and norms over them.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::Params;
use crate::quadrature::gauss_legendre;
use crate::specfun::{plancherel_density, weight_a};
use crate::Complex64;

/// Distance of the innermost panel edge from 0. Keeps every node off the
/// origin, where the Jacobi–Cherednik operator is singular.
pub const FIRST_NODE_OFFSET: f64 = 1e-6;

/// Composite Gauss–Legendre rule on `[-R, -δ] ∪ [δ, R]` with equal panels
/// on each half-line, mirrored about 0.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelRule {
    nodes: Vec<f64>,
    dx: Vec<f64>,
    panels: usize,
    order: usize,
    radius: f64,
    offset: f64,
    bary: Vec<f64>,
}

impl PanelRule {
    pub fn symmetric(radius: f64, panels: usize, order: usize) -> Result<Self> {
        if !(radius.is_finite() && radius > FIRST_NODE_OFFSET) || panels == 0 || order < 2 {
            return Err(Error::InvalidParams(format!(
                "panel rule needs R > {FIRST_NODE_OFFSET}, panels >= 1, order >= 2 (got R = {radius}, {panels} panels, order {order})"
            )));
        }
        let (t, w) = gauss_legendre(order);
        let offset = FIRST_NODE_OFFSET;
        let h = (radius - offset) / panels as f64;
        let mut pos = Vec::with_capacity(panels * order);
        let mut pw = Vec::with_capacity(panels * order);
        for k in 0..panels {
            let mid = offset + (k as f64 + 0.5) * h;
            for (ti, wi) in t.iter().zip(&w) {
                pos.push(mid + 0.5 * h * ti);
                pw.push(0.5 * h * wi);
            }
        }
        let mut nodes: Vec<f64> = pos.iter().rev().map(|v| -v).collect();
        nodes.extend(&pos);
        let mut dx: Vec<f64> = pw.iter().rev().copied().collect();
        dx.extend(&pw);
        // barycentric weights of the reference nodes
        let bary = (0..order)
            .map(|j| {
                let prod: f64 = (0..order).filter(|&k| k != j).map(|k| t[j] - t[k]).product();
                1.0 / prod
            })
            .collect();
        Ok(Self {
            nodes,
            dx,
            panels,
            order,
            radius,
            offset,
            bary,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Plain `dx` quadrature weights.
    pub fn dx(&self) -> &[f64] {
        &self.dx
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Index of the node at `-nodes[i]`.
    pub fn mirror(&self, i: usize) -> usize {
        self.nodes.len() - 1 - i
    }

    /// Lagrange coefficients of the panel polynomial through the nodes of
    /// the panel containing `t`. Returns the index of the first panel node
    /// and `order` coefficients, or `None` outside `[-R, R]`.
    pub fn lagrange_row(&self, t: f64) -> Option<(usize, Vec<f64>)> {
        let at = t.abs();
        if at > self.radius {
            return None;
        }
        let h = (self.radius - self.offset) / self.panels as f64;
        let k = (((at - self.offset) / h).floor().max(0.0) as usize).min(self.panels - 1);
        let half = self.panels * self.order;
        let start = if t >= 0.0 {
            half + k * self.order
        } else {
            half - (k + 1) * self.order
        };
        let pts = &self.nodes[start..start + self.order];
        let mut coef = vec![0.0; self.order];
        if let Some(j) = pts.iter().position(|&p| p == t) {
            coef[j] = 1.0;
            return Some((start, coef));
        }
        // a negative panel holds the reference nodes reflected; the common
        // sign and scale of the weights cancel in the normalized form
        let mut total = 0.0;
        for j in 0..self.order {
            let b = if t >= 0.0 {
                self.bary[j]
            } else {
                self.bary[self.order - 1 - j]
            };
            coef[j] = b / (t - pts[j]);
            total += coef[j];
        }
        for c in &mut coef {
            *c /= total;
        }
        Some((start, coef))
    }

    /// Panel-polynomial interpolant of `samples` at `t`, zero outside `[-R, R]`.
    pub fn interpolate(&self, samples: &[Complex64], t: f64) -> Complex64 {
        match self.lagrange_row(t) {
            Some((start, coef)) => coef.iter().zip(&samples[start..start + coef.len()]).map(|(c, s)| s * c).sum(),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Same rule with `factor` times as many panels.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::symmetric(self.radius, self.panels * factor.max(1), self.order)
    }
}

/// Shape of a grid: truncation radius, panels per half-line, nodes per panel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub radius: f64,
    pub panels: usize,
    pub order: usize,
}

impl GridSpec {
    pub fn refined(self, factor: usize) -> Self {
        Self {
            panels: self.panels * factor.max(1),
            ..self
        }
    }

    pub fn len(&self) -> usize {
        2 * self.panels * self.order
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Quadrature grid for `A(x) dx` on `[-R, R]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialGrid {
    rule: PanelRule,
    weights: Vec<f64>,
    params: Params,
}

impl SpatialGrid {
    pub fn new(spec: GridSpec, params: Params) -> Result<Self> {
        let rule = PanelRule::symmetric(spec.radius, spec.panels, spec.order)?;
        let weights = rule
            .nodes()
            .iter()
            .zip(rule.dx())
            .map(|(&x, &w)| w * weight_a(x, &params))
            .collect();
        Ok(Self { rule, weights, params })
    }

    pub fn rule(&self) -> &PanelRule {
        &self.rule
    }

    pub fn nodes(&self) -> &[f64] {
        self.rule.nodes()
    }

    /// Quadrature weights including `A(x_i)`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.rule.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rule.is_empty()
    }

    pub fn radius(&self) -> f64 {
        self.rule.radius()
    }

    pub fn mirror(&self, i: usize) -> usize {
        self.rule.mirror(i)
    }
}

/// Which spectral measure a λ-integral is taken against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralMeasure {
    /// The complex measure `dσ`.
    Complex,
    /// Its total variation `d|σ|`.
    Absolute,
    /// `dν = Re dσ`, the positive even part. Pairs with even functions of λ,
    /// for which `∫ F dσ = ∫ F dν`.
    Even,
}

/// Quadrature grid for the spectral measures on `[-Λ, Λ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid {
    rule: PanelRule,
    complex_weights: Vec<Complex64>,
    abs_weights: Vec<f64>,
    even_weights: Vec<f64>,
    params: Params,
}

impl SpectralGrid {
    pub fn new(spec: GridSpec, params: Params) -> Result<Self> {
        let rule = PanelRule::symmetric(spec.radius, spec.panels, spec.order)?;
        let mut complex_weights = Vec::with_capacity(rule.len());
        for (&l, &w) in rule.nodes().iter().zip(rule.dx()) {
            complex_weights.push(plancherel_density(l, &params)?.complex * w);
        }
        let abs_weights = complex_weights.iter().map(|c| c.norm()).collect();
        let even_weights = complex_weights.iter().map(|c| c.re).collect();
        Ok(Self {
            rule,
            complex_weights,
            abs_weights,
            even_weights,
            params,
        })
    }

    pub fn rule(&self) -> &PanelRule {
        &self.rule
    }

    pub fn nodes(&self) -> &[f64] {
        self.rule.nodes()
    }

    pub fn complex_weights(&self) -> &[Complex64] {
        &self.complex_weights
    }

    pub fn abs_weights(&self) -> &[f64] {
        &self.abs_weights
    }

    pub fn even_weights(&self) -> &[f64] {
        &self.even_weights
    }

    /// Real weights of a positive measure; `Complex` is not one.
    pub fn real_weights(&self, measure: SpectralMeasure) -> Result<&[f64]> {
        match measure {
            SpectralMeasure::Absolute => Ok(&self.abs_weights),
            SpectralMeasure::Even => Ok(&self.even_weights),
            SpectralMeasure::Complex => Err(Error::Unsupported("the complex spectral measure has no real weights".into())),
        }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.rule.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rule.is_empty()
    }

    pub fn radius(&self) -> f64 {
        self.rule.radius()
    }

    pub fn mirror(&self, j: usize) -> usize {
        self.rule.mirror(j)
    }
}

fn check_finite(samples: &[Complex64], what: &'static str) -> Result<()> {
    if samples.iter().all(|s| s.re.is_finite() && s.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Complex samples of a function on a [`SpatialGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Arc<SpatialGrid>,
    samples: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(grid: Arc<SpatialGrid>, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: (grid.len(), 1),
                got: (samples.len(), 1),
            });
        }
        check_finite(&samples, "sampled function")?;
        Ok(Self { grid, samples })
    }

    pub fn from_fn(grid: Arc<SpatialGrid>, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let samples = grid.nodes().iter().map(|&x| f(x)).collect();
        Self::new(grid, samples)
    }

    pub fn zeros(grid: Arc<SpatialGrid>) -> Self {
        let samples = vec![Complex64::new(0.0, 0.0); grid.len()];
        Self { grid, samples }
    }

    pub fn grid(&self) -> &Arc<SpatialGrid> {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    /// Panel interpolant at an arbitrary point, zero beyond the truncation.
    pub fn eval(&self, x: f64) -> Complex64 {
        self.grid.rule().interpolate(&self.samples, x)
    }

    /// `f(−x)`.
    pub fn reflected(&self) -> Self {
        let samples = self.samples.iter().rev().copied().collect();
        Self {
            grid: self.grid.clone(),
            samples,
        }
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        self.map(|z| z * c)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid.clone(),
            samples: self.samples.iter().map(|&z| f(z)).collect(),
        }
    }

    /// `a·self + b·other` on the same grid.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        if !Arc::ptr_eq(&self.grid, &other.grid) && self.grid != other.grid {
            return Err(Error::ShapeMismatch {
                expected: (self.grid.len(), 1),
                got: (other.grid.len(), 1),
            });
        }
        let samples = self.samples.iter().zip(&other.samples).map(|(x, y)| a * x + b * y).collect();
        Ok(Self {
            grid: self.grid.clone(),
            samples,
        })
    }

    /// Fraction of `‖f‖²` carried by nodes with `|x| > 0.9 R`.
    pub fn tail_fraction(&self) -> f64 {
        let cut = 0.9 * self.grid.radius();
        tail_fraction(self.grid.nodes(), self.grid.weights(), &self.samples, cut)
    }
}

/// Complex samples of a function of λ on a [`SpectralGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: Arc<SpectralGrid>,
    samples: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(grid: Arc<SpectralGrid>, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: (grid.len(), 1),
                got: (samples.len(), 1),
            });
        }
        check_finite(&samples, "spectrum")?;
        Ok(Self { grid, samples })
    }

    pub fn from_fn(grid: Arc<SpectralGrid>, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let samples = grid.nodes().iter().map(|&l| f(l)).collect();
        Self::new(grid, samples)
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn eval(&self, lambda: f64) -> Complex64 {
        self.grid.rule().interpolate(&self.samples, lambda)
    }

    /// Fraction of `∫|F|² d|σ|` carried by `|λ| > 0.9 Λ`.
    pub fn tail_fraction(&self) -> f64 {
        let cut = 0.9 * self.grid.radius();
        tail_fraction(self.grid.nodes(), self.grid.abs_weights(), &self.samples, cut)
    }
}

fn tail_fraction(nodes: &[f64], weights: &[f64], samples: &[Complex64], cut: f64) -> f64 {
    let mut tail = 0.0;
    let mut total = 0.0;
    for ((x, w), s) in nodes.iter().zip(weights).zip(samples) {
        let m = s.norm_sqr() * w;
        total += m;
        if x.abs() > cut {
            tail += m;
        }
    }
    if total > 0.0 {
        tail / total
    } else {
        0.0
    }
}

/// Samples over the `(x, ξ)` plane with the product weights `A dx ⊗ m(ξ)`,
/// where `m` is a positive spectral measure.
#[derive(Debug, Clone, PartialEq)]
pub struct TFPlane {
    xgrid: Arc<SpatialGrid>,
    xigrid: Arc<SpectralGrid>,
    measure: SpectralMeasure,
    samples: Vec<Complex64>,
}

impl TFPlane {
    /// `samples` is row-major with rows indexed by `x` nodes.
    pub fn new(
        xgrid: Arc<SpatialGrid>,
        xigrid: Arc<SpectralGrid>,
        measure: SpectralMeasure,
        samples: Vec<Complex64>,
    ) -> Result<Self> {
        xigrid.real_weights(measure)?;
        let shape = (xgrid.len(), xigrid.len());
        if samples.len() != shape.0 * shape.1 {
            return Err(Error::ShapeMismatch {
                expected: shape,
                got: (samples.len() / shape.1.max(1), shape.1),
            });
        }
        check_finite(&samples, "time-frequency plane")?;
        Ok(Self {
            xgrid,
            xigrid,
            measure,
            samples,
        })
    }

    pub fn zeros(xgrid: Arc<SpatialGrid>, xigrid: Arc<SpectralGrid>, measure: SpectralMeasure) -> Result<Self> {
        let n = xgrid.len() * xigrid.len();
        Self::new(xgrid, xigrid, measure, vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn xgrid(&self) -> &Arc<SpatialGrid> {
        &self.xgrid
    }

    pub fn xigrid(&self) -> &Arc<SpectralGrid> {
        &self.xigrid
    }

    pub fn measure(&self) -> SpectralMeasure {
        self.measure
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.xgrid.len(), self.xigrid.len())
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.samples[i * self.xigrid.len() + j]
    }

    /// Product quadrature weights, row-major like the samples.
    pub fn weights(&self) -> Vec<f64> {
        let wx = self.xgrid.weights();
        let wxi = self.xigrid.real_weights(self.measure).expect("checked at construction");
        wx.iter().flat_map(|a| wxi.iter().map(move |b| a * b)).collect()
    }

    /// Total plane measure of the truncated grid.
    pub fn total_measure(&self) -> f64 {
        self.weights().iter().sum()
    }

    /// Same grids and measure, new samples.
    pub fn with_samples(&self, samples: Vec<Complex64>) -> Result<Self> {
        Self::new(self.xgrid.clone(), self.xigrid.clone(), self.measure, samples)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            samples: self.samples.iter().map(|&z| f(z)).collect(),
            ..self.clone()
        }
    }

    /// Coordinates of every cell, row-major.
    pub fn coordinates(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let xi = self.xigrid.nodes();
        self.xgrid.nodes().iter().flat_map(move |&x| xi.iter().map(move |&k| (x, k)))
    }
}

/// `∫ f A dx`.
pub fn integrate_a(f: &SampledFunction) -> Complex64 {
    f.samples().iter().zip(f.grid().weights()).map(|(s, w)| s * w).sum()
}

/// `∫ F dσ`, `∫ F d|σ|` or `∫ F dν`.
pub fn integrate_sigma(f: &Spectrum, measure: SpectralMeasure) -> Complex64 {
    let g = f.grid();
    match measure {
        SpectralMeasure::Complex => f.samples().iter().zip(g.complex_weights()).map(|(s, w)| s * w).sum(),
        SpectralMeasure::Absolute => f.samples().iter().zip(g.abs_weights()).map(|(s, w)| s * w).sum(),
        SpectralMeasure::Even => f.samples().iter().zip(g.even_weights()).map(|(s, w)| s * w).sum(),
    }
}

fn weighted_lp(samples: &[Complex64], weights: impl Iterator<Item = f64>, p: f64) -> f64 {
    if p.is_infinite() {
        return samples.iter().map(|s| s.norm()).fold(0.0, f64::max);
    }
    let sum: f64 = samples.iter().zip(weights).map(|(s, w)| s.norm().powf(p) * w).sum();
    sum.powf(1.0 / p)
}

/// `‖f‖` in `L^p(A dx)`; `p = ∞` gives the maximum modulus.
pub fn norm_lp_a(f: &SampledFunction, p: f64) -> f64 {
    if p == 2.0 {
        return norm_l2_a(f);
    }
    weighted_lp(f.samples(), f.grid().weights().iter().copied(), p)
}

pub fn norm_l2_a(f: &SampledFunction) -> f64 {
    f.samples()
        .iter()
        .zip(f.grid().weights())
        .map(|(s, w)| s.norm_sqr() * w)
        .sum::<f64>()
        .sqrt()
}

pub fn norm_l1_a(f: &SampledFunction) -> f64 {
    norm_lp_a(f, 1.0)
}

/// `‖F‖` in `L²(d|σ|)`.
pub fn norm_l2_abs_sigma(f: &Spectrum) -> f64 {
    f.samples()
        .iter()
        .zip(f.grid().abs_weights())
        .map(|(s, w)| s.norm_sqr() * w)
        .sum::<f64>()
        .sqrt()
}

/// `‖F‖` in `L²(dν)`.
pub fn norm_l2_even_sigma(f: &Spectrum) -> f64 {
    f.samples()
        .iter()
        .zip(f.grid().even_weights())
        .map(|(s, w)| s.norm_sqr() * w)
        .sum::<f64>()
        .sqrt()
}

pub fn norm_l2_plane(w: &TFPlane) -> f64 {
    norm_lp_plane(w, 2.0)
}

/// `‖W‖` in `L^p` of the plane measure; `p = ∞` gives the maximum modulus.
pub fn norm_lp_plane(w: &TFPlane, p: f64) -> f64 {
    weighted_lp(w.samples(), w.weights().into_iter(), p)
}

pub fn norm_sup_plane(w: &TFPlane) -> f64 {
    norm_lp_plane(w, f64::INFINITY)
}

/// `⟨f, h⟩ = ∫ f conj(h) A dx`.
pub fn inner_a(f: &SampledFunction, h: &SampledFunction) -> Complex64 {
    f.samples()
        .iter()
        .zip(h.samples())
        .zip(f.grid().weights())
        .map(|((a, b), w)| a * b.conj() * w)
        .sum()
}

/// `∬ W conj(V) dμ` over the plane.
pub fn inner_plane(w: &TFPlane, v: &TFPlane) -> Complex64 {
    w.samples()
        .iter()
        .zip(v.samples())
        .zip(w.weights())
        .map(|((a, b), m)| a * b.conj() * m)
        .sum()
}
