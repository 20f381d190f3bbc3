//! Modulation, time–frequency atoms and the windowed transform.
//!
//! The modulation `M_ξ g = H⁻¹(√(τ_ξ |Hg|²))` needs a translation acting on
//! functions of λ. Two are provided:
//!
//! * [`SpectralTranslation::PlancherelInvariant`] writes λ in the coordinate
//!   `u = Φ(λ) = sgn(λ) ν([0, |λ|])`, where `ν = Re σ` is the positive even
//!   part of the spectral measure, and applies the cosine translation
//!   `½ [F(u − v) + F(u + v)]` there. It maps nonnegative functions to
//!   nonnegative functions, keeps evenness and preserves `ν`-integrals in
//!   both variables.
//! * [`SpectralTranslation::CherednikKernel`] applies the spatial kernel and
//!   the weight `A` to functions of λ unchanged.
//!
//! Atoms `τ_x M_ξ g` spread in space as `ξ` grows, and `τ_x` on `|y| ≤ R`
//! reads its argument up to `|x| + R`. Plane grids should therefore keep
//! `|x|` well inside the function grid; [`PlaneGrids::standard`] uses `2R/3`.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{
    inner_a, norm_l2_a, norm_l2_plane, norm_lp_plane, GridSpec, PanelRule, SampledFunction, SpatialGrid, SpectralGrid,
    SpectralMeasure, Spectrum, TFPlane,
};
use crate::quadrature::gauss_legendre;
use crate::report::{InequalityReport, Relation, Tolerance};
use crate::specfun::{plancherel_density, weight_a};
use crate::transform::KernelMatrix;
use crate::translation::{TranslationMatrix, Translator};
use crate::{Complex64, Params};

/// Largest clamped fraction of `‖Hg‖²` a modulation may discard.
pub const NEGATIVITY_LIMIT: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralTranslation {
    PlancherelInvariant,
    CherednikKernel,
}

/// The distribution function `Φ(λ) = sgn(λ) ν([0, |λ|])` and its inverse,
/// tabulated with cubic Hermite interpolation on the exact density.
#[derive(Debug, Clone)]
pub struct NuCoordinate {
    lambdas: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl NuCoordinate {
    pub fn new(p: &Params, lmax: f64, intervals: usize) -> Result<Self> {
        let (t, w) = gauss_legendre(8);
        let h = lmax / intervals as f64;
        let mut lambdas = Vec::with_capacity(intervals + 1);
        let mut values = Vec::with_capacity(intervals + 1);
        let mut slopes = Vec::with_capacity(intervals + 1);
        let mut acc = 0.0;
        for k in 0..=intervals {
            let l = k as f64 * h;
            if k > 0 {
                let mid = l - 0.5 * h;
                for (ti, wi) in t.iter().zip(&w) {
                    acc += 0.5 * h * wi * plancherel_density(mid + 0.5 * h * ti, p)?.even();
                }
            }
            lambdas.push(l);
            values.push(acc);
            slopes.push(plancherel_density(l, p)?.even());
        }
        Ok(Self { lambdas, values, slopes })
    }

    /// `ν([0, λmax])`.
    pub fn total(&self) -> f64 {
        *self.values.last().expect("table is never empty")
    }

    pub fn lmax(&self) -> f64 {
        *self.lambdas.last().expect("table is never empty")
    }

    fn hermite(&self, k: usize, l: f64) -> (f64, f64) {
        let (l0, l1) = (self.lambdas[k], self.lambdas[k + 1]);
        let h = l1 - l0;
        let s = (l - l0) / h;
        let (y0, y1, d0, d1) = (self.values[k], self.values[k + 1], self.slopes[k] * h, self.slopes[k + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let v = (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * d0 + (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * d1;
        let dv = ((6.0 * s2 - 6.0 * s) * y0
            + (3.0 * s2 - 4.0 * s + 1.0) * d0
            + (-6.0 * s2 + 6.0 * s) * y1
            + (3.0 * s2 - 2.0 * s) * d1)
            / h;
        (v, dv)
    }

    /// `Φ(λ)`; `λ` beyond the table is clamped to its end.
    pub fn forward(&self, l: f64) -> f64 {
        let a = l.abs().min(self.lmax());
        let n = self.lambdas.len();
        let k = (self.lambdas.partition_point(|&x| x <= a).max(1) - 1).min(n - 2);
        l.signum() * self.hermite(k, a).0
    }

    /// `Φ⁻¹(w)`, or `None` when `|w|` exceeds the tabulated mass.
    pub fn inverse(&self, w: f64) -> Option<f64> {
        let a = w.abs();
        if a > self.total() {
            return None;
        }
        if a == 0.0 {
            return Some(0.0);
        }
        let n = self.values.len();
        let k = (self.values.partition_point(|&v| v <= a).max(1) - 1).min(n - 2);
        let (mut lo, mut hi) = (self.lambdas[k], self.lambdas[k + 1]);
        let mut l = 0.5 * (lo + hi);
        for _ in 0..100 {
            let (v, dv) = self.hermite(k, l);
            if v > a {
                hi = l;
            } else {
                lo = l;
            }
            let next = if dv > 0.0 { l - (v - a) / dv } else { f64::NAN };
            let next = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
            if (next - l).abs() <= 1e-15 * l.max(1e-300) {
                l = next;
                break;
            }
            l = next;
        }
        Some(w.signum() * l)
    }
}

fn interpolate_real(rule: &PanelRule, samples: &[f64], t: f64) -> f64 {
    match rule.lagrange_row(t) {
        Some((start, coef)) => coef.iter().zip(&samples[start..]).map(|(c, s)| c * s).sum(),
        None => 0.0,
    }
}

/// Translation in the spectral variable.
#[derive(Debug, Clone)]
pub struct SpectralTranslator {
    kind: SpectralTranslation,
    lgrid: Arc<SpectralGrid>,
    nu: NuCoordinate,
    kernel: Translator,
}

impl SpectralTranslator {
    pub fn new(kind: SpectralTranslation, lgrid: Arc<SpectralGrid>, kernel: Translator, lmax: f64) -> Result<Self> {
        let lmax = lmax.max(lgrid.radius());
        // about 64 table intervals per unit of λ
        let intervals = ((lmax * 64.0).ceil() as usize).max(256);
        let nu = NuCoordinate::new(lgrid.params(), lmax, intervals)?;
        Ok(Self { kind, lgrid, nu, kernel })
    }

    pub fn kind(&self) -> SpectralTranslation {
        self.kind
    }

    pub fn nu(&self) -> &NuCoordinate {
        &self.nu
    }

    /// `τ_ξ F` on the spectral grid for real samples `F`.
    pub fn apply(&self, samples: &[f64], xi: f64) -> Vec<f64> {
        if xi == 0.0 {
            return samples.to_vec();
        }
        let rule = self.lgrid.rule();
        match self.kind {
            SpectralTranslation::PlancherelInvariant => {
                let v = self.nu.forward(xi);
                rule.nodes()
                    .iter()
                    .map(|&l| {
                        let u = self.nu.forward(l);
                        let at = |w: f64| match self.nu.inverse(w) {
                            Some(m) => interpolate_real(rule, samples, m),
                            None => 0.0,
                        };
                        0.5 * (at(u - v) + at(u + v))
                    })
                    .collect()
            }
            SpectralTranslation::CherednikKernel => {
                let p = *self.lgrid.params();
                let m = self.kernel.matrix_on(rule, &|z| weight_a(z, &p), xi);
                m.apply_real(samples)
            }
        }
    }
}

/// A window with its cached transform.
#[derive(Debug, Clone)]
pub struct Window {
    g: SampledFunction,
    norm: f64,
    spectrum: Spectrum,
}

impl Window {
    pub fn new(g: SampledFunction, kernels: &KernelMatrix) -> Result<Self> {
        let norm = norm_l2_a(&g);
        if !(norm > 0.0) {
            return Err(Error::InvalidParams("window must be non-zero".into()));
        }
        let spectrum = kernels.forward(&g)?;
        Ok(Self { g, norm, spectrum })
    }

    pub fn function(&self) -> &SampledFunction {
        &self.g
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }
}

/// Result of one modulation.
#[derive(Debug, Clone)]
pub struct Modulated {
    pub function: SampledFunction,
    /// `√(τ_ξ |Hg|²)` after clamping.
    pub spectrum: Vec<f64>,
    /// Clamped negative mass over `‖Hg‖²`, both against `ν`.
    pub clamped_fraction: f64,
}

/// Panel multiplier of the fine kernel table used by the invariant modulation.
pub const FINE_PANEL_FACTOR: usize = 8;

/// Builds `M_ξ g` for one window.
#[derive(Debug, Clone)]
pub struct Modulator {
    kernels: Arc<KernelMatrix>,
    spectral: SpectralTranslator,
    fine: Option<KernelMatrix>,
}

impl Modulator {
    pub fn new(kernels: Arc<KernelMatrix>, spectral: SpectralTranslator) -> Result<Self> {
        let fine = match spectral.kind() {
            SpectralTranslation::PlancherelInvariant => {
                let lg = kernels.lgrid();
                let rule = lg.rule();
                let spec = GridSpec {
                    radius: rule.radius(),
                    panels: rule.panels() * FINE_PANEL_FACTOR,
                    order: rule.order(),
                };
                let fine_grid = Arc::new(SpectralGrid::new(spec, *lg.params())?);
                Some(KernelMatrix::new(kernels.xgrid().clone(), fine_grid)?)
            }
            SpectralTranslation::CherednikKernel => None,
        };
        Ok(Self { kernels, spectral, fine })
    }

    pub fn kernels(&self) -> &Arc<KernelMatrix> {
        &self.kernels
    }

    pub fn spectral(&self) -> &SpectralTranslator {
        &self.spectral
    }

    /// `M_ξ g` with the clamped fraction recorded; never fails on negativity.
    pub fn modulate_unchecked(&self, w: &Window, xi: f64) -> Result<Modulated> {
        match &self.fine {
            Some(fine) => self.modulate_invariant(fine, w, xi),
            None => self.modulate_on_grid(w, xi),
        }
    }

    fn modulate_on_grid(&self, w: &Window, xi: f64) -> Result<Modulated> {
        let lg = self.kernels.lgrid();
        let power: Vec<f64> = w.spectrum().samples().iter().map(|z| z.norm_sqr()).collect();
        let translated = self.spectral.apply(&power, xi);
        let nu = lg.even_weights();
        let total: f64 = power.iter().zip(nu).map(|(a, b)| a * b).sum();
        let negative: f64 = translated.iter().zip(nu).map(|(a, b)| (-a).max(0.0) * b).sum();
        let spectrum: Vec<f64> = translated.iter().map(|v| v.max(0.0).sqrt()).collect();
        let spec = Spectrum::new(lg.clone(), spectrum.iter().map(|&v| Complex64::new(v, 0.0)).collect())?;
        let function = self.kernels.inverse(&spec)?;
        Ok(Modulated {
            function,
            spectrum,
            clamped_fraction: if total > 0.0 { negative / total } else { 0.0 },
        })
    }

    /// `M_ξ g = H⁻¹ S_ξ` with `S_ξ = √(τ_ξ |Hg|²)`, evaluated by
    /// [`adaptive_inverse`]. `S_ξ` is even and real, so `M_ξ g` is real.
    fn modulate_invariant(&self, fine: &KernelMatrix, w: &Window, xi: f64) -> Result<Modulated> {
        let hg = fine.forward(w.function())?;
        let s = self.translated_amplitude(fine, &hg, xi);
        let out = adaptive_inverse(self.spectral.nu(), fine, self.kernels.lgrid().rule(), xi, &s, &|_| {
            Complex64::new(1.0, 0.0)
        })?;
        let function = SampledFunction::new(
            fine.xgrid().clone(),
            out.into_iter().map(|z| Complex64::new(z.re, 0.0)).collect(),
        )?;
        let spectrum = self.kernels.lgrid().nodes().iter().map(|&l| s(l)).collect();
        Ok(Modulated {
            function,
            spectrum,
            clamped_fraction: 0.0,
        })
    }

    /// `λ ↦ √(½ [F(Φ(λ) − v) + F(Φ(λ) + v)])` with `F = |Hg|² ∘ Φ⁻¹`, `v = Φ(ξ)`.
    fn translated_amplitude<'a>(&'a self, fine: &'a KernelMatrix, hg: &'a Spectrum, xi: f64) -> impl Fn(f64) -> f64 + 'a {
        let nu = self.spectral.nu();
        let v = nu.forward(xi.abs());
        let rule = fine.lgrid().rule();
        move |l: f64| {
            let u = nu.forward(l);
            let at = |t: f64| nu.inverse(t).map_or(0.0, |m| rule.interpolate(hg.samples(), m).norm_sqr());
            (0.5 * (at(u - v) + at(u + v))).max(0.0).sqrt()
        }
    }

    /// `W_g f(x_k, ξ) = H⁻¹(S_ξ · Hf)(x_k)` on the nodes of `table.xgrid()`,
    /// the transform-side form of the convolution with `M_ξ g`.
    pub fn spectral_row(&self, table: &KernelMatrix, w: &Window, f: &SampledFunction, xi: f64) -> Result<Vec<Complex64>> {
        let fine = self
            .fine
            .as_ref()
            .ok_or_else(|| Error::Unsupported("the spectral form needs the Plancherel-invariant translation".into()))?;
        let hg = fine.forward(w.function())?;
        let hf = fine.forward(f)?;
        let s = self.translated_amplitude(fine, &hg, xi);
        let rule = fine.lgrid().rule();
        adaptive_inverse(self.spectral.nu(), table, self.kernels.lgrid().rule(), xi, &s, &|l| {
            rule.interpolate(hf.samples(), l)
        })
    }

    /// Fine kernel table on another spatial grid, for [`Self::spectral_row`].
    pub fn kernel_table(&self, xgrid: Arc<SpatialGrid>) -> Result<KernelMatrix> {
        let fine = self
            .fine
            .as_ref()
            .ok_or_else(|| Error::Unsupported("the spectral form needs the Plancherel-invariant translation".into()))?;
        KernelMatrix::new(xgrid, fine.lgrid().clone())
    }

    /// `M_ξ g`; fails when clamping discards more than [`NEGATIVITY_LIMIT`].
    pub fn modulate(&self, w: &Window, xi: f64) -> Result<Modulated> {
        let m = self.modulate_unchecked(w, xi)?;
        if m.clamped_fraction > NEGATIVITY_LIMIT {
            return Err(Error::ExcessNegativity {
                fraction: m.clamped_fraction,
                limit: NEGATIVITY_LIMIT,
            });
        }
        Ok(m)
    }

    /// `‖M_ξ g‖` against `‖g‖`.
    pub fn isometry_check(&self, w: &Window, xi: f64, tol: Tolerance) -> Result<InequalityReport> {
        let m = self.modulate_unchecked(w, xi)?;
        let lhs = norm_l2_a(&m.function);
        Ok(
            InequalityReport::new(format!("modulation_isometry(xi={xi})"), Relation::Equal, lhs, w.norm(), tol)
                .with_diagnostic("clamped_fraction", m.clamped_fraction)
                .with_diagnostic("spatial_tail_fraction", m.function.tail_fraction()),
        )
    }
}

/// `∫ s(λ) m(λ) G_λ(x_k) dσ(λ)` for even real `s` concentrated near `±ξ`.
///
/// `s` is a narrow bump near `λ = ±ξ` once `ν` grows, far narrower than the
/// spectral grid spacing. The integral therefore runs on Gauss panels whose
/// breakpoints are the uniform breakpoints of `main` together with their
/// images under `t ↦ Φ⁻¹(Φ(ξ) ± Φ(t))`; `G_λ` is interpolated from the rows
/// of `table`. Only `λ > 0` is visited, using `G_{−λ} dσ(−λ) = conj(G_λ dσ(λ))`.
pub fn adaptive_inverse(
    nu: &NuCoordinate,
    table: &KernelMatrix,
    main: &PanelRule,
    xi: f64,
    s: &dyn Fn(f64) -> f64,
    m: &dyn Fn(f64) -> Complex64,
) -> Result<Vec<Complex64>> {
    let p = *table.lgrid().params();
    let rule = table.lgrid().rule();
    let lmax = main.radius();
    let v = nu.forward(xi.abs());
    let h = lmax / main.panels() as f64;
    let panels = main.panels() as i64;
    let mut edges: Vec<f64> = (0..=panels).map(|k| k as f64 * h).collect();
    for k in -panels..=panels {
        let t = nu.forward(k as f64 * h);
        for c in [v + t, t - v] {
            if c > 0.0 {
                if let Some(l) = nu.inverse(c) {
                    if l < lmax {
                        edges.push(l);
                    }
                }
            }
        }
    }
    edges.sort_by(f64::total_cmp);
    edges.dedup_by(|a, b| (*a - *b).abs() < 1e-9);

    let n = table.xgrid().len();
    let (gt, gw) = gauss_legendre(main.order());
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let mut row = vec![Complex64::new(0.0, 0.0); n];
    for pair in edges.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let half = 0.5 * (b - a);
        for (t, wt) in gt.iter().zip(&gw) {
            let l = a + half * (1.0 + t);
            let amp = s(l);
            if amp == 0.0 {
                continue;
            }
            let Some((start, coef)) = rule.lagrange_row(l) else {
                continue;
            };
            row.iter_mut().for_each(|r| *r = Complex64::new(0.0, 0.0));
            for (k, ck) in coef.iter().enumerate() {
                for (r, g) in row.iter_mut().zip(table.row(start + k)) {
                    *r += g * ck;
                }
            }
            let d = plancherel_density(l, &p)?.complex * (amp * wt * half);
            let (plus, minus) = (m(l), m(-l));
            for (o, g) in out.iter_mut().zip(&row) {
                let gd = g * d;
                *o += plus * gd + minus * gd.conj();
            }
        }
    }
    Ok(out)
}

/// Plane grids and the positive spectral measure used on them.
#[derive(Debug, Clone)]
pub struct PlaneGrids {
    pub x: Arc<SpatialGrid>,
    pub xi: Arc<SpectralGrid>,
    pub measure: SpectralMeasure,
}

/// Fraction of the function-grid radius covered by the plane's `x` range.
pub const PLANE_X_FRACTION: f64 = 2.0 / 3.0;

impl PlaneGrids {
    /// `x` on `[−2R/3, 2R/3]` for a function grid of radius `R`, `ξ` on
    /// `[−Λ, Λ]`; `panels` and `order` are per half-line, as in [`GridSpec`].
    pub fn standard(
        function_radius: f64,
        xi_radius: f64,
        panels: (usize, usize),
        order: usize,
        measure: SpectralMeasure,
        p: Params,
    ) -> Result<Self> {
        let x = SpatialGrid::new(
            GridSpec {
                radius: PLANE_X_FRACTION * function_radius,
                panels: panels.0,
                order,
            },
            p,
        )?;
        let xi = SpectralGrid::new(
            GridSpec {
                radius: xi_radius,
                panels: panels.1,
                order,
            },
            p,
        )?;
        measure_is_real(measure)?;
        Ok(Self {
            x: Arc::new(x),
            xi: Arc::new(xi),
            measure,
        })
    }
}

fn measure_is_real(measure: SpectralMeasure) -> Result<()> {
    if measure == SpectralMeasure::Complex {
        return Err(Error::Unsupported("plane norms need a positive spectral measure".into()));
    }
    Ok(())
}

/// `W_g` on a fixed plane: all atoms `g_{x_i, ξ_j} = τ_{x_i} M_{ξ_j} g`
/// precomputed on the function grid.
#[derive(Debug, Clone)]
pub struct WindowedTransform {
    window: Window,
    plane: PlaneGrids,
    fgrid: Arc<SpatialGrid>,
    modulator: Arc<Modulator>,
    modulated: Vec<Modulated>,
    translations: Vec<TranslationMatrix>,
    /// row `i · nξ + j` holds `g_{x_i, ξ_j}` on the function grid
    atoms: Vec<Complex64>,
}

impl WindowedTransform {
    pub fn new(window: Window, modulator: Arc<Modulator>, translator: &Translator, plane: PlaneGrids) -> Result<Self> {
        measure_is_real(plane.measure)?;
        let fgrid = window.function().grid().clone();
        let n = fgrid.len();
        let modulated = plane
            .xi
            .nodes()
            .iter()
            .map(|&xi| modulator.modulate_unchecked(&window, xi))
            .collect::<Result<Vec<_>>>()?;
        let translations: Vec<TranslationMatrix> = plane.x.nodes().iter().map(|&x| translator.matrix(&fgrid, x)).collect();
        let mut atoms = Vec::with_capacity(plane.x.len() * plane.xi.len() * n);
        for t in &translations {
            for m in &modulated {
                atoms.extend(t.apply(m.function.samples()));
            }
        }
        Ok(Self {
            window,
            plane,
            fgrid,
            modulator,
            modulated,
            translations,
            atoms,
        })
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn plane(&self) -> &PlaneGrids {
        &self.plane
    }

    pub fn function_grid(&self) -> &Arc<SpatialGrid> {
        &self.fgrid
    }

    pub fn modulated(&self) -> &[Modulated] {
        &self.modulated
    }

    /// Largest clamped fraction over the plane's ξ nodes.
    pub fn negativity(&self) -> f64 {
        self.modulated.iter().map(|m| m.clamped_fraction).fold(0.0, f64::max)
    }

    pub fn cells(&self) -> usize {
        self.plane.x.len() * self.plane.xi.len()
    }

    fn atom_slice(&self, p: usize) -> &[Complex64] {
        let n = self.fgrid.len();
        &self.atoms[p * n..(p + 1) * n]
    }

    /// `g_{x_i, ξ_j}`.
    pub fn atom(&self, i: usize, j: usize) -> Result<SampledFunction> {
        let p = i * self.plane.xi.len() + j;
        SampledFunction::new(self.fgrid.clone(), self.atom_slice(p).to_vec())
    }

    fn empty_plane(&self, samples: Vec<Complex64>) -> Result<TFPlane> {
        TFPlane::new(self.plane.x.clone(), self.plane.xi.clone(), self.plane.measure, samples)
    }

    fn check_grid(&self, f: &SampledFunction) -> Result<()> {
        if f.grid().len() != self.fgrid.len() {
            return Err(Error::ShapeMismatch {
                expected: (self.fgrid.len(), 1),
                got: (f.grid().len(), 1),
            });
        }
        Ok(())
    }

    /// `W_g f(x, ξ) = ∫ f(s) conj(g_{x,ξ}(−s)) A(s) ds`.
    pub fn forward(&self, f: &SampledFunction) -> Result<TFPlane> {
        self.check_grid(f)?;
        let w = self.fgrid.weights();
        // f(−s) w(s), so that the sum runs over the atom at +s
        let fw: Vec<Complex64> = f.samples().iter().rev().zip(w).map(|(a, b)| a * b).collect();
        let samples = (0..self.cells())
            .map(|p| self.atom_slice(p).iter().zip(&fw).map(|(a, b)| a.conj() * b).sum())
            .collect();
        self.empty_plane(samples)
    }

    /// The same plane as `(f ∗ conj(M_ξ g))(x)`.
    pub fn forward_convolution_form(&self, f: &SampledFunction) -> Result<TFPlane> {
        self.check_grid(f)?;
        let w = self.fgrid.weights();
        let mut samples = Vec::with_capacity(self.cells());
        for t in &self.translations {
            let tf = t.apply(f.samples());
            for m in &self.modulated {
                // ∫ τ_x f(−y) conj(m(y)) A(y) dy
                let v: Complex64 = tf
                    .iter()
                    .rev()
                    .zip(m.function.samples())
                    .zip(w)
                    .map(|((a, b), c)| a * b.conj() * c)
                    .sum();
                samples.push(v);
            }
        }
        self.empty_plane(samples)
    }

    /// The plane through the transform identity for convolutions,
    /// `W_g f(·, ξ) = H⁻¹(H(M_ξ g) · Hf)`, with no spatial translation.
    pub fn forward_spectral(&self, f: &SampledFunction) -> Result<TFPlane> {
        self.check_grid(f)?;
        let table = self.modulator.kernel_table(self.plane.x.clone())?;
        let nx = self.plane.x.len();
        let nxi = self.plane.xi.len();
        let mut samples = vec![Complex64::new(0.0, 0.0); nx * nxi];
        for (j, &xi) in self.plane.xi.nodes().iter().enumerate() {
            let row = self.modulator.spectral_row(&table, &self.window, f, xi)?;
            for (i, v) in row.into_iter().enumerate() {
                samples[i * nxi + j] = v;
            }
        }
        self.empty_plane(samples)
    }

    /// `K_g((x_i, ξ_j), (x_k, ξ_l)) = ‖g‖⁻² ⟨g_{x_i,ξ_j}, g_{x_k,ξ_l}⟩`, cells
    /// given as flat indices.
    pub fn reproducing_kernel(&self, first: usize, second: usize) -> Complex64 {
        let w = self.fgrid.weights();
        let v: Complex64 = self
            .atom_slice(first)
            .iter()
            .zip(self.atom_slice(second))
            .zip(w)
            .map(|((a, b), c)| a * b.conj() * c)
            .sum();
        v / self.window.norm().powi(2)
    }

    /// `∬ F(p′) K_g(p′, p) dμ(p′)`.
    pub fn project_range(&self, f: &TFPlane) -> Result<TFPlane> {
        if f.shape() != (self.plane.x.len(), self.plane.xi.len()) {
            return Err(Error::ShapeMismatch {
                expected: (self.plane.x.len(), self.plane.xi.len()),
                got: f.shape(),
            });
        }
        let n = self.fgrid.len();
        let mu = f.weights();
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        for (p, (val, m)) in f.samples().iter().zip(&mu).enumerate() {
            let c = val * m;
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (acc, a) in v.iter_mut().zip(self.atom_slice(p)) {
                *acc += c * a;
            }
        }
        let w = self.fgrid.weights();
        let scale = self.window.norm().powi(-2);
        let samples = (0..self.cells())
            .map(|p| {
                let s: Complex64 = v
                    .iter()
                    .zip(self.atom_slice(p))
                    .zip(w)
                    .map(|((a, b), c)| a * b.conj() * c)
                    .sum();
                s * scale
            })
            .collect();
        f.with_samples(samples)
    }

    /// `Σ_p c_p a_p a_pᴴ` over cells with the given real coefficients.
    pub fn atom_gram(&self, coefficients: &[f64]) -> DMatrix<Complex64> {
        let n = self.fgrid.len();
        let mut g = DMatrix::<Complex64>::zeros(n, n);
        for (p, &c) in coefficients.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let a = self.atom_slice(p);
            for (l, al) in a.iter().enumerate() {
                let cl = al.conj() * c;
                for (entry, ak) in g.column_mut(l).iter_mut().zip(a) {
                    *entry += ak * cl;
                }
            }
        }
        g
    }

    /// `‖W_g f‖` against `‖f‖ ‖g‖`.
    pub fn plancherel(&self, f: &SampledFunction, tol: Tolerance) -> Result<InequalityReport> {
        let w = self.forward(f)?;
        let lhs = norm_l2_plane(&w);
        let rhs = norm_l2_a(f) * self.window.norm();
        Ok(InequalityReport::new("wct_plancherel", Relation::Equal, lhs, rhs, tol))
    }

    /// `∬ W f conj(W h) dμ` against `‖g‖² ⟨f, h⟩`; compared on the real
    /// part with the imaginary discrepancy as a diagnostic.
    pub fn orthogonality(&self, f: &SampledFunction, h: &SampledFunction, tol: Tolerance) -> Result<InequalityReport> {
        let wf = self.forward(f)?;
        let wh = self.forward(h)?;
        let lhs = crate::grid::inner_plane(&wf, &wh);
        let rhs = inner_a(f, h) * self.window.norm().powi(2);
        let scale = norm_l2_a(f) * norm_l2_a(h) * self.window.norm().powi(2);
        // the identity holds for complex values; compare the gap
        // with the natural scale ‖f‖‖h‖‖g‖²
        let gap = (lhs - rhs).norm();
        Ok(InequalityReport::new(
            "wct_orthogonality",
            Relation::LessEq,
            gap,
            0.0,
            Tolerance::absolute(tol.relative * scale + tol.absolute),
        )
        .with_diagnostic("lhs_re", lhs.re)
        .with_diagnostic("lhs_im", lhs.im)
        .with_diagnostic("rhs_re", rhs.re)
        .with_diagnostic("rhs_im", rhs.im)
        .with_diagnostic("scale", scale))
    }

    /// `‖W_g f‖_{L^p}` against `‖f‖ ‖g‖`; `p = ∞` gives the sup bound.
    pub fn lp_bound(&self, f: &SampledFunction, p: f64, tol: Tolerance) -> Result<InequalityReport> {
        let w = self.forward(f)?;
        let lhs = norm_lp_plane(&w, p);
        let rhs = norm_l2_a(f) * self.window.norm();
        let name = if p.is_infinite() {
            "wct_sup_bound".to_owned()
        } else {
            format!("wct_lp_bound(p={p})")
        };
        Ok(InequalityReport::new(name, Relation::LessEq, lhs, rhs, tol))
    }

    /// Relative `L²(plane)` difference between the atom form and `other`.
    pub fn form_gap(&self, f: &SampledFunction, other: &TFPlane) -> Result<f64> {
        let a = self.forward(f)?;
        let b = other;
        let diff = a.with_samples(a.samples().iter().zip(b.samples()).map(|(x, y)| x - y).collect())?;
        Ok(norm_l2_plane(&diff) / norm_l2_plane(&a))
    }
}
