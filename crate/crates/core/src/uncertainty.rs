//! Uncertainty inequalities for the windowed transform on a truncated plane.
//!
//! Concentration defects are computed from the inputs, so the hypothesis of
//! every statement holds by construction and only its conclusion is checked.
//! Balls `B_r` in the plane use the Euclidean norm `√(x² + ξ²)`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{norm_l1_a, norm_l2_a, norm_l2_plane, SampledFunction, SpatialGrid, TFPlane};
use crate::report::{InequalityReport, Relation, Tolerance};
use crate::windowed::WindowedTransform;
use crate::Complex64;

/// Default slack for checks derived from an identity.
pub const EQUALITY_TOLERANCE: Tolerance = Tolerance::relative(0.03);
/// Default slack for strict inequalities.
pub const INEQUALITY_TOLERANCE: Tolerance = Tolerance::relative(0.02);
/// Largest change of successive Rayleigh quotients accepted as converged.
pub const RAYLEIGH_TOLERANCE: f64 = 1e-6;
/// Densities below this are treated as zero in `ρ ln ρ`.
pub const DENSITY_FLOOR: f64 = 1e-300;
/// Largest deviation of an orthonormalized Gram matrix from the identity.
pub const GRAM_TOLERANCE: f64 = 1e-3;
/// Operator norms above this are reported as the unbounded-constant regime.
pub const DEGENERATE_NORM: f64 = 0.99;

const DEFAULT_START_SEED: u64 = 0x5eed;

/// A set of plane cells with its measure `Σ w_x w_ξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionMask {
    shape: (usize, usize),
    cells: Vec<bool>,
    measure: f64,
}

impl RegionMask {
    /// `cells` is row-major like the plane samples.
    pub fn from_cells(plane: &TFPlane, cells: Vec<bool>) -> Result<Self> {
        let shape = plane.shape();
        if cells.len() != shape.0 * shape.1 {
            return Err(Error::ShapeMismatch {
                expected: shape,
                got: (cells.len() / shape.1.max(1), shape.1),
            });
        }
        let measure = plane.weights().iter().zip(&cells).filter(|(_, &c)| c).map(|(w, _)| w).sum();
        Ok(Self { shape, cells, measure })
    }

    fn from_predicate(plane: &TFPlane, keep: impl Fn(usize, f64, f64) -> bool) -> Self {
        let cells = plane.coordinates().enumerate().map(|(p, (x, xi))| keep(p, x, xi)).collect();
        Self::from_cells(plane, cells).expect("shape taken from the plane")
    }

    pub fn full(plane: &TFPlane) -> Self {
        Self::from_predicate(plane, |_, _, _| true)
    }

    pub fn empty(plane: &TFPlane) -> Self {
        Self::from_predicate(plane, |_, _, _| false)
    }

    pub fn complement(&self, plane: &TFPlane) -> Result<Self> {
        self.check_shape(plane)?;
        Self::from_cells(plane, self.cells.iter().map(|c| !c).collect())
    }

    /// `{|W|² > t}`.
    pub fn superlevel(w: &TFPlane, t: f64) -> Self {
        let s = w.samples();
        Self::from_predicate(w, |p, _, _| s[p].norm_sqr() > t)
    }

    /// The smallest superlevel set of `|W|²` holding at least `fraction` of
    /// `∬ |W|² dμ`.
    pub fn superlevel_by_mass(w: &TFPlane, fraction: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&fraction) {
            return Err(Error::InvalidParams(format!(
                "mass fraction must lie in [0, 1] (got {fraction})"
            )));
        }
        let mu = w.weights();
        let density: Vec<f64> = w.samples().iter().map(|z| z.norm_sqr()).collect();
        let total: f64 = density.iter().zip(&mu).map(|(d, m)| d * m).sum();
        let mut acc = 0.0;
        let mut keep = vec![false; density.len()];
        let mut threshold = f64::INFINITY;
        for p in descending(&density) {
            // ties with the last kept value stay, so the set is a superlevel set
            if acc >= fraction * total && density[p] < threshold {
                break;
            }
            keep[p] = true;
            acc += density[p] * mu[p];
            threshold = density[p];
        }
        Self::from_cells(w, keep)
    }

    /// The largest superlevel set of `|W|²` with measure at most `target`.
    pub fn superlevel_by_measure(w: &TFPlane, target: f64) -> Result<Self> {
        if !(target >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "target measure must be nonnegative (got {target})"
            )));
        }
        let mu = w.weights();
        let density: Vec<f64> = w.samples().iter().map(|z| z.norm_sqr()).collect();
        let mut keep = vec![false; density.len()];
        let mut acc = 0.0;
        for p in descending(&density) {
            if acc + mu[p] > target {
                break;
            }
            keep[p] = true;
            acc += mu[p];
        }
        Self::from_cells(w, keep)
    }

    /// `[x.0, x.1] × [ξ.0, ξ.1]`.
    pub fn rectangle(plane: &TFPlane, x: (f64, f64), xi: (f64, f64)) -> Self {
        Self::from_predicate(plane, |_, a, b| a >= x.0 && a <= x.1 && b >= xi.0 && b <= xi.1)
    }

    /// Each cell of `[x.0, x.1] × [ξ.0, ξ.1]` kept with probability
    /// `fraction`, drawn from a ChaCha stream seeded with `seed`.
    pub fn random(plane: &TFPlane, fraction: f64, seed: u64, x: (f64, f64), xi: (f64, f64)) -> Result<Self> {
        if !(0.0..=1.0).contains(&fraction) {
            return Err(Error::InvalidParams(format!(
                "random mask fraction must lie in [0, 1] (got {fraction})"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cells = plane
            .coordinates()
            .map(|(a, b)| {
                // one draw per cell keeps the stream aligned across windows
                let u: f64 = rng.gen();
                u < fraction && a >= x.0 && a <= x.1 && b >= xi.0 && b <= xi.1
            })
            .collect();
        Self::from_cells(plane, cells)
    }

    /// `B_r = {√(x² + ξ²) ≤ r}`.
    pub fn ball(plane: &TFPlane, r: f64) -> Self {
        Self::from_predicate(plane, |_, a, b| a.hypot(b) <= r)
    }

    pub fn measure(&self) -> f64 {
        self.measure
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn shape(&self) -> (usize, usize) {
        self.shape
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.cells.iter().zip(&other.cells).all(|(&a, &b)| !a || b)
    }

    fn check_shape(&self, plane: &TFPlane) -> Result<()> {
        if self.shape != plane.shape() {
            return Err(Error::ShapeMismatch {
                expected: plane.shape(),
                got: self.shape,
            });
        }
        Ok(())
    }
}

fn descending(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    order
}

/// A set of spatial nodes with its measure `Σ A w`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialMask {
    cells: Vec<bool>,
    measure: f64,
}

impl SpatialMask {
    pub fn from_cells(grid: &SpatialGrid, cells: Vec<bool>) -> Result<Self> {
        if cells.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: (grid.len(), 1),
                got: (cells.len(), 1),
            });
        }
        let measure = grid.weights().iter().zip(&cells).filter(|(_, &c)| c).map(|(w, _)| w).sum();
        Ok(Self { cells, measure })
    }

    /// `[a, b]`.
    pub fn interval(grid: &SpatialGrid, a: f64, b: f64) -> Self {
        let cells = grid.nodes().iter().map(|&x| x >= a && x <= b).collect();
        Self::from_cells(grid, cells).expect("shape taken from the grid")
    }

    /// Nodes where `|f|` exceeds `relative` times its maximum.
    pub fn support(f: &SampledFunction, relative: f64) -> Self {
        let top = f.samples().iter().map(|z| z.norm()).fold(0.0, f64::max);
        let cells = f.samples().iter().map(|z| z.norm() > relative * top).collect();
        Self::from_cells(f.grid(), cells).expect("shape taken from the function")
    }

    pub fn measure(&self) -> f64 {
        self.measure
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }
}

/// Concentration defects `ε_E` (in `L¹(A)`) and `ε_Σ` (in `L²` of the plane).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcentrationStats {
    pub eps_e: f64,
    pub eps_sigma: f64,
}

impl ConcentrationStats {
    pub fn compute(f: &SampledFunction, w: &TFPlane, e: &SpatialMask, s: &RegionMask) -> Result<Self> {
        s.check_shape(w)?;
        if e.cells.len() != f.samples().len() {
            return Err(Error::ShapeMismatch {
                expected: (f.samples().len(), 1),
                got: (e.cells.len(), 1),
            });
        }
        let total = norm_l1_a(f);
        let outside: f64 = f
            .samples()
            .iter()
            .zip(f.grid().weights())
            .zip(&e.cells)
            .filter(|(_, &c)| !c)
            .map(|((z, w), _)| z.norm() * w)
            .sum();
        Ok(Self {
            eps_e: ratio(outside, total),
            eps_sigma: ratio(outside_norm(w, s), norm_l2_plane(w)),
        })
    }
}

fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        0.0
    } else {
        a / b
    }
}

/// `χ_Σ W`.
pub fn project_region(w: &TFPlane, s: &RegionMask) -> Result<TFPlane> {
    s.check_shape(w)?;
    let zero = Complex64::new(0.0, 0.0);
    w.with_samples(
        w.samples()
            .iter()
            .zip(&s.cells)
            .map(|(&z, &c)| if c { z } else { zero })
            .collect(),
    )
}

/// `‖χ_Σ W‖`.
pub fn restricted_norm(w: &TFPlane, s: &RegionMask) -> f64 {
    w.samples()
        .iter()
        .zip(w.weights())
        .zip(&s.cells)
        .filter(|(_, &c)| c)
        .map(|((z, m), _)| z.norm_sqr() * m)
        .sum::<f64>()
        .sqrt()
}

/// `‖χ_{Σᶜ} W‖`.
pub fn outside_norm(w: &TFPlane, s: &RegionMask) -> f64 {
    w.samples()
        .iter()
        .zip(w.weights())
        .zip(&s.cells)
        .filter(|(_, &c)| !c)
        .map(|((z, m), _)| z.norm_sqr() * m)
        .sum::<f64>()
        .sqrt()
}

/// `μ(B_r)`.
pub fn ball_measure(plane: &TFPlane, r: f64) -> f64 {
    RegionMask::ball(plane, r).measure()
}

/// The largest radius (to bisection accuracy) with `μ(B_r) ≤ target`.
pub fn radius_for_ball_measure(plane: &TFPlane, target: f64) -> Result<f64> {
    let total = plane.total_measure();
    if !(target > 0.0 && target < total) {
        return Err(Error::InvalidParams(format!(
            "target ball measure {target} must lie in (0, {total})"
        )));
    }
    let (mut lo, mut hi) = (0.0, plane.coordinates().map(|(x, xi)| x.hypot(xi)).fold(0.0, f64::max));
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if ball_measure(plane, mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// The frame operator of the atoms, `C = Σ_p μ_p a_p a_pᴴ`, folded with the
/// function-grid weights `D` as `B = D C D`.
///
/// On the range of `W_g`, `(P_Σ P_g)*(P_Σ P_g)` has the nonzero spectrum of
/// `‖g‖⁻⁴ C_Σ B`, where `C_Σ` sums over the cells of `Σ` only. Both norms are
/// computed on that `n × n` form.
#[derive(Debug, Clone)]
pub struct AtomFrame<'a> {
    wt: &'a WindowedTransform,
    weights: Vec<f64>,
    b: DMatrix<Complex64>,
    scale: f64,
}

/// Result of the power iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorNorm {
    pub value: f64,
    pub iterations: usize,
    pub last_change: f64,
}

impl<'a> AtomFrame<'a> {
    pub fn new(wt: &'a WindowedTransform) -> Result<Self> {
        let plane = TFPlane::zeros(wt.plane().x.clone(), wt.plane().xi.clone(), wt.plane().measure)?;
        let weights = plane.weights();
        let c = wt.atom_gram(&weights);
        let d = DMatrix::from_diagonal(&DVector::from_iterator(
            wt.function_grid().len(),
            wt.function_grid().weights().iter().map(|&w| Complex64::new(w, 0.0)),
        ));
        let b = &d * c * &d;
        Ok(Self {
            wt,
            weights,
            b,
            scale: wt.window().norm().powi(-4),
        })
    }

    pub fn transform(&self) -> &WindowedTransform {
        self.wt
    }

    /// `C_Σ`.
    pub fn region_gram(&self, s: &RegionMask) -> Result<DMatrix<Complex64>> {
        if s.cells.len() != self.weights.len() {
            return Err(Error::ShapeMismatch {
                expected: (self.wt.plane().x.len(), self.wt.plane().xi.len()),
                got: s.shape,
            });
        }
        let coefficients: Vec<f64> = self
            .weights
            .iter()
            .zip(&s.cells)
            .map(|(&m, &c)| if c { m } else { 0.0 })
            .collect();
        Ok(self.wt.atom_gram(&coefficients))
    }

    /// `‖P_Σ P_g‖²_HS = ∬_Σ ∬ |K_g|² dμ dμ = ‖g‖⁻⁴ tr(C_Σ B)`.
    pub fn hs_norm_squared(&self, s: &RegionMask) -> Result<f64> {
        let cs = self.region_gram(s)?;
        let n = cs.nrows();
        let mut trace = Complex64::new(0.0, 0.0);
        for k in 0..n {
            for l in 0..n {
                trace += cs[(k, l)] * self.b[(l, k)];
            }
        }
        Ok(trace.re * self.scale)
    }

    /// `‖P_Σ P_g‖` by power iteration with the `B` inner product, in which
    /// `C_Σ B` is self-adjoint.
    pub fn operator_norm(&self, s: &RegionMask, iters: usize) -> Result<OperatorNorm> {
        if iters < 20 {
            return Err(Error::InvalidParams(format!(
                "power iteration needs a budget of at least 20 (got {iters})"
            )));
        }
        let cs = self.region_gram(s)?;
        let n = cs.nrows();
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_START_SEED);
        let mut y = DVector::from_iterator(
            n,
            (0..n).map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)),
        );
        let b_norm = |v: &DVector<Complex64>| v.dotc(&(&self.b * v)).re.max(0.0).sqrt();
        let start = b_norm(&y);
        if start == 0.0 {
            return Err(Error::PreconditionFailed("atom frame is degenerate".into()));
        }
        y /= Complex64::new(start, 0.0);
        let mut previous = f64::NAN;
        let mut change = f64::INFINITY;
        for k in 1..=iters {
            let by = &self.b * &y;
            let z = &cs * &by * Complex64::new(self.scale, 0.0);
            // y has unit B-norm, so the quotient is yᴴ B z
            let q = by.dotc(&z).re;
            if k > 1 {
                change = (q - previous).abs();
                if change <= RAYLEIGH_TOLERANCE {
                    return Ok(OperatorNorm {
                        value: q.max(0.0).sqrt(),
                        iterations: k,
                        last_change: change,
                    });
                }
            }
            previous = q;
            let nz = b_norm(&z);
            if nz == 0.0 {
                return Ok(OperatorNorm {
                    value: 0.0,
                    iterations: k,
                    last_change: 0.0,
                });
            }
            y = z / Complex64::new(nz, 0.0);
        }
        Err(Error::NonConvergence {
            terms: iters,
            last: change,
        })
    }
}

/// `‖P_Σ P_g‖²_HS ≤ μ(Σ)`.
pub fn hs_norm_check(frame: &AtomFrame, s: &RegionMask, tol: Tolerance) -> Result<InequalityReport> {
    let hs2 = frame.hs_norm_squared(s)?;
    Ok(InequalityReport::new("hs_norm", Relation::LessEq, hs2, s.measure(), tol).with_diagnostic("hs_norm", hs2.max(0.0).sqrt()))
}

/// Power-iteration estimate of `‖P_Σ P_g‖`.
pub fn operator_norm_estimate(frame: &AtomFrame, s: &RegionMask, iters: usize) -> Result<f64> {
    Ok(frame.operator_norm(s, iters)?.value)
}

/// Modified Gram–Schmidt in `L²(A)`, run twice.
pub fn gram_schmidt(phis: &[SampledFunction]) -> Result<Vec<SampledFunction>> {
    let one = Complex64::new(1.0, 0.0);
    let mut out: Vec<SampledFunction> = Vec::with_capacity(phis.len());
    for phi in phis {
        let mut v = phi.clone();
        for _ in 0..2 {
            for e in &out {
                let c = crate::grid::inner_a(&v, e);
                v = v.combine(one, e, -c)?;
            }
        }
        let n = norm_l2_a(&v);
        if !(n > 1e-12 * norm_l2_a(phi)) {
            return Err(Error::GramFailure { deviation: 1.0 });
        }
        out.push(v.scaled(Complex64::new(1.0 / n, 0.0)));
    }
    let mut deviation: f64 = 0.0;
    for (i, a) in out.iter().enumerate() {
        for (j, b) in out.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            deviation = deviation.max((crate::grid::inner_a(a, b) - target).norm());
        }
    }
    if deviation > GRAM_TOLERANCE {
        return Err(Error::GramFailure { deviation });
    }
    Ok(out)
}

/// `Σ_n (1 − ‖χ_{Σᶜ} W_g φ_n‖/‖g‖) ≤ μ(Σ)` after orthonormalizing `phis`.
///
/// Each term inherits the discretization error of the isometry, so the
/// absolute slack grows with `N · tol.relative`.
pub fn orthonormal_sequence_check(
    wt: &WindowedTransform,
    phis: &[SampledFunction],
    s: &RegionMask,
    tol: Tolerance,
) -> Result<InequalityReport> {
    let basis = gram_schmidt(phis)?;
    let g = wt.window().norm();
    let mut lhs = 0.0;
    for phi in &basis {
        let w = wt.forward(phi)?;
        s.check_shape(&w)?;
        lhs += 1.0 - outside_norm(&w, s) / g;
    }
    let slack = Tolerance {
        absolute: tol.absolute + tol.relative * basis.len() as f64,
        relative: tol.relative,
    };
    Ok(
        InequalityReport::new("orthonormal_sequence", Relation::LessEq, lhs, s.measure(), slack)
            .with_diagnostic("n", basis.len() as f64),
    )
}

fn norms(wt: &WindowedTransform, f: &SampledFunction) -> Result<(TFPlane, f64, f64)> {
    let nf = norm_l2_a(f);
    let ng = wt.window().norm();
    if !(nf > 0.0 && ng > 0.0) {
        return Err(Error::InvalidParams("f and g must be nonzero".into()));
    }
    Ok((wt.forward(f)?, nf, ng))
}

/// `μ(Σ) ≥ ∬_Σ |W_g f|² dμ` with `‖f‖‖g‖ = 1`.
pub fn donoho_stark_check(
    wt: &WindowedTransform,
    f: &SampledFunction,
    s: &RegionMask,
    tol: Tolerance,
) -> Result<InequalityReport> {
    let (w, nf, ng) = norms(wt, f)?;
    s.check_shape(&w)?;
    let captured = (restricted_norm(&w, s) / (nf * ng)).powi(2);
    Ok(
        InequalityReport::new("donoho_stark", Relation::GreaterEq, s.measure(), captured, tol)
            .with_diagnostic("one_minus_eps", captured),
    )
}

/// `‖χ_{Σᶜ} W_g f‖ ≥ √(1 − μ(Σ)) ‖f‖ ‖g‖`, skipped when `μ(Σ) ≥ 1`.
pub fn concentration_outside_check(
    wt: &WindowedTransform,
    f: &SampledFunction,
    s: &RegionMask,
    tol: Tolerance,
) -> Result<InequalityReport> {
    let name = "concentration_outside";
    if s.measure() >= 1.0 {
        let e = Error::PreconditionFailed(format!("mask measure {} is not below 1", s.measure()));
        return Ok(InequalityReport::skipped(name, e.to_string()).with_diagnostic("measure", s.measure()));
    }
    let (w, nf, ng) = norms(wt, f)?;
    s.check_shape(&w)?;
    let rhs = (1.0 - s.measure()).sqrt() * nf * ng;
    Ok(InequalityReport::new(name, Relation::GreaterEq, outside_norm(&w, s), rhs, tol).with_diagnostic("measure", s.measure()))
}

/// `μ(Σ) ≥ 1 − ε_Σ²` and `μ(Σ) ≥ (1 − ε_Σ²)^{p/(p−2)}`.
pub fn support_bound_checks(
    wt: &WindowedTransform,
    f: &SampledFunction,
    s: &RegionMask,
    p: f64,
    tol: Tolerance,
) -> Result<Vec<InequalityReport>> {
    if !(p > 2.0) {
        return Err(Error::InvalidParams(format!(
            "support bound exponent must exceed 2 (got {p})"
        )));
    }
    let w = wt.forward(f)?;
    s.check_shape(&w)?;
    let eps = ratio(outside_norm(&w, s), norm_l2_plane(&w));
    let base = 1.0 - eps * eps;
    Ok(vec![
        InequalityReport::new("support_bound", Relation::GreaterEq, s.measure(), base, tol).with_diagnostic("eps_sigma", eps),
        InequalityReport::new(
            format!("support_bound(p={p})"),
            Relation::GreaterEq,
            s.measure(),
            base.powf(p / (p - 2.0)),
            tol,
        )
        .with_diagnostic("eps_sigma", eps),
    ])
}

/// `A(E) μ(Σ) ‖f‖₂² ≥ (1 − ε_E)² (1 − ε_Σ²) ‖f‖₁²` with `f` scaled so that
/// `‖W_g f‖ = 1`.
pub fn combined_concentration_check(
    wt: &WindowedTransform,
    f: &SampledFunction,
    e: &SpatialMask,
    s: &RegionMask,
    tol: Tolerance,
) -> Result<InequalityReport> {
    let w = wt.forward(f)?;
    let nw = norm_l2_plane(&w);
    if nw == 0.0 {
        return Err(Error::InvalidParams("W_g f vanishes".into()));
    }
    let f = f.scaled(Complex64::new(1.0 / nw, 0.0));
    let w = w.map(|z| z / nw);
    let stats = ConcentrationStats::compute(&f, &w, e, s)?;
    let (l1, l2, g) = (norm_l1_a(&f), norm_l2_a(&f), wt.window().norm());
    let lhs = e.measure() * s.measure() * l2 * l2;
    let rhs = (1.0 - stats.eps_e).powi(2) * (1.0 - stats.eps_sigma.powi(2)) * l1 * l1;
    Ok(
        InequalityReport::new("combined_concentration", Relation::GreaterEq, lhs, rhs, tol)
            .with_diagnostic("eps_e", stats.eps_e)
            .with_diagnostic("eps_sigma", stats.eps_sigma)
            .with_diagnostic("spatial_measure", e.measure())
            .with_diagnostic("spatial_bound", (1.0 - stats.eps_e).powi(2) * l1 * l1 * g * g),
    )
}

/// `‖f‖ ‖g‖ ≤ c ‖χ_{Σᶜ} W_g f‖` with `c = (1 − ‖P_Σ P_g‖²)^{−1/2}`, skipped
/// when the estimated norm reaches 1.
pub fn benedicks_quantitative_check(
    frame: &AtomFrame,
    f: &SampledFunction,
    s: &RegionMask,
    iters: usize,
    tol: Tolerance,
) -> Result<InequalityReport> {
    let name = "benedicks";
    let op = frame.operator_norm(s, iters)?;
    if op.value >= 1.0 {
        let e = Error::PreconditionFailed(format!("estimated ‖P_Σ P_g‖ = {} is not below 1", op.value));
        return Ok(InequalityReport::skipped(name, e.to_string()).with_diagnostic("operator_norm", op.value));
    }
    let c = 1.0 / (1.0 - op.value * op.value).sqrt();
    let (w, nf, ng) = norms(frame.transform(), f)?;
    s.check_shape(&w)?;
    let mut report = InequalityReport::new(name, Relation::LessEq, nf * ng, c * outside_norm(&w, s), tol)
        .with_diagnostic("operator_norm", op.value)
        .with_diagnostic("constant", c)
        .with_diagnostic("iterations", op.iterations as f64);
    if op.value > DEGENERATE_NORM {
        report = report.with_note("operator norm close to 1: constant nearly unbounded");
    }
    Ok(report)
}

/// `∬ |(x, ξ)|^{2s} |W|² dμ` and `∬ (|x|^{2s} + |ξ|^{2s}) |W|² dμ`.
fn moments(w: &TFPlane, s: f64) -> (f64, f64) {
    let mut radial = 0.0;
    let mut split = 0.0;
    for ((z, m), (x, xi)) in w.samples().iter().zip(w.weights()).zip(w.coordinates()) {
        let d = z.norm_sqr() * m;
        radial += (x * x + xi * xi).powf(s) * d;
        split += (x.abs().powf(2.0 * s) + xi.abs().powf(2.0 * s)) * d;
    }
    (radial, split)
}

fn ball_precondition(w: &TFPlane, eps0: f64) -> std::result::Result<f64, String> {
    let mb = ball_measure(w, eps0);
    if mb >= 1.0 {
        Err(Error::PreconditionFailed(format!("μ(B_ε₀) = {mb} is not below 1")).to_string())
    } else {
        Ok(mb)
    }
}

/// `‖|(x,ξ)|^s W‖² ≥ ε₀^{2s} (1 − μ(B_ε₀)) ‖f‖²‖g‖²` and the split form
/// `‖x^s W‖² + ‖ξ^s W‖² ≥ 2^{−s}` times the same right side.
pub fn heisenberg_check(
    wt: &WindowedTransform,
    f: &SampledFunction,
    s: f64,
    eps0: f64,
    tol: Tolerance,
) -> Result<Vec<InequalityReport>> {
    positive_exponent(s)?;
    let names = [format!("heisenberg(s={s})"), format!("heisenberg_split(s={s})")];
    let (w, nf, ng) = norms(wt, f)?;
    let mb = match ball_precondition(&w, eps0) {
        Ok(m) => m,
        Err(reason) => {
            return Ok(names
                .iter()
                .map(|n| InequalityReport::skipped(n.clone(), reason.clone()))
                .collect())
        }
    };
    let (radial, split) = moments(&w, s);
    let rhs = eps0.powf(2.0 * s) * (1.0 - mb) * (nf * ng).powi(2);
    Ok(vec![
        InequalityReport::new(names[0].clone(), Relation::GreaterEq, radial, rhs, tol)
            .with_diagnostic("eps0", eps0)
            .with_diagnostic("ball_measure", mb),
        InequalityReport::new(names[1].clone(), Relation::GreaterEq, split, rhs * 2f64.powf(-s), tol)
            .with_diagnostic("eps0", eps0)
            .with_diagnostic("ball_measure", mb),
    ])
}

fn positive_exponent(s: f64) -> Result<()> {
    if s > 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("moment exponent must be positive (got {s})")))
    }
}

/// `c(s)² = ε₀^{−2s} / (1 − μ(B_ε₀))`.
fn local_constant_sq(s: f64, eps0: f64, mb: f64) -> f64 {
    eps0.powf(-2.0 * s) / (1.0 - mb)
}

/// `‖W‖_{L²(Σ)} ≤ c(s) √μ(Σ) ‖|(x,ξ)|^s W‖`.
pub fn local_uncertainty_check(
    wt: &WindowedTransform,
    f: &SampledFunction,
    mask: &RegionMask,
    s: f64,
    eps0: f64,
    tol: Tolerance,
) -> Result<InequalityReport> {
    positive_exponent(s)?;
    let name = format!("local_uncertainty(s={s})");
    let (w, _, _) = norms(wt, f)?;
    mask.check_shape(&w)?;
    let mb = match ball_precondition(&w, eps0) {
        Ok(m) => m,
        Err(reason) => return Ok(InequalityReport::skipped(name, reason)),
    };
    let (radial, _) = moments(&w, s);
    let c = local_constant_sq(s, eps0, mb).sqrt();
    let rhs = c * mask.measure().sqrt() * radial.sqrt();
    Ok(
        InequalityReport::new(name, Relation::LessEq, restricted_norm(&w, mask), rhs, tol)
            .with_diagnostic("constant", c)
            .with_diagnostic("measure", mask.measure()),
    )
}

/// `count` log-spaced radii from the smallest nonzero cell radius to the
/// plane corner, with `extra` merged in.
pub fn corollary_radii(plane: &TFPlane, count: usize, extra: &[f64]) -> Vec<f64> {
    let radii: Vec<f64> = plane.coordinates().map(|(x, xi)| x.hypot(xi)).collect();
    let lo = radii.iter().copied().filter(|&r| r > 0.0).fold(f64::INFINITY, f64::min);
    let hi = radii.iter().copied().fold(0.0, f64::max);
    let mut out: Vec<f64> = (0..count)
        .map(|k| lo * (hi / lo).powf(k as f64 / (count.max(2) - 1) as f64))
        .chain(extra.iter().copied())
        .collect();
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// Result of minimizing `c(s)² μ(B_r) + r^{−2s}` over a radius grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorollaryConstant {
    /// `min_r [c(s)² μ(B_r) + r^{−2s}]`
    pub minimum: f64,
    pub best_r: f64,
    /// `c_s = minimum^{−1/2}`
    pub constant: f64,
}

/// The certified constant of `‖|(x,ξ)|^s W‖ ≥ c_s ‖f‖ ‖g‖`.
pub fn corollary_constant(plane: &TFPlane, s: f64, eps0: f64, radii: &[f64]) -> Result<CorollaryConstant> {
    positive_exponent(s)?;
    let mb = ball_measure(plane, eps0);
    if mb >= 1.0 {
        return Err(Error::PreconditionFailed(format!("μ(B_ε₀) = {mb} is not below 1")));
    }
    let c2 = local_constant_sq(s, eps0, mb);
    let mut best = (f64::INFINITY, f64::NAN);
    for &r in radii.iter().filter(|&&r| r > 0.0) {
        let v = c2 * ball_measure(plane, r) + r.powf(-2.0 * s);
        if v < best.0 {
            best = (v, r);
        }
    }
    if !best.0.is_finite() {
        return Err(Error::InvalidParams("corollary needs at least one positive radius".into()));
    }
    Ok(CorollaryConstant {
        minimum: best.0,
        best_r: best.1,
        constant: best.0.powf(-0.5),
    })
}

/// `‖|(x,ξ)|^s W‖² ≥ c_s² ‖f‖²‖g‖²` with `c_s` from the radius
/// minimization, and the split form `‖x^s W‖² + ‖ξ^s W‖² ≥ 2^{−s} c_s² ‖f‖²‖g‖²`.
pub fn local_uncertainty_corollary_check(
    wt: &WindowedTransform,
    f: &SampledFunction,
    s: f64,
    eps0: f64,
    radii: &[f64],
    tol: Tolerance,
) -> Result<Vec<InequalityReport>> {
    let (w, nf, ng) = norms(wt, f)?;
    let names = [format!("local_corollary(s={s})"), format!("local_corollary_split(s={s})")];
    let cc = match corollary_constant(&w, s, eps0, radii) {
        Ok(cc) => cc,
        Err(Error::PreconditionFailed(reason)) => {
            return Ok(names
                .iter()
                .map(|n| InequalityReport::skipped(n.clone(), reason.clone()))
                .collect());
        }
        Err(e) => return Err(e),
    };
    let (radial, split) = moments(&w, s);
    let rhs = cc.constant.powi(2) * (nf * ng).powi(2);
    let heisenberg = eps0.powf(2.0 * s) * (1.0 - ball_measure(&w, eps0));
    let tag = |r: InequalityReport| {
        r.with_diagnostic("constant", cc.constant)
            .with_diagnostic("best_r", cc.best_r)
            .with_diagnostic("fixed_eps0_constant_sq", heisenberg)
    };
    Ok(vec![
        tag(InequalityReport::new(names[0].clone(), Relation::GreaterEq, radial, rhs, tol)),
        tag(InequalityReport::new(
            names[1].clone(),
            Relation::GreaterEq,
            split,
            rhs * 2f64.powf(-s),
            tol,
        )),
    ])
}

/// `−∬ ρ ln ρ dμ` for a nonnegative density, with `0 ln 0 = 0`.
pub fn entropy(rho: &TFPlane) -> Result<f64> {
    let mut acc = 0.0;
    for (z, m) in rho.samples().iter().zip(rho.weights()) {
        let scale = z.re.abs().max(1.0);
        if z.re < -1e-12 * scale || z.im.abs() > 1e-12 * scale {
            return Err(Error::InvalidParams(format!(
                "density must be real and nonnegative (found {z})"
            )));
        }
        let r = z.re;
        if r > DENSITY_FLOOR {
            acc -= r * r.ln() * m;
        }
    }
    Ok(acc)
}

/// `E_k(ρ)` for a probability density; fails unless `∬ ρ dμ = 1` to `1e-3`.
pub fn k_entropy(rho: &TFPlane) -> Result<f64> {
    let mass: f64 = rho.samples().iter().zip(rho.weights()).map(|(z, m)| z.re * m).sum();
    if (mass - 1.0).abs() > 1e-3 {
        return Err(Error::NotNormalized { mass });
    }
    entropy(rho)
}

/// `E_k(|W_g f|²) ≥ −2 ln(‖f‖‖g‖) ‖f‖²‖g‖²`, with the entropy functional
/// applied to `|W|²` as it stands.
pub fn entropy_inequality_check(wt: &WindowedTransform, f: &SampledFunction, tol: Tolerance) -> Result<InequalityReport> {
    let (w, nf, ng) = norms(wt, f)?;
    let rho = w.map(|z| Complex64::new(z.norm_sqr(), 0.0));
    let lhs = entropy(&rho)?;
    let n = nf * ng;
    Ok(
        InequalityReport::new("entropy_inequality", Relation::GreaterEq, lhs, -2.0 * n.ln() * n * n, tol)
            .with_diagnostic("norm_product", n),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{GridSpec, SpectralGrid, SpectralMeasure};
    use crate::Params;
    use std::sync::Arc;

    fn plane(samples: impl Fn(f64, f64) -> f64) -> TFPlane {
        let p = Params::default();
        let x = Arc::new(
            SpatialGrid::new(
                GridSpec {
                    radius: 3.0,
                    panels: 2,
                    order: 4,
                },
                p,
            )
            .unwrap(),
        );
        let xi = Arc::new(
            SpectralGrid::new(
                GridSpec {
                    radius: 6.0,
                    panels: 2,
                    order: 4,
                },
                p,
            )
            .unwrap(),
        );
        let z = TFPlane::zeros(x, xi, SpectralMeasure::Even).unwrap();
        let v = z.coordinates().map(|(a, b)| Complex64::new(samples(a, b), 0.0)).collect();
        z.with_samples(v).unwrap()
    }

    #[test]
    fn masks_and_complements() {
        let w = plane(|x, xi| (-x * x - 0.1 * xi * xi).exp());
        let full = RegionMask::full(&w);
        assert!((full.measure() - w.total_measure()).abs() < 1e-12 * w.total_measure());
        assert_eq!(RegionMask::empty(&w).measure(), 0.0);
        let r = RegionMask::rectangle(&w, (-1.0, 2.0), (0.0, 4.0));
        let c = r.complement(&w).unwrap();
        assert!((r.measure() + c.measure() - full.measure()).abs() < 1e-12 * full.measure());
        assert_eq!(project_region(&w, &full).unwrap(), w);
        let once = project_region(&w, &r).unwrap();
        assert_eq!(project_region(&once, &r).unwrap(), once);
    }

    #[test]
    fn superlevel_sets_are_monotone() {
        let w = plane(|x, xi| (-x * x - 0.1 * xi * xi).exp());
        let mut last = (f64::INFINITY, f64::INFINITY);
        for &t in &[0.0, 0.1, 0.3, 0.6, 0.9] {
            let m = RegionMask::superlevel(&w, t);
            let mass = restricted_norm(&w, &m).powi(2);
            assert!(m.measure() <= last.0 && mass <= last.1);
            last = (m.measure(), mass);
        }
        let m = RegionMask::superlevel_by_mass(&w, 0.9).unwrap();
        assert!(restricted_norm(&w, &m).powi(2) >= 0.9 * norm_l2_plane(&w).powi(2));
        let small = RegionMask::superlevel_by_measure(&w, 0.5).unwrap();
        assert!(small.measure() <= 0.5 && small.is_subset_of(&m));
    }

    #[test]
    fn random_masks_are_reproducible() {
        let w = plane(|_, _| 1.0);
        let a = RegionMask::random(&w, 0.3, 7, (-2.0, 2.0), (-3.0, 3.0)).unwrap();
        let b = RegionMask::random(&w, 0.3, 7, (-2.0, 2.0), (-3.0, 3.0)).unwrap();
        let c = RegionMask::random(&w, 0.3, 8, (-2.0, 2.0), (-3.0, 3.0)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.is_subset_of(&RegionMask::rectangle(&w, (-2.0, 2.0), (-3.0, 3.0))));
    }

    #[test]
    fn uniform_density_entropy() {
        let w = plane(|_, _| 1.0);
        let s = RegionMask::rectangle(&w, (-1.0, 1.0), (-2.0, 2.0));
        let rho = project_region(&w, &s).unwrap().map(|z| z / s.measure());
        assert!((k_entropy(&rho).unwrap() - s.measure().ln()).abs() < 1e-12);
        assert!(matches!(k_entropy(&w), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn ball_radius_bisection() {
        let w = plane(|_, _| 1.0);
        let r = radius_for_ball_measure(&w, 0.5).unwrap();
        assert!(ball_measure(&w, r) <= 0.5);
        assert!(ball_measure(&w, r * 1.01 + 1e-9) > 0.5);
    }
}
