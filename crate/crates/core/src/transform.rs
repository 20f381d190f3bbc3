//! Forward and inverse Opdam–Cherednik transforms.

use std::sync::Arc;

use crate::error::Result;
use crate::grid::{norm_l2_a, SampledFunction, SpatialGrid, SpectralGrid, Spectrum};
use crate::report::{InequalityReport, Relation, Tolerance};
use crate::specfun::{jacobi_phi, opdam_g};
use crate::{Complex64, Params};

/// `G_{λ_j}(x_i)` for every spectral node `j` and spatial node `i`.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    xgrid: Arc<SpatialGrid>,
    lgrid: Arc<SpectralGrid>,
    /// row-major, rows indexed by λ
    values: Vec<Complex64>,
}

impl KernelMatrix {
    pub fn new(xgrid: Arc<SpatialGrid>, lgrid: Arc<SpectralGrid>) -> Result<Self> {
        let p = *xgrid.params();
        let n = xgrid.len();
        let shifted = p.shifted();
        let mut values = vec![Complex64::new(0.0, 0.0); lgrid.len() * n];
        // G_{−λ} = conj(G_λ) for real λ, so only λ > 0 is evaluated
        for j in lgrid.len() / 2..lgrid.len() {
            let l = lgrid.nodes()[j];
            let lambda = Complex64::new(l, 0.0);
            let coef = (p.rho() + Complex64::new(0.0, l)) / (4.0 * (p.alpha() + 1.0));
            let row = &mut values[j * n..(j + 1) * n];
            // φ is even in x, so the positive half gives both signs
            for i in n / 2..n {
                let x = xgrid.nodes()[i];
                let even = jacobi_phi(lambda, x, &p)?;
                let odd = coef * (2.0 * x).sinh() * jacobi_phi(lambda, x, &shifted)?;
                row[i] = even + odd;
                row[n - 1 - i] = even - odd;
            }
            let m = lgrid.mirror(j);
            for i in 0..n {
                values[m * n + i] = values[j * n + i].conj();
            }
        }
        Ok(Self { xgrid, lgrid, values })
    }

    pub fn xgrid(&self) -> &Arc<SpatialGrid> {
        &self.xgrid
    }

    pub fn lgrid(&self) -> &Arc<SpectralGrid> {
        &self.lgrid
    }

    /// `G_{λ_j}(x_i)`.
    pub fn get(&self, j: usize, i: usize) -> Complex64 {
        self.values[j * self.xgrid.len() + i]
    }

    pub fn row(&self, j: usize) -> &[Complex64] {
        let n = self.xgrid.len();
        &self.values[j * n..(j + 1) * n]
    }

    /// `Hf(λ_j) = Σ_i f(x_i) G_{λ_j}(−x_i) w_i`.
    pub fn forward(&self, f: &SampledFunction) -> Result<Spectrum> {
        let w = self.xgrid.weights();
        let fw: Vec<Complex64> = f.samples().iter().zip(w).map(|(s, w)| s * w).collect();
        let samples = (0..self.lgrid.len())
            .map(|j| {
                let row = self.row(j);
                // G(−x_i) sits at the mirrored index
                fw.iter().zip(row.iter().rev()).map(|(a, g)| a * g).sum()
            })
            .collect();
        Spectrum::new(self.lgrid.clone(), samples)
    }

    /// `f(x_i) = Σ_j F(λ_j) G_{λ_j}(x_i) dσ_j`.
    pub fn inverse(&self, spec: &Spectrum) -> Result<SampledFunction> {
        let n = self.xgrid.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (j, (s, w)) in spec.samples().iter().zip(self.lgrid.complex_weights()).enumerate() {
            let c = s * w;
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (o, g) in out.iter_mut().zip(self.row(j)) {
                *o += c * g;
            }
        }
        SampledFunction::new(self.xgrid.clone(), out)
    }
}

/// `Hf(λ)` at one arbitrary `λ`.
pub fn forward_at(f: &SampledFunction, lambda: Complex64) -> Result<Complex64> {
    let g = f.grid();
    let p = g.params();
    let mut acc = Complex64::new(0.0, 0.0);
    for ((&x, s), w) in g.nodes().iter().zip(f.samples()).zip(g.weights()) {
        acc += s * opdam_g(lambda, -x, p)? * w;
    }
    Ok(acc)
}

/// Forward transform onto `lgrid`; builds the kernel matrix on the fly.
pub fn oc_forward(f: &SampledFunction, lgrid: Arc<SpectralGrid>) -> Result<Spectrum> {
    KernelMatrix::new(f.grid().clone(), lgrid)?.forward(f)
}

/// Inverse transform onto `xgrid`; builds the kernel matrix on the fly.
pub fn oc_inverse(spec: &Spectrum, xgrid: Arc<SpatialGrid>) -> Result<SampledFunction> {
    KernelMatrix::new(xgrid, spec.grid().clone())?.inverse(spec)
}

/// `∫ |f|² A dx` against `∫ Hf(λ) conj(H f̌(−λ)) dσ(λ)`, `f̌(x) = f(−x)`.
pub fn plancherel_pair_check(kernel: &KernelMatrix, f: &SampledFunction, tol: Tolerance) -> Result<InequalityReport> {
    let lhs = norm_l2_a(f).powi(2);
    let hf = kernel.forward(f)?;
    let hcheck = kernel.forward(&f.reflected())?;
    let lg = kernel.lgrid();
    let rhs: Complex64 = (0..lg.len())
        .map(|j| hf.samples()[j] * hcheck.samples()[lg.mirror(j)].conj() * lg.complex_weights()[j])
        .sum();
    let mut report = InequalityReport::new("plancherel", Relation::Equal, lhs, rhs.re, tol)
        .with_diagnostic("rhs_imaginary", rhs.im)
        .with_diagnostic("spatial_tail_fraction", f.tail_fraction())
        .with_diagnostic("spectral_tail_fraction", hf.tail_fraction());
    let gap = report.relative_gap();
    report.diagnostics.insert("relative_gap".into(), gap);
    Ok(report)
}

/// Relative `L²(A)` error of `H⁻¹ H f` against `f`.
pub fn roundtrip_error(kernel: &KernelMatrix, f: &SampledFunction) -> Result<f64> {
    let back = kernel.inverse(&kernel.forward(f)?)?;
    let diff = back.combine(Complex64::new(1.0, 0.0), f, Complex64::new(-1.0, 0.0))?;
    Ok(norm_l2_a(&diff) / norm_l2_a(f))
}

/// Eigenvalue residual `sup |T G_λ − iλ G_λ|` on a uniform symmetric grid in
/// `[-half_width, half_width]` with spacing `h`.
pub fn eigen_residual(lambda: f64, p: &Params, half_width: f64, h: f64) -> Result<f64> {
    let half = (half_width / h).round() as usize;
    let nodes = crate::specfun::symmetric_uniform_nodes(half, h);
    let l = Complex64::new(lambda, 0.0);
    let values = nodes.iter().map(|&x| opdam_g(l, x, p)).collect::<Result<Vec<_>>>()?;
    let t = crate::specfun::jacobi_cherednik_apply(&nodes, &values, p)?;
    // the one-sided end stencils are a cruder approximation; skip them
    Ok((1..nodes.len() - 1)
        .map(|i| (t[i] - Complex64::new(0.0, lambda) * values[i]).norm())
        .fold(0.0, f64::max))
}
