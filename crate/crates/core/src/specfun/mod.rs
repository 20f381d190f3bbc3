//! Special functions behind the transform kernels.

mod gamma;
mod hyp2f1;
mod jacobi;

pub use gamma::{gamma_complex, ln_gamma_complex, rgamma_complex, POLE_TOLERANCE};
pub use hyp2f1::{gauss_2f1, CONDITION_LIMIT, NEAR_ONE_THRESHOLD, SERIES_BUDGET, SERIES_TOLERANCE};
pub use jacobi::{
    cherednik_c, jacobi_cherednik_apply, jacobi_phi, opdam_g, opdam_g_derivative_form, plancherel_density,
    symmetric_uniform_nodes, weight_a, SpectralDensity,
};
