use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The `(alpha, beta)` pair that fixes every kernel and measure.
///
/// `rho = alpha + beta + 1` is always derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct Params {
    alpha: f64,
    beta: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    alpha: f64,
    beta: f64,
}

impl TryFrom<RawParams> for Params {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        Params::new(raw.alpha, raw.beta)
    }
}

impl From<Params> for RawParams {
    fn from(p: Params) -> Self {
        RawParams {
            alpha: p.alpha,
            beta: p.beta,
        }
    }
}

impl Params {
    /// Requires `alpha >= beta >= -1/2` and `alpha > -1/2`.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidParams(format!(
                "non-finite parameters alpha = {alpha}, beta = {beta}"
            )));
        }
        if alpha <= -0.5 {
            return Err(Error::InvalidParams(format!("alpha > -1/2 violated (alpha = {alpha})")));
        }
        if beta < -0.5 {
            return Err(Error::InvalidParams(format!("beta >= -1/2 violated (beta = {beta})")));
        }
        if beta > alpha {
            return Err(Error::InvalidParams(format!(
                "alpha >= beta violated (alpha = {alpha}, beta = {beta})"
            )));
        }
        Ok(Params { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn rho(&self) -> f64 {
        self.alpha + self.beta + 1.0
    }

    /// Parameters `(alpha + 1, beta + 1)` of the companion Jacobi function
    /// appearing in the odd part of the eigenfunction.
    pub fn shifted(&self) -> Params {
        Params {
            alpha: self.alpha + 1.0,
            beta: self.beta + 1.0,
        }
    }
}

impl Default for Params {
    fn default() -> Self {
        Params { alpha: 1.0, beta: 0.5 }
    }
}
