//! Named test functions and windows, and CSV ingestion.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{norm_l2_a, SampledFunction, SpatialGrid};
use crate::Complex64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Preset {
    /// `exp(−a (x − center)²)`
    Gaussian {
        #[serde(default = "four")]
        a: f64,
        #[serde(default)]
        center: f64,
    },
    /// `sech(a x)^power`
    Sech {
        #[serde(default = "two")]
        a: f64,
        #[serde(default = "two")]
        power: f64,
    },
    /// `cos²(π x / (2 width))` on `|x| < width`, zero elsewhere.
    CosineBump {
        #[serde(default = "one_and_half")]
        width: f64,
    },
    /// `H_n(√a x) exp(−a x²/2)` with the physicists' Hermite polynomial.
    Hermite {
        n: u32,
        #[serde(default = "four")]
        a: f64,
    },
    /// Two-column `x,value` file, linearly interpolated, zero outside its range.
    Csv { path: PathBuf },
}

fn four() -> f64 {
    4.0
}
fn two() -> f64 {
    2.0
}
fn one_and_half() -> f64 {
    1.5
}

fn hermite(n: u32, t: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * t);
    if n == 0 {
        return h0;
    }
    for k in 1..n {
        let h2 = 2.0 * t * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

impl Preset {
    pub fn gaussian(a: f64) -> Self {
        Self::Gaussian { a, center: 0.0 }
    }

    /// Samples on `grid`. Relative CSV paths resolve against `base`.
    pub fn sample(&self, grid: Arc<SpatialGrid>, base: &Path) -> Result<SampledFunction> {
        let real = |f: &dyn Fn(f64) -> f64| SampledFunction::from_fn(grid.clone(), |x| Complex64::new(f(x), 0.0));
        match self {
            Self::Gaussian { a, center } => {
                positive("gaussian a", *a)?;
                real(&|x| (-a * (x - center).powi(2)).exp())
            }
            Self::Sech { a, power } => {
                positive("sech a", *a)?;
                positive("sech power", *power)?;
                real(&|x| (a * x).cosh().recip().powf(*power))
            }
            Self::CosineBump { width } => {
                positive("cosine_bump width", *width)?;
                let w = *width;
                real(&|x| {
                    if x.abs() < w {
                        (std::f64::consts::FRAC_PI_2 * x / w).cos().powi(2)
                    } else {
                        0.0
                    }
                })
            }
            Self::Hermite { n, a } => {
                positive("hermite a", *a)?;
                let s = a.sqrt();
                real(&|x| hermite(*n, s * x) * (-0.5 * a * x * x).exp())
            }
            Self::Csv { path } => {
                let full = if path.is_absolute() { path.clone() } else { base.join(path) };
                let table = read_csv(&full)?;
                real(&|x| linear(&table, x))
            }
        }
    }

    /// Short label for reports.
    pub fn label(&self) -> String {
        match self {
            Self::Gaussian { a, center } if *center == 0.0 => format!("gaussian(a={a})"),
            Self::Gaussian { a, center } => format!("gaussian(a={a},center={center})"),
            Self::Sech { a, power } => format!("sech(a={a},power={power})"),
            Self::CosineBump { width } => format!("cosine_bump(width={width})"),
            Self::Hermite { n, a } => format!("hermite(n={n},a={a})"),
            Self::Csv { path } => format!("csv({})", path.display()),
        }
    }
}

fn positive(what: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{what} must be positive and finite (got {v})")))
    }
}

fn read_csv(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidParams(format!("cannot read {}: {e}", path.display())))?;
    parse_csv(&text).map_err(|e| match e {
        Error::InvalidParams(m) => Error::InvalidParams(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Parses `x,value` rows; blank lines, `#` comments and one non-numeric
/// header row are skipped. Rows are sorted by `x`.
pub fn parse_csv(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut rows = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split(',').map(str::trim);
        let (Some(a), Some(b)) = (cols.next(), cols.next()) else {
            return Err(Error::InvalidParams(format!("line {}: expected two columns", n + 1)));
        };
        match (a.parse::<f64>(), b.parse::<f64>()) {
            (Ok(x), Ok(v)) if x.is_finite() && v.is_finite() => rows.push((x, v)),
            _ if rows.is_empty() && n == 0 => continue,
            _ => return Err(Error::InvalidParams(format!("line {}: not a pair of finite numbers", n + 1))),
        }
    }
    if rows.len() < 2 {
        return Err(Error::InvalidParams("need at least two rows".into()));
    }
    rows.sort_by(|p, q| p.0.total_cmp(&q.0));
    Ok(rows)
}

fn linear(table: &[(f64, f64)], x: f64) -> f64 {
    let (first, last) = (table[0], table[table.len() - 1]);
    if x < first.0 || x > last.0 {
        return 0.0;
    }
    let k = table.partition_point(|p| p.0 <= x).clamp(1, table.len() - 1);
    let (x0, y0) = table[k - 1];
    let (x1, y1) = table[k];
    if x1 == x0 {
        return y0;
    }
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// `f / ‖f‖_{L²(A)}`.
pub fn normalized(f: &SampledFunction) -> Result<SampledFunction> {
    let n = norm_l2_a(f);
    if n == 0.0 || !n.is_finite() {
        return Err(Error::InvalidParams("cannot normalize a zero function".into()));
    }
    Ok(f.scaled(Complex64::new(1.0 / n, 0.0)))
}
