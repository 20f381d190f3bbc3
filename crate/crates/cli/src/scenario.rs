//! Scenario files: TOML with every section optional and unknown keys rejected.

use std::path::{Path, PathBuf};

use ocwt::presets::Preset;
use ocwt::windowed::SpectralTranslation;
use ocwt::Params;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ConfigError;

/// Named groups of checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Plancherel,
    Translation,
    Windowed,
    DonohoStark,
    Heisenberg,
    Local,
    Entropy,
    Benedicks,
    All,
}

impl Suite {
    pub const CONCRETE: [Suite; 8] = [
        Suite::Plancherel,
        Suite::Translation,
        Suite::Windowed,
        Suite::DonohoStark,
        Suite::Heisenberg,
        Suite::Local,
        Suite::Entropy,
        Suite::Benedicks,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Plancherel => "plancherel",
            Suite::Translation => "translation",
            Suite::Windowed => "windowed",
            Suite::DonohoStark => "donoho-stark",
            Suite::Heisenberg => "heisenberg",
            Suite::Local => "local",
            Suite::Entropy => "entropy",
            Suite::Benedicks => "benedicks",
            Suite::All => "all",
        }
    }

    /// `All` expanded, duplicates removed, in canonical order.
    pub fn expand(list: &[Suite]) -> Vec<Suite> {
        let mut out: Vec<Suite> = if list.contains(&Suite::All) {
            Self::CONCRETE.to_vec()
        } else {
            list.to_vec()
        };
        out.sort();
        out.dedup();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamsSection {
    pub alpha: f64,
    pub beta: f64,
}

impl Default for ParamsSection {
    fn default() -> Self {
        Self { alpha: 1.0, beta: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    /// Spatial half-width `R`.
    pub radius: f64,
    /// Spectral half-width `Λ`.
    pub spectral_radius: f64,
    /// Gauss panels per half-line on both function grids.
    pub panels: usize,
    /// Nodes per panel.
    pub order: usize,
    /// Panels per half-line on each plane axis.
    pub plane_panels: usize,
    /// `ξ` half-width of the plane; `Λ` when absent.
    pub plane_xi_radius: Option<f64>,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            radius: 6.0,
            spectral_radius: 12.0,
            panels: 16,
            order: 8,
            plane_panels: 4,
            plane_xi_radius: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TranslationSection {
    /// Fixed constant; calibrated when absent.
    pub m: Option<f64>,
    pub calibration_x: f64,
    pub calibration_lambda: f64,
    /// Random triples for the symmetry and band checks.
    pub triples: usize,
    /// Translation points of the mass check.
    pub mass_points: Vec<f64>,
}

impl Default for TranslationSection {
    fn default() -> Self {
        Self {
            m: None,
            calibration_x: 1.0,
            calibration_lambda: 1.0,
            triples: 100,
            mass_points: vec![0.5, 1.0, 1.5],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FunctionsSection {
    /// Primary test function.
    pub f: Preset,
    /// Second function for orthogonality and Plancherel.
    pub h: Preset,
    /// Test functions of the uncertainty battery.
    pub battery: Vec<Preset>,
    /// Sequence orthonormalized for the orthonormal-sequence check.
    pub sequence: Vec<Preset>,
}

impl Default for FunctionsSection {
    fn default() -> Self {
        Self {
            f: Preset::gaussian(4.0),
            h: Preset::gaussian(8.0),
            battery: vec![
                Preset::gaussian(4.0),
                Preset::Gaussian { a: 2.0, center: 0.5 },
                Preset::Hermite { n: 1, a: 4.0 },
            ],
            sequence: (0..4).map(|n| Preset::Hermite { n, a: 4.0 }).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WindowedSection {
    pub convention: SpectralTranslation,
    pub windows: Vec<Preset>,
    /// `ξ` values of the modulation isometry check.
    pub isometry_xi: Vec<f64>,
    /// Side of the cell lattice for the kernel bound.
    pub kernel_lattice: usize,
}

impl Default for WindowedSection {
    fn default() -> Self {
        Self {
            convention: SpectralTranslation::PlancherelInvariant,
            windows: vec![
                Preset::gaussian(8.0),
                Preset::Sech { a: 4.0, power: 2.0 },
                Preset::CosineBump { width: 0.75 },
            ],
            isometry_xi: vec![0.5, 1.0],
            kernel_lattice: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RectangleSpec {
    pub x: [f64; 2],
    pub xi: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RandomSpec {
    pub fraction: f64,
    pub x: [f64; 2],
    pub xi: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MasksSection {
    /// Target measure of the small superlevel mask.
    pub superlevel_measure: f64,
    /// Captured-mass fraction of the large superlevel mask.
    pub superlevel_mass: f64,
    pub rectangle: RectangleSpec,
    pub random: RandomSpec,
    /// Spatial set `E` keeps nodes where `|f|` exceeds this fraction of its
    /// maximum.
    pub support_threshold: f64,
}

impl Default for RectangleSpec {
    fn default() -> Self {
        Self {
            x: [-1.0, 1.0],
            xi: [-3.0, 3.0],
        }
    }
}

impl Default for RandomSpec {
    fn default() -> Self {
        Self {
            fraction: 0.2,
            x: [-2.0, 2.0],
            xi: [-6.0, 6.0],
        }
    }
}

impl Default for MasksSection {
    fn default() -> Self {
        Self {
            superlevel_measure: 0.5,
            superlevel_mass: 0.9,
            rectangle: RectangleSpec::default(),
            random: RandomSpec::default(),
            support_threshold: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UncertaintySection {
    /// Moment exponents of the Heisenberg and local checks.
    pub s: Vec<f64>,
    /// `μ(B_ε₀)` targeted when choosing `ε₀`.
    pub ball_measure: f64,
    pub support_exponents: Vec<f64>,
    pub power_iterations: usize,
    /// Log-spaced radii of the corollary minimization.
    pub corollary_radii: usize,
}

impl Default for UncertaintySection {
    fn default() -> Self {
        Self {
            s: vec![0.5, 1.0],
            ball_measure: 0.5,
            support_exponents: vec![3.0, 4.0],
            power_iterations: 1000,
            corollary_radii: 200,
        }
    }
}

/// Relative slack per check family; the sup and kernel bounds use absolute
/// slack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TolerancesSection {
    pub plancherel: f64,
    pub roundtrip: f64,
    pub symmetry: f64,
    pub calibration: f64,
    pub mass: f64,
    pub form: f64,
    pub spectral_form: f64,
    pub equality: f64,
    pub inequality: f64,
    pub bound_absolute: f64,
    pub range: f64,
}

impl Default for TolerancesSection {
    fn default() -> Self {
        Self {
            plancherel: 0.02,
            roundtrip: 0.02,
            symmetry: 1e-8,
            calibration: 0.05,
            mass: 0.01,
            form: 0.02,
            spectral_form: 0.05,
            equality: 0.03,
            inequality: 0.02,
            bound_absolute: 1e-6,
            range: 0.05,
        }
    }
}

/// Everything a run depends on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    pub seed: u64,
    pub suites: Vec<Suite>,
    pub params: ParamsSection,
    pub grid: GridSection,
    pub translation: TranslationSection,
    pub functions: FunctionsSection,
    pub windowed: WindowedSection,
    pub masks: MasksSection,
    pub uncertainty: UncertaintySection,
    pub tolerances: TolerancesSection,
    /// Directory relative CSV presets resolve against; set by the loader.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            seed: 42,
            suites: vec![Suite::All],
            params: ParamsSection::default(),
            grid: GridSection::default(),
            translation: TranslationSection::default(),
            functions: FunctionsSection::default(),
            windowed: WindowedSection::default(),
            masks: MasksSection::default(),
            uncertainty: UncertaintySection::default(),
            tolerances: TolerancesSection::default(),
            base_dir: PathBuf::from("."),
        }
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

impl Scenario {
    /// Parses and validates TOML text.
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let scenario: Scenario = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |s| line_column(text, s.start));
            ConfigError::Parse {
                line,
                column,
                message: e.message().to_owned(),
            }
        })?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.to_owned(),
            message: e.to_string(),
        })?;
        let mut s = Self::from_toml(&text)?;
        s.base_dir = path.parent().map(Path::to_owned).unwrap_or_default();
        Ok(s)
    }

    pub fn params(&self) -> Result<Params, ConfigError> {
        Params::new(self.params.alpha, self.params.beta).map_err(|e| ConfigError::Validation(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.params()?;
        let bad = |m: String| Err(ConfigError::Validation(m));
        let g = &self.grid;
        for (name, v) in [("grid.radius", g.radius), ("grid.spectral_radius", g.spectral_radius)] {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} must be positive (got {v})"));
            }
        }
        if let Some(v) = g.plane_xi_radius {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("grid.plane_xi_radius must be positive (got {v})"));
            }
        }
        for (name, v) in [
            ("grid.panels", g.panels),
            ("grid.order", g.order),
            ("grid.plane_panels", g.plane_panels),
        ] {
            if v == 0 {
                return bad(format!("{name} must be at least 1"));
            }
        }
        if self.translation.calibration_x == 0.0 {
            return bad("translation.calibration_x = 0 carries no information about M".into());
        }
        if let Some(m) = self.translation.m {
            if !(m.is_finite() && m > 0.0) {
                return bad(format!("translation.m must be positive (got {m})"));
            }
        }
        if self.windowed.windows.is_empty() {
            return bad("windowed.windows must name at least one window".into());
        }
        let u = &self.uncertainty;
        if !(u.ball_measure > 0.0 && u.ball_measure < 1.0) {
            return bad(format!(
                "uncertainty.ball_measure must lie in (0, 1) (got {})",
                u.ball_measure
            ));
        }
        if let Some(s) = u.s.iter().find(|s| !(**s > 0.0)) {
            return bad(format!("uncertainty.s entries must be positive (got {s})"));
        }
        if let Some(p) = u.support_exponents.iter().find(|p| !(**p > 2.0)) {
            return bad(format!("uncertainty.support_exponents entries must exceed 2 (got {p})"));
        }
        if u.power_iterations < 20 {
            return bad(format!(
                "uncertainty.power_iterations must be at least 20 (got {})",
                u.power_iterations
            ));
        }
        if u.corollary_radii < 2 {
            return bad("uncertainty.corollary_radii must be at least 2".into());
        }
        let m = &self.masks;
        if !(0.0..=1.0).contains(&m.superlevel_mass) || !(0.0..=1.0).contains(&m.random.fraction) {
            return bad("mask fractions must lie in [0, 1]".into());
        }
        if !(m.superlevel_measure >= 0.0) {
            return bad("masks.superlevel_measure must be nonnegative".into());
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form, so formatting and comments do not
    /// change it.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("scenario serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    /// Suites to run: `requested` when given, else the scenario's own list.
    pub fn selected_suites(&self, requested: &[Suite]) -> Vec<Suite> {
        Suite::expand(if requested.is_empty() { &self.suites } else { requested })
    }
}
