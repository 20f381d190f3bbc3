//! Builds grids and transforms for a scenario and runs the selected suites.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use ocwt::grid::{norm_l2_plane, GridSpec, SampledFunction, SpatialGrid, SpectralGrid, SpectralMeasure, TFPlane};
use ocwt::presets::{normalized, Preset};
use ocwt::report::{InequalityReport, Relation, Status, Tolerance};
use ocwt::transform::{plancherel_pair_check, KernelMatrix};
use ocwt::translation::{
    admissible_triples, band_violation, calibrate_m, identity_residuals, mass_defect, symmetry_defect, Translator, HELD_OUT,
};
use ocwt::uncertainty::{self as unc, AtomFrame, RegionMask, SpatialMask};
use ocwt::windowed::{Modulator, PlaneGrids, SpectralTranslator, Window, WindowedTransform};
use ocwt::Params;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::scenario::{Scenario, Suite};
use crate::{ConfigError, RunError};

/// One check with the suite and inputs it ran on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    /// `suite/name[key=value;…]`, unique within a run.
    pub id: String,
    pub suite: String,
    #[serde(flatten)]
    pub report: InequalityReport,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub scenario_hash: String,
    pub suites: Vec<String>,
    pub refine: usize,
    pub summary: Summary,
    pub diagnostics: BTreeMap<String, f64>,
    /// Seconds; wall clock for `setup` and `total`, summed task time per suite.
    pub timings: BTreeMap<String, f64>,
    pub checks: Vec<CheckRecord>,
}

impl RunManifest {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

/// Grids shared by every subcommand.
pub struct Grids {
    pub params: Params,
    pub x: Arc<SpatialGrid>,
    pub lambda: Arc<SpectralGrid>,
    pub kernels: Arc<KernelMatrix>,
}

impl Grids {
    /// Function grids with `panels × refine` and `Λ × √refine`.
    pub fn new(s: &Scenario, refine: usize) -> Result<Self, RunError> {
        let params = s.params()?;
        let k = refine.max(1);
        let g = &s.grid;
        let x = Arc::new(SpatialGrid::new(
            GridSpec {
                radius: g.radius,
                panels: g.panels * k,
                order: g.order,
            },
            params,
        )?);
        let lambda = Arc::new(SpectralGrid::new(
            GridSpec {
                radius: g.spectral_radius * (k as f64).sqrt(),
                panels: g.panels * k,
                order: g.order,
            },
            params,
        )?);
        let kernels = Arc::new(KernelMatrix::new(x.clone(), lambda.clone())?);
        Ok(Self {
            params,
            x,
            lambda,
            kernels,
        })
    }

    pub fn sample(&self, s: &Scenario, preset: &Preset) -> Result<SampledFunction, RunError> {
        Ok(preset.sample(self.x.clone(), &s.base_dir)?)
    }
}

/// Translation operator with its constant.
pub fn translator(s: &Scenario, grids: &Grids, diagnostics: &mut BTreeMap<String, f64>) -> Result<Translator, RunError> {
    let m = match s.translation.m {
        Some(m) => m,
        None => {
            let f = grids.sample(s, &s.functions.f)?;
            let c = calibrate_m(&f, s.translation.calibration_x, s.translation.calibration_lambda, &HELD_OUT)?;
            diagnostics.insert("calibration_residual".into(), c.residual);
            c.value
        }
    };
    diagnostics.insert("translation_m".into(), m);
    Ok(Translator::new(grids.params, m)?)
}

/// Everything the windowed and uncertainty suites share.
pub struct Windowed {
    pub translator: Translator,
    pub modulator: Arc<Modulator>,
    pub transforms: Vec<(Preset, WindowedTransform)>,
}

impl Windowed {
    pub fn new(s: &Scenario, grids: &Grids, translator: Translator) -> Result<Self, RunError> {
        let spectral = SpectralTranslator::new(
            s.windowed.convention,
            grids.lambda.clone(),
            translator.clone(),
            grids.lambda.radius(),
        )?;
        let modulator = Arc::new(Modulator::new(grids.kernels.clone(), spectral)?);
        let plane = PlaneGrids::standard(
            s.grid.radius,
            s.grid.plane_xi_radius.unwrap_or(s.grid.spectral_radius),
            (s.grid.plane_panels, s.grid.plane_panels),
            s.grid.order,
            SpectralMeasure::Even,
            grids.params,
        )?;
        let transforms = s
            .windowed
            .windows
            .par_iter()
            .map(|preset| -> Result<_, RunError> {
                let g = normalized(&grids.sample(s, preset)?)?;
                let w = Window::new(g, &grids.kernels)?;
                Ok((
                    preset.clone(),
                    WindowedTransform::new(w, modulator.clone(), &translator, plane.clone())?,
                ))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            translator,
            modulator,
            transforms,
        })
    }
}

type Job<'a> = Box<dyn Fn() -> ocwt::Result<Vec<InequalityReport>> + Send + Sync + 'a>;

struct Task<'a> {
    suite: Suite,
    label: String,
    context: Vec<(&'static str, String)>,
    job: Job<'a>,
}

fn task<'a>(
    suite: Suite,
    label: impl Into<String>,
    context: Vec<(&'static str, String)>,
    job: impl Fn() -> ocwt::Result<Vec<InequalityReport>> + Send + Sync + 'a,
) -> Task<'a> {
    Task {
        suite,
        label: label.into(),
        context,
        job: Box::new(job),
    }
}

fn gap_report(name: &str, gap: f64, limit: f64) -> InequalityReport {
    InequalityReport::new(name, Relation::LessEq, gap, limit, Tolerance::absolute(0.0))
}

fn plane_gap(a: &TFPlane, b: &TFPlane) -> ocwt::Result<f64> {
    let diff = a.with_samples(a.samples().iter().zip(b.samples()).map(|(x, y)| x - y).collect())?;
    Ok(norm_l2_plane(&diff) / norm_l2_plane(a))
}

/// Evenly spaced cells, `side` per axis.
fn lattice(wt: &WindowedTransform, side: usize) -> Vec<usize> {
    let (nx, nxi) = (wt.plane().x.len(), wt.plane().xi.len());
    let pick = |n: usize| -> Vec<usize> { (0..side).map(|k| (k * (n - 1)) / (side - 1).max(1)).collect() };
    let (xs, ks) = (pick(nx), pick(nxi));
    xs.iter().flat_map(|&i| ks.iter().map(move |&j| i * nxi + j)).collect()
}

struct Masks {
    list: Vec<(String, RegionMask)>,
}

impl Masks {
    fn new(s: &Scenario, w: &TFPlane) -> ocwt::Result<Self> {
        let m = &s.masks;
        let r = &m.random;
        Ok(Self {
            list: vec![
                (
                    format!("superlevel(measure={})", m.superlevel_measure),
                    RegionMask::superlevel_by_measure(w, m.superlevel_measure)?,
                ),
                (
                    format!("superlevel(mass={})", m.superlevel_mass),
                    RegionMask::superlevel_by_mass(w, m.superlevel_mass)?,
                ),
                (
                    "rectangle".to_owned(),
                    RegionMask::rectangle(
                        w,
                        (m.rectangle.x[0], m.rectangle.x[1]),
                        (m.rectangle.xi[0], m.rectangle.xi[1]),
                    ),
                ),
                (
                    format!("random(fraction={})", r.fraction),
                    RegionMask::random(w, r.fraction, s.seed, (r.x[0], r.x[1]), (r.xi[0], r.xi[1]))?,
                ),
            ],
        })
    }
}

/// Per (window, function) data of the uncertainty battery.
struct Cell<'a> {
    window: String,
    function: String,
    wt: &'a WindowedTransform,
    f: SampledFunction,
    masks: Masks,
    support: SpatialMask,
    eps0: f64,
    radii: Vec<f64>,
}

fn sum(summary: &mut Summary, r: &InequalityReport) {
    summary.total += 1;
    match r.status {
        Status::Pass => summary.passed += 1,
        Status::Fail => summary.failed += 1,
        Status::Skipped => summary.skipped += 1,
    }
}

/// Runs `suites` on `s`; `jobs = 0` uses every core.
pub fn run(s: &Scenario, suites: &[Suite], refine: usize, jobs: usize) -> Result<RunManifest, RunError> {
    s.validate()?;
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| ConfigError::Validation(format!("cannot start {jobs} workers: {e}")))?;
    pool.install(|| run_in_pool(s, suites, refine, start))
}

fn run_in_pool(s: &Scenario, suites: &[Suite], refine: usize, start: Instant) -> Result<RunManifest, RunError> {
    let suites = Suite::expand(suites);
    let mut diagnostics = BTreeMap::new();
    let mut timings = BTreeMap::new();
    let tol = &s.tolerances;
    let equality = Tolerance::relative(tol.equality);
    let inequality = Tolerance::relative(tol.inequality);

    let grids = if suites.is_empty() {
        None
    } else {
        Some(Grids::new(s, refine)?)
    };
    let needs = |list: &[Suite]| suites.iter().any(|x| list.contains(x));
    let uncertainty = [
        Suite::DonohoStark,
        Suite::Heisenberg,
        Suite::Local,
        Suite::Entropy,
        Suite::Benedicks,
    ];
    let translator = match &grids {
        Some(g) if needs(&[Suite::Translation, Suite::Windowed]) || needs(&uncertainty) => {
            Some(translator(s, g, &mut diagnostics)?)
        }
        _ => None,
    };
    let windowed = match (&grids, &translator) {
        (Some(g), Some(t)) if needs(&[Suite::Windowed]) || needs(&uncertainty) => Some(Windowed::new(s, g, t.clone())?),
        _ => None,
    };
    let frames: Vec<AtomFrame> = match &windowed {
        Some(w) if needs(&[Suite::DonohoStark, Suite::Benedicks]) => w
            .transforms
            .par_iter()
            .map(|(_, wt)| AtomFrame::new(wt))
            .collect::<ocwt::Result<_>>()?,
        _ => Vec::new(),
    };

    let mut inputs = BTreeMap::new();
    let (f, h) = match &grids {
        Some(g) => (Some(g.sample(s, &s.functions.f)?), Some(g.sample(s, &s.functions.h)?)),
        None => (None, None),
    };
    if let (Some(f), Some(g)) = (&f, &grids) {
        diagnostics.insert("f_spatial_tail_fraction".into(), f.tail_fraction());
        diagnostics.insert("f_spectral_tail_fraction".into(), g.kernels.forward(f)?.tail_fraction());
    }
    if let Some(w) = &windowed {
        for (preset, wt) in &w.transforms {
            diagnostics.insert(format!("negativity[{}]", preset.label()), wt.negativity());
        }
        let sequence = s
            .functions
            .sequence
            .iter()
            .map(|p| grids.as_ref().expect("grids exist").sample(s, p))
            .collect::<Result<Vec<_>, _>>()?;
        inputs.insert("sequence", sequence);
    }

    let mut cells: Vec<Cell> = Vec::new();
    if let (Some(w), Some(g)) = (&windowed, &grids) {
        if needs(&uncertainty) {
            let battery = s
                .functions
                .battery
                .iter()
                .map(|p| Ok((p.label(), g.sample(s, p)?)))
                .collect::<Result<Vec<_>, RunError>>()?;
            let mut eps0 = None;
            for (preset, wt) in &w.transforms {
                for (label, f) in &battery {
                    let plane = wt.forward(f)?;
                    let e = match eps0 {
                        Some(e) => e,
                        None => {
                            let e = unc::radius_for_ball_measure(&plane, s.uncertainty.ball_measure)?;
                            diagnostics.insert("eps0".into(), e);
                            diagnostics.insert("eps0_ball_measure".into(), unc::ball_measure(&plane, e));
                            diagnostics.insert("plane_total_measure".into(), plane.total_measure());
                            eps0 = Some(e);
                            e
                        }
                    };
                    cells.push(Cell {
                        window: preset.label(),
                        function: label.clone(),
                        wt,
                        masks: Masks::new(s, &plane)?,
                        support: SpatialMask::support(f, s.masks.support_threshold),
                        f: f.clone(),
                        eps0: e,
                        radii: unc::corollary_radii(&plane, s.uncertainty.corollary_radii, &[e]),
                    });
                }
            }
        }
    }
    timings.insert("setup".into(), start.elapsed().as_secs_f64());

    let mut tasks: Vec<Task> = Vec::new();
    for &suite in &suites {
        match suite {
            Suite::Plancherel => {
                let g = grids.as_ref().expect("grids exist");
                for (which, func) in [("f", f.as_ref()), ("h", h.as_ref())] {
                    let func = func.expect("functions exist");
                    let preset = if which == "f" { &s.functions.f } else { &s.functions.h };
                    let k = g.kernels.clone();
                    let t = Tolerance::relative(tol.plancherel);
                    tasks.push(task(suite, "plancherel", vec![("function", preset.label())], move || {
                        Ok(vec![plancherel_pair_check(&k, func, t)?])
                    }));
                }
            }
            Suite::Translation => {
                let t = translator.as_ref().expect("translator exists");
                let f = f.as_ref().expect("functions exist");
                let (n, seed) = (s.translation.triples, s.seed);
                let radius = s.grid.radius / 2.0;
                tasks.push(task(suite, "translation_band_zero", vec![], move || {
                    Ok(vec![InequalityReport::new(
                        "translation_band_zero",
                        Relation::LessEq,
                        band_violation(t.kernel_rule(), n, radius, seed),
                        0.0,
                        Tolerance::absolute(0.0),
                    )])
                }));
                let limit = tol.symmetry;
                tasks.push(task(suite, "translation_symmetry", vec![], move || {
                    let triples = admissible_triples(n, radius, seed);
                    Ok(vec![gap_report(
                        "translation_symmetry",
                        symmetry_defect(t.kernel_rule(), &triples),
                        limit,
                    )
                    .with_diagnostic("triples", n as f64)])
                }));
                let limit = tol.calibration;
                tasks.push(task(suite, "translation_identity", vec![], move || {
                    let rows = identity_residuals(t, f, &HELD_OUT)?;
                    let worst = rows.iter().map(|r| r.2).fold(0.0, f64::max);
                    Ok(vec![
                        gap_report("translation_identity", worst, limit).with_diagnostic("points", rows.len() as f64)
                    ])
                }));
                let limit = tol.mass;
                let xs = s.translation.mass_points.clone();
                tasks.push(task(suite, "translation_mass", vec![], move || {
                    Ok(vec![gap_report("translation_mass", mass_defect(t, f, &xs)?, limit)])
                }));
            }
            Suite::Windowed => {
                let w = windowed.as_ref().expect("windowed transforms exist");
                let (f, h) = (f.as_ref().expect("f"), h.as_ref().expect("h"));
                for (preset, wt) in &w.transforms {
                    let ctx = vec![("window", preset.label())];
                    let (form, spectral, range) = (tol.form, tol.spectral_form, tol.range);
                    tasks.push(task(suite, "wct_forms", ctx.clone(), move || {
                        let atoms = wt.forward(f)?;
                        let conv = wt.forward_convolution_form(f)?;
                        let spec = wt.forward_spectral(f)?;
                        let projected = wt.project_range(&atoms)?;
                        Ok(vec![
                            gap_report("wct_convolution_form", plane_gap(&atoms, &conv)?, form),
                            gap_report("wct_spectral_form", plane_gap(&atoms, &spec)?, spectral),
                            gap_report("wct_range_invariance", plane_gap(&atoms, &projected)?, range),
                        ])
                    }));
                    let abs = Tolerance::absolute(tol.bound_absolute);
                    tasks.push(task(suite, "wct_identities", ctx.clone(), move || {
                        Ok(vec![
                            wt.plancherel(f, equality)?,
                            wt.orthogonality(f, h, equality)?,
                            wt.lp_bound(f, f64::INFINITY, abs)?,
                        ])
                    }));
                    let side = s.windowed.kernel_lattice;
                    tasks.push(task(suite, "wct_kernel_bound", ctx.clone(), move || {
                        let cells = lattice(wt, side);
                        let mut worst = 0.0_f64;
                        for &a in &cells {
                            for &b in &cells {
                                worst = worst.max(wt.reproducing_kernel(a, b).norm());
                            }
                        }
                        Ok(vec![InequalityReport::new(
                            "wct_kernel_bound",
                            Relation::LessEq,
                            worst,
                            1.0,
                            abs,
                        )
                        .with_diagnostic("pairs", (cells.len() * cells.len()) as f64)])
                    }));
                    for &xi in &s.windowed.isometry_xi {
                        let m = w.modulator.clone();
                        tasks.push(task(suite, "modulation_isometry", ctx.clone(), move || {
                            Ok(vec![m.isometry_check(wt.window(), xi, equality)?])
                        }));
                    }
                }
            }
            Suite::DonohoStark => {
                let sequence = inputs.get("sequence").expect("sequence sampled");
                for (cell, frame) in cells.iter().zip(cells_frames(&cells, &frames, s)) {
                    for (mask_name, mask) in &cell.masks.list {
                        let ctx = cell_context(cell, Some(mask_name));
                        let exps = s.uncertainty.support_exponents.clone();
                        tasks.push(task(suite, "concentration", ctx, move || {
                            let (wt, f) = (cell.wt, &cell.f);
                            let mut out = vec![
                                unc::hs_norm_check(frame, mask, inequality)?,
                                unc::donoho_stark_check(wt, f, mask, inequality)?,
                                unc::concentration_outside_check(wt, f, mask, inequality)?,
                            ];
                            for (k, &p) in exps.iter().enumerate() {
                                let mut pair = unc::support_bound_checks(wt, f, mask, p, inequality)?;
                                if k > 0 {
                                    pair.remove(0);
                                }
                                out.extend(pair);
                            }
                            out.push(unc::combined_concentration_check(wt, f, &cell.support, mask, inequality)?);
                            out.push(unc::orthonormal_sequence_check(wt, sequence, mask, inequality)?);
                            Ok(out)
                        }));
                    }
                }
            }
            Suite::Benedicks => {
                let iters = s.uncertainty.power_iterations;
                for (cell, frame) in cells.iter().zip(cells_frames(&cells, &frames, s)) {
                    for (mask_name, mask) in &cell.masks.list {
                        tasks.push(task(suite, "benedicks", cell_context(cell, Some(mask_name)), move || {
                            Ok(vec![unc::benedicks_quantitative_check(
                                frame, &cell.f, mask, iters, inequality,
                            )?])
                        }));
                    }
                }
            }
            Suite::Heisenberg => {
                for cell in &cells {
                    let exps = s.uncertainty.s.clone();
                    tasks.push(task(suite, "heisenberg", cell_context(cell, None), move || {
                        let mut out = Vec::new();
                        for &e in &exps {
                            out.extend(unc::heisenberg_check(cell.wt, &cell.f, e, cell.eps0, inequality)?);
                        }
                        Ok(out)
                    }));
                }
            }
            Suite::Local => {
                for cell in &cells {
                    let exps = s.uncertainty.s.clone();
                    tasks.push(task(suite, "local_corollary", cell_context(cell, None), move || {
                        let mut out = Vec::new();
                        for &e in &exps {
                            out.extend(unc::local_uncertainty_corollary_check(
                                cell.wt,
                                &cell.f,
                                e,
                                cell.eps0,
                                &cell.radii,
                                inequality,
                            )?);
                        }
                        Ok(out)
                    }));
                    for (mask_name, mask) in &cell.masks.list {
                        let exps = s.uncertainty.s.clone();
                        tasks.push(task(
                            suite,
                            "local_uncertainty",
                            cell_context(cell, Some(mask_name)),
                            move || {
                                exps.iter()
                                    .map(|&e| unc::local_uncertainty_check(cell.wt, &cell.f, mask, e, cell.eps0, inequality))
                                    .collect()
                            },
                        ));
                    }
                }
            }
            Suite::Entropy => {
                for cell in &cells {
                    tasks.push(task(suite, "entropy", cell_context(cell, None), move || {
                        Ok(vec![unc::entropy_inequality_check(cell.wt, &cell.f, inequality)?])
                    }));
                }
            }
            Suite::All => unreachable!("expanded above"),
        }
    }

    let results: Vec<(Vec<InequalityReport>, f64)> = tasks
        .par_iter()
        .map(|t| {
            let clock = Instant::now();
            let reports = match (t.job)() {
                Ok(r) => r,
                Err(e) => vec![InequalityReport::failed(t.label.clone(), e.to_string())],
            };
            (reports, clock.elapsed().as_secs_f64())
        })
        .collect();

    let mut checks = Vec::new();
    let mut summary = Summary::default();
    for (t, (reports, secs)) in tasks.iter().zip(results) {
        *timings.entry(t.suite.name().to_owned()).or_insert(0.0) += secs;
        for mut r in reports {
            for (k, v) in &t.context {
                r.scenario.insert((*k).to_owned(), v.clone());
            }
            sum(&mut summary, &r);
            let context: Vec<String> = r.scenario.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let id = if context.is_empty() {
                format!("{}/{}", t.suite.name(), r.name)
            } else {
                format!("{}/{}[{}]", t.suite.name(), r.name, context.join(";"))
            };
            checks.push(CheckRecord {
                id,
                suite: t.suite.name().to_owned(),
                report: r,
            });
        }
    }
    timings.insert("total".into(), start.elapsed().as_secs_f64());
    Ok(RunManifest {
        version: env!("CARGO_PKG_VERSION").to_owned(),
        scenario_hash: s.hash(),
        suites: suites.iter().map(|x| x.name().to_owned()).collect(),
        refine: refine.max(1),
        summary,
        diagnostics,
        timings,
        checks,
    })
}

fn cell_context(cell: &Cell, mask: Option<&str>) -> Vec<(&'static str, String)> {
    let mut out = vec![("window", cell.window.clone()), ("function", cell.function.clone())];
    if let Some(m) = mask {
        out.push(("mask", m.to_owned()));
    }
    out
}

/// The frame of each cell's window, in cell order.
fn cells_frames<'a>(cells: &[Cell], frames: &'a [AtomFrame<'a>], s: &Scenario) -> Vec<&'a AtomFrame<'a>> {
    let per_window = s.functions.battery.len().max(1);
    (0..cells.len()).map(|k| &frames[k / per_window]).collect()
}

/// `Hf` on the spectral grid as `(λ, Re, Im)` rows.
pub fn transform_rows(s: &Scenario, refine: usize) -> Result<Vec<[f64; 3]>, RunError> {
    let g = Grids::new(s, refine)?;
    let f = g.sample(s, &s.functions.f)?;
    let spec = g.kernels.forward(&f)?;
    Ok(g.lambda
        .nodes()
        .iter()
        .zip(spec.samples())
        .map(|(&l, z)| [l, z.re, z.im])
        .collect())
}

/// `W_g f` for the first window as `(x, ξ, Re, Im, |W|²)` rows.
pub fn wct_rows(s: &Scenario, refine: usize) -> Result<Vec<[f64; 5]>, RunError> {
    let g = Grids::new(s, refine)?;
    let mut diag = BTreeMap::new();
    let t = translator(s, &g, &mut diag)?;
    let mut single = s.clone();
    single.windowed.windows.truncate(1);
    let w = Windowed::new(&single, &g, t)?;
    let f = g.sample(s, &s.functions.f)?;
    let plane = w.transforms[0].1.forward(&f)?;
    Ok(plane
        .coordinates()
        .zip(plane.samples())
        .map(|((x, xi), z)| [x, xi, z.re, z.im, z.norm_sqr()])
        .collect())
}

/// Slices `K(x, y, z)` over `z` for a few `(x, y)` pairs, as
/// `(x, y, z, K)` rows.
pub fn kernel_rows(s: &Scenario, points: usize) -> Result<Vec<[f64; 4]>, RunError> {
    let g = Grids::new(s, 1)?;
    let mut diag = BTreeMap::new();
    let t = translator(s, &g, &mut diag)?;
    let mut rows = Vec::new();
    for &(x, y) in &[(0.5, 0.5), (1.0, 0.5), (1.0, 1.5), (2.0, -1.0)] {
        let hi = f64::abs(x) + f64::abs(y) + 0.5;
        for k in 0..points {
            let z = -hi + 2.0 * hi * k as f64 / (points - 1).max(1) as f64;
            rows.push([x, y, z, t.kernel(x, y, z)]);
        }
    }
    Ok(rows)
}
