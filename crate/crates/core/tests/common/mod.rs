//! Default grids and windowed transforms shared by the integration tests.
#![allow(dead_code)]

use std::path::Path;
use std::sync::{Arc, OnceLock};

use ocwt::grid::{GridSpec, SampledFunction, SpatialGrid, SpectralGrid, SpectralMeasure};
use ocwt::presets::{normalized, Preset};
use ocwt::transform::KernelMatrix;
use ocwt::translation::{calibrate_m, Translator, HELD_OUT};
use ocwt::windowed::{Modulator, PlaneGrids, SpectralTranslation, SpectralTranslator, Window, WindowedTransform};
use ocwt::Params;

pub const RADIUS: f64 = 6.0;
pub const SPECTRAL_RADIUS: f64 = 12.0;
pub const PANELS: usize = 16;
pub const ORDER: usize = 8;

pub struct Setup {
    pub params: Params,
    pub x: Arc<SpatialGrid>,
    pub lambda: Arc<SpectralGrid>,
    pub kernels: Arc<KernelMatrix>,
    pub translator: Translator,
    pub modulator: Arc<Modulator>,
}

impl Setup {
    pub fn new(panels: usize) -> Self {
        let params = Params::default();
        let x = Arc::new(
            SpatialGrid::new(
                GridSpec {
                    radius: RADIUS,
                    panels,
                    order: ORDER,
                },
                params,
            )
            .unwrap(),
        );
        let lambda = Arc::new(
            SpectralGrid::new(
                GridSpec {
                    radius: SPECTRAL_RADIUS,
                    panels,
                    order: ORDER,
                },
                params,
            )
            .unwrap(),
        );
        let kernels = Arc::new(KernelMatrix::new(x.clone(), lambda.clone()).unwrap());
        let f = sample(&x, &Preset::gaussian(4.0));
        let m = calibrate_m(&f, 1.0, 1.0, &HELD_OUT).unwrap().value;
        let translator = Translator::new(params, m).unwrap();
        let spectral = SpectralTranslator::new(
            SpectralTranslation::PlancherelInvariant,
            lambda.clone(),
            translator.clone(),
            SPECTRAL_RADIUS,
        )
        .unwrap();
        let modulator = Arc::new(Modulator::new(kernels.clone(), spectral).unwrap());
        Self {
            params,
            x,
            lambda,
            kernels,
            translator,
            modulator,
        }
    }

    pub fn sample(&self, p: &Preset) -> SampledFunction {
        sample(&self.x, p)
    }

    pub fn window(&self, p: &Preset) -> Window {
        Window::new(normalized(&self.sample(p)).unwrap(), &self.kernels).unwrap()
    }

    /// `panels` per half-line on both plane axes, `order` nodes per panel.
    pub fn plane(&self, panels: usize, order: usize) -> PlaneGrids {
        PlaneGrids::standard(
            RADIUS,
            SPECTRAL_RADIUS,
            (panels, panels),
            order,
            SpectralMeasure::Even,
            self.params,
        )
        .unwrap()
    }

    pub fn transform(&self, window: &Preset, plane: PlaneGrids) -> WindowedTransform {
        WindowedTransform::new(self.window(window), self.modulator.clone(), &self.translator, plane).unwrap()
    }
}

pub fn sample(x: &Arc<SpatialGrid>, p: &Preset) -> SampledFunction {
    p.sample(x.clone(), Path::new(".")).unwrap()
}

pub fn defaults() -> &'static Setup {
    static SETUP: OnceLock<Setup> = OnceLock::new();
    SETUP.get_or_init(|| Setup::new(PANELS))
}

pub fn gaussian_window() -> Preset {
    Preset::gaussian(8.0)
}

pub fn sech_window() -> Preset {
    Preset::Sech { a: 4.0, power: 2.0 }
}

pub fn cosine_window() -> Preset {
    Preset::CosineBump { width: 0.75 }
}

/// The default 64×64 plane with the Gaussian window.
pub fn gaussian_transform() -> &'static WindowedTransform {
    static WT: OnceLock<WindowedTransform> = OnceLock::new();
    WT.get_or_init(|| defaults().transform(&gaussian_window(), defaults().plane(4, ORDER)))
}

/// The default plane with the sech window.
pub fn sech_transform() -> &'static WindowedTransform {
    static WT: OnceLock<WindowedTransform> = OnceLock::new();
    WT.get_or_init(|| defaults().transform(&sech_window(), defaults().plane(4, ORDER)))
}

/// A 16×16 plane with the Gaussian window, small enough for dense oracles.
pub fn coarse_transform() -> &'static WindowedTransform {
    static WT: OnceLock<WindowedTransform> = OnceLock::new();
    WT.get_or_init(|| defaults().transform(&gaussian_window(), defaults().plane(2, 4)))
}

/// A 32×32 plane with the Gaussian window, the coarsest one on which the
/// range integrals are resolved.
pub fn mid_transform() -> &'static WindowedTransform {
    static WT: OnceLock<WindowedTransform> = OnceLock::new();
    WT.get_or_init(|| defaults().transform(&gaussian_window(), defaults().plane(2, ORDER)))
}
