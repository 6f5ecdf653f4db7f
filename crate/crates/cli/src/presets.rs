//! Figure-reproduction presets.
//!
//! Each preset covers a range wide enough to contain every feature of
//! interest for that figure:
//!
//! | preset | what | model | grid | levels | n_trunc |
//! |--------|------|-------|------|--------|---------|
//! | fig1 | entropy vs g | ω₀ = 1, ε = 0.01 | g ∈ [0, 3], 301 pts | 8 | 400 |
//! | fig2 | spectra vs g | ω₀ = 1, ε = 0.01 | g ∈ [0, 3], 601 pts | 9 | 400 |
//! | fig3 | ω₀–g plane | ε = 0.1 | ω₀ ∈ [0, 2] 41 × g ∈ [0, 3] 61 | 1 | 120 |
//! | fig4 | ε–g plane | ω₀ = 1 | ε ∈ [0, 2] 41 × g ∈ [0, 3] 61 | 2 | 120 |
//! | fig5 | spectra and entropy vs ε | ω₀ = 1, g = 3 | ε ∈ [0, 4], 201 pts | 9 | 400 |
//! | fig7 | JC doublet report | n = 1, Δ = 0.5, ε = 0.05 | | | 60 |
//!
//! The two-dimensional presets use n_trunc = 120, which already converges
//! the lowest levels to better than 1e-10 up to g = 3; the one-dimensional
//! ones keep the customary 400.

use clap::ValueEnum;
use rabi_core::{ModelKind, ModelParams, Truncation};

use crate::config::{AxisName, GridSpec, ModelSettings};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig7,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Preset {
    Sweep {
        settings: ModelSettings,
        axis: (AxisName, GridSpec),
        axis2: Option<(AxisName, GridSpec)>,
    },
    JcPerturb {
        n: usize,
        delta: f64,
        epsilon: f64,
        n_trunc: usize,
    },
}

fn grid(min: f64, max: f64, count: usize) -> GridSpec {
    GridSpec { min, max, count }
}

fn settings(params: ModelParams, n_levels: usize, n_trunc: usize) -> ModelSettings {
    ModelSettings {
        kind: ModelKind::AsymQrm,
        params,
        truncation: Truncation::Fixed(n_trunc),
        n_levels,
    }
}

pub fn preset(fig: Figure) -> Preset {
    use AxisName::*;
    match fig {
        Figure::Fig1 => Preset::Sweep {
            settings: settings(ModelParams::new(1.0, 0.0, 0.01), 8, 400),
            axis: (G, grid(0.0, 3.0, 301)),
            axis2: None,
        },
        Figure::Fig2 => Preset::Sweep {
            settings: settings(ModelParams::new(1.0, 0.0, 0.01), 9, 400),
            axis: (G, grid(0.0, 3.0, 601)),
            axis2: None,
        },
        Figure::Fig3 => Preset::Sweep {
            settings: settings(ModelParams::new(1.0, 0.0, 0.1), 1, 120),
            axis: (Omega0, grid(0.0, 2.0, 41)),
            axis2: Some((G, grid(0.0, 3.0, 61))),
        },
        Figure::Fig4 => Preset::Sweep {
            settings: settings(ModelParams::new(1.0, 0.0, 0.0), 2, 120),
            axis: (Epsilon, grid(0.0, 2.0, 41)),
            axis2: Some((G, grid(0.0, 3.0, 61))),
        },
        Figure::Fig5 => Preset::Sweep {
            settings: settings(ModelParams::new(1.0, 3.0, 0.0), 9, 400),
            axis: (Epsilon, grid(0.0, 4.0, 201)),
            axis2: None,
        },
        Figure::Fig7 => Preset::JcPerturb {
            n: 1,
            delta: 0.5,
            epsilon: 0.05,
            n_trunc: 60,
        },
    }
}
