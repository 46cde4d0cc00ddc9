use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::features::{extract_features_of, FeatureError};
use super::grid::{GridError, GridSpec, SweepGrid};
use super::sweep::{sweep_spectrum, Observable, SweepError};
use crate::model::SystemConfig;
use crate::response::{self, DelayMode, ResponseError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurfaceError {
    #[error("delay surface needs g_c > 0 (g_m is swept as eta * g_c)")]
    NoOptomechanicalCoupling,
    #[error("eta values must be finite and nonnegative, got {0}")]
    InvalidEta(f64),
    #[error("g_m values must be finite and nonnegative, got {0}")]
    InvalidCoupling(f64),
    #[error("delay evaluation failed at eta = {eta}, delta = {delta:e} rad/s: {source}")]
    Response {
        eta: f64,
        delta: f64,
        #[source]
        source: ResponseError,
    },
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
}

/// One cell of a [`DelaySurface`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub eta_index: usize,
    pub delta_index: usize,
    pub eta: f64,
    pub delta_over_omega_b: f64,
    pub tau_s: f64,
}

/// Group delay (output-field definition) over `η = g_m/g_c` × `δ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelaySurface {
    pub config: SystemConfig,
    pub eta_values: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub delta_over_omega_b: Vec<f64>,
    /// `tau[i][j]` at `(eta_values[i], lambdas[j])`; `None` where undefined.
    pub tau: Vec<Vec<Option<f64>>>,
    pub max: Option<Extremum>,
    pub min: Option<Extremum>,
}

impl DelaySurface {
    pub fn config_at(&self, eta_index: usize) -> SystemConfig {
        with_eta(&self.config, self.eta_values[eta_index])
    }

    pub fn cells(&self) -> impl Iterator<Item = Extremum> + '_ {
        self.tau.iter().enumerate().flat_map(move |(i, row)| {
            row.iter().enumerate().filter_map(move |(j, t)| {
                t.map(|tau_s| Extremum {
                    eta_index: i,
                    delta_index: j,
                    eta: self.eta_values[i],
                    delta_over_omega_b: self.delta_over_omega_b[j],
                    tau_s,
                })
            })
        })
    }
}

fn with_eta(config: &SystemConfig, eta: f64) -> SystemConfig {
    let mut c = *config;
    c.couplings.g_m = eta * config.couplings.g_c;
    c
}

pub fn delay_surface(config: &SystemConfig, eta_grid: &[f64], grid: &SweepGrid) -> Result<DelaySurface, SurfaceError> {
    if config.couplings.g_c.is_nan() || config.couplings.g_c <= 0.0 {
        return Err(SurfaceError::NoOptomechanicalCoupling);
    }
    if let Some(&bad) = eta_grid.iter().find(|e| !(e.is_finite() && **e >= 0.0)) {
        return Err(SurfaceError::InvalidEta(bad));
    }
    let lambdas = grid.lambdas();
    let tau = eta_grid
        .par_iter()
        .map(|&eta| {
            let cfg = with_eta(config, eta);
            lambdas
                .iter()
                .map(|&l| match response::group_delay_at(&cfg, l, DelayMode::OutputField) {
                    Ok(t) => Ok(Some(t)),
                    Err(ResponseError::DelayUndefined { .. }) => Ok(None),
                    Err(source) => Err(SurfaceError::Response {
                        eta,
                        delta: cfg.omega_b + l,
                        source,
                    }),
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;

    let mut surface = DelaySurface {
        config: *config,
        eta_values: eta_grid.to_vec(),
        lambdas: lambdas.to_vec(),
        delta_over_omega_b: grid.delta_over_omega_b(),
        tau,
        max: None,
        min: None,
    };
    // first occurrence wins on ties, scanning row-major
    let mut max: Option<Extremum> = None;
    let mut min: Option<Extremum> = None;
    for cell in surface.cells() {
        if max.map_or(true, |m| cell.tau_s > m.tau_s) {
            max = Some(cell);
        }
        if min.map_or(true, |m| cell.tau_s < m.tau_s) {
            min = Some(cell);
        }
    }
    surface.max = max;
    surface.min = min;
    Ok(surface)
}

/// Width of the transmission window nearest `δ/ω_b = 1` for each `g_m`
/// (rad/s). Windows are minima of the extinction `1 − |t_p|²`, i.e.
/// transmission maxima; `None` when no window is found.
pub fn window_width_vs_gm(
    config: &SystemConfig,
    gm_values: &[f64],
    grid: &GridSpec,
) -> Result<Vec<(f64, Option<f64>)>, SurfaceError> {
    if let Some(&bad) = gm_values.iter().find(|g| !(g.is_finite() && **g >= 0.0)) {
        return Err(SurfaceError::InvalidCoupling(bad));
    }
    let sweep_grid = grid.build(config.omega_b)?;
    gm_values
        .iter()
        .map(|&gm| {
            let mut cfg = *config;
            cfg.couplings.g_m = gm;
            let table = sweep_spectrum(&cfg, &sweep_grid)?;
            let report = extract_features_of(&table, Observable::Extinction, None)?;
            Ok((gm, report.central_window().map(|w| w.width)))
        })
        .collect()
}
