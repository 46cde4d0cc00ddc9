use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::grid::SweepGrid;
use crate::model::SystemConfig;
use crate::response::{self, DelayMode, ResponseError};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("sweep failed at delta = {delta:e} rad/s: {source}")]
pub struct SweepError {
    pub delta: f64,
    #[source]
    pub source: ResponseError,
}

/// One grid point. Delays are `None` where they are undefined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub delta: f64,
    pub lambda: f64,
    pub delta_over_omega_b: f64,
    pub absorption: f64,
    pub dispersion: f64,
    pub transmission: f64,
    pub phase: f64,
    pub tau_eq8: Option<f64>,
    pub tau_phase: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub config: SystemConfig,
    pub rows: Vec<SpectrumRow>,
}

/// Which column of a table to analyse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    Absorption,
    Dispersion,
    Transmission,
    /// `1 − |t_p|²`; its minima are transmission windows.
    Extinction,
    Phase,
}

impl SpectrumTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn abscissa(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.delta_over_omega_b).collect()
    }

    pub fn column(&self, which: Observable) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| match which {
                Observable::Absorption => r.absorption,
                Observable::Dispersion => r.dispersion,
                Observable::Transmission => r.transmission,
                Observable::Extinction => 1.0 - r.transmission,
                Observable::Phase => r.phase,
            })
            .collect()
    }

    /// `Arg t_p` along the sweep with 2π jumps removed.
    pub fn unwrapped_phase(&self) -> Vec<f64> {
        unwrap_phase(&self.column(Observable::Phase))
    }
}

/// Removes jumps larger than π by adding the minimal multiple of 2π.
pub fn unwrap_phase(phase: &[f64]) -> Vec<f64> {
    use std::f64::consts::TAU;
    let mut out = Vec::with_capacity(phase.len());
    let mut shift = 0.0;
    for (i, &p) in phase.iter().enumerate() {
        if i > 0 {
            let jump = p - phase[i - 1];
            shift -= TAU * (jump / TAU).round();
        }
        out.push(p + shift);
    }
    out
}

fn row(config: &SystemConfig, lambda: f64) -> Result<SpectrumRow, ResponseError> {
    let r = response::probe_response_at(config, lambda)?;
    let delay = |mode| match response::group_delay_at(config, lambda, mode) {
        Ok(t) => Ok(Some(t)),
        Err(ResponseError::DelayUndefined { .. }) => Ok(None),
        Err(e) => Err(e),
    };
    Ok(SpectrumRow {
        delta: config.omega_b + lambda,
        lambda,
        delta_over_omega_b: 1.0 + lambda / config.omega_b,
        absorption: r.absorption,
        dispersion: r.dispersion,
        transmission: r.transmission,
        phase: r.phase,
        tau_eq8: delay(DelayMode::OutputField)?,
        tau_phase: delay(DelayMode::TransmissionPhase)?,
    })
}

/// Evaluates every grid point (in parallel) and assembles rows in grid
/// order. The first failing point, in grid order, aborts the sweep.
pub fn sweep_spectrum(config: &SystemConfig, grid: &SweepGrid) -> Result<SpectrumTable, SweepError> {
    let results: Vec<Result<SpectrumRow, ResponseError>> = grid.lambdas().par_iter().map(|&l| row(config, l)).collect();
    let rows = results
        .into_iter()
        .zip(grid.lambdas())
        .map(|(r, &l)| {
            r.map_err(|source| SweepError {
                delta: config.omega_b + l,
                source,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SpectrumTable { config: *config, rows })
}
