use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::SystemConfig;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("grid needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("grid value at index {index} is not finite")]
    NonFinite { index: usize },
    #[error("grid is not strictly increasing at index {index}")]
    NotIncreasing { index: usize },
    #[error("invalid span [{lo}, {hi}] in units of omega_b")]
    InvalidSpan { lo: f64, hi: f64 },
    #[error("invalid refinement parameters: {0}")]
    InvalidRefinement(String),
}

/// How the grid was constructed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Refinement {
    Uniform,
    /// Refinement around `λ = 0`: spacing `min_spacing` out to `core`, then
    /// growing by `growth` per point out to `radius` (all rad/s).
    CenterRefined {
        min_spacing: f64,
        core: f64,
        radius: f64,
        growth: f64,
    },
}

/// Parameters that fully determine a grid for a given `ω_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Uniform backbone over `δ/ω_b ∈ [span_lo, span_hi]`.
    pub uniform_points: usize,
    pub span_lo: f64,
    pub span_hi: f64,
    pub refinement: Refinement,
}

pub const DEFAULT_UNIFORM_POINTS: usize = 2001;
/// Refinement radius in units of κ_b.
pub const REFINE_RADIUS_KB: f64 = 1e3;
/// Finest spacing in units of κ_b.
pub const REFINE_SPACING_KB: f64 = 0.2;
/// Half-width of the finest-spacing core in units of κ_b.
pub const REFINE_CORE_KB: f64 = 5.0;
pub const REFINE_GROWTH: f64 = 1.05;

impl GridSpec {
    pub fn uniform(points: usize, span_lo: f64, span_hi: f64) -> Self {
        GridSpec {
            uniform_points: points,
            span_lo,
            span_hi,
            refinement: Refinement::Uniform,
        }
    }

    /// Default sweep grid: 2001 uniform points over `δ/ω_b ∈ [0.5, 1.5]` plus
    /// geometric refinement inside `|λ| ≤ 10³ κ_b` down to `κ_b/5`.
    pub fn center_refined(config: &SystemConfig) -> Self {
        Self::center_refined_with(config, DEFAULT_UNIFORM_POINTS)
    }

    pub fn center_refined_with(config: &SystemConfig, uniform_points: usize) -> Self {
        let kb = config.rates.kappa_b;
        GridSpec {
            uniform_points,
            span_lo: 0.5,
            span_hi: 1.5,
            refinement: Refinement::CenterRefined {
                min_spacing: REFINE_SPACING_KB * kb,
                core: REFINE_CORE_KB * kb,
                radius: REFINE_RADIUS_KB * kb,
                growth: REFINE_GROWTH,
            },
        }
    }

    /// Same layout at twice the density.
    pub fn densified(&self) -> Self {
        let refinement = match self.refinement {
            Refinement::Uniform => Refinement::Uniform,
            Refinement::CenterRefined {
                min_spacing,
                core,
                radius,
                growth,
            } => Refinement::CenterRefined {
                min_spacing: 0.5 * min_spacing,
                core,
                radius,
                growth: growth.sqrt(),
            },
        };
        GridSpec {
            uniform_points: 2 * self.uniform_points - 1,
            refinement,
            ..*self
        }
    }

    /// Every rate-like length scaled by `factor` (span in `δ/ω_b` too,
    /// around the sideband).
    pub fn scaled(&self, factor: f64) -> Self {
        let refinement = match self.refinement {
            Refinement::Uniform => Refinement::Uniform,
            Refinement::CenterRefined {
                min_spacing,
                core,
                radius,
                growth,
            } => Refinement::CenterRefined {
                min_spacing: min_spacing * factor,
                core: core * factor,
                radius: radius * factor,
                growth,
            },
        };
        GridSpec {
            uniform_points: self.uniform_points,
            span_lo: 1.0 + (self.span_lo - 1.0) * factor,
            span_hi: 1.0 + (self.span_hi - 1.0) * factor,
            refinement,
        }
    }

    pub fn build(&self, omega_b: f64) -> Result<SweepGrid, GridError> {
        SweepGrid::from_spec(omega_b, self)
    }
}

/// Probe detunings of a sweep, stored as offsets `λ = δ − ω_b` from the
/// mechanical sideband so that mirror-symmetric grids are exactly symmetric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    omega_b: f64,
    lambdas: Vec<f64>,
    refinement: Refinement,
}

impl SweepGrid {
    /// Wraps explicit `λ` values; they must be finite and strictly increasing.
    pub fn from_lambdas(omega_b: f64, lambdas: Vec<f64>) -> Result<Self, GridError> {
        check_increasing(&lambdas)?;
        Ok(SweepGrid {
            omega_b,
            lambdas,
            refinement: Refinement::Uniform,
        })
    }

    /// Wraps explicit probe detunings δ (rad/s).
    pub fn from_deltas(omega_b: f64, deltas: &[f64]) -> Result<Self, GridError> {
        Self::from_lambdas(omega_b, deltas.iter().map(|d| d - omega_b).collect())
    }

    pub fn from_spec(omega_b: f64, spec: &GridSpec) -> Result<Self, GridError> {
        let (lo, hi) = (spec.span_lo, spec.span_hi);
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(GridError::InvalidSpan { lo, hi });
        }
        let mut lambdas = uniform_lambdas(omega_b, lo, hi, spec.uniform_points)?;
        if let Refinement::CenterRefined {
            min_spacing,
            core,
            radius,
            growth,
        } = spec.refinement
        {
            if !(min_spacing > 0.0
                && core >= 0.0
                && radius > min_spacing
                && radius >= core
                && growth >= 1.0
                && growth.is_finite())
            {
                return Err(GridError::InvalidRefinement(format!(
                    "min_spacing={min_spacing}, core={core}, radius={radius}, growth={growth}"
                )));
            }
            let mut half = vec![0.0];
            let mut step = min_spacing;
            let mut x = 0.0;
            let mut k = 0u32;
            while x + step < radius {
                // integer multiples inside the core keep it exactly uniform
                k += 1;
                x = if x < core { k as f64 * min_spacing } else { x + step };
                half.push(x);
                if x >= core {
                    step *= growth;
                }
            }
            let reach = x;
            let (lo_l, hi_l) = (lambdas[0], lambdas[lambdas.len() - 1]);
            lambdas.retain(|l| l.abs() > reach);
            lambdas.extend(half.iter().flat_map(|&p| [p, -p]).filter(|l| *l >= lo_l && *l <= hi_l));
            lambdas.sort_by(f64::total_cmp);
            lambdas.dedup();
        }
        check_increasing(&lambdas)?;
        Ok(SweepGrid {
            omega_b,
            lambdas,
            refinement: spec.refinement,
        })
    }

    pub fn omega_b(&self) -> f64 {
        self.omega_b
    }

    pub fn refinement(&self) -> Refinement {
        self.refinement
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn delta_values(&self) -> Vec<f64> {
        self.lambdas.iter().map(|l| self.omega_b + l).collect()
    }

    /// `δ/ω_b`, computed as `1 + λ/ω_b`.
    pub fn delta_over_omega_b(&self) -> Vec<f64> {
        self.lambdas.iter().map(|l| 1.0 + l / self.omega_b).collect()
    }
}

/// Symmetric-exact uniform spacing: `s_i = (2i − (n−1))/(n−1)` is exactly
/// antisymmetric under `i → n−1−i`.
fn uniform_lambdas(omega_b: f64, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, GridError> {
    if n < 2 {
        return Err(GridError::TooFewPoints(n));
    }
    let mid = 0.5 * (lo + hi) - 1.0;
    let half = 0.5 * (hi - lo);
    let denom = (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            let s = (2.0 * i as f64 - denom) / denom;
            omega_b * (mid + half * s)
        })
        .collect())
}

fn check_increasing(values: &[f64]) -> Result<(), GridError> {
    if values.len() < 2 {
        return Err(GridError::TooFewPoints(values.len()));
    }
    for (i, v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(GridError::NonFinite { index: i });
        }
        if i > 0 && values[i - 1] >= *v {
            return Err(GridError::NotIncreasing { index: i });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::default_config;

    #[test]
    fn uniform_is_exactly_symmetric() {
        let cfg = default_config();
        for n in [2, 3, 200, 201, 2001] {
            let g = GridSpec::uniform(n, 0.5, 1.5).build(cfg.omega_b).unwrap();
            let l = g.lambdas();
            for i in 0..n {
                assert_eq!(l[i], -l[n - 1 - i]);
            }
        }
    }

    #[test]
    fn refined_grid_resolves_mechanical_linewidth() {
        let cfg = default_config();
        let g = GridSpec::center_refined(&cfg).build(cfg.omega_b).unwrap();
        let l = g.lambdas();
        let n = l.len();
        for i in 0..n {
            assert_eq!(l[i], -l[n - 1 - i]);
        }
        let center = l.iter().position(|&x| x == 0.0).unwrap();
        let kb = cfg.rates.kappa_b;
        let near: Vec<f64> = l.iter().copied().filter(|x| x.abs() <= 5.0 * kb).collect();
        assert!(near.len() >= 50);
        for w in near.windows(2) {
            assert!(w[1] - w[0] <= kb / 5.0 * (1.0 + 1e-12));
        }
        assert_eq!(l[0], -0.5 * cfg.omega_b);
        assert_eq!(l[n - 1], 0.5 * cfg.omega_b);
        let d = g.delta_over_omega_b();
        assert_eq!(d[center], 1.0);
    }

    #[test]
    fn densified_has_finer_spacing() {
        let cfg = default_config();
        let spec = GridSpec::center_refined(&cfg);
        let a = spec.build(cfg.omega_b).unwrap();
        let b = spec.densified().build(cfg.omega_b).unwrap();
        assert!(b.len() > 2 * a.len() - 10);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(matches!(
            SweepGrid::from_lambdas(1.0, vec![0.0, 1.0, 1.0]),
            Err(GridError::NotIncreasing { index: 2 })
        ));
        assert!(matches!(
            SweepGrid::from_lambdas(1.0, vec![0.0, f64::NAN]),
            Err(GridError::NonFinite { index: 1 })
        ));
        assert!(matches!(
            GridSpec::uniform(1, 0.5, 1.5).build(1.0),
            Err(GridError::TooFewPoints(1))
        ));
        assert!(matches!(
            GridSpec::uniform(10, 1.5, 0.5).build(1.0),
            Err(GridError::InvalidSpan { .. })
        ));
    }
}
