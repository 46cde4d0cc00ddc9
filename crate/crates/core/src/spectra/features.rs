//! Transparency-window detection on a sampled spectrum.
//!
//! A window is a local minimum whose prominence (depth below the lower of
//! its two flanking maxima) exceeds a threshold. Widths are measured at
//! half that depth, by linear interpolation between samples.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::sweep::{Observable, SpectrumTable};

/// Default threshold as a fraction of the global maximum.
pub const DEFAULT_RELATIVE_PROMINENCE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum FeatureError {
    #[error("prominence must be positive and finite, got {0}")]
    InvalidProminence(f64),
    #[error("abscissa and signal lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    /// Center in units of `δ/ω_b`.
    pub center: f64,
    /// Full width at half depth, in units of `δ/ω_b`.
    pub width: f64,
    /// Signal value at the bottom of the window.
    pub floor: f64,
    pub prominence: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub center: f64,
    pub height: f64,
    pub prominence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureReport {
    pub observable: Observable,
    pub prominence_threshold: f64,
    pub windows: Vec<Window>,
    pub peaks: Vec<Peak>,
    pub window_count: usize,
}

impl FeatureReport {
    /// Window whose center is closest to `δ/ω_b = 1` (lower one on ties).
    pub fn central_window(&self) -> Option<&Window> {
        self.windows
            .iter()
            .min_by(|a, b| (a.center - 1.0).abs().total_cmp(&(b.center - 1.0).abs()))
    }
}

/// Absorption windows with the given absolute prominence, or
/// `0.1 × max absorption` when `None`.
pub fn extract_features(table: &SpectrumTable, prominence: Option<f64>) -> Result<FeatureReport, FeatureError> {
    extract_features_of(table, Observable::Absorption, prominence)
}

pub fn extract_features_of(
    table: &SpectrumTable,
    observable: Observable,
    prominence: Option<f64>,
) -> Result<FeatureReport, FeatureError> {
    let report = find_features(&table.abscissa(), &table.column(observable), prominence)?;
    Ok(FeatureReport { observable, ..report })
}

/// Feature search on raw samples.
pub fn find_features(x: &[f64], y: &[f64], prominence: Option<f64>) -> Result<FeatureReport, FeatureError> {
    if x.len() != y.len() {
        return Err(FeatureError::LengthMismatch(x.len(), y.len()));
    }
    let max = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let threshold = match prominence {
        Some(p) => p,
        None => DEFAULT_RELATIVE_PROMINENCE * max,
    };
    if !(threshold.is_finite() && threshold > 0.0) {
        if prominence.is_some() {
            return Err(FeatureError::InvalidProminence(threshold));
        }
        // empty or nonpositive signal under the default threshold
        return Ok(empty(threshold));
    }

    let neg: Vec<f64> = y.iter().map(|v| -v).collect();
    let mut windows = Vec::new();
    for i in local_maxima(&neg) {
        let (prom, left_base, right_base) = prominence_of(&neg, i);
        if prom > threshold {
            let level = y[i] + 0.5 * prom;
            let left = crossing(x, y, i, left_base, level);
            let right = crossing(x, y, i, right_base, level);
            windows.push(Window {
                center: x[i],
                width: right - left,
                floor: y[i],
                prominence: prom,
            });
        }
    }
    let mut peaks = Vec::new();
    for i in local_maxima(y) {
        let (prom, _, _) = prominence_of(y, i);
        if prom > threshold {
            peaks.push(Peak {
                center: x[i],
                height: y[i],
                prominence: prom,
            });
        }
    }
    Ok(FeatureReport {
        observable: Observable::Absorption,
        prominence_threshold: threshold,
        window_count: windows.len(),
        windows,
        peaks,
    })
}

fn empty(threshold: f64) -> FeatureReport {
    FeatureReport {
        observable: Observable::Absorption,
        prominence_threshold: threshold,
        windows: Vec::new(),
        peaks: Vec::new(),
        window_count: 0,
    }
}

/// Interior local maxima; a flat top counts once, at its middle sample.
fn local_maxima(y: &[f64]) -> Vec<usize> {
    let n = y.len();
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    let mut i = 1;
    while i < n - 1 {
        if y[i - 1] < y[i] {
            let mut ahead = i + 1;
            while ahead < n - 1 && y[ahead] == y[i] {
                ahead += 1;
            }
            if y[ahead] < y[i] {
                out.push((i + ahead - 1) / 2);
                i = ahead;
                continue;
            }
        }
        i += 1;
    }
    out
}

/// Prominence of the maximum at `peak`, with the index of the lowest point
/// on each side before the signal rises above the peak again.
fn prominence_of(y: &[f64], peak: usize) -> (f64, usize, usize) {
    let h = y[peak];
    let mut left_base = peak;
    let mut left_min = h;
    for i in (0..peak).rev() {
        if y[i] > h {
            break;
        }
        if y[i] < left_min {
            left_min = y[i];
            left_base = i;
        }
    }
    let mut right_base = peak;
    let mut right_min = h;
    for (i, &v) in y.iter().enumerate().skip(peak + 1) {
        if v > h {
            break;
        }
        if v < right_min {
            right_min = v;
            right_base = i;
        }
    }
    (h - left_min.max(right_min), left_base, right_base)
}

/// Abscissa where `y` first reaches `level` walking from `from` toward
/// `base`, linearly interpolated.
fn crossing(x: &[f64], y: &[f64], from: usize, base: usize, level: f64) -> f64 {
    let step: isize = if base < from { -1 } else { 1 };
    let mut i = from as isize;
    while i != base as isize {
        let next = i + step;
        let (yi, yn) = (y[i as usize], y[next as usize]);
        if yn >= level {
            let t = if yn == yi { 0.0 } else { (level - yi) / (yn - yi) };
            return x[i as usize] + t * (x[next as usize] - x[i as usize]);
        }
        i = next;
    }
    x[base]
}
