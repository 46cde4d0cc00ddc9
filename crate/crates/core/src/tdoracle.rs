//! Time-domain check of the sideband solution.
//!
//! Integrates the damped, noise-free linearized dynamics
//! `ẋ = A x + v e^{iλt}` with fixed-step RK4, then demodulates the trailing
//! part of the trajectory at `λ` to recover the steady oscillation
//! amplitudes. Since `iλI − A` equals the paper-orientation sideband matrix
//! (up to sign), the demodulated vector is compared with the frequency-domain
//! solution at `λ` (paper convention) or `−λ` (standard convention).

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, Mat4, Vec4, ZERO4};
use crate::model::{hz_to_rad, SignConvention, SystemConfig};
use crate::response::{self, Mode, ResponseError, SidebandAmplitudes};

/// Mechanical damping used for oracle runs, `κ_b/2π` in Hz.
pub const DESK_KAPPA_B_HZ: f64 = 1e5;
/// Default relative agreement between oracle and linear solve.
pub const ORACLE_TOLERANCE: f64 = 1e-3;
/// Growth factor (relative to `‖v‖/κ_min`) that flags an unstable run.
pub const INSTABILITY_FACTOR: f64 = 1e6;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("integration spec violates its invariants: {0}")]
    InvalidSpec(String),
    #[error("unstable integration: |x| = {norm:e} at t = {t:e} s exceeds {limit:e}")]
    Unstable { t: f64, norm: f64, limit: f64 },
    #[error("demodulation window of {needed} samples exceeds the {available} recorded")]
    WindowTooLong { needed: usize, available: usize },
    #[error(transparent)]
    Response(#[from] ResponseError),
}

/// Raises `κ_b` to the desk-scale value so transients die within a few
/// thousand oscillation periods.
pub fn desk_scale(config: &SystemConfig) -> SystemConfig {
    let mut c = *config;
    c.rates.kappa_b = hz_to_rad(DESK_KAPPA_B_HZ);
    c
}

/// Damped drift matrix: diagonal `−(κ_o + i·offset_o)`, couplings with the
/// signs of the linearized Langevin equations.
pub fn drift_matrix(config: &SystemConfig) -> Mat4 {
    let mut a = couplings(config);
    let kappa = config.rates.as_array();
    let offset = config.offsets.as_array();
    for o in 0..4 {
        a[o][o] = -Complex64::new(kappa[o], offset[o]);
    }
    a
}

/// The anti-damped orientation (`Re diag = +κ`); it has no steady
/// state and only exists to exercise the instability guard.
pub fn anti_damped_drift_matrix(config: &SystemConfig) -> Mat4 {
    let mut a = drift_matrix(config);
    for (o, row) in a.iter_mut().enumerate() {
        row[o] = Complex64::new(-row[o].re, row[o].im);
    }
    a
}

fn couplings(config: &SystemConfig) -> Mat4 {
    let (at, c, m, b) = (
        Mode::Atom as usize,
        Mode::Cavity as usize,
        Mode::Magnon as usize,
        Mode::Phonon as usize,
    );
    let g = config.couplings;
    let mut k = linalg::zeros();
    k[at][c] = -I * g.g_a;
    k[c][at] = -I * g.g_a;
    k[c][b] = I * g.g_c;
    k[b][c] = I * g.g_c;
    k[m][b] = -I * g.g_m;
    k[b][m] = -I * g.g_m;
    k
}

/// Probe drive vector `(0, ε_p, 0, 0)`.
pub fn drive_vector(config: &SystemConfig) -> Vec4 {
    let mut v = ZERO4;
    v[Mode::Cavity as usize] = Complex64::new(config.probe_amplitude, 0.0);
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationSpec {
    /// RK4 step (s).
    pub dt: f64,
    pub t_end: f64,
    /// Trailing demodulation window (s).
    pub demod_window: f64,
    pub initial_state: Vec4,
    /// Samples before this time are not stored.
    pub record_start: f64,
    /// Store every `sample_stride`-th step.
    pub sample_stride: usize,
}

fn fastest_scale(config: &SystemConfig, lambda: f64) -> f64 {
    let off = config.offsets;
    lambda
        .abs()
        .max(config.rates.max())
        .max(config.couplings.max())
        .max(off.atom.abs())
        .max(off.cavity.abs())
        .max(off.magnon.abs())
}

fn minimum_window(config: &SystemConfig, lambda: f64) -> f64 {
    let kmin = config.rates.min();
    if lambda == 0.0 {
        20.0 / kmin
    } else {
        20.0 * TAU / lambda.abs().max(kmin)
    }
}

const TARGET_SAMPLES: f64 = 20_000.0;

impl IntegrationSpec {
    /// Smallest spec satisfying the invariants: `dt = 1/(50·fastest scale)`,
    /// the minimum window, and `t_end = 10/κ_min + 2·window` so that the
    /// last two windows both lie past the transient.
    pub fn recommended(config: &SystemConfig, lambda: f64) -> Self {
        let dt = 1.0 / (50.0 * fastest_scale(config, lambda));
        let window = minimum_window(config, lambda);
        let t_end = 10.0 / config.rates.min() + 2.0 * window;
        let steps_recorded = 2.0 * window / dt;
        let sample_stride = (steps_recorded / TARGET_SAMPLES).floor().max(1.0) as usize;
        // one spare stride on each window absorbs rounding of the sample count
        let record_start = (t_end - 2.0 * (window + sample_stride as f64 * dt)).max(0.0);
        IntegrationSpec {
            dt,
            t_end,
            demod_window: window,
            initial_state: ZERO4,
            record_start,
            sample_stride,
        }
    }

    pub fn check(&self, config: &SystemConfig, lambda: f64) -> Result<(), OracleError> {
        let fail = |m: String| Err(OracleError::InvalidSpec(m));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return fail(format!("dt must be positive, got {}", self.dt));
        }
        if self.sample_stride == 0 {
            return fail("sample_stride must be at least 1".into());
        }
        let kmin = config.rates.min();
        let need_end = 10.0 / kmin + self.demod_window;
        if self.t_end < need_end {
            return fail(format!(
                "t_end {:e} s below 10/kappa_min + window = {:e} s",
                self.t_end, need_end
            ));
        }
        let need_window = minimum_window(config, lambda);
        if self.demod_window < need_window * (1.0 - 1e-12) {
            return fail(format!(
                "demodulation window {:e} s shorter than {:e} s",
                self.demod_window, need_window
            ));
        }
        let max_dt = 1.0 / (50.0 * fastest_scale(config, lambda));
        if self.dt > max_dt * (1.0 + 1e-12) {
            return fail(format!(
                "dt {:e} s exceeds 1/(50 * fastest rate) = {:e} s",
                self.dt, max_dt
            ));
        }
        Ok(())
    }
}

/// Uniformly sampled trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub t0: f64,
    pub dt: f64,
    pub samples: Vec<Vec4>,
}

impl TimeSeries {
    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn duration(&self) -> f64 {
        self.dt * self.samples.len().saturating_sub(1) as f64
    }
}

/// Fixed-step RK4 for `ẋ = A x + v e^{iλt}` from `t = 0`. Aborts when
/// `‖x‖` exceeds `growth_limit`. The step is shrunk so that `t_end` is hit
/// exactly.
pub fn integrate_linear(
    drift: &Mat4,
    drive: &Vec4,
    lambda: f64,
    spec: &IntegrationSpec,
    growth_limit: f64,
) -> Result<TimeSeries, OracleError> {
    let steps = (spec.t_end / spec.dt).ceil().max(1.0) as usize;
    let h = spec.t_end / steps as f64;
    let stride = spec.sample_stride.max(1);
    // round the recorded span up to whole strides, never before t = 0
    let first = ((spec.record_start.max(0.0) / h).floor() as usize).min(steps);
    let first = steps.saturating_sub(stride * (steps - first).div_ceil(stride));

    let rhs = |t: f64, x: &Vec4| -> Vec4 {
        let mut out = linalg::mat_vec(drift, x);
        let phase = Complex64::from_polar(1.0, lambda * t);
        for (o, v) in out.iter_mut().zip(drive) {
            *o += v * phase;
        }
        out
    };
    let axpy = |x: &Vec4, a: f64, k: &Vec4| -> Vec4 { std::array::from_fn(|i| x[i] + k[i] * a) };

    let mut x = spec.initial_state;
    let mut samples = Vec::with_capacity((steps - first) / stride + 1);
    if first == 0 {
        samples.push(x);
    }
    for n in 0..steps {
        let t = n as f64 * h;
        let k1 = rhs(t, &x);
        let k2 = rhs(t + 0.5 * h, &axpy(&x, 0.5 * h, &k1));
        let k3 = rhs(t + 0.5 * h, &axpy(&x, 0.5 * h, &k2));
        let k4 = rhs(t + h, &axpy(&x, h, &k3));
        for i in 0..4 {
            x[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0);
        }
        let norm = linalg::norm(&x);
        if norm.is_nan() || norm > growth_limit {
            return Err(OracleError::Unstable {
                t: t + h,
                norm,
                limit: growth_limit,
            });
        }
        let k = n + 1;
        if k >= first && (k - first) % stride == 0 {
            samples.push(x);
        }
    }
    Ok(TimeSeries {
        t0: first as f64 * h,
        dt: h * stride as f64,
        samples,
    })
}

fn growth_limit(config: &SystemConfig) -> f64 {
    INSTABILITY_FACTOR * linalg::norm(&drive_vector(config)) / config.rates.min()
}

/// Integrates the damped dynamics of `config` driven at `λ`.
pub fn integrate(config: &SystemConfig, lambda: f64, spec: &IntegrationSpec) -> Result<TimeSeries, OracleError> {
    spec.check(config, lambda)?;
    integrate_linear(
        &drift_matrix(config),
        &drive_vector(config),
        lambda,
        spec,
        growth_limit(config),
    )
}

/// As [`integrate`] with an explicit drift matrix (same drive and guard).
pub fn integrate_with_drift(
    config: &SystemConfig,
    drift: &Mat4,
    lambda: f64,
    spec: &IntegrationSpec,
) -> Result<TimeSeries, OracleError> {
    spec.check(config, lambda)?;
    integrate_linear(drift, &drive_vector(config), lambda, spec, growth_limit(config))
}

fn demodulate_range(series: &TimeSeries, lambda: f64, start: usize, end: usize) -> Vec4 {
    let mut acc = ZERO4;
    for k in start..=end {
        let w = if k == start || k == end { 0.5 } else { 1.0 };
        let rot = Complex64::from_polar(w, -lambda * series.time(k));
        for (a, x) in acc.iter_mut().zip(&series.samples[k]) {
            *a += x * rot;
        }
    }
    let span = (end - start) as f64;
    linalg::scale(&acc, Complex64::new(1.0 / span, 0.0))
}

fn window_samples(series: &TimeSeries, window: f64) -> Result<usize, OracleError> {
    let n = (window / series.dt).round().max(1.0) as usize;
    if n + 1 > series.samples.len() {
        return Err(OracleError::WindowTooLong {
            needed: n + 1,
            available: series.samples.len(),
        });
    }
    Ok(n)
}

/// `(1/T) ∫ x(t) e^{−iλt} dt` over the trailing `window`, trapezoidal rule.
pub fn demodulate(series: &TimeSeries, lambda: f64, window: f64) -> Result<Vec4, OracleError> {
    let n = window_samples(series, window)?;
    let end = series.samples.len() - 1;
    Ok(demodulate_range(series, lambda, end - n, end))
}

/// Frequency-domain amplitudes that the oracle at `λ` should reproduce.
pub fn mapped_reference(config: &SystemConfig, lambda: f64) -> Result<SidebandAmplitudes, ResponseError> {
    match config.convention {
        SignConvention::Paper => response::solve_sidebands(config, lambda),
        SignConvention::Standard => response::solve_sidebands(config, -lambda),
    }
}

/// `‖(iλI − A)x − v‖ / ‖v‖`.
pub fn steady_state_residual(config: &SystemConfig, lambda: f64, x: &Vec4) -> f64 {
    let mut m = drift_matrix(config);
    for row in m.iter_mut() {
        for e in row.iter_mut() {
            *e = -*e;
        }
    }
    for (o, row) in m.iter_mut().enumerate() {
        row[o] += I * lambda;
    }
    let v = drive_vector(config);
    linalg::norm(&linalg::sub(&linalg::mat_vec(&m, x), &v)) / linalg::norm(&v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub lambda: f64,
    pub amplitudes: SidebandAmplitudes,
    pub reference: SidebandAmplitudes,
    /// Relative change between the last two demodulation windows.
    pub transient_estimate: f64,
    /// `‖x_oracle − x_ref‖ / ‖x_ref‖`.
    pub relative_error: f64,
    pub tolerance: f64,
    pub converged: bool,
    pub agrees: bool,
}

/// Runs the oracle at one `λ`.
pub fn oracle_point(
    config: &SystemConfig,
    lambda: f64,
    spec: &IntegrationSpec,
    tolerance: f64,
) -> Result<OracleResult, OracleError> {
    let series = integrate(config, lambda, spec)?;
    let n = window_samples(&series, spec.demod_window)?;
    let end = series.samples.len() - 1;
    let last = demodulate_range(&series, lambda, end - n, end);
    let previous = if end >= 2 * n {
        demodulate_range(&series, lambda, end - 2 * n, end - n)
    } else {
        // record too short for two windows: report no convergence evidence
        [Complex64::new(f64::INFINITY, 0.0); 4]
    };
    let scale = linalg::norm(&last);
    let transient_estimate = if scale > 0.0 {
        linalg::norm(&linalg::sub(&last, &previous)) / scale
    } else if linalg::norm(&previous) == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    let reference = mapped_reference(config, lambda)?;
    let ref_vec = reference.to_vec4();
    let ref_norm = linalg::norm(&ref_vec);
    let diff = linalg::norm(&linalg::sub(&last, &ref_vec));
    let relative_error = if ref_norm > 0.0 {
        diff / ref_norm
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    let converged = transient_estimate < tolerance;
    Ok(OracleResult {
        lambda,
        amplitudes: SidebandAmplitudes::from_vec4(last),
        reference,
        transient_estimate,
        relative_error,
        tolerance,
        converged,
        agrees: converged && relative_error < tolerance,
    })
}

/// Oracle at every `λ` (concurrently), each with `spec` or the
/// [`IntegrationSpec::recommended`] spec for that point.
pub fn cross_check(
    config: &SystemConfig,
    lambdas: &[f64],
    spec: Option<IntegrationSpec>,
    tolerance: f64,
) -> Result<Vec<OracleResult>, OracleError> {
    lambdas
        .par_iter()
        .map(|&l| {
            let s = spec.unwrap_or_else(|| IntegrationSpec::recommended(config, l));
            oracle_point(config, l, &s, tolerance)
        })
        .collect()
}

/// Errors of RK4 against the exact bare-cavity charging curve
/// `c(t) = (ε_p/κ_c)(1 − e^{−κ_c t})` for a sequence of halved steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub steps: Vec<f64>,
    pub errors: Vec<f64>,
    /// `log₂(e_k / e_{k+1})` for consecutive steps.
    pub orders: Vec<f64>,
}

pub fn bare_cavity_convergence(config: &SystemConfig) -> Result<ConvergenceReport, OracleError> {
    let mut bare = *config;
    bare.couplings = crate::model::Couplings::NONE;
    bare.offsets = crate::model::DetuningOffsets::ZERO;
    let kappa = bare.rates.kappa_c;
    let eps = bare.probe_amplitude;
    let t_end = 5.0 / kappa;
    let drift = drift_matrix(&bare);
    let drive = drive_vector(&bare);
    let steps: Vec<f64> = [0.2, 0.1, 0.05, 0.025].iter().map(|s| s / kappa).collect();
    let mut errors = Vec::with_capacity(steps.len());
    for &dt in &steps {
        let spec = IntegrationSpec {
            dt,
            t_end,
            demod_window: t_end,
            initial_state: ZERO4,
            record_start: 0.0,
            sample_stride: 1,
        };
        let series = integrate_linear(&drift, &drive, 0.0, &spec, f64::INFINITY)?;
        let err = series
            .samples
            .iter()
            .enumerate()
            .map(|(k, x)| {
                let t = series.time(k);
                let exact = eps / kappa * (1.0 - (-kappa * t).exp());
                (x[Mode::Cavity as usize] - exact).norm()
            })
            .fold(0.0, f64::max);
        errors.push(err);
    }
    let orders = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    Ok(ConvergenceReport { steps, errors, orders })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{default_config, Couplings};

    fn fig3d_desk() -> SystemConfig {
        desk_scale(&default_config().with_couplings(Couplings::from_hz(8e6, 8e6, 8e6)))
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn uncoupled_drift_is_pure_decay() {
        let cfg = default_config();
        let a = drift_matrix(&cfg);
        let k = cfg.rates.as_array();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { -k[i] } else { 0.0 };
                assert_eq!(a[i][j], Complex64::new(expected, 0.0));
            }
        }
    }

    #[test]
    fn drift_relates_to_sideband_matrix() {
        let mut cfg = fig3d_desk();
        cfg.offsets.atom = 1.5e5;
        cfg.offsets.magnon = -4.0e4;
        let a = drift_matrix(&cfg);
        for lambda in [-3.0e6, 0.0, 7.7e5] {
            // paper orientation: M(λ) = −(iλI − A)
            let p = response::sideband_matrix(&cfg.with_convention(SignConvention::Paper), lambda)
                .unwrap()
                .matrix;
            // standard orientation: M(λ) = (−iλ)I − A
            let s = response::sideband_matrix(&cfg, lambda).unwrap().matrix;
            for i in 0..4 {
                for j in 0..4 {
                    let il = if i == j { I * lambda } else { Complex64::new(0.0, 0.0) };
                    assert_eq!(p[i][j], -(il - a[i][j]));
                    assert_eq!(s[i][j], -il - a[i][j]);
                }
            }
        }
    }

    #[test]
    fn null_dynamics() {
        let cfg = fig3d_desk().with_probe_amplitude(0.0);
        let spec = IntegrationSpec::recommended(&cfg, 1.0e6);
        let s = integrate(&cfg, 1.0e6, &spec).unwrap();
        assert!(s.samples.iter().all(|x| *x == ZERO4));
    }

    #[test]
    fn bare_cavity_charging() {
        let cfg = default_config();
        let k = cfg.rates.kappa_c;
        let spec = IntegrationSpec {
            dt: 0.01 / k,
            t_end: 8.0 / k,
            demod_window: 1.0 / k,
            initial_state: ZERO4,
            record_start: 0.0,
            sample_stride: 1,
        };
        let s = integrate_linear(&drift_matrix(&cfg), &drive_vector(&cfg), 0.0, &spec, f64::INFINITY).unwrap();
        for (n, x) in s.samples.iter().enumerate() {
            let exact = (1.0 - (-k * s.time(n)).exp()) / k;
            assert!((x[1].re - exact).abs() < 1e-9 / k);
            assert_eq!(x[1].im, 0.0);
        }
    }

    #[test]
    fn rk4_is_fourth_order() {
        let r = bare_cavity_convergence(&default_config()).unwrap();
        for p in &r.orders {
            assert!((p - 4.0).abs() < 0.15, "{:?}", r);
        }
    }

    #[test]
    fn demodulate_constant_and_tone() {
        let x0 = [
            Complex64::new(1.0, 2.0),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.0, 3.0),
            Complex64::new(4.0, -4.0),
        ];
        let series = TimeSeries {
            t0: 0.0,
            dt: 1e-3,
            samples: vec![x0; 1001],
        };
        assert_eq!(demodulate(&series, 0.0, 1.0).unwrap(), x0);

        let lambda = 2.0 * TAU * 7.3;
        let tone = TimeSeries {
            t0: 0.25,
            dt: 1e-4,
            samples: (0..30001)
                .map(|k| {
                    let t = 0.25 + k as f64 * 1e-4;
                    linalg::scale(&x0, Complex64::from_polar(1.0, lambda * t))
                })
                .collect(),
        };
        let got = demodulate(&tone, lambda, 2.5).unwrap();
        assert!(linalg::norm(&linalg::sub(&got, &x0)) < 1e-12);
        assert!(matches!(
            demodulate(&tone, lambda, 10.0),
            Err(OracleError::WindowTooLong { .. })
        ));
    }

    #[test]
    fn bare_cavity_oracle_at_linewidth() {
        let cfg = default_config();
        let k = cfg.rates.kappa_c;
        let spec = IntegrationSpec::recommended(&cfg, k);
        let r = oracle_point(&cfg, k, &spec, ORACLE_TOLERANCE).unwrap();
        let expected = Complex64::new(1.0, 0.0) / Complex64::new(k, k);
        assert!((r.amplitudes.c_plus - expected).norm() < 1e-3 * expected.norm());
        assert!(r.agrees, "{r:?}");
    }

    #[test]
    fn bare_cavity_dc_is_tight() {
        let cfg = desk_scale(&default_config());
        let r = cross_check(&cfg, &[0.0], None, ORACLE_TOLERANCE).unwrap();
        assert!(r[0].relative_error < 1e-6, "{:?}", r[0]);
    }

    #[test]
    fn coupled_oracle_agrees() {
        let cfg = fig3d_desk();
        let kc = cfg.rates.kappa_c;
        for conv in [SignConvention::Standard, SignConvention::Paper] {
            let cfg = cfg.with_convention(conv);
            let res = cross_check(&cfg, &[-kc, 0.0, 5.0 * kc], None, ORACLE_TOLERANCE).unwrap();
            for r in res {
                assert!(r.agrees, "{r:?}");
                let resid = steady_state_residual(&cfg, r.lambda, &r.amplitudes.to_vec4());
                assert!(resid < 1e-3, "{resid}");
            }
        }
    }

    #[test]
    fn anti_damped_orientation_blows_up() {
        let cfg = fig3d_desk();
        let spec = IntegrationSpec::recommended(&cfg, 0.0);
        let err = integrate_with_drift(&cfg, &anti_damped_drift_matrix(&cfg), 0.0, &spec).unwrap_err();
        assert!(matches!(err, OracleError::Unstable { .. }), "{err}");
    }

    #[test]
    fn homogeneous_part_decays_monotonically() {
        // Difference of two trajectories obeys ẏ = A y; its norm never grows.
        let cfg = fig3d_desk();
        let mut spec = IntegrationSpec::recommended(&cfg, 0.0);
        spec.t_end = 20.0 / cfg.rates.min();
        spec.record_start = 0.0;
        spec.sample_stride = 50;
        spec.initial_state = [Complex64::new(1.0, 0.5); 4];
        let y = integrate_linear(&drift_matrix(&cfg), &ZERO4, 0.0, &spec, f64::INFINITY).unwrap();
        let norms: Vec<f64> = y.samples.iter().map(linalg::norm).collect();
        assert!(norms.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
        assert!(norms.last().unwrap() < &(norms[0] * 1e-3));
    }

    #[test]
    fn spec_invariants_enforced() {
        let cfg = fig3d_desk();
        let mut spec = IntegrationSpec::recommended(&cfg, 1.0e6);
        assert!(spec.check(&cfg, 1.0e6).is_ok());
        spec.dt *= 2.0;
        assert!(matches!(spec.check(&cfg, 1.0e6), Err(OracleError::InvalidSpec(_))));
        let mut spec = IntegrationSpec::recommended(&cfg, 1.0e6);
        spec.t_end = 1.0 / cfg.rates.min();
        assert!(spec.check(&cfg, 1.0e6).is_err());
        let mut spec = IntegrationSpec::recommended(&cfg, 1.0e6);
        spec.demod_window *= 0.5;
        assert!(spec.check(&cfg, 1.0e6).is_err());
    }
}
