//! Steady-state sideband amplitudes and probe observables at one detuning.
//!
//! Unknowns are ordered `(a₊, c₊, m₊, b₊)`: atomic polarization, cavity,
//! magnon, phonon. The chain is a–c–b–m: the cavity talks to the atoms
//! and to the phonon, the phonon talks to the magnon.
//!
//! Under [`SignConvention::Standard`] the system reads
//!
//! ```text
//! (κ_a − iλ_a) a₊ + i g_a c₊                      = 0
//! (κ_c − iλ_c) c₊ + i g_a a₊ − i g_c b₊           = ε_p
//! (κ_m − iλ_m) m₊ + i g_m b₊                      = 0
//! (κ_b − iλ)   b₊ − i g_c c₊ + i g_m m₊           = 0
//! ```
//!
//! with `λ = δ − ω_b` and `λ_o = λ − offset_o`. The paper orientation is
//! `M_paper(λ) = −M_standard(−λ)` with drive `−ε_p`, so its solution is the
//! standard one mirrored in `λ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, LinalgError, Mat4, Vec4};
use crate::model::{SignConvention, SystemConfig};

/// Index of each mode in [`Vec4`] / [`Mat4`] storage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Atom = 0,
    Cavity = 1,
    Magnon = 2,
    Phonon = 3,
}

/// Magnitude below which ε_out (or t_p) is treated as zero for delays.
pub const DELAY_GUARD: f64 = 1e-30;

/// Relative agreement demanded between the closed form and the solve.
pub const CLOSED_FORM_TOLERANCE: f64 = 1e-10;
/// Finite-difference step in units of the smallest decay rate.
pub const FD_STEP_FRACTION: f64 = 1e-3;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ResponseError {
    #[error("detuning is not finite ({0})")]
    NonFiniteDetuning(f64),
    #[error("sideband system is singular: {0}")]
    Singular(#[from] LinalgError),
    #[error("closed form requires zero detuning offsets; use the linear solve")]
    OffsetsUnsupported,
    #[error("probe amplitude must be positive and finite, got {0}")]
    InvalidProbeAmplitude(f64),
    #[error("group delay undefined: response magnitude {magnitude:e} below {DELAY_GUARD:e}")]
    DelayUndefined { magnitude: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SidebandAmplitudes {
    pub a_plus: Complex64,
    pub c_plus: Complex64,
    pub m_plus: Complex64,
    pub b_plus: Complex64,
}

impl SidebandAmplitudes {
    pub fn from_vec4(x: Vec4) -> Self {
        SidebandAmplitudes {
            a_plus: x[Mode::Atom as usize],
            c_plus: x[Mode::Cavity as usize],
            m_plus: x[Mode::Magnon as usize],
            b_plus: x[Mode::Phonon as usize],
        }
    }

    pub fn to_vec4(&self) -> Vec4 {
        [self.a_plus, self.c_plus, self.m_plus, self.b_plus]
    }
}

/// `M·x = v` for the sideband amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SidebandSystem {
    pub matrix: Mat4,
    pub drive: Vec4,
}

fn check_lambda(lambda: f64) -> Result<(), ResponseError> {
    if lambda.is_finite() {
        Ok(())
    } else {
        Err(ResponseError::NonFiniteDetuning(lambda))
    }
}

/// Coupling block shared by both orientations (sign flipped for `paper`).
fn coupling_block(config: &SystemConfig) -> Mat4 {
    let (a, c, m, b) = (
        Mode::Atom as usize,
        Mode::Cavity as usize,
        Mode::Magnon as usize,
        Mode::Phonon as usize,
    );
    let g = config.couplings;
    let mut k = linalg::zeros();
    k[a][c] = I * g.g_a;
    k[c][a] = I * g.g_a;
    k[c][b] = -I * g.g_c;
    k[b][c] = -I * g.g_c;
    k[m][b] = I * g.g_m;
    k[b][m] = I * g.g_m;
    k
}

fn standard_matrix(config: &SystemConfig, lambda: f64) -> Mat4 {
    let mut m = coupling_block(config);
    let kappa = config.rates.as_array();
    let offset = config.offsets.as_array();
    for o in 0..4 {
        m[o][o] = Complex64::new(kappa[o], -(lambda - offset[o]));
    }
    m
}

/// Builds the sideband system at `λ = δ − ω_b`.
pub fn sideband_matrix(config: &SystemConfig, lambda: f64) -> Result<SidebandSystem, ResponseError> {
    check_lambda(lambda)?;
    let eps = Complex64::new(config.probe_amplitude, 0.0);
    let mut drive = linalg::ZERO4;
    Ok(match config.convention {
        SignConvention::Standard => {
            drive[Mode::Cavity as usize] = eps;
            SidebandSystem {
                matrix: standard_matrix(config, lambda),
                drive,
            }
        }
        SignConvention::Paper => {
            drive[Mode::Cavity as usize] = -eps;
            let mut matrix = standard_matrix(config, -lambda);
            for row in matrix.iter_mut() {
                for e in row.iter_mut() {
                    *e = -*e;
                }
            }
            SidebandSystem { matrix, drive }
        }
    })
}

/// Exact solution of the sideband system by pivoted elimination.
pub fn solve_sidebands(config: &SystemConfig, lambda: f64) -> Result<SidebandAmplitudes, ResponseError> {
    let sys = sideband_matrix(config, lambda)?;
    let x = linalg::solve(&sys.matrix, &sys.drive)?;
    Ok(SidebandAmplitudes::from_vec4(x))
}

/// Inverse cavity response `F(λ) = ε_p / c₊` and its λ-derivative, by the
/// continued fraction
/// `F = z_c + g_a²/z_a + g_c²/(z_b + g_m²/z_m)` with `z_o = κ_o − iλ_o`.
///
/// Valid for any offsets; the public closed form restricts itself to the
/// zero-offset regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct InverseResponse {
    pub value: Complex64,
    pub derivative: Complex64,
}

pub(crate) fn inverse_response(config: &SystemConfig, lambda: f64) -> InverseResponse {
    let (l, sign) = match config.convention {
        SignConvention::Standard => (lambda, 1.0),
        SignConvention::Paper => (-lambda, -1.0),
    };
    let r = config.rates;
    let g = config.couplings;
    let off = config.offsets;
    let z_a = Complex64::new(r.kappa_a, -(l - off.atom));
    let z_c = Complex64::new(r.kappa_c, -(l - off.cavity));
    let z_m = Complex64::new(r.kappa_m, -(l - off.magnon));
    let z_b = Complex64::new(r.kappa_b, -l);

    let ga2 = g.g_a * g.g_a;
    let gc2 = g.g_c * g.g_c;
    let gm2 = g.g_m * g.g_m;

    let phonon = z_b + gm2 / z_m;
    let phonon_d = -I + I * gm2 / (z_m * z_m);
    let value = z_c + ga2 / z_a + gc2 / phonon;
    let derivative = -I + I * ga2 / (z_a * z_a) - gc2 * phonon_d / (phonon * phonon);
    InverseResponse {
        value,
        derivative: derivative * sign,
    }
}

/// Continued-fraction cavity amplitude `c₊` (zero offsets only).
pub fn c_plus_closed_form(config: &SystemConfig, lambda: f64) -> Result<Complex64, ResponseError> {
    check_lambda(lambda)?;
    if !config.offsets.is_zero() {
        return Err(ResponseError::OffsetsUnsupported);
    }
    Ok(config.probe_amplitude / inverse_response(config, lambda).value)
}

/// Normalized output field `2κ_c c₊ / ε_p`.
pub fn epsilon_out(config: &SystemConfig, c_plus: Complex64) -> Complex64 {
    c_plus * (2.0 * config.rates.kappa_c / config.probe_amplitude)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transmission {
    pub t_p: Complex64,
    /// `|t_p|²`
    pub power: f64,
    /// `Arg t_p` in `(−π, π]`
    pub phase: f64,
}

/// `arg` folded onto `(−π, π]`.
pub fn principal_arg(z: Complex64) -> f64 {
    let a = z.arg();
    if a <= -PI {
        a + 2.0 * PI
    } else {
        a
    }
}

pub fn transmission(eps_out: Complex64) -> Transmission {
    let t_p = Complex64::new(1.0, 0.0) - eps_out;
    Transmission {
        t_p,
        power: t_p.norm_sqr(),
        phase: principal_arg(t_p),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DelayMode {
    /// `Im[(1/ε_out) ∂ε_out/∂δ]`
    #[serde(rename = "eq8")]
    OutputField,
    /// `∂ Arg[t_p] / ∂δ`
    #[serde(rename = "phase_tp")]
    TransmissionPhase,
}

/// Group delay in seconds at probe detuning `delta` (rad/s), from the
/// analytic derivative of the continued fraction.
pub fn group_delay(config: &SystemConfig, delta: f64, mode: DelayMode) -> Result<f64, ResponseError> {
    let lambda = delta - config.omega_b;
    check_lambda(lambda)?;
    group_delay_at(config, lambda, mode)
}

pub(crate) fn group_delay_at(config: &SystemConfig, lambda: f64, mode: DelayMode) -> Result<f64, ResponseError> {
    let f = inverse_response(config, lambda);
    let eps_out = 2.0 * config.rates.kappa_c / f.value;
    // d ln ε_out / dλ = −F'/F
    let log_deriv = -f.derivative / f.value;
    match mode {
        DelayMode::OutputField => {
            if eps_out.norm().is_nan() || eps_out.norm() < DELAY_GUARD {
                return Err(ResponseError::DelayUndefined {
                    magnitude: eps_out.norm(),
                });
            }
            Ok(log_deriv.im)
        }
        DelayMode::TransmissionPhase => {
            let t_p = Complex64::new(1.0, 0.0) - eps_out;
            if t_p.norm().is_nan() || t_p.norm() < DELAY_GUARD {
                return Err(ResponseError::DelayUndefined { magnitude: t_p.norm() });
            }
            Ok((-(eps_out * log_deriv) / t_p).im)
        }
    }
}

/// Group delay by Richardson-extrapolated central differences of the phase
/// of ε_out (or t_p) obtained from the linear solve.
///
/// Every pole of the response lies at least `κ_min` from the real axis (the
/// drift matrix has numerical range `Re ≤ −κ_min`), so the step is
/// `h = 10⁻³·κ_min`, shrunk further to `10⁻³/|τ|` where a pilot estimate
/// shows the phase turning faster than that. Phase increments are taken as
/// `arg(f₊ f₋*)` so no unwrapping is needed.
pub fn group_delay_finite_difference(config: &SystemConfig, delta: f64, mode: DelayMode) -> Result<f64, ResponseError> {
    let lambda = delta - config.omega_b;
    check_lambda(lambda)?;
    let field = |l: f64| -> Result<Complex64, ResponseError> {
        let x = solve_sidebands(config, l)?;
        let e = epsilon_out(config, x.c_plus);
        Ok(match mode {
            DelayMode::OutputField => e,
            DelayMode::TransmissionPhase => Complex64::new(1.0, 0.0) - e,
        })
    };
    let f0 = field(lambda)?;
    if f0.norm().is_nan() || f0.norm() < DELAY_GUARD {
        return Err(ResponseError::DelayUndefined { magnitude: f0.norm() });
    }
    let central = |h: f64| -> Result<f64, ResponseError> {
        let up = field(lambda + h)?;
        let down = field(lambda - h)?;
        Ok((up * down.conj()).arg() / (2.0 * h))
    };
    let kmin = config.rates.min();
    let pilot = central(FD_STEP_FRACTION * kmin)?;
    let h = FD_STEP_FRACTION * kmin.min(1.0 / pilot.abs());
    let coarse = central(h)?;
    let fine = central(0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeResponse {
    /// `λ = δ − ω_b` (rad/s)
    pub lambda: f64,
    pub eps_out: Complex64,
    pub t_p: Complex64,
    /// `Re ε_out`
    pub absorption: f64,
    /// `Im ε_out`
    pub dispersion: f64,
    /// `|t_p|²`
    pub transmission: f64,
    /// `Arg t_p` in `(−π, π]`
    pub phase: f64,
}

/// All single-point observables at probe detuning `delta` (rad/s).
pub fn probe_response(config: &SystemConfig, delta: f64) -> Result<ProbeResponse, ResponseError> {
    probe_response_at(config, delta - config.omega_b)
}

/// As [`probe_response`], addressed by `λ` directly.
pub fn probe_response_at(config: &SystemConfig, lambda: f64) -> Result<ProbeResponse, ResponseError> {
    check_lambda(lambda)?;
    let eps = config.probe_amplitude;
    if !(eps.is_finite() && eps > 0.0) {
        return Err(ResponseError::InvalidProbeAmplitude(eps));
    }
    let x = solve_sidebands(config, lambda)?;
    if config.offsets.is_zero() {
        debug_assert!({
            let cf = c_plus_closed_form(config, lambda)?;
            (cf - x.c_plus).norm() <= CLOSED_FORM_TOLERANCE * x.c_plus.norm().max(f64::MIN_POSITIVE)
        });
    }
    let eps_out = epsilon_out(config, x.c_plus);
    let t = transmission(eps_out);
    Ok(ProbeResponse {
        lambda,
        eps_out,
        t_p: t.t_p,
        absorption: eps_out.re,
        dispersion: eps_out.im,
        transmission: t.power,
        phase: t.phase,
    })
}
