//! Physical parameter set of the four-mode chain (atoms, cavity, magnon,
//! phonon), the "/2π" unit boundary, validation, and the reference
//! parameter values.
//!
//! Every frequency stored in a [`SystemConfig`] is an angular frequency in
//! rad/s. Values quoted as `x/2π = f Hz` only exist at the I/O boundary
//! ([`from_hz_over_2pi`], [`ConfigFile`]).

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Ratio `κ / ω_b` above which a configuration is flagged as leaving the
/// resolved-sideband regime.
pub const SIDEBAND_RESOLUTION_RATIO: f64 = 0.1;

/// Converts a frequency quoted as `x/2π` in Hz to rad/s.
#[inline]
pub fn hz_to_rad(hz: f64) -> f64 {
    hz * TAU
}

/// Converts rad/s to the `x/2π` value in Hz.
#[inline]
pub fn rad_to_hz(rad: f64) -> f64 {
    rad / TAU
}

/// Orientation of the sideband equations.
///
/// `Standard` uses positive-damping diagonals `κ − iλ`. `Paper` keeps the
/// `iλ − κ` orientation, which yields the standard spectrum mirrored
/// in `λ`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignConvention {
    Paper,
    #[default]
    Standard,
}

impl SignConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            SignConvention::Paper => "paper",
            SignConvention::Standard => "standard",
        }
    }
}

impl fmt::Display for SignConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SignConvention {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(SignConvention::Paper),
            "standard" => Ok(SignConvention::Standard),
            other => Err(ModelError::UnknownConvention(other.to_owned())),
        }
    }
}

/// Angular decay rates (rad/s). `kappa_b` is the mechanical damping, also
/// written `γ_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeRates {
    pub kappa_a: f64,
    pub kappa_c: f64,
    pub kappa_m: f64,
    pub kappa_b: f64,
}

impl ModeRates {
    /// Rates in unknown order `(a, c, m, b)`.
    pub fn as_array(&self) -> [f64; 4] {
        [self.kappa_a, self.kappa_c, self.kappa_m, self.kappa_b]
    }

    pub fn min(&self) -> f64 {
        self.as_array().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.as_array().into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        ModeRates {
            kappa_a: self.kappa_a * factor,
            kappa_c: self.kappa_c * factor,
            kappa_m: self.kappa_m * factor,
            kappa_b: self.kappa_b * factor,
        }
    }
}

/// Effective linearized coupling strengths (rad/s). A zero coupling removes
/// its branch from the chain exactly.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Couplings {
    /// atom ↔ cavity
    pub g_a: f64,
    /// cavity ↔ phonon (radiation pressure)
    pub g_c: f64,
    /// magnon ↔ phonon (magnetostriction)
    pub g_m: f64,
}

impl Couplings {
    pub const NONE: Couplings = Couplings {
        g_a: 0.0,
        g_c: 0.0,
        g_m: 0.0,
    };

    /// Builds couplings from `/2π` values in Hz.
    pub fn from_hz(g_a: f64, g_c: f64, g_m: f64) -> Self {
        Couplings {
            g_a: hz_to_rad(g_a),
            g_c: hz_to_rad(g_c),
            g_m: hz_to_rad(g_m),
        }
    }

    pub fn max(&self) -> f64 {
        self.g_a.max(self.g_c).max(self.g_m)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Couplings {
            g_a: self.g_a * factor,
            g_c: self.g_c * factor,
            g_m: self.g_m * factor,
        }
    }
}

/// Per-mode detunings relative to the mechanical frequency, `Δ_o − ω_b`
/// (rad/s). All zero is the `Δ_a = Δ_c = Δ_m = ω_b` regime.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DetuningOffsets {
    pub atom: f64,
    pub cavity: f64,
    pub magnon: f64,
}

impl DetuningOffsets {
    pub const ZERO: DetuningOffsets = DetuningOffsets {
        atom: 0.0,
        cavity: 0.0,
        magnon: 0.0,
    };

    pub fn is_zero(&self) -> bool {
        self.atom == 0.0 && self.cavity == 0.0 && self.magnon == 0.0
    }

    /// Offsets in unknown order `(a, c, m, b)`; the phonon carries none.
    pub fn as_array(&self) -> [f64; 4] {
        [self.atom, self.cavity, self.magnon, 0.0]
    }
}

/// Reference values that never enter the response calculation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct InertMetadata {
    /// Magnon angular frequency ω_m (rad/s).
    pub magnon_frequency: Option<f64>,
    /// Optical drive wavelength (m).
    pub optical_wavelength: Option<f64>,
}

/// One complete scenario. Immutable once built; `Copy` so it can be handed
/// to worker threads freely.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    /// Mechanical angular frequency ω_b (rad/s).
    pub omega_b: f64,
    pub rates: ModeRates,
    pub couplings: Couplings,
    /// Probe amplitude ε_p. Observables do not depend on it.
    pub probe_amplitude: f64,
    pub offsets: DetuningOffsets,
    pub convention: SignConvention,
    pub metadata: InertMetadata,
}

/// Reference configuration: ω_b/2π = 40 MHz, γ_b/2π = 100 Hz,
/// κ_a/2π = κ_m/2π = 1 MHz, κ_c/2π = 2 MHz, all couplings off.
pub fn default_config() -> SystemConfig {
    SystemConfig {
        omega_b: hz_to_rad(40e6),
        rates: ModeRates {
            kappa_a: hz_to_rad(1e6),
            kappa_c: hz_to_rad(2e6),
            kappa_m: hz_to_rad(1e6),
            kappa_b: hz_to_rad(1e2),
        },
        couplings: Couplings::NONE,
        probe_amplitude: 1.0,
        offsets: DetuningOffsets::ZERO,
        convention: SignConvention::Standard,
        metadata: InertMetadata {
            magnon_frequency: Some(hz_to_rad(10e9)),
            optical_wavelength: Some(1064e-9),
        },
    }
}

impl Default for SystemConfig {
    fn default() -> Self {
        default_config()
    }
}

impl SystemConfig {
    pub fn with_couplings(mut self, couplings: Couplings) -> Self {
        self.couplings = couplings;
        self
    }

    pub fn with_rates(mut self, rates: ModeRates) -> Self {
        self.rates = rates;
        self
    }

    pub fn with_convention(mut self, convention: SignConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn with_probe_amplitude(mut self, amplitude: f64) -> Self {
        self.probe_amplitude = amplitude;
        self
    }

    pub fn with_offsets(mut self, offsets: DetuningOffsets) -> Self {
        self.offsets = offsets;
        self
    }

    /// Checks the configuration. Problems are reported, never raised.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if !(self.omega_b.is_finite() && self.omega_b > 0.0) {
            out.push(Diagnostic::error(
                "omega_b",
                format!("mechanical frequency must be positive and finite, got {}", self.omega_b),
            ));
        }
        let rates = [
            ("kappa_a", self.rates.kappa_a),
            ("kappa_c", self.rates.kappa_c),
            ("kappa_m", self.rates.kappa_m),
            ("kappa_b", self.rates.kappa_b),
        ];
        for (name, value) in rates {
            if !(value.is_finite() && value > 0.0) {
                out.push(Diagnostic::error(
                    name,
                    format!("decay rate must be positive and finite, got {value}"),
                ));
            } else if self.omega_b > 0.0 && value > SIDEBAND_RESOLUTION_RATIO * self.omega_b {
                out.push(Diagnostic::warning(
                    name,
                    format!(
                        "rate {:.6e} rad/s exceeds omega_b/10 = {:.6e} rad/s; \
                         the single-sideband (resolved-sideband) model is questionable",
                        value,
                        SIDEBAND_RESOLUTION_RATIO * self.omega_b
                    ),
                ));
            }
        }
        let couplings = [
            ("g_a", self.couplings.g_a),
            ("g_c", self.couplings.g_c),
            ("g_m", self.couplings.g_m),
        ];
        for (name, value) in couplings {
            if !(value.is_finite() && value >= 0.0) {
                out.push(Diagnostic::error(
                    name,
                    format!("coupling must be nonnegative and finite, got {value}"),
                ));
            }
        }
        if !(self.probe_amplitude.is_finite() && self.probe_amplitude > 0.0) {
            out.push(Diagnostic::error(
                "probe_amplitude",
                format!(
                    "probe amplitude must be positive and finite, got {}",
                    self.probe_amplitude
                ),
            ));
        }
        let offsets = [
            ("offset_a", self.offsets.atom),
            ("offset_c", self.offsets.cavity),
            ("offset_m", self.offsets.magnon),
        ];
        for (name, value) in offsets {
            if !value.is_finite() {
                out.push(Diagnostic::error(
                    name,
                    format!("detuning offset must be finite, got {value}"),
                ));
            }
        }
        out
    }

    /// Fails on the first error-level diagnostic; warnings pass.
    pub fn ensure_valid(&self) -> Result<(), ModelError> {
        match self.validate().into_iter().find(|d| d.severity == Severity::Error) {
            Some(d) => Err(ModelError::Invalid(d)),
            None => Ok(()),
        }
    }

    pub fn to_hz_over_2pi(&self) -> BTreeMap<String, f64> {
        to_hz_over_2pi(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub field: String,
    pub message: String,
}

impl Diagnostic {
    fn error(field: &str, message: String) -> Self {
        Diagnostic {
            severity: Severity::Error,
            field: field.to_owned(),
            message,
        }
    }

    fn warning(field: &str, message: String) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            field: field.to_owned(),
            message,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{tag}: {}: {}", self.field, self.message)
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("missing field `{0}`")]
    MissingField(String),
    #[error("unknown field `{0}`")]
    UnknownField(String),
    #[error("field `{field}` is not finite ({value})")]
    NonFinite { field: String, value: f64 },
    #[error("field `{field}` must be positive, got {value}")]
    NonPositiveRate { field: String, value: f64 },
    #[error("field `{field}` must be nonnegative, got {value}")]
    NegativeCoupling { field: String, value: f64 },
    #[error("unknown sign convention `{0}` (expected `paper` or `standard`)")]
    UnknownConvention(String),
    #[error("invalid configuration: {0}")]
    Invalid(Diagnostic),
}

const RATE_KEYS: [&str; 5] = ["omega_b", "kappa_a", "kappa_c", "kappa_m", "kappa_b"];
const COUPLING_KEYS: [&str; 3] = ["g_a", "g_c", "g_m"];
const OFFSET_KEYS: [&str; 3] = ["offset_a", "offset_c", "offset_m"];

/// Builds a configuration from `/2π` frequencies in Hz.
///
/// `omega_b` and the four `kappa_*` keys are required; `g_*` and `offset_*`
/// default to zero. Probe amplitude, convention and metadata take their
/// defaults.
pub fn from_hz_over_2pi(values: &BTreeMap<String, f64>) -> Result<SystemConfig, ModelError> {
    for key in values.keys() {
        let known = RATE_KEYS
            .iter()
            .chain(&COUPLING_KEYS)
            .chain(&OFFSET_KEYS)
            .any(|k| k == key);
        if !known {
            return Err(ModelError::UnknownField(key.clone()));
        }
    }
    for (key, &value) in values {
        if !value.is_finite() {
            return Err(ModelError::NonFinite {
                field: key.clone(),
                value,
            });
        }
    }
    let rate = |key: &str| -> Result<f64, ModelError> {
        let value = *values
            .get(key)
            .ok_or_else(|| ModelError::MissingField(key.to_owned()))?;
        if value <= 0.0 {
            return Err(ModelError::NonPositiveRate {
                field: key.to_owned(),
                value,
            });
        }
        Ok(hz_to_rad(value))
    };
    let coupling = |key: &str| -> Result<f64, ModelError> {
        let value = values.get(key).copied().unwrap_or(0.0);
        if value < 0.0 {
            return Err(ModelError::NegativeCoupling {
                field: key.to_owned(),
                value,
            });
        }
        Ok(hz_to_rad(value))
    };
    let offset = |key: &str| hz_to_rad(values.get(key).copied().unwrap_or(0.0));

    Ok(SystemConfig {
        omega_b: rate("omega_b")?,
        rates: ModeRates {
            kappa_a: rate("kappa_a")?,
            kappa_c: rate("kappa_c")?,
            kappa_m: rate("kappa_m")?,
            kappa_b: rate("kappa_b")?,
        },
        couplings: Couplings {
            g_a: coupling("g_a")?,
            g_c: coupling("g_c")?,
            g_m: coupling("g_m")?,
        },
        probe_amplitude: 1.0,
        offsets: DetuningOffsets {
            atom: offset("offset_a"),
            cavity: offset("offset_c"),
            magnon: offset("offset_m"),
        },
        convention: SignConvention::Standard,
        metadata: InertMetadata::default(),
    })
}

/// Inverse of [`from_hz_over_2pi`] for the frequency fields.
pub fn to_hz_over_2pi(config: &SystemConfig) -> BTreeMap<String, f64> {
    let fields = [
        ("omega_b", config.omega_b),
        ("kappa_a", config.rates.kappa_a),
        ("kappa_c", config.rates.kappa_c),
        ("kappa_m", config.rates.kappa_m),
        ("kappa_b", config.rates.kappa_b),
        ("g_a", config.couplings.g_a),
        ("g_c", config.couplings.g_c),
        ("g_m", config.couplings.g_m),
        ("offset_a", config.offsets.atom),
        ("offset_c", config.offsets.cavity),
        ("offset_m", config.offsets.magnon),
    ];
    fields.into_iter().map(|(k, v)| (k.to_owned(), rad_to_hz(v))).collect()
}

/// On-disk configuration schema. All frequencies are `/2π` values in Hz.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub omega_b_over_2pi_hz: f64,
    pub kappa_a_over_2pi_hz: f64,
    pub kappa_c_over_2pi_hz: f64,
    pub kappa_m_over_2pi_hz: f64,
    pub kappa_b_over_2pi_hz: f64,
    #[serde(default)]
    pub g_a_over_2pi_hz: f64,
    #[serde(default)]
    pub g_c_over_2pi_hz: f64,
    #[serde(default)]
    pub g_m_over_2pi_hz: f64,
    #[serde(default = "unit_amplitude")]
    pub probe_amplitude: f64,
    #[serde(default)]
    pub sign_convention: SignConvention,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detuning_offsets_over_2pi_hz: Option<OffsetsFile>,
}

fn unit_amplitude() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OffsetsFile {
    #[serde(default)]
    pub atom: f64,
    #[serde(default)]
    pub cavity: f64,
    #[serde(default)]
    pub magnon: f64,
}

impl ConfigFile {
    pub fn from_config(config: &SystemConfig) -> Self {
        let offsets = (!config.offsets.is_zero()).then(|| OffsetsFile {
            atom: rad_to_hz(config.offsets.atom),
            cavity: rad_to_hz(config.offsets.cavity),
            magnon: rad_to_hz(config.offsets.magnon),
        });
        ConfigFile {
            omega_b_over_2pi_hz: rad_to_hz(config.omega_b),
            kappa_a_over_2pi_hz: rad_to_hz(config.rates.kappa_a),
            kappa_c_over_2pi_hz: rad_to_hz(config.rates.kappa_c),
            kappa_m_over_2pi_hz: rad_to_hz(config.rates.kappa_m),
            kappa_b_over_2pi_hz: rad_to_hz(config.rates.kappa_b),
            g_a_over_2pi_hz: rad_to_hz(config.couplings.g_a),
            g_c_over_2pi_hz: rad_to_hz(config.couplings.g_c),
            g_m_over_2pi_hz: rad_to_hz(config.couplings.g_m),
            probe_amplitude: config.probe_amplitude,
            sign_convention: config.convention,
            detuning_offsets_over_2pi_hz: offsets,
        }
    }

    pub fn into_config(self) -> Result<SystemConfig, ModelError> {
        let offsets = self.detuning_offsets_over_2pi_hz.unwrap_or_default();
        let values: BTreeMap<String, f64> = [
            ("omega_b", self.omega_b_over_2pi_hz),
            ("kappa_a", self.kappa_a_over_2pi_hz),
            ("kappa_c", self.kappa_c_over_2pi_hz),
            ("kappa_m", self.kappa_m_over_2pi_hz),
            ("kappa_b", self.kappa_b_over_2pi_hz),
            ("g_a", self.g_a_over_2pi_hz),
            ("g_c", self.g_c_over_2pi_hz),
            ("g_m", self.g_m_over_2pi_hz),
            ("offset_a", offsets.atom),
            ("offset_c", offsets.cavity),
            ("offset_m", offsets.magnon),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_owned(), v))
        .collect();
        let config = from_hz_over_2pi(&values)?
            .with_probe_amplitude(self.probe_amplitude)
            .with_convention(self.sign_convention);
        config.ensure_valid()?;
        Ok(config)
    }
}

#[derive(Debug, Error)]
pub enum ConfigParseError {
    #[error("malformed JSON at byte offset {byte_offset} (line {line}, column {column}): {message}")]
    Syntax {
        byte_offset: usize,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("config schema error at byte offset {byte_offset}: {message}")]
    Schema { byte_offset: usize, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Parses a JSON config document.
pub fn parse_config_json(text: &str) -> Result<SystemConfig, ConfigParseError> {
    let file: ConfigFile = serde_json::from_str(text).map_err(|e| {
        let byte_offset = byte_offset(text, e.line(), e.column());
        let message = e.to_string();
        if e.is_data() {
            ConfigParseError::Schema { byte_offset, message }
        } else {
            ConfigParseError::Syntax {
                byte_offset,
                line: e.line(),
                column: e.column(),
                message,
            }
        }
    })?;
    Ok(file.into_config()?)
}

/// serde_json reports 1-based lines and 1-based byte columns.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let preceding: usize = text
        .split_inclusive('\n')
        .take(line.saturating_sub(1))
        .map(str::len)
        .sum();
    (preceding + column.saturating_sub(1)).min(text.len())
}
