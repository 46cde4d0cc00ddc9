//! Steady-state probe response of a four-mode atom–cavity–phonon–magnon
//! chain: linear solve and continued-fraction evaluation, detuning sweeps,
//! transparency-window features, group-delay surfaces, and a time-domain
//! oracle for cross-checking.

pub mod linalg;
pub mod model;
pub mod presets;
pub mod response;
pub mod spectra;
pub mod tdoracle;

pub use model::{
    default_config, from_hz_over_2pi, hz_to_rad, parse_config_json, rad_to_hz, to_hz_over_2pi, ConfigFile,
    ConfigParseError, Couplings, DetuningOffsets, Diagnostic, ModeRates, ModelError, Severity, SignConvention,
    SystemConfig,
};
pub use presets::{preset, Preset, PresetKind};
pub use response::{
    c_plus_closed_form, epsilon_out, group_delay, probe_response, sideband_matrix, solve_sidebands, transmission,
    DelayMode, ProbeResponse, ResponseError, SidebandAmplitudes,
};
pub use spectra::{
    delay_surface, extract_features, sweep_spectrum, window_width_vs_gm, DelaySurface, FeatureReport, GridSpec,
    SpectrumTable, SweepGrid,
};
