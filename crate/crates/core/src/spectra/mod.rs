//! Detuning sweeps, delay surfaces and transparency-window features.

mod features;
mod grid;
mod surface;
mod sweep;

pub use features::{
    extract_features, extract_features_of, find_features, FeatureError, FeatureReport, Peak, Window,
    DEFAULT_RELATIVE_PROMINENCE,
};
pub use grid::{GridError, GridSpec, Refinement, SweepGrid, DEFAULT_UNIFORM_POINTS};
pub use surface::{delay_surface, window_width_vs_gm, DelaySurface, Extremum, SurfaceError};
pub use sweep::{sweep_spectrum, unwrap_phase, Observable, SpectrumRow, SpectrumTable, SweepError};
