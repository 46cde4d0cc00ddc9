//! Named scenarios.
//!
//! Some scenarios leave couplings unspecified; each preset lists the values
//! it assumes so that they travel with the output.

use serde::{Deserialize, Serialize};

use crate::model::{default_config, Couplings, SystemConfig};
use crate::spectra::{GridSpec, Observable};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PresetKind {
    /// Detuning sweep; `observable` is the quantity of interest.
    Spectrum { observable: Observable },
    /// `τ` over `η = g_m/g_c` × detuning.
    DelaySurface { eta: EtaRange },
}

/// `points` values evenly spaced over `[lo, hi]` (both included).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaRange {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl EtaRange {
    pub fn values(&self) -> Vec<f64> {
        match self.points {
            0 => Vec::new(),
            1 => vec![self.lo],
            n => {
                let step = (self.hi - self.lo) / (n - 1) as f64;
                (0..n)
                    .map(|i| if i == n - 1 { self.hi } else { self.lo + step * i as f64 })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub kind: PresetKind,
    pub config: SystemConfig,
    pub grid: GridSpec,
    /// Parameters the scenario leaves open, with the values chosen.
    pub assumptions: Vec<String>,
}

pub const PRESET_NAMES: [&str; 13] = [
    "fig3a", "fig3b", "fig3c", "fig3d", "fig4a", "fig4b", "fig4c", "fig4d", "fig5a", "fig5b", "fig5c", "fig5d", "fig6",
];

/// Surface resolution of the fig6 preset.
pub const FIG6_POINTS: usize = 200;
pub const FIG6_ETA_MAX: f64 = 2.0;

const PANEL_COUPLINGS_MHZ: [(f64, f64, f64); 4] = [(0.0, 0.0, 0.0), (0.0, 8.0, 0.0), (0.0, 8.0, 8.0), (8.0, 8.0, 8.0)];

fn couplings_mhz(g_a: f64, g_c: f64, g_m: f64) -> Couplings {
    Couplings::from_hz(g_a * 1e6, g_c * 1e6, g_m * 1e6)
}

fn spectrum_preset(
    name: &'static str,
    description: &'static str,
    observable: Observable,
    couplings: Couplings,
    assumptions: Vec<String>,
) -> Preset {
    let config = default_config().with_couplings(couplings);
    Preset {
        name,
        description,
        kind: PresetKind::Spectrum { observable },
        config,
        grid: GridSpec::center_refined(&config),
        assumptions,
    }
}

fn sweep_assumption() -> String {
    "detuning grid: 2001 uniform points over delta/omega_b in [0.5, 1.5] plus geometric refinement to kappa_b/5 within |lambda| <= 1e3 kappa_b".into()
}

pub fn preset(name: &str) -> Option<Preset> {
    let panel = |s: &str| -> Option<usize> {
        match s {
            "a" => Some(0),
            "b" => Some(1),
            "c" => Some(2),
            "d" => Some(3),
            _ => None,
        }
    };
    let (fig, letter) = name.split_at(name.len().min(4));
    match (fig, panel(letter)) {
        ("fig3", Some(p)) | ("fig4", Some(p)) => {
            let (ga, gc, gm) = PANEL_COUPLINGS_MHZ[p];
            let (name, description, observable): (&'static str, &'static str, _) = match (fig, p) {
                ("fig3", 0) => ("fig3a", "absorption, bare cavity", Observable::Absorption),
                ("fig3", 1) => (
                    "fig3b",
                    "absorption, optomechanical coupling only",
                    Observable::Absorption,
                ),
                ("fig3", 2) => (
                    "fig3c",
                    "absorption, optomechanical and magnomechanical coupling",
                    Observable::Absorption,
                ),
                ("fig3", _) => (
                    "fig3d",
                    "absorption, all couplings including the atomic ensemble",
                    Observable::Absorption,
                ),
                (_, 0) => ("fig4a", "dispersion, bare cavity", Observable::Dispersion),
                (_, 1) => (
                    "fig4b",
                    "dispersion, optomechanical coupling only",
                    Observable::Dispersion,
                ),
                (_, 2) => (
                    "fig4c",
                    "dispersion, optomechanical and magnomechanical coupling",
                    Observable::Dispersion,
                ),
                _ => (
                    "fig4d",
                    "dispersion, all couplings including the atomic ensemble",
                    Observable::Dispersion,
                ),
            };
            Some(spectrum_preset(
                name,
                description,
                observable,
                couplings_mhz(ga, gc, gm),
                vec![sweep_assumption()],
            ))
        }
        ("fig5", Some(p)) => {
            let ga = if p >= 2 { 8.0 } else { 0.0 };
            let gm = if p % 2 == 0 { 4.0 } else { 8.0 };
            let (name, description): (&'static str, &'static str) = match p {
                0 => ("fig5a", "transmission without atoms, g_m/2pi = 4 MHz"),
                1 => ("fig5b", "transmission without atoms, g_m/2pi = 8 MHz"),
                2 => ("fig5c", "transmission with atoms, g_m/2pi = 4 MHz"),
                _ => ("fig5d", "transmission with atoms, g_m/2pi = 8 MHz"),
            };
            let mut assumptions =
                vec!["g_c/2pi = 8 MHz (unspecified here; value used by the fig3 and fig4 presets)".to_string()];
            if p == 1 || p == 3 {
                assumptions.push("g_m/2pi = 8 MHz (stated only as 4 MHz for panels a and c)".into());
            }
            if p >= 2 {
                assumptions.push("g_a/2pi = 8 MHz (g_a = 0 is stated only for panels a and b)".into());
            }
            assumptions.push(
                "window width: full width at half depth of the extinction 1 - |t_p|^2 dip nearest delta/omega_b = 1"
                    .into(),
            );
            assumptions.push(sweep_assumption());
            Some(spectrum_preset(
                name,
                description,
                Observable::Transmission,
                couplings_mhz(ga, 8.0, gm),
                assumptions,
            ))
        }
        _ if name == "fig6" => {
            let config = default_config().with_couplings(couplings_mhz(8.0, 8.0, 0.0));
            Some(Preset {
                name: "fig6",
                description: "group delay surface over eta = g_m/g_c and detuning",
                kind: PresetKind::DelaySurface {
                    eta: EtaRange {
                        lo: 0.0,
                        hi: FIG6_ETA_MAX,
                        points: FIG6_POINTS,
                    },
                },
                config,
                grid: GridSpec::uniform(FIG6_POINTS, 0.5, 1.5),
                assumptions: vec![
                    "g_c/2pi = 8 MHz (unspecified here; value used by the fig3 and fig4 presets)".into(),
                    "eta = g_m/g_c spans [0, 2] with 200 points".into(),
                    "detuning grid: 200 uniform points over delta/omega_b in [0.5, 1.5]".into(),
                    "delay: output-field definition Im[(1/eps_out) d eps_out/d delta]".into(),
                ],
            })
        }
        _ => None,
    }
}

pub fn all_presets() -> Vec<Preset> {
    PRESET_NAMES.iter().filter_map(|n| preset(n)).collect()
}
