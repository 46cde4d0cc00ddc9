use std::path::PathBuf;
use std::str::FromStr;

use aomm_core::presets::EtaRange;
use aomm_core::SignConvention;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "aomm",
    version,
    about = "Probe response of an atom opto-magnomechanical system"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep the probe detuning and write spectrum.csv, features.json and manifest.json.
    Spectrum(SpectrumArgs),
    /// Group delay over eta = g_m/g_c and detuning; writes surface.csv and summary.json.
    DelaySurface(SurfaceArgs),
    /// Run the cross-verification suite; exit 1 if any check fails.
    Verify(VerifyArgs),
    /// Write a matplotlib script that renders an existing table.
    Plot(PlotArgs),
    /// Re-run the command recorded in a manifest and compare output hashes.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Source {
    /// JSON config file.
    #[arg(long, value_name = "PATH", conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Named scenario (fig3a..fig3d, fig4a..fig4d, fig5a..fig5d, fig6).
    #[arg(long, value_name = "NAME")]
    pub preset: Option<String>,
    /// Overrides the sign convention of the config or preset.
    #[arg(long, value_enum)]
    pub convention: Option<ConventionArg>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Uniform backbone points of the detuning grid.
    #[arg(long, value_name = "N")]
    pub grid_points: Option<usize>,
    /// Absolute window prominence (default: 0.1 x global maximum).
    #[arg(long, value_name = "X")]
    pub prominence: Option<f64>,
    #[arg(long, value_enum, value_name = "KIND")]
    pub emit_plot: Option<PlotKind>,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    /// Config or preset; fig6 when neither is given.
    #[command(flatten)]
    pub source: Source,
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Uniform detuning points over delta/omega_b in [0.5, 1.5].
    #[arg(long, value_name = "N")]
    pub grid_points: Option<usize>,
    /// eta range as LO..HI:N (N defaults to 1 when LO = HI).
    #[arg(long, value_name = "LO..HI:N")]
    pub eta: Option<EtaArg>,
    #[arg(long, value_enum, value_name = "KIND")]
    pub emit_plot: Option<PlotKind>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "standard")]
    pub convention: ConventionArg,
    /// Also run the oracle at the full mechanical damping (slow).
    #[arg(long)]
    pub long_run: bool,
    /// Write the report as JSON.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// spectrum.csv or surface.csv produced by this tool.
    #[arg(long, value_name = "PATH")]
    pub table: PathBuf,
    #[arg(long, value_enum)]
    pub kind: PlotKind,
    /// Script path (default: plot_<kind>.py next to the table).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[arg(long, value_name = "PATH")]
    pub manifest: PathBuf,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Paper,
    Standard,
}

impl From<ConventionArg> for SignConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Paper => SignConvention::Paper,
            ConventionArg::Standard => SignConvention::Standard,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    Absorption,
    Dispersion,
    Transmission,
    Phase,
    Delay,
    Surface,
}

impl PlotKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PlotKind::Absorption => "absorption",
            PlotKind::Dispersion => "dispersion",
            PlotKind::Transmission => "transmission",
            PlotKind::Phase => "phase",
            PlotKind::Delay => "delay",
            PlotKind::Surface => "surface",
        }
    }
}

/// `LO..HI:N`, or `LO..HI` for a single point when `LO = HI`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaArg(pub EtaRange);

impl FromStr for EtaArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("expected LO..HI:N, got {s:?}");
        let (range, points) = match s.split_once(':') {
            Some((r, n)) => (r, Some(n.trim().parse::<usize>().map_err(|_| bad())?)),
            None => (s, None),
        };
        let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
        let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
        if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && hi >= lo) {
            return Err(format!("eta range must satisfy 0 <= LO <= HI, got {s:?}"));
        }
        let points = match points {
            Some(n) => n,
            None if lo == hi => 1,
            None => return Err(bad()),
        };
        if points == 0 || (points == 1 && lo != hi) {
            return Err(format!("a range with LO < HI needs at least 2 points, got {s:?}"));
        }
        Ok(EtaArg(EtaRange { lo, hi, points }))
    }
}
