use std::fs;
use std::path::{Path, PathBuf};

use aomm_core::model::{default_config, parse_config_json, Severity, SignConvention, SystemConfig};
use aomm_core::presets::{preset, EtaRange, PresetKind, FIG6_ETA_MAX, FIG6_POINTS};
use aomm_core::spectra::{
    delay_surface, extract_features, extract_features_of, sweep_spectrum, DelaySurface, FeatureReport, GridSpec,
    Observable, SurfaceError,
};
use aomm_core::ConfigFile;
use serde::Serialize;

use crate::args::{PlotArgs, PlotKind, ReplayArgs, Source, SpectrumArgs, SurfaceArgs, VerifyArgs};
use crate::manifest::{now_unix, sha256_hex, OutputFile, RunManifest, MANIFEST_FILE};
use crate::plot::{emit_plot_script, PlotError};
use crate::tables::{spectrum_csv, surface_csv};
use crate::verify::run_suite;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_RUNTIME: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
    /// Verification or replay mismatch; the report was already printed.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Runtime(_) => EXIT_RUNTIME,
            CliError::Failed(_) => EXIT_VERIFY_FAILED,
        }
    }
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

struct Resolved {
    config: SystemConfig,
    preset: Option<String>,
    kind: Option<PresetKind>,
    grid: Option<GridSpec>,
    assumptions: Vec<String>,
    warnings: Vec<String>,
}

fn resolve(source: &Source, fallback_preset: Option<&str>) -> Result<Resolved, CliError> {
    let name = source
        .preset
        .as_deref()
        .or(if source.config.is_none() { fallback_preset } else { None });
    let mut r = if let Some(path) = &source.config {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let config = parse_config_json(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Resolved {
            config,
            preset: None,
            kind: None,
            grid: None,
            assumptions: Vec::new(),
            warnings: Vec::new(),
        }
    } else if let Some(name) = name {
        let p = preset(name).ok_or_else(|| CliError::Config(format!("unknown preset {name:?}")))?;
        Resolved {
            config: p.config,
            preset: Some(p.name.to_string()),
            kind: Some(p.kind),
            grid: Some(p.grid),
            assumptions: p.assumptions,
            warnings: Vec::new(),
        }
    } else {
        Resolved {
            config: default_config(),
            preset: None,
            kind: None,
            grid: None,
            assumptions: vec!["no config or preset given: default parameters, all couplings off".into()],
            warnings: Vec::new(),
        }
    };
    if let Some(c) = source.convention {
        r.config = r.config.with_convention(c.into());
    }
    for d in r.config.validate() {
        match d.severity {
            Severity::Error => return Err(CliError::Config(d.to_string())),
            Severity::Warning => {
                eprintln!("warning: {d}");
                r.warnings.push(d.to_string());
            }
        }
    }
    Ok(r)
}

#[derive(Serialize)]
struct FeaturesFile<'a> {
    #[serde(flatten)]
    absorption: &'a FeatureReport,
    /// Dips of `1 − |t_p|²`, i.e. transmission windows.
    transmission_windows: &'a FeatureReport,
}

fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s.into_bytes()
}

/// Data files of a spectrum run, in write order.
pub fn spectrum_outputs(
    config: &SystemConfig,
    grid: &GridSpec,
    prominence: Option<f64>,
) -> Result<Vec<(String, Vec<u8>)>, CliError> {
    let sweep_grid = grid
        .build(config.omega_b)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let table = sweep_spectrum(config, &sweep_grid).map_err(runtime)?;
    let absorption = extract_features(&table, prominence).map_err(|e| CliError::Config(e.to_string()))?;
    let transmission_windows = extract_features_of(&table, Observable::Extinction, None).map_err(runtime)?;
    let features = FeaturesFile {
        absorption: &absorption,
        transmission_windows: &transmission_windows,
    };
    Ok(vec![
        ("spectrum.csv".into(), spectrum_csv(&table).into_bytes()),
        ("features.json".into(), json_bytes(&features)),
    ])
}

#[derive(Serialize)]
struct Location {
    eta: f64,
    delta_over_omega_b: f64,
}

#[derive(Serialize)]
struct Summary {
    max_tau_s: Option<f64>,
    argmax: Option<Location>,
    min_tau_s: Option<f64>,
    argmin: Option<Location>,
    eta_points: usize,
    delta_points: usize,
    undefined_cells: usize,
}

fn summary(s: &DelaySurface) -> Summary {
    let loc = |e: &aomm_core::spectra::Extremum| Location {
        eta: e.eta,
        delta_over_omega_b: e.delta_over_omega_b,
    };
    Summary {
        max_tau_s: s.max.map(|e| e.tau_s),
        argmax: s.max.as_ref().map(loc),
        min_tau_s: s.min.map(|e| e.tau_s),
        argmin: s.min.as_ref().map(loc),
        eta_points: s.eta_values.len(),
        delta_points: s.lambdas.len(),
        undefined_cells: s.tau.iter().flatten().filter(|t| t.is_none()).count(),
    }
}

pub fn surface_outputs(
    config: &SystemConfig,
    grid: &GridSpec,
    eta: &EtaRange,
) -> Result<Vec<(String, Vec<u8>)>, CliError> {
    let sweep_grid = grid
        .build(config.omega_b)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let surface = delay_surface(config, &eta.values(), &sweep_grid).map_err(|e| match e {
        SurfaceError::NoOptomechanicalCoupling | SurfaceError::InvalidEta(_) => CliError::Config(e.to_string()),
        e => runtime(e),
    })?;
    Ok(vec![
        ("surface.csv".into(), surface_csv(&surface).into_bytes()),
        ("summary.json".into(), json_bytes(&summary(&surface))),
    ])
}

fn write_outputs(dir: &Path, files: &[(String, Vec<u8>)]) -> Result<Vec<OutputFile>, CliError> {
    fs::create_dir_all(dir).map_err(|e| runtime(format!("cannot create {}: {e}", dir.display())))?;
    files
        .iter()
        .map(|(name, bytes)| {
            let path = dir.join(name);
            fs::write(&path, bytes).map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))?;
            Ok(OutputFile {
                file: name.clone(),
                sha256: sha256_hex(bytes),
            })
        })
        .collect()
}

struct ManifestInputs {
    command: &'static str,
    preset: Option<String>,
    config: SystemConfig,
    grid: GridSpec,
    eta: Option<EtaRange>,
    prominence: Option<f64>,
    assumptions: Vec<String>,
    warnings: Vec<String>,
}

fn write_manifest(dir: &Path, inputs: ManifestInputs, outputs: Vec<OutputFile>) -> Result<RunManifest, CliError> {
    let manifest = RunManifest {
        command: inputs.command.into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        timestamp_unix_s: now_unix(),
        preset: inputs.preset,
        config: inputs.config,
        config_over_2pi_hz: ConfigFile::from_config(&inputs.config),
        grid: inputs.grid,
        eta: inputs.eta,
        prominence: inputs.prominence,
        assumptions: inputs.assumptions,
        warnings: inputs.warnings,
        outputs,
        reproducibility_hash: String::new(),
    }
    .seal();
    let path = dir.join(MANIFEST_FILE);
    fs::write(&path, manifest.to_json()).map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))?;
    Ok(manifest)
}

fn emit_plot(dir: &Path, table: &str, kind: PlotKind) -> Result<PathBuf, CliError> {
    let script = emit_plot_script(&dir.join(table), kind).map_err(plot_error)?;
    let path = dir.join(format!("plot_{}.py", kind.as_str()));
    fs::write(&path, script).map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn plot_error(e: PlotError) -> CliError {
    match e {
        PlotError::Read { .. } => runtime(e),
        PlotError::WrongTable { .. } => CliError::Config(e.to_string()),
    }
}

pub fn cmd_spectrum(args: &SpectrumArgs) -> Result<(), CliError> {
    if args.emit_plot == Some(PlotKind::Surface) {
        return Err(CliError::Config("--emit-plot surface needs a delay-surface run".into()));
    }
    let r = resolve(&args.source, None)?;
    if let Some(PresetKind::DelaySurface { .. }) = r.kind {
        return Err(CliError::Config(format!(
            "preset {} describes a delay surface; use the delay-surface command",
            r.preset.as_deref().unwrap_or("")
        )));
    }
    let mut grid = r.grid.unwrap_or_else(|| GridSpec::center_refined(&r.config));
    if let Some(n) = args.grid_points {
        grid.uniform_points = n;
    }
    let files = spectrum_outputs(&r.config, &grid, args.prominence)?;
    let outputs = write_outputs(&args.out, &files)?;
    let inputs = ManifestInputs {
        command: "spectrum",
        preset: r.preset,
        config: r.config,
        grid,
        eta: None,
        prominence: args.prominence,
        assumptions: r.assumptions,
        warnings: r.warnings,
    };
    write_manifest(&args.out, inputs, outputs)?;
    if let Some(kind) = args.emit_plot {
        emit_plot(&args.out, "spectrum.csv", kind)?;
    }
    println!(
        "wrote spectrum.csv, features.json, manifest.json to {}",
        args.out.display()
    );
    Ok(())
}

pub fn cmd_delay_surface(args: &SurfaceArgs) -> Result<(), CliError> {
    if matches!(args.emit_plot, Some(k) if k != PlotKind::Surface) {
        return Err(CliError::Config(
            "delay-surface runs only support --emit-plot surface".into(),
        ));
    }
    let r = resolve(&args.source, Some("fig6"))?;
    let mut assumptions = r.assumptions;
    let (mut grid, mut eta) = match (r.kind, r.grid) {
        (Some(PresetKind::DelaySurface { eta }), Some(grid)) => (grid, eta),
        _ => {
            assumptions.push("eta = g_m/g_c spans [0, 2] with 200 points; g_m of the input is ignored".into());
            assumptions.push("detuning grid: 200 uniform points over delta/omega_b in [0.5, 1.5]".into());
            (
                GridSpec::uniform(FIG6_POINTS, 0.5, 1.5),
                EtaRange {
                    lo: 0.0,
                    hi: FIG6_ETA_MAX,
                    points: FIG6_POINTS,
                },
            )
        }
    };
    if let Some(n) = args.grid_points {
        grid.uniform_points = n;
    }
    if let Some(e) = args.eta {
        eta = e.0;
    }
    let files = surface_outputs(&r.config, &grid, &eta)?;
    let outputs = write_outputs(&args.out, &files)?;
    let inputs = ManifestInputs {
        command: "delay-surface",
        preset: r.preset,
        config: r.config,
        grid,
        eta: Some(eta),
        prominence: None,
        assumptions,
        warnings: r.warnings,
    };
    write_manifest(&args.out, inputs, outputs)?;
    if args.emit_plot.is_some() {
        emit_plot(&args.out, "surface.csv", PlotKind::Surface)?;
    }
    println!(
        "wrote surface.csv, summary.json, manifest.json to {}",
        args.out.display()
    );
    Ok(())
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let convention: SignConvention = args.convention.into();
    let report = run_suite(convention, args.long_run);
    for c in &report.checks {
        println!("{}", c.line());
    }
    let passed = report.checks.iter().filter(|c| c.passed).count();
    println!(
        "{passed}/{} checks passed (convention {convention})",
        report.checks.len()
    );
    if let Some(path) = &args.report {
        fs::write(path, json_bytes(&report)).map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))?;
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "{} check(s) failed",
            report.checks.len() - passed
        )))
    }
}

pub fn cmd_plot(args: &PlotArgs) -> Result<(), CliError> {
    let script = emit_plot_script(&args.table, args.kind).map_err(plot_error)?;
    let out = args.out.clone().unwrap_or_else(|| {
        args.table
            .parent()
            .unwrap_or(Path::new("."))
            .join(format!("plot_{}.py", args.kind.as_str()))
    });
    fs::write(&out, script).map_err(|e| runtime(format!("cannot write {}: {e}", out.display())))?;
    println!("wrote {}", out.display());
    Ok(())
}

pub fn cmd_replay(args: &ReplayArgs) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.manifest)
        .map_err(|e| CliError::Config(format!("cannot read manifest {}: {e}", args.manifest.display())))?;
    let recorded: RunManifest =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", args.manifest.display())))?;
    let files = match recorded.command.as_str() {
        "spectrum" => spectrum_outputs(&recorded.config, &recorded.grid, recorded.prominence)?,
        "delay-surface" => {
            let eta = recorded
                .eta
                .ok_or_else(|| CliError::Config("delay-surface manifest lacks an eta range".into()))?;
            surface_outputs(&recorded.config, &recorded.grid, &eta)?
        }
        other => return Err(CliError::Config(format!("cannot replay command {other:?}"))),
    };
    let outputs = write_outputs(&args.out, &files)?;
    let mut mismatches = 0;
    for (new, old) in outputs.iter().zip(&recorded.outputs) {
        let same = new.file == old.file && new.sha256 == old.sha256;
        mismatches += usize::from(!same);
        println!("{} {}", if same { "MATCH" } else { "DIFFER" }, new.file);
    }
    if outputs.len() != recorded.outputs.len() {
        mismatches += 1;
    }
    let inputs = ManifestInputs {
        command: if recorded.command == "spectrum" {
            "spectrum"
        } else {
            "delay-surface"
        },
        preset: recorded.preset.clone(),
        config: recorded.config,
        grid: recorded.grid,
        eta: recorded.eta,
        prominence: recorded.prominence,
        assumptions: recorded.assumptions.clone(),
        warnings: recorded.warnings.clone(),
    };
    let manifest = write_manifest(&args.out, inputs, outputs)?;
    if mismatches == 0 && manifest.reproducibility_hash == recorded.reproducibility_hash {
        println!("reproduced {}", recorded.reproducibility_hash);
        Ok(())
    } else {
        Err(CliError::Failed("replayed outputs differ from the manifest".into()))
    }
}
