//! Cross-verification suite behind `aomm verify`.
//!
//! Each check measures one quantity and compares it with a fixed tolerance.
//! Random samples come from a seeded generator, so reports are reproducible.

use std::f64::consts::TAU;
use std::time::Instant;

use aomm_core::linalg;
use aomm_core::model::{default_config, hz_to_rad, Couplings, ModeRates, SignConvention, SystemConfig};
use aomm_core::presets::preset;
use aomm_core::response::{self, DelayMode, ResponseError};
use aomm_core::spectra::{extract_features, extract_features_of, sweep_spectrum, GridSpec, Observable};
use aomm_core::tdoracle::{self, OracleError, ORACLE_TOLERANCE};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const SEED: u64 = 0x5eed_a0aa;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Worst measured value of the checked quantity.
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
    pub seconds: f64,
}

impl Check {
    pub fn line(&self) -> String {
        format!(
            "{} {:<28} measured={:<12.4e} tolerance={:<10.3e} {:>7.3}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.tolerance,
            self.seconds,
            self.detail
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub convention: SignConvention,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Rates and couplings log-uniform in `[2π·10² Hz, 2π·2·10⁷ Hz]`, default `ω_b`.
pub fn random_config(rng: &mut impl Rng, convention: SignConvention, max_coupling_hz: f64) -> SystemConfig {
    let mut log_uniform = |hi_hz: f64| hz_to_rad(10f64.powf(rng.gen_range(2.0..=hi_hz.log10())));
    let rates = ModeRates {
        kappa_a: log_uniform(2e7),
        kappa_c: log_uniform(2e7),
        kappa_m: log_uniform(2e7),
        kappa_b: log_uniform(2e7),
    };
    let couplings = Couplings {
        g_a: log_uniform(max_coupling_hz),
        g_c: log_uniform(max_coupling_hz),
        g_m: log_uniform(max_coupling_hz),
    };
    default_config()
        .with_rates(rates)
        .with_couplings(couplings)
        .with_convention(convention)
}

fn fig3d(convention: SignConvention) -> SystemConfig {
    default_config()
        .with_couplings(Couplings::from_hz(8e6, 8e6, 8e6))
        .with_convention(convention)
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

type Measured = Result<(f64, String), String>;

fn timed(name: &'static str, tolerance: f64, strict: bool, f: impl FnOnce() -> Measured) -> Check {
    let start = Instant::now();
    let result = f();
    let seconds = start.elapsed().as_secs_f64();
    match result {
        Ok((measured, detail)) => Check {
            name,
            passed: if strict {
                measured < tolerance
            } else {
                measured <= tolerance
            },
            measured,
            tolerance,
            detail,
            seconds,
        },
        Err(detail) => Check {
            name,
            passed: false,
            measured: f64::NAN,
            tolerance,
            detail,
            seconds,
        },
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn closed_form_vs_solve(conv: SignConvention, rng: &mut ChaCha8Rng) -> Measured {
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let cfg = random_config(rng, conv, 2e7);
        for _ in 0..1000 {
            let l = rng.gen_range(-cfg.omega_b..=cfg.omega_b);
            let exact = response::solve_sidebands(&cfg, l).map_err(err)?.c_plus;
            let closed = response::c_plus_closed_form(&cfg, l).map_err(err)?;
            worst = worst.max((closed - exact).norm() / exact.norm());
        }
    }
    Ok((worst, "20 configs x 1000 detunings".into()))
}

fn solve_residual(conv: SignConvention, rng: &mut ChaCha8Rng) -> Measured {
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let cfg = random_config(rng, conv, 2e7);
        let l = rng.gen_range(-cfg.omega_b..=cfg.omega_b);
        let sys = response::sideband_matrix(&cfg, l).map_err(err)?;
        let x = response::solve_sidebands(&cfg, l).map_err(err)?.to_vec4();
        let r = linalg::sub(&linalg::mat_vec(&sys.matrix, &x), &sys.drive);
        worst = worst.max(linalg::norm(&r) / linalg::norm(&sys.drive));
    }
    Ok((worst, "||Mx - v|| / ||v||, 200 samples".into()))
}

fn bare_cavity(conv: SignConvention) -> Measured {
    let cfg = default_config().with_convention(conv);
    let r = response::probe_response_at(&cfg, 0.0).map_err(err)?;
    let tau = response::group_delay(&cfg, cfg.omega_b, DelayMode::OutputField).map_err(err)?;
    // the mirrored orientation reverses the phase slope
    let expected_tau = match conv {
        SignConvention::Standard => 1.0 / cfg.rates.kappa_c,
        SignConvention::Paper => -1.0 / cfg.rates.kappa_c,
    };
    let worst = (r.absorption - 2.0)
        .abs()
        .max(r.dispersion.abs())
        .max((r.transmission - 1.0).abs())
        .max(rel(tau, expected_tau));
    Ok((worst, format!("absorption={} tau={:e}s", r.absorption, tau)))
}

fn omit_center(conv: SignConvention) -> Measured {
    let cfg = default_config()
        .with_couplings(Couplings::from_hz(0.0, 8e6, 0.0))
        .with_convention(conv);
    let r = response::probe_response_at(&cfg, 0.0).map_err(err)?;
    let (kc, kb, gc) = (cfg.rates.kappa_c, cfg.rates.kappa_b, cfg.couplings.g_c);
    let expected = 2.0 * kc * kb / (gc * gc);
    Ok((rel(r.absorption, expected), format!("absorption={:e}", r.absorption)))
}

fn delay_vs_fd(conv: SignConvention, rng: &mut ChaCha8Rng) -> Measured {
    let mut worst: f64 = 0.0;
    let mut used = 0;
    let mut skipped = 0;
    while used < 200 {
        let cfg = random_config(rng, conv, 2e7);
        let l = rng.gen_range(-1.0..=1.0) * 10f64.powf(rng.gen_range(3.0..=8.0));
        let delta = cfg.omega_b + l;
        for mode in [DelayMode::OutputField, DelayMode::TransmissionPhase] {
            let analytic = response::group_delay(&cfg, delta, mode);
            let fd = response::group_delay_finite_difference(&cfg, delta, mode);
            match (analytic, fd) {
                (Ok(a), Ok(f)) => worst = worst.max(rel(f, a)),
                (Err(ResponseError::DelayUndefined { .. }), _) | (_, Err(ResponseError::DelayUndefined { .. })) => {
                    skipped += 1
                }
                (Err(e), _) | (_, Err(e)) => return Err(err(e)),
            }
        }
        used += 1;
    }
    Ok((worst, format!("{used} samples x 2 modes, {skipped} undefined")))
}

fn passivity(conv: SignConvention, rng: &mut ChaCha8Rng) -> Measured {
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..100 {
        let cfg = random_config(rng, conv, 2e7);
        let grid = GridSpec::uniform(1001, 0.0, 2.0).build(cfg.omega_b).map_err(err)?;
        for &l in grid.lambdas() {
            let r = response::probe_response_at(&cfg, l).map_err(err)?;
            worst = worst.max(r.transmission);
        }
    }
    Ok((worst, "max |t_p|^2, 100 configs x 1001 detunings".into()))
}

fn homogeneity(conv: SignConvention) -> Measured {
    let base = fig3d(conv);
    let mut worst: f64 = 0.0;
    for l in [-3e6, 0.0, 1e3, 4e7] {
        let r1 = response::probe_response_at(&base, l).map_err(err)?;
        let t1 = response::group_delay(&base, base.omega_b + l, DelayMode::OutputField).map_err(err)?;
        for alpha in [1e-3, 1e3] {
            let cfg = base.with_probe_amplitude(alpha);
            let r = response::probe_response_at(&cfg, l).map_err(err)?;
            let t = response::group_delay(&cfg, cfg.omega_b + l, DelayMode::OutputField).map_err(err)?;
            worst = worst
                .max((r.eps_out - r1.eps_out).norm() / r1.eps_out.norm())
                .max((r.t_p - r1.t_p).norm() / r1.t_p.norm())
                .max(rel(t, t1));
        }
    }
    Ok((worst, "eps_p in {1e-3, 1, 1e3}".into()))
}

fn branch_decoupling(conv: SignConvention) -> Measured {
    let full = fig3d(conv);
    let mut no_atom = full;
    no_atom.couplings.g_a = 0.0;
    let mut no_magnon = full;
    no_magnon.couplings.g_m = 0.0;
    let mut leaked: f64 = 0.0;
    for l in [-5e6, 0.0, 2.5e6] {
        leaked = leaked.max(response::solve_sidebands(&no_atom, l).map_err(err)?.a_plus.norm());
        leaked = leaked.max(response::solve_sidebands(&no_magnon, l).map_err(err)?.m_plus.norm());
    }
    Ok((leaked, "|a_+| with g_a = 0, |m_+| with g_m = 0".into()))
}

fn mirror() -> Measured {
    let cfg = fig3d(SignConvention::Standard);
    let grid = GridSpec::center_refined(&cfg).build(cfg.omega_b).map_err(err)?;
    let s = sweep_spectrum(&cfg, &grid).map_err(err)?;
    let p = sweep_spectrum(&cfg.with_convention(SignConvention::Paper), &grid).map_err(err)?;
    let mismatches = s
        .rows
        .iter()
        .zip(p.rows.iter().rev())
        .filter(|(a, b)| {
            a.lambda != -b.lambda
                || a.absorption != b.absorption
                || a.dispersion != b.dispersion
                || a.transmission != b.transmission
        })
        .count();
    Ok((mismatches as f64, format!("{} rows compared", s.len())))
}

fn determinism(conv: SignConvention) -> Measured {
    let cfg = fig3d(conv);
    let grid = GridSpec::center_refined(&cfg).build(cfg.omega_b).map_err(err)?;
    let a = sweep_spectrum(&cfg, &grid).map_err(err)?;
    let b = sweep_spectrum(&cfg, &grid).map_err(err)?;
    let differing = a.rows.iter().zip(&b.rows).filter(|(x, y)| x != y).count();
    Ok((differing as f64, "rows differing between two sweeps".into()))
}

fn window_split(conv: SignConvention) -> Measured {
    let count = |name: &str| -> Result<usize, String> {
        let p = preset(name).ok_or("missing preset")?;
        let cfg = p.config.with_convention(conv);
        let table = sweep_spectrum(&cfg, &p.grid.build(cfg.omega_b).map_err(err)?).map_err(err)?;
        Ok(extract_features(&table, None).map_err(err)?.window_count)
    };
    let (c, d) = (count("fig3c")?, count("fig3d")?);
    let off = (d as f64 - c as f64 - 1.0).abs();
    Ok((off, format!("windows: fig3c={c} fig3d={d}")))
}

fn width_monotone(conv: SignConvention) -> Measured {
    // measured: worst ratio width(4 MHz)/width(8 MHz); must stay below 1
    let mut worst: f64 = 0.0;
    let mut detail = Vec::new();
    for (narrow, wide) in [("fig5a", "fig5b"), ("fig5c", "fig5d")] {
        let width = |name: &str| -> Result<f64, String> {
            let p = preset(name).ok_or("missing preset")?;
            let cfg = p.config.with_convention(conv);
            let table = sweep_spectrum(&cfg, &p.grid.build(cfg.omega_b).map_err(err)?).map_err(err)?;
            let report = extract_features_of(&table, Observable::Extinction, None).map_err(err)?;
            report
                .central_window()
                .map(|w| w.width)
                .ok_or_else(|| format!("{name}: no transmission window"))
        };
        let (a, b) = (width(narrow)?, width(wide)?);
        worst = worst.max(a / b);
        detail.push(format!("{narrow}={a:.4} {wide}={b:.4}"));
    }
    Ok((worst, detail.join(" ")))
}

#[allow(clippy::needless_range_loop)]
fn drift_dissipative(conv: SignConvention) -> Measured {
    // A + A^H = -2 diag(kappa) < 0 bounds every eigenvalue to Re < 0
    let cfg = fig3d(conv);
    let a = tdoracle::drift_matrix(&cfg);
    let k = cfg.rates.as_array();
    let mut dev: f64 = 0.0;
    let mut worst_diag = f64::NEG_INFINITY;
    for i in 0..4 {
        for j in 0..4 {
            let h = a[i][j] + a[j][i].conj();
            if i == j {
                dev = dev.max((h.re + 2.0 * k[i]).abs());
                worst_diag = worst_diag.max(h.re);
            } else {
                dev = dev.max(h.norm());
            }
        }
    }
    if dev != 0.0 {
        return Err(format!("A + A^H deviates from -2 diag(kappa) by {dev:e}"));
    }
    Ok((worst_diag, "largest diagonal of A + A^H (rad/s)".into()))
}

fn oracle_dc() -> Measured {
    let cfg = tdoracle::desk_scale(&default_config());
    let r = tdoracle::cross_check(&cfg, &[0.0], None, ORACLE_TOLERANCE).map_err(err)?;
    Ok((r[0].relative_error, "bare cavity, lambda = 0".into()))
}

fn oracle_fig3d(conv: SignConvention) -> Measured {
    let cfg = tdoracle::desk_scale(&fig3d(conv));
    let kc = cfg.rates.kappa_c;
    let lambdas = [0.0, kc, -kc, 5.0 * kc, -5.0 * kc];
    let res = tdoracle::cross_check(&cfg, &lambdas, None, ORACLE_TOLERANCE).map_err(err)?;
    let mut worst: f64 = 0.0;
    for r in &res {
        if !r.converged {
            return Err(format!(
                "lambda = {:e}: transient {:e} not converged",
                r.lambda, r.transient_estimate
            ));
        }
        let resid = tdoracle::steady_state_residual(&cfg, r.lambda, &r.amplitudes.to_vec4());
        worst = worst.max(r.relative_error).max(resid);
    }
    Ok((worst, "desk scale, lambda in {0, +-kc, +-5kc}".into()))
}

fn rk4_order() -> Measured {
    let r = tdoracle::bare_cavity_convergence(&default_config()).map_err(err)?;
    let dev = r.orders.iter().map(|p| (p - 4.0).abs()).fold(0.0, f64::max);
    let orders: Vec<String> = r.orders.iter().map(|p| format!("{p:.3}")).collect();
    Ok((dev, format!("observed orders {}", orders.join(", "))))
}

fn instability_guard(conv: SignConvention) -> Measured {
    let cfg = tdoracle::desk_scale(&fig3d(conv));
    let spec = tdoracle::IntegrationSpec::recommended(&cfg, 0.0);
    match tdoracle::integrate_with_drift(&cfg, &tdoracle::anti_damped_drift_matrix(&cfg), 0.0, &spec) {
        Err(OracleError::Unstable { t, .. }) => Ok((0.0, format!("aborted at t = {t:.3e} s"))),
        Err(e) => Err(err(e)),
        Ok(_) => Ok((1.0, "anti-damped run completed".into())),
    }
}

fn long_run(conv: SignConvention) -> Measured {
    let cfg = fig3d(conv);
    let l = cfg.rates.kappa_c;
    let r = tdoracle::cross_check(&cfg, &[l], None, ORACLE_TOLERANCE).map_err(err)?;
    if !r[0].converged {
        return Err(format!("transient {:e} not converged", r[0].transient_estimate));
    }
    Ok((
        r[0].relative_error,
        format!("kappa_b/2pi = {} Hz, lambda = kappa_c", cfg.rates.kappa_b / TAU),
    ))
}

pub fn run_suite(convention: SignConvention, long: bool) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let c = convention;
    let mut checks = vec![
        timed("closed_form_vs_solve", 1e-10, true, || {
            closed_form_vs_solve(c, &mut rng)
        }),
        timed("solve_residual", 1e-12, false, || solve_residual(c, &mut rng)),
        timed("bare_cavity_anchors", 1e-12, false, || bare_cavity(c)),
        timed("omit_center_absorption", 1e-3, true, || omit_center(c)),
        timed("delay_vs_finite_difference", 1e-6, true, || delay_vs_fd(c, &mut rng)),
        timed("passivity", 1.0 + 1e-9, false, || passivity(c, &mut rng)),
        timed("probe_homogeneity", 1e-12, false, || homogeneity(c)),
        timed("branch_decoupling", 0.0, false, || branch_decoupling(c)),
        timed("convention_mirror", 0.0, false, mirror),
        timed("sweep_determinism", 0.0, false, || determinism(c)),
        timed("window_split", 0.0, false, || window_split(c)),
        timed("window_width_monotone", 1.0, true, || width_monotone(c)),
        timed("drift_dissipative", 0.0, true, || drift_dissipative(c)),
        timed("oracle_bare_dc", 1e-6, true, oracle_dc),
        timed("oracle_fig3d", ORACLE_TOLERANCE, true, || oracle_fig3d(c)),
        timed("rk4_order", 0.15, true, rk4_order),
        timed("instability_guard", 0.0, false, || instability_guard(c)),
    ];
    if long {
        checks.push(timed("oracle_full_stiffness", ORACLE_TOLERANCE, true, || long_run(c)));
    }
    Report {
        convention,
        seed: SEED,
        checks,
    }
}
