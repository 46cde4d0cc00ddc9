use std::collections::BTreeMap;

use aomm_core::model::{
    default_config, from_hz_over_2pi, hz_to_rad, to_hz_over_2pi, Couplings, ModeRates, SignConvention, SystemConfig,
};
use aomm_core::presets::preset;
use aomm_core::response::{self, DelayMode};
use aomm_core::spectra::{
    extract_features, extract_features_of, sweep_spectrum, window_width_vs_gm, GridSpec, Observable,
};
use proptest::prelude::*;

const HZ_KEYS: [&str; 11] = [
    "omega_b", "kappa_a", "kappa_c", "kappa_m", "kappa_b", "g_a", "g_c", "g_m", "offset_a", "offset_c", "offset_m",
];

fn log_hz() -> impl Strategy<Value = f64> {
    (2.0f64..7.3).prop_map(|e| 10f64.powf(e))
}

prop_compose! {
    fn config(max_coupling_exp: f64)(
        rates in prop::array::uniform4(log_hz()),
        g in prop::array::uniform3((2.0f64..max_coupling_exp).prop_map(|e| 10f64.powf(e))),
        paper in any::<bool>(),
    ) -> SystemConfig {
        default_config()
            .with_rates(ModeRates {
                kappa_a: hz_to_rad(rates[0]),
                kappa_c: hz_to_rad(rates[1]),
                kappa_m: hz_to_rad(rates[2]),
                kappa_b: hz_to_rad(rates[3]),
            })
            .with_couplings(Couplings::from_hz(g[0], g[1], g[2]))
            .with_convention(if paper { SignConvention::Paper } else { SignConvention::Standard })
    }
}

fn hz_map(values: &[f64]) -> BTreeMap<String, f64> {
    HZ_KEYS.iter().zip(values).map(|(k, v)| (k.to_string(), *v)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hz_round_trip(rates in prop::collection::vec(log_hz(), 8), offsets in prop::collection::vec(-1e6f64..1e6, 3)) {
        let mut values = rates;
        values.extend(offsets);
        let map = hz_map(&values);
        let back = to_hz_over_2pi(&from_hz_over_2pi(&map).unwrap());
        for (k, v) in &map {
            let got = back[k];
            prop_assert!((got - v).abs() <= 2.0 * f64::EPSILON * v.abs(), "{k}: {got} vs {v}");
        }
    }

    #[test]
    fn hz_conversion_is_linear(rates in prop::collection::vec(log_hz(), 8), alpha in 0.01f64..100.0) {
        let mut values = rates;
        values.extend([0.0; 3]);
        let base = from_hz_over_2pi(&hz_map(&values)).unwrap();
        let scaled: Vec<f64> = values.iter().map(|v| v * alpha).collect();
        let s = from_hz_over_2pi(&hz_map(&scaled)).unwrap();
        let pairs = [
            (s.omega_b, base.omega_b),
            (s.rates.kappa_a, base.rates.kappa_a),
            (s.rates.kappa_c, base.rates.kappa_c),
            (s.rates.kappa_m, base.rates.kappa_m),
            (s.rates.kappa_b, base.rates.kappa_b),
            (s.couplings.g_a, base.couplings.g_a),
            (s.couplings.g_c, base.couplings.g_c),
            (s.couplings.g_m, base.couplings.g_m),
        ];
        for (got, b) in pairs {
            prop_assert!((got - alpha * b).abs() <= 4.0 * f64::EPSILON * got.abs());
        }
    }

    #[test]
    fn closed_form_matches_solve(cfg in config(7.3), s in -1.0f64..1.0) {
        let l = s * cfg.omega_b;
        let exact = response::solve_sidebands(&cfg, l).unwrap().c_plus;
        let closed = response::c_plus_closed_form(&cfg, l).unwrap();
        prop_assert!((closed - exact).norm() / exact.norm() < 1e-10);
    }

    #[test]
    fn passive(cfg in config(7.3), s in -1.0f64..1.0) {
        let r = response::probe_response_at(&cfg, s * cfg.omega_b).unwrap();
        prop_assert!(r.transmission <= 1.0 + 1e-9);
        prop_assert!(r.transmission >= 0.0);
        prop_assert_eq!(r.t_p, num_complex::Complex64::new(1.0, 0.0) - r.eps_out);
    }

    #[test]
    fn probe_amplitude_cancels(cfg in config(7.3), s in -1.0f64..1.0, alpha in prop::sample::select(vec![1e-3, 1e3])) {
        let l = s * cfg.omega_b;
        let a = response::probe_response_at(&cfg, l).unwrap();
        let b = response::probe_response_at(&cfg.with_probe_amplitude(alpha), l).unwrap();
        prop_assert!((a.eps_out - b.eps_out).norm() <= 1e-12 * a.eps_out.norm());
        let ta = response::group_delay(&cfg, cfg.omega_b + l, DelayMode::OutputField).unwrap();
        let tb = response::group_delay(&cfg.with_probe_amplitude(alpha), cfg.omega_b + l, DelayMode::OutputField).unwrap();
        prop_assert!((ta - tb).abs() <= 1e-12 * ta.abs());
        // amplitudes themselves are linear
        let xa = response::solve_sidebands(&cfg, l).unwrap().c_plus;
        let xb = response::solve_sidebands(&cfg.with_probe_amplitude(alpha), l).unwrap().c_plus;
        prop_assert!((xb - xa * alpha).norm() <= 1e-12 * xb.norm());
    }

    #[test]
    fn conventions_mirror(cfg in config(7.3), s in -1.0f64..1.0) {
        let l = s * cfg.omega_b;
        let std = cfg.with_convention(SignConvention::Standard);
        let pap = cfg.with_convention(SignConvention::Paper);
        let a = response::probe_response_at(&std, l).unwrap();
        let b = response::probe_response_at(&pap, -l).unwrap();
        prop_assert_eq!(a.eps_out, b.eps_out);
        let ta = response::group_delay(&std, std.omega_b + l, DelayMode::OutputField).unwrap();
        let tb = response::group_delay(&pap, pap.omega_b - l, DelayMode::OutputField).unwrap();
        prop_assert!((ta + tb).abs() <= 1e-12 * ta.abs());
    }

    #[test]
    fn branch_removal_is_exact(cfg in config(7.3), s in -1.0f64..1.0) {
        let l = s * cfg.omega_b;
        let mut three = cfg;
        three.couplings.g_a = 0.0;
        let x = response::solve_sidebands(&three, l).unwrap();
        prop_assert_eq!(x.a_plus.norm(), 0.0);
        let mut omit = cfg;
        omit.couplings.g_m = 0.0;
        prop_assert_eq!(response::solve_sidebands(&omit, l).unwrap().m_plus.norm(), 0.0);
    }
}

#[test]
fn fig3_counts_stable_under_densification() {
    for name in ["fig3a", "fig3b", "fig3c", "fig3d"] {
        let p = preset(name).unwrap();
        let coarse = p.grid.build(p.config.omega_b).unwrap();
        let fine = p.grid.densified().build(p.config.omega_b).unwrap();
        let a = extract_features(&sweep_spectrum(&p.config, &coarse).unwrap(), None).unwrap();
        let b = extract_features(&sweep_spectrum(&p.config, &fine).unwrap(), None).unwrap();
        assert_eq!(a.window_count, b.window_count, "{name}");
        for (u, v) in a.windows.iter().zip(&b.windows) {
            assert!(
                (u.width - v.width).abs() < 1e-3 * u.width,
                "{name}: {} vs {}",
                u.width,
                v.width
            );
        }
    }
}

#[test]
fn window_centers_sit_on_derivative_sign_changes() {
    for name in ["fig3b", "fig3c", "fig3d", "fig5c"] {
        let p = preset(name).unwrap();
        let grid = p.grid.build(p.config.omega_b).unwrap();
        let table = sweep_spectrum(&p.config, &grid).unwrap();
        let x = table.abscissa();
        let y = table.column(Observable::Absorption);
        let report = extract_features(&table, None).unwrap();
        assert!(report.windows.windows(2).all(|w| w[0].center < w[1].center));
        for w in &report.windows {
            assert!(w.width > 0.0);
            let i = x.iter().position(|&v| v == w.center).unwrap();
            let flips = (i.saturating_sub(1)..(i + 1).min(x.len() - 2)).any(|k| {
                let d0 = y[k] - y[k.saturating_sub(1)];
                let d1 = y[k + 1] - y[k];
                d0 <= 0.0 && d1 >= 0.0
            });
            assert!(flips, "{name}: window at {}", w.center);
        }
    }
}

#[test]
fn widths_scale_with_all_rates() {
    let base = default_config().with_couplings(Couplings::from_hz(8e6, 8e6, 0.0));
    let gm = [hz_to_rad(4e6), hz_to_rad(8e6)];
    let spec = GridSpec::center_refined(&base);
    let w1 = window_width_vs_gm(&base, &gm, &spec).unwrap();
    for factor in [2.0, 3.0] {
        let scaled = base
            .with_rates(base.rates.scaled(factor))
            .with_couplings(base.couplings.scaled(factor));
        let gm_scaled: Vec<f64> = gm.iter().map(|g| g * factor).collect();
        let w2 = window_width_vs_gm(&scaled, &gm_scaled, &spec.scaled(factor)).unwrap();
        for ((_, a), (_, b)) in w1.iter().zip(&w2) {
            let (a, b) = (a.unwrap(), b.unwrap());
            let tol = if factor == 2.0 { 1e-12 } else { 1e-6 };
            assert!((b / a - factor).abs() < tol * factor, "factor {factor}: {a} -> {b}");
        }
    }
}

#[test]
fn omit_branch_matches_fig3b_features() {
    let p = preset("fig3b").unwrap();
    let grid = p.grid.build(p.config.omega_b).unwrap();
    let widths = window_width_vs_gm(&p.config, &[0.0], &p.grid).unwrap();
    let table = sweep_spectrum(&p.config, &grid).unwrap();
    let direct = extract_features_of(&table, Observable::Extinction, None).unwrap();
    assert_eq!(widths[0].1, direct.central_window().map(|w| w.width));
}

#[test]
fn sweeps_are_bit_reproducible() {
    let p = preset("fig3d").unwrap();
    let grid = p.grid.build(p.config.omega_b).unwrap();
    let a = sweep_spectrum(&p.config, &grid).unwrap();
    let b = sweep_spectrum(&p.config, &grid).unwrap();
    assert_eq!(a, b);
}
