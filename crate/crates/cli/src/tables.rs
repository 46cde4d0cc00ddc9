//! CSV serialization. Numbers are written as `d.dddddddddddddddde±x` with 17
//! significant digits; undefined values as `nan`; lines end in `\n`.

use std::fmt::Write as _;

use aomm_core::spectra::{DelaySurface, SpectrumTable};

pub const SPECTRUM_HEADER: &str =
    "delta_over_omega_b,lambda_rad_s,absorption,dispersion,transmission,phase_rad,tau_eq8_s,tau_phase_s";
pub const SURFACE_HEADER: &str = "eta,delta_over_omega_b,tau_s";

/// 17 significant digits, round-trips every finite `f64`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

fn format_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "nan".into(), format_number)
}

pub fn spectrum_csv(table: &SpectrumTable) -> String {
    let mut out = String::with_capacity(200 * (table.len() + 1));
    out.push_str(SPECTRUM_HEADER);
    out.push('\n');
    for r in &table.rows {
        let fields = [
            format_number(r.delta_over_omega_b),
            format_number(r.lambda),
            format_number(r.absorption),
            format_number(r.dispersion),
            format_number(r.transmission),
            format_number(r.phase),
            format_opt(r.tau_eq8),
            format_opt(r.tau_phase),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn surface_csv(surface: &DelaySurface) -> String {
    let mut out = String::new();
    out.push_str(SURFACE_HEADER);
    out.push('\n');
    for (i, row) in surface.tau.iter().enumerate() {
        let eta = format_number(surface.eta_values[i]);
        for (j, tau) in row.iter().enumerate() {
            let _ = writeln!(
                out,
                "{eta},{},{}",
                format_number(surface.delta_over_omega_b[j]),
                format_opt(*tau)
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(format_number(2.0), "2.0000000000000000e0");
        assert_eq!(format_number(-0.5), "-5.0000000000000000e-1");
        assert_eq!(format_number(f64::NAN), "nan");
        for x in [0.1, 1.0 / 3.0, 7.957747154594767e-8, f64::MIN_POSITIVE, f64::MAX] {
            assert_eq!(format_number(x).parse::<f64>().unwrap(), x);
        }
    }
}
