//! Plot-script emission. Scripts are plain Python using numpy and
//! matplotlib; nothing is rendered here.

use std::path::Path;

use crate::args::PlotKind;
use crate::tables::{SPECTRUM_HEADER, SURFACE_HEADER};

#[derive(Debug, thiserror::Error)]
pub enum PlotError {
    #[error("cannot read table {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path} is not a {expected} table (header {found:?})")]
    WrongTable {
        path: String,
        expected: &'static str,
        found: String,
    },
}

/// `(column, axis label)` plotted against `delta_over_omega_b`.
fn line_column(kind: PlotKind) -> Option<(&'static str, &'static str)> {
    match kind {
        PlotKind::Absorption => Some(("absorption", "Re[eps_out]")),
        PlotKind::Dispersion => Some(("dispersion", "Im[eps_out]")),
        PlotKind::Transmission => Some(("transmission", "|t_p|^2")),
        PlotKind::Phase => Some(("phase_rad", "arg t_p (rad)")),
        PlotKind::Delay => Some(("tau_eq8_s", "group delay (s)")),
        PlotKind::Surface => None,
    }
}

fn py_str(s: &str) -> String {
    // JSON string literals are valid Python string literals
    serde_json::to_string(s).expect("string serializes")
}

/// Script text for `table` (its header must match `kind`).
pub fn emit_plot_script(table: &Path, kind: PlotKind) -> Result<String, PlotError> {
    let path = table.display().to_string();
    let text = std::fs::read_to_string(table).map_err(|source| PlotError::Read {
        path: path.clone(),
        source,
    })?;
    let header = text.lines().next().unwrap_or("").to_string();
    let (expected, expected_header) = match kind {
        PlotKind::Surface => ("surface", SURFACE_HEADER),
        _ => ("spectrum", SPECTRUM_HEADER),
    };
    if header != expected_header {
        return Err(PlotError::WrongTable {
            path,
            expected,
            found: header,
        });
    }
    let abs = std::fs::canonicalize(table).unwrap_or_else(|_| table.to_path_buf());
    Ok(script(&abs.display().to_string(), kind))
}

pub fn script(table: &str, kind: PlotKind) -> String {
    let mut s = String::new();
    s.push_str("#!/usr/bin/env python3\n");
    s.push_str(&format!(
        "# {} plot generated by aomm {}\n",
        kind.as_str(),
        env!("CARGO_PKG_VERSION")
    ));
    s.push_str("import sys\n\nimport matplotlib\nmatplotlib.use(\"Agg\")\nimport matplotlib.pyplot as plt\nimport numpy as np\n\n");
    s.push_str(&format!("TABLE = {}\n", py_str(table)));
    s.push_str(&format!(
        "OUT = sys.argv[1] if len(sys.argv) > 1 else {}\n\n",
        py_str(&format!("{}.png", kind.as_str()))
    ));
    s.push_str("data = np.genfromtxt(TABLE, delimiter=\",\", names=True)\n");
    match line_column(kind) {
        Some((column, label)) => {
            s.push_str("fig, ax = plt.subplots(figsize=(6, 4))\n");
            s.push_str(&format!(
                "ax.plot(data[\"delta_over_omega_b\"], data[{}], lw=1.0)\n",
                py_str(column)
            ));
            s.push_str("ax.set_xlabel(\"delta / omega_b\")\n");
            s.push_str(&format!("ax.set_ylabel({})\n", py_str(label)));
        }
        None => {
            s.push_str("eta = np.unique(data[\"eta\"])\n");
            s.push_str("delta = np.unique(data[\"delta_over_omega_b\"])\n");
            s.push_str("tau = data[\"tau_s\"].reshape(len(eta), len(delta))\n");
            s.push_str("fig, ax = plt.subplots(figsize=(6, 4.5))\n");
            s.push_str("mesh = ax.pcolormesh(delta, eta, tau, shading=\"nearest\", cmap=\"RdBu_r\")\n");
            s.push_str("fig.colorbar(mesh, ax=ax, label=\"group delay (s)\")\n");
            s.push_str("ax.set_xlabel(\"delta / omega_b\")\n");
            s.push_str("ax.set_ylabel(\"eta = g_m / g_c\")\n");
        }
    }
    s.push_str("fig.tight_layout()\nfig.savefig(OUT, dpi=150)\n");
    s
}
