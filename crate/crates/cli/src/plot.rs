//! Matplotlib script rendering a result file as grey-scale heatmaps
//! (white = 0, black = 1 for entanglement), with the degeneracy corridor
//! as a dashed contour when the result carries one.

use crate::config::{Format, SweepConfig, Task};

const TEMPLATE: &str = r#"#!/usr/bin/env python3
"""Heatmaps of a floquet-sweep result.

Usage: python3 plot.py [OUTPUT.png]
"""
import csv
import json
import math
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = @DATA@
FORMAT = @FORMAT@
X_LABEL = @XLABEL@
Y_LABEL = @YLABEL@
PANELS = @PANELS@
UNIT_RANGE = @UNIT@
CONTOUR = @CONTOUR@


def load():
    path = os.path.join(HERE, DATA)
    if FORMAT == "csv":
        with open(path, newline="") as fh:
            return list(csv.DictReader(fh))
    with open(path) as fh:
        return json.load(fh)["rows"]


def number(v):
    if v is None or v == "":
        return math.nan
    if isinstance(v, bool) or v in ("true", "false"):
        return 1.0 if v in (True, "true") else 0.0
    try:
        return float(v)
    except (TypeError, ValueError):
        return math.nan


def grid(rows, column):
    nx = max(int(r["ix"]) for r in rows) + 1
    ny = max(int(r["iy"]) for r in rows) + 1
    x, y = np.full(nx, math.nan), np.full(ny, math.nan)
    z = np.full((ny, nx), math.nan)
    for r in rows:
        ix, iy = int(r["ix"]), int(r["iy"])
        x[ix], y[iy] = number(r["x"]), number(r["y"])
        z[iy, ix] = number(r[column])
    return x, y, z


def main():
    rows = load()
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(HERE, "plot.png")
    if not rows or not PANELS:
        print("no data rows; nothing to plot")
        return 0
    fig, axes = plt.subplots(
        1, len(PANELS), figsize=(4.2 * len(PANELS), 3.6), squeeze=False
    )
    for ax, column in zip(axes[0], PANELS):
        x, y, z = grid(rows, column)
        limits = {"vmin": 0.0, "vmax": 1.0} if UNIT_RANGE else {}
        mesh = ax.pcolormesh(x, y, z, cmap="Greys", shading="nearest", **limits)
        if CONTOUR and len(x) > 1 and len(y) > 1:
            cx, cy, cz = grid(rows, CONTOUR)
            if np.nanmin(cz) < 0.5 < np.nanmax(cz):
                ax.contour(
                    cx, cy, cz, levels=[0.5], colors="tab:blue", linestyles="dashed"
                )
        ax.set_xlabel(X_LABEL)
        ax.set_ylabel(Y_LABEL)
        ax.set_title(column)
        fig.colorbar(mesh, ax=ax)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print("wrote " + out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
"#;

fn py_str(s: &str) -> String {
    serde_json::to_string(s).expect("string serializes")
}

/// Columns drawn as panels, and whether they live on `[0, 1]`.
fn panels(task: Task, columns: &[String]) -> (Vec<String>, bool) {
    let pick = |prefix: &str| -> Vec<String> {
        columns
            .iter()
            .filter(|c| c.starts_with(prefix) && !c.ends_with("_min") && !c.ends_with("_max"))
            .cloned()
            .collect()
    };
    let named = |names: &[&str]| -> Vec<String> {
        names
            .iter()
            .filter(|n| columns.iter().any(|c| c == *n))
            .map(|n| n.to_string())
            .collect()
    };
    match task {
        Task::Sweep => {
            let ent = pick("ent_");
            if ent.is_empty() {
                (pick("eps_"), false)
            } else {
                (ent, true)
            }
        }
        Task::Spectrum => (pick("eps_"), false),
        Task::Predict => (named(&["deviation"]), false),
        Task::SingleQubit => (named(&["mu", "mu_rwa", "mu_bessel", "mu_closed"]), false),
        Task::Validate => (named(&["max_diff"]), false),
    }
}

/// Script text for a result with the given columns.
pub fn plot_script(config: &SweepConfig, task: Task, columns: &[String], data_file: &str, format: Format) -> String {
    let (panels, unit) = panels(task, columns);
    let panel_list = format!("[{}]", panels.iter().map(|p| py_str(p)).collect::<Vec<_>>().join(", "));
    let contour = if columns.iter().any(|c| c == "corridor") {
        py_str("corridor")
    } else {
        "None".into()
    };
    let label = |p: crate::config::Parameter| py_str(&format!("{} / omega", p.name()));
    TEMPLATE
        .replace("@DATA@", &py_str(data_file))
        .replace("@FORMAT@", &py_str(if format == Format::Csv { "csv" } else { "json" }))
        .replace("@XLABEL@", &label(config.grid.x.param))
        .replace("@YLABEL@", &label(config.grid.y.param))
        .replace("@PANELS@", &panel_list)
        .replace("@UNIT@", if unit { "True" } else { "False" })
        .replace("@CONTOUR@", &contour)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_panels_are_entanglement_on_unit_range() {
        let cols: Vec<String> = [
            "ix", "iy", "x", "y", "corridor", "eps_0", "ent_0", "ent_1", "ent_min", "ent_max", "status",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        assert_eq!(
            panels(Task::Sweep, &cols),
            (vec!["ent_0".to_string(), "ent_1".to_string()], true)
        );
        assert_eq!(panels(Task::Predict, &cols).0, Vec::<String>::new());
    }
}
