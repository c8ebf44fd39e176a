//! CSV and plot-script emission.

use std::fs;
use std::path::{Path, PathBuf};

use crate::run::{RunOutput, Table};
use crate::scenario::Scenario;

pub const ERRORS_FILE: &str = "errors.csv";
pub const PLOT_FILE: &str = "plot.py";

/// Scientific notation with 15 significant digits; empty for a missing value.
pub fn format_value(x: Option<f64>) -> String {
    match x {
        Some(v) => format!("{v:.14e}"),
        None => String::new(),
    }
}

fn write_table(path: &Path, table: &Table) -> csv::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(&table.header)?;
    for row in &table.rows {
        let mut record = vec![row.topology.name().to_string()];
        record.extend(row.cells.iter().map(|&c| format_value(c)));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes one CSV per observable into `dir`, plus the errors sidecar when
/// any point failed. Returns the written paths.
pub fn write_outputs(dir: &Path, scenario: &Scenario, out: &RunOutput) -> csv::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for table in &out.tables {
        let path = dir.join(format!("{}.csv", table.observable.name()));
        write_table(&path, table)?;
        written.push(path);
    }
    let stale = dir.join(ERRORS_FILE);
    if out.errors.is_empty() {
        if stale.exists() {
            fs::remove_file(&stale)?;
        }
    } else {
        let mut w = csv::Writer::from_path(&stale)?;
        let mut header = vec!["observable".to_string(), "topology".into(), "point".into()];
        header.extend(scenario.sweeps.iter().map(|s| s.parameter.name().to_string()));
        header.push("message".into());
        w.write_record(&header)?;
        for e in &out.errors {
            let mut record = vec![e.observable.name().to_string(), e.topology.name().into(), e.point.to_string()];
            record.extend(e.coords.iter().map(|&c| format_value(Some(c))));
            record.push(e.message.clone());
            w.write_record(&record)?;
        }
        w.flush()?;
        written.push(stale);
    }
    Ok(written)
}

const PLOT_TEMPLATE: &str = r#"# Quick-look plots for the CSV files in this directory.
import glob
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd

SWEEPS = __SWEEPS__
here = os.path.dirname(os.path.abspath(__file__))

for path in sorted(glob.glob(os.path.join(here, "*.csv"))):
    name = os.path.splitext(os.path.basename(path))[0]
    if name == "errors":
        continue
    df = pd.read_csv(path)
    values = [c for c in df.columns if c != "topology" and c not in SWEEPS]
    curve = values[0] in ("tau", "delta_p")
    x = values[0] if curve else (SWEEPS[0] if SWEEPS else None)
    if x is None:
        continue
    groups = ["topology"] + (SWEEPS if curve else SWEEPS[1:])
    ys = values[1:] if curve else values
    fig, axes = plt.subplots(len(ys), 1, figsize=(6, 2.5 * len(ys)), squeeze=False)
    for ax, y in zip(axes[:, 0], ys):
        for key, g in df.groupby(groups):
            ax.plot(g[x], g[y], label=", ".join(str(k) for k in (key if isinstance(key, tuple) else (key,))))
        ax.set_xlabel(x)
        ax.set_ylabel(y)
    axes[0, 0].legend(fontsize="x-small")
    fig.tight_layout()
    fig.savefig(os.path.join(here, name + ".png"), dpi=120)
    plt.close(fig)
"#;

pub fn write_plot_script(dir: &Path, scenario: &Scenario) -> std::io::Result<PathBuf> {
    let sweeps: Vec<String> = scenario
        .sweeps
        .iter()
        .map(|s| format!("\"{}\"", s.parameter.name()))
        .collect();
    let script = PLOT_TEMPLATE.replace("__SWEEPS__", &format!("[{}]", sweeps.join(", ")));
    let path = dir.join(PLOT_FILE);
    fs::write(&path, script)?;
    Ok(path)
}
