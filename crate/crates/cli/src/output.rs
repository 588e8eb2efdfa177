//! Artifact writers: `trajectory.csv`, `report.json`, `manifest.json`.
//!
//! Output is deliberately boring so reruns are comparable byte for byte:
//! every float is printed as `{:.12e}`, lines end in `\n`, JSON objects are
//! key-sorted, and nothing records a timestamp.

use std::path::Path;

use collective_decay::{Error, Result};
use serde_json::{json, Value};

use crate::scenarios::Artifacts;

pub fn write_artifacts(out_dir: &Path, artifacts: &Artifacts) -> Result<()> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| Error::Parse(format!("cannot create `{}`: {e}", out_dir.display())))?;
    write_file(&out_dir.join("trajectory.csv"), &render_csv(artifacts))?;
    write_file(
        &out_dir.join("report.json"),
        &render_json(&artifacts.report)?,
    )?;
    write_file(
        &out_dir.join("manifest.json"),
        &render_json(&manifest(artifacts))?,
    )?;
    Ok(())
}

fn render_csv(artifacts: &Artifacts) -> String {
    let mut text = artifacts.columns.join(",");
    text.push('\n');
    for row in &artifacts.rows {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:.12e}")).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    text
}

fn render_json(value: &Value) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Parse(format!("serialization: {e}")))?;
    text.push('\n');
    Ok(text)
}

fn manifest(artifacts: &Artifacts) -> Value {
    json!({
        "scenario": artifacts.scenario,
        "parameters": artifacts.parameters,
        "tolerances": artifacts.tolerances,
        "versions": {
            "collective-decay": env!("CARGO_PKG_VERSION"),
            "sim": env!("CARGO_PKG_VERSION"),
        },
        "outputs": {
            "trajectory": "trajectory.csv",
            "report": "report.json",
            "columns": artifacts.columns,
        },
    })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)
        .map_err(|e| Error::Parse(format!("cannot write `{}`: {e}", path.display())))
}
