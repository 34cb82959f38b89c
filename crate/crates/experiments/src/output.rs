//! Output artifacts: CSV tables with `#` metadata headers and JSON reports,
//! both embedding the resolved configuration.

use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::error::{ExperimentError, Result};

/// A named file body produced by a recipe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifact {
    pub file_name: String,
    pub contents: String,
}

/// Fixed 17-significant-digit rendering used for every float.
pub fn num(x: f64) -> String {
    // Adding 0.0 maps -0.0 to 0.0.
    format!("{:.16e}", x + 0.0)
}

/// CSV artifact: metadata comment lines followed by `body` (header row first).
pub fn csv(file_name: impl Into<String>, config: &ExperimentConfig, meta: &[(&str, String)], body: &str) -> Artifact {
    let mut contents = format!("# recipe: {}\n# config: {}\n", config.recipe, config.to_json());
    for (key, value) in meta {
        contents.push_str(&format!("# {key}: {value}\n"));
    }
    contents.push_str(body);
    Artifact { file_name: file_name.into(), contents }
}

/// JSON artifact with the report fields next to a `config` entry.
pub fn json_report(file_name: impl Into<String>, config: &ExperimentConfig, report: Value) -> Artifact {
    let mut object = match report {
        Value::Object(map) => map,
        other => {
            let mut map = serde_json::Map::new();
            map.insert("report".into(), other);
            map
        }
    };
    object.insert("config".into(), json!(config.to_json()));
    object.insert("recipe".into(), json!(config.recipe));
    let mut contents = serde_json::to_string_pretty(&Value::Object(object)).expect("report serializes");
    contents.push('\n');
    Artifact { file_name: file_name.into(), contents }
}

/// Writes each artifact under `dir`, creating it if needed.
pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|source| ExperimentError::Write { path: dir.to_path_buf(), source })?;
    artifacts
        .iter()
        .map(|a| {
            let path = dir.join(&a.file_name);
            std::fs::write(&path, &a.contents)
                .map_err(|source| ExperimentError::Write { path: path.clone(), source })?;
            Ok(path)
        })
        .collect()
}

/// Strips `#` metadata lines, leaving the CSV table.
pub fn csv_table(contents: &str) -> impl Iterator<Item = &str> {
    contents.lines().filter(|line| !line.starts_with('#'))
}
