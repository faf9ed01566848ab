//! Reading task, dataset and layout files.

use std::fs;
use std::path::{Path, PathBuf};

use drawbench_core::dataset::{validate_tasks, Dataset, TaskSpec, ValidationFailure, SCHEMA_VERSION};
use drawbench_core::evaluator::CriteriaSpec;
use drawbench_core::geometry::{LayoutError, UiLayout};
use serde::Deserialize;

/// The seed task collection shipped with the crate.
pub const SEED_TASKS: &str = include_str!("../data/seed.tasks.json");

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{}: unsupported schema_version {found} (expected {SCHEMA_VERSION})", path.display())]
    Schema { path: PathBuf, found: u32 },
    #[error("{}: task '{task_id}': {reason}", path.display())]
    Malformed { path: PathBuf, task_id: String, reason: String },
    #[error("{}: {failure}", path.display())]
    Invalid { path: PathBuf, failure: ValidationFailure },
    #[error("{}: {source}", path.display())]
    Layout { path: PathBuf, source: LayoutError },
    #[error("{}: {reason}", path.display())]
    Select { path: PathBuf, reason: String },
}

impl LoadError {
    /// The validation failure, if the file parsed but its tasks were rejected.
    pub fn validation(&self) -> Option<&ValidationFailure> {
        match self {
            LoadError::Invalid { failure, .. } => Some(failure),
            _ => None,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTask {
    id: String,
    text: String,
    category: String,
    difficulty: String,
    criteria: serde_json::Value,
    #[serde(default)]
    lenient_criteria: Option<serde_json::Value>,
    #[serde(default)]
    rationale: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDataset {
    schema_version: u32,
    name: String,
    #[serde(default)]
    version: String,
    #[serde(default)]
    #[allow(dead_code)]
    description: Option<String>,
    tasks: Vec<RawTask>,
}

pub fn read_text(path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.into(), source })
}

fn criteria(path: &Path, id: &str, v: serde_json::Value) -> Result<CriteriaSpec, LoadError> {
    serde_json::from_value(v).map_err(|e| LoadError::Malformed {
        path: path.into(),
        task_id: id.into(),
        reason: e.to_string(),
    })
}

fn build_task(path: &Path, raw: RawTask) -> Result<TaskSpec, LoadError> {
    let strict = criteria(path, &raw.id, raw.criteria)?;
    let lenient = raw.lenient_criteria.map(|v| criteria(path, &raw.id, v)).transpose()?;
    TaskSpec::from_parts(&raw.id, &raw.text, &raw.category, &raw.difficulty, strict, lenient, raw.rationale)
        .map_err(|failure| LoadError::Invalid { path: path.into(), failure })
}

/// Parses and validates a dataset document; `path` is used for messages.
pub fn parse_dataset(text: &str, path: &Path) -> Result<Dataset, LoadError> {
    let raw: RawDataset = serde_json::from_str(text).map_err(|source| LoadError::Json { path: path.into(), source })?;
    if raw.schema_version != SCHEMA_VERSION {
        return Err(LoadError::Schema { path: path.into(), found: raw.schema_version });
    }
    let tasks = raw.tasks.into_iter().map(|t| build_task(path, t)).collect::<Result<Vec<_>, _>>()?;
    validate_tasks(&tasks).map_err(|failure| LoadError::Invalid { path: path.into(), failure })?;
    Ok(Dataset { schema_version: raw.schema_version, name: raw.name, version: raw.version, tasks })
}

pub fn load_dataset(path: &Path) -> Result<Dataset, LoadError> {
    parse_dataset(&read_text(path)?, path)
}

pub fn seed_dataset() -> Dataset {
    parse_dataset(SEED_TASKS, Path::new("seed.tasks.json")).expect("bundled seed dataset is valid")
}

/// Loads one task from either a single-task document or a dataset. A
/// dataset needs `id` unless it holds exactly one task.
pub fn load_task(path: &Path, id: Option<&str>) -> Result<TaskSpec, LoadError> {
    let text = read_text(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|source| LoadError::Json { path: path.into(), source })?;
    if value.get("tasks").is_some() {
        let ds = parse_dataset(&text, path)?;
        let select = |reason: String| LoadError::Select { path: path.into(), reason };
        return match id {
            Some(id) => ds.task(id).cloned().ok_or_else(|| select(format!("no task with id '{id}'"))),
            None if ds.tasks.len() == 1 => Ok(ds.tasks[0].clone()),
            None => Err(select(format!("dataset has {} tasks; choose one with --task-id", ds.tasks.len()))),
        };
    }
    let raw: RawTask = serde_json::from_value(value).map_err(|source| LoadError::Json { path: path.into(), source })?;
    build_task(path, raw)
}

/// Reads a layout file, or returns the default layout when `path` is `None`.
pub fn load_layout(path: Option<&Path>) -> Result<UiLayout, LoadError> {
    match path {
        None => Ok(UiLayout::default()),
        Some(p) => UiLayout::parse(&read_text(p)?).map_err(|source| LoadError::Layout { path: p.into(), source }),
    }
}
