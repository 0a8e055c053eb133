//! Flat `key=value` run configuration.
//!
//! Diff-friendly provenance: together with its seeds, a config file fully
//! reconstructs an experiment. Lines starting with `#` and blank lines are
//! ignored; unknown keys are rejected so typos cannot silently change a run.

use std::collections::BTreeMap;
use std::path::Path;

use glint_core::nn::TrainSchedule;
use glint_core::CoverageTask;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub task: CoverageTask,
    pub hidden: usize,
    pub bidirectional: bool,
    pub schedule: TrainSchedule,
    /// Advisory corpus parameters, kept for provenance.
    pub corpus: Option<usize>,
    pub budget: Option<usize>,
    pub folds: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("config line {0}: expected key=value")]
    NotKeyValue(usize),
    #[error("config: unknown key {0:?}")]
    UnknownKey(String),
    #[error("config: bad value for {key}: {value:?}")]
    BadValue { key: &'static str, value: String },
    #[error("config: missing required key {0:?}")]
    Missing(&'static str),
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut map = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or(ConfigError::NotKeyValue(idx + 1))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }

    let known = [
        "seed",
        "task",
        "hidden",
        "bidirectional",
        "schedule",
        "corpus",
        "budget",
        "folds",
    ];
    if let Some(k) = map.keys().find(|k| !known.contains(&k.as_str())) {
        return Err(ConfigError::UnknownKey(k.clone()));
    }

    let required = |key: &'static str| map.get(key).ok_or(ConfigError::Missing(key));
    let bad = |key: &'static str, value: &str| ConfigError::BadValue {
        key,
        value: value.to_string(),
    };

    let seed = required("seed")?
        .parse()
        .map_err(|_| bad("seed", &map["seed"]))?;
    let task_raw = required("task")?;
    let task = CoverageTask::from_name(task_raw).ok_or_else(|| bad("task", task_raw))?;
    let hidden = required("hidden")?
        .parse()
        .map_err(|_| bad("hidden", &map["hidden"]))?;
    let bidirectional = match required("bidirectional")?.as_str() {
        "true" | "1" => true,
        "false" | "0" => false,
        other => return Err(bad("bidirectional", other)),
    };
    let schedule = match map.get("schedule") {
        None => TrainSchedule::default(),
        Some(raw) => parse_schedule(raw).ok_or_else(|| bad("schedule", raw))?,
    };
    let opt_usize = |key: &'static str| -> Result<Option<usize>, ConfigError> {
        map.get(key)
            .map(|v| v.parse().map_err(|_| bad(key, v)))
            .transpose()
    };

    Ok(RunConfig {
        seed,
        task,
        hidden,
        bidirectional,
        schedule,
        corpus: opt_usize("corpus")?,
        budget: opt_usize("budget")?,
        folds: opt_usize("folds")?,
    })
}

/// `2@1e-3,2@1e-4` — comma-separated `epochs@learning-rate` phases.
fn parse_schedule(raw: &str) -> Option<TrainSchedule> {
    let mut phases = Vec::new();
    for part in raw.split(',') {
        let (epochs, lr) = part.split_once('@')?;
        let epochs: usize = epochs.trim().parse().ok()?;
        let lr: f64 = lr.trim().parse().ok()?;
        if epochs == 0 || !(lr.is_finite() && lr > 0.0) {
            return None;
        }
        phases.push((epochs, lr));
    }
    if phases.is_empty() {
        return None;
    }
    Some(TrainSchedule { phases })
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    parse_config(&std::fs::read_to_string(path)?)
}
