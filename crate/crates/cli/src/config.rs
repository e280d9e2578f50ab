//! Layered run configuration: built-in defaults, then an optional TOML file,
//! then command-line flags. Keys mirror the library's config structs.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::{Format, RunArgs};
use crate::CliError;

pub type Table = Map<String, Value>;

/// Process-level options that never reach the library config.
#[derive(Debug, Clone, Serialize)]
pub struct RunOptions {
    pub threads: Option<usize>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

/// The merged experiment config plus process options.
#[derive(Debug)]
pub struct Resolved<T> {
    pub config: T,
    pub options: RunOptions,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn read_table(path: &Path) -> Result<Table, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    let value: Value = toml::from_str(&text)
        .map_err(|e| usage(format!("invalid config {}: {e}", path.display())))?;
    match value {
        Value::Object(map) => Ok(map),
        _ => Err(usage("config file must be a TOML table")),
    }
}

/// Serializes flag overrides, dropping unset ones.
pub fn flag_table<S: Serialize>(flags: &S) -> Table {
    match serde_json::to_value(flags) {
        Ok(Value::Object(map)) => map,
        _ => Table::new(),
    }
}

fn take<T: DeserializeOwned>(file: &mut Table, key: &str) -> Result<Option<T>, CliError> {
    file.remove(key)
        .map(|v| serde_json::from_value(v).map_err(|e| usage(format!("config key {key:?}: {e}"))))
        .transpose()
}

/// Merges `defaults < file < flags`, draws a seed from system entropy when
/// none is given (and reports it on stderr), and checks for unknown keys.
pub fn resolve<T>(run: &RunArgs, defaults: Table, flags: Table) -> Result<Resolved<T>, CliError>
where
    T: DeserializeOwned + Serialize,
{
    let mut file = match &run.config {
        Some(path) => read_table(path)?,
        None => Table::new(),
    };
    let threads = run.threads.or(take(&mut file, "threads")?);
    let format = run.format.or(take(&mut file, "format")?).unwrap_or(Format::Csv);
    let out = run.out.clone().or(take(&mut file, "out")?);
    if threads == Some(0) {
        return Err(usage("threads must be >= 1"));
    }

    let mut merged = defaults;
    merged.extend(file);
    merged.extend(flags);
    if let Some(seed) = run.seed {
        merged.insert("seed".into(), seed.into());
    }
    if !merged.contains_key("seed") {
        let seed: u64 = rand::random();
        eprintln!("seed: {seed}");
        merged.insert("seed".into(), seed.into());
    }

    let config: T = serde_json::from_value(Value::Object(merged.clone()))
        .map_err(|e| usage(format!("invalid configuration: {e}")))?;
    if let Value::Object(known) = serde_json::to_value(&config).expect("config serializes") {
        if let Some(key) = merged.keys().find(|k| !known.contains_key(*k)) {
            return Err(usage(format!("unknown configuration key {key:?}")));
        }
    }
    Ok(Resolved {
        config,
        options: RunOptions {
            threads,
            format,
            out,
        },
    })
}
