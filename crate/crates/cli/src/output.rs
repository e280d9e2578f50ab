use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunOptions;
use crate::CliError;

pub fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Opens `path` for writing, or stdout.
pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            CliError::Runtime(format!("cannot create {}: {e}", p.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// The record that makes a run reproducible: the resolved config (including
/// the seed) and process options.
pub fn metadata<C: Serialize>(command: &str, config: &C, options: &RunOptions) -> Value {
    json!({
        "tool": "degcorr",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "threads": options.threads,
        "format": options.format,
    })
}

fn sidecar(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// Writes CSV output plus its metadata: a `<out>.meta.json` sidecar when
/// writing to a file, a `metadata:` line on stderr otherwise.
pub fn emit_csv(
    meta: &Value,
    options: &RunOptions,
    body: impl FnOnce(&mut dyn Write) -> Result<(), CliError>,
) -> Result<(), CliError> {
    let mut w = sink(options.out.as_deref())?;
    body(&mut w)?;
    w.flush().map_err(runtime)?;
    match &options.out {
        Some(out) => {
            let path = sidecar(out);
            let text = serde_json::to_string_pretty(meta).map_err(runtime)?;
            std::fs::write(&path, text + "\n").map_err(|e| {
                CliError::Runtime(format!("cannot write {}: {e}", path.display()))
            })?;
        }
        None => eprintln!("metadata: {meta}"),
    }
    Ok(())
}

/// Writes `{"metadata": ..., "result": ...}`.
pub fn emit_json<R: Serialize>(meta: &Value, options: &RunOptions, result: &R) -> Result<(), CliError> {
    let mut w = sink(options.out.as_deref())?;
    serde_json::to_writer_pretty(&mut w, &json!({ "metadata": meta, "result": result }))
        .map_err(runtime)?;
    writeln!(w).map_err(runtime)?;
    w.flush().map_err(runtime)
}
