//! Experiment runner around `bis-core`: TOML configs in, JSON and CSV
//! reports out, plus a scoped-thread executor.

pub mod commands;
pub mod config;
pub mod error;
pub mod exec;
pub mod report;

use std::path::Path;

use bis_core::Serial;

pub use commands::{execute, Command, Format, Output};
pub use config::Resolved;
pub use error::LabError;
pub use exec::Threads;

/// Loads `config`, runs `command` on `threads` workers and writes the result
/// to `out` (with a `.meta.json` sidecar for CSV) or returns it for stdout.
pub fn run(
    command: Command,
    config: &Path,
    out: Option<&Path>,
    format: Format,
    threads: usize,
) -> Result<Option<String>, LabError> {
    let cfg = Resolved::load(config)?;
    let output = if threads > 1 {
        execute(command, format, &cfg, &Threads::new(threads))?
    } else {
        execute(command, format, &cfg, &Serial)?
    };
    let Some(path) = out else {
        return Ok(Some(output.body));
    };
    std::fs::write(path, &output.body)?;
    if let Some(meta) = &output.meta {
        let mut side = path.as_os_str().to_owned();
        side.push(".meta.json");
        std::fs::write(side, meta)?;
    }
    Ok(None)
}
