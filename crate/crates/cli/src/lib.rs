//! Command-line front end: zeta integrals, truncated spectra, characteristic
//! functions and their zeros, and the experiment runner.
//!
//! Every command emits one JSON envelope (`schema_version`, `command`,
//! `timestamp`, `pass`, `result`) or a CSV table.

pub mod args;
pub mod commands;
pub mod error;
pub mod flagfile;

pub use args::{Cli, Command, Format, GlobalArgs, PRECISION_ENV};
pub use commands::Outcome;
pub use error::CliError;

use flagfile::FlagFile;
use serde_json::{json, Value};
use std::io::Write;
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

/// Merges the config file into the flags and runs the command.
pub fn run(cli: Cli) -> Result<(Outcome, GlobalArgs), CliError> {
    let Cli { mut global, command } = cli;
    let file = match &global.config {
        Some(p) => FlagFile::load(p)?,
        None => FlagFile::default(),
    };
    file.apply_global(&mut global)?;
    let out = match command {
        Command::Zeta(mut a) => {
            file.apply_zeta(&mut a)?;
            commands::cmd_zeta(&a)?
        }
        Command::Spectrum(mut a) => {
            file.apply_spectrum(&mut a)?;
            commands::cmd_spectrum(&a, &global)?
        }
        Command::Charfn(mut a) => {
            file.apply_charfn(&mut a)?;
            commands::cmd_charfn(&a, &global)?
        }
        Command::Zeros(mut a) => {
            file.apply_zeros(&mut a)?;
            commands::cmd_zeros(&a, &global)?
        }
        Command::Verify(mut a) => {
            file.apply_verify(&mut a)?;
            commands::cmd_verify(&a, &global, &file.experiments)?
        }
    };
    Ok((out, global))
}

pub fn envelope(o: &Outcome, timestamp: &str) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": o.command,
        "timestamp": timestamp,
        "pass": o.pass,
        "result": o.result,
    })
}

pub fn render(o: &Outcome, format: Format) -> String {
    match format {
        Format::Json => {
            let ts = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
            let mut s = serde_json::to_string_pretty(&envelope(o, &ts)).expect("plain data");
            s.push('\n');
            s
        }
        Format::Csv => o.csv.clone(),
    }
}

/// Writes through a sibling temporary file so readers never see a partial result.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| CliError::Usage(format!("bad output path {}", path.display())))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(text.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })?;
    Ok(())
}
