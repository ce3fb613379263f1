//! CSV emission.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::error::CliError;
use crate::sweep::SweepResult;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EmitOptions {
    /// Omits the generation-time line so that repeated runs are
    /// byte-identical.
    pub no_timestamp: bool,
}

/// Writes `#`-prefixed metadata, the header and one line per row, LF-terminated.
pub fn write_csv<W: Write>(result: &SweepResult, out: &mut W, options: EmitOptions) -> io::Result<()> {
    let meta = &result.metadata;
    writeln!(out, "# circwave {}", meta.version)?;
    writeln!(out, "# experiment: {}", meta.experiment.name())?;
    writeln!(out, "# config: {}", meta.config_echo)?;
    writeln!(out, "# grid-sha256: {}", meta.grid_hash)?;
    if !options.no_timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        writeln!(out, "# generated-unix-time: {secs}")?;
    }
    writeln!(out, "{}", result.columns.join(","))?;
    for row in &result.rows {
        let cells: Vec<String> = row.iter().map(|c| c.render()).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    out.flush()
}

/// Writes the CSV to `path`, or to standard output when `path` is `None`.
pub fn emit_csv(result: &SweepResult, path: Option<&Path>, options: EmitOptions) -> Result<(), CliError> {
    match path {
        Some(path) => {
            let io_err = |source| CliError::Io { path: path.to_path_buf(), source };
            let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
            write_csv(result, &mut out, options).map_err(io_err)
        }
        None => {
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            write_csv(result, &mut out, options).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}
