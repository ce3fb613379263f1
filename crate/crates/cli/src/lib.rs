//! Configuration-driven parameter sweeps over the `circwave-core` measures,
//! with deterministic CSV output.

pub mod config;
pub mod error;
pub mod output;
pub mod recipes;
pub mod sweep;

pub use config::{parse_config, SweepConfig};
pub use error::CliError;
pub use output::{emit_csv, write_csv, EmitOptions};
pub use sweep::{run_sweep, SweepResult};

/// Environment variable that sets the worker count when `--threads` is absent.
pub const THREADS_ENV: &str = "CIRCWAVE_THREADS";

/// Worker count by precedence: command line, environment, config file,
/// then the number of available cores.
pub fn resolve_threads(cli: Option<usize>, env: Option<&str>, config: Option<usize>) -> Result<usize, CliError> {
    // the environment is only consulted, and so only validated, without a flag
    let from_env = || -> Result<Option<usize>, CliError> {
        match env.map(str::trim).filter(|v| !v.is_empty()) {
            Some(v) => v.parse::<usize>().map(Some).map_err(|_| CliError::Validation {
                field: THREADS_ENV.into(),
                message: format!("expected a positive integer, got {v:?}"),
            }),
            None => Ok(None),
        }
    };
    let threads = match cli {
        Some(t) => t,
        None => {
            from_env()?.or(config).unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
        }
    };
    if threads == 0 {
        return Err(CliError::Validation { field: "threads".into(), message: "must be positive".into() });
    }
    Ok(threads)
}

/// Runs the sweep on a dedicated pool of `threads` workers.
pub fn run_with_threads(config: &SweepConfig, threads: usize) -> Result<SweepResult, CliError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(CliError::runtime)?;
    pool.install(|| run_sweep(config))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thread_precedence() {
        assert_eq!(resolve_threads(Some(3), Some("5"), Some(7)).unwrap(), 3);
        assert_eq!(resolve_threads(None, Some("5"), Some(7)).unwrap(), 5);
        assert_eq!(resolve_threads(None, None, Some(7)).unwrap(), 7);
        assert_eq!(resolve_threads(None, Some(""), Some(7)).unwrap(), 7);
        assert!(resolve_threads(None, None, None).unwrap() >= 1);
        assert!(resolve_threads(None, Some("many"), None).is_err());
        assert!(resolve_threads(Some(0), None, None).is_err());
    }

    #[test]
    fn thread_count_does_not_change_values() {
        let config = parse_config(
            r#"{"experiment": "disorder-quenched", "modes": 4, "mean_coupling": {"start": 0, "stop": 3, "points": 9},
                "sigma": [0.5], "quadrature": {"scheme": "monte-carlo", "samples": 2000, "seed": 5}}"#,
        )
        .unwrap();
        assert_eq!(run_with_threads(&config, 1).unwrap(), run_with_threads(&config, 4).unwrap());
    }
}
