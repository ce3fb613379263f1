//! Grid evaluation for every experiment kind.

use circwave_core::disorder::{breached, PreparedScheme};
use circwave_core::measures::{
    accumulated_ggm, block_entropy, ggm, ggm_analytic_lr, three_mode_ggm, three_mode_nu, BipartitionStrategy,
};
use circwave_core::numerics::maximize;
use circwave_core::waveguide::{
    all_equal_period, evolve_waveguide, CouplingProfile, RangeStrengths, SqueezedInputSpec,
};
use circwave_core::GgmCurve;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::config::{parse_config, CurveSetup, ExperimentKind, Plan, SweepConfig};
use crate::error::CliError;

/// Samples used to bracket the maximum of a GGM curve over one period.
const MAXIMUM_SCAN_POINTS: usize = 361;

/// Largest allowed gap between the two strategies of a cross-checked run.
const CROSS_CHECK_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
}

impl Cell {
    /// Integers verbatim; floats with 17 significant digits.
    pub fn render(&self) -> String {
        match *self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.16e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metadata {
    pub version: &'static str,
    pub experiment: ExperimentKind,
    /// The parsed configuration, re-serialised compactly.
    pub config_echo: String,
    /// SHA-256 of the parameter columns of every row.
    pub grid_hash: String,
}

/// Rows in grid order; the first `parameter_columns` cells of each row are
/// the grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub metadata: Metadata,
    pub columns: Vec<&'static str>,
    pub parameter_columns: usize,
    pub rows: Vec<Vec<Cell>>,
}

type Rows = Vec<Vec<Cell>>;

fn at(point: String) -> impl Fn(circwave_core::Error) -> CliError {
    move |e| CliError::Runtime(format!("at {point}: {e}"))
}

/// Evaluates `task` for every item concurrently, keeping item order.
fn ordered<T, F>(items: &[T], task: F) -> Result<Rows, CliError>
where
    T: Sync,
    F: Fn(usize, &T) -> Result<Rows, CliError> + Sync,
{
    let chunks: Vec<Rows> = items.par_iter().enumerate().map(|(i, item)| task(i, item)).collect::<Result<_, _>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

/// The primary curve and, for cross-checked runs, the second strategy.
struct Curves {
    main: GgmCurve,
    check: Option<GgmCurve>,
}

impl Curves {
    fn new(setup: &CurveSetup) -> Result<Self, CliError> {
        let (main, check) = setup.curves()?;
        Ok(Self { main, check })
    }

    fn with_strengths(setup: &CurveSetup, strengths: RangeStrengths) -> Result<Self, CliError> {
        Self::new(&CurveSetup { strengths, ..setup.clone() })
    }

    fn eval(&self, coupling: f64) -> circwave_core::Result<f64> {
        let value = self.main.eval(coupling)?;
        if let Some(check) = &self.check {
            let other = check.eval(coupling)?;
            if (value - other).abs() > CROSS_CHECK_TOLERANCE {
                return Err(circwave_core::Error::InvalidArgument(format!(
                    "cross-check failed: full enumeration {value} vs symmetry-reduced {other}"
                )));
            }
        }
        Ok(value)
    }
}

fn f(v: f64) -> Cell {
    Cell::Float(v)
}

fn n(v: usize) -> Cell {
    Cell::Int(v as u64)
}

fn execute(plan: &Plan) -> Result<(Vec<&'static str>, usize, Rows), CliError> {
    Ok(match plan {
        Plan::GgmVsJ { setup, couplings } => {
            let curves = Curves::new(setup)?;
            let rows =
                ordered(couplings, |_, &j| Ok(vec![vec![f(j), f(curves.eval(j).map_err(at(format!("J={j}")))?)]]))?;
            (vec!["J", "ggm"], 1, rows)
        }
        Plan::GgmVsN { setup, couplings, strengths, range } => {
            let curves = strengths
                .iter()
                .map(|&s| {
                    let rs = setup.strengths.with_strength(*range, s).map_err(CliError::runtime)?;
                    Curves::with_strengths(setup, rs)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let points: Vec<(f64, usize)> =
                couplings.iter().flat_map(|&j| (0..strengths.len()).map(move |k| (j, k))).collect();
            let rows = ordered(&points, |_, &(j, k)| {
                let value = curves[k].eval(j).map_err(at(format!("J={j}, n={}", strengths[k])))?;
                Ok(vec![vec![f(j), f(strengths[k]), f(value)]])
            })?;
            (vec!["J", "n", "ggm"], 2, rows)
        }
        Plan::Acggm { setup, upper_limits, steps } => {
            let curves = Curves::new(setup)?;
            let rows = ordered(upper_limits, |_, &j0| {
                let value = accumulated_ggm(|j| curves.eval(j), j0, *steps).map_err(at(format!("J0={j0}")))?;
                Ok(vec![vec![f(j0), f(value)]])
            })?;
            (vec!["J0", "acggm"], 1, rows)
        }
        Plan::GgmAnalyticN { mode_counts, squeezing, steps } => {
            let s = *squeezing;
            let rows = ordered(mode_counts, |_, &modes| {
                let err = at(format!("N={modes}"));
                let period = all_equal_period(modes);
                let curve = |j: f64| ggm_analytic_lr(modes, j, s);
                let average = accumulated_ggm(curve, period, *steps).map_err(&err)?;
                let peak = maximize(curve, 0.0, period, MAXIMUM_SCAN_POINTS).map_err(&err)?;
                Ok(vec![vec![n(modes), f(average), f(peak.value)]])
            })?;
            (vec!["N", "period_acggm", "period_max_ggm"], 1, rows)
        }
        Plan::DisorderQuenched { setup, means, sigmas, scheme } => {
            let curves = Curves::new(setup)?;
            let prepared = PreparedScheme::new(*scheme).map_err(CliError::runtime)?;
            let points: Vec<(f64, f64)> = sigmas.iter().flat_map(|&s| means.iter().map(move |&m| (m, s))).collect();
            let rows = ordered(&points, |i, &(jm, sigma)| {
                let err = at(format!("J_m={jm}, sigma={sigma}"));
                let value = prepared.average(&curves.main, jm, sigma, i as u64).map_err(&err)?.mean;
                if let Some(check) = &curves.check {
                    let other = prepared.average(check, jm, sigma, i as u64).map_err(&err)?.mean;
                    if (value - other).abs() > CROSS_CHECK_TOLERANCE {
                        return Err(CliError::Runtime(format!(
                            "at J_m={jm}, sigma={sigma}: cross-check failed: {value} vs {other}"
                        )));
                    }
                }
                Ok(vec![vec![f(jm), f(sigma), f(value)]])
            })?;
            (vec!["J_m", "sigma", "quenched_ggm"], 2, rows)
        }
        Plan::Breached { mode_counts, squeezing, sigmas, settings } => {
            let points: Vec<(usize, f64)> =
                sigmas.iter().flat_map(|&s| mode_counts.iter().map(move |&m| (m, s))).collect();
            let rows = ordered(&points, |_, &(modes, sigma)| {
                let err = at(format!("N={modes}, sigma={sigma}"));
                let curve = GgmCurve::all_equal(modes, *squeezing).map_err(&err)?;
                let value = breached(&curve, sigma, settings).map_err(&err)?;
                Ok(vec![vec![n(modes), f(sigma), f(value)]])
            })?;
            (vec!["N", "sigma", "breached_ggm"], 2, rows)
        }
        Plan::BlockEntropy { setup, couplings, lengths } => {
            let rows = ordered(couplings, |_, &j| {
                let err = at(format!("J={j}"));
                let profile = CouplingProfile::new(setup.strengths.clone(), j).map_err(&err)?;
                let state = evolve_waveguide(&profile, &setup.input).map_err(&err)?;
                lengths.iter().map(|&l| Ok(vec![f(j), n(l), f(block_entropy(&state, l).map_err(&err)?)])).collect()
            })?;
            (vec!["J", "L", "entropy"], 2, rows)
        }
        Plan::ThreeModeOracle { squeezing, couplings } => {
            let s = *squeezing;
            let strengths = RangeStrengths::nearest_neighbor(3).map_err(CliError::runtime)?;
            let input = SqueezedInputSpec::new(s, 0.0).map_err(CliError::runtime)?;
            let rows = ordered(couplings, |_, &j| {
                let err = at(format!("J={j}"));
                let (nu1, nu2) = three_mode_nu(j, s);
                let closed = three_mode_ggm(j, s);
                let profile = CouplingProfile::new(strengths.clone(), j).map_err(&err)?;
                let state = evolve_waveguide(&profile, &input).map_err(&err)?;
                let numeric = ggm(&state, BipartitionStrategy::FullEnumeration).map_err(&err)?.value;
                Ok(vec![vec![f(j), f(nu1), f(nu2), f(closed), f(numeric)]])
            })?;
            (vec!["J", "nu1", "nu2", "ggm_closed_form", "ggm_numeric"], 1, rows)
        }
    })
}

fn grid_hash(rows: &Rows, parameter_columns: usize) -> String {
    let mut hasher = Sha256::new();
    for row in rows {
        let point: Vec<String> = row[..parameter_columns].iter().map(Cell::render).collect();
        hasher.update(point.join(","));
        hasher.update(b"\n");
    }
    hex::encode(hasher.finalize())
}

/// Validates `config` and evaluates every grid point on the current rayon
/// pool.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult, CliError> {
    let plan = config.validate()?;
    let (columns, parameter_columns, rows) = execute(&plan)?;
    let metadata = Metadata {
        version: env!("CARGO_PKG_VERSION"),
        experiment: config.experiment,
        config_echo: serde_json::to_string(config).map_err(CliError::runtime)?,
        grid_hash: grid_hash(&rows, parameter_columns),
    };
    Ok(SweepResult { metadata, columns, parameter_columns, rows })
}

/// Parses and runs a configuration document.
pub fn run_sweep_text(text: &str) -> Result<SweepResult, CliError> {
    run_sweep(&parse_config(text)?)
}
