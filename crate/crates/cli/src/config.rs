//! Sweep configuration: JSON schema, parsing and validation.

use std::f64::consts::PI;

use circwave_core::disorder::{DisorderScheme, QuenchedSettings, DEFAULT_HERMITE_ORDER};
use circwave_core::numerics::{DEFAULT_SIMPSON_STEPS, MIN_SIMPSON_STEPS};
use circwave_core::symplectic::MAX_MODES;
use circwave_core::waveguide::{RangeStrengths, SqueezedInputSpec};
use circwave_core::{BipartitionStrategy, GgmCurve};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Grid resolution used when a grid gives only `start` and `stop`.
pub const DEFAULT_POINTS_PER_TWO_PI: usize = 361;

/// Experiments a single invocation can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    #[serde(rename = "ggm-vs-J")]
    GgmVsJ,
    GgmVsN,
    Acggm,
    #[serde(rename = "ggm-analytic-N")]
    GgmAnalyticN,
    DisorderQuenched,
    Breached,
    BlockEntropy,
    ThreeModeOracle,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::GgmVsJ => "ggm-vs-J",
            Self::GgmVsN => "ggm-vs-n",
            Self::Acggm => "acggm",
            Self::GgmAnalyticN => "ggm-analytic-N",
            Self::DisorderQuenched => "disorder-quenched",
            Self::Breached => "breached",
            Self::BlockEntropy => "block-entropy",
            Self::ThreeModeOracle => "three-mode-oracle",
        }
    }
}

/// A named profile or explicit strengths `[n_1, n_2, …]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileSpec {
    Named(String),
    Strengths(Vec<f64>),
}

impl Default for ProfileSpec {
    fn default() -> Self {
        Self::Named("lr".into())
    }
}

/// Evenly spaced `{start, stop, points}` or an explicit list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    // lists first: a struct also deserialises from a JSON array
    Values(Vec<f64>),
    Range(RangeGrid),
}

/// `points` defaults to 361 per 2π of span.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeGrid {
    pub start: f64,
    pub stop: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
}

/// Inclusive integer range or an explicit list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntGridSpec {
    Values(Vec<usize>),
    Range(IntRange),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntRange {
    pub start: usize,
    pub stop: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategySpec {
    /// Symmetry-reduced for all-equal rings, full enumeration otherwise.
    #[default]
    Auto,
    Full,
    SymmetryReduced,
    /// Runs full enumeration and the symmetry-reduced list and fails if they
    /// disagree.
    CrossCheck,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "kebab-case", deny_unknown_fields)]
pub enum QuadratureSpec {
    GaussHermite {
        #[serde(default = "default_order")]
        order: usize,
    },
    MonteCarlo {
        samples: usize,
        seed: u64,
    },
}

fn default_order() -> usize {
    DEFAULT_HERMITE_ORDER
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::GaussHermite { order: DEFAULT_HERMITE_ORDER }
    }
}

/// The raw configuration document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub experiment: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileSpec>,
    #[serde(default = "default_squeezing")]
    pub squeezing: f64,
    #[serde(default)]
    pub theta: f64,
    #[serde(default = "default_input_mode")]
    pub input_mode: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strength: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vary_range: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_coupling: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode_counts: Option<IntGridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_lengths: Option<IntGridSpec>,
    #[serde(default)]
    pub strategy: StrategySpec,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default = "default_steps")]
    pub simpson_steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

fn default_squeezing() -> f64 {
    1.0
}

fn default_input_mode() -> usize {
    1
}

fn default_steps() -> usize {
    DEFAULT_SIMPSON_STEPS
}

/// Parses a JSON document; syntax and type errors carry line and column.
pub fn parse_config(text: &str) -> Result<SweepConfig, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Ring, input and strategy shared by every GGM evaluation of a sweep.
#[derive(Debug, Clone)]
pub struct CurveSetup {
    pub strengths: RangeStrengths,
    pub input: SqueezedInputSpec,
    pub strategy: StrategySpec,
}

impl CurveSetup {
    /// The curve for this setup, or the pair to cross-check.
    pub fn curves(&self) -> Result<(GgmCurve, Option<GgmCurve>), CliError> {
        let base = GgmCurve::new(self.strengths.clone(), self.input).map_err(CliError::runtime)?;
        let anchor = self.input.input_mode();
        Ok(match self.strategy {
            StrategySpec::Auto => (base, None),
            StrategySpec::Full => (base.numeric().with_strategy(BipartitionStrategy::FullEnumeration), None),
            StrategySpec::SymmetryReduced => {
                (base.numeric().with_strategy(BipartitionStrategy::SymmetryReduced { anchor }), None)
            }
            StrategySpec::CrossCheck => {
                let full = base.clone().numeric().with_strategy(BipartitionStrategy::FullEnumeration);
                let reduced = base.numeric().with_strategy(BipartitionStrategy::SymmetryReduced { anchor });
                (full, Some(reduced))
            }
        })
    }
}

/// A validated experiment with every grid materialised.
#[derive(Debug, Clone)]
pub enum Plan {
    GgmVsJ { setup: CurveSetup, couplings: Vec<f64> },
    GgmVsN { setup: CurveSetup, couplings: Vec<f64>, strengths: Vec<f64>, range: usize },
    Acggm { setup: CurveSetup, upper_limits: Vec<f64>, steps: usize },
    GgmAnalyticN { mode_counts: Vec<usize>, squeezing: f64, steps: usize },
    DisorderQuenched { setup: CurveSetup, means: Vec<f64>, sigmas: Vec<f64>, scheme: DisorderScheme },
    Breached { mode_counts: Vec<usize>, squeezing: f64, sigmas: Vec<f64>, settings: QuenchedSettings },
    BlockEntropy { setup: CurveSetup, couplings: Vec<f64>, lengths: Vec<usize> },
    ThreeModeOracle { squeezing: f64, couplings: Vec<f64> },
}

fn field(name: &str, message: impl Into<String>) -> CliError {
    CliError::Validation { field: name.to_string(), message: message.into() }
}

fn require<T: Clone>(value: &Option<T>, name: &str, kind: ExperimentKind) -> Result<T, CliError> {
    value.clone().ok_or_else(|| field(name, format!("required for experiment {}", kind.name())))
}

fn expand_grid(spec: &GridSpec, name: &str) -> Result<Vec<f64>, CliError> {
    let values = match *spec {
        GridSpec::Values(ref v) => v.clone(),
        GridSpec::Range(RangeGrid { start, stop, points }) => {
            if !start.is_finite() || !stop.is_finite() {
                return Err(field(name, "start and stop must be finite"));
            }
            if start > stop {
                return Err(field(name, format!("start {start} exceeds stop {stop}")));
            }
            let points = match points {
                Some(p) => p,
                None => {
                    let per = (stop - start) / (2.0 * PI) * (DEFAULT_POINTS_PER_TWO_PI - 1) as f64;
                    per.ceil().max(1.0) as usize + 1
                }
            };
            if points == 0 {
                return Err(field(name, "points must be positive"));
            }
            if points == 1 {
                vec![start]
            } else {
                let h = (stop - start) / (points - 1) as f64;
                (0..points).map(|i| if i + 1 == points { stop } else { start + h * i as f64 }).collect()
            }
        }
    };
    if values.is_empty() {
        return Err(field(name, "grid is empty"));
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(field(name, format!("non-finite value {bad}")));
    }
    Ok(values)
}

fn expand_int_grid(spec: &IntGridSpec, name: &str) -> Result<Vec<usize>, CliError> {
    let values = match *spec {
        IntGridSpec::Values(ref v) => v.clone(),
        IntGridSpec::Range(IntRange { start, stop }) => {
            if start > stop {
                return Err(field(name, format!("start {start} exceeds stop {stop}")));
            }
            (start..=stop).collect()
        }
    };
    if values.is_empty() {
        return Err(field(name, "grid is empty"));
    }
    Ok(values)
}

fn non_negative(values: &[f64], name: &str) -> Result<(), CliError> {
    match values.iter().find(|v| **v < 0.0) {
        Some(v) => Err(field(name, format!("value {v} must be >= 0"))),
        None => Ok(()),
    }
}

fn strengths_for(profile: &ProfileSpec, modes: usize) -> Result<RangeStrengths, CliError> {
    let result = match profile {
        ProfileSpec::Strengths(n) => RangeStrengths::new(modes, n.clone()),
        ProfileSpec::Named(name) => match name.as_str() {
            "lr" => RangeStrengths::all_equal(modes),
            "nn" => RangeStrengths::nearest_neighbor(modes),
            "nnn" => RangeStrengths::up_to_range(modes, 2),
            "nnnn" => RangeStrengths::up_to_range(modes, 3),
            other => {
                return Err(field(
                    "profile",
                    format!(
                        "unknown profile {other:?}; expected \"nn\", \"nnn\", \"nnnn\", \"lr\" or a list of strengths"
                    ),
                ))
            }
        },
    };
    result.map_err(|e| field("profile", e.to_string()))
}

impl SweepConfig {
    fn modes(&self) -> Result<usize, CliError> {
        let modes = require(&self.modes, "modes", self.experiment)?;
        if !(3..=MAX_MODES).contains(&modes) {
            return Err(field("modes", format!("must be in 3..={MAX_MODES}, got {modes}")));
        }
        Ok(modes)
    }

    fn setup(&self, modes: usize) -> Result<CurveSetup, CliError> {
        let strengths = strengths_for(&self.profile.clone().unwrap_or_default(), modes)?;
        if !self.squeezing.is_finite() || self.squeezing < 0.0 {
            return Err(field("squeezing", format!("must be finite and >= 0, got {}", self.squeezing)));
        }
        let input = SqueezedInputSpec::new(self.squeezing, self.theta).map_err(|e| field("theta", e.to_string()))?;
        if self.input_mode == 0 || self.input_mode > modes {
            return Err(field("input_mode", format!("must be in 1..={modes}, got {}", self.input_mode)));
        }
        let input = input.at_mode(self.input_mode).map_err(|e| field("input_mode", e.to_string()))?;
        Ok(CurveSetup { strengths, input, strategy: self.strategy })
    }

    fn couplings(&self) -> Result<Vec<f64>, CliError> {
        let grid = expand_grid(&require(&self.coupling, "coupling", self.experiment)?, "coupling")?;
        non_negative(&grid, "coupling")?;
        Ok(grid)
    }

    fn sigmas(&self) -> Result<Vec<f64>, CliError> {
        let sigmas = require(&self.sigma, "sigma", self.experiment)?;
        if sigmas.is_empty() {
            return Err(field("sigma", "list is empty"));
        }
        if let Some(bad) = sigmas.iter().find(|s| !s.is_finite() || **s < 0.0) {
            return Err(field("sigma", format!("value {bad} must be finite and >= 0")));
        }
        Ok(sigmas)
    }

    fn mode_counts(&self, minimum: usize, reason: &str) -> Result<Vec<usize>, CliError> {
        let counts = expand_int_grid(&require(&self.mode_counts, "mode_counts", self.experiment)?, "mode_counts")?;
        if let Some(bad) = counts.iter().find(|&&n| n < minimum || n > MAX_MODES) {
            return Err(field("mode_counts", format!("{reason} requires N >= {minimum}, got {bad}")));
        }
        Ok(counts)
    }

    fn scheme(&self) -> Result<DisorderScheme, CliError> {
        let scheme = match self.quadrature {
            QuadratureSpec::GaussHermite { order } => DisorderScheme::GaussHermite { order },
            QuadratureSpec::MonteCarlo { samples, seed } => DisorderScheme::MonteCarlo { samples, seed },
        };
        scheme.validate().map_err(|e| field("quadrature", e.to_string()))?;
        Ok(scheme)
    }

    fn steps(&self) -> Result<usize, CliError> {
        let steps = self.simpson_steps;
        if steps < MIN_SIMPSON_STEPS || !steps.is_multiple_of(2) {
            return Err(field("simpson_steps", format!("must be even and >= {}, got {steps}", MIN_SIMPSON_STEPS)));
        }
        Ok(steps)
    }

    fn check_squeezing(&self) -> Result<f64, CliError> {
        if !self.squeezing.is_finite() || self.squeezing < 0.0 {
            return Err(field("squeezing", format!("must be finite and >= 0, got {}", self.squeezing)));
        }
        Ok(self.squeezing)
    }

    /// Checks every field the experiment uses and materialises the grids.
    pub fn validate(&self) -> Result<Plan, CliError> {
        if self.threads == Some(0) {
            return Err(field("threads", "must be positive"));
        }
        let kind = self.experiment;
        Ok(match kind {
            ExperimentKind::GgmVsJ => {
                let modes = self.modes()?;
                Plan::GgmVsJ { setup: self.setup(modes)?, couplings: self.couplings()? }
            }
            ExperimentKind::GgmVsN => {
                let modes = self.modes()?;
                let mut config = self.clone();
                config.profile.get_or_insert(ProfileSpec::Named("nn".into()));
                let setup = config.setup(modes)?;
                let range = self.vary_range.unwrap_or(2);
                if range < 2 || range > modes / 2 {
                    return Err(field("vary_range", format!("must be in 2..={}, got {range}", modes / 2)));
                }
                let strengths = expand_grid(&require(&self.strength, "strength", kind)?, "strength")?;
                for &n in &strengths {
                    setup.strengths.with_strength(range, n).map_err(|e| field("strength", e.to_string()))?;
                }
                Plan::GgmVsN { setup, couplings: self.couplings()?, strengths, range }
            }
            ExperimentKind::Acggm => {
                let modes = self.modes()?;
                let upper_limits = self.couplings()?;
                if let Some(bad) = upper_limits.iter().find(|j| **j <= 0.0) {
                    return Err(field("coupling", format!("accumulation limit J0 must be > 0, got {bad}")));
                }
                Plan::Acggm { setup: self.setup(modes)?, upper_limits, steps: self.steps()? }
            }
            ExperimentKind::GgmAnalyticN => Plan::GgmAnalyticN {
                mode_counts: self.mode_counts(4, "the closed-form GGM")?,
                squeezing: self.check_squeezing()?,
                steps: self.steps()?,
            },
            ExperimentKind::DisorderQuenched => {
                let modes = self.modes()?;
                let means = expand_grid(&require(&self.mean_coupling, "mean_coupling", kind)?, "mean_coupling")?;
                non_negative(&means, "mean_coupling")?;
                Plan::DisorderQuenched {
                    setup: self.setup(modes)?,
                    means,
                    sigmas: self.sigmas()?,
                    scheme: self.scheme()?,
                }
            }
            ExperimentKind::Breached => {
                if !matches!(self.profile.as_ref().unwrap_or(&ProfileSpec::default()), ProfileSpec::Named(n) if n == "lr")
                {
                    return Err(field("profile", "breached GGM is defined for the all-equal \"lr\" ring"));
                }
                Plan::Breached {
                    mode_counts: self.mode_counts(4, "breached GGM")?,
                    squeezing: self.check_squeezing()?,
                    sigmas: self.sigmas()?,
                    settings: QuenchedSettings { scheme: self.scheme()?, steps: self.steps()? },
                }
            }
            ExperimentKind::BlockEntropy => {
                let modes = self.modes()?;
                let max_len = modes / 2 - 1;
                if max_len == 0 {
                    return Err(field("modes", format!("block entropy needs N >= 4, got {modes}")));
                }
                let lengths = match &self.block_lengths {
                    Some(spec) => expand_int_grid(spec, "block_lengths")?,
                    None => (1..=max_len).collect(),
                };
                if let Some(bad) = lengths.iter().find(|&&l| l == 0 || l > max_len) {
                    return Err(field("block_lengths", format!("length {bad} out of 1..={max_len}")));
                }
                Plan::BlockEntropy { setup: self.setup(modes)?, couplings: self.couplings()?, lengths }
            }
            ExperimentKind::ThreeModeOracle => {
                if let Some(m) = self.modes {
                    if m != 3 {
                        return Err(field("modes", format!("the three-mode oracle needs N = 3, got {m}")));
                    }
                }
                if self.profile.is_some() {
                    return Err(field("profile", "the three-mode ring has only nearest-neighbour coupling"));
                }
                Plan::ThreeModeOracle { squeezing: self.check_squeezing()?, couplings: self.couplings()? }
            }
        })
    }
}
