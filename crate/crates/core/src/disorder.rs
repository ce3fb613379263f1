//! Quenched Gaussian disorder in the global coupling `J`.
//!
//! `J ~ 𝒩(J_m, σ²)` is frozen for each realisation; the quenched GGM is the
//! average of the ordered GGM curve over that distribution, evaluated either
//! by Gauss–Hermite quadrature over the full real line or by Monte Carlo.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::measures::GgmCurve;
use crate::numerics::{gauss_hermite, simpson_nodes, simpson_sum, DEFAULT_SIMPSON_STEPS};
use crate::waveguide::all_equal_period;

pub const MIN_HERMITE_ORDER: usize = 16;
pub const DEFAULT_HERMITE_ORDER: usize = 64;
pub const MAX_HERMITE_ORDER: usize = 1024;
pub const MIN_MONTE_CARLO_SAMPLES: usize = 1000;

/// How the Gaussian average is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisorderScheme {
    /// Exact for polynomials of degree `< 2·order`. The GGM oscillates in
    /// `J` with frequency `N/2` and its harmonics, so the order needed grows
    /// with `N·σ`: 64 nodes are accurate to about `1e-9` for `N·σ ≤ 4` and
    /// to about `1e-3` for `N·σ ≤ 16`.
    GaussHermite { order: usize },
    /// Draws come from a ChaCha8 stream keyed by `seed` and the grid-point
    /// index passed alongside, so results do not depend on scheduling.
    MonteCarlo { samples: usize, seed: u64 },
}

impl Default for DisorderScheme {
    fn default() -> Self {
        Self::GaussHermite { order: DEFAULT_HERMITE_ORDER }
    }
}

impl DisorderScheme {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::GaussHermite { order } if !(MIN_HERMITE_ORDER..=MAX_HERMITE_ORDER).contains(&order) => Err(invalid(
                format!("Gauss-Hermite order must be in {MIN_HERMITE_ORDER}..={MAX_HERMITE_ORDER}, got {order}"),
            )),
            Self::MonteCarlo { samples, .. } if samples < MIN_MONTE_CARLO_SAMPLES => {
                Err(invalid(format!("Monte-Carlo needs >= {MIN_MONTE_CARLO_SAMPLES} samples, got {samples}")))
            }
            _ => Ok(()),
        }
    }
}

/// Mean coupling, disorder strength and averaging scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisorderSpec {
    mean: f64,
    sigma: f64,
    scheme: DisorderScheme,
}

impl DisorderSpec {
    pub fn new(mean: f64, sigma: f64, scheme: DisorderScheme) -> Result<Self> {
        if !mean.is_finite() || mean < 0.0 {
            return Err(invalid(format!("mean coupling J_m must be finite and >= 0, got {mean}")));
        }
        check_sigma(sigma)?;
        scheme.validate()?;
        Ok(Self { mean, sigma, scheme })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn scheme(&self) -> DisorderScheme {
        self.scheme
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !sigma.is_finite() || sigma < 0.0 {
        return Err(invalid(format!("disorder strength sigma must be finite and >= 0, got {sigma}")));
    }
    Ok(())
}

/// A quenched average and, for Monte Carlo, its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuenchedEstimate {
    pub mean: f64,
    pub standard_error: Option<f64>,
}

/// A scheme with its Gauss–Hermite rule computed once.
#[derive(Debug, Clone)]
pub struct PreparedScheme {
    kind: Prepared,
}

#[derive(Debug, Clone)]
enum Prepared {
    Hermite { nodes: Vec<f64>, weights: Vec<f64> },
    MonteCarlo { samples: usize, seed: u64 },
}

impl PreparedScheme {
    pub fn new(scheme: DisorderScheme) -> Result<Self> {
        scheme.validate()?;
        let kind = match scheme {
            DisorderScheme::GaussHermite { order } => {
                let (nodes, weights) = gauss_hermite(order)?;
                Prepared::Hermite { nodes, weights }
            }
            DisorderScheme::MonteCarlo { samples, seed } => Prepared::MonteCarlo { samples, seed },
        };
        Ok(Self { kind })
    }

    /// Average of `curve` over `J ~ 𝒩(mean, σ²)`; `stream` selects the
    /// Monte-Carlo substream.
    pub fn average(&self, curve: &GgmCurve, mean: f64, sigma: f64, stream: u64) -> Result<QuenchedEstimate> {
        check_sigma(sigma)?;
        if sigma == 0.0 {
            return Ok(QuenchedEstimate { mean: curve.eval(mean)?, standard_error: None });
        }
        match &self.kind {
            Prepared::Hermite { nodes, weights } => {
                // ∫ G(J) 𝒩(J; m, σ²) dJ = π^{-½} Σ w_k G(m + √2 σ x_k)
                let scale = std::f64::consts::SQRT_2 * sigma;
                let values = nodes.iter().map(|x| curve.eval(mean + scale * x)).collect::<Result<Vec<f64>>>()?;
                let sum: f64 = values.iter().zip(weights).map(|(g, w)| g * w).sum();
                Ok(QuenchedEstimate { mean: sum / std::f64::consts::PI.sqrt(), standard_error: None })
            }
            Prepared::MonteCarlo { samples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(stream);
                let draws: Vec<f64> = (0..*samples)
                    .map(|_| {
                        let z: f64 = StandardNormal.sample(&mut rng);
                        mean + sigma * z
                    })
                    .collect();
                let values = draws.iter().map(|&j| curve.eval(j)).collect::<Result<Vec<f64>>>()?;
                let n = values.len() as f64;
                let avg = values.iter().sum::<f64>() / n;
                let var = values.iter().map(|v| (v - avg).powi(2)).sum::<f64>() / (n - 1.0);
                Ok(QuenchedEstimate { mean: avg, standard_error: Some((var / n).sqrt()) })
            }
        }
    }
}

/// Quenched average of an arbitrary GGM curve; `stream` keys the
/// Monte-Carlo substream (use the grid-point index in sweeps).
pub fn quenched_average(curve: &GgmCurve, spec: &DisorderSpec, stream: u64) -> Result<QuenchedEstimate> {
    PreparedScheme::new(spec.scheme)?.average(curve, spec.mean, spec.sigma, stream)
}

/// Quenched GGM `⟨G⟩_G` of the all-equal ring with `N` modes and squeezing
/// `s`.
pub fn quenched_ggm(modes: usize, squeezing: f64, spec: &DisorderSpec) -> Result<f64> {
    let curve = GgmCurve::all_equal(modes, squeezing)?;
    Ok(quenched_average(&curve, spec, 0)?.mean)
}

/// Scheme and Simpson resolution used for integrals over `J_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuenchedSettings {
    pub scheme: DisorderScheme,
    pub steps: usize,
}

impl Default for QuenchedSettings {
    fn default() -> Self {
        Self { scheme: DisorderScheme::default(), steps: DEFAULT_SIMPSON_STEPS }
    }
}

/// Quenched averages at the Simpson nodes over `[0, upper]`, evaluated on
/// the worker pool in index order.
fn quenched_profile(curve: &GgmCurve, sigma: f64, upper: f64, settings: &QuenchedSettings) -> Result<Vec<f64>> {
    let prepared = PreparedScheme::new(settings.scheme)?;
    let nodes = simpson_nodes(0.0, upper, settings.steps)?;
    nodes.par_iter().enumerate().map(|(i, &jm)| Ok(prepared.average(curve, jm, sigma, i as u64)?.mean)).collect()
}

/// `(N/4π) ∫₀^{J_m0} ⟨G⟩_G dJ_m`; normalised by the period `4π/N`, not by
/// `J_m0`.
pub fn quenched_accumulated(curve: &GgmCurve, sigma: f64, jm0: f64, settings: &QuenchedSettings) -> Result<f64> {
    check_sigma(sigma)?;
    if !jm0.is_finite() || jm0 <= 0.0 {
        return Err(invalid(format!("upper limit J_m0 must be positive, got {jm0}")));
    }
    let values = quenched_profile(curve, sigma, jm0, settings)?;
    Ok(simpson_sum(&values, 0.0, jm0) / all_equal_period(curve.modes()))
}

pub fn quenched_accumulated_ggm(modes: usize, squeezing: f64, sigma: f64, jm0: f64) -> Result<f64> {
    let curve = GgmCurve::all_equal(modes, squeezing)?;
    quenched_accumulated(&curve, sigma, jm0, &QuenchedSettings::default())
}

/// Variance of `⟨G⟩_G` over one cycle `J_m ∈ [0, 4π/N]`.
pub fn breached(curve: &GgmCurve, sigma: f64, settings: &QuenchedSettings) -> Result<f64> {
    check_sigma(sigma)?;
    let period = all_equal_period(curve.modes());
    let values = quenched_profile(curve, sigma, period, settings)?;
    let squares: Vec<f64> = values.iter().map(|v| v * v).collect();
    let mean = simpson_sum(&values, 0.0, period) / period;
    let mean_sq = simpson_sum(&squares, 0.0, period) / period;
    Ok((mean_sq - mean * mean).max(0.0))
}

/// Breached GGM `Δ²G` of the all-equal ring.
pub fn breached_ggm(modes: usize, squeezing: f64, sigma: f64) -> Result<f64> {
    let curve = GgmCurve::all_equal(modes, squeezing)?;
    breached(&curve, sigma, &QuenchedSettings::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::ggm_analytic_lr;

    fn gh(mean: f64, sigma: f64) -> DisorderSpec {
        DisorderSpec::new(mean, sigma, DisorderScheme::default()).unwrap()
    }

    #[test]
    fn zero_sigma_is_the_ordered_value() {
        for jm in [0.0, 0.4, 2.2] {
            assert_eq!(quenched_ggm(5, 1.0, &gh(jm, 0.0)).unwrap(), ggm_analytic_lr(5, jm, 1.0).unwrap());
        }
    }

    #[test]
    fn spec_validation() {
        assert!(DisorderSpec::new(1.0, -0.1, DisorderScheme::default()).is_err());
        assert!(DisorderSpec::new(1.0, 0.1, DisorderScheme::GaussHermite { order: 8 }).is_err());
        assert!(DisorderSpec::new(1.0, 0.1, DisorderScheme::GaussHermite { order: 2048 }).is_err());
        assert!(DisorderSpec::new(1.0, 0.1, DisorderScheme::MonteCarlo { samples: 10, seed: 1 }).is_err());
        assert!(DisorderSpec::new(-1.0, 0.1, DisorderScheme::default()).is_err());
    }

    #[test]
    fn tiny_sigma_is_continuous() {
        for jm in [0.3, 1.0, 2.0] {
            let q = quenched_ggm(4, 1.0, &gh(jm, 1e-6)).unwrap();
            assert!((q - ggm_analytic_lr(4, jm, 1.0).unwrap()).abs() < 1e-4);
        }
    }

    #[test]
    fn accumulated_at_one_period_ignores_sigma() {
        let ordered = quenched_accumulated_ggm(4, 1.0, 0.0, std::f64::consts::PI).unwrap();
        for sigma in [0.5, 1.0, 2.0] {
            let q = quenched_accumulated_ggm(4, 1.0, sigma, std::f64::consts::PI).unwrap();
            assert!((q - ordered).abs() < 1e-3);
        }
    }

    #[test]
    fn breached_shrinks_with_disorder() {
        let values: Vec<f64> = [0.1, 0.3, 0.5, 1.0].iter().map(|&s| breached_ggm(4, 1.0, s).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[1] < w[0]), "{values:?}");
        assert!(values.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn vacuum_input_has_no_breached_ggm() {
        // s = 0 gives a flat zero curve
        assert_eq!(breached_ggm(6, 0.0, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn monte_carlo_is_reproducible_and_stream_keyed() {
        let curve = GgmCurve::all_equal(4, 1.0).unwrap();
        let spec = DisorderSpec::new(1.0, 0.5, DisorderScheme::MonteCarlo { samples: 2000, seed: 7 }).unwrap();
        let a = quenched_average(&curve, &spec, 3).unwrap();
        let b = quenched_average(&curve, &spec, 3).unwrap();
        let c = quenched_average(&curve, &spec, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.mean, c.mean);
        assert!(a.standard_error.unwrap() > 0.0);
    }
}
