//! Genuine multimode entanglement (generalized geometric measure), its
//! accumulated average, closed forms for special rings, and Rényi-2 block
//! entropies.

use itertools::Itertools;

use crate::error::{invalid, Result};
use crate::numerics::simpson;
use crate::symplectic::{GaussianState, ModeSet};
use crate::waveguide::{evolve_waveguide, CouplingProfile, RangeStrengths, SqueezedInputSpec};

/// Pure-state gate for [`ggm`]: `|purity − 1|` must not exceed this.
pub const GGM_PURITY_TOLERANCE: f64 = 1e-6;

/// Fidelity terms closer than this to the maximum count as ties.
const TIE_TOLERANCE: f64 = 1e-12;

/// Which reductions enter the maximisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BipartitionStrategy {
    /// Every subset of at most `⌊N/2⌋` modes.
    FullEnumeration,
    /// The `N − 1` contiguous blocks starting at the input mode (`anchor`) or
    /// its neighbour. Exact only when modes other than the anchor are
    /// interchangeable, as for the all-equal ring.
    SymmetryReduced { anchor: usize },
}

impl BipartitionStrategy {
    /// Symmetry-reduced list anchored at mode 1.
    pub const fn symmetry_reduced() -> Self {
        Self::SymmetryReduced { anchor: 1 }
    }

    /// The strategy that is exact for `strengths`: symmetry-reduced for the
    /// all-equal ring, full enumeration otherwise.
    pub fn default_for(strengths: &RangeStrengths, input_mode: usize) -> Self {
        if strengths.is_all_equal() {
            Self::SymmetryReduced { anchor: input_mode }
        } else {
            Self::FullEnumeration
        }
    }

    pub fn bipartitions(&self, modes: usize) -> Result<Vec<ModeSet>> {
        if modes < 2 {
            return Err(invalid("bipartitions need at least 2 modes"));
        }
        let half = modes / 2;
        match *self {
            Self::FullEnumeration => (1..=half).flat_map(|m| (1..=modes).combinations(m)).map(ModeSet::new).collect(),
            Self::SymmetryReduced { anchor } => {
                if anchor == 0 || anchor > modes {
                    return Err(invalid(format!("anchor {anchor} out of range for {modes} modes")));
                }
                let next = anchor % modes + 1;
                let mut sets = Vec::with_capacity(modes - 1);
                for m in 1..=half {
                    sets.push(ModeSet::ring_block(anchor, m, modes)?);
                    if m < half || modes % 2 == 1 {
                        sets.push(ModeSet::ring_block(next, m, modes)?);
                    }
                }
                Ok(sets)
            }
        }
    }
}

/// Outcome of a GGM evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct GgmResult {
    pub value: f64,
    pub argmax_bipartition: ModeSet,
    /// `∏ 2/(1 + 2ν_i)` over the argmax reduction.
    pub max_fidelity_term: f64,
}

/// `∏ 2/(1 + 2ν_i)` over the symplectic eigenvalues of the reduction.
pub fn bipartition_fidelity(state: &GaussianState, modes: &ModeSet) -> Result<f64> {
    let nus = state.reduce(modes)?.symplectic_eigenvalues()?;
    Ok(nus.iter().map(|nu| 2.0 / (1.0 + 2.0 * nu)).product())
}

/// Generalized geometric measure of a pure Gaussian state with `N ≥ 3`.
///
/// Ties in the maximal fidelity term resolve to the lexicographically
/// smallest mode set.
pub fn ggm(state: &GaussianState, strategy: BipartitionStrategy) -> Result<GgmResult> {
    let n = state.modes();
    if n < 3 {
        return Err(invalid(format!("GGM needs at least 3 modes, got {n}")));
    }
    let purity = state.purity()?;
    if (purity - 1.0).abs() > GGM_PURITY_TOLERANCE {
        return Err(invalid(format!("GGM is defined for pure states only (purity {purity})")));
    }
    let scored: Vec<(f64, ModeSet)> = strategy
        .bipartitions(n)?
        .into_iter()
        .map(|set| Ok((bipartition_fidelity(state, &set)?, set)))
        .collect::<Result<_>>()?;
    let best = scored.iter().map(|(f, _)| *f).fold(f64::NEG_INFINITY, f64::max);
    let (fidelity, set) = scored
        .into_iter()
        .filter(|(f, _)| *f >= best - TIE_TOLERANCE)
        .min_by(|a, b| a.1.cmp(&b.1))
        .expect("at least one bipartition");
    Ok(GgmResult { value: 1.0 - fidelity, argmax_bipartition: set, max_fidelity_term: fidelity })
}

/// Largest single-mode symplectic eigenvalue of the all-equal ring
/// (attained on any mode other than the input):
///
/// `ν = √(¼f₁ − 2 sinh²s [f₂ cos(JN/2) + cos(JN)] + f₃ cosh 2s) / N²`
/// with `f₁ = N⁴ − 4N² + 12`, `f₂ = N² − 4`, `f₃ = N² − 3`.
pub fn analytic_lr_nu(modes: usize, coupling: f64, squeezing: f64) -> Result<f64> {
    if modes < 4 {
        return Err(invalid(format!("closed-form all-equal GGM requires N >= 4, got {modes}")));
    }
    let n = modes as f64;
    let n2 = n * n;
    let f1 = n2 * n2 - 4.0 * n2 + 12.0;
    let f2 = n2 - 4.0;
    let f3 = n2 - 3.0;
    let sh2 = squeezing.sinh().powi(2);
    let radicand = 0.25 * f1 - 2.0 * sh2 * (f2 * (coupling * n / 2.0).cos() + (coupling * n).cos())
        + f3 * (2.0 * squeezing).cosh();
    Ok(radicand.sqrt() / n2)
}

/// Closed-form GGM of the all-equal ring, `1 − 2/(2ν + 1)`.
pub fn ggm_analytic_lr(modes: usize, coupling: f64, squeezing: f64) -> Result<f64> {
    let nu = analytic_lr_nu(modes, coupling, squeezing)?;
    Ok(1.0 - 2.0 / (2.0 * nu + 1.0))
}

/// Single-mode symplectic eigenvalues of the three-mode ring: `(ν₁, ν₂)` for
/// the input mode and for either of the other two.
pub fn three_mode_nu(coupling: f64, squeezing: f64) -> (f64, f64) {
    let sh2 = squeezing.sinh().powi(2);
    let base = 57.0 + 24.0 * (2.0 * squeezing).cosh();
    let (c_half, c_full) = ((1.5 * coupling).cos(), (3.0 * coupling).cos());
    let nu1 = (base - 16.0 * sh2 * (c_half + 2.0 * c_full)).sqrt() / 18.0;
    let nu2 = (base - 8.0 * sh2 * (5.0 * c_half + c_full)).sqrt() / 18.0;
    (nu1, nu2)
}

/// Closed-form GGM of the three-mode ring. The maximal fidelity term
/// belongs to the less mixed single-mode reduction, so the smaller
/// eigenvalue enters.
pub fn three_mode_ggm(coupling: f64, squeezing: f64) -> f64 {
    let (nu1, nu2) = three_mode_nu(coupling, squeezing);
    1.0 - 2.0 / (1.0 + 2.0 * nu1.min(nu2))
}

/// `(1/J₀) ∫₀^{J₀} G(J) dJ` by composite Simpson with `steps` intervals.
pub fn accumulated_ggm<F>(curve: F, j0: f64, steps: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if !j0.is_finite() || j0 <= 0.0 {
        return Err(invalid(format!("accumulation interval J0 must be positive, got {j0}")));
    }
    Ok(simpson(curve, 0.0, j0, steps)? / j0)
}

/// Rényi-2 entropy `½ ln(2^{2N} det Ξ)` of a whole state.
pub fn renyi2_entropy(state: &GaussianState) -> Result<f64> {
    let n = state.modes() as f64;
    Ok(0.5 * (n * 4f64.ln() + state.log_det()?))
}

/// Rényi-2 entropy of the block `{2, …, L+1}`, `1 ≤ L ≤ ⌊N/2⌋ − 1`.
pub fn block_entropy(state: &GaussianState, length: usize) -> Result<f64> {
    let n = state.modes();
    if n < 3 {
        return Err(invalid(format!("block entropy needs at least 3 modes, got {n}")));
    }
    let max_len = n / 2 - 1;
    if length == 0 || length > max_len {
        return Err(invalid(format!("block length {length} out of 1..={max_len} for {n} modes")));
    }
    let block = ModeSet::new((2..=length + 1).collect())?;
    renyi2_entropy(&state.reduce(&block)?)
}

/// GGM of the evolved squeezed input as a function of the coupling `J`, for
/// a fixed ring.
///
/// All-equal rings with `N ≥ 4` are evaluated in closed form unless
/// [`GgmCurve::numeric`] is requested. Negative `J` is handled through
/// `G(−J) = G(J)`: reversing the propagation conjugates the mode unitary,
/// which equals the forward evolution conjugated by the reflection `p → −p`
/// with the squeezing angle mirrored, and neither changes the GGM.
#[derive(Debug, Clone, PartialEq)]
pub struct GgmCurve {
    strengths: RangeStrengths,
    input: SqueezedInputSpec,
    strategy: BipartitionStrategy,
    closed_form: bool,
}

impl GgmCurve {
    pub fn new(strengths: RangeStrengths, input: SqueezedInputSpec) -> Result<Self> {
        if input.input_mode() > strengths.modes() {
            return Err(invalid(format!(
                "input mode {} out of range for {} modes",
                input.input_mode(),
                strengths.modes()
            )));
        }
        let strategy = BipartitionStrategy::default_for(&strengths, input.input_mode());
        let closed_form = strengths.is_all_equal() && strengths.modes() >= 4;
        Ok(Self { strengths, input, strategy, closed_form })
    }

    /// All-equal ring with mode-1 input at angle 0.
    pub fn all_equal(modes: usize, squeezing: f64) -> Result<Self> {
        Self::new(RangeStrengths::all_equal(modes)?, SqueezedInputSpec::new(squeezing, 0.0)?)
    }

    /// Forces the symplectic pipeline even where a closed form exists.
    pub fn numeric(mut self) -> Self {
        self.closed_form = false;
        self
    }

    pub fn with_strategy(mut self, strategy: BipartitionStrategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn modes(&self) -> usize {
        self.strengths.modes()
    }

    pub fn strengths(&self) -> &RangeStrengths {
        &self.strengths
    }

    pub fn input(&self) -> &SqueezedInputSpec {
        &self.input
    }

    pub fn strategy(&self) -> BipartitionStrategy {
        self.strategy
    }

    pub fn uses_closed_form(&self) -> bool {
        self.closed_form
    }

    pub fn eval(&self, coupling: f64) -> Result<f64> {
        if !coupling.is_finite() {
            return Err(invalid("coupling J must be finite"));
        }
        if self.closed_form {
            return ggm_analytic_lr(self.modes(), coupling, self.input.squeezing());
        }
        Ok(self.evaluate(coupling.abs())?.value)
    }

    /// Full result of the symplectic pipeline at `J ≥ 0`.
    pub fn evaluate(&self, coupling: f64) -> Result<GgmResult> {
        let profile = CouplingProfile::new(self.strengths.clone(), coupling)?;
        ggm(&evolve_waveguide(&profile, &self.input)?, self.strategy)
    }
}
