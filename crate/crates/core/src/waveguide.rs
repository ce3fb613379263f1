//! Circular waveguide arrays: coupling matrices, the squeezed input state and
//! the passive propagator.
//!
//! The single coupling parameter `J` absorbs the propagation time (`J = J'·t`,
//! with `t = zμ/c` for propagation distance `z` and refractive index `μ`), so
//! time never appears explicitly.
//!
//! The mode Hamiltonian is `Ĥ = a†·A·a` for the real symmetric circulant `A`.
//! Written as `ξ†Hξ` with `ξ = (a, a†)` its coefficient matrix is
//! `H = ½·diag(A, Aᵀ)`, and the quadrature propagator
//! `S = T† L† exp(−iKH) L T` acts on the annihilation operators through
//! `U = exp(−iA/2)`.

use std::f64::consts::{PI, TAU};

use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::error::{invalid, Result};
use crate::symplectic::{GaussianState, SymplecticTransform, MAX_MODES, VACUUM_VARIANCE};

/// Largest allowed relative strength of a long-range coupling.
pub const MAX_RANGE_STRENGTH: f64 = 2.0;

const UNITARITY_TOLERANCE: f64 = 1e-8;
const CIRCULANT_TOLERANCE: f64 = 1e-12;

/// Relative coupling strengths `n_1 … n_{⌊N/2⌋}` on a ring of `N ≥ 3` modes.
///
/// `n_1 = 1` always: the nearest-neighbour coupling sets the scale `J`.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeStrengths {
    modes: usize,
    strengths: Vec<f64>,
}

impl RangeStrengths {
    /// `strengths[i-1]` is `n_i`. Shorter lists are padded with zeros.
    pub fn new(modes: usize, mut strengths: Vec<f64>) -> Result<Self> {
        if modes < 3 {
            return Err(invalid(format!("a ring needs at least 3 modes, got {modes}")));
        }
        if modes > MAX_MODES {
            return Err(invalid(format!("mode count {modes} exceeds {MAX_MODES}")));
        }
        let ranges = modes / 2;
        if strengths.len() > ranges {
            return Err(invalid(format!(
                "{} range strengths given but {modes} modes only have {ranges} ranges",
                strengths.len()
            )));
        }
        strengths.resize(ranges, 0.0);
        if strengths[0] != 1.0 {
            return Err(invalid(format!("nearest-neighbour strength n_1 must be 1, got {}", strengths[0])));
        }
        for (i, &n) in strengths.iter().enumerate() {
            if !(0.0..=MAX_RANGE_STRENGTH).contains(&n) {
                return Err(invalid(format!("range strength n_{} = {n} violates 0 < n_i <= 2", i + 1)));
            }
        }
        if let Some(gap) = strengths.windows(2).position(|w| w[0] == 0.0 && w[1] != 0.0) {
            return Err(invalid(format!(
                "range strength n_{} is nonzero but n_{} is zero (ranges must be contiguous)",
                gap + 2,
                gap + 1
            )));
        }
        Ok(Self { modes, strengths })
    }

    pub fn nearest_neighbor(modes: usize) -> Result<Self> {
        Self::new(modes, vec![1.0])
    }

    /// Every pair of modes coupled with the same strength.
    pub fn all_equal(modes: usize) -> Result<Self> {
        Self::new(modes, vec![1.0; modes / 2])
    }

    /// `n_i = 1` for `i ≤ range`, zero beyond.
    pub fn up_to_range(modes: usize, range: usize) -> Result<Self> {
        if range == 0 {
            return Err(invalid("interaction range must be at least 1"));
        }
        Self::new(modes, vec![1.0; range])
    }

    /// Copy with `n_range` replaced.
    pub fn with_strength(&self, range: usize, value: f64) -> Result<Self> {
        if range == 0 || range > self.strengths.len() {
            return Err(invalid(format!("range {range} out of 1..={}", self.strengths.len())));
        }
        let mut s = self.strengths.clone();
        s[range - 1] = value;
        Self::new(self.modes, s)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn strengths(&self) -> &[f64] {
        &self.strengths
    }

    /// Longest range with a nonzero strength.
    pub fn max_range(&self) -> usize {
        self.strengths.iter().rposition(|&n| n != 0.0).map_or(0, |p| p + 1)
    }

    pub fn is_all_equal(&self) -> bool {
        self.strengths.iter().all(|&n| n == 1.0)
    }
}

/// Range strengths together with the coupling `J`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingProfile {
    strengths: RangeStrengths,
    coupling: f64,
}

impl CouplingProfile {
    pub fn new(strengths: RangeStrengths, coupling: f64) -> Result<Self> {
        if !coupling.is_finite() || coupling < 0.0 {
            return Err(invalid(format!("coupling J must be finite and >= 0, got {coupling}")));
        }
        Ok(Self { strengths, coupling })
    }

    pub fn modes(&self) -> usize {
        self.strengths.modes
    }

    pub fn strengths(&self) -> &RangeStrengths {
        &self.strengths
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }
}

/// The real symmetric circulant `A` of `Ĥ = a†·A·a`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    first_row: Vec<f64>,
    matrix: DMatrix<f64>,
}

impl CouplingMatrix {
    /// Builds the circulant from its first row, which must satisfy
    /// `c_0 = 0` and `c_i = c_{N-i}`.
    pub fn from_first_row(first_row: Vec<f64>) -> Result<Self> {
        let n = first_row.len();
        if n == 0 {
            return Err(invalid("coupling matrix must have at least one mode"));
        }
        if first_row[0] != 0.0 {
            return Err(invalid("circulant coupling must have a zero diagonal"));
        }
        for i in 1..n {
            if (first_row[i] - first_row[n - i]).abs() > CIRCULANT_TOLERANCE {
                return Err(invalid("circulant coupling row is not symmetric"));
            }
        }
        let matrix = DMatrix::from_fn(n, n, |j, k| first_row[(k + n - j) % n]);
        Ok(Self { first_row, matrix })
    }

    /// Accepts a dense matrix if it is a symmetric circulant.
    pub fn from_dense(matrix: DMatrix<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if n == 0 || n != matrix.ncols() {
            return Err(invalid("coupling matrix must be square and nonempty"));
        }
        let row: Vec<f64> = matrix.row(0).iter().copied().collect();
        for j in 0..n {
            for k in 0..n {
                if (matrix[(j, k)] - row[(k + n - j) % n]).abs() > CIRCULANT_TOLERANCE {
                    return Err(invalid(format!("matrix is not circulant at ({j}, {k})")));
                }
            }
        }
        Self::from_first_row(row)
    }

    pub fn modes(&self) -> usize {
        self.first_row.len()
    }

    pub fn first_row(&self) -> &[f64] {
        &self.first_row
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// The circulant coupling matrix of a profile: `c_i = c_{N-i} = J·n_i`.
///
/// For even `N` the antipodal range `N/2` pairs each mode with a single
/// partner, so it enters once.
pub fn coupling_matrix(profile: &CouplingProfile) -> CouplingMatrix {
    let n = profile.modes();
    let mut row = vec![0.0; n];
    for (i, &strength) in profile.strengths.strengths.iter().enumerate() {
        let range = i + 1;
        let c = profile.coupling * strength;
        row[range] = c;
        row[n - range] = c;
    }
    CouplingMatrix::from_first_row(row).expect("profile rows are symmetric circulants")
}

/// Eigenvalues of a circulant in DFT order, `λ_k = Σ_j c_j cos(2πjk/N)`.
pub fn circulant_spectrum(a: &CouplingMatrix) -> Vec<f64> {
    let n = a.modes();
    (0..n)
        .map(|k| a.first_row.iter().enumerate().map(|(j, c)| c * (TAU * (j * k % n) as f64 / n as f64).cos()).sum())
        .collect()
}

/// `U = exp(−iA/2)`, by eigendecomposition of the real symmetric `A`.
pub fn mode_unitary(a: &CouplingMatrix) -> DMatrix<Complex<f64>> {
    let eig = SymmetricEigen::new(a.matrix.clone());
    let v = eig.eigenvectors.map(|x| Complex::new(x, 0.0));
    let phases = eig.eigenvalues.map(|l| Complex::from_polar(1.0, -0.5 * l));
    &v * DMatrix::from_diagonal(&phases) * v.transpose()
}

/// Deviation `max |U U† − I|`.
pub fn unitarity_deviation(u: &DMatrix<Complex<f64>>) -> f64 {
    let n = u.nrows();
    let prod = u * u.adjoint() - DMatrix::<Complex<f64>>::identity(n, n);
    prod.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Realifies a mode unitary into the interleaved quadrature basis:
/// `x' = Re U·x − Im U·p`, `p' = Im U·x + Re U·p`.
pub fn symplectic_from_mode_unitary(u: &DMatrix<Complex<f64>>) -> Result<SymplecticTransform> {
    let n = u.nrows();
    if n == 0 || n != u.ncols() {
        return Err(invalid("mode unitary must be square and nonempty"));
    }
    let dev = unitarity_deviation(u);
    if dev.is_nan() || dev > UNITARITY_TOLERANCE {
        return Err(invalid(format!("matrix is not unitary (deviation {dev:.3e})")));
    }
    let mut s = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for k in 0..n {
            let z = u[(j, k)];
            s[(2 * j, 2 * k)] = z.re;
            s[(2 * j, 2 * k + 1)] = -z.im;
            s[(2 * j + 1, 2 * k)] = z.im;
            s[(2 * j + 1, 2 * k + 1)] = z.re;
        }
    }
    SymplecticTransform::new(s)
}

/// The symplectic propagator of a coupling profile.
pub fn waveguide_propagator(profile: &CouplingProfile) -> Result<SymplecticTransform> {
    symplectic_from_mode_unitary(&mode_unitary(&coupling_matrix(profile)))
}

/// Single-mode squeezing `ξ = s·e^{iθ}` injected into one mode, vacuum
/// elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedInputSpec {
    squeezing: f64,
    angle: f64,
    input_mode: usize,
}

impl SqueezedInputSpec {
    /// Input in mode 1; `angle` is reduced modulo 2π.
    pub fn new(squeezing: f64, angle: f64) -> Result<Self> {
        if !squeezing.is_finite() || squeezing < 0.0 {
            return Err(invalid(format!("squeezing s must be finite and >= 0, got {squeezing}")));
        }
        if !angle.is_finite() {
            return Err(invalid("squeezing angle must be finite"));
        }
        Ok(Self { squeezing, angle: angle.rem_euclid(TAU), input_mode: 1 })
    }

    pub fn at_mode(mut self, input_mode: usize) -> Result<Self> {
        if input_mode == 0 {
            return Err(invalid("input mode index is 1-based"));
        }
        self.input_mode = input_mode;
        Ok(self)
    }

    pub fn squeezing(&self) -> f64 {
        self.squeezing
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn input_mode(&self) -> usize {
        self.input_mode
    }
}

/// Covariance of the squeezed input on `modes` modes.
pub fn initial_covariance(spec: &SqueezedInputSpec, modes: usize) -> Result<GaussianState> {
    if spec.input_mode > modes {
        return Err(invalid(format!("input mode {} out of range for {modes} modes", spec.input_mode)));
    }
    let mut cov = GaussianState::vacuum(modes)?.into_covariance();
    let (c, sh) = ((2.0 * spec.squeezing).cosh(), (2.0 * spec.squeezing).sinh());
    let (sin, cos) = spec.angle.sin_cos();
    let k = 2 * (spec.input_mode - 1);
    cov[(k, k)] = VACUUM_VARIANCE * (c + cos * sh);
    cov[(k, k + 1)] = VACUUM_VARIANCE * sin * sh;
    cov[(k + 1, k)] = VACUUM_VARIANCE * sin * sh;
    cov[(k + 1, k + 1)] = VACUUM_VARIANCE * (c - cos * sh);
    GaussianState::new(cov)
}

/// Evolves the squeezed input through the waveguide ring.
pub fn evolve_waveguide(profile: &CouplingProfile, spec: &SqueezedInputSpec) -> Result<GaussianState> {
    let input = initial_covariance(spec, profile.modes())?;
    input.evolve(&waveguide_propagator(profile)?)
}

/// Period in `J` of the GGM for an all-equal ring: `4π/N`.
pub fn all_equal_period(modes: usize) -> f64 {
    4.0 * PI / modes as f64
}
