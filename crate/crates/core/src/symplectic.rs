//! Gaussian-state algebra.
//!
//! Covariance matrices use the interleaved quadrature ordering
//! `(x₁, p₁, x₂, p₂, …, x_N, p_N)` with vacuum variance ½ (ℏ = 1), so the
//! vacuum is `½·I` and a state is pure iff every symplectic eigenvalue is ½.
//! Displacements are not tracked: every state handled here is centred.

use std::fmt;

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};

use crate::error::{invalid, unphysical, Result};

/// Variance of each vacuum quadrature.
pub const VACUUM_VARIANCE: f64 = 0.5;

/// Symplectic eigenvalues in `[½ - UNCERTAINTY_SLACK, ½)` are clamped to ½;
/// anything lower is rejected as unphysical.
pub const UNCERTAINTY_SLACK: f64 = 1e-6;

/// Maximum entry of `S M Sᵀ - M` tolerated for a symplectic transform.
pub const SYMPLECTIC_TOLERANCE: f64 = 1e-9;

/// Largest supported mode count.
pub const MAX_MODES: usize = 256;

const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// The block-diagonal symplectic form `M = ⊕ Ω`, `Ω = [[0, 1], [-1, 0]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    modes: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn new(modes: usize) -> Result<Self> {
        check_mode_count(modes)?;
        Ok(Self { modes, matrix: form_matrix(modes) })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// Builds the `N`-mode symplectic form.
pub fn symplectic_form(modes: usize) -> Result<SymplecticForm> {
    SymplecticForm::new(modes)
}

fn check_mode_count(modes: usize) -> Result<()> {
    if modes == 0 {
        return Err(invalid("mode count must be at least 1"));
    }
    if modes > MAX_MODES {
        return Err(invalid(format!("mode count {modes} exceeds the supported maximum {MAX_MODES}")));
    }
    Ok(())
}

fn form_matrix(modes: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        m[(2 * k, 2 * k + 1)] = 1.0;
        m[(2 * k + 1, 2 * k)] = -1.0;
    }
    m
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// An ordered set of 1-based mode indices, used to name reductions.
///
/// Ordering is lexicographic on the index list, which is also the
/// tie-breaking order for bipartition maxima.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeSet(Vec<usize>);

impl ModeSet {
    /// Indices must be nonempty, strictly increasing and at least 1.
    pub fn new(modes: Vec<usize>) -> Result<Self> {
        if modes.is_empty() {
            return Err(invalid("mode set must not be empty"));
        }
        if modes[0] == 0 {
            return Err(invalid("mode indices are 1-based"));
        }
        if modes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid(format!("mode indices must be strictly increasing: {modes:?}")));
        }
        Ok(Self(modes))
    }

    /// `len` consecutive modes on a ring of `total` modes starting at `start`,
    /// wrapping past `total`.
    pub fn ring_block(start: usize, len: usize, total: usize) -> Result<Self> {
        if start == 0 || start > total || len == 0 || len > total {
            return Err(invalid(format!("ring block start={start} len={len} does not fit {total} modes")));
        }
        let mut modes: Vec<usize> = (0..len).map(|k| (start - 1 + k) % total + 1).collect();
        modes.sort_unstable();
        Self::new(modes)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks that the set is a proper subset of `1..=modes`.
    pub fn check_proper_subset_of(&self, modes: usize) -> Result<()> {
        if let Some(&last) = self.0.last() {
            if last > modes {
                return Err(invalid(format!("mode {last} out of range for {modes} modes")));
            }
        }
        if self.0.len() >= modes {
            return Err(invalid("reduction must drop at least one mode"));
        }
        Ok(())
    }
}

impl fmt::Display for ModeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|m| m.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A real `2N × 2N` linear map on quadratures.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    modes: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticTransform {
    /// Accepts `matrix` only if it preserves the symplectic form to
    /// [`SYMPLECTIC_TOLERANCE`].
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let s = Self::new_unchecked(matrix)?;
        let dev = check_symplectic(&s);
        if dev > SYMPLECTIC_TOLERANCE {
            return Err(invalid(format!("matrix is not symplectic (deviation {dev:.3e})")));
        }
        Ok(s)
    }

    /// Only the shape is validated; use [`check_symplectic`] to inspect the
    /// structure.
    pub fn new_unchecked(matrix: DMatrix<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if n != matrix.ncols() || n == 0 || !n.is_multiple_of(2) {
            return Err(invalid(format!(
                "transform must be square with even dimension, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let modes = n / 2;
        check_mode_count(modes)?;
        Ok(Self { modes, matrix })
    }

    pub fn identity(modes: usize) -> Result<Self> {
        check_mode_count(modes)?;
        Ok(Self { modes, matrix: DMatrix::identity(2 * modes, 2 * modes) })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// `max |(S M Sᵀ − M)_{jk}|`.
pub fn check_symplectic(transform: &SymplecticTransform) -> f64 {
    let form = form_matrix(transform.modes);
    let s = &transform.matrix;
    max_abs(&(s * &form * s.transpose() - form))
}

/// A centred Gaussian state described by its covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    modes: usize,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Validates symmetry, positive definiteness and the uncertainty
    /// relation. The stored matrix is the symmetrised input.
    pub fn new(cov: DMatrix<f64>) -> Result<Self> {
        let n = cov.nrows();
        if n != cov.ncols() || n == 0 || !n.is_multiple_of(2) {
            return Err(invalid(format!(
                "covariance must be square with even dimension, got {}x{}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        check_mode_count(n / 2)?;
        if cov.iter().any(|v| !v.is_finite()) {
            return Err(invalid("covariance has non-finite entries"));
        }
        let asym = max_abs(&(&cov - cov.transpose()));
        if asym > SYMMETRY_TOLERANCE * max_abs(&cov).max(1.0) {
            return Err(invalid(format!("covariance is not symmetric (deviation {asym:.3e})")));
        }
        let state = Self::from_trusted(cov);
        if Cholesky::new(state.cov.clone()).is_none() {
            return Err(unphysical("covariance is not positive definite"));
        }
        state.symplectic_eigenvalues()?;
        Ok(state)
    }

    /// Wraps a covariance known to be physical (a reduction or symplectic
    /// image of a validated state), symmetrising it.
    pub(crate) fn from_trusted(cov: DMatrix<f64>) -> Self {
        let modes = cov.nrows() / 2;
        let cov = (&cov + cov.transpose()) * 0.5;
        Self { modes, cov }
    }

    pub fn vacuum(modes: usize) -> Result<Self> {
        check_mode_count(modes)?;
        Ok(Self::from_trusted(DMatrix::identity(2 * modes, 2 * modes) * VACUUM_VARIANCE))
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn into_covariance(self) -> DMatrix<f64> {
        self.cov
    }

    /// The `N` symplectic eigenvalues in descending order.
    ///
    /// Computed as the square roots of the (doubly degenerate) eigenvalues
    /// of the symmetric matrix `Kᵀ K`, `K = Ξ^{½} M Ξ^{½}`, which share the
    /// moduli of the eigenvalues of `MΞ`.
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        let eig = SymmetricEigen::new(self.cov.clone());
        if let Some(bad) = eig.eigenvalues.iter().find(|&&l| l <= 0.0) {
            return Err(unphysical(format!("covariance has non-positive eigenvalue {bad:e}")));
        }
        let root =
            &eig.eigenvectors * DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt)) * eig.eigenvectors.transpose();
        let k = &root * form_matrix(self.modes) * &root;
        let gram = k.transpose() * &k;
        let gram = (&gram + gram.transpose()) * 0.5;
        let mut squares: Vec<f64> = SymmetricEigen::new(gram).eigenvalues.iter().copied().collect();
        squares.sort_by(|a, b| b.total_cmp(a));

        let mut nus = Vec::with_capacity(self.modes);
        for pair in squares.chunks(2) {
            let nu = (0.5 * (pair[0] + pair[1])).max(0.0).sqrt();
            if nu < VACUUM_VARIANCE - UNCERTAINTY_SLACK {
                return Err(unphysical(format!("symplectic eigenvalue {nu} violates the uncertainty relation")));
            }
            nus.push(nu.max(VACUUM_VARIANCE));
        }
        Ok(nus)
    }

    /// Principal submatrix on the quadrature pairs of `modes`.
    pub fn reduce(&self, modes: &ModeSet) -> Result<GaussianState> {
        modes.check_proper_subset_of(self.modes)?;
        let idx: Vec<usize> = modes.as_slice().iter().flat_map(|&m| [2 * (m - 1), 2 * (m - 1) + 1]).collect();
        let sub = DMatrix::from_fn(idx.len(), idx.len(), |r, c| self.cov[(idx[r], idx[c])]);
        Ok(Self::from_trusted(sub))
    }

    /// `S Ξ Sᵀ`, re-symmetrised.
    pub fn evolve(&self, transform: &SymplecticTransform) -> Result<GaussianState> {
        if transform.modes != self.modes {
            return Err(invalid(format!("transform acts on {} modes, state has {}", transform.modes, self.modes)));
        }
        let s = &transform.matrix;
        Ok(Self::from_trusted(s * &self.cov * s.transpose()))
    }

    /// `ln det Ξ` via Cholesky.
    pub fn log_det(&self) -> Result<f64> {
        let chol = Cholesky::new(self.cov.clone()).ok_or_else(|| unphysical("covariance is not positive definite"))?;
        Ok(2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>())
    }

    /// `1 / √(2^{2N} det Ξ)`.
    pub fn purity(&self) -> Result<f64> {
        let log_norm = self.modes as f64 * 4f64.ln() + self.log_det()?;
        Ok((-0.5 * log_norm).exp().min(1.0))
    }
}

pub fn symplectic_eigenvalues(state: &GaussianState) -> Result<Vec<f64>> {
    state.symplectic_eigenvalues()
}

pub fn reduce(state: &GaussianState, modes: &ModeSet) -> Result<GaussianState> {
    state.reduce(modes)
}

pub fn evolve(state: &GaussianState, transform: &SymplecticTransform) -> Result<GaussianState> {
    state.evolve(transform)
}

pub fn purity(state: &GaussianState) -> Result<f64> {
    state.purity()
}
