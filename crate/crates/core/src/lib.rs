//! Gaussian states of light in circularly coupled waveguide arrays and their
//! genuine multimode entanglement.
//!
//! * [`symplectic`]: covariance matrices, symplectic transforms, reductions.
//! * [`waveguide`]: ring coupling profiles and the induced passive evolution.
//! * [`measures`]: generalized geometric measure (GGM), accumulated GGM and
//!   block entropy.
//! * [`disorder`]: quenched Gaussian disorder in the coupling.

pub mod disorder;
pub mod error;
pub mod measures;
pub mod numerics;
pub mod symplectic;
pub mod waveguide;

pub use error::{Error, Result};
pub use measures::{ggm, ggm_analytic_lr, BipartitionStrategy, GgmCurve, GgmResult};
pub use symplectic::{GaussianState, ModeSet, SymplecticTransform};
pub use waveguide::{CouplingProfile, RangeStrengths, SqueezedInputSpec};
