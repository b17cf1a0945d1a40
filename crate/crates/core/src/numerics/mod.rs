//! Dense complex linear algebra and time-evolution kernels.

mod eigen;
mod matrix;
mod ode;
mod state;

pub use eigen::{hermitian_eigen, HermitianEigen};
pub use matrix::ComplexMatrix;
pub use ode::{integrate_linear, integrate_observed, StepOptions, Trajectory};
pub use state::StateVector;

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Default relative tolerance for the Hermiticity check.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Propagates `psi0` by `exp(-iHt)` for Hermitian `h`.
///
/// The propagator is built from the full eigendecomposition of `h`, so norm
/// is preserved to machine precision and the same factorization can be reused
/// for spectral diagnostics. Suitable for the dense, small matrices that
/// appear here; not meant for large sparse problems.
pub fn expm_unitary(h: &ComplexMatrix, t: f64, psi0: &StateVector) -> Result<StateVector> {
    expm_unitary_tol(h, t, psi0, HERMITICITY_TOL)
}

/// Same as [`expm_unitary`] with an explicit Hermiticity tolerance.
pub fn expm_unitary_tol(
    h: &ComplexMatrix,
    t: f64,
    psi0: &StateVector,
    hermiticity_tol: f64,
) -> Result<StateVector> {
    if !t.is_finite() {
        return Err(Error::InvalidParameter("time must be finite".into()));
    }
    if h.rows() != psi0.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.rows(),
            found: psi0.dim(),
        });
    }
    let eig = hermitian_eigen(h, hermiticity_tol)?;
    Ok(psi0.with_amplitudes(eig.propagate(t, psi0.amplitudes())))
}

pub(crate) fn cis(theta: f64) -> Complex64 {
    // Needed for f64 math in no_std builds; shadowed by inherent methods in tests.
    #[allow(unused_imports)]
    use num_traits::Float;
    Complex64::new(theta.cos(), theta.sin())
}
