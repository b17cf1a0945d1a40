//! Error type shared by all modules.

use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Matrix failed the Hermiticity check. Carries the largest relative
    /// asymmetry `|a_ij - conj(a_ji)| / max|a|` found.
    NotHermitian {
        max_asymmetry: f64,
        tolerance: f64,
    },
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// Jacobi sweep limit exhausted before the off-diagonal norm vanished.
    EigenConvergence {
        sweeps: usize,
    },
    /// Requested integrator step exceeds the caller-declared stability bound.
    StepTooLarge {
        step: f64,
        bound: f64,
    },
    GridNotIncreasing,
    InvalidParameter(String),
    /// Ensemble discretization contradicts the declared circuit parameters.
    InconsistentEnsemble(String),
    /// Detuning flip requested while the input pulse is still entering.
    FlipInsideInput {
        t_prime: f64,
        support_end: f64,
    },
    /// Self-mode discriminant is non-positive (overdamped regime).
    Overdamped {
        discriminant: f64,
    },
    /// Gate-condition tuple has no real coupling solution; carries the deficit
    /// `4 tau^2 (N-1)/N - (pi k)^2`.
    Infeasible {
        deficit: f64,
    },
    /// A gate-condition solution was reused with different parameters.
    StaleSolution(String),
    /// Photon leakage left the dispersive validity contract.
    DispersiveContract {
        leakage: f64,
    },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotHermitian {
                max_asymmetry,
                tolerance,
            } => write!(
                f,
                "matrix is not Hermitian: max relative asymmetry {max_asymmetry:e} exceeds {tolerance:e}"
            ),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::EigenConvergence { sweeps } => {
                write!(f, "eigendecomposition did not converge in {sweeps} sweeps")
            }
            Error::StepTooLarge { step, bound } => write!(
                f,
                "integration step {step:e} exceeds declared stability bound {bound:e}"
            ),
            Error::GridNotIncreasing => write!(f, "time grid must be strictly increasing"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::InconsistentEnsemble(msg) => write!(f, "inconsistent ensemble: {msg}"),
            Error::FlipInsideInput {
                t_prime,
                support_end,
            } => write!(
                f,
                "detuning flip at t' = {t_prime:e} lies inside the input pulse support (ends at {support_end:e})"
            ),
            Error::Overdamped { discriminant } => write!(
                f,
                "overdamped self-mode parameters: discriminant {discriminant:e} <= 0"
            ),
            Error::Infeasible { deficit } => write!(
                f,
                "gate-condition tuple infeasible: coupling discriminant short by {deficit:e}"
            ),
            Error::StaleSolution(msg) => write!(f, "stale gate-condition solution: {msg}"),
            Error::DispersiveContract { leakage } => write!(
                f,
                "photon leakage {leakage:e} exceeds 0.5: outside the dispersive contract"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
