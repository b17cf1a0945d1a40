//! Collective two-node gate engine.
//!
//! Two processing nodes of `N` atoms each exchange virtual photons through
//! the shared circuit mode; in the dispersive regime the dynamics close on
//! five collective states
//!
//! ```text
//! |psi1> = |0>|0>   |psi2> = |1>|0>   |psi3> = |0>|1>   |psi4> = |1>|1>
//! |psi5> = (|2>|0> + |0>|2>) / sqrt(2)
//! ```
//!
//! where `|k>` is the symmetric k-excitation state of one node. Everything in
//! this module is dimensionless: rates in units of the dispersive coupling,
//! times in its inverse. SI conversion belongs to the caller.

mod closed_form;
mod gates;
mod hamiltonian;

pub use closed_form::{
    blockade_closed_form, cde_target_state, evolve_closed_sigma, evolve_closed_sigma_pi,
};
pub use gates::{
    blockade_evolution, cde_solve, evolve_exact, iswap, sqrt_iswap_cde, BlockadeOutcome,
    GateConditionSolution, IswapOutcome, SqrtIswapOutcome,
};
pub use hamiltonian::{h_eff_sigma, h_eff_sigma_pi};

use alloc::string::ToString;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::StateVector;

pub const BASIS_LABELS: [&str; 5] = [
    "|0>2|0>3",
    "|1>2|0>3",
    "|0>2|1>3",
    "|1>2|1>3",
    "(|2>2|0>3+|0>2|2>3)/sqrt2",
];

/// Product state of the two node qubits, `{a2|0> + b2|1>}{a3|0> + b3|1>}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitPair {
    pub alpha2: Complex64,
    pub beta2: Complex64,
    pub alpha3: Complex64,
    pub beta3: Complex64,
}

impl QubitPair {
    pub fn new(
        alpha2: Complex64,
        beta2: Complex64,
        alpha3: Complex64,
        beta3: Complex64,
    ) -> Result<Self> {
        for (a, b, who) in [(alpha2, beta2, "qubit 2"), (alpha3, beta3, "qubit 3")] {
            let norm = a.norm_sqr() + b.norm_sqr();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParameter(alloc::format!(
                    "{who} is not normalized: |a|^2+|b|^2 = {norm}"
                )));
            }
        }
        Ok(Self {
            alpha2,
            beta2,
            alpha3,
            beta3,
        })
    }

    pub fn from_real(alpha2: f64, beta2: f64, alpha3: f64, beta3: f64) -> Result<Self> {
        Self::new(
            Complex64::new(alpha2, 0.0),
            Complex64::new(beta2, 0.0),
            Complex64::new(alpha3, 0.0),
            Complex64::new(beta3, 0.0),
        )
    }
}

/// State over the five collective basis states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CollectiveState {
    pub amps: [Complex64; 5],
}

impl CollectiveState {
    pub fn new(amps: [Complex64; 5]) -> Self {
        Self { amps }
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Overlap probability `|<self|other>|^2`.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn population(&self, k: usize) -> f64 {
        self.amps[k].norm_sqr()
    }

    /// Separability determinant of the qubit coefficient matrix,
    /// `a1 a4 - a2 a3`; nonzero means the pair is entangled (valid while the
    /// double-excitation amplitude is negligible).
    pub fn entanglement_det(&self) -> Complex64 {
        self.amps[0] * self.amps[3] - self.amps[1] * self.amps[2]
    }

    pub fn to_state_vector(&self) -> StateVector {
        StateVector::with_basis_labels(
            self.amps.to_vec(),
            BASIS_LABELS.iter().map(|s| s.to_string()).collect(),
        )
        .unwrap()
    }

    pub fn from_state_vector(sv: &StateVector) -> Result<Self> {
        if sv.dim() != 5 {
            return Err(Error::DimensionMismatch {
                expected: 5,
                found: sv.dim(),
            });
        }
        let mut amps = [Complex64::new(0.0, 0.0); 5];
        amps.copy_from_slice(sv.amplitudes());
        Ok(Self { amps })
    }

    /// Largest component-wise population difference against `other`.
    pub fn max_population_deviation(&self, other: &Self) -> f64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a.norm_sqr() - b.norm_sqr()).abs())
            .fold(0.0, f64::max)
    }

    /// Euclidean distance `||self - other||`.
    pub fn distance(&self, other: &Self) -> f64 {
        #[allow(unused_imports)]
        use num_traits::Float;
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Effective couplings of the two processing nodes.
///
/// `omega_sigma = |g_sigma|^2 / delta` is the circuit-mediated coupling,
/// `omega_pi = |g_pi|^2 / delta_prime` the local-cavity contribution (negative
/// for `delta_prime = -delta < 0`), and `omega_s = omega_sigma + omega_pi`
/// the combined same-node constant appearing on the diagonal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoNodeParams {
    pub n_atoms: u64,
    pub omega_sigma: f64,
    pub omega_pi: f64,
    /// Atomic detuning from the circuit mode.
    pub delta: f64,
    /// Atomic detuning from the local cavity mode.
    pub delta_prime: f64,
    /// Constant inter-node coupling phase (gauge on the two-excitation state).
    pub phi: f64,
}

impl TwoNodeParams {
    pub fn new(n_atoms: u64, omega_sigma: f64, omega_pi: f64) -> Result<Self> {
        Self::with_detunings(n_atoms, omega_sigma, omega_pi, 1.0, -1.0, 0.0)
    }

    pub fn with_detunings(
        n_atoms: u64,
        omega_sigma: f64,
        omega_pi: f64,
        delta: f64,
        delta_prime: f64,
        phi: f64,
    ) -> Result<Self> {
        if n_atoms == 0 {
            return Err(Error::InvalidParameter("n_atoms must be >= 1".into()));
        }
        if !omega_sigma.is_finite() || !omega_pi.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidParameter("couplings must be finite".into()));
        }
        // Sign convention: omega_pi carries the sign of delta_prime
        // (omega_pi = |g_pi|^2 / delta_prime).
        if omega_pi * delta_prime < 0.0 {
            return Err(Error::InvalidParameter(
                "omega_pi must carry the sign of delta_prime".into(),
            ));
        }
        if omega_sigma * delta < 0.0 {
            return Err(Error::InvalidParameter(
                "omega_sigma must carry the sign of delta".into(),
            ));
        }
        Ok(Self {
            n_atoms,
            omega_sigma,
            omega_pi,
            delta,
            delta_prime,
            phi,
        })
    }

    /// Combined same-node constant `omega_sigma + omega_pi`.
    pub fn omega_s(&self) -> f64 {
        self.omega_sigma + self.omega_pi
    }

    /// Two-pair oscillation rate `sqrt(4 omega_sigma^2 N(N-1) + omega_s^2)`.
    pub fn s_rate(&self) -> f64 {
        #[allow(unused_imports)]
        use num_traits::Float;
        let n = self.n_atoms as f64;
        let os = self.omega_s();
        (4.0 * self.omega_sigma * self.omega_sigma * n * (n - 1.0) + os * os).sqrt()
    }
}

/// Lifts a product pair into the five-state basis:
/// `(a2 a3, b2 a3, a2 b3, b2 b3, 0)`.
pub fn embed_pair(q: &QubitPair) -> CollectiveState {
    CollectiveState::new([
        q.alpha2 * q.alpha3,
        q.beta2 * q.alpha3,
        q.alpha2 * q.beta3,
        q.beta2 * q.beta3,
        Complex64::new(0.0, 0.0),
    ])
}
