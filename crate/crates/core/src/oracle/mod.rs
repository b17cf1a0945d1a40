//! Exact small-ensemble validation of the dispersive reduction.
//!
//! The processing nodes, the shared circuit mode and (optionally) the two
//! local cavity modes are simulated without any dispersive approximation in
//! the symmetric Dicke sector with at most two excitations. Comparing this
//! exact evolution against the five-state effective model measures the error
//! of the virtual-photon-exchange picture directly.

mod basis;
mod validate;

pub use basis::{DickeBasis, DickeState};
pub use validate::{lift_pair, log_log_slope, validate_effective, ValidationOutcome};

use alloc::format;

use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

/// Upper bound on atoms per node; keeps the Dicke factors exact and the
/// basis enumeration small.
pub const MAX_ATOMS_PER_NODE: u32 = 6;

/// Dispersive-regime ceiling on `g sqrt(N) / |delta|`.
pub const DISPERSIVE_RATIO_LIMIT: f64 = 0.2;

/// Microscopic parameters of the two-node + modes model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FullModelParams {
    /// Atoms per node (both nodes equal).
    pub n_per_node: u32,
    /// Atom-circuit coupling rate.
    pub g_sigma: f64,
    /// Atom-local-cavity coupling rate (ignored unless `include_pi`).
    pub g_pi: f64,
    /// Atomic detuning from the circuit mode.
    pub delta: f64,
    /// Atomic detuning from the local cavity modes.
    pub delta_prime: f64,
    pub include_pi: bool,
    /// Set when the dispersive-regime check was explicitly overridden.
    pub strong_coupling_allowed: bool,
}

impl FullModelParams {
    pub fn new(
        n_per_node: u32,
        g_sigma: f64,
        g_pi: f64,
        delta: f64,
        delta_prime: f64,
        include_pi: bool,
    ) -> Result<Self> {
        let p = Self {
            n_per_node,
            g_sigma,
            g_pi,
            delta,
            delta_prime,
            include_pi,
            strong_coupling_allowed: false,
        };
        p.validate()?;
        let ratio = p.dispersive_ratio();
        if ratio > DISPERSIVE_RATIO_LIMIT {
            return Err(Error::InvalidParameter(format!(
                "g sqrt(N)/|delta| = {ratio:.3} exceeds the dispersive ceiling {DISPERSIVE_RATIO_LIMIT}; \
                 use new_allowing_strong_coupling to override"
            )));
        }
        Ok(p)
    }

    /// Same as [`FullModelParams::new`] but admits couplings outside the
    /// dispersive validity regime; the flag records the override.
    pub fn new_allowing_strong_coupling(
        n_per_node: u32,
        g_sigma: f64,
        g_pi: f64,
        delta: f64,
        delta_prime: f64,
        include_pi: bool,
    ) -> Result<Self> {
        let p = Self {
            n_per_node,
            g_sigma,
            g_pi,
            delta,
            delta_prime,
            include_pi,
            strong_coupling_allowed: true,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if self.n_per_node == 0 || self.n_per_node > MAX_ATOMS_PER_NODE {
            return Err(Error::InvalidParameter(format!(
                "n_per_node must be in 1..={MAX_ATOMS_PER_NODE}"
            )));
        }
        if self.delta == 0.0 || !self.delta.is_finite() {
            return Err(Error::InvalidParameter(
                "delta must be finite and nonzero".into(),
            ));
        }
        if self.include_pi && (self.delta_prime == 0.0 || !self.delta_prime.is_finite()) {
            return Err(Error::InvalidParameter(
                "delta_prime must be finite and nonzero when the local modes are included".into(),
            ));
        }
        if !(self.g_sigma >= 0.0) || !(self.g_pi >= 0.0) {
            return Err(Error::InvalidParameter(
                "couplings must be nonnegative".into(),
            ));
        }
        Ok(())
    }

    /// Collective dispersive ratio `g_sigma sqrt(N) / |delta|`.
    pub fn dispersive_ratio(&self) -> f64 {
        #[allow(unused_imports)]
        use num_traits::Float;
        self.g_sigma * (self.n_per_node as f64).sqrt() / self.delta.abs()
    }

    /// Circuit-mediated effective coupling `g_sigma^2 / delta`.
    pub fn omega_sigma(&self) -> f64 {
        self.g_sigma * self.g_sigma / self.delta
    }

    /// Local-cavity effective coupling `g_pi^2 / delta_prime` (zero when the
    /// local modes are excluded).
    pub fn omega_pi(&self) -> f64 {
        if self.include_pi {
            self.g_pi * self.g_pi / self.delta_prime
        } else {
            0.0
        }
    }
}

/// Exact model: enumerated basis plus the Hamiltonian over it.
#[derive(Clone, Debug)]
pub struct FullModel {
    pub basis: DickeBasis,
    pub hamiltonian: ComplexMatrix,
}

/// Builds the exact Hamiltonian of the two-node + modes system over the
/// symmetric Dicke basis with at most two excitations.
pub fn build_full_h(p: &FullModelParams) -> Result<FullModel> {
    let basis = DickeBasis::enumerate(p.n_per_node, p.include_pi);
    let hamiltonian = basis.hamiltonian(
        p.g_sigma,
        p.g_sigma,
        if p.include_pi { p.g_pi } else { 0.0 },
        if p.include_pi { p.g_pi } else { 0.0 },
        p.delta,
        p.delta_prime,
    )?;
    Ok(FullModel { basis, hamiltonian })
}
