//! Quantum-memory node of the waveguide circuit.
//!
//! A single resonator mode is coupled to an external waveguide (rate
//! `gamma1`), to free-space loss modes (rate `gamma2`) and to an
//! inhomogeneously broadened spin ensemble with collective constant `Gamma`
//! and Lorentzian linewidth of HWHM `delta_in / 2`. All dynamics live in the
//! frame rotating at the carrier `omega_carrier`, which is kept only for
//! spectrum bookkeeping.

mod ensemble;
mod envelope;
mod self_mode;
mod spectral;
mod storage;

pub use ensemble::SpinEnsembleDiscretization;
pub use envelope::{spectrum_inversion_rms, FieldEnvelope, TimeGrid};
pub use self_mode::{self_mode, SelfMode};
pub use spectral::{qeff_spectral, transfer_efficiency_at};
pub use storage::{
    echo_retrieve, simulate_storage, simulate_storage_with, EchoResult, StorageOptions,
    StorageTrace,
};

use alloc::format;

use crate::error::{Error, Result};

/// Default relative tolerance for the matching report.
pub const MATCHING_TOL: f64 = 1e-9;

/// Circuit and ensemble rate constants of the memory node.
///
/// `gamma_ens` is the collective ensemble-cavity constant
/// `Gamma = N |g_sigma|^2 / delta_in`; when the microscopic pair
/// `(n_atoms, g_sigma)` is supplied it must reproduce `gamma_ens`.
#[derive(Clone, Debug, PartialEq)]
pub struct MemoryCircuitParams {
    /// Resonator-waveguide coupling rate (rad/s).
    pub gamma1: f64,
    /// Resonator coupling to free-space loss modes (rad/s).
    pub gamma2: f64,
    /// Collective ensemble-cavity constant Gamma (rad/s).
    pub gamma_ens: f64,
    /// Inhomogeneous width parameter (rad/s); the spin detuning distribution
    /// is Lorentzian with HWHM `delta_in / 2`.
    pub delta_in: f64,
    /// Carrier frequency (rad/s); bookkeeping only.
    pub omega_carrier: f64,
    /// Optional microscopic origin of `gamma_ens`: (atom count, coupling).
    pub microscopic: Option<(f64, f64)>,
}

impl MemoryCircuitParams {
    pub fn new(gamma1: f64, gamma2: f64, gamma_ens: f64, delta_in: f64) -> Result<Self> {
        let p = Self {
            gamma1,
            gamma2,
            gamma_ens,
            delta_in,
            omega_carrier: 0.0,
            microscopic: None,
        };
        p.validate()?;
        Ok(p)
    }

    /// Impedance- and spectrally-matched node: `gamma1 = Gamma = 2 delta_in`,
    /// no free-space loss.
    pub fn matched(gamma1: f64) -> Result<Self> {
        Self::new(gamma1, 0.0, gamma1, gamma1 / 2.0)
    }

    pub fn with_carrier(mut self, omega_carrier: f64) -> Self {
        self.omega_carrier = omega_carrier;
        self
    }

    /// Attaches the microscopic pair; rejected unless
    /// `n_atoms * g_sigma^2 / delta_in` reproduces `gamma_ens` to 1e-12.
    pub fn with_microscopic(mut self, n_atoms: f64, g_sigma: f64) -> Result<Self> {
        let implied = n_atoms * g_sigma * g_sigma / self.delta_in;
        let scale = self.gamma_ens.abs().max(implied.abs());
        if scale > 0.0 && (implied - self.gamma_ens).abs() / scale > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "microscopic pair implies Gamma = {implied:e}, declared {:e}",
                self.gamma_ens
            )));
        }
        self.microscopic = Some((n_atoms, g_sigma));
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if !(self.gamma1 >= 0.0) || !(self.gamma2 >= 0.0) || !(self.gamma_ens >= 0.0) {
            return Err(Error::InvalidParameter(
                "rates gamma1, gamma2, Gamma must be nonnegative".into(),
            ));
        }
        if !(self.delta_in > 0.0) {
            return Err(Error::InvalidParameter("delta_in must be positive".into()));
        }
        Ok(())
    }

    pub fn total_linewidth(&self) -> f64 {
        self.gamma1 + self.gamma2
    }
}

/// Point (line-center) storage efficiency of the memory node.
///
/// Evaluated in the two-factor form
/// `gamma1/(gamma1+gamma2) * 4 Gamma/(gamma1+gamma2) / (1 + Gamma/(gamma1+gamma2))^2`,
/// which simplifies algebraically to `4 gamma1 Gamma / (gamma1+gamma2+Gamma)^2`.
pub fn qeff_point(p: &MemoryCircuitParams) -> Result<f64> {
    p.validate()?;
    let gsum = p.gamma1 + p.gamma2;
    if gsum + p.gamma_ens == 0.0 {
        return Err(Error::InvalidParameter(
            "gamma1 + gamma2 + Gamma must be positive".into(),
        ));
    }
    if gsum == 0.0 {
        // No decay channels at all: nothing enters, nothing stored.
        return Ok(0.0);
    }
    let ratio = p.gamma_ens / gsum;
    let denom = 1.0 + ratio;
    let q = p.gamma1 / gsum * 4.0 * ratio / (denom * denom);
    // Built-in identity check against the simplified single-fraction form.
    debug_assert!({
        let total = gsum + p.gamma_ens;
        let simplified = 4.0 * p.gamma1 * p.gamma_ens / (total * total);
        (q - simplified).abs() <= 1e-14 * simplified.max(1.0)
    });
    Ok(q)
}

/// Report of the two optimal-operation conditions of the memory node.
#[derive(Clone, Debug, PartialEq)]
pub struct MatchingReport {
    pub impedance_matched: bool,
    pub spectrally_matched: bool,
    /// Signed relative deviation `(Gamma - gamma1) / gamma1`.
    pub impedance_residual: f64,
    /// Signed relative deviation `(2 delta_in - gamma1) / gamma1`.
    pub spectral_residual: f64,
    pub tolerance: f64,
}

/// Checks the impedance condition `gamma1 = Gamma` and the spectral condition
/// `gamma1 = 2 delta_in`.
pub fn matching_check(p: &MemoryCircuitParams, tolerance: f64) -> Result<MatchingReport> {
    p.validate()?;
    if p.gamma1 == 0.0 {
        return Err(Error::InvalidParameter(
            "gamma1 = 0: no waveguide coupling, matching undefined".into(),
        ));
    }
    let impedance_residual = (p.gamma_ens - p.gamma1) / p.gamma1;
    let spectral_residual = (2.0 * p.delta_in - p.gamma1) / p.gamma1;
    Ok(MatchingReport {
        impedance_matched: impedance_residual.abs() <= tolerance,
        spectrally_matched: spectral_residual.abs() <= tolerance,
        impedance_residual,
        spectral_residual,
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params(g1: f64, g2: f64, ge: f64) -> MemoryCircuitParams {
        MemoryCircuitParams::new(g1, g2, ge, 1.0).unwrap()
    }

    #[test]
    fn point_efficiency_reaches_unity_at_matched_lossless() {
        let q = qeff_point(&params(1.0, 0.0, 1.0)).unwrap();
        assert!((q - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn point_efficiency_zero_without_ensemble() {
        let q = qeff_point(&params(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(q, 0.0);
    }

    #[test]
    fn point_efficiency_hand_values() {
        assert!((qeff_point(&params(1.0, 0.0, 3.0)).unwrap() - 0.75).abs() < 1e-15);
        assert!((qeff_point(&params(1.0, 1.0, 2.0)).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn point_efficiency_matches_simplified_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..1000 {
            let g1 = rng.gen_range(1e-3..1e3);
            let g2 = rng.gen_range(0.0..1e3);
            let ge = rng.gen_range(1e-3..1e3);
            let q = qeff_point(&params(g1, g2, ge)).unwrap();
            let sum = g1 + g2 + ge;
            let simplified = 4.0 * g1 * ge / (sum * sum);
            assert!(
                (q - simplified).abs() <= 1e-12 * simplified.max(1e-300),
                "identity failed at ({g1}, {g2}, {ge})"
            );
        }
    }

    #[test]
    fn point_efficiency_bounded_by_extraction_branch() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..500 {
            let g1 = rng.gen_range(1e-3..1e3);
            let g2 = rng.gen_range(0.0..1e3);
            let ge = rng.gen_range(0.0..1e3);
            let q = qeff_point(&params(g1, g2, ge)).unwrap();
            assert!(q <= g1 / (g1 + g2) + 1e-12);
        }
        // Unity only at gamma2 = 0, Gamma = gamma1.
        assert!(qeff_point(&params(1.0, 1e-3, 1.0)).unwrap() < 1.0);
        assert!(qeff_point(&params(1.0, 0.0, 1.01)).unwrap() < 1.0);
    }

    #[test]
    fn rejects_negative_rates() {
        assert!(MemoryCircuitParams::new(-1.0, 0.0, 1.0, 1.0).is_err());
        assert!(MemoryCircuitParams::new(1.0, -0.1, 1.0, 1.0).is_err());
        assert!(MemoryCircuitParams::new(1.0, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn rejects_fully_decoupled_node() {
        let p = MemoryCircuitParams::new(0.0, 0.0, 0.0, 1.0).unwrap();
        assert!(qeff_point(&p).is_err());
    }

    #[test]
    fn matching_report_examples() {
        let gamma = 3.768e7;
        let p = MemoryCircuitParams::matched(gamma).unwrap();
        let r = matching_check(&p, MATCHING_TOL).unwrap();
        assert!(r.impedance_matched && r.spectrally_matched);

        let p = MemoryCircuitParams::new(1.0, 0.0, 2.0, 0.5).unwrap();
        let r = matching_check(&p, MATCHING_TOL).unwrap();
        assert!(!r.impedance_matched);
        assert!((r.impedance_residual - 1.0).abs() < 1e-15);
        assert!(r.spectrally_matched);

        // gamma1 = 2 Gamma gives impedance residual exactly -0.5.
        let p = MemoryCircuitParams::new(2.0, 0.0, 1.0, 1.0).unwrap();
        let r = matching_check(&p, MATCHING_TOL).unwrap();
        assert_eq!(r.impedance_residual, -0.5);
    }

    #[test]
    fn matching_rejects_zero_waveguide_coupling() {
        let p = MemoryCircuitParams::new(0.0, 0.0, 1.0, 1.0).unwrap();
        assert!(matching_check(&p, MATCHING_TOL).is_err());
    }

    #[test]
    fn microscopic_pair_must_reproduce_gamma() {
        let p = MemoryCircuitParams::new(1.0, 0.0, 2.0, 4.0).unwrap();
        // N g^2 / delta_in = 1000 * 0.089442719...^2 / 4 = 2.
        let g = (2.0 * 4.0 / 1000.0_f64).sqrt();
        assert!(p.clone().with_microscopic(1000.0, g).is_ok());
        assert!(p.with_microscopic(1000.0, g * 1.001).is_err());
    }
}
