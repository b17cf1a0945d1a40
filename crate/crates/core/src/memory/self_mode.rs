use num_complex::Complex64;
// Needed for f64 math in no_std builds; shadowed by inherent methods in tests.
#[allow(unused_imports)]
use num_traits::Float;

use super::{FieldEnvelope, TimeGrid};
use crate::error::{Error, Result};

/// Self-mode wave packet and its oscillation rate.
#[derive(Clone, Debug)]
pub struct SelfMode {
    pub envelope: FieldEnvelope,
    /// Oscillation rate `S = sqrt(N |g|^2 - (Gamma/2)^2)`.
    pub s_rate: f64,
}

/// Wave packet of the excitation rephased at `2 t_k`:
///
/// `E(t) = e0 exp(-Gamma |t - 2 t_k| / 2) sin(S (t - 2 t_k)) / S`.
///
/// Only the oscillatory regime `N |g|^2 > (Gamma/2)^2` is meaningful; the
/// overdamped case is rejected with the computed discriminant. The leading
/// half `t < 2 t_k` is the emitted packet; the formula is evaluated on the
/// whole caller grid so the trailing half can be inspected too.
pub fn self_mode(
    collective_g_sq: f64,
    gamma_ens: f64,
    t_k: f64,
    e0: f64,
    grid: TimeGrid,
) -> Result<SelfMode> {
    if !(collective_g_sq >= 0.0) || !(gamma_ens >= 0.0) {
        return Err(Error::InvalidParameter(
            "collective coupling and Gamma must be nonnegative".into(),
        ));
    }
    let discriminant = collective_g_sq - 0.25 * gamma_ens * gamma_ens;
    if discriminant <= 0.0 {
        return Err(Error::Overdamped { discriminant });
    }
    let s = discriminant.sqrt();
    let samples = grid
        .times()
        .map(|t| {
            let u = t - 2.0 * t_k;
            let amp = e0 * (-0.5 * gamma_ens * u.abs()).exp() * (s * u).sin() / s;
            Complex64::new(amp, 0.0)
        })
        .collect();
    Ok(SelfMode {
        envelope: FieldEnvelope::new(grid, samples)?,
        s_rate: s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminant_hand_value() {
        // N|g|^2 = 1, Gamma = 1 -> S = sqrt(0.75).
        let grid = TimeGrid::new(0.0, 0.1, 11).unwrap();
        let m = self_mode(1.0, 1.0, 10.0, 1.0, grid).unwrap();
        assert!((m.s_rate - 0.75_f64.sqrt()).abs() <= 1e-12);
    }

    #[test]
    fn amplitude_vanishes_at_rephasing_time() {
        let t_k = 5.0;
        let grid = TimeGrid::new(0.0, 0.5, 41).unwrap(); // hits t = 10 exactly
        let m = self_mode(4.0, 1.0, t_k, 2.0, grid).unwrap();
        let idx = ((2.0 * t_k - grid.t0) / grid.dt).round() as usize;
        assert_eq!(m.envelope.samples[idx], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn envelope_decays_at_half_gamma_once_sinusoid_removed() {
        let (n_g2, gamma_ens, t_k, e0) = (9.0, 2.0, 8.0, 0.6);
        let s = (n_g2 - 0.25 * gamma_ens * gamma_ens).sqrt();
        let tau = 0.1 / gamma_ens;
        let grid = TimeGrid::new(0.0, 1e-4, 200_001).unwrap();
        let m = self_mode(n_g2, gamma_ens, t_k, e0, grid).unwrap();
        let value = |t: f64| {
            let idx = ((t - grid.t0) / grid.dt).round() as usize;
            m.envelope.samples[idx].re
        };
        let (t1, t2) = (2.0 * t_k - tau, 2.0 * t_k - 2.0 * tau);
        let ratio =
            (value(t1) / (s * (t1 - 2.0 * t_k)).sin()) / (value(t2) / (s * (t2 - 2.0 * t_k)).sin());
        // Dividing out the sinusoid leaves exp(+Gamma tau / 2).
        assert!((ratio.ln() - 0.5 * gamma_ens * tau).abs() < 1e-9);
    }

    #[test]
    fn overdamped_parameters_rejected_with_discriminant() {
        let grid = TimeGrid::new(0.0, 0.1, 11).unwrap();
        match self_mode(0.2, 1.0, 1.0, 1.0, grid) {
            Err(Error::Overdamped { discriminant }) => {
                assert!((discriminant + 0.05).abs() < 1e-12)
            }
            other => panic!("expected overdamped rejection, got {other:?}"),
        }
    }
}
