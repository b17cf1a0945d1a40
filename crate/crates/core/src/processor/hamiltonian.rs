use num_complex::Complex64;
// Needed for f64 math in no_std builds; shadowed by inherent methods in tests.
#[allow(unused_imports)]
use num_traits::Float;

use super::TwoNodeParams;
use crate::numerics::{cis, ComplexMatrix};

/// Five-state effective Hamiltonian of two nodes coupled through the circuit
/// mode only (energies in units of hbar):
///
/// ```text
/// | 0    0     0     0      0        |
/// | 0    N O   N O   0      0        |
/// | 0    N O   N O   0      0        |
/// | 0    0     0     2 N O  2 O r    |
/// | 0    0     0     2 O r  2 O (N-1)|      r = sqrt(N(N-1)), O = omega_sigma
/// ```
pub fn h_eff_sigma(n_atoms: u64, omega_sigma: f64) -> ComplexMatrix {
    let n = n_atoms as f64;
    let root = (n * (n - 1.0)).sqrt();
    let mut h = ComplexMatrix::zeros(5, 5);
    let re = |v: f64| Complex64::new(v, 0.0);
    h[(1, 1)] = re(n * omega_sigma);
    h[(1, 2)] = re(n * omega_sigma);
    h[(2, 1)] = re(n * omega_sigma);
    h[(2, 2)] = re(n * omega_sigma);
    h[(3, 3)] = re(2.0 * n * omega_sigma);
    h[(3, 4)] = re(2.0 * omega_sigma * root);
    h[(4, 3)] = re(2.0 * omega_sigma * root);
    h[(4, 4)] = re(2.0 * omega_sigma * (n - 1.0));
    h
}

/// Effective Hamiltonian with the local-cavity channel included: the combined
/// constant `omega_s = omega_sigma + omega_pi` replaces `omega_sigma` on the
/// diagonal while the inter-node exchange keeps `omega_sigma`. Reduces
/// element-wise to [`h_eff_sigma`] at `omega_pi = 0`.
///
/// A constant inter-node phase `phi` is threaded onto the exchange elements;
/// the two-excitation row is taken in the matching phase gauge so the
/// five-state block stays closed.
pub fn h_eff_sigma_pi(p: &TwoNodeParams) -> ComplexMatrix {
    let n = p.n_atoms as f64;
    let root = (n * (n - 1.0)).sqrt();
    let os = p.omega_s();
    let phase = cis(p.phi);
    let mut h = ComplexMatrix::zeros(5, 5);
    let re = |v: f64| Complex64::new(v, 0.0);
    h[(1, 1)] = re(os * n);
    h[(1, 2)] = phase * (p.omega_sigma * n);
    h[(2, 1)] = (phase * (p.omega_sigma * n)).conj();
    h[(2, 2)] = re(os * n);
    h[(3, 3)] = re(2.0 * os * n);
    h[(3, 4)] = phase * (2.0 * p.omega_sigma * root);
    h[(4, 3)] = (phase * (2.0 * p.omega_sigma * root)).conj();
    h[(4, 4)] = re(2.0 * os * (n - 1.0));
    h
}
