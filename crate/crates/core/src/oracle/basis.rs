use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
// Needed for f64 math in no_std builds; shadowed by inherent methods in tests.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

/// One symmetric-sector basis state
/// `|n_sigma, n_pi2, n_pi3; e2, e3>`: photon numbers of the circuit mode and
/// the two local modes, and collective excitation numbers of the two nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DickeState {
    pub n_sigma: u8,
    pub n_pi2: u8,
    pub n_pi3: u8,
    pub e2: u8,
    pub e3: u8,
}

impl DickeState {
    pub fn total_excitation(&self) -> u8 {
        self.n_sigma + self.n_pi2 + self.n_pi3 + self.e2 + self.e3
    }

    pub fn label(&self) -> String {
        format!(
            "|{},{},{};{},{}>",
            self.n_sigma, self.n_pi2, self.n_pi3, self.e2, self.e3
        )
    }
}

/// Deterministic enumeration of the symmetric two-node basis with total
/// excitation <= 2, closed under the collective Hamiltonian.
#[derive(Clone, Debug)]
pub struct DickeBasis {
    states: Vec<DickeState>,
    index: BTreeMap<DickeState, usize>,
    n_per_node: u32,
    include_pi: bool,
}

impl DickeBasis {
    pub fn enumerate(n_per_node: u32, include_pi: bool) -> Self {
        let e_cap = n_per_node.min(2) as u8;
        let pi_cap = if include_pi { 2u8 } else { 0 };
        let mut states = Vec::new();
        for n_sigma in 0..=2u8 {
            for n_pi2 in 0..=pi_cap {
                for n_pi3 in 0..=pi_cap {
                    for e2 in 0..=e_cap {
                        for e3 in 0..=e_cap {
                            let s = DickeState {
                                n_sigma,
                                n_pi2,
                                n_pi3,
                                e2,
                                e3,
                            };
                            if s.total_excitation() <= 2 {
                                states.push(s);
                            }
                        }
                    }
                }
            }
        }
        states.sort();
        let index = states.iter().copied().zip(0..).collect();
        Self {
            states,
            index,
            n_per_node,
            include_pi,
        }
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[DickeState] {
        &self.states
    }

    pub fn n_per_node(&self) -> u32 {
        self.n_per_node
    }

    pub fn include_pi(&self) -> bool {
        self.include_pi
    }

    pub fn index_of(&self, s: &DickeState) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Collective lowering matrix element `<e-1| S^- |e>` for N spins:
    /// `sqrt(e (N - e + 1))`.
    fn dicke_lower(&self, e: u8) -> f64 {
        let n = self.n_per_node as f64;
        let e = e as f64;
        (e * (n - e + 1.0)).sqrt()
    }

    /// Assembles the Hamiltonian in the atomic interaction picture (atoms
    /// carry no diagonal energy, matching the effective-model convention):
    /// photons sit at their detunings below the atoms, plus photon-exchange
    /// couplings `g (a^dag S^- + a S^+)` with the collective Dicke
    /// enhancement. Every process conserves total excitation, so the
    /// enumerated basis is closed; a generated state missing from the basis
    /// is a hard error.
    pub(crate) fn hamiltonian(
        &self,
        g_sigma2: f64,
        g_sigma3: f64,
        g_pi2: f64,
        g_pi3: f64,
        delta: f64,
        delta_prime: f64,
    ) -> Result<ComplexMatrix> {
        let dim = self.dim();
        let mut h = ComplexMatrix::zeros(dim, dim);

        for (j, s) in self.states.iter().enumerate() {
            let diag = -delta * s.n_sigma as f64 - delta_prime * (s.n_pi2 + s.n_pi3) as f64;
            h[(j, j)] = Complex64::new(diag, 0.0);

            // Raising processes a^dag S^-; the conjugates fill in the lower triangle.
            let mut couple = |target: DickeState, amp: f64| -> Result<()> {
                let i = self.index_of(&target).ok_or(Error::InvalidParameter(
                    "generated state left the enumerated basis".into(),
                ))?;
                h[(i, j)] += Complex64::new(amp, 0.0);
                h[(j, i)] += Complex64::new(amp, 0.0);
                Ok(())
            };

            // Circuit mode picks up one quantum from either node.
            if s.e2 > 0 && s.n_sigma < 2 {
                let amp = g_sigma2 * ((s.n_sigma + 1) as f64).sqrt() * self.dicke_lower(s.e2);
                couple(
                    DickeState {
                        n_sigma: s.n_sigma + 1,
                        e2: s.e2 - 1,
                        ..*s
                    },
                    amp,
                )?;
            }
            if s.e3 > 0 && s.n_sigma < 2 {
                let amp = g_sigma3 * ((s.n_sigma + 1) as f64).sqrt() * self.dicke_lower(s.e3);
                couple(
                    DickeState {
                        n_sigma: s.n_sigma + 1,
                        e3: s.e3 - 1,
                        ..*s
                    },
                    amp,
                )?;
            }
            // Local modes couple to their own node only.
            if self.include_pi {
                if s.e2 > 0 && s.n_pi2 < 2 {
                    let amp = g_pi2 * ((s.n_pi2 + 1) as f64).sqrt() * self.dicke_lower(s.e2);
                    couple(
                        DickeState {
                            n_pi2: s.n_pi2 + 1,
                            e2: s.e2 - 1,
                            ..*s
                        },
                        amp,
                    )?;
                }
                if s.e3 > 0 && s.n_pi3 < 2 {
                    let amp = g_pi3 * ((s.n_pi3 + 1) as f64).sqrt() * self.dicke_lower(s.e3);
                    couple(
                        DickeState {
                            n_pi3: s.n_pi3 + 1,
                            e3: s.e3 - 1,
                            ..*s
                        },
                        amp,
                    )?;
                }
            }
        }
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::hermitian_eigen;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn basis_sizes_are_closed_counts() {
        // Without local modes: tuples (n_sigma; e2, e3), sum <= 2 -> 10.
        assert_eq!(DickeBasis::enumerate(4, false).dim(), 10);
        // With local modes: 5-tuples summing to <= 2 -> 1 + 5 + 15 = 21.
        assert_eq!(DickeBasis::enumerate(4, true).dim(), 21);
        // Single atom per node caps e at 1.
        assert_eq!(DickeBasis::enumerate(1, false).dim(), 8);
    }

    #[test]
    fn enumeration_is_deterministic_and_indexed() {
        let b1 = DickeBasis::enumerate(3, true);
        let b2 = DickeBasis::enumerate(3, true);
        assert_eq!(b1.states(), b2.states());
        for (k, s) in b1.states().iter().enumerate() {
            assert_eq!(b1.index_of(s), Some(k));
        }
    }

    #[test]
    fn hamiltonian_conserves_excitation_shells() {
        let basis = DickeBasis::enumerate(3, true);
        let h = basis.hamiltonian(0.8, 0.8, 0.5, 0.5, 10.0, -10.0).unwrap();
        for (i, si) in basis.states().iter().enumerate() {
            for (j, sj) in basis.states().iter().enumerate() {
                if si.total_excitation() != sj.total_excitation() {
                    assert_eq!(h[(i, j)].norm(), 0.0, "shell mixing at ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn hermitian_for_random_draws() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let basis = DickeBasis::enumerate(rng.gen_range(1..=6), rng.gen_bool(0.5));
            let h = basis
                .hamiltonian(
                    rng.gen_range(0.0..2.0),
                    rng.gen_range(0.0..2.0),
                    rng.gen_range(0.0..2.0),
                    rng.gen_range(0.0..2.0),
                    rng.gen_range(1.0..20.0),
                    -rng.gen_range(1.0..20.0),
                )
                .unwrap();
            assert!(h.hermitian_asymmetry() < 1e-15);
        }
    }

    #[test]
    fn single_atom_couplings_lose_the_collective_factor() {
        // N = 1 per node, no local modes: two two-level atoms sharing one
        // mode, matrix elements g rather than g sqrt(N).
        let basis = DickeBasis::enumerate(1, false);
        let g = 0.7;
        let h = basis.hamiltonian(g, g, 0.0, 0.0, 5.0, -5.0).unwrap();
        let photon = basis
            .index_of(&DickeState {
                n_sigma: 1,
                n_pi2: 0,
                n_pi3: 0,
                e2: 0,
                e3: 0,
            })
            .unwrap();
        let atom2 = basis
            .index_of(&DickeState {
                n_sigma: 0,
                n_pi2: 0,
                n_pi3: 0,
                e2: 1,
                e3: 0,
            })
            .unwrap();
        assert!((h[(photon, atom2)].re - g).abs() < 1e-15);
    }

    #[test]
    fn vacuum_rabi_splitting_of_a_single_node() {
        // Node 3 decoupled: the one-excitation sector reduces to the 2x2
        // {photon, collective} block with splitting 2 g sqrt(N) on resonance.
        let n = 4u32;
        let g = 0.3;
        let basis = DickeBasis::enumerate(n, false);
        let h = basis.hamiltonian(g, 0.0, 0.0, 0.0, 1e-30, -1.0).unwrap();
        let eig = hermitian_eigen(&h, 1e-9).unwrap();
        let expect = g * (n as f64).sqrt();
        let hit_lo = eig.values.iter().any(|v| (v + expect).abs() < 1e-12);
        let hit_hi = eig.values.iter().any(|v| (v - expect).abs() < 1e-12);
        assert!(hit_lo && hit_hi, "eigenvalues {:?}", eig.values);
    }
}
