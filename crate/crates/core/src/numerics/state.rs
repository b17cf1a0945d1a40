use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex state vector with named basis states.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
    labels: Vec<String>,
}

impl StateVector {
    pub fn new(amps: Vec<Complex64>) -> Self {
        let labels = (0..amps.len()).map(|i| format!("{i}")).collect();
        Self { amps, labels }
    }

    pub fn with_basis_labels(amps: Vec<Complex64>, labels: Vec<String>) -> Result<Self> {
        if amps.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: amps.len(),
                found: labels.len(),
            });
        }
        Ok(Self { amps, labels })
    }

    /// Basis state |k> of dimension `dim`.
    pub fn basis_state(dim: usize, k: usize) -> Self {
        let mut amps = alloc::vec![Complex64::new(0.0, 0.0); dim];
        amps[k] = Complex64::new(1.0, 0.0);
        Self::new(amps)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.labels
    }

    /// Copy of this state with new amplitudes over the same basis.
    pub fn with_amplitudes(&self, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), self.labels.len());
        Self {
            amps,
            labels: self.labels.clone(),
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        #[allow(unused_imports)]
        use num_traits::Float;
        self.norm_sq().sqrt()
    }

    /// Inner product `<self|other>` (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}
