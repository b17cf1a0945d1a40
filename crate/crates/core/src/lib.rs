//! Linear quantum dynamics for multi-ensemble cavity-QED circuits.
//!
//! The crate is organized around four layers:
//!
//! - [`numerics`]: dense complex matrices, Hermitian eigendecomposition,
//!   unitary propagation `exp(-iHt)` and a fixed-step fourth-order integrator
//!   for piecewise-smooth linear systems.
//! - [`memory`]: the quantum-memory node of a single-mode waveguide circuit —
//!   point and spectral transfer efficiency, time-domain storage of a weak
//!   signal field into an inhomogeneously broadened spin ensemble, echo
//!   retrieval under detuning reversal, and the self-mode wave packet.
//! - [`processor`]: collective two-node gates in the dispersive regime —
//!   the five-state effective Hamiltonians, closed-form evolutions, the
//!   iSWAP gate, the dynamical-elimination condition solver behind the
//!   square-root-of-iSWAP gate, and the collective blockade regime.
//! - [`oracle`]: exact small-ensemble validation of the dispersive reduction
//!   by simulating atoms and field modes in the symmetric Dicke sector.
//!
//! Everything here is `no_std`-compatible (with `alloc`); all operations are
//! pure functions of their inputs and safe to run concurrently.

#![cfg_attr(not(any(test, feature = "std")), no_std)]
// Negated float comparisons like `!(x > 0.0)` are deliberate: they reject NaN
// along with out-of-range values in one check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::manual_is_multiple_of)]

extern crate alloc;

pub mod error;
pub mod memory;
pub mod numerics;
pub mod oracle;
pub mod processor;

pub use error::{Error, Result};
pub use num_complex::Complex64;
