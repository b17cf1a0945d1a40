use num_complex::Complex64;
// Needed for f64 math in no_std builds; shadowed by inherent methods in tests.
#[allow(unused_imports)]
use num_traits::Float;

use super::{CollectiveState, QubitPair, TwoNodeParams};
use crate::numerics::cis;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Closed-form two-pair oscillation under the circuit-only coupling, in the
/// large-ensemble approximation: both pairs oscillate, the second at double
/// frequency,
///
/// ```text
/// a1 = a2 a3
/// a2 = e^{-i th} (b2 a3 cos th - i a2 b3 sin th)      th = omega_sigma N t
/// a3 = e^{-i th} (a2 b3 cos th - i b2 a3 sin th)
/// a4 = e^{-2 i th} cos(2 th) b2 b3
/// a5 = -i e^{-2 i th} sin(2 th) b2 b3
/// ```
///
/// The one-excitation block is exact for every `N`; the two-excitation block
/// is accurate to `O(1/N)`.
pub fn evolve_closed_sigma(
    q: &QubitPair,
    n_atoms: u64,
    omega_sigma: f64,
    t: f64,
) -> CollectiveState {
    let theta = omega_sigma * (n_atoms as f64) * t;
    let (s, c) = theta.sin_cos();
    let (s2, c2) = (2.0 * theta).sin_cos();
    let ph1 = cis(-theta);
    let ph2 = cis(-2.0 * theta);
    CollectiveState::new([
        q.alpha2 * q.alpha3,
        ph1 * (q.beta2 * q.alpha3 * c - I * q.alpha2 * q.beta3 * s),
        ph1 * (q.alpha2 * q.beta3 * c - I * q.beta2 * q.alpha3 * s),
        ph2 * c2 * q.beta2 * q.beta3,
        -I * ph2 * s2 * q.beta2 * q.beta3,
    ])
}

/// Closed-form evolution with the local-cavity channel included. Exact for
/// every `N`: the one-excitation block rotates at `omega_sigma N` under the
/// common phase `omega_s N`, and the two-excitation pair oscillates at
/// `S = sqrt(4 omega_sigma^2 N(N-1) + omega_s^2)` around the mean diagonal
/// phase `omega_s (2N-1)`.
pub fn evolve_closed_sigma_pi(q: &QubitPair, p: &TwoNodeParams, t: f64) -> CollectiveState {
    let n = p.n_atoms as f64;
    let os = p.omega_s();
    let theta = p.omega_sigma * n * t;
    let (s, c) = theta.sin_cos();
    let ph1 = cis(-os * n * t);
    let exch = cis(p.phi);

    let s_rate = p.s_rate();
    let root = (n * (n - 1.0)).sqrt();
    let ph2 = cis(-os * (2.0 * n - 1.0) * t);
    let (a4, a5) = if s_rate == 0.0 {
        (ph2 * q.beta2 * q.beta3, Complex64::new(0.0, 0.0))
    } else {
        let (ss, cs) = (s_rate * t).sin_cos();
        (
            ph2 * (Complex64::new(cs, 0.0) - I * (os / s_rate) * ss) * q.beta2 * q.beta3,
            -I * exch.conj() * ph2 * (2.0 * p.omega_sigma * root / s_rate) * ss * q.beta2 * q.beta3,
        )
    };
    CollectiveState::new([
        q.alpha2 * q.alpha3,
        ph1 * (q.beta2 * q.alpha3 * c - I * exch * q.alpha2 * q.beta3 * s),
        ph1 * (q.alpha2 * q.beta3 * c - I * exch.conj() * q.beta2 * q.alpha3 * s),
        a4,
        a5,
    ])
}

/// Entangled target state reached when both elimination conditions hold
/// (`omega_sigma N t = pi(1/4 + mu/2 + n)` and `S t = pi k`):
///
/// ```text
/// a1 = a2 a3
/// a2 = (-1)^n / sqrt2 e^{-i omega_s N t} [(-1)^mu b2 a3 - i a2 b3]
/// a3 = (-1)^n / sqrt2 e^{-i omega_s N t} [(-1)^mu a2 b3 - i b2 a3]
/// a4 = (-1)^k e^{-i omega_s (2N-1) t} b2 b3
/// a5 = 0
/// ```
pub fn cde_target_state(
    q: &QubitPair,
    n: u32,
    mu: u8,
    k: u32,
    omega_s: f64,
    n_atoms: u64,
    t: f64,
) -> CollectiveState {
    let big_n = n_atoms as f64;
    let sign_n = if n % 2 == 0 { 1.0 } else { -1.0 };
    let sign_mu = if mu % 2 == 0 { 1.0 } else { -1.0 };
    let sign_k = if k % 2 == 0 { 1.0 } else { -1.0 };
    let pref = cis(-omega_s * big_n * t) * (sign_n / 2.0_f64.sqrt());
    let ph4 = cis(-omega_s * (2.0 * big_n - 1.0) * t) * sign_k;
    CollectiveState::new([
        q.alpha2 * q.alpha3,
        pref * (sign_mu * q.beta2 * q.alpha3 - I * q.alpha2 * q.beta3),
        pref * (sign_mu * q.alpha2 * q.beta3 - I * q.beta2 * q.alpha3),
        ph4 * q.beta2 * q.beta3,
        Complex64::new(0.0, 0.0),
    ])
}

/// Closed form in the blockade regime `|omega_s| >> N omega_sigma`: the
/// one-excitation pair oscillates as usual while the two-excitation state
/// only collects phase (the shorthand `e^{-2 i omega_s N t}`; the exact
/// diagonal phase is `omega_s (2N-1) t`). Population comparisons are
/// insensitive to that phase choice.
pub fn blockade_closed_form(q: &QubitPair, p: &TwoNodeParams, t: f64) -> CollectiveState {
    let n = p.n_atoms as f64;
    let os = p.omega_s();
    let theta = p.omega_sigma * n * t;
    let (s, c) = theta.sin_cos();
    let ph1 = cis(-os * n * t);
    let exch = cis(p.phi);
    CollectiveState::new([
        q.alpha2 * q.alpha3,
        ph1 * (q.beta2 * q.alpha3 * c - I * exch * q.alpha2 * q.beta3 * s),
        ph1 * (q.alpha2 * q.beta3 * c - I * exch.conj() * q.beta2 * q.alpha3 * s),
        cis(-2.0 * os * n * t) * q.beta2 * q.beta3,
        Complex64::new(0.0, 0.0),
    ])
}
