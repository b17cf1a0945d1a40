use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
// Needed for f64 math in no_std builds; shadowed by inherent methods in tests.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numerics::cis;

/// Uniform time grid `t_k = t0 + k dt`, `k = 0..len`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    pub t0: f64,
    pub dt: f64,
    pub len: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, dt: f64, len: usize) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() || !t0.is_finite() || len < 2 {
            return Err(Error::InvalidParameter(
                "time grid needs finite t0, dt > 0 and at least two points".into(),
            ));
        }
        Ok(Self { t0, dt, len })
    }

    /// Grid covering `[t0, t_end]` with step at most `dt` (endpoint included).
    pub fn spanning(t0: f64, t_end: f64, dt: f64) -> Result<Self> {
        if !(t_end > t0) {
            return Err(Error::InvalidParameter("empty time span".into()));
        }
        let n = ((t_end - t0) / dt).ceil() as usize + 1;
        Self::new(t0, (t_end - t0) / ((n - 1) as f64), n)
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + self.dt * (k as f64)
    }

    pub fn end_time(&self) -> f64 {
        self.time(self.len - 1)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(move |k| self.time(k))
    }
}

/// Complex field amplitude samples on a uniform time grid, in the
/// sqrt(photons/s) flux convention.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldEnvelope {
    pub grid: TimeGrid,
    pub samples: Vec<Complex64>,
}

impl FieldEnvelope {
    pub fn new(grid: TimeGrid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len {
            return Err(Error::DimensionMismatch {
                expected: grid.len,
                found: samples.len(),
            });
        }
        if samples
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidParameter("non-finite field sample".into()));
        }
        Ok(Self { grid, samples })
    }

    pub fn zeros(grid: TimeGrid) -> Self {
        Self {
            samples: vec![Complex64::new(0.0, 0.0); grid.len],
            grid,
        }
    }

    /// Gaussian pulse `amplitude * exp(-(t-center)^2 / (2 sigma^2))` with an
    /// optional carrier offset `detuning` from the rotating frame.
    pub fn gaussian(
        grid: TimeGrid,
        center: f64,
        sigma: f64,
        amplitude: f64,
        detuning: f64,
    ) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::InvalidParameter("sigma must be positive".into()));
        }
        let samples = grid
            .times()
            .map(|t| {
                let u = (t - center) / sigma;
                cis(-detuning * t) * (amplitude * (-0.5 * u * u).exp())
            })
            .collect();
        Ok(Self { grid, samples })
    }

    /// Pulse energy `sum |E|^2 dt`.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dt
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            grid: self.grid,
            samples: self.samples.iter().map(|z| z * factor).collect(),
        }
    }

    /// Pointwise sum; grids must agree.
    pub fn superpose(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::InvalidParameter("grids differ".into()));
        }
        Ok(Self {
            grid: self.grid,
            samples: self
                .samples
                .iter()
                .zip(other.samples.iter())
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Last grid time where the amplitude still exceeds
    /// `threshold_rel * max |E|`; the grid start if the field is all zero.
    pub fn support_end(&self, threshold_rel: f64) -> f64 {
        let peak = self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return self.grid.t0;
        }
        let cut = peak * threshold_rel;
        let last = self
            .samples
            .iter()
            .rposition(|z| z.norm() > cut)
            .unwrap_or(0);
        self.grid.time(last)
    }

    /// Time of the largest |sample|.
    pub fn peak_time(&self) -> f64 {
        let mut best = (0usize, 0.0_f64);
        for (k, z) in self.samples.iter().enumerate() {
            let a = z.norm();
            if a > best.1 {
                best = (k, a);
            }
        }
        self.grid.time(best.0)
    }

    /// Cubic (Catmull-Rom) interpolation of the samples; zero outside the grid.
    pub fn sample_at(&self, t: f64) -> Complex64 {
        let g = &self.grid;
        let u = (t - g.t0) / g.dt;
        if u < 0.0 || u > (g.len - 1) as f64 {
            return Complex64::new(0.0, 0.0);
        }
        let i = (u.floor() as usize).min(g.len - 2);
        let x = u - i as f64;
        let at = |k: isize| {
            let k = k.clamp(0, (g.len - 1) as isize) as usize;
            self.samples[k]
        };
        let (p0, p1, p2, p3) = (
            at(i as isize - 1),
            at(i as isize),
            at(i as isize + 1),
            at(i as isize + 2),
        );
        let a = (p2 - p0) * 0.5;
        let b = p0 * 2.0 - p1 * 5.0 + p2 * 4.0 - p3;
        let c = (p3 - p0) + (p1 - p2) * 3.0;
        p1 + (a + (b * 0.5 + c * (0.5 * x)) * x) * x
    }

    /// Continuous-Fourier amplitude at offset `delta` from the carrier,
    /// `S(delta) = dt * sum E(t_k) exp(+i delta t_k)`.
    pub fn spectrum_at(&self, delta: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, z) in self.samples.iter().enumerate() {
            acc += z * cis(delta * self.grid.time(k));
        }
        acc * self.grid.dt
    }
}

/// RMS mismatch between the echo spectrum and the mirror image of the input
/// spectrum, both normalized to unit peak. Frequencies are sampled uniformly
/// on `[-max_delta, max_delta]`.
pub fn spectrum_inversion_rms(
    input: &FieldEnvelope,
    echo: &FieldEnvelope,
    max_delta: f64,
    n_freq: usize,
) -> f64 {
    let deltas: Vec<f64> = (0..n_freq)
        .map(|k| -max_delta + 2.0 * max_delta * (k as f64) / ((n_freq - 1) as f64))
        .collect();
    let s_in: Vec<f64> = deltas
        .iter()
        .map(|&d| input.spectrum_at(d).norm())
        .collect();
    let s_echo: Vec<f64> = deltas
        .iter()
        .map(|&d| echo.spectrum_at(-d).norm())
        .collect();
    let peak_in = s_in.iter().copied().fold(0.0, f64::max);
    let peak_echo = s_echo.iter().copied().fold(0.0, f64::max);
    if peak_in == 0.0 || peak_echo == 0.0 {
        return if peak_in == peak_echo { 0.0 } else { 1.0 };
    }
    let mut acc = 0.0;
    for (a, b) in s_in.iter().zip(s_echo.iter()) {
        let d = a / peak_in - b / peak_echo;
        acc += d * d;
    }
    (acc / (n_freq as f64)).sqrt()
}
