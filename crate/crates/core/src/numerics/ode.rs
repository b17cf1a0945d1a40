use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
// Needed for f64 math in no_std builds; shadowed by inherent methods in tests.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Options for the fixed-step integrator.
#[derive(Clone, Debug)]
pub struct StepOptions<'a> {
    /// Largest allowed integration substep.
    pub max_step: f64,
    /// Times where the generator is allowed to be discontinuous. Steps are
    /// split so that no stage evaluation straddles one of these.
    pub switch_times: &'a [f64],
    /// Caller-declared stability bound; `max_step` above it is rejected.
    pub stability_bound: Option<f64>,
}

impl<'a> StepOptions<'a> {
    pub fn with_step(max_step: f64) -> Self {
        Self {
            max_step,
            switch_times: &[],
            stability_bound: None,
        }
    }
}

/// Trajectory sampled on the caller's time grid.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<Complex64>>,
}

/// Integrates the linear system `dx/dt = A(t) x` with classical fixed-step
/// fourth-order Runge-Kutta, sampling the state at each grid time.
///
/// `gen` applies the generator: `gen(t, x, out)` writes `A(t) x` into `out`.
/// The generator may jump only at declared switch times; stage times are
/// nudged into the open segment so each step sees one smooth branch.
pub fn integrate_linear<G>(
    gen: G,
    x0: &[Complex64],
    t_grid: &[f64],
    opts: &StepOptions<'_>,
) -> Result<Trajectory>
where
    G: Fn(f64, &[Complex64], &mut [Complex64]),
{
    let mut states = Vec::with_capacity(t_grid.len());
    integrate_observed(gen, x0, t_grid, opts, |_, _, x| {
        states.push(x.to_vec());
    })?;
    Ok(Trajectory {
        times: t_grid.to_vec(),
        states,
    })
}

/// Same engine as [`integrate_linear`] but hands each grid sample to a
/// callback instead of storing the full trajectory. Returns the final state.
pub fn integrate_observed<G, O>(
    gen: G,
    x0: &[Complex64],
    t_grid: &[f64],
    opts: &StepOptions<'_>,
    mut on_sample: O,
) -> Result<Vec<Complex64>>
where
    G: Fn(f64, &[Complex64], &mut [Complex64]),
    O: FnMut(usize, f64, &[Complex64]),
{
    if t_grid.is_empty() {
        return Err(Error::InvalidParameter("empty time grid".into()));
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::GridNotIncreasing);
    }
    if !(opts.max_step > 0.0) || !opts.max_step.is_finite() {
        return Err(Error::InvalidParameter("max_step must be positive".into()));
    }
    if let Some(bound) = opts.stability_bound {
        if opts.max_step > bound {
            return Err(Error::StepTooLarge {
                step: opts.max_step,
                bound,
            });
        }
    }

    let span = (t_grid[0], *t_grid.last().unwrap());
    let mut switches: Vec<f64> = opts
        .switch_times
        .iter()
        .copied()
        .filter(|&s| s > span.0 && s < span.1)
        .collect();
    switches.sort_by(|a, b| a.partial_cmp(b).unwrap());
    switches.dedup();

    let n = x0.len();
    let mut x = x0.to_vec();
    let mut k1 = vec![Complex64::new(0.0, 0.0); n];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut stage = k1.clone();

    on_sample(0, t_grid[0], &x);
    let mut sw_idx = 0;
    for (gi, w) in t_grid.windows(2).enumerate() {
        let (mut ta, tb) = (w[0], w[1]);
        loop {
            // Next boundary: either a switch inside (ta, tb) or tb itself.
            while sw_idx < switches.len() && switches[sw_idx] <= ta {
                sw_idx += 1;
            }
            let cut = if sw_idx < switches.len() && switches[sw_idx] < tb {
                switches[sw_idx]
            } else {
                tb
            };
            advance_segment(
                &gen,
                &mut x,
                ta,
                cut,
                opts.max_step,
                [&mut k1, &mut k2, &mut k3, &mut k4, &mut stage],
            );
            if cut >= tb {
                break;
            }
            ta = cut;
        }
        on_sample(gi + 1, tb, &x);
    }
    Ok(x)
}

/// Steps across one smooth segment `(ta, tb]` with uniform substeps.
fn advance_segment<G>(
    gen: &G,
    x: &mut [Complex64],
    ta: f64,
    tb: f64,
    max_step: f64,
    scratch: [&mut [Complex64]; 5],
) where
    G: Fn(f64, &[Complex64], &mut [Complex64]),
{
    let [k1, k2, k3, k4, stage] = scratch;
    let span = tb - ta;
    let n_sub = (span / max_step).ceil().max(1.0) as usize;
    let h = span / (n_sub as f64);
    // All stage evaluations stay strictly inside (ta, tb) so a generator that
    // jumps exactly at a segment boundary is never sampled on the wrong side.
    let lo = next_above(ta);
    let hi = next_below(tb);
    let clamp = |t: f64| t.max(lo).min(hi);
    for step in 0..n_sub {
        let t = ta + (step as f64) * h;
        gen(clamp(t), x, k1);
        for i in 0..x.len() {
            stage[i] = x[i] + k1[i] * (h / 2.0);
        }
        gen(clamp(t + h / 2.0), stage, k2);
        for i in 0..x.len() {
            stage[i] = x[i] + k2[i] * (h / 2.0);
        }
        gen(clamp(t + h / 2.0), stage, k3);
        for i in 0..x.len() {
            stage[i] = x[i] + k3[i] * h;
        }
        gen(clamp(t + h), stage, k4);
        for i in 0..x.len() {
            x[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
        }
    }
}

/// Smallest representable float strictly above `t`.
fn next_above(t: f64) -> f64 {
    if t.is_nan() || t == f64::INFINITY {
        return t;
    }
    let bits = t.to_bits();
    if t == 0.0 {
        f64::from_bits(1)
    } else if t > 0.0 {
        f64::from_bits(bits + 1)
    } else {
        f64::from_bits(bits - 1)
    }
}

fn next_below(t: f64) -> f64 {
    -next_above(-t)
}
