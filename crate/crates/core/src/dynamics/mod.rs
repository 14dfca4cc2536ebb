//! Time evolution of the full time-dependent problem by two independent
//! methods (Floquet extended-space diagonalization and direct RK4
//! integration), plus the decay-trace and modulation-scan experiment
//! drivers.

pub mod direct;
pub mod floquet;

use rayon::prelude::*;

use crate::bessel::bessel_j;
use crate::error::{Error, Result};
use crate::params::{ModelParams, SingleExcitationState};

pub use direct::{direct_propagate, direct_propagate_checked, Rk4Integrator, DEFAULT_DT};
pub use floquet::{
    build_floquet_matrix, converged_spectrum, floquet_propagate, FloquetSpectrum, PropagationPlan,
    Truncation, DEFAULT_DIM_CAP, DEFAULT_SLICE_DIVISOR,
};

/// Propagator selection for the experiment drivers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    /// Fixed-step RK4 integration of H(t).
    Direct { dt: f64 },
    /// Sliced Floquet propagation.
    Floquet {
        truncation: Truncation,
        slice_divisor: u32,
    },
}

impl Default for Method {
    fn default() -> Self {
        Method::Direct { dt: DEFAULT_DT }
    }
}

impl Method {
    pub fn floquet_default() -> Self {
        Method::Floquet {
            truncation: Truncation::Auto,
            slice_divisor: DEFAULT_SLICE_DIVISOR,
        }
    }
}

/// P_e(t) on a strictly increasing time grid starting from the excited TLS.
pub fn pe_trace(params: &ModelParams, t_grid: &[f64], method: Method) -> Result<Vec<(f64, f64)>> {
    check_monotone(t_grid)?;
    let state0 = SingleExcitationState::initial_excited(params);
    let mut out = Vec::with_capacity(t_grid.len());
    match method {
        Method::Direct { dt } => {
            let mut integ = Rk4Integrator::new(params, &state0);
            for &t in t_grid {
                integ.advance_to(t, dt)?;
                out.push((t, integ.state().excited_probability()));
            }
        }
        Method::Floquet {
            truncation,
            slice_divisor,
        } => {
            let spec = match truncation {
                Truncation::Auto => converged_spectrum(params, DEFAULT_DIM_CAP)?,
                Truncation::Fixed(m) => FloquetSpectrum::build(params, m, DEFAULT_DIM_CAP)?,
            };
            let hint = params.period() / slice_divisor as f64;
            let mut state = state0;
            let mut t_prev = 0.0;
            for &t in t_grid {
                if t > t_prev {
                    let plan = PropagationPlan::for_total_time(t - t_prev, hint);
                    state = spec.propagate(params, &state, t_prev, &plan)?;
                    t_prev = t;
                }
                out.push((t, state.excited_probability()));
            }
        }
    }
    Ok(out)
}

/// One row of the modulation scan: survival probability at t_f for a given
/// Omega/nu, with J_0(Omega/nu) recorded for the overlay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZenoScanPoint {
    pub ratio: f64,
    pub pe_tf: f64,
    pub j0: f64,
}

/// Survival probability P_e(t_f) versus the modulation ratio Omega/nu.
///
/// Ratio points are independent and are distributed across the rayon pool;
/// results are collected in grid order, so the output is deterministic
/// regardless of scheduling.
pub fn zeno_scan(
    params: &ModelParams,
    ratio_grid: &[f64],
    t_f: f64,
    method: Method,
) -> Result<Vec<ZenoScanPoint>> {
    check_monotone(ratio_grid)?;
    if !(t_f > 0.0) {
        return Err(Error::InvalidParams(format!("t_f must be > 0, got {t_f}")));
    }
    ratio_grid
        .par_iter()
        .map(|&ratio| {
            let p = params.with_ratio(ratio);
            let state0 = SingleExcitationState::initial_excited(&p);
            let state = match method {
                Method::Direct { dt } => direct_propagate(&p, &state0, t_f, dt)?,
                Method::Floquet {
                    truncation,
                    slice_divisor,
                } => {
                    let plan =
                        PropagationPlan::for_total_time(t_f, p.period() / slice_divisor as f64);
                    floquet_propagate(&p, &state0, t_f, &plan, truncation)?
                }
            };
            Ok(ZenoScanPoint {
                ratio,
                pe_tf: state.excited_probability(),
                j0: bessel_j(0, ratio),
            })
        })
        .collect()
}

fn check_monotone(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParams("empty grid".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParams(
            "grid must be strictly increasing".into(),
        ));
    }
    if grid[0] < 0.0 {
        return Err(Error::InvalidParams("grid must be non-negative".into()));
    }
    Ok(())
}

/// Build a uniform grid from `lo` to `hi` inclusive with `steps` intervals.
pub fn linear_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    assert!(steps >= 1 && hi > lo);
    (0..=steps)
        .map(|i| lo + (hi - lo) * i as f64 / steps as f64)
        .collect()
}
