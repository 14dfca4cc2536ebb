//! Photonic bound states in the band gap, localized at the TLS site.
//!
//! The even-parity ansatz U(j) = C exp(-kappa |j|) solves the scattering
//! equation off the gap with E = Delta +- 2 xi cosh(kappa) (the above-band
//! state carries an implicit (-1)^j staggering that drops out of |U|^2).
//! Matching at j = 0 gives the existence condition
//!
//! ```text
//! g^2 J_0^2(Omega/nu) = 2 xi (xi sinh 2 kappa +- Delta sinh kappa)
//! ```
//!
//! with the upper sign for the above-band branch under the convention
//! Delta = omega_c - omega_a used throughout this crate (validated against
//! finite-lattice diagonalization in the tests). At the zeros of J_0 the
//! condition forces kappa -> 0: the photon delocalizes, which is the switch
//! signature in the localization map.

use rayon::prelude::*;

use crate::bessel::bessel_j;
use crate::effective::{effective_g, effective_hamiltonian};
use crate::error::{Error, Result};
use crate::numerics::{bisect, eigen::eigh};
use crate::params::ModelParams;

/// |J_0| below this is treated as a decoupling point: kappa would come out
/// below ~1e-9, a localization length beyond 1e8 sites, i.e. a delocalized
/// band-edge mode on any realizable lattice. The floor also makes ratio
/// values quoted to four decimals (2.4048, 5.5201) flag as zeros.
const DELOCALIZATION_FLOOR: f64 = 1e-4;

/// Residual bound for the existence condition at the returned root.
const CONDITION_RESIDUAL_TOL: f64 = 1e-10;

/// Which side of the band the bound state lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// E = Delta + 2 xi cosh kappa, above the band.
    Upper,
    /// E = Delta - 2 xi cosh kappa, below the band.
    Lower,
}

impl Branch {
    pub fn label(&self) -> &'static str {
        match self {
            Branch::Upper => "upper",
            Branch::Lower => "lower",
        }
    }

    fn sign(&self) -> f64 {
        match self {
            Branch::Upper => 1.0,
            Branch::Lower => -1.0,
        }
    }
}

/// A gap-localized photon state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    /// Imaginary wave vector kappa > 0.
    pub kappa: f64,
    /// Energy E = Delta +- 2 xi cosh kappa, measured from the TLS level.
    pub energy: f64,
    pub branch: Branch,
    /// C with sum_j C^2 exp(-2 kappa |j|) = 1 on the infinite lattice:
    /// C^2 = tanh(kappa).
    pub norm_const: f64,
}

impl BoundState {
    /// Profile amplitude U(j) = C exp(-kappa |j|).
    pub fn amplitude(&self, j: i64) -> f64 {
        self.norm_const * (-self.kappa * j.unsigned_abs() as f64).exp()
    }

    /// |U(j)|^2.
    pub fn density(&self, j: i64) -> f64 {
        let a = self.amplitude(j);
        a * a
    }

    /// Localization length 1/kappa in sites.
    pub fn width(&self) -> f64 {
        1.0 / self.kappa
    }
}

/// Existence-condition left side minus target, as a function of kappa.
fn condition_gap(params: &ModelParams, branch: Branch, kappa: f64, target: f64) -> f64 {
    let xi = params.xi;
    let delta = params.detuning();
    2.0 * xi * (xi * (2.0 * kappa).sinh() + branch.sign() * delta * kappa.sinh()) - target
}

/// Solve the existence condition for the requested branch.
pub fn bound_state_solve(params: &ModelParams, branch: Branch) -> Result<BoundState> {
    let ratio = params.ratio();
    if params.g == 0.0 || bessel_j(0, ratio).abs() < DELOCALIZATION_FLOOR {
        return Err(Error::Delocalized { ratio });
    }
    let g_eff = effective_g(params);
    let target = g_eff * g_eff;

    // g(0) = -target < 0; expand the upper bracket until the condition
    // exceeds the target. sinh grows fast, so this terminates quickly.
    let mut hi = 0.5;
    let mut expansions = 0;
    while condition_gap(params, branch, hi, target) <= 0.0 {
        hi *= 2.0;
        expansions += 1;
        if expansions > 60 {
            return Err(Error::NoBoundRoot {
                branch: branch.label(),
            });
        }
    }
    let kappa = bisect(|k| condition_gap(params, branch, k, target), 0.0, hi)?;
    let residual = condition_gap(params, branch, kappa, target).abs();
    if residual > CONDITION_RESIDUAL_TOL {
        return Err(Error::NonConvergent {
            context: format!("bound-state condition on {} branch", branch.label()),
            measure: residual,
            tolerance: CONDITION_RESIDUAL_TOL,
        });
    }
    let energy = params.detuning() + branch.sign() * 2.0 * params.xi * kappa.cosh();
    Ok(BoundState {
        kappa,
        energy,
        branch,
        norm_const: kappa.tanh().sqrt(),
    })
}

/// |U(j)|^2 over an inclusive site range.
pub fn bound_profile(bs: &BoundState, j_min: i64, j_max: i64) -> Vec<(i64, f64)> {
    (j_min..=j_max).map(|j| (j, bs.density(j))).collect()
}

/// One row of the localization map: the profile at a fixed ratio, or a
/// delocalization marker at the zeros of J_0.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationRow {
    pub ratio: f64,
    /// None at a delocalization point.
    pub kappa: Option<f64>,
    pub delocalized: bool,
    /// |U(j)|^2 over the j range, normalized to the row's own maximum so
    /// rows with very different widths remain comparable; all zeros on
    /// delocalized rows.
    pub density: Vec<f64>,
}

/// Bound-state density over (ratio, j). Zeros of J_0 become marker rows
/// instead of failing the sweep.
pub fn localization_map(
    params: &ModelParams,
    ratio_grid: &[f64],
    j_min: i64,
    j_max: i64,
) -> Vec<LocalizationRow> {
    ratio_grid
        .par_iter()
        .map(|&ratio| {
            let p = params.with_ratio(ratio);
            match bound_state_solve(&p, Branch::Upper) {
                Ok(bs) => {
                    let peak = bs.density(0);
                    let density = (j_min..=j_max).map(|j| bs.density(j) / peak).collect();
                    LocalizationRow {
                        ratio,
                        kappa: Some(bs.kappa),
                        delocalized: false,
                        density,
                    }
                }
                Err(_) => LocalizationRow {
                    ratio,
                    kappa: None,
                    delocalized: true,
                    density: vec![0.0; (j_max - j_min + 1) as usize],
                },
            }
        })
        .collect()
}

/// Finite-lattice cross-check of the analytic bound state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteLatticeCheck {
    /// Out-of-band eigenvalue of the effective Hamiltonian, shifted to the
    /// E convention (measured from the TLS level).
    pub lattice_energy: f64,
    /// Analytic E = Delta +- 2 xi cosh kappa.
    pub analytic_energy: f64,
    /// Overlap of the photon part of the lattice eigenvector with the
    /// analytic profile (both normalized over the photon sector). The hard
    /// wall deforms the exponential tail, so this carries an e^{-2 kappa R}
    /// finite-size defect.
    pub overlap: f64,
    /// Overlap of the normalized density profiles |U(j)|^2 (the quantity the
    /// localization map plots); the tail defect enters squared, making this
    /// the sharper finite-lattice comparison.
    pub density_overlap: f64,
    /// Excited-state share |U_e|^2 of the lattice eigenvector; the analytic
    /// ansatz omits it from the profile, so it is reported separately.
    pub excited_share: f64,
}

/// Diagonalize the effective Hamiltonian on `sites` cavities and compare the
/// out-of-band level against the analytic bound state.
pub fn finite_lattice_check(
    params: &ModelParams,
    branch: Branch,
    sites: usize,
) -> Result<FiniteLatticeCheck> {
    let bs = bound_state_solve(params, branch)?;
    let mut p = *params;
    p.sites = sites;
    if p.sites.is_multiple_of(2) || p.sites < 3 {
        return Err(Error::InvalidParams(format!(
            "finite-lattice check needs an odd site count, got {sites}"
        )));
    }
    let eig = eigh(&effective_hamiltonian(&p))?;
    let idx = match branch {
        Branch::Upper => eig.values.len() - 1,
        Branch::Lower => 0,
    };
    let lattice_energy = eig.values[idx] - p.omega_a;

    let vec = eig.vectors.column(idx);
    let r = p.half_span();
    let excited_share = vec[p.excited_index()] * vec[p.excited_index()];
    let mut photon_norm = 0.0;
    let mut analytic_norm = 0.0;
    let mut dot = 0.0;
    let mut d_lattice_norm = 0.0;
    let mut d_analytic_norm = 0.0;
    let mut d_dot = 0.0;
    for j in -r..=r {
        let v = vec[p.site_index(j)];
        // The above-band state alternates sign site to site.
        let stagger = match branch {
            Branch::Upper => {
                if j.rem_euclid(2) == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
            Branch::Lower => 1.0,
        };
        let a = stagger * bs.amplitude(j);
        photon_norm += v * v;
        analytic_norm += a * a;
        dot += v * a;
        let (dv, da) = (v * v, a * a);
        d_lattice_norm += dv * dv;
        d_analytic_norm += da * da;
        d_dot += dv * da;
    }
    let overlap = dot.abs() / (photon_norm.sqrt() * analytic_norm.sqrt());
    let density_overlap = d_dot / (d_lattice_norm.sqrt() * d_analytic_norm.sqrt());
    Ok(FiniteLatticeCheck {
        lattice_energy,
        analytic_energy: bs.energy,
        overlap,
        density_overlap,
        excited_share,
    })
}
