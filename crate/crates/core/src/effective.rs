//! Modulation-renormalized coupling and the high-frequency effective model.
//!
//! Fast modulation multiplies the photon-TLS coupling by the Bessel factor
//! of the resonant sideband, G = g J_n(Omega/nu) with n the integer nearest
//! to Delta/nu. On resonance n = 0 and the coupling vanishes at the zeros
//! of J_0: the switch points.

use num_complex::Complex64;

use crate::bessel::{bessel_j, bessel_j_signed};
use crate::error::{Error, Result};
use crate::numerics::eigen::eigh;
use crate::params::{hamiltonian_static, ModelParams, SingleExcitationState};

/// The effective coupling of the resonant sideband.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCoupling {
    /// Modulation ratio Omega/nu.
    pub ratio: f64,
    /// Resonant sideband index, the integer nearest Delta/nu (ties toward
    /// zero).
    pub order: i32,
    /// g J_order(Omega/nu); |value| <= g always.
    pub value: f64,
}

impl EffectiveCoupling {
    pub fn of(params: &ModelParams) -> Self {
        let ratio = params.ratio();
        let order = resonant_sideband(params.detuning(), params.nu);
        EffectiveCoupling {
            ratio,
            order,
            value: params.g * bessel_j_signed(order, ratio),
        }
    }
}

/// Integer nearest to delta/nu, with half-integer ties rounded toward zero.
pub fn resonant_sideband(delta: f64, nu: f64) -> i32 {
    let q = delta / nu;
    let r = q.round(); // rounds ties away from zero
    let n = if (r - q).abs() == 0.5 { q.trunc() } else { r };
    n as i32
}

/// The resonance-regime effective coupling G = g J_0(Omega/nu).
pub fn effective_g(params: &ModelParams) -> f64 {
    params.g * bessel_j(0, params.ratio())
}

/// Time-independent effective Hamiltonian: the chain, the bare TLS level,
/// and the J_0-rescaled coupling.
pub fn effective_hamiltonian(params: &ModelParams) -> nalgebra::DMatrix<f64> {
    let mut h = hamiltonian_static(params);
    let e = params.excited_index();
    let c = params.site_index(0);
    let g_eff = effective_g(params);
    h[(e, c)] = g_eff;
    h[(c, e)] = g_eff;
    h
}

/// Evolution under the effective Hamiltonian by exact eigendecomposition.
///
/// Valid in the high-frequency regime nu >= 5 max(xi, |Delta|); outside it
/// the caller must pass `force` to acknowledge the regime violation.
pub fn effective_propagate(
    params: &ModelParams,
    state0: &SingleExcitationState,
    t: f64,
    force: bool,
) -> Result<SingleExcitationState> {
    let required = 5.0 * params.xi.max(params.detuning().abs());
    if params.nu < required && !force {
        return Err(Error::OutsideHighFrequencyRegime {
            nu: params.nu,
            required,
        });
    }
    let eig = eigh(&effective_hamiltonian(params))?;
    let n = params.dim();
    assert_eq!(state0.dim(), n);
    let v = eig.vectors.as_slice();
    // c = V^T psi0, then psi(t) = V diag(exp(-i E t)) c.
    let mut psi = vec![Complex64::ZERO; n];
    for k in 0..n {
        let col = &v[k * n..(k + 1) * n];
        let mut c = Complex64::ZERO;
        for (amp, &vv) in state0.as_flat().iter().zip(col) {
            c += amp * vv;
        }
        let c = c * Complex64::from_polar(1.0, -eig.values[k] * t);
        for (p, &vv) in psi.iter_mut().zip(col) {
            *p += c * vv;
        }
    }
    Ok(SingleExcitationState::from_flat(psi))
}
