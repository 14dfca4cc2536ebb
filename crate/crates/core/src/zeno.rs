//! Decay-law machinery for the modulated TLS in the waveguide continuum:
//! memory function, reservoir coupling spectrum, modulation spectrum,
//! sideband decay-rate formula, and the survival prediction
//! P_e(t) = exp(-R(t) Q(t)) with Q(t) = t.
//!
//! Normalization convention (fixed here once; the acceptance checks use
//! convention-free ratios): the reservoir density of states rho is
//! normalized to unit integral, rho(omega) = (1/pi) / sqrt(4 xi^2 -
//! omega^2) on |omega| < 2 xi, and the coupling spectrum is
//! Phi~(omega) = g^2 rho(omega). With these choices the long-time
//! unmodulated rate R -> 2 pi Phi~(Delta) reproduces the golden-rule decay
//! g^2/xi at band center exactly, so no residual calibration constant
//! remains (it is pinned to 1 and verified against direct simulation).

use num_complex::Complex64;

use crate::bessel::{bessel_j, bessel_j_sequence};
use crate::error::{Error, Result};
use crate::numerics::{quad::adaptive_simpson, sinc};
use crate::params::ModelParams;

/// Cumulative sideband weight kept by the truncation rule.
const SIDEBAND_WEIGHT_TOL: f64 = 1e-10;

/// Relative tolerance of each overlap integral.
const OVERLAP_REL_TOL: f64 = 1e-7;

/// Reservoir (waveguide-continuum) spectral functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReservoirSpectrum {
    pub xi: f64,
    pub g: f64,
}

impl ReservoirSpectrum {
    pub fn of(params: &ModelParams) -> Self {
        Self {
            xi: params.xi,
            g: params.g,
        }
    }

    /// Normalized density of states of the cosine band:
    /// rho(omega) = (1/pi)/sqrt(4 xi^2 - omega^2) for |omega| < 2 xi, zero
    /// outside. The edge itself is rejected; grids must not sample it.
    pub fn density(&self, omega: f64) -> Result<f64> {
        let edge = 2.0 * self.xi;
        if omega.abs() == edge {
            return Err(Error::BandEdge { omega, edge });
        }
        if omega.abs() > edge {
            return Ok(0.0);
        }
        Ok(std::f64::consts::FRAC_1_PI / (edge * edge - omega * omega).sqrt())
    }

    /// Coupling spectrum Phi~(omega) = g^2 rho(omega).
    pub fn spectrum(&self, omega: f64) -> Result<f64> {
        Ok(self.g * self.g * self.density(omega)?)
    }
}

/// Memory (reservoir response) function in the continuum limit:
/// Phi(t) = g^2 J_0(2 xi t). The k average of exp(i 2 xi t cos k) is the
/// zeroth Bessel function.
pub fn memory_function(params: &ModelParams, t: f64) -> Complex64 {
    Complex64::new(
        params.g * params.g * bessel_j(0, (2.0 * params.xi * t).abs()),
        0.0,
    )
}

/// Memory function as the finite discrete k sum (g^2/N) sum_k e^{i 2 xi t
/// cos k} over N modes of the Brillouin zone, for cross-checking the
/// continuum identity.
pub fn memory_function_discrete(params: &ModelParams, t: f64, n_modes: usize) -> Complex64 {
    assert!(n_modes >= 1);
    let mut acc = Complex64::ZERO;
    for m in 0..n_modes {
        let k = std::f64::consts::TAU * m as f64 / n_modes as f64;
        acc += Complex64::from_polar(1.0, 2.0 * params.xi * t * k.cos());
    }
    acc * (params.g * params.g / n_modes as f64)
}

/// Spectral density accessor in free-function form.
pub fn spectral_density(xi: f64, omega: f64) -> Result<f64> {
    ReservoirSpectrum { xi, g: 0.0 }.density(omega)
}

/// Smallest N with J_0^2 + 2 sum_{n<=N} J_n^2 >= 1 - tol, plus the weights
/// J_0 ... J_N.
fn sideband_truncation(ratio: f64, tol: f64) -> (usize, Vec<f64>) {
    // The weights live within |n| ~ ratio + O(ratio^{1/3}); this cap is
    // generous for any ratio the model accepts.
    let max_n = (ratio.abs() + 30.0 + 2.0 * ratio.abs().sqrt()) as usize;
    let weights = bessel_j_sequence(max_n, ratio.abs());
    let mut cum = weights[0] * weights[0];
    let mut n_star = 0;
    for (n, w) in weights.iter().enumerate().skip(1) {
        if cum >= 1.0 - tol {
            break;
        }
        cum += 2.0 * w * w;
        n_star = n;
    }
    (n_star, weights)
}

/// Normalized spectral modulation intensity
/// F_t(omega) = (1/t) |int_0^t e^{-i (Omega/nu) sin(nu tau)} e^{i omega tau}
/// d tau|^2, evaluated through the Bessel sideband expansion (exact up to
/// the sideband truncation, cross terms included).
pub fn modulation_spectrum(params: &ModelParams, omega: f64, t: f64) -> f64 {
    assert!(t > 0.0, "modulation_spectrum needs t > 0");
    let ratio = params.ratio();
    let (n_star, weights) = sideband_truncation(ratio, 1e-14);
    let mut amp = Complex64::ZERO;
    for n in -(n_star as i64)..=(n_star as i64) {
        let w = signed_weight(&weights, n);
        let arg = (omega - n as f64 * params.nu) * t / 2.0;
        amp += Complex64::from_polar(1.0, arg) * (w * sinc(arg));
    }
    t * amp.norm_sqr()
}

fn signed_weight(weights: &[f64], n: i64) -> f64 {
    let w = weights[n.unsigned_abs() as usize];
    if n < 0 && n % 2 != 0 {
        -w
    } else {
        w
    }
}

/// Effective decay rate at time t, resolved into sideband contributions.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayRateProfile {
    pub t: f64,
    /// Effective interaction time Q(t) = t (|V| = 1 for pure phase
    /// modulation).
    pub q: f64,
    /// R(t) = t sum_n J_n^2 int Phi~(omega) sinc^2((omega - Delta - n nu)
    /// t / 2) d omega, plus cross terms when enabled.
    pub rate: f64,
    /// Per-sideband contributions, n -> term (diagonal part).
    pub sideband_terms: Vec<(i32, f64)>,
}

/// Options for the decay-rate evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DecayRateOptions {
    /// Include the n1 != n2 cross terms of F_t. Their time average vanishes,
    /// so the long-time rate excludes them by default; enable for
    /// short-time studies.
    pub include_cross_terms: bool,
}

/// Evaluate R(t). Each overlap integral uses the edge-flattening
/// substitution omega = 2 xi sin(theta), under which
/// int rho sinc^2 d omega = (1/pi) int sinc^2 d theta.
pub fn decay_rate(params: &ModelParams, t: f64) -> Result<DecayRateProfile> {
    decay_rate_with(params, t, DecayRateOptions::default())
}

pub fn decay_rate_with(
    params: &ModelParams,
    t: f64,
    opts: DecayRateOptions,
) -> Result<DecayRateProfile> {
    if !(t > 0.0) {
        return Err(Error::InvalidParams(format!("t must be > 0, got {t}")));
    }
    let ratio = params.ratio();
    let (n_star, weights) = sideband_truncation(ratio, SIDEBAND_WEIGHT_TOL);
    let g2 = params.g * params.g;
    let delta = params.detuning();
    let two_xi = 2.0 * params.xi;

    let overlap = |n1: i64, n2: i64| -> Result<f64> {
        let c1 = delta + n1 as f64 * params.nu;
        let c2 = delta + n2 as f64 * params.nu;
        adaptive_simpson(
            |theta| {
                let omega = two_xi * theta.sin();
                sinc((omega - c1) * t / 2.0) * sinc((omega - c2) * t / 2.0)
            },
            -std::f64::consts::FRAC_PI_2,
            std::f64::consts::FRAC_PI_2,
            OVERLAP_REL_TOL,
            1e-18,
        )
        .map(|v| v * std::f64::consts::FRAC_1_PI)
        .map_err(|_| Error::QuadratureFailure {
            context: Some(format!(
                "decay-rate overlap integral, sidebands ({n1}, {n2})"
            )),
        })
    };

    let mut sideband_terms = Vec::new();
    let mut rate = 0.0;
    for n in -(n_star as i64)..=(n_star as i64) {
        let w = signed_weight(&weights, n);
        let term = t * g2 * w * w * overlap(n, n)?;
        debug_assert!(term >= 0.0);
        rate += term;
        sideband_terms.push((n as i32, term));
    }

    if opts.include_cross_terms {
        for n1 in -(n_star as i64)..=(n_star as i64) {
            for n2 in (n1 + 1)..=(n_star as i64) {
                let w1 = signed_weight(&weights, n1);
                let w2 = signed_weight(&weights, n2);
                if w1 == 0.0 || w2 == 0.0 {
                    continue;
                }
                let phase = ((n2 - n1) as f64 * params.nu * t / 2.0).cos();
                rate += 2.0 * t * g2 * w1 * w2 * phase * overlap(n1, n2)?;
            }
        }
    }

    Ok(DecayRateProfile {
        t,
        q: t,
        rate,
        sideband_terms,
    })
}

/// Long-time golden-rule rate 2 pi J_0^2(Omega/nu) Phi~(Delta): the
/// unmodulated decay suppressed by the J_0^2 factor.
pub fn golden_rule_rate(params: &ModelParams) -> Result<f64> {
    let res = ReservoirSpectrum::of(params);
    let j0 = bessel_j(0, params.ratio());
    Ok(std::f64::consts::TAU * j0 * j0 * res.spectrum(params.detuning())?)
}

/// The decay-law prediction P_e(t) = exp(-R(t) Q(t)) over a time grid.
pub fn survival_prediction(params: &ModelParams, t_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    t_grid
        .iter()
        .map(|&t| {
            let prof = decay_rate(params, t)?;
            Ok((t, (-prof.rate * prof.q).exp()))
        })
        .collect()
}
