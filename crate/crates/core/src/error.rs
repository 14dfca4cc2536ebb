//! Error type shared by all solver modules.

use thiserror::Error;

/// Errors produced by model construction and the numerical routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Parameter set violates a model invariant (odd site count, positive
    /// hopping, ...).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Requested extended-space dimension exceeds the configured cap.
    #[error("extended-space dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    /// An iterative procedure failed to reach its tolerance.
    #[error("{context}: residual {measure:.3e} above tolerance {tolerance:.3e}")]
    NonConvergent {
        context: String,
        measure: f64,
        tolerance: f64,
    },

    /// Propagator norm drift exceeded the accuracy guard. The drift is the
    /// diagnostic; renormalizing would hide the error.
    #[error(
        "norm drift {drift:.3e} exceeds limit {limit:.3e}; reduce the step or raise the truncation"
    )]
    NormDrift { drift: f64, limit: f64 },

    /// Step-halving check found the integrator step too large.
    #[error(
        "halved-step result differs by {delta:.3e} (tolerance {tolerance:.3e}); step too large"
    )]
    StepTooLarge { delta: f64, tolerance: f64 },

    /// Spectral density sampled exactly on the band edge where it diverges.
    #[error("spectral density diverges at the band edge |omega| = {edge}")]
    BandEdge { omega: f64, edge: f64 },

    /// The resonant potential g^2 J0^2 / E_k is singular at E_k = 0.
    #[error("resonant potential is singular at E_k = 0")]
    ZeroResonantEnergy,

    /// Group velocity vanishes at the band edge; the scattering formula is
    /// singular there.
    #[error("wave number k = {k} too close to a band edge (v_g = {v_g:.3e})")]
    BandEdgeWaveNumber { k: f64, v_g: f64 },

    /// Effective coupling vanishes (modulation ratio at a Bessel zero, or
    /// g = 0): kappa -> 0 and the photon is delocalized.
    #[error("effective coupling vanishes at ratio {ratio}; bound state is delocalized")]
    Delocalized { ratio: f64 },

    /// Root bracketing for the bound-state condition failed on this branch.
    #[error("no bound-state root found on the {branch} branch")]
    NoBoundRoot { branch: &'static str },

    /// High-frequency effective model requested outside its regime.
    #[error("effective model outside the high-frequency regime: nu = {nu} < {required} (override to force)")]
    OutsideHighFrequencyRegime { nu: f64, required: f64 },

    /// Wavepacket spectral support leaves the band interior.
    #[error("wavepacket not valid: {0}")]
    InvalidPacket(String),

    /// Wavepacket reached the lattice boundary before readout.
    #[error("wavepacket hit the lattice boundary (edge probability {edge_probability:.3e}); use a longer lattice")]
    BoundaryCollision { edge_probability: f64 },

    /// Adaptive quadrature did not converge.
    #[error("quadrature failed to converge{}", context.as_ref().map(|c| format!(" ({c})")).unwrap_or_default())]
    QuadratureFailure { context: Option<String> },
}

pub type Result<T> = std::result::Result<T, Error>;
