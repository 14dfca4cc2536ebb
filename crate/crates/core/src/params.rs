//! Physical parameter set, single-excitation state, and the time-dependent
//! Hamiltonian of the chain + two-level system.
//!
//! Basis ordering is fixed everywhere: photon-in-cavity states |1_j g> for
//! j = -(L-1)/2 ... (L-1)/2 ascending, then the excited state |0 e> last.
//! Serialized states are portable across modules because of this.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// All physical constants of the waveguide + two-level-system model, in
/// units where hbar = 1 and energies are measured in the hopping xi.
///
/// The detuning Delta = omega_c - omega_a is derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Cavity frequency omega_c.
    pub omega_c: f64,
    /// Bare level spacing omega_a of the two-level system.
    pub omega_a: f64,
    /// Modulation amplitude Omega >= 0.
    pub amplitude: f64,
    /// Modulation frequency nu > 0.
    pub nu: f64,
    /// Inter-cavity hopping xi > 0.
    pub xi: f64,
    /// TLS-cavity coupling g >= 0.
    pub g: f64,
    /// Number of cavities L, odd and >= 3 so the TLS site j = 0 is centered.
    pub sites: usize,
}

impl ModelParams {
    pub fn new(
        omega_c: f64,
        omega_a: f64,
        amplitude: f64,
        nu: f64,
        xi: f64,
        g: f64,
        sites: usize,
    ) -> Result<Self> {
        if !(amplitude >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "amplitude must be >= 0, got {amplitude}"
            )));
        }
        if !(nu > 0.0) {
            return Err(Error::InvalidParams(format!("nu must be > 0, got {nu}")));
        }
        if !(xi > 0.0) {
            return Err(Error::InvalidParams(format!("xi must be > 0, got {xi}")));
        }
        if !(g >= 0.0) {
            return Err(Error::InvalidParams(format!("g must be >= 0, got {g}")));
        }
        if sites < 3 || sites.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!(
                "sites must be odd and >= 3, got {sites}"
            )));
        }
        for (name, v) in [("omega_c", omega_c), ("omega_a", omega_a)] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite")));
            }
        }
        Ok(Self {
            omega_c,
            omega_a,
            amplitude,
            nu,
            xi,
            g,
            sites,
        })
    }

    /// The parameter point of the reference experiments: resonance
    /// (omega_c = omega_a = 0), xi = 1, g = 0.25, nu = 10, L = 41, with the
    /// modulation amplitude left at zero to be set per run.
    pub fn reference() -> Self {
        Self {
            omega_c: 0.0,
            omega_a: 0.0,
            amplitude: 0.0,
            nu: 10.0,
            xi: 1.0,
            g: 0.25,
            sites: 41,
        }
    }

    /// Same parameters with the modulation set through the ratio Omega/nu.
    pub fn with_ratio(mut self, ratio: f64) -> Self {
        self.amplitude = ratio * self.nu;
        self
    }

    /// Detuning Delta = omega_c - omega_a (single source of truth).
    pub fn detuning(&self) -> f64 {
        self.omega_c - self.omega_a
    }

    /// Modulation ratio Omega/nu.
    pub fn ratio(&self) -> f64 {
        self.amplitude / self.nu
    }

    /// Modulated level spacing Omega_a(t) = omega_a + Omega cos(nu t).
    pub fn omega_a_t(&self, t: f64) -> f64 {
        self.omega_a + self.amplitude * (self.nu * t).cos()
    }

    /// Modulation period 2 pi / nu.
    pub fn period(&self) -> f64 {
        std::f64::consts::TAU / self.nu
    }

    /// Half-span R = (L-1)/2; sites run j = -R ... R.
    pub fn half_span(&self) -> i64 {
        (self.sites as i64 - 1) / 2
    }

    /// Hilbert-space dimension L + 1 (photon sites plus the excited state).
    pub fn dim(&self) -> usize {
        self.sites + 1
    }

    /// Flat index of cavity j in the fixed basis ordering.
    pub fn site_index(&self, j: i64) -> usize {
        let r = self.half_span();
        debug_assert!((-r..=r).contains(&j), "site {j} outside lattice");
        (j + r) as usize
    }

    /// Flat index of the excited state (always last).
    pub fn excited_index(&self) -> usize {
        self.sites
    }

    /// Time after which finite-size echoes reach back to the center:
    /// emitted wavefronts travel at most 2 xi, so ~ L / (2 xi). Results past
    /// this horizon are contaminated by boundary reflections.
    pub fn revival_time(&self) -> f64 {
        self.sites as f64 / (2.0 * self.xi)
    }
}

/// H(t) in the fixed basis ordering: omega_c on the cavity diagonal, -xi on
/// nearest-neighbor cavity off-diagonals (open chain, no wraparound),
/// Omega_a(t) on the excited-state entry, and g linking the excited state to
/// the j = 0 cavity. Real symmetric, hence exactly Hermitian.
pub fn hamiltonian_at(params: &ModelParams, t: f64) -> DMatrix<f64> {
    let l = params.sites;
    let dim = params.dim();
    let mut h = DMatrix::zeros(dim, dim);
    for i in 0..l {
        h[(i, i)] = params.omega_c;
        if i + 1 < l {
            h[(i, i + 1)] = -params.xi;
            h[(i + 1, i)] = -params.xi;
        }
    }
    let e = params.excited_index();
    let c = params.site_index(0);
    h[(e, e)] = params.omega_a_t(t);
    h[(e, c)] = params.g;
    h[(c, e)] = params.g;
    h
}

/// Static part of H(t): the drive term Omega cos(nu t) removed, i.e. the
/// excited-state diagonal holds the bare omega_a.
pub fn hamiltonian_static(params: &ModelParams) -> DMatrix<f64> {
    let undriven = ModelParams {
        amplitude: 0.0,
        ..*params
    };
    hamiltonian_at(&undriven, 0.0)
}

/// Complex amplitudes of a single-excitation state: u_j on the cavities (in
/// basis order) and u_e on the excited state, stored flat.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleExcitationState {
    amps: Vec<Complex64>,
}

impl SingleExcitationState {
    /// Build from photon amplitudes (ascending j) plus the excited amplitude.
    pub fn from_amplitudes(photon: Vec<Complex64>, excited: Complex64) -> Self {
        let mut amps = photon;
        amps.push(excited);
        Self { amps }
    }

    /// The initial state of the decay experiments: photon vacuum, TLS excited.
    pub fn initial_excited(params: &ModelParams) -> Self {
        let mut amps = vec![Complex64::ZERO; params.dim()];
        amps[params.excited_index()] = Complex64::ONE;
        Self { amps }
    }

    /// A single photon at cavity j, TLS in the ground state.
    pub fn single_photon(params: &ModelParams, j: i64) -> Self {
        let mut amps = vec![Complex64::ZERO; params.dim()];
        amps[params.site_index(j)] = Complex64::ONE;
        Self { amps }
    }

    pub fn from_flat(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// Photon amplitudes u_j, ascending j.
    pub fn photon_amps(&self) -> &[Complex64] {
        &self.amps[..self.amps.len() - 1]
    }

    /// Excited-state amplitude u_e.
    pub fn excited_amp(&self) -> Complex64 {
        self.amps[self.amps.len() - 1]
    }

    /// Flat amplitude vector in basis order (cavities then excited state).
    pub fn as_flat(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// P_e = |u_e|^2.
    pub fn excited_probability(&self) -> f64 {
        self.excited_amp().norm_sqr()
    }

    /// |u_j|^2 for each cavity, ascending j.
    pub fn photon_density(&self) -> Vec<f64> {
        self.photon_amps().iter().map(|a| a.norm_sqr()).collect()
    }

    /// Largest componentwise amplitude difference to another state.
    pub fn max_amp_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn reference(ratio: f64) -> ModelParams {
        ModelParams::reference().with_ratio(ratio)
    }

    #[test]
    fn rejects_bad_params() {
        assert!(ModelParams::new(0.0, 0.0, 0.0, 10.0, 1.0, 0.25, 40).is_err()); // even
        assert!(ModelParams::new(0.0, 0.0, 0.0, 10.0, 1.0, 0.25, 1).is_err()); // too small
        assert!(ModelParams::new(0.0, 0.0, -1.0, 10.0, 1.0, 0.25, 41).is_err());
        assert!(ModelParams::new(0.0, 0.0, 0.0, 0.0, 1.0, 0.25, 41).is_err());
        assert!(ModelParams::new(0.0, 0.0, 0.0, 10.0, -1.0, 0.25, 41).is_err());
        assert!(ModelParams::new(0.0, 0.0, 0.0, 10.0, 1.0, -0.1, 41).is_err());
    }

    #[test]
    fn coupling_off_is_block_diagonal() {
        let mut p = reference(1.3);
        p.g = 0.0;
        let h = hamiltonian_at(&p, 0.37);
        let e = p.excited_index();
        for i in 0..p.dim() - 1 {
            assert_eq!(h[(e, i)], 0.0);
            assert_eq!(h[(i, e)], 0.0);
        }
    }

    #[test]
    fn no_modulation_is_time_independent() {
        let p = reference(0.0);
        let h0 = hamiltonian_at(&p, 0.0);
        let h1 = hamiltonian_at(&p, 1.0);
        assert_eq!(h0, h1);
    }

    #[test]
    fn tls_entry_at_t_zero_is_omega_a_plus_amplitude() {
        let p = reference(2.4);
        let h = hamiltonian_at(&p, 0.0);
        let e = p.excited_index();
        assert_relative_eq!(h[(e, e)], p.omega_a + p.amplitude);
    }

    #[test]
    fn cavity_block_is_tridiagonal_toeplitz() {
        let p = reference(1.0);
        let h = hamiltonian_at(&p, 0.2);
        for i in 0..p.sites {
            for j in 0..p.sites {
                let want = if i == j {
                    p.omega_c
                } else if i.abs_diff(j) == 1 {
                    -p.xi
                } else {
                    0.0
                };
                assert_eq!(h[(i, j)], want);
            }
        }
        // Open boundary: no wraparound element.
        assert_eq!(h[(0, p.sites - 1)], 0.0);
    }

    #[test]
    fn initial_excited_state() {
        let p = reference(0.0);
        let s = SingleExcitationState::initial_excited(&p);
        assert_relative_eq!(s.norm(), 1.0);
        assert_relative_eq!(s.excited_probability(), 1.0);
        assert!(s.photon_density().iter().all(|&d| d == 0.0));
    }

    #[test]
    fn equal_superposition_density() {
        let p = reference(0.0);
        let l = p.sites;
        let amp = Complex64::new(1.0 / (l as f64).sqrt(), 0.0);
        let s = SingleExcitationState::from_amplitudes(vec![amp; l], Complex64::ZERO);
        for d in s.photon_density() {
            assert_relative_eq!(d, 1.0 / l as f64, epsilon = 1e-15);
        }
        assert_relative_eq!(s.norm(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn site_indexing_round_trip() {
        let p = reference(0.0);
        assert_eq!(p.site_index(-p.half_span()), 0);
        assert_eq!(p.site_index(0), 20);
        assert_eq!(p.site_index(p.half_span()), 40);
        assert_eq!(p.excited_index(), 41);
    }

    proptest! {
        #[test]
        fn hamiltonian_exactly_symmetric(
            ratio in 0.0..8.0f64,
            t in 0.0..10.0f64,
            delta in -1.5..1.5f64,
        ) {
            let mut p = reference(ratio);
            p.omega_a = -delta;
            let h = hamiltonian_at(&p, t);
            for i in 0..p.dim() {
                for j in 0..p.dim() {
                    prop_assert_eq!(h[(i, j)], h[(j, i)]);
                }
            }
        }

        #[test]
        fn hamiltonian_periodic_in_drive(t in 0.0..10.0f64, ratio in 0.0..8.0f64) {
            let p = reference(ratio);
            let h0 = hamiltonian_at(&p, t);
            let h1 = hamiltonian_at(&p, t + p.period());
            let e = p.excited_index();
            // Only the TLS entry is time dependent.
            prop_assert!((h0[(e, e)] - h1[(e, e)]).abs() <= 1e-12 * (1.0 + p.amplitude));
            prop_assert_eq!(h0[(0, 1)], h1[(0, 1)]);
        }
    }
}
