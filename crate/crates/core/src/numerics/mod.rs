//! Shared numerical kernels: dense symmetric eigensolver, adaptive
//! quadrature, and bisection root refinement.

pub mod eigen;
pub mod quad;

use crate::error::{Error, Result};

/// Bisection on a bracketing interval `[lo, hi]` with `f(lo)` and `f(hi)` of
/// opposite sign. Runs to floating-point interval exhaustion, which for f64
/// is ~60 iterations; deterministic and derivative-free.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NonConvergent {
            context: format!("bisect: no sign change on [{lo}, {hi}]"),
            measure: flo.abs().min(fhi.abs()),
            tolerance: 0.0,
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // interval exhausted at f64 resolution
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// sin(x)/x with the removable singularity filled in by its series.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0).unwrap();
        assert_relative_eq!(r, 2.0_f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn bisect_rejects_no_bracket() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn sinc_matches_series_near_zero() {
        assert_relative_eq!(sinc(0.0), 1.0);
        assert_relative_eq!(sinc(1e-5), 1.0 - 1e-10 / 6.0, epsilon = 1e-16);
        assert_relative_eq!(sinc(0.5), 0.5_f64.sin() / 0.5, epsilon = 1e-15);
    }
}
