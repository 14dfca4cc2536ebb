//! Adaptive Simpson quadrature.
//!
//! The integrands in this crate are bounded after the edge-aware
//! substitutions done by the callers (the raw spectral density has
//! integrable inverse-square-root divergences at the band edges), but can be
//! highly oscillatory, so the recursion depth limit is generous.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 48;

/// Oscillatory integrands can alias to zero on the first few bisections if
/// their period divides the panel width, so the interval is always pre-split
/// into this many panels before the adaptive recursion starts.
const PRE_SPLIT: usize = 16;

/// Integrate `f` over `[a, b]` with mixed relative/absolute tolerance.
///
/// The error estimate on each panel is the standard |S2 - S1| / 15 Richardson
/// bound; accepted panels contribute the extrapolated value.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    let h = (b - a) / PRE_SPLIT as f64;
    let nodes: Vec<f64> = (0..=PRE_SPLIT).map(|i| a + i as f64 * h).collect();
    let values: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
    let mut rough = 0.0;
    for i in 0..PRE_SPLIT {
        rough += simpson(
            nodes[i],
            nodes[i + 1],
            values[i],
            f(0.5 * (nodes[i] + nodes[i + 1])),
            values[i + 1],
        )
        .abs();
    }
    // Scale for the relative tolerance; the sum of |panel| estimates guards
    // against cancellation-driven underestimates. The noise floor keeps the
    // per-panel tolerance from shrinking below what f64 roundoff in the
    // integrand can satisfy.
    let tol = (rel_tol * rough + abs_tol) / PRE_SPLIT as f64;
    let floor = 16.0 * f64::EPSILON * (rough / PRE_SPLIT as f64).max(abs_tol);
    let mut total = 0.0;
    for i in 0..PRE_SPLIT {
        let (pa, pb) = (nodes[i], nodes[i + 1]);
        let m = 0.5 * (pa + pb);
        let fm = f(m);
        let whole = simpson(pa, pb, values[i], fm, values[i + 1]);
        total += recurse(
            &f,
            pa,
            pb,
            values[i],
            fm,
            values[i + 1],
            whole,
            tol.max(floor),
            floor,
            MAX_DEPTH,
        )?;
    }
    Ok(total)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    floor: f64,
    depth: u32,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureFailure {
            context: Some(format!(
                "panel [{a:.6e}, {b:.6e}] residual {:.3e}",
                delta.abs()
            )),
        });
    }
    let child_tol = (0.5 * tol).max(floor);
    let l = recurse(f, a, m, fa, flm, fm, left, child_tol, floor, depth - 1)?;
    let r = recurse(f, m, b, fm, frm, fb, right, child_tol, floor, depth - 1)?;
    Ok(l + r)
}
