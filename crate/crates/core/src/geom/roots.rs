//! Simultaneous root finding (Aberth–Ehrlich iteration).

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::UniPolyC;
use crate::error::{Error, Result};

const MAX_ITER: usize = 500;
const RESIDUAL_TOL: f64 = 1e-10;

/// `p(z)`, `p'(z)` and `Σ|c_i||z|^i` (for the rounding-error bound) by Horner's rule.
fn eval_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    let r = z.norm();
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
        bound = bound * r + a.norm();
    }
    (p, dp, bound)
}

/// Scaled residual `|p(r)| / ((1+|r|)^d max|c|)`.
pub fn scaled_residual(p: &UniPolyC, r: Complex64) -> f64 {
    let d = p.degree() as i32;
    p.eval(r).norm() / ((1.0 + r.norm()).powi(d) * p.max_abs_coeff())
}

/// Deterministic start: points on a circle around the root centroid, with a
/// radius bounding all roots and an angular offset that avoids symmetry.
fn circular_start(c: &[Complex64]) -> Vec<Complex64> {
    let d = c.len() - 1;
    let lc = c[d];
    let center = -c[d - 1] / (lc * d as f64);
    let radius = (0..d)
        .map(|i| (c[i] / lc).norm().powf(1.0 / (d - i) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    (0..d)
        .map(|k| center + Complex64::from_polar(radius, TAU * k as f64 / d as f64 + 0.4))
        .collect()
}

/// All roots of `p`, with multiplicity.
pub fn all_roots(p: &UniPolyC) -> Result<Vec<Complex64>> {
    if p.degree() == 0 {
        return Err(Error::usage("root finding needs degree at least 1"));
    }
    aberth(p, circular_start(p.coeffs()))
}

/// All roots of `p`, starting the iteration from `init` (one point per root).
/// Falls back to the circular start when `init` has the wrong length.
pub fn all_roots_from(p: &UniPolyC, init: &[Complex64]) -> Result<Vec<Complex64>> {
    if p.degree() == 0 {
        return Err(Error::usage("root finding needs degree at least 1"));
    }
    if init.len() != p.degree() || init.iter().any(|z| !z.is_finite()) {
        return all_roots(p);
    }
    let mut z = init.to_vec();
    // Coincident starting points make the Aberth correction singular.
    for i in 1..z.len() {
        for j in 0..i {
            if z[i] == z[j] {
                let bump = Complex64::new(1e-7, 1e-7) * (1.0 + z[i].norm());
                z[i] += bump;
            }
        }
    }
    aberth(p, z)
}

fn aberth(p: &UniPolyC, mut z: Vec<Complex64>) -> Result<Vec<Complex64>> {
    let c = p.coeffs();
    let d = z.len();
    if d == 1 {
        return Ok(vec![-c[0] / c[1]]);
    }
    let mut done = vec![false; d];
    for _ in 0..MAX_ITER {
        let mut all_done = true;
        for i in 0..d {
            if done[i] {
                continue;
            }
            let (pv, dpv, bound) = eval_with_derivative(c, z[i]);
            // The value is rounding noise: further steps cannot improve `z[i]`.
            let stalled = pv.norm() <= 4.0 * d as f64 * f64::EPSILON * bound;
            let ratio = pv / dpv;
            let s: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !w.is_finite() {
                continue;
            }
            z[i] -= w;
            if stalled || w.norm() <= 4.0 * f64::EPSILON * (1.0 + z[i].norm()) {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    // Multiple roots converge only linearly; accept them by residual.
    let worst = z
        .iter()
        .map(|&r| scaled_residual(p, r))
        .fold(0.0, f64::max);
    if !(worst <= RESIDUAL_TOL) {
        return Err(Error::numerical(format!(
            "root finder did not converge (worst scaled residual {worst:.3e})"
        )));
    }
    Ok(z)
}
