//! The Euclidean angle `α₀`: a real root of the discriminant at which a
//! complex-conjugate pair of distance roots collides into a real double root.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive};

use super::{all_roots, require_hyperbolic, Rescaled};
use crate::error::{Error, Result};
use crate::exactpoly::{discriminant, UniPolyQ};
use crate::twistgen::pdist_recursive;

/// Offset on either side of a candidate for the collision test.
pub const COLLISION_EPS: f64 = 1e-4;
/// Grid resolution of the sign scan: `B = k / 2^SCAN_BITS`.
const SCAN_BITS: u32 = 13;
/// Bisection steps after a sign change is bracketed.
const BISECT_STEPS: u32 = 44;

/// Discriminant of `P_2n` over `V`, as a polynomial in `B`.
pub fn distance_discriminant(n: i64) -> Result<UniPolyQ> {
    discriminant(&pdist_recursive(n).poly, "V")
}

/// Discriminant of the rescaled polynomial `Q(x, w)` over `x`, as a
/// polynomial in `w = B^2 - 1`. It differs from the distance discriminant by a
/// power of `w` and a constant, so the two share their zeros for `B != ±1`.
pub fn rescaled_discriminant(n: i64) -> Result<Arc<UniPolyQ>> {
    static MEMO: OnceLock<RwLock<HashMap<i64, Arc<UniPolyQ>>>> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(d) = memo.read().expect("memo lock").get(&n) {
        return Ok(d.clone());
    }
    let d = Arc::new(discriminant(&Rescaled::get(n)?.poly, "x")?);
    memo.write().expect("memo lock").insert(n, d.clone());
    Ok(d)
}

/// One sign change of the discriminant in `B ∈ (0, 1/2]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub alpha: f64,
    pub b: f64,
    /// A conjugate pair below `alpha` becomes two real roots above it.
    pub passes: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Alpha0 {
    pub n: i64,
    pub alpha0: f64,
    pub b0: f64,
    /// The real double root in the rescaled variable `x`.
    pub x_double: f64,
    /// All roots of `Q(·, w₀)`, for warm-starting the branch tracker.
    pub roots: Vec<Complex64>,
    pub candidates: Vec<Candidate>,
}

/// Sign of the discriminant at `B = num / 2^bits`.
fn sign_at_b(disc: &UniPolyQ, num: &BigInt, bits: u32) -> Ordering {
    let den = BigInt::one() << (2 * bits);
    disc.sign_at(&(num * num - &den), &den)
}

fn b_to_f64(num: &BigInt, bits: u32) -> f64 {
    num.to_f64().unwrap_or(f64::NAN) / 2f64.powi(bits as i32)
}

/// Refine a bracket `[lo, lo+1] / 2^bits` with a sign change to a narrow
/// dyadic interval and return its midpoint.
fn bisect(disc: &UniPolyQ, lo: i64, s_lo: Ordering) -> f64 {
    let mut bits = SCAN_BITS;
    let mut lo = BigInt::from(lo);
    for _ in 0..BISECT_STEPS {
        lo <<= 1;
        bits += 1;
        let mid = &lo + 1;
        match sign_at_b(disc, &mid, bits) {
            Ordering::Equal => return b_to_f64(&mid, bits),
            s if s == s_lo => lo = mid,
            _ => {}
        }
    }
    b_to_f64(&(2 * lo + 1), bits + 1)
}

/// Sign changes (and exact zeros) of the discriminant on `B ∈ (0, 1/2]`.
fn discriminant_roots(disc: &UniPolyQ) -> Vec<f64> {
    let top = 1i64 << (SCAN_BITS - 1);
    let mut out = Vec::new();
    let mut prev = sign_at_b(disc, &BigInt::from(1), SCAN_BITS);
    if prev == Ordering::Equal {
        out.push(b_to_f64(&BigInt::from(1), SCAN_BITS));
    }
    for k in 2..=top {
        let s = sign_at_b(disc, &BigInt::from(k), SCAN_BITS);
        if s == Ordering::Equal {
            out.push(b_to_f64(&BigInt::from(k), SCAN_BITS));
        } else if prev != Ordering::Equal && s != prev {
            out.push(bisect(disc, k - 1, prev));
        }
        prev = s;
    }
    out
}

/// The two roots closest to `target`, nearest first.
pub(crate) fn nearest_two(roots: &[Complex64], target: Complex64) -> [Complex64; 2] {
    let mut r = roots.to_vec();
    r.sort_by(|a, b| (a - target).norm().total_cmp(&(b - target).norm()));
    [r[0], r[1]]
}

/// Midpoint of the closest pair of roots.
pub(crate) fn closest_pair_midpoint(roots: &[Complex64]) -> Complex64 {
    let mut best = (f64::INFINITY, Complex64::new(0.0, 0.0));
    for i in 0..roots.len() {
        for j in 0..i {
            let d = (roots[i] - roots[j]).norm();
            if d < best.0 {
                best = (d, (roots[i] + roots[j]) / 2.0);
            }
        }
    }
    best.1
}

fn collision_test(q: &Rescaled, alpha: f64) -> Result<bool> {
    let at = all_roots(&q.at(alpha))?;
    let xd = closest_pair_midpoint(&at);
    let scale = 1.0 + xd.norm();
    if xd.im.abs() > 1e-6 * scale {
        return Ok(false);
    }
    let tol = 1e-9 * scale;
    let below = nearest_two(&all_roots(&q.at(alpha - COLLISION_EPS))?, xd);
    let above_alpha = (alpha + COLLISION_EPS).min(std::f64::consts::PI);
    let above = nearest_two(&all_roots(&q.at(above_alpha))?, xd);
    let conjugate_below = below.iter().all(|z| z.im.abs() > tol)
        && (below[0] - below[1].conj()).norm() < 1e-6 * scale;
    let real_above = above.iter().all(|z| z.im.abs() <= tol);
    Ok(conjugate_below && real_above)
}

/// Locate `α₀` for `T_2n`. Memoized per `n`.
///
/// Every sign change of the discriminant in `B ∈ (0, 1/2]` is a candidate;
/// the largest candidate angle that passes the collision test is returned.
pub fn find_alpha0(n: i64) -> Result<Arc<Alpha0>> {
    static MEMO: OnceLock<RwLock<HashMap<i64, Arc<Alpha0>>>> = OnceLock::new();
    require_hyperbolic(n)?;
    let memo = MEMO.get_or_init(Default::default);
    if let Some(a) = memo.read().expect("memo lock").get(&n) {
        return Ok(a.clone());
    }
    let disc = rescaled_discriminant(n)?;
    let q = Rescaled::get(n)?;
    let mut candidates = Vec::new();
    for b in discriminant_roots(&disc) {
        let alpha = 2.0 * b.acos();
        candidates.push(Candidate {
            alpha,
            b,
            passes: collision_test(&q, alpha)?,
        });
    }
    let best = candidates
        .iter()
        .filter(|c| c.passes)
        .max_by(|a, b| a.alpha.total_cmp(&b.alpha))
        .ok_or_else(|| {
            Error::Geometry(format!(
                "no discriminant root of P_{} passes the collision test",
                2 * n
            ))
        })?;
    let roots = all_roots(&q.at(best.alpha))?;
    let x_double = closest_pair_midpoint(&roots).re;
    let a = Arc::new(Alpha0 {
        n,
        alpha0: best.alpha,
        b0: best.b,
        x_double,
        roots,
        candidates,
    });
    memo.write().expect("memo lock").insert(n, a.clone());
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_eight_at_one_half() {
        // P_2: the Euclidean point of the figure-eight knot is B = 1/2.
        let d = distance_discriminant(1).unwrap();
        assert_eq!(d.sign_at(&BigInt::from(1), &BigInt::from(2)), Ordering::Equal);
        let w = rescaled_discriminant(1).unwrap();
        assert_eq!(
            w.sign_at(&BigInt::from(-3), &BigInt::from(4)),
            Ordering::Equal
        );
    }

    #[test]
    fn alpha0_small_knots() {
        let a = find_alpha0(2).unwrap();
        assert!((a.alpha0 - 2.57414).abs() < 1e-4, "{a:?}");
        let a = find_alpha0(-2).unwrap();
        assert!((a.alpha0 - 2.40717).abs() < 1e-4, "{a:?}");
        assert!(matches!(find_alpha0(-1), Err(Error::Usage(_))));
    }
}
