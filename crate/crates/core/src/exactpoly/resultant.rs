//! Resultants and discriminants of bivariate polynomials.
//!
//! The resultant with respect to one variable is a polynomial in the other.
//! It is computed by evaluation and interpolation modulo a set of word-sized
//! primes, one Sylvester determinant per evaluation point, and lifted back to
//! the integers by Chinese remaindering. The number of primes comes from the
//! bound `|res| <= |p|_1^deg(q) * |q|_1^deg(p)` on every coefficient, so the
//! lift is exact, not heuristic.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::bipoly::BiPoly;
use super::unipoly::UniPolyQ;
use crate::error::{Error, Result};

/// Resultant of `p` and `q` with respect to `eliminate`, as an exact
/// polynomial in the remaining variable.
///
/// Uses the Sylvester matrix with the rows of `p` (coefficients from the top
/// degree down) above the rows of `q`. Formal degrees are used throughout, so
/// the value is the determinant of the generic Sylvester matrix specialized at
/// each point of the other variable.
pub fn resultant(p: &BiPoly, q: &BiPoly, eliminate: &str) -> Result<UniPolyQ> {
    if p.vars() != q.vars() {
        return Err(Error::usage(format!(
            "resultant of polynomials in {} and {}",
            p.vars(),
            q.vars()
        )));
    }
    let idx = p.vars().index_of(eliminate)?;
    let other = p.vars().name(1 - idx).to_string();
    if p.is_zero() && q.is_zero() {
        return Err(Error::usage("resultant of two zero polynomials"));
    }
    if !p.is_polynomial() || !q.is_polynomial() {
        return Err(Error::usage("resultant requires nonnegative exponents"));
    }
    if p.is_zero() || q.is_zero() {
        return Ok(UniPolyQ::zero(&other));
    }
    let pc = p.dense_coefficients(idx);
    let qc = q.dense_coefficients(idx);
    let dp = pc.len() - 1;
    let dq = qc.len() - 1;
    if dp + dq == 0 {
        return Ok(UniPolyQ::from_ints(&other, [1]));
    }
    let ey_p = p.degree(1 - idx) as usize;
    let ey_q = q.degree(1 - idx) as usize;
    let sylvester_bound = dq * ey_p + dp * ey_q;
    let bezout_bound = (p.total_degree() * q.total_degree()) as usize;
    let deg_bound = sylvester_bound.min(bezout_bound);

    let coeff_bound = p.l1_norm().magnitude().pow(dq as u32) * q.l1_norm().magnitude().pow(dp as u32);
    let needed_bits = coeff_bound.bits() + 2;
    let primes = primes_for_bits(needed_bits, deg_bound as u64 + 1);

    let images: Vec<(u64, Vec<u64>)> = primes
        .par_iter()
        .map(|&m| (m, resultant_mod(&pc, &qc, deg_bound, m)))
        .collect();

    let coeffs = crt_lift(&images, deg_bound + 1);
    Ok(UniPolyQ::new(
        &other,
        coeffs.into_iter().map(BigRational::from_integer).collect(),
    ))
}

/// Discriminant of `p` with respect to `var`, normalized as
/// `resultant(p, dp/dvar, var) / lc(p)`.
///
/// No `(-1)^(d(d-1)/2)` sign factor is applied: `disc(V^2 - B) = -4B`.
/// Only the zero set is used downstream. A polynomial of degree one has
/// discriminant 1.
pub fn discriminant(p: &BiPoly, var: &str) -> Result<UniPolyQ> {
    let idx = p.vars().index_of(var)?;
    let d = p.degree(idx);
    if p.is_zero() || d < 1 {
        return Err(Error::usage(format!(
            "discriminant needs positive degree in {var}"
        )));
    }
    let other = p.vars().name(1 - idx).to_string();
    let dp = p.derivative(idx);
    let res = resultant(p, &dp, var)?;
    let lc = &p.dense_coefficients(idx)[d as usize];
    let lc = UniPolyQ::from_ints(&other, lc.iter().cloned());
    res.div_exact(&lc).ok_or_else(|| {
        Error::IdentityMismatch("leading coefficient does not divide the resultant".into())
    })
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // Deterministic for n < 3.4e14.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a * b) % m
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, m: u64) -> u64 {
    pow_mod(a, m - 2, m)
}

/// Primes below 2^31 (so products fit in u64) whose product exceeds 2^bits.
fn primes_for_bits(bits: u64, min_size: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut have = 0u64;
    let mut cand = (1u64 << 31) - 1;
    while have <= bits {
        if is_prime(cand) {
            assert!(cand > min_size, "evaluation grid larger than prime modulus");
            out.push(cand);
            have += 30;
        }
        cand -= 2;
    }
    out
}

fn reduce(c: &BigInt, m: u64) -> u64 {
    let r = c % BigInt::from(m);
    let r = if r < BigInt::zero() { r + BigInt::from(m) } else { r };
    r.to_u64().expect("reduced residue fits")
}

fn eval_mod(coeffs: &[u64], y: u64, m: u64) -> u64 {
    coeffs
        .iter()
        .rev()
        .fold(0u64, |acc, &c| (mul_mod(acc, y, m) + c) % m)
}

fn det_mod(mut a: Vec<Vec<u64>>, m: u64) -> u64 {
    let n = a.len();
    let mut det = 1u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[r][col] != 0) else {
            return 0;
        };
        if piv != col {
            a.swap(piv, col);
            det = (m - det) % m;
        }
        let pv = a[col][col];
        det = mul_mod(det, pv, m);
        let inv = inv_mod(pv, m);
        for r in col + 1..n {
            let f = mul_mod(a[r][col], inv, m);
            if f == 0 {
                continue;
            }
            for c in col..n {
                let sub = mul_mod(f, a[col][c], m);
                a[r][c] = (a[r][c] + m - sub) % m;
            }
        }
    }
    det
}

/// Coefficients (mod m) of the resultant, degree at most `deg_bound`.
fn resultant_mod(pc: &[Vec<BigInt>], qc: &[Vec<BigInt>], deg_bound: usize, m: u64) -> Vec<u64> {
    let pm: Vec<Vec<u64>> = pc.iter().map(|row| row.iter().map(|c| reduce(c, m)).collect()).collect();
    let qm: Vec<Vec<u64>> = qc.iter().map(|row| row.iter().map(|c| reduce(c, m)).collect()).collect();
    let dp = pm.len() - 1;
    let dq = qm.len() - 1;
    let n = dp + dq;
    let xs: Vec<u64> = (0..=deg_bound as u64).collect();
    let ys: Vec<u64> = xs
        .iter()
        .map(|&y| {
            let pv: Vec<u64> = pm.iter().map(|c| eval_mod(c, y, m)).collect();
            let qv: Vec<u64> = qm.iter().map(|c| eval_mod(c, y, m)).collect();
            let mut mat = vec![vec![0u64; n]; n];
            for r in 0..dq {
                for k in 0..=dp {
                    mat[r][r + k] = pv[dp - k];
                }
            }
            for r in 0..dp {
                for k in 0..=dq {
                    mat[dq + r][r + k] = qv[dq - k];
                }
            }
            det_mod(mat, m)
        })
        .collect();
    interpolate_mod(&xs, &ys, m)
}

/// Monomial coefficients of the interpolating polynomial through `(xs, ys)`.
fn interpolate_mod(xs: &[u64], ys: &[u64], m: u64) -> Vec<u64> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = (dd[i] + m - dd[i - 1]) % m;
            let den = (xs[i] + m - xs[i - j]) % m;
            dd[i] = mul_mod(num, inv_mod(den, m), m);
        }
    }
    // Expand the Newton form from the innermost factor outwards.
    let mut coeffs = vec![0u64; n];
    for i in (0..n).rev() {
        // coeffs = coeffs * (x - xs[i]) + dd[i]
        let mut next = vec![0u64; n];
        for k in 0..n {
            if coeffs[k] == 0 {
                continue;
            }
            if k + 1 < n {
                next[k + 1] = (next[k + 1] + coeffs[k]) % m;
            }
            let sub = mul_mod(coeffs[k], xs[i] % m, m);
            next[k] = (next[k] + m - sub) % m;
        }
        next[0] = (next[0] + dd[i]) % m;
        coeffs = next;
    }
    coeffs
}

/// Combine residues coefficient-wise and return symmetric representatives.
fn crt_lift(images: &[(u64, Vec<u64>)], len: usize) -> Vec<BigInt> {
    let mut modulus = BigUint::one();
    let mut acc = vec![BigUint::zero(); len];
    for (m, res) in images {
        let mb = BigUint::from(*m);
        let m_inv = inv_mod((&modulus % &mb).to_u64().expect("fits"), *m);
        for (a, &r) in acc.iter_mut().zip(res) {
            let cur = (&*a % &mb).to_u64().expect("fits");
            let delta = mul_mod((r + m - cur) % m, m_inv, *m);
            *a += &modulus * BigUint::from(delta);
        }
        modulus *= mb;
    }
    let half = &modulus >> 1;
    acc.into_iter()
        .map(|a| {
            if a > half {
                BigInt::from(a) - BigInt::from(modulus.clone())
            } else {
                BigInt::from(a)
            }
        })
        .collect()
}
