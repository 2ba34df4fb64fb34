//! Distance polynomials `P_2n(V, B)` and A-polynomials `A_2n(L, M)` of twist
//! knots, by recursion, by closed-form binomial sums, and (for `A`) by the
//! change of variables from `P`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{normalize_unit, substitute, BiPoly, RatFn, RationalSubst, Vars};

/// Map a crossing count `m` to the even index used throughout: twist knots
/// with an odd number of half-twists are the mirror images `T_{-m-1}`.
pub fn normalize_twist_param(m: i64) -> i64 {
    if m.rem_euclid(2) == 0 {
        m
    } else {
        -m - 1
    }
}

/// The twist knot `T_2n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistKnot {
    pub n: i64,
}

impl TwistKnot {
    pub fn new(n: i64) -> Self {
        TwistKnot { n }
    }

    /// Knot with `m` horizontal crossings, after mirror normalization.
    pub fn from_crossings(m: i64) -> Self {
        TwistKnot {
            n: normalize_twist_param(m) / 2,
        }
    }

    /// `n = 0` is the unknot and `n = -1` the trefoil.
    pub fn is_hyperbolic(&self) -> bool {
        self.n != 0 && self.n != -1
    }

    pub fn require_hyperbolic(&self) -> Result<()> {
        if self.is_hyperbolic() {
            Ok(())
        } else {
            Err(Error::usage(format!(
                "T_{} is not hyperbolic (n must not be 0 or -1)",
                2 * self.n
            )))
        }
    }

    /// Two-bridge slope `2/(4n+1)`.
    pub fn slope(&self) -> Ratio<i64> {
        Ratio::new(2, 4 * self.n + 1)
    }

    /// Degree of `P_2n` in `V`.
    pub fn distance_degree(&self) -> usize {
        match self.n {
            n if n > 0 => (2 * n) as usize,
            n if n < 0 => (-2 * n - 1) as usize,
            _ => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PDist {
    pub n: i64,
    pub poly: BiPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct APoly {
    pub n: i64,
    pub poly: BiPoly,
    /// Whether `poly` is already in unit-normalized form rather than as printed.
    pub unit_normalized: bool,
}

impl APoly {
    /// Unit-normalized polynomial and whether a sign flip was needed.
    pub fn normalized(&self) -> (BiPoly, bool) {
        let r = normalize_unit(&self.poly);
        (r.poly, r.sign_flipped)
    }
}

fn vb(terms: &[(u32, u32, i64)]) -> BiPoly {
    BiPoly::from_terms(Vars::vb(), terms.iter().copied())
}

fn lm(terms: &[(u32, u32, i64)]) -> BiPoly {
    BiPoly::from_terms(Vars::lm(), terms.iter().copied())
}

fn pdist_initial(n: i64) -> Option<BiPoly> {
    Some(match n {
        -1 => vb(&[(1, 2, 2), (1, 0, -2), (0, 2, 2), (0, 0, -1)]),
        0 => vb(&[(0, 0, 1)]),
        1 => vb(&[
            (2, 4, 4),
            (2, 2, -8),
            (2, 0, 4),
            (1, 0, 2),
            (1, 2, -2),
            (0, 4, -4),
            (0, 2, 6),
            (0, 0, -1),
        ]),
        _ => return None,
    })
}

/// `(4B^4 - 8B^2 + 4)V^2 - 4B^4 + 8B^2 - 2`.
pub fn pdist_multiplier() -> BiPoly {
    vb(&[
        (2, 4, 4),
        (2, 2, -8),
        (2, 0, 4),
        (0, 4, -4),
        (0, 2, 8),
        (0, 0, -2),
    ])
}

fn apoly_initial(n: i64) -> Option<BiPoly> {
    Some(match n {
        -2 => lm(&[
            (0, 0, 1),
            (1, 0, -1),
            (1, 2, 2),
            (1, 4, 2),
            (2, 4, 1),
            (2, 6, -1),
            (1, 8, -1),
            (1, 10, 1),
            (2, 10, 2),
            (2, 12, 2),
            (2, 14, -1),
            (3, 14, 1),
        ]),
        -1 => lm(&[(0, 0, 1), (1, 6, 1)]),
        0 => lm(&[(0, 0, -1)]),
        1 => lm(&[
            (1, 0, 1),
            (1, 2, -1),
            (0, 4, -1),
            (1, 4, -2),
            (2, 4, -1),
            (1, 6, -1),
            (1, 8, 1),
        ]),
        _ => return None,
    })
}

/// `A_u = 1 - L + 2LM^2 + M^4 + 2LM^4 + L^2M^4 + 2LM^6 - LM^8 + L^2M^8`.
pub fn apoly_multiplier() -> BiPoly {
    lm(&[
        (0, 0, 1),
        (1, 0, -1),
        (1, 2, 2),
        (0, 4, 1),
        (1, 4, 2),
        (2, 4, 1),
        (1, 6, 2),
        (1, 8, -1),
        (2, 8, 1),
    ])
}

/// `M^4 (1 + LM^2)^4`.
fn apoly_lag_factor() -> BiPoly {
    &lm(&[(0, 4, 1)]) * &lm(&[(0, 0, 1), (1, 2, 1)]).pow(4)
}

type Memo = RwLock<HashMap<i64, Arc<BiPoly>>>;

/// Three-term recurrence `X_j = mult * X_{j-s} - lag * X_{j-2s}` walking away
/// from the initial conditions in the direction of `n`, memoized per family.
fn recurse(
    memo: &Memo,
    n: i64,
    initial: fn(i64) -> Option<BiPoly>,
    mult: &BiPoly,
    lag: &BiPoly,
) -> Arc<BiPoly> {
    if let Some(p) = memo.read().expect("memo lock").get(&n) {
        return p.clone();
    }
    if let Some(p) = initial(n) {
        return Arc::new(p);
    }
    let step = n.signum();
    // Walk back to the two nearest initial conditions.
    let mut j = n;
    while initial(j - step).is_none() || initial(j - 2 * step).is_none() {
        j -= step;
    }
    let get = |k: i64| -> Arc<BiPoly> {
        memo.read()
            .expect("memo lock")
            .get(&k)
            .cloned()
            .or_else(|| initial(k).map(Arc::new))
            .expect("previous term available")
    };
    let mut far = get(j - 2 * step);
    let mut near = get(j - step);
    loop {
        let cur = match memo.read().expect("memo lock").get(&j) {
            Some(p) => p.clone(),
            None => Arc::new(&(mult * &near) - &(lag * &far)),
        };
        memo.write()
            .expect("memo lock")
            .entry(j)
            .or_insert_with(|| cur.clone());
        if j == n {
            return cur;
        }
        far = near;
        near = cur;
        j += step;
    }
}

/// `P_2n(V, B)` from the initial conditions and the two-sided recursion.
pub fn pdist_recursive(n: i64) -> PDist {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    let poly = recurse(
        memo,
        n,
        pdist_initial,
        &pdist_multiplier(),
        &BiPoly::one(Vars::vb()),
    );
    PDist {
        n,
        poly: (*poly).clone(),
    }
}

/// `A_2n(L, M)` from the initial conditions and the two-sided recursion.
pub fn apoly_recursive(n: i64) -> APoly {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    let poly = recurse(
        memo,
        n,
        apoly_initial,
        &apoly_multiplier(),
        &apoly_lag_factor(),
    );
    APoly {
        n,
        poly: (*poly).clone(),
        unit_normalized: false,
    }
}

fn ratfn(num: BiPoly, den: BiPoly) -> RatFn {
    RatFn::new(num, den).expect("nonzero denominator")
}

fn floor_half(i: i64) -> i64 {
    i.div_euclid(2)
}

/// Upper index and binomial top of the closed-form sums:
/// `sum_{i=0}^{top} C(a(i), i) ...`.
fn sum_shape(n: i64) -> (i64, impl Fn(i64) -> i64) {
    let top = if n >= 0 { 2 * n } else { -2 * n - 1 };
    (top, move |i| {
        if n >= 0 {
            n + floor_half(i)
        } else {
            -n + floor_half(i - 1)
        }
    })
}

fn binom(a: i64, i: i64) -> BigInt {
    if a < 0 || i > a {
        BigInt::from(0)
    } else {
        binomial(BigInt::from(a), BigInt::from(i))
    }
}

/// `P_2n(V, B)` from the closed-form binomial sum, evaluated with rational
/// functions in `V - 1` and checked to be a polynomial.
pub fn pdist_explicit(n: i64) -> Result<PDist> {
    let v = Vars::vb();
    let (top, a) = sum_shape(n);
    // 2(B^2-1)(1-V) for n >= 0, 2(B^2-1)(V-1) for n < 0
    let s = if n >= 0 { 1 } else { -1 };
    let base = &vb(&[(0, 2, 2), (0, 0, -2)]) * &vb(&[(0, 0, s), (1, 0, -s)]);
    // 1 + 2/(V-1) = (V+1)/(V-1)
    let ratio = ratfn(vb(&[(1, 0, 1), (0, 0, 1)]), vb(&[(1, 0, 1), (0, 0, -1)]));
    let mut sum = RatFn::zero(v.clone());
    for i in 0..=top {
        let c = binom(a(i), i);
        if c == BigInt::from(0) {
            continue;
        }
        let term = &RatFn::from_poly(base.pow(i as u32).scale(&c)) * &ratio.powi(floor_half(1 + i))?;
        sum = &sum + &term;
    }
    let poly = sum.into_poly()?;
    Ok(PDist { n, poly })
}

/// `A_2n(L, M)` from the closed-form binomial sum, evaluated with Laurent
/// rational functions and checked to cancel to a polynomial.
pub fn apoly_explicit(n: i64) -> Result<APoly> {
    let v = Vars::lm();
    let (top, a) = sum_shape(n);
    let s = if n >= 0 { 1 } else { -1 };
    let one_m2 = lm(&[(0, 0, s), (0, 2, -s)]); // ±(1 - M^2)
    let one_lm2 = lm(&[(0, 0, 1), (1, 2, 1)]); // 1 + LM^2
    let l_1 = lm(&[(1, 0, 1), (0, 0, -1)]); // L - 1
    // LM^2 - M^-2
    let tail = &lm(&[(1, 2, 1)]) - &BiPoly::laurent_monomial(v.clone(), 0, -2, 1);
    let mut sum = RatFn::zero(v.clone());
    for i in 0..=top {
        let c = binom(a(i), i);
        if c == BigInt::from(0) {
            continue;
        }
        let num = &(&one_m2.pow(i as u32) * &l_1.pow(floor_half(i) as u32))
            * &tail.pow(floor_half(1 + i) as u32);
        let term = ratfn(num.scale(&c), one_lm2.pow(i as u32));
        sum = &sum + &term;
    }
    // -M^{2n}(1+LM^2)^{2n} for n >= 0, M^{-2n}(1+LM^2)^{-2n-1} for n < 0
    let pre = if n >= 0 {
        &lm(&[(0, 2 * n as u32, -1)]) * &one_lm2.pow(2 * n as u32)
    } else {
        &lm(&[(0, (-2 * n) as u32, 1)]) * &one_lm2.pow((-2 * n - 1) as u32)
    };
    let laurent = (&RatFn::from_poly(pre) * &sum).into_laurent()?;
    let poly = laurent.shift(-laurent.min_exponent(0), -laurent.min_exponent(1));
    Ok(APoly {
        n,
        poly,
        unit_normalized: false,
    })
}

/// `A_2n(L, M)` obtained by substituting the eigenvalue parametrization of
/// `V` and `B` into `P_2n`, clearing denominators and unit-normalizing.
pub fn apoly_from_pdist(n: i64) -> Result<(APoly, bool)> {
    let r = substitute(
        &pdist_recursive(n).poly,
        &RationalSubst::distance_to_eigenvalues(),
    )?;
    Ok((
        APoly {
            n,
            poly: r.poly,
            unit_normalized: true,
        },
        r.sign_flipped,
    ))
}

/// Check that the recursive and closed-form distance polynomials coincide.
pub fn cross_check_pdist(n: i64) -> Result<PDist> {
    let rec = pdist_recursive(n);
    let exp = pdist_explicit(n)?;
    if rec.poly != exp.poly {
        return Err(Error::IdentityMismatch(format!(
            "P_{}: recursive and explicit forms differ",
            2 * n
        )));
    }
    Ok(rec)
}

/// Check that all three A-polynomial generators agree after unit normalization.
pub fn cross_check_apoly(n: i64) -> Result<APoly> {
    let rec = apoly_recursive(n);
    let (target, _) = rec.normalized();
    let (exp, _) = apoly_explicit(n)?.normalized();
    if exp != target {
        return Err(Error::IdentityMismatch(format!(
            "A_{}: recursive and explicit forms differ",
            2 * n
        )));
    }
    let (sub, _) = apoly_from_pdist(n)?;
    if sub.poly != target {
        return Err(Error::IdentityMismatch(format!(
            "A_{}: recursive form and substituted distance polynomial differ",
            2 * n
        )));
    }
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twist_param() {
        assert_eq!(normalize_twist_param(2), 2);
        assert_eq!(normalize_twist_param(3), -4);
        assert_eq!(normalize_twist_param(-5), 4);
        assert_eq!(TwistKnot::from_crossings(3).n, -2);
        assert!(!TwistKnot::new(-1).is_hyperbolic());
    }

    #[test]
    fn recursion_extends_initial_conditions() {
        // P_4 = m P_2 - P_0 and P_{-4} = m P_{-2} - P_0
        let m = pdist_multiplier();
        let one = BiPoly::one(Vars::vb());
        assert_eq!(pdist_recursive(2).poly, &(&m * &pdist_initial(1).unwrap()) - &one);
        assert_eq!(pdist_recursive(-2).poly, &(&m * &pdist_initial(-1).unwrap()) - &one);
        // A_{-6} = A_u A_{-4} - M^4(1+LM^2)^4 A_{-2}
        let expect = &(&apoly_multiplier() * &apoly_initial(-2).unwrap())
            - &(&apoly_lag_factor() * &apoly_initial(-1).unwrap());
        assert_eq!(apoly_recursive(-3).poly, expect);
    }

    #[test]
    fn explicit_matches_recursive_small() {
        for n in -3..=3 {
            assert_eq!(pdist_explicit(n).unwrap().poly, pdist_recursive(n).poly, "P n={n}");
            assert_eq!(apoly_explicit(n).unwrap().poly, apoly_recursive(n).poly, "A n={n}");
        }
    }

    #[test]
    fn substitution_reproduces_initial_conditions() {
        let (a, flipped) = apoly_from_pdist(-1).unwrap();
        assert_eq!(a.poly, lm(&[(0, 0, 1), (1, 6, 1)]));
        assert!(!flipped);
        let (a, _) = apoly_from_pdist(1).unwrap();
        assert_eq!(a.poly, apoly_recursive(1).normalized().0);
    }

    #[test]
    fn distance_degree() {
        for n in -6..=6 {
            let p = pdist_recursive(n);
            assert_eq!(p.poly.degree(0) as usize, TwistKnot::new(n).distance_degree());
        }
    }
}
