use num_traits::{One, Signed};

use super::bipoly::{BiPoly, Vars};
use crate::error::{Error, Result};

/// Image of one source variable: `numerator / product(denominator factors)`.
#[derive(Clone, Debug)]
pub struct VarImage {
    pub numerator: BiPoly,
    pub denominator: Vec<BiPoly>,
}

/// Rational substitution for both variables of a source polynomial.
///
/// Denominators are kept as factor lists so that factors shared with the
/// cleared numerator can be divided back out one at a time.
#[derive(Clone, Debug)]
pub struct RationalSubst {
    target: Vars,
    images: [VarImage; 2],
}

impl RationalSubst {
    pub fn new(target: Vars, first: VarImage, second: VarImage) -> Result<Self> {
        for img in [&first, &second] {
            if img.numerator.vars() != &target
                || img.denominator.iter().any(|d| d.vars() != &target)
            {
                return Err(Error::usage("substitution images must use the target variables"));
            }
            if img.denominator.iter().any(|d| d.is_zero()) {
                return Err(Error::usage("substitution denominator is identically zero"));
            }
        }
        Ok(RationalSubst {
            target,
            images: [first, second],
        })
    }

    /// The change of variables from `(V, B)` to `(L, M)`:
    /// `V = (M^2+1)(LM^2-1) / ((M^2-1)(LM^2+1))`, `B = (M + M^-1)/2`.
    pub fn distance_to_eigenvalues() -> Self {
        let lm = Vars::lm();
        let p = |terms: &[(u32, u32, i64)]| {
            BiPoly::from_terms(lm.clone(), terms.iter().map(|&(i, j, c)| (i, j, c)))
        };
        let v = VarImage {
            numerator: &p(&[(0, 2, 1), (0, 0, 1)]) * &p(&[(1, 2, 1), (0, 0, -1)]),
            denominator: vec![p(&[(0, 2, 1), (0, 0, -1)]), p(&[(1, 2, 1), (0, 0, 1)])],
        };
        let b = VarImage {
            numerator: p(&[(0, 2, 1), (0, 0, 1)]),
            denominator: vec![p(&[(0, 0, 2)]), p(&[(0, 1, 1)])],
        };
        RationalSubst::new(lm, v, b).expect("well-formed substitution")
    }

    pub fn target(&self) -> &Vars {
        &self.target
    }
}

/// Result of [`substitute`] and [`normalize_unit`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub poly: BiPoly,
    /// True when the sign was flipped to make the lexicographically least term positive.
    pub sign_flipped: bool,
}

/// Divide out the monomial gcd and the integer content, then make the
/// coefficient of the lexicographically least exponent positive.
pub fn normalize_unit(p: &BiPoly) -> Normalized {
    if p.is_zero() {
        return Normalized {
            poly: p.clone(),
            sign_flipped: false,
        };
    }
    let shifted = p.shift(-p.min_exponent(0), -p.min_exponent(1));
    let content = shifted.content();
    let flip = shifted.lex_least_coeff().is_some_and(|c| c.is_negative());
    let divisor = if flip { -content } else { content };
    let terms = shifted
        .term_map()
        .iter()
        .map(|(e, c)| (*e, c / &divisor))
        .collect();
    Normalized {
        poly: BiPoly::from_map(p.vars().clone(), terms),
        sign_flipped: flip,
    }
}

/// Substitute rational functions for both variables of `p`, clear
/// denominators, and return the unit-normalized numerator.
///
/// Each denominator factor is first raised to the power needed to clear it
/// and then divided back out while it still divides exactly, never more times
/// than it was multiplied in, so the result is the numerator of the reduced
/// rational function up to a monomial and an integer unit.
pub fn substitute(p: &BiPoly, s: &RationalSubst) -> Result<Normalized> {
    if !p.is_polynomial() {
        return Err(Error::usage("substitute requires nonnegative exponents"));
    }
    let target = s.target.clone();
    if p.is_zero() {
        return Ok(normalize_unit(&BiPoly::zero(target)));
    }
    let d0 = p.degree(0) as u32;
    let d1 = p.degree(1) as u32;
    let [img0, img1] = &s.images;
    let den0 = img0
        .denominator
        .iter()
        .fold(BiPoly::one(target.clone()), |acc, f| &acc * f);
    let den1 = img1
        .denominator
        .iter()
        .fold(BiPoly::one(target.clone()), |acc, f| &acc * f);

    // x^i y^j  ->  N0^i D0^(d0-i) N1^j D1^(d1-j), grouped by i.
    let powers = |num: &BiPoly, den: &BiPoly, d: u32| -> Vec<BiPoly> {
        (0..=d).map(|k| &num.pow(k) * &den.pow(d - k)).collect()
    };
    let part0 = powers(&img0.numerator, &den0, d0);
    let part1 = powers(&img1.numerator, &den1, d1);
    let coeffs = p.dense_coefficients(0);
    let mut cleared = BiPoly::zero(target.clone());
    for (i, row) in coeffs.iter().enumerate() {
        let mut inner = BiPoly::zero(target.clone());
        for (j, c) in row.iter().enumerate() {
            if c.is_positive() || c.is_negative() {
                inner = &inner + &part1[j].scale(c);
            }
        }
        if !inner.is_zero() {
            cleared = &cleared + &(&inner * &part0[i]);
        }
    }

    for (factors, budget) in [(&img0.denominator, d0), (&img1.denominator, d1)] {
        for f in factors {
            if f.is_constant() || f.len() == 1 {
                continue; // monomials and constants are removed by normalization
            }
            for _ in 0..budget {
                match cleared.div_exact(f) {
                    Some(q) => cleared = q,
                    None => break,
                }
            }
        }
    }
    Ok(normalize_unit(&cleared))
}

/// True when `a` and `b` agree up to multiplication by `±x^i y^j`.
pub fn equal_up_to_unit(a: &BiPoly, b: &BiPoly) -> bool {
    let na = normalize_unit(a).poly;
    let nb = normalize_unit(b).poly;
    // Content is removed by normalization; compare with the content restored
    // so that 2p and p are not considered equal.
    let ca = a.content();
    let cb = b.content();
    na == nb && (ca == cb || (ca.is_one() && cb.is_one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn vb(terms: &[(u32, u32, i64)]) -> BiPoly {
        BiPoly::from_terms(Vars::vb(), terms.iter().map(|&(i, j, c)| (i, j, c)))
    }

    fn lm(terms: &[(u32, u32, i64)]) -> BiPoly {
        BiPoly::from_terms(Vars::lm(), terms.iter().map(|&(i, j, c)| (i, j, c)))
    }

    #[test]
    fn constant_maps_to_one() {
        let s = RationalSubst::distance_to_eigenvalues();
        let r = substitute(&BiPoly::one(Vars::vb()), &s).unwrap();
        assert_eq!(r.poly, BiPoly::one(Vars::lm()));
        assert!(!r.sign_flipped);
        let r = substitute(&vb(&[(0, 0, -1)]), &s).unwrap();
        assert_eq!(r.poly, BiPoly::one(Vars::lm()));
        assert!(r.sign_flipped);
    }

    #[test]
    fn trefoil_distance_polynomial() {
        // P_{-2} = (2B^2-2)V + 2B^2 - 1  ->  1 + L M^6
        let pm2 = vb(&[(1, 2, 2), (1, 0, -2), (0, 2, 2), (0, 0, -1)]);
        let r = substitute(&pm2, &RationalSubst::distance_to_eigenvalues()).unwrap();
        assert_eq!(r.poly, lm(&[(0, 0, 1), (1, 6, 1)]));
    }

    #[test]
    fn normalization_removes_monomial_and_content() {
        let p = lm(&[(2, 3, -6), (3, 5, 4)]);
        let n = normalize_unit(&p);
        assert_eq!(n.poly, lm(&[(0, 0, 3), (1, 2, -2)]));
        assert!(n.sign_flipped);
    }

    #[test]
    fn zero_denominator_rejected() {
        let lmv = Vars::lm();
        let img = VarImage {
            numerator: BiPoly::one(lmv.clone()),
            denominator: vec![BiPoly::zero(lmv.clone())],
        };
        let ok = VarImage {
            numerator: BiPoly::one(lmv.clone()),
            denominator: vec![],
        };
        assert!(matches!(
            RationalSubst::new(lmv, img, ok),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn unit_equality() {
        let a = lm(&[(0, 0, 1), (1, 6, 1)]);
        assert!(equal_up_to_unit(&a, &(-&a).shift(2, 3)));
        assert!(!equal_up_to_unit(&a, &a.scale(&BigInt::from(2))));
    }
}
