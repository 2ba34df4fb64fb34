use std::ops::{Add, Mul};

use super::bipoly::{BiPoly, Vars};
use crate::error::{Error, Result};

/// Quotient of two bivariate (Laurent) polynomials.
///
/// No gcd is ever taken: sums reuse a denominator when one divides the other
/// and otherwise cross-multiply. The closed-form generators only combine
/// powers of a single denominator, so this stays small in practice.
#[derive(Clone, Debug)]
pub struct RatFn {
    num: BiPoly,
    den: BiPoly,
}

impl RatFn {
    pub fn new(num: BiPoly, den: BiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::usage("rational function with zero denominator"));
        }
        if num.vars() != den.vars() {
            return Err(Error::usage("numerator and denominator use different variables"));
        }
        Ok(RatFn { num, den })
    }

    pub fn from_poly(p: BiPoly) -> Self {
        let den = BiPoly::one(p.vars().clone());
        RatFn { num: p, den }
    }

    pub fn zero(vars: Vars) -> Self {
        Self::from_poly(BiPoly::zero(vars))
    }

    pub fn numerator(&self) -> &BiPoly {
        &self.num
    }

    pub fn denominator(&self) -> &BiPoly {
        &self.den
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, e: i64) -> Result<RatFn> {
        let k = e.unsigned_abs() as u32;
        if e >= 0 {
            Ok(RatFn {
                num: self.num.pow(k),
                den: self.den.pow(k),
            })
        } else {
            if self.num.is_zero() {
                return Err(Error::usage("negative power of zero"));
            }
            Ok(RatFn {
                num: self.den.pow(k),
                den: self.num.pow(k),
            })
        }
    }

    /// Divide out the denominator, failing if it does not cancel exactly.
    pub fn into_laurent(self) -> Result<BiPoly> {
        self.num.div_exact(&self.den).ok_or_else(|| {
            Error::IdentityMismatch(format!(
                "denominator {} does not divide numerator",
                self.den
            ))
        })
    }

    /// Like [`RatFn::into_laurent`] but also requires nonnegative exponents.
    pub fn into_poly(self) -> Result<BiPoly> {
        let p = self.into_laurent()?;
        if !p.is_polynomial() {
            return Err(Error::IdentityMismatch(format!(
                "result {p} still has negative exponents"
            )));
        }
        Ok(p)
    }
}

impl Add for &RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        if self.den == rhs.den {
            return RatFn {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            };
        }
        if let Some(q) = self.den.div_exact(&rhs.den) {
            return RatFn {
                num: &self.num + &(&rhs.num * &q),
                den: self.den.clone(),
            };
        }
        if let Some(q) = rhs.den.div_exact(&self.den) {
            return RatFn {
                num: &(&self.num * &q) + &rhs.num,
                den: rhs.den.clone(),
            };
        }
        RatFn {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
    }
}

impl Mul for &RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        RatFn {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn telescoping_sum_cancels() {
        // 1/(V-1) + (V-2)/(V-1) = 1
        let vb = Vars::vb();
        let vm1 = BiPoly::from_terms(vb.clone(), [(1u32, 0u32, 1), (0, 0, -1)]);
        let a = RatFn::new(BiPoly::one(vb.clone()), vm1.clone()).unwrap();
        let b = RatFn::new(
            BiPoly::from_terms(vb.clone(), [(1u32, 0u32, 1), (0, 0, -2)]),
            vm1,
        )
        .unwrap();
        assert_eq!((&a + &b).into_poly().unwrap(), BiPoly::one(vb));
    }

    #[test]
    fn leftover_denominator_is_reported() {
        let vb = Vars::vb();
        let vm1 = BiPoly::from_terms(vb.clone(), [(1u32, 0u32, 1), (0, 0, -1)]);
        let r = RatFn::new(BiPoly::one(vb), vm1).unwrap();
        assert!(matches!(r.into_poly(), Err(Error::IdentityMismatch(_))));
    }
}
