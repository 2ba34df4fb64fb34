use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Dense univariate polynomial with exact rational coefficients, index = degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPolyQ {
    var: String,
    coeffs: Vec<BigRational>,
}

impl UniPolyQ {
    pub fn new(var: &str, mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPolyQ {
            var: var.to_string(),
            coeffs,
        }
    }

    pub fn from_ints<C: Into<BigInt>>(var: &str, coeffs: impl IntoIterator<Item = C>) -> Self {
        Self::new(
            var,
            coeffs
                .into_iter()
                .map(|c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero(var: &str) -> Self {
        Self::new(var, Vec::new())
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Exact quotient by `d`; `None` when `d` is zero or does not divide.
    pub fn div_exact(&self, d: &UniPolyQ) -> Option<UniPolyQ> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(self.clone());
        }
        let nd = self.degree()?;
        if nd < dd {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut q = vec![BigRational::zero(); nd - dd + 1];
        let lc = d.leading()?;
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] / lc;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * dc;
                }
            }
            q[k] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(UniPolyQ::new(&self.var, q))
    }

    /// Scale to coprime integer coefficients with positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        let sign = if ints.last().is_some_and(|c| c.is_negative()) {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Exact sign at the rational point `num / den` (`den > 0`), computed with
    /// integer arithmetic on the homogenized polynomial.
    pub fn sign_at(&self, num: &BigInt, den: &BigInt) -> Ordering {
        let Some(d) = self.degree() else {
            return Ordering::Equal;
        };
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        // sum c_i num^i den^(d-i) has the sign of p(num/den) when den > 0.
        let mut acc = ints[d].clone();
        let mut den_pow = BigInt::one();
        for c in ints[..d].iter().rev() {
            den_pow *= den;
            acc = acc * num + c * &den_pow;
        }
        acc.cmp(&BigInt::zero())
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Largest absolute coefficient as a float.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for UniPolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            let mono = match k {
                0 => String::new(),
                1 => self.var.clone(),
                _ => format!("{}^{k}", self.var),
            };
            let body = match (mono.is_empty(), a.is_one()) {
                (true, _) => a.to_string(),
                (false, true) => mono,
                (false, false) => format!("{a}*{mono}"),
            };
            match (first, neg) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_at_matches_rational_eval() {
        let p = UniPolyQ::from_ints("B", [-3, 0, 4]); // 4B^2 - 3
        for (a, b) in [(1, 2), (7, 8), (9, 10), (-1, 1), (0, 1)] {
            let x = BigRational::new(BigInt::from(a), BigInt::from(b));
            let exact = p.eval(&x).cmp(&BigRational::zero());
            assert_eq!(p.sign_at(&BigInt::from(a), &BigInt::from(b)), exact);
        }
    }

    #[test]
    fn exact_division() {
        let a = UniPolyQ::from_ints("B", [1, 1]);
        let b = UniPolyQ::from_ints("B", [-1, 0, 1]);
        let q = b.div_exact(&a).unwrap();
        assert_eq!(q, UniPolyQ::from_ints("B", [-1, 1]));
        assert!(UniPolyQ::from_ints("B", [1, 0, 1]).div_exact(&a).is_none());
    }

    #[test]
    fn primitive_form() {
        let p = UniPolyQ::new(
            "B",
            vec![
                BigRational::new(1.into(), 2.into()),
                BigRational::new((-3).into(), 4.into()),
            ],
        );
        assert_eq!(p.primitive_integer(), vec![BigInt::from(-2), BigInt::from(3)]);
    }
}
