use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exponent pair `(first variable, second variable)`.
pub type Exponent = (i64, i64);

/// Ordered pair of variable names, e.g. `("V", "B")` or `("L", "M")`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vars([String; 2]);

impl Vars {
    pub fn new(first: &str, second: &str) -> Self {
        Vars([first.to_string(), second.to_string()])
    }

    /// `(V, B)`: complex distance and half-angle cosine.
    pub fn vb() -> Self {
        Vars::new("V", "B")
    }

    /// `(L, M)`: longitude and meridian eigenvalues.
    pub fn lm() -> Self {
        Vars::new("L", "M")
    }

    pub fn first(&self) -> &str {
        &self.0[0]
    }

    pub fn second(&self) -> &str {
        &self.0[1]
    }

    pub fn name(&self, index: usize) -> &str {
        &self.0[index]
    }

    /// Position of `name` in the pair.
    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.0
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::usage(format!("variable {name} is not one of {self}")))
    }
}

impl fmt::Display for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0[0], self.0[1])
    }
}

/// Sparse bivariate polynomial with arbitrary-precision integer coefficients.
///
/// Terms are kept in a map keyed by exponent pair with no stored zeros, so two
/// polynomials are equal exactly when their term maps are equal. Values handed
/// out by public constructors have nonnegative exponents; negative exponents
/// (Laurent monomials) only appear inside the rational-function layer and are
/// cleared before results are returned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiPoly {
    vars: Vars,
    terms: BTreeMap<Exponent, BigInt>,
}

impl BiPoly {
    pub fn zero(vars: Vars) -> Self {
        BiPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: Vars) -> Self {
        Self::constant(vars, BigInt::one())
    }

    pub fn constant(vars: Vars, c: impl Into<BigInt>) -> Self {
        Self::monomial(vars, 0, 0, c)
    }

    pub fn monomial(vars: Vars, i: u32, j: u32, c: impl Into<BigInt>) -> Self {
        Self::laurent_monomial(vars, i as i64, j as i64, c)
    }

    /// Monomial that may carry negative exponents; only for intermediate values.
    pub(crate) fn laurent_monomial(vars: Vars, i: i64, j: i64, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        BiPoly { vars, terms }
    }

    /// Build from `(i, j, coefficient)` triples; repeated exponents are summed.
    pub fn from_terms<C: Into<BigInt>>(
        vars: Vars,
        terms: impl IntoIterator<Item = (u32, u32, C)>,
    ) -> Self {
        let mut map: BTreeMap<Exponent, BigInt> = BTreeMap::new();
        for (i, j, c) in terms {
            *map.entry((i as i64, j as i64)).or_default() += c.into();
        }
        map.retain(|_, c| !c.is_zero());
        BiPoly { vars, terms: map }
    }

    pub(crate) fn from_map(vars: Vars, mut terms: BTreeMap<Exponent, BigInt>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        BiPoly { vars, terms }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// Terms in ascending `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub(crate) fn term_map(&self) -> &BTreeMap<Exponent, BigInt> {
        &self.terms
    }

    pub fn coeff(&self, i: i64, j: i64) -> BigInt {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == (0, 0))
    }

    /// True when no exponent is negative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i >= 0 && j >= 0)
    }

    /// Largest exponent of the variable at `index` (0 for the zero polynomial).
    pub fn degree(&self, index: usize) -> i64 {
        self.terms
            .keys()
            .map(|e| if index == 0 { e.0 } else { e.1 })
            .max()
            .unwrap_or(0)
    }

    /// Smallest exponent of the variable at `index` (0 for the zero polynomial).
    pub fn min_exponent(&self, index: usize) -> i64 {
        self.terms
            .keys()
            .map(|e| if index == 0 { e.0 } else { e.1 })
            .min()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: &str) -> Result<i64> {
        Ok(self.degree(self.vars.index_of(var)?))
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Same terms under new variable names.
    pub fn renamed(&self, vars: Vars) -> Self {
        BiPoly {
            vars,
            terms: self.terms.clone(),
        }
    }

    fn check_vars(&self, other: &BiPoly) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::usage(format!(
                "variable mismatch: {} vs {}",
                self.vars, other.vars
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &BiPoly) -> Result<BiPoly> {
        self.check_vars(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &BiPoly) -> Result<BiPoly> {
        self.check_vars(other)?;
        Ok(self.add_unchecked(&-other))
    }

    pub fn checked_mul(&self, other: &BiPoly) -> Result<BiPoly> {
        self.check_vars(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &BiPoly) -> BiPoly {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(*e).or_default();
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        BiPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    fn mul_unchecked(&self, other: &BiPoly) -> BiPoly {
        if self.is_zero() || other.is_zero() {
            return BiPoly::zero(self.vars.clone());
        }
        let mut acc: HashMap<Exponent, BigInt> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                *acc.entry((i1 + i2, j1 + j2)).or_default() += c1 * c2;
            }
        }
        BiPoly::from_map(self.vars.clone(), acc.into_iter().collect())
    }

    pub fn pow(&self, mut e: u32) -> BiPoly {
        let mut base = self.clone();
        let mut out = BiPoly::one(self.vars.clone());
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero(self.vars.clone());
        }
        BiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Multiply by the (possibly Laurent) monomial `x^di y^dj`.
    pub(crate) fn shift(&self, di: i64, dj: i64) -> BiPoly {
        BiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((i + di, j + dj), c.clone()))
                .collect(),
        }
    }

    /// Partial derivative with respect to the variable at `index`.
    pub fn derivative(&self, index: usize) -> BiPoly {
        let terms = self
            .terms
            .iter()
            .filter_map(|(&(i, j), c)| {
                let e = if index == 0 { i } else { j };
                if e == 0 {
                    return None;
                }
                let key = if index == 0 { (i - 1, j) } else { (i, j - 1) };
                Some((key, c * BigInt::from(e)))
            })
            .collect();
        BiPoly::from_map(self.vars.clone(), terms)
    }

    /// Nonnegative gcd of all coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Coefficient of the lexicographically least exponent.
    pub fn lex_least_coeff(&self) -> Option<&BigInt> {
        self.terms.values().next()
    }

    /// Coefficient of the lexicographically greatest exponent.
    pub fn lex_leading(&self) -> Option<(Exponent, &BigInt)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c))
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder. Works for Laurent inputs by first shifting both operands into
    /// the polynomial range.
    pub fn div_exact(&self, divisor: &BiPoly) -> Option<BiPoly> {
        if divisor.is_zero() || self.vars != divisor.vars {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let (si, sj) = (self.min_exponent(0), self.min_exponent(1));
        let (di, dj) = (divisor.min_exponent(0), divisor.min_exponent(1));
        let d = divisor.shift(-di, -dj);
        let mut rem = self.shift(-si, -sj);
        let ((li, lj), lc) = {
            let (e, c) = d.lex_leading().expect("nonzero divisor");
            (e, c.clone())
        };
        let mut quotient: BTreeMap<Exponent, BigInt> = BTreeMap::new();
        while let Some(((ri, rj), rc)) = rem.lex_leading().map(|(e, c)| (e, c.clone())) {
            let (qi, qj) = (ri - li, rj - lj);
            if qi < 0 || qj < 0 {
                return None;
            }
            let (qc, r) = rc.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            let step = BiPoly::laurent_monomial(self.vars.clone(), qi, qj, qc.clone());
            rem = rem.add_unchecked(&-(step.mul_unchecked(&d)));
            quotient.insert((qi, qj), qc);
        }
        Some(BiPoly::from_map(self.vars.clone(), quotient).shift(si - di, sj - dj))
    }

    /// Evaluate at real arguments.
    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c.to_f64().unwrap_or(f64::NAN) * x.powi(i as i32) * y.powi(j as i32))
            .sum()
    }

    /// Coefficients with respect to the variable at `index`, each a dense
    /// vector in the other variable. Requires nonnegative exponents.
    pub(crate) fn dense_coefficients(&self, index: usize) -> Vec<Vec<BigInt>> {
        let other = 1 - index;
        let d = self.degree(index).max(0) as usize;
        let e = self.degree(other).max(0) as usize;
        let mut out = vec![vec![BigInt::zero(); e + 1]; d + 1];
        for (&(i, j), c) in &self.terms {
            let (a, b) = if index == 0 { (i, j) } else { (j, i) };
            out[a as usize][b as usize] = c.clone();
        }
        out
    }

    /// Render as plain text with terms in ascending order of the second
    /// variable, then the first: `1 - L + 2*L*M^2`.
    pub fn to_text(&self) -> String {
        let mut keys: Vec<Exponent> = self.terms.keys().copied().collect();
        keys.sort_by_key(|&(i, j)| (j, i));
        render_terms(&self.vars, keys.iter().map(|e| (*e, &self.terms[e])))
    }

    /// Render grouped by descending powers of the first variable, each
    /// coefficient a polynomial in the second variable in descending order:
    /// `(2*B^2-2)*V + 2*B^2-1`.
    pub fn to_grouped_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut groups: BTreeMap<i64, Vec<(i64, &BigInt)>> = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            groups.entry(i).or_default().push((j, c));
        }
        let x = self.vars.first();
        let y = self.vars.second();
        let mut out = String::new();
        for (pos, (i, inner)) in groups.iter().rev().enumerate() {
            let mut inner = inner.clone();
            inner.sort_by_key(|&(j, _)| -j);
            let vars1 = Vars::new(y, y);
            let coeff_text = render_terms_compact(
                &vars1,
                inner.iter().map(|&(j, c)| ((0, j), c)),
            );
            let xpow = match *i {
                0 => String::new(),
                1 => x.to_string(),
                k => format!("{x}^{k}"),
            };
            let piece = if *i == 0 {
                coeff_text
            } else if inner.len() > 1 {
                format!("({coeff_text})*{xpow}")
            } else if coeff_text == "1" {
                xpow
            } else if coeff_text == "-1" {
                format!("-{xpow}")
            } else {
                format!("{coeff_text}*{xpow}")
            };
            if pos == 0 {
                out.push_str(&piece);
            } else if let Some(rest) = piece.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&piece);
            }
        }
        out
    }
}

fn monomial_text(vars: &Vars, (i, j): Exponent) -> String {
    let mut parts = Vec::new();
    for (name, e) in [(vars.first(), i), (vars.second(), j)] {
        match e {
            0 => {}
            1 => parts.push(name.to_string()),
            e => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

fn term_text(vars: &Vars, e: Exponent, c: &BigInt) -> (bool, String) {
    let neg = c.is_negative();
    let a = c.abs();
    let mono = monomial_text(vars, e);
    let body = if mono.is_empty() {
        a.to_string()
    } else if a.is_one() {
        mono
    } else {
        format!("{a}*{mono}")
    };
    (neg, body)
}

fn render_terms<'a>(vars: &Vars, terms: impl Iterator<Item = (Exponent, &'a BigInt)>) -> String {
    let mut out = String::new();
    for (k, (e, c)) in terms.enumerate() {
        let (neg, body) = term_text(vars, e, c);
        match (k, neg) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn render_terms_compact<'a>(
    vars: &Vars,
    terms: impl Iterator<Item = (Exponent, &'a BigInt)>,
) -> String {
    let mut out = String::new();
    for (k, (e, c)) in terms.enumerate() {
        let (neg, body) = term_text(vars, e, c);
        if neg {
            out.push('-');
        } else if k > 0 {
            out.push('+');
        }
        out.push_str(&body);
    }
    out
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

// Operator impls panic on mismatched variables; `checked_*` and the free
// functions in `exactpoly` report it as an error instead.
impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        self.checked_add(rhs).expect("BiPoly addition")
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        self.checked_sub(rhs).expect("BiPoly subtraction")
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        self.checked_mul(rhs).expect("BiPoly multiplication")
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct BiPolyJson {
    vars: [String; 2],
    terms: Vec<(i64, i64, String)>,
}

impl Serialize for BiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BiPolyJson {
            vars: self.vars.0.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| (i, j, c.to_string()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BiPolyJson::deserialize(d)?;
        let mut terms = BTreeMap::new();
        for (i, j, c) in raw.terms {
            if i < 0 || j < 0 {
                return Err(D::Error::custom(format!("negative exponent ({i}, {j})")));
            }
            let c: BigInt = c
                .parse()
                .map_err(|_| D::Error::custom(format!("bad coefficient {c:?}")))?;
            if c.is_zero() {
                return Err(D::Error::custom(format!("zero coefficient at ({i}, {j})")));
            }
            if terms.insert((i, j), c).is_some() {
                return Err(D::Error::custom(format!("duplicate exponent ({i}, {j})")));
            }
        }
        Ok(BiPoly {
            vars: Vars(raw.vars),
            terms,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lm(terms: &[(u32, u32, i64)]) -> BiPoly {
        BiPoly::from_terms(Vars::lm(), terms.iter().map(|&(i, j, c)| (i, j, c)))
    }

    #[test]
    fn zero_terms_are_pruned() {
        let p = lm(&[(0, 0, 1), (1, 1, 2), (1, 1, -2)]);
        assert_eq!(p, BiPoly::one(Vars::lm()));
        assert!((&BiPoly::one(Vars::lm()) + &lm(&[(0, 0, -1)])).is_zero());
    }

    #[test]
    fn exact_division() {
        let a = lm(&[(0, 0, 1), (1, 2, 1)]);
        let b = lm(&[(0, 0, 3), (2, 1, -1), (0, 5, 7)]);
        let ab = &a * &b;
        assert_eq!(ab.div_exact(&a).unwrap(), b);
        assert!(b.div_exact(&a).is_none());
        let laurent = BiPoly::laurent_monomial(Vars::lm(), 0, -2, 1);
        let q = (&ab * &laurent).div_exact(&b).unwrap();
        assert_eq!(q, &a * &laurent);
    }

    #[test]
    fn derivative_and_content() {
        let p = BiPoly::from_terms(Vars::vb(), [(2u32, 0u32, 4), (1, 2, -6), (0, 0, 2)]);
        assert_eq!(p.content(), BigInt::from(2));
        let dp = p.derivative(0);
        assert_eq!(
            dp,
            BiPoly::from_terms(Vars::vb(), [(1u32, 0u32, 8), (0, 2, -6)])
        );
    }

    #[test]
    fn text_rendering() {
        let a2 = lm(&[
            (1, 0, 1),
            (1, 2, -1),
            (0, 4, -1),
            (1, 4, -2),
            (2, 4, -1),
            (1, 6, -1),
            (1, 8, 1),
        ]);
        assert_eq!(
            a2.to_text(),
            "L - L*M^2 - M^4 - 2*L*M^4 - L^2*M^4 - L*M^6 + L*M^8"
        );
        let pm2 = BiPoly::from_terms(Vars::vb(), [(1u32, 2u32, 2), (1, 0, -2), (0, 2, 2), (0, 0, -1)]);
        assert_eq!(pm2.to_grouped_text(), "(2*B^2-2)*V + 2*B^2-1");
        assert_eq!(BiPoly::constant(Vars::lm(), -1).to_text(), "-1");
    }

    #[test]
    fn json_rejects_invalid_terms() {
        let bad = r#"{"vars":["L","M"],"terms":[[0,0,"0"]]}"#;
        assert!(serde_json::from_str::<BiPoly>(bad).is_err());
        let neg = r#"{"vars":["L","M"],"terms":[[-1,0,"3"]]}"#;
        assert!(serde_json::from_str::<BiPoly>(neg).is_err());
        let ok = r#"{"vars":["L","M"],"terms":[[0,0,"1"],[1,6,"1"]]}"#;
        let p: BiPoly = serde_json::from_str(ok).unwrap();
        assert_eq!(p, lm(&[(0, 0, 1), (1, 6, 1)]));
        assert_eq!(serde_json::to_string(&p).unwrap(), ok);
    }
}
