//! Numerical geometry of twist-knot cone-manifolds: the distance polynomial
//! at a cone angle, its roots, the Euclidean angle, and the geometric branch.
//!
//! Root finding and tracking work in the rescaled variable `x = (B^2 - 1) V`.
//! With `w = B^2 - 1 = -sin^2(α/2)` the polynomial `Q(x, w) = P(x / w, B)` has
//! integer coefficients and a constant leading coefficient in `x`, so it keeps
//! full degree all the way down to `α = 0`, where `P` itself collapses.

mod alpha0;
mod roots;
mod track;

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exactpoly::{BiPoly, Vars};
use crate::twistgen::{pdist_recursive, TwistKnot};

pub use alpha0::{distance_discriminant, find_alpha0, rescaled_discriminant, Alpha0, Candidate};
pub use roots::{all_roots, all_roots_from, scaled_residual};
pub use track::{
    integrand, longitude, longitude_rescaled, track_branches, track_segment, BranchTrack,
    PhaseState, SegmentTrack, Side,
};

/// Cone angle `α ∈ (0, π]` around the knot.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct ConeAngle(f64);

impl ConeAngle {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha <= PI {
            Ok(ConeAngle(alpha))
        } else {
            Err(Error::usage(format!("cone angle {alpha} is outside (0, π]")))
        }
    }

    pub fn alpha(&self) -> f64 {
        self.0
    }

    /// `B = cos(α/2)`.
    pub fn b(&self) -> f64 {
        (self.0 / 2.0).cos()
    }

    /// `A = cot(α/2)`.
    pub fn a(&self) -> f64 {
        1.0 / (self.0 / 2.0).tan()
    }

    /// `M = exp(iα/2)`.
    pub fn m(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.0 / 2.0)
    }
}

/// Dense univariate polynomial with complex coefficients, ascending degree.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPolyC {
    coeffs: Vec<Complex64>,
}

/// Leading coefficients below this fraction of the largest are treated as zero.
const DEGREE_DROP: f64 = 1e-14;

impl UniPolyC {
    /// Build from ascending coefficients, dropping negligible leading terms.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() <= DEGREE_DROP * max) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        UniPolyC { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

fn require_hyperbolic(n: i64) -> Result<()> {
    TwistKnot::new(n).require_hyperbolic()
}

/// Per-power coefficient polynomials of a bivariate polynomial in its second
/// variable, as floats: `out[i][j]` is the coefficient of `x^i y^j`.
fn float_rows(p: &BiPoly) -> Vec<Vec<f64>> {
    let mut rows = vec![Vec::new(); p.degree(0) as usize + 1];
    for ((i, j), c) in p.terms() {
        let row = &mut rows[i as usize];
        if row.len() <= j as usize {
            row.resize(j as usize + 1, 0.0);
        }
        row[j as usize] = c.to_f64().unwrap_or(f64::NAN);
    }
    rows
}

fn horner(row: &[f64], y: f64) -> f64 {
    row.iter().rev().fold(0.0, |acc, c| acc * y + c)
}

/// `P_2n(V, cos(α/2))` as a polynomial in `V`.
pub fn specialize(n: i64, angle: ConeAngle) -> Result<UniPolyC> {
    require_hyperbolic(n)?;
    let b = angle.b();
    let rows = float_rows(&pdist_recursive(n).poly);
    Ok(UniPolyC::new(
        rows.iter().map(|r| Complex64::new(horner(r, b), 0.0)).collect(),
    ))
}

/// The rescaled distance polynomial `Q(x, w)` of one twist knot.
#[derive(Debug)]
pub struct Rescaled {
    pub n: i64,
    pub poly: BiPoly,
    rows: Vec<Vec<f64>>,
}

impl Rescaled {
    fn build(n: i64) -> Result<Self> {
        let p = pdist_recursive(n).poly;
        let xw = Vars::new("x", "w");
        let w_plus_1 = BiPoly::from_terms(xw.clone(), [(0u32, 1u32, 1), (0, 0, 1)]);
        let mut q = BiPoly::zero(xw.clone());
        for ((i, j), c) in p.terms() {
            if j % 2 != 0 {
                return Err(Error::IdentityMismatch(format!(
                    "P_{} has an odd power of B",
                    2 * n
                )));
            }
            let mono = BiPoly::laurent_monomial(xw.clone(), i, -i, c.clone());
            q = &q + &(&mono * &w_plus_1.pow((j / 2) as u32));
        }
        if !q.is_polynomial() {
            return Err(Error::IdentityMismatch(format!(
                "P_{} does not rescale to a polynomial",
                2 * n
            )));
        }
        let rows = float_rows(&q);
        Ok(Rescaled { n, poly: q, rows })
    }

    /// Memoized per `n`.
    pub fn get(n: i64) -> Result<Arc<Rescaled>> {
        static MEMO: OnceLock<RwLock<HashMap<i64, Arc<Rescaled>>>> = OnceLock::new();
        let memo = MEMO.get_or_init(Default::default);
        if let Some(r) = memo.read().expect("memo lock").get(&n) {
            return Ok(r.clone());
        }
        let r = Arc::new(Self::build(n)?);
        memo.write().expect("memo lock").insert(n, r.clone());
        Ok(r)
    }

    pub fn degree(&self) -> usize {
        self.rows.len() - 1
    }

    /// `Q(·, w)` at `w = -sin^2(α/2)`; valid on the closed range `[0, π]`.
    pub fn at(&self, alpha: f64) -> UniPolyC {
        let w = rescale_w(alpha);
        UniPolyC {
            coeffs: self
                .rows
                .iter()
                .map(|r| Complex64::new(horner(r, w), 0.0))
                .collect(),
        }
    }
}

/// `w = B^2 - 1 = -sin^2(α/2)`.
pub fn rescale_w(alpha: f64) -> f64 {
    let s = (alpha / 2.0).sin();
    -s * s
}

/// `V = x / w`.
pub fn v_from_x(alpha: f64, x: Complex64) -> Complex64 {
    x / rescale_w(alpha)
}
