//! Chern–Simons invariants of twist-knot orbifolds, their cyclic covers and
//! the knot complements, assembled from the lens-space value at `α = π` and
//! the Schläfli integrals along the geometric branch.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{find_alpha0, track_segment, Alpha0, Side};
use crate::twistgen::TwistKnot;

/// Chern–Simons invariant of the lens space `L(4n+1, 2n+1)`:
/// `(6n+4)/(8n+2) mod 1`.
pub fn lens_cs(n: i64) -> Result<Ratio<i64>> {
    if n == 0 {
        return Err(Error::usage("lens space value needs n != 0"));
    }
    let r = Ratio::new(6 * n + 4, 8 * n + 2);
    Ok(r - r.floor())
}

/// Composite Simpson rule over uniform samples `f(a), ..., f(b)`.
pub fn simpson(samples: &[f64], a: f64, b: f64) -> Result<f64> {
    let n = samples.len().saturating_sub(1);
    if n == 0 || n % 2 != 0 {
        return Err(Error::usage(format!(
            "Simpson's rule needs an even positive number of intervals, got {n}"
        )));
    }
    let h = (b - a) / n as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for (i, &f) in samples.iter().enumerate().take(n).skip(1) {
        if i % 2 == 1 {
            odd += f;
        } else {
            even += f;
        }
    }
    Ok(h / 3.0 * (samples[0] + samples[n] + 4.0 * odd + 2.0 * even))
}

/// Simpson's rule applied to a function sampled on `intervals + 1` points.
pub fn simpson_fn(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> Result<f64> {
    let h = (b - a) / intervals.max(1) as f64;
    let samples: Vec<f64> = (0..=intervals).map(|i| f(a + h * i as f64)).collect();
    simpson(&samples, a, b)
}

/// Simpson interval counts on either side of `α₀`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QuadratureSpec {
    pub intervals_hyperbolic: usize,
    pub intervals_spherical: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            intervals_hyperbolic: 10_000,
            intervals_spherical: 10_000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(intervals_hyperbolic: usize, intervals_spherical: usize) -> Result<Self> {
        for n in [intervals_hyperbolic, intervals_spherical] {
            if n < 2 || n % 2 != 0 {
                return Err(Error::usage(format!(
                    "interval counts must be even and at least 2, got {n}"
                )));
            }
        }
        Ok(QuadratureSpec {
            intervals_hyperbolic,
            intervals_spherical,
        })
    }
}

/// Values this close below the modulus are snapped to zero.
const SNAP: f64 = 1e-12;

/// A real invariant defined modulo an exact rational.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CsValue {
    pub raw: f64,
    #[serde(serialize_with = "ser_ratio")]
    pub modulus: Ratio<i64>,
    /// `raw mod modulus`, in `[0, modulus)`.
    pub canonical: f64,
}

fn ser_ratio<S: serde::Serializer>(r: &Ratio<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

impl CsValue {
    pub fn reduce(raw: f64, modulus: Ratio<i64>) -> Self {
        let m = modulus.to_f64().expect("small modulus");
        let mut c = raw.rem_euclid(m);
        if c >= m - SNAP {
            c = 0.0;
        }
        CsValue {
            raw,
            modulus,
            canonical: c,
        }
    }
}

/// `1/k` for even `k`, `1/(2k)` for odd `k`.
pub fn orbifold_modulus(k: i64) -> Ratio<i64> {
    if k % 2 == 0 {
        Ratio::new(1, k)
    } else {
        Ratio::new(1, 2 * k)
    }
}

/// `1` for even `k`, `1/2` for odd `k`.
pub fn cover_modulus(k: i64) -> Ratio<i64> {
    if k % 2 == 0 {
        Ratio::from_integer(1)
    } else {
        Ratio::new(1, 2)
    }
}

/// Knot-complement values are reported modulo `1/2`.
pub fn knot_modulus() -> Ratio<i64> {
    Ratio::new(1, 2)
}

/// Everything about one knot that does not depend on the cone angle:
/// `α₀`, the lens-space value and the spherical integral over `[α₀, π]`.
#[derive(Clone, Debug)]
pub struct CsContext {
    pub n: i64,
    pub alpha0: Arc<Alpha0>,
    pub lens: Ratio<i64>,
    pub spherical_integral: f64,
    pub quad: QuadratureSpec,
}

impl CsContext {
    pub fn new(n: i64, quad: QuadratureSpec) -> Result<Self> {
        TwistKnot::new(n).require_hyperbolic()?;
        let quad = QuadratureSpec::new(quad.intervals_hyperbolic, quad.intervals_spherical)?;
        let alpha0 = find_alpha0(n)?;
        let sph = track_segment(&alpha0, Side::Spherical, PI, quad.intervals_spherical)?;
        let spherical_integral = simpson(&sph.integrand_samples()?, alpha0.alpha0, PI)?;
        Ok(CsContext {
            n,
            lens: lens_cs(n)?,
            alpha0,
            spherical_integral,
            quad,
        })
    }

    /// Shared per `(n, quadrature)`.
    pub fn get(n: i64, quad: QuadratureSpec) -> Result<Arc<CsContext>> {
        static MEMO: OnceLock<Mutex<HashMap<(i64, QuadratureSpec), Arc<CsContext>>>> =
            OnceLock::new();
        let memo = MEMO.get_or_init(Default::default);
        if let Some(c) = memo.lock().expect("memo lock").get(&(n, quad)) {
            return Ok(c.clone());
        }
        let c = Arc::new(CsContext::new(n, quad)?);
        memo.lock().expect("memo lock").insert((n, quad), c.clone());
        Ok(c)
    }

    /// Hyperbolic Schläfli integral over `[alpha_lo, α₀]`.
    pub fn hyperbolic_integral(&self, alpha_lo: f64) -> Result<f64> {
        let a0 = self.alpha0.alpha0;
        if alpha_lo >= a0 {
            return Err(Error::NonHyperbolic {
                angle: alpha_lo,
                alpha0: a0,
            });
        }
        let track = track_segment(
            &self.alpha0,
            Side::Hyperbolic,
            alpha_lo,
            self.quad.intervals_hyperbolic,
        )?;
        let mut f = track.integrand_samples()?;
        f.reverse();
        simpson(&f, alpha_lo, a0)
    }

    /// Unreduced invariant of the cone-manifold with cone angle `alpha_lo`.
    pub fn raw(&self, alpha_lo: f64) -> Result<f64> {
        let lens = self.lens.to_f64().expect("small rational");
        let i_h = self.hyperbolic_integral(alpha_lo)?;
        Ok(0.5 * lens + (i_h + self.spherical_integral) / (4.0 * PI * PI))
    }

    fn check_k(&self, k: i64) -> Result<f64> {
        if k < 2 {
            return Err(Error::usage(format!("orbifold order k = {k} must be at least 2")));
        }
        let angle = 2.0 * PI / k as f64;
        if angle >= self.alpha0.alpha0 {
            return Err(Error::NonHyperbolic {
                angle,
                alpha0: self.alpha0.alpha0,
            });
        }
        Ok(angle)
    }

    pub fn orbifold(&self, k: i64) -> Result<CsValue> {
        let angle = self.check_k(k)?;
        Ok(CsValue::reduce(self.raw(angle)?, orbifold_modulus(k)))
    }

    /// Orbifold value and the cover value derived from the same raw sum.
    pub fn orbifold_and_cover(&self, k: i64) -> Result<(CsValue, CsValue)> {
        let orb = self.orbifold(k)?;
        Ok((orb, CsValue::reduce(k as f64 * orb.raw, cover_modulus(k))))
    }

    pub fn knot(&self) -> Result<CsValue> {
        Ok(CsValue::reduce(self.raw(0.0)?, knot_modulus()))
    }
}

/// Invariant of the orbifold `T_2n(2π/k)`.
pub fn cs_orbifold(n: i64, k: i64, quad: QuadratureSpec) -> Result<CsValue> {
    CsContext::get(n, quad)?.orbifold(k)
}

/// Invariant of the `k`-fold cyclic branched cover.
pub fn cs_cyclic_cover(n: i64, k: i64, quad: QuadratureSpec) -> Result<CsValue> {
    Ok(CsContext::get(n, quad)?.orbifold_and_cover(k)?.1)
}

/// Invariant of the knot complement.
pub fn cs_knot(n: i64, quad: QuadratureSpec) -> Result<CsValue> {
    CsContext::get(n, quad)?.knot()
}

/// Serializable report for one `(n, k)` cell, or for the knot when `k` is absent.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CsResult {
    pub n: i64,
    pub k: Option<i64>,
    pub alpha0: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cs_orbifold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cs_cover: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cs_knot: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus_orbifold: Option<String>,
    pub intervals: [usize; 2],
}

impl CsResult {
    pub fn orbifold(n: i64, k: i64, quad: QuadratureSpec) -> Result<Self> {
        let ctx = CsContext::get(n, quad)?;
        let (orb, cover) = ctx.orbifold_and_cover(k)?;
        Ok(CsResult {
            n,
            k: Some(k),
            alpha0: ctx.alpha0.alpha0,
            cs_orbifold: Some(orb.canonical),
            cs_cover: Some(cover.canonical),
            cs_knot: None,
            modulus_orbifold: Some(format!("{}/{}", orb.modulus.numer(), orb.modulus.denom())),
            intervals: [quad.intervals_hyperbolic, quad.intervals_spherical],
        })
    }

    pub fn knot(n: i64, quad: QuadratureSpec) -> Result<Self> {
        let ctx = CsContext::get(n, quad)?;
        Ok(CsResult {
            n,
            k: None,
            alpha0: ctx.alpha0.alpha0,
            cs_orbifold: None,
            cs_cover: None,
            cs_knot: Some(ctx.knot()?.canonical),
            modulus_orbifold: None,
            intervals: [quad.intervals_hyperbolic, quad.intervals_spherical],
        })
    }
}
