//! Continuation of the geometric root from the Euclidean angle outward.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;

use super::alpha0::{find_alpha0, nearest_two, Alpha0};
use super::{all_roots_from, v_from_x, ConeAngle, Rescaled};
use crate::error::{Error, Result};

/// A candidate closer than this fraction of the runner-up distance is accepted.
const AMBIGUITY_RATIO: f64 = 0.25;
/// Maximum number of interval halvings when a step is ambiguous.
const MAX_REFINE_DEPTH: u32 = 12;
/// Largest accepted change of an unwrapped phase between adjacent samples.
const MAX_PHASE_STEP: f64 = PI / 2.0;

/// Longitude eigenvalue `M^{-2} (A + iV) / (A - iV)` at a cone angle.
pub fn longitude(angle: ConeAngle, v: Complex64) -> Result<Complex64> {
    let a = Complex64::new(angle.a(), 0.0);
    let iv = Complex64::i() * v;
    let den = a - iv;
    if den.norm() == 0.0 {
        return Err(Error::numerical(format!(
            "singular configuration A - iV = 0 at α = {}",
            angle.alpha()
        )));
    }
    Ok(angle.m().powi(-2) * (a + iv) / den)
}

/// The same eigenvalue in the rescaled variable:
/// `e^{-iα} (cs - ix) / (cs + ix)` with `c = cos(α/2)`, `s = sin(α/2)`.
/// Defined at `α = 0`, where it equals `-1`.
pub fn longitude_rescaled(alpha: f64, x: Complex64) -> Result<Complex64> {
    let cs = Complex64::new((alpha / 2.0).cos() * (alpha / 2.0).sin(), 0.0);
    let ix = Complex64::i() * x;
    let den = cs + ix;
    if den.norm() == 0.0 {
        return Err(Error::numerical(format!(
            "singular configuration at α = {alpha}"
        )));
    }
    Ok(Complex64::from_polar(1.0, -alpha) * (cs - ix) / den)
}

/// Continuous branch of `arg` along a sampled path.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PhaseState {
    prev: Option<f64>,
}

impl PhaseState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Argument of `z` on the branch nearest the previous value; the first
    /// call uses the principal branch.
    pub fn unwrap(&mut self, z: Complex64) -> Result<f64> {
        let mut a = z.arg();
        if let Some(p) = self.prev {
            a += TAU * ((p - a) / TAU).round();
            if (a - p).abs() > MAX_PHASE_STEP {
                return Err(Error::numerical(format!(
                    "phase jumped by {:.3} between samples; refine the grid",
                    a - p
                )));
            }
        }
        self.prev = Some(a);
        Ok(a)
    }

    pub fn current(&self) -> Option<f64> {
        self.prev
    }
}

/// `Im log` integrand: `2 arg L(V)` on the hyperbolic side, or
/// `arg L(V₁) + arg L(V₂)` on the spherical side when `v2` is given.
pub fn integrand(
    angle: ConeAngle,
    v: Complex64,
    v2: Option<Complex64>,
    phases: &mut [PhaseState; 2],
) -> Result<f64> {
    let p1 = phases[0].unwrap(longitude(angle, v)?)?;
    match v2 {
        None => Ok(2.0 * p1),
        Some(v2) => Ok(p1 + phases[1].unwrap(longitude(angle, v2)?)?),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `α < α₀`: one branch with `Im V ≤ 0`.
    Hyperbolic,
    /// `α > α₀`: the two real branches that meet at `α₀`.
    Spherical,
}

/// Samples of the tracked branch(es) on a uniform grid starting at `α₀`.
#[derive(Clone, Debug)]
pub struct SegmentTrack {
    pub side: Side,
    /// `alphas[0] = α₀`, then moving away from it.
    pub alphas: Vec<f64>,
    /// Rescaled roots `x`, one vector per branch, aligned with `alphas`.
    pub branches: Vec<Vec<Complex64>>,
}

impl SegmentTrack {
    /// Integrand samples aligned with `alphas`, with each log unwrapped
    /// continuously from the principal branch at `α₀`.
    pub fn integrand_samples(&self) -> Result<Vec<f64>> {
        let mut phases = vec![PhaseState::new(); self.branches.len()];
        let mut out = Vec::with_capacity(self.alphas.len());
        for (j, &a) in self.alphas.iter().enumerate() {
            let mut sum = 0.0;
            for (b, ph) in self.branches.iter().zip(phases.iter_mut()) {
                sum += ph.unwrap(longitude_rescaled(a, b[j])?)?;
            }
            out.push(if self.side == Side::Hyperbolic { 2.0 * sum } else { sum });
        }
        Ok(out)
    }

    /// Distance roots `V` along branch `b` (infinite at `α = 0`).
    pub fn v(&self, b: usize) -> Vec<Complex64> {
        self.alphas
            .iter()
            .zip(&self.branches[b])
            .map(|(&a, &x)| v_from_x(a, x))
            .collect()
    }

    /// Largest jump of any branch between consecutive samples, in `V`.
    pub fn max_jump(&self) -> f64 {
        (0..self.branches.len())
            .flat_map(|b| {
                let v = self.v(b);
                v.windows(2)
                    .map(|p| (p[1] - p[0]).norm())
                    .filter(|d| d.is_finite())
                    .collect::<Vec<_>>()
            })
            .fold(0.0, f64::max)
    }
}

/// Tracker state: the last two accepted samples and the full root set.
struct Tracker<'a> {
    q: &'a Rescaled,
    roots: Vec<Complex64>,
    last: (f64, Vec<Complex64>),
    before: Option<(f64, Vec<Complex64>)>,
}

impl Tracker<'_> {
    fn predict(&self, alpha: f64) -> Vec<Complex64> {
        match &self.before {
            None => self.last.1.clone(),
            Some((a0, x0)) => {
                let t = (alpha - self.last.0) / (self.last.0 - a0);
                self.last
                    .1
                    .iter()
                    .zip(x0)
                    .map(|(x1, x0)| x1 + (x1 - x0) * t)
                    .collect()
            }
        }
    }

    /// Match each branch to a root at `alpha`; `None` when ambiguous.
    fn try_match(&self, roots: &[Complex64], alpha: f64) -> Option<Vec<Complex64>> {
        let pred = self.predict(alpha);
        let mut chosen: Vec<usize> = Vec::new();
        for p in &pred {
            let mut d: Vec<(f64, usize)> =
                roots.iter().enumerate().map(|(i, r)| ((r - p).norm(), i)).collect();
            d.sort_by(|a, b| a.0.total_cmp(&b.0));
            let scale = 1e-12 * (1.0 + p.norm());
            if d.len() > 1 && d[0].0 > scale && d[0].0 > AMBIGUITY_RATIO * d[1].0 {
                return None;
            }
            if chosen.contains(&d[0].1) {
                return None;
            }
            chosen.push(d[0].1);
        }
        Some(chosen.into_iter().map(|i| roots[i]).collect())
    }

    fn step(&mut self, alpha: f64, depth: u32) -> Result<()> {
        let roots = all_roots_from(&self.q.at(alpha), &self.roots)?;
        if let Some(x) = self.try_match(&roots, alpha) {
            self.roots = roots;
            self.before = Some(std::mem::replace(&mut self.last, (alpha, x)));
            return Ok(());
        }
        if depth >= MAX_REFINE_DEPTH {
            return Err(Error::numerical(format!(
                "ambiguous root matching near α = {alpha:.12}; refine the grid"
            )));
        }
        let mid = 0.5 * (self.last.0 + alpha);
        self.step(mid, depth + 1)?;
        self.step(alpha, depth + 1)
    }
}

/// Track the geometric branch from `α₀` to `end` with `intervals` uniform
/// steps. The hyperbolic side follows the root with `Im V ≤ 0`; the spherical
/// side follows both real roots that meet at `α₀`.
pub fn track_segment(a0: &Alpha0, side: Side, end: f64, intervals: usize) -> Result<SegmentTrack> {
    if intervals == 0 {
        return Err(Error::usage("tracking needs at least one interval"));
    }
    let q = Rescaled::get(a0.n)?;
    let start = a0.alpha0;
    let h = (end - start) / intervals as f64;
    let alphas: Vec<f64> = (0..=intervals)
        .map(|j| if j == intervals { end } else { start + h * j as f64 })
        .collect();
    let xd = Complex64::new(a0.x_double, 0.0);

    // First step: split the double root explicitly.
    let roots = all_roots_from(&q.at(alphas[1]), &a0.roots)?;
    let pair = nearest_two(&roots, xd);
    let first = match side {
        Side::Hyperbolic => {
            // Im V <= 0  <=>  Im x >= 0, since w < 0.
            vec![if pair[0].im >= pair[1].im { pair[0] } else { pair[1] }]
        }
        Side::Spherical => {
            if pair[0].re >= pair[1].re {
                pair.to_vec()
            } else {
                vec![pair[1], pair[0]]
            }
        }
    };
    let m = first.len();
    let mut tr = Tracker {
        q: &q,
        roots,
        last: (alphas[1], first),
        before: Some((start, vec![xd; m])),
    };
    let mut branches: Vec<Vec<Complex64>> = (0..m)
        .map(|b| vec![xd, tr.last.1[b]])
        .collect();
    for &a in &alphas[2..] {
        // The square-root onset makes the linear predictor poor right after α₀.
        tr.step(a, 0)?;
        for (b, br) in branches.iter_mut().enumerate() {
            br.push(tr.last.1[b]);
        }
    }
    Ok(SegmentTrack {
        side,
        alphas,
        branches,
    })
}

/// Both sides of the geometric branch: hyperbolic on `[alpha_lo, α₀]` and
/// spherical on `[α₀, π]`, each with `grid_size` intervals.
#[derive(Clone, Debug)]
pub struct BranchTrack {
    pub n: i64,
    pub alpha0: f64,
    pub hyperbolic: SegmentTrack,
    pub spherical: SegmentTrack,
}

pub fn track_branches(n: i64, alpha_lo: f64, grid_size: usize) -> Result<BranchTrack> {
    let a0 = find_alpha0(n)?;
    if !(alpha_lo >= 0.0 && alpha_lo < a0.alpha0) {
        return Err(Error::NonHyperbolic {
            angle: alpha_lo,
            alpha0: a0.alpha0,
        });
    }
    Ok(BranchTrack {
        n,
        alpha0: a0.alpha0,
        hyperbolic: track_segment(&a0, Side::Hyperbolic, alpha_lo, grid_size)?,
        spherical: track_segment(&a0, Side::Spherical, PI, grid_size)?,
    })
}

impl BranchTrack {
    /// CSV rows in ascending `α`: hyperbolic samples carry `V`, spherical
    /// samples carry `V₁, V₂`, and the `α₀` row carries all three.
    pub fn to_csv(&self) -> Result<String> {
        let fh = self.hyperbolic.integrand_samples()?;
        let fs = self.spherical.integrand_samples()?;
        let vh = self.hyperbolic.v(0);
        let (v1, v2) = (self.spherical.v(0), self.spherical.v(1));
        let mut out = String::from("alpha,re_v,im_v,re_v1,im_v1,re_v2,im_v2,integrand\n");
        let c = |z: Complex64| format!("{:.15e},{:.15e}", z.re, z.im);
        for j in (1..self.hyperbolic.alphas.len()).rev() {
            let _ = writeln!(out, "{:.15e},{},,,,,{:.15e}", self.hyperbolic.alphas[j], c(vh[j]), fh[j]);
        }
        let _ = writeln!(out, "{:.15e},{},{},{},{:.15e}", self.alpha0, c(vh[0]), c(v1[0]), c(v2[0]), fh[0]);
        for j in 1..self.spherical.alphas.len() {
            let _ = writeln!(out, "{:.15e},,,{},{},{:.15e}", self.spherical.alphas[j], c(v1[j]), c(v2[j]), fs[j]);
        }
        Ok(out)
    }
}
