//! Reproduction of the orbifold, cover and knot-complement tables, with
//! per-cell deltas against the embedded reference values.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use twistcs::chernsimons::{CsContext, QuadratureSpec};
use twistcs::golden;
use twistcs::{Error, Result};

use crate::render::{json_pretty, Format};

/// Knots left out of every table: the unknot, the trefoil and the
/// amphicheiral figure-eight knot, whose invariants vanish.
pub const EXCLUDED: [i64; 3] = [0, -1, 1];

#[derive(Clone, Debug, Serialize)]
pub struct OrbifoldCell {
    pub n: i64,
    pub k: i64,
    pub alpha0: f64,
    pub cs_orbifold: f64,
    pub cs_cover: f64,
    pub modulus_orbifold: String,
    pub reference_orbifold: Option<f64>,
    pub reference_cover: Option<f64>,
    pub delta_orbifold: Option<f64>,
    pub delta_cover: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KnotCell {
    pub n: i64,
    pub alpha0: f64,
    pub cs_knot: f64,
    pub reference_alpha0: Option<f64>,
    pub reference_cs: Option<f64>,
    pub delta_alpha0: Option<f64>,
    pub delta_cs: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Skipped {
    pub n: i64,
    pub k: i64,
    pub reason: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub cells: usize,
    pub compared: usize,
    pub max_abs_delta_cs: f64,
    pub max_abs_delta_alpha0: f64,
    pub tolerance_cs: f64,
    pub tolerance_alpha0: f64,
    /// Human-readable descriptions of every comparison outside tolerance.
    pub exceeded: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Tables {
    pub orbifold: Vec<OrbifoldCell>,
    pub knots: Vec<KnotCell>,
    pub skipped: Vec<Skipped>,
    pub summary: Summary,
}

pub struct TableRequest {
    pub ns: Vec<i64>,
    pub ks: Vec<i64>,
    pub knots: bool,
    pub quad: QuadratureSpec,
    pub tolerance_cs: f64,
    pub tolerance_alpha0: f64,
}

fn delta(computed: f64, reference: Option<f64>) -> Option<f64> {
    reference.map(|r| computed - r)
}

type PerKnot = (Vec<OrbifoldCell>, Option<KnotCell>, Vec<Skipped>);

fn compute_knot(n: i64, req: &TableRequest) -> Result<PerKnot> {
    let ctx = CsContext::get(n, req.quad)?;
    let a0 = ctx.alpha0.alpha0;
    let mut cells = Vec::new();
    let mut skipped = Vec::new();
    for &k in &req.ks {
        match ctx.orbifold_and_cover(k) {
            Ok((orb, cover)) => {
                let reference = golden::orbifold_entry(n, k);
                let (ro, rc) = (reference.map(|r| r.orbifold), reference.map(|r| r.cover));
                cells.push(OrbifoldCell {
                    n,
                    k,
                    alpha0: a0,
                    cs_orbifold: orb.canonical,
                    cs_cover: cover.canonical,
                    modulus_orbifold: format!("{}/{}", orb.modulus.numer(), orb.modulus.denom()),
                    reference_orbifold: ro,
                    reference_cover: rc,
                    delta_orbifold: delta(orb.canonical, ro),
                    delta_cover: delta(cover.canonical, rc),
                });
            }
            Err(e @ (Error::NonHyperbolic { .. } | Error::Usage(_))) => skipped.push(Skipped {
                n,
                k,
                reason: e.to_string(),
            }),
            Err(e) => return Err(e),
        }
    }
    let knot = if req.knots {
        let cs = ctx.knot()?.canonical;
        let reference = golden::knot_entry(n);
        let (ra, rc) = (reference.map(|r| r.alpha0), reference.map(|r| r.cs));
        Some(KnotCell {
            n,
            alpha0: a0,
            cs_knot: cs,
            reference_alpha0: ra,
            reference_cs: rc,
            delta_alpha0: delta(a0, ra),
            delta_cs: delta(cs, rc),
        })
    } else {
        None
    };
    Ok((cells, knot, skipped))
}

/// Compute every requested cell. Knots are processed in parallel on the
/// current rayon pool; the output order is always ascending `(n, k)`.
pub fn compute(req: &TableRequest) -> Result<Tables> {
    let mut ns: Vec<i64> = req
        .ns
        .iter()
        .copied()
        .filter(|n| !EXCLUDED.contains(n))
        .collect();
    ns.sort_unstable();
    ns.dedup();
    let mut ks = req.ks.clone();
    ks.sort_unstable();
    ks.dedup();
    let req = TableRequest {
        ns: Vec::new(),
        ks,
        knots: req.knots,
        quad: req.quad,
        tolerance_cs: req.tolerance_cs,
        tolerance_alpha0: req.tolerance_alpha0,
    };
    let need_work = !req.ks.is_empty() || req.knots;
    let per_knot: Vec<PerKnot> = if need_work {
        ns.par_iter()
            .map(|&n| compute_knot(n, &req))
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };

    let mut t = Tables {
        orbifold: Vec::new(),
        knots: Vec::new(),
        skipped: Vec::new(),
        summary: Summary {
            tolerance_cs: req.tolerance_cs,
            tolerance_alpha0: req.tolerance_alpha0,
            ..Summary::default()
        },
    };
    for (cells, knot, skipped) in per_knot {
        t.orbifold.extend(cells);
        t.knots.extend(knot);
        t.skipped.extend(skipped);
    }
    let s = &mut t.summary;
    s.cells = t.orbifold.len() + t.knots.len();
    let check = |what: String, d: Option<f64>, tol: f64, max: &mut f64| {
        if let Some(d) = d {
            *max = max.max(d.abs());
            if d.abs() > tol {
                return Some(format!("{what}: delta {d:+.3e}"));
            }
        }
        None
    };
    let mut exceeded = Vec::new();
    let (mut max_cs, mut max_a0) = (0.0f64, 0.0f64);
    let mut compared = 0;
    for c in &t.orbifold {
        compared += usize::from(c.reference_orbifold.is_some());
        exceeded.extend(check(
            format!("orbifold n={} k={}", c.n, c.k),
            c.delta_orbifold,
            req.tolerance_cs,
            &mut max_cs,
        ));
        exceeded.extend(check(
            format!("cover n={} k={}", c.n, c.k),
            c.delta_cover,
            req.tolerance_cs,
            &mut max_cs,
        ));
    }
    for c in &t.knots {
        compared += usize::from(c.reference_cs.is_some());
        exceeded.extend(check(
            format!("alpha0 n={}", c.n),
            c.delta_alpha0,
            req.tolerance_alpha0,
            &mut max_a0,
        ));
        exceeded.extend(check(
            format!("knot n={}", c.n),
            c.delta_cs,
            req.tolerance_cs,
            &mut max_cs,
        ));
    }
    s.compared = compared;
    s.max_abs_delta_cs = max_cs;
    s.max_abs_delta_alpha0 = max_a0;
    s.exceeded = exceeded;
    Ok(t)
}

fn opt(v: Option<f64>, prec: usize) -> String {
    v.map(|x| format!("{x:.prec$}")).unwrap_or_default()
}

fn opt_e(v: Option<f64>) -> String {
    v.map(|x| format!("{x:+.2e}")).unwrap_or_default()
}

impl Tables {
    pub fn within_tolerance(&self) -> bool {
        self.summary.exceeded.is_empty()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json_pretty(&json!(self)),
            Format::Csv => self.to_csv(),
            Format::Text => self.to_markdown(),
        }
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        if !self.orbifold.is_empty() || self.knots.is_empty() {
            out.push_str("n,k,alpha0,cs_orbifold,cs_cover,modulus_orbifold,reference_orbifold,reference_cover,delta_orbifold,delta_cover\n");
            for c in &self.orbifold {
                let _ = writeln!(
                    out,
                    "{},{},{:.10},{:.10},{:.10},{},{},{},{},{}",
                    c.n,
                    c.k,
                    c.alpha0,
                    c.cs_orbifold,
                    c.cs_cover,
                    c.modulus_orbifold,
                    opt(c.reference_orbifold, 7),
                    opt(c.reference_cover, 7),
                    opt_e(c.delta_orbifold),
                    opt_e(c.delta_cover)
                );
            }
        }
        if !self.knots.is_empty() {
            if !out.is_empty() {
                out.push('\n');
            }
            out.push_str("n,alpha0,cs_knot,reference_alpha0,reference_cs,delta_alpha0,delta_cs\n");
            for c in &self.knots {
                let _ = writeln!(
                    out,
                    "{},{:.10},{:.10},{},{},{},{}",
                    c.n,
                    c.alpha0,
                    c.cs_knot,
                    opt(c.reference_alpha0, 5),
                    opt(c.reference_cs, 7),
                    opt_e(c.delta_alpha0),
                    opt_e(c.delta_cs)
                );
            }
        }
        out
    }

    fn to_markdown(&self) -> String {
        let mut out = String::new();
        if !self.orbifold.is_empty() || self.knots.is_empty() {
            out.push_str("| n | k | cs(orbifold) | cs(cover) | modulus | Δ orbifold | Δ cover |\n");
            out.push_str("|---|---|---|---|---|---|---|\n");
            for c in &self.orbifold {
                let _ = writeln!(
                    out,
                    "| {} | {} | {:.7} | {:.7} | {} | {} | {} |",
                    c.n,
                    c.k,
                    c.cs_orbifold,
                    c.cs_cover,
                    c.modulus_orbifold,
                    opt_e(c.delta_orbifold),
                    opt_e(c.delta_cover)
                );
            }
        }
        if !self.knots.is_empty() {
            out.push_str("\n| n | α₀ | cs(knot) | Δ α₀ | Δ cs |\n|---|---|---|---|---|\n");
            for c in &self.knots {
                let _ = writeln!(
                    out,
                    "| {} | {:.5} | {:.7} | {} | {} |",
                    c.n,
                    c.alpha0,
                    c.cs_knot,
                    opt_e(c.delta_alpha0),
                    opt_e(c.delta_cs)
                );
            }
        }
        if !self.skipped.is_empty() {
            out.push('\n');
        }
        for s in &self.skipped {
            let _ = writeln!(out, "skipped n={} k={}: {}", s.n, s.k, s.reason);
        }
        let s = &self.summary;
        let _ = write!(
            out,
            "\ncells: {}, compared: {}, max |Δ cs|: {:.3e} (tolerance {:.1e}), max |Δ α₀|: {:.3e} (tolerance {:.1e})\n",
            s.cells, s.compared, s.max_abs_delta_cs, s.tolerance_cs, s.max_abs_delta_alpha0, s.tolerance_alpha0
        );
        for e in &s.exceeded {
            let _ = writeln!(out, "outside tolerance: {e}");
        }
        out
    }
}

/// Inclusive integer range from the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntRange(pub Vec<i64>);

/// `LO..HI` (inclusive, empty when `LO > HI`) or a single integer.
pub fn parse_range(s: &str) -> std::result::Result<IntRange, String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|_| format!("invalid integer {t:?} in range {s:?}"))
    };
    match s.split_once("..") {
        Some((lo, hi)) => {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            let (lo, hi) = (parse(lo)?, parse(hi)?);
            if hi.saturating_sub(lo) > 10_000 {
                return Err(format!("range {s:?} is too large"));
            }
            Ok(IntRange((lo..=hi).collect()))
        }
        None => Ok(IntRange(vec![parse(s)?])),
    }
}
