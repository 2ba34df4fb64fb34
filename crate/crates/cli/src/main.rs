//! `twistcs`: exact twist-knot polynomials, Newton polygons, Euclidean angles
//! and Chern–Simons invariants from the command line.
//!
//! Exit codes: 0 success, 1 table deltas outside tolerance, 2 usage error,
//! 3 identity mismatch or failed verification, 4 non-hyperbolic input,
//! 5 numerical or geometric failure.

mod cache;
mod render;
mod tables;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use twistcs::chernsimons::{CsResult, QuadratureSpec};
use twistcs::exactpoly::BiPoly;
use twistcs::geom::{find_alpha0, track_branches};
use twistcs::newton::{boundary_component_count, newton_polygon, verify_edge_theorem};
use twistcs::twistgen::{
    apoly_explicit, apoly_from_pdist, apoly_recursive, cross_check_apoly, cross_check_pdist,
    pdist_explicit, pdist_recursive, TwistKnot,
};
use twistcs::{Error, Result};

use cache::Cache;
use render::{json_pretty, Format, Layout};

#[derive(Parser)]
#[command(name = "twistcs", version, about = "Twist-knot polynomials and Chern–Simons invariants")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// Simpson intervals on the hyperbolic and spherical segments, `NH,NS`.
    #[arg(long, global = true, value_parser = parse_intervals, default_value = "10000,10000")]
    intervals: QuadratureSpec,

    /// Directory for cached exact polynomials.
    #[arg(long, global = true, env = "TWISTCS_CACHE")]
    cache: Option<PathBuf>,

    /// Worker threads for the table harness.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,

    /// Largest accepted |delta| of a Chern–Simons value against the reference tables.
    #[arg(long, global = true, default_value_t = 2e-5)]
    tolerance: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct KnotArg {
    /// Twist parameter: the knot has 2n half-twists.
    #[arg(short, long, allow_hyphen_values = true, required_unless_present = "raw_crossings")]
    n: Option<i64>,

    /// Number of horizontal crossings, normalized to the even parameter by mirroring.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "n")]
    raw_crossings: Option<i64>,
}

impl KnotArg {
    fn n(&self) -> i64 {
        match (self.n, self.raw_crossings) {
            (Some(n), _) => n,
            (None, Some(m)) => TwistKnot::from_crossings(m).n,
            (None, None) => unreachable!("clap requires one of the two"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum APolyMethod {
    Recursive,
    Explicit,
    FromPdist,
    CrossCheck,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PDistMethod {
    Recursive,
    Explicit,
    CrossCheck,
}

#[derive(Subcommand)]
enum Command {
    /// Print the A-polynomial A_2n(L, M).
    Apoly {
        #[command(flatten)]
        knot: KnotArg,
        #[arg(long, value_enum, default_value = "recursive")]
        method: APolyMethod,
    },
    /// Print the distance polynomial P_2n(V, B).
    Pdist {
        #[command(flatten)]
        knot: KnotArg,
        #[arg(long, value_enum, default_value = "recursive")]
        method: PDistMethod,
    },
    /// Newton polygon, edge polynomials and verification of their closed forms.
    Newton {
        #[command(flatten)]
        knot: KnotArg,
    },
    /// The Euclidean angle α₀.
    Alpha0 {
        #[command(flatten)]
        knot: KnotArg,
    },
    /// Chern–Simons invariant of an orbifold and its cyclic cover, or of the knot.
    Cs {
        #[command(flatten)]
        knot: KnotArg,
        /// Orbifold order: cone angle 2π/k.
        #[arg(short, long, required_unless_present = "cusp", allow_hyphen_values = true)]
        k: Option<i64>,
        /// The knot complement instead of an orbifold.
        #[arg(long, conflicts_with = "k")]
        cusp: bool,
    },
    /// Reproduce the orbifold, cover and knot tables and compare with reference values.
    Tables {
        /// Twist parameters, `LO..HI` inclusive.
        #[arg(long = "n", value_parser = tables::parse_range, default_value = "-9..9", allow_hyphen_values = true)]
        ns: tables::IntRange,
        /// Orbifold orders, `LO..HI` inclusive.
        #[arg(long = "k", value_parser = tables::parse_range, default_value = "3..10", allow_hyphen_values = true)]
        ks: tables::IntRange,
        /// Also compute the knot-complement table.
        #[arg(long)]
        knots: bool,
        /// Largest accepted |delta| of α₀ against the reference table.
        #[arg(long, default_value_t = 1e-4)]
        alpha0_tolerance: f64,
    },
    /// Tracked geometric branch as CSV, for plotting.
    DumpBranches {
        #[command(flatten)]
        knot: KnotArg,
        /// Lower end of the hyperbolic segment.
        #[arg(long, default_value_t = 0.0)]
        alpha_lo: f64,
        /// Samples per segment.
        #[arg(long, default_value_t = 1000)]
        grid: usize,
    },
}

fn parse_intervals(s: &str) -> std::result::Result<QuadratureSpec, String> {
    let (h, sph) = s
        .split_once(',')
        .ok_or_else(|| format!("expected NH,NS, got {s:?}"))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("invalid interval count {t:?}"))
    };
    QuadratureSpec::new(parse(h)?, parse(sph)?).map_err(|e| e.to_string())
}

/// Outcome of a subcommand that ran to completion.
enum Outcome {
    Ok(String),
    /// Printed, but the command's check failed; carries the exit code.
    Failed(String, u8),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Ok(out)) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::Failed(out, code)) => {
            println!("{out}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("twistcs: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let cache = cli.cache.as_deref().map(Cache::new);
    let cache = cache.as_ref();
    let fmt = cli.format;
    match &cli.command {
        Command::Apoly { knot, method } => {
            let n = knot.n();
            let p = match method {
                APolyMethod::Recursive => {
                    Cache::get_or_compute(cache, "apoly", n, || Ok::<_, Error>(apoly_recursive(n).poly))?
                }
                APolyMethod::Explicit => apoly_explicit(n)?.poly,
                APolyMethod::FromPdist => apoly_from_pdist(n)?.0.poly,
                APolyMethod::CrossCheck => cross_check_apoly(n)?.poly,
            };
            Ok(Outcome::Ok(render::polynomial("apoly", n, &p, fmt, Layout::Flat)))
        }
        Command::Pdist { knot, method } => {
            let n = knot.n();
            let p = match method {
                PDistMethod::Recursive => {
                    Cache::get_or_compute(cache, "pdist", n, || Ok::<_, Error>(pdist_recursive(n).poly))?
                }
                PDistMethod::Explicit => pdist_explicit(n)?.poly,
                PDistMethod::CrossCheck => cross_check_pdist(n)?.poly,
            };
            Ok(Outcome::Ok(render::polynomial("pdist", n, &p, fmt, Layout::Grouped)))
        }
        Command::Newton { knot } => newton(knot.n(), cache, fmt),
        Command::Alpha0 { knot } => {
            let a = find_alpha0(knot.n())?;
            Ok(Outcome::Ok(match fmt {
                Format::Text => format!("{:.10}", a.alpha0),
                Format::Csv => format!("n,alpha0,b0,x_double\n{},{:.12},{:.12},{:.12}", a.n, a.alpha0, a.b0, a.x_double),
                Format::Json => json_pretty(&json!({
                    "n": a.n,
                    "alpha0": a.alpha0,
                    "b0": a.b0,
                    "x_double": a.x_double,
                    "candidates": a.candidates.iter().map(|c| json!({
                        "alpha": c.alpha, "b": c.b, "passes": c.passes
                    })).collect::<Vec<_>>(),
                })),
            }))
        }
        Command::Cs { knot, k, cusp } => {
            let n = knot.n();
            let r = match (k, cusp) {
                (Some(k), false) => CsResult::orbifold(n, *k, cli.intervals)?,
                _ => CsResult::knot(n, cli.intervals)?,
            };
            Ok(Outcome::Ok(render_cs(&r, fmt)))
        }
        Command::Tables {
            ns,
            ks,
            knots,
            alpha0_tolerance,
        } => {
            let req = tables::TableRequest {
                ns: ns.0.clone(),
                ks: ks.0.clone(),
                knots: *knots,
                quad: cli.intervals,
                tolerance_cs: cli.tolerance,
                tolerance_alpha0: *alpha0_tolerance,
            };
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(cli.jobs as usize)
                .build()
                .map_err(|e| Error::usage(format!("cannot start {} workers: {e}", cli.jobs)))?;
            let t = pool.install(|| tables::compute(&req))?;
            let out = t.render(fmt);
            if fmt == Format::Csv {
                eprintln!(
                    "max |delta cs| {:.3e}, max |delta alpha0| {:.3e}, {} outside tolerance",
                    t.summary.max_abs_delta_cs,
                    t.summary.max_abs_delta_alpha0,
                    t.summary.exceeded.len()
                );
            }
            Ok(if t.within_tolerance() {
                Outcome::Ok(out)
            } else {
                Outcome::Failed(out, 1)
            })
        }
        Command::DumpBranches {
            knot,
            alpha_lo,
            grid,
        } => Ok(Outcome::Ok(
            track_branches(knot.n(), *alpha_lo, *grid)?
                .to_csv()?
                .trim_end()
                .to_string(),
        )),
    }
}

fn newton(n: i64, cache: Option<&Cache>, fmt: Format) -> Result<Outcome> {
    let a = Cache::get_or_compute(cache, "apoly", n, || Ok::<_, Error>(apoly_recursive(n).poly))?;
    let polygon = newton_polygon(&a)?;
    let report = verify_edge_theorem(n)?;
    let edges: Vec<_> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "slope": c.slope.to_string(),
                "start": [c.start.0, c.start.1],
                "end": [c.end.0, c.end.1],
                "edge_polynomial": render::univariate(&c.poly.coeffs, "t"),
                "expected": c.expected,
                "boundary_components": boundary_component_count(&c.poly),
                "pass": c.pass,
            })
        })
        .collect();
    let slopes = |s: &[twistcs::newton::Slope]| s.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let out = match fmt {
        Format::Json | Format::Csv => json_pretty(&json!({
            "n": n,
            "polygon": polygon.to_json(&a),
            "verification": {
                "pass": report.pass(),
                "nonzero_slopes": slopes(&report.nonzero_slopes),
                "expected_slopes": slopes(&report.expected_slopes),
                "corners_unit": report.corners_unit,
                "all_edges_factor": report.all_edges_factor,
                "edges": edges,
                "failures": report.failures,
            },
        })),
        Format::Text => newton_text(n, &a, &report, &edges),
    };
    Ok(if report.pass() {
        Outcome::Ok(out)
    } else {
        Outcome::Failed(out, 3)
    })
}

fn newton_text(
    n: i64,
    a: &BiPoly,
    report: &twistcs::newton::EdgeTheoremReport,
    edges: &[serde_json::Value],
) -> String {
    let mut lines = vec![
        format!("A_{} has {} terms", 2 * n, a.len()),
        format!(
            "nonzero slopes: {}",
            report
                .nonzero_slopes
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ),
    ];
    for e in edges {
        lines.push(format!(
            "edge slope {} from {} to {}: {}  [expected {}, boundary components {}]",
            e["slope"].as_str().unwrap_or(""),
            e["start"],
            e["end"],
            e["edge_polynomial"].as_str().unwrap_or(""),
            e["expected"].as_str().unwrap_or(""),
            e["boundary_components"],
        ));
    }
    lines.push(format!("corner coefficients ±1: {}", report.corners_unit));
    lines.push(format!("all edge polynomials ±(t-1)^k(t+1)^l: {}", report.all_edges_factor));
    for f in &report.failures {
        lines.push(format!("failure: {f}"));
    }
    lines.push(format!(
        "verification: {}",
        if report.pass() { "pass" } else { "FAIL" }
    ));
    lines.join("\n")
}

fn render_cs(r: &CsResult, fmt: Format) -> String {
    match fmt {
        Format::Json => json_pretty(&json!(r)),
        Format::Csv => match r.k {
            Some(k) => format!(
                "n,k,alpha0,cs_orbifold,cs_cover,modulus_orbifold\n{},{k},{:.10},{:.10},{:.10},{}",
                r.n,
                r.alpha0,
                r.cs_orbifold.unwrap_or(f64::NAN),
                r.cs_cover.unwrap_or(f64::NAN),
                r.modulus_orbifold.as_deref().unwrap_or("")
            ),
            None => format!(
                "n,alpha0,cs_knot\n{},{:.10},{:.10}",
                r.n,
                r.alpha0,
                r.cs_knot.unwrap_or(f64::NAN)
            ),
        },
        Format::Text => {
            let mut lines = vec![format!("alpha0: {:.7}", r.alpha0)];
            if let (Some(o), Some(c)) = (r.cs_orbifold, r.cs_cover) {
                let k = r.k.unwrap_or_default();
                let m = r.modulus_orbifold.as_deref().unwrap_or("");
                lines.push(format!("cs_orbifold: {o:.7} (mod {m})"));
                lines.push(format!(
                    "cs_cover: {c:.7} (mod {})",
                    if k % 2 == 0 { "1" } else { "1/2" }
                ));
            }
            if let Some(c) = r.cs_knot {
                lines.push(format!("cs_knot: {c:.7} (mod 1/2)"));
            }
            lines.push(format!(
                "intervals: {},{}",
                r.intervals[0], r.intervals[1]
            ));
            lines.join("\n")
        }
    }
}
