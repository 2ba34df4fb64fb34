//! Newton polygons of A-polynomials and their edge polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactpoly::{BiPoly, UniPolyQ};
use crate::twistgen::apoly_recursive;

pub type Point = (i64, i64);

/// Edge slope `dM/dL`; vertical edges have no finite slope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slope {
    Finite(Ratio<i64>),
    Vertical,
}

impl Slope {
    pub fn int(s: i64) -> Self {
        Slope::Finite(Ratio::from_integer(s))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Slope::Finite(r) if r.is_zero())
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Slope::Vertical => f.write_str("1/0"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub start: Point,
    pub end: Point,
    pub slope: Slope,
    /// Lattice points from `start` to `end` inclusive.
    pub lattice_points: Vec<Point>,
}

impl Edge {
    fn new(start: Point, end: Point) -> Self {
        let (di, dj) = (end.0 - start.0, end.1 - start.1);
        let g = di.gcd(&dj);
        let slope = if di == 0 {
            Slope::Vertical
        } else {
            Slope::Finite(Ratio::new(dj, di))
        };
        let lattice_points = (0..=g)
            .map(|k| (start.0 + k * di / g, start.1 + k * dj / g))
            .collect();
        Edge {
            start,
            end,
            slope,
            lattice_points,
        }
    }

    /// Number of primitive lattice steps along the edge.
    pub fn lattice_length(&self) -> usize {
        self.lattice_points.len() - 1
    }
}

/// Convex hull of the exponent support, counterclockwise from the
/// lexicographically least vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<Point>,
    pub edges: Vec<Edge>,
}

fn cross(o: Point, a: Point, b: Point) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Monotone-chain hull with collinear points dropped.
fn convex_hull(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

pub fn newton_polygon(p: &BiPoly) -> Result<NewtonPolygon> {
    if p.is_zero() {
        return Err(Error::usage("Newton polygon of the zero polynomial"));
    }
    let vertices = convex_hull(p.terms().map(|(e, _)| e).collect());
    let edges = match vertices.len() {
        1 => Vec::new(),
        2 => vec![Edge::new(vertices[0], vertices[1])],
        k => (0..k)
            .map(|i| Edge::new(vertices[i], vertices[(i + 1) % k]))
            .collect(),
    };
    Ok(NewtonPolygon { vertices, edges })
}

impl NewtonPolygon {
    pub fn contains(&self, q: Point) -> bool {
        match self.vertices.len() {
            1 => self.vertices[0] == q,
            2 => self.edges[0].lattice_points.contains(&q),
            _ => self.edges.iter().all(|e| cross(e.start, e.end, q) >= 0),
        }
    }

    /// Distinct slopes of the edges, excluding vertical and horizontal ones.
    pub fn nonzero_slopes(&self) -> Vec<Slope> {
        let mut s: Vec<Slope> = self
            .edges
            .iter()
            .map(|e| e.slope)
            .filter(|s| !s.is_zero() && *s != Slope::Vertical)
            .collect();
        s.sort();
        s.dedup();
        s
    }

    pub fn to_json(&self, p: &BiPoly) -> Value {
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|e| {
                let ep = edge_polynomial(p, e).expect("edge of own polygon");
                json!({
                    "slope": e.slope.to_string(),
                    "start": [e.start.0, e.start.1],
                    "end": [e.end.0, e.end.1],
                    "poly_t": ep.coeffs.iter().map(int_json).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "vertices": self.vertices.iter().map(|v| json!([v.0, v.1])).collect::<Vec<_>>(),
            "edges": edges,
        })
    }
}

fn int_json(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(v) => json!(v),
        None => json!(c.to_string()),
    }
}

/// Univariate polynomial in `t = L^b M^a` read off one hull edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePoly {
    pub slope: Slope,
    /// Coefficients in ascending powers of `t`.
    pub coeffs: Vec<BigInt>,
}

impl EdgePoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn to_unipoly(&self) -> UniPolyQ {
        UniPolyQ::from_ints("t", self.coeffs.iter().cloned())
    }

    /// `sign * (t-1)^k (t+1)^l` if the polynomial has that shape.
    pub fn unit_root_factorization(&self) -> Option<(i8, u32, u32)> {
        let mut c = self.coeffs.clone();
        let mut exps = [0u32; 2];
        for (slot, root) in [(0usize, 1i64), (1, -1)] {
            while c.len() > 1 {
                match synthetic_div(&c, root) {
                    Some(q) => {
                        c = q;
                        exps[slot] += 1;
                    }
                    None => break,
                }
            }
        }
        match c.as_slice() {
            [u] if u.is_one() => Some((1, exps[0], exps[1])),
            [u] if (-u).is_one() => Some((-1, exps[0], exps[1])),
            _ => None,
        }
    }
}

impl fmt::Display for EdgePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_unipoly())
    }
}

/// Quotient by `t - root`, if exact.
fn synthetic_div(c: &[BigInt], root: i64) -> Option<Vec<BigInt>> {
    let r = BigInt::from(root);
    let mut q = vec![BigInt::zero(); c.len() - 1];
    let mut acc = BigInt::zero();
    for k in (1..c.len()).rev() {
        acc = &acc * &r + &c[k];
        q[k - 1] = acc.clone();
    }
    (&acc * &r + &c[0]).is_zero().then_some(q)
}

/// Edge polynomial of `p` along `edge`, read from its lexicographically
/// smaller corner so the constant term is that corner's coefficient.
pub fn edge_polynomial(p: &BiPoly, edge: &Edge) -> Result<EdgePoly> {
    let poly = newton_polygon(p)?;
    let on_hull = poly.edges.iter().any(|e| {
        (e.start == edge.start && e.end == edge.end) || (e.start == edge.end && e.end == edge.start)
    });
    if !on_hull {
        return Err(Error::usage(format!(
            "edge {:?} -> {:?} is not on the Newton polygon",
            edge.start, edge.end
        )));
    }
    let mut pts = edge.lattice_points.clone();
    if pts.first() > pts.last() {
        pts.reverse();
    }
    let coeffs = pts.iter().map(|&(i, j)| p.coeff(i, j)).collect();
    Ok(EdgePoly {
        slope: edge.slope,
        coeffs,
    })
}

/// n-th cyclotomic polynomial, by dividing `t^m - 1` by the lower ones.
fn cyclotomic(m: usize) -> UniPolyQ {
    let mut c = vec![BigInt::zero(); m + 1];
    c[0] = -BigInt::one();
    c[m] = BigInt::one();
    let mut p = UniPolyQ::from_ints("t", c);
    for d in (1..m).filter(|d| m % d == 0) {
        p = p.div_exact(&cyclotomic(d)).expect("cyclotomic divides t^m - 1");
    }
    p
}

/// Least common multiple of the orders of the roots of unity among the roots
/// of `e` (1 when there are none).
pub fn boundary_component_count(e: &EdgePoly) -> u64 {
    let p = e.to_unipoly();
    let Some(d) = p.degree().filter(|&d| d > 0) else {
        return 1;
    };
    // phi(m) >= sqrt(m/2), so cyclotomic factors of degree <= d have m <= 2 d^2.
    (1..=2 * d * d)
        .filter(|&m| p.div_exact(&cyclotomic(m)).is_some())
        .fold(1u64, |acc, m| acc.lcm(&(m as u64)))
}

/// One edge checked against the closed-form edge polynomials.
#[derive(Clone, Debug)]
pub struct EdgeCheck {
    pub start: Point,
    pub end: Point,
    pub slope: Slope,
    pub poly: EdgePoly,
    pub expected: String,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct EdgeTheoremReport {
    pub n: i64,
    pub nonzero_slopes: Vec<Slope>,
    pub expected_slopes: Vec<Slope>,
    pub checks: Vec<EdgeCheck>,
    pub corners_unit: bool,
    pub all_edges_factor: bool,
    pub failures: Vec<String>,
}

impl EdgeTheoremReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Expected edge polynomial for a given slope: `(shape, sign)` where the sign
/// is `None` when the closed form only fixes it up to `±`.
fn expected_edge(n: i64, slope: Slope) -> Option<(u32, u32, Option<i8>)> {
    if n > 0 {
        if slope == Slope::int(-4 * n) {
            return Some((1, 0, None));
        }
        if slope == Slope::int(4) {
            return Some((n as u32, 0, if n % 2 == 0 { Some(-1) } else { None }));
        }
    } else {
        if slope == Slope::int(-4 * n + 2) {
            return Some((0, 1, Some(1)));
        }
        if slope == Slope::int(4) && n < -1 {
            let odd = n.rem_euclid(2) == 1;
            return Some(((-n - 1) as u32, 0, if odd { Some(1) } else { None }));
        }
    }
    None
}

fn describe(k: u32, l: u32, sign: Option<i8>) -> String {
    let s = match sign {
        None => "±",
        Some(-1) => "-",
        _ => "",
    };
    let mut f = Vec::new();
    if k > 0 {
        f.push(if k == 1 { "(t-1)".to_string() } else { format!("(t-1)^{k}") });
    }
    if l > 0 {
        f.push(if l == 1 { "(t+1)".to_string() } else { format!("(t+1)^{l}") });
    }
    format!("{s}{}", f.join(""))
}

/// Verify the closed-form edge polynomials of `A_2n` on every edge of nonzero
/// slope, the unit corner coefficients, and that every edge polynomial
/// (horizontal ones included) is `±(t-1)^k (t+1)^l`.
pub fn verify_edge_theorem(n: i64) -> Result<EdgeTheoremReport> {
    if n == 0 {
        return Err(Error::usage("A_0 is constant and has no edges"));
    }
    let a = apoly_recursive(n).poly;
    let poly = newton_polygon(&a)?;
    let expected_slopes = if n == -1 {
        vec![Slope::int(6)]
    } else if n > 0 {
        vec![Slope::int(-4 * n), Slope::int(4)]
    } else {
        vec![Slope::int(4), Slope::int(-4 * n + 2)]
    };
    let mut failures = Vec::new();
    let nonzero_slopes = poly.nonzero_slopes();
    if nonzero_slopes != expected_slopes {
        failures.push(format!(
            "slopes {:?} differ from expected {:?}",
            nonzero_slopes.iter().map(Slope::to_string).collect::<Vec<_>>(),
            expected_slopes.iter().map(Slope::to_string).collect::<Vec<_>>()
        ));
    }
    let corners_unit = poly.vertices.iter().all(|&(i, j)| a.coeff(i, j).abs().is_one());
    if !corners_unit {
        failures.push("a corner coefficient is not ±1".into());
    }
    let mut all_edges_factor = true;
    let mut checks = Vec::new();
    for e in &poly.edges {
        let ep = edge_polynomial(&a, e)?;
        let fact = ep.unit_root_factorization();
        if fact.is_none() {
            all_edges_factor = false;
            failures.push(format!("edge poly {ep} is not ±(t-1)^k(t+1)^l"));
        }
        if e.slope.is_zero() || e.slope == Slope::Vertical {
            continue;
        }
        let Some((k, l, sign)) = expected_edge(n, e.slope) else {
            continue; // unexpected slope already reported
        };
        let pass = matches!(fact, Some((s, fk, fl)) if fk == k && fl == l && sign.is_none_or(|w| w == s));
        if !pass {
            failures.push(format!(
                "slope {} edge {:?}->{:?}: got {ep}, expected {}",
                e.slope,
                e.start,
                e.end,
                describe(k, l, sign)
            ));
        }
        checks.push(EdgeCheck {
            start: e.start,
            end: e.end,
            slope: e.slope,
            poly: ep,
            expected: describe(k, l, sign),
            pass,
        });
    }
    Ok(EdgeTheoremReport {
        n,
        nonzero_slopes,
        expected_slopes,
        checks,
        corners_unit,
        all_edges_factor,
        failures,
    })
}
