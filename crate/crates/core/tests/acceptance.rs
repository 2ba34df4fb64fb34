//! Acceptance suite: one PASS/FAIL line per criterion, run sequentially so
//! that the runtime bounds are measured without competing test threads.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive};

use twistcs::chernsimons::{
    cover_modulus, lens_cs, orbifold_modulus, CsContext, CsValue, QuadratureSpec,
};
use twistcs::exactpoly::{BiPoly, Vars};
use twistcs::geom::{all_roots, find_alpha0, specialize, track_branches, ConeAngle, Rescaled};
use twistcs::golden::{knot_table, orbifold_table};
use twistcs::newton::verify_edge_theorem;
use twistcs::twistgen::{
    apoly_explicit, apoly_from_pdist, apoly_multiplier, apoly_recursive, pdist_explicit,
    pdist_recursive,
};

/// Parser for polynomials as printed: implicit multiplication, `^` with
/// optional braces, parentheses, and `\left( ... \right)`.
struct Printed<'a> {
    s: &'a [u8],
    pos: usize,
    vars: Vars,
}

impl<'a> Printed<'a> {
    fn parse(text: &'a str, vars: Vars) -> BiPoly {
        let mut p = Printed {
            s: text.as_bytes(),
            pos: 0,
            vars,
        };
        let e = p.expr();
        p.skip_ws();
        assert_eq!(p.pos, p.s.len(), "trailing input in {text:?}");
        e
    }

    fn skip_ws(&mut self) {
        loop {
            while self.pos < self.s.len() && (self.s[self.pos] as char).is_whitespace() {
                self.pos += 1;
            }
            let rest = &self.s[self.pos..];
            if rest.starts_with(b"\\left") {
                self.pos += 5;
            } else if rest.starts_with(b"\\right") {
                self.pos += 6;
            } else if rest.starts_with(b"*") {
                self.pos += 1;
            } else {
                return;
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn number(&mut self) -> u32 {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().unwrap()
    }

    fn expr(&mut self) -> BiPoly {
        let mut acc = BiPoly::zero(self.vars.clone());
        let mut sign = 1;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -sign;
                }
                _ => {}
            }
            let t = self.term();
            acc = if sign > 0 { &acc + &t } else { &acc - &t };
            sign = 1;
            match self.peek() {
                Some(b'+') | Some(b'-') => continue,
                _ => return acc,
            }
        }
    }

    fn term(&mut self) -> BiPoly {
        let mut acc = BiPoly::one(self.vars.clone());
        let mut any = false;
        while let Some(c) = self.peek() {
            if !(c.is_ascii_digit() || c.is_ascii_alphabetic() || c == b'(') {
                break;
            }
            let f = self.factor();
            acc = &acc * &f;
            any = true;
        }
        assert!(any, "empty term at byte {}", self.pos);
        acc
    }

    fn factor(&mut self) -> BiPoly {
        let c = self.peek().unwrap();
        let base = if c == b'(' {
            self.pos += 1;
            let e = self.expr();
            assert_eq!(self.peek(), Some(b')'));
            self.pos += 1;
            e
        } else if c.is_ascii_digit() {
            BiPoly::constant(self.vars.clone(), self.number())
        } else {
            self.pos += 1;
            let name = (c as char).to_string();
            let idx = self.vars.index_of(&name).expect("known variable");
            let (i, j) = if idx == 0 { (1, 0) } else { (0, 1) };
            BiPoly::monomial(self.vars.clone(), i, j, 1)
        };
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let braced = self.peek() == Some(b'{');
            if braced {
                self.pos += 1;
            }
            self.skip_ws();
            let e = self.number();
            if braced {
                assert_eq!(self.peek(), Some(b'}'));
                self.pos += 1;
            }
            return base.pow(e);
        }
        base
    }
}

struct Report {
    lines: Vec<(u32, bool, String)>,
}

impl Report {
    fn record(&mut self, id: u32, pass: bool, detail: String) {
        let status = if pass { "PASS" } else { "FAIL" };
        println!("criterion {id}: {status} — {detail}");
        self.lines.push((id, pass, detail));
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn criterion_1() -> (bool, String) {
    let t = Instant::now();
    let mut failures = Vec::new();
    for n in -10..=10i64 {
        match pdist_explicit(n) {
            Ok(e) if e == pdist_recursive(n) => {}
            other => failures.push(format!("P n={n}: {:?}", other.err())),
        }
        let rec = apoly_recursive(n).normalized().0;
        let exp = apoly_explicit(n).map(|a| a.normalized().0);
        let sub = apoly_from_pdist(n).map(|(a, _)| a.normalized().0);
        match (exp, sub) {
            (Ok(e), Ok(s)) if e == rec && s == rec => {}
            (e, s) => failures.push(format!(
                "A n={n}: explicit {}, from P {}",
                if e.as_ref().is_ok_and(|e| *e == rec) { "ok" } else { "differs" },
                if s.as_ref().is_ok_and(|s| *s == rec) { "ok" } else { "differs" }
            )),
        }
    }
    let el = t.elapsed();
    let ok = failures.is_empty() && el < Duration::from_secs(10);
    (
        ok,
        format!("21 knots, three A routes and two P routes, {} (limit 10s){}", secs(el), fmt_fail(&failures)),
    )
}

fn fmt_fail(f: &[String]) -> String {
    if f.is_empty() {
        String::new()
    } else {
        format!("; failures: {}", f.join("; "))
    }
}

fn criterion_2() -> (bool, String) {
    let vb = Vars::vb();
    let lm = Vars::lm();
    let p_cases = [
        (-1, r"\left(2 B^2-2\right) V+2 B^2-1"),
        (0, "1"),
        (1, r"\left(4 B^4-8 B^2+4\right) V^2+\left(2-2 B^2\right) V-4 B^4+6 B^2-1"),
    ];
    let a_cases = [
        (
            -2,
            "1-L+2 L M^2+2 L M^4+L^2 M^4-L^2 M^6-L M^8+L M^{10}+2 L^2 M^{10}\
             +2 L^2 M^{12}-L^2 M^{14}+L^3 M^{14}",
        ),
        (-1, "1+L M^6"),
        (0, "-1"),
        (1, "L-L M^2-M^4-2 L M^4-L^2 M^4-L M^6+L M^8"),
    ];
    let a_u = "1-L+2 L M^2+M^4+2 L M^4+L^2 M^4+2 L M^6-L M^8+L^2 M^8";
    let mut failures = Vec::new();
    for (n, text) in p_cases {
        if pdist_recursive(n).poly != Printed::parse(text, vb.clone()) {
            failures.push(format!("P_{}", 2 * n));
        }
    }
    for (n, text) in a_cases {
        if apoly_recursive(n).poly != Printed::parse(text, lm.clone()) {
            failures.push(format!("A_{}", 2 * n));
        }
    }
    if apoly_multiplier() != Printed::parse(a_u, lm) {
        failures.push("A_u".into());
    }
    (
        failures.is_empty(),
        format!("P_-2, P_0, P_2, A_-4, A_-2, A_0, A_2, A_u term by term{}", fmt_fail(&failures)),
    )
}

fn criterion_3() -> (bool, String) {
    let t = Instant::now();
    let mut failures = Vec::new();
    for n in (-10..=10i64).filter(|&n| n != 0) {
        match verify_edge_theorem(n) {
            Ok(r) if r.pass() && r.corners_unit && r.all_edges_factor => {}
            Ok(r) => failures.push(format!("n={n}: {:?}", r.failures)),
            Err(e) => failures.push(format!("n={n}: {e}")),
        }
    }
    let el = t.elapsed();
    (
        failures.is_empty() && el < Duration::from_secs(5),
        format!("20 knots, {} (limit 5s){}", secs(el), fmt_fail(&failures)),
    )
}

fn criterion_4() -> (bool, String) {
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for row in knot_table().expect("embedded table") {
        match find_alpha0(row.n) {
            Ok(a) => {
                let d = (a.alpha0 - row.alpha0).abs();
                worst = worst.max(d);
                if d > 1e-4 {
                    failures.push(format!("n={}: {:.6} vs {}", row.n, a.alpha0, row.alpha0));
                }
            }
            Err(e) => failures.push(format!("n={}: {e}", row.n)),
        }
    }
    (
        failures.is_empty(),
        format!("16 knots, max |Δα₀| = {worst:.2e} (limit 1e-4){}", fmt_fail(&failures)),
    )
}

fn criterion_5() -> (bool, String) {
    let quad = QuadratureSpec::default();
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    let mut failures = Vec::new();
    for row in knot_table().expect("embedded table") {
        let t = Instant::now();
        match CsContext::new(row.n, quad).and_then(|c| c.knot()) {
            Ok(v) => {
                slowest = slowest.max(t.elapsed());
                let d = (v.canonical - row.cs).abs();
                worst = worst.max(d);
                if d > 2e-5 {
                    failures.push(format!("n={}: {:.7} vs {}", row.n, v.canonical, row.cs));
                }
            }
            Err(e) => failures.push(format!("n={}: {e}", row.n)),
        }
    }
    (
        failures.is_empty() && slowest < Duration::from_secs(10),
        format!(
            "16 knots, max |Δcs| = {worst:.2e} (limit 2e-5), slowest knot {} (limit 10s){}",
            secs(slowest),
            fmt_fail(&failures)
        ),
    )
}

fn criterion_6() -> (bool, String) {
    let quad = QuadratureSpec::default();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    let rows = orbifold_table().expect("embedded table");
    for row in &rows {
        let r = CsContext::get(row.n, quad).and_then(|c| c.orbifold_and_cover(row.k));
        match r {
            Ok((orb, cover)) => {
                let window = orb.canonical >= 0.0
                    && orb.canonical < orbifold_modulus(row.k).to_f64().unwrap()
                    && cover.canonical >= 0.0
                    && cover.canonical < cover_modulus(row.k).to_f64().unwrap();
                if !window {
                    failures.push(format!("n={} k={}: outside modulus window", row.n, row.k));
                }
                for (what, got, want) in [
                    ("orbifold", orb.canonical, row.orbifold),
                    ("cover", cover.canonical, row.cover),
                ] {
                    let d = (got - want).abs();
                    worst = worst.max(d);
                    if d > 2e-5 {
                        failures.push(format!(
                            "{what} n={} k={}: {got:.7} vs {want} (Δ {:+.1e})",
                            row.n,
                            row.k,
                            got - want
                        ));
                    }
                }
            }
            Err(e) => failures.push(format!("n={} k={}: {e}", row.n, row.k)),
        }
    }
    (
        failures.is_empty(),
        format!(
            "{} cells, {} comparisons outside 2e-5, max |Δ| = {worst:.2e}{}",
            rows.len(),
            failures.len(),
            fmt_fail(&failures)
        ),
    )
}

fn criterion_7() -> (bool, String) {
    let mut failures = Vec::new();
    let mut tested = 0;
    for n in (-200..=200i64).filter(|&n| n != 0) {
        // Independent route: floor division on arbitrary-precision integers.
        let num = BigInt::from(6 * n + 4);
        let den = BigInt::from(8 * n + 2);
        let q = BigRational::new(num.clone(), den.clone());
        let expected = &q - BigRational::from_integer(num.div_floor(&den));
        let got = lens_cs(n).expect("n != 0");
        let got = BigRational::new(BigInt::from(*got.numer()), BigInt::from(*got.denom()));
        let in_range = !got.is_negative() && got < BigRational::one();
        let congruent = (&q - &got).is_integer();
        if got != expected || !in_range || !congruent {
            failures.push(format!("n={n}: {got}"));
        }
        tested += 1;
    }
    let spot = [(1, Ratio::new(0, 1)), (2, Ratio::new(8, 9)), (-2, Ratio::new(4, 7))];
    for (n, r) in spot {
        if lens_cs(n).ok() != Some(r) {
            failures.push(format!("n={n}"));
        }
    }
    if lens_cs(0).is_ok() {
        failures.push("n=0 accepted".into());
    }
    (
        failures.is_empty(),
        format!("{tested} values of n, exact rational comparison{}", fmt_fail(&failures)),
    )
}

fn vieta_check(failures: &mut Vec<String>) {
    for n in [2i64, -3, 5, -7] {
        let q = Rescaled::get(n).expect("hyperbolic");
        for alpha in [0.0, 0.7, 1.9, 2.9, PI] {
            let p = q.at(alpha);
            check_vieta(&format!("Q n={n} α={alpha}"), p.coeffs(), &all_roots(&p).unwrap(), failures);
        }
        let p = specialize(n, ConeAngle::new(2.0).unwrap()).unwrap();
        check_vieta(&format!("P n={n}"), p.coeffs(), &all_roots(&p).unwrap(), failures);
    }
}

fn check_vieta(what: &str, c: &[Complex64], roots: &[Complex64], failures: &mut Vec<String>) {
    let d = c.len() - 1;
    let lead = c[d];
    let sum: Complex64 = roots.iter().sum();
    let prod: Complex64 = roots.iter().product();
    let want_sum = -c[d - 1] / lead;
    let want_prod = c[0] / lead * if d % 2 == 0 { 1.0 } else { -1.0 };
    let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
    let ok_sum = (sum - want_sum).norm() <= 1e-9 * scale * d as f64;
    let ok_prod = (prod - want_prod).norm() <= 1e-8 * scale.powi(d as i32);
    if roots.len() != d || !ok_sum || !ok_prod {
        failures.push(format!("Vieta {what}"));
    }
}

fn criterion_8() -> (bool, String) {
    let mut failures = Vec::new();
    vieta_check(&mut failures);

    // Simpson convergence: doubling the intervals moves the raw sum by < 1e-8.
    let base = QuadratureSpec::default();
    let fine = QuadratureSpec::new(20_000, 20_000).unwrap();
    let mut max_shift = 0.0f64;
    for (n, k) in [(2i64, 4i64), (-3, 5), (4, 7), (-6, 3)] {
        let a = CsContext::get(n, base).unwrap();
        let b = CsContext::get(n, fine).unwrap();
        let angle = 2.0 * PI / k as f64;
        let shift = (a.raw(angle).unwrap() - b.raw(angle).unwrap()).abs();
        let knot_shift = (a.raw(0.0).unwrap() - b.raw(0.0).unwrap()).abs();
        max_shift = max_shift.max(shift).max(knot_shift);
        if shift >= 1e-8 || knot_shift >= 1e-8 {
            failures.push(format!("Simpson n={n} k={k}: shift {shift:.1e}"));
        }
    }

    // Branch continuity and phase invariants along the tracked branch.
    for n in [2i64, -4, 7] {
        let grid = 2000;
        let tr = track_branches(n, 0.0, grid).unwrap();
        let h = tr.hyperbolic.branches[0].clone();
        let step = tr.alpha0 / grid as f64;
        let jump = h.windows(2).map(|w| (w[1] - w[0]).norm()).fold(0.0, f64::max);
        if jump > 0.05 {
            failures.push(format!("hyperbolic jump n={n}: {jump:.3}"));
        }
        // Im V <= 0 on the hyperbolic side, V₁, V₂ real on the spherical side.
        if h.iter().skip(1).any(|x| x.im < -1e-12) {
            failures.push(format!("hyperbolic branch leaves Im V <= 0, n={n}"));
        }
        for b in &tr.spherical.branches {
            if b.iter().any(|x| x.im.abs() > 1e-7 * (1.0 + x.norm())) {
                failures.push(format!("spherical branch not real, n={n}"));
            }
        }
        for seg in [&tr.hyperbolic, &tr.spherical] {
            let f = seg.integrand_samples().unwrap();
            let df = f.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
            if !(df < 100.0 * step.max(1e-3)) {
                failures.push(format!("integrand discontinuity n={n}: {df:.3}"));
            }
        }
        let fh = tr.hyperbolic.integrand_samples().unwrap();
        let fs = tr.spherical.integrand_samples().unwrap();
        if (fh[0] - fs[0]).abs() > 1e-6 {
            failures.push(format!("integrand mismatch at α₀, n={n}"));
        }
        if (fh[grid] - 2.0 * PI).abs() > 1e-9 {
            failures.push(format!("integrand limit at α = 0, n={n}: {}", fh[grid]));
        }
    }

    // Canonical representatives lie in [0, modulus) and differ from raw by a multiple of it.
    let mut rng_state = 0x2545_f491_4f6c_dd1du64;
    for _ in 0..10_000 {
        rng_state ^= rng_state << 13;
        rng_state ^= rng_state >> 7;
        rng_state ^= rng_state << 17;
        let raw = (rng_state as f64 / u64::MAX as f64 - 0.5) * 20.0;
        let k = 2 + (rng_state % 15) as i64;
        for m in [orbifold_modulus(k), cover_modulus(k)] {
            let v = CsValue::reduce(raw, m);
            let mf = m.to_f64().unwrap();
            let q = (raw - v.canonical) / mf;
            if !(v.canonical >= 0.0 && v.canonical < mf) || (q - q.round()).abs() > 1e-6 {
                failures.push(format!("canonical raw={raw} mod {m}"));
            }
        }
    }
    (
        failures.is_empty(),
        format!(
            "Vieta on 24 polynomials, Simpson doubling shift {max_shift:.1e} (limit 1e-8), \
             branch continuity on 3 knots, 20000 reductions{}",
            fmt_fail(&failures)
        ),
    )
}

fn main() {
    let mut report = Report { lines: Vec::new() };
    let criteria: [(u32, fn() -> (bool, String)); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    for (id, f) in criteria {
        let t = Instant::now();
        let (pass, detail) = f();
        report.record(id, pass, format!("{detail} [{}]", secs(t.elapsed())));
    }
    let failed: Vec<u32> = report.lines.iter().filter(|l| !l.1).map(|l| l.0).collect();
    if failed.is_empty() {
        println!("acceptance: all 8 criteria pass");
    } else {
        println!("acceptance: {} of 8 criteria fail: {failed:?}", failed.len());
        std::process::exit(1);
    }
}
