//! Published reference values for the Chern–Simons tables, embedded at
//! build time.

use serde::Deserialize;

use crate::error::{Error, Result};

const ORBIFOLD_CSV: &str = include_str!("../data/orbifold.csv");
const KNOT_CSV: &str = include_str!("../data/knot.csv");

/// One cell of the orbifold/cover table.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
pub struct OrbifoldRow {
    pub n: i64,
    pub k: i64,
    pub orbifold: f64,
    pub cover: f64,
}

/// One row of the knot-complement table.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
pub struct KnotRow {
    pub n: i64,
    pub alpha0: f64,
    pub cs: f64,
}

fn parse<T: for<'de> Deserialize<'de>>(src: &str) -> Result<Vec<T>> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .from_reader(src.as_bytes())
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::usage(format!("malformed reference table: {e}")))
}

pub fn orbifold_table() -> Result<Vec<OrbifoldRow>> {
    parse(ORBIFOLD_CSV)
}

pub fn knot_table() -> Result<Vec<KnotRow>> {
    parse(KNOT_CSV)
}

pub fn orbifold_entry(n: i64, k: i64) -> Option<OrbifoldRow> {
    orbifold_table().ok()?.into_iter().find(|r| r.n == n && r.k == k)
}

pub fn knot_entry(n: i64) -> Option<KnotRow> {
    knot_table().ok()?.into_iter().find(|r| r.n == n)
}
