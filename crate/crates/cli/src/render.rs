//! Output formatting shared by the subcommands.

use clap::ValueEnum;
use serde_json::{json, Value};
use twistcs::exactpoly::BiPoly;
use num_bigint::BigInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

/// Whether a polynomial is rendered term by term or grouped by its first variable.
#[derive(Clone, Copy)]
pub enum Layout {
    Flat,
    Grouped,
}

pub fn polynomial(family: &str, n: i64, p: &BiPoly, format: Format, layout: Layout) -> String {
    match format {
        Format::Text => match layout {
            Layout::Flat => p.to_text(),
            Layout::Grouped => p.to_grouped_text(),
        },
        Format::Json => {
            let v = json!({ "family": family, "n": n, "poly": p });
            serde_json::to_string_pretty(&v).expect("serializable")
        }
        Format::Csv => {
            let vars = p.vars();
            let mut out = format!("{},{},coeff\n", vars.first(), vars.second());
            for ((i, j), c) in p.terms() {
                out.push_str(&format!("{i},{j},{c}\n"));
            }
            out.pop();
            out
        }
    }
}

/// `t^2 - 2*t + 1` from ascending coefficients.
pub fn univariate(coeffs: &[BigInt], var: &str) -> String {
    let mut out = String::new();
    for (e, c) in coeffs.iter().enumerate().rev() {
        if c.sign() == num_bigint::Sign::NoSign {
            continue;
        }
        let neg = c.sign() == num_bigint::Sign::Minus;
        let mag = c.magnitude().to_string();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match e {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{e}"),
        };
        match (mag.as_str(), mono.is_empty()) {
            (_, true) => out.push_str(&mag),
            ("1", false) => out.push_str(&mono),
            (_, false) => out.push_str(&format!("{mag}*{mono}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn json_pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn univariate_text() {
        assert_eq!(univariate(&ints(&[1, 1]), "t"), "t + 1");
        assert_eq!(univariate(&ints(&[1, -2, 1]), "t"), "t^2 - 2*t + 1");
        assert_eq!(univariate(&ints(&[-1, 0, 0, -3]), "t"), "-3*t^3 - 1");
        assert_eq!(univariate(&ints(&[0]), "t"), "0");
    }
}
