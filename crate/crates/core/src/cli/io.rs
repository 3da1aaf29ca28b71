//! Instance and certificate text formats.
//!
//! An instance file is the modulus `n` followed by `2n - 1` whitespace
//! separated signed 64-bit integers. User-facing indices are 1-based.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::egz::EgzInstance;
use crate::error::{Error, Result};

pub fn parse_instance(text: &str) -> Result<EgzInstance> {
    let mut tokens = text.split_ascii_whitespace();
    let header = tokens
        .next()
        .ok_or_else(|| Error::input("empty instance file"))?;
    let n: u64 = header
        .parse()
        .map_err(|_| Error::input(format!("bad modulus header {header:?}")))?;
    if n == 0 {
        return Err(Error::InvalidModulus);
    }
    let expected = 2 * n - 1;
    let mut values = Vec::with_capacity(expected.min(1 << 26) as usize);
    for tok in tokens {
        let v: i64 = tok.parse().map_err(|_| {
            Error::input(format!("bad integer {tok:?} at value {}", values.len() + 1))
        })?;
        values.push(v);
    }
    if values.len() as u64 != expected {
        return Err(Error::input(format!(
            "expected {expected} values after header {n}, found {}",
            values.len()
        )));
    }
    EgzInstance::new(n, values)
}

pub fn format_instance(instance: &EgzInstance) -> String {
    let mut out = String::with_capacity(instance.values().len() * 12 + 16);
    let _ = writeln!(out, "{}", instance.n());
    for (i, v) in instance.values().iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{v}");
    }
    out.push('\n');
    out
}

/// JSON form of a solve result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub n: u64,
    pub indices: Vec<usize>,
    pub sum_mod_n: u64,
}

/// Reads 1-based indices either from a JSON object with an `indices` array
/// or from whitespace-separated integers, and returns them 0-based.
pub fn parse_certificate(text: &str) -> Result<Vec<usize>> {
    let trimmed = text.trim_start();
    let one_based: Vec<usize> = if trimmed.starts_with('{') {
        #[derive(Deserialize)]
        struct Indices {
            indices: Vec<usize>,
        }
        serde_json::from_str::<Indices>(trimmed)
            .map_err(|e| Error::input(format!("bad certificate JSON: {e}")))?
            .indices
    } else {
        trimmed
            .split_ascii_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::input(format!("bad index {t:?}")))
            })
            .collect::<Result<_>>()?
    };
    one_based
        .into_iter()
        .map(|i| {
            i.checked_sub(1)
                .ok_or_else(|| Error::input("indices are 1-based; found 0"))
        })
        .collect()
}
