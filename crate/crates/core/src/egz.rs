//! Composite moduli by the multiplicative reduction.
//!
//! For `n = p·q` with `p = spf(n)`, `2q - 1` zero-sum blocks of size `p` are
//! pulled from a pool of the current level's elements, each block `B_h`
//! contributes `c_h = (Σ_{B_h} x) / p`, and the next level solves modulus `q`
//! on the `c_h`. Levels run iteratively; block membership is kept in flat
//! per-level tables and resolved back to input indices at the end.

use crate::error::{Error, Result};
use crate::modmath::{build_spf, mod_reduce, Residue};
use crate::prime_egz::{Certificate, PrimeEgzWorkspace};
use crate::state::Counters;

/// Largest supported modulus.
pub const MAX_MODULUS: u64 = u32::MAX as u64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EgzInstance {
    n: u64,
    values: Vec<i64>,
}

impl EgzInstance {
    pub fn new(n: u64, values: Vec<i64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModulus);
        }
        if n > MAX_MODULUS {
            return Err(Error::input(format!("modulus {n} exceeds {MAX_MODULUS}")));
        }
        if values.len() as u64 != 2 * n - 1 {
            return Err(Error::input(format!(
                "expected {} values for n = {n}, got {}",
                2 * n - 1,
                values.len()
            )));
        }
        Ok(Self { n, values })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EgzStats {
    pub counters: Counters,
    /// Composite reduction levels performed.
    pub levels: u32,
    /// Calls into the prime selection (fast path or subset sum).
    pub prime_calls: u64,
    /// Calls that needed the subset-sum solver.
    pub target_calls: u64,
    /// Elements drawn from or returned to a pool, over all levels.
    pub pool_ops: u64,
    /// Sum of `2m - 1` over every level's modulus `m`, the final one included.
    pub level_elements: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    ModulusMismatch { expected: u64, actual: u64 },
    SizeMismatch { expected: u64, actual: usize },
    IndexOutOfRange(usize),
    DuplicateIndex(usize),
    SumMismatch { residue: u64 },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

/// Indices are shown 1-based, matching the command-line format.
impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Valid => write!(f, "valid"),
            Verdict::ModulusMismatch { expected, actual } => {
                write!(
                    f,
                    "certificate modulus {actual} does not match instance modulus {expected}"
                )
            }
            Verdict::SizeMismatch { expected, actual } => {
                write!(f, "certificate has {actual} indices, expected {expected}")
            }
            Verdict::IndexOutOfRange(i) => write!(f, "index {} is out of range", i + 1),
            Verdict::DuplicateIndex(i) => write!(f, "index {} appears more than once", i + 1),
            Verdict::SumMismatch { residue } => write!(f, "selected sum is {residue}, not 0"),
        }
    }
}

pub fn solve_egz(instance: &EgzInstance) -> Result<Certificate> {
    solve_egz_instrumented(instance, false).map(|(cert, _)| cert)
}

struct Level {
    p: usize,
    blocks: Vec<u32>,
}

/// [`solve_egz`] with work statistics; `audit` turns on per-transition state audits.
pub fn solve_egz_instrumented(
    instance: &EgzInstance,
    audit: bool,
) -> Result<(Certificate, EgzStats)> {
    let n = instance.n;
    let mut stats = EgzStats::default();
    let mut ws = PrimeEgzWorkspace::new();
    ws.set_audit(audit);

    let mut vals: Vec<Residue> = instance
        .values
        .iter()
        .map(|&a| mod_reduce(a, n))
        .collect::<Result<_>>()?;
    let spf = build_spf(n);
    let mut levels: Vec<Level> = Vec::new();
    let mut modulus = n;

    let mut pool: Vec<u32> = Vec::new();
    let mut drawn: Vec<u32> = Vec::new();
    let mut residues: Vec<Residue> = Vec::new();
    let mut picked: Vec<usize> = Vec::new();
    let mut chosen: Vec<bool> = Vec::new();

    let top: Vec<u32> = loop {
        stats.level_elements += vals.len() as u64;
        if modulus == 1 {
            break vec![0];
        }
        let p = spf
            .spf(modulus)
            .ok_or_else(|| Error::invariant(format!("no prime factor for {modulus}")))?;
        if p == modulus {
            residues.clear();
            residues.extend(vals.iter().copied());
            ws.select(p, &residues, &mut picked)?;
            stats.prime_calls += 1;
            break picked.iter().map(|&k| k as u32).collect();
        }

        let q = modulus / p;
        let pu = p as usize;
        let draw = 2 * pu - 1;
        let blocks_needed = (2 * q - 1) as usize;
        pool.clear();
        pool.extend(0..vals.len() as u32);
        let mut blocks = Vec::with_capacity(blocks_needed * pu);
        let mut next = Vec::with_capacity(blocks_needed);

        for _ in 0..blocks_needed {
            let start = pool
                .len()
                .checked_sub(draw)
                .ok_or_else(|| Error::invariant("element pool exhausted"))?;
            drawn.clear();
            drawn.extend_from_slice(&pool[start..]);
            pool.truncate(start);
            residues.clear();
            residues.extend(drawn.iter().map(|&e| vals[e as usize] % p));
            ws.select(p, &residues, &mut picked)?;
            stats.prime_calls += 1;

            chosen.clear();
            chosen.resize(draw, false);
            let mut sum = 0u64;
            for &k in &picked {
                chosen[k] = true;
                let e = drawn[k];
                blocks.push(e);
                sum += vals[e as usize];
            }
            if !sum.is_multiple_of(p) {
                return Err(Error::invariant(format!(
                    "block sum {sum} not divisible by {p}"
                )));
            }
            next.push((sum / p) % q);
            pool.extend(
                drawn
                    .iter()
                    .zip(&chosen)
                    .filter(|(_, &c)| !c)
                    .map(|(&e, _)| e),
            );
            stats.pool_ops += draw as u64 + (pu - 1) as u64;
        }
        debug_assert_eq!(pool.len(), pu - 1);
        levels.push(Level { p: pu, blocks });
        stats.levels += 1;
        vals = next;
        modulus = q;
    };

    // resolve block ids level by level back to input positions
    let mut ids = top;
    for level in levels.iter().rev() {
        let mut expanded = Vec::with_capacity(ids.len() * level.p);
        for &h in &ids {
            let h = h as usize;
            expanded.extend_from_slice(&level.blocks[h * level.p..(h + 1) * level.p]);
        }
        ids = expanded;
    }

    let mut mark = vec![false; instance.values.len()];
    for &i in &ids {
        let slot = &mut mark[i as usize];
        if *slot {
            return Err(Error::invariant(format!("input {i} selected twice")));
        }
        *slot = true;
    }
    let indices: Vec<usize> = mark
        .iter()
        .enumerate()
        .filter_map(|(i, &m)| m.then_some(i))
        .collect();
    if indices.len() as u64 != n {
        return Err(Error::invariant(format!(
            "selected {} inputs for modulus {n}",
            indices.len()
        )));
    }
    stats.counters = *ws.counters();
    stats.target_calls = ws.target_calls();
    Ok((
        Certificate {
            indices,
            modulus: n,
        },
        stats,
    ))
}

/// Checks size, distinctness, range and the divisibility of the sum.
pub fn verify_certificate(instance: &EgzInstance, cert: &Certificate) -> Verdict {
    let n = instance.n;
    if cert.modulus != n {
        return Verdict::ModulusMismatch {
            expected: n,
            actual: cert.modulus,
        };
    }
    if cert.indices.len() as u64 != n {
        return Verdict::SizeMismatch {
            expected: n,
            actual: cert.indices.len(),
        };
    }
    let mut seen = vec![false; instance.values.len()];
    let mut sum: u64 = 0;
    for &i in &cert.indices {
        let Some(slot) = seen.get_mut(i) else {
            return Verdict::IndexOutOfRange(i);
        };
        if *slot {
            return Verdict::DuplicateIndex(i);
        }
        *slot = true;
        let r = (instance.values[i] as i128).rem_euclid(n as i128) as u64;
        sum = ((sum as u128 + r as u128) % n as u128) as u64;
    }
    if sum != 0 {
        return Verdict::SumMismatch { residue: sum };
    }
    Verdict::Valid
}
