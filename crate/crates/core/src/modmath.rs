//! Word-sized modular arithmetic, Bézout coefficients, a smallest-prime-factor
//! sieve and a stable counting sort keyed by residue.
//!
//! Residues are plain `u64` values in `0..modulus`. Every caller reduces its
//! inputs once at the boundary, so nothing here needs multiprecision.

use crate::error::{Error, Result};

/// A canonical representative in `0..modulus`.
pub type Residue = u64;

/// Canonical residue of a signed integer.
pub fn mod_reduce(a: i64, n: u64) -> Result<Residue> {
    if n == 0 {
        return Err(Error::InvalidModulus);
    }
    Ok((a as i128).rem_euclid(n as i128) as u64)
}

#[inline]
pub fn add_mod(a: Residue, b: Residue, m: u64) -> Residue {
    debug_assert!(a < m && b < m);
    let (s, carry) = a.overflowing_add(b);
    if carry || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: Residue, b: Residue, m: u64) -> Residue {
    debug_assert!(a < m && b < m);
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

#[inline]
pub fn neg_mod(a: Residue, m: u64) -> Residue {
    debug_assert!(a < m);
    if a == 0 {
        0
    } else {
        m - a
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> Residue {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Extended Euclid: returns `(g, s, t)` with `g = gcd(a, b)` and `s·a + t·b = g`.
pub fn ext_gcd(a: u64, b: u64) -> (u64, i128, i128) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 as u64, s0, t0)
}

/// Inverse of `a` modulo `m`, computed through [`ext_gcd`].
pub fn mod_inverse(a: u64, m: u64) -> Result<Residue> {
    if m == 0 {
        return Err(Error::InvalidModulus);
    }
    if m == 1 {
        return Ok(0);
    }
    let a = a % m;
    if a == 0 {
        return Err(Error::NotInvertible {
            value: a,
            modulus: m,
        });
    }
    let (g, s, _) = ext_gcd(a, m);
    if g != 1 {
        return Err(Error::NotInvertible {
            value: a,
            modulus: m,
        });
    }
    Ok(s.rem_euclid(m as i128) as u64)
}

/// Smallest prime factor for every `2 <= k <= limit`.
#[derive(Debug, Clone)]
pub struct SpfTable {
    spf: Vec<u32>,
}

/// Linear sieve. A `limit` below 2 yields an empty table.
pub fn build_spf(limit: u64) -> SpfTable {
    if limit < 2 {
        return SpfTable { spf: Vec::new() };
    }
    assert!(
        limit <= u32::MAX as u64,
        "sieve limit {limit} exceeds u32 range"
    );
    let limit = limit as usize;
    let mut spf = vec![0u32; limit + 1];
    let mut primes: Vec<u32> = Vec::new();
    for k in 2..=limit {
        if spf[k] == 0 {
            spf[k] = k as u32;
            primes.push(k as u32);
        }
        let sk = spf[k];
        for &q in &primes {
            if q > sk {
                break;
            }
            let composite = k * q as usize;
            if composite > limit {
                break;
            }
            spf[composite] = q;
        }
    }
    SpfTable { spf }
}

impl SpfTable {
    pub fn limit(&self) -> u64 {
        self.spf.len().saturating_sub(1) as u64
    }

    /// `None` outside `2..=limit`.
    pub fn spf(&self, k: u64) -> Option<u64> {
        if k < 2 || k > self.limit() {
            return None;
        }
        Some(self.spf[k as usize] as u64)
    }

    pub fn is_prime(&self, k: u64) -> bool {
        self.spf(k) == Some(k)
    }
}

/// Deterministic trial-division primality test, used for validating inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut f = 5u64;
    while f.saturating_mul(f) <= n {
        if n.is_multiple_of(f) || n.is_multiple_of(f + 2) {
            return false;
        }
        f += 6;
    }
    true
}

/// Stable counting sort of positions by residue.
///
/// Returns the permutation of `0..values.len()` ordered by nondecreasing
/// residue (ties keep input order) and the multiplicity of every residue.
pub fn counting_sort_by_residue(values: &[Residue], p: u64) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::new();
    let mut counts = Vec::new();
    counting_sort_into(values, p, &mut order, &mut counts);
    (order, counts)
}

/// Buffer-reusing form of [`counting_sort_by_residue`].
pub(crate) fn counting_sort_into(
    values: &[Residue],
    p: u64,
    order: &mut Vec<usize>,
    counts: &mut Vec<usize>,
) {
    let p = p as usize;
    counts.clear();
    counts.resize(p + 1, 0);
    for &v in values {
        debug_assert!((v as usize) < p);
        counts[v as usize + 1] += 1;
    }
    // prefix sums turn counts[r] into the first slot of bucket r
    for r in 1..=p {
        counts[r] += counts[r - 1];
    }
    order.clear();
    order.resize(values.len(), 0);
    for (i, &v) in values.iter().enumerate() {
        let slot = &mut counts[v as usize];
        order[*slot] = i;
        *slot += 1;
    }
    // after placement counts[r] is the end of bucket r; shift back to multiplicities
    for r in (1..p).rev() {
        counts[r] -= counts[r - 1];
    }
    counts.truncate(p);
}
