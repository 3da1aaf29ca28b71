//! Brute-force references for cross-checking the solver.
//!
//! Nothing here shares code with the solver apart from [`mod_reduce`]; the
//! oracles are deliberately plain enumerations and dynamic programs.

use std::collections::BTreeSet;

use crate::modmath::mod_reduce;

/// Largest input handled by bitmask enumeration.
pub const BITMASK_LIMIT: usize = 24;

/// Finds a subset of `d` (0-based positions) summing to `tau` mod `p`.
/// Uses bitmask enumeration for short inputs and the DP otherwise.
pub fn brute_subset_sum(p: u64, d: &[u64], tau: u64) -> Option<Vec<usize>> {
    if d.len() <= BITMASK_LIMIT {
        subset_sum_bitmask(p, d, tau)
    } else {
        subset_sum_dp(p, d, tau)
    }
}

/// Smallest mask (as an integer) whose subset sums to `tau`.
pub fn subset_sum_bitmask(p: u64, d: &[u64], tau: u64) -> Option<Vec<usize>> {
    assert!(
        d.len() <= BITMASK_LIMIT,
        "bitmask oracle limited to {BITMASK_LIMIT} elements"
    );
    let tau = tau % p;
    for mask in 0u32..(1u32 << d.len()) {
        let mut s = 0u64;
        for (i, &x) in d.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s = (s + x % p) % p;
            }
        }
        if s == tau {
            return Some((0..d.len()).filter(|i| mask >> i & 1 == 1).collect());
        }
    }
    None
}

/// Reachability DP over prefixes with parent pointers, `O(len · p)`.
pub fn subset_sum_dp(p: u64, d: &[u64], tau: u64) -> Option<Vec<usize>> {
    let p = p as usize;
    let tau = (tau % p as u64) as usize;
    // reach[i][r]: residue r is a subset sum of d[..i]
    let mut reach = vec![vec![false; p]; d.len() + 1];
    reach[0][0] = true;
    for (i, &x) in d.iter().enumerate() {
        let x = (x % p as u64) as usize;
        for r in 0..p {
            if reach[i][r] {
                reach[i + 1][r] = true;
                reach[i + 1][(r + x) % p] = true;
            }
        }
    }
    if !reach[d.len()][tau] {
        return None;
    }
    let mut out = Vec::new();
    let mut r = tau;
    for i in (0..d.len()).rev() {
        if reach[i][r] {
            continue;
        }
        out.push(i);
        r = (r + p - (d[i] % p as u64) as usize) % p;
    }
    debug_assert_eq!(r, 0);
    out.reverse();
    Some(out)
}

/// Finds `n` positions of `values` whose sum is divisible by `n`, by a DP over
/// (position, chosen count, residue). Intended for `n <= 12`.
pub fn brute_egz(n: u64, values: &[i64]) -> Option<Vec<usize>> {
    if n == 0 {
        return None;
    }
    let n_us = n as usize;
    let res: Vec<usize> = values
        .iter()
        .map(|&a| mod_reduce(a, n).expect("n >= 1") as usize)
        .collect();
    let len = res.len();
    // reach[i][c][r]: some c-subset of the first i values has residue r
    let idx = |i: usize, c: usize, r: usize| (i * (n_us + 1) + c) * n_us + r;
    let mut reach = vec![false; (len + 1) * (n_us + 1) * n_us];
    reach[idx(0, 0, 0)] = true;
    for i in 0..len {
        for c in 0..=n_us {
            for r in 0..n_us {
                if !reach[idx(i, c, r)] {
                    continue;
                }
                reach[idx(i + 1, c, r)] = true;
                if c < n_us {
                    reach[idx(i + 1, c + 1, (r + res[i]) % n_us)] = true;
                }
            }
        }
    }
    if !reach[idx(len, n_us, 0)] {
        return None;
    }
    let (mut c, mut r) = (n_us, 0usize);
    let mut out = Vec::new();
    for i in (0..len).rev() {
        if reach[idx(i, c, r)] {
            continue;
        }
        out.push(i);
        c -= 1;
        r = (r + n_us - res[i]) % n_us;
    }
    out.reverse();
    Some(out)
}

/// Enumerates every `n`-subset of `values` whose sum is divisible by `n`.
/// Exponential; only for tiny inputs.
pub fn all_egz_certificates(n: u64, values: &[i64]) -> Vec<Vec<usize>> {
    let len = values.len();
    assert!(len <= 20, "enumeration limited to 20 values");
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << len) {
        if mask.count_ones() as u64 != n {
            continue;
        }
        let s: i128 = (0..len)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| values[i] as i128)
            .sum();
        if s.rem_euclid(n as i128) == 0 {
            out.push((0..len).filter(|i| mask >> i & 1 == 1).collect());
        }
    }
    out
}

/// Exact sumset of the progressions `AP(v, ell) = {0, v, ..., ell·v}` in `Z_p`.
pub fn brute_sumset(p: u64, progressions: &[(u64, u64)]) -> BTreeSet<u64> {
    let mut acc: BTreeSet<u64> = BTreeSet::from([0]);
    for &(v, ell) in progressions {
        let ap: Vec<u64> = (0..=ell).map(|t| (t % p) * (v % p) % p).collect();
        let mut next = BTreeSet::new();
        for &a in &acc {
            for &b in &ap {
                next.insert((a + b) % p);
            }
        }
        acc = next;
    }
    acc
}
