//! Zero-sum selection of `p` out of `2p - 1` residues for prime `p`.
//!
//! After a stable counting sort `b_1 <= ... <= b_{2p-1}`, either some residue
//! occurs `p` times, or every `d_i = b_{i+p} - b_i` (`1 <= i < p`) is nonzero
//! and a subset `J` with `Σ_J d_i = -Σ_{j<=p} b_j` turns the base block
//! `b_1..b_p` into a zero-sum block by swapping `b_i` for `b_{i+p}`, `i ∈ J`.

use crate::error::{Error, Result};
use crate::modmath::{
    add_mod, counting_sort_into, is_prime, mod_reduce, neg_mod, sub_mod, Residue,
};
use crate::state::{Counters, SolverState};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeEgzInstance {
    p: u64,
    elements: Vec<(usize, Residue)>,
}

impl PrimeEgzInstance {
    /// `elements` pairs an original index with its residue mod `p`.
    pub fn new(p: u64, elements: Vec<(usize, Residue)>) -> Result<Self> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::input(format!("{p} is not a supported prime")));
        }
        if elements.len() as u64 != 2 * p - 1 {
            return Err(Error::input(format!(
                "expected {} elements, got {}",
                2 * p - 1,
                elements.len()
            )));
        }
        if let Some(&(i, r)) = elements.iter().find(|(_, r)| *r >= p) {
            return Err(Error::input(format!(
                "element {i} has unreduced residue {r}"
            )));
        }
        Ok(Self { p, elements })
    }

    /// Reduces `values` mod `p`; original indices are positions in `values`.
    pub fn from_values(p: u64, values: &[i64]) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidModulus);
        }
        let elements = values
            .iter()
            .enumerate()
            .map(|(i, &a)| Ok((i, mod_reduce(a, p)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(p, elements)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn elements(&self) -> &[(usize, Residue)] {
        &self.elements
    }
}

/// `modulus` original indices (0-based, ascending) whose values sum to 0 mod `modulus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub indices: Vec<usize>,
    pub modulus: u64,
}

/// Reusable buffers for repeated prime selections.
#[derive(Debug, Default)]
pub struct PrimeEgzWorkspace {
    order: Vec<usize>,
    counts: Vec<usize>,
    d: Vec<Residue>,
    state: Option<SolverState>,
    counters: Counters,
    audit: bool,
    target_calls: u64,
}

impl PrimeEgzWorkspace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Runs the O(p) state audit after every solver transition.
    pub fn set_audit(&mut self, on: bool) {
        self.audit = on;
    }

    /// Solver counters summed over every target subset-sum call so far.
    pub fn counters(&self) -> &Counters {
        &self.counters
    }

    /// Number of selections that needed the subset-sum solver.
    pub fn target_calls(&self) -> u64 {
        self.target_calls
    }

    /// Picks `p` of the `2p - 1` residues (all `< p`) with zero sum and writes
    /// their positions into `out` in sorted-residue order.
    pub fn select(&mut self, p: u64, residues: &[Residue], out: &mut Vec<usize>) -> Result<()> {
        if residues.len() as u64 != 2 * p - 1 {
            return Err(Error::input(format!(
                "expected {} residues, got {}",
                2 * p - 1,
                residues.len()
            )));
        }
        out.clear();
        let pu = p as usize;
        counting_sort_into(residues, p, &mut self.order, &mut self.counts);

        // a residue with multiplicity >= p: its first p occurrences
        let mut start = 0;
        for &c in &self.counts {
            if c >= pu {
                out.extend_from_slice(&self.order[start..start + pu]);
                return Ok(());
            }
            start += c;
        }

        let b = |i: usize| residues[self.order[i]];
        self.d.clear();
        let mut base = 0;
        for i in 0..pu {
            base = add_mod(base, b(i), p);
        }
        for i in 0..pu - 1 {
            let di = sub_mod(b(i + p as usize), b(i), p);
            if di == 0 {
                return Err(Error::invariant(format!(
                    "zero difference at sorted position {i} without a repeated residue"
                )));
            }
            self.d.push(di);
        }
        let tau = neg_mod(base, p);

        let state = match &mut self.state {
            Some(s) => s,
            slot => slot.insert(SolverState::new(p)?),
        };
        state.set_audit(self.audit);
        let j = state.run(p, &self.d, tau)?;
        self.counters.accumulate(state.counters());
        self.target_calls += 1;

        // base block with b_i swapped for b_{i+p} whenever i ∈ J
        let mut swap = j.iter().peekable();
        for i in 0..pu {
            if swap.next_if(|&&k| k == i).is_some() {
                out.push(self.order[i + pu]);
            } else {
                out.push(self.order[i]);
            }
        }
        Ok(())
    }
}

pub fn solve_prime_egz(instance: &PrimeEgzInstance) -> Result<Certificate> {
    let mut ws = PrimeEgzWorkspace::new();
    solve_prime_egz_with(&mut ws, instance)
}

pub fn solve_prime_egz_with(
    ws: &mut PrimeEgzWorkspace,
    instance: &PrimeEgzInstance,
) -> Result<Certificate> {
    let residues: Vec<Residue> = instance.elements.iter().map(|&(_, r)| r).collect();
    let mut picked = Vec::new();
    ws.select(instance.p, &residues, &mut picked)?;
    let mut indices: Vec<usize> = picked.iter().map(|&k| instance.elements[k].0).collect();
    indices.sort_unstable();
    Ok(Certificate {
        indices,
        modulus: instance.p,
    })
}
