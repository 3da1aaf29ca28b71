//! Prime target subset sum: given `p - 1` nonzero residues `d_1..d_{p-1}` and a
//! target `tau` in `Z_p`, find `J` with `Σ_{j∈J} d_j = tau`.
//!
//! Differences are inserted left to right into a family of disjoint
//! arithmetic-progression components. A new factor `{0, d_k}` either extends
//! an active component of direction `d_k` in place or starts a singleton. The
//! resulting temporary component is scanned against the owner array; the
//! first collision merges it with the colliding active component into one
//! longer progression, which becomes the new temporary. The run stops once
//! the active family covers all of `Z_p^*` or a merge reaches length `p - 1`.

use crate::error::{Error, Result};
use crate::frobenius::{make_merge_plan, MergeCase};
use crate::modmath::{add_mod, is_prime, mod_inverse, mul_mod, sub_mod, Residue};
use crate::state::{ComponentId, Probe, SolverState, Status};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTargetInstance {
    p: u64,
    d: Vec<Residue>,
    tau: Residue,
}

impl PrimeTargetInstance {
    pub fn new(p: u64, d: Vec<Residue>, tau: Residue) -> Result<Self> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::input(format!("{p} is not a supported prime")));
        }
        if d.len() as u64 != p - 1 {
            return Err(Error::input(format!(
                "expected {} differences, got {}",
                p - 1,
                d.len()
            )));
        }
        if let Some(k) = d.iter().position(|&x| x == 0 || x >= p) {
            return Err(Error::input(format!(
                "difference {} = {} is not a nonzero residue mod {p}",
                k + 1,
                d[k]
            )));
        }
        if tau >= p {
            return Err(Error::input(format!("target {tau} is not reduced mod {p}")));
        }
        Ok(Self { p, d, tau })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> &[Residue] {
        &self.d
    }

    pub fn tau(&self) -> Residue {
        self.tau
    }
}

/// Chosen subset, as 0-based positions into `d` in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSolution {
    pub indices: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// The active family covers every nonzero residue.
    Covered,
    Full(ComponentId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Progress {
    Continue,
    Stop(StopReason),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopOutcome {
    Committed,
    Full(ComponentId),
}

/// One coefficient per counted component; unlisted components use 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub picks: Vec<(ComponentId, u64)>,
}

impl SolverState {
    /// Processes the factor `{0, d_k}` for the 0-based input position `k`.
    pub fn insert_difference(&mut self, k: usize, dk: Residue) -> Result<Progress> {
        let p = self.p;
        if dk == 0 || dk >= p {
            return Err(Error::input(format!(
                "difference {dk} is not a nonzero residue mod {p}"
            )));
        }
        if self.temp.is_some() || self.full.is_some() || self.total_len >= p - 1 {
            return Err(Error::invariant("insertion after the run stopped"));
        }
        self.counters.insertions += 1;
        let index = k as u32;

        let temp = match self.direction_owner(dk) {
            Some(c) => {
                let comp = *self.component(c);
                let t = comp.ell + 1;
                let r = mul_mod(t, dk, p);
                let node = self.recon.extend(comp.recon, comp.ell, index);
                self.counters.extensions += 1;
                self.total_len += 1;
                match self.read_cell(r) {
                    None => {
                        self.write_cell(r, c, t);
                        let comp = self.comp_mut(c);
                        comp.ell = t;
                        comp.recon = node;
                        self.after_transition()?;
                        return Ok(self.length_test());
                    }
                    Some(_) => {
                        // the old cells become the held prefix of the extended temporary
                        self.detach_active(c, true)?;
                        let comp = self.comp_mut(c);
                        comp.ell = t;
                        comp.recon = node;
                        self.temp = Some(c);
                        c
                    }
                }
            }
            None => {
                let node = self.recon.leaf(index);
                self.create_temporary(dk, 1, 0, node)
            }
        };
        self.after_transition()?;
        match self.run_merge_loop(temp)? {
            LoopOutcome::Committed => Ok(self.length_test()),
            LoopOutcome::Full(c) => Ok(Progress::Stop(StopReason::Full(c))),
        }
    }

    fn length_test(&self) -> Progress {
        if self.total_len == self.p - 1 {
            Progress::Stop(StopReason::Covered)
        } else {
            Progress::Continue
        }
    }

    /// Scans and merges the temporary component until it commits or becomes full.
    pub fn run_merge_loop(&mut self, mut c: ComponentId) -> Result<LoopOutcome> {
        let p = self.p;
        loop {
            let comp = *self.component(c);
            if comp.status != Status::Temporary || self.temp != Some(c) {
                return Err(Error::invariant(format!(
                    "merge loop on non-temporary {}",
                    c.0
                )));
            }
            self.pending.clear();
            let mut r = mul_mod(comp.held + 1, comp.v, p);
            let mut collision = None;
            for t in comp.held + 1..=comp.ell {
                if let Probe::Collision {
                    component,
                    coefficient,
                } = self.probe_residue(r, t)
                {
                    collision = Some((t, component, coefficient));
                    break;
                }
                r = add_mod(r, comp.v, p);
            }
            let Some((x, d, y)) = collision else {
                self.commit_temporary(c)?;
                self.after_transition()?;
                return Ok(LoopOutcome::Committed);
            };
            self.pending.clear();
            c = self.merge(c, x, d, y)?;
            self.after_transition()?;
            if self.component(c).status == Status::Full {
                return Ok(LoopOutcome::Full(c));
            }
        }
    }

    /// Replaces temporary `c` and active `d`, colliding at `x·v(c) = y·v(d)`,
    /// by one merged temporary (or full) component and returns its id.
    fn merge(&mut self, c: ComponentId, x: u64, d: ComponentId, y: u64) -> Result<ComponentId> {
        let p = self.p;
        let tc = *self.component(c);
        let ad = *self.component(d);
        if ad.status != Status::Active {
            return Err(Error::invariant(format!(
                "collision with non-active {}",
                d.0
            )));
        }
        let plan = make_merge_plan(tc.v, tc.ell, ad.v, ad.ell, x, y, p)?;
        let node = self.recon.merge(tc.recon, ad.recon, plan);
        self.counters.merges += 1;

        let xi = add_mod(add_mod(tc.xi, ad.xi, p), plan.offset_delta, p);
        let len = plan.truncated_length(p);

        let keep = match plan.case {
            MergeCase::XY1 => {
                if tc.held != 0 {
                    return Err(Error::invariant(
                        "same-direction merge with a held temporary prefix",
                    ));
                }
                self.detach_active(d, true)?;
                self.comp_mut(c).status = Status::Retired;
                d
            }
            MergeCase::X1 => {
                self.clear_held(c);
                self.comp_mut(c).status = Status::Retired;
                self.detach_active(d, true)?;
                d
            }
            MergeCase::Y1 => {
                self.detach_active(d, false)?;
                c
            }
            MergeCase::General => {
                self.clear_held(c);
                self.detach_active(d, false)?;
                c
            }
        };
        let merged = self.comp_mut(keep);
        debug_assert!(plan.case == MergeCase::General || merged.v == plan.g);
        merged.v = plan.g;
        merged.ell = len;
        merged.xi = xi;
        merged.recon = node;
        merged.status = Status::Temporary;
        self.temp = Some(keep);

        self.shift = add_mod(self.shift, plan.offset_delta, p);
        self.total_len = self.total_len - tc.ell - ad.ell + len;

        if plan.length >= p - 1 {
            self.install_full(keep);
        }
        Ok(keep)
    }

    /// Picks one coefficient per counted component so that the chosen
    /// progressions realise `tau - X`.
    pub fn extract_target(&mut self, tau: Residue) -> Result<Assignment> {
        let p = self.p;
        let target = sub_mod(tau % p, self.shift, p);
        let mut picks: Vec<(ComponentId, u64)> =
            self.active_components().map(|(id, _)| (id, 0)).collect();
        if let Some(full) = self.full {
            let g = self.component(full).v;
            let t = mul_mod(target, mod_inverse(g, p)?, p);
            picks.push((full, t));
            return Ok(Assignment { picks });
        }
        if self.temp.is_some() || self.total_len != p - 1 {
            return Err(Error::invariant("extraction before the run stopped"));
        }
        if target != 0 {
            let (owner, t) = self.read_cell(target).ok_or_else(|| {
                Error::invariant(format!("residue {target} uncovered in a terminal family"))
            })?;
            let slot = picks
                .iter_mut()
                .find(|(id, _)| *id == owner)
                .ok_or_else(|| Error::invariant("owner of target residue is not active"))?;
            slot.1 = t;
        }
        Ok(Assignment { picks })
    }

    /// Expands every picked component and returns the ascending 0-based
    /// input positions.
    pub fn reconstruct(&mut self, assignment: &Assignment, n_inputs: usize) -> Result<Vec<usize>> {
        let mut sink = Vec::new();
        let mut visited = 0usize;
        for &(id, t) in &assignment.picks {
            let root = self.component(id).recon;
            visited += self.recon.expand(root, t, &mut sink)?;
        }
        self.counters.recon_nodes = self.recon.len() as u64;
        self.counters.recon_visited = visited as u64;
        let mut mark = vec![false; n_inputs];
        for &i in &sink {
            let slot = mark
                .get_mut(i as usize)
                .ok_or_else(|| Error::invariant(format!("reconstructed index {i} out of range")))?;
            if *slot {
                return Err(Error::invariant(format!("index {i} reconstructed twice")));
            }
            *slot = true;
        }
        Ok(mark
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
            .collect())
    }

    /// Runs the whole algorithm modulo the state's current prime.
    pub fn solve(&mut self, d: &[Residue], tau: Residue) -> Result<Vec<usize>> {
        self.run(self.p, d, tau)
    }

    /// Resets to modulus `p` (keeping allocations) and solves `d`, `tau`.
    /// Returns the ascending 0-based positions of the chosen differences.
    pub fn run(&mut self, p: u64, d: &[Residue], tau: Residue) -> Result<Vec<usize>> {
        if d.len() as u64 != p - 1 {
            return Err(Error::input(format!(
                "expected {} differences, got {}",
                p - 1,
                d.len()
            )));
        }
        let audit = self.audit;
        self.reset(p)?;
        self.audit = audit;
        let mut stopped = false;
        for (k, &dk) in d.iter().enumerate() {
            if let Progress::Stop(_) = self.insert_difference(k, dk)? {
                stopped = true;
                break;
            }
        }
        if !stopped {
            return Err(Error::invariant(
                "all differences processed without covering Z_p",
            ));
        }
        let assignment = self.extract_target(tau)?;
        self.reconstruct(&assignment, d.len())
    }
}

pub fn solve_prime_target(instance: &PrimeTargetInstance) -> Result<TargetSolution> {
    let mut state = SolverState::new(instance.p)?;
    let indices = state.solve(&instance.d, instance.tau)?;
    Ok(TargetSolution { indices })
}
