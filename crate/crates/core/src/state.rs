//! Mutable solver state: the component pool, owner array, direction index,
//! held cells, global shift `X` and total length `Λ`.
//!
//! Between merge-loop steps the active family is disjoint: every nonzero
//! residue is covered by at most one `(component, coefficient)` pair. During a
//! merge loop the only non-active owner cells are the held prefix of the
//! single temporary component.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modmath::{add_mod, mul_mod, Residue};
use crate::recon::{NodeId, ReconPool};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComponentId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Active,
    Temporary,
    Full,
    Retired,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Component {
    pub v: Residue,
    pub ell: u64,
    pub xi: Residue,
    pub recon: NodeId,
    /// Coefficients `1..=held` are installed in the owner array on behalf of
    /// this (temporary) component and are never rescanned.
    pub held: u64,
    pub status: Status,
}

const EMPTY: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Cell {
    comp: u32,
    t: u32,
}

impl Cell {
    const VACANT: Cell = Cell { comp: EMPTY, t: 0 };
}

/// Residue-indexed ownership table; slot 0 is never used.
#[derive(Debug, Clone, Default)]
pub struct OwnerArray {
    cells: Vec<Cell>,
}

impl OwnerArray {
    fn reset(&mut self, p: u64) {
        self.cells.clear();
        self.cells.resize(p as usize, Cell::VACANT);
    }

    pub fn get(&self, r: Residue) -> Option<(ComponentId, u64)> {
        let c = self.cells[r as usize];
        (c.comp != EMPTY).then_some((ComponentId(c.comp), c.t as u64))
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Work counters for the linear-time accounting.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    pub owner_reads: u64,
    pub owner_writes: u64,
    pub owner_clears: u64,
    pub cells_scanned: u64,
    pub merges: u64,
    pub extensions: u64,
    pub insertions: u64,
    pub recon_nodes: u64,
    pub recon_visited: u64,
}

impl Counters {
    /// Owner-array touches: reads, writes, clears and scanned cells.
    pub fn touches(&self) -> u64 {
        self.owner_reads + self.owner_writes + self.owner_clears + self.cells_scanned
    }

    pub fn accumulate(&mut self, other: &Counters) {
        self.owner_reads += other.owner_reads;
        self.owner_writes += other.owner_writes;
        self.owner_clears += other.owner_clears;
        self.cells_scanned += other.cells_scanned;
        self.merges += other.merges;
        self.extensions += other.extensions;
        self.insertions += other.insertions;
        self.recon_nodes += other.recon_nodes;
        self.recon_visited += other.recon_visited;
    }

    /// Flat key/value view for reports.
    pub fn entries(&self) -> [(&'static str, u64); 9] {
        [
            ("owner_reads", self.owner_reads),
            ("owner_writes", self.owner_writes),
            ("owner_clears", self.owner_clears),
            ("cells_scanned", self.cells_scanned),
            ("merges", self.merges),
            ("extensions", self.extensions),
            ("insertions", self.insertions),
            ("recon_nodes", self.recon_nodes),
            ("recon_visited", self.recon_visited),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Probe {
    Empty,
    Collision {
        component: ComponentId,
        coefficient: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditViolation {
    pub residue: Option<Residue>,
    pub components: Vec<ComponentId>,
    pub message: String,
}

impl fmt::Display for AuditViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)?;
        if let Some(r) = self.residue {
            write!(f, " at residue {r}")?;
        }
        if !self.components.is_empty() {
            let ids: Vec<String> = self.components.iter().map(|c| c.0.to_string()).collect();
            write!(f, " (components {})", ids.join(", "))?;
        }
        Ok(())
    }
}

impl From<AuditViolation> for Error {
    fn from(v: AuditViolation) -> Self {
        Error::Invariant(v.to_string())
    }
}

#[derive(Debug, Clone)]
pub struct SolverState {
    pub(crate) p: u64,
    pub(crate) components: Vec<Component>,
    pub(crate) owner: OwnerArray,
    pub(crate) dir_index: Vec<u32>,
    pub(crate) shift: Residue,
    pub(crate) total_len: u64,
    pub(crate) pending: Vec<(u32, u32)>,
    pub(crate) recon: ReconPool,
    pub(crate) counters: Counters,
    pub(crate) temp: Option<ComponentId>,
    pub(crate) full: Option<ComponentId>,
    pub(crate) audit: bool,
    pub(crate) last_lambda: u64,
}

impl SolverState {
    pub fn new(p: u64) -> Result<Self> {
        let mut s = SolverState {
            p: 0,
            components: Vec::new(),
            owner: OwnerArray::default(),
            dir_index: Vec::new(),
            shift: 0,
            total_len: 0,
            pending: Vec::new(),
            recon: ReconPool::new(),
            counters: Counters::default(),
            temp: None,
            full: None,
            audit: false,
            last_lambda: 0,
        };
        s.reset(p)?;
        Ok(s)
    }

    /// Clears everything for a fresh run modulo `p`, keeping allocations.
    pub fn reset(&mut self, p: u64) -> Result<()> {
        if p < 2 || p > u32::MAX as u64 {
            return Err(Error::input(format!("prime modulus {p} outside 2..2^32")));
        }
        self.p = p;
        self.components.clear();
        self.owner.reset(p);
        self.dir_index.clear();
        self.dir_index.resize(p as usize, EMPTY);
        self.shift = 0;
        self.total_len = 0;
        self.pending.clear();
        self.recon.clear();
        self.counters = Counters::default();
        self.temp = None;
        self.full = None;
        self.last_lambda = 0;
        Ok(())
    }

    pub fn set_audit(&mut self, on: bool) {
        self.audit = on;
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn component(&self, id: ComponentId) -> &Component {
        &self.components[id.0 as usize]
    }

    pub fn components(&self) -> impl Iterator<Item = (ComponentId, &Component)> {
        self.components
            .iter()
            .enumerate()
            .map(|(i, c)| (ComponentId(i as u32), c))
    }

    pub fn active_components(&self) -> impl Iterator<Item = (ComponentId, &Component)> {
        self.components()
            .filter(|(_, c)| c.status == Status::Active)
    }

    pub fn owner(&self) -> &OwnerArray {
        &self.owner
    }

    pub fn direction_owner(&self, v: Residue) -> Option<ComponentId> {
        let id = self.dir_index[v as usize];
        (id != EMPTY).then_some(ComponentId(id))
    }

    /// Global shift `X`.
    pub fn shift(&self) -> Residue {
        self.shift
    }

    /// Total length `Λ` of the counted family.
    pub fn total_length(&self) -> u64 {
        self.total_len
    }

    pub fn counters(&self) -> &Counters {
        &self.counters
    }

    pub fn recon(&self) -> &ReconPool {
        &self.recon
    }

    pub fn temporary(&self) -> Option<ComponentId> {
        self.temp
    }

    pub fn full_component(&self) -> Option<ComponentId> {
        self.full
    }

    pub(crate) fn comp_mut(&mut self, id: ComponentId) -> &mut Component {
        &mut self.components[id.0 as usize]
    }

    /// Adds a temporary component to the counted family (`X += ξ`, `Λ += ℓ`).
    pub(crate) fn create_temporary(
        &mut self,
        v: Residue,
        ell: u64,
        xi: Residue,
        recon: NodeId,
    ) -> ComponentId {
        debug_assert!(self.temp.is_none());
        let id = ComponentId(self.components.len() as u32);
        self.components.push(Component {
            v,
            ell,
            xi,
            recon,
            held: 0,
            status: Status::Temporary,
        });
        self.shift = add_mod(self.shift, xi, self.p);
        self.total_len += ell;
        self.temp = Some(id);
        id
    }

    #[inline]
    pub(crate) fn write_cell(&mut self, r: Residue, c: ComponentId, t: u64) {
        self.owner.cells[r as usize] = Cell {
            comp: c.0,
            t: t as u32,
        };
        self.counters.owner_writes += 1;
    }

    #[inline]
    pub(crate) fn read_cell(&mut self, r: Residue) -> Option<(ComponentId, u64)> {
        self.counters.owner_reads += 1;
        self.owner.get(r)
    }

    /// Probe of an unheld coefficient `t` of the temporary component `c`.
    /// Empty cells go to the pending list; the owner array is not written.
    pub fn scan_probe(&mut self, c: ComponentId, t: u64) -> Result<Probe> {
        let comp = *self.component(c);
        if comp.status != Status::Temporary || t <= comp.held || t > comp.ell {
            return Err(Error::invariant(format!(
                "scan of coefficient {t} on component {} outside its unheld range",
                c.0
            )));
        }
        let r = mul_mod(t, comp.v, self.p);
        Ok(self.probe_residue(r, t))
    }

    #[inline]
    pub(crate) fn probe_residue(&mut self, r: Residue, t: u64) -> Probe {
        self.counters.cells_scanned += 1;
        match self.read_cell(r) {
            None => {
                self.pending.push((r as u32, t as u32));
                Probe::Empty
            }
            Some((component, coefficient)) => Probe::Collision {
                component,
                coefficient,
            },
        }
    }

    /// Installs the pending cells and activates the temporary component.
    pub fn commit_temporary(&mut self, c: ComponentId) -> Result<()> {
        let comp = *self.component(c);
        if comp.status != Status::Temporary {
            return Err(Error::invariant(format!("commit of non-temporary {}", c.0)));
        }
        if comp.held + self.pending.len() as u64 != comp.ell {
            return Err(Error::invariant(format!(
                "commit of component {} with {} held and {} pending cells, length {}",
                c.0,
                comp.held,
                self.pending.len(),
                comp.ell
            )));
        }
        let pending = std::mem::take(&mut self.pending);
        for &(r, t) in &pending {
            if let Some((other, _)) = self.owner.get(r as u64) {
                return Err(AuditViolation {
                    residue: Some(r as u64),
                    components: vec![c, other],
                    message: "pending cell already owned at commit".into(),
                }
                .into());
            }
            self.write_cell(r as u64, c, t as u64);
        }
        self.pending = pending;
        self.pending.clear();
        if self.dir_index[comp.v as usize] != EMPTY {
            return Err(Error::invariant(format!(
                "direction {} already owned at commit",
                comp.v
            )));
        }
        self.dir_index[comp.v as usize] = c.0;
        let comp = self.comp_mut(c);
        comp.held = 0;
        comp.status = Status::Active;
        self.temp = None;
        Ok(())
    }

    /// Removes an active component from the active family. With `keep_cells`
    /// its installed cells stay in the owner array as the held prefix of the
    /// record, which becomes temporary; otherwise they are cleared and the
    /// record retires.
    pub fn detach_active(&mut self, d: ComponentId, keep_cells: bool) -> Result<()> {
        let comp = *self.component(d);
        if comp.status != Status::Active {
            return Err(Error::invariant(format!("detach of non-active {}", d.0)));
        }
        self.dir_index[comp.v as usize] = EMPTY;
        if keep_cells {
            let c = self.comp_mut(d);
            c.held = c.ell;
            c.status = Status::Temporary;
        } else {
            self.clear_cells(comp.v, comp.ell);
            self.comp_mut(d).status = Status::Retired;
        }
        Ok(())
    }

    /// Turns the temporary `c` (already truncated to `p - 1`) into the full
    /// component and writes its whole progression over the owner array.
    pub(crate) fn install_full(&mut self, c: ComponentId) {
        let p = self.p;
        let comp = *self.component(c);
        debug_assert_eq!(comp.ell, p - 1);
        let mut r = 0;
        for t in 1..p {
            r = add_mod(r, comp.v, p);
            self.write_cell(r, c, t);
        }
        let comp = self.comp_mut(c);
        comp.held = 0;
        comp.status = Status::Full;
        self.temp = None;
        self.full = Some(c);
    }

    /// Clears the held prefix of a temporary component.
    pub(crate) fn clear_held(&mut self, c: ComponentId) {
        let comp = *self.component(c);
        self.clear_cells(comp.v, comp.held);
        self.comp_mut(c).held = 0;
    }

    fn clear_cells(&mut self, v: Residue, count: u64) {
        let p = self.p;
        let mut r = 0;
        for _ in 0..count {
            r = add_mod(r, v, p);
            self.owner.cells[r as usize] = Cell::VACANT;
        }
        self.counters.owner_clears += count;
    }

    /// Records `Λ` after a transition and checks it never decreases. With
    /// auditing enabled also runs the full disjointness audit.
    /// The terminating full merge is exempt: truncation to `p - 1` may shrink `Λ`.
    pub(crate) fn after_transition(&mut self) -> Result<()> {
        if self.full.is_none() && self.total_len < self.last_lambda {
            return Err(Error::invariant(format!(
                "total length decreased from {} to {}",
                self.last_lambda, self.total_len
            )));
        }
        self.last_lambda = self.total_len;
        if self.audit {
            self.audit_disjointness()?;
        }
        Ok(())
    }

    /// Recomputes every component's covered cells from `(v, ℓ)` and checks
    /// them against the owner array, the direction index, `X` and `Λ`.
    /// Costs `O(p)`.
    pub fn audit_disjointness(&self) -> Result<(), AuditViolation> {
        let p = self.p;
        let fail = |residue: Option<Residue>, components: Vec<ComponentId>, message: &str| {
            Err(AuditViolation {
                residue,
                components,
                message: message.to_string(),
            })
        };

        for r in 1..p {
            let Some((c, t)) = self.owner.get(r) else {
                continue;
            };
            let Some(comp) = self.components.get(c.0 as usize) else {
                return fail(Some(r), vec![c], "owner cell names an unknown component");
            };
            if self.full.is_some_and(|f| f != c) {
                return fail(
                    Some(r),
                    vec![c],
                    "owner cell not overwritten by the full component",
                );
            }
            let limit = match comp.status {
                Status::Active | Status::Full => comp.ell,
                Status::Temporary => comp.held,
                Status::Retired => {
                    return fail(Some(r), vec![c], "owner cell names a retired component")
                }
            };
            if t == 0 || t > limit {
                return fail(
                    Some(r),
                    vec![c],
                    "owner coefficient outside installed range",
                );
            }
            if mul_mod(t, comp.v, p) != r {
                return fail(Some(r), vec![c], "owner cell is not t·v(C)");
            }
        }

        let mut shift = 0;
        let mut lambda = 0u64;
        let mut temporaries = 0;
        for (id, comp) in self.components() {
            // once the full progression is written, active cells are overwritten
            let installed = match comp.status {
                Status::Active if self.full.is_some() => 0,
                Status::Active | Status::Full => comp.ell,
                Status::Temporary => {
                    temporaries += 1;
                    comp.held
                }
                Status::Retired => continue,
            };
            shift = add_mod(shift, comp.xi, p);
            lambda += comp.ell;
            if comp.ell > p - 1 || comp.held > comp.ell {
                return fail(None, vec![id], "component length out of range");
            }
            let mut r = 0;
            for t in 1..=installed {
                r = add_mod(r, comp.v, p);
                match self.owner.get(r) {
                    Some((c, u)) if c == id && u == t => {}
                    Some((c, _)) if c != id => {
                        return fail(Some(r), vec![id, c], "covered residues overlap")
                    }
                    _ => return fail(Some(r), vec![id], "covered residue not installed"),
                }
            }
            if comp.status == Status::Active && self.direction_owner(comp.v) != Some(id) {
                return fail(
                    Some(comp.v),
                    vec![id],
                    "direction index misses active component",
                );
            }
        }
        if temporaries > 1 || (temporaries == 1) != self.temp.is_some() {
            return fail(None, vec![], "temporary component bookkeeping mismatch");
        }
        for v in 1..p {
            if let Some(id) = self.direction_owner(v) {
                let comp = self.component(id);
                if comp.status != Status::Active || comp.v != v {
                    return fail(Some(v), vec![id], "direction index names a stale component");
                }
            }
        }
        if shift != self.shift {
            return fail(None, vec![], "global shift differs from the sum of offsets");
        }
        if lambda != self.total_len {
            return fail(None, vec![], "total length differs from the sum of lengths");
        }
        if lambda >= 2 * p {
            return fail(None, vec![], "total length reached 2p");
        }
        if self.temp.is_none() && self.full.is_none() && lambda > p - 1 {
            return fail(None, vec![], "disjoint family longer than p - 1");
        }
        Ok(())
    }
}
