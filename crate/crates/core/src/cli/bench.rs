//! Benchmark harness: wall time plus exact owner-array counters per run.

use std::io::Write;
use std::time::Instant;

use serde::Serialize;

use crate::cli::generate::{generate_egz, generate_prime_target, Distribution};
use crate::egz::{solve_egz_instrumented, verify_certificate};
use crate::error::{Error, Result};
use crate::modmath::is_prime;
use crate::state::{Counters, SolverState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BenchMode {
    /// Target subset sum on `p - 1` generated differences; sizes must be prime.
    PrimeTarget,
    /// The complete solver on `2n - 1` generated values.
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub n: u64,
    pub wall_time_ns: u64,
    pub owner_reads: u64,
    pub owner_writes: u64,
    pub owner_clears: u64,
    pub cells_scanned: u64,
    pub merges: u64,
    pub extensions: u64,
    pub recon_nodes: u64,
    pub touches_per_p: f64,
}

impl BenchRecord {
    fn new(n: u64, wall_time_ns: u64, c: &Counters) -> Self {
        BenchRecord {
            n,
            wall_time_ns,
            owner_reads: c.owner_reads,
            owner_writes: c.owner_writes,
            owner_clears: c.owner_clears,
            cells_scanned: c.cells_scanned,
            merges: c.merges,
            extensions: c.extensions,
            recon_nodes: c.recon_nodes,
            touches_per_p: c.touches() as f64 / n as f64,
        }
    }
}

pub fn bench_one(n: u64, seed: u64, dist: Distribution, mode: BenchMode) -> Result<BenchRecord> {
    match mode {
        BenchMode::PrimeTarget => {
            if !is_prime(n) {
                return Err(Error::input(format!(
                    "prime-target sizes must be prime, got {n}"
                )));
            }
            let inst = generate_prime_target(n, seed, dist)?;
            let mut state = SolverState::new(n)?;
            let start = Instant::now();
            let j = state.solve(inst.d(), inst.tau())?;
            let ns = start.elapsed().as_nanos() as u64;
            let sum = j.iter().fold(0u64, |acc, &i| (acc + inst.d()[i]) % n);
            if sum != inst.tau() {
                return Err(Error::invariant("benchmark solution misses its target"));
            }
            Ok(BenchRecord::new(n, ns, state.counters()))
        }
        BenchMode::Full => {
            let inst = generate_egz(n, seed, dist)?;
            let start = Instant::now();
            let (cert, stats) = solve_egz_instrumented(&inst, false)?;
            let ns = start.elapsed().as_nanos() as u64;
            if !verify_certificate(&inst, &cert).is_valid() {
                return Err(Error::invariant(
                    "benchmark certificate failed verification",
                ));
            }
            Ok(BenchRecord::new(n, ns, &stats.counters))
        }
    }
}

/// One record per `(size, seed)`, sizes outermost, in input order.
pub fn run_bench(
    sizes: &[u64],
    seeds: &[u64],
    dist: Distribution,
    mode: BenchMode,
) -> Result<Vec<BenchRecord>> {
    let mut out = Vec::with_capacity(sizes.len() * seeds.len());
    for &n in sizes {
        for &seed in seeds {
            out.push(bench_one(n, seed, dist, mode)?);
        }
    }
    Ok(out)
}

pub fn write_csv<W: Write>(records: &[BenchRecord], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(r)
            .map_err(|e| Error::input(format!("csv write failed: {e}")))?;
    }
    w.flush()
        .map_err(|e| Error::input(format!("csv write failed: {e}")))?;
    Ok(())
}
