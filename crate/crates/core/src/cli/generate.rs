//! Seeded instance generators. Output depends only on `(size, seed, distribution)`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::egz::EgzInstance;
use crate::error::Result;
use crate::prime_target::PrimeTargetInstance;

const VALUE_RANGE: i64 = 1_000_000_000;
const LIFT_RANGE: i64 = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Distribution {
    /// Values uniform in `[-10^9, 10^9]`.
    Uniform,
    /// Values drawn from at most three residue classes.
    AdversarialFewResidues,
    /// At least `n` values share one residue class.
    SingleResidueHeavy,
}

impl Distribution {
    pub const ALL: [Distribution; 3] = [
        Distribution::Uniform,
        Distribution::AdversarialFewResidues,
        Distribution::SingleResidueHeavy,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Distribution::Uniform => "uniform",
            Distribution::AdversarialFewResidues => "adversarial-few-residues",
            Distribution::SingleResidueHeavy => "single-residue-heavy",
        }
    }
}

fn lift(rng: &mut ChaCha8Rng, residue: u64, n: u64) -> i64 {
    residue as i64 + n as i64 * rng.gen_range(-LIFT_RANGE..=LIFT_RANGE)
}

pub fn generate_egz(n: u64, seed: u64, dist: Distribution) -> Result<EgzInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = (2 * n.max(1) - 1) as usize;
    let values: Vec<i64> = match dist {
        Distribution::Uniform => (0..len)
            .map(|_| rng.gen_range(-VALUE_RANGE..=VALUE_RANGE))
            .collect(),
        Distribution::AdversarialFewResidues => {
            let classes: Vec<u64> = (0..3).map(|_| rng.gen_range(0..n.max(1))).collect();
            (0..len)
                .map(|_| {
                    let r = classes[rng.gen_range(0..classes.len())];
                    lift(&mut rng, r, n)
                })
                .collect()
        }
        Distribution::SingleResidueHeavy => {
            let r = rng.gen_range(0..n.max(1));
            let mut v: Vec<i64> = (0..n as usize).map(|_| lift(&mut rng, r, n)).collect();
            v.extend((n as usize..len).map(|_| rng.gen_range(-VALUE_RANGE..=VALUE_RANGE)));
            v.shuffle(&mut rng);
            v
        }
    };
    EgzInstance::new(n, values)
}

/// Differences for the prime target problem. The heavy distribution makes
/// three quarters of the differences equal, producing long extension chains.
pub fn generate_prime_target(p: u64, seed: u64, dist: Distribution) -> Result<PrimeTargetInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = p.saturating_sub(1) as usize;
    let d: Vec<u64> = match dist {
        Distribution::Uniform => (0..len).map(|_| rng.gen_range(1..p)).collect(),
        Distribution::AdversarialFewResidues => {
            let classes: Vec<u64> = (0..3).map(|_| rng.gen_range(1..p)).collect();
            (0..len)
                .map(|_| classes[rng.gen_range(0..classes.len())])
                .collect()
        }
        Distribution::SingleResidueHeavy => {
            let heavy = rng.gen_range(1..p);
            (0..len)
                .map(|_| {
                    if rng.gen_bool(0.75) {
                        heavy
                    } else {
                        rng.gen_range(1..p)
                    }
                })
                .collect()
        }
    };
    let tau = rng.gen_range(0..p);
    PrimeTargetInstance::new(p, d, tau)
}
