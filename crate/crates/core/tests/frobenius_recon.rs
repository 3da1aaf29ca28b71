use egz::cli::{generate_prime_target, Distribution};
use egz::frobenius::{make_merge_plan, represent};
use egz::modmath::{is_prime, mul_mod};
use egz::oracle::brute_sumset;
use egz::recon::ReconPool;
use egz::state::{SolverState, Status};
use proptest::prelude::*;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn prime_at_most(mut k: u64) -> u64 {
    while !is_prime(k) {
        k -= 1;
    }
    k
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn merged_progression_lies_in_sumset(
        p_hint in 13u64..200,
        g_seed in any::<u64>(),
        x in 1u64..12,
        y in 1u64..12,
        extra_l in 0u64..20,
        extra_m in 0u64..20,
    ) {
        let p = prime_at_most(p_hint);
        let h = gcd(x, y);
        let (x, y) = (x / h, y / h);
        let g = 1 + g_seed % (p - 1);
        let (ell, m) = (x + extra_l, y + extra_m);
        let (v, w) = (mul_mod(y, g, p), mul_mod(x, g, p));
        let plan = make_merge_plan(v, ell, w, m, x, y, p).unwrap();
        let sumset = brute_sumset(p, &[(v, ell), (w, m)]);
        for t in 0..=plan.truncated_length(p) {
            let rep = represent(&plan, t).unwrap();
            prop_assert!(rep.alpha <= ell && rep.beta <= m);
            prop_assert_eq!(rep.alpha * y + rep.beta * x, plan.f + t);
            let r = mul_mod((plan.f + t) % p, g, p);
            prop_assert_eq!((mul_mod(rep.alpha % p, v, p) + mul_mod(rep.beta % p, w, p)) % p, r);
            prop_assert!(sumset.contains(&r));
        }
    }
}

/// Every surviving component expands, for every coefficient, to distinct
/// positions whose differences sum to `xi + t·v`, and distinct components
/// never share a position.
#[test]
fn reconstruction_is_sound_up_to_200() {
    let mut checked = 0u64;
    for p in (2..=200u64).filter(|&p| is_prime(p)) {
        for dist in Distribution::ALL {
            for seed in 0..4 {
                let inst = generate_prime_target(p, seed, dist).unwrap();
                let mut state = SolverState::new(p).unwrap();
                state.set_audit(true);
                let j = state.solve(inst.d(), inst.tau()).unwrap();
                let sum = j.iter().fold(0, |a, &i| (a + inst.d()[i]) % p);
                assert_eq!(sum, inst.tau());

                let mut pool: ReconPool = state.recon().clone();
                let mut claimed = vec![false; inst.d().len()];
                for (_, c) in state.components() {
                    if !matches!(c.status, Status::Active | Status::Full) {
                        continue;
                    }
                    let mut top = Vec::new();
                    pool.expand(c.recon, c.ell, &mut top).unwrap();
                    for &i in &top {
                        assert!(!claimed[i as usize], "p={p}: position {i} shared");
                        claimed[i as usize] = true;
                    }
                    for t in 0..=c.ell {
                        let mut sink = Vec::new();
                        let visited = pool.expand(c.recon, t, &mut sink).unwrap();
                        assert!(visited <= pool.len());
                        let mut sorted = sink.clone();
                        sorted.sort_unstable();
                        sorted.dedup();
                        assert_eq!(sorted.len(), sink.len(), "p={p}: duplicate position");
                        let s = sink.iter().fold(0, |a, &i| (a + inst.d()[i as usize]) % p);
                        assert_eq!(s, (c.xi + mul_mod(t % p, c.v, p)) % p, "p={p} t={t}");
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 10_000);
}
