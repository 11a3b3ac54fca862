//! Properties of collection: the multiplication defined by a consistent
//! presentation is a group law, and a presentation on `n` generators is
//! consistent exactly when its group has order `p^n`.

mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sigma3_core::consistency::is_consistent;
use sigma3_core::{build_family, check_consistency, Collector, Family, PcPresentation};

use common::{mutate, pc_group_order, random_element};

fn sample_groups() -> Vec<(String, PcPresentation)> {
    let mut out = Vec::new();
    for e in 2..=4 {
        out.push((format!("bifurcation({e})"), build_family(Family::Bifurcation, e).unwrap()));
    }
    for e in [5, 8] {
        out.push((format!("metabelian-chain({e})"), build_family(Family::MetabelianChain, e).unwrap()));
    }
    out
}

#[test]
fn ten_thousand_associativity_probes() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let groups = sample_groups();
    let probes = 10_000;
    let mut failures = Vec::new();
    for k in 0..probes {
        let (name, pc) = &groups[k % groups.len()];
        let col = Collector::new(pc);
        let a = random_element(&mut rng, pc.n(), 3);
        let b = random_element(&mut rng, pc.n(), 3);
        let c = random_element(&mut rng, pc.n(), 3);
        let left = col.mul(&col.mul(&a, &b), &c);
        let right = col.mul(&a, &col.mul(&b, &c));
        if left != right {
            failures.push(format!("{name}: {a:?} {b:?} {c:?}"));
        }
    }
    assert!(failures.is_empty(), "{} of {probes} probes failed: {:?}", failures.len(), &failures[..failures.len().min(5)]);
}

#[test]
fn inverses_and_powers_are_compatible() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, pc) in sample_groups() {
        let col = Collector::new(&pc);
        for _ in 0..200 {
            let a = random_element(&mut rng, pc.n(), 3);
            assert!(Collector::is_identity(&col.mul(&a, &col.inv(&a))), "{name}");
            assert!(Collector::is_identity(&col.mul(&col.inv(&a), &a)), "{name}");
            let k = col.order_log(&a);
            assert!(Collector::is_identity(&col.pow(&a, 3i64.pow(k))), "{name}");
            if k > 0 {
                assert!(!Collector::is_identity(&col.pow(&a, 3i64.pow(k - 1))), "{name}");
            }
        }
    }
}

/// Small presentations to perturb: class quotients of the bifurcation
/// groups with at most 8 generators.
fn seeds() -> Vec<PcPresentation> {
    let mut out = vec![PcPresentation::elementary(3, 2), PcPresentation::elementary(3, 3)];
    for e in 2..=4 {
        let pc = build_family(Family::Bifurcation, e).unwrap();
        for c in 2..=pc.p_class() {
            let q = pc.class_quotient(c);
            if q.n() <= 8 {
                out.push(q);
            }
        }
    }
    out
}

// Prediction: for every presentation with n <= 8 generators, the overlap
// test reports no violation iff coset enumeration over the trivial subgroup
// finds exactly 3^n cosets. Both outcomes must occur in the sample.
#[test]
fn consistency_iff_group_has_full_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut consistent, mut inconsistent) = (0, 0);
    for seed in seeds() {
        let n = seed.n();
        let full = 3usize.pow(n as u32);
        let order = pc_group_order(&seed, 50 * full).expect("enumeration completes");
        assert_eq!(order, full, "seed presentation {seed}");
        assert!(is_consistent(&seed));
        for _ in 0..25 {
            let Some(q) = mutate(&seed, &mut rng) else { break };
            let order = pc_group_order(&q, 50 * full).expect("enumeration completes");
            let ok = check_consistency(&q).is_empty();
            assert_eq!(ok, order == full, "order {order} vs 3^{n} for\n{q}");
            if ok {
                consistent += 1;
            } else {
                inconsistent += 1;
            }
        }
    }
    assert!(consistent > 10 && inconsistent > 10, "sample too one-sided: {consistent} / {inconsistent}");
}
