use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tubecc::basis::{eliminate_to_rigid, expand_rays, rewrite_to_rigid, DecomposeOptions, Target};
use tubecc::verify::random_module;
use tubecc::*;

fn indecs(rank: usize, max_len: u32) -> Vec<Indec> {
    (1..=rank as i64)
        .flat_map(|i| (1..=max_len).map(move |n| Indec::new(rank, i, n).unwrap()))
        .collect()
}

fn ray(e: Indec) -> Vec<i64> {
    (0..e.length() as i64)
        .map(|t| e.socle() as i64 + t)
        .collect()
}

#[test]
fn expansions_are_triangular() {
    for r in 1..=4usize {
        let all = indecs(r, 2 * r as u32);
        for (p, &a) in all.iter().enumerate() {
            for &b in all[p..].iter() {
                for t in [vec![a], vec![a, b]] {
                    let top = TubeModule::from_indecs(r, t.clone());
                    let rays: Vec<Vec<i64>> = t.iter().map(|&e| ray(e)).collect();
                    let exp = expand_rays(r, &rays).unwrap();
                    assert_eq!(exp.get(&top), Some(&BigInt::from(1)), "r={r} {top}");
                    for k in exp.keys().filter(|k| **k != top) {
                        let order = dim_order_cmp(&k.dim_vector(), &top.dim_vector()).unwrap();
                        assert_eq!(order, DimOrder::Less, "r={r} {top}: {k}");
                    }
                }
            }
        }
    }
}

#[test]
fn stages_agree_on_pairs() {
    for r in 1..=4usize {
        let all = indecs(r, 2 * r as u32 + 1);
        for (p, &a) in all.iter().enumerate() {
            for &b in all[p..].iter() {
                let m = TubeModule::from_indecs(r, vec![a, b]);
                let rewritten = rewrite_to_rigid(&m, 10_000)
                    .unwrap()
                    .expect("rewriting finishes");
                let mut bound = m.dim_vector();
                for k in rewritten.keys() {
                    assert!(k.dim_vector().leq(&m.dim_vector()), "r={r} {m}: {k}");
                    bound = bound.join(&k.dim_vector()).unwrap();
                }
                let eliminated = eliminate_to_rigid(&char_module(&m), &bound, 5).unwrap();
                assert_eq!(rewritten, eliminated, "r={r} {m}");
            }
        }
    }
}

#[test]
fn stages_agree_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..300 {
        let r = rng.gen_range(1..=4);
        let m = random_module(&mut rng, r, 3, 2 * r as u32 + 1);
        let rewritten = rewrite_to_rigid(&m, 10_000)
            .unwrap()
            .expect("rewriting finishes");
        let eliminated = eliminate_to_rigid(&char_module(&m), &m.dim_vector(), 1).unwrap();
        assert_eq!(rewritten, eliminated, "r={r} {m}");
    }
}

#[test]
fn polynomial_targets_match_module_targets() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let opts = DecomposeOptions::default();
    for _ in 0..50 {
        let r = rng.gen_range(2..=4);
        let m = random_module(&mut rng, r, 2, 2 * r as u32);
        let a = decompose(&Target::Module(m.clone()), &opts).unwrap();
        let b = decompose(&Target::Poly(char_module(&m)), &opts).unwrap();
        assert_eq!(a, b, "r={r} {m}");
    }
}

#[test]
fn no_fuel_still_decomposes() {
    let m = TubeModule::parse(3, "E(1,7)+E(2,4)+E(3,2)").unwrap();
    assert_eq!(rewrite_to_rigid(&m, 1).unwrap(), None);
    let short = decompose(
        &Target::Module(m.clone()),
        &DecomposeOptions { fuel: 1, seed: 0 },
    )
    .unwrap();
    let full = decompose(&Target::Module(m), &DecomposeOptions::default()).unwrap();
    assert_eq!(short, full);
}

#[test]
fn rigid_families_are_tau_closed_and_rigid() {
    for r in 1..=4usize {
        let bound = DimVector::new(vec![2; r]).unwrap();
        let family = enumerate_rigid(r, &bound).unwrap();
        assert_eq!(family[0], TubeModule::zero(r));
        for m in &family {
            assert!(is_rigid(m).unwrap());
            assert!(m.summands().iter().all(|s| (s.length() as usize) < r));
            assert!(family.contains(&m.tau()));
        }
    }
}
