use drinfeld_core::identities::check_prime_count;
use drinfeld_core::{Poly, PolyRing};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn prime_counts_obey_the_bound_up_to_degree_ten() {
    for q in [2, 3] {
        let ring = PolyRing::with_q(q).unwrap();
        let report = check_prime_count(&ring, 10);
        assert!(report.passed(), "q={q}: {report:?}");
        assert_eq!(report.checked, 10);
    }
}

#[test]
fn enumeration_matches_the_necklace_formula_over_prime_power_fields() {
    for q in [4, 8, 9] {
        let ring = PolyRing::with_q(q).unwrap();
        for n in 1..=3 {
            let found = ring.enumerate_irreducible(n);
            assert_eq!(BigUint::from(found.len()), ring.irreducible_count_formula(n), "q={q} n={n}");
            assert!(found.iter().all(|p| p.is_monic() && ring.factor(p).unwrap().factors == vec![(p.clone(), 1)]));
        }
    }
}

#[test]
fn factorization_round_trips_over_several_fields() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for q in [2u32, 3, 4, 5, 9, 16] {
        let ring = PolyRing::with_q(q).unwrap();
        for _ in 0..25 {
            let deg = rng.gen_range(1..=14);
            let mut c: Vec<u32> = (0..=deg).map(|_| rng.gen_range(0..q)).collect();
            c[deg] = rng.gen_range(1..q);
            let a = Poly::from_coeffs(c);
            let f = ring.factor(&a).unwrap();
            assert_eq!(f.expand(&ring), a, "q={q}");
            for (p, e) in &f.factors {
                assert!(p.is_monic() && ring.is_irreducible(p) && *e > 0);
            }
        }
    }
}
