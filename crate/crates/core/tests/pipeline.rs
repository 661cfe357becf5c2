//! The rank-2 invariant pipeline against the exhaustive oracle, over
//! randomly chosen modules.

use drinfeld_core::drinfeld::DrinfeldModule;
use drinfeld_core::invariants::{
    cayley_hamilton_residual, compute_record, splits_completely, splits_completely_by_kernel, PrimeOutcome,
};
use drinfeld_core::oracle;
use drinfeld_core::{Poly, PolyRing};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_poly(rng: &mut ChaCha8Rng, q: u32, max_deg: usize) -> Poly {
    let deg = rng.gen_range(0..=max_deg);
    Poly::from_coeffs((0..=deg).map(|_| rng.gen_range(0..q)).collect())
}

fn random_module(rng: &mut ChaCha8Rng, ring: &PolyRing) -> DrinfeldModule {
    let q = ring.q();
    let mut g2 = Poly::zero();
    while g2.is_zero() {
        g2 = random_poly(rng, q, 2);
    }
    DrinfeldModule::new(ring, vec![random_poly(rng, q, 2), g2]).unwrap()
}

#[test]
fn random_modules_agree_with_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (q, max_deg) in [(2u32, 5usize), (3, 3), (4, 3), (5, 2)] {
        let ring = PolyRing::with_q(q).unwrap();
        for _ in 0..4 {
            let psi = random_module(&mut rng, &ring);
            for p in (1..=max_deg).flat_map(|d| ring.enumerate_irreducible(d)) {
                let rec = match compute_record(&psi, &p).unwrap() {
                    PrimeOutcome::Good(r) => r,
                    PrimeOutcome::Bad(b) => {
                        assert!(ring.divides(&b, &psi.coeffs()[1]));
                        continue;
                    }
                };
                let m = psi.reduce(&p).unwrap();
                assert!(cayley_hamilton_residual(&m, &rec.a1, rec.u).is_zero());
                let divs = oracle::structure(&m).unwrap();
                assert_eq!(divs, vec![rec.d1.clone(), rec.d2.clone()], "q={q} p={p} g={:?}", psi.coeffs());
            }
        }
    }
}

#[test]
fn splitting_criteria_agree() {
    let ring = PolyRing::with_q(3).unwrap();
    let psi = DrinfeldModule::zywina(&ring);
    let moduli: Vec<Poly> = (1..=2).flat_map(|d| ring.enumerate_monic(d).collect::<Vec<_>>()).collect();
    for p in (1..=5).flat_map(|d| ring.enumerate_irreducible(d)) {
        let Ok(PrimeOutcome::Good(rec)) = compute_record(&psi, &p) else { continue };
        let m = psi.reduce(&p).unwrap();
        for a in moduli.iter().filter(|a| ring.gcd(a, &p).is_one()) {
            let by_d1 = splits_completely(&m, a, &rec.d1).unwrap();
            assert_eq!(by_d1, ring.divides(a, &rec.d1));
            assert_eq!(by_d1, splits_completely_by_kernel(&m, a).unwrap(), "p={p} a={a}");
        }
    }
}

#[test]
fn rank_three_oracle_sizes_add_up() {
    let ring = PolyRing::with_q(2).unwrap();
    let psi = DrinfeldModule::new(&ring, vec![Poly::one(), Poly::t(), Poly::one()]).unwrap();
    for p in (1..=4).flat_map(|d| ring.enumerate_irreducible(d)) {
        let m = psi.reduce(&p).unwrap();
        let divs = oracle::structure(&m).unwrap();
        assert_eq!(divs.len(), 3);
        assert_eq!(oracle::characteristic(&ring, &divs).deg(), p.deg());
        assert_eq!(divs[2], oracle::exponent_from_annihilators(&m).unwrap());
    }
}
