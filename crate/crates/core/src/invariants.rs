//! Per-prime invariants of a reduced rank-2 Drinfeld module.
//!
//! For a good prime `p` of degree `d`, the Frobenius `π = τ^d` satisfies
//! `π² + ψ̄_{a1} π + ψ̄_{u p} = 0` in F_℘{τ} with `a1 ∈ A`, `deg a1 ≤ ⌊d/2⌋`
//! and `u ∈ F_q^*`. Then `χ = monic(1 + a1 + u p)` is the Euler–Poincaré
//! characteristic of `ψ(F_℘) ≅ A/d1 × A/d2`, and `d1` is the largest `m`
//! with the full `m`-torsion rational over F_℘.

use alloc::vec::Vec;

use crate::drinfeld::{DrinfeldModule, ReducedModule};
use crate::error::{Error, Result};
use crate::fq::FqElem;
use crate::poly::{Poly, PolyRing};
use crate::skew::SkewPoly;

/// Everything the survey stores about one good prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeRecord {
    pub p: Poly,
    pub deg: usize,
    pub a1: Poly,
    pub u: FqElem,
    pub chi: Poly,
    pub d1: Poly,
    pub d2: Poly,
    pub height: usize,
}

impl PrimeRecord {
    /// `P(1) = 1 + a1 + u·p`.
    pub fn p_at_one(&self, ring: &PolyRing) -> Poly {
        p_at_one(ring, &self.p, &self.a1, self.u)
    }

    /// `P^1(1) = 1 − u·p`, the companion rank-1 value.
    pub fn companion_at_one(&self, ring: &PolyRing) -> Poly {
        ring.sub(&Poly::one(), &ring.scale(self.u, &self.p))
    }

    /// Re-checks every invariant that holds for a correct record without
    /// needing the module itself.
    pub fn validate(&self, ring: &PolyRing) -> Result<()> {
        let fail = |what| Err(Error::Consistency { p: self.p.clone(), what });
        if !self.p.is_monic() || self.p.deg() != self.deg || !ring.is_irreducible(&self.p) {
            return fail("p is not a monic irreducible of the recorded degree");
        }
        if self.u == 0 || !ring.fq().is_valid(self.u) {
            return fail("u is not a nonzero constant");
        }
        if self.a1.degree().is_some_and(|k| k > self.deg / 2) {
            return fail("deg a1 exceeds ⌊d/2⌋");
        }
        let p1 = self.p_at_one(ring);
        if ring.monic(&p1) != self.chi || self.chi.degree() != Some(self.deg) {
            return fail("χ is not monic(P(1)) of degree d");
        }
        if !self.d1.is_monic() || !self.d2.is_monic() {
            return fail("elementary divisors are not monic");
        }
        if ring.mul(&self.d1, &self.d2) != self.chi {
            return fail("d1·d2 ≠ χ");
        }
        if !ring.divides(&self.d1, &self.d2) {
            return fail("d1 ∤ d2");
        }
        if !ring.gcd(&self.d1, &self.p).is_one() {
            return fail("gcd(d1, p) ≠ 1");
        }
        if !ring.divides(&ring.mul(&self.d1, &self.d1), &p1) {
            return fail("d1² ∤ P(1)");
        }
        if !ring.divides(&self.d1, &self.companion_at_one(ring)) {
            return fail("d1 ∤ 1 − u·p");
        }
        if self.height == 0 || self.height > 2 {
            return fail("height outside [1, 2]");
        }
        Ok(())
    }
}

fn p_at_one(ring: &PolyRing, p: &Poly, a1: &Poly, u: FqElem) -> Poly {
    ring.add(&ring.add(&Poly::one(), a1), &ring.scale(u, p))
}

/// `τ^{2d} + ψ̄_{a1} τ^d + ψ̄_{u p}`; zero exactly when `(a1, u)` is the
/// Frobenius characteristic polynomial.
pub fn cayley_hamilton_residual(m: &ReducedModule, a1: &Poly, u: FqElem) -> SkewPoly {
    let field = m.field();
    let d = m.degree();
    let pi = SkewPoly::monomial(field, Poly::one(), d);
    let pi2 = SkewPoly::monomial(field, Poly::one(), 2 * d);
    let up = m.ring().scale(u, m.prime());
    let middle = m.psi_of(a1).mul(&pi).expect("same field");
    pi2.add(&middle).and_then(|s| s.add(&m.psi_of(&up))).expect("same field")
}

/// Finds `(a1, u)` by trying every `u ∈ F_q^*`: `R = τ^{2d} + ψ̄_{u p}` is
/// right-divisible by `τ^d`, and `G = −R/τ^d` must equal `ψ̄_{a1}` where
/// `a1` is read off the constant coefficient of `G`.
pub fn frobenius_charpoly_rank2(m: &ReducedModule) -> Result<(Poly, FqElem)> {
    let p = m.prime().clone();
    if m.rank() != 2 {
        return Err(Error::InvalidArgument("the charpoly pipeline needs rank 2"));
    }
    let field = m.field();
    let ring = m.ring();
    let d = m.degree();
    let pi = SkewPoly::monomial(field, Poly::one(), d);
    let pi2 = SkewPoly::monomial(field, Poly::one(), 2 * d);
    let psi_p = m.psi_of(&p);

    let mut accepted: Vec<(Poly, FqElem)> = Vec::new();
    for u in ring.fq().units() {
        let r = pi2.add(&psi_p.scale_left(&Poly::constant(u)))?;
        let (quot, rem) = r.right_divmod(&pi)?;
        if !rem.is_zero() {
            return Err(Error::Consistency { p, what: "τ^{2d} + ψ̄_{up} not right-divisible by τ^d" });
        }
        let g = quot.neg();
        // the residue has degree < d; a1 itself has degree ≤ ⌊d/2⌋
        let a1 = g.coeff(0);
        if a1.degree().is_some_and(|k| k > d / 2) {
            continue;
        }
        if m.psi_of(&a1) == g {
            accepted.push((a1, u));
        }
    }
    match accepted.len() {
        1 => Ok(accepted.pop().unwrap()),
        n => Err(Error::InconsistentCharpoly { p, accepted: n }),
    }
}

/// Monic generator of `P(1)·A`; its degree must be `deg p`.
pub fn euler_char(m: &ReducedModule, a1: &Poly, u: FqElem) -> Result<Poly> {
    let ring = m.ring();
    let p1 = p_at_one(ring, m.prime(), a1, u);
    if p1.is_zero() {
        return Err(Error::Consistency { p: m.prime().clone(), what: "P(1) = 0" });
    }
    let chi = ring.monic(&p1);
    if chi.deg() != m.degree() {
        return Err(Error::Consistency { p: m.prime().clone(), what: "deg χ ≠ deg p" });
    }
    Ok(chi)
}

/// Largest monic `m` with `ψ̄[m] ⊆ F_℘`, searched prime by prime among the
/// `ℓ` with `ℓ² | χ`, `ℓ ≠ p`.
pub fn first_divisor(m: &ReducedModule, chi: &Poly) -> Result<Poly> {
    let ring = m.ring();
    let r = m.rank();
    let d = m.degree();
    let fac = ring.factor(chi)?;
    let mut d1 = Poly::one();
    for (l, v) in &fac.factors {
        if l == m.prime() || *v < r as u32 {
            continue;
        }
        let full = |e: u32| -> Result<bool> {
            let psi = m.psi_prime_power(l, e);
            Ok(psi.kernel_rank_in(d)? == r * e as usize * l.deg())
        };
        // largest e ≤ ⌊v/r⌋ with ψ̄[ℓ^e] rational; membership is downward closed
        let (mut lo, mut hi) = (0u32, *v / r as u32);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if full(mid)? {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        if lo > 0 {
            d1 = ring.mul(&d1, &ring.pow(l, lo as u64));
        }
    }
    Ok(d1)
}

/// `d2 = χ/d1`, checking `d1 | χ` and `d1 | d2`.
pub fn second_divisor(ring: &PolyRing, p: &Poly, chi: &Poly, d1: &Poly) -> Result<Poly> {
    let d2 = ring.div_exact(chi, d1)?.ok_or_else(|| Error::Consistency { p: p.clone(), what: "d1 ∤ χ" })?;
    if !ring.divides(d1, &d2) {
        return Err(Error::Consistency { p: p.clone(), what: "d1 ∤ d2" });
    }
    Ok(ring.monic(&d2))
}

/// Whether ℘ splits completely in the `m`-division field, i.e. `m | d1`.
pub fn splits_completely(m: &ReducedModule, modulus: &Poly, d1: &Poly) -> Result<bool> {
    let ring = m.ring();
    if !ring.gcd(modulus, m.prime()).is_one() {
        return Err(Error::NotCoprime { m: modulus.clone(), p: m.prime().clone() });
    }
    Ok(ring.divides(modulus, d1))
}

/// The same question answered from the kernel of `ψ̄_m` directly.
pub fn splits_completely_by_kernel(m: &ReducedModule, modulus: &Poly) -> Result<bool> {
    let ring = m.ring();
    if !ring.gcd(modulus, m.prime()).is_one() {
        return Err(Error::NotCoprime { m: modulus.clone(), p: m.prime().clone() });
    }
    Ok(m.kernel_rank(modulus)? == m.rank() * modulus.degree().unwrap_or(0))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimeOutcome {
    Good(PrimeRecord),
    /// `p | g_r`.
    Bad(Poly),
}

/// The full rank-2 pipeline at one prime, with every invariant enforced.
pub fn compute_record(psi: &DrinfeldModule, p: &Poly) -> Result<PrimeOutcome> {
    let m = match psi.reduce(p) {
        Ok(m) => m,
        Err(Error::BadReduction(p)) => return Ok(PrimeOutcome::Bad(p)),
        Err(e) => return Err(e),
    };
    record_for(&m).map(PrimeOutcome::Good)
}

pub fn record_for(m: &ReducedModule) -> Result<PrimeRecord> {
    let ring = m.ring();
    let (a1, u) = frobenius_charpoly_rank2(m)?;
    let chi = euler_char(m, &a1, u)?;
    let d1 = first_divisor(m, &chi)?;
    let d2 = second_divisor(ring, m.prime(), &chi, &d1)?;
    let height = m.height()?;
    let rec = PrimeRecord { p: m.prime().clone(), deg: m.degree(), a1, u, chi, d1, d2, height };
    rec.validate(ring)?;
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn zywina_at_t_plus_one() {
        let a = PolyRing::with_q(3).unwrap();
        let psi = DrinfeldModule::zywina(&a);
        let m = psi.reduce(&p("1,1")).unwrap();
        let (a1, u) = frobenius_charpoly_rank2(&m).unwrap();
        assert!(cayley_hamilton_residual(&m, &a1, u).is_zero());
        assert!(a1.degree().is_none_or(|k| k == 0));
        let chi = euler_char(&m, &a1, u).unwrap();
        assert_eq!(chi.deg(), 1);
        let s = oracle::structure(&m).unwrap();
        assert_eq!(oracle::characteristic(&a, &s), chi);
    }

    #[test]
    fn charpoly_identity_over_many_primes() {
        for q in [2, 3, 4, 5] {
            let a = PolyRing::with_q(q).unwrap();
            let psi = DrinfeldModule::zywina(&a);
            for d in 1..=4 {
                for l in a.enumerate_irreducible(d).into_iter().take(12) {
                    let Ok(m) = psi.reduce(&l) else { continue };
                    let (a1, u) = frobenius_charpoly_rank2(&m).unwrap();
                    assert!(cayley_hamilton_residual(&m, &a1, u).is_zero(), "q={q} p={l}");
                    assert!(a1.degree().is_none_or(|k| k <= d / 2));
                    let p1 = p_at_one(&a, &l, &a1, u);
                    assert_eq!(a.norm(&p1), a.norm(&l));
                }
            }
        }
    }

    #[test]
    fn wrong_unit_fails_identity() {
        let a = PolyRing::with_q(5).unwrap();
        let psi = DrinfeldModule::zywina(&a);
        let l = a.enumerate_irreducible(3)[4].clone();
        let m = psi.reduce(&l).unwrap();
        let (a1, u) = frobenius_charpoly_rank2(&m).unwrap();
        for v in a.fq().units().filter(|&v| v != u) {
            assert!(!cayley_hamilton_residual(&m, &a1, v).is_zero());
        }
    }

    #[test]
    fn squarefree_chi_gives_trivial_d1() {
        let a = PolyRing::with_q(3).unwrap();
        let psi = DrinfeldModule::zywina(&a);
        let mut seen = 0;
        for l in a.enumerate_irreducible(4) {
            let Ok(PrimeOutcome::Good(rec)) = compute_record(&psi, &l) else { continue };
            if a.mobius(&rec.chi).unwrap() != 0 {
                assert!(rec.d1.is_one());
                assert_eq!(rec.d2, rec.chi);
                seen += 1;
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn matches_oracle_small_primes() {
        for q in [2, 3] {
            let a = PolyRing::with_q(q).unwrap();
            for psi in [
                DrinfeldModule::zywina(&a),
                DrinfeldModule::new(&a, vec![p("0,1"), p("1")]).unwrap(),
                DrinfeldModule::new(&a, vec![Poly::zero(), p("1,1")]).unwrap(),
            ] {
                for l in (1..=3).flat_map(|d| a.enumerate_irreducible(d)) {
                    let Ok(m) = psi.reduce(&l) else { continue };
                    let rec = record_for(&m).unwrap();
                    let s = oracle::structure(&m).unwrap();
                    assert_eq!(s, vec![rec.d1.clone(), rec.d2.clone()], "q={q} p={l}");
                    assert_eq!(oracle::exponent_from_annihilators(&m).unwrap(), rec.d2);
                }
            }
        }
    }

    #[test]
    fn splitting_examples() {
        let a = PolyRing::with_q(2).unwrap();
        let psi = DrinfeldModule::new(&a, vec![Poly::zero(), p("1")]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let primes: Vec<Poly> = (1..=5).flat_map(|d| a.enumerate_irreducible(d)).collect();
        let mut checked = 0;
        while checked < 50 {
            let l = &primes[rng.gen_range(0..primes.len())];
            let m = psi.reduce(l).unwrap();
            let rec = record_for(&m).unwrap();
            let modulus = a.enumerate_monic(rng.gen_range(0..=2)).nth(rng.gen_range(0..2)).unwrap_or(Poly::one());
            if !a.gcd(&modulus, l).is_one() {
                assert!(splits_completely(&m, &modulus, &rec.d1).is_err());
                continue;
            }
            let fast = splits_completely(&m, &modulus, &rec.d1).unwrap();
            assert_eq!(fast, splits_completely_by_kernel(&m, &modulus).unwrap(), "p={l} m={modulus}");
            checked += 1;
        }
        let m = psi.reduce(&p("1,1,1")).unwrap();
        let rec = record_for(&m).unwrap();
        assert!(splits_completely(&m, &Poly::one(), &rec.d1).unwrap());
        assert!(splits_completely(&m, &rec.d1, &rec.d1).unwrap());
    }

    #[test]
    fn second_divisor_checks() {
        let a = PolyRing::with_q(3).unwrap();
        let chi = p("1,0,1");
        assert_eq!(second_divisor(&a, &p("0,1"), &chi, &Poly::one()).unwrap(), chi);
        assert!(second_divisor(&a, &p("0,1"), &chi, &p("0,1")).is_err());
        // (T+1)·(T+1)(T+2): d1 = T+1 divides d2
        let chi2 = a.mul(&p("1,1"), &a.mul(&p("1,1"), &p("2,1")));
        assert_eq!(second_divisor(&a, &p("0,1"), &chi2, &p("1,1")).unwrap(), p("2,0,1"));
        // T+1 with d2 = T+2 is not a chain
        let chi3 = a.mul(&p("1,1"), &p("2,1"));
        assert!(second_divisor(&a, &p("0,1"), &chi3, &p("1,1")).is_err());
    }

    #[test]
    fn non_rank_two_rejected() {
        let a = PolyRing::with_q(3).unwrap();
        let m = DrinfeldModule::carlitz(&a).reduce(&p("1,1")).unwrap();
        assert!(frobenius_charpoly_rank2(&m).is_err());
    }

    #[test]
    fn validate_catches_corruption() {
        let a = PolyRing::with_q(3).unwrap();
        let psi = DrinfeldModule::zywina(&a);
        let l = a.enumerate_irreducible(3)[0].clone();
        let PrimeOutcome::Good(rec) = compute_record(&psi, &l).unwrap() else { panic!() };
        rec.validate(&a).unwrap();
        let mut bad = rec.clone();
        bad.u = a.fq().mul(bad.u, 2);
        assert!(bad.validate(&a).is_err());
        let mut bad = rec.clone();
        bad.d1 = p("1,1");
        assert!(bad.validate(&a).is_err());
        let mut bad = rec;
        bad.height = 3;
        assert!(bad.validate(&a).is_err());
    }
}
