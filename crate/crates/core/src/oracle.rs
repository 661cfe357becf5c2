//! Exhaustive module-structure computations for `ψ(F_℘)` at tiny primes.
//!
//! Works for any rank and does not use the characteristic polynomial: it
//! enumerates all of F_℘, evaluates `ψ̄_m` pointwise, and reads the
//! elementary divisors off the sizes of the `ℓ^k`-torsion subgroups.

use alloc::vec;
use alloc::vec::Vec;

use crate::drinfeld::ReducedModule;
use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRing};

/// Refuse fields with more elements than this.
pub const MAX_FIELD_SIZE: u64 = 1 << 12;

fn check_size(m: &ReducedModule) -> Result<()> {
    let q = m.ring().q() as u64;
    match q.checked_pow(m.degree() as u32) {
        Some(n) if n <= MAX_FIELD_SIZE => Ok(()),
        _ => Err(Error::TooLarge("field too large for the exhaustive oracle")),
    }
}

fn count_kernel(m: &ReducedModule, a: &Poly) -> usize {
    let psi = m.psi_of(a);
    m.field().elements().filter(|x| psi.evaluate(x).is_zero()).count()
}

/// Monic generator of the annihilator of `x`: the first monic `a`, by
/// degree then enumeration order, with `ψ̄_a(x) = 0`.
pub fn annihilator(m: &ReducedModule, x: &Poly) -> Result<Poly> {
    check_size(m)?;
    let ring = m.ring();
    for deg in 0..=m.degree() {
        for a in ring.enumerate_monic(deg) {
            if m.psi_of(&a).evaluate(x).is_zero() {
                return Ok(a);
            }
        }
    }
    Err(Error::Consistency { p: m.prime().clone(), what: "element with annihilator of degree > deg p" })
}

/// `lcm` of all element annihilators, i.e. the exponent of `ψ(F_℘)`.
pub fn exponent_from_annihilators(m: &ReducedModule) -> Result<Poly> {
    check_size(m)?;
    let ring = m.ring();
    // precompute ψ̄_a for every monic a of degree ≤ deg p
    let candidates: Vec<(Poly, crate::skew::SkewPoly)> = (0..=m.degree())
        .flat_map(|deg| ring.enumerate_monic(deg).collect::<Vec<_>>())
        .map(|a| {
            let s = m.psi_of(&a);
            (a, s)
        })
        .collect();
    let mut exp = Poly::one();
    for x in m.field().elements() {
        let ann = candidates
            .iter()
            .find(|(_, s)| s.evaluate(&x).is_zero())
            .map(|(a, _)| a)
            .ok_or(Error::Consistency { p: m.prime().clone(), what: "annihilator not found" })?;
        exp = ring.lcm(&exp, ann);
    }
    Ok(exp)
}

/// Elementary divisors `d_1 | … | d_r` of `ψ(F_℘)`, padded with ones to
/// length `r`.
pub fn structure(m: &ReducedModule) -> Result<Vec<Poly>> {
    check_size(m)?;
    let ring = m.ring();
    let r = m.rank();
    let p = m.prime().clone();
    let exponent = exponent_from_annihilators(m)?;
    let mut divisors = vec![Poly::one(); r];
    for (l, v) in ring.factor(&exponent)?.factors {
        let norm_l = (ring.q() as usize).pow(l.deg() as u32);
        // n[k] = log_{|ℓ|} #ψ(F_℘)[ℓ^k]
        let mut n = vec![0u32];
        for k in 1..=u64::from(v) {
            let size = count_kernel(m, &ring.pow(&l, k));
            n.push(
                exact_log(size, norm_l)
                    .ok_or(Error::Consistency { p: p.clone(), what: "torsion size is not a power of |ℓ|" })?,
            );
        }
        // c[k] = number of cyclic ℓ-factors with exponent ≥ k
        let c: Vec<u32> = (1..=v as usize).map(|k| n[k] - n[k - 1]).collect();
        if c.iter().any(|&ck| ck as usize > r) || c.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::Consistency { p: p.clone(), what: "torsion counts inconsistent with rank" });
        }
        for (slot, div) in divisors.iter_mut().enumerate() {
            // slot r−1 is the largest factor
            let needed = (r - slot) as u32;
            let e = c.iter().filter(|&&ck| ck >= needed).count() as u64;
            if e > 0 {
                *div = ring.mul(div, &ring.pow(&l, e));
            }
        }
    }
    let size: usize = divisors.iter().map(|d| (ring.q() as usize).pow(d.deg() as u32)).product();
    let field_size = (ring.q() as usize).pow(m.degree() as u32);
    if size != field_size {
        return Err(Error::Consistency { p, what: "elementary divisors do not account for the whole module" });
    }
    Ok(divisors)
}

/// Product of the elementary divisors.
pub fn characteristic(ring: &PolyRing, divisors: &[Poly]) -> Poly {
    divisors.iter().fold(Poly::one(), |acc, d| ring.mul(&acc, d))
}

fn exact_log(mut n: usize, base: usize) -> Option<u32> {
    let mut k = 0;
    while n > 1 {
        if !n.is_multiple_of(base) {
            return None;
        }
        n /= base;
        k += 1;
    }
    (n == 1).then_some(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drinfeld::DrinfeldModule;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn carlitz_module_is_cyclic() {
        // ψ(F_℘) for Carlitz is A/(p − 1)
        let a = PolyRing::with_q(3).unwrap();
        let c = DrinfeldModule::carlitz(&a);
        for l in (1..=3).flat_map(|d| a.enumerate_irreducible(d)) {
            let m = c.reduce(&l).unwrap();
            let s = structure(&m).unwrap();
            assert_eq!(s, vec![a.sub(&l, &Poly::one())]);
        }
    }

    #[test]
    fn rank_three_structure_is_a_chain() {
        let a = PolyRing::with_q(2).unwrap();
        let psi = DrinfeldModule::new(&a, vec![p("1"), Poly::zero(), p("1,1")]).unwrap();
        for l in (1..=3).flat_map(|d| a.enumerate_irreducible(d)) {
            let Ok(m) = psi.reduce(&l) else { continue };
            let s = structure(&m).unwrap();
            assert_eq!(s.len(), 3);
            assert!(s.windows(2).all(|w| a.divides(&w[0], &w[1])));
            assert_eq!(characteristic(&a, &s).deg(), l.deg());
        }
    }

    #[test]
    fn annihilator_divides_exponent() {
        let a = PolyRing::with_q(3).unwrap();
        let psi = DrinfeldModule::zywina(&a);
        let m = psi.reduce(&a.enumerate_irreducible(2)[0]).unwrap();
        let e = exponent_from_annihilators(&m).unwrap();
        for x in m.field().elements() {
            assert!(a.divides(&annihilator(&m, &x).unwrap(), &e));
        }
        assert!(annihilator(&m, &Poly::zero()).unwrap().is_one());
    }

    #[test]
    fn too_large_fields_are_refused() {
        let a = PolyRing::with_q(5).unwrap();
        let psi = DrinfeldModule::zywina(&a);
        let m = psi.reduce(&a.enumerate_irreducible(6)[0]).unwrap();
        assert!(matches!(structure(&m), Err(Error::TooLarge(_))));
    }

    #[test]
    fn exact_logs() {
        assert_eq!(exact_log(1, 3), Some(0));
        assert_eq!(exact_log(27, 3), Some(3));
        assert_eq!(exact_log(12, 3), None);
    }
}
