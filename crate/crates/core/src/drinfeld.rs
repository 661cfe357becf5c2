//! Drinfeld A-modules over k = F_q(T) with coefficients in A, and their
//! reductions modulo primes.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRing};
use crate::residue::ResidueField;
use crate::skew::SkewPoly;

/// A skew polynomial with coefficients in A itself, twisted by `c ↦ c^q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AskewPoly {
    pub coeffs: Vec<Poly>,
}

impl AskewPoly {
    fn new(mut coeffs: Vec<Poly>) -> Self {
        while coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        AskewPoly { coeffs }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn mul(&self, ring: &PolyRing, g: &Self) -> Self {
        if self.coeffs.is_empty() || g.coeffs.is_empty() {
            return AskewPoly::new(Vec::new());
        }
        let mut out = vec![Poly::zero(); self.coeffs.len() + g.coeffs.len() - 1];
        let mut twisted = g.coeffs.clone();
        for (j, fj) in self.coeffs.iter().enumerate() {
            if j > 0 {
                twisted = twisted.iter().map(|c| ring.frobenius(c)).collect();
            }
            for (k, gk) in twisted.iter().enumerate() {
                out[j + k] = ring.add(&out[j + k], &ring.mul(fj, gk));
            }
        }
        AskewPoly::new(out)
    }

    /// Coefficientwise reduction into F_℘{τ}.
    pub fn reduce(&self, field: &ResidueField) -> SkewPoly {
        SkewPoly::new(field, self.coeffs.clone())
    }
}

/// `ψ_T = T + g_1 τ + … + g_r τ^r` with `g_i ∈ A` and `g_r ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrinfeldModule {
    ring: PolyRing,
    coeffs: Vec<Poly>,
}

impl DrinfeldModule {
    /// `coeffs` are `g_1, …, g_r`.
    pub fn new(ring: &PolyRing, coeffs: Vec<Poly>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidModule("rank must be at least 1"));
        }
        if coeffs.last().unwrap().is_zero() {
            return Err(Error::InvalidModule("leading coefficient g_r must be nonzero"));
        }
        Ok(DrinfeldModule { ring: ring.clone(), coeffs })
    }

    /// The Carlitz module `ψ_T = T + τ`.
    pub fn carlitz(ring: &PolyRing) -> Self {
        DrinfeldModule { ring: ring.clone(), coeffs: vec![Poly::one()] }
    }

    /// `ψ_T = T + τ − T^{q−1} τ²`, the rank-2 module whose d_1-densities are
    /// known in closed form.
    pub fn zywina(ring: &PolyRing) -> Self {
        let q = ring.q() as usize;
        let g2 = ring.neg(&Poly::monomial(1, q - 1));
        DrinfeldModule { ring: ring.clone(), coeffs: vec![Poly::one(), g2] }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    /// `g_1, …, g_r`.
    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn psi_t(&self) -> AskewPoly {
        let mut c = vec![Poly::t()];
        c.extend(self.coeffs.iter().cloned());
        AskewPoly::new(c)
    }

    /// `ψ_a` by Horner's scheme in `ψ_T`. Coefficient growth is roughly
    /// `q^{r deg a}`, so this is meant for small `a`.
    pub fn psi_of(&self, a: &Poly) -> AskewPoly {
        let psi_t = self.psi_t();
        let mut acc = AskewPoly::new(Vec::new());
        for &c in a.coeffs().iter().rev() {
            acc = acc.mul(&self.ring, &psi_t);
            if c != 0 {
                let mut coeffs = acc.coeffs.clone();
                if coeffs.is_empty() {
                    coeffs.push(Poly::zero());
                }
                coeffs[0] = self.ring.add(&coeffs[0], &Poly::constant(c));
                acc = AskewPoly::new(coeffs);
            }
        }
        acc
    }

    /// Good reduction here means `p ∤ g_r`; otherwise [`Error::BadReduction`].
    pub fn reduce(&self, p: &Poly) -> Result<ReducedModule> {
        let field = ResidueField::new(&self.ring, p.clone())?;
        if field.reduce(self.coeffs.last().unwrap()).is_zero() {
            return Err(Error::BadReduction(p.clone()));
        }
        let psi_t = self.psi_t().reduce(&field);
        Ok(ReducedModule { base: self.clone(), field, psi_t, cache: RefCell::new(BTreeMap::new()) })
    }

    pub fn is_good_prime(&self, p: &Poly) -> bool {
        !self.ring.divides(p, self.coeffs.last().unwrap())
    }
}

/// `ψ ⊗ F_℘` for a prime of good reduction.
///
/// Holds a memo of `ψ̄_ℓ` for the small monic primes used by the divisor
/// search. The memo uses a `RefCell`, so a reduced module belongs to one
/// worker at a time.
#[derive(Clone, Debug)]
pub struct ReducedModule {
    base: DrinfeldModule,
    field: ResidueField,
    psi_t: SkewPoly,
    cache: RefCell<BTreeMap<Poly, SkewPoly>>,
}

impl ReducedModule {
    pub fn base(&self) -> &DrinfeldModule {
        &self.base
    }

    pub fn field(&self) -> &ResidueField {
        &self.field
    }

    pub fn prime(&self) -> &Poly {
        self.field.modulus()
    }

    pub fn ring(&self) -> &PolyRing {
        self.base.ring()
    }

    pub fn rank(&self) -> usize {
        self.base.rank()
    }

    /// `deg p`, the degree of F_℘ over F_q.
    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn psi_t(&self) -> &SkewPoly {
        &self.psi_t
    }

    /// `ψ̄_a`, computed over F_℘ directly.
    pub fn psi_of(&self, a: &Poly) -> SkewPoly {
        let mut acc = SkewPoly::zero(&self.field);
        for &c in a.coeffs().iter().rev() {
            acc = acc.mul(&self.psi_t).expect("same field");
            if c != 0 {
                acc = acc.add(&SkewPoly::constant(&self.field, Poly::constant(c))).expect("same field");
            }
        }
        acc
    }

    /// `ψ̄_ℓ`, memoized.
    pub fn psi_memo(&self, l: &Poly) -> SkewPoly {
        if let Some(s) = self.cache.borrow().get(l) {
            return s.clone();
        }
        let s = self.psi_of(l);
        self.cache.borrow_mut().insert(l.clone(), s.clone());
        s
    }

    /// `ψ̄_{ℓ^e} = (ψ̄_ℓ)^e`.
    pub fn psi_prime_power(&self, l: &Poly, e: u32) -> SkewPoly {
        let base = self.psi_memo(l);
        let mut acc = SkewPoly::one(&self.field);
        for _ in 0..e {
            acc = acc.mul(&base).expect("same field");
        }
        acc
    }

    /// F_q-dimension of `ψ̄[m] ∩ F_℘`.
    pub fn kernel_rank(&self, m: &Poly) -> Result<usize> {
        self.psi_of(m).kernel_rank_in(self.degree())
    }

    /// The height `h`: `ψ̄_p` has lowest nonzero τ-index `h · deg p`.
    pub fn height(&self) -> Result<usize> {
        let psi_p = self.psi_of(self.prime());
        let p = self.prime().clone();
        let low = psi_p.lowest_index().ok_or(Error::Consistency { p: p.clone(), what: "ψ_p reduces to zero" })?;
        let d = self.degree();
        if low % d != 0 {
            return Err(Error::Consistency { p, what: "lowest index of ψ_p is not a multiple of deg p" });
        }
        let h = low / d;
        if h == 0 || h > self.rank() {
            return Err(Error::Consistency { p, what: "height outside [1, r]" });
        }
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn random_poly(rng: &mut ChaCha8Rng, q: u32, max_deg: usize) -> Poly {
        let deg = rng.gen_range(0..=max_deg);
        let mut c: Vec<u32> = (0..=deg).map(|_| rng.gen_range(0..q)).collect();
        c[deg] = rng.gen_range(1..q);
        Poly::from_coeffs(c)
    }

    #[test]
    fn psi_of_one_and_rank_law() {
        let a = PolyRing::with_q(3).unwrap();
        let psi = DrinfeldModule::zywina(&a);
        assert_eq!(psi.psi_of(&Poly::one()).coeffs, vec![Poly::one()]);
        let psi_t2 = psi.psi_of(&p("0,0,1"));
        assert_eq!(psi_t2.degree(), Some(4));
        assert_eq!(psi_t2.coeffs[0], p("0,0,1"));
        assert_eq!(psi.coeffs()[1], p("0,0,2"));
    }

    #[test]
    fn psi_is_a_ring_homomorphism() {
        let a = PolyRing::with_q(3).unwrap();
        let psi = DrinfeldModule::zywina(&a);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..6 {
            let x = random_poly(&mut rng, 3, 3);
            let y = random_poly(&mut rng, 3, 3);
            let lhs = psi.psi_of(&a.mul(&x, &y));
            let rhs = psi.psi_of(&x).mul(&a, &psi.psi_of(&y));
            assert_eq!(lhs, rhs);
            assert_eq!(lhs.coeffs[0], a.mul(&x, &y));
            assert_eq!(lhs.degree(), Some(2 * (x.deg() + y.deg())));
        }
    }

    #[test]
    fn bad_and_good_primes() {
        let a = PolyRing::with_q(3).unwrap();
        let psi = DrinfeldModule::zywina(&a);
        assert_eq!(psi.reduce(&p("0,1")).unwrap_err(), Error::BadReduction(p("0,1")));
        let m = psi.reduce(&p("1,1")).unwrap();
        assert_eq!(m.height().unwrap(), 1);
        assert!(matches!(psi.reduce(&p("2,0,1")), Err(Error::NotIrreducible(_))));

        let unit_lead = DrinfeldModule::new(&a, vec![p("0,1"), p("2")]).unwrap();
        for d in 1..=3 {
            for l in a.enumerate_irreducible(d) {
                assert!(unit_lead.reduce(&l).is_ok());
            }
        }
        assert!(DrinfeldModule::new(&a, vec![]).is_err());
        assert!(DrinfeldModule::new(&a, vec![p("1"), Poly::zero()]).is_err());
    }

    #[test]
    fn reduced_psi_matches_reduction_of_psi() {
        let a = PolyRing::with_q(3).unwrap();
        let psi = DrinfeldModule::zywina(&a);
        let m = psi.reduce(&a.enumerate_irreducible(3)[2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..8 {
            let x = random_poly(&mut rng, 3, 3);
            let direct = m.psi_of(&x);
            assert_eq!(direct, psi.psi_of(&x).reduce(m.field()));
            assert_eq!(direct.coeff(0), m.field().reduce(&x));
            assert_eq!(direct.degree(), Some(2 * x.deg()));
        }
        assert_eq!(m.psi_of(&Poly::t()), *m.psi_t());
    }

    #[test]
    fn reduced_image_commutes() {
        let a = PolyRing::with_q(2).unwrap();
        let psi = DrinfeldModule::new(&a, vec![p("1,1"), p("1,0,1")]).unwrap();
        let m = psi.reduce(&p("1,1,0,1")).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let x = m.psi_of(&random_poly(&mut rng, 2, 4));
            let y = m.psi_of(&random_poly(&mut rng, 2, 4));
            assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        }
    }

    #[test]
    fn heights() {
        let a = PolyRing::with_q(3).unwrap();
        let carlitz = DrinfeldModule::carlitz(&a);
        for d in 1..=3 {
            for l in a.enumerate_irreducible(d) {
                let m = carlitz.reduce(&l).unwrap();
                assert_eq!(m.height().unwrap(), 1);
            }
        }
        let psi = DrinfeldModule::zywina(&a);
        let mut ones = 0;
        for l in (1..=3).flat_map(|d| a.enumerate_irreducible(d)) {
            if let Ok(m) = psi.reduce(&l) {
                let h = m.height().unwrap();
                assert!((1..=2).contains(&h));
                ones += usize::from(h == 1);
            }
        }
        assert!(ones >= 10, "generic primes are ordinary");
    }

    #[test]
    fn torsion_bounds() {
        let a = PolyRing::with_q(3).unwrap();
        let psi = DrinfeldModule::zywina(&a);
        for l in (1..=3).flat_map(|d| a.enumerate_irreducible(d)) {
            let Ok(m) = psi.reduce(&l) else { continue };
            let d = m.degree();
            for x in (1..=2).flat_map(|k| a.enumerate_monic(k).collect::<Vec<_>>()) {
                if a.gcd(&x, &l).is_one() {
                    assert!(m.kernel_rank(&x).unwrap() <= 2 * x.deg());
                }
            }
            // ψ̄[p] over the algebraic closure has dimension (r − h)·deg p
            let h = m.height().unwrap();
            let rank_p = m.kernel_rank(&l).unwrap();
            assert!(rank_p <= (2 - h) * d);
            let brute = m.field().elements().filter(|x| m.psi_of(&l).evaluate(x).is_zero()).count();
            assert_eq!(brute, 3usize.pow(rank_p as u32));
        }
    }

    #[test]
    fn memo_agrees_with_direct() {
        let a = PolyRing::with_q(2).unwrap();
        let psi = DrinfeldModule::zywina(&a);
        let m = psi.reduce(&p("1,0,1,1")).unwrap();
        let l = p("1,1");
        assert_eq!(m.psi_memo(&l), m.psi_of(&l));
        assert_eq!(m.psi_prime_power(&l, 3), m.psi_of(&a.pow(&l, 3)));
    }
}
