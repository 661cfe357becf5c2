//! Residue fields F_℘ = A/pA for monic irreducible `p`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::fq::FqElem;
use crate::poly::{Poly, PolyRing};

struct Inner {
    ring: PolyRing,
    modulus: Poly,
    /// `(T^i)^q mod p` for `i < deg p`; x ↦ x^q is F_q-linear, so these
    /// columns determine it.
    frob_cols: Vec<Poly>,
}

/// The finite field A/pA. Elements are [`Poly`] values of degree `< deg p`.
/// Cloning shares the underlying tables.
#[derive(Clone)]
pub struct ResidueField {
    inner: Arc<Inner>,
}

impl core::fmt::Debug for ResidueField {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "A/({})", self.inner.modulus)
    }
}

impl PartialEq for ResidueField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.modulus == other.inner.modulus && self.inner.ring == other.inner.ring)
    }
}
impl Eq for ResidueField {}

impl ResidueField {
    pub fn new(ring: &PolyRing, modulus: Poly) -> Result<Self> {
        if !modulus.is_monic() || !ring.is_irreducible(&modulus) {
            return Err(Error::NotIrreducible(modulus));
        }
        let d = modulus.deg();
        let tq = ring.frobenius_mod(&Poly::t(), &modulus);
        let mut frob_cols = Vec::with_capacity(d);
        let mut cur = Poly::one();
        for _ in 0..d {
            frob_cols.push(cur.clone());
            cur = ring.mulmod(&cur, &tq, &modulus);
        }
        Ok(ResidueField { inner: Arc::new(Inner { ring: ring.clone(), modulus, frob_cols }) })
    }

    #[inline]
    pub fn ring(&self) -> &PolyRing {
        &self.inner.ring
    }

    #[inline]
    pub fn modulus(&self) -> &Poly {
        &self.inner.modulus
    }

    /// `[F_℘ : F_q] = deg p`.
    #[inline]
    pub fn degree(&self) -> usize {
        self.inner.modulus.deg()
    }

    pub fn size(&self) -> BigUint {
        self.ring().norm(self.modulus())
    }

    pub fn reduce(&self, a: &Poly) -> Poly {
        self.ring().rem(a, self.modulus()).expect("nonzero modulus")
    }

    pub fn from_fq(&self, c: FqElem) -> Poly {
        Poly::constant(c)
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        self.ring().add(a, b)
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.ring().sub(a, b)
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        self.ring().neg(a)
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.ring().mulmod(a, b, self.modulus())
    }

    /// Inverse via the extended Euclidean algorithm.
    pub fn inv(&self, a: &Poly) -> Result<Poly> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ring = self.ring();
        let (mut r0, mut r1) = (self.modulus().clone(), a.clone());
        let (mut s0, mut s1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (quot, rem) = ring.divmod(&r0, &r1)?;
            let s2 = ring.sub(&s0, &ring.mul(&quot, &s1));
            r0 = core::mem::replace(&mut r1, rem);
            s0 = core::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant since the modulus is irreducible
        let c = ring.fq().inv(r0.leading()).ok_or(Error::DivisionByZero)?;
        Ok(self.reduce(&ring.scale(c, &s0)))
    }

    pub fn pow(&self, a: &Poly, e: &BigUint) -> Poly {
        self.ring().powmod(a, e, self.modulus())
    }

    /// `x ↦ x^q`.
    pub fn frobenius(&self, a: &Poly) -> Poly {
        let ring = self.ring();
        let mut out = Poly::zero();
        for (i, &c) in a.coeffs().iter().enumerate() {
            if c != 0 {
                out = ring.add(&out, &ring.scale(c, &self.inner.frob_cols[i]));
            }
        }
        out
    }

    /// `x ↦ x^{q^j}`.
    pub fn frobenius_pow(&self, a: &Poly, j: usize) -> Poly {
        let mut cur = a.clone();
        for _ in 0..j % self.degree() {
            cur = self.frobenius(&cur);
        }
        cur
    }

    /// Every element of the field, zero first.
    pub fn elements(&self) -> impl Iterator<Item = Poly> + '_ {
        let d = self.degree();
        let q = self.ring().q() as u64;
        let count = q.checked_pow(d as u32).expect("field too large to enumerate");
        (0..count).map(move |mut n| {
            let mut coeffs = alloc::vec![0u32; d];
            for c in coeffs.iter_mut() {
                *c = (n % q) as u32;
                n /= q;
            }
            Poly::from_coeffs(coeffs)
        })
    }

    /// Element from raw coefficients, reduced.
    pub fn element(&self, coeffs: Vec<FqElem>) -> Poly {
        self.reduce(&Poly::from_coeffs(coeffs))
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

    #[test]
    fn size_and_rejection() {
        let a = PolyRing::with_q(3).unwrap();
        let f = ResidueField::new(&a, p("1,0,1")).unwrap();
        assert_eq!(f.size(), BigUint::from(9u32));
        assert_eq!(f.elements().count(), 9);
        assert!(matches!(ResidueField::new(&a, p("2,0,1")), Err(Error::NotIrreducible(_))));
        assert!(ResidueField::new(&a, p("2,0,2")).is_err(), "not monic");
    }

    #[test]
    fn frobenius_fixed_field_is_fq() {
        for q in [2, 3, 4] {
            let a = PolyRing::with_q(q).unwrap();
            for d in 1..=3 {
                for m in a.enumerate_irreducible(d).into_iter().take(2) {
                    let f = ResidueField::new(&a, m).unwrap();
                    let fixed: Vec<Poly> = f.elements().filter(|x| f.frobenius(x) == *x).collect();
                    assert_eq!(fixed.len(), q as usize);
                    assert!(fixed.iter().all(|x| x.degree().is_none_or(|k| k == 0)));
                }
            }
        }
    }

    #[test]
    fn frobenius_is_qth_power_and_order_divides_field() {
        let a = PolyRing::with_q(3).unwrap();
        let m = a.enumerate_irreducible(3)[1].clone();
        let f = ResidueField::new(&a, m).unwrap();
        let size = f.size();
        for x in f.elements() {
            assert_eq!(f.frobenius(&x), f.pow(&x, &BigUint::from(3u32)));
            assert_eq!(f.pow(&x, &size), x);
            assert_eq!(f.frobenius_pow(&x, 3), x);
        }
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative() {
        let a = PolyRing::with_q(4).unwrap();
        let m = a.enumerate_irreducible(2)[0].clone();
        let f = ResidueField::new(&a, m).unwrap();
        let els: Vec<Poly> = f.elements().collect();
        for x in &els {
            for y in &els {
                assert_eq!(f.frobenius(&f.add(x, y)), f.add(&f.frobenius(x), &f.frobenius(y)));
                assert_eq!(f.frobenius(&f.mul(x, y)), f.mul(&f.frobenius(x), &f.frobenius(y)));
            }
        }
    }

    #[test]
    fn random_inverses() {
        let a = PolyRing::with_q(5).unwrap();
        let m = a.enumerate_irreducible(4)[3].clone();
        let f = ResidueField::new(&a, m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let x = f.element((0..4).map(|_| rng.gen_range(0..5)).collect());
            if x.is_zero() {
                continue;
            }
            assert!(f.mul(&x, &f.inv(&x).unwrap()).is_one());
        }
        assert_eq!(f.inv(&Poly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn multiplicative_group_order() {
        let a = PolyRing::with_q(2).unwrap();
        let m = a.enumerate_irreducible(4)[0].clone();
        let f = ResidueField::new(&a, m).unwrap();
        let order = f.size() - 1u32;
        for x in f.elements().skip(1) {
            assert!(f.pow(&x, &order).is_one());
        }
    }
}
