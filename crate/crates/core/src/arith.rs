//! Arithmetic functions on A: Möbius, Euler φ, radical, divisors, and
//! `#GL_r(A/aA)`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRing};

/// `#GL_r(F_Q) = ∏_{i<r} (Q^r − Q^i)`.
pub fn count_gl_field(r: u32, field_size: &BigUint) -> BigUint {
    let qr = field_size.pow(r);
    (0..r).map(|i| &qr - field_size.pow(i)).product()
}

impl PolyRing {
    /// `μ_A(a)`: 1 on units, `(−1)^t` on squarefree `a` with `t` monic prime
    /// factors, 0 otherwise.
    pub fn mobius(&self, a: &Poly) -> Result<i8> {
        if a.is_zero() {
            return Err(Error::ZeroArgument("mobius"));
        }
        let fac = self.factor(a)?;
        if fac.factors.iter().any(|(_, e)| *e > 1) {
            return Ok(0);
        }
        Ok(if fac.factors.len() % 2 == 0 { 1 } else { -1 })
    }

    /// `φ_A(a) = #(A/aA)^* = |a| ∏_{p | a} (1 − 1/|p|)`.
    pub fn euler_phi(&self, a: &Poly) -> Result<BigUint> {
        if a.is_zero() {
            return Err(Error::ZeroArgument("euler_phi"));
        }
        let fac = self.factor(a)?;
        Ok(fac
            .factors
            .iter()
            .map(|(p, e)| {
                let np = self.norm(p);
                np.pow(e - 1) * (&np - 1u32)
            })
            .product())
    }

    /// `(rad a, ω(a))` with the radical made monic.
    pub fn radical_omega(&self, a: &Poly) -> Result<(Poly, usize)> {
        if a.is_zero() {
            return Err(Error::ZeroArgument("radical_omega"));
        }
        let fac = self.factor(a)?;
        let rad = fac.factors.iter().fold(Poly::one(), |acc, (p, _)| self.mul(&acc, p));
        Ok((rad, fac.factors.len()))
    }

    /// `#GL_r(A/aA) = |a|^{r²} ∏_{ℓ | a} (1 − |ℓ|^{−1})⋯(1 − |ℓ|^{−r})`.
    pub fn count_gl(&self, r: u32, a: &Poly) -> Result<BigUint> {
        if r == 0 {
            return Err(Error::InvalidArgument("count_gl needs r ≥ 1"));
        }
        if a.is_zero() {
            return Err(Error::ZeroArgument("count_gl"));
        }
        let fac = self.factor(a)?;
        Ok(fac
            .factors
            .iter()
            .map(|(l, e)| {
                let nl = self.norm(l);
                // the kernel of GL_r(A/ℓ^e) → GL_r(A/ℓ) has |ℓ|^{(e−1) r²} elements
                nl.pow((e - 1) * r * r) * count_gl_field(r, &nl)
            })
            .product())
    }

    /// Monic divisors of `a`, sorted increasingly.
    pub fn monic_divisors(&self, a: &Poly) -> Result<Vec<Poly>> {
        if a.is_zero() {
            return Err(Error::ZeroArgument("divisors"));
        }
        let fac = self.factor(a)?;
        let mut out = vec![Poly::one()];
        for (p, e) in &fac.factors {
            let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
            for d in &out {
                let mut cur = d.clone();
                next.push(cur.clone());
                for _ in 0..*e {
                    cur = self.mul(&cur, p);
                    next.push(cur.clone());
                }
            }
            out = next;
        }
        out.sort();
        Ok(out)
    }

    /// Every divisor of `a` in A, unit multiples included: `(q − 1)` times
    /// as many as [`Self::monic_divisors`].
    pub fn all_divisors(&self, a: &Poly) -> Result<Vec<Poly>> {
        let monic = self.monic_divisors(a)?;
        Ok(monic.iter().flat_map(|d| self.fq().units().map(move |c| (c, d))).map(|(c, d)| self.scale(c, d)).collect())
    }

    /// Number of monic polynomials with degree in `[0, y]`, by enumeration.
    pub fn count_monic_up_to(&self, y: usize) -> BigUint {
        (0..=y).map(|d| BigUint::from(self.enumerate_monic(d).count())).sum()
    }

    /// Number of monic irreducibles of degree `n` from the necklace formula
    /// `(1/n) Σ_{e | n} μ(e) q^{n/e}`.
    pub fn irreducible_count_formula(&self, n: usize) -> BigUint {
        assert!(n >= 1);
        let q = BigUint::from(self.q());
        let (mut pos, mut neg) = (BigUint::from(0u32), BigUint::from(0u32));
        for e in (1..=n).filter(|e| n.is_multiple_of(*e)) {
            let term = q.pow((n / e) as u32);
            match int_mobius(e) {
                1 => pos += term,
                -1 => neg += term,
                _ => {}
            }
        }
        (pos - neg) / BigUint::from(n)
    }
}

/// The classical Möbius function on positive integers.
pub fn int_mobius(mut n: usize) -> i8 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}
