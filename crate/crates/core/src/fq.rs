//! The constant field F_q.
//!
//! Elements are encoded as integers in `[0, q)`. For prime `q` this is the
//! residue itself; for `q = p^k` the integer is read in base `p` as the
//! coordinate vector `c_0 + c_1 α + … + c_{k-1} α^{k-1}` over the prime
//! field, where `α` is a root of the lexicographically smallest monic
//! irreducible of degree `k` over F_p. All arithmetic goes through
//! precomputed tables, so `q` is capped at [`MAX_Q`].

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// An element of F_q, in the integer encoding described above.
pub type FqElem = u32;

/// Largest supported field size.
pub const MAX_Q: u32 = 256;

struct Tables {
    q: u32,
    p: u32,
    k: u32,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    /// coefficients of the minimal polynomial of α over F_p, low to high, monic
    modulus: Vec<u32>,
}

/// Arithmetic context for F_q. Cheap to clone.
#[derive(Clone)]
pub struct Fq {
    t: Arc<Tables>,
}

impl core::fmt::Debug for Fq {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "F_{}", self.t.q)
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.t.q == other.t.q
    }
}
impl Eq for Fq {}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

// Dense polynomials over F_p used only while building the tables.
fn fp_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (c * mi) % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn fp_is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    // trial division by every monic of degree 1..=deg/2
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for n in 0..count {
            let mut f = vec![0u32; d + 1];
            let mut x = n;
            for c in f.iter_mut().take(d) {
                *c = (x % p as u64) as u32;
                x /= p as u64;
            }
            f[d] = 1;
            if fp_rem(m, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl Fq {
    /// Builds F_q for a prime power `q ≤ MAX_Q`.
    pub fn new(q: u32) -> Result<Self> {
        if q > MAX_Q {
            return Err(Error::UnsupportedField(q));
        }
        let (p, k) = prime_power(q).ok_or(Error::UnsupportedField(q))?;
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            let ku = k as usize;
            let mut found = None;
            for n in 0..q {
                let mut m = vec![0u32; ku + 1];
                let mut x = n;
                for c in m.iter_mut().take(ku) {
                    *c = x % p;
                    x /= p;
                }
                m[ku] = 1;
                if fp_is_irreducible(&m, p) {
                    found = Some(m);
                    break;
                }
            }
            found.expect("irreducible polynomials exist in every degree")
        };

        let digits = |mut n: u32| -> Vec<u32> {
            let mut v = vec![0u32; k as usize];
            for c in v.iter_mut() {
                *c = n % p;
                n /= p;
            }
            v
        };
        let undigits = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &c| acc * p + c) };

        let qs = q as usize;
        let mut add = vec![0u16; qs * qs];
        let mut mul = vec![0u16; qs * qs];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&s) as u16;
                let mut prod = vec![0u32; 2 * k as usize - 1];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let r = if k == 1 { prod } else { fp_rem(&prod, &modulus, p) };
                let mut r = r;
                r.resize(k as usize, 0);
                mul[(a * q + b) as usize] = undigits(&r) as u16;
            }
        }
        let mut neg = vec![0u16; qs];
        let mut inv = vec![0u16; qs];
        for a in 0..q {
            for b in 0..q {
                if add[(a * q + b) as usize] == 0 {
                    neg[a as usize] = b as u16;
                }
                if mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b as u16;
                }
            }
        }
        Ok(Fq { t: Arc::new(Tables { q, p, k, add, mul, neg, inv, modulus }) })
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.t.q
    }

    /// The characteristic.
    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.t.p
    }

    /// `k` with `q = p^k`.
    #[inline]
    pub fn degree(&self) -> u32 {
        self.t.k
    }

    /// Minimal polynomial of the basis generator over the prime field.
    pub fn modulus(&self) -> &[u32] {
        &self.t.modulus
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        self.t.add[(a * self.t.q + b) as usize] as FqElem
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        self.t.neg[a as usize] as FqElem
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        self.t.mul[(a * self.t.q + b) as usize] as FqElem
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: FqElem) -> Option<FqElem> {
        (a != 0).then(|| self.t.inv[a as usize] as FqElem)
    }

    pub fn pow(&self, mut a: FqElem, mut e: u64) -> FqElem {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Image of an integer under Z → F_p ⊂ F_q.
    #[inline]
    pub fn from_int(&self, n: u64) -> FqElem {
        (n % self.t.p as u64) as FqElem
    }

    /// Inverse of the absolute Frobenius `x ↦ x^p`.
    pub fn pth_root(&self, a: FqElem) -> FqElem {
        self.pow(a, (self.t.q / self.t.p) as u64)
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        0..self.t.q
    }

    pub fn units(&self) -> impl Iterator<Item = FqElem> {
        1..self.t.q
    }

    pub fn is_valid(&self, a: u32) -> bool {
        a < self.t.q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(q: u32) {
        let f = Fq::new(q).unwrap();
        for a in f.elements() {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            assert_eq!(f.pow(a, q as u64), a, "Frobenius is the identity on F_q");
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in f.elements() {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in f.elements() {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
        assert_eq!(f.inv(0), None);
    }

    #[test]
    fn field_axioms_small_q() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            check_axioms(q);
        }
    }

    #[test]
    fn rejects_non_prime_powers() {
        for q in [0, 1, 6, 10, 12, 257] {
            assert!(Fq::new(q).is_err(), "q = {q}");
        }
    }

    #[test]
    fn pth_root_inverts_frobenius() {
        for q in [4, 8, 9, 25] {
            let f = Fq::new(q).unwrap();
            let p = f.characteristic() as u64;
            for a in f.elements() {
                assert_eq!(f.pow(f.pth_root(a), p), a);
            }
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic_of_order_q_minus_1() {
        for q in [4, 9, 16] {
            let f = Fq::new(q).unwrap();
            let has_generator =
                f.units().any(|g| (1..q - 1).all(|e| f.pow(g, e as u64) != 1) && f.pow(g, (q - 1) as u64) == 1);
            assert!(has_generator, "q = {q}");
        }
    }
}
