//! Factorization in A = F_q[T].
//!
//! Squarefree decomposition, then distinct-degree splitting, then
//! Cantor–Zassenhaus equal-degree splitting. Inputs of degree ≤ 4 go through
//! trial division by the enumerated monic irreducibles instead.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fq::FqElem;
use crate::poly::{Poly, PolyRing};

/// `a = unit · ∏ p_i^{e_i}` with monic irreducible, pairwise distinct `p_i`
/// sorted increasingly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FqElem,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self, ring: &PolyRing) -> Poly {
        self.factors.iter().fold(Poly::constant(self.unit), |acc, (p, e)| ring.mul(&acc, &ring.pow(p, *e as u64)))
    }

    /// Exponent of the monic prime `p`, zero if it does not occur.
    pub fn valuation(&self, p: &Poly) -> u32 {
        self.factors.iter().find(|(f, _)| f == p).map_or(0, |(_, e)| *e)
    }
}

const TRIAL_DIVISION_MAX_DEG: usize = 4;

impl PolyRing {
    pub fn factor(&self, a: &Poly) -> Result<Factorization> {
        if a.is_zero() {
            return Err(Error::ZeroArgument("factor"));
        }
        let unit = a.leading();
        let monic = self.monic(a);
        let mut factors = if a.deg() <= TRIAL_DIVISION_MAX_DEG {
            self.factor_trial_division(&monic)
        } else {
            self.factor_monic_fast(&monic)
        };
        factors.sort();
        Ok(Factorization { unit, factors })
    }

    /// Trial division by every monic irreducible of degree ≤ deg/2.
    pub fn factor_trial_division(&self, monic: &Poly) -> Vec<(Poly, u32)> {
        let mut rest = monic.clone();
        let mut out = Vec::new();
        let mut deg = 1;
        while rest.deg() >= 2 * deg {
            for l in self.enumerate_irreducible(deg) {
                let mut e = 0;
                while let Some(s) = self.div_exact(&rest, &l).unwrap() {
                    rest = s;
                    e += 1;
                }
                if e > 0 {
                    out.push((l, e));
                }
            }
            deg += 1;
        }
        if rest.deg() > 0 {
            out.push((rest, 1));
        }
        out.sort();
        out
    }

    fn factor_monic_fast(&self, monic: &Poly) -> Vec<(Poly, u32)> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut out: Vec<(Poly, u32)> = Vec::new();
        for (sqf, mult) in self.squarefree_decomposition(monic) {
            for (g, d) in self.distinct_degree(&sqf) {
                for f in self.equal_degree(&g, d, &mut rng) {
                    match out.iter_mut().find(|(h, _)| *h == f) {
                        Some((_, e)) => *e += mult,
                        None => out.push((f, mult)),
                    }
                }
            }
        }
        out
    }

    /// Pairs `(g_i, i)` with squarefree, pairwise coprime monic `g_i` and
    /// `f = ∏ g_i^i`. Handles the `f' = 0` case by taking p-th roots.
    pub fn squarefree_decomposition(&self, f: &Poly) -> Vec<(Poly, u32)> {
        self.squarefree_inner(f, 1)
    }

    fn squarefree_inner(&self, f: &Poly, mult: u32) -> Vec<(Poly, u32)> {
        let mut out = Vec::new();
        if f.deg() == 0 {
            return out;
        }
        let mut dup = self.gcd(f, &self.derivative(f));
        let mut sqf = self.div_exact(f, &dup).unwrap().unwrap();
        let mut i = 0;
        while sqf.deg() > 0 {
            i += 1;
            let y = self.gcd(&sqf, &dup);
            let z = self.div_exact(&sqf, &y).unwrap().unwrap();
            if z.deg() > 0 {
                out.push((z, i * mult));
            }
            dup = self.div_exact(&dup, &y).unwrap().unwrap();
            sqf = y;
        }
        if dup.deg() > 0 {
            // what is left is a p-th power
            let p = self.fq().characteristic() as usize;
            let root: Vec<FqElem> = dup.coeffs().iter().step_by(p).map(|&c| self.fq().pth_root(c)).collect();
            out.extend(self.squarefree_inner(&Poly::from_coeffs(root), mult * p as u32));
        }
        out
    }

    /// Splits a squarefree monic `f` into `(g_d, d)` where `g_d` is the
    /// product of its irreducible factors of degree `d`.
    fn distinct_degree(&self, f: &Poly) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        let mut rest = f.clone();
        let t = Poly::t();
        let mut h = self.rem(&t, &rest).unwrap();
        let mut d = 0;
        while rest.deg() >= 2 * (d + 1) {
            d += 1;
            h = self.frobenius_mod(&h, &rest);
            let g = self.gcd(&self.sub(&h, &t), &rest);
            if g.deg() > 0 {
                rest = self.div_exact(&rest, &g).unwrap().unwrap();
                h = self.rem(&h, &rest).unwrap();
                out.push((g, d));
            }
        }
        if rest.deg() > 0 {
            let d = rest.deg();
            out.push((rest, d));
        }
        out
    }

    /// Cantor–Zassenhaus on a product of distinct irreducibles of degree `d`.
    fn equal_degree(&self, f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
        let n = f.deg();
        if n == d {
            return vec![f.clone()];
        }
        let q = self.q();
        let fq = self.fq();
        loop {
            let a = Poly::from_coeffs((0..n).map(|_| rng.gen_range(0..q)).collect());
            if a.degree().is_none_or(|k| k == 0) {
                continue;
            }
            let b = if fq.characteristic() == 2 {
                // absolute trace to F_2 of a in A/f: Σ_{j < d·k} a^{2^j}
                let steps = d * fq.degree() as usize;
                let mut cur = a.clone();
                let mut acc = a.clone();
                for _ in 1..steps {
                    cur = self.mulmod(&cur, &cur, f);
                    acc = self.add(&acc, &cur);
                }
                acc
            } else {
                // a^{(q^d − 1)/2} = (a^{1 + q + … + q^{d−1}})^{(q−1)/2}
                let mut cur = self.rem(&a, f).unwrap();
                let mut norm = cur.clone();
                for _ in 1..d {
                    cur = self.frobenius_mod(&cur, f);
                    norm = self.mulmod(&norm, &cur, f);
                }
                let half = self.powmod(&norm, &BigUint::from((q - 1) / 2), f);
                self.sub(&half, &Poly::one())
            };
            let g = self.gcd(&b, f);
            if g.deg() > 0 && g.deg() < n {
                let h = self.div_exact(f, &g).unwrap().unwrap();
                let mut out = self.equal_degree(&g, d, rng);
                out.extend(self.equal_degree(&h, d, rng));
                return out;
            }
        }
    }
}
