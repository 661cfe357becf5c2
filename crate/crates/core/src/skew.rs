//! The twisted polynomial ring F_℘{τ} with `τ·c = c^q·τ`.
//!
//! A skew polynomial `f = Σ f_i τ^i` acts on F_℘ (and on its algebraic
//! closure) as the q-linearized map `x ↦ Σ f_i x^{q^i}`; multiplication is
//! composition of those maps.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::residue::ResidueField;

#[derive(Clone, PartialEq, Eq)]
pub struct SkewPoly {
    field: ResidueField,
    coeffs: Vec<Poly>,
}

impl fmt::Debug for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders as `(c_0) + (c_1)*t + (c_2)*t^2 …` with each coefficient in the
/// canonical polynomial encoding; zero terms are skipped.
impl fmt::Display for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl SkewPoly {
    pub fn new(field: &ResidueField, coeffs: Vec<Poly>) -> Self {
        let mut coeffs: Vec<Poly> = coeffs.iter().map(|c| field.reduce(c)).collect();
        while coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        SkewPoly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &ResidueField) -> Self {
        SkewPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &ResidueField) -> Self {
        Self::constant(field, Poly::one())
    }

    pub fn constant(field: &ResidueField, c: Poly) -> Self {
        Self::new(field, vec![c])
    }

    /// `c·τ^n`.
    pub fn monomial(field: &ResidueField, c: Poly, n: usize) -> Self {
        let mut coeffs = vec![Poly::zero(); n + 1];
        coeffs[n] = c;
        Self::new(field, coeffs)
    }

    /// `τ^n − 1`, whose kernel is F_{q^n}.
    pub fn tau_pow_minus_one(field: &ResidueField, n: usize) -> Self {
        let mut coeffs = vec![Poly::zero(); n + 1];
        coeffs[n] = Poly::one();
        coeffs[0] = field.neg(&Poly::one());
        Self::new(field, coeffs)
    }

    #[inline]
    pub fn field(&self) -> &ResidueField {
        &self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Poly {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// τ-degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Poly {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn lowest_index(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.field.add(&self.coeff(i), &other.coeff(i))).collect();
        Ok(Self::new(&self.field, coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.field.sub(&self.coeff(i), &other.coeff(i))).collect();
        Ok(Self::new(&self.field, coeffs))
    }

    pub fn neg(&self) -> Self {
        SkewPoly { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| self.field.neg(c)).collect() }
    }

    /// `c·f` for a field constant `c` (left multiplication needs no twist).
    pub fn scale_left(&self, c: &Poly) -> Self {
        let coeffs = self.coeffs.iter().map(|x| self.field.mul(c, x)).collect();
        Self::new(&self.field, coeffs)
    }

    /// Twisted product: coefficient `i` of `f·g` is `Σ_j f_j · g_{i−j}^{q^j}`.
    pub fn mul(&self, g: &Self) -> Result<Self> {
        self.check(g)?;
        if self.is_zero() || g.is_zero() {
            return Ok(Self::zero(&self.field));
        }
        let field = &self.field;
        let mut out = vec![Poly::zero(); self.coeffs.len() + g.coeffs.len() - 1];
        // twisted copies of g's coefficients, advanced one Frobenius per j
        let mut twisted: Vec<Poly> = g.coeffs.clone();
        for (j, fj) in self.coeffs.iter().enumerate() {
            if j > 0 {
                for c in twisted.iter_mut() {
                    *c = field.frobenius(c);
                }
            }
            if fj.is_zero() {
                continue;
            }
            for (k, gk) in twisted.iter().enumerate() {
                if !gk.is_zero() {
                    out[j + k] = field.add(&out[j + k], &field.mul(fj, gk));
                }
            }
        }
        Ok(Self::new(field, out))
    }

    /// `f = s·g + r` with `deg_τ r < deg_τ g`.
    pub fn right_divmod(&self, g: &Self) -> Result<(Self, Self)> {
        self.check(g)?;
        let dg = g.degree().ok_or(Error::DivisionByZero)?;
        let field = &self.field;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dg {
            return Ok((Self::zero(field), self.clone()));
        }
        let mut quot = vec![Poly::zero(); rem.len() - dg];
        // lc(g)^{q^s} and twisted g for each shift s, computed incrementally downward
        let mut twists: Vec<Vec<Poly>> = Vec::with_capacity(quot.len());
        let mut cur = g.coeffs.clone();
        for s in 0..quot.len() {
            if s > 0 {
                cur = cur.iter().map(|c| field.frobenius(c)).collect();
            }
            twists.push(cur.clone());
        }
        for s in (0..quot.len()).rev() {
            let top = &rem[s + dg];
            if top.is_zero() {
                continue;
            }
            let tg = &twists[s];
            let c = field.mul(top, &field.inv(&tg[dg])?);
            for (k, gk) in tg.iter().enumerate() {
                rem[s + k] = field.sub(&rem[s + k], &field.mul(&c, gk));
            }
            quot[s] = c;
        }
        rem.truncate(dg);
        Ok((Self::new(field, quot), Self::new(field, rem)))
    }

    /// Monic right gcd by the right Euclidean algorithm.
    pub fn right_gcd(&self, g: &Self) -> Result<Self> {
        self.check(g)?;
        if self.is_zero() && g.is_zero() {
            return Err(Error::ZeroArgument("right_gcd"));
        }
        let (mut a, mut b) = (self.clone(), g.clone());
        while !b.is_zero() {
            let (_, r) = a.right_divmod(&b)?;
            a = core::mem::replace(&mut b, r);
        }
        let inv = self.field.inv(&a.leading())?;
        Ok(a.scale_left(&inv))
    }

    /// F_q-dimension of `{x ∈ F_{q^d} : f(x) = 0}`, computed as
    /// `deg_τ rgcd(f, τ^d − 1)`.
    pub fn kernel_rank_in(&self, d: usize) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroArgument("kernel_rank_in"));
        }
        if d == 0 {
            return Err(Error::InvalidArgument("extension degree must be positive"));
        }
        let g = Self::tau_pow_minus_one(&self.field, d);
        Ok(self.right_gcd(&g)?.degree().unwrap_or(0))
    }

    /// The q-linearized map `x ↦ Σ f_i x^{q^i}`.
    pub fn evaluate(&self, x: &Poly) -> Poly {
        let field = &self.field;
        let mut acc = Poly::zero();
        let mut cur = field.reduce(x);
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                cur = field.frobenius(&cur);
            }
            if !c.is_zero() {
                acc = field.add(&acc, &field.mul(c, &cur));
            }
        }
        acc
    }
}
