//! Dense univariate polynomials over F_q, i.e. elements of A = F_q[T].

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::fq::{Fq, FqElem};

/// A polynomial in T with coefficients in increasing degree order.
///
/// Trailing zero coefficients are always trimmed, so the zero polynomial has
/// an empty coefficient vector and `degree()` returns `None` for it.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<FqElem>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    pub fn constant(c: FqElem) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The indeterminate `T`.
    pub fn t() -> Self {
        Poly { coeffs: vec![0, 1] }
    }

    /// `c·T^n`.
    pub fn monomial(c: FqElem, n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<FqElem>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    #[inline]
    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FqElem> {
        self.coeffs
    }

    /// Coefficient of `T^i`, zero past the degree.
    #[inline]
    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// `None` plays the role of deg 0 = −∞.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree of a polynomial known to be nonzero.
    #[inline]
    pub fn deg(&self) -> usize {
        self.degree().expect("degree of the zero polynomial")
    }

    /// The sign `sgn(a)`: the leading coefficient, zero for `a = 0`.
    #[inline]
    pub fn leading(&self) -> FqElem {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    /// Nonzero constant, i.e. a unit of A.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }
}

impl Ord for Poly {
    /// Degree first, then coefficients from the top down. For monic
    /// polynomials of one degree this is the enumeration order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical text encoding: coefficients from the constant term upward,
/// comma separated. `T² + 2T + 1` is `1,2,1`; zero is `0`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{self}]")
    }
}

impl FromStr for Poly {
    type Err = Error;

    /// Parses the canonical encoding without checking coefficients against
    /// any particular `q`; see [`PolyRing::parse`] for the checked variant.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".to_string()));
        }
        let coeffs = s
            .split(',')
            .map(|c| {
                c.trim().parse::<u32>().map_err(|_| Error::Parse(alloc::format!("bad coefficient {c:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_coeffs(coeffs))
    }
}

/// Arithmetic in A = F_q[T].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    fq: Fq,
}

impl PolyRing {
    pub fn new(fq: Fq) -> Self {
        PolyRing { fq }
    }

    pub fn with_q(q: u32) -> Result<Self> {
        Ok(Self::new(Fq::new(q)?))
    }

    #[inline]
    pub fn fq(&self) -> &Fq {
        &self.fq
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.fq.q()
    }

    /// Parses the canonical encoding and rejects coefficients outside `[0, q)`.
    pub fn parse(&self, s: &str) -> Result<Poly> {
        let p: Poly = s.parse()?;
        if let Some(c) = p.coeffs.iter().find(|&&c| !self.fq.is_valid(c)) {
            return Err(Error::Parse(alloc::format!("coefficient {c} out of range for q = {}", self.q())));
        }
        Ok(p)
    }

    pub fn format(&self, a: &Poly) -> String {
        a.to_string()
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.coeffs.len().max(b.coeffs.len());
        let coeffs = (0..n).map(|i| self.fq.add(a.coeff(i), b.coeff(i))).collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.coeffs.len().max(b.coeffs.len());
        let coeffs = (0..n).map(|i| self.fq.sub(a.coeff(i), b.coeff(i))).collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        Poly { coeffs: a.coeffs.iter().map(|&c| self.fq.neg(c)).collect() }
    }

    /// `c·a` for a constant `c`.
    pub fn scale(&self, c: FqElem, a: &Poly) -> Poly {
        if c == 0 {
            return Poly::zero();
        }
        Poly { coeffs: a.coeffs.iter().map(|&x| self.fq.mul(c, x)).collect() }
    }

    /// Product in A. Every multiplication in the crate funnels through
    /// here; it is plain schoolbook.
    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let f = &self.fq;
        let mut out = vec![0; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn pow(&self, a: &Poly, mut e: u64) -> Poly {
        let mut base = a.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Euclidean division: `a = s·b + r` with `deg r < deg b`.
    pub fn divmod(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let f = &self.fq;
        let inv_lead = f.inv(b.leading()).expect("nonzero leading coefficient");
        let mut r = a.coeffs.clone();
        if r.len() <= db {
            return Ok((Poly::zero(), a.clone()));
        }
        let mut s = vec![0; r.len() - db];
        for shift in (0..r.len() - db).rev() {
            let c = f.mul(r[shift + db], inv_lead);
            s[shift] = c;
            if c != 0 {
                for (i, &bi) in b.coeffs.iter().enumerate() {
                    r[shift + i] = f.sub(r[shift + i], f.mul(c, bi));
                }
            }
        }
        r.truncate(db);
        Ok((Poly::from_coeffs(s), Poly::from_coeffs(r)))
    }

    pub fn rem(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        Ok(self.divmod(a, b)?.1)
    }

    /// Quotient of an exact division; `None` if `b ∤ a`.
    pub fn div_exact(&self, a: &Poly, b: &Poly) -> Result<Option<Poly>> {
        let (s, r) = self.divmod(a, b)?;
        Ok(r.is_zero().then_some(s))
    }

    pub fn divides(&self, b: &Poly, a: &Poly) -> bool {
        match self.rem(a, b) {
            Ok(r) => r.is_zero(),
            Err(_) => a.is_zero(),
        }
    }

    /// Monic associate; zero stays zero.
    pub fn monic(&self, a: &Poly) -> Poly {
        match self.fq.inv(a.leading()) {
            Some(inv) => self.scale(inv, a),
            None => Poly::zero(),
        }
    }

    /// Monic generator of the ideal `(a, b)`; zero iff both are zero.
    pub fn gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.rem(&x, &y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// Monic generator of `aA ∩ bA`.
    pub fn lcm(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(a, b);
        let ab = self.mul(a, b);
        self.monic(&self.div_exact(&ab, &g).unwrap().unwrap())
    }

    pub fn mulmod(&self, a: &Poly, b: &Poly, m: &Poly) -> Poly {
        self.rem(&self.mul(a, b), m).expect("nonzero modulus")
    }

    pub fn powmod(&self, a: &Poly, e: &BigUint, m: &Poly) -> Poly {
        let mut acc = self.rem(&Poly::one(), m).expect("nonzero modulus");
        let base = self.rem(a, m).expect("nonzero modulus");
        for i in (0..e.bits()).rev() {
            acc = self.mulmod(&acc, &acc, m);
            if e.bit(i) {
                acc = self.mulmod(&acc, &base, m);
            }
        }
        acc
    }

    /// `a^q mod m`.
    pub fn frobenius_mod(&self, a: &Poly, m: &Poly) -> Poly {
        self.powmod(a, &BigUint::from(self.q()), m)
    }

    /// Formal derivative.
    pub fn derivative(&self, a: &Poly) -> Poly {
        let coeffs =
            a.coeffs.iter().enumerate().skip(1).map(|(i, &c)| self.fq.mul(self.fq.from_int(i as u64), c)).collect();
        Poly::from_coeffs(coeffs)
    }

    /// `a(T^q) = a^q`, the twist applied to A-coefficients of skew polynomials.
    pub fn frobenius(&self, a: &Poly) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        let q = self.q() as usize;
        let mut out = vec![0; (a.coeffs.len() - 1) * q + 1];
        for (i, &c) in a.coeffs.iter().enumerate() {
            out[i * q] = c;
        }
        Poly::from_coeffs(out)
    }

    /// `|a|_∞ = q^{deg a}`, with `|0|_∞ = 0`.
    pub fn norm(&self, a: &Poly) -> BigUint {
        match a.degree() {
            None => BigUint::from(0u32),
            Some(d) => BigUint::from(self.q()).pow(d as u32),
        }
    }

    /// All monic polynomials of degree `deg`, in increasing order.
    pub fn enumerate_monic(&self, deg: usize) -> impl Iterator<Item = Poly> + '_ {
        let q = self.q() as u64;
        let count = q.checked_pow(deg as u32).expect("enumeration size overflows u64");
        (0..count).map(move |n| self.monic_from_index(deg, n))
    }

    /// Every polynomial (monic or not, including units) of degree exactly `deg`.
    pub fn enumerate_degree(&self, deg: usize) -> impl Iterator<Item = Poly> + '_ {
        self.fq.units().flat_map(move |c| self.enumerate_monic(deg).map(move |m| self.scale(c, &m)))
    }

    fn monic_from_index(&self, deg: usize, mut n: u64) -> Poly {
        let q = self.q() as u64;
        let mut coeffs = vec![0; deg + 1];
        for c in coeffs.iter_mut().take(deg) {
            *c = (n % q) as u32;
            n /= q;
        }
        coeffs[deg] = 1;
        Poly { coeffs }
    }

    /// Rabin's test: `f | T^{q^n} − T` and `gcd(T^{q^{n/r}} − T, f) = 1` for primes `r | n`.
    pub fn is_irreducible(&self, f: &Poly) -> bool {
        let n = match f.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let mut frob_powers = Vec::with_capacity(n + 1);
        let t = Poly::t();
        let mut cur = self.rem(&t, f).unwrap();
        frob_powers.push(cur.clone());
        for _ in 0..n {
            cur = self.frobenius_mod(&cur, f);
            frob_powers.push(cur.clone());
        }
        if !self.sub(&frob_powers[n], &frob_powers[0]).is_zero() {
            return false;
        }
        prime_divisors(n).into_iter().all(|r| {
            let g = self.gcd(&self.sub(&frob_powers[n / r], &frob_powers[0]), f);
            g.is_one()
        })
    }

    /// All monic irreducibles of degree `deg ≥ 1`, in increasing order.
    pub fn enumerate_irreducible(&self, deg: usize) -> Vec<Poly> {
        if deg == 0 {
            return Vec::new();
        }
        self.enumerate_monic(deg).filter(|f| self.is_irreducible(f)).collect()
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(q: u32) -> PolyRing {
        PolyRing::with_q(q).unwrap()
    }

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn gcd_of_t2_minus_1_and_t_minus_1() {
        let a = ring(3);
        // T² − 1 = 2 + T², T − 1 = 2 + T
        assert_eq!(a.gcd(&p("2,0,1"), &p("2,1")), p("2,1"));
    }

    #[test]
    fn divmod_t3_by_t() {
        let a = ring(3);
        assert_eq!(a.divmod(&p("0,0,0,1"), &p("0,1")).unwrap(), (p("0,0,1"), Poly::zero()));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let a = ring(3);
        assert_eq!(a.divmod(&p("1,1"), &Poly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn irreducible_is_coprime_to_lower_degree() {
        let a = ring(3);
        for f in a.enumerate_irreducible(3) {
            for deg in 0..3 {
                for g in a.enumerate_degree(deg) {
                    assert!(a.gcd(&f, &g).is_one());
                }
            }
        }
    }

    #[test]
    fn text_encoding() {
        assert_eq!(p("1,2,1").to_string(), "1,2,1");
        assert_eq!(p("0").to_string(), "0");
        assert_eq!(p("1,0,0").to_string(), "1");
        assert!(ring(3).parse("1,3").is_err());
        assert!("1,,2".parse::<Poly>().is_err());
        assert!("".parse::<Poly>().is_err());
    }

    #[test]
    fn degree_conventions() {
        let a = ring(3);
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(a.norm(&Poly::zero()), BigUint::from(0u32));
        assert_eq!(a.norm(&p("1,2,1")), BigUint::from(9u32));
        assert_eq!(p("1,2,2").leading(), 2);
    }

    #[test]
    fn monic_enumeration_order_and_count() {
        let a = ring(3);
        let lin: Vec<_> = a.enumerate_monic(1).map(|f| f.to_string()).collect();
        assert_eq!(lin, ["0,1", "1,1", "2,1"]);
        assert_eq!(a.enumerate_monic(4).count(), 81);
        let all: Vec<_> = a.enumerate_monic(3).collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    fn has_root(a: &PolyRing, f: &Poly) -> bool {
        a.fq().elements().any(|x| f.coeffs().iter().rev().fold(0, |acc, &c| a.fq().add(a.fq().mul(acc, x), c)) == 0)
    }

    #[test]
    fn irreducible_counts() {
        let a = ring(3);
        let lin = a.enumerate_irreducible(1);
        assert_eq!(lin, vec![p("0,1"), p("1,1"), p("2,1")]);
        // degree 2 and 3 monics are irreducible iff they have no root
        for deg in [2, 3] {
            let by_roots = a.enumerate_monic(deg).filter(|f| !has_root(&a, f)).count();
            assert_eq!(a.enumerate_irreducible(deg).len(), by_roots);
        }
        assert_eq!(a.enumerate_irreducible(2).len(), 3);

        // q = 2, degree 4: trial division by every irreducible of degree ≤ 2
        let b = ring(2);
        let small: Vec<Poly> = (1..=2).flat_map(|d| b.enumerate_irreducible(d)).collect();
        let by_trial = b.enumerate_monic(4).filter(|f| small.iter().all(|g| !b.divides(g, f))).count();
        assert_eq!(by_trial, 3);
        assert_eq!(b.enumerate_irreducible(4).len(), 3);
    }

    #[test]
    fn frobenius_twist_is_qth_power() {
        for q in [2, 3, 4] {
            let a = ring(q);
            for f in a.enumerate_monic(2).chain(a.enumerate_degree(1)) {
                assert_eq!(a.frobenius(&f), a.pow(&f, q as u64));
            }
        }
    }
}
