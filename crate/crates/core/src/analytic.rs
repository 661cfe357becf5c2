//! Exact-rational main terms for d_1-densities and average exponents.
//!
//! Every truncated series comes back as a [`Truncated`] value carrying an
//! explicit bound on the omitted tail.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRing};

/// How `[K(ψ[a]) : K]` is obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegreeMode {
    /// The generic value `#GL_r(A/aA)`.
    FullGl,
    /// Explicit degrees; every requested modulus must be present.
    UserTable(BTreeMap<Poly, BigUint>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeModel {
    pub rank: u32,
    /// Rank of the endomorphism ring; only enters the tail bounds.
    pub gamma: u32,
    pub mode: DegreeMode,
}

impl DegreeModel {
    pub fn full_gl(rank: u32, gamma: u32) -> Self {
        DegreeModel { rank, gamma, mode: DegreeMode::FullGl }
    }

    pub fn degree(&self, ring: &PolyRing, a: &Poly) -> Result<BigUint> {
        match &self.mode {
            DegreeMode::FullGl => ring.count_gl(self.rank, a),
            DegreeMode::UserTable(t) => {
                t.get(&ring.monic(a)).cloned().ok_or_else(|| Error::MissingDegreeEntry(a.clone()))
            }
        }
    }

    /// `⌊r²/γ⌋`, the growth exponent used in tail bounds. Rounding down only
    /// loosens the bound.
    fn growth_exponent(&self) -> Result<u32> {
        if self.gamma == 0 || self.gamma > self.rank {
            return Err(Error::InvalidArgument("gamma must lie in [1, r]"));
        }
        let e = self.rank * self.rank / self.gamma;
        if e < 2 {
            return Err(Error::InvalidArgument("tail series diverges for r²/γ < 2"));
        }
        Ok(e)
    }
}

/// Degrees `c_a` of the constant-field extension inside `K(ψ[a])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstantFieldModel {
    /// `c_a = 1` for all `a`.
    Trivial,
    /// Values inferred from survey data; moduli without data default to 1.
    Empirical(BTreeMap<Poly, u32>),
    /// Explicit values; every requested modulus must be present.
    UserTable(BTreeMap<Poly, u32>),
}

impl ConstantFieldModel {
    pub fn c(&self, ring: &PolyRing, a: &Poly) -> Result<u32> {
        let key = ring.monic(a);
        match self {
            ConstantFieldModel::Trivial => Ok(1),
            ConstantFieldModel::Empirical(t) => Ok(t.get(&key).copied().unwrap_or(1)),
            ConstantFieldModel::UserTable(t) => t.get(&key).copied().ok_or(Error::MissingConstantEntry(key)),
        }
    }

    /// `c_a(x)`: `c_a` if `c_a | x`, else 0.
    pub fn c_at(&self, ring: &PolyRing, a: &Poly, x: usize) -> Result<u32> {
        let c = self.c(ring, a)?;
        Ok(if x.is_multiple_of(c as usize) { c } else { 0 })
    }

    fn max_value(&self) -> u32 {
        match self {
            ConstantFieldModel::Trivial => 1,
            ConstantFieldModel::Empirical(t) | ConstantFieldModel::UserTable(t) => {
                t.values().copied().max().unwrap_or(1).max(1)
            }
        }
    }
}

/// A truncated series value with a bound on `|full − value|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncated {
    pub value: BigRational,
    pub tail_bound: BigRational,
}

pub fn rational(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn from_uint(n: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn q_pow(q: u32, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(q));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

/// `Σ_{a ∈ A, deg a > y} q^{−α deg a}` bounded as
/// `q / ((1 − q^{1−α}) q^{(α−1)(y+1)})`.
///
/// The exact value of the sum is `(q−1)/q` times this; the bound form is
/// what the tail estimates use.
pub fn lemma2_bound(q: u32, alpha: u32, y: usize) -> BigRational {
    assert!(alpha >= 2);
    let one = BigRational::one();
    let a1 = alpha as i64 - 1;
    let num = BigRational::from_integer(BigInt::from(q));
    num / ((one - q_pow(q, -a1)) * q_pow(q, a1 * (y as i64 + 1)))
}

/// Exact closed form of the same sum: `(q−1) q^{(1−α)(y+1)} / (1 − q^{1−α})`.
pub fn lemma2_exact(q: u32, alpha: u32, y: usize) -> BigRational {
    lemma2_bound(q, alpha, y) * rational(q - 1, q)
}

/// `(q^{y+1} − 1)/(q − 1)`, the number of monic polynomials of degree ≤ y.
pub fn lemma1_closed_form(q: u32, y: usize) -> BigUint {
    let qb = BigUint::from(q);
    (qb.pow(y as u32 + 1) - 1u32) / (q - 1)
}

/// Squarefree monic `m` with `deg m ≤ cutoff` together with `μ(m)`.
fn squarefree_monics(ring: &PolyRing, cutoff: usize) -> Result<Vec<(Poly, i8)>> {
    let mut out = Vec::new();
    for deg in 0..=cutoff {
        for m in ring.enumerate_monic(deg) {
            let mu = ring.mobius(&m)?;
            if mu != 0 {
                out.push((m, mu));
            }
        }
    }
    Ok(out)
}

/// Bound on `Σ_{deg m > cutoff} 1/[K(ψ[md]):K]` with constant 1.
pub fn delta_tail_bound(ring: &PolyRing, model: &DegreeModel, cutoff: usize) -> Result<BigRational> {
    let e = model.growth_exponent()?;
    Ok(lemma2_bound(ring.q(), e, cutoff))
}

/// `Σ_{monic m, deg m ≤ cutoff} μ(m) / [K(ψ[md]):K]`.
pub fn truncated_delta(ring: &PolyRing, d: &Poly, model: &DegreeModel, cutoff: usize) -> Result<Truncated> {
    if !d.is_monic() {
        return Err(Error::InvalidArgument("d must be monic"));
    }
    let mut value = BigRational::zero();
    for (m, mu) in squarefree_monics(ring, cutoff)? {
        let deg = model.degree(ring, &ring.mul(&m, d))?;
        value += rational(mu, BigInt::from(deg));
    }
    Ok(Truncated { value, tail_bound: delta_tail_bound(ring, model, cutoff)? })
}

/// `∏_{monic prime ℓ, deg ℓ ≤ cutoff} (1 − 1/#GL_2(A/ℓdA))`.
pub fn zywina_product(ring: &PolyRing, d: &Poly, cutoff: usize) -> Result<Truncated> {
    if !d.is_monic() {
        return Err(Error::InvalidArgument("d must be monic"));
    }
    let one = BigRational::one();
    let mut value = one.clone();
    for deg in 1..=cutoff {
        for l in ring.enumerate_irreducible(deg) {
            let g = ring.count_gl(2, &ring.mul(&l, d))?;
            value *= &one - from_uint(g).recip();
        }
    }
    // remaining factors: |log| ≤ Σ_{deg ℓ > cutoff} 2 |ℓd|^{−4}
    let dn = from_uint(ring.norm(d));
    let tail = rational(2, 1) * lemma2_bound(ring.q(), 4, cutoff) / num_traits::pow(dn, 4);
    Ok(Truncated { value, tail_bound: tail })
}

/// `(q^x/x) Σ_{deg m ≤ cutoff} μ(m) c_{md}(x) / [K(ψ[md]):K]`.
pub fn density_main_term(
    ring: &PolyRing,
    x: usize,
    d: &Poly,
    deg_model: &DegreeModel,
    cf_model: &ConstantFieldModel,
    cutoff: usize,
) -> Result<Truncated> {
    if x == 0 {
        return Err(Error::InvalidArgument("x must be positive"));
    }
    if cutoff * deg_model.rank as usize > x {
        return Err(Error::InvalidArgument("cutoff exceeds x/r"));
    }
    if !d.is_monic() {
        return Err(Error::InvalidArgument("d must be monic"));
    }
    let scale = q_pow(ring.q(), x as i64) / BigRational::from_integer(BigInt::from(x));
    let mut sum = BigRational::zero();
    for (m, mu) in squarefree_monics(ring, cutoff)? {
        let md = ring.mul(&m, d);
        let c = cf_model.c_at(ring, &md, x)?;
        if c == 0 {
            continue;
        }
        let deg = deg_model.degree(ring, &md)?;
        sum += rational(mu as i64 * c as i64, BigInt::from(deg));
    }
    let tail = delta_tail_bound(ring, deg_model, cutoff)? * BigRational::from_integer(cf_model.max_value().into());
    Ok(Truncated { value: &scale * sum, tail_bound: scale * tail })
}

/// `Σ_{monic m, n: mn = d} μ(m)/|n|` by direct enumeration of the splittings.
pub fn moebius_inner_sum_direct(ring: &PolyRing, d: &Poly) -> Result<BigRational> {
    let mut s = BigRational::zero();
    for n in ring.monic_divisors(d)? {
        let m = ring.div_exact(d, &n)?.expect("divisor");
        let mu = ring.mobius(&m)?;
        if mu != 0 {
            s += rational(mu, BigInt::from(ring.norm(&n)));
        }
    }
    Ok(s)
}

/// The same sum in closed form, `(−1)^{ω(d)} φ(rad d) / |d|`.
pub fn moebius_inner_sum_closed(ring: &PolyRing, d: &Poly) -> Result<BigRational> {
    let (rad, omega) = ring.radical_omega(d)?;
    let phi = BigInt::from(ring.euler_phi(&rad)?);
    let signed = if omega % 2 == 0 { phi } else { -phi };
    Ok(rational(signed, BigInt::from(ring.norm(d))))
}

/// `q^x Σ_{monic m, deg m ≤ cutoff} c_m(x)/[K(ψ[m]):K] · Σ_{ab=m} μ(a)/|b|`.
pub fn average_exponent_main_term(
    ring: &PolyRing,
    x: usize,
    deg_model: &DegreeModel,
    cf_model: &ConstantFieldModel,
    cutoff: usize,
) -> Result<Truncated> {
    if cutoff * 2 > x {
        return Err(Error::InvalidArgument("cutoff exceeds x/2"));
    }
    let qx = q_pow(ring.q(), x as i64);
    let mut sum = BigRational::zero();
    for deg in 0..=cutoff {
        for m in ring.enumerate_monic(deg) {
            let c = cf_model.c_at(ring, &m, x)?;
            if c == 0 {
                continue;
            }
            let inner = moebius_inner_sum_closed(ring, &m)?;
            let degree = deg_model.degree(ring, &m)?;
            sum += inner * rational(c, BigInt::from(degree));
        }
    }
    // |inner| ≤ 1 and c_m ≤ max c
    let tail = delta_tail_bound(ring, deg_model, cutoff)? * BigRational::from_integer(cf_model.max_value().into());
    Ok(Truncated { value: &qx * sum, tail_bound: qx * tail })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstantDegree {
    Inferred(u32),
    /// No degree in the data has a nonzero count.
    Indeterminate,
}

/// Infers `c_m` from split counts `(x, Π_1(x, m))`: the gcd of all degrees
/// with a nonzero count, i.e. the largest `c` for which the counts vanish
/// whenever `c ∤ x`. Zeros at degrees divisible by `c` are tolerated, since
/// small expected counts are often zero.
pub fn infer_constant_degree(counts: &[(usize, u64)]) -> ConstantDegree {
    let g = counts.iter().filter(|(_, n)| *n > 0).fold(0usize, |g, (x, _)| g.gcd(x));
    if g == 0 {
        ConstantDegree::Indeterminate
    } else {
        ConstantDegree::Inferred(g as u32)
    }
}

/// Decimal rendering rounded half away from zero.
pub fn to_decimal(r: &BigRational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = r * BigRational::from_integer(scale.clone());
    let half = rational(1, 2);
    let rounded = if scaled.is_negative() { (scaled - half).ceil() } else { (scaled + half).floor() };
    let n = rounded.to_integer();
    let neg = n.is_negative();
    let digits = n.abs().to_str_radix(10);
    let digits = if digits.len() <= places {
        let mut s = String::from("0").repeat(places + 1 - digits.len());
        s.push_str(&digits);
        s
    } else {
        digits
    };
    let (int, frac) = digits.split_at(digits.len() - places);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(int);
    if places > 0 {
        out.push('.');
        out.push_str(frac);
    }
    out
}

/// Floating-point approximation, for tolerance comparisons in reports.
pub fn to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
