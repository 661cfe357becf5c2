//! Exact identity checks over small rings.
//!
//! Each check enumerates its whole range and stops at the first
//! counterexample. The Möbius function is injectable so that a deliberately
//! broken implementation can be shown to be caught.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use crate::analytic::{lemma1_closed_form, lemma2_exact, moebius_inner_sum_closed, rational};
use crate::error::Result;
use crate::poly::{Poly, PolyRing};

/// Signature of a Möbius implementation under test.
pub type MobiusFn<'a> = &'a dyn Fn(&PolyRing, &Poly) -> Result<i8>;

/// The library Möbius function.
pub fn library_mobius(ring: &PolyRing, a: &Poly) -> Result<i8> {
    ring.mobius(a)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub name: &'static str,
    /// Number of instances checked before stopping.
    pub checked: usize,
    /// Description of the first failing instance, if any.
    pub counterexample: Option<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

struct Tally {
    name: &'static str,
    checked: usize,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, checked: 0 }
    }

    fn fail(self, what: String) -> IdentityReport {
        IdentityReport { name: self.name, checked: self.checked + 1, counterexample: Some(what) }
    }

    fn pass(self) -> IdentityReport {
        IdentityReport { name: self.name, checked: self.checked, counterexample: None }
    }
}

fn nonzero_up_to(ring: &PolyRing, max_deg: usize) -> impl Iterator<Item = Poly> + '_ {
    (0..=max_deg).flat_map(move |d| ring.enumerate_degree(d))
}

fn monic_up_to(ring: &PolyRing, max_deg: usize) -> impl Iterator<Item = Poly> + '_ {
    (0..=max_deg).flat_map(move |d| ring.enumerate_monic(d))
}

fn inv_norm(ring: &PolyRing, a: &Poly) -> BigRational {
    rational(1, BigInt::from(ring.norm(a)))
}

/// Memoizes an injected Möbius function.
struct MuCache<'a> {
    mu: MobiusFn<'a>,
    memo: BTreeMap<Poly, i8>,
}

impl<'a> MuCache<'a> {
    fn new(mu: MobiusFn<'a>) -> Self {
        MuCache { mu, memo: BTreeMap::new() }
    }

    fn get(&mut self, ring: &PolyRing, a: &Poly) -> Result<i8> {
        if let Some(&v) = self.memo.get(a) {
            return Ok(v);
        }
        let v = (self.mu)(ring, a)?;
        self.memo.insert(a.clone(), v);
        Ok(v)
    }
}

/// `#{monic a : deg a ≤ y} = (q^{y+1} − 1)/(q − 1)`, counted by enumeration.
pub fn check_monic_count(ring: &PolyRing, max_y: usize) -> IdentityReport {
    let mut t = Tally::new("monic-count");
    let mut running = 0usize;
    for y in 0..=max_y {
        running += ring.enumerate_monic(y).count();
        let expected = lemma1_closed_form(ring.q(), y);
        if BigUint::from(running) != expected {
            return t.fail(format!("y={y}: counted {running}, closed form {expected}"));
        }
        t.checked += 1;
    }
    t.pass()
}

/// `Σ_{d | a} μ(d) = (q−1)·[a is a unit]`, summing over all divisors
/// including non-monic ones.
pub fn check_divisor_sum(ring: &PolyRing, max_deg: usize, mu: MobiusFn<'_>) -> Result<IdentityReport> {
    let mut t = Tally::new("mobius-divisor-sum");
    let mut cache = MuCache::new(mu);
    let units = i64::from(ring.q() - 1);
    for a in nonzero_up_to(ring, max_deg) {
        let mut s = 0i64;
        for d in ring.all_divisors(&a)? {
            s += i64::from(cache.get(ring, &d)?);
        }
        let expected = if a.is_unit() { units } else { 0 };
        if s != expected {
            return Ok(t.fail(format!("a={a}: sum {s}, expected {expected}")));
        }
        t.checked += 1;
    }
    Ok(t.pass())
}

/// `1/|d| = (q−1)^{−2} Σ_{a, b ∈ A, ab | d} μ(a)/|b|` for every nonzero `d`.
pub fn check_inverse_norm(ring: &PolyRing, max_deg: usize, mu: MobiusFn<'_>) -> Result<IdentityReport> {
    let mut t = Tally::new("inverse-norm");
    let mut cache = MuCache::new(mu);
    let units_sq = rational((ring.q() - 1) * (ring.q() - 1), 1);
    for d in nonzero_up_to(ring, max_deg) {
        let mut s = BigRational::zero();
        for b in ring.all_divisors(&d)? {
            let rest = ring.div_exact(&d, &b)?.expect("divisor");
            let w = inv_norm(ring, &b);
            for a in ring.all_divisors(&rest)? {
                let m = cache.get(ring, &a)?;
                if m != 0 {
                    s += &w * rational(m, 1);
                }
            }
        }
        if s / &units_sq != inv_norm(ring, &d) {
            return Ok(t.fail(format!("d={d}")));
        }
        t.checked += 1;
    }
    Ok(t.pass())
}

/// `Σ_{monic m, n: mn = d} μ(m)/|n| = (−1)^{ω(d)} φ(rad d)/|d|`.
pub fn check_inner_sum(ring: &PolyRing, max_deg: usize, mu: MobiusFn<'_>) -> Result<IdentityReport> {
    let mut t = Tally::new("mobius-inner-sum");
    let mut cache = MuCache::new(mu);
    for d in monic_up_to(ring, max_deg) {
        let mut s = BigRational::zero();
        for n in ring.monic_divisors(&d)? {
            let m = ring.div_exact(&d, &n)?.expect("divisor");
            let v = cache.get(ring, &m)?;
            if v != 0 {
                s += inv_norm(ring, &n) * rational(v, 1);
            }
        }
        let closed = moebius_inner_sum_closed(ring, &d)?;
        if s != closed {
            return Ok(t.fail(format!("d={d}: direct {s}, closed {closed}")));
        }
        t.checked += 1;
    }
    Ok(t.pass())
}

/// `μ(ab) = μ(a)μ(b)` for coprime monic `a, b`.
pub fn check_mobius_multiplicative(ring: &PolyRing, max_deg: usize, mu: MobiusFn<'_>) -> Result<IdentityReport> {
    let mut t = Tally::new("mobius-multiplicative");
    let mut cache = MuCache::new(mu);
    let monics: Vec<Poly> = monic_up_to(ring, max_deg).collect();
    for x in &monics {
        for y in &monics {
            if !ring.gcd(x, y).is_one() {
                continue;
            }
            let lhs = cache.get(ring, &ring.mul(x, y))?;
            let rhs = cache.get(ring, x)? * cache.get(ring, y)?;
            if lhs != rhs {
                return Ok(t.fail(format!("a={x} b={y}: μ(ab)={lhs}, μ(a)μ(b)={rhs}")));
            }
            t.checked += 1;
        }
    }
    Ok(t.pass())
}

/// Units of `A/mA`, counted over residues of degree `< deg m`.
pub fn brute_units(ring: &PolyRing, m: &Poly) -> usize {
    (0..m.deg()).flat_map(|d| ring.enumerate_degree(d)).filter(|x| ring.gcd(x, m).is_one()).count()
}

/// `φ(m)` against a direct count of units.
pub fn check_phi(ring: &PolyRing, max_deg: usize) -> Result<IdentityReport> {
    let mut t = Tally::new("euler-phi");
    for m in (1..=max_deg).flat_map(|d| ring.enumerate_degree(d)) {
        let phi = ring.euler_phi(&m)?;
        let count = brute_units(ring, &m);
        if phi != BigUint::from(count) {
            return Ok(t.fail(format!("m={m}: φ={phi}, counted {count}")));
        }
        t.checked += 1;
    }
    Ok(t.pass())
}

/// Invertible `r×r` matrices over `A/mA`, counted by enumerating all
/// matrices and their determinants. Residues are indexed once, so the inner
/// loop only does table lookups.
pub fn brute_count_gl(ring: &PolyRing, r: usize, m: &Poly) -> usize {
    let residues: Vec<Poly> =
        core::iter::once(Poly::zero()).chain((0..m.deg()).flat_map(|d| ring.enumerate_degree(d))).collect();
    let n = residues.len();
    let index: BTreeMap<&Poly, usize> = residues.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let table = |f: &dyn Fn(&Poly, &Poly) -> Poly| -> Vec<usize> {
        let mut t = Vec::with_capacity(n * n);
        for x in &residues {
            for y in &residues {
                t.push(index[&f(x, y)]);
            }
        }
        t
    };
    let add = table(&|x, y| ring.add(x, y));
    let mul = table(&|x, y| ring.mulmod(x, y, m));
    let neg: Vec<usize> = residues.iter().map(|x| index[&ring.neg(x)]).collect();
    let unit: Vec<bool> = residues.iter().map(|x| !x.is_zero() && ring.gcd(x, m).is_one()).collect();

    let one = index[&Poly::one()];
    let cells = r * r;
    let perms = permutations(r);
    let mut mat = vec![0usize; cells];
    let mut count = 0;
    for idx in 0..n.pow(cells as u32) {
        let mut x = idx;
        for cell in mat.iter_mut() {
            *cell = x % n;
            x /= n;
        }
        let mut det = 0;
        for (perm, odd) in &perms {
            let mut term = one;
            for (i, &j) in perm.iter().enumerate() {
                term = mul[term * n + mat[i * r + j]];
            }
            if *odd {
                term = neg[term];
            }
            det = add[det * n + term];
        }
        count += usize::from(unit[det]);
    }
    count
}

/// All permutations of `0..r` with their parity.
fn permutations(r: usize) -> Vec<(Vec<usize>, bool)> {
    if r == 0 {
        return vec![(vec![], false)];
    }
    let mut out = Vec::new();
    for (p, odd) in permutations(r - 1) {
        for pos in 0..=p.len() {
            let mut v = p.clone();
            v.insert(pos, r - 1);
            // moving r−1 from the end to `pos` adds len − pos inversions
            out.push((v, odd ^ ((p.len() - pos) % 2 == 1)));
        }
    }
    out
}

/// `#GL_r(A/mA)` against exhaustive matrix counts, for `|m|^{r²} ≤ budget`.
pub fn check_count_gl(ring: &PolyRing, max_deg: usize, budget: u64) -> Result<IdentityReport> {
    let mut t = Tally::new("count-gl");
    let q = u64::from(ring.q());
    for r in 1..=3usize {
        for d in 1..=max_deg {
            let cost = q.checked_pow((d * r * r) as u32);
            if cost.is_none_or(|c| c > budget) {
                continue;
            }
            for m in ring.enumerate_monic(d) {
                let closed = ring.count_gl(r as u32, &m)?;
                let count = brute_count_gl(ring, r, &m);
                if closed != BigUint::from(count) {
                    return Ok(t.fail(format!("r={r} m={m}: formula {closed}, counted {count}")));
                }
                t.checked += 1;
            }
        }
    }
    Ok(t.pass())
}

/// `|#{monic irreducible of degree x} − q^x/x| ≤ 3 q^{x/2}/x`.
pub fn check_prime_count(ring: &PolyRing, max_deg: usize) -> IdentityReport {
    let mut t = Tally::new("prime-count");
    let q = BigInt::from(ring.q());
    for x in 1..=max_deg {
        let n = ring.enumerate_irreducible(x).len();
        // |x·n − q^x| ≤ 3 q^{x/2}, squared to stay in integers
        let qx = num_traits::pow(q.clone(), x);
        let diff = BigInt::from(x * n) - &qx;
        if &diff * &diff > BigInt::from(9) * &qx {
            return t.fail(format!("x={x}: count {n}, main term {}/{x}", qx));
        }
        t.checked += 1;
    }
    t.pass()
}

/// `Σ_{a ≠ 0, y < deg a ≤ y + k} |a|^{−α}` against the exact closed form.
pub fn check_tail_sum(ring: &PolyRing, max_y: usize) -> IdentityReport {
    let mut t = Tally::new("tail-sum");
    let q = ring.q();
    for alpha in [2u32, 3, 4] {
        for y in 0..=max_y {
            let horizon = y + 4;
            let mut direct = BigRational::zero();
            for n in y + 1..=horizon {
                let count = BigUint::from(q - 1) * BigUint::from(q).pow(n as u32);
                let norm = BigUint::from(q).pow(alpha * n as u32);
                direct += BigRational::new(count.into(), norm.into());
            }
            let closed = lemma2_exact(q, alpha, y) - lemma2_exact(q, alpha, horizon);
            if direct != closed {
                return t.fail(format!("α={alpha} y={y}"));
            }
            t.checked += 1;
        }
    }
    t.pass()
}

/// Runs every suite with the library Möbius function.
pub fn run_all(ring: &PolyRing, max_deg: usize) -> Result<Vec<IdentityReport>> {
    run_all_with(ring, max_deg, &library_mobius)
}

/// Runs every suite with an injected Möbius function.
pub fn run_all_with(ring: &PolyRing, max_deg: usize, mu: MobiusFn<'_>) -> Result<Vec<IdentityReport>> {
    Ok(vec![
        check_monic_count(ring, max_deg),
        check_divisor_sum(ring, max_deg, mu)?,
        check_inverse_norm(ring, max_deg, mu)?,
        check_inner_sum(ring, max_deg, mu)?,
        check_mobius_multiplicative(ring, max_deg.min(3), mu)?,
        check_phi(ring, max_deg.min(3))?,
        check_count_gl(ring, max_deg, 100_000)?,
        check_prime_count(ring, max_deg),
        check_tail_sum(ring, max_deg),
    ])
}

/// Whether every report in `reports` passed.
pub fn all_passed(reports: &[IdentityReport]) -> bool {
    reports.iter().all(IdentityReport::passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        for q in [2u32, 3] {
            let a = PolyRing::with_q(q).unwrap();
            let reports = run_all(&a, 4).unwrap();
            for r in &reports {
                assert!(r.passed(), "q={q}: {r:?}");
                assert!(r.checked > 0, "q={q}: {} checked nothing", r.name);
            }
        }
    }

    #[test]
    fn corrupted_mobius_is_caught() {
        let a = PolyRing::with_q(3).unwrap();
        let t2 = "0,0,1".parse::<Poly>().unwrap();
        // claims T² is squarefree
        let bad = move |ring: &PolyRing, x: &Poly| if ring.monic(x) == t2 { Ok(1) } else { ring.mobius(x) };
        let reports = run_all_with(&a, 3, &bad).unwrap();
        let failed: Vec<_> = reports.iter().filter(|r| !r.passed()).map(|r| r.name).collect();
        assert!(failed.contains(&"mobius-divisor-sum"));
        assert!(failed.contains(&"inverse-norm"));
        assert!(failed.contains(&"mobius-inner-sum"));
        let report = reports.iter().find(|r| r.name == "mobius-divisor-sum").unwrap();
        assert!(report.counterexample.as_ref().unwrap().contains("0,0,1"));
    }

    #[test]
    fn permutation_parities() {
        let perms = permutations(3);
        assert_eq!(perms.len(), 6);
        assert_eq!(perms.iter().filter(|(_, odd)| *odd).count(), 3);
        for (p, odd) in &perms {
            let inv = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            assert_eq!(*odd, inv % 2 == 1);
        }
    }

    #[test]
    fn gl2_over_f3() {
        let a = PolyRing::with_q(3).unwrap();
        assert_eq!(brute_count_gl(&a, 2, &"0,1".parse().unwrap()), 48);
    }
}
