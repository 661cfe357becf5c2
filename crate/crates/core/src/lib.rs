//! Exact computations with Drinfeld modules over F_q(T).
//!
//! The crate is `no_std` (it needs `alloc`). Layers, bottom up:
//!
//! * [`fq`], [`poly`], [`factor`], [`arith`]: the ring A = F_q[T], its
//!   factorization and arithmetic functions (Möbius, Euler φ, `#GL_r(A/a)`);
//! * [`residue`], [`skew`]: residue fields A/pA and the twisted polynomial
//!   ring over them, with right division, right gcd and kernel dimensions;
//! * [`drinfeld`]: Drinfeld modules with coefficients in A and their
//!   reductions at primes;
//! * [`invariants`], [`oracle`]: Frobenius characteristic polynomials,
//!   Euler–Poincaré characteristics and elementary divisors of reductions,
//!   plus the exhaustive module-structure oracle;
//! * [`analytic`], [`identities`]: exact-rational density main terms and
//!   the exact identity checks for the arithmetic functions.

#![no_std]

extern crate alloc;
#[cfg(any(feature = "std", test))]
extern crate std;

pub mod analytic;
pub mod arith;
pub mod drinfeld;
pub mod error;
pub mod factor;
pub mod fq;
pub mod identities;
pub mod invariants;
pub mod oracle;
pub mod poly;
pub mod residue;
pub mod skew;

pub use error::{Error, Result};
pub use fq::{Fq, FqElem};
pub use poly::{Poly, PolyRing};
