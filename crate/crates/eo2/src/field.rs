//! Arithmetic in the binary fields GF(2^n) for 1 <= n <= 16.
//!
//! Elements are bit-packed: bit i of a [`Gf`] is the coefficient of t^i in
//! GF(2)\[t\]/(m(t)), where the modulus m is itself a bitmask with bit n set.
//! All operations go through a [`FieldCtx`] carrying n and the modulus.
//! Contexts are cheap `Copy` values; everything downstream threads one
//! through, and elements from different contexts must not be mixed.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Element of GF(2^n), packed as a bitmask (bit i = coefficient of t^i).
///
/// Serializes as the bare integer bitmask.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Gf(pub u16);

impl Gf {
    pub const ZERO: Gf = Gf(0);
    pub const ONE: Gf = Gf(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::fmt::Debug for Gf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::fmt::Display for Gf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero in GF(2^{n})")]
    DivisionByZero { n: u32 },
    #[error("field degree {n} outside supported range 1..=16")]
    DegreeOutOfRange { n: u32 },
    #[error("modulus bitmask {modulus} does not encode a degree-{n} polynomial")]
    ModulusDegreeMismatch { modulus: u32, n: u32 },
    #[error("modulus bitmask {modulus} is reducible over GF(2)")]
    ModulusReducible { modulus: u32 },
    #[error("element bitmask {bits} out of range for GF(2^{n})")]
    ElementOutOfRange { bits: u32, n: u32 },
}

/// A concrete presentation of GF(2^n): the degree n and the irreducible
/// modulus, both fixed at construction and validated.
///
/// ```
/// use eo2::field::{FieldCtx, Gf};
///
/// let k = FieldCtx::new(2).unwrap(); // GF(4), modulus t^2+t+1 (bitmask 7)
/// let w = Gf(2); // t
/// assert_eq!(k.mul(w, w), Gf(3)); // t^2 = t + 1
/// assert_eq!(k.sqrt(w), Gf(3)); // and conversely (t+1)^2 = t
/// ```
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct FieldCtx {
    n: u32,
    modulus: u32,
}

impl FieldCtx {
    /// GF(2^n) with the default modulus: the irreducible degree-n polynomial
    /// with the smallest bitmask.
    pub fn new(n: u32) -> Result<Self, FieldError> {
        if !(1..=16).contains(&n) {
            return Err(FieldError::DegreeOutOfRange { n });
        }
        Ok(FieldCtx {
            n,
            modulus: default_modulus(n),
        })
    }

    /// GF(2^n) with a caller-chosen modulus bitmask (bit n set, irreducible).
    pub fn with_modulus(n: u32, modulus: u32) -> Result<Self, FieldError> {
        if !(1..=16).contains(&n) {
            return Err(FieldError::DegreeOutOfRange { n });
        }
        if bitpoly_deg(modulus) != n as i32 {
            return Err(FieldError::ModulusDegreeMismatch { modulus, n });
        }
        if !bitpoly_irreducible(modulus) {
            return Err(FieldError::ModulusReducible { modulus });
        }
        Ok(FieldCtx { n, modulus })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of field elements, 2^n.
    pub fn order(&self) -> usize {
        1usize << self.n
    }

    /// All field elements in bitmask order (0, 1, t, t+1, ...).
    pub fn elements(&self) -> impl Iterator<Item = Gf> {
        (0..self.order() as u32).map(|b| Gf(b as u16))
    }

    /// Checked conversion from a raw bitmask (used by deserializers).
    pub fn element(&self, bits: u32) -> Result<Gf, FieldError> {
        if bits >> self.n != 0 {
            return Err(FieldError::ElementOutOfRange { bits, n: self.n });
        }
        Ok(Gf(bits as u16))
    }

    fn check(&self, a: Gf) {
        debug_assert!(
            (a.0 as u32) >> self.n == 0,
            "element {} out of range for GF(2^{})",
            a.0,
            self.n
        );
    }

    pub fn add(&self, a: Gf, b: Gf) -> Gf {
        self.check(a);
        self.check(b);
        Gf(a.0 ^ b.0)
    }

    /// Subtraction coincides with addition in characteristic 2.
    pub fn sub(&self, a: Gf, b: Gf) -> Gf {
        self.add(a, b)
    }

    /// Shift-and-reduce product. Desk-scale dimensions need nothing faster.
    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        self.check(a);
        self.check(b);
        let mut acc: u32 = 0;
        let mut a = a.0 as u32;
        let mut b = b.0 as u32;
        let top = 1u32 << self.n;
        while b != 0 {
            if b & 1 != 0 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= self.modulus;
            }
        }
        Gf(acc as u16)
    }

    pub fn sqr(&self, a: Gf) -> Gf {
        self.mul(a, a)
    }

    /// The Frobenius a -> a^2.
    pub fn frob(&self, a: Gf) -> Gf {
        self.sqr(a)
    }

    pub fn pow(&self, a: Gf, mut e: u64) -> Gf {
        let mut base = a;
        let mut acc = Gf::ONE;
        while e != 0 {
            if e & 1 != 0 {
                acc = self.mul(acc, base);
            }
            base = self.sqr(base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Gf) -> Result<Gf, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero { n: self.n });
        }
        // a^(2^n - 2) = a^-1 in the unit group of order 2^n - 1.
        Ok(self.pow(a, (1u64 << self.n) - 2))
    }

    pub fn div(&self, a: Gf, b: Gf) -> Result<Gf, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// The unique square root, a^(2^(n-1)); total because Frobenius is a
    /// bijection on a finite field of characteristic 2.
    pub fn sqrt(&self, a: Gf) -> Gf {
        self.pow(a, 1u64 << (self.n - 1))
    }
}

/// Degree of a bitmask polynomial over GF(2); -1 for the zero polynomial.
fn bitpoly_deg(p: u32) -> i32 {
    31 - p.leading_zeros() as i32
}

/// Remainder of bitmask polynomial division over GF(2).
fn bitpoly_rem(mut a: u32, m: u32) -> u32 {
    let dm = bitpoly_deg(m);
    debug_assert!(dm >= 0);
    while bitpoly_deg(a) >= dm {
        a ^= m << (bitpoly_deg(a) - dm);
    }
    a
}

/// Irreducibility over GF(2) by trial division up to half the degree.
pub fn bitpoly_irreducible(m: u32) -> bool {
    let d = bitpoly_deg(m);
    if d < 1 {
        return false;
    }
    for q in 2..(1u32 << (d / 2 + 1)) {
        if bitpoly_deg(q) >= 1 && bitpoly_rem(m, q) == 0 {
            return false;
        }
    }
    true
}

/// Smallest-bitmask irreducible polynomial of degree n over GF(2).
pub fn default_modulus(n: u32) -> u32 {
    assert!((1..=16).contains(&n), "degree {n} out of range");
    ((1u32 << n)..(1u32 << (n + 1)))
        .find(|&m| bitpoly_irreducible(m))
        .expect("an irreducible polynomial of each degree exists")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_moduli_are_minimal_irreducibles() {
        // Frozen expected table; cross-checked below against the trial-
        // division oracle so a typo here cannot silently pass.
        let expected: [u32; 16] = [
            2, 7, 11, 19, 37, 67, 131, 283, 515, 1033, 2053, 4105, 8219, 16417, 32771, 65579,
        ];
        for n in 1..=16u32 {
            let m = default_modulus(n);
            assert_eq!(m, expected[(n - 1) as usize], "n={n}");
            assert!(bitpoly_irreducible(m));
            assert_eq!(bitpoly_deg(m), n as i32);
            for smaller in (1u32 << n)..m {
                assert!(!bitpoly_irreducible(smaller), "n={n}: {smaller} < {m}");
            }
        }
    }

    #[test]
    fn gf4_multiplication_table() {
        let k = FieldCtx::new(2).unwrap();
        assert_eq!(k.modulus(), 7);
        let (w, w1) = (Gf(2), Gf(3)); // t and t+1
        assert_eq!(k.mul(w, w), w1); // t^2 = t+1
        assert_eq!(k.mul(w, w1), Gf::ONE); // t(t+1) = t^2+t = 1
        assert_eq!(k.mul(w1, w1), w); // (t+1)^2 = t
        assert_eq!(k.inv(w).unwrap(), w1);
        assert_eq!(k.sqrt(w), w1);
    }

    #[test]
    fn unit_group_and_inverses() {
        for n in [1u32, 3, 8, 11] {
            let k = FieldCtx::new(n).unwrap();
            for a in k.elements().skip(1) {
                let b = k.inv(a).unwrap();
                assert_eq!(k.mul(a, b), Gf::ONE, "n={n} a={a}");
                // Lagrange: a^(2^n - 1) = 1.
                assert_eq!(k.pow(a, (1u64 << n) - 1), Gf::ONE);
            }
        }
    }

    #[test]
    fn sqrt_inverts_squaring_exhaustively() {
        for n in [1u32, 2, 5, 10] {
            let k = FieldCtx::new(n).unwrap();
            for a in k.elements() {
                assert_eq!(k.sqrt(k.sqr(a)), a);
                assert_eq!(k.sqr(k.sqrt(a)), a);
            }
        }
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative() {
        let k = FieldCtx::new(6).unwrap();
        for a in k.elements().step_by(5) {
            for b in k.elements().step_by(7) {
                assert_eq!(k.frob(k.add(a, b)), k.add(k.frob(a), k.frob(b)));
                assert_eq!(k.frob(k.mul(a, b)), k.mul(k.frob(a), k.frob(b)));
            }
        }
    }

    #[test]
    fn division_by_zero_is_reported() {
        let k = FieldCtx::new(4).unwrap();
        assert_eq!(
            k.div(Gf(5), Gf::ZERO),
            Err(FieldError::DivisionByZero { n: 4 })
        );
        assert!(k.inv(Gf::ZERO).is_err());
    }

    #[test]
    fn modulus_validation() {
        assert!(FieldCtx::new(0).is_err());
        assert!(FieldCtx::new(17).is_err());
        // t^4 + 1 = (t+1)^4 is reducible.
        assert_eq!(
            FieldCtx::with_modulus(4, 17),
            Err(FieldError::ModulusReducible { modulus: 17 })
        );
        // Bitmask of degree 5 is not a degree-4 modulus.
        assert!(FieldCtx::with_modulus(4, 37).is_err());
        // The AES modulus is the smallest degree-8 irreducible, hence the
        // default; the Reed-Solomon one (285) is accepted as an alternate.
        let k = FieldCtx::with_modulus(8, 283).unwrap();
        assert_eq!(k.modulus(), FieldCtx::new(8).unwrap().modulus());
        let rs = FieldCtx::with_modulus(8, 285).unwrap();
        assert_ne!(rs.modulus(), k.modulus());
    }

    #[test]
    fn default_moduli_pass_the_frobenius_criterion() {
        // m of degree n is irreducible over GF(2) iff x^(2^n) = x mod m and
        // gcd(x^(2^(n/p)) - x, m) = 1 for every prime p dividing n. This is
        // written from scratch on raw bitmasks so it shares nothing with the
        // trial-division check inside the crate.
        fn pmod(mut a: u64, b: u64) -> u64 {
            let db = 63 - b.leading_zeros() as i32;
            loop {
                let da = 63 - a.leading_zeros() as i32;
                if a == 0 || da < db {
                    return a;
                }
                a ^= b << (da - db);
            }
        }
        fn pmul(mut a: u64, mut b: u64, m: u64) -> u64 {
            let mut r = 0u64;
            a = pmod(a, m);
            while b != 0 {
                if b & 1 == 1 {
                    r ^= a;
                }
                b >>= 1;
                a = pmod(a << 1, m);
            }
            r
        }
        fn pgcd(mut a: u64, mut b: u64) -> u64 {
            while b != 0 {
                let t = pmod(a, b);
                a = b;
                b = t;
            }
            a
        }
        for n in 1..=16u32 {
            let m = default_modulus(n) as u64;
            let xpow = |k: u32| -> u64 {
                let mut t = pmod(2, m); // x
                for _ in 0..k {
                    t = pmul(t, t, m);
                }
                t
            };
            assert_eq!(xpow(n), pmod(2, m), "x^(2^{n}) != x mod {m}");
            let mut rest = n;
            let mut primes = Vec::new();
            let mut d = 2;
            while d * d <= rest {
                if rest % d == 0 {
                    primes.push(d);
                    while rest % d == 0 {
                        rest /= d;
                    }
                }
                d += 1;
            }
            if rest > 1 {
                primes.push(rest);
            }
            for p in primes {
                assert_eq!(pgcd(xpow(n / p) ^ pmod(2, m), m), 1, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn element_range_check() {
        let k = FieldCtx::new(3).unwrap();
        assert!(k.element(7).is_ok());
        assert!(k.element(8).is_err());
    }
}
