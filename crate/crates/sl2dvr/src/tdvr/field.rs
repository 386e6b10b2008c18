//! The residue field 𝔽_q with q = 2^f, stored as bitmasks of polynomial
//! coefficients over 𝔽₂ modulo a fixed primitive polynomial.

use crate::error::{Error, Result};

/// Primitive polynomials over 𝔽₂ indexed by degree, as bitmasks including the leading term.
const PRIMITIVE_POLYS: [u32; 7] = [0, 0b11, 0b111, 0b1011, 0b1_0011, 0b10_0101, 0b101_1011];

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 6;

/// The finite field 𝔽_{2^f} with log/antilog tables.
#[derive(Debug, Clone)]
pub struct Fq {
    f: u32,
    q: u32,
    modulus: u32,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Fq {
    /// Builds 𝔽_q; `q` must be a power of two between 2 and 2^6.
    pub fn new(q: u32) -> Result<Self> {
        if q < 2 || !q.is_power_of_two() {
            return Err(Error::Config(format!("q = {q} is not a power of two ≥ 2")));
        }
        let f = q.trailing_zeros();
        if f > MAX_DEGREE {
            return Err(Error::Config(format!("q = {q} exceeds the supported 2^{MAX_DEGREE}")));
        }
        let modulus = PRIMITIVE_POLYS[f as usize];
        let generator = if f == 1 { 1 } else { 2 };
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![u32::MAX; q as usize];
        let mut x = 1u32;
        for k in 0..q - 1 {
            if log[x as usize] != u32::MAX {
                return Err(Error::Internal(format!("generator of 𝔽_{q} is not primitive")));
            }
            log[x as usize] = k;
            exp.push(x);
            x = clmul_mod(x, generator, modulus, f);
        }
        if x != 1 {
            return Err(Error::Internal(format!("generator of 𝔽_{q} has wrong order")));
        }
        Ok(Self { f, q, modulus, generator, exp, log })
    }

    /// Field size q.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Degree f of 𝔽_q over 𝔽₂.
    pub fn degree(&self) -> u32 {
        self.f
    }

    /// The defining primitive polynomial as a bitmask (leading term included).
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// The fixed generator g of 𝔽_q^×.
    pub fn generator(&self) -> u32 {
        self.generator
    }

    /// Sum (bitwise xor).
    pub fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    /// Product.
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let k = (self.log[a as usize] + self.log[b as usize]) % (self.q - 1);
        self.exp[k as usize]
    }

    /// Power with a non-negative exponent.
    pub fn pow(&self, a: u32, n: u64) -> u32 {
        if n == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let k = (self.log[a as usize] as u64 * (n % (self.q as u64 - 1))) % (self.q as u64 - 1);
        self.exp[k as usize]
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let k = (self.q - 1 - self.log[a as usize]) % (self.q - 1);
        Some(self.exp[k as usize])
    }

    /// The unique square root (Frobenius is bijective in characteristic 2).
    pub fn sqrt(&self, a: u32) -> u32 {
        self.pow(a, self.q as u64 / 2)
    }

    /// Absolute trace Tr_{𝔽_q/𝔽₂}(a) ∈ {0, 1}.
    pub fn trace(&self, a: u32) -> u32 {
        let mut t = 0;
        let mut x = a;
        for _ in 0..self.f {
            t ^= x;
            x = self.mul(x, x);
        }
        debug_assert!(t <= 1);
        t
    }

    /// Text index of an element: 0 for zero, k + 1 for g^k.
    pub fn index_of(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.log[a as usize] + 1
        }
    }

    /// Inverse of [`Fq::index_of`].
    pub fn from_index(&self, idx: u32) -> Result<u32> {
        match idx {
            0 => Ok(0),
            i if i < self.q => Ok(self.exp[i as usize - 1]),
            i => Err(Error::Config(format!("field index {i} out of range for q = {}", self.q))),
        }
    }

    /// All elements in bitmask order.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }
}

/// Carry-less product of two field elements reduced modulo `modulus`.
fn clmul_mod(a: u32, b: u32, modulus: u32, f: u32) -> u32 {
    let mut acc = 0u32;
    for i in 0..f.max(1) {
        if (b >> i) & 1 == 1 {
            acc ^= a << i;
        }
    }
    for i in (f..2 * f.max(1)).rev() {
        if (acc >> i) & 1 == 1 {
            acc ^= modulus << (i - f);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_supported_field_is_a_field() {
        for f in 1..=MAX_DEGREE {
            let k = Fq::new(1 << f).unwrap();
            for a in 1..k.q() {
                assert_eq!(k.mul(a, k.inv(a).unwrap()), 1);
                assert_eq!(k.mul(k.sqrt(a), k.sqrt(a)), a);
            }
        }
    }

    #[test]
    fn trace_is_additive_and_onto() {
        for f in 1..=MAX_DEGREE {
            let k = Fq::new(1 << f).unwrap();
            let ones = k.elements().filter(|&a| k.trace(a) == 1).count();
            assert_eq!(ones as u32, k.q() / 2);
            for a in k.elements() {
                for b in k.elements() {
                    assert_eq!(k.trace(a ^ b), k.trace(a) ^ k.trace(b));
                }
            }
        }
    }

    #[test]
    fn index_round_trip() {
        let k = Fq::new(8).unwrap();
        for a in k.elements() {
            assert_eq!(k.from_index(k.index_of(a)).unwrap(), a);
        }
        assert!(Fq::new(6).is_err());
        assert!(Fq::new(128).is_err());
    }

    #[test]
    fn multiplication_matches_carryless_reference() {
        let k = Fq::new(16).unwrap();
        for a in k.elements() {
            for b in k.elements() {
                assert_eq!(k.mul(a, b), clmul_mod(a, b, k.modulus(), k.degree()));
            }
        }
    }
}
