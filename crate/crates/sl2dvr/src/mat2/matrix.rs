//! 2×2 matrices over a truncated DVR, stored as four element codes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tdvr::Ring;

/// A 2×2 matrix [[a₁₁, a₁₂], [a₂₁, a₂₂]] of ring element codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat2(pub [u32; 4]);

impl Mat2 {
    /// Builds [[a, b], [c, d]].
    pub fn new(a: u32, b: u32, c: u32, d: u32) -> Self {
        Self([a, b, c, d])
    }

    /// The identity matrix.
    pub fn identity() -> Self {
        Self([1, 0, 0, 1])
    }

    /// The zero matrix.
    pub fn zero() -> Self {
        Self([0; 4])
    }

    /// The scalar matrix xI.
    pub fn scalar(x: u32) -> Self {
        Self([x, 0, 0, x])
    }

    /// Set key: the four 16-bit codes packed row-major, so key order is entry order.
    #[inline]
    pub fn pack(&self) -> u64 {
        ((self.0[0] as u64) << 48) | ((self.0[1] as u64) << 32) | ((self.0[2] as u64) << 16) | self.0[3] as u64
    }

    /// Inverse of [`Mat2::pack`].
    #[inline]
    pub fn unpack(k: u64) -> Self {
        Self([(k >> 48) as u32, ((k >> 32) & 0xffff) as u32, ((k >> 16) & 0xffff) as u32, (k & 0xffff) as u32])
    }

    /// Product self·other.
    #[inline]
    pub fn mul(&self, ring: &Ring, o: &Self) -> Self {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = o.0;
        Self([
            ring.add(ring.mul(a, e), ring.mul(b, g)),
            ring.add(ring.mul(a, f), ring.mul(b, h)),
            ring.add(ring.mul(c, e), ring.mul(d, g)),
            ring.add(ring.mul(c, f), ring.mul(d, h)),
        ])
    }

    /// Entrywise sum.
    pub fn add(&self, ring: &Ring, o: &Self) -> Self {
        Self(std::array::from_fn(|i| ring.add(self.0[i], o.0[i])))
    }

    /// Entrywise difference.
    pub fn sub(&self, ring: &Ring, o: &Self) -> Self {
        Self(std::array::from_fn(|i| ring.sub(self.0[i], o.0[i])))
    }

    /// Multiplication by a ring element.
    pub fn scale(&self, ring: &Ring, x: u32) -> Self {
        Self(std::array::from_fn(|i| ring.mul(x, self.0[i])))
    }

    /// Determinant.
    pub fn det(&self, ring: &Ring) -> u32 {
        let [a, b, c, d] = self.0;
        ring.sub(ring.mul(a, d), ring.mul(b, c))
    }

    /// Trace.
    pub fn trace(&self, ring: &Ring) -> u32 {
        ring.add(self.0[0], self.0[3])
    }

    /// Inverse, when the determinant is a unit.
    #[inline]
    pub fn inv(&self, ring: &Ring) -> Option<Self> {
        let [a, b, c, d] = self.0;
        let di = ring.inv(self.det(ring))?;
        Some(Self([ring.mul(d, di), ring.mul(ring.neg(b), di), ring.mul(ring.neg(c), di), ring.mul(a, di)]))
    }

    /// Conjugate g·self·g⁻¹.
    pub fn conj_by(&self, ring: &Ring, g: &Self, g_inv: &Self) -> Self {
        g.mul(ring, self).mul(ring, g_inv)
    }

    /// Commutator [self, o] = self·o·self⁻¹·o⁻¹ of invertible matrices.
    pub fn commutator(&self, ring: &Ring, o: &Self) -> Self {
        let si = self.inv(ring).expect("commutator of a non-invertible matrix");
        let oi = o.inv(ring).expect("commutator of a non-invertible matrix");
        self.mul(ring, o).mul(ring, &si).mul(ring, &oi)
    }

    /// Whether the matrix is scalar.
    pub fn is_scalar(&self) -> bool {
        self.0[1] == 0 && self.0[2] == 0 && self.0[0] == self.0[3]
    }

    /// Entrywise reduction to a shorter truncation.
    pub fn reduce(&self, ring: &Ring, target: &Ring) -> Self {
        Self(std::array::from_fn(|i| ring.reduce_to(self.0[i], target)))
    }

    /// Entrywise canonical lift from a shorter truncation.
    pub fn lift(&self, source: &Ring, ring: &Ring) -> Self {
        Self(std::array::from_fn(|i| ring.lift_from(self.0[i], source)))
    }

    /// Whether self ≡ I modulo π^i.
    pub fn is_congruent_identity(&self, ring: &Ring, i: u32) -> bool {
        let [a, b, c, d] = self.0;
        ring.val(ring.sub(a, 1)) >= i && ring.val(b) >= i && ring.val(c) >= i && ring.val(ring.sub(d, 1)) >= i
    }

    /// Text encoding [["e","e"],["e","e"]]; each entry is quoted because element
    /// encodings are themselves comma-separated digit lists.
    pub fn encode(&self, ring: &Ring) -> String {
        let e: Vec<String> = self.0.iter().map(|&x| ring.encode(x)).collect();
        format!("[[\"{}\",\"{}\"],[\"{}\",\"{}\"]]", e[0], e[1], e[2], e[3])
    }
}

/// Whether A is cyclic, i.e. its reduction modulo π is not scalar.
pub fn is_cyclic(ring: &Ring, a: &Mat2) -> bool {
    let [a11, a12, a21, a22] = a.0;
    !(ring.val(a12) >= 1 && ring.val(a21) >= 1 && ring.val(ring.sub(a11, a22)) >= 1)
}

/// The result of bringing a cyclic A to the form [[0, a⁻¹α], [a, β]].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalized {
    /// Conjugator g ∈ SL₂.
    pub g: Mat2,
    /// Scalar shift x.
    pub x: u32,
    /// Lower-left unit a.
    pub a: u32,
    /// α, with upper-right entry a⁻¹α.
    pub alpha: u32,
    /// β, the lower-right entry.
    pub beta: u32,
}

/// Finds the first g (the identity, then `sl2` in sorted order) and a shift x
/// with gAg⁻¹ + xI = [[0, a⁻¹α], [a, β]], a a unit.
pub fn normalize_cyclic(ring: &Ring, sl2: &super::GroupSet, a: &Mat2) -> Result<Normalized> {
    if !is_cyclic(ring, a) {
        return Err(Error::Domain(format!("{} is not cyclic", a.encode(ring))));
    }
    for g in std::iter::once(Mat2::identity()).chain(sl2.iter()) {
        let gi = g.inv(ring).expect("SL₂ element");
        let b = a.conj_by(ring, &g, &gi);
        let x = ring.neg(b.0[0]);
        let shifted = b.add(ring, &Mat2::scalar(x));
        let unit = shifted.0[2];
        if ring.is_unit(unit) {
            return Ok(Normalized {
                g,
                x,
                a: unit,
                alpha: ring.mul(unit, shifted.0[1]),
                beta: shifted.0[3],
            });
        }
    }
    Err(Error::Internal("cyclic matrix could not be normalized".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_round_trip_and_order() {
        let m = Mat2::new(1, 65535, 7, 0);
        assert_eq!(Mat2::unpack(m.pack()), m);
        assert!(Mat2::new(0, 5, 5, 5).pack() < Mat2::new(1, 0, 0, 0).pack());
    }

    #[test]
    fn inverse_and_determinant() {
        let ring = Ring::from_spec("2adic:2:3").unwrap();
        let m = Mat2::new(3, 2, 5, 7);
        let mi = m.inv(&ring).unwrap();
        assert_eq!(m.mul(&ring, &mi), Mat2::identity());
        assert_eq!(m.det(&ring), ring.sub(ring.mul(3, 7), ring.mul(2, 5)));
        assert!(Mat2::new(2, 0, 0, 1).inv(&ring).is_none());
    }

    #[test]
    fn cyclicity_by_reduction() {
        let ring = Ring::from_spec("laurent:2:3").unwrap();
        assert!(is_cyclic(&ring, &Mat2::new(0, 0, 1, 0)));
        assert!(!is_cyclic(&ring, &Mat2::identity()));
        let t = ring.pi();
        assert!(!is_cyclic(&ring, &Mat2::new(1, t, t, ring.add(1, t))));
    }
}
