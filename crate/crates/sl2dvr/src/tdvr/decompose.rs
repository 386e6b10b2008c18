//! The decomposition α̃ = w₁² + π^s w₂² in characteristic 2.

use serde::{Deserialize, Serialize};

use super::ring::Ring;
use crate::error::{Error, Result};

/// Witnesses of α̃ = w₁² + π^s·w₂².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaDecomposition {
    /// Square-root part of the even digits.
    pub w1: u32,
    /// Square-root part of the odd digits shifted down by π^s.
    pub w2: u32,
    /// The invariant s (always odd).
    pub s: u32,
}

/// Computes (w₁, w₂, s) for α̃ in a characteristic-2 ring, given k = min{val β̃, ℓ′}.
///
/// s is the least odd index m < k with (α̃)_m ≠ 0 when one exists (then w₂ is
/// a unit), and 2⌊k/2⌋ + 1 otherwise. The witnesses are read off the even and
/// odd digits directly and the identity is checked exactly.
pub fn alpha_decompose(ring: &Ring, alpha: u32, k: u32) -> Result<AlphaDecomposition> {
    if !ring.desc().is_char2() {
        return Err(Error::Domain("alpha_decompose needs a characteristic-2 ring".into()));
    }
    let r = ring.r() as usize;
    let k_field = ring.field();
    let digits = ring.digits(alpha);
    let first_odd = (1..r).step_by(2).find(|&i| digits[i] != 0);
    let s = match first_odd {
        Some(m) if (m as u32) < k => m as u32,
        _ => 2 * (k / 2) + 1,
    };
    let w1_digits: Vec<u32> = digits.iter().step_by(2).map(|&d| k_field.sqrt(d)).collect();
    let w2_digits: Vec<u32> = (s as usize..r).step_by(2).map(|i| k_field.sqrt(digits[i])).collect();
    let w1 = ring.from_digits(&w1_digits);
    let w2 = ring.from_digits(&w2_digits);
    let rebuilt = ring.add(ring.mul(w1, w1), ring.mul(ring.pi_pow(s), ring.mul(w2, w2)));
    if rebuilt != alpha {
        return Err(Error::Invariant(format!(
            "α̃ = {} has odd digits below π^{s}; no decomposition with this s",
            ring.encode(alpha)
        )));
    }
    Ok(AlphaDecomposition { w1, w2, s })
}
