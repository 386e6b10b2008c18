//! Independent brute-force character theory: conjugacy classes, character
//! tables by the Dixon–Schneider method modulo a prime, and restriction
//! multiplicities.

mod classes;
mod dixon;
mod modp;

pub use classes::{conjugacy_classes, Classes};
pub use dixon::{inner_product, restriction_between, CharacterTable, OracleConfig};
pub use modp::FieldCtx;

use crate::tdvr::RingDesc;

/// The modulus L = 2^{r+2}(q² − 1) used for every table over 𝔬_r.
///
/// Every element of GL₂(𝔬_r) has order dividing 2^r(q² − 1), and every value
/// of ψ has order dividing 2^r, so one field context serves all subgroups and
/// all linear characters of a ring.
pub fn field_order(desc: RingDesc) -> u64 {
    let q = desc.q as u64;
    (1u64 << (desc.r + 2)) * (q * q - 1)
}

/// The shared field context of a ring.
pub fn field_for(desc: RingDesc) -> crate::Result<FieldCtx> {
    FieldCtx::new(field_order(desc))
}
