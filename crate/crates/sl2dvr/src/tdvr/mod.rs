//! Exact arithmetic in truncated discrete valuation rings of residue
//! characteristic 2, with the additive characters ψ and 𝛙 and the element ξ.

mod decompose;
mod field;
mod psi;
mod ring;
mod tower;

pub use decompose::{alpha_decompose, AlphaDecomposition};
pub use field::Fq;
pub use psi::{xi_compute, AdditiveCharacter, PsiData, RootOfUnity};
pub use ring::{Ring, RingDesc, RingKind, MAX_RING_SIZE};
pub use tower::Tower;
