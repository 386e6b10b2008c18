//! Character degrees of SL₂ over truncated 2-adic discrete valuation rings.
//!
//! The crate computes irreducible character degrees of SL₂(𝔬_r) for the
//! truncations 𝔬_r = 𝔬/π^r of three families of rings with residue field
//! 𝔽_q, q = 2^f: unramified rings (ℤ/2^r and Galois rings), the ramified ring
//! ℤ₂[√2], and the function-field rings 𝔽_q[t]/(t^r). Every closed-form
//! prediction is checked against a brute-force character-table oracle.
//!
//! Modules, bottom-up:
//!
//! * [`tdvr`]: ring arithmetic, additive characters ψ and 𝛙, ξ.
//! * [`mat2`]: 2×2 matrices, group enumeration, named subgroups, commutators.
//! * [`oracle`]: conjugacy classes and Dixon–Schneider character tables mod p.
//! * [`chars`]: the characters ψ_A and ψ_[A], and the census of cyclic orbits.
//! * [`extsets`]: the h-sets and the extension sets E and E′.
//! * [`construct`]: predicted spectra and their verification.
//! * [`zeta`]: representation zeta polynomials and their comparison.

pub mod chars;
pub mod construct;
pub mod error;
pub mod extsets;
pub mod mat2;
pub mod oracle;
pub mod tdvr;
pub mod zeta;

pub use error::{Error, Result};
