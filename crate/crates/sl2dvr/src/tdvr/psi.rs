//! Additive characters: ψ on 𝔬_r, the induced character 𝛙 on 𝔽_q, and ξ.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::field::Fq;
use super::ring::{Ring, RingKind};
use crate::error::{Error, Result};

/// exp(2πi·e/n) with n a power of two, stored exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootOfUnity {
    /// Modulus N.
    pub n: u32,
    /// Exponent in ℤ/N.
    pub e: u32,
}

impl RootOfUnity {
    /// The root exp(2πi·e/n).
    pub fn new(n: u32, e: u32) -> Self {
        Self { n, e: e % n }
    }

    /// The value 1 with modulus `n`.
    pub fn one(n: u32) -> Self {
        Self { n, e: 0 }
    }

    /// Whether the value is 1.
    pub fn is_one(&self) -> bool {
        self.e == 0
    }

    /// Product of two roots of the same modulus.
    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self::new(self.n, self.e + other.e)
    }

    /// Complex conjugate.
    pub fn inv(&self) -> Self {
        Self::new(self.n, self.n - self.e)
    }

    /// The same root written with modulus `m`, which must be a multiple of n.
    pub fn rescale(&self, m: u32) -> Option<Self> {
        m.is_multiple_of(self.n).then(|| Self::new(m, self.e * (m / self.n)))
    }
}

/// Which construction produced a ψ; kept for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "family")]
pub enum PsiData {
    /// Trace of the top digit (characteristic 2).
    TopDigitTrace,
    /// Tr(λ₀·v) for a Galois ring.
    GaloisTrace {
        /// The fixed twist λ₀.
        lambda0: u32,
    },
    /// c₀a₀ + c₁a₁2^{ℓ−ℓ′} on the two-coordinate Eisenstein representation.
    Eisenstein {
        /// Coefficient of a₀.
        c0: u32,
        /// Coefficient of a₁.
        c1: u32,
    },
}

/// An additive character ψ of 𝔬_r that is nontrivial on the ideal π^{r−1}𝔬_r,
/// tabulated on all elements.
///
/// For 𝔽_q[t]/(t^r) with q a square the trace character has ψ(π^{r−1}) = Tr(1) = 0,
/// so nontriviality is checked on the ideal rather than on the element π^{r−1}.
#[derive(Debug, Clone)]
pub struct AdditiveCharacter {
    ring: Arc<Ring>,
    n: u32,
    data: PsiData,
    twist: u32,
    table: Vec<u32>,
}

impl AdditiveCharacter {
    /// The default ψ of the ring.
    pub fn new(ring: Arc<Ring>) -> Result<Self> {
        Self::twisted(ring, 1)
    }

    /// The character v ↦ ψ(a·v) for a unit a, where ψ is the default character.
    pub fn twisted(ring: Arc<Ring>, a: u32) -> Result<Self> {
        if !ring.is_unit(a) {
            return Err(Error::Domain(format!("twist {} is not a unit", ring.encode(a))));
        }
        let desc = ring.desc();
        let (n, data, base): (u32, PsiData, Box<dyn Fn(u32) -> u32>) = match desc.kind {
            RingKind::Laurent => {
                let ring2 = ring.clone();
                let top = desc.r as usize - 1;
                (2, PsiData::TopDigitTrace, Box::new(move |v| ring2.field().trace(ring2.digits(v)[top])))
            }
            RingKind::Unramified => {
                let n = 1u32 << desc.r;
                let top = ring.pi_pow(desc.r - 1);
                let lambda0 = ring
                    .elements()
                    .filter(|&u| ring.is_unit(u))
                    .find(|&u| ring.galois_trace(ring.mul(u, top)).unwrap() != 0)
                    .ok_or_else(|| Error::Internal("no λ₀ with Tr(λ₀π^{r−1}) ≠ 0".into()))?;
                let ring2 = ring.clone();
                (
                    n,
                    PsiData::GaloisTrace { lambda0 },
                    Box::new(move |v| ring2.galois_trace(ring2.mul(lambda0, v)).unwrap() as u32),
                )
            }
            RingKind::Eisenstein => {
                let l = desc.ell();
                let lp = desc.ell_prime();
                let n = 1u32 << l;
                let eval = move |c0: u32, c1: u32, v: u32| -> u32 {
                    let a0 = v & ((1 << l) - 1);
                    let a1 = v >> l;
                    (c0.wrapping_mul(a0).wrapping_add(c1.wrapping_mul(a1) << (l - lp))) & (n - 1)
                };
                let top = ring.pi_pow(desc.r - 1);
                let (c0, c1) = (0..(1u32 << (l + lp)))
                    .map(|idx| (idx & ((1 << l) - 1), idx >> l))
                    .find(|&(c0, c1)| eval(c0, c1, top) != 0)
                    .ok_or_else(|| Error::Internal("no Eisenstein character with ψ(π^{r−1}) ≠ 1".into()))?;
                (n, PsiData::Eisenstein { c0, c1 }, Box::new(move |v| eval(c0, c1, v)))
            }
        };
        let table: Vec<u32> = ring.elements().map(|v| base(ring.mul(a, v)) % n).collect();
        let psi = Self { ring, n, data, twist: a, table };
        psi.check()?;
        Ok(psi)
    }

    /// A second valid ψ used to test independence of the choice: the default
    /// twisted by 1 + π when q = 2 and by the Teichmüller lift of g otherwise.
    pub fn alternate(ring: Arc<Ring>) -> Result<Self> {
        let a = if ring.q() == 2 {
            ring.add(1, ring.pi())
        } else {
            ring.teichmuller(ring.field().generator())
        };
        if a == 1 {
            return Err(Error::Domain("ring too small for an alternate character".into()));
        }
        Self::twisted(ring, a)
    }

    fn check(&self) -> Result<()> {
        if self.ring.field().elements().all(|x| !self.residue_character(x)) {
            return Err(Error::Internal("ψ is trivial on π^{r−1}𝔬".into()));
        }
        // Additivity on an additive generating set implies additivity everywhere.
        for b in self.additive_generators() {
            for v in self.ring.elements() {
                let lhs = self.table[self.ring.add(b, v) as usize];
                let rhs = (self.table[b as usize] + self.table[v as usize]) % self.n;
                if lhs != rhs {
                    return Err(Error::Internal("constructed ψ is not additive".into()));
                }
            }
        }
        Ok(())
    }

    fn additive_generators(&self) -> Vec<u32> {
        let k = self.ring.field();
        let mut gens = Vec::new();
        for i in 0..self.ring.r() {
            for j in 0..k.degree() {
                let t = self.ring.teichmuller(1 << j);
                gens.push(self.ring.mul(t, self.ring.pi_pow(i)));
            }
        }
        gens
    }

    /// The ring ψ is defined on.
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    /// Modulus N of the values.
    pub fn modulus(&self) -> u32 {
        self.n
    }

    /// Construction data.
    pub fn data(&self) -> PsiData {
        self.data
    }

    /// The twisting unit a (ψ(v) = ψ₀(a·v)).
    pub fn twist(&self) -> u32 {
        self.twist
    }

    /// ψ(v) as an exponent modulo N.
    #[inline]
    pub fn exponent(&self, v: u32) -> u32 {
        self.table[v as usize]
    }

    /// ψ(v).
    pub fn eval(&self, v: u32) -> RootOfUnity {
        RootOfUnity::new(self.n, self.table[v as usize])
    }

    /// 𝛙(x) = ψ(π^{r−1}·T(x)) on 𝔽_q; `true` means the value −1.
    pub fn residue_character(&self, x: u32) -> bool {
        let r = self.ring.r();
        let v = self.ring.mul(self.ring.pi_pow(r - 1), self.ring.teichmuller(x));
        self.table[v as usize] != 0
    }

    /// ξ for the residue character of this ψ.
    pub fn xi(&self) -> Result<u32> {
        xi_compute(self.ring.field(), |x| self.residue_character(x))
    }
}

/// The unique ξ ∈ 𝔽_q^× with ker 𝛙 = {ξx² + x : x ∈ 𝔽_q}, found by exhaustion.
///
/// `bpsi(x)` returns `true` when 𝛙(x) = −1.
pub fn xi_compute(k: &Fq, bpsi: impl Fn(u32) -> bool) -> Result<u32> {
    if k.elements().all(|x| !bpsi(x)) {
        return Err(Error::Domain("𝛙 is trivial".into()));
    }
    let kernel: Vec<bool> = k.elements().map(|x| !bpsi(x)).collect();
    let candidates: Vec<u32> = (1..k.q())
        .filter(|&xi| {
            let mut image = vec![false; k.q() as usize];
            for x in k.elements() {
                image[k.add(k.mul(xi, k.mul(x, x)), x) as usize] = true;
            }
            image == kernel
        })
        .collect();
    match candidates.as_slice() {
        [xi] => Ok(*xi),
        other => Err(Error::Invariant(format!("{} candidates for ξ", other.len()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(spec: &str) -> Arc<Ring> {
        Arc::new(Ring::from_spec(spec).unwrap())
    }

    #[test]
    fn exhaustive_additivity_on_small_rings() {
        for spec in ["2adic:2:4", "laurent:2:4", "eis:2:5:2", "eis:2:6:2", "2adic:4:3", "laurent:4:3", "2adic:8:2"] {
            let r = ring(spec);
            for psi in [AdditiveCharacter::new(r.clone()).unwrap(), AdditiveCharacter::alternate(r.clone()).unwrap()] {
                for u in r.elements() {
                    for v in r.elements() {
                        assert_eq!(psi.eval(r.add(u, v)), psi.eval(u).mul(&psi.eval(v)), "{spec}");
                    }
                }
                assert!(r.field().elements().any(|x| psi.residue_character(x)));
            }
        }
    }

    #[test]
    fn spec_examples() {
        let z16 = ring("2adic:2:4");
        let psi = AdditiveCharacter::new(z16).unwrap();
        assert_eq!(psi.eval(8), RootOfUnity::new(16, 8));

        let l4 = ring("laurent:2:4");
        let psi = AdditiveCharacter::new(l4.clone()).unwrap();
        assert_eq!(psi.exponent(l4.decode("0,0,0,1").unwrap()), 1);
        assert_eq!(psi.exponent(l4.decode("1,1").unwrap()), 0);

        let l = ring("laurent:4:3");
        let psi = AdditiveCharacter::new(l.clone()).unwrap();
        let k = l.field();
        let omega = k.elements().find(|&w| w > 1 && k.trace(w) == 1).unwrap();
        let v = l.from_digits(&[0, 0, omega]);
        assert_eq!(psi.exponent(v), 1);
    }

    #[test]
    fn eisenstein_search_order() {
        for r in 2..=9 {
            let psi = AdditiveCharacter::new(ring(&format!("eis:2:{r}:2"))).unwrap();
            let expected = if r % 2 == 1 { PsiData::Eisenstein { c0: 1, c1: 0 } } else { PsiData::Eisenstein { c0: 0, c1: 1 } };
            assert_eq!(psi.data(), expected);
        }
    }

    #[test]
    fn xi_unique_for_every_nontrivial_residue_character() {
        for q in [2u32, 4, 8, 16] {
            let k = Fq::new(q).unwrap();
            for c in 1..q {
                let xi = xi_compute(&k, |x| k.trace(k.mul(c, x)) == 1).unwrap();
                assert_ne!(xi, 0);
            }
        }
        let k2 = Fq::new(2).unwrap();
        assert_eq!(xi_compute(&k2, |x| x == 1).unwrap(), 1);
        let k4 = Fq::new(4).unwrap();
        assert_eq!(xi_compute(&k4, |x| k4.trace(x) == 1).unwrap(), 1);
        assert!(xi_compute(&k4, |_| false).is_err());
    }

    #[test]
    fn root_of_unity_arithmetic() {
        let a = RootOfUnity::new(8, 3);
        assert_eq!(a.mul(&a.inv()), RootOfUnity::one(8));
        assert_eq!(a.rescale(32).unwrap(), RootOfUnity::new(32, 12));
        assert!(a.rescale(4).is_none());
    }
}
