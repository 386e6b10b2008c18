//! Truncated discrete valuation rings 𝔬_r with residue field 𝔽_q, q = 2^f.
//!
//! Three families are supported, each with a canonical `u32` element code:
//!
//! * `Unramified`: the Galois ring (ℤ/2^r)[x]/(h) with h the 0/1-coefficient
//!   lift of the primitive polynomial of 𝔽_q; code = Σ c_j·2^{r·j}.
//! * `Eisenstein`: ℤ₂[π]/(π² − 2) truncated at π^r; code = a₀ + 2^ℓ·a₁ for
//!   a₀ + a₁π with a₀ ∈ ℤ/2^ℓ and a₁ ∈ ℤ/2^{ℓ′}.
//! * `Laurent`: 𝔽_q[t]/(t^r); code packs digit bitmasks, f bits per digit.
//!
//! Codes run through `0..q^r`, which is the enumeration order of the ring.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::field::Fq;
use crate::error::{Error, Result};

/// Largest ring size; matrices pack four 16-bit codes into a `u64`.
pub const MAX_RING_SIZE: u64 = 1 << 16;

/// Rings up to this size get precomputed multiplication tables.
const TABLE_LIMIT: u32 = 1024;

/// The family of a truncated DVR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RingKind {
    /// Characteristic 0, unramified over ℤ₂ (ℤ/2^r or a Galois ring).
    Unramified,
    /// Characteristic 0, ramified with π² = 2.
    Eisenstein,
    /// Characteristic 2, 𝔽_q[t]/(t^r).
    Laurent,
}

impl RingKind {
    /// Short name used in ring specs.
    pub fn short_name(self) -> &'static str {
        match self {
            RingKind::Unramified => "2adic",
            RingKind::Eisenstein => "eis",
            RingKind::Laurent => "laurent",
        }
    }
}

/// Parameters (kind, q, r, e) of a truncated DVR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RingDesc {
    /// Ring family.
    pub kind: RingKind,
    /// Residue field size.
    pub q: u32,
    /// Truncation length.
    pub r: u32,
    /// Ramification index.
    pub e: u32,
}

impl RingDesc {
    /// Validates and builds a descriptor.
    pub fn new(kind: RingKind, q: u32, r: u32, e: u32) -> Result<Self> {
        if q < 2 || !q.is_power_of_two() {
            return Err(Error::Config(format!("q = {q} is not a power of two ≥ 2")));
        }
        if r == 0 {
            return Err(Error::Config("r must be at least 1".into()));
        }
        match kind {
            RingKind::Unramified | RingKind::Laurent if e != 1 => {
                return Err(Error::Config(format!(
                    "e = {e} is invalid for {}; it must be 1",
                    kind.short_name()
                )))
            }
            RingKind::Eisenstein if e != 2 || q != 2 => {
                return Err(Error::Config(format!(
                    "eisenstein rings are supported only with q = 2 and e = 2, got q = {q}, e = {e}"
                )))
            }
            _ => {}
        }
        if q.trailing_zeros() > super::field::MAX_DEGREE {
            return Err(Error::Config(format!("q = {q} exceeds the supported residue fields")));
        }
        let desc = Self { kind, q, r, e };
        if desc.size() > MAX_RING_SIZE {
            return Err(Error::Capacity {
                what: format!("ring {desc}"),
                size: desc.size(),
                limit: MAX_RING_SIZE,
            });
        }
        Ok(desc)
    }

    /// Residue degree f with q = 2^f.
    pub fn f(&self) -> u32 {
        self.q.trailing_zeros()
    }

    /// ℓ = ⌈r/2⌉.
    pub fn ell(&self) -> u32 {
        self.r.div_ceil(2)
    }

    /// ℓ′ = ⌊r/2⌋.
    pub fn ell_prime(&self) -> u32 {
        self.r / 2
    }

    /// ε = 1 for even r, 0 for odd r.
    pub fn epsilon(&self) -> u32 {
        u32::from(self.r.is_multiple_of(2))
    }

    /// Ring size q^r.
    pub fn size(&self) -> u64 {
        (self.q as u64).pow(self.r)
    }

    /// Whether the ring has characteristic 2.
    pub fn is_char2(&self) -> bool {
        self.kind == RingKind::Laurent
    }

    /// The same family truncated at a different length.
    pub fn at_level(&self, r: u32) -> Result<Self> {
        Self::new(self.kind, self.q, r, self.e)
    }
}

impl fmt::Display for RingDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RingKind::Eisenstein => write!(f, "eis:{}:{}:{}", self.q, self.r, self.e),
            k => write!(f, "{}:{}:{}", k.short_name(), self.q, self.r),
        }
    }
}

impl FromStr for RingDesc {
    type Err = Error;

    /// Parses "kind:q:r[:e]" with kind one of `2adic`, `laurent`, `eis`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(Error::Config(format!("ring spec '{s}' must look like kind:q:r[:e]")));
        }
        let kind = match parts[0] {
            "2adic" | "unramified" => RingKind::Unramified,
            "laurent" | "char2" => RingKind::Laurent,
            "eis" | "eisenstein" => RingKind::Eisenstein,
            other => {
                return Err(Error::Config(format!(
                    "ring spec field 'kind': unknown kind '{other}' (expected 2adic, laurent or eis)"
                )))
            }
        };
        let num = |name: &str, text: &str| -> Result<u32> {
            text.parse::<u32>()
                .map_err(|_| Error::Config(format!("ring spec field '{name}': '{text}' is not an integer")))
        };
        let q = num("q", parts[1])?;
        let r = num("r", parts[2])?;
        let default_e = if kind == RingKind::Eisenstein { 2 } else { 1 };
        let e = match parts.get(3) {
            Some(t) => num("e", t)?,
            None => default_e,
        };
        RingDesc::new(kind, q, r, e)
    }
}

/// A truncated DVR with its arithmetic tables.
#[derive(Debug, Clone)]
pub struct Ring {
    desc: RingDesc,
    fq: Fq,
    size: u32,
    /// Unramified rings only: x^{f+j} reduced modulo h, as coefficient vectors.
    reduction: Vec<Vec<u64>>,
    teich: Vec<u32>,
    val_t: Vec<u8>,
    inv_t: Vec<u32>,
    mul_t: Option<Vec<u16>>,
    pi_pows: Vec<u32>,
    trace_basis: Vec<u64>,
}

impl Ring {
    /// Builds the ring described by `desc`.
    pub fn new(desc: RingDesc) -> Result<Self> {
        let desc = RingDesc::new(desc.kind, desc.q, desc.r, desc.e)?;
        let fq = Fq::new(desc.q)?;
        let size = desc.size() as u32;
        let mut ring = Self {
            desc,
            fq,
            size,
            reduction: Vec::new(),
            teich: Vec::new(),
            val_t: Vec::new(),
            inv_t: Vec::new(),
            mul_t: None,
            pi_pows: Vec::new(),
            trace_basis: Vec::new(),
        };
        if desc.kind == RingKind::Unramified {
            ring.reduction = ring.galois_reduction_table();
        }
        if size <= TABLE_LIMIT {
            let mut t = vec![0u16; (size * size) as usize];
            for a in 0..size {
                for b in a..size {
                    let p = ring.mul_direct(a, b) as u16;
                    t[(a * size + b) as usize] = p;
                    t[(b * size + a) as usize] = p;
                }
            }
            ring.mul_t = Some(t);
        }
        ring.teich = (0..desc.q).map(|d| ring.teichmuller_direct(d)).collect();
        let pi = ring.pi();
        let mut p = ring.one();
        for _ in 0..=desc.r {
            ring.pi_pows.push(p);
            p = ring.mul(p, pi);
        }
        ring.val_t = (0..size).map(|v| ring.val_direct(v) as u8).collect();
        let unit_order = ring.unit_count();
        ring.inv_t = (0..size)
            .map(|v| if ring.val_t[v as usize] == 0 { ring.pow(v, unit_order - 1) } else { 0 })
            .collect();
        if desc.kind == RingKind::Unramified {
            ring.trace_basis = ring.galois_trace_basis();
        }
        Ok(ring)
    }

    /// Convenience constructor from a spec string such as "2adic:2:4".
    pub fn from_spec(spec: &str) -> Result<Self> {
        Self::new(spec.parse()?)
    }

    /// Ring parameters.
    pub fn desc(&self) -> RingDesc {
        self.desc
    }

    /// Truncation length r.
    pub fn r(&self) -> u32 {
        self.desc.r
    }

    /// Residue field size q.
    pub fn q(&self) -> u32 {
        self.desc.q
    }

    /// The residue field.
    pub fn field(&self) -> &Fq {
        &self.fq
    }

    /// Number of elements q^r.
    pub fn size(&self) -> u32 {
        self.size
    }

    /// Number of units (q − 1)q^{r−1}.
    pub fn unit_count(&self) -> u64 {
        (self.desc.q as u64 - 1) * (self.desc.q as u64).pow(self.desc.r - 1)
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.size
    }

    /// Zero.
    pub fn zero(&self) -> u32 {
        0
    }

    /// One.
    pub fn one(&self) -> u32 {
        1
    }

    /// The uniformizer π.
    pub fn pi(&self) -> u32 {
        if self.desc.r == 1 {
            return 0;
        }
        match self.desc.kind {
            RingKind::Unramified => 2,
            RingKind::Eisenstein => 1 << self.desc.ell(),
            RingKind::Laurent => self.desc.q,
        }
    }

    /// π^i, zero for i ≥ r.
    pub fn pi_pow(&self, i: u32) -> u32 {
        if i >= self.desc.r {
            0
        } else {
            self.pi_pows[i as usize]
        }
    }

    /// Image of an integer.
    pub fn from_int(&self, n: i64) -> u32 {
        match self.desc.kind {
            RingKind::Laurent => (n.rem_euclid(2)) as u32,
            RingKind::Unramified => (n.rem_euclid(1i64 << self.desc.r)) as u32,
            RingKind::Eisenstein => (n.rem_euclid(1i64 << self.desc.ell())) as u32,
        }
    }

    /// Sum.
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match self.desc.kind {
            RingKind::Laurent => a ^ b,
            RingKind::Unramified => {
                if self.desc.f() == 1 {
                    (a + b) & (self.size - 1)
                } else {
                    self.coeffwise(a, b, |x, y| x.wrapping_add(y))
                }
            }
            RingKind::Eisenstein => {
                let (a0, a1) = self.eis_split(a);
                let (b0, b1) = self.eis_split(b);
                self.eis_join(a0 + b0, a1 + b1)
            }
        }
    }

    /// Additive inverse.
    pub fn neg(&self, a: u32) -> u32 {
        match self.desc.kind {
            RingKind::Laurent => a,
            RingKind::Unramified => {
                if self.desc.f() == 1 {
                    a.wrapping_neg() & (self.size - 1)
                } else {
                    self.coeffwise(0, a, |x, y| x.wrapping_sub(y))
                }
            }
            RingKind::Eisenstein => {
                let (a0, a1) = self.eis_split(a);
                self.eis_join(a0.wrapping_neg(), a1.wrapping_neg())
            }
        }
    }

    /// Difference a − b.
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// Product.
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.mul_t {
            Some(t) => t[(a * self.size + b) as usize] as u32,
            None => self.mul_direct(a, b),
        }
    }

    /// Power with a non-negative exponent.
    pub fn pow(&self, a: u32, mut n: u64) -> u32 {
        let mut base = a;
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Whether `a` is a unit.
    pub fn is_unit(&self, a: u32) -> bool {
        self.val_t[a as usize] == 0
    }

    /// Inverse of a unit.
    pub fn inv(&self, a: u32) -> Option<u32> {
        self.is_unit(a).then(|| self.inv_t[a as usize])
    }

    /// Valuation: largest i with a ∈ π^i𝔬_r, and r for zero.
    pub fn val(&self, a: u32) -> u32 {
        self.val_t[a as usize] as u32
    }

    /// Exact division a / π^i for a ∈ π^i𝔬, returning the canonical quotient
    /// whose top i digits are zero.
    pub fn div_pi_pow(&self, a: u32, i: u32) -> Option<u32> {
        if self.val(a) < i {
            return None;
        }
        let d = self.digits(a);
        let mut out = vec![0u32; self.desc.r as usize];
        for j in i as usize..d.len() {
            out[j - i as usize] = d[j];
        }
        Some(self.from_digits(&out))
    }

    /// The π-adic digits (a)_0, …, (a)_{r−1} as residue-field bitmasks.
    pub fn digits(&self, a: u32) -> Vec<u32> {
        let r = self.desc.r as usize;
        match self.desc.kind {
            RingKind::Laurent => {
                let f = self.desc.f();
                (0..r).map(|i| (a >> (f * i as u32)) & (self.desc.q - 1)).collect()
            }
            RingKind::Eisenstein => {
                let (a0, a1) = self.eis_split(a);
                (0..r).map(|i| if i % 2 == 0 { (a0 >> (i / 2)) & 1 } else { (a1 >> (i / 2)) & 1 }).collect()
            }
            RingKind::Unramified => {
                if self.desc.f() == 1 {
                    return (0..r).map(|i| (a >> i) & 1).collect();
                }
                let mut v = a;
                let mut out = Vec::with_capacity(r);
                for _ in 0..r {
                    let d = self.residue(v);
                    out.push(d);
                    let w = self.sub(v, self.teich[d as usize]);
                    v = self.map_coeffs(w, |c| c >> 1);
                }
                out
            }
        }
    }

    /// Σ T(d_i) π^i for residue-field digits d_i (missing digits are zero).
    pub fn from_digits(&self, digits: &[u32]) -> u32 {
        match self.desc.kind {
            RingKind::Laurent => {
                let f = self.desc.f();
                digits.iter().take(self.desc.r as usize).enumerate().fold(0, |acc, (i, &d)| acc | (d << (f * i as u32)))
            }
            RingKind::Eisenstein => {
                let (mut a0, mut a1) = (0u32, 0u32);
                for (i, &d) in digits.iter().take(self.desc.r as usize).enumerate() {
                    if i % 2 == 0 {
                        a0 |= (d & 1) << (i / 2);
                    } else {
                        a1 |= (d & 1) << (i / 2);
                    }
                }
                self.eis_join(a0, a1)
            }
            RingKind::Unramified => {
                if self.desc.f() == 1 {
                    return digits.iter().take(self.desc.r as usize).enumerate().fold(0, |acc, (i, &d)| acc | ((d & 1) << i));
                }
                let mut acc = 0;
                for (i, &d) in digits.iter().take(self.desc.r as usize).enumerate() {
                    acc = self.add(acc, self.mul(self.teich[d as usize], self.pi_pow(i as u32)));
                }
                acc
            }
        }
    }

    /// Residue class ā ∈ 𝔽_q.
    pub fn residue(&self, a: u32) -> u32 {
        match self.desc.kind {
            RingKind::Laurent => a & (self.desc.q - 1),
            RingKind::Eisenstein => a & 1,
            RingKind::Unramified => {
                let r = self.desc.r;
                (0..self.desc.f()).fold(0, |acc, j| acc | (((a >> (r * j)) & 1) << j))
            }
        }
    }

    /// Teichmüller representative of a residue-field element.
    pub fn teichmuller(&self, d: u32) -> u32 {
        self.teich[d as usize]
    }

    /// Canonical image in the truncation 𝔬_i of the same family, i ≤ r.
    pub fn reduce_to(&self, a: u32, target: &Ring) -> u32 {
        let i = target.desc.r;
        debug_assert!(i <= self.desc.r && target.desc.kind == self.desc.kind && target.desc.q == self.desc.q);
        match self.desc.kind {
            RingKind::Laurent => a & (target.size - 1),
            RingKind::Unramified => {
                let r = self.desc.r;
                let mask = (1u32 << i) - 1;
                (0..self.desc.f()).fold(0, |acc, j| acc | (((a >> (r * j)) & mask) << (i * j)))
            }
            RingKind::Eisenstein => {
                let (a0, a1) = self.eis_split(a);
                target.eis_join(a0, a1)
            }
        }
    }

    /// Canonical digit-wise lift from a shorter truncation `source` (higher digits zero).
    pub fn lift_from(&self, a: u32, source: &Ring) -> u32 {
        match self.desc.kind {
            RingKind::Laurent => a,
            RingKind::Unramified if self.desc.f() == 1 => a,
            RingKind::Eisenstein => {
                let (a0, a1) = source.eis_split(a);
                self.eis_join(a0, a1)
            }
            RingKind::Unramified => self.from_digits(&source.digits(a)),
        }
    }

    /// Whether `a` is a square; defined for characteristic 2 via odd digits.
    pub fn is_square_char2(&self, a: u32) -> bool {
        self.digits(a).iter().skip(1).step_by(2).all(|&d| d == 0)
    }

    /// In characteristic 2, the square root with digits (v)_i = √((a)_{2i}) of a square.
    pub fn sqrt_char2(&self, a: u32) -> Option<u32> {
        if !self.desc.is_char2() || !self.is_square_char2(a) {
            return None;
        }
        let d = self.digits(a);
        let roots: Vec<u32> = d.iter().step_by(2).map(|&x| self.fq.sqrt(x)).collect();
        Some(self.from_digits(&roots))
    }

    /// Galois-ring trace Tr(a) ∈ ℤ/2^r (unramified rings only).
    pub fn galois_trace(&self, a: u32) -> Option<u64> {
        if self.desc.kind != RingKind::Unramified {
            return None;
        }
        let r = self.desc.r;
        let mask = (1u64 << r) - 1;
        let mut t = 0u64;
        for (j, &tj) in self.trace_basis.iter().enumerate() {
            let c = ((a >> (r * j as u32)) as u64) & mask;
            t = t.wrapping_add(c.wrapping_mul(tj));
        }
        Some(t & mask)
    }

    /// Text encoding: comma-separated digit indices, little-endian.
    pub fn encode(&self, a: u32) -> String {
        self.digits(a).iter().map(|&d| self.fq.index_of(d).to_string()).collect::<Vec<_>>().join(",")
    }

    /// Parses the text encoding produced by [`Ring::encode`].
    pub fn decode(&self, s: &str) -> Result<u32> {
        let mut digits = Vec::new();
        for part in s.split(',') {
            let idx: u32 = part
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("element digit '{part}' is not an integer")))?;
            digits.push(self.fq.from_index(idx)?);
        }
        if digits.len() > self.desc.r as usize {
            return Err(Error::Config(format!("element '{s}' has more than r = {} digits", self.desc.r)));
        }
        Ok(self.from_digits(&digits))
    }

    fn eis_split(&self, a: u32) -> (u32, u32) {
        let l = self.desc.ell();
        (a & ((1 << l) - 1), a >> l)
    }

    fn eis_join(&self, a0: u32, a1: u32) -> u32 {
        let l = self.desc.ell();
        let lp = self.desc.ell_prime();
        (a0 & ((1 << l) - 1)) | ((a1 & ((1 << lp) - 1)) << l)
    }

    fn coeffwise(&self, a: u32, b: u32, op: impl Fn(u32, u32) -> u32) -> u32 {
        let r = self.desc.r;
        let mask = (1u32 << r) - 1;
        (0..self.desc.f()).fold(0, |acc, j| {
            let x = (a >> (r * j)) & mask;
            let y = (b >> (r * j)) & mask;
            acc | ((op(x, y) & mask) << (r * j))
        })
    }

    fn map_coeffs(&self, a: u32, op: impl Fn(u32) -> u32) -> u32 {
        self.coeffwise(a, 0, |x, _| op(x))
    }

    fn unpack_coeffs(&self, a: u32) -> Vec<u64> {
        let r = self.desc.r;
        let mask = (1u32 << r) - 1;
        (0..self.desc.f()).map(|j| ((a >> (r * j)) & mask) as u64).collect()
    }

    fn pack_coeffs(&self, c: &[u64]) -> u32 {
        let r = self.desc.r;
        let mask = (1u64 << r) - 1;
        c.iter().enumerate().fold(0, |acc, (j, &x)| acc | (((x & mask) as u32) << (r * j as u32)))
    }

    /// x^{f+j} reduced modulo h, for j = 0..f−1, as coefficient vectors.
    fn galois_reduction_table(&self) -> Vec<Vec<u64>> {
        let f = self.desc.f() as usize;
        let h = self.fq.modulus();
        // x^f = −Σ h_j x^j with h_j ∈ {0, 1}; coefficients are kept as wrapping u64.
        let low: Vec<u64> = (0..f).map(|j| if (h >> j) & 1 == 1 { 1u64.wrapping_neg() } else { 0 }).collect();
        let mut table = vec![low.clone()];
        for _ in 1..f.saturating_sub(1) {
            let prev = table.last().unwrap().clone();
            let mut next = vec![0u64; f];
            next[1..].copy_from_slice(&prev[..f - 1]);
            let top = prev[f - 1];
            for j in 0..f {
                next[j] = next[j].wrapping_add(top.wrapping_mul(low[j]));
            }
            table.push(next);
        }
        table
    }

    fn galois_trace_basis(&self) -> Vec<u64> {
        let f = self.desc.f();
        let r = self.desc.r;
        let mask = (1u64 << r) - 1;
        (0..f)
            .map(|j| {
                let xj = 1u32 << (r * j);
                let mut t = 0u64;
                for i in 0..f {
                    let xi = 1u32 << (r * i);
                    let prod = self.mul(xj, xi);
                    t = t.wrapping_add(((prod >> (r * i)) as u64) & mask);
                }
                t & mask
            })
            .collect()
    }

    fn mul_direct(&self, a: u32, b: u32) -> u32 {
        match self.desc.kind {
            RingKind::Laurent => {
                let f = self.desc.f();
                let r = self.desc.r;
                let qm = self.desc.q - 1;
                let mut out = 0u32;
                for i in 0..r {
                    let ai = (a >> (f * i)) & qm;
                    if ai == 0 {
                        continue;
                    }
                    for j in 0..r - i {
                        let bj = (b >> (f * j)) & qm;
                        if bj != 0 {
                            out ^= self.fq.mul(ai, bj) << (f * (i + j));
                        }
                    }
                }
                out
            }
            RingKind::Eisenstein => {
                let (a0, a1) = self.eis_split(a);
                let (b0, b1) = self.eis_split(b);
                let c0 = a0.wrapping_mul(b0).wrapping_add(2u32.wrapping_mul(a1.wrapping_mul(b1)));
                let c1 = a0.wrapping_mul(b1).wrapping_add(a1.wrapping_mul(b0));
                self.eis_join(c0, c1)
            }
            RingKind::Unramified => {
                let f = self.desc.f() as usize;
                if f == 1 {
                    return a.wrapping_mul(b) & (self.size - 1);
                }
                let x = self.unpack_coeffs(a);
                let y = self.unpack_coeffs(b);
                let mut prod = vec![0u64; 2 * f - 1];
                for i in 0..f {
                    for j in 0..f {
                        prod[i + j] = prod[i + j].wrapping_add(x[i].wrapping_mul(y[j]));
                    }
                }
                let mut out: Vec<u64> = prod[..f].to_vec();
                for (c, red) in prod[f..].iter().zip(&self.reduction) {
                    for (o, r) in out.iter_mut().zip(red) {
                        *o = o.wrapping_add(c.wrapping_mul(*r));
                    }
                }
                self.pack_coeffs(&out)
            }
        }
    }

    fn val_direct(&self, a: u32) -> u32 {
        let r = self.desc.r;
        match self.desc.kind {
            RingKind::Laurent => {
                if a == 0 {
                    r
                } else {
                    a.trailing_zeros() / self.desc.f()
                }
            }
            RingKind::Unramified => {
                let mask = (1u32 << r) - 1;
                (0..self.desc.f())
                    .map(|j| {
                        let c = (a >> (r * j)) & mask;
                        if c == 0 {
                            r
                        } else {
                            c.trailing_zeros()
                        }
                    })
                    .min()
                    .unwrap_or(r)
            }
            RingKind::Eisenstein => {
                let (a0, a1) = self.eis_split(a);
                let v0 = if a0 == 0 { r } else { 2 * a0.trailing_zeros() };
                let v1 = if a1 == 0 { r } else { 2 * a1.trailing_zeros() + 1 };
                v0.min(v1).min(r)
            }
        }
    }

    fn teichmuller_direct(&self, d: u32) -> u32 {
        match self.desc.kind {
            RingKind::Laurent => d,
            RingKind::Eisenstein => d & 1,
            RingKind::Unramified => {
                if d == 0 {
                    return 0;
                }
                let r = self.desc.r;
                let lift = (0..self.desc.f()).fold(0, |acc, j| acc | (((d >> j) & 1) << (r * j)));
                self.pow(lift, (self.desc.q as u64).pow(r - 1))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_small_rings() -> Vec<Ring> {
        let mut out = Vec::new();
        for r in 1..=5 {
            out.push(Ring::from_spec(&format!("2adic:2:{r}")).unwrap());
            out.push(Ring::from_spec(&format!("laurent:2:{r}")).unwrap());
            out.push(Ring::from_spec(&format!("eis:2:{r}:2")).unwrap());
        }
        for r in 1..=3 {
            out.push(Ring::from_spec(&format!("2adic:4:{r}")).unwrap());
            out.push(Ring::from_spec(&format!("laurent:4:{r}")).unwrap());
        }
        out.push(Ring::from_spec("2adic:8:2").unwrap());
        out.push(Ring::from_spec("laurent:8:2").unwrap());
        out
    }

    #[test]
    fn ring_axioms_hold_exhaustively() {
        for ring in all_small_rings() {
            let n = ring.size();
            for a in 0..n {
                assert_eq!(ring.add(a, ring.neg(a)), 0, "{}", ring.desc());
                for b in 0..n {
                    assert_eq!(ring.mul(a, b), ring.mul(b, a));
                    assert_eq!(ring.add(a, b), ring.add(b, a));
                }
            }
            for a in (0..n).step_by(3) {
                for b in (0..n).step_by(5) {
                    for c in (0..n).step_by(7) {
                        let lhs = ring.mul(a, ring.add(b, c));
                        let rhs = ring.add(ring.mul(a, b), ring.mul(a, c));
                        assert_eq!(lhs, rhs, "distributivity in {}", ring.desc());
                        assert_eq!(ring.mul(a, ring.mul(b, c)), ring.mul(ring.mul(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn units_and_valuations() {
        for ring in all_small_rings() {
            let units = ring.elements().filter(|&a| ring.is_unit(a)).count() as u64;
            assert_eq!(units, ring.unit_count(), "{}", ring.desc());
            for a in ring.elements().filter(|&a| ring.is_unit(a)) {
                assert_eq!(ring.mul(a, ring.inv(a).unwrap()), 1);
            }
            assert_eq!(ring.val(0), ring.r());
            assert_ne!(ring.pi_pow(ring.r() - 1), 0);
            assert_eq!(ring.mul(ring.pi_pow(ring.r() - 1), ring.pi()), 0);
            for a in ring.elements() {
                let v = ring.val(a);
                if v < ring.r() {
                    let u = ring.div_pi_pow(a, v).unwrap();
                    assert!(ring.is_unit(u));
                    assert_eq!(ring.mul(u, ring.pi_pow(v)), a);
                }
            }
        }
    }

    #[test]
    fn digits_reconstruct_elements() {
        for ring in all_small_rings() {
            for a in ring.elements() {
                let d = ring.digits(a);
                assert_eq!(d.len(), ring.r() as usize);
                assert_eq!(ring.from_digits(&d), a, "{} element {a}", ring.desc());
                let first = d.iter().position(|&x| x != 0).unwrap_or(ring.r() as usize) as u32;
                assert_eq!(first, ring.val(a));
                assert_eq!(ring.decode(&ring.encode(a)).unwrap(), a);
            }
        }
    }

    #[test]
    fn reduction_is_a_ring_homomorphism_with_kernel_pi_i() {
        for ring in all_small_rings() {
            for i in 1..=ring.r() {
                let small = Ring::new(ring.desc().at_level(i).unwrap()).unwrap();
                let mut kernel = 0u64;
                for a in ring.elements() {
                    let ra = ring.reduce_to(a, &small);
                    if ra == 0 {
                        kernel += 1;
                        assert!(ring.val(a) >= i);
                    }
                    assert_eq!(ring.reduce_to(ring.lift_from(ra, &small), &small), ra);
                    for b in (0..ring.size()).step_by(3) {
                        let rb = ring.reduce_to(b, &small);
                        assert_eq!(ring.reduce_to(ring.add(a, b), &small), small.add(ra, rb));
                        assert_eq!(ring.reduce_to(ring.mul(a, b), &small), small.mul(ra, rb));
                    }
                }
                assert_eq!(kernel, (ring.q() as u64).pow(ring.r() - i));
            }
        }
    }

    #[test]
    fn eisenstein_uniformizer_squares_to_two() {
        let ring = Ring::from_spec("eis:2:9:2").unwrap();
        assert_eq!(ring.size(), 512);
        assert_eq!(ring.mul(ring.pi(), ring.pi()), ring.from_int(2));
    }

    #[test]
    fn galois_ring_of_size_sixteen_has_twelve_units() {
        let ring = Ring::from_spec("2adic:4:2").unwrap();
        assert_eq!(ring.size(), 16);
        assert_eq!(ring.from_int(4), 0);
        // Independent brute-force count on (ℤ/4)[x]/(x² + x + 1).
        let mul = |a: (u32, u32), b: (u32, u32)| {
            let c0 = a.0 * b.0;
            let c1 = a.0 * b.1 + a.1 * b.0;
            let c2 = a.1 * b.1;
            ((c0 + 3 * c2) % 4, (c1 + 3 * c2) % 4)
        };
        let elems: Vec<(u32, u32)> = (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).collect();
        let units = elems.iter().filter(|&&a| elems.iter().any(|&b| mul(a, b) == (1, 0))).count();
        assert_eq!(units, 12);
        assert_eq!(ring.unit_count(), 12);
    }

    #[test]
    fn teichmuller_is_multiplicative() {
        for spec in ["2adic:4:3", "2adic:8:2", "laurent:4:3"] {
            let ring = Ring::from_spec(spec).unwrap();
            let k = ring.field();
            for a in k.elements() {
                for b in k.elements() {
                    let lhs = ring.teichmuller(k.mul(a, b));
                    let rhs = ring.mul(ring.teichmuller(a), ring.teichmuller(b));
                    assert_eq!(lhs, rhs);
                }
                assert_eq!(ring.residue(ring.teichmuller(a)), a);
            }
        }
    }

    #[test]
    fn char2_squares_match_brute_force() {
        for spec in ["laurent:2:5", "laurent:4:3"] {
            let ring = Ring::from_spec(spec).unwrap();
            let squares: std::collections::BTreeSet<u32> = ring.elements().map(|v| ring.mul(v, v)).collect();
            for a in ring.elements() {
                assert_eq!(ring.is_square_char2(a), squares.contains(&a));
                if let Some(s) = ring.sqrt_char2(a) {
                    assert_eq!(ring.mul(s, s), a);
                }
            }
        }
    }

    #[test]
    fn spec_examples() {
        let z16 = Ring::from_spec("2adic:2:4").unwrap();
        assert_eq!(z16.val(12), 2);
        let z4 = Ring::from_spec("2adic:2:2").unwrap();
        assert_eq!(z16.reduce_to(13, &z4), 1);
        let l4 = Ring::from_spec("laurent:2:4").unwrap();
        let t_plus_t3 = l4.decode("0,1,0,1").unwrap();
        assert_eq!(l4.val(t_plus_t3), 1);
        let l2 = Ring::from_spec("laurent:2:2").unwrap();
        assert_eq!(l4.reduce_to(l4.decode("1,0,1,1").unwrap(), &l2), 1);
    }

    #[test]
    fn spec_parsing_reports_the_bad_field() {
        assert!(matches!("foo:2:3".parse::<RingDesc>(), Err(Error::Config(m)) if m.contains("kind")));
        assert!(matches!("2adic:x:3".parse::<RingDesc>(), Err(Error::Config(m)) if m.contains("'q'")));
        assert!("2adic:3:3".parse::<RingDesc>().is_err());
        assert!("eis:2:4:3".parse::<RingDesc>().is_err());
        assert_eq!("eis:2:9:2".parse::<RingDesc>().unwrap().ell_prime(), 4);
        assert_eq!("laurent:2:4".parse::<RingDesc>().unwrap().to_string(), "laurent:2:4");
    }
}
