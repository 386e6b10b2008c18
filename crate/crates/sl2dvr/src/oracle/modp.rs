//! Arithmetic modulo a prime p < 2³¹ and dense polynomials over 𝔽_p.

use std::collections::HashMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::tdvr::RootOfUnity;

/// (a · b) mod p.
#[inline]
pub fn mulm(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

/// (a + b) mod p.
#[inline]
pub fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

/// (a − b) mod p.
#[inline]
pub fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

/// a^n mod p.
pub fn powm(mut a: u64, mut n: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while n > 0 {
        if n & 1 == 1 {
            acc = mulm(acc, a, p);
        }
        a = mulm(a, a, p);
        n >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue.
pub fn invm(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    powm(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A prime p ≡ 1 (mod L) in (2³⁰, 2³¹), an element z of order exactly L, and
/// the discrete-logarithm table of z.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u64,
    l: u64,
    z: u64,
    dlog: HashMap<u64, u64>,
}

impl FieldCtx {
    /// Finds the least suitable prime and the least-base element of order L.
    pub fn new(l: u64) -> Result<Self> {
        let lo = 1u64 << 30;
        let hi = 1u64 << 31;
        let mut p = (lo / l + 1) * l + 1;
        while p < hi && !is_prime(p) {
            p += l;
        }
        if p >= hi {
            return Err(Error::Config(format!("no prime p ≡ 1 mod {l} below 2^31")));
        }
        let factors = prime_factors(l);
        let z = (2..p)
            .map(|a| powm(a, (p - 1) / l, p))
            .find(|&z| factors.iter().all(|&f| powm(z, l / f, p) != 1))
            .ok_or_else(|| Error::Internal("no element of order L".into()))?;
        let mut dlog = HashMap::with_capacity(l as usize);
        let mut x = 1u64;
        for k in 0..l {
            dlog.insert(x, k);
            x = mulm(x, z, p);
        }
        Ok(Self { p, l, z, dlog })
    }

    /// The prime p.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// The order L of z.
    pub fn order(&self) -> u64 {
        self.l
    }

    /// The fixed element z of order L.
    pub fn z(&self) -> u64 {
        self.z
    }

    /// Image z^{e·L/N} of the root of unity exp(2πi·e/N); N must divide L.
    pub fn root(&self, w: RootOfUnity) -> Result<u64> {
        let n = w.n as u64;
        if !self.l.is_multiple_of(n) {
            return Err(Error::Domain(format!("root-of-unity modulus {n} does not divide {}", self.l)));
        }
        Ok(powm(self.z, w.e as u64 * (self.l / n), self.p))
    }

    /// Exponent k with z^k = x, if x is a power of z.
    pub fn log(&self, x: u64) -> Option<u64> {
        self.dlog.get(&x).copied()
    }
}

/// Dense polynomial over 𝔽_p, little-endian coefficients, no trailing zeros.
pub type Poly = Vec<u64>;

fn trim(a: &mut Poly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_mul(a: &Poly, b: &Poly, p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

fn poly_rem(a: &Poly, m: &Poly, p: u64) -> Poly {
    let mut r = a.clone();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = invm(*m.last().unwrap(), p);
    while r.len() > dm {
        let c = mulm(*r.last().unwrap(), lead_inv, p);
        let shift = r.len() - 1 - dm;
        for (j, &mj) in m.iter().enumerate() {
            r[shift + j] = subm(r[shift + j], mulm(c, mj, p), p);
        }
        trim(&mut r);
    }
    r
}

fn poly_divexact(a: &Poly, m: &Poly, p: u64) -> Poly {
    let mut r = a.clone();
    let dm = m.len() - 1;
    let lead_inv = invm(*m.last().unwrap(), p);
    let mut q = vec![0u64; r.len().saturating_sub(dm)];
    while r.len() > dm && !r.is_empty() {
        let c = mulm(*r.last().unwrap(), lead_inv, p);
        let shift = r.len() - 1 - dm;
        q[shift] = c;
        for (j, &mj) in m.iter().enumerate() {
            r[shift + j] = subm(r[shift + j], mulm(c, mj, p), p);
        }
        trim(&mut r);
    }
    trim(&mut q);
    q
}

fn poly_gcd(a: &Poly, b: &Poly, p: u64) -> Poly {
    let mut x = a.clone();
    let mut y = b.clone();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let li = invm(lead, p);
        for c in x.iter_mut() {
            *c = mulm(*c, li, p);
        }
    }
    x
}

fn poly_powmod(base: &Poly, mut n: u64, m: &Poly, p: u64) -> Poly {
    let mut acc: Poly = vec![1];
    let mut b = poly_rem(base, m, p);
    while n > 0 {
        if n & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &b, p), m, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), m, p);
        n >>= 1;
    }
    acc
}

/// All roots of a polynomial that splits into distinct linear factors over 𝔽_p,
/// or `None` if it does not.
pub fn distinct_roots(f: &Poly, p: u64, rng: &mut impl Rng) -> Option<Vec<u64>> {
    let mut f = f.clone();
    trim(&mut f);
    let deg = f.len().checked_sub(1)?;
    if deg == 0 {
        return Some(Vec::new());
    }
    let xp = poly_powmod(&vec![0, 1], p, &f, p);
    let mut xp_minus_x = xp;
    xp_minus_x.resize(xp_minus_x.len().max(2), 0);
    xp_minus_x[1] = subm(xp_minus_x[1], 1, p);
    trim(&mut xp_minus_x);
    let g = if xp_minus_x.is_empty() { poly_gcd(&f, &f, p) } else { poly_gcd(&f, &xp_minus_x, p) };
    if g.len() - 1 != deg {
        return None;
    }
    let mut roots = Vec::with_capacity(deg);
    let mut stack = vec![g];
    while let Some(h) = stack.pop() {
        match h.len() {
            0 | 1 => {}
            2 => roots.push(subm(0, mulm(h[0], invm(h[1], p), p), p)),
            _ => loop {
                let a = rng.gen_range(0..p);
                let w = poly_powmod(&vec![a, 1], (p - 1) / 2, &h, p);
                let mut w1 = w;
                if w1.is_empty() {
                    w1.push(0);
                }
                w1[0] = subm(w1[0], 1, p);
                trim(&mut w1);
                let d = poly_gcd(&h, &w1, p);
                if d.len() > 1 && d.len() < h.len() {
                    let rest = poly_divexact(&h, &d, p);
                    stack.push(d);
                    stack.push(rest);
                    break;
                }
            },
        }
    }
    roots.sort_unstable();
    let distinct = roots.windows(2).all(|w| w[0] != w[1]);
    (distinct && roots.len() == deg).then_some(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn field_context_properties() {
        let ctx = FieldCtx::new(3 * 64).unwrap();
        assert!(is_prime(ctx.p()));
        assert_eq!((ctx.p() - 1) % 192, 0);
        assert!(ctx.p() > 1 << 30);
        assert_eq!(powm(ctx.z(), 192, ctx.p()), 1);
        assert_ne!(powm(ctx.z(), 96, ctx.p()), 1);
        assert_ne!(powm(ctx.z(), 64, ctx.p()), 1);
        assert_eq!(ctx.root(RootOfUnity::new(4, 1)).unwrap(), powm(ctx.z(), 48, ctx.p()));
        assert_eq!(ctx.log(ctx.root(RootOfUnity::new(8, 3)).unwrap()), Some(72));
        assert!(ctx.root(RootOfUnity::new(256, 1)).is_err());
    }

    #[test]
    fn roots_of_a_product_of_linear_factors() {
        let p = 1_000_000_007u64;
        let want = vec![3u64, 17, 99, 123_456, 999_999_000];
        let mut f: Poly = vec![1];
        for &r in &want {
            f = poly_mul(&f, &vec![subm(0, r, p), 1], p);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(distinct_roots(&f, p, &mut rng).unwrap(), want);
        let sq = poly_mul(&vec![subm(0, 5, p), 1], &vec![subm(0, 5, p), 1], p);
        assert!(distinct_roots(&sq, p, &mut rng).is_none());
        let irreducible = vec![1, 0, 1];
        // x² + 1 is irreducible when p ≡ 3 mod 4.
        assert!(distinct_roots(&irreducible, 1_000_000_007, &mut rng).is_none());
    }
}
