//! Dixon–Schneider character tables modulo a prime.
//!
//! A random linear combination B of the class matrices is reduced to upper
//! Hessenberg form, its eigenvalues are found by Cantor–Zassenhaus, and each
//! one-dimensional eigenspace yields the central character ω_χ. Degrees follow
//! from χ(1)² = |G| / Σ_K ω_χ(K)ω_χ(K⁻¹)/|K|, which is an exact integer.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::classes::{conjugacy_classes, Classes};
use super::modp::{addm, distinct_roots, invm, mulm, subm, FieldCtx, Poly};
use crate::error::{Error, Result};
use crate::mat2::{GroupSet, Mat2};
use crate::tdvr::Ring;

/// Capacity and randomness settings of the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest group order accepted.
    pub max_group_order: u64,
    /// Largest number of classes accepted.
    pub max_classes: usize,
    /// Seed for the random class-sum combination.
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { max_group_order: 32768, max_classes: 1024, seed: 0 }
    }
}

/// A complete character table with values reduced modulo p.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    ctx: Arc<FieldCtx>,
    group: GroupSet,
    classes: Classes,
    degrees: Vec<u64>,
    values: Vec<Vec<u64>>,
    exponent: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn hessenberg(mut h: Vec<Vec<u64>>, p: u64) -> (Vec<Vec<u64>>, Vec<Vec<u64>>) {
    let n = h.len();
    let mut s: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect();
    for k in 0..n.saturating_sub(2) {
        let Some(piv) = (k + 1..n).find(|&i| h[i][k] != 0) else { continue };
        if piv != k + 1 {
            h.swap(piv, k + 1);
            for row in h.iter_mut() {
                row.swap(piv, k + 1);
            }
            for row in s.iter_mut() {
                row.swap(piv, k + 1);
            }
        }
        let piv_inv = invm(h[k + 1][k], p);
        for i in k + 2..n {
            if h[i][k] == 0 {
                continue;
            }
            let f = mulm(h[i][k], piv_inv, p);
            let (top, bottom) = h.split_at_mut(i);
            let src = &top[k + 1];
            let dst = &mut bottom[0];
            for j in 0..n {
                if src[j] != 0 {
                    dst[j] = subm(dst[j], mulm(f, src[j], p), p);
                }
            }
            for row in h.iter_mut() {
                if row[i] != 0 {
                    row[k + 1] = addm(row[k + 1], mulm(f, row[i], p), p);
                }
            }
            for row in s.iter_mut() {
                if row[i] != 0 {
                    row[k + 1] = addm(row[k + 1], mulm(f, row[i], p), p);
                }
            }
        }
    }
    (h, s)
}

fn hessenberg_charpoly(h: &[Vec<u64>], p: u64) -> Poly {
    let n = h.len();
    let mut polys: Vec<Poly> = vec![vec![1]];
    for k in 1..=n {
        let prev = &polys[k - 1];
        let mut pk = vec![0u64; k + 1];
        for (d, &c) in prev.iter().enumerate() {
            pk[d + 1] = addm(pk[d + 1], c, p);
            pk[d] = subm(pk[d], mulm(h[k - 1][k - 1], c, p), p);
        }
        let mut t = 1u64;
        for i in (1..k).rev() {
            t = mulm(t, h[i][i - 1], p);
            let coef = mulm(h[i - 1][k - 1], t, p);
            if coef == 0 {
                continue;
            }
            for (d, &c) in polys[i - 1].iter().enumerate() {
                pk[d] = subm(pk[d], mulm(coef, c, p), p);
            }
        }
        polys.push(pk);
    }
    polys.pop().unwrap()
}

fn hessenberg_eigvec(h: &[Vec<u64>], lambda: u64, p: u64) -> Option<Vec<u64>> {
    let n = h.len();
    let mut v = vec![0u64; n];
    v[n - 1] = 1;
    for m in (1..n).rev() {
        let sub = h[m][m - 1];
        if sub == 0 {
            return None;
        }
        let mut acc = 0u64;
        for j in m..n {
            let coeff = if j == m { subm(h[m][j], lambda, p) } else { h[m][j] };
            acc = addm(acc, mulm(coeff, v[j], p), p);
        }
        v[m - 1] = mulm(subm(0, acc, p), invm(sub, p), p);
    }
    let mut row0 = 0u64;
    for j in 0..n {
        let coeff = if j == 0 { subm(h[0][0], lambda, p) } else { h[0][j] };
        row0 = addm(row0, mulm(coeff, v[j], p), p);
    }
    (row0 == 0).then_some(v)
}

fn isqrt_exact(n: u64) -> Option<u64> {
    let r = (n as f64).sqrt().round() as u64;
    (r.saturating_sub(1)..=r + 1).find(|&x| x * x == n)
}

impl CharacterTable {
    /// Computes the table of `group` over the shared field context.
    pub fn compute(ring: &Ring, group: &GroupSet, ctx: Arc<FieldCtx>, cfg: &OracleConfig) -> Result<Self> {
        let classes = conjugacy_classes(ring, group, cfg.max_group_order)?;
        let h = classes.count();
        if h > cfg.max_classes {
            return Err(Error::Capacity { what: format!("classes of {}", group.label()), size: h as u64, limit: cfg.max_classes as u64 });
        }
        let exponent = (0..h).map(|c| classes.rep_order(c)).fold(1u64, |a, b| a / gcd(a, b) * b);
        if !ctx.order().is_multiple_of(exponent) {
            return Err(Error::Config(format!("group exponent {exponent} does not divide {}", ctx.order())));
        }
        let p = ctx.p();
        let n = group.len();
        // Products x⁻¹·g_k for all x and class representatives g_k, as class indices.
        let mut prod_class = vec![0u32; n * h];
        for k in 0..h {
            let gk = group.get(classes.rep(k));
            for xi in 0..n {
                let xinv = group.get(classes.inverse_index(xi));
                let y = xinv.mul(ring, &gk);
                let j = group.index_of(&y).ok_or_else(|| Error::Invariant(format!("{} not closed", group.label())))?;
                prod_class[k * n + xi] = classes.class_of_index(j) as u32;
            }
        }
        for attempt in 0..16u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9e37_79b9).wrapping_add(attempt));
            let coeffs: Vec<u64> = (0..h).map(|_| rng.gen_range(1..p)).collect();
            let mut b = vec![vec![0u64; h]; h];
            for k in 0..h {
                for xi in 0..n {
                    let l = prod_class[k * n + xi] as usize;
                    b[l][k] = addm(b[l][k], coeffs[classes.class_of_index(xi)], p);
                }
            }
            let (hm, s) = hessenberg(b.clone(), p);
            let f = hessenberg_charpoly(&hm, p);
            let Some(roots) = distinct_roots(&f, p, &mut rng) else { continue };
            let mut omegas = Vec::with_capacity(h);
            let mut ok = true;
            for &lambda in &roots {
                let Some(v) = hessenberg_eigvec(&hm, lambda, p) else {
                    ok = false;
                    break;
                };
                let w: Vec<u64> = (0..h).map(|i| (0..h).fold(0, |acc, j| addm(acc, mulm(s[i][j], v[j], p), p))).collect();
                if w[0] == 0 {
                    ok = false;
                    break;
                }
                let w0i = invm(w[0], p);
                let w: Vec<u64> = w.iter().map(|&x| mulm(x, w0i, p)).collect();
                for i in 0..h {
                    let bw = (0..h).fold(0, |acc, j| addm(acc, mulm(b[i][j], w[j], p), p));
                    if bw != mulm(lambda, w[i], p) {
                        return Err(Error::Internal("eigenvector check failed".into()));
                    }
                }
                omegas.push(w);
            }
            if !ok {
                continue;
            }
            let table = Self::from_central_characters(ctx.clone(), group.clone(), classes, omegas, exponent)?;
            return Ok(table);
        }
        Err(Error::Internal(format!("Dixon–Schneider did not separate the characters of {}", group.label())))
    }

    fn from_central_characters(ctx: Arc<FieldCtx>, group: GroupSet, classes: Classes, omegas: Vec<Vec<u64>>, exponent: u64) -> Result<Self> {
        let p = ctx.p();
        let h = classes.count();
        let order = group.len() as u64;
        let mut rows: Vec<(u64, Vec<u64>)> = Vec::with_capacity(h);
        for w in omegas {
            let mut s = 0u64;
            for k in 0..h {
                let term = mulm(mulm(w[k], w[classes.inverse_class(k)], p), invm(classes.size(k) % p, p), p);
                s = addm(s, term, p);
            }
            if s == 0 {
                return Err(Error::Internal("degenerate central character".into()));
            }
            let d2 = mulm(order % p, invm(s, p), p);
            let d = isqrt_exact(d2).filter(|&d| d >= 1 && d * d <= order).ok_or_else(|| Error::Internal(format!("degree² = {d2} is not a square")))?;
            let vals: Vec<u64> = (0..h).map(|k| mulm(mulm(w[k], d, p), invm(classes.size(k) % p, p), p)).collect();
            rows.push((d, vals));
        }
        rows.sort();
        let degrees = rows.iter().map(|r| r.0).collect();
        let values = rows.into_iter().map(|r| r.1).collect();
        let table = Self { ctx, group, classes, degrees, values, exponent };
        table.check_orthogonality()?;
        Ok(table)
    }

    fn check_orthogonality(&self) -> Result<()> {
        let p = self.ctx.p();
        let h = self.classes.count();
        let order = self.group.len() as u64;
        let sum_sq: u64 = self.degrees.iter().map(|d| d * d).sum();
        if sum_sq != order || self.degrees.len() != h {
            return Err(Error::Invariant(format!("Σ d² = {sum_sq} for |G| = {order}")));
        }
        for a in 0..h {
            for b in 0..h {
                let mut s = 0u64;
                for k in 0..h {
                    let t = mulm(self.values[a][k], self.values[b][self.classes.inverse_class(k)], p);
                    s = addm(s, mulm(t, self.classes.size(k) % p, p), p);
                }
                let expect = if a == b { order % p } else { 0 };
                if s != expect {
                    return Err(Error::Invariant("row orthogonality fails".into()));
                }
            }
        }
        for k in 0..h {
            for l in 0..h {
                let mut s = 0u64;
                for a in 0..h {
                    s = addm(s, mulm(self.values[a][k], self.values[a][self.classes.inverse_class(l)], p), p);
                }
                let expect = if k == l { mulm(order % p, invm(self.classes.size(k) % p, p), p) } else { 0 };
                if s != expect {
                    return Err(Error::Invariant("column orthogonality fails".into()));
                }
            }
        }
        Ok(())
    }

    /// The field context shared with other tables of the same ring.
    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    /// The group.
    pub fn group(&self) -> &GroupSet {
        &self.group
    }

    /// The class partition.
    pub fn classes(&self) -> &Classes {
        &self.classes
    }

    /// Degrees, sorted ascending with the rows.
    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// Number of irreducible characters.
    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    /// Whether the table is empty (never for a group).
    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Exponent of the group.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// χ_a on class k, modulo p.
    pub fn value(&self, a: usize, k: usize) -> u64 {
        self.values[a][k]
    }

    /// Row a (values per class).
    pub fn row(&self, a: usize) -> &[u64] {
        &self.values[a]
    }

    /// χ_a(g) for a group element g.
    pub fn value_at(&self, a: usize, g: &Mat2) -> Option<u64> {
        let i = self.group.index_of(g)?;
        Some(self.values[a][self.classes.class_of_index(i)])
    }

    /// Class index of a group element.
    pub fn class_of(&self, g: &Mat2) -> Option<usize> {
        self.group.index_of(g).map(|i| self.classes.class_of_index(i))
    }

    /// Values of χ_a on every element of `set` (a subset of the group), in sorted order.
    pub fn row_on(&self, a: usize, set: &GroupSet) -> Result<Vec<u64>> {
        set.iter()
            .map(|g| self.value_at(a, &g).ok_or_else(|| Error::Domain(format!("element outside {}", self.group.label()))))
            .collect()
    }

    /// ⟨χ_a|_N, φ⟩ for φ given by its values (mod p) on the elements of N in sorted order.
    pub fn restriction_multiplicity(&self, a: usize, n: &GroupSet, phi: &[u64]) -> Result<u64> {
        inner_product(&self.ctx, &self.row_on(a, n)?, phi, self.group.len() as u64)
    }

    /// Degree-one rows whose restriction to `k` equals `target` (values on `k` in sorted order).
    pub fn linear_chars_over(&self, k: &GroupSet, target: &[u64]) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            if self.degrees[a] != 1 {
                continue;
            }
            if self.row_on(a, k)? == target {
                out.push(a);
            }
        }
        Ok(out)
    }

    /// Exponent e with χ_a(g) = z^e, for a linear character χ_a.
    pub fn linear_exponent(&self, a: usize, g: &Mat2) -> Result<u64> {
        let v = self.value_at(a, g).ok_or_else(|| Error::Domain("element outside group".into()))?;
        self.ctx.log(v).ok_or_else(|| Error::Domain("value is not a root of unity of order dividing L".into()))
    }
}

/// (1/|N|) Σ_n f(n)·g(n)⁻¹ for class functions on N given as value lists of
/// roots-of-unity sums; `g` must consist of roots of unity. The result must be
/// an integer not exceeding `bound`.
pub fn inner_product(ctx: &FieldCtx, f: &[u64], g: &[u64], bound: u64) -> Result<u64> {
    let p = ctx.p();
    if f.len() != g.len() || f.is_empty() {
        return Err(Error::Domain("class functions on different sets".into()));
    }
    let l = ctx.order();
    let mut s = 0u64;
    for (&x, &y) in f.iter().zip(g) {
        let k = ctx.log(y).ok_or_else(|| Error::Domain("φ value is not a root of unity of order dividing L".into()))?;
        let yinv = super::modp::powm(ctx.z(), (l - k) % l, p);
        s = addm(s, mulm(x, yinv, p), p);
    }
    let m = mulm(s, invm(f.len() as u64 % p, p), p);
    if m > bound {
        return Err(Error::Invariant(format!("multiplicity residue {m} is not a small integer")));
    }
    Ok(m)
}

/// ⟨θ, χ|_H⟩ for θ ∈ Irr(H) from `sub` and χ ∈ Irr(G) from `sup`, H ≤ G.
pub fn restriction_between(sup: &CharacterTable, chi: usize, sub: &CharacterTable, theta: usize) -> Result<u64> {
    let p = sup.ctx.p();
    let h = sub.classes.count();
    let mut s = 0u64;
    for k in 0..h {
        let g = sub.group.get(sub.classes.rep(k));
        let x = sup.value_at(chi, &g).ok_or_else(|| Error::Domain("subgroup not contained in group".into()))?;
        let y = sub.values[theta][sub.classes.inverse_class(k)];
        s = addm(s, mulm(mulm(x, y, p), sub.classes.size(k) % p, p), p);
    }
    let m = mulm(s, invm(sub.group.len() as u64 % p, p), p);
    if m > sup.group.len() as u64 {
        return Err(Error::Invariant(format!("multiplicity residue {m} is not a small integer")));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat2::{congruence_subgroup, group_enumerate, Which, DEFAULT_ENUMERATION_LIMIT};
    use crate::tdvr::Tower;

    fn ctx_for(ring: &Ring) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(super::super::field_order(ring.desc())).unwrap())
    }

    #[test]
    fn s3_table() {
        let ring = Ring::from_spec("2adic:2:1").unwrap();
        let g = group_enumerate(&ring, Which::Sl2, DEFAULT_ENUMERATION_LIMIT).unwrap();
        let t = CharacterTable::compute(&ring, &g, ctx_for(&ring), &OracleConfig::default()).unwrap();
        assert_eq!(t.degrees(), &[1, 1, 2]);
    }

    #[test]
    fn sl2_z16_mass_and_seed_independence() {
        let ring = Ring::from_spec("2adic:2:4").unwrap();
        let g = group_enumerate(&ring, Which::Sl2, DEFAULT_ENUMERATION_LIMIT).unwrap();
        let ctx = ctx_for(&ring);
        let t1 = CharacterTable::compute(&ring, &g, ctx.clone(), &OracleConfig::default()).unwrap();
        let t2 = CharacterTable::compute(&ring, &g, ctx, &OracleConfig { seed: 99, ..OracleConfig::default() }).unwrap();
        assert_eq!(t1.degrees().iter().map(|d| d * d).sum::<u64>(), 3072);
        assert_eq!(t1.degrees(), t2.degrees());
        assert_eq!(t1.values, t2.values);
    }

    #[test]
    fn abelian_subgroup_has_linear_characters_only() {
        let tower = Tower::new("laurent:2:4".parse().unwrap()).unwrap();
        let ring = tower.top();
        let k2 = congruence_subgroup(&tower, 2, DEFAULT_ENUMERATION_LIMIT).unwrap();
        let t = CharacterTable::compute(ring, &k2, ctx_for(ring), &OracleConfig::default()).unwrap();
        assert!(t.degrees().iter().all(|&d| d == 1));
        assert_eq!(t.len(), k2.len());
    }

    #[test]
    fn trivial_restriction_multiplicity() {
        let ring = Ring::from_spec("laurent:2:2").unwrap();
        let g = group_enumerate(&ring, Which::Sl2, DEFAULT_ENUMERATION_LIMIT).unwrap();
        let t = CharacterTable::compute(&ring, &g, ctx_for(&ring), &OracleConfig::default()).unwrap();
        let ones = vec![1u64; g.len()];
        let trivial = (0..t.len()).find(|&a| t.row(a).iter().all(|&v| v == 1)).unwrap();
        assert_eq!(t.restriction_multiplicity(trivial, &g, &ones).unwrap(), 1);
        let total: u64 = (0..t.len()).map(|a| t.restriction_multiplicity(a, &g, &ones).unwrap()).sum();
        assert_eq!(total, 1);
    }
}
