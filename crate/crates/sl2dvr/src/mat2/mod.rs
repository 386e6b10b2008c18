//! 2×2 matrix arithmetic over 𝔬_r, enumeration of GL₂ and SL₂ and their
//! congruence subgroups, centralizers, and commutator subgroups.

mod group;
mod matrix;

pub use group::{commutator_subgroup, product_set, GroupSet, DEFAULT_ENUMERATION_LIMIT};
pub use matrix::{is_cyclic, normalize_cyclic, Mat2, Normalized};

use crate::error::{Error, Result};
use crate::tdvr::{Ring, Tower};

/// Which full linear group to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    /// GL₂(𝔬_r).
    Gl2,
    /// SL₂(𝔬_r).
    Sl2,
}

/// |GL₂(𝔬_r)| = (q² − 1)(q² − q)q^{4(r−1)}.
pub fn gl2_order(q: u64, r: u32) -> u64 {
    (q * q - 1) * (q * q - q) * q.pow(4 * (r - 1))
}

/// |SL₂(𝔬_r)| = (q² − 1)q^{3r−2}.
pub fn sl2_order(q: u64, r: u32) -> u64 {
    (q * q - 1) * q.pow(3 * r - 2)
}

fn guard(ring: &Ring, limit: u64) -> Result<()> {
    let n = (ring.size() as u64).pow(4);
    if n > limit {
        return Err(Error::Capacity { what: format!("GL₂ over {}", ring.desc()), size: n, limit });
    }
    Ok(())
}

/// Enumerates GL₂(𝔬_r) or SL₂(𝔬_r); q^{4r} must not exceed `limit`.
///
/// SL₂ is parametrized directly: for a unit a, d = (1 + bc)/a; otherwise c is
/// a unit and b = (ad − 1)/c.
pub fn group_enumerate(ring: &Ring, which: Which, limit: u64) -> Result<GroupSet> {
    guard(ring, limit)?;
    let n = ring.size();
    let mut keys = Vec::new();
    match which {
        Which::Gl2 => {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        let bc = ring.mul(b, c);
                        for d in 0..n {
                            if ring.is_unit(ring.sub(ring.mul(a, d), bc)) {
                                keys.push(Mat2::new(a, b, c, d).pack());
                            }
                        }
                    }
                }
            }
        }
        Which::Sl2 => {
            for a in 0..n {
                if let Some(ai) = ring.inv(a) {
                    for b in 0..n {
                        for c in 0..n {
                            let d = ring.mul(ring.add(1, ring.mul(b, c)), ai);
                            keys.push(Mat2::new(a, b, c, d).pack());
                        }
                    }
                } else {
                    for c in (0..n).filter(|&c| ring.is_unit(c)) {
                        let ci = ring.inv(c).unwrap();
                        for d in 0..n {
                            let b = ring.mul(ring.sub(ring.mul(a, d), 1), ci);
                            keys.push(Mat2::new(a, b, c, d).pack());
                        }
                    }
                }
            }
        }
    }
    let label = match which {
        Which::Gl2 => format!("GL2({})", ring.desc()),
        Which::Sl2 => format!("SL2({})", ring.desc()),
    };
    Ok(GroupSet::from_keys(label, keys))
}

/// All matrices I + π^i·B, B ranging over representatives of M₂(𝔬_r/π^{r−i}).
fn principal_congruence(tower: &Tower, i: u32) -> Result<Vec<Mat2>> {
    let ring = tower.top();
    let r = ring.r();
    if i > r {
        return Err(Error::Domain(format!("congruence level {i} exceeds r = {r}")));
    }
    let reps = tower.residue_reps(r - i)?;
    let p = ring.pi_pow(i);
    let scaled: Vec<u32> = reps.iter().map(|&x| ring.mul(p, x)).collect();
    let mut out = Vec::with_capacity(scaled.len().pow(4));
    for &a in &scaled {
        for &b in &scaled {
            for &c in &scaled {
                for &d in &scaled {
                    out.push(Mat2::new(ring.add(1, a), b, c, ring.add(1, d)));
                }
            }
        }
    }
    Ok(out)
}

/// The congruence subgroup M^i = ker(GL₂(𝔬_r) → GL₂(𝔬_i)), with M^0 = GL₂(𝔬_r).
pub fn congruence_gl(tower: &Tower, i: u32, limit: u64) -> Result<GroupSet> {
    let ring = tower.top();
    if i == 0 {
        return group_enumerate(ring, Which::Gl2, limit);
    }
    let count = (ring.q() as u64).pow(4 * (ring.r() - i));
    if count > limit {
        return Err(Error::Capacity { what: format!("M^{i}"), size: count, limit });
    }
    Ok(GroupSet::from_matrices(format!("M^{i}"), principal_congruence(tower, i)?))
}

/// The congruence subgroup K^i = ker(SL₂(𝔬_r) → SL₂(𝔬_i)), with K^0 = SL₂(𝔬_r).
pub fn congruence_subgroup(tower: &Tower, i: u32, limit: u64) -> Result<GroupSet> {
    let ring = tower.top();
    if i == 0 {
        return group_enumerate(ring, Which::Sl2, limit);
    }
    let count = (ring.q() as u64).pow(4 * (ring.r() - i));
    if count > limit {
        return Err(Error::Capacity { what: format!("K^{i}"), size: count, limit });
    }
    let elems = principal_congruence(tower, i)?.into_iter().filter(|m| m.det(ring) == 1);
    Ok(GroupSet::from_matrices(format!("K^{i}"), elems))
}

/// The centralizer {xI + yA} ∩ GL₂(𝔬_m) of a cyclic A.
pub fn centralizer_gl(ring: &Ring, a: &Mat2) -> Result<GroupSet> {
    if !is_cyclic(ring, a) {
        return Err(Error::Domain(format!("{} is not cyclic", a.encode(ring))));
    }
    let mut out = Vec::new();
    for x in ring.elements() {
        for y in ring.elements() {
            let m = Mat2::scalar(x).add(ring, &a.scale(ring, y));
            if ring.is_unit(m.det(ring)) {
                out.push(m);
            }
        }
    }
    Ok(GroupSet::from_matrices(format!("C_GL({})", a.encode(ring)), out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower(spec: &str) -> Tower {
        Tower::new(spec.parse().unwrap()).unwrap()
    }

    #[test]
    fn group_orders() {
        for (spec, q) in [("2adic:2:1", 2), ("2adic:2:2", 2), ("laurent:2:3", 2), ("eis:2:3:2", 2), ("laurent:4:1", 4), ("2adic:4:2", 4)] {
            let t = tower(spec);
            let ring = t.top();
            let sl = group_enumerate(ring, Which::Sl2, DEFAULT_ENUMERATION_LIMIT).unwrap();
            assert_eq!(sl.len() as u64, sl2_order(q, ring.r()), "{spec}");
            assert!(sl.iter().all(|m| m.det(ring) == 1));
            if ring.size() <= 8 {
                let gl = group_enumerate(ring, Which::Gl2, DEFAULT_ENUMERATION_LIMIT).unwrap();
                assert_eq!(gl.len() as u64, gl2_order(q, ring.r()), "{spec}");
            }
        }
        let t = tower("2adic:2:4");
        let sl = group_enumerate(t.top(), Which::Sl2, DEFAULT_ENUMERATION_LIMIT).unwrap();
        assert_eq!(sl.len(), 3072);
        sl.verify_group(t.top()).unwrap();
    }

    #[test]
    fn capacity_guard() {
        let ring = Ring::from_spec("2adic:2:8").unwrap();
        assert!(matches!(group_enumerate(&ring, Which::Sl2, 1 << 30), Err(Error::Capacity { .. })));
    }

    #[test]
    fn congruence_subgroups() {
        let t = tower("2adic:2:2");
        let k1 = congruence_subgroup(&t, 1, DEFAULT_ENUMERATION_LIMIT).unwrap();
        assert_eq!(k1.len(), 8);
        let t = tower("laurent:2:3");
        let m2 = congruence_gl(&t, 2, DEFAULT_ENUMERATION_LIMIT).unwrap();
        assert_eq!(m2.len(), 16);
        for (spec, q) in [("laurent:2:4", 2u64), ("eis:2:4:2", 2), ("2adic:4:2", 4)] {
            let t = tower(spec);
            let ring = t.top();
            let g = congruence_subgroup(&t, 0, DEFAULT_ENUMERATION_LIMIT).unwrap();
            for i in 1..=ring.r() {
                let k = congruence_subgroup(&t, i, DEFAULT_ENUMERATION_LIMIT).unwrap();
                assert_eq!(k.len() as u64, q.pow(3 * (ring.r() - i)), "{spec} K^{i}");
                assert!(k.is_normalized_by(ring, &g));
                if i < ring.r() {
                    assert_eq!(g.len() / k.len(), sl2_order(q, i) as usize);
                }
            }
        }
    }

    #[test]
    fn centralizer_orders_by_reduction_type() {
        let ring = Ring::from_spec("2adic:2:2").unwrap();
        // Irreducible: x² + x + 1; split semisimple: diag(0, 1); split non-semisimple: nilpotent.
        let irr = Mat2::new(0, 3, 1, 3);
        let ss = Mat2::new(0, 0, 0, 1);
        let nss = Mat2::new(0, 0, 1, 0);
        assert_eq!(centralizer_gl(&ring, &irr).unwrap().len(), 12);
        assert_eq!(centralizer_gl(&ring, &ss).unwrap().len(), 4);
        assert_eq!(centralizer_gl(&ring, &nss).unwrap().len(), 8);
        assert!(centralizer_gl(&ring, &Mat2::identity()).is_err());
        // Agreement with a brute-force commutation test.
        let gl = group_enumerate(&ring, Which::Gl2, DEFAULT_ENUMERATION_LIMIT).unwrap();
        for a in [irr, ss, nss] {
            let brute = gl.filter("brute", |g| g.mul(&ring, &a) == a.mul(&ring, g));
            assert_eq!(brute, centralizer_gl(&ring, &a).unwrap());
        }
    }

    #[test]
    fn commutators() {
        let t = tower("2adic:2:1");
        let ring = t.top();
        let g = group_enumerate(ring, Which::Sl2, DEFAULT_ENUMERATION_LIMIT).unwrap();
        let c = commutator_subgroup(ring, &g, &g, 1 << 20).unwrap();
        assert_eq!(c.len(), 3);
        let t = tower("2adic:2:3");
        let ring = t.top();
        let k1 = congruence_subgroup(&t, 1, 1 << 20).unwrap();
        let k2 = congruence_subgroup(&t, 2, 1 << 20).unwrap();
        let c = commutator_subgroup(ring, &k1, &k1, 1 << 20).unwrap();
        assert!(c.is_subset_of(&k2));
        let ab = congruence_subgroup(&t, 2, 1 << 20).unwrap();
        assert_eq!(commutator_subgroup(ring, &ab, &ab, 1 << 20).unwrap().len(), 1);
    }

    #[test]
    fn normalization() {
        let t = tower("laurent:2:1");
        let ring = t.top();
        let sl = group_enumerate(ring, Which::Sl2, DEFAULT_ENUMERATION_LIMIT).unwrap();
        let a = Mat2::new(1, 1, 0, 0);
        let n = normalize_cyclic(ring, &sl, &a).unwrap();
        let gi = n.g.inv(ring).unwrap();
        let b = a.conj_by(ring, &n.g, &gi).add(ring, &Mat2::scalar(n.x));
        let ai = ring.inv(n.a).unwrap();
        assert_eq!(b, Mat2::new(0, ring.mul(ai, n.alpha), n.a, n.beta));
        let t = tower("laurent:2:2");
        let ring = t.top();
        let sl = group_enumerate(ring, Which::Sl2, DEFAULT_ENUMERATION_LIMIT).unwrap();
        let a = Mat2::new(0, 1, 1, 1);
        let n = normalize_cyclic(ring, &sl, &a).unwrap();
        assert_eq!((n.g, n.x, n.a, n.alpha, n.beta), (Mat2::identity(), 0, 1, 1, 1));
    }
}
