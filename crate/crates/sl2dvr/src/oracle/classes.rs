//! Conjugacy classes of an enumerated matrix group.

use crate::error::{Error, Result};
use crate::mat2::{GroupSet, Mat2};
use crate::tdvr::Ring;

/// The class partition of a group.
#[derive(Debug, Clone)]
pub struct Classes {
    class_of: Vec<u32>,
    reps: Vec<usize>,
    sizes: Vec<u64>,
    inverse: Vec<u32>,
    rep_orders: Vec<u64>,
    elem_inv: Vec<u32>,
}

impl Classes {
    /// Class of the element at sorted position `i`.
    #[inline]
    pub fn class_of_index(&self, i: usize) -> usize {
        self.class_of[i] as usize
    }

    /// Number of classes.
    pub fn count(&self) -> usize {
        self.reps.len()
    }

    /// Sorted position of the representative of class `c`.
    pub fn rep(&self, c: usize) -> usize {
        self.reps[c]
    }

    /// Size of class `c`.
    pub fn size(&self, c: usize) -> u64 {
        self.sizes[c]
    }

    /// All class sizes.
    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    /// Class containing the inverses of class `c`.
    pub fn inverse_class(&self, c: usize) -> usize {
        self.inverse[c] as usize
    }

    /// Element order of the representatives of class `c`.
    pub fn rep_order(&self, c: usize) -> u64 {
        self.rep_orders[c]
    }

    /// Sorted position of the inverse of the element at position `i`.
    #[inline]
    pub fn inverse_index(&self, i: usize) -> usize {
        self.elem_inv[i] as usize
    }
}

fn order_of(ring: &Ring, g: &Mat2) -> u64 {
    let id = Mat2::identity();
    let mut x = *g;
    let mut n = 1;
    while x != id {
        x = x.mul(ring, g);
        n += 1;
    }
    n
}

/// Computes the classes of `group` by breadth-first conjugation with a
/// generating set. The identity class is class 0; the others follow in order of
/// their least element.
pub fn conjugacy_classes(ring: &Ring, group: &GroupSet, max_order: u64) -> Result<Classes> {
    if group.len() as u64 > max_order {
        return Err(Error::Capacity { what: format!("classes of {}", group.label()), size: group.len() as u64, limit: max_order });
    }
    let gens = group.generators(ring);
    let gens_inv: Vec<Mat2> = gens.iter().map(|g| g.inv(ring).expect("group element")).collect();
    let n = group.len();
    let mut raw = vec![u32::MAX; n];
    let mut nclasses = 0u32;
    for start in 0..n {
        if raw[start] != u32::MAX {
            continue;
        }
        raw[start] = nclasses;
        let mut frontier = vec![group.get(start)];
        while let Some(x) = frontier.pop() {
            for (g, gi) in gens.iter().zip(&gens_inv) {
                let y = x.conj_by(ring, g, gi);
                let j = group.index_of(&y).ok_or_else(|| Error::Invariant(format!("{} is not closed under conjugation", group.label())))?;
                if raw[j] == u32::MAX {
                    raw[j] = nclasses;
                    frontier.push(y);
                }
            }
        }
        nclasses += 1;
    }
    // Relabel: identity first, then by least element (first occurrence in sorted order).
    let id_idx = group.index_of(&Mat2::identity()).ok_or_else(|| Error::Invariant("group lacks identity".into()))?;
    let mut relabel = vec![u32::MAX; nclasses as usize];
    relabel[raw[id_idx] as usize] = 0;
    let mut next = 1u32;
    let mut reps = vec![0usize; nclasses as usize];
    reps[0] = id_idx;
    for (i, &c) in raw.iter().enumerate() {
        if relabel[c as usize] == u32::MAX {
            relabel[c as usize] = next;
            reps[next as usize] = i;
            next += 1;
        }
    }
    let class_of: Vec<u32> = raw.iter().map(|&c| relabel[c as usize]).collect();
    let mut sizes = vec![0u64; nclasses as usize];
    for &c in &class_of {
        sizes[c as usize] += 1;
    }
    let elem_inv: Vec<u32> = group
        .iter()
        .map(|x| group.index_of(&x.inv(ring).expect("group element")).expect("closed under inverses") as u32)
        .collect();
    let inverse: Vec<u32> = reps.iter().map(|&i| class_of[elem_inv[i] as usize]).collect();
    let rep_orders = reps.iter().map(|&i| order_of(ring, &group.get(i))).collect();
    Ok(Classes { class_of, reps, sizes, inverse, rep_orders, elem_inv })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat2::{group_enumerate, Which, DEFAULT_ENUMERATION_LIMIT};

    #[test]
    fn sl2_f2_is_s3() {
        let ring = Ring::from_spec("2adic:2:1").unwrap();
        let g = group_enumerate(&ring, Which::Sl2, DEFAULT_ENUMERATION_LIMIT).unwrap();
        let c = conjugacy_classes(&ring, &g, 1 << 15).unwrap();
        let mut sizes = c.sizes().to_vec();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(c.size(0), 1);
    }

    #[test]
    fn class_size_times_centralizer_is_group_order() {
        let ring = Ring::from_spec("laurent:2:3").unwrap();
        let g = group_enumerate(&ring, Which::Sl2, DEFAULT_ENUMERATION_LIMIT).unwrap();
        let c = conjugacy_classes(&ring, &g, 1 << 15).unwrap();
        assert_eq!(c.sizes().iter().sum::<u64>(), g.len() as u64);
        for k in 0..c.count() {
            let x = g.get(c.rep(k));
            let cent = g.iter().filter(|y| y.mul(&ring, &x) == x.mul(&ring, y)).count() as u64;
            assert_eq!(cent * c.size(k), g.len() as u64);
        }
    }
}
