//! Enumerated matrix groups with fast membership.

use std::collections::HashSet;
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::matrix::Mat2;
use crate::error::{Error, Result};
use crate::tdvr::Ring;

/// Default bound on the size of any enumerated set of matrices.
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 1 << 30;

/// A finite group of 2×2 matrices stored as a sorted vector of packed keys.
#[derive(Debug, Clone)]
pub struct GroupSet {
    keys: Vec<u64>,
    gens: OnceLock<Vec<u64>>,
    label: String,
}

impl PartialEq for GroupSet {
    fn eq(&self, other: &Self) -> bool {
        self.keys == other.keys
    }
}

impl Eq for GroupSet {}

impl GroupSet {
    /// Builds a set from arbitrary matrices (deduplicated); group axioms are not checked.
    pub fn from_matrices(label: impl Into<String>, elems: impl IntoIterator<Item = Mat2>) -> Self {
        let mut keys: Vec<u64> = elems.into_iter().map(|m| m.pack()).collect();
        keys.sort_unstable();
        keys.dedup();
        Self { keys, gens: OnceLock::new(), label: label.into() }
    }

    /// Builds a set from packed keys (deduplicated).
    pub fn from_keys(label: impl Into<String>, mut keys: Vec<u64>) -> Self {
        keys.sort_unstable();
        keys.dedup();
        Self { keys, gens: OnceLock::new(), label: label.into() }
    }

    /// The subgroup generated by `gens`, by breadth-first closure.
    pub fn closure(ring: &Ring, label: impl Into<String>, gens: &[Mat2], limit: u64) -> Result<Self> {
        let label = label.into();
        let mut seen: HashSet<u64> = HashSet::new();
        let id = Mat2::identity();
        seen.insert(id.pack());
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = x.mul(ring, g);
                if seen.insert(y.pack()) {
                    if seen.len() as u64 > limit {
                        return Err(Error::Capacity { what: label, size: seen.len() as u64, limit });
                    }
                    frontier.push(y);
                }
            }
        }
        let set = Self::from_keys(label, seen.into_iter().collect());
        let _ = set.gens.set(gens.iter().map(|g| g.pack()).collect());
        Ok(set)
    }

    /// Human-readable name.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Renames the set.
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Order of the group.
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    /// Whether the set is empty (never true for a group).
    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Sorted packed keys.
    pub fn keys(&self) -> &[u64] {
        &self.keys
    }

    /// The i-th element in sorted order.
    pub fn get(&self, i: usize) -> Mat2 {
        Mat2::unpack(self.keys[i])
    }

    /// Elements in sorted order.
    pub fn iter(&self) -> impl Iterator<Item = Mat2> + '_ {
        self.keys.iter().map(|&k| Mat2::unpack(k))
    }

    /// Position of an element, if present.
    #[inline]
    pub fn index_of(&self, m: &Mat2) -> Option<usize> {
        self.keys.binary_search(&m.pack()).ok()
    }

    /// Membership test.
    #[inline]
    pub fn contains(&self, m: &Mat2) -> bool {
        self.index_of(m).is_some()
    }

    /// Whether every element of self lies in `other`.
    pub fn is_subset_of(&self, other: &GroupSet) -> bool {
        self.keys.iter().all(|k| other.keys.binary_search(k).is_ok())
    }

    /// Intersection with another set.
    pub fn intersect(&self, other: &GroupSet, label: impl Into<String>) -> GroupSet {
        let keys = self.keys.iter().copied().filter(|k| other.keys.binary_search(k).is_ok()).collect();
        Self::from_keys(label, keys)
    }

    /// Elements satisfying a predicate.
    pub fn filter(&self, label: impl Into<String>, pred: impl Fn(&Mat2) -> bool) -> GroupSet {
        let keys = self.keys.iter().copied().filter(|&k| pred(&Mat2::unpack(k))).collect();
        Self::from_keys(label, keys)
    }

    /// A generating set, computed once: random elements are added until their
    /// closure is the whole group.
    pub fn generators(&self, ring: &Ring) -> Vec<Mat2> {
        self.gens
            .get_or_init(|| {
                let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
                let mut order: Vec<u64> = self.keys.clone();
                order.shuffle(&mut rng);
                let mut gens: Vec<u64> = Vec::new();
                let mut inside = vec![false; self.keys.len()];
                let mut count = 0usize;
                for cand in order {
                    if count == self.keys.len() {
                        break;
                    }
                    let idx = self.keys.binary_search(&cand).unwrap();
                    if inside[idx] {
                        continue;
                    }
                    gens.push(cand);
                    let gm: Vec<Mat2> = gens.iter().map(|&k| Mat2::unpack(k)).collect();
                    inside.iter_mut().for_each(|b| *b = false);
                    let id = self.index_of(&Mat2::identity()).expect("identity in group");
                    inside[id] = true;
                    count = 1;
                    let mut frontier = vec![Mat2::identity()];
                    while let Some(x) = frontier.pop() {
                        for g in &gm {
                            let y = x.mul(ring, g);
                            let j = self.index_of(&y).expect("set is closed under products");
                            if !inside[j] {
                                inside[j] = true;
                                count += 1;
                                frontier.push(y);
                            }
                        }
                    }
                }
                gens
            })
            .iter()
            .map(|&k| Mat2::unpack(k))
            .collect()
    }

    /// Checks the group axioms: identity, closure under products and inverses.
    ///
    /// Closure is checked as x·g for all x and all g in a generating set, plus
    /// inverses of all elements; together with finiteness this is sufficient.
    pub fn verify_group(&self, ring: &Ring) -> Result<()> {
        if !self.contains(&Mat2::identity()) {
            return Err(Error::Invariant(format!("{} lacks the identity", self.label)));
        }
        for x in self.iter() {
            let xi = x.inv(ring).ok_or_else(|| Error::Invariant(format!("{} has a singular element", self.label)))?;
            if !self.contains(&xi) {
                return Err(Error::Invariant(format!("{} is not closed under inverses", self.label)));
            }
        }
        // Products with every element would be quadratic; use a full product
        // check on small sets and a generator-based check otherwise.
        if self.len() <= 512 {
            for x in self.iter() {
                for y in self.iter() {
                    if !self.contains(&x.mul(ring, &y)) {
                        return Err(Error::Invariant(format!("{} is not closed under products", self.label)));
                    }
                }
            }
            return Ok(());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
        for _ in 0..64 {
            let x = self.get(rand::Rng::gen_range(&mut rng, 0..self.len()));
            for y in self.iter() {
                if !self.contains(&x.mul(ring, &y)) {
                    return Err(Error::Invariant(format!("{} is not closed under products", self.label)));
                }
            }
        }
        Ok(())
    }

    /// Whether self is normalized by every element of `by`.
    pub fn is_normalized_by(&self, ring: &Ring, by: &GroupSet) -> bool {
        let gens = self.generators(ring);
        by.generators(ring).iter().all(|g| {
            let gi = g.inv(ring).unwrap();
            gens.iter().all(|x| self.contains(&x.conj_by(ring, g, &gi)))
        })
    }
}

/// All products x·y with x ∈ xs and y ∈ ys, as a set.
pub fn product_set(ring: &Ring, label: impl Into<String>, xs: &GroupSet, ys: &GroupSet) -> GroupSet {
    let mut keys = Vec::with_capacity(xs.len() * ys.len());
    for x in xs.iter() {
        for y in ys.iter() {
            keys.push(x.mul(ring, &y).pack());
        }
    }
    GroupSet::from_keys(label, keys)
}

/// The subgroup [G, H] generated by all commutators [g, h], g ∈ G, h ∈ H.
///
/// Computed as the normal closure in ⟨G, H⟩ of the commutators of generators.
pub fn commutator_subgroup(ring: &Ring, g: &GroupSet, h: &GroupSet, limit: u64) -> Result<GroupSet> {
    let ggens = g.generators(ring);
    let hgens = h.generators(ring);
    let ambient: Vec<Mat2> = ggens.iter().chain(hgens.iter()).copied().collect();
    let mut gens: Vec<Mat2> = Vec::new();
    for x in &ggens {
        for y in &hgens {
            let c = x.commutator(ring, y);
            if c != Mat2::identity() {
                gens.push(c);
            }
        }
    }
    let label = format!("[{}, {}]", g.label(), h.label());
    let mut current = GroupSet::closure(ring, label.clone(), &gens, limit)?;
    loop {
        let mut extra = Vec::new();
        for u in &ambient {
            let ui = u.inv(ring).unwrap();
            for x in &gens {
                let c = x.conj_by(ring, u, &ui);
                if !current.contains(&c) && !extra.contains(&c) {
                    extra.push(c);
                }
            }
        }
        if extra.is_empty() {
            return Ok(current);
        }
        gens.extend(extra);
        current = GroupSet::closure(ring, label.clone(), &gens, limit)?;
    }
}
