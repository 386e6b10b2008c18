//! The chain of truncations 𝔬_1, …, 𝔬_r of one ring family.

use std::sync::Arc;

use super::ring::{Ring, RingDesc};
use crate::error::{Error, Result};

/// Rings 𝔬_i for 1 ≤ i ≤ r of one family, built once and shared.
#[derive(Debug, Clone)]
pub struct Tower {
    levels: Vec<Arc<Ring>>,
}

impl Tower {
    /// Builds every truncation up to `desc.r`.
    pub fn new(desc: RingDesc) -> Result<Self> {
        let levels = (1..=desc.r)
            .map(|i| desc.at_level(i).and_then(Ring::new).map(Arc::new))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { levels })
    }

    /// The top ring 𝔬_r.
    pub fn top(&self) -> &Arc<Ring> {
        self.levels.last().expect("tower has at least one level")
    }

    /// The truncation 𝔬_i, 1 ≤ i ≤ r.
    pub fn level(&self, i: u32) -> Result<&Arc<Ring>> {
        if i == 0 || i as usize > self.levels.len() {
            return Err(Error::Domain(format!("level {i} outside 1..={}", self.levels.len())));
        }
        Ok(&self.levels[i as usize - 1])
    }

    /// Canonical lifts to 𝔬_r of all elements of 𝔬_i (representatives of 𝔬_r/π^i),
    /// with the convention that i = 0 gives {0}.
    pub fn residue_reps(&self, i: u32) -> Result<Vec<u32>> {
        if i == 0 {
            return Ok(vec![0]);
        }
        let small = self.level(i)?;
        let top = self.top();
        Ok(small.elements().map(|a| top.lift_from(a, small)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_reps_are_a_transversal() {
        for spec in ["2adic:2:5", "eis:2:5:2", "laurent:4:3", "2adic:4:3"] {
            let tower = Tower::new(spec.parse().unwrap()).unwrap();
            let top = tower.top();
            for i in 1..=top.r() {
                let reps = tower.residue_reps(i).unwrap();
                let small = tower.level(i).unwrap();
                let mut images: Vec<u32> = reps.iter().map(|&a| top.reduce_to(a, small)).collect();
                images.sort_unstable();
                images.dedup();
                assert_eq!(images.len() as u32, small.size());
            }
        }
    }
}
