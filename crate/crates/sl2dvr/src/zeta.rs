//! Representation zeta polynomials P_G(X) = Σ_ρ X^{dim ρ} of SL₂(𝔬_r), their
//! primitive parts, and coefficient comparisons across ring families.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chars::{build_named_subgroups, classify_and_census, LinearCharacter, OrbitClass};
use crate::construct::{primitive_spectrum_predict, rows_over, SpectrumMode};
use crate::error::{Error, Result};
use crate::mat2::{congruence_subgroup, group_enumerate, sl2_order, Which, DEFAULT_ENUMERATION_LIMIT};
use crate::oracle::{field_for, CharacterTable, FieldCtx, OracleConfig};
use crate::tdvr::{AdditiveCharacter, Ring, RingDesc, Tower};

/// How a zeta polynomial was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZetaMethod {
    /// Full character table of SL₂(𝔬_r).
    Oracle,
    /// P_{r−1} plus per-orbit primitive spectra.
    Hybrid,
}

/// A degree multiset, stored as dimension ↦ count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaPoly {
    /// How the polynomial was obtained.
    pub method: ZetaMethod,
    /// Positive counts keyed by dimension.
    pub coeffs: BTreeMap<u64, u64>,
}

impl ZetaPoly {
    /// Builds a polynomial from a list of degrees.
    pub fn from_degrees(method: ZetaMethod, degrees: impl IntoIterator<Item = u64>) -> Self {
        let mut coeffs = BTreeMap::new();
        for d in degrees {
            *coeffs.entry(d).or_insert(0) += 1;
        }
        Self { method, coeffs }
    }

    /// Coefficient of X^d.
    pub fn coeff(&self, d: u64) -> u64 {
        self.coeffs.get(&d).copied().unwrap_or(0)
    }

    /// Σ count·dim², which equals |G|.
    pub fn mass(&self) -> u64 {
        self.coeffs.iter().map(|(d, c)| c * d * d).sum()
    }

    /// Σ count, the number of irreducibles.
    pub fn count(&self) -> u64 {
        self.coeffs.values().sum()
    }

    /// Largest dimension.
    pub fn degree(&self) -> u64 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    fn add_degrees(&mut self, dim: u64, count: u64) {
        if count > 0 {
            *self.coeffs.entry(dim).or_insert(0) += count;
        }
    }
}

/// Oracle limits used by the zeta computations.
pub fn oracle_config(max_group_order: u64, seed: u64) -> OracleConfig {
    OracleConfig { max_group_order, max_classes: 1024, seed }
}

/// The character table of SL₂(𝔬_r).
pub fn sl2_table(ring: &Ring, ctx: Arc<FieldCtx>, cfg: &OracleConfig) -> Result<CharacterTable> {
    let order = sl2_order(ring.q() as u64, ring.r());
    if order > cfg.max_group_order {
        return Err(Error::Capacity { what: format!("SL₂({})", ring.desc()), size: order, limit: cfg.max_group_order });
    }
    let g = group_enumerate(ring, Which::Sl2, DEFAULT_ENUMERATION_LIMIT)?;
    CharacterTable::compute(ring, &g, ctx, cfg)
}

/// P_{SL₂(𝔬_r)} from the full character table.
pub fn zeta_oracle(desc: RingDesc, cfg: &OracleConfig) -> Result<ZetaPoly> {
    let ring = Ring::new(desc)?;
    let ctx = Arc::new(field_for(desc)?);
    let t = sl2_table(&ring, ctx, cfg)?;
    let p = ZetaPoly::from_degrees(ZetaMethod::Oracle, t.degrees().iter().copied());
    if p.mass() != t.group().len() as u64 || p.count() != t.classes().count() as u64 {
        return Err(Error::Invariant("character degrees fail the mass or class-count identity".into()));
    }
    Ok(p)
}

/// Irr(SL₂(𝔬_r) | ψ_[A]) computed from C(ψ_[A]) by Clifford induction:
/// each θ ∈ Irr(C(ψ_[A]) | ψ_[A]) gives one ρ of dimension [SL₂ : C(ψ_[A])]·θ(1).
pub fn orbit_spectrum_clifford(orbit: &OrbitClass, tower: &Tower, psi: &AdditiveCharacter, ctx: Arc<FieldCtx>, cfg: &OracleConfig) -> Result<Vec<u64>> {
    let ring = orbit.ring();
    let groups = build_named_subgroups(orbit, tower, psi, DEFAULT_ENUMERATION_LIMIT)?;
    let t = CharacterTable::compute(ring, &groups.stabilizer, ctx.clone(), cfg)?;
    let phi = LinearCharacter::psi_bracket(orbit, psi, groups.k_ell.clone())?.to_modp(&ctx)?;
    let index = sl2_order(ring.q() as u64, ring.r()) / groups.stabilizer.len() as u64;
    Ok(rows_over(&t, &groups.k_ell, &phi)?.into_iter().map(|a| index * t.degrees()[a]).collect())
}

/// Provenance of one orbit's contribution to a hybrid polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HybridPart {
    /// Orbit identifier.
    pub orbit_id: usize,
    /// "predicted" when the closed-form spectrum applied, else "clifford".
    pub source: String,
    /// Dimensions contributed.
    pub dims: Vec<u64>,
}

/// P_{SL₂(𝔬_r)} for odd r as P_{SL₂(𝔬_{r−1})} plus the primitive spectra of
/// all cyclic orbits; closed-form spectra are used where they apply and the
/// Clifford computation on C(ψ_[A]) otherwise.
pub fn zeta_hybrid(desc: RingDesc, psi_alternate: bool, cfg: &OracleConfig) -> Result<(ZetaPoly, Vec<HybridPart>)> {
    if desc.r.is_multiple_of(2) || desc.r < 3 {
        return Err(Error::OutOfRange(format!("hybrid method needs odd r ≥ 3, got r = {}", desc.r)));
    }
    let lower = zeta_oracle(desc.at_level(desc.r - 1)?, cfg)?;
    let tower = Tower::new(desc)?;
    let ring = tower.top().clone();
    let psi = if psi_alternate { AdditiveCharacter::alternate(ring.clone())? } else { AdditiveCharacter::new(ring.clone())? };
    let ctx = Arc::new(field_for(desc)?);
    let census = classify_and_census(&tower)?;
    let mut p = ZetaPoly { method: ZetaMethod::Hybrid, coeffs: lower.coeffs };
    let mut parts = Vec::new();
    for o in &census.cyclic {
        let predicted = primitive_spectrum_predict(o).ok().filter(|s| s.mode == SpectrumMode::Exact);
        let (source, dims) = match predicted {
            Some(s) => ("predicted", s.entries.iter().flat_map(|e| std::iter::repeat_n(e.dim, e.count as usize)).collect()),
            None => ("clifford", orbit_spectrum_clifford(o, &tower, &psi, ctx.clone(), cfg)?),
        };
        for &d in &dims {
            p.add_degrees(d, 1);
        }
        parts.push(HybridPart { orbit_id: o.orbit_id, source: source.into(), dims });
    }
    if p.mass() != sl2_order(desc.q as u64, desc.r) {
        return Err(Error::Invariant(format!("hybrid polynomial has mass {} instead of |SL₂|", p.mass())));
    }
    Ok((p, parts))
}

/// P_r − P_{r−1} coefficient-wise; every coefficient must be non-negative.
pub fn primitive_part(p_r: &ZetaPoly, p_lower: &ZetaPoly) -> Result<ZetaPoly> {
    let mut coeffs = p_r.coeffs.clone();
    for (&d, &c) in &p_lower.coeffs {
        let e = coeffs.entry(d).or_insert(0);
        if *e < c {
            return Err(Error::Invariant(format!("coefficient of X^{d} drops from {c} to {e}")));
        }
        *e -= c;
    }
    coeffs.retain(|_, c| *c > 0);
    Ok(ZetaPoly { method: p_r.method, coeffs })
}

/// One distinguished exponent in a comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetedCoefficient {
    /// Exponent.
    pub exponent: u64,
    /// Left coefficient.
    pub left: u64,
    /// Right coefficient.
    pub right: u64,
}

/// Result of comparing two zeta polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareReport {
    /// Whether the polynomials coincide.
    pub equal: bool,
    /// Every exponent whose coefficients differ, ascending.
    pub differing: Vec<u64>,
    /// Coefficients at (q − 1)q^{2⌊r/2⌋−1} and, for q ≠ 2 and odd r, at (q + 1)q^{2ℓ′−1}.
    pub targeted: Vec<TargetedCoefficient>,
}

/// Compares two polynomials for SL₂ over rings with residue field 𝔽_q at level r.
pub fn compare(left: &ZetaPoly, right: &ZetaPoly, q: u64, r: u32) -> CompareReport {
    let mut exps: Vec<u64> = left.coeffs.keys().chain(right.coeffs.keys()).copied().collect();
    exps.sort_unstable();
    exps.dedup();
    let differing: Vec<u64> = exps.into_iter().filter(|&d| left.coeff(d) != right.coeff(d)).collect();
    let mut targets = Vec::new();
    let half = r / 2;
    if half >= 1 {
        targets.push((q - 1) * q.pow(2 * half - 1));
        if q != 2 && r % 2 == 1 {
            targets.push((q + 1) * q.pow(2 * half - 1));
        }
    }
    let targeted = targets.into_iter().map(|exponent| TargetedCoefficient { exponent, left: left.coeff(exponent), right: right.coeff(exponent) }).collect();
    CompareReport { equal: differing.is_empty(), differing, targeted }
}

/// A character of SL₂(𝔬_r) attributed to the orbit of ψ_[A] it lies over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitiveCharacter {
    /// Row in the table of SL₂(𝔬_r).
    pub row: usize,
    /// Degree.
    pub dim: u64,
    /// Cyclic orbit identifier.
    pub orbit_id: usize,
    /// γ_A of that orbit.
    pub gamma: u64,
}

/// Attributes every character of SL₂(𝔬_r) lying over some ψ_[A] with A
/// cyclic to its orbit by restriction multiplicities to K^ℓ, and checks that
/// these are exactly the characters nontrivial on K^{r−1}.
pub fn primitive_characters(tower: &Tower, psi: &AdditiveCharacter, table: &CharacterTable) -> Result<Vec<PrimitiveCharacter>> {
    let ring = tower.top();
    let r = ring.r();
    let census = classify_and_census(tower)?;
    let ctx = table.ctx();
    let k_top = congruence_subgroup(tower, r - 1, DEFAULT_ENUMERATION_LIMIT)?;
    let mut out = Vec::new();
    let mut attributed = vec![false; table.len()];
    for o in &census.cyclic {
        let k_ell = congruence_subgroup(tower, o.ell(), DEFAULT_ENUMERATION_LIMIT)?;
        let phi = LinearCharacter::psi_bracket(o, psi, k_ell.clone())?.to_modp(ctx)?;
        for row in rows_over(table, &k_ell, &phi)? {
            if attributed[row] {
                return Err(Error::Invariant(format!("character {row} lies over two orbits")));
            }
            attributed[row] = true;
            out.push(PrimitiveCharacter { row, dim: table.degrees()[row], orbit_id: o.orbit_id, gamma: o.gamma() });
        }
    }
    for (row, &att) in attributed.iter().enumerate() {
        let deg = table.degrees()[row] % ctx.p();
        let trivial_on_top = k_top.iter().all(|g| table.value_at(row, &g) == Some(deg));
        if att == trivial_on_top {
            return Err(Error::Invariant(format!("character {row}: orbit attribution disagrees with K^{} triviality", r - 1)));
        }
    }
    out.sort_by_key(|c| c.row);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> OracleConfig {
        oracle_config(1 << 15, 0)
    }

    #[test]
    fn sl2_f2_is_s3() {
        let p = zeta_oracle("2adic:2:1".parse().unwrap(), &cfg()).unwrap();
        assert_eq!(p.coeffs, BTreeMap::from([(1, 2), (2, 1)]));
    }

    #[test]
    fn hybrid_matches_oracle_at_r3() {
        for spec in ["laurent:2:3", "2adic:2:3"] {
            let desc: RingDesc = spec.parse().unwrap();
            let o = zeta_oracle(desc, &cfg()).unwrap();
            let (h, _) = zeta_hybrid(desc, false, &cfg()).unwrap();
            assert_eq!(o.coeffs, h.coeffs, "{spec}");
        }
    }

    #[test]
    fn primitive_part_matches_attribution_at_r3() {
        for spec in ["laurent:2:3", "2adic:2:3"] {
            let desc: RingDesc = spec.parse().unwrap();
            let p3 = zeta_oracle(desc, &cfg()).unwrap();
            let p2 = zeta_oracle(desc.at_level(2).unwrap(), &cfg()).unwrap();
            let pr = primitive_part(&p3, &p2).unwrap();
            let tower = Tower::new(desc).unwrap();
            let ring = tower.top();
            let psi = AdditiveCharacter::new(ring.clone()).unwrap();
            let t = sl2_table(ring, Arc::new(field_for(desc).unwrap()), &cfg()).unwrap();
            let prim = primitive_characters(&tower, &psi, &t).unwrap();
            let attributed = ZetaPoly::from_degrees(ZetaMethod::Oracle, prim.iter().map(|c| c.dim));
            assert_eq!(pr.coeffs, attributed.coeffs, "{spec}");
        }
    }

    #[test]
    fn compare_self_and_z16() {
        let a = zeta_oracle("2adic:2:4".parse().unwrap(), &cfg()).unwrap();
        let b = zeta_oracle("laurent:2:4".parse().unwrap(), &cfg()).unwrap();
        assert!(compare(&a, &a, 2, 4).equal);
        let rep = compare(&a, &b, 2, 4);
        assert!(!rep.equal);
        assert!(rep.differing.contains(&8));
        assert_eq!(a.mass(), 3072);
        assert_eq!(b.mass(), 3072);
    }

    #[test]
    fn z16_primitive_degree_8() {
        let tower = Tower::new("2adic:2:4".parse().unwrap()).unwrap();
        let ring = tower.top();
        let psi = AdditiveCharacter::new(ring.clone()).unwrap();
        let t = sl2_table(ring, Arc::new(field_for(ring.desc()).unwrap()), &cfg()).unwrap();
        let prim = primitive_characters(&tower, &psi, &t).unwrap();
        assert_eq!(prim.iter().filter(|c| c.dim == 8).count(), 6);
        assert!(prim.iter().all(|c| c.dim % c.gamma == 0));
    }
}
