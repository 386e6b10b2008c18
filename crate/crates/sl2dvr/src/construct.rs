//! Clifford-theoretic predictions: primitive degree spectra per orbit, the
//! spectra of Irr(C_S^{ℓ′}(Ã) | φ), radicals of commutator forms, the quartic
//! root counts Δ_φ, and oracle verification of the stabilizer structure.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chars::{LinearCharacter, NamedSubgroups, OrbitClass, ReductionType};
use crate::error::{Error, Result};
use crate::extsets::ExtensionSets;
use crate::mat2::{sl2_order, GroupSet, Mat2};
use crate::oracle::{restriction_between, CharacterTable, FieldCtx, OracleConfig};
use crate::tdvr::{AdditiveCharacter, Fq, Ring, RingKind};

/// One (dimension, count) pair of a degree spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpectrumEntry {
    /// Dimension.
    pub dim: u64,
    /// Number of inequivalent irreducibles of that dimension.
    pub count: u64,
}

/// Collects dimensions into ascending (dimension, count) pairs.
pub fn spectrum_of(dims: impl IntoIterator<Item = u64>) -> Vec<SpectrumEntry> {
    let mut m = BTreeMap::new();
    for d in dims {
        *m.entry(d).or_insert(0u64) += 1;
    }
    m.into_iter().map(|(dim, count)| SpectrumEntry { dim, count }).collect()
}

/// Whether a prediction lists exact dimensions or only constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumMode {
    /// Exact (dimension, count) list.
    Exact,
    /// Divisor, upper bound and allowed dimensions only.
    Constrained,
}

/// Predicted spectrum of Irr(SL₂(𝔬_r) | ψ_[A]) for one orbit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumPrediction {
    /// Orbit identifier from the census.
    pub orbit_id: usize,
    /// Reduction type of Ā.
    #[serde(rename = "type")]
    pub rtype: ReductionType,
    /// Exact or constrained.
    pub mode: SpectrumMode,
    /// Exact entries (empty in constrained mode).
    pub entries: Vec<SpectrumEntry>,
    /// γ_A, which divides every dimension.
    pub divisor: u64,
    /// Largest possible dimension.
    pub upper_bound: u64,
    /// Dimensions compatible with the constraints (constrained mode).
    pub allowed: Vec<u64>,
}

impl SpectrumPrediction {
    /// Whether an observed list of dimensions is compatible with the prediction.
    pub fn admits(&self, observed: &[SpectrumEntry]) -> bool {
        match self.mode {
            SpectrumMode::Exact => observed == self.entries.as_slice(),
            SpectrumMode::Constrained => observed.iter().all(|e| self.allowed.binary_search(&e.dim).is_ok()),
        }
    }
}

/// [SL₂(𝔬_r) : K^ℓ].
pub fn index_over_k_ell(q: u64, r: u32) -> u64 {
    let lp = r / 2;
    sl2_order(q, r) / q.pow(3 * lp)
}

/// Predicts the primitive spectrum over the orbit of ψ_[A] for odd r.
///
/// Split semisimple and irreducible orbits give the single dimension
/// (q ± 1)q^{2ℓ′}; the count follows from Σ m_ρ·dim ρ = [SL₂ : K^ℓ] with
/// m_ρ = dim ρ / (orbit size). Split non-semisimple orbits give constraints.
pub fn primitive_spectrum_predict(orbit: &OrbitClass) -> Result<SpectrumPrediction> {
    let desc = orbit.desc();
    let (r, lp) = (desc.r, orbit.ell_prime());
    if r % 2 == 0 {
        return Err(Error::OutOfRange(format!("primitive spectrum prediction needs odd r, got r = {r}")));
    }
    if lp == 0 {
        return Err(Error::OutOfRange("primitive spectrum prediction needs r ≥ 3".into()));
    }
    let q = desc.q as u64;
    let gamma = orbit.gamma();
    let order = sl2_order(q, r);
    let top = (q + 1) * q.pow(2 * lp);
    match orbit.rtype {
        ReductionType::SplitSemisimple | ReductionType::Irreducible => {
            if desc.kind != RingKind::Laurent && lp <= desc.e {
                return Err(Error::OutOfRange(format!("characteristic 0 needs ℓ′ > e; have ℓ′ = {lp}, e = {}", desc.e)));
            }
            let dim = if orbit.rtype == ReductionType::SplitSemisimple { top } else { (q - 1) * q.pow(2 * lp) };
            let mass = orbit.orbit_size as u64 * index_over_k_ell(q, r);
            if !mass.is_multiple_of(dim * dim) {
                return Err(Error::Invariant(format!("orbit mass {mass} is not a multiple of {dim}²")));
            }
            Ok(SpectrumPrediction {
                orbit_id: orbit.orbit_id,
                rtype: orbit.rtype,
                mode: SpectrumMode::Exact,
                entries: vec![SpectrumEntry { dim, count: mass / (dim * dim) }],
                divisor: gamma,
                upper_bound: dim,
                allowed: vec![dim],
            })
        }
        ReductionType::SplitNonSemisimple => {
            let bound = (top - 1).min((q * q - 1) * q.pow(r - 2));
            let allowed = (1..=bound / gamma).map(|m| m * gamma).filter(|d| order.is_multiple_of(*d)).collect();
            Ok(SpectrumPrediction {
                orbit_id: orbit.orbit_id,
                rtype: orbit.rtype,
                mode: SpectrumMode::Constrained,
                entries: Vec::new(),
                divisor: gamma,
                upper_bound: bound,
                allowed,
            })
        }
    }
}

/// Radical of the alternating form h_χ(g₁N, g₂N) = χ([g₁, g₂]) on G/N.
#[derive(Debug, Clone)]
pub struct RadicalReport {
    /// R_χ ⊇ N.
    pub radical: GroupSet,
    /// [G : R_χ], a perfect square.
    pub index: u64,
    /// [G : R_χ]^{1/2}, the dimension of each constituent over χ.
    pub dimension: u64,
}

/// Computes R_χ for a G-stable linear character χ of N ⊴ G with G/N an
/// elementary abelian 2-group. `chi` returns the value of χ in any faithful
/// encoding; only equality of values is used.
pub fn radical_of_form(ring: &Ring, g: &GroupSet, n: &GroupSet, chi: impl Fn(&Mat2) -> Option<u64>) -> Result<RadicalReport> {
    if !n.is_subset_of(g) || !n.is_normalized_by(ring, g) {
        return Err(Error::Domain(format!("{} is not a normal subgroup of {}", n.label(), g.label())));
    }
    let gens = g.generators(ring);
    for (i, x) in gens.iter().enumerate() {
        if !n.contains(&x.mul(ring, x)) || gens[..i].iter().any(|y| !n.contains(&x.commutator(ring, y))) {
            return Err(Error::Domain(format!("{}/{} is not elementary abelian of exponent 2", g.label(), n.label())));
        }
    }
    let one = chi(&Mat2::identity()).ok_or_else(|| Error::Domain("χ undefined at the identity".into()))?;
    for x in &gens {
        let xi = x.inv(ring).expect("group element");
        for m in n.iter() {
            let lhs = chi(&m.conj_by(ring, x, &xi));
            if lhs.is_none() || lhs != chi(&m) {
                return Err(Error::Domain(format!("χ is not stable under {}", g.label())));
            }
        }
    }
    let radical = g.filter(format!("Rad({})", g.label()), |x| gens.iter().all(|y| chi(&x.commutator(ring, y)) == Some(one)));
    let index = (g.len() / radical.len()) as u64;
    let dimension = (index as f64).sqrt().round() as u64;
    if dimension * dimension != index {
        return Err(Error::Invariant(format!("[G : R_χ] = {index} is not a perfect square")));
    }
    Ok(RadicalReport { radical, index, dimension })
}

/// Number of roots in 𝔽_q of ηb²X⁴ + ηc²X² + dX.
pub fn quartic_root_count(k: &Fq, eta: u32, b: u32, c: u32, d: u32) -> usize {
    let c4 = k.mul(eta, k.mul(b, b));
    let c2 = k.mul(eta, k.mul(c, c));
    k.elements()
        .filter(|&x| {
            let x2 = k.mul(x, x);
            let v = k.add(k.add(k.mul(c4, k.mul(x2, x2)), k.mul(c2, x2)), k.mul(d, x));
            v == 0
        })
        .count()
}

/// Whether ηb²X⁴ + ηc²X² + dX and ηd²X⁴ + ηc²X² + bX have equally many roots.
pub fn quartic_symmetry(k: &Fq, eta: u32, b: u32, c: u32, d: u32) -> bool {
    quartic_root_count(k, eta, b, c, d) == quartic_root_count(k, eta, d, c, b)
}

/// Which case of the C_S^{ℓ′} analysis applies to an orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CCase {
    /// 2k − s ≠ ℓ′: one constituent of dimension q.
    Unique,
    /// 2k − s = ℓ′ and s < k: two constituents of dimension q/2.
    Split,
    /// 2k − s = ℓ′ and s ≥ k (so β = 0): Δ_φ² constituents of dimension q/Δ_φ.
    Quartic,
}

/// Determines the case for a characteristic-2 orbit with r odd and trace(A) ∈ π𝔬.
pub fn c_case(orbit: &OrbitClass) -> Result<CCase> {
    let desc = orbit.desc();
    if !desc.is_char2() || desc.r.is_multiple_of(2) || !orbit.trace_in_ideal() {
        return Err(Error::Domain("C_S^{ℓ′} spectra need characteristic 2, odd r and trace(A) ∈ π𝔬".into()));
    }
    let (k, s, lp) = (orbit.k as i64, orbit.s.expect("characteristic 2") as i64, orbit.ell_prime() as i64);
    if 2 * k - s != lp {
        return Ok(CCase::Unique);
    }
    if s < k {
        return Ok(CCase::Split);
    }
    if orbit.beta != 0 || orbit.alpha != 0 {
        return Err(Error::Domain("the quartic case needs the normal form [[0, 0], [a, 0]]".into()));
    }
    Ok(CCase::Quartic)
}

/// Parameters (d, m) of φ on W^{ℓ′} and the root count Δ_φ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WCharParams {
    /// d̄ ∈ 𝔽_q.
    pub d: u32,
    /// m̄ ∈ 𝔽_q.
    pub m: u32,
    /// Δ_φ = #{v ∈ 𝔽_q : ξã²v⁴ + ξm²v² + dv = 0}.
    pub delta: usize,
}

/// I + π^{ℓ′}[[0, 0], [t, 0]], on which φ takes the value ψ(π^{2ℓ′}dt).
pub fn w_lower(orbit: &OrbitClass, t: u32) -> Mat2 {
    let ring = orbit.ring();
    let p = ring.pi_pow(orbit.ell_prime());
    Mat2::new(1, 0, ring.mul(p, t), 1)
}

/// I + π^{ℓ′}[[t, 0], [0, t + π^{ℓ′}t²]], on which φ takes the value ψ(π^{2ℓ′}mt).
pub fn w_diagonal(orbit: &OrbitClass, t: u32) -> Mat2 {
    let ring = orbit.ring();
    let p = ring.pi_pow(orbit.ell_prime());
    let d2 = ring.add(t, ring.mul(p, ring.mul(t, t)));
    Mat2::new(ring.add(1, ring.mul(p, t)), 0, 0, ring.add(1, ring.mul(p, d2)))
}

/// Reads (d̄, m̄) off φ, where `phi` returns φ(g) in the oracle field.
pub fn w_params_from(orbit: &OrbitClass, psi: &AdditiveCharacter, ctx: &FieldCtx, phi: impl Fn(&Mat2) -> Result<u64>) -> Result<WCharParams> {
    let ring = orbit.ring();
    let k = ring.field();
    let top = ring.pi_pow(2 * orbit.ell_prime());
    let find = |elem: &dyn Fn(u32) -> Mat2, what: &str| -> Result<u32> {
        let observed: Vec<u64> = k.elements().map(|t| phi(&elem(ring.teichmuller(t)))).collect::<Result<_>>()?;
        let hits: Vec<u32> = k
            .elements()
            .filter(|&c| {
                k.elements().zip(&observed).all(|(t, &v)| {
                    let arg = ring.mul(top, ring.teichmuller(k.mul(c, t)));
                    ctx.root(psi.eval(arg)).is_ok_and(|w| w == v)
                })
            })
            .collect();
        match hits.as_slice() {
            [c] => Ok(*c),
            _ => Err(Error::Invariant(format!("{} candidates for {what}", hits.len()))),
        }
    };
    let d = find(&|t| w_lower(orbit, t), "d")?;
    let m = find(&|t| w_diagonal(orbit, t), "m")?;
    let a = ring.residue(orbit.a_lift);
    let delta = quartic_root_count(k, psi.xi()?, a, m, d);
    Ok(WCharParams { d, m, delta })
}

/// Predicted spectrum of Irr(C_S^{ℓ′}(Ã) | φ), where `index` is
/// [C_S^{ℓ′}(Ã) : D_S^{ℓ′}(Ã)].
///
/// In the first case φ has a unique constituent φ̂ of dimension q on
/// D_S^{ℓ′}, and φ̂ extends to C_S^{ℓ′}; the extensions differ by the `index`
/// linear characters of the abelian quotient, so the count is `index`.
pub fn c_spectrum_predict(orbit: &OrbitClass, index: u64, params: Option<&WCharParams>) -> Result<Vec<SpectrumEntry>> {
    let q = orbit.desc().q as u64;
    Ok(match c_case(orbit)? {
        CCase::Unique => vec![SpectrumEntry { dim: q, count: index }],
        CCase::Split => vec![SpectrumEntry { dim: q / 2, count: 2 }],
        CCase::Quartic => {
            let p = params.ok_or_else(|| Error::Domain("the quartic case needs the parameters of φ".into()))?;
            let delta = p.delta as u64;
            vec![SpectrumEntry { dim: q / delta, count: delta * delta }]
        }
    })
}

/// Predicted spectrum of Irr(D_S^{ℓ′}(Ã) | φ) in the first two cases.
pub fn d_prime_spectrum_predict(orbit: &OrbitClass) -> Result<Option<Vec<SpectrumEntry>>> {
    let q = orbit.desc().q as u64;
    Ok(match c_case(orbit)? {
        CCase::Unique => Some(vec![SpectrumEntry { dim: q, count: 1 }]),
        CCase::Split => Some(vec![SpectrumEntry { dim: q / 2, count: 2 }]),
        CCase::Quartic => None,
    })
}

/// Rows of `table` lying over the linear character `phi` of `sub`.
pub fn rows_over(table: &CharacterTable, sub: &GroupSet, phi: &[u64]) -> Result<Vec<usize>> {
    let bound = table.group().len() as u64;
    let mut rows = Vec::new();
    for a in 0..table.len() {
        let m = crate::oracle::inner_product(table.ctx(), &table.row_on(a, sub)?, phi, bound)?;
        if m > 0 {
            rows.push(a);
        }
    }
    Ok(rows)
}

/// Oracle tables of the groups used by the C_S^{ℓ′} analysis.
pub struct OrbitTables {
    /// Table of D_S^ℓ.
    pub d_s_ell: CharacterTable,
    /// Table of D_S^{ℓ′}.
    pub d_s_ell_prime: CharacterTable,
    /// Table of C_S^{ℓ′}.
    pub c_s_ell_prime: CharacterTable,
    /// Table of C(ψ_[A]).
    pub stabilizer: CharacterTable,
    /// ψ_[A] on K^ℓ in the oracle field.
    pub psi_bracket: Vec<u64>,
}

impl OrbitTables {
    /// Computes the three tables for an orbit.
    pub fn compute(orbit: &OrbitClass, psi: &AdditiveCharacter, groups: &NamedSubgroups, ctx: Arc<FieldCtx>, cfg: &OracleConfig) -> Result<Self> {
        let ring = orbit.ring();
        let psi_bracket = LinearCharacter::psi_bracket(orbit, psi, groups.k_ell.clone())?.to_modp(&ctx)?;
        Ok(Self {
            d_s_ell: CharacterTable::compute(ring, &groups.d_s_ell, ctx.clone(), cfg)?,
            d_s_ell_prime: CharacterTable::compute(ring, &groups.d_s_ell_prime, ctx.clone(), cfg)?,
            c_s_ell_prime: CharacterTable::compute(ring, &groups.c_s_ell_prime, ctx.clone(), cfg)?,
            stabilizer: CharacterTable::compute(ring, &groups.stabilizer, ctx, cfg)?,
            psi_bracket,
        })
    }
}

/// Predicted against observed spectrum of Irr(C_S^{ℓ′}(Ã) | φ) for one φ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CSpectrumCheck {
    /// Row of φ in the table of D_S^ℓ.
    pub phi: usize,
    /// Case of the analysis.
    pub case: CCase,
    /// Parameters of φ in the quartic case.
    pub params: Option<WCharParams>,
    /// Prediction.
    pub predicted: Vec<SpectrumEntry>,
    /// Oracle spectrum.
    pub observed: Vec<SpectrumEntry>,
    /// Prediction for Irr(D_S^{ℓ′} | φ), when the analysis gives one.
    pub d_prime_predicted: Option<Vec<SpectrumEntry>>,
    /// Oracle spectrum of Irr(D_S^{ℓ′} | φ).
    pub d_prime_observed: Vec<SpectrumEntry>,
}

impl CSpectrumCheck {
    /// Whether prediction and oracle agree.
    pub fn matches(&self) -> bool {
        self.predicted == self.observed && self.d_prime_predicted.as_ref().is_none_or(|p| *p == self.d_prime_observed)
    }
}

/// Compares c_spectrum_predict with the oracle for every φ ∈ Irr(D_S^ℓ | ψ_[A]).
pub fn verify_c_spectra(orbit: &OrbitClass, psi: &AdditiveCharacter, groups: &NamedSubgroups, tables: &OrbitTables) -> Result<Vec<CSpectrumCheck>> {
    let case = c_case(orbit)?;
    let td = &tables.d_s_ell;
    let tdp = &tables.d_s_ell_prime;
    let tc = &tables.c_s_ell_prime;
    let index = (groups.c_s_ell_prime.len() / groups.d_s_ell_prime.len()) as u64;
    let d_prime_predicted = d_prime_spectrum_predict(orbit)?;
    let mut out = Vec::new();
    for phi in rows_over(td, &groups.k_ell, &tables.psi_bracket)? {
        if td.degrees()[phi] != 1 {
            return Err(Error::Invariant(format!("Irr(D_S^ℓ | ψ_[A]) has a member of degree {}", td.degrees()[phi])));
        }
        let params = if case == CCase::Quartic {
            let val = |g: &Mat2| td.value_at(phi, g).ok_or_else(|| Error::Domain(format!("{} is not in D_S^ℓ", g.encode(orbit.ring()))));
            Some(w_params_from(orbit, psi, td.ctx(), val)?)
        } else {
            None
        };
        let predicted = c_spectrum_predict(orbit, index, params.as_ref())?;
        let over = |t: &CharacterTable| -> Result<Vec<SpectrumEntry>> {
            let mut dims = Vec::new();
            for chi in 0..t.len() {
                if restriction_between(t, chi, td, phi)? > 0 {
                    dims.push(t.degrees()[chi]);
                }
            }
            Ok(spectrum_of(dims))
        };
        out.push(CSpectrumCheck {
            phi,
            case,
            params,
            predicted,
            observed: over(tc)?,
            d_prime_predicted: d_prime_predicted.clone(),
            d_prime_observed: over(tdp)?,
        });
    }
    Ok(out)
}

/// Stabilizer data for one ρ ∈ Irr(C_S^{ℓ′}(Ã) | ψ_[A]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerRow {
    /// Row of ρ in the table of C_S^{ℓ′}.
    pub rho: usize,
    /// dim ρ.
    pub dim: u64,
    /// [Stab(ρ) : C_S^{ℓ′}].
    pub stab_index: u64,
    /// Stab(ρ) ⊆ C_S^{ℓ′}·{e_λ : λ ∈ E′}.
    pub inside_c_e_prime: bool,
    /// Every member of Irr(Stab(ρ) | ρ) has dimension dim ρ.
    pub extends: bool,
    /// [C(ψ_[A]) : Stab(ρ)]·dim ρ.
    pub induced_dim: u64,
    /// The induced dimension occurs in Irr(C(ψ_[A]) | ψ_[A]).
    pub induced_in_spectrum: bool,
}

impl StabilizerRow {
    /// Whether all three assertions hold.
    pub fn ok(&self) -> bool {
        self.inside_c_e_prime && self.extends && self.induced_in_spectrum
    }
}

/// Checks the stabilizer description for each ρ ∈ Irr(C_S^{ℓ′} | ψ_[A]).
pub fn verify_stabilizers(orbit: &OrbitClass, groups: &NamedSubgroups, tables: &OrbitTables, eprime: &ExtensionSets, cfg: &OracleConfig) -> Result<Vec<StabilizerRow>> {
    let ring = orbit.ring();
    let tc = &tables.c_s_ell_prime;
    let ts = &tables.stabilizer;
    let cs = &groups.c_s_ell_prime;
    let stab_all = &groups.stabilizer;
    let spectrum: Vec<u64> = rows_over(ts, &groups.k_ell, &tables.psi_bracket)?.into_iter().map(|a| ts.degrees()[a]).collect();
    let e_inv: Vec<Mat2> = eprime.e_prime.iter().map(|&l| orbit.e(ring.neg(l))).collect();
    let classes = tc.classes();
    let reps: Vec<Mat2> = (0..classes.count()).map(|c| cs.get(classes.rep(c))).collect();
    let mut out = Vec::new();
    for rho in rows_over(tc, &groups.k_ell, &tables.psi_bracket)? {
        let stab = stab_all.filter(format!("Stab(rho{rho})"), |g| {
            let gi = g.inv(ring).expect("group element");
            reps.iter().enumerate().all(|(c, x)| tc.value_at(rho, &x.conj_by(ring, g, &gi)) == Some(tc.value(rho, c)))
        });
        let inside = stab.iter().all(|g| e_inv.iter().any(|ei| cs.contains(&g.mul(ring, ei))));
        let dim = tc.degrees()[rho];
        let extends = if stab.len() == cs.len() {
            true
        } else {
            let tstab = CharacterTable::compute(ring, &stab, tc.ctx().clone(), cfg)?;
            let mut ok = true;
            for theta in 0..tstab.len() {
                if restriction_between(&tstab, theta, tc, rho)? > 0 && tstab.degrees()[theta] != dim {
                    ok = false;
                }
            }
            ok
        };
        let induced_dim = (stab_all.len() / stab.len()) as u64 * dim;
        out.push(StabilizerRow {
            rho,
            dim,
            stab_index: (stab.len() / cs.len()) as u64,
            inside_c_e_prime: inside,
            extends,
            induced_dim,
            induced_in_spectrum: spectrum.contains(&induced_dim),
        });
    }
    Ok(out)
}

/// The elements J_{u,v} = [[1, 0], [u, 1]]·[[1, π^{ℓ′}v], [0, 1]] for u, v
/// Teichmüller lifts of 𝔽_q.
pub fn j_elements(orbit: &OrbitClass) -> Vec<Mat2> {
    let ring = orbit.ring();
    let k = ring.field();
    let p = ring.pi_pow(orbit.ell_prime());
    let mut out = Vec::new();
    for u in k.elements() {
        for v in k.elements() {
            let lower = Mat2::new(1, 0, ring.teichmuller(u), 1);
            let upper = Mat2::new(1, ring.mul(p, ring.teichmuller(v)), 0, 1);
            out.push(lower.mul(ring, &upper));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::{build_named_subgroups, classify_and_census};
    use crate::extsets::eprime_brute;
    use crate::mat2::DEFAULT_ENUMERATION_LIMIT;
    use crate::oracle::field_for;
    use crate::tdvr::{xi_compute, Tower};

    fn cfg() -> OracleConfig {
        OracleConfig { max_group_order: 1 << 15, max_classes: 1024, seed: 0 }
    }

    fn setup(spec: &str) -> (Tower, AdditiveCharacter, Arc<FieldCtx>) {
        let t = Tower::new(spec.parse().unwrap()).unwrap();
        let p = AdditiveCharacter::new(t.top().clone()).unwrap();
        let ctx = Arc::new(field_for(t.top().desc()).unwrap());
        (t, p, ctx)
    }

    #[test]
    fn quartic_examples() {
        let f2 = Fq::new(2).unwrap();
        assert_eq!(quartic_root_count(&f2, 1, 1, 1, 1), 1);
        for c in f2.elements() {
            assert_eq!(quartic_root_count(&f2, 1, 1, c, 0), if c == 0 { 1 } else { 2 });
        }
        let f4 = Fq::new(4).unwrap();
        for eta in 1..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        assert!(quartic_symmetry(&f4, eta, b, c, d));
                        let n = quartic_root_count(&f4, eta, b, c, d);
                        assert!([1, 2, 4].contains(&n) || (b == 0 && c == 0 && d == 0), "{eta} {b} {c} {d}: {n}");
                    }
                }
            }
        }
    }

    #[test]
    fn xi_values() {
        let f2 = Fq::new(2).unwrap();
        assert_eq!(xi_compute(&f2, |x| f2.trace(x) == 1).unwrap(), 1);
        let f4 = Fq::new(4).unwrap();
        assert_eq!(xi_compute(&f4, |x| f4.trace(x) == 1).unwrap(), 1);
    }

    #[test]
    fn trivial_radical() {
        let (t, p, _) = setup("laurent:2:3");
        let o = OrbitClass::new(&t, 1, 0, 0).unwrap();
        let g = build_named_subgroups(&o, &t, &p, DEFAULT_ENUMERATION_LIMIT).unwrap();
        let chi = LinearCharacter::psi_bracket(&o, &p, g.k_ell.clone()).unwrap();
        let rep = radical_of_form(t.top(), &g.k_ell, &g.k_ell, |m| chi.value(m).map(|v| v.e as u64)).unwrap();
        assert_eq!((rep.index, rep.dimension), (1, 1));
    }

    #[test]
    fn d_g_form_is_nondegenerate_at_r3() {
        let (t, p, ctx) = setup("laurent:2:3");
        let ring = t.top();
        for o in classify_and_census(&t).unwrap().cyclic {
            let g = build_named_subgroups(&o, &t, &p, DEFAULT_ENUMERATION_LIMIT).unwrap();
            let td = CharacterTable::compute(ring, &g.d_g_ell, ctx.clone(), &cfg()).unwrap();
            let psi_a = LinearCharacter::psi_a(&o, &p, g.m_ell.clone()).unwrap().to_modp(&ctx).unwrap();
            let phis = td.linear_chars_over(&g.m_ell, &psi_a).unwrap();
            assert!(!phis.is_empty());
            for phi in phis {
                let rep = radical_of_form(ring, &g.d_g_ell_prime, &g.d_g_ell, |m| td.value_at(phi, m)).unwrap();
                assert_eq!(rep.index, 4, "{}", o.label());
                assert_eq!(rep.dimension, 2);
            }
        }
    }

    #[test]
    fn primitive_predictions_at_r3() {
        let (t, _, _) = setup("laurent:2:3");
        for o in classify_and_census(&t).unwrap().cyclic {
            let p = primitive_spectrum_predict(&o).unwrap();
            match o.rtype {
                ReductionType::SplitSemisimple => assert_eq!(p.entries, vec![SpectrumEntry { dim: 12, count: 1 }]),
                ReductionType::Irreducible => assert_eq!(p.entries, vec![SpectrumEntry { dim: 4, count: 3 }]),
                ReductionType::SplitNonSemisimple => {
                    assert_eq!(p.mode, SpectrumMode::Constrained);
                    assert!(p.allowed.iter().all(|d| d % 3 == 0 && *d < 12));
                }
            }
        }
        let (t, _, _) = setup("laurent:2:4");
        assert!(matches!(primitive_spectrum_predict(&classify_and_census(&t).unwrap().cyclic[0]), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn c_spectra_at_r3() {
        let (t, p, ctx) = setup("laurent:2:3");
        let census = classify_and_census(&t).unwrap();
        let o = census.cyclic.iter().find(|o| o.rtype == ReductionType::SplitNonSemisimple).unwrap();
        assert_eq!(c_case(o).unwrap(), CCase::Quartic);
        let g = build_named_subgroups(o, &t, &p, DEFAULT_ENUMERATION_LIMIT).unwrap();
        let tables = OrbitTables::compute(o, &p, &g, ctx, &cfg()).unwrap();
        let checks = verify_c_spectra(o, &p, &g, &tables).unwrap();
        assert!(!checks.is_empty());
        let mut deltas: Vec<usize> = checks.iter().map(|c| c.params.unwrap().delta).collect();
        deltas.sort_unstable();
        deltas.dedup();
        assert_eq!(deltas, vec![1, 2]);
        for c in &checks {
            assert!(c.matches(), "{c:?}");
        }
        let js = j_elements(o);
        let ring = t.top();
        assert_eq!(g.c_s_ell_prime.len() / g.d_s_ell.len(), 4);
        for (i, x) in js.iter().enumerate() {
            assert!(g.c_s_ell_prime.contains(x));
            for y in &js[..i] {
                assert!(!g.d_s_ell.contains(&y.inv(ring).unwrap().mul(ring, x)));
            }
        }
    }

    #[test]
    fn stabilizers_at_r3() {
        let (t, p, ctx) = setup("laurent:2:3");
        let census = classify_and_census(&t).unwrap();
        let o = census.cyclic.iter().find(|o| o.rtype == ReductionType::SplitNonSemisimple).unwrap();
        let g = build_named_subgroups(o, &t, &p, DEFAULT_ENUMERATION_LIMIT).unwrap();
        let tables = OrbitTables::compute(o, &p, &g, ctx, &cfg()).unwrap();
        let e = eprime_brute(o, &p).unwrap();
        let rows = verify_stabilizers(o, &g, &tables, &e, &cfg()).unwrap();
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r.ok()), "{rows:?}");
    }
}
