//! The characters ψ_A of M^ℓ and ψ_[A] of K^ℓ, the census of SL₂-orbits of
//! [A]-classes, and the named subgroups attached to a lift Ã.
//!
//! Throughout, r is the level of the ring, ℓ = ⌈r/2⌉ and ℓ′ = ⌊r/2⌋. A class
//! [A] = A + 𝔬_{ℓ′}·I is stored by its representative [[0, b], [c, d]] with
//! zero upper-left entry.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat2::{
    centralizer_gl, congruence_gl, congruence_subgroup, group_enumerate, is_cyclic, product_set, GroupSet, Mat2, Which,
};
use crate::tdvr::{alpha_decompose, AdditiveCharacter, Ring, RingDesc, RootOfUnity, Tower};

/// Type of the reduction Ā of a cyclic A modulo π.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionType {
    /// Ā has no eigenvalue in 𝔽_q.
    Irreducible,
    /// Ā has two distinct eigenvalues in 𝔽_q.
    SplitSemisimple,
    /// Ā has a repeated eigenvalue and is not scalar.
    SplitNonSemisimple,
}

impl ReductionType {
    /// Short name used in reports.
    pub fn name(self) -> &'static str {
        match self {
            Self::Irreducible => "irreducible",
            Self::SplitSemisimple => "split-ss",
            Self::SplitNonSemisimple => "split-nss",
        }
    }

    /// γ_A: q + 1, q − 1 or q² − 1 for split semisimple, irreducible and
    /// split non-semisimple reductions.
    pub fn gamma(self, q: u64) -> u64 {
        match self {
            Self::SplitSemisimple => q + 1,
            Self::Irreducible => q - 1,
            Self::SplitNonSemisimple => q * q - 1,
        }
    }
}

impl fmt::Display for ReductionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Reduction type of [[0, a⁻¹α], [a, β]] from the residues ᾱ, β̄.
///
/// The characteristic polynomial is X² + β̄X + ᾱ over 𝔽_q. For β̄ ≠ 0 the
/// substitution X = β̄Y gives Y² + Y + ᾱ/β̄², which splits iff the absolute
/// trace of ᾱ/β̄² vanishes.
pub fn reduction_type(ring: &Ring, alpha_bar: u32, beta_bar: u32) -> ReductionType {
    let k = ring.field();
    if beta_bar == 0 {
        return ReductionType::SplitNonSemisimple;
    }
    let b2 = k.mul(beta_bar, beta_bar);
    let t = k.mul(alpha_bar, k.inv(b2).expect("nonzero"));
    if k.trace(t) == 0 {
        ReductionType::SplitSemisimple
    } else {
        ReductionType::Irreducible
    }
}

/// A cyclic [A]-class in normal form [[0, a⁻¹α], [a, β]] over 𝔬_{ℓ′}, with its
/// fixed lift Ã = [[0, ã⁻¹α̃], [ã, β̃]] to 𝔬_r and derived invariants.
#[derive(Debug, Clone)]
pub struct OrbitClass {
    ring: Arc<Ring>,
    small: Arc<Ring>,
    /// Index of the orbit in the census.
    pub orbit_id: usize,
    /// Number of [A]-classes in the SL₂-orbit.
    pub orbit_size: usize,
    /// a over 𝔬_{ℓ′}.
    pub a: u32,
    /// α over 𝔬_{ℓ′}.
    pub alpha: u32,
    /// β over 𝔬_{ℓ′}.
    pub beta: u32,
    /// ã, the canonical lift of a to 𝔬_r.
    pub a_lift: u32,
    /// α̃, the canonical lift of α to 𝔬_r.
    pub alpha_lift: u32,
    /// β̃, the canonical lift of β to 𝔬_r.
    pub beta_lift: u32,
    /// Ã.
    pub lift: Mat2,
    /// Reduction type of Ā.
    pub rtype: ReductionType,
    /// k = min{val(β̃), ℓ′}.
    pub k: u32,
    /// s with α̃ = w₁² + π^s·w₂² (characteristic 2 only).
    pub s: Option<u32>,
    /// w₁ (characteristic 2 only).
    pub w1: Option<u32>,
    /// w₂ (characteristic 2 only).
    pub w2: Option<u32>,
}

impl OrbitClass {
    /// Builds the class of [[0, a⁻¹α], [a, β]] given over 𝔬_{ℓ′}.
    pub fn new(tower: &Tower, a: u32, alpha: u32, beta: u32) -> Result<Self> {
        let ring = tower.top().clone();
        let lp = ring.desc().ell_prime();
        if lp == 0 {
            return Err(Error::Domain("ψ_[A] needs r ≥ 2".into()));
        }
        let small = tower.level(lp)?.clone();
        if !small.is_unit(a) {
            return Err(Error::Domain(format!("a = {} is not a unit", small.encode(a))));
        }
        let a_lift = ring.lift_from(a, &small);
        let alpha_lift = ring.lift_from(alpha, &small);
        let beta_lift = ring.lift_from(beta, &small);
        let ai = ring.inv(a_lift).expect("unit");
        let lift = Mat2::new(0, ring.mul(ai, alpha_lift), a_lift, beta_lift);
        let k = ring.val(beta_lift).min(lp);
        let (s, w1, w2) = if ring.desc().is_char2() {
            let d = alpha_decompose(&ring, alpha_lift, k)?;
            (Some(d.s), Some(d.w1), Some(d.w2))
        } else {
            (None, None, None)
        };
        let rtype = reduction_type(&ring, small.residue(alpha), small.residue(beta));
        Ok(Self {
            ring,
            small,
            orbit_id: 0,
            orbit_size: 0,
            a,
            alpha,
            beta,
            a_lift,
            alpha_lift,
            beta_lift,
            lift,
            rtype,
            k,
            s,
            w1,
            w2,
        })
    }

    /// The ring 𝔬_r.
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    /// The ring 𝔬_{ℓ′} carrying A.
    pub fn small(&self) -> &Arc<Ring> {
        &self.small
    }

    /// Ring parameters.
    pub fn desc(&self) -> RingDesc {
        self.ring.desc()
    }

    /// ℓ = ⌈r/2⌉.
    pub fn ell(&self) -> u32 {
        self.desc().ell()
    }

    /// ℓ′ = ⌊r/2⌋.
    pub fn ell_prime(&self) -> u32 {
        self.desc().ell_prime()
    }

    /// γ_A.
    pub fn gamma(&self) -> u64 {
        self.rtype.gamma(self.ring.q() as u64)
    }

    /// A over 𝔬_{ℓ′}.
    pub fn matrix(&self) -> Mat2 {
        let ai = self.small.inv(self.a).expect("unit");
        Mat2::new(0, self.small.mul(ai, self.alpha), self.a, self.beta)
    }

    /// e_x = [[1, ã⁻¹x], [0, 1]].
    pub fn e(&self, x: u32) -> Mat2 {
        let ai = self.ring.inv(self.a_lift).expect("unit");
        Mat2::new(1, self.ring.mul(ai, x), 0, 1)
    }

    /// Whether the normal form has trace β in the maximal ideal.
    pub fn trace_in_ideal(&self) -> bool {
        self.ring.val(self.beta_lift) >= 1
    }

    /// Short human-readable label.
    pub fn label(&self) -> String {
        format!(
            "{}#{} a={} alpha={} beta={}",
            self.desc(),
            self.orbit_id,
            self.small.encode(self.a),
            self.small.encode(self.alpha),
            self.small.encode(self.beta)
        )
    }

    /// Serializable summary.
    pub fn record(&self) -> OrbitRecord {
        OrbitRecord {
            orbit_id: self.orbit_id,
            rtype: self.rtype,
            a: self.small.encode(self.a),
            alpha: self.small.encode(self.alpha),
            beta: self.small.encode(self.beta),
            k: self.k,
            s: self.s,
            gamma: self.gamma(),
            orbit_size: self.orbit_size,
        }
    }
}

/// Serializable summary of a cyclic orbit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecord {
    /// Orbit index.
    pub orbit_id: usize,
    /// Reduction type.
    #[serde(rename = "type")]
    pub rtype: ReductionType,
    /// Encoded a.
    pub a: String,
    /// Encoded α.
    pub alpha: String,
    /// Encoded β.
    pub beta: String,
    /// k.
    pub k: u32,
    /// s (characteristic 2 only).
    pub s: Option<u32>,
    /// γ_A.
    pub gamma: u64,
    /// Number of [A]-classes in the orbit.
    pub orbit_size: usize,
}

/// A non-cyclic orbit, given by its least class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonCyclicOrbit {
    /// Orbit index.
    pub orbit_id: usize,
    /// Least class representative [[0, b], [c, d]] over 𝔬_{ℓ′}.
    pub rep: Mat2,
    /// Number of classes in the orbit.
    pub orbit_size: usize,
}

/// The SL₂(𝔬_{ℓ′})-orbits on M₂(𝔬_{ℓ′})/scalars.
#[derive(Debug, Clone)]
pub struct Census {
    /// Ring parameters (level r).
    pub desc: RingDesc,
    /// Number of [A]-classes, q^{3ℓ′}.
    pub classes_total: usize,
    /// Cyclic orbits in normal form.
    pub cyclic: Vec<OrbitClass>,
    /// Non-cyclic orbits.
    pub non_cyclic: Vec<NonCyclicOrbit>,
}

impl Census {
    /// Number of cyclic orbits of each reduction type.
    pub fn counts(&self) -> Vec<(ReductionType, usize)> {
        let mut m: HashMap<ReductionType, usize> = HashMap::new();
        for o in &self.cyclic {
            *m.entry(o.rtype).or_default() += 1;
        }
        let mut v: Vec<_> = m.into_iter().collect();
        v.sort();
        v
    }

    /// Number of cyclic orbits of one reduction type.
    pub fn count(&self, t: ReductionType) -> usize {
        self.cyclic.iter().filter(|o| o.rtype == t).count()
    }

    /// CSV with header `type,orbit_id,a,alpha,beta,k,s,orbit_size,matrix`.
    /// Element encodings contain commas and are quoted.
    pub fn to_csv(&self, small: &Ring) -> String {
        let mut out = String::from("type,orbit_id,a,alpha,beta,k,s,orbit_size,matrix\n");
        let mut rows: Vec<(usize, String)> = Vec::new();
        for o in &self.cyclic {
            let s = o.s.map(|s| s.to_string()).unwrap_or_default();
            rows.push((
                o.orbit_id,
                format!(
                    "{},{},\"{}\",\"{}\",\"{}\",{},{},{},\"{}\"\n",
                    o.rtype,
                    o.orbit_id,
                    small.encode(o.a),
                    small.encode(o.alpha),
                    small.encode(o.beta),
                    o.k,
                    s,
                    o.orbit_size,
                    o.matrix().encode(small).replace('"', "")
                ),
            ));
        }
        for n in &self.non_cyclic {
            rows.push((
                n.orbit_id,
                format!("non-cyclic,{},,,,,,{},\"{}\"\n", n.orbit_id, n.orbit_size, n.rep.encode(small).replace('"', "")),
            ));
        }
        rows.sort_by_key(|r| r.0);
        for (_, row) in rows {
            out.push_str(&row);
        }
        out
    }
}

fn class_key(small: &Ring, m: &Mat2) -> Mat2 {
    let [a, b, c, d] = m.0;
    Mat2::new(0, b, c, small.sub(d, a))
}

/// Partitions the q^{3ℓ′} classes [A] into SL₂(𝔬_{ℓ′})-conjugation orbits.
///
/// A cyclic orbit is represented by the member [[0, a⁻¹α], [a, β]] (a a unit)
/// that minimizes (β, α, a) in code order, so an orbit with a β = 0 member
/// is represented with β = 0 and, where possible, α = 0. A non-cyclic orbit
/// is represented by its least class.
pub fn classify_and_census(tower: &Tower) -> Result<Census> {
    let ring = tower.top();
    let desc = ring.desc();
    let lp = desc.ell_prime();
    if lp == 0 {
        return Err(Error::Domain("the census needs r ≥ 2".into()));
    }
    let small = tower.level(lp)?;
    let n = small.size() as usize;
    let total = n * n * n;
    let index = |m: &Mat2| -> usize { (m.0[1] as usize * n + m.0[2] as usize) * n + m.0[3] as usize };
    let unindex = |i: usize| -> Mat2 { Mat2::new(0, (i / (n * n)) as u32, ((i / n) % n) as u32, (i % n) as u32) };
    let sl2 = group_enumerate(small, Which::Sl2, crate::mat2::DEFAULT_ENUMERATION_LIMIT)?;
    let gens: Vec<(Mat2, Mat2)> = sl2.generators(small).into_iter().map(|g| (g, g.inv(small).expect("SL₂"))).collect();
    let mut orbit_of = vec![usize::MAX; total];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for start in 0..total {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = members.len();
        orbit_of[start] = id;
        let mut list = vec![start];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let m = unindex(i);
            for (g, gi) in &gens {
                let j = index(&class_key(small, &m.conj_by(small, g, gi)));
                if orbit_of[j] == usize::MAX {
                    orbit_of[j] = id;
                    list.push(j);
                    stack.push(j);
                }
            }
        }
        members.push(list);
    }
    let mut cyclic = Vec::new();
    let mut non_cyclic = Vec::new();
    for (id, list) in members.iter().enumerate() {
        let first = unindex(*list.iter().min().expect("nonempty orbit"));
        if !is_cyclic(small, &first) {
            non_cyclic.push(NonCyclicOrbit { orbit_id: id, rep: first, orbit_size: list.len() });
            continue;
        }
        let best = list
            .iter()
            .map(|&i| unindex(i))
            .filter(|m| small.is_unit(m.0[2]))
            .map(|m| {
                let a = m.0[2];
                (m.0[3], small.mul(a, m.0[1]), a)
            })
            .min()
            .ok_or_else(|| Error::Internal("cyclic orbit without a normal form".into()))?;
        let (beta, alpha, a) = best;
        let mut o = OrbitClass::new(tower, a, alpha, beta)?;
        o.orbit_id = id;
        o.orbit_size = list.len();
        cyclic.push(o);
    }
    Ok(Census { desc, classes_total: total, cyclic, non_cyclic })
}

/// ψ_A(X) = ψ(trace(Ã(X − I))) = ψ(π^ℓ trace(ÃB)) for X = I + π^ℓB ∈ M^ℓ.
pub fn psi_a_eval(orbit: &OrbitClass, psi: &AdditiveCharacter, x: &Mat2) -> Result<RootOfUnity> {
    let ring = orbit.ring();
    if !x.is_congruent_identity(ring, orbit.ell()) {
        return Err(Error::Domain(format!("{} is not in M^{}", x.encode(ring), orbit.ell())));
    }
    let d = x.sub(ring, &Mat2::identity());
    Ok(psi.eval(orbit.lift.mul(ring, &d).trace(ring)))
}

/// ψ_[A](X) for X ∈ K^ℓ; it depends only on the class [A].
pub fn psi_bracket_eval(orbit: &OrbitClass, psi: &AdditiveCharacter, x: &Mat2) -> Result<RootOfUnity> {
    if x.det(orbit.ring()) != 1 {
        return Err(Error::Domain(format!("{} is not in K^{}", x.encode(orbit.ring()), orbit.ell())));
    }
    psi_a_eval(orbit, psi, x)
}

/// A linear character given by its values on a finite matrix group.
#[derive(Debug, Clone)]
pub struct LinearCharacter {
    domain: GroupSet,
    values: Vec<RootOfUnity>,
}

impl LinearCharacter {
    /// Tabulates `f` on `domain`.
    pub fn tabulate(domain: GroupSet, f: impl Fn(&Mat2) -> Result<RootOfUnity> + Sync) -> Result<Self> {
        let values = domain.iter().map(|g| f(&g)).collect::<Result<Vec<_>>>()?;
        Ok(Self { domain, values })
    }

    /// ψ_A on M^ℓ.
    pub fn psi_a(orbit: &OrbitClass, psi: &AdditiveCharacter, m_ell: GroupSet) -> Result<Self> {
        Self::tabulate(m_ell, |g| psi_a_eval(orbit, psi, g))
    }

    /// ψ_[A] on K^ℓ.
    pub fn psi_bracket(orbit: &OrbitClass, psi: &AdditiveCharacter, k_ell: GroupSet) -> Result<Self> {
        Self::tabulate(k_ell, |g| psi_bracket_eval(orbit, psi, g))
    }

    /// The domain.
    pub fn domain(&self) -> &GroupSet {
        &self.domain
    }

    /// Values in the sorted order of the domain.
    pub fn values(&self) -> &[RootOfUnity] {
        &self.values
    }

    /// Value at an element of the domain.
    pub fn value(&self, g: &Mat2) -> Option<RootOfUnity> {
        self.domain.index_of(g).map(|i| self.values[i])
    }

    /// Checks χ(1) = 1 and χ(xy) = χ(x)χ(y) for x in a generating set and all y.
    pub fn check_multiplicative(&self, ring: &Ring) -> Result<()> {
        if !self.value(&Mat2::identity()).is_some_and(|v| v.is_one()) {
            return Err(Error::Invariant("linear character is not 1 at the identity".into()));
        }
        for g in self.domain.generators(ring) {
            let vg = self.value(&g).expect("generator in domain");
            for (i, y) in self.domain.iter().enumerate() {
                let p = self.value(&g.mul(ring, &y)).ok_or_else(|| Error::Invariant("domain not closed".into()))?;
                if p != vg.mul(&self.values[i]) {
                    return Err(Error::Invariant(format!("character on {} is not multiplicative", self.domain.label())));
                }
            }
        }
        Ok(())
    }

    /// Values mapped into the oracle field.
    pub fn to_modp(&self, ctx: &crate::oracle::FieldCtx) -> Result<Vec<u64>> {
        self.values.iter().map(|&v| ctx.root(v)).collect()
    }
}

/// The subgroups attached to a lift Ã, all inside GL₂(𝔬_r).
#[derive(Debug, Clone)]
pub struct NamedSubgroups {
    /// K^ℓ.
    pub k_ell: GroupSet,
    /// K^{ℓ′}.
    pub k_ell_prime: GroupSet,
    /// M^ℓ.
    pub m_ell: GroupSet,
    /// C_GL(Ã).
    pub centralizer: GroupSet,
    /// C_G^ℓ = C_GL(Ã)M^ℓ.
    pub c_g_ell: GroupSet,
    /// C_G^{ℓ′}.
    pub c_g_ell_prime: GroupSet,
    /// C_S^ℓ = C_G^ℓ ∩ SL₂.
    pub c_s_ell: GroupSet,
    /// C_S^{ℓ′}.
    pub c_s_ell_prime: GroupSet,
    /// D_G^ℓ = (C_GL(Ã) ∩ M¹)M^ℓ.
    pub d_g_ell: GroupSet,
    /// D_G^{ℓ′}.
    pub d_g_ell_prime: GroupSet,
    /// D_S^ℓ.
    pub d_s_ell: GroupSet,
    /// D_S^{ℓ′}.
    pub d_s_ell_prime: GroupSet,
    /// H^ℓ = {e_x : x ∈ h^ℓ}.
    pub h_ell: GroupSet,
    /// H^{ℓ′}.
    pub h_ell_prime: GroupSet,
    /// C_{SL₂}(ψ_[A]), computed from ψ directly.
    pub stabilizer: GroupSet,
    /// D*_S (characteristic 2, odd r).
    pub d_star: Option<GroupSet>,
    /// W^{ℓ′} (characteristic 2, odd r).
    pub w: Option<GroupSet>,
}

/// h^i = {x ∈ 𝔬_r : 2x ≡ 0 and x(x + β̃) ≡ 0 mod π^i}, in code order.
pub fn h_elements(orbit: &OrbitClass, i: u32) -> Vec<u32> {
    let ring = orbit.ring();
    let two = ring.from_int(2);
    ring.elements()
        .filter(|&x| ring.val(ring.mul(two, x)) >= i && ring.val(ring.mul(x, ring.add(x, orbit.beta_lift))) >= i)
        .collect()
}

fn d_star_set(orbit: &OrbitClass, tower: &Tower, sl2: &GroupSet, cm1: &GroupSet, limit: u64) -> Result<GroupSet> {
    let ring = orbit.ring();
    let lp = orbit.ell_prime();
    let pl = ring.pi_pow(lp);
    let ai = ring.inv(orbit.a_lift).expect("unit");
    let ai2 = ring.mul(ai, ai);
    let w1 = orbit.w1.expect("characteristic 2");
    let reps = tower.residue_reps(ring.r() - lp)?;
    let vreps = tower.residue_reps(ring.r() - lp - 1)?;
    let mut u = Vec::new();
    for &x in &reps {
        for &y in &reps {
            for &z in &reps {
                let base = ring.add(ring.mul(ai, ring.mul(w1, ring.add(x, y))), ring.mul(ai2, ring.mul(orbit.alpha_lift, z)));
                for &v in &vreps {
                    let b = ring.add(base, ring.mul(ring.pi(), v));
                    let m = Mat2::new(ring.add(1, ring.mul(pl, x)), ring.mul(pl, b), ring.mul(pl, z), ring.add(1, ring.mul(pl, y)));
                    u.push(m);
                }
            }
        }
    }
    let u = GroupSet::from_matrices("U", u);
    if u.len() as u64 > limit {
        return Err(Error::Capacity { what: "U".into(), size: u.len() as u64, limit });
    }
    let prod = product_set(ring, "D*_S", cm1, &u);
    Ok(prod.intersect(sl2, "D*_S"))
}

fn w_set(orbit: &OrbitClass) -> GroupSet {
    let ring = orbit.ring();
    let lp = orbit.ell_prime();
    let pl = ring.pi_pow(lp);
    let pl2 = ring.pi_pow(2 * lp);
    let mut out = Vec::new();
    for x in ring.elements() {
        let d = ring.add(1, ring.add(ring.mul(pl, x), ring.mul(pl2, ring.mul(x, x))));
        let a = ring.add(1, ring.mul(pl, x));
        for y in ring.elements() {
            let b = ring.mul(pl, ring.mul(ring.pi(), y));
            for z in ring.elements() {
                out.push(Mat2::new(a, b, ring.mul(pl, z), d));
            }
        }
    }
    GroupSet::from_matrices("W^l'", out)
}

/// The stabilizer {g ∈ SL₂(𝔬_r) : ψ_[A](g⁻¹kg) = ψ_[A](k) for all k ∈ K^ℓ},
/// checked on a generating set of K^ℓ.
pub fn stabilizer_direct(orbit: &OrbitClass, psi: &AdditiveCharacter, sl2: &GroupSet, k_ell: &GroupSet) -> Result<GroupSet> {
    let ring = orbit.ring();
    let gens = k_ell.generators(ring);
    let base: Vec<RootOfUnity> = gens.iter().map(|k| psi_bracket_eval(orbit, psi, k)).collect::<Result<_>>()?;
    let keys: Vec<u64> = sl2
        .keys()
        .par_iter()
        .filter(|&&key| {
            let g = Mat2::unpack(key);
            let gi = g.inv(ring).expect("SL₂");
            gens.iter().zip(&base).all(|(k, v)| psi_bracket_eval(orbit, psi, &k.conj_by(ring, &gi, &g)).is_ok_and(|w| w == *v))
        })
        .copied()
        .collect();
    Ok(GroupSet::from_keys("C(psi_[A])", keys))
}

/// Builds all named subgroups of an orbit at level r and verifies the chain
/// K^ℓ ⊴ D_S^ℓ ⊴ D_S^{ℓ′} ⊴ C_S^{ℓ′} ⊴ C(ψ_[A]).
pub fn build_named_subgroups(orbit: &OrbitClass, tower: &Tower, psi: &AdditiveCharacter, limit: u64) -> Result<NamedSubgroups> {
    let ring = orbit.ring();
    let (l, lp) = (orbit.ell(), orbit.ell_prime());
    let sl2 = group_enumerate(ring, Which::Sl2, limit)?;
    let centralizer = centralizer_gl(ring, &orbit.lift)?;
    let cm1 = centralizer.filter("C_GL cap M^1", |m| m.is_congruent_identity(ring, 1));
    let m_ell = congruence_gl(tower, l, limit)?;
    let m_ell_prime = congruence_gl(tower, lp, limit)?;
    let k_ell = congruence_subgroup(tower, l, limit)?;
    let k_ell_prime = congruence_subgroup(tower, lp, limit)?;
    let c_g_ell = product_set(ring, "C_G^l", &centralizer, &m_ell);
    let c_g_ell_prime = product_set(ring, "C_G^l'", &centralizer, &m_ell_prime);
    let d_g_ell = product_set(ring, "D_G^l", &cm1, &m_ell);
    let d_g_ell_prime = product_set(ring, "D_G^l'", &cm1, &m_ell_prime);
    let is_sl = |m: &Mat2| m.det(ring) == 1;
    let c_s_ell = c_g_ell.filter("C_S^l", is_sl);
    let c_s_ell_prime = c_g_ell_prime.filter("C_S^l'", is_sl);
    let d_s_ell = d_g_ell.filter("D_S^l", is_sl);
    let d_s_ell_prime = d_g_ell_prime.filter("D_S^l'", is_sl);
    let h_ell = GroupSet::from_matrices("H^l", h_elements(orbit, l).into_iter().map(|x| orbit.e(x)));
    let h_ell_prime = GroupSet::from_matrices("H^l'", h_elements(orbit, lp).into_iter().map(|x| orbit.e(x)));
    let stabilizer = stabilizer_direct(orbit, psi, &sl2, &k_ell)?;
    let odd_char2 = ring.desc().is_char2() && ring.r() % 2 == 1;
    let d_star = if odd_char2 { Some(d_star_set(orbit, tower, &sl2, &cm1, limit)?) } else { None };
    let w = if odd_char2 { Some(w_set(orbit)) } else { None };
    let named = NamedSubgroups {
        k_ell,
        k_ell_prime,
        m_ell,
        centralizer,
        c_g_ell,
        c_g_ell_prime,
        c_s_ell,
        c_s_ell_prime,
        d_g_ell,
        d_g_ell_prime,
        d_s_ell,
        d_s_ell_prime,
        h_ell,
        h_ell_prime,
        stabilizer,
        d_star,
        w,
    };
    named.verify_chain(ring)?;
    Ok(named)
}

impl NamedSubgroups {
    /// Checks that each group of the chain is a subgroup of, and normal in, the next.
    pub fn verify_chain(&self, ring: &Ring) -> Result<()> {
        let chain = [&self.k_ell, &self.d_s_ell, &self.d_s_ell_prime, &self.c_s_ell_prime, &self.stabilizer];
        for g in chain {
            g.verify_group(ring)?;
        }
        for w in chain.windows(2) {
            if !w[0].is_subset_of(w[1]) {
                return Err(Error::Invariant(format!("{} is not contained in {}", w[0].label(), w[1].label())));
            }
            if !w[0].is_normalized_by(ring, w[1]) {
                return Err(Error::Invariant(format!("{} is not normal in {}", w[0].label(), w[1].label())));
            }
        }
        Ok(())
    }

    /// The product set C_S^{ℓ′}·H^{ℓ′}.
    pub fn c_s_times_h(&self, ring: &Ring) -> GroupSet {
        product_set(ring, "C_S^l' H^l'", &self.c_s_ell_prime, &self.h_ell_prime)
    }
}

/// Order of C_{SL₂}(ψ_[A]) split as odd part times a power of 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerReport {
    /// |C(ψ_[A])|.
    pub order: u64,
    /// Odd part of the order.
    pub odd_part: u64,
    /// Exponent m with order = odd_part · 2^m.
    pub two_exponent: u32,
    /// Whether the odd part is q − 1, q + 1 or 1 as the reduction type predicts.
    pub shape_ok: bool,
}

/// Computes C_{SL₂(𝔬_r)}(ψ_[A]) directly and checks that its order is
/// (q − 1)·2^m, (q + 1)·2^m or 2^m for split semisimple, irreducible and split
/// non-semisimple reductions.
pub fn stabilizer_psibracket(orbit: &OrbitClass, tower: &Tower, psi: &AdditiveCharacter, limit: u64) -> Result<(GroupSet, StabilizerReport)> {
    let ring = orbit.ring();
    let sl2 = group_enumerate(ring, Which::Sl2, limit)?;
    let k_ell = congruence_subgroup(tower, orbit.ell(), limit)?;
    let stab = stabilizer_direct(orbit, psi, &sl2, &k_ell)?;
    let order = stab.len() as u64;
    let two_exponent = order.trailing_zeros();
    let odd_part = order >> two_exponent;
    let q = ring.q() as u64;
    let expected = match orbit.rtype {
        ReductionType::SplitSemisimple => q - 1,
        ReductionType::Irreducible => q + 1,
        ReductionType::SplitNonSemisimple => 1,
    };
    Ok((stab, StabilizerReport { order, odd_part, two_exponent, shape_ok: odd_part == expected }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat2::DEFAULT_ENUMERATION_LIMIT;

    fn tower(spec: &str) -> Tower {
        Tower::new(spec.parse().unwrap()).unwrap()
    }

    fn psi(t: &Tower) -> AdditiveCharacter {
        AdditiveCharacter::new(t.top().clone()).unwrap()
    }

    #[test]
    fn census_totals() {
        let t = tower("laurent:2:2");
        let c = classify_and_census(&t).unwrap();
        assert_eq!(c.classes_total, 8);
        let sizes: usize = c.cyclic.iter().map(|o| o.orbit_size).sum::<usize>() + c.non_cyclic.iter().map(|o| o.orbit_size).sum::<usize>();
        assert_eq!(sizes, 8);
        assert_eq!(c.non_cyclic.len(), 1);
    }

    #[test]
    fn irreducible_orbit_counts_at_level_two() {
        let count = |spec: &str| {
            let c = classify_and_census(&tower(spec)).unwrap();
            assert_eq!(c.classes_total, 64);
            c.cyclic.iter().filter(|o| o.rtype == ReductionType::Irreducible).count()
        };
        assert_eq!(count("laurent:2:4"), 2);
        assert_eq!(count("2adic:2:4"), 1);
    }

    #[test]
    fn identity_and_trace_expansion() {
        let t = tower("laurent:2:2");
        let ring = t.top();
        let p = psi(&t);
        let o = OrbitClass::new(&t, 1, 0, 0).unwrap();
        assert!(psi_a_eval(&o, &p, &Mat2::identity()).unwrap().is_one());
        let pi = ring.pi();
        for b in ring.elements() {
            let x = Mat2::new(1, ring.mul(pi, b), 0, 1);
            let want = p.eval(ring.mul(pi, ring.mul(o.a_lift, b)));
            assert_eq!(psi_a_eval(&o, &p, &x).unwrap(), want);
        }
        assert!(psi_a_eval(&o, &p, &Mat2::new(1, 1, 0, 1)).is_err());
    }

    #[test]
    fn reduction_types_over_f2() {
        let ring = Ring::from_spec("laurent:2:1").unwrap();
        assert_eq!(reduction_type(&ring, 1, 1), ReductionType::Irreducible);
        assert_eq!(reduction_type(&ring, 0, 1), ReductionType::SplitSemisimple);
        assert_eq!(reduction_type(&ring, 1, 0), ReductionType::SplitNonSemisimple);
    }

    #[test]
    fn subgroup_chain_at_r3() {
        let t = tower("laurent:2:3");
        let ring = t.top();
        let p = psi(&t);
        for o in classify_and_census(&t).unwrap().cyclic {
            let g = build_named_subgroups(&o, &t, &p, DEFAULT_ENUMERATION_LIMIT).unwrap();
            assert_eq!(g.c_s_times_h(ring), g.stabilizer, "{}", o.label());
            assert_eq!(g.d_g_ell_prime.len(), 4 * g.d_g_ell.len());
        }
    }
}
