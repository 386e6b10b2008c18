//! The h-sets and the extension sets E_Ã ⊆ E′_Ã, computed by a brute-force
//! scan of the (x, y)-criterion and by the closed forms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chars::{h_elements, psi_bracket_eval, NamedSubgroups, OrbitClass};
use crate::error::{Error, Result};
use crate::mat2::{commutator_subgroup, GroupSet, Mat2};
use crate::tdvr::{AdditiveCharacter, Ring, RingKind};

/// How an extension set was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Scan of all (x, y) ∈ 𝔬_r × π𝔬_r per λ.
    Brute,
    /// Closed-form evaluation.
    Closed,
}

/// The sets h^ℓ, h^{ℓ′}, E and E′ of one orbit, as sorted element codes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionSets {
    /// How E′ was obtained.
    pub method: Method,
    /// h^ℓ.
    pub h_ell: Vec<u32>,
    /// h^{ℓ′}.
    pub h_ell_prime: Vec<u32>,
    /// E = E′ ∩ h^ℓ.
    pub e: Vec<u32>,
    /// E′.
    pub e_prime: Vec<u32>,
}

/// Invariants of λ relative to a fixed lift Ã.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaInvariants {
    /// λ.
    pub lambda: u32,
    /// i_λ = val(λ), with val(0) = r.
    pub i: u32,
    /// j_λ = min{val(λ + β̃), ℓ′}.
    pub j: u32,
    /// δ_λ = j_λ − s − max{ℓ − i_λ, ℓ − k, ⌈(ℓ − s)/2⌉} (characteristic 2 only).
    pub delta: Option<i64>,
    /// u₁ with λ = π^{i_λ}u₁, when i_λ < r.
    pub u1: Option<u32>,
    /// u₂ with λ + β̃ = π^{j_λ}u₂, when j_λ < ℓ′.
    pub u2: Option<u32>,
}

/// h^i = {x : 2x ≡ 0, x(x + β̃) ≡ 0 mod π^i}, in code order.
pub fn h_set(orbit: &OrbitClass, i: u32) -> Vec<u32> {
    h_elements(orbit, i)
}

/// f(λ, x, y) = xyλ(β̃ − λ) − α̃λy² + λ(x² − 1) and g(x, y) = x² + β̃xy − α̃y².
pub fn f_g_eval(orbit: &OrbitClass, lambda: u32, x: u32, y: u32) -> (u32, u32) {
    let ring = orbit.ring();
    let (al, be) = (orbit.alpha_lift, orbit.beta_lift);
    let xy = ring.mul(x, y);
    let x2 = ring.mul(x, x);
    let y2 = ring.mul(y, y);
    let g = ring.sub(ring.add(x2, ring.mul(be, xy)), ring.mul(al, y2));
    let f = ring.add(
        ring.sub(ring.mul(xy, ring.mul(lambda, ring.sub(be, lambda))), ring.mul(al, ring.mul(lambda, y2))),
        ring.mul(lambda, ring.sub(x2, 1)),
    );
    (f, g)
}

fn ceil_half(n: i64) -> i64 {
    n.div_euclid(2) + n.rem_euclid(2)
}

/// δ-formula maximum max{ℓ − i, ℓ − k, ⌈(ℓ − s)/2⌉}.
pub fn delta_max(l: u32, i: u32, k: u32, s: u32) -> i64 {
    let (l, i, k, s) = (l as i64, i as i64, k as i64, s as i64);
    (l - i).max(l - k).max(ceil_half(l - s))
}

/// Computes i_λ, j_λ, δ_λ and the unit parts u₁, u₂.
pub fn lambda_invariants(orbit: &OrbitClass, lambda: u32) -> LambdaInvariants {
    let ring = orbit.ring();
    let (l, lp) = (orbit.ell(), orbit.ell_prime());
    let i = ring.val(lambda);
    let sum = ring.add(lambda, orbit.beta_lift);
    let j = ring.val(sum).min(lp);
    let delta = orbit.s.map(|s| j as i64 - s as i64 - delta_max(l, i, orbit.k, s));
    let u1 = (i < ring.r()).then(|| ring.div_pi_pow(lambda, i).expect("divisible"));
    let u2 = (j < lp).then(|| ring.div_pi_pow(sum, j).expect("divisible"));
    LambdaInvariants { lambda, i, j, delta, u1, u2 }
}

/// Pairs (x, y) ∈ 𝔬_r × π𝔬_r with g(x, y) ≡ 1 mod π^ℓ, stored as
/// (g − 1, xy, y) so that f(λ, x, y) = λ(g − 1) − λ²xy.
fn admissible_pairs(orbit: &OrbitClass) -> Vec<(u32, u32, u32)> {
    let ring = orbit.ring();
    let l = orbit.ell();
    let ys: Vec<u32> = ring.elements().filter(|&y| ring.val(y) >= 1).collect();
    ring.elements()
        .flat_map(|x| ys.iter().map(move |&y| (x, y)))
        .filter_map(|(x, y)| {
            let (_, g) = f_g_eval(orbit, 0, x, y);
            let g1 = ring.sub(g, 1);
            (ring.val(g1) >= l).then(|| (g1, ring.mul(x, y), y))
        })
        .collect()
}

fn scan_condition(ring: &Ring, psi: &AdditiveCharacter, l: u32, pairs: &[(u32, u32, u32)], lambda: u32) -> bool {
    let l2 = ring.mul(lambda, lambda);
    pairs
        .iter()
        .filter(|&&(_, _, y)| ring.val(ring.mul(lambda, y)) >= l)
        .all(|&(g1, xy, _)| psi.exponent(ring.sub(ring.mul(lambda, g1), ring.mul(l2, xy))) == 0)
}

/// Condition (1) of the extension criterion for one λ: ψ(f(λ, x, y)) = 1 for
/// every (x, y) ∈ 𝔬_r × π𝔬_r with g(x, y) ≡ 1 mod π^ℓ and λy ∈ π^ℓ𝔬_r.
pub fn scan_lambda(orbit: &OrbitClass, psi: &AdditiveCharacter, lambda: u32) -> bool {
    scan_condition(orbit.ring(), psi, orbit.ell(), &admissible_pairs(orbit), lambda)
}

fn assemble(orbit: &OrbitClass, method: Method, e_prime: Vec<u32>) -> ExtensionSets {
    let h_ell = h_set(orbit, orbit.ell());
    let h_ell_prime = h_set(orbit, orbit.ell_prime());
    let e = e_prime.iter().copied().filter(|x| h_ell.binary_search(x).is_ok()).collect();
    ExtensionSets { method, h_ell, h_ell_prime, e, e_prime }
}

/// Largest q^{2r} accepted by [`eprime_brute`].
pub const BRUTE_PAIR_LIMIT: u64 = 1 << 28;

/// E′ by scanning condition (1) for every λ ∈ h^{ℓ′}; E = E′ ∩ h^ℓ.
pub fn eprime_brute(orbit: &OrbitClass, psi: &AdditiveCharacter) -> Result<ExtensionSets> {
    let ring = orbit.ring();
    let pairs_total = ring.size() as u64 * ring.size() as u64;
    if pairs_total > BRUTE_PAIR_LIMIT {
        return Err(Error::Capacity { what: "E′ scan over 𝔬_r × 𝔬_r".into(), size: pairs_total, limit: BRUTE_PAIR_LIMIT });
    }
    let pairs = admissible_pairs(orbit);
    let h = h_set(orbit, orbit.ell_prime());
    let e_prime: Vec<u32> = h.par_iter().copied().filter(|&lam| scan_condition(ring, psi, orbit.ell(), &pairs, lam)).collect();
    Ok(assemble(orbit, Method::Brute, e_prime))
}

/// Whether λ ≡ π^{ℓ−ℓ′}z² mod π^{ℓ′} for some z.
fn condition_one(orbit: &OrbitClass, lambda: u32) -> bool {
    let ring = orbit.ring();
    let (l, lp) = (orbit.ell(), orbit.ell_prime());
    let shift = ring.pi_pow(l - lp);
    ring.elements().any(|z| ring.val(ring.sub(lambda, ring.mul(shift, ring.mul(z, z)))) >= lp)
}

/// Whether ψ(v) depends only on the top digit (v)_{r−1}.
pub fn is_top_digit(ring: &Ring, psi: &AdditiveCharacter) -> bool {
    let top = ring.r() as usize - 1;
    ring.elements().filter(|&v| ring.digits(v)[top] == 0).all(|v| psi.exponent(v) == 0)
}

/// Closed-form membership of λ ∈ h^{ℓ′} \ π^{ℓ′}𝔬 in E′ (characteristic 2),
/// returning the three conditions (I), (II), (III).
pub fn closed_conditions(orbit: &OrbitClass, xi: u32, lambda: u32) -> (bool, bool, bool) {
    let ring = orbit.ring();
    let lp = orbit.ell_prime();
    let s = orbit.s.expect("characteristic 2");
    let inv = lambda_invariants(orbit, lambda);
    let c1 = condition_one(orbit, lambda);
    let c2 = (2 * inv.j + inv.i) as i64 == (2 * lp + s) as i64 - ring.desc().epsilon() as i64;
    let delta = inv.delta.expect("characteristic 2");
    let c3 = if inv.j < lp && s < orbit.k && delta >= 0 {
        let u1 = inv.u1.expect("λ ∉ π^{ℓ′}𝔬");
        let u2 = inv.u2.expect("j < ℓ′");
        let w2 = orbit.w2.expect("characteristic 2");
        let xi_t = ring.teichmuller(xi);
        let lhs = ring.mul(xi_t, ring.mul(ring.mul(u1, u1), ring.mul(u2, u2)));
        let rhs = ring.mul(u1, ring.mul(w2, w2));
        ring.val(ring.sub(lhs, rhs)) as i64 > 2 * delta
    } else {
        true
    };
    (c1, c2, c3)
}

/// E′ by the closed forms: π^{ℓ′}𝔬_r in characteristic 0 within the proved
/// range, and conditions (I)–(III) in characteristic 2.
pub fn eprime_closed(orbit: &OrbitClass, psi: &AdditiveCharacter) -> Result<ExtensionSets> {
    let ring = orbit.ring();
    let desc = ring.desc();
    let lp = orbit.ell_prime();
    let ideal: Vec<u32> = ring.elements().filter(|&x| ring.val(x) >= lp).collect();
    if desc.kind != RingKind::Laurent {
        let e = desc.e;
        let beta_unit = orbit.k == 0;
        let in_range = if beta_unit { desc.r >= 2 * (e + 1) } else { desc.r > 4 * e };
        if !in_range {
            return Err(Error::OutOfRange(format!(
                "characteristic 0 closed form needs r ≥ 2(e+1) (β unit) or r > 4e (β ∈ π𝔬); have r = {}, e = {e}, k = {}",
                desc.r, orbit.k
            )));
        }
        return Ok(assemble(orbit, Method::Closed, ideal));
    }
    if !is_top_digit(ring, psi) {
        return Err(Error::Domain("characteristic 2 closed form needs ψ(v) to depend only on the digit (v)_{r−1}".into()));
    }
    let xi = psi.xi()?;
    let mut e_prime: Vec<u32> = h_set(orbit, lp)
        .into_iter()
        .filter(|&lam| {
            if ring.val(lam) >= lp {
                return true;
            }
            let (c1, c2, c3) = closed_conditions(orbit, xi, lam);
            c1 && c2 && c3
        })
        .collect();
    e_prime.sort_unstable();
    Ok(assemble(orbit, Method::Closed, e_prime))
}

/// Structural properties every E′ must satisfy; returns the violated ones.
pub fn check_properties(orbit: &OrbitClass, sets: &ExtensionSets) -> Vec<String> {
    let ring = orbit.ring();
    let (l, lp) = (orbit.ell(), orbit.ell_prime());
    let mut bad = Vec::new();
    let in_e = |x: u32| sets.e_prime.binary_search(&x).is_ok();
    let ideal: Vec<u32> = ring.elements().filter(|&x| ring.val(x) >= lp).collect();
    if !ideal.iter().all(|&x| in_e(x)) {
        bad.push("π^{ℓ′}𝔬 ⊄ E′".into());
    }
    if !sets.e_prime.iter().all(|x| sets.h_ell_prime.binary_search(x).is_ok()) {
        bad.push("E′ ⊄ h^{ℓ′}".into());
    }
    if !sets.e_prime.iter().all(|&x| ideal.iter().all(|&z| in_e(ring.add(x, z)))) {
        bad.push("E′ not stable under π^{ℓ′}𝔬".into());
    }
    let expect_e: Vec<u32> = sets.e_prime.iter().copied().filter(|x| sets.h_ell.binary_search(x).is_ok()).collect();
    if sets.e != expect_e {
        bad.push("E ≠ E′ ∩ h^ℓ".into());
    }
    if ring.r().is_multiple_of(2) && sets.e != sets.e_prime {
        bad.push("E ≠ E′ for even r".into());
    }
    let outside: Vec<u32> = sets.e_prime.iter().copied().filter(|&x| ring.val(x) < lp).collect();
    if !outside.iter().all(|x| sets.h_ell.binary_search(x).is_ok()) {
        bad.push("E′ \\ π^{ℓ′}𝔬 ⊄ h^ℓ".into());
    }
    if let Some(s) = orbit.s {
        let k = orbit.k;
        if 2 * k < l + s {
            let mut cosets: Vec<u32> = outside.iter().map(|&x| ring.reduce_to(x, orbit.small())).collect();
            cosets.sort_unstable();
            cosets.dedup();
            if cosets.len() > 1 {
                bad.push(format!("2k − s < ℓ but E′ meets {} nonzero cosets of π^{{ℓ′}}𝔬", cosets.len()));
            }
            if outside.iter().any(|&x| ring.val(x) != k) {
                bad.push("2k − s < ℓ but some λ ∈ E′ \\ π^{ℓ′}𝔬 has i_λ ≠ k".into());
            }
        }
        for &x in &outside {
            let inv = lambda_invariants(orbit, x);
            if (2 * inv.j + inv.i) as i64 != (2 * lp + s) as i64 - ring.desc().epsilon() as i64 {
                bad.push(format!("λ = {} violates 2j + i = 2ℓ′ + s − ε", ring.encode(x)));
            }
            let m = delta_max(l, inv.i, k, s);
            let simplified = if 2 * k >= l + s { ceil_half(l as i64 - s as i64) } else { l as i64 - k as i64 };
            if m != simplified {
                bad.push(format!("δ maximum does not simplify for λ = {}", ring.encode(x)));
            }
            if s < k && inv.delta.is_some_and(|d| d < 0) {
                bad.push(format!("s < k but δ < 0 for λ = {}", ring.encode(x)));
            }
        }
    }
    bad
}

/// One row of the group-level check: the four equivalent conditions for λ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupConditionRow {
    /// λ.
    pub lambda: u32,
    /// (1): the (x, y)-scan.
    pub scan: bool,
    /// (2): every [e_λ, X] ∈ K^ℓ with X ∈ D_S^ℓ lies in ker ψ_[A].
    pub single_commutators: bool,
    /// (3): every [e_λ^c, X] ∈ K^ℓ lies in ker ψ_[A].
    pub power_commutators: bool,
    /// (4): ψ_[A] extends to D_S^ℓ⟨e_λ⟩, i.e. it is trivial on K^ℓ ∩ [G, G].
    pub extends: bool,
}

impl GroupConditionRow {
    /// Whether all four conditions agree.
    pub fn consistent(&self) -> bool {
        self.scan == self.single_commutators && self.scan == self.power_commutators && self.scan == self.extends
    }
}

/// Evaluates conditions (1)–(4) for every λ ∈ h^{ℓ′}.
pub fn group_condition_equivalence(orbit: &OrbitClass, psi: &AdditiveCharacter, groups: &NamedSubgroups, limit: u64) -> Result<Vec<GroupConditionRow>> {
    let ring = orbit.ring();
    let pairs = admissible_pairs(orbit);
    let d = &groups.d_s_ell;
    let k = &groups.k_ell;
    let in_kernel = |m: &Mat2| -> Result<bool> { Ok(psi_bracket_eval(orbit, psi, m)?.is_one()) };
    let mut rows = Vec::new();
    for lam in h_set(orbit, orbit.ell_prime()) {
        let scan = scan_condition(ring, psi, orbit.ell(), &pairs, lam);
        let e = orbit.e(lam);
        let mut powers = vec![e];
        let mut p = e.mul(ring, &e);
        while p != Mat2::identity() {
            powers.push(p);
            p = p.mul(ring, &e);
        }
        let mut single = true;
        let mut power = true;
        for (c, ec) in powers.iter().enumerate() {
            for x in d.iter() {
                let comm = ec.commutator(ring, &x);
                if k.contains(&comm) && !in_kernel(&comm)? {
                    power = false;
                    if c == 0 {
                        single = false;
                    }
                }
            }
        }
        let mut gens = d.generators(ring);
        gens.push(e);
        let g = GroupSet::closure(ring, "D_S^l<e>", &gens, limit)?;
        let derived = commutator_subgroup(ring, &g, &g, limit)?;
        let mut extends = true;
        for m in derived.iter().filter(|m| k.contains(m)) {
            if !in_kernel(&m)? {
                extends = false;
                break;
            }
        }
        rows.push(GroupConditionRow { lambda: lam, scan, single_commutators: single, power_commutators: power, extends });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::{build_named_subgroups, classify_and_census};
    use crate::tdvr::Tower;

    fn setup(spec: &str) -> (Tower, AdditiveCharacter) {
        let t = Tower::new(spec.parse().unwrap()).unwrap();
        let p = AdditiveCharacter::new(t.top().clone()).unwrap();
        (t, p)
    }

    #[test]
    fn f_g_identity_exhaustive() {
        let (t, _) = setup("laurent:2:4");
        let ring = t.top();
        for o in classify_and_census(&t).unwrap().cyclic {
            for lam in ring.elements() {
                for x in ring.elements() {
                    for y in ring.elements() {
                        let (f, g) = f_g_eval(&o, lam, x, y);
                        let want = ring.sub(ring.mul(lam, ring.sub(g, 1)), ring.mul(ring.mul(lam, lam), ring.mul(x, y)));
                        assert_eq!(f, want);
                    }
                }
            }
            assert_eq!(f_g_eval(&o, 0, 1, 0), (0, 1));
        }
    }

    #[test]
    fn beta_zero_r4_h_set() {
        let (t, _) = setup("laurent:2:4");
        let ring = t.top();
        let o = OrbitClass::new(&t, 1, 0, 0).unwrap();
        let want: Vec<u32> = ring.elements().filter(|&x| ring.val(x) >= 1).collect();
        assert_eq!(h_set(&o, 2), want);
        assert_eq!(h_set(&o, 4).len(), 4);
    }

    #[test]
    fn lambda_zero_and_beta() {
        let (t, _) = setup("laurent:2:5");
        let ring = t.top();
        for o in classify_and_census(&t).unwrap().cyclic {
            let z = lambda_invariants(&o, 0);
            assert_eq!((z.i, z.j), (ring.r(), o.k));
            assert_eq!(lambda_invariants(&o, o.beta_lift).j, o.ell_prime());
        }
    }

    fn ideal(ring: &Ring, i: u32) -> Vec<u32> {
        ring.elements().filter(|&x| ring.val(x) >= i).collect()
    }

    #[test]
    fn sandwich_at_r3() {
        let (t, p) = setup("laurent:2:3");
        let o = OrbitClass::new(&t, 1, 0, 0).unwrap();
        let b = eprime_brute(&o, &p).unwrap();
        assert_eq!(b.e_prime, ideal(t.top(), 1));
        assert!(check_properties(&o, &b).is_empty());
    }

    #[test]
    fn char2_unit_beta_odd_r_is_ideal() {
        let (t, p) = setup("laurent:2:5");
        for o in classify_and_census(&t).unwrap().cyclic.iter().filter(|o| o.k == 0) {
            assert_eq!(eprime_brute(o, &p).unwrap().e_prime, ideal(t.top(), 2));
        }
    }

    #[test]
    fn char0_closed_forms() {
        let (t, p) = setup("2adic:2:5");
        for o in classify_and_census(&t).unwrap().cyclic.iter().filter(|o| o.k > 0) {
            let b = eprime_brute(o, &p).unwrap();
            assert_eq!(b.e_prime, ideal(t.top(), 2));
            assert_eq!(eprime_closed(o, &p).unwrap(), ExtensionSets { method: Method::Closed, ..b });
        }
        let (t, p) = setup("2adic:2:4");
        let mut in_range = 0;
        for o in classify_and_census(&t).unwrap().cyclic.iter() {
            match eprime_closed(o, &p) {
                Ok(c) => {
                    assert_eq!(o.k, 0);
                    assert_eq!(c.e_prime, ideal(t.top(), 2));
                    assert_eq!(c.e_prime, eprime_brute(o, &p).unwrap().e_prime);
                    in_range += 1;
                }
                Err(e) => {
                    assert!(o.k > 0);
                    assert!(matches!(e, Error::OutOfRange(_)));
                }
            }
        }
        assert_eq!(in_range, 2);
    }

    #[test]
    fn ramified_closed_form_matches_scan() {
        let (t, p) = setup("eis:2:9:2");
        let census = classify_and_census(&t).unwrap();
        let o = census.cyclic.iter().find(|o| o.k > 0).unwrap();
        let c = eprime_closed(o, &p).unwrap();
        assert_eq!(c.e_prime, ideal(t.top(), 4));
        assert_eq!(c.e_prime, eprime_brute(o, &p).unwrap().e_prime);
    }

    #[test]
    fn char2_brute_matches_closed() {
        for spec in ["laurent:2:3", "laurent:2:4", "laurent:2:5"] {
            let (t, p) = setup(spec);
            for o in classify_and_census(&t).unwrap().cyclic {
                let b = eprime_brute(&o, &p).unwrap();
                assert!(check_properties(&o, &b).is_empty(), "{}", o.label());
                let c = eprime_closed(&o, &p).unwrap();
                assert_eq!(b.e_prime, c.e_prime, "{}", o.label());
                assert_eq!(b.e, c.e);
            }
        }
    }

    #[test]
    fn nontrivial_eprime_counts_frozen() {
        // Orbits whose E′ strictly contains π^{ℓ′}𝔬, from the default-ψ scan.
        for (spec, want) in [("laurent:2:4", 2), ("laurent:2:5", 3), ("2adic:2:4", 3), ("2adic:2:5", 0)] {
            let (t, p) = setup(spec);
            let n = classify_and_census(&t)
                .unwrap()
                .cyclic
                .iter()
                .filter(|o| eprime_brute(o, &p).unwrap().e_prime.len() > ideal(t.top(), o.ell_prime()).len())
                .count();
            assert_eq!(n, want, "{spec}");
        }
    }

    #[test]
    fn closed_form_rejects_non_top_digit_psi() {
        let (t, _) = setup("laurent:2:4");
        let alt = AdditiveCharacter::alternate(t.top().clone()).unwrap();
        let o = OrbitClass::new(&t, 1, 0, 1).unwrap();
        assert!(matches!(eprime_closed(&o, &alt), Err(Error::Domain(_))));
    }

    #[test]
    fn group_conditions_agree_with_scan() {
        for spec in ["laurent:2:3", "laurent:2:4"] {
            let (t, p) = setup(spec);
            for o in classify_and_census(&t).unwrap().cyclic {
                let g = build_named_subgroups(&o, &t, &p, 1 << 30).unwrap();
                for row in group_condition_equivalence(&o, &p, &g, 1 << 30).unwrap() {
                    assert!(row.consistent(), "{} {:?}", o.label(), row);
                    if t.top().val(row.lambda) >= o.ell_prime() {
                        assert!(row.scan);
                    }
                }
            }
        }
    }
}
