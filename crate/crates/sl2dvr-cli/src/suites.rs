//! Acceptance suites: each numbered criterion is a list of named assertions
//! that are evaluated exactly and reported individually.

use std::collections::BTreeMap;
use std::sync::Arc;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use sl2dvr::chars::{build_named_subgroups, classify_and_census, OrbitClass, ReductionType};
use sl2dvr::construct::{c_case, quartic_symmetry, verify_c_spectra, verify_stabilizers, OrbitTables, SpectrumEntry};
use sl2dvr::extsets::{check_properties, eprime_brute, eprime_closed, group_condition_equivalence};
use sl2dvr::mat2::DEFAULT_ENUMERATION_LIMIT;
use sl2dvr::oracle::{field_for, OracleConfig};
use sl2dvr::tdvr::{xi_compute, AdditiveCharacter, Fq, RingDesc, Tower};
use sl2dvr::zeta::{compare, primitive_characters, sl2_table, zeta_oracle, ZetaMethod, ZetaPoly};
use sl2dvr::Error;

/// One-line titles of the acceptance criteria, indexed from 1.
pub const CRITERIA: [&str; 10] = [
    "group-algebra separation at q = 2, r = 4",
    "six primitive degree-8 characters of SL2(Z/16)",
    "X^2 coefficient unchanged from r = 2 to r = 3",
    "E' brute force equals closed form",
    "group-level equivalence for E'",
    "C_S^l' spectra of split non-semisimple orbits",
    "stabilizers of C_S^l' characters",
    "dimension laws",
    "xi uniqueness and quartic root-count symmetry",
    "independence of the additive character",
];

/// Rings on which E′ is checked.
pub const EPRIME_RINGS: [&str; 7] = ["laurent:2:3", "laurent:2:4", "laurent:2:5", "laurent:4:3", "2adic:2:4", "2adic:2:5", "eis:2:9:2"];

/// Rings on which the C_S^{ℓ′} spectra and stabilizers are checked.
pub const SPECTRA_RINGS: [&str; 2] = ["laurent:2:3", "laurent:2:5"];

/// A named group of criteria runnable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Criteria 4, 5 and the E′ half of 10.
    Eprime,
    /// Criteria 6, 9 and the spectral half of 10.
    #[value(name = "props5")]
    #[serde(rename = "props5")]
    Spectra,
    /// Criterion 7.
    #[value(name = "thm15")]
    #[serde(rename = "thm15")]
    Stabilizers,
    /// Criteria 1, 2, 3 and 8.
    Zeta,
    /// Every criterion.
    All,
}

/// The outcome of one assertion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assertion {
    /// Criterion number, 1 to 10.
    pub criterion: u8,
    /// Short identifier.
    pub name: String,
    /// Whether the assertion holds.
    pub passed: bool,
    /// Observed values.
    pub detail: String,
}

impl Assertion {
    fn new(criterion: u8, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { criterion, name: name.into(), passed, detail: detail.into() }
    }
}

/// Per-criterion verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionOutcome {
    /// Criterion number.
    pub criterion: u8,
    /// Title.
    pub title: String,
    /// True when every assertion of the criterion holds.
    pub passed: bool,
    /// Number of assertions evaluated.
    pub assertions: usize,
    /// Number of failing assertions.
    pub failures: usize,
}

/// Settings shared by all suites.
#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    /// Capacity limit for character tables.
    pub max_group_order: u64,
    /// Seed for the oracle's randomized steps.
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { max_group_order: 1 << 15, seed: 0 }
    }
}

impl SuiteConfig {
    fn oracle(&self) -> OracleConfig {
        sl2dvr::zeta::oracle_config(self.max_group_order, self.seed)
    }
}

/// Runs the criteria of a suite, in criterion order.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<Assertion>> {
    let criteria: &[u8] = match suite {
        Suite::Eprime => &[4, 5, 10],
        Suite::Spectra => &[6, 9, 10],
        Suite::Stabilizers => &[7],
        Suite::Zeta => &[1, 2, 3, 8],
        Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
    };
    let mut out = Vec::new();
    for &c in criteria {
        match (suite, c) {
            (Suite::Eprime, 10) => out.extend(criterion_10_eprime(cfg)?),
            (Suite::Spectra, 10) => out.extend(criterion_10_spectra(cfg)?),
            _ => out.extend(run_criterion(c, cfg)?),
        }
    }
    Ok(out)
}

/// Runs one criterion in full.
pub fn run_criterion(c: u8, cfg: &SuiteConfig) -> Result<Vec<Assertion>> {
    match c {
        1 => criterion_1(cfg),
        2 => criterion_2(cfg),
        3 => criterion_3(cfg),
        4 => criterion_4(cfg),
        5 => criterion_5(cfg),
        6 => criterion_6(cfg),
        7 => criterion_7(cfg),
        8 => criterion_8(cfg),
        9 => Ok(criterion_9()),
        10 => {
            let mut v = criterion_10_eprime(cfg)?;
            v.extend(criterion_10_spectra(cfg)?);
            Ok(v)
        }
        _ => Err(Error::Config(format!("no criterion {c}")).into()),
    }
}

/// Groups assertions into per-criterion verdicts, in criterion order.
pub fn summarize(assertions: &[Assertion]) -> Vec<CriterionOutcome> {
    let mut by: BTreeMap<u8, (usize, usize)> = BTreeMap::new();
    for a in assertions {
        let e = by.entry(a.criterion).or_default();
        e.0 += 1;
        e.1 += usize::from(!a.passed);
    }
    by.into_iter()
        .map(|(c, (n, f))| CriterionOutcome { criterion: c, title: CRITERIA[c as usize - 1].into(), passed: n > 0 && f == 0, assertions: n, failures: f })
        .collect()
}

fn desc(spec: &str) -> Result<RingDesc> {
    spec.parse().with_context(|| format!("ring spec {spec}"))
}

fn setup(spec: &str, alternate: bool) -> Result<(Tower, AdditiveCharacter)> {
    let tower = Tower::new(desc(spec)?)?;
    let ring = tower.top().clone();
    let psi = if alternate { AdditiveCharacter::alternate(ring)? } else { AdditiveCharacter::new(ring)? };
    Ok((tower, psi))
}

fn zeta_with_classes(spec: &str, cfg: &SuiteConfig) -> Result<(ZetaPoly, usize)> {
    let d = desc(spec)?;
    let ring = sl2dvr::tdvr::Ring::new(d)?;
    let t = sl2_table(&ring, Arc::new(field_for(d)?), &cfg.oracle())?;
    let p = ZetaPoly::from_degrees(ZetaMethod::Oracle, t.degrees().iter().copied());
    Ok((p, t.classes().count()))
}

fn criterion_1(cfg: &SuiteConfig) -> Result<Vec<Assertion>> {
    let mut out = Vec::new();
    let mut polys = Vec::new();
    for spec in ["2adic:2:4", "laurent:2:4"] {
        let (p, classes) = zeta_with_classes(spec, cfg)?;
        out.push(Assertion::new(1, format!("mass {spec}"), p.mass() == 3072, format!("sum count*dim^2 = {}", p.mass())));
        out.push(Assertion::new(1, format!("entries {spec}"), p.count() == classes as u64, format!("{} characters, {classes} classes", p.count())));
        polys.push(p);
    }
    let rep = compare(&polys[0], &polys[1], 2, 4);
    out.push(Assertion::new(1, "polynomials differ", !rep.equal, format!("differing exponents {:?}", rep.differing)));
    out.push(Assertion::new(1, "exponent 8 differs", rep.differing.contains(&8), format!("X^8: {} vs {}", polys[0].coeff(8), polys[1].coeff(8))));
    Ok(out)
}

fn criterion_2(cfg: &SuiteConfig) -> Result<Vec<Assertion>> {
    let (tower, psi) = setup("2adic:2:4", false)?;
    let ring = tower.top();
    let t = sl2_table(ring, Arc::new(field_for(ring.desc())?), &cfg.oracle())?;
    let prim = primitive_characters(&tower, &psi, &t)?;
    let n = prim.iter().filter(|c| c.dim == 8).count();
    Ok(vec![Assertion::new(2, "primitive degree-8 count", n == 6, format!("{n} primitive characters of degree 8 among {} primitive", prim.len()))])
}

fn criterion_3(cfg: &SuiteConfig) -> Result<Vec<Assertion>> {
    let oc = cfg.oracle();
    let mut out = Vec::new();
    for family in ["laurent", "2adic"] {
        let p3 = zeta_oracle(desc(&format!("{family}:2:3"))?, &oc)?;
        let p2 = zeta_oracle(desc(&format!("{family}:2:2"))?, &oc)?;
        out.push(Assertion::new(3, format!("X^2 coefficient {family}"), p3.coeff(2) == p2.coeff(2), format!("r = 3: {}, r = 2: {}", p3.coeff(2), p2.coeff(2))));
    }
    Ok(out)
}

/// Summary of the brute E′ outputs of a ring: sorted (type, |E′|, |E|).
fn eprime_summary(orbits: &[OrbitClass], sizes: &[(usize, usize)]) -> Vec<(ReductionType, usize, usize)> {
    let mut v: Vec<_> = orbits.iter().zip(sizes).map(|(o, &(ep, e))| (o.rtype, ep, e)).collect();
    v.sort();
    v
}

struct EprimeRun {
    assertions: Vec<Assertion>,
    summary: Vec<(ReductionType, usize, usize)>,
}

fn eprime_ring(spec: &str, alternate: bool, criterion: u8) -> Result<EprimeRun> {
    let (tower, psi) = setup(spec, alternate)?;
    let census = classify_and_census(&tower)?;
    let results: Vec<_> = census
        .cyclic
        .par_iter()
        .map(|o| -> Result<_> {
            let brute = eprime_brute(o, &psi)?;
            let violations = check_properties(o, &brute);
            let closed = match eprime_closed(o, &psi) {
                Ok(c) => Some(c.e_prime == brute.e_prime),
                Err(Error::OutOfRange(_) | Error::Domain(_)) => None,
                Err(e) => return Err(e.into()),
            };
            Ok(((brute.e_prime.len(), brute.e.len()), violations, closed))
        })
        .collect::<Result<_>>()?;
    let compared = results.iter().filter(|r| r.2.is_some()).count();
    let mismatched: Vec<String> = census.cyclic.iter().zip(&results).filter(|(_, r)| r.2 == Some(false)).map(|(o, _)| o.label()).collect();
    let violations: Vec<String> = census.cyclic.iter().zip(&results).flat_map(|(o, r)| r.1.iter().map(move |v| format!("{}: {v}", o.label()))).collect();
    let tag = if alternate { " (alternate psi)" } else { "" };
    let assertions = vec![
        Assertion::new(
            criterion,
            format!("brute = closed {spec}{tag}"),
            mismatched.is_empty(),
            format!("{} orbits, {compared} within closed-form hypotheses, mismatches {mismatched:?}", results.len()),
        ),
        Assertion::new(criterion, format!("E' properties {spec}{tag}"), violations.is_empty(), format!("{} violations {violations:?}", violations.len())),
    ];
    let sizes: Vec<_> = results.iter().map(|r| r.0).collect();
    Ok(EprimeRun { assertions, summary: eprime_summary(&census.cyclic, &sizes) })
}

fn criterion_4(_cfg: &SuiteConfig) -> Result<Vec<Assertion>> {
    let mut out = Vec::new();
    for spec in EPRIME_RINGS {
        out.extend(eprime_ring(spec, false, 4)?.assertions);
    }
    Ok(out)
}

fn criterion_5(_cfg: &SuiteConfig) -> Result<Vec<Assertion>> {
    let mut out = Vec::new();
    for spec in ["laurent:2:3", "laurent:2:4", "2adic:2:3", "2adic:2:4"] {
        let (tower, psi) = setup(spec, false)?;
        let census = classify_and_census(&tower)?;
        let rows: Vec<(String, usize, usize)> = census
            .cyclic
            .par_iter()
            .map(|o| -> Result<_> {
                let g = build_named_subgroups(o, &tower, &psi, DEFAULT_ENUMERATION_LIMIT)?;
                let rows = group_condition_equivalence(o, &psi, &g, DEFAULT_ENUMERATION_LIMIT)?;
                Ok((o.label(), rows.len(), rows.iter().filter(|r| !r.consistent()).count()))
            })
            .collect::<Result<_>>()?;
        let total: usize = rows.iter().map(|r| r.1).sum();
        let bad: Vec<&str> = rows.iter().filter(|r| r.2 > 0).map(|r| r.0.as_str()).collect();
        out.push(Assertion::new(5, format!("group conditions {spec}"), bad.is_empty(), format!("{} orbits, {total} values of lambda, mismatching orbits {bad:?}", rows.len())));
    }
    Ok(out)
}

struct SpectraRun {
    assertions: Vec<Assertion>,
    summary: Vec<String>,
}

fn spectra_ring(spec: &str, alternate: bool, criterion: u8, cfg: &SuiteConfig) -> Result<SpectraRun> {
    let (tower, psi) = setup(spec, alternate)?;
    let census = classify_and_census(&tower)?;
    let ctx = Arc::new(field_for(tower.top().desc())?);
    let oc = cfg.oracle();
    let orbits: Vec<&OrbitClass> = census.cyclic.iter().filter(|o| o.rtype == ReductionType::SplitNonSemisimple).collect();
    let per: Vec<(String, String, bool)> = orbits
        .par_iter()
        .map(|o| -> Result<_> {
            let case = c_case(o)?;
            let g = build_named_subgroups(o, &tower, &psi, DEFAULT_ENUMERATION_LIMIT)?;
            let tables = OrbitTables::compute(o, &psi, &g, ctx.clone(), &oc)?;
            let checks = verify_c_spectra(o, &psi, &g, &tables)?;
            let ok = !checks.is_empty() && checks.iter().all(|c| c.matches());
            let mut spectra: Vec<Vec<SpectrumEntry>> = checks.iter().map(|c| c.observed.clone()).collect();
            spectra.sort_by_key(|s| s.iter().map(|e| (e.dim, e.count)).collect::<Vec<_>>());
            let shown: Vec<String> = spectra.iter().map(|s| s.iter().map(|e| format!("{}x{}", e.count, e.dim)).collect::<Vec<_>>().join("+")).collect();
            Ok((o.label(), format!("{case:?} [{}]", shown.join(", ")), ok))
        })
        .collect::<Result<_>>()?;
    let bad: Vec<&str> = per.iter().filter(|p| !p.2).map(|p| p.0.as_str()).collect();
    let tag = if alternate { " (alternate psi)" } else { "" };
    let cases: Vec<&str> = per.iter().map(|p| p.1.as_str()).collect();
    let mut summary: Vec<String> = per.iter().map(|p| p.1.clone()).collect();
    summary.sort();
    Ok(SpectraRun {
        assertions: vec![Assertion::new(
            criterion,
            format!("C spectra {spec}{tag}"),
            !per.is_empty() && bad.is_empty(),
            format!("{} orbits, per-orbit spectra {cases:?}, mismatching {bad:?}", per.len()),
        )],
        summary,
    })
}

fn criterion_6(cfg: &SuiteConfig) -> Result<Vec<Assertion>> {
    let mut out = Vec::new();
    for spec in SPECTRA_RINGS {
        out.extend(spectra_ring(spec, false, 6, cfg)?.assertions);
    }
    Ok(out)
}

fn criterion_7(cfg: &SuiteConfig) -> Result<Vec<Assertion>> {
    let mut out = Vec::new();
    let oc = cfg.oracle();
    for spec in SPECTRA_RINGS {
        let (tower, psi) = setup(spec, false)?;
        let census = classify_and_census(&tower)?;
        let ctx = Arc::new(field_for(tower.top().desc())?);
        let orbits: Vec<&OrbitClass> = census.cyclic.iter().filter(|o| c_case(o).is_ok()).collect();
        let per: Vec<(String, usize, usize)> = orbits
            .par_iter()
            .map(|o| -> Result<_> {
                let g = build_named_subgroups(o, &tower, &psi, DEFAULT_ENUMERATION_LIMIT)?;
                let tables = OrbitTables::compute(o, &psi, &g, ctx.clone(), &oc)?;
                let e = eprime_brute(o, &psi)?;
                let rows = verify_stabilizers(o, &g, &tables, &e, &oc)?;
                Ok((o.label(), rows.len(), rows.iter().filter(|r| !r.ok()).count()))
            })
            .collect::<Result<_>>()?;
        let total: usize = per.iter().map(|p| p.1).sum();
        let bad: Vec<&str> = per.iter().filter(|p| p.2 > 0 || p.1 == 0).map(|p| p.0.as_str()).collect();
        out.push(Assertion::new(7, format!("stabilizers {spec}"), !per.is_empty() && bad.is_empty(), format!("{} orbits, {total} characters, failing orbits {bad:?}", per.len())));
    }
    Ok(out)
}

fn criterion_8(cfg: &SuiteConfig) -> Result<Vec<Assertion>> {
    let oc = cfg.oracle();
    let mut out = Vec::new();
    for family in ["laurent", "2adic"] {
        for r in 2..=4 {
            let spec = format!("{family}:2:{r}");
            let (tower, psi) = setup(&spec, false)?;
            let ring = tower.top();
            let t = sl2_table(ring, Arc::new(field_for(ring.desc())?), &oc)?;
            let prim = primitive_characters(&tower, &psi, &t)?;
            let bad = prim.iter().filter(|c| c.dim % c.gamma != 0).count();
            out.push(Assertion::new(8, format!("gamma divides dim {spec}"), bad == 0, format!("{} primitive characters, {bad} violations", prim.len())));
        }
        let spec = format!("{family}:2:3");
        let p = zeta_oracle(desc(&spec)?, &oc)?;
        out.push(Assertion::new(8, format!("max degree bound {spec}"), p.degree() <= 3 * 4, format!("max degree {} <= 12", p.degree())));
        out.push(Assertion::new(8, format!("no degree 8 {spec}"), p.coeff(8) == 0, format!("X^8 coefficient {}", p.coeff(8))));
    }
    for (spec, ss, irr) in [("laurent:2:3", 12, 4), ("2adic:2:5", 48, 16)] {
        let (tower, psi) = setup(spec, false)?;
        let ring = tower.top();
        let census = classify_and_census(&tower)?;
        let types: BTreeMap<usize, ReductionType> = census.cyclic.iter().map(|o| (o.orbit_id, o.rtype)).collect();
        let t = sl2_table(ring, Arc::new(field_for(ring.desc())?), &oc)?;
        let prim = primitive_characters(&tower, &psi, &t)?;
        let dims = |rt: ReductionType| {
            let mut v: Vec<u64> = prim.iter().filter(|c| types[&c.orbit_id] == rt).map(|c| c.dim).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let (got_ss, got_irr) = (dims(ReductionType::SplitSemisimple), dims(ReductionType::Irreducible));
        out.push(Assertion::new(8, format!("split semisimple dims {spec}"), got_ss == [ss], format!("{got_ss:?}, expected [{ss}]")));
        out.push(Assertion::new(8, format!("irreducible dims {spec}"), got_irr == [irr], format!("{got_irr:?}, expected [{irr}]")));
    }
    Ok(out)
}

fn criterion_9() -> Vec<Assertion> {
    let mut out = Vec::new();
    for q in [2u32, 4, 8, 16] {
        let k = Fq::new(q).expect("supported field");
        let mut bad = Vec::new();
        for a in 1..q {
            let bpsi = |x: u32| k.trace(k.mul(a, x)) == 1;
            let kernel: Vec<u32> = k.elements().filter(|&x| !bpsi(x)).collect();
            let image = |z: u32| {
                let mut v: Vec<u32> = k.elements().map(|x| k.add(k.mul(z, k.mul(x, x)), x)).collect();
                v.sort_unstable();
                v.dedup();
                v
            };
            let solutions: Vec<u32> = k.elements().filter(|&z| image(z) == kernel).collect();
            let computed = xi_compute(&k, bpsi).ok();
            if solutions.len() != 1 || computed != Some(solutions[0]) {
                bad.push(a);
            }
        }
        out.push(Assertion::new(9, format!("xi unique q = {q}"), bad.is_empty(), format!("{} characters, failing {bad:?}", q - 1)));
    }
    for q in [2u32, 4] {
        let k = Fq::new(q).expect("supported field");
        let mut tuples = 0;
        let mut bad = 0;
        for eta in 1..q {
            for b in 0..q {
                for c in 0..q {
                    for d in 0..q {
                        tuples += 1;
                        bad += usize::from(!quartic_symmetry(&k, eta, b, c, d));
                    }
                }
            }
        }
        out.push(Assertion::new(9, format!("quartic symmetry q = {q}"), bad == 0, format!("{tuples} parameter tuples, {bad} asymmetric")));
    }
    out
}

fn criterion_10_eprime(_cfg: &SuiteConfig) -> Result<Vec<Assertion>> {
    let mut out = Vec::new();
    for spec in EPRIME_RINGS {
        let base = eprime_ring(spec, false, 10)?;
        let alt = eprime_ring(spec, true, 10)?;
        let same_verdicts = base.assertions.iter().zip(&alt.assertions).all(|(a, b)| a.passed == b.passed);
        out.extend(alt.assertions);
        out.push(Assertion::new(
            10,
            format!("E' outputs unchanged {spec}"),
            same_verdicts && base.summary == alt.summary,
            format!("(type, |E'|, |E|) multiset equal: {}", base.summary == alt.summary),
        ));
    }
    Ok(out)
}

fn criterion_10_spectra(cfg: &SuiteConfig) -> Result<Vec<Assertion>> {
    let mut out = Vec::new();
    for spec in SPECTRA_RINGS {
        let base = spectra_ring(spec, false, 10, cfg)?;
        let alt = spectra_ring(spec, true, 10, cfg)?;
        out.extend(alt.assertions);
        out.push(Assertion::new(10, format!("C spectra unchanged {spec}"), base.summary == alt.summary, format!("{:?}", alt.summary)));
    }
    Ok(out)
}
