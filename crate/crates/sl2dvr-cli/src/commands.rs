//! Subcommand implementations. Each returns a JSON document; the binary
//! renders it as JSON, CSV or plain text.

use std::sync::Arc;

use anyhow::{bail, Result};
use rayon::prelude::*;
use serde_json::{json, Value};
use sl2dvr::chars::{build_named_subgroups, classify_and_census, OrbitClass};
use sl2dvr::construct::{c_case, primitive_spectrum_predict, verify_c_spectra, OrbitTables};
use sl2dvr::extsets::{check_properties, eprime_brute, eprime_closed, ExtensionSets};
use sl2dvr::mat2::{sl2_order, DEFAULT_ENUMERATION_LIMIT};
use sl2dvr::oracle::{field_for, OracleConfig};
use sl2dvr::tdvr::{AdditiveCharacter, Ring, RingDesc, Tower};
use sl2dvr::zeta::{compare, orbit_spectrum_clifford, sl2_table, zeta_hybrid, zeta_oracle, CompareReport, ZetaPoly};

/// Which E′ evaluator(s) to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum EprimeMethod {
    /// Exhaustive scan.
    Brute,
    /// Closed form.
    Closed,
    /// Both, with a comparison.
    Both,
}

/// How to compute a zeta polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ZetaSource {
    /// Full character table.
    Oracle,
    /// Lower level plus per-orbit spectra (odd r).
    Hybrid,
}

fn ring_json(d: RingDesc) -> Value {
    json!({ "kind": d.kind.short_name(), "q": d.q, "r": d.r, "e": d.e, "spec": d.to_string() })
}

fn psi_for(tower: &Tower, alternate: bool) -> Result<AdditiveCharacter> {
    let ring = tower.top().clone();
    Ok(if alternate { AdditiveCharacter::alternate(ring)? } else { AdditiveCharacter::new(ring)? })
}

fn select(orbits: &[OrbitClass], id: Option<usize>) -> Result<Vec<&OrbitClass>> {
    match id {
        None => Ok(orbits.iter().collect()),
        Some(i) => match orbits.iter().find(|o| o.orbit_id == i) {
            Some(o) => Ok(vec![o]),
            None => bail!("no cyclic orbit with id {i}; ids are {:?}", orbits.iter().map(|o| o.orbit_id).collect::<Vec<_>>()),
        },
    }
}

/// Ring parameters.
pub fn ring(d: RingDesc) -> Result<Value> {
    let r = Ring::new(d)?;
    Ok(json!({
        "ring": ring_json(d),
        "size": d.size(),
        "units": r.unit_count(),
        "characteristic": if d.is_char2() { 2 } else { 0 },
        "ell": d.ell(),
        "ell_prime": d.ell_prime(),
        "epsilon": d.epsilon(),
        "pi": r.encode(r.pi()),
        "sl2_order": sl2_order(d.q as u64, d.r),
    }))
}

/// The census of SL₂(𝔬_{ℓ′})-orbits.
pub fn orbits(d: RingDesc) -> Result<Value> {
    let tower = Tower::new(d)?;
    let census = classify_and_census(&tower)?;
    let counts: serde_json::Map<String, Value> = census.counts().into_iter().map(|(t, n)| (t.name().to_string(), json!(n))).collect();
    Ok(json!({
        "ring": ring_json(d),
        "classes_total": census.classes_total,
        "cyclic_counts": counts,
        "non_cyclic": census.non_cyclic.len(),
        "orbits": census.cyclic.iter().map(|o| o.record()).collect::<Vec<_>>(),
    }))
}

fn sets_json(orbit: &OrbitClass, s: &ExtensionSets) -> Value {
    let ring = orbit.ring();
    let enc = |v: &[u32]| v.iter().map(|&x| ring.encode(x)).collect::<Vec<_>>();
    json!({ "e_prime": enc(&s.e_prime), "e": enc(&s.e), "e_prime_size": s.e_prime.len(), "e_size": s.e.len() })
}

/// E′ and E for the cyclic orbits of a ring.
pub fn eprime(d: RingDesc, orbit: Option<usize>, method: EprimeMethod, alternate: bool) -> Result<Value> {
    let tower = Tower::new(d)?;
    let psi = psi_for(&tower, alternate)?;
    let census = classify_and_census(&tower)?;
    let chosen = select(&census.cyclic, orbit)?;
    let rows: Vec<Value> = chosen
        .par_iter()
        .map(|o| -> Result<Value> {
            let mut row = json!({ "orbit": o.record() });
            let brute = if method != EprimeMethod::Closed { Some(eprime_brute(o, &psi)?) } else { None };
            if let Some(b) = &brute {
                row["brute"] = sets_json(o, b);
                row["violations"] = json!(check_properties(o, b));
            }
            if method != EprimeMethod::Brute {
                match eprime_closed(o, &psi) {
                    Ok(c) => {
                        if let Some(b) = &brute {
                            row["equal"] = json!(b.e_prime == c.e_prime);
                        }
                        row["closed"] = sets_json(o, &c);
                    }
                    Err(e) => row["closed_status"] = json!(e.to_string()),
                }
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(json!({ "ring": ring_json(d), "alternate_psi": alternate, "orbits": rows }))
}

/// Predicted primitive spectra, optionally checked against the oracle.
pub fn spectrum(d: RingDesc, orbit: Option<usize>, with_oracle: bool, alternate: bool, cfg: &OracleConfig) -> Result<Value> {
    let tower = Tower::new(d)?;
    let psi = psi_for(&tower, alternate)?;
    let census = classify_and_census(&tower)?;
    let chosen = select(&census.cyclic, orbit)?;
    let ctx = Arc::new(field_for(d)?);
    let rows: Vec<Value> = chosen
        .par_iter()
        .map(|o| -> Result<Value> {
            let mut row = json!({ "orbit": o.record() });
            match primitive_spectrum_predict(o) {
                Ok(p) => row["prediction"] = serde_json::to_value(&p)?,
                Err(e) => row["prediction_status"] = json!(e.to_string()),
            }
            if with_oracle {
                let mut dims = orbit_spectrum_clifford(o, &tower, &psi, ctx.clone(), cfg)?;
                dims.sort_unstable();
                row["observed"] = json!(dims);
                if c_case(o).is_ok() {
                    let g = build_named_subgroups(o, &tower, &psi, DEFAULT_ENUMERATION_LIMIT)?;
                    let tables = OrbitTables::compute(o, &psi, &g, ctx.clone(), cfg)?;
                    row["c_spectra"] = serde_json::to_value(verify_c_spectra(o, &psi, &g, &tables)?)?;
                }
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(json!({ "ring": ring_json(d), "alternate_psi": alternate, "orbits": rows }))
}

/// Class sizes and character degrees of SL₂(𝔬_r).
pub fn chartable(d: RingDesc, cfg: &OracleConfig) -> Result<Value> {
    let ring = Ring::new(d)?;
    let t = sl2_table(&ring, Arc::new(field_for(d)?), cfg)?;
    let mut degrees = t.degrees().to_vec();
    degrees.sort_unstable();
    let mut sizes = t.classes().sizes().to_vec();
    sizes.sort_unstable();
    Ok(json!({
        "ring": ring_json(d),
        "order": t.group().len(),
        "classes": t.classes().count(),
        "class_sizes": sizes,
        "degrees": degrees,
        "prime": t.ctx().p(),
    }))
}

fn zeta_entries(p: &ZetaPoly) -> Value {
    p.coeffs.iter().map(|(d, c)| json!({ "dim": d, "count": c })).collect()
}

/// The zeta polynomial of SL₂(𝔬_r).
pub fn zeta(d: RingDesc, source: ZetaSource, cfg: &OracleConfig) -> Result<(ZetaPoly, Value)> {
    let p = match source {
        ZetaSource::Oracle => zeta_oracle(d, cfg)?,
        ZetaSource::Hybrid => zeta_hybrid(d, false, cfg)?.0,
    };
    let v = json!({
        "ring": ring_json(d),
        "r": d.r,
        "method": serde_json::to_value(p.method)?,
        "zeta": zeta_entries(&p),
        "mass": p.mass(),
        "count": p.count(),
    });
    Ok((p, v))
}

/// Compares the zeta polynomials of two rings with the same residue field and level.
pub fn compare_rings(left: RingDesc, right: RingDesc, cfg: &OracleConfig) -> Result<(CompareReport, Value)> {
    if left.q != right.q || left.r != right.r {
        bail!("rings must share q and r: {left} vs {right}");
    }
    let a = zeta_oracle(left, cfg)?;
    let b = zeta_oracle(right, cfg)?;
    let rep = compare(&a, &b, left.q as u64, left.r);
    let v = json!({
        "left": { "ring": ring_json(left), "zeta": zeta_entries(&a) },
        "right": { "ring": ring_json(right), "zeta": zeta_entries(&b) },
        "report": serde_json::to_value(&rep)?,
    });
    Ok((rep, v))
}
