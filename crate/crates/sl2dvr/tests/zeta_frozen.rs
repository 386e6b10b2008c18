//! Zeta polynomials of SL₂(𝔬_r) for q = 2, r ≤ 4, frozen from the independent
//! regular-representation oracle in `tests/oracles/zeta_regular_rep.py`.

use std::collections::BTreeMap;

use sl2dvr::tdvr::RingDesc;
use sl2dvr::zeta::{compare, oracle_config, primitive_part, zeta_oracle};

/// (ring, class count, (dim, count) pairs).
type Frozen = (&'static str, usize, &'static [(u64, u64)]);

const FROZEN: &[Frozen] = &[
    ("2adic:2:1", 3, &[(1, 2), (2, 1)]),
    ("2adic:2:2", 10, &[(1, 4), (2, 2), (3, 4)]),
    ("2adic:2:3", 30, &[(1, 4), (2, 6), (3, 12), (4, 2), (6, 6)]),
    ("2adic:2:4", 76, &[(1, 4), (2, 6), (3, 28), (4, 2), (6, 26), (8, 6), (12, 2), (24, 2)]),
    ("laurent:2:1", 3, &[(1, 2), (2, 1)]),
    ("laurent:2:2", 10, &[(1, 4), (2, 2), (3, 4)]),
    ("laurent:2:3", 24, &[(1, 4), (2, 2), (3, 12), (4, 3), (6, 2), (12, 1)]),
    ("laurent:2:4", 58, &[(1, 4), (2, 2), (3, 12), (4, 7), (6, 18), (8, 5), (12, 9), (24, 1)]),
];

#[test]
fn oracle_matches_frozen_degrees() {
    let cfg = oracle_config(1 << 15, 0);
    for &(spec, classes, coeffs) in FROZEN {
        let p = zeta_oracle(spec.parse().unwrap(), &cfg).unwrap();
        assert_eq!(p.coeffs, coeffs.iter().copied().collect::<BTreeMap<_, _>>(), "{spec}");
        assert_eq!(p.count(), classes as u64, "{spec}");
    }
}

#[test]
fn oracle_is_independent_of_seed() {
    let a = zeta_oracle("laurent:2:4".parse().unwrap(), &oracle_config(1 << 15, 0)).unwrap();
    let b = zeta_oracle("laurent:2:4".parse().unwrap(), &oracle_config(1 << 15, 99)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn degree_bounds_at_r4() {
    let cfg = oracle_config(1 << 15, 0);
    for spec in ["2adic:2:4", "laurent:2:4"] {
        let p = zeta_oracle(spec.parse().unwrap(), &cfg).unwrap();
        assert_eq!(p.degree(), 3 * 8, "{spec}");
    }
}

#[test]
fn odd_level_leading_terms() {
    let cfg = oracle_config(1 << 15, 0);
    let lead = |spec: &str| {
        let p = zeta_oracle(spec.parse().unwrap(), &cfg).unwrap();
        (p.degree(), p.coeff(p.degree()))
    };
    assert_eq!(lead("2adic:2:5"), (48, 4));
    assert_eq!(lead("laurent:2:5"), (48, 4));
    // At r = 3 the 2-adic level is not yet above the ramification index and
    // the leading terms differ.
    assert_eq!(lead("2adic:2:3"), (6, 6));
    assert_eq!(lead("laurent:2:3"), (12, 1));
}

#[test]
fn primitive_parts_are_nonnegative() {
    let cfg = oracle_config(1 << 15, 0);
    for family in ["2adic", "laurent"] {
        for r in 2..=4 {
            let d: RingDesc = format!("{family}:2:{r}").parse().unwrap();
            let hi = zeta_oracle(d, &cfg).unwrap();
            let lo = zeta_oracle(d.at_level(r - 1).unwrap(), &cfg).unwrap();
            assert!(primitive_part(&hi, &lo).is_ok(), "{d}");
        }
    }
}

#[test]
fn z8_and_laurent_r3_comparison_is_recorded() {
    let cfg = oracle_config(1 << 15, 0);
    let a = zeta_oracle("2adic:2:3".parse().unwrap(), &cfg).unwrap();
    let b = zeta_oracle("laurent:2:3".parse().unwrap(), &cfg).unwrap();
    let rep = compare(&a, &b, 2, 3);
    assert!(!rep.equal);
    assert_eq!(rep.differing, vec![2, 4, 6, 12]);
}
