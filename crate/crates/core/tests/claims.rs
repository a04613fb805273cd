//! Claim-file handling and individual basis checks.

use std::sync::OnceLock;

use aisr::basis::{verify_soundness, BasisClaim, ClaimSet, ClaimSource, Status};
use aisr::catalog::Catalog;
use aisr::{parse_identity, satisfies, Error};

fn catalog() -> &'static Catalog {
    static CAT: OnceLock<Catalog> = OnceLock::new();
    CAT.get_or_init(|| Catalog::open_default().expect("catalog"))
}

fn claims() -> ClaimSet {
    ClaimSet::for_catalog(catalog()).expect("claims")
}

#[test]
fn one_claim_per_table_algebra() {
    let c = claims();
    assert_eq!(c.len(), 93);
    for e in catalog().all_table1() {
        assert!(c.get(&e.name).is_ok(), "{}", e.name);
    }
    let nfb: Vec<_> = c.claims().filter(|c| c.status == Status::NonfinitelyBased).collect();
    assert_eq!(nfb.len(), 1);
    assert_eq!(nfb[0].algebra, "S_(4,435)");
}

#[test]
fn source_counts() {
    let c = claims();
    let count = |f: fn(&ClaimSource) -> bool| c.claims().filter(|x| f(&x.source)).count();
    assert_eq!(count(|s| matches!(s, ClaimSource::PrintedBasis)), 25);
    assert_eq!(count(|s| matches!(s, ClaimSource::DualOf(_))), 16);
    assert_eq!(count(|s| matches!(s, ClaimSource::BasisOf(_))), 6);
    assert_eq!(count(|s| matches!(s, ClaimSource::ZeroAdjunction(_))), 1);
    assert_eq!(count(|s| matches!(s, ClaimSource::Cited(_))), 45);
}

#[test]
fn variant_of_428_identity_fails() {
    let a = catalog().algebra("S_(4,428)").unwrap();
    let bad = parse_identity("x + yxz ≈ y + yxz + yx").unwrap();
    assert!(!satisfies(a, &bad).unwrap().holds());
    let dual = catalog().algebra("S_(4,418)").unwrap();
    assert!(!satisfies(dual, &bad.reversed()).unwrap().holds());
    let good = parse_identity("x + yxz ≈ x + yxz + yx").unwrap();
    assert!(satisfies(a, &good).unwrap().holds());
    assert!(satisfies(dual, &good.reversed()).unwrap().holds());
}

#[test]
fn dual_claims_use_reversed_schemes() {
    let c = claims();
    let own = c.schemes("S_(4,428)").unwrap();
    let via = c.schemes("S_(4,418)").unwrap();
    assert_eq!(own.len(), via.len());
    for (a, b) in own.iter().zip(&via) {
        assert_eq!(&a.reversed(), b);
    }
    assert!(verify_soundness(catalog(), &c, "S_(4,418)").unwrap().passed());
}

#[test]
fn claim_text_roundtrip() {
    for c in claims().claims() {
        let again = BasisClaim::parse(&c.to_string()).unwrap();
        assert_eq!(&again, c);
    }
}

#[test]
fn malformed_claims_are_rejected() {
    let cases = [
        "algebra S_(4,435)\nstatus nfb\nsource printed-basis\nx ≈ x^2\n",
        "algebra S_(4,401)\nstatus fb\nsource printed-basis\n",
        "algebra S_(4,401)\nstatus maybe\nsource printed-basis\nx ≈ x^2\n",
        "algebra S_(4,401)\nstatus fb\nsource printed-basis\nx ≈ \n",
    ];
    for text in cases {
        let r = BasisClaim::parse(text);
        assert!(matches!(r, Err(Error::Parse { .. } | Error::Claim { .. })), "{text:?} -> {r:?}");
    }
}

#[test]
fn dual_cycle_is_an_error() {
    let a = BasisClaim::parse("algebra A\nstatus fb\nsource dual-of B\n").unwrap();
    let b = BasisClaim::parse("algebra B\nstatus fb\nsource dual-of A\n").unwrap();
    let r = ClaimSet::from_claims([a, b]);
    assert!(matches!(r, Err(Error::Claim { .. })), "{:?}", r.map(|s| s.len()));
}
