//! Catalog consistency and structural claims.

use aisr::catalog::Catalog;
use aisr::search::{find_embedding, is_isomorphic};
use aisr::structural::{load_structure_claims, verify_structure_claim, StructureClaim};
use aisr::{adjoin_zero, dual, power, strip_zero};

#[test]
fn every_entry_is_consistent() {
    let cat = Catalog::open_default().unwrap();
    for name in cat.names() {
        let r = cat.cross_check(name).unwrap();
        assert!(r.is_consistent(), "{name}: {r:?}");
    }
}

#[test]
fn table_algebras_are_pairwise_distinct() {
    let cat = Catalog::open_default().unwrap();
    let t = cat.all_table1();
    for (i, a) in t.iter().enumerate() {
        for b in &t[i + 1..] {
            assert!(!is_isomorphic(&a.algebra, &b.algebra), "{} ≅ {}", a.name, b.name);
        }
    }
}

#[test]
fn zero_adjunction_roundtrip() {
    let cat = Catalog::open_default().unwrap();
    let a = cat.algebra("S_(4,435)").unwrap();
    let base = strip_zero(a).unwrap();
    assert!(is_isomorphic(&base, cat.algebra("S_7").unwrap()));
    assert!(is_isomorphic(&adjoin_zero(&base), a));
    assert!(strip_zero(cat.algebra("S_(4,401)").unwrap()).is_err());
}

#[test]
fn dual_pairs_are_self_consistent() {
    let cat = Catalog::open_default().unwrap();
    for c in load_structure_claims(&cat).unwrap() {
        if let StructureClaim::Dual { .. } = c {
            assert!(verify_structure_claim(&cat, &c).unwrap().passed, "{c}");
        }
    }
    let a = cat.algebra("S_(4,428)").unwrap();
    assert!(is_isomorphic(&dual(a), cat.algebra("S_(4,418)").unwrap()));
}

#[test]
fn square_embedding_exists_for_embed_claims() {
    let cat = Catalog::open_default().unwrap();
    let mut seen = 0;
    for c in load_structure_claims(&cat).unwrap() {
        if let StructureClaim::Embed { .. } = c {
            assert!(verify_structure_claim(&cat, &c).unwrap().passed, "{c}");
            seen += 1;
        }
    }
    assert_eq!(seen, 6);
    let m2 = cat.algebra("M_2").unwrap();
    assert!(find_embedding(m2, &power(m2, 2)).unwrap().is_some());
}

#[test]
fn false_claims_fail() {
    let cat = Catalog::open_default().unwrap();
    for line in [
        "dual S_(4,428) S_(4,428)",
        "sub S_(4,401) {1,2} T_2",
        "quotient S_(4,424) {{1,2},{3},{4}} S_57",
    ] {
        let c = StructureClaim::parse_line(line, 1).unwrap();
        let out = verify_structure_claim(&cat, &c);
        assert!(!matches!(out, Ok(ref o) if o.passed), "{line}: {out:?}");
    }
}

#[test]
fn claim_lines_roundtrip() {
    let cat = Catalog::open_default().unwrap();
    for c in load_structure_claims(&cat).unwrap() {
        assert_eq!(StructureClaim::parse_line(&c.to_string(), 1).unwrap(), c);
    }
}
