//! Harness sensitivity and the empirical `D_q(u) ≠ ∅` condition for S_46.

use std::sync::OnceLock;

use aisr::catalog::Catalog;
use aisr::oracles::{check_equivalence, check_necessity, check_oracle, Oracle, OracleVerdict};
use aisr::{Corpus, CorpusBounds, UQPair};

fn catalog() -> &'static Catalog {
    static CAT: OnceLock<Catalog> = OnceLock::new();
    CAT.get_or_init(|| Catalog::open_default().expect("catalog"))
}

fn corpus() -> &'static Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS.get_or_init(|| Corpus::generate(CorpusBounds::new(3, 3, 3)).expect("corpus"))
}

#[test]
fn negated_exact_oracles_disagree_everywhere() {
    for o in Oracle::ALL.into_iter().filter(|o| o.is_exact()) {
        let a = catalog().algebra(o.algebra_name()).unwrap();
        let neg = |p: &UQPair| match o.eval(p) {
            OracleVerdict::Holds => OracleVerdict::Fails,
            _ => OracleVerdict::Holds,
        };
        let r = check_equivalence(&neg, a, corpus()).unwrap();
        assert_eq!(r.violations.len(), r.checked, "{}", o.key());
        assert!(!r.passed());
    }
}

#[test]
fn negated_necessity_oracles_are_caught() {
    for o in Oracle::ALL.into_iter().filter(|o| !o.is_exact()) {
        let a = catalog().algebra(o.algebra_name()).unwrap();
        let neg = |p: &UQPair| match o.eval(p) {
            OracleVerdict::Holds => OracleVerdict::Fails,
            v => v,
        };
        let r = check_necessity(&neg, a, corpus()).unwrap();
        assert!(!r.violations.is_empty(), "{}: negation went unnoticed", o.key());
    }
}

#[test]
fn necessity_oracle_on_wrong_algebra_is_caught() {
    // The S_57 conditions are not necessary for the trivial algebra.
    let a = aisr::FiniteAiSemiring::trivial();
    let r = check_necessity(&|p: &UQPair| Oracle::S57.eval(p), &a, corpus()).unwrap();
    assert!(!r.passed());
}

#[test]
fn s46_requires_nonempty_d_q() {
    let a = catalog().algebra("S_46").unwrap();
    let cond = |p: &UQPair| OracleVerdict::from_bool(!p.u.d_q(&p.q).is_empty());
    let r = check_necessity(&cond, a, corpus()).unwrap();
    assert!(r.passed(), "first counterexample: {:?}", r.violations.first().map(ToString::to_string));
    assert!(r.satisfied > 0);
}

#[test]
fn s53_covers_only_short_q() {
    let a = catalog().algebra("S_53").unwrap();
    let r = check_oracle(Oracle::S53, a, corpus()).unwrap();
    assert!(r.passed());
    assert!(r.not_covered > 0);
    for p in corpus().pairs().filter(|p| !p.is_trivial()) {
        if Oracle::S53.eval(&p) == OracleVerdict::NotCovered {
            assert!(p.q.len() >= 3, "{p}");
        }
    }
}
