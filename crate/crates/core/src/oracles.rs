//! Syntactic conditions on identities `u ≈ u + q`, and harnesses that test
//! them against brute-force satisfaction over a corpus.
//!
//! Conditions are implemented exactly as stated for the shapes of `q` they
//! cover. Where a condition only speaks about some shapes of `q` and the
//! rest pass, the verdict is [`OracleVerdict::NotCovered`] rather than a guess.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::algebra::FiniteAiSemiring;
use crate::construct::adjoin_zero;
use crate::error::Result;
use crate::satisfaction::{satisfies, CompactPair, Corpus};
use crate::term::{content_of, m1, Identity, TermSum, UQPair, Var, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OracleVerdict {
    Holds,
    Fails,
    NotCovered,
}

impl OracleVerdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            OracleVerdict::Holds
        } else {
            OracleVerdict::Fails
        }
    }

    pub fn is_holds(self) -> bool {
        self == OracleVerdict::Holds
    }

    pub fn is_fails(self) -> bool {
        self == OracleVerdict::Fails
    }
}

impl fmt::Display for OracleVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleVerdict::Holds => "true",
            OracleVerdict::Fails => "false",
            OracleVerdict::NotCovered => "not-covered",
        })
    }
}

/// `c(p(u))`: union of the contents of the prefixes of the summands.
fn prefix_content(u: &TermSum) -> BTreeSet<Var> {
    u.summands()
        .filter_map(Word::prefix)
        .flat_map(|p| p.as_slice().to_vec())
        .collect()
}

fn some_len_at_least(u: &TermSum, k: usize) -> bool {
    u.summands().any(|w| w.len() >= k)
}

/// Zero-adjoined base: `D_q(u) ≠ ∅` and the base satisfies `D_q(u) ≈ D_q(u) + q`.
pub fn oracle_s0(p: &UQPair, base: &FiniteAiSemiring) -> Result<bool> {
    let Some(d) = TermSum::new(p.u.d_q(&p.q).into_iter().cloned()) else {
        return Ok(false);
    };
    let id = Identity::new(d.clone(), d.with(p.q.clone()));
    Ok(satisfies(base, &id)?.holds())
}

/// Necessary for S_57: some `ℓ(u_i) ≥ 2`, `c(p(q)) ⊆ c(p(u))`, `t(q) ∈ c(u)`.
pub fn oracle_s57(p: &UQPair) -> bool {
    let (u, q) = (&p.u, &p.q);
    let pq = q.prefix().map(|w| w.content()).unwrap_or_default();
    some_len_at_least(u, 2) && pq.is_subset(&prefix_content(u)) && u.content().contains(&q.tail())
}

/// Necessary for S_53. Condition (3) speaks only about `q = xy`; longer
/// `q` that pass (1) and (2) are not covered.
pub fn oracle_s53(p: &UQPair) -> OracleVerdict {
    let (u, q) = (&p.u, &p.q);
    if !some_len_at_least(u, 2) || !q.content().is_subset(&u.content()) {
        return OracleVerdict::Fails;
    }
    match q.len() {
        1 => OracleVerdict::Holds,
        2 => {
            let (x, y) = (q.as_slice()[0], q.as_slice()[1]);
            let ok = if x == y {
                u.summands().any(|w| w.multiplicity(x) >= 2)
            } else {
                u.summands().any(|w| {
                    (w.contains(x) && w.contains(y)) || w.multiplicity(x) >= 2 || w.multiplicity(y) >= 2
                })
            };
            OracleVerdict::from_bool(ok)
        }
        _ => OracleVerdict::NotCovered,
    }
}

/// Necessary for S_58: `L_{≥2}(u) ≠ ∅`, `H_q(u) ≠ ∅`, and for `ℓ(q) ≥ 2`
/// some summand of length at least 2 shares the head of `q`.
pub fn oracle_s58(p: &UQPair) -> bool {
    let (u, q) = (&p.u, &p.q);
    let l2 = u.l_geq(2);
    let h = u.h_q(q);
    !l2.is_empty() && !h.is_empty() && (q.len() < 2 || l2.iter().any(|w| w.head() == q.head()))
}

/// Necessary for S_59: some `ℓ(u_i) ≥ 3`, or all summands have length at
/// most 2, `ℓ(q) ≤ 2`, and the content condition for the length of `q`.
pub fn oracle_s59(p: &UQPair) -> bool {
    let (u, q) = (&p.u, &p.q);
    if some_len_at_least(u, 3) {
        return true;
    }
    match q.len() {
        1 => q.content().is_subset(&u.content()),
        2 => q.content().is_subset(&content_of(u.l_eq(2))),
        _ => false,
    }
}

/// Necessary for S_60: some `ℓ(u_i) ≥ 2`; `c(q) ⊆ c(u)` for `ℓ(q) = 1`;
/// `c(q) ⊆ c(L_{≥2}(u))` for `ℓ(q) ≥ 2`.
pub fn oracle_s60(p: &UQPair) -> bool {
    let (u, q) = (&p.u, &p.q);
    if !some_len_at_least(u, 2) {
        return false;
    }
    if q.len() == 1 {
        q.content().is_subset(&u.content())
    } else {
        q.content().is_subset(&content_of(u.l_geq(2)))
    }
}

/// Necessary for S_44: `ℓ(q) ≥ 2`, `D_q(u) ≠ ∅`, and every `x ∈ M_1(q)` has
/// a summand in `D_q(u)` where it occurs at most once.
pub fn oracle_s44(p: &UQPair) -> bool {
    let (u, q) = (&p.u, &p.q);
    let d = u.d_q(q);
    q.len() >= 2
        && !d.is_empty()
        && m1(q)
            .into_iter()
            .all(|x| d.iter().any(|w| w.multiplicity(x) <= 1))
}

/// Necessary for S_46: `ℓ(q) ≥ 2`, and if `t(q)` occurs once in `q`, some
/// summand of `D_q(u)` avoids `t(q)` in its prefix.
pub fn oracle_s46(p: &UQPair) -> bool {
    let (u, q) = (&p.u, &p.q);
    if q.len() < 2 {
        return false;
    }
    let t = q.tail();
    if q.multiplicity(t) != 1 {
        return true;
    }
    u.d_q(q)
        .into_iter()
        .any(|w| w.prefix().is_none_or(|pw| !pw.contains(t)))
}

/// Exact for S_41: for every `Y ⊆ c(q)` some summand has `h_Y(u_j) = h_Y(q)`,
/// where "no letter left" on both sides counts as equal.
pub fn oracle_s41(p: &UQPair) -> bool {
    let (u, q) = (&p.u, &p.q);
    let cq: Vec<Var> = q.content().into_iter().collect();
    (0u32..1 << cq.len()).all(|mask| {
        let y: BTreeSet<Var> = cq
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, v)| *v)
            .collect();
        let target = q.head_excluding(&y);
        u.summands().any(|w| w.head_excluding(&y) == target)
    })
}

/// Exact for S_2: one of the three clauses.
pub fn oracle_s2(p: &UQPair) -> bool {
    let (u, q) = (&p.u, &p.q);
    if some_len_at_least(u, 3) {
        return true;
    }
    let c1 = content_of(u.l_eq(1));
    let c2 = content_of(u.l_eq(2));
    if !c1.is_disjoint(&c2) {
        return true;
    }
    // Clause (3): all summands have length at most 2 and the contents are disjoint.
    match q.len() {
        1 => p.is_trivial(),
        2 => q.content().is_subset(&c2),
        _ => false,
    }
}

/// Exact for S_4 on nontrivial identities; trivial identities hold outright.
pub fn oracle_s4(p: &UQPair) -> bool {
    let (u, q) = (&p.u, &p.q);
    if p.is_trivial() {
        return true;
    }
    q.content().is_subset(&u.content())
        && some_len_at_least(u, 2)
        && (!u.property_t() || u.with(q.clone()).property_t())
}

/// The named conditions, for harnesses and the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Oracle {
    S57,
    S53,
    S58,
    S59,
    S60,
    S44,
    S46,
    S41,
    S2,
    S4,
}

impl Oracle {
    pub const ALL: [Oracle; 10] = [
        Oracle::S41,
        Oracle::S2,
        Oracle::S4,
        Oracle::S57,
        Oracle::S53,
        Oracle::S58,
        Oracle::S59,
        Oracle::S60,
        Oracle::S44,
        Oracle::S46,
    ];

    /// Catalog name of the algebra the condition is about.
    pub fn algebra_name(self) -> &'static str {
        match self {
            Oracle::S57 => "S_57",
            Oracle::S53 => "S_53",
            Oracle::S58 => "S_58",
            Oracle::S59 => "S_59",
            Oracle::S60 => "S_60",
            Oracle::S44 => "S_44",
            Oracle::S46 => "S_46",
            Oracle::S41 => "S_41",
            Oracle::S2 => "S_2",
            Oracle::S4 => "S_4",
        }
    }

    /// Command-line key, e.g. `s41`.
    pub fn key(self) -> String {
        self.algebra_name().replace('_', "").to_lowercase()
    }

    pub fn from_key(key: &str) -> Option<Oracle> {
        let k = key.replace('_', "").to_lowercase();
        Oracle::ALL.into_iter().find(|o| o.key() == k)
    }

    /// Exact characterization, as opposed to a necessary condition.
    pub fn is_exact(self) -> bool {
        matches!(self, Oracle::S41 | Oracle::S2 | Oracle::S4)
    }

    pub fn eval(self, p: &UQPair) -> OracleVerdict {
        match self {
            Oracle::S57 => OracleVerdict::from_bool(oracle_s57(p)),
            Oracle::S53 => oracle_s53(p),
            Oracle::S58 => OracleVerdict::from_bool(oracle_s58(p)),
            Oracle::S59 => OracleVerdict::from_bool(oracle_s59(p)),
            Oracle::S60 => OracleVerdict::from_bool(oracle_s60(p)),
            Oracle::S44 => OracleVerdict::from_bool(oracle_s44(p)),
            Oracle::S46 => OracleVerdict::from_bool(oracle_s46(p)),
            Oracle::S41 => OracleVerdict::from_bool(oracle_s41(p)),
            Oracle::S2 => OracleVerdict::from_bool(oracle_s2(p)),
            Oracle::S4 => OracleVerdict::from_bool(oracle_s4(p)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HarnessMode {
    /// `satisfies ⇒ oracle` on nontrivial pairs.
    Necessity,
    /// `satisfies ⇔ oracle` on every pair.
    Equivalence,
}

/// One pair on which the oracle and brute force disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub pair: UQPair,
    pub satisfies: bool,
    pub oracle: OracleVerdict,
}

impl fmt::Display for Disagreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} | satisfies={} oracle={}",
            self.pair.to_identity(),
            self.satisfies,
            self.oracle
        )
    }
}

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub mode: HarnessMode,
    /// Pairs examined (after skipping trivial ones in necessity mode).
    pub checked: usize,
    pub skipped_trivial: usize,
    /// Pairs where the oracle declined to decide.
    pub not_covered: usize,
    /// Pairs that hold in the algebra.
    pub satisfied: usize,
    /// Necessity mode: pairs where the oracle holds but the identity fails.
    /// These are permitted and only counted.
    pub converse_gaps: usize,
    /// In corpus order.
    pub violations: Vec<Disagreement>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Runs `oracle` against precomputed verdicts of the algebra on `corpus`.
fn run_harness(
    corpus: &Corpus,
    verdicts: &[bool],
    mode: HarnessMode,
    oracle: &(dyn Fn(usize, &UQPair) -> OracleVerdict + Sync),
) -> OracleReport {
    #[derive(Default)]
    struct Tally {
        checked: usize,
        skipped: usize,
        not_covered: usize,
        satisfied: usize,
        gaps: usize,
        bad: Option<Disagreement>,
    }
    let tallies: Vec<Tally> = corpus
        .compact()
        .par_iter()
        .zip(verdicts.par_iter())
        .enumerate()
        .map(|(i, (cp, &sat))| {
            let pair = corpus.expand(cp);
            let mut t = Tally::default();
            if mode == HarnessMode::Necessity && pair.is_trivial() {
                t.skipped = 1;
                return t;
            }
            t.checked = 1;
            t.satisfied = sat as usize;
            let v = oracle(i, &pair);
            match v {
                OracleVerdict::NotCovered => t.not_covered = 1,
                OracleVerdict::Holds if !sat => match mode {
                    HarnessMode::Necessity => t.gaps = 1,
                    HarnessMode::Equivalence => {
                        t.bad = Some(Disagreement { pair, satisfies: sat, oracle: v })
                    }
                },
                OracleVerdict::Fails if sat => {
                    t.bad = Some(Disagreement { pair, satisfies: sat, oracle: v })
                }
                _ => {}
            }
            t
        })
        .collect();
    let mut r = OracleReport {
        mode,
        checked: 0,
        skipped_trivial: 0,
        not_covered: 0,
        satisfied: 0,
        converse_gaps: 0,
        violations: Vec::new(),
    };
    for t in tallies {
        r.checked += t.checked;
        r.skipped_trivial += t.skipped;
        r.not_covered += t.not_covered;
        r.satisfied += t.satisfied;
        r.converse_gaps += t.gaps;
        r.violations.extend(t.bad);
    }
    r
}

/// Every nontrivial corpus pair satisfied by `a` must pass `oracle`.
pub fn check_necessity(
    oracle: &(dyn Fn(&UQPair) -> OracleVerdict + Sync),
    a: &FiniteAiSemiring,
    corpus: &Corpus,
) -> Result<OracleReport> {
    let verdicts = corpus.evaluator(a)?.verdicts();
    Ok(run_harness(corpus, &verdicts, HarnessMode::Necessity, &|_, p| oracle(p)))
}

/// `oracle` must agree with satisfaction in `a` on every corpus pair.
pub fn check_equivalence(
    oracle: &(dyn Fn(&UQPair) -> OracleVerdict + Sync),
    a: &FiniteAiSemiring,
    corpus: &Corpus,
) -> Result<OracleReport> {
    let verdicts = corpus.evaluator(a)?.verdicts();
    Ok(run_harness(corpus, &verdicts, HarnessMode::Equivalence, &|_, p| oracle(p)))
}

/// The harness matching the oracle's strength.
pub fn check_oracle(o: Oracle, a: &FiniteAiSemiring, corpus: &Corpus) -> Result<OracleReport> {
    let f = move |p: &UQPair| o.eval(p);
    if o.is_exact() {
        check_equivalence(&f, a, corpus)
    } else {
        check_necessity(&f, a, corpus)
    }
}

/// Compares the zero-adjunction condition with direct satisfaction in
/// `base^0` over the corpus. The base side is evaluated on `D_q(u) + q`
/// through the same word table.
pub fn check_s0(base: &FiniteAiSemiring, corpus: &Corpus) -> Result<OracleReport> {
    let zero = adjoin_zero(base);
    let direct = corpus.evaluator(&zero)?.verdicts();
    let base_eval = corpus.evaluator(base)?;
    let words = corpus.words();
    let oracle: Vec<bool> = corpus
        .compact()
        .par_iter()
        .map(|cp| {
            let cq = words[cp.q as usize].content();
            let d: Vec<u16> = cp
                .u
                .iter()
                .copied()
                .filter(|&w| words[w as usize].as_slice().iter().all(|v| cq.contains(v)))
                .collect();
            !d.is_empty() && base_eval.holds(&CompactPair { u: d, q: cp.q })
        })
        .collect();
    Ok(run_harness(corpus, &direct, HarnessMode::Equivalence, &|i, _| {
        OracleVerdict::from_bool(oracle[i])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::satisfaction::CorpusBounds;

    fn pair(u: &[&str], q: &str) -> UQPair {
        UQPair::new(TermSum::letters(u), Word::letters(q))
    }

    #[test]
    fn s57_cases() {
        assert!(oracle_s57(&pair(&["xy"], "xy")));
        assert!(!oracle_s57(&pair(&["x"], "x")));
        assert!(!oracle_s57(&pair(&["xy"], "yx")));
    }

    #[test]
    fn s53_cases() {
        assert_eq!(oracle_s53(&pair(&["xy"], "yx")), OracleVerdict::Holds);
        assert_eq!(oracle_s53(&pair(&["x"], "x")), OracleVerdict::Fails);
        assert_eq!(oracle_s53(&pair(&["xy", "z"], "zz")), OracleVerdict::Fails);
        assert_eq!(oracle_s53(&pair(&["xy"], "xyx")), OracleVerdict::NotCovered);
        assert_eq!(oracle_s53(&pair(&["xy"], "x")), OracleVerdict::Holds);
    }

    #[test]
    fn s58_cases() {
        assert!(oracle_s58(&pair(&["xy"], "xz")));
        assert!(!oracle_s58(&pair(&["x"], "y")));
        assert!(!oracle_s58(&pair(&["yx", "x"], "xy")));
    }

    #[test]
    fn s59_cases() {
        assert!(oracle_s59(&pair(&["xyz"], "w")));
        assert!(!oracle_s59(&pair(&["xy"], "xyz")));
        assert!(oracle_s59(&pair(&["xy", "z"], "yx")));
        assert!(!oracle_s59(&pair(&["xy", "z"], "xz")));
    }

    #[test]
    fn s60_cases() {
        assert!(oracle_s60(&pair(&["xy", "z"], "z")));
        assert!(!oracle_s60(&pair(&["x"], "x")));
        assert!(!oracle_s60(&pair(&["xy", "z"], "zx")));
    }

    #[test]
    fn s44_cases() {
        assert!(oracle_s44(&pair(&["xy"], "xy")));
        assert!(!oracle_s44(&pair(&["x"], "x")));
        assert!(!oracle_s44(&pair(&["xxy"], "xy")));
        assert!(oracle_s44(&pair(&["xxy", "y"], "xy")));
    }

    #[test]
    fn s46_cases() {
        assert!(oracle_s46(&pair(&["xy"], "xy")));
        assert!(!oracle_s46(&pair(&["x"], "x")));
        assert!(!oracle_s46(&pair(&["yx"], "xy")));
        assert!(oracle_s46(&pair(&["z"], "yy")));
    }

    #[test]
    fn s41_cases() {
        assert!(oracle_s41(&pair(&["xy"], "xy")));
        assert!(!oracle_s41(&pair(&["y"], "xy")));
        assert!(oracle_s41(&pair(&["x", "y"], "xy")));
    }

    #[test]
    fn s2_and_s4_cases() {
        assert!(oracle_s2(&pair(&["xyz"], "w")));
        assert!(oracle_s2(&pair(&["x", "xy"], "z")));
        assert!(!oracle_s2(&pair(&["xy"], "x")));
        assert!(oracle_s2(&pair(&["xy"], "yx")));
        assert!(oracle_s4(&pair(&["x"], "x")));
        assert!(!oracle_s4(&pair(&["x"], "xx")));
        assert!(!oracle_s4(&pair(&["xy"], "yy")));
        assert!(oracle_s4(&pair(&["xy", "yx"], "xx")));
    }

    #[test]
    fn keys_roundtrip() {
        for o in Oracle::ALL {
            assert_eq!(Oracle::from_key(&o.key()), Some(o));
        }
        assert_eq!(Oracle::from_key("S_41"), Some(Oracle::S41));
        assert_eq!(Oracle::from_key("s99"), None);
    }

    #[test]
    fn harness_sanity_inversion() {
        let a = FiniteAiSemiring::trivial();
        let corpus = Corpus::generate(CorpusBounds::new(2, 2, 1)).unwrap();
        let always = |_: &UQPair| OracleVerdict::Holds;
        let never = |_: &UQPair| OracleVerdict::Fails;
        assert!(check_equivalence(&always, &a, &corpus).unwrap().passed());
        let r = check_equivalence(&never, &a, &corpus).unwrap();
        assert_eq!(r.violations.len(), corpus.len());
        let r = check_necessity(&never, &a, &corpus).unwrap();
        assert!(!r.passed());
        assert_eq!(r.violations.len() + r.skipped_trivial, corpus.len());
    }

    #[test]
    fn report_line_format() {
        let d = Disagreement {
            pair: pair(&["xy"], "y"),
            satisfies: true,
            oracle: OracleVerdict::NotCovered,
        };
        assert_eq!(d.to_string(), "xy ≈ xy + y | satisfies=true oracle=not-covered");
    }
}
