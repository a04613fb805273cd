//! Term evaluation and brute-force satisfaction of identities.
//!
//! A check sweeps every assignment of carrier elements to the identity's
//! variables. Assignments are visited in lexicographic order with the first
//! variable most significant, so a reported witness is the least one.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::algebra::FiniteAiSemiring;
use crate::error::{Error, Result};
use crate::term::{Identity, IdentityScheme, TermSum, UQPair, Var, Word};

/// Default cap on assignments swept for one identity.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Sweeps at least this large are split across threads.
const PARALLEL_THRESHOLD: u128 = 1 << 15;

/// Maximum number of assignments a single check may sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    /// Errors when `order^vars` exceeds the budget.
    pub fn check(self, order: usize, vars: usize) -> Result<u64> {
        let needed = (order as u128).saturating_pow(vars as u32);
        if needed > self.0 as u128 {
            return Err(Error::Budget {
                needed,
                budget: self.0,
            });
        }
        Ok(needed as u64)
    }
}

/// Values for variables, kept sorted by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Assignment(Vec<(Var, usize)>);

impl Assignment {
    pub fn new(pairs: impl IntoIterator<Item = (Var, usize)>) -> Self {
        let mut v: Vec<(Var, usize)> = pairs.into_iter().collect();
        v.sort_by_key(|p| p.0);
        v.dedup_by_key(|p| p.0);
        Assignment(v)
    }

    pub fn get(&self, x: Var) -> Option<usize> {
        self.0
            .binary_search_by_key(&x, |p| p.0)
            .ok()
            .map(|i| self.0[i].1)
    }

    pub fn pairs(&self) -> &[(Var, usize)] {
        &self.0
    }
}

impl fmt::Display for Assignment {
    /// 1-based values: `x=2,y=4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}={}", e + 1)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails { witness: Assignment },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemeVerdict {
    Holds,
    Fails {
        expansion: Identity,
        witness: Assignment,
    },
}

impl SchemeVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, SchemeVerdict::Holds)
    }
}

pub fn eval_word(word: &Word, asg: &Assignment, a: &FiniteAiSemiring) -> Result<usize> {
    let value = |x: Var| asg.get(x).ok_or_else(|| Error::Unassigned(x.to_string()));
    let mut acc = value(word.head())?;
    for &x in &word.as_slice()[1..] {
        acc = a.mul(acc, value(x)?);
    }
    Ok(acc)
}

pub fn eval_term(term: &TermSum, asg: &Assignment, a: &FiniteAiSemiring) -> Result<usize> {
    let mut words = term.summands();
    let first = eval_word(words.next().expect("nonempty sum"), asg, a)?;
    words.try_fold(first, |acc, w| Ok(a.add(acc, eval_word(w, asg, a)?)))
}

/// An identity with variables replaced by positions `0..vars`.
struct Compiled {
    vars: Vec<Var>,
    lhs: Vec<Vec<u8>>,
    rhs: Vec<Vec<u8>>,
}

impl Compiled {
    fn new(id: &Identity) -> Self {
        let vars: Vec<Var> = id.vars().into_iter().collect();
        let index = |x: &Var| vars.binary_search(x).expect("variable of identity") as u8;
        let side = |t: &TermSum| -> Vec<Vec<u8>> {
            t.summands()
                .map(|w| w.as_slice().iter().map(index).collect())
                .collect()
        };
        let (lhs, rhs) = (side(&id.lhs), side(&id.rhs));
        Compiled { vars, lhs, rhs }
    }

    fn side_value(a: &FiniteAiSemiring, side: &[Vec<u8>], vals: &[usize]) -> usize {
        let mut sum = usize::MAX;
        for w in side {
            let mut p = vals[w[0] as usize];
            for &x in &w[1..] {
                p = a.mul(p, vals[x as usize]);
            }
            sum = if sum == usize::MAX { p } else { a.add(sum, p) };
        }
        sum
    }

    fn holds_at(&self, a: &FiniteAiSemiring, vals: &[usize]) -> bool {
        Self::side_value(a, &self.lhs, vals) == Self::side_value(a, &self.rhs, vals)
    }

    /// First failing assignment whose leading value is `first`, in odometer order.
    fn sweep_from(&self, a: &FiniteAiSemiring, first: usize) -> Option<Vec<usize>> {
        let n = a.order();
        let k = self.vars.len();
        let mut vals = vec![0usize; k];
        vals[0] = first;
        loop {
            if !self.holds_at(a, &vals) {
                return Some(vals);
            }
            let mut i = k;
            loop {
                if i == 1 {
                    return None;
                }
                i -= 1;
                vals[i] += 1;
                if vals[i] < n {
                    break;
                }
                vals[i] = 0;
            }
        }
    }

    fn witness(&self, vals: &[usize]) -> Assignment {
        Assignment::new(self.vars.iter().copied().zip(vals.iter().copied()))
    }
}

/// Satisfaction under the default budget.
pub fn satisfies(a: &FiniteAiSemiring, id: &Identity) -> Result<Verdict> {
    satisfies_with(a, id, Budget::default())
}

pub fn satisfies_with(a: &FiniteAiSemiring, id: &Identity, budget: Budget) -> Result<Verdict> {
    if id.is_trivial() {
        return Ok(Verdict::Holds);
    }
    let c = Compiled::new(id);
    let needed = budget.check(a.order(), c.vars.len())?;
    let firsts = 0..a.order();
    let found = if (needed as u128) >= PARALLEL_THRESHOLD {
        firsts
            .into_par_iter()
            .find_map_first(|f| c.sweep_from(a, f))
    } else {
        firsts.into_iter().find_map(|f| c.sweep_from(a, f))
    };
    Ok(match found {
        None => Verdict::Holds,
        Some(vals) => Verdict::Fails {
            witness: c.witness(&vals),
        },
    })
}

/// Holds iff every expansion holds; reports the first failing expansion.
pub fn satisfies_scheme(a: &FiniteAiSemiring, s: &IdentityScheme) -> Result<SchemeVerdict> {
    satisfies_scheme_with(a, s, Budget::default())
}

pub fn satisfies_scheme_with(
    a: &FiniteAiSemiring,
    s: &IdentityScheme,
    budget: Budget,
) -> Result<SchemeVerdict> {
    for expansion in s.expand()? {
        if let Verdict::Fails { witness } = satisfies_with(a, &expansion, budget)? {
            return Ok(SchemeVerdict::Fails { expansion, witness });
        }
    }
    Ok(SchemeVerdict::Holds)
}

pub fn satisfies_pair(a: &FiniteAiSemiring, p: &UQPair) -> Result<bool> {
    Ok(satisfies(a, &p.to_identity())?.holds())
}

/// Bounds for a generated corpus of `u ≈ u + q` identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CorpusBounds {
    pub vars: usize,
    pub word_len: usize,
    pub summands: usize,
}

impl CorpusBounds {
    pub const fn new(vars: usize, word_len: usize, summands: usize) -> Self {
        CorpusBounds {
            vars,
            word_len,
            summands,
        }
    }
}

impl Default for CorpusBounds {
    fn default() -> Self {
        CorpusBounds::new(3, 3, 3)
    }
}

/// Variable names used by generated corpora.
pub const CORPUS_LETTERS: [char; 6] = ['x', 'y', 'z', 'w', 'v', 't'];

/// Largest raw candidate count a corpus may enumerate.
pub const MAX_CORPUS_CANDIDATES: u128 = 50_000_000;

/// One corpus identity in compact form: word ids into [`Corpus::words`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompactPair {
    pub u: Vec<u16>,
    pub q: u16,
}

/// All `u ≈ u + q` within bounds, one representative per renaming class.
///
/// The representative of a class is the member whose compact encoding
/// `(u ids, q id)` is least over all permutations of the variables.
#[derive(Clone, Debug)]
pub struct Corpus {
    bounds: CorpusBounds,
    vars: Vec<Var>,
    words: Vec<Word>,
    /// Words as variable positions, parallel to `words`.
    codes: Vec<Vec<u8>>,
    pairs: Vec<CompactPair>,
    raw_count: u64,
}

impl Corpus {
    pub fn generate(bounds: CorpusBounds) -> Result<Self> {
        let CorpusBounds {
            vars: v,
            word_len: l,
            summands: k,
        } = bounds;
        if v == 0 || l == 0 || k == 0 {
            return Err(Error::Structure("corpus bounds must be positive".into()));
        }
        if v > CORPUS_LETTERS.len() {
            return Err(Error::Bound {
                what: "corpus variables",
                size: v,
                bound: CORPUS_LETTERS.len(),
            });
        }
        let vars: Vec<Var> = CORPUS_LETTERS[..v].iter().map(|&c| crate::term::var(c)).collect();

        // Words by length, then lexicographically.
        let mut codes: Vec<Vec<u8>> = Vec::new();
        for len in 1..=l {
            let total = v.checked_pow(len as u32).unwrap_or(usize::MAX);
            if total > u16::MAX as usize {
                return Err(Error::Bound {
                    what: "corpus words",
                    size: total,
                    bound: u16::MAX as usize,
                });
            }
            for mut idx in 0..total {
                let mut code = vec![0u8; len];
                for slot in code.iter_mut().rev() {
                    *slot = (idx % v) as u8;
                    idx /= v;
                }
                codes.push(code);
            }
        }
        let w = codes.len();
        if w > u16::MAX as usize {
            return Err(Error::Bound {
                what: "corpus words",
                size: w,
                bound: u16::MAX as usize,
            });
        }
        let raw: u128 = (1..=k.min(w)).map(|j| binomial(w as u128, j as u128)).sum::<u128>() * w as u128;
        if raw > MAX_CORPUS_CANDIDATES {
            return Err(Error::Bound {
                what: "corpus candidates",
                size: raw.min(usize::MAX as u128) as usize,
                bound: MAX_CORPUS_CANDIDATES as usize,
            });
        }
        let words: Vec<Word> = codes
            .iter()
            .map(|c| Word::new(c.iter().map(|&i| vars[i as usize]).collect()).expect("nonempty"))
            .collect();

        // Word id images under every nontrivial variable permutation.
        let index_of = |code: &[u8]| -> usize {
            let offset: usize = (1..code.len()).map(|len| v.pow(len as u32)).sum();
            offset + code.iter().fold(0usize, |acc, &c| acc * v + c as usize)
        };
        let perms: Vec<Vec<u16>> = permutations(v)
            .into_iter()
            .skip(1)
            .map(|p| {
                codes
                    .iter()
                    .map(|c| {
                        let img: Vec<u8> = c.iter().map(|&x| p[x as usize] as u8).collect();
                        index_of(&img) as u16
                    })
                    .collect()
            })
            .collect();

        let subsets = subsets_up_to(w, k);
        let pairs: Vec<CompactPair> = subsets
            .par_iter()
            .flat_map_iter(|u| {
                let perms = &perms;
                (0..w as u16).filter_map(move |q| {
                    let pair = CompactPair { u: u.clone(), q };
                    is_class_minimum(&pair, perms).then_some(pair)
                })
            })
            .collect();

        Ok(Corpus {
            bounds,
            vars,
            words,
            codes,
            pairs,
            raw_count: raw as u64,
        })
    }

    pub fn bounds(&self) -> CorpusBounds {
        self.bounds
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn compact(&self) -> &[CompactPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Candidate count before renaming reduction.
    pub fn raw_count(&self) -> u64 {
        self.raw_count
    }

    pub fn pair(&self, i: usize) -> UQPair {
        self.expand(&self.pairs[i])
    }

    pub fn expand(&self, p: &CompactPair) -> UQPair {
        let u = TermSum::new(p.u.iter().map(|&i| self.words[i as usize].clone())).expect("nonempty");
        UQPair::new(u, self.words[p.q as usize].clone())
    }

    pub fn pairs(&self) -> impl Iterator<Item = UQPair> + '_ {
        self.pairs.iter().map(|p| self.expand(p))
    }

    /// Fast evaluator for this corpus in one algebra.
    pub fn evaluator<'a>(&'a self, a: &'a FiniteAiSemiring) -> Result<CorpusEvaluator<'a>> {
        CorpusEvaluator::new(self, a)
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Nonempty strictly increasing index vectors of length at most `k`.
fn subsets_up_to(w: usize, k: usize) -> Vec<Vec<u16>> {
    fn rec(start: usize, w: usize, k: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == k {
            return;
        }
        for i in start..w {
            cur.push(i as u16);
            rec(i + 1, w, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, w, k, &mut Vec::new(), &mut out);
    out
}

fn is_class_minimum(pair: &CompactPair, perms: &[Vec<u16>]) -> bool {
    let mut img = Vec::with_capacity(pair.u.len());
    for p in perms {
        img.clear();
        img.extend(pair.u.iter().map(|&i| p[i as usize]));
        img.sort_unstable();
        let q = p[pair.q as usize];
        if (img.as_slice(), q) < (pair.u.as_slice(), pair.q) {
            return false;
        }
    }
    true
}

/// All permutations of `0..n` in lexicographic order; the identity comes first.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        // Next lexicographic permutation.
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Precomputed word values of a corpus over every assignment in one algebra.
pub struct CorpusEvaluator<'a> {
    corpus: &'a Corpus,
    algebra: &'a FiniteAiSemiring,
    assignments: usize,
    /// `values[asg * words + w]`.
    values: Vec<u8>,
}

impl<'a> CorpusEvaluator<'a> {
    fn new(corpus: &'a Corpus, a: &'a FiniteAiSemiring) -> Result<Self> {
        let v = corpus.vars.len();
        let assignments = Budget::default().check(a.order(), v)? as usize;
        let nw = corpus.words.len();
        let n = a.order();
        let mut values = vec![0u8; assignments * nw];
        let mut vals = vec![0usize; v];
        for asg in 0..assignments {
            let mut rest = asg;
            for slot in vals.iter_mut().rev() {
                *slot = rest % n;
                rest /= n;
            }
            for (wi, code) in corpus.codes.iter().enumerate() {
                let mut p = vals[code[0] as usize];
                for &x in &code[1..] {
                    p = a.mul(p, vals[x as usize]);
                }
                values[asg * nw + wi] = p as u8;
            }
        }
        Ok(CorpusEvaluator {
            corpus,
            algebra: a,
            assignments,
            values,
        })
    }

    /// Whether `u ≈ u + q` holds, i.e. `q <= u` under every assignment.
    pub fn holds(&self, p: &CompactPair) -> bool {
        let nw = self.corpus.words.len();
        let a = self.algebra;
        (0..self.assignments).all(|asg| {
            let row = &self.values[asg * nw..(asg + 1) * nw];
            let mut s = row[p.u[0] as usize] as usize;
            for &w in &p.u[1..] {
                s = a.add(s, row[w as usize] as usize);
            }
            a.add(s, row[p.q as usize] as usize) == s
        })
    }

    /// Verdict for every corpus pair, in corpus order.
    pub fn verdicts(&self) -> Vec<bool> {
        self.corpus.pairs.par_iter().map(|p| self.holds(p)).collect()
    }
}

/// Every corpus identity that holds in `a`.
pub fn identities_of(a: &FiniteAiSemiring, bounds: CorpusBounds) -> Result<Vec<UQPair>> {
    let corpus = Corpus::generate(bounds)?;
    let eval = corpus.evaluator(a)?;
    Ok(corpus
        .compact()
        .iter()
        .zip(eval.verdicts())
        .filter(|(_, h)| *h)
        .map(|(p, _)| corpus.expand(p))
        .collect())
}

/// Variables of a set of identities, sorted.
pub fn vars_of<'a>(ids: impl IntoIterator<Item = &'a Identity>) -> BTreeSet<Var> {
    ids.into_iter().flat_map(|i| i.vars()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::diamond_addition;
    use crate::parse::{parse_identity, parse_scheme};
    use crate::term::var;

    fn table(rows: [[u8; 4]; 4]) -> FiniteAiSemiring {
        let mul = rows.iter().flatten().map(|v| v - 1).collect();
        FiniteAiSemiring::from_tables(4, diamond_addition(), mul).unwrap()
    }

    fn s471() -> FiniteAiSemiring {
        table([[3, 2, 2, 3], [2, 2, 2, 2], [2, 2, 2, 2], [3, 2, 2, 3]])
    }

    fn s435() -> FiniteAiSemiring {
        table([[1, 2, 1, 1], [2, 2, 2, 2], [1, 2, 1, 3], [1, 2, 3, 4]])
    }

    fn asg(pairs: &[(char, usize)]) -> Assignment {
        Assignment::new(pairs.iter().map(|&(c, e)| (var(c), e)))
    }

    #[test]
    fn word_and_term_values() {
        let a = s435();
        let xy = crate::term::Word::letters("xy");
        assert_eq!(eval_word(&xy, &asg(&[('x', 2), ('y', 3)]), &a).unwrap(), 2);
        let x = crate::term::Word::letters("x");
        assert_eq!(eval_word(&x, &asg(&[('x', 1)]), &a).unwrap(), 1);
        let all_one = table([[1; 4]; 4]);
        let xyz = crate::term::Word::letters("xyz");
        assert_eq!(eval_word(&xyz, &asg(&[('x', 3), ('y', 1), ('z', 2)]), &all_one).unwrap(), 0);
        let sum = TermSum::letters(&["x", "y"]);
        assert_eq!(eval_term(&sum, &asg(&[('x', 2), ('y', 3)]), &a).unwrap(), 0);
        assert!(matches!(
            eval_word(&xy, &asg(&[('x', 1)]), &a),
            Err(Error::Unassigned(_))
        ));
    }

    #[test]
    fn basis_member_and_witness() {
        let a = s471();
        let ok = parse_identity("x_1 ≈ x_1 + x_2x_3x_4").unwrap();
        assert!(satisfies(&a, &ok).unwrap().holds());
        assert!(satisfies(&a, &parse_identity("x ≈ x").unwrap()).unwrap().holds());
        let bad = parse_identity("x ≈ x + yz").unwrap();
        match satisfies(&a, &bad).unwrap() {
            Verdict::Fails { witness } => {
                // Least failing assignment found by direct enumeration.
                let mut first = None;
                'outer: for x in 0..4 {
                    for y in 0..4 {
                        for z in 0..4 {
                            if a.add(x, a.mul(y, z)) != x {
                                first = Some(asg(&[('x', x), ('y', y), ('z', z)]));
                                break 'outer;
                            }
                        }
                    }
                }
                assert_eq!(Some(witness), first);
            }
            Verdict::Holds => panic!("should fail"),
        }
    }

    #[test]
    fn budget_is_enforced() {
        let a = s471();
        let id = parse_identity("x ≈ x + yz").unwrap();
        assert!(matches!(
            satisfies_with(&a, &id, Budget(63)),
            Err(Error::Budget { needed: 64, budget: 63 })
        ));
        assert!(satisfies_with(&a, &id, Budget(64)).is_ok());
    }

    #[test]
    fn schemes() {
        let s = parse_scheme("xyz ≈ xyz + y ; optional x z").unwrap();
        match satisfies_scheme(&s471(), &s).unwrap() {
            SchemeVerdict::Fails { .. } => {}
            SchemeVerdict::Holds => panic!("xy ≈ xy + y fails in this algebra"),
        }
        let plain = parse_scheme("xy ≈ yx").unwrap();
        assert!(satisfies_scheme(&s471(), &plain).unwrap().holds());
    }

    #[test]
    fn permutations_in_order() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(3)[0], vec![0, 1, 2]);
        assert_eq!(permutations(3)[5], vec![2, 1, 0]);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn small_corpus_counts() {
        let c = Corpus::generate(CorpusBounds::new(2, 2, 2)).unwrap();
        // 6 words, 21 sums, 6 choices of q.
        assert_eq!(c.raw_count(), 126);
        // Independent count of renaming classes.
        let mut classes = BTreeSet::new();
        let swap = |v: Var| if v == var('x') { var('y') } else { var('x') };
        for u in 0..c.words().len() {
            for u2 in u..c.words().len() {
                for q in 0..c.words().len() {
                    let sum = TermSum::new([c.words()[u].clone(), c.words()[u2].clone()]).unwrap();
                    let p = UQPair::new(sum, c.words()[q].clone());
                    let r = UQPair::new(p.u.rename(swap), p.q.rename(swap));
                    classes.insert(std::cmp::min(p, r));
                }
            }
        }
        assert_eq!(c.len(), classes.len());
    }

    #[test]
    fn corpus_evaluator_matches_generic_check() {
        let a = s435();
        let c = Corpus::generate(CorpusBounds::new(2, 2, 2)).unwrap();
        let eval = c.evaluator(&a).unwrap();
        for (p, fast) in c.compact().iter().zip(eval.verdicts()) {
            let slow = satisfies_pair(&a, &c.expand(p)).unwrap();
            assert_eq!(fast, slow, "{}", c.expand(p));
        }
    }

    #[test]
    fn identities_of_trivial_algebra_is_whole_corpus() {
        let b = CorpusBounds::new(2, 2, 2);
        let all = Corpus::generate(b).unwrap().len();
        assert_eq!(identities_of(&FiniteAiSemiring::trivial(), b).unwrap().len(), all);
    }
}
