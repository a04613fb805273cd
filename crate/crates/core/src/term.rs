//! Words, term sums, identities and optional-variable schemes.
//!
//! Sums are sets of words, so the ai-axioms for `+` are built into the
//! representation: duplicates collapse and order does not matter.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A variable: a lowercase letter with an optional numeric subscript.
///
/// `x1` and `x_1` denote the same variable. The ordering is by letter, then
/// unsubscripted before subscripted, then by subscript.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    pub fn new(letter: char, subscript: Option<u32>) -> Self {
        assert!(letter.is_ascii_lowercase(), "variables are lowercase letters");
        let sub = subscript.map_or(0, |s| {
            assert!(s < (1 << 24) - 1, "subscript too large");
            s + 1
        });
        Var(((letter as u32) << 24) | sub)
    }

    pub fn letter(self) -> char {
        char::from_u32(self.0 >> 24).expect("letter is ascii")
    }

    pub fn subscript(self) -> Option<u32> {
        match self.0 & 0x00ff_ffff {
            0 => None,
            s => Some(s - 1),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.subscript() {
            None => write!(f, "{}", self.letter()),
            Some(s) => write!(f, "{}_{s}", self.letter()),
        }
    }
}

/// Shorthand for an unsubscripted variable.
pub fn var(letter: char) -> Var {
    Var::new(letter, None)
}

/// A nonempty product of variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Var>);

impl Word {
    /// `None` for the empty sequence.
    pub fn new(letters: Vec<Var>) -> Option<Self> {
        (!letters.is_empty()).then_some(Word(letters))
    }

    /// Word over unsubscripted letters, e.g. `Word::letters("xyx")`.
    pub fn letters(s: &str) -> Self {
        Word::new(s.chars().map(var).collect()).expect("nonempty word")
    }

    pub fn as_slice(&self) -> &[Var] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; words are nonempty.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn head(&self) -> Var {
        self.0[0]
    }

    pub fn tail(&self) -> Var {
        self.0[self.0.len() - 1]
    }

    pub fn content(&self) -> BTreeSet<Var> {
        self.0.iter().copied().collect()
    }

    pub fn contains(&self, x: Var) -> bool {
        self.0.contains(&x)
    }

    pub fn multiplicity(&self, x: Var) -> usize {
        self.0.iter().filter(|&&v| v == x).count()
    }

    /// Drops the last letter; `None` for a single letter.
    pub fn prefix(&self) -> Option<Word> {
        Word::new(self.0[..self.0.len() - 1].to_vec())
    }

    /// Drops the first letter; `None` for a single letter.
    pub fn suffix(&self) -> Option<Word> {
        Word::new(self.0[1..].to_vec())
    }

    /// Keeps only the first occurrence of each variable.
    pub fn initial_part(&self) -> Word {
        let mut seen = BTreeSet::new();
        Word(self.0.iter().copied().filter(|v| seen.insert(*v)).collect())
    }

    /// First letter outside `ys`, if any.
    pub fn head_excluding(&self, ys: &BTreeSet<Var>) -> Option<Var> {
        self.0.iter().copied().find(|v| !ys.contains(v))
    }

    /// Variables occurring exactly once.
    pub fn once_vars(&self) -> BTreeSet<Var> {
        self.content()
            .into_iter()
            .filter(|&x| self.multiplicity(x) == 1)
            .collect()
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Deletes every occurrence of the given variables; `None` if nothing is left.
    pub fn erase(&self, gone: &BTreeSet<Var>) -> Option<Word> {
        Word::new(self.0.iter().copied().filter(|v| !gone.contains(v)).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn rename(&self, f: impl Fn(Var) -> Var) -> Word {
        Word(self.0.iter().map(|&v| f(v)).collect())
    }
}

impl fmt::Display for Word {
    /// Runs are compressed: `xxy` prints as `x^2y`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        while i < self.0.len() {
            let v = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == v {
                j += 1;
            }
            write!(f, "{v}")?;
            if j - i > 1 {
                write!(f, "^{}", j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

/// A nonempty finite set of words.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermSum(BTreeSet<Word>);

impl TermSum {
    pub fn new(words: impl IntoIterator<Item = Word>) -> Option<Self> {
        let set: BTreeSet<Word> = words.into_iter().collect();
        (!set.is_empty()).then_some(TermSum(set))
    }

    pub fn single(w: Word) -> Self {
        TermSum(BTreeSet::from([w]))
    }

    /// Sum of words over unsubscripted letters, e.g. `TermSum::letters(&["xy", "z"])`.
    pub fn letters(words: &[&str]) -> Self {
        TermSum::new(words.iter().map(|w| Word::letters(w))).expect("nonempty sum")
    }

    pub fn summands(&self) -> impl Iterator<Item = &Word> + '_ {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; sums are nonempty.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.0.contains(w)
    }

    /// `self + w`.
    pub fn with(&self, w: Word) -> TermSum {
        let mut s = self.0.clone();
        s.insert(w);
        TermSum(s)
    }

    pub fn union(&self, other: &TermSum) -> TermSum {
        TermSum(self.0.union(&other.0).cloned().collect())
    }

    pub fn content(&self) -> BTreeSet<Var> {
        content_of(self.0.iter())
    }

    pub fn max_len(&self) -> usize {
        self.0.iter().map(Word::len).max().unwrap_or(0)
    }

    /// `L_{>=k}(u)`.
    pub fn l_geq(&self, k: usize) -> Vec<&Word> {
        self.0.iter().filter(|w| w.len() >= k).collect()
    }

    /// `L_{<=k}(u)`.
    pub fn l_leq(&self, k: usize) -> Vec<&Word> {
        self.0.iter().filter(|w| w.len() <= k).collect()
    }

    /// `L_k(u)`.
    pub fn l_eq(&self, k: usize) -> Vec<&Word> {
        self.0.iter().filter(|w| w.len() == k).collect()
    }

    /// `H_q(u)`: summands with the same head as `q`.
    pub fn h_q(&self, q: &Word) -> Vec<&Word> {
        self.0.iter().filter(|w| w.head() == q.head()).collect()
    }

    /// `D_q(u)`: summands whose content lies inside `c(q)`.
    pub fn d_q(&self, q: &Word) -> Vec<&Word> {
        let cq = q.content();
        self.0
            .iter()
            .filter(|w| w.as_slice().iter().all(|v| cq.contains(v)))
            .collect()
    }

    /// For all ordered pairs of summands: `m(t(u_i), u_j) <= 1`, and
    /// `m(t(u_i), u_j) = 1` forces `t(u_i) = t(u_j)`.
    pub fn property_t(&self) -> bool {
        self.0.iter().all(|ui| {
            let t = ui.tail();
            self.0.iter().all(|uj| match uj.multiplicity(t) {
                0 => true,
                1 => uj.tail() == t,
                _ => false,
            })
        })
    }

    pub fn reversed(&self) -> TermSum {
        TermSum(self.0.iter().map(Word::reversed).collect())
    }

    /// Erases variables from every summand; `None` if some summand vanishes.
    pub fn erase(&self, gone: &BTreeSet<Var>) -> Option<TermSum> {
        let words: Option<Vec<Word>> = self.0.iter().map(|w| w.erase(gone)).collect();
        TermSum::new(words?)
    }

    pub fn rename(&self, f: impl Fn(Var) -> Var) -> TermSum {
        TermSum(self.0.iter().map(|w| w.rename(&f)).collect())
    }
}

impl fmt::Display for TermSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

/// Union of the contents of the given words.
pub fn content_of<'a>(words: impl IntoIterator<Item = &'a Word>) -> BTreeSet<Var> {
    words
        .into_iter()
        .flat_map(|w| w.as_slice().iter().copied())
        .collect()
}

/// `M_1(q)`: variables occurring exactly once in `q`.
pub fn m1(q: &Word) -> BTreeSet<Var> {
    q.once_vars()
}

/// An identity `lhs ≈ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Identity {
    pub lhs: TermSum,
    pub rhs: TermSum,
}

impl Identity {
    pub fn new(lhs: TermSum, rhs: TermSum) -> Self {
        Identity { lhs, rhs }
    }

    /// Variables of both sides, in variable order.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut v = self.lhs.content();
        v.extend(self.rhs.content());
        v
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }

    /// Word reversal on both sides; realizes the opposite multiplication.
    pub fn reversed(&self) -> Identity {
        Identity::new(self.lhs.reversed(), self.rhs.reversed())
    }

    /// The two inequalities `u ≈ u + v` and `v ≈ v + u` whose conjunction is this identity.
    pub fn split(&self) -> (Identity, Identity) {
        (
            Identity::new(self.lhs.clone(), self.lhs.union(&self.rhs)),
            Identity::new(self.rhs.clone(), self.rhs.union(&self.lhs)),
        )
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ≈ {}", self.lhs, self.rhs)
    }
}

/// An identity `u ≈ u + q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UQPair {
    pub u: TermSum,
    pub q: Word,
}

impl UQPair {
    pub fn new(u: TermSum, q: Word) -> Self {
        UQPair { u, q }
    }

    /// Trivial when `q` is already a summand of `u`.
    pub fn is_trivial(&self) -> bool {
        self.u.contains(&self.q)
    }

    pub fn to_identity(&self) -> Identity {
        Identity::new(self.u.clone(), self.u.with(self.q.clone()))
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut v = self.u.content();
        v.extend(self.q.as_slice().iter().copied());
        v
    }
}

impl fmt::Display for UQPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ≈ {} + {}", self.u, self.u, self.q)
    }
}

/// An identity together with variables that may be erased.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdentityScheme {
    identity: Identity,
    optional: BTreeSet<Var>,
}

impl IdentityScheme {
    /// Optional variables must occur in the identity.
    pub fn new(identity: Identity, optional: BTreeSet<Var>) -> Result<Self> {
        let vars = identity.vars();
        if let Some(v) = optional.iter().find(|v| !vars.contains(v)) {
            return Err(Error::Structure(format!(
                "optional variable {v} does not occur in {identity}"
            )));
        }
        Ok(IdentityScheme { identity, optional })
    }

    pub fn plain(identity: Identity) -> Self {
        IdentityScheme {
            identity,
            optional: BTreeSet::new(),
        }
    }

    pub fn identity(&self) -> &Identity {
        &self.identity
    }

    pub fn optional(&self) -> &BTreeSet<Var> {
        &self.optional
    }

    /// One identity per erased subset of the optional variables, skipping
    /// subsets that would empty a word. Duplicates are dropped; the first
    /// entry is always the unerased identity.
    pub fn expand(&self) -> Result<Vec<Identity>> {
        let opts: Vec<Var> = self.optional.iter().copied().collect();
        let mut out: Vec<Identity> = Vec::new();
        for mask in 0u32..(1 << opts.len()) {
            let gone: BTreeSet<Var> = opts
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, v)| *v)
                .collect();
            let (Some(lhs), Some(rhs)) = (self.identity.lhs.erase(&gone), self.identity.rhs.erase(&gone))
            else {
                continue;
            };
            let id = Identity::new(lhs, rhs);
            if !out.contains(&id) {
                out.push(id);
            }
        }
        if out.is_empty() {
            return Err(Error::EmptyScheme);
        }
        Ok(out)
    }

    pub fn reversed(&self) -> IdentityScheme {
        IdentityScheme {
            identity: self.identity.reversed(),
            optional: self.optional.clone(),
        }
    }
}

impl fmt::Display for IdentityScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.identity)?;
        if !self.optional.is_empty() {
            f.write_str(" ; optional")?;
            for v in &self.optional {
                write!(f, " {v}")?;
            }
        }
        Ok(())
    }
}
