//! Recorded equational bases: claim files, soundness, cross-algebra claims,
//! and bounded completeness evidence through finite countermodel search.
//!
//! Completeness is only ever evidence: a report can say that no countermodel
//! of order ≤ k exists among the models of a basis, never that an identity
//! is derivable.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::algebra::FiniteAiSemiring;
use crate::catalog::{normalize_name, Catalog};
use crate::construct::{adjoin_zero, dual, strip_zero};
use crate::enumerate::{enumerate_order, MAX_ENUM_ORDER};
use crate::error::{Error, Result};
use crate::parse::parse_scheme_at;
use crate::satisfaction::{satisfies, satisfies_scheme, Corpus, SchemeVerdict};
use crate::search::{congruences, is_isomorphic};
use crate::term::{Identity, IdentityScheme, UQPair};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    FinitelyBased,
    NonfinitelyBased,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::FinitelyBased => "fb",
            Status::NonfinitelyBased => "nfb",
        })
    }
}

/// Where a claim's basis comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClaimSource {
    /// Schemes transcribed in the file.
    PrintedBasis,
    /// The word-reversed basis of another claim; the algebra must be
    /// isomorphic to the dual of that claim's algebra.
    DualOf(String),
    /// Exactly the basis of another claim.
    BasisOf(String),
    /// Finite basedness follows from an external result; the file records
    /// the checkable hypothesis (identities or evidence lines).
    Cited(String),
    /// The algebra is `B^0` for the named order-3 algebra.
    ZeroAdjunction(String),
}

impl fmt::Display for ClaimSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClaimSource::PrintedBasis => write!(f, "printed-basis"),
            ClaimSource::DualOf(n) => write!(f, "dual-of {n}"),
            ClaimSource::BasisOf(n) => write!(f, "basis-of {n}"),
            ClaimSource::Cited(k) => write!(f, "cited {k}"),
            ClaimSource::ZeroAdjunction(n) => write!(f, "zero-adjunction {n}"),
        }
    }
}

/// Checkable facts backing a cited claim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// Every corpus identity holding in all listed algebras holds here.
    Within(Vec<String>),
    /// Same corpus theory as the named algebra.
    VarietyEqual(String),
    /// Congruences with at most `k` blocks separate the elements.
    Separated(usize),
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::Within(ns) => write!(f, "within {}", ns.join(" ")),
            Evidence::VarietyEqual(n) => write!(f, "variety-equal {n}"),
            Evidence::Separated(k) => write!(f, "separated {k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisClaim {
    pub algebra: String,
    pub status: Status,
    pub source: ClaimSource,
    pub evidence: Vec<Evidence>,
    /// Schemes written in the file; derived sources leave this empty.
    pub schemes: Vec<IdentityScheme>,
}

const DIRECTIVES: [&str; 6] = ["algebra", "status", "source", "within", "variety-equal", "separated"];

impl BasisClaim {
    pub fn parse(text: &str) -> Result<Self> {
        let mut algebra = None;
        let mut status = None;
        let mut source = None;
        let mut evidence = Vec::new();
        let mut schemes = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            let is_directive =
                DIRECTIVES.contains(&key) && !line.contains('≈') && !line.contains('=');
            if !is_directive {
                schemes.push(parse_scheme_at(raw.split('#').next().unwrap_or(""), line_no)?);
                continue;
            }
            let need = |v: &str| -> Result<()> {
                if v.is_empty() {
                    Err(Error::parse(line_no, 1, format!("`{key}` needs an argument")))
                } else {
                    Ok(())
                }
            };
            match key {
                "algebra" => {
                    need(rest)?;
                    algebra = Some(normalize_name(rest));
                }
                "status" => {
                    status = Some(match rest {
                        "fb" => Status::FinitelyBased,
                        "nfb" => Status::NonfinitelyBased,
                        _ => return Err(Error::parse(line_no, 8, "status must be `fb` or `nfb`")),
                    })
                }
                "source" => {
                    let (kind, arg) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                    let arg = arg.trim();
                    source = Some(match kind {
                        "printed-basis" => ClaimSource::PrintedBasis,
                        "dual-of" => {
                            need(arg)?;
                            ClaimSource::DualOf(normalize_name(arg))
                        }
                        "basis-of" => {
                            need(arg)?;
                            ClaimSource::BasisOf(normalize_name(arg))
                        }
                        "cited" => {
                            need(arg)?;
                            ClaimSource::Cited(arg.to_string())
                        }
                        "zero-adjunction" => {
                            need(arg)?;
                            ClaimSource::ZeroAdjunction(normalize_name(arg))
                        }
                        _ => {
                            return Err(Error::parse(
                                line_no,
                                8,
                                format!("unknown source kind `{kind}`"),
                            ))
                        }
                    })
                }
                "within" => {
                    need(rest)?;
                    evidence.push(Evidence::Within(
                        rest.split_whitespace().map(normalize_name).collect(),
                    ))
                }
                "variety-equal" => {
                    need(rest)?;
                    evidence.push(Evidence::VarietyEqual(normalize_name(rest)))
                }
                "separated" => {
                    let k = rest
                        .parse()
                        .map_err(|_| Error::parse(line_no, 11, "expected a block bound"))?;
                    evidence.push(Evidence::Separated(k))
                }
                _ => unreachable!(),
            }
        }
        let missing = |what: &str| Error::parse(1, 1, format!("missing `{what}` line"));
        let claim = BasisClaim {
            algebra: algebra.ok_or_else(|| missing("algebra"))?,
            status: status.ok_or_else(|| missing("status"))?,
            source: source.ok_or_else(|| missing("source"))?,
            evidence,
            schemes,
        };
        claim.check_shape()?;
        Ok(claim)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    fn check_shape(&self) -> Result<()> {
        let bad = |m: &str| {
            Err(Error::Claim {
                name: self.algebra.clone(),
                message: m.to_string(),
            })
        };
        match (&self.status, &self.source) {
            (Status::NonfinitelyBased, _) if !self.schemes.is_empty() => {
                bad("a nonfinitely based claim carries no schemes")
            }
            (Status::FinitelyBased, ClaimSource::ZeroAdjunction(_)) => {
                bad("zero-adjunction is only recorded for the nonfinitely based claim")
            }
            (_, ClaimSource::PrintedBasis) if self.schemes.is_empty() => {
                bad("a printed basis needs at least one scheme")
            }
            (_, ClaimSource::DualOf(_) | ClaimSource::BasisOf(_)) if !self.schemes.is_empty() => {
                bad("derived bases take their schemes from the referenced claim")
            }
            (_, ClaimSource::Cited(_)) if self.schemes.is_empty() && self.evidence.is_empty() => {
                bad("a cited claim needs identities or evidence lines")
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for BasisClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "algebra {}", self.algebra)?;
        writeln!(f, "status {}", self.status)?;
        writeln!(f, "source {}", self.source)?;
        for e in &self.evidence {
            writeln!(f, "{e}")?;
        }
        for s in &self.schemes {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

/// All claims of a data directory, keyed by algebra name.
#[derive(Clone, Debug)]
pub struct ClaimSet {
    claims: BTreeMap<String, BasisClaim>,
}

impl ClaimSet {
    /// Reads `<catalog dir>/claims/*.basis`.
    pub fn for_catalog(cat: &Catalog) -> Result<Self> {
        Self::load(&cat.dir().join("claims"))
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let rd = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
        let mut paths: Vec<PathBuf> = rd
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "basis"))
            .collect();
        paths.sort();
        let mut claims = BTreeMap::new();
        for p in paths {
            let c = BasisClaim::read(&p).map_err(|e| match e {
                Error::Parse { line, column, message } => Error::Parse {
                    line,
                    column,
                    message: format!("{}: {message}", p.display()),
                },
                e => e,
            })?;
            if claims.contains_key(&c.algebra) {
                return Err(Error::Claim {
                    name: c.algebra,
                    message: "claimed twice".into(),
                });
            }
            claims.insert(c.algebra.clone(), c);
        }
        let set = ClaimSet { claims };
        for name in set.claims.keys() {
            set.schemes(name)?;
        }
        Ok(set)
    }

    pub fn from_claims(claims: impl IntoIterator<Item = BasisClaim>) -> Result<Self> {
        let set = ClaimSet {
            claims: claims.into_iter().map(|c| (c.algebra.clone(), c)).collect(),
        };
        for name in set.claims.keys() {
            set.schemes(name)?;
        }
        Ok(set)
    }

    pub fn get(&self, name: &str) -> Result<&BasisClaim> {
        self.claims
            .get(&normalize_name(name))
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn claims(&self) -> impl Iterator<Item = &BasisClaim> + '_ {
        self.claims.values()
    }

    pub fn len(&self) -> usize {
        self.claims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.claims.is_empty()
    }

    /// The schemes a claim stands for, following `dual-of` and `basis-of`.
    pub fn schemes(&self, name: &str) -> Result<Vec<IdentityScheme>> {
        self.schemes_at(name, 0)
    }

    fn schemes_at(&self, name: &str, depth: usize) -> Result<Vec<IdentityScheme>> {
        let c = self.get(name)?;
        if depth > self.claims.len() {
            return Err(Error::Claim {
                name: c.algebra.clone(),
                message: "cyclic basis reference".into(),
            });
        }
        Ok(match &c.source {
            ClaimSource::DualOf(b) => self
                .schemes_at(b, depth + 1)?
                .iter()
                .map(IdentityScheme::reversed)
                .collect(),
            ClaimSource::BasisOf(b) => self.schemes_at(b, depth + 1)?,
            _ => c.schemes.clone(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct SoundnessReport {
    pub algebra: String,
    pub results: Vec<(IdentityScheme, SchemeVerdict)>,
}

impl SoundnessReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|(_, v)| v.holds())
    }
}

/// Every expansion of every scheme, checked by exhaustive assignment sweep.
pub fn check_schemes(
    a: &FiniteAiSemiring,
    name: &str,
    schemes: &[IdentityScheme],
) -> Result<SoundnessReport> {
    let results = schemes
        .par_iter()
        .map(|s| Ok((s.clone(), satisfies_scheme(a, s)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SoundnessReport {
        algebra: name.to_string(),
        results,
    })
}

pub fn verify_soundness(cat: &Catalog, claims: &ClaimSet, name: &str) -> Result<SoundnessReport> {
    let c = claims.get(name)?;
    let a = cat.algebra(&c.algebra)?;
    check_schemes(a, &c.algebra, &claims.schemes(&c.algebra)?)
}

/// One named check with a one-line outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "pass" } else { "FAIL" };
        if self.detail.is_empty() {
            write!(f, "{mark} {}", self.label)
        } else {
            write!(f, "{mark} {}: {}", self.label, self.detail)
        }
    }
}

fn corpus_theory(a: &FiniteAiSemiring, corpus: &Corpus) -> Result<Vec<bool>> {
    Ok(corpus.evaluator(a)?.verdicts())
}

fn first_pair(corpus: &Corpus, idx: Option<usize>) -> String {
    idx.map(|i| corpus.pair(i).to_string()).unwrap_or_default()
}

fn check_evidence(
    cat: &Catalog,
    a: &FiniteAiSemiring,
    e: &Evidence,
    corpus: &Corpus,
) -> Result<Check> {
    let label = e.to_string();
    Ok(match e {
        Evidence::Within(names) => {
            let mine = corpus_theory(a, corpus)?;
            let others = names
                .iter()
                .map(|n| corpus_theory(cat.algebra(n)?, corpus))
                .collect::<Result<Vec<_>>>()?;
            let bad: Vec<usize> = (0..corpus.len())
                .filter(|&i| others.iter().all(|t| t[i]) && !mine[i])
                .collect();
            Check {
                label,
                passed: bad.is_empty(),
                detail: if bad.is_empty() {
                    format!("{} corpus identities", corpus.len())
                } else {
                    format!("{} escape, first {}", bad.len(), first_pair(corpus, bad.first().copied()))
                },
            }
        }
        Evidence::VarietyEqual(n) => {
            let mine = corpus_theory(a, corpus)?;
            let other = corpus_theory(cat.algebra(n)?, corpus)?;
            let diff: Vec<usize> = (0..corpus.len()).filter(|&i| mine[i] != other[i]).collect();
            Check {
                label,
                passed: diff.is_empty(),
                detail: if diff.is_empty() {
                    format!("equal on {} corpus identities", corpus.len())
                } else {
                    format!("{} differ, first {}", diff.len(), first_pair(corpus, diff.first().copied()))
                },
            }
        }
        Evidence::Separated(k) => {
            let n = a.order();
            let small: Vec<_> = congruences(a)?
                .into_iter()
                .filter(|p| p.block_count() <= *k && p.block_count() < n)
                .collect();
            let meet = small
                .iter()
                .skip(1)
                .fold(small.first().cloned(), |acc, p| acc.map(|m| m.meet(p)));
            let passed = meet.is_some_and(|m| m.is_discrete());
            Check {
                label,
                passed,
                detail: format!("{} proper congruences with ≤ {k} blocks", small.len()),
            }
        }
    })
}

/// Result of verifying one claim file.
#[derive(Clone, Debug)]
pub struct ClaimReport {
    pub claim: BasisClaim,
    pub soundness: SoundnessReport,
    /// Evidence lines and source-specific structure.
    pub checks: Vec<Check>,
}

impl ClaimReport {
    pub fn passed(&self) -> bool {
        self.soundness.passed() && self.checks.iter().all(|c| c.passed)
    }
}

/// Soundness plus every check implied by the claim's source and evidence.
pub fn verify_claim(
    cat: &Catalog,
    claims: &ClaimSet,
    name: &str,
    corpus: &Corpus,
) -> Result<ClaimReport> {
    let claim = claims.get(name)?.clone();
    let a = cat.algebra(&claim.algebra)?;
    let soundness = verify_soundness(cat, claims, &claim.algebra)?;
    let mut checks = Vec::new();
    match &claim.source {
        ClaimSource::DualOf(b) => {
            let ok = is_isomorphic(&dual(cat.algebra(b)?), a);
            checks.push(Check {
                label: format!("dual of {b} is isomorphic to {}", claim.algebra),
                passed: ok,
                detail: String::new(),
            });
        }
        ClaimSource::ZeroAdjunction(b) => checks.extend(zero_adjunction_checks(cat, &claim.algebra, b)?),
        _ => {}
    }
    for e in &claim.evidence {
        checks.push(check_evidence(cat, a, e, corpus)?);
    }
    Ok(ClaimReport {
        claim,
        soundness,
        checks,
    })
}

/// `strip_zero(A)` then `adjoin_zero` gives back `A`, and `A ≅ B^0`.
pub fn zero_adjunction_checks(cat: &Catalog, name: &str, base: &str) -> Result<Vec<Check>> {
    let a = cat.algebra(name)?;
    let mut out = Vec::new();
    let stripped = strip_zero(a);
    let round = stripped.as_ref().map(|s| is_isomorphic(&adjoin_zero(s), a));
    out.push(Check {
        label: format!("adjoin_zero(strip_zero({name})) is isomorphic to {name}"),
        passed: matches!(round, Ok(true)),
        detail: match &round {
            Err(e) => e.to_string(),
            Ok(_) => String::new(),
        },
    });
    let b = cat.algebra(base)?;
    out.push(Check {
        label: format!("{name} is isomorphic to {base}^0"),
        passed: is_isomorphic(&adjoin_zero(b), a),
        detail: String::new(),
    });
    Ok(out)
}

/// "Algebra X satisfies the basis recorded for Y" statements.
#[derive(Clone, Debug)]
pub struct CrossClaim {
    pub algebra: String,
    pub basis_of: String,
}

pub fn cross_claims(claims: &ClaimSet) -> Vec<CrossClaim> {
    claims
        .claims()
        .filter_map(|c| match &c.source {
            ClaimSource::BasisOf(b) => Some(CrossClaim {
                algebra: c.algebra.clone(),
                basis_of: b.clone(),
            }),
            _ => None,
        })
        .collect()
}

pub fn verify_cross_claims(cat: &Catalog, claims: &ClaimSet) -> Result<Vec<(CrossClaim, SoundnessReport)>> {
    cross_claims(claims)
        .into_iter()
        .map(|x| {
            let r = check_schemes(cat.algebra(&x.algebra)?, &x.algebra, &claims.schemes(&x.basis_of)?)?;
            Ok((x, r))
        })
        .collect()
}

/// Every ai-semiring of order `1..=k` up to isomorphism.
#[derive(Clone, Debug)]
pub struct ModelLibrary {
    max_order: usize,
    models: Vec<FiniteAiSemiring>,
}

impl ModelLibrary {
    /// Order 4 runs the full order-4 enumeration.
    pub fn up_to(k: usize) -> Result<Self> {
        if k == 0 || k > MAX_ENUM_ORDER {
            return Err(Error::Bound {
                what: "countermodel order",
                size: k,
                bound: MAX_ENUM_ORDER,
            });
        }
        let mut models = Vec::new();
        for n in 1..=k {
            models.extend(enumerate_order(n, true)?.representatives);
        }
        Ok(ModelLibrary { max_order: k, models })
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn models(&self) -> &[FiniteAiSemiring] {
        &self.models
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    /// Library models satisfying every scheme, in library order.
    pub fn models_of(&self, schemes: &[IdentityScheme]) -> Result<Vec<&FiniteAiSemiring>> {
        let keep = self
            .models
            .par_iter()
            .map(|m| {
                for s in schemes {
                    if !satisfies_scheme(m, s)?.holds() {
                        return Ok(false);
                    }
                }
                Ok(true)
            })
            .collect::<Result<Vec<bool>>>()?;
        Ok(self.models.iter().zip(keep).filter(|(_, k)| *k).map(|(m, _)| m).collect())
    }
}

/// The first library model that satisfies every scheme but fails `target`.
pub fn countermodel_search(
    schemes: &[IdentityScheme],
    target: &Identity,
    lib: &ModelLibrary,
) -> Result<Option<FiniteAiSemiring>> {
    for m in lib.models_of(schemes)? {
        if !satisfies(m, target)?.holds() {
            return Ok(Some(m.clone()));
        }
    }
    Ok(None)
}

/// A corpus identity of the algebra that some model of the basis fails.
#[derive(Clone, Debug)]
pub struct RedFlag {
    pub pair: UQPair,
    /// The first model of the basis, in library order, that fails it.
    pub model: FiniteAiSemiring,
}

#[derive(Clone, Debug)]
pub struct CompletenessReport {
    pub algebra: String,
    pub max_order: usize,
    /// Library models satisfying the basis.
    pub basis_models: usize,
    /// Corpus identities of the algebra that were examined.
    pub identities: usize,
    /// One entry per flagged identity, with the first failing model.
    pub red_flags: Vec<RedFlag>,
}

impl CompletenessReport {
    pub fn passed(&self) -> bool {
        self.red_flags.is_empty()
    }

    pub fn summary(&self) -> String {
        if self.passed() {
            format!(
                "{}: no countermodel of order ≤ {} for any of {} corpus identities ({} models of the basis)",
                self.algebra, self.max_order, self.identities, self.basis_models
            )
        } else {
            format!(
                "{}: {} corpus identities have a countermodel of order ≤ {} ({} models of the basis)",
                self.algebra,
                self.red_flags.len(),
                self.max_order,
                self.basis_models
            )
        }
    }
}

/// For every corpus identity of `a`, looks for a model of `schemes` of
/// order ≤ k that fails it.
pub fn completeness_evidence(
    name: &str,
    a: &FiniteAiSemiring,
    schemes: &[IdentityScheme],
    corpus: &Corpus,
    lib: &ModelLibrary,
) -> Result<CompletenessReport> {
    let mine = corpus_theory(a, corpus)?;
    let models = lib.models_of(schemes)?;
    let theories = models
        .par_iter()
        .map(|m| corpus_theory(m, corpus))
        .collect::<Result<Vec<_>>>()?;
    let red_flags = (0..corpus.len())
        .filter(|&i| mine[i])
        .filter_map(|i| {
            theories.iter().position(|t| !t[i]).map(|j| RedFlag {
                pair: corpus.pair(i),
                model: models[j].clone(),
            })
        })
        .collect();
    Ok(CompletenessReport {
        algebra: name.to_string(),
        max_order: lib.max_order(),
        basis_models: models.len(),
        identities: mine.iter().filter(|&&b| b).count(),
        red_flags,
    })
}

/// Outcome of deleting one scheme from a basis.
#[derive(Clone, Debug)]
pub struct Mutation {
    pub dropped: IdentityScheme,
    pub red_flags: usize,
}

/// Single-scheme deletions; a complete-looking basis should lose
/// completeness evidence under at least one of them.
pub fn mutation_test(
    name: &str,
    a: &FiniteAiSemiring,
    schemes: &[IdentityScheme],
    corpus: &Corpus,
    lib: &ModelLibrary,
) -> Result<Vec<Mutation>> {
    (0..schemes.len())
        .map(|i| {
            let mut rest = schemes.to_vec();
            let dropped = rest.remove(i);
            let r = completeness_evidence(name, a, &rest, corpus, lib)?;
            Ok(Mutation {
                dropped,
                red_flags: r.red_flags.len(),
            })
        })
        .collect()
}

/// One row of the summary over all recorded claims.
#[derive(Clone, Debug)]
pub struct TheoremRow {
    pub algebra: String,
    pub status: Status,
    pub source: ClaimSource,
    pub verified: bool,
    pub checks: usize,
    pub completeness: Option<CompletenessReport>,
}

#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub rows: Vec<TheoremRow>,
}

impl TheoremReport {
    pub fn finitely_based(&self) -> usize {
        self.rows.iter().filter(|r| r.status == Status::FinitelyBased).count()
    }

    pub fn nonfinitely_based(&self) -> usize {
        self.rows.iter().filter(|r| r.status == Status::NonfinitelyBased).count()
    }

    pub fn verified(&self) -> usize {
        self.rows.iter().filter(|r| r.verified).count()
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.verified && r.completeness.as_ref().is_none_or(|c| c.passed()))
    }
}

/// Verifies every claim on a table-1 algebra; with a library, also runs
/// completeness evidence for claims that carry schemes.
pub fn theorem_report(
    cat: &Catalog,
    claims: &ClaimSet,
    corpus: &Corpus,
    lib: Option<&ModelLibrary>,
) -> Result<TheoremReport> {
    let names: Vec<String> = cat.all_table1().iter().map(|e| e.name.clone()).collect();
    let rows = names
        .par_iter()
        .map(|n| {
            let r = verify_claim(cat, claims, n, corpus)?;
            let schemes = claims.schemes(n)?;
            let completeness = match lib {
                Some(lib) if !schemes.is_empty() => {
                    Some(completeness_evidence(n, cat.algebra(n)?, &schemes, corpus, lib)?)
                }
                _ => None,
            };
            Ok(TheoremRow {
                algebra: n.clone(),
                status: r.claim.status,
                source: r.claim.source.clone(),
                verified: r.passed(),
                checks: r.soundness.results.len() + r.checks.len(),
                completeness,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TheoremReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_identity;
    use crate::satisfaction::CorpusBounds;

    fn claim(text: &str) -> BasisClaim {
        BasisClaim::parse(text).unwrap()
    }

    #[test]
    fn parse_and_print_roundtrip() {
        let text = "algebra S_(4,400)\nstatus fb\nsource printed-basis\nxyz ≈ xyz + y ; optional x z\n";
        let c = claim(text);
        assert_eq!(c.source, ClaimSource::PrintedBasis);
        assert_eq!(c.schemes.len(), 1);
        assert_eq!(claim(&c.to_string()), c);
    }

    #[test]
    fn malformed_claims_are_rejected() {
        assert!(matches!(
            BasisClaim::parse("algebra A\nstatus maybe\nsource printed-basis\nx ≈ x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            BasisClaim::parse("algebra A\nstatus fb\nsource printed-basis\nx ≈ \n"),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(matches!(
            BasisClaim::parse("algebra A\nstatus nfb\nsource printed-basis\nx ≈ x\n"),
            Err(Error::Claim { .. })
        ));
        assert!(BasisClaim::parse("status fb\nsource printed-basis\nx ≈ x\n").is_err());
    }

    #[test]
    fn derived_schemes_follow_references() {
        let base = claim("algebra B\nstatus fb\nsource printed-basis\nxxy ≈ xy\n");
        let d = claim("algebra D\nstatus fb\nsource dual-of B\n");
        let s = claim("algebra S\nstatus fb\nsource basis-of D\n");
        let set = ClaimSet::from_claims([base, d, s]).unwrap();
        assert_eq!(set.schemes("D").unwrap()[0].to_string(), "yx^2 ≈ yx");
        assert_eq!(set.schemes("S").unwrap(), set.schemes("D").unwrap());
        let cyc = claim("algebra C\nstatus fb\nsource basis-of C\n");
        assert!(ClaimSet::from_claims([cyc]).is_err());
    }

    #[test]
    fn countermodels_on_small_orders() {
        let lib = ModelLibrary::up_to(2).unwrap();
        assert_eq!(lib.len(), 7);
        let comm = vec![IdentityScheme::plain(parse_identity("xy ≈ yx").unwrap())];
        let target = parse_identity("xy ≈ x").unwrap();
        let m = countermodel_search(&comm, &target, &lib).unwrap().unwrap();
        assert_eq!(m.order(), 2);
        assert!(countermodel_search(&comm, &comm[0].identity().clone(), &lib).unwrap().is_none());
    }

    #[test]
    fn empty_basis_is_vacuously_sound() {
        let a = FiniteAiSemiring::trivial();
        assert!(check_schemes(&a, "T", &[]).unwrap().passed());
    }

    #[test]
    fn trivial_identities_never_flag() {
        let lib = ModelLibrary::up_to(2).unwrap();
        let corpus = Corpus::generate(CorpusBounds::new(2, 2, 2)).unwrap();
        let a = FiniteAiSemiring::trivial();
        let r = completeness_evidence("T", &a, &[], &corpus, &lib).unwrap();
        assert!(r.red_flags.iter().all(|f| !f.pair.is_trivial()));
        assert!(!r.passed());
    }
}
