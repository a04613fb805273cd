//! Recorded structural claims (subalgebras, quotients, embeddings into
//! powers, duals, subdirect decompositions, zero adjunction) and their
//! verification against the catalog.

use std::fmt;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::algebra::FiniteAiSemiring;
use crate::catalog::{normalize_name, parse_element_set, partition_from_text, Catalog};
use crate::congruence::{is_congruence, quotient, Partition};
use crate::construct::{adjoin_zero, coordinates, dual, power, strip_zero, subalgebra};
use crate::error::{Error, Result};
use crate::search::{
    find_embedding, find_isomorphism, is_isomorphic, subdirect_congruences, ElementMap, FactorSpec,
};

/// A subdirect factor: a named algebra, or any quotient of the given order
/// that contains copies of the listed algebras (`*3[L_2,M_2]`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorRef {
    Named(String),
    Any { order: usize, containing: Vec<String> },
}

impl fmt::Display for FactorRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorRef::Named(n) => f.write_str(n),
            FactorRef::Any { order, containing } if containing.is_empty() => write!(f, "*{order}"),
            FactorRef::Any { order, containing } => write!(f, "*{order}[{}]", containing.join(",")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureClaim {
    /// The subset is closed and isomorphic to `expect`.
    Sub { algebra: String, subset: Vec<usize>, expect: String },
    /// The partition is a congruence whose quotient is isomorphic to `expect`.
    Quotient { algebra: String, partition: Partition, expect: String },
    /// The partition is a congruence.
    Congruence { algebra: String, partition: Partition },
    /// `algebra` embeds into `target^power`.
    Embed { algebra: String, target: String, power: usize },
    /// `algebra` is isomorphic to the dual of `of`.
    Dual { algebra: String, of: String },
    /// `algebra` is a subdirect product of the factors.
    Subdirect { algebra: String, factors: Vec<FactorRef> },
    /// `sub` embeds into `algebra`.
    Contains { algebra: String, sub: String },
    /// `algebra` is isomorphic to `base^0`.
    Zero { algebra: String, base: String },
}

fn set_text(s: &[usize]) -> String {
    let items: Vec<String> = s.iter().map(|x| (x + 1).to_string()).collect();
    format!("{{{}}}", items.join(","))
}

impl fmt::Display for StructureClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureClaim::Sub { algebra, subset, expect } => {
                write!(f, "sub {algebra} {} {expect}", set_text(subset))
            }
            StructureClaim::Quotient { algebra, partition, expect } => {
                write!(f, "quotient {algebra} {partition} {expect}")
            }
            StructureClaim::Congruence { algebra, partition } => {
                write!(f, "congruence {algebra} {partition}")
            }
            StructureClaim::Embed { algebra, target, power } => {
                write!(f, "embed {algebra} {target}^{power}")
            }
            StructureClaim::Dual { algebra, of } => write!(f, "dual {algebra} {of}"),
            StructureClaim::Subdirect { algebra, factors } => {
                write!(f, "subdirect {algebra}")?;
                for x in factors {
                    write!(f, " {x}")?;
                }
                Ok(())
            }
            StructureClaim::Contains { algebra, sub } => write!(f, "contains {algebra} {sub}"),
            StructureClaim::Zero { algebra, base } => write!(f, "zero {algebra} {base}"),
        }
    }
}

fn parse_factor(tok: &str) -> std::result::Result<FactorRef, String> {
    let Some(rest) = tok.strip_prefix('*') else {
        return Ok(FactorRef::Named(normalize_name(tok)));
    };
    let (num, list) = match rest.split_once('[') {
        Some((n, l)) => (
            n,
            l.strip_suffix(']')
                .ok_or_else(|| format!("unclosed `[` in `{tok}`"))?,
        ),
        None => (rest, ""),
    };
    let order = num
        .parse()
        .map_err(|_| format!("`{tok}` needs a factor order after `*`"))?;
    let containing = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(normalize_name)
        .collect();
    Ok(FactorRef::Any { order, containing })
}

impl StructureClaim {
    pub fn parse_line(line: &str, line_no: usize) -> Result<Self> {
        let err = |m: String| Error::parse(line_no, 1, m);
        let toks: Vec<&str> = line.split_whitespace().collect();
        let arity = |n: usize| {
            if toks.len() == n {
                Ok(())
            } else {
                Err(err(format!("`{}` takes {} arguments", toks[0], n - 1)))
            }
        };
        let Some(&kind) = toks.first() else {
            return Err(err("empty claim".into()));
        };
        let name = |i: usize| normalize_name(toks[i]);
        Ok(match kind {
            "sub" => {
                arity(4)?;
                StructureClaim::Sub {
                    algebra: name(1),
                    subset: parse_element_set(toks[2]).map_err(err)?,
                    expect: name(3),
                }
            }
            "quotient" => {
                arity(4)?;
                StructureClaim::Quotient {
                    algebra: name(1),
                    partition: partition_from_text(toks[2]).map_err(err)?,
                    expect: name(3),
                }
            }
            "congruence" => {
                arity(3)?;
                StructureClaim::Congruence {
                    algebra: name(1),
                    partition: partition_from_text(toks[2]).map_err(err)?,
                }
            }
            "embed" => {
                arity(3)?;
                let (target, k) = toks[2]
                    .rsplit_once('^')
                    .ok_or_else(|| err(format!("expected NAME^k, found `{}`", toks[2])))?;
                let power = k
                    .parse()
                    .ok()
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| err(format!("bad exponent in `{}`", toks[2])))?;
                StructureClaim::Embed {
                    algebra: name(1),
                    target: normalize_name(target),
                    power,
                }
            }
            "dual" => {
                arity(3)?;
                StructureClaim::Dual { algebra: name(1), of: name(2) }
            }
            "subdirect" => {
                if toks.len() < 3 {
                    return Err(err("`subdirect` needs an algebra and at least one factor".into()));
                }
                StructureClaim::Subdirect {
                    algebra: name(1),
                    factors: toks[2..]
                        .iter()
                        .map(|t| parse_factor(t))
                        .collect::<std::result::Result<_, _>>()
                        .map_err(err)?,
                }
            }
            "contains" => {
                arity(3)?;
                StructureClaim::Contains { algebra: name(1), sub: name(2) }
            }
            "zero" => {
                arity(3)?;
                StructureClaim::Zero { algebra: name(1), base: name(2) }
            }
            _ => return Err(err(format!("unknown claim kind `{kind}`"))),
        })
    }

    /// One claim per line; `#` starts a comment.
    pub fn parse_file(text: &str) -> Result<Vec<Self>> {
        text.lines()
            .enumerate()
            .filter_map(|(i, raw)| {
                let line = raw.split('#').next().unwrap_or("").trim();
                (!line.is_empty()).then(|| Self::parse_line(line, i + 1))
            })
            .collect()
    }

    pub fn read(path: &Path) -> Result<Vec<Self>> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_file(&text)
    }

    /// The algebra the claim is about.
    pub fn algebra(&self) -> &str {
        match self {
            StructureClaim::Sub { algebra, .. }
            | StructureClaim::Quotient { algebra, .. }
            | StructureClaim::Congruence { algebra, .. }
            | StructureClaim::Embed { algebra, .. }
            | StructureClaim::Dual { algebra, .. }
            | StructureClaim::Subdirect { algebra, .. }
            | StructureClaim::Contains { algebra, .. }
            | StructureClaim::Zero { algebra, .. } => algebra,
        }
    }
}

/// `<catalog dir>/structure.claims`.
pub fn load_structure_claims(cat: &Catalog) -> Result<Vec<StructureClaim>> {
    StructureClaim::read(&cat.dir().join("structure.claims"))
}

#[derive(Clone, Debug)]
pub struct StructureOutcome {
    pub claim: StructureClaim,
    pub passed: bool,
    /// Witness on success, reason on failure.
    pub detail: String,
}

impl fmt::Display for StructureOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "pass" } else { "FAIL" };
        write!(f, "{mark} {}", self.claim)?;
        if !self.detail.is_empty() {
            write!(f, " | {}", self.detail)?;
        }
        Ok(())
    }
}

/// `1->(1,3) 2->(2,2) …` for a map into `B^k`.
pub fn format_power_map(map: &ElementMap, base_order: usize, k: usize) -> String {
    let orders = vec![base_order; k];
    map.image
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            let c: Vec<String> = coordinates(&orders, y).iter().map(|v| (v + 1).to_string()).collect();
            format!("{}->({})", i + 1, c.join(","))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn outcome(claim: &StructureClaim, passed: bool, detail: impl Into<String>) -> StructureOutcome {
    StructureOutcome {
        claim: claim.clone(),
        passed,
        detail: detail.into(),
    }
}

fn iso_detail(a: &FiniteAiSemiring, b: &FiniteAiSemiring) -> (bool, String) {
    match find_isomorphism(a, b) {
        Some(m) => (true, format!("isomorphism {m}")),
        None => (false, "not isomorphic".into()),
    }
}

pub fn verify_structure_claim(cat: &Catalog, claim: &StructureClaim) -> Result<StructureOutcome> {
    let a = cat.algebra(claim.algebra())?;
    Ok(match claim {
        StructureClaim::Sub { subset, expect, .. } => match subalgebra(a, subset) {
            Ok(s) => {
                let (ok, d) = iso_detail(&s, cat.algebra(expect)?);
                outcome(claim, ok, d)
            }
            Err(e) => outcome(claim, false, e.to_string()),
        },
        StructureClaim::Quotient { partition, expect, .. } => {
            if partition.len() != a.order() || !is_congruence(a, partition) {
                outcome(claim, false, "not a congruence")
            } else {
                let (ok, d) = iso_detail(&quotient(a, partition)?, cat.algebra(expect)?);
                outcome(claim, ok, d)
            }
        }
        StructureClaim::Congruence { partition, .. } => {
            let ok = partition.len() == a.order() && is_congruence(a, partition);
            outcome(claim, ok, if ok { "" } else { "not a congruence" })
        }
        StructureClaim::Embed { target, power: k, .. } => {
            let b = cat.algebra(target)?;
            match find_embedding(a, &power(b, *k))? {
                Some(m) => outcome(claim, true, format_power_map(&m, b.order(), *k)),
                None => outcome(claim, false, "no embedding"),
            }
        }
        StructureClaim::Dual { of, .. } => {
            let (ok, d) = iso_detail(&dual(cat.algebra(of)?), a);
            outcome(claim, ok, d)
        }
        StructureClaim::Subdirect { factors, .. } => {
            let specs = factors
                .iter()
                .map(|f| {
                    Ok(match f {
                        FactorRef::Named(n) => FactorSpec::Exactly(cat.algebra(n)?.clone()),
                        FactorRef::Any { order, containing } => FactorSpec::Containing {
                            order: *order,
                            subalgebras: containing
                                .iter()
                                .map(|n| cat.algebra(n).cloned())
                                .collect::<Result<_>>()?,
                        },
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            match subdirect_congruences(a, &specs)? {
                Some(ps) => {
                    let d: Vec<String> = ps.iter().map(Partition::to_string).collect();
                    outcome(claim, true, format!("kernels {}", d.join(" ")))
                }
                None => outcome(claim, false, "no congruences with these quotients meet in Δ"),
            }
        }
        StructureClaim::Contains { sub, .. } => match find_embedding(cat.algebra(sub)?, a)? {
            Some(m) => outcome(claim, true, format!("embedding {m}")),
            None => outcome(claim, false, "no embedding"),
        },
        StructureClaim::Zero { base, .. } => {
            let roundtrip = strip_zero(a).map(|s| is_isomorphic(&adjoin_zero(&s), a));
            let (iso, d) = iso_detail(&adjoin_zero(cat.algebra(base)?), a);
            match roundtrip {
                Ok(true) => outcome(claim, iso, format!("strip/adjoin roundtrip ok; {d}")),
                Ok(false) => outcome(claim, false, "strip/adjoin roundtrip not isomorphic"),
                Err(e) => outcome(claim, false, e.to_string()),
            }
        }
    })
}

/// Verifies claims in parallel; results keep the input order.
pub fn verify_structure_claims(
    cat: &Catalog,
    claims: &[StructureClaim],
) -> Result<Vec<StructureOutcome>> {
    claims
        .par_iter()
        .map(|c| verify_structure_claim(cat, c))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_print_roundtrip() {
        let text = "\
sub S_(4,475) {1,3} N_2
quotient S_(4,424) {{1,3},{2},{4}} S_57
congruence S_(4,471) {{1,4},{2},{3}}
embed S_(4,424) S_(4,395)^2
dual S_(4,461) S_(4,424)
subdirect S_(4,424) S_57 *3[R_2,M_2]
subdirect S_(4,416) *3 *3
contains S_57 T_2
zero S_(4,435) S_7
";
        let claims = StructureClaim::parse_file(text).unwrap();
        assert_eq!(claims.len(), 9);
        let printed: Vec<String> = claims.iter().map(|c| c.to_string()).collect();
        assert_eq!(printed.join("\n") + "\n", text);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let e = StructureClaim::parse_file("# c\nembed A B\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(StructureClaim::parse_file("frobnicate A B\n").is_err());
        assert!(StructureClaim::parse_file("sub A {0} B\n").is_err());
        assert!(StructureClaim::parse_file("subdirect A *x\n").is_err());
    }

    #[test]
    fn power_map_format() {
        let m = ElementMap { image: vec![0, 5] };
        assert_eq!(format_power_map(&m, 4, 2), "1->(1,1) 2->(2,2)");
    }
}
