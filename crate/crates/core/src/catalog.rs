//! Named algebras: the 93 order-4 table files plus algebras derived from
//! them by recipes.
//!
//! The data directory holds `table1/S_4_<k>.alg` files and a
//! `recipes.manifest` with lines of the form
//!
//! ```text
//! N_2 := sub(S_(4,471), {2,3})
//! S_57 := quot(S_(4,424), {{1,3},{2},{4}})
//! M_2 := strip0(M_2^0)
//! L_2^0 := adjoin0(L_2)
//! S_53 := quot(S_(4,401), {{1,3},{2},{4}}) provisional
//! ```
//!
//! A name may appear on several lines; the first line is its defining
//! recipe and later lines are alternate routes checked by [`Catalog::cross_check`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};

use crate::algebra::{diamond_addition, FiniteAiSemiring};
use crate::congruence::{quotient, Partition};
use crate::construct::{adjoin_zero, strip_zero, subalgebra};
use crate::error::{Error, Result};
use crate::search::{canonical_form, find_isomorphism, CanonicalForm};
use crate::textfmt::read_algebra;

/// Environment variable overriding the data directory.
pub const DATA_ENV: &str = "WORKBENCH_DATA";

/// Range of the order-4 table indices.
pub const TABLE1_RANGE: std::ops::RangeInclusive<u32> = 388..=480;

/// How an entry is obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recipe {
    Table1 { file: PathBuf },
    Sub { base: String, subset: Vec<usize> },
    Quot { base: String, partition: Partition },
    Strip0 { base: String },
    Adjoin0 { base: String },
}

impl Recipe {
    pub fn base(&self) -> Option<&str> {
        match self {
            Recipe::Table1 { .. } => None,
            Recipe::Sub { base, .. }
            | Recipe::Quot { base, .. }
            | Recipe::Strip0 { base }
            | Recipe::Adjoin0 { base } => Some(base),
        }
    }
}

impl fmt::Display for Recipe {
    /// Provenance notation with 1-based elements.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipe::Table1 { .. } => f.write_str("table1"),
            Recipe::Sub { base, subset } => {
                let s: Vec<String> = subset.iter().map(|x| (x + 1).to_string()).collect();
                write!(f, "subalgebra-of({base}, {{{}}})", s.join(","))
            }
            Recipe::Quot { base, partition } => write!(f, "quotient-of({base}, {partition})"),
            Recipe::Strip0 { base } => write!(f, "strip-zero-of({base})"),
            Recipe::Adjoin0 { base } => write!(f, "adjoin-zero-of({base})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub algebra: FiniteAiSemiring,
    pub provenance: Recipe,
    /// Other recorded routes to the same algebra.
    pub alternates: Vec<Recipe>,
    /// Derived from a reading of the source that cannot be confirmed independently.
    pub provisional: bool,
}

/// Outcome of re-running every recorded route to one entry.
#[derive(Clone, Debug)]
pub struct ConsistencyReport {
    pub name: String,
    /// Each route with the canonical form it produced, or the error it hit.
    pub routes: Vec<(Recipe, std::result::Result<CanonicalForm, String>)>,
    /// First pair of routes (indices into `routes`) that disagree.
    pub mismatch: Option<(usize, usize)>,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.mismatch.is_none() && self.routes.iter().all(|(_, r)| r.is_ok())
    }
}

#[derive(Clone, Debug)]
pub struct Catalog {
    dir: PathBuf,
    entries: Vec<CatalogEntry>,
    index: HashMap<String, usize>,
}

/// Accepts `S_(4,435)`, `S(4,435)`, `S_4_435` and `S_{(4,435)}` as the same name.
pub fn normalize_name(name: &str) -> String {
    let compact: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    let table_index = compact
        .strip_prefix("S_4_")
        .or_else(|| compact.strip_prefix("S_(4,").and_then(|r| r.strip_suffix(')')))
        .or_else(|| compact.strip_prefix("S(4,").and_then(|r| r.strip_suffix(')')))
        .or_else(|| compact.strip_prefix("S_{(4,").and_then(|r| r.strip_suffix(")}")));
    match table_index {
        Some(k) if k.chars().all(|c| c.is_ascii_digit()) && !k.is_empty() => format!("S_(4,{k})"),
        _ => compact,
    }
}

pub fn table1_name(k: u32) -> String {
    format!("S_(4,{k})")
}

impl Catalog {
    /// Loads the directory given by `WORKBENCH_DATA`, or the bundled data.
    pub fn open_default() -> Result<Self> {
        Self::load(&default_data_dir())
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let mut cat = Catalog {
            dir: dir.to_path_buf(),
            entries: Vec::new(),
            index: HashMap::new(),
        };
        let diamond = diamond_addition();
        for k in TABLE1_RANGE {
            let file = dir.join("table1").join(format!("S_4_{k}.alg"));
            let mut a = read_algebra(&file)?;
            let name = table1_name(k);
            if let Some(label) = a.name() {
                if normalize_name(label) != name {
                    return Err(Error::Recipe {
                        name,
                        message: format!("file {} is labelled `{label}`", file.display()),
                    });
                }
            }
            if a.order() != 4 || a.add_table() != diamond.as_slice() {
                return Err(Error::Recipe {
                    name,
                    message: "addition differs from the shared diamond table".into(),
                });
            }
            a = a.validated()?.with_name(name.clone());
            cat.push(CatalogEntry {
                name,
                algebra: a,
                provenance: Recipe::Table1 { file },
                alternates: Vec::new(),
                provisional: false,
            });
        }

        let manifest = dir.join("recipes.manifest");
        let text = std::fs::read_to_string(&manifest).map_err(|e| Error::io(&manifest, e))?;
        let mut order: Vec<String> = Vec::new();
        let mut routes: BTreeMap<String, (Vec<Recipe>, bool)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (name, recipe, provisional) = parse_manifest_line(line, i + 1)?;
            if cat.index.contains_key(&name) {
                return Err(Error::parse(i + 1, 1, format!("`{name}` is a table entry")));
            }
            let slot = routes.entry(name.clone()).or_insert_with(|| {
                order.push(name.clone());
                (Vec::new(), false)
            });
            slot.0.push(recipe);
            slot.1 |= provisional;
        }
        for name in &order {
            cat.resolve(name, &routes, &mut Vec::new())?;
        }
        Ok(cat)
    }

    fn push(&mut self, e: CatalogEntry) {
        self.index.insert(e.name.clone(), self.entries.len());
        self.entries.push(e);
    }

    fn resolve(
        &mut self,
        name: &str,
        routes: &BTreeMap<String, (Vec<Recipe>, bool)>,
        stack: &mut Vec<String>,
    ) -> Result<()> {
        if self.index.contains_key(name) {
            return Ok(());
        }
        let Some((recipes, provisional)) = routes.get(name) else {
            return Err(Error::UnknownName(name.to_string()));
        };
        if stack.iter().any(|s| s == name) {
            return Err(Error::Recipe {
                name: name.to_string(),
                message: format!("cyclic definition via {}", stack.join(" -> ")),
            });
        }
        stack.push(name.to_string());
        for r in recipes {
            if let Some(base) = r.base() {
                if routes.contains_key(base) {
                    self.resolve(base, routes, stack)?;
                }
            }
        }
        stack.pop();
        let primary = recipes[0].clone();
        let algebra = self
            .execute(&primary)
            .map_err(|e| Error::Recipe {
                name: name.to_string(),
                message: format!("{primary}: {e}"),
            })?
            .validated()?
            .with_name(name);
        self.push(CatalogEntry {
            name: name.to_string(),
            algebra,
            provenance: primary,
            alternates: recipes[1..].to_vec(),
            provisional: *provisional,
        });
        Ok(())
    }

    /// Runs a recipe against the loaded entries.
    pub fn execute(&self, r: &Recipe) -> Result<FiniteAiSemiring> {
        match r {
            Recipe::Table1 { file } => read_algebra(file),
            Recipe::Sub { base, subset } => subalgebra(self.algebra(base)?, subset),
            Recipe::Quot { base, partition } => quotient(self.algebra(base)?, partition),
            Recipe::Strip0 { base } => strip_zero(self.algebra(base)?),
            Recipe::Adjoin0 { base } => Ok(adjoin_zero(self.algebra(base)?)),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn get(&self, name: &str) -> Result<&CatalogEntry> {
        self.index
            .get(&normalize_name(name))
            .map(|&i| &self.entries[i])
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn algebra(&self, name: &str) -> Result<&FiniteAiSemiring> {
        Ok(&self.get(name)?.algebra)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(&normalize_name(name))
    }

    /// The 93 order-4 entries, by table index.
    pub fn all_table1(&self) -> Vec<&CatalogEntry> {
        self.entries
            .iter()
            .filter(|e| matches!(e.provenance, Recipe::Table1 { .. }))
            .collect()
    }

    /// Entries built by recipes, in manifest dependency order.
    pub fn derived(&self) -> Vec<&CatalogEntry> {
        self.entries
            .iter()
            .filter(|e| !matches!(e.provenance, Recipe::Table1 { .. }))
            .collect()
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.name.as_str()).collect()
    }

    /// Names of entries isomorphic to `a`.
    pub fn identify(&self, a: &FiniteAiSemiring) -> Vec<&str> {
        let Ok(cf) = canonical_form(a) else {
            return Vec::new();
        };
        self.entries
            .iter()
            .filter(|e| e.algebra.order() == a.order())
            .filter(|e| canonical_form(&e.algebra).is_ok_and(|c| c == cf))
            .map(|e| e.name.as_str())
            .collect()
    }

    /// Re-runs every route to `name` and compares results up to isomorphism.
    pub fn cross_check(&self, name: &str) -> Result<ConsistencyReport> {
        let e = self.get(name)?;
        let mut routes = Vec::new();
        for r in std::iter::once(&e.provenance).chain(e.alternates.iter()) {
            let out = self
                .execute(r)
                .and_then(|a| a.validated())
                .and_then(|a| canonical_form(&a))
                .map_err(|err| err.to_string());
            routes.push((r.clone(), out));
        }
        let mut mismatch = None;
        'outer: for i in 0..routes.len() {
            for j in i + 1..routes.len() {
                if let (Ok(a), Ok(b)) = (&routes[i].1, &routes[j].1) {
                    if a != b {
                        mismatch = Some((i, j));
                        break 'outer;
                    }
                }
            }
        }
        Ok(ConsistencyReport {
            name: e.name.clone(),
            routes,
            mismatch,
        })
    }

    /// An isomorphism between two named entries, if any.
    pub fn isomorphism(&self, a: &str, b: &str) -> Result<Option<crate::search::ElementMap>> {
        Ok(find_isomorphism(self.algebra(a)?, self.algebra(b)?))
    }
}

pub fn default_data_dir() -> PathBuf {
    match std::env::var_os(DATA_ENV) {
        Some(d) => PathBuf::from(d),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("data"),
    }
}

/// Splits `s` at top-level commas (outside any brackets).
pub(crate) fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '{' | '[' => depth += 1,
            ')' | '}' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

/// `{1,2,4}` as 0-based elements.
pub(crate) fn parse_element_set(s: &str) -> std::result::Result<Vec<usize>, String> {
    let inner = s
        .trim()
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| format!("expected a set like {{1,2}}, found `{s}`"))?;
    inner
        .split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v - 1),
            _ => Err(format!("`{}` is not a positive element label", t.trim())),
        })
        .collect()
}

/// `{{1,3},{2},{4}}` as 0-based blocks.
pub(crate) fn parse_blocks(s: &str) -> std::result::Result<Vec<Vec<usize>>, String> {
    let inner = s
        .trim()
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| format!("expected blocks like {{{{1,3}},{{2}}}}, found `{s}`"))?;
    split_top_level(inner)
        .into_iter()
        .map(parse_element_set)
        .collect()
}

pub(crate) fn partition_from_text(s: &str) -> std::result::Result<Partition, String> {
    let blocks = parse_blocks(s)?;
    let n = blocks.iter().map(Vec::len).sum();
    Partition::from_blocks(n, &blocks).map_err(|e| e.to_string())
}

/// Parses a 1-based partition such as `{{1,3},{2},{4}}`.
pub fn parse_partition(s: &str) -> Result<Partition> {
    partition_from_text(s).map_err(|m| Error::parse(1, 1, m))
}

/// Parses a 1-based element set such as `{1,2,4}`.
pub fn parse_subset(s: &str) -> Result<Vec<usize>> {
    parse_element_set(s).map_err(|m| Error::parse(1, 1, m))
}

fn parse_manifest_line(line: &str, lineno: usize) -> Result<(String, Recipe, bool)> {
    let err = |msg: String| Error::parse(lineno, 1, msg);
    let (name, rhs) = line
        .split_once(":=")
        .ok_or_else(|| err("expected `NAME := recipe`".into()))?;
    let name = normalize_name(name.trim());
    if name.is_empty() {
        return Err(err("missing name".into()));
    }
    let mut rhs = rhs.trim();
    let mut provisional = false;
    if let Some(r) = rhs.strip_suffix("provisional") {
        provisional = true;
        rhs = r.trim_end();
    }
    let open = rhs.find('(').ok_or_else(|| err(format!("malformed recipe `{rhs}`")))?;
    let func = rhs[..open].trim();
    let args = rhs[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| err(format!("recipe `{rhs}` must end with `)`")))?;
    let parts = split_top_level(args);
    let base = normalize_name(parts[0]);
    let arity = |k: usize| {
        if parts.len() == k {
            Ok(())
        } else {
            Err(err(format!("`{func}` takes {k} argument(s)")))
        }
    };
    let recipe = match func {
        "sub" => {
            arity(2)?;
            Recipe::Sub {
                base,
                subset: parse_element_set(parts[1]).map_err(err)?,
            }
        }
        "quot" => {
            arity(2)?;
            Recipe::Quot {
                base,
                partition: partition_from_text(parts[1]).map_err(err)?,
            }
        }
        "strip0" => {
            arity(1)?;
            Recipe::Strip0 { base }
        }
        "adjoin0" => {
            arity(1)?;
            Recipe::Adjoin0 { base }
        }
        other => return Err(err(format!("unknown recipe `{other}`"))),
    };
    Ok((name, recipe, provisional))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn name_aliases() {
        assert_eq!(normalize_name("S_4_435"), "S_(4,435)");
        assert_eq!(normalize_name("S(4, 435)"), "S_(4,435)");
        assert_eq!(normalize_name("S_{(4,435)}"), "S_(4,435)");
        assert_eq!(normalize_name("S_57"), "S_57");
        assert_eq!(normalize_name("T_2^0"), "T_2^0");
    }

    #[test]
    fn manifest_lines() {
        let (n, r, p) = parse_manifest_line("N_2 := sub(S_(4,471), {2,3})", 1).unwrap();
        assert_eq!(n, "N_2");
        assert_eq!(
            r,
            Recipe::Sub {
                base: "S_(4,471)".into(),
                subset: vec![1, 2]
            }
        );
        assert!(!p);
        let (_, r, p) = parse_manifest_line("S_53 := quot(S_(4,401), {{1,2},{3,4}}) provisional", 1).unwrap();
        assert!(p);
        assert_eq!(r.to_string(), "quotient-of(S_(4,401), {{1,2},{3,4}})");
        assert!(parse_manifest_line("X := frob(S_57)", 3).is_err());
        assert!(parse_manifest_line("X = sub(S_57, {1})", 3).is_err());
        assert!(parse_manifest_line("X := sub(S_57)", 3).is_err());
    }

    #[test]
    fn top_level_split() {
        assert_eq!(split_top_level("S_(4,424), {{1,3},{2}}"), vec!["S_(4,424)", "{{1,3},{2}}"]);
        assert_eq!(parse_blocks("{{1,3},{2},{4}}").unwrap(), vec![vec![0, 2], vec![1], vec![3]]);
    }
}
