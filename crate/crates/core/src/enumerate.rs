//! Enumeration of ai-semirings up to isomorphism.
//!
//! Multiplication tables are filled cell by cell in row-major order. After
//! every cell, each associativity and distributivity instance whose cells
//! are all known is checked, so dead branches are cut early. Isomorphic
//! copies are removed afterwards with canonical forms.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::algebra::FiniteAiSemiring;
use crate::error::{Error, Result};
use crate::satisfaction::permutations;
use crate::search::{canonical_form, canonical_form_under, CanonicalForm};

/// Largest order accepted by the enumerators.
pub const MAX_ENUM_ORDER: usize = 4;

/// Orders at or above this need the stretch flag in [`enumerate_order`].
pub const STRETCH_ORDER: usize = 4;

#[derive(Clone, Debug)]
pub struct EnumerationResult {
    /// The fixed addition table, or `None` for a union over all reducts.
    pub reduct: Option<Vec<u8>>,
    pub count: usize,
    /// Canonical-form algebras, sorted by canonical form.
    pub representatives: Vec<FiniteAiSemiring>,
    pub forms: Vec<CanonicalForm>,
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ENUM_ORDER {
        return Err(Error::Bound {
            what: "enumeration order",
            size: n,
            bound: MAX_ENUM_ORDER,
        });
    }
    Ok(())
}

fn is_semilattice(n: usize, t: &[u8]) -> bool {
    let at = |x: usize, y: usize| t[x * n + y] as usize;
    (0..n).all(|x| at(x, x) == x)
        && (0..n).all(|x| (0..n).all(|y| at(x, y) == at(y, x)))
        && (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| at(at(x, y), z) == at(x, at(y, z)))))
}

fn relabel_table(n: usize, t: &[u8], perm: &[usize]) -> Vec<u8> {
    let mut out = vec![0u8; n * n];
    for x in 0..n {
        for y in 0..n {
            out[perm[x] * n + perm[y]] = perm[t[x * n + y] as usize] as u8;
        }
    }
    out
}

/// Join-semilattice tables on `n` elements, one per isomorphism type, each
/// the least relabeling of its type; sorted.
pub fn all_join_semilattices(n: usize) -> Result<Vec<Vec<u8>>> {
    check_order(n)?;
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect();
    let perms = permutations(n);
    let mut found = BTreeSet::new();
    let total = n.pow(cells.len() as u32);
    for mut code in 0..total {
        let mut t = vec![0u8; n * n];
        for x in 0..n {
            t[x * n + x] = x as u8;
        }
        for &(x, y) in &cells {
            let v = (code % n) as u8;
            code /= n;
            t[x * n + y] = v;
            t[y * n + x] = v;
        }
        if is_semilattice(n, &t) {
            let least = perms
                .iter()
                .map(|p| relabel_table(n, &t, p))
                .min()
                .expect("at least one permutation");
            found.insert(least);
        }
    }
    Ok(found.into_iter().collect())
}

/// Permutations fixing an addition table.
pub fn additive_automorphisms(n: usize, add: &[u8]) -> Vec<Vec<usize>> {
    permutations(n)
        .into_iter()
        .filter(|p| relabel_table(n, add, p) == add)
        .collect()
}

struct MulSearch<'a> {
    n: usize,
    add: &'a [u8],
    mul: Vec<u8>,
    set: Vec<bool>,
}

const NONE: u8 = u8::MAX;

impl<'a> MulSearch<'a> {
    #[inline]
    fn s(&self, x: usize, y: usize) -> usize {
        self.add[x * self.n + y] as usize
    }

    #[inline]
    fn m(&self, x: usize, y: usize) -> Option<usize> {
        let v = self.mul[x * self.n + y];
        (v != NONE).then_some(v as usize)
    }

    /// Every fully determined instance touching cell `(i, j)` holds.
    fn consistent(&self, i: usize, j: usize) -> bool {
        let n = self.n;
        let m = |x, y| self.m(x, y);
        // Associativity (xy)z = x(yz): the cell appears as xy, yz, (xy)z or x(yz).
        for x in 0..n {
            for y in 0..n {
                let Some(xy) = m(x, y) else { continue };
                for z in 0..n {
                    let Some(yz) = m(y, z) else { continue };
                    let touches = (x == i && y == j)
                        || (y == i && z == j)
                        || (xy == i && z == j)
                        || (x == i && yz == j);
                    if !touches {
                        continue;
                    }
                    if let (Some(l), Some(r)) = (m(xy, z), m(x, yz)) {
                        if l != r {
                            return false;
                        }
                    }
                }
            }
        }
        // Distributivity x(y+z) = xy + xz and (y+z)x = yx + zx.
        for y in 0..n {
            for z in 0..n {
                let yz = self.s(y, z);
                for x in 0..n {
                    let left_touch = x == i && (j == y || j == z || j == yz);
                    if left_touch {
                        if let (Some(a), Some(b), Some(c)) = (m(x, yz), m(x, y), m(x, z)) {
                            if a != self.s(b, c) {
                                return false;
                            }
                        }
                    }
                    let right_touch = x == j && (i == y || i == z || i == yz);
                    if right_touch {
                        if let (Some(a), Some(b), Some(c)) = (m(yz, x), m(y, x), m(z, x)) {
                            if a != self.s(b, c) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    fn run(&mut self, cell: usize, out: &mut Vec<Vec<u8>>) {
        let n = self.n;
        if cell == n * n {
            out.push(self.mul.clone());
            return;
        }
        if self.set[cell] {
            self.run(cell + 1, out);
            return;
        }
        let (i, j) = (cell / n, cell % n);
        for v in 0..n as u8 {
            self.mul[cell] = v;
            if self.consistent(i, j) {
                self.run(cell + 1, out);
            }
        }
        self.mul[cell] = NONE;
    }
}

/// All multiplication tables compatible with `add` (no isomorphism reduction).
fn raw_multiplications(n: usize, add: &[u8]) -> Vec<Vec<u8>> {
    // Split on the first two cells for parallelism; merge in prefix order.
    let split = 2.min(n * n);
    let prefixes: Vec<Vec<u8>> = (0..n.pow(split as u32))
        .map(|mut c| {
            let mut p = vec![0u8; split];
            for slot in p.iter_mut().rev() {
                *slot = (c % n) as u8;
                c /= n;
            }
            p
        })
        .collect();
    let chunks: Vec<Vec<Vec<u8>>> = prefixes
        .par_iter()
        .map(|prefix| {
            let mut s = MulSearch {
                n,
                add,
                mul: vec![NONE; n * n],
                set: vec![false; n * n],
            };
            for (cell, &v) in prefix.iter().enumerate() {
                s.mul[cell] = v;
                s.set[cell] = true;
                if !s.consistent(cell / n, cell % n) {
                    return Vec::new();
                }
            }
            let mut out = Vec::new();
            s.run(0, &mut out);
            out
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

/// All ai-semirings with addition `add`, up to isomorphism.
pub fn enumerate_with_reduct(n: usize, add: &[u8]) -> Result<EnumerationResult> {
    check_order(n)?;
    if add.len() != n * n || add.iter().any(|&v| v as usize >= n) || !is_semilattice(n, add) {
        return Err(Error::Structure(
            "reduct must be a join-semilattice table".into(),
        ));
    }
    let auts = additive_automorphisms(n, add);
    let raw = raw_multiplications(n, add);
    let classes: BTreeSet<CanonicalForm> = raw
        .par_iter()
        .map(|mul| {
            let a = FiniteAiSemiring::from_tables(n, add.to_vec(), mul.clone())
                .expect("search emits well-formed tables");
            canonical_form_under(&a, &auts).expect("automorphism group is nonempty")
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let mut forms: Vec<CanonicalForm> = classes
        .into_par_iter()
        .map(|cf| canonical_form(&cf.to_algebra()).expect("order within bound"))
        .collect();
    forms.sort();
    forms.dedup();
    Ok(result(Some(add.to_vec()), forms))
}

fn result(reduct: Option<Vec<u8>>, forms: Vec<CanonicalForm>) -> EnumerationResult {
    let representatives = forms.iter().map(CanonicalForm::to_algebra).collect();
    EnumerationResult {
        reduct,
        count: forms.len(),
        representatives,
        forms,
    }
}

/// All ai-semirings of order `n` up to isomorphism. Order 4 needs `stretch`.
pub fn enumerate_order(n: usize, stretch: bool) -> Result<EnumerationResult> {
    check_order(n)?;
    if n >= STRETCH_ORDER && !stretch {
        return Err(Error::Bound {
            what: "enumeration order without the stretch flag",
            size: n,
            bound: STRETCH_ORDER - 1,
        });
    }
    let reducts = all_join_semilattices(n)?;
    let parts: Vec<EnumerationResult> = reducts
        .iter()
        .map(|add| enumerate_with_reduct(n, add))
        .collect::<Result<_>>()?;
    let mut forms: Vec<CanonicalForm> = parts.into_iter().flat_map(|r| r.forms).collect();
    forms.sort();
    forms.dedup();
    Ok(result(None, forms))
}

/// Forms present on one side only: `(missing from found, unexpected in found)`.
pub fn census_diff(
    found: &[CanonicalForm],
    expected: &[CanonicalForm],
) -> (Vec<CanonicalForm>, Vec<CanonicalForm>) {
    let f: BTreeSet<&CanonicalForm> = found.iter().collect();
    let e: BTreeSet<&CanonicalForm> = expected.iter().collect();
    (
        e.difference(&f).map(|c| (*c).clone()).collect(),
        f.difference(&e).map(|c| (*c).clone()).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{diamond_addition, semilattice_from_covers};

    /// Naive enumeration: every table, full axiom check, canonical dedup.
    fn naive(n: usize, add: &[u8]) -> BTreeSet<CanonicalForm> {
        let cells = n * n;
        (0..n.pow(cells as u32))
            .filter_map(|mut c| {
                let mut mul = vec![0u8; cells];
                for slot in mul.iter_mut() {
                    *slot = (c % n) as u8;
                    c /= n;
                }
                let a = FiniteAiSemiring::from_tables(n, add.to_vec(), mul).unwrap();
                a.is_valid().then(|| canonical_form(&a).unwrap())
            })
            .collect()
    }

    #[test]
    fn semilattice_counts() {
        let counts: Vec<usize> = (1..=4).map(|n| all_join_semilattices(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5]);
        assert!(all_join_semilattices(5).is_err());
    }

    #[test]
    fn diamond_is_among_order_four_reducts() {
        let diamond = diamond_addition();
        let perms = permutations(4);
        let least = perms.iter().map(|p| relabel_table(4, &diamond, p)).min().unwrap();
        assert!(all_join_semilattices(4).unwrap().contains(&least));
    }

    #[test]
    fn diamond_automorphisms() {
        let auts = additive_automorphisms(4, &diamond_addition());
        assert_eq!(auts, vec![vec![0, 1, 2, 3], vec![0, 1, 3, 2]]);
    }

    #[test]
    fn matches_naive_enumeration_on_small_reducts() {
        for n in 1..=3 {
            for add in all_join_semilattices(n).unwrap() {
                let fast: BTreeSet<CanonicalForm> =
                    enumerate_with_reduct(n, &add).unwrap().forms.into_iter().collect();
                assert_eq!(fast, naive(n, &add), "order {n}");
            }
        }
    }

    #[test]
    fn order_two_and_trivial() {
        assert_eq!(enumerate_order(1, false).unwrap().count, 1);
        let chain = semilattice_from_covers(2, &[(0, 1)]).unwrap();
        assert_eq!(enumerate_with_reduct(2, &chain).unwrap().count, 6);
        assert_eq!(enumerate_order(2, false).unwrap().count, 6);
    }

    #[test]
    fn order_four_needs_stretch() {
        assert!(matches!(enumerate_order(4, false), Err(Error::Bound { .. })));
    }

    #[test]
    fn deterministic() {
        let a = enumerate_order(3, false).unwrap();
        let b = enumerate_order(3, false).unwrap();
        assert_eq!(a.forms, b.forms);
        assert!(a.representatives.iter().all(FiniteAiSemiring::is_valid));
    }

    #[test]
    fn diff_reports_both_sides() {
        let r = enumerate_order(2, false).unwrap();
        let (missing, extra) = census_diff(&r.forms[1..], &r.forms[..5]);
        assert_eq!(missing, vec![r.forms[0].clone()]);
        assert_eq!(extra, vec![r.forms[5].clone()]);
    }
}
