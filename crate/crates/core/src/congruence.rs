//! Partitions of a carrier, congruence tests and quotients.

use std::fmt;

use crate::algebra::FiniteAiSemiring;
use crate::error::{Error, Result};

/// A partition of `0..n`, stored as a block index per element.
///
/// Block indices are kept in restricted-growth form (block of element 0 is
/// 0, each new block gets the next index), so equal partitions compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    block_of: Vec<u8>,
}

impl Partition {
    /// The diagonal: every element alone.
    pub fn discrete(n: usize) -> Self {
        Self {
            block_of: (0..n as u8).collect(),
        }
    }

    /// Everything in one block.
    pub fn full(n: usize) -> Self {
        Self {
            block_of: vec![0; n],
        }
    }

    /// From any labelling of elements by block keys.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut seen: Vec<usize> = Vec::new();
        let block_of = labels
            .iter()
            .map(|l| match seen.iter().position(|s| s == l) {
                Some(i) => i as u8,
                None => {
                    seen.push(*l);
                    (seen.len() - 1) as u8
                }
            })
            .collect();
        Self { block_of }
    }

    /// From explicit 0-based blocks, which must cover `0..n` exactly once.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::Structure("partition has an empty block".into()));
            }
            for &x in block {
                if x >= n {
                    return Err(Error::Structure(format!(
                        "partition mentions {} outside 1..{n}",
                        x + 1
                    )));
                }
                if labels[x] != usize::MAX {
                    return Err(Error::Structure(format!(
                        "element {} appears in two blocks",
                        x + 1
                    )));
                }
                labels[x] = b;
            }
        }
        if let Some(x) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::Structure(format!(
                "partition does not cover element {}",
                x + 1
            )));
        }
        Ok(Self::from_labels(&labels))
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x] as usize
    }

    pub fn block_count(&self) -> usize {
        self.block_of.iter().map(|&b| b as usize + 1).max().unwrap_or(0)
    }

    pub fn same(&self, x: usize, y: usize) -> bool {
        self.block_of[x] == self.block_of[y]
    }

    /// Blocks in order of their least element, each sorted.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for (x, &b) in self.block_of.iter().enumerate() {
            out[b as usize].push(x);
        }
        out
    }

    pub fn is_discrete(&self) -> bool {
        self.block_count() == self.len()
    }

    /// Common refinement (the meet in the partition lattice).
    pub fn meet(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        let n = self.len();
        let labels: Vec<usize> = (0..n)
            .map(|x| self.block_of(x) * n + other.block_of(x))
            .collect();
        Self::from_labels(&labels)
    }

    /// All partitions of `0..n` in restricted-growth lexicographic order.
    pub fn all(n: usize) -> Vec<Self> {
        fn rec(n: usize, cur: &mut Vec<u8>, max: u8, out: &mut Vec<Partition>) {
            if cur.len() == n {
                out.push(Partition {
                    block_of: cur.clone(),
                });
                return;
            }
            let limit = if cur.is_empty() { 0 } else { max + 1 };
            for b in 0..=limit {
                cur.push(b);
                rec(n, cur, max.max(b), out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            out.push(Self::discrete(0));
        } else {
            rec(n, &mut Vec::with_capacity(n), 0, &mut out);
        }
        out
    }
}

impl fmt::Display for Partition {
    /// 1-based block notation, e.g. `{{1,3},{2},{4}}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| {
                let items: Vec<String> = b.iter().map(|x| (x + 1).to_string()).collect();
                format!("{{{}}}", items.join(","))
            })
            .collect();
        write!(f, "{{{}}}", blocks.join(","))
    }
}

/// First pair of related elements whose sums or products land in different blocks.
fn compatibility_failure(a: &FiniteAiSemiring, p: &Partition) -> Option<String> {
    let n = a.order();
    for x in 0..n {
        for y in (x + 1)..n {
            if !p.same(x, y) {
                continue;
            }
            for c in 0..n {
                let checks = [
                    ('+', a.add(x, c), a.add(y, c)),
                    ('*', a.mul(x, c), a.mul(y, c)),
                    ('*', a.mul(c, x), a.mul(c, y)),
                ];
                for (op, l, r) in checks {
                    if !p.same(l, r) {
                        return Some(format!(
                            "{} ~ {} but applying {op} with {} gives {} and {} in different blocks",
                            x + 1,
                            y + 1,
                            c + 1,
                            l + 1,
                            r + 1
                        ));
                    }
                }
            }
        }
    }
    None
}

/// Compatibility with both operations. Addition is commutative, so one side suffices for it.
pub fn is_congruence(a: &FiniteAiSemiring, p: &Partition) -> bool {
    p.len() == a.order() && compatibility_failure(a, p).is_none()
}

/// The block algebra `a / p`; block `i` is the `i`-th block of [`Partition::blocks`].
pub fn quotient(a: &FiniteAiSemiring, p: &Partition) -> Result<FiniteAiSemiring> {
    if p.len() != a.order() {
        return Err(Error::Structure(format!(
            "partition covers {} elements, algebra has {}",
            p.len(),
            a.order()
        )));
    }
    if let Some(why) = compatibility_failure(a, p) {
        return Err(Error::NotCongruence(why));
    }
    let blocks = p.blocks();
    let m = blocks.len();
    let mut add = Vec::with_capacity(m * m);
    let mut mul = Vec::with_capacity(m * m);
    for bx in &blocks {
        for by in &blocks {
            add.push(p.block_of(a.add(bx[0], by[0])) as u8);
            mul.push(p.block_of(a.mul(bx[0], by[0])) as u8);
        }
    }
    FiniteAiSemiring::from_tables(m, add, mul)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::diamond_addition;

    fn s424() -> FiniteAiSemiring {
        // Table row for S_(4,424), 1-based.
        let rows = [[1, 3, 3, 1], [1, 2, 3, 4], [1, 3, 3, 1], [1, 3, 3, 1]];
        let mul = rows.iter().flatten().map(|&v: &u8| v - 1).collect();
        FiniteAiSemiring::from_tables(4, diamond_addition(), mul).unwrap()
    }

    /// Naive check: the induced block tables are well defined.
    fn block_tables_well_defined(a: &FiniteAiSemiring, p: &Partition) -> bool {
        let n = a.order();
        let k = p.block_count();
        let mut add = vec![None; k * k];
        let mut mul = vec![None; k * k];
        for x in 0..n {
            for y in 0..n {
                let cell = p.block_of(x) * k + p.block_of(y);
                for (table, v) in [(&mut add, a.add(x, y)), (&mut mul, a.mul(x, y))] {
                    let b = p.block_of(v);
                    match table[cell] {
                        None => table[cell] = Some(b),
                        Some(old) if old != b => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    #[test]
    fn partition_counts_are_bell_numbers() {
        let counts: Vec<usize> = (0..=5).map(|n| Partition::all(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52]);
    }

    #[test]
    fn display_is_one_based() {
        let p = Partition::from_blocks(4, &[vec![0, 2], vec![1], vec![3]]).unwrap();
        assert_eq!(p.to_string(), "{{1,3},{2},{4}}");
    }

    #[test]
    fn bad_blocks_rejected() {
        assert!(Partition::from_blocks(3, &[vec![0, 1]]).is_err());
        assert!(Partition::from_blocks(3, &[vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::from_blocks(3, &[vec![0, 1, 2], vec![]]).is_err());
    }

    #[test]
    fn rho_on_424_is_a_congruence() {
        let a = s424();
        let rho = Partition::from_blocks(4, &[vec![0, 2], vec![1], vec![3]]).unwrap();
        assert!(is_congruence(&a, &rho));
        let q = quotient(&a, &rho).unwrap();
        assert_eq!(q.order(), 3);
        assert!(q.is_valid());
    }

    #[test]
    fn trivial_partitions_are_congruences() {
        let a = s424();
        assert!(is_congruence(&a, &Partition::discrete(4)));
        assert!(is_congruence(&a, &Partition::full(4)));
        assert_eq!(quotient(&a, &Partition::discrete(4)).unwrap(), a);
    }

    #[test]
    fn agrees_with_block_table_check() {
        let a = s424();
        for p in Partition::all(4) {
            assert_eq!(is_congruence(&a, &p), block_tables_well_defined(&a, &p), "{p}");
        }
    }

    #[test]
    fn non_congruence_quotient_errors() {
        let a = s424();
        let bad = Partition::all(4)
            .into_iter()
            .find(|p| !is_congruence(&a, p))
            .unwrap();
        assert!(matches!(quotient(&a, &bad), Err(Error::NotCongruence(_))));
    }

    #[test]
    fn meet_refines_both() {
        let p = Partition::from_labels(&[0, 0, 1, 1]);
        let q = Partition::from_labels(&[0, 1, 1, 0]);
        assert!(p.meet(&q).is_discrete());
        assert_eq!(p.meet(&Partition::full(4)), p);
    }
}
