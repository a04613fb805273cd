//! Finite ai-semirings as pairs of Cayley tables.
//!
//! Elements are `0..n` inside the library. Every text boundary (algebra
//! files, manifests, CLI output) uses the 1-based labels of the printed
//! tables, so element `0` is printed as `1`.

use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

/// A finite algebra `(S, +, *)` with `S = {0, .., n-1}`.
///
/// Construction only checks the shape of the tables. Use [`validate`] to
/// check the ai-semiring axioms.
///
/// [`validate`]: FiniteAiSemiring::validate
#[derive(Clone, Debug)]
pub struct FiniteAiSemiring {
    name: Option<String>,
    order: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
}

/// Largest carrier the table representation supports.
pub const MAX_ORDER: usize = 255;

impl FiniteAiSemiring {
    /// Builds an algebra from row-major `n * n` tables of 0-based entries.
    pub fn from_tables(order: usize, add: Vec<u8>, mul: Vec<u8>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Structure("order must be positive".into()));
        }
        if order > MAX_ORDER {
            return Err(Error::Structure(format!(
                "order {order} exceeds the supported maximum {MAX_ORDER}"
            )));
        }
        for (label, table) in [("add", &add), ("mul", &mul)] {
            if table.len() != order * order {
                return Err(Error::Structure(format!(
                    "{label} table has {} entries, expected {}",
                    table.len(),
                    order * order
                )));
            }
            if let Some(pos) = table.iter().position(|&v| v as usize >= order) {
                return Err(Error::Structure(format!(
                    "{label} entry ({}, {}) = {} is outside 1..{order}",
                    pos / order + 1,
                    pos % order + 1,
                    table[pos] as usize + 1
                )));
            }
        }
        Ok(Self {
            name: None,
            order,
            add,
            mul,
        })
    }

    /// Builds an algebra from rows of 0-based entries.
    pub fn from_rows(add: &[Vec<usize>], mul: &[Vec<usize>]) -> Result<Self> {
        let order = add.len();
        let flatten = |label: &str, rows: &[Vec<usize>]| -> Result<Vec<u8>> {
            if rows.len() != order {
                return Err(Error::Structure(format!(
                    "{label} table has {} rows, expected {order}",
                    rows.len()
                )));
            }
            let mut out = Vec::with_capacity(order * order);
            for (i, row) in rows.iter().enumerate() {
                if row.len() != order {
                    return Err(Error::Structure(format!(
                        "{label} row {} has {} entries, expected {order}",
                        i + 1,
                        row.len()
                    )));
                }
                for &v in row {
                    if v >= order {
                        return Err(Error::Structure(format!(
                            "{label} row {} contains {} which is outside 1..{order}",
                            i + 1,
                            v + 1
                        )));
                    }
                    out.push(v as u8);
                }
            }
            Ok(out)
        };
        let add = flatten("add", add)?;
        let mul = flatten("mul", mul)?;
        Self::from_tables(order, add, mul)
    }

    /// The one-element ai-semiring.
    pub fn trivial() -> Self {
        Self {
            name: None,
            order: 1,
            add: vec![0],
            mul: vec![0],
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn set_name(&mut self, name: Option<String>) {
        self.name = name;
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order + b] as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    pub fn add_table(&self) -> &[u8] {
        &self.add
    }

    pub fn mul_table(&self) -> &[u8] {
        &self.mul
    }

    pub fn add_row(&self, a: usize) -> &[u8] {
        &self.add[a * self.order..(a + 1) * self.order]
    }

    pub fn mul_row(&self, a: usize) -> &[u8] {
        &self.mul[a * self.order..(a + 1) * self.order]
    }

    /// Tables and name are equal.
    pub fn identical(&self, other: &Self) -> bool {
        self == other && self.name == other.name
    }

    /// Exhaustive scan of every axiom instance.
    pub fn validate(&self) -> ValidationReport {
        let n = self.order;
        let mut violations = Vec::new();
        for x in 0..n {
            if self.add(x, x) != x {
                violations.push(Violation::new(Axiom::AddIdempotent, &[x]));
            }
            for y in 0..n {
                if self.add(x, y) != self.add(y, x) {
                    violations.push(Violation::new(Axiom::AddCommutative, &[x, y]));
                }
                for z in 0..n {
                    let w = [x, y, z];
                    if self.add(self.add(x, y), z) != self.add(x, self.add(y, z)) {
                        violations.push(Violation::new(Axiom::AddAssociative, &w));
                    }
                    if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                        violations.push(Violation::new(Axiom::MulAssociative, &w));
                    }
                    if self.mul(x, self.add(y, z)) != self.add(self.mul(x, y), self.mul(x, z)) {
                        violations.push(Violation::new(Axiom::LeftDistributive, &w));
                    }
                    if self.mul(self.add(y, z), x) != self.add(self.mul(y, x), self.mul(z, x)) {
                        violations.push(Violation::new(Axiom::RightDistributive, &w));
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    /// Returns `self` when every axiom holds.
    pub fn validated(self) -> Result<Self> {
        let report = self.validate();
        match report.violations.first() {
            None => Ok(self),
            Some(first) => Err(Error::Axioms {
                count: report.violations.len(),
                first: first.to_string(),
            }),
        }
    }

    /// `x <= y` iff `x + y = y`.
    pub fn additive_order(&self) -> AdditiveOrder {
        let n = self.order;
        let leq = (0..n * n)
            .map(|i| self.add(i / n, i % n) == i % n)
            .collect();
        AdditiveOrder { order: n, leq }
    }

    /// Sum of every element.
    pub fn top(&self) -> usize {
        (1..self.order).fold(0, |acc, x| self.add(acc, x))
    }

    /// The additive identity, if there is one.
    pub fn bottom(&self) -> Option<usize> {
        (0..self.order).find(|&z| (0..self.order).all(|x| self.add(z, x) == x))
    }

    /// An element that is the additive identity and a two-sided multiplicative zero.
    pub fn zero(&self) -> Option<usize> {
        let z = self.bottom()?;
        (0..self.order)
            .all(|x| self.mul(z, x) == z && self.mul(x, z) == z)
            .then_some(z)
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.order).all(|x| (0..x).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Applies a relabeling: element `i` becomes `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let n = self.order;
        assert_eq!(perm.len(), n, "relabeling must cover the carrier");
        let mut add = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        for x in 0..n {
            for y in 0..n {
                let cell = perm[x] * n + perm[y];
                add[cell] = perm[self.add(x, y)] as u8;
                mul[cell] = perm[self.mul(x, y)] as u8;
            }
        }
        Self {
            name: self.name.clone(),
            order: n,
            add,
            mul,
        }
    }
}

impl PartialEq for FiniteAiSemiring {
    /// Names are metadata and do not take part in equality.
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.add == other.add && self.mul == other.mul
    }
}

impl Eq for FiniteAiSemiring {}

impl Hash for FiniteAiSemiring {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.order.hash(state);
        self.add.hash(state);
        self.mul.hash(state);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    AddIdempotent,
    AddCommutative,
    AddAssociative,
    MulAssociative,
    LeftDistributive,
    RightDistributive,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::AddIdempotent => "additive idempotency",
            Axiom::AddCommutative => "additive commutativity",
            Axiom::AddAssociative => "additive associativity",
            Axiom::MulAssociative => "multiplicative associativity",
            Axiom::LeftDistributive => "left distributivity",
            Axiom::RightDistributive => "right distributivity",
        })
    }
}

/// One failed axiom instance with its (0-based) witness elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<usize>,
}

impl Violation {
    fn new(axiom: Axiom, witness: &[usize]) -> Self {
        Self {
            axiom,
            witness: witness.to_vec(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.witness.iter().map(|w| (w + 1).to_string()).collect();
        write!(f, "{} fails at ({})", self.axiom, labels.join(", "))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }
}

/// The order induced by addition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveOrder {
    order: usize,
    leq: Vec<bool>,
}

impl AdditiveOrder {
    pub fn len(&self) -> usize {
        self.order
    }

    pub fn is_empty(&self) -> bool {
        self.order == 0
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.order + y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// All `(x, y)` with `x <= y`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.order;
        (0..n * n)
            .filter(|&i| self.leq[i])
            .map(move |i| (i / n, i % n))
    }

    pub fn is_partial_order(&self) -> bool {
        let n = self.order;
        (0..n).all(|x| self.leq(x, x))
            && (0..n).all(|x| (0..n).all(|y| x == y || !(self.leq(x, y) && self.leq(y, x))))
            && (0..n).all(|x| {
                (0..n).all(|y| (0..n).all(|z| !(self.leq(x, y) && self.leq(y, z)) || self.leq(x, z)))
            })
    }

    /// Least upper bound, if unique.
    pub fn join(&self, x: usize, y: usize) -> Option<usize> {
        let n = self.order;
        let upper: Vec<usize> = (0..n)
            .filter(|&u| self.leq(x, u) && self.leq(y, u))
            .collect();
        upper
            .iter()
            .copied()
            .find(|&u| upper.iter().all(|&v| self.leq(u, v)))
    }

    pub fn top(&self) -> Option<usize> {
        (0..self.order).find(|&t| (0..self.order).all(|x| self.leq(x, t)))
    }

    pub fn is_total(&self) -> bool {
        (0..self.order).all(|x| (0..self.order).all(|y| self.comparable(x, y)))
    }
}

/// The diamond semilattice: `1` on top, `2` at the bottom, `3` and `4`
/// incomparable in between (labels 1-based). Row `i` lists `i + j`.
pub fn diamond_addition() -> Vec<u8> {
    semilattice_from_covers(4, &[(1, 2), (1, 3), (2, 0), (3, 0)])
        .expect("the diamond is a lattice")
}

/// Join table of the partial order generated by `covers` (pairs `lower < upper`,
/// 0-based). Returns `None` if some pair lacks a least upper bound.
pub fn semilattice_from_covers(n: usize, covers: &[(usize, usize)]) -> Option<Vec<u8>> {
    let mut leq = vec![false; n * n];
    for x in 0..n {
        leq[x * n + x] = true;
    }
    for &(lo, hi) in covers {
        leq[lo * n + hi] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i * n + k] && leq[k * n + j] {
                    leq[i * n + j] = true;
                }
            }
        }
    }
    let order = AdditiveOrder { order: n, leq };
    let mut table = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            table.push(order.join(x, y)? as u8);
        }
    }
    Some(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond_with_mul(mul: [[usize; 4]; 4]) -> FiniteAiSemiring {
        let mul: Vec<u8> = mul.iter().flatten().map(|&v| (v - 1) as u8).collect();
        FiniteAiSemiring::from_tables(4, diamond_addition(), mul).unwrap()
    }

    #[test]
    fn diamond_rows_match_the_figure() {
        let rows: Vec<Vec<u8>> = diamond_addition().chunks(4).map(|r| r.iter().map(|v| v + 1).collect()).collect();
        assert_eq!(
            rows,
            vec![vec![1, 1, 1, 1], vec![1, 2, 3, 4], vec![1, 3, 3, 1], vec![1, 4, 1, 4]]
        );
    }

    #[test]
    fn constant_top_multiplication_is_valid() {
        let a = diamond_with_mul([[1; 4]; 4]);
        assert!(a.validate().is_valid());
    }

    #[test]
    fn trivial_algebra_is_valid() {
        assert!(FiniteAiSemiring::trivial().is_valid());
    }

    #[test]
    fn patched_entry_breaks_distributivity() {
        // Multiplication of S_(4,435) with (3,4) changed from 3 to 4.
        let good = diamond_with_mul([[1, 2, 1, 1], [2, 2, 2, 2], [1, 2, 1, 3], [1, 2, 3, 4]]);
        assert!(good.is_valid());
        let bad = diamond_with_mul([[1, 2, 1, 1], [2, 2, 2, 2], [1, 2, 1, 4], [1, 2, 3, 4]]);
        let report = bad.validate();
        assert!(!report.is_valid());

        // Independent exhaustive scans of both distributive laws.
        let mut left = Vec::new();
        let mut right = Vec::new();
        for x in 0..4 {
            for y in 0..4 {
                for z in 0..4 {
                    if bad.mul(x, bad.add(y, z)) != bad.add(bad.mul(x, y), bad.mul(x, z)) {
                        left.push(vec![x, y, z]);
                    }
                    if bad.mul(bad.add(y, z), x) != bad.add(bad.mul(y, x), bad.mul(z, x)) {
                        right.push(vec![x, y, z]);
                    }
                }
            }
        }
        assert!(!right.is_empty());
        let witnesses = |axiom: Axiom| -> Vec<Vec<usize>> {
            report
                .violations
                .iter()
                .filter(|v| v.axiom == axiom)
                .map(|v| v.witness.clone())
                .collect()
        };
        assert_eq!(witnesses(Axiom::LeftDistributive), left);
        assert_eq!(witnesses(Axiom::RightDistributive), right);
        // (3 + 4) * 4 = 1 while 3 * 4 + 4 * 4 = 4.
        assert!(right.contains(&vec![3, 2, 3]));
    }

    #[test]
    fn malformed_tables_are_structural_errors() {
        assert!(matches!(
            FiniteAiSemiring::from_tables(2, vec![0, 1, 1], vec![0, 0, 0, 0]),
            Err(Error::Structure(_))
        ));
        assert!(matches!(
            FiniteAiSemiring::from_tables(2, vec![0, 1, 1, 2], vec![0, 0, 0, 0]),
            Err(Error::Structure(_))
        ));
        assert!(matches!(
            FiniteAiSemiring::from_rows(&[vec![0, 1], vec![1]], &[vec![0, 0], vec![0, 0]]),
            Err(Error::Structure(_))
        ));
    }

    #[test]
    fn diamond_order() {
        let a = diamond_with_mul([[1; 4]; 4]);
        let ord = a.additive_order();
        assert!(ord.is_partial_order());
        assert!(ord.lt(1, 2) && ord.lt(2, 0) && ord.lt(1, 3) && ord.lt(3, 0));
        assert!(!ord.comparable(2, 3));
        assert_eq!(ord.top(), Some(0));
        assert_eq!(a.bottom(), Some(1));
    }

    #[test]
    fn chain_order_is_total() {
        let chain = semilattice_from_covers(3, &[(0, 1), (1, 2)]).unwrap();
        let a = FiniteAiSemiring::from_tables(3, chain, vec![0; 9]).unwrap();
        let ord = a.additive_order();
        assert!(ord.is_total());
        assert_eq!(ord.pairs().count(), 6);
    }

    #[test]
    fn one_element_order() {
        let ord = FiniteAiSemiring::trivial().additive_order();
        assert_eq!(ord.pairs().collect::<Vec<_>>(), vec![(0, 0)]);
    }
}
