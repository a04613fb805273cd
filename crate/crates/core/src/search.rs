//! Homomorphism, embedding and isomorphism search; congruence lattices;
//! canonical forms.

use std::fmt;
use std::ops::ControlFlow;

use crate::algebra::FiniteAiSemiring;
use crate::congruence::{is_congruence, quotient, Partition};
use crate::construct::{coordinates, direct_product};
use crate::error::{Error, Result};
use crate::satisfaction::permutations;

/// Default cap on search nodes for one homomorphism search.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

/// Largest order for which canonical forms and congruence lattices are computed.
pub const DEFAULT_SIZE_BOUND: usize = 6;

/// A map between carriers: element `i` goes to `image[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementMap {
    pub image: Vec<usize>,
}

impl ElementMap {
    pub fn identity(n: usize) -> Self {
        ElementMap {
            image: (0..n).collect(),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = self.image.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    pub fn is_surjective_onto(&self, n: usize) -> bool {
        let mut hit = vec![false; n];
        for &y in &self.image {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// Preservation of both operations, checked on every pair.
    pub fn is_homomorphism(&self, a: &FiniteAiSemiring, b: &FiniteAiSemiring) -> bool {
        self.image.len() == a.order()
            && self.image.iter().all(|&y| y < b.order())
            && (0..a.order()).all(|x| {
                (0..a.order()).all(|y| {
                    let (fx, fy) = (self.image[x], self.image[y]);
                    self.image[a.add(x, y)] == b.add(fx, fy) && self.image[a.mul(x, y)] == b.mul(fx, fy)
                })
            })
    }
}

impl fmt::Display for ElementMap {
    /// 1-based: `1->2 2->1 3->3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, y) in self.image.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}->{}", i + 1, y + 1)?;
        }
        Ok(())
    }
}

const UNSET: usize = usize::MAX;

/// Backtracking over images of `a`'s elements, in element order, with
/// forced values propagated through both operations.
struct HomSearch<'a> {
    a: &'a FiniteAiSemiring,
    b: &'a FiniteAiSemiring,
    injective: bool,
    img: Vec<usize>,
    used: Vec<bool>,
    trail: Vec<usize>,
    queue: Vec<(usize, usize)>,
    nodes: u64,
    budget: u64,
}

impl<'a> HomSearch<'a> {
    fn new(a: &'a FiniteAiSemiring, b: &'a FiniteAiSemiring, injective: bool, budget: u64) -> Self {
        HomSearch {
            a,
            b,
            injective,
            img: vec![UNSET; a.order()],
            used: vec![false; b.order()],
            trail: Vec::new(),
            queue: Vec::new(),
            nodes: 0,
            budget,
        }
    }

    fn set(&mut self, x: usize, v: usize) -> bool {
        match self.img[x] {
            UNSET => {
                if self.injective {
                    if self.used[v] {
                        return false;
                    }
                    self.used[v] = true;
                }
                self.img[x] = v;
                self.trail.push(x);
                self.queue.push((x, v));
                true
            }
            old => old == v,
        }
    }

    /// Assigns `x -> v` and everything it forces; false on contradiction.
    fn assign(&mut self, x: usize, v: usize) -> bool {
        self.queue.clear();
        if !self.set(x, v) {
            return false;
        }
        while let Some((x, fx)) = self.queue.pop() {
            for y in 0..self.a.order() {
                let fy = self.img[y];
                if fy == UNSET {
                    continue;
                }
                let forced = [
                    (self.a.add(x, y), self.b.add(fx, fy)),
                    (self.a.mul(x, y), self.b.mul(fx, fy)),
                    (self.a.mul(y, x), self.b.mul(fy, fx)),
                ];
                for (r, want) in forced {
                    if !self.set(r, want) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let x = self.trail.pop().expect("trail entry");
            if self.injective {
                self.used[self.img[x]] = false;
            }
            self.img[x] = UNSET;
        }
    }

    fn run(
        &mut self,
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget {
                needed: self.nodes as u128,
                budget: self.budget,
            });
        }
        let Some(x) = self.img.iter().position(|&v| v == UNSET) else {
            return Ok(visit(&self.img));
        };
        for v in 0..self.b.order() {
            let mark = self.trail.len();
            if self.assign(x, v) && self.run(visit)?.is_break() {
                self.undo_to(mark);
                return Ok(ControlFlow::Break(()));
            }
            self.undo_to(mark);
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// Visits homomorphisms `a -> b` in lexicographic order of their image vectors.
pub fn for_each_homomorphism(
    a: &FiniteAiSemiring,
    b: &FiniteAiSemiring,
    injective: bool,
    budget: u64,
    mut visit: impl FnMut(&ElementMap) -> ControlFlow<()>,
) -> Result<()> {
    if injective && a.order() > b.order() {
        return Ok(());
    }
    let mut s = HomSearch::new(a, b, injective, budget);
    let _stopped_early = s.run(&mut |img| {
        visit(&ElementMap {
            image: img.to_vec(),
        })
    })?;
    Ok(())
}

/// All homomorphisms, lexicographically ordered.
pub fn find_homomorphisms(a: &FiniteAiSemiring, b: &FiniteAiSemiring) -> Result<Vec<ElementMap>> {
    let mut out = Vec::new();
    for_each_homomorphism(a, b, false, DEFAULT_NODE_BUDGET, |m| {
        out.push(m.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// The lexicographically first injective homomorphism.
pub fn find_embedding(a: &FiniteAiSemiring, b: &FiniteAiSemiring) -> Result<Option<ElementMap>> {
    let mut found = None;
    for_each_homomorphism(a, b, true, DEFAULT_NODE_BUDGET, |m| {
        found = Some(m.clone());
        ControlFlow::Break(())
    })?;
    Ok(found)
}

pub fn find_isomorphism(a: &FiniteAiSemiring, b: &FiniteAiSemiring) -> Option<ElementMap> {
    if a.order() != b.order() {
        return None;
    }
    find_embedding(a, b).expect("isomorphism search stays within budget for equal orders")
}

pub fn is_isomorphic(a: &FiniteAiSemiring, b: &FiniteAiSemiring) -> bool {
    find_isomorphism(a, b).is_some()
}

pub fn automorphisms(a: &FiniteAiSemiring) -> Vec<ElementMap> {
    let mut out = Vec::new();
    for_each_homomorphism(a, a, true, DEFAULT_NODE_BUDGET, |m| {
        out.push(m.clone());
        ControlFlow::Continue(())
    })
    .expect("automorphism search stays within budget");
    out
}

/// All congruences, in restricted-growth order of their partitions.
pub fn congruences(a: &FiniteAiSemiring) -> Result<Vec<Partition>> {
    congruences_bounded(a, DEFAULT_SIZE_BOUND)
}

pub fn congruences_bounded(a: &FiniteAiSemiring, bound: usize) -> Result<Vec<Partition>> {
    if a.order() > bound {
        return Err(Error::Bound {
            what: "algebra order for congruence enumeration",
            size: a.order(),
            bound,
        });
    }
    Ok(Partition::all(a.order())
        .into_iter()
        .filter(|p| is_congruence(a, p))
        .collect())
}

/// Isomorphism-invariant encoding: the least `(order, add, mul)` byte string
/// over all relabelings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0[0] as usize
    }

    /// The algebra whose tables are this encoding.
    pub fn to_algebra(&self) -> FiniteAiSemiring {
        let n = self.order();
        let add = self.0[1..1 + n * n].to_vec();
        let mul = self.0[1 + n * n..].to_vec();
        FiniteAiSemiring::from_tables(n, add, mul).expect("canonical tables are well formed")
    }
}

impl fmt::Display for CanonicalForm {
    /// `n:add-rows|mul-rows` with 1-based digits, e.g. `2:1112|1111`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.order();
        write!(f, "{n}:")?;
        let digits = |s: &[u8]| s.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(if n > 9 { "," } else { "" });
        write!(f, "{}|{}", digits(&self.0[1..1 + n * n]), digits(&self.0[1 + n * n..]))
    }
}

fn encode_relabeled(a: &FiniteAiSemiring, perm: &[usize], inv: &mut [usize], out: &mut Vec<u8>) {
    let n = a.order();
    for (old, &new) in perm.iter().enumerate() {
        inv[new] = old;
    }
    out.clear();
    out.push(n as u8);
    for table in [a.add_table(), a.mul_table()] {
        for &x in inv.iter() {
            for &y in inv.iter() {
                out.push(perm[table[x * n + y] as usize] as u8);
            }
        }
    }
}

pub fn canonical_form(a: &FiniteAiSemiring) -> Result<CanonicalForm> {
    canonical_form_under(a, &all_perms(a.order())?)
}

/// Least encoding over the given relabelings (each maps old to new labels).
pub fn canonical_form_under(a: &FiniteAiSemiring, perms: &[Vec<usize>]) -> Result<CanonicalForm> {
    let n = a.order();
    let mut inv = vec![0; n];
    let mut best: Option<Vec<u8>> = None;
    let mut cur = Vec::with_capacity(1 + 2 * n * n);
    for p in perms {
        encode_relabeled(a, p, &mut inv, &mut cur);
        if best.as_ref().is_none_or(|b| cur < *b) {
            best = Some(cur.clone());
        }
    }
    best.map(CanonicalForm)
        .ok_or_else(|| Error::Structure("no relabelings given".into()))
}

fn all_perms(n: usize) -> Result<Vec<Vec<usize>>> {
    if n > DEFAULT_SIZE_BOUND {
        return Err(Error::Bound {
            what: "algebra order for canonical form",
            size: n,
            bound: DEFAULT_SIZE_BOUND,
        });
    }
    Ok(permutations(n))
}

/// Injective homomorphism into the product of `factors` whose coordinate
/// projections are all surjective.
pub fn is_subdirect_embedding(
    a: &FiniteAiSemiring,
    factors: &[&FiniteAiSemiring],
) -> Result<Option<ElementMap>> {
    let Some((first, rest)) = factors.split_first() else {
        return Err(Error::Structure("need at least one factor".into()));
    };
    let orders: Vec<usize> = factors.iter().map(|f| f.order()).collect();
    let size: usize = orders.iter().product();
    if size > crate::algebra::MAX_ORDER {
        return Err(Error::Bound {
            what: "product order",
            size,
            bound: crate::algebra::MAX_ORDER,
        });
    }
    let product = rest.iter().fold((*first).clone(), |acc, f| direct_product(&acc, f));
    let mut found = None;
    for_each_homomorphism(a, &product, true, DEFAULT_NODE_BUDGET, |m| {
        let projections_onto = (0..orders.len()).all(|i| {
            let mut hit = vec![false; orders[i]];
            for &y in &m.image {
                hit[coordinates(&orders, y)[i]] = true;
            }
            hit.into_iter().all(|h| h)
        });
        if projections_onto {
            found = Some(m.clone());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(found)
}

/// A required shape for one subdirect factor.
#[derive(Clone, Debug)]
pub enum FactorSpec {
    /// The quotient must be isomorphic to this algebra.
    Exactly(FiniteAiSemiring),
    /// The quotient has this order and contains a copy of each listed algebra.
    Containing {
        order: usize,
        subalgebras: Vec<FiniteAiSemiring>,
    },
}

impl FactorSpec {
    fn accepts(&self, q: &FiniteAiSemiring) -> Result<bool> {
        match self {
            FactorSpec::Exactly(f) => Ok(is_isomorphic(q, f)),
            FactorSpec::Containing { order, subalgebras } => {
                if q.order() != *order {
                    return Ok(false);
                }
                for s in subalgebras {
                    if find_embedding(s, q)?.is_none() {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

/// Congruences `θ_1, .., θ_k` with `a/θ_i` matching the factor specs and meet Δ,
/// which is the congruence-side view of a subdirect decomposition.
pub fn subdirect_congruences(
    a: &FiniteAiSemiring,
    specs: &[FactorSpec],
) -> Result<Option<Vec<Partition>>> {
    let cons = congruences(a)?;
    let mut candidates: Vec<Vec<Partition>> = Vec::with_capacity(specs.len());
    for spec in specs {
        let mut ok = Vec::new();
        for c in &cons {
            if spec.accepts(&quotient(a, c)?)? {
                ok.push(c.clone());
            }
        }
        candidates.push(ok);
    }
    fn pick(
        cands: &[Vec<Partition>],
        acc: Partition,
        chosen: &mut Vec<Partition>,
    ) -> Option<Vec<Partition>> {
        let Some((first, rest)) = cands.split_first() else {
            return acc.is_discrete().then(|| chosen.clone());
        };
        for c in first {
            chosen.push(c.clone());
            if let Some(found) = pick(rest, acc.meet(c), chosen) {
                return Some(found);
            }
            chosen.pop();
        }
        None
    }
    Ok(pick(&candidates, Partition::full(a.order()), &mut Vec::new()))
}

/// Pairs of proper congruences with trivial meet, i.e. nontrivial
/// two-factor subdirect decompositions, with `θ_1 < θ_2` in partition order.
pub fn subdirect_decompositions(a: &FiniteAiSemiring) -> Result<Vec<(Partition, Partition)>> {
    let proper: Vec<Partition> = congruences(a)?
        .into_iter()
        .filter(|p| !p.is_discrete())
        .collect();
    let mut out = Vec::new();
    for (i, p) in proper.iter().enumerate() {
        for q in &proper[i + 1..] {
            if p.meet(q).is_discrete() {
                out.push((p.clone(), q.clone()));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::diamond_addition;
    use crate::construct::{adjoin_zero, dual, power, strip_zero, subalgebra};

    fn table(rows: [[u8; 4]; 4]) -> FiniteAiSemiring {
        let mul = rows.iter().flatten().map(|v| v - 1).collect();
        FiniteAiSemiring::from_tables(4, diamond_addition(), mul).unwrap()
    }

    fn s471() -> FiniteAiSemiring {
        table([[3, 2, 2, 3], [2, 2, 2, 2], [2, 2, 2, 2], [3, 2, 2, 3]])
    }

    fn s424() -> FiniteAiSemiring {
        table([[1, 3, 3, 1], [1, 2, 3, 4], [1, 3, 3, 1], [1, 3, 3, 1]])
    }

    /// Every map, checked by definition.
    fn brute_homs(a: &FiniteAiSemiring, b: &FiniteAiSemiring) -> Vec<ElementMap> {
        let total = b.order().pow(a.order() as u32);
        (0..total)
            .map(|mut code| {
                let mut image = vec![0; a.order()];
                for slot in image.iter_mut().rev() {
                    *slot = code % b.order();
                    code /= b.order();
                }
                ElementMap { image }
            })
            .filter(|m| m.is_homomorphism(a, b))
            .collect()
    }

    #[test]
    fn search_matches_brute_force() {
        let a = s471();
        let b = s424();
        for (x, y) in [(&a, &b), (&b, &a), (&a, &a), (&b, &b)] {
            assert_eq!(find_homomorphisms(x, y).unwrap(), brute_homs(x, y));
        }
        let n2 = subalgebra(&a, &[1, 2]).unwrap();
        assert_eq!(find_homomorphisms(&n2, &a).unwrap(), brute_homs(&n2, &a));
    }

    #[test]
    fn homs_from_trivial_hit_idempotents() {
        let t = FiniteAiSemiring::trivial();
        let a = s424();
        let homs = find_homomorphisms(&t, &a).unwrap();
        let idem: Vec<usize> = (0..4).filter(|&e| a.mul(e, e) == e).collect();
        assert_eq!(homs.iter().map(|m| m.image[0]).collect::<Vec<_>>(), idem);
        assert_eq!(find_homomorphisms(&t, &t).unwrap().len(), 1);
    }

    #[test]
    fn identity_embedding_first() {
        let a = s424();
        let e = find_embedding(&a, &a).unwrap().unwrap();
        assert!(e.is_homomorphism(&a, &a) && e.is_injective());
        assert_eq!(find_isomorphism(&a, &a).map(|m| m.is_injective()), Some(true));
    }

    #[test]
    fn canonical_form_is_invariant_and_complete() {
        let a = s424();
        let cf = canonical_form(&a).unwrap();
        for p in permutations(4) {
            let r = a.relabel(&p);
            assert_eq!(canonical_form(&r).unwrap(), cf);
            assert!(find_isomorphism(&a, &r).is_some());
        }
        assert_ne!(canonical_form(&dual(&a)).unwrap(), cf);
        assert_eq!(cf.to_algebra().order(), 4);
        assert!(is_isomorphic(&cf.to_algebra(), &a));
    }

    #[test]
    fn canonical_form_bound() {
        let big = power(&FiniteAiSemiring::trivial(), 1);
        assert!(canonical_form(&big).is_ok());
        let seven = adjoin_zero(&adjoin_zero(&adjoin_zero(&s424())));
        assert!(matches!(canonical_form(&seven), Err(Error::Bound { .. })));
    }

    #[test]
    fn congruences_include_extremes() {
        let cons = congruences(&s424()).unwrap();
        assert!(cons.contains(&Partition::discrete(4)));
        assert!(cons.contains(&Partition::full(4)));
        let rho = Partition::from_blocks(4, &[vec![0, 2], vec![1], vec![3]]).unwrap();
        assert!(cons.contains(&rho));
    }

    #[test]
    fn subdirect_trivially_into_itself() {
        let a = s424();
        let m = is_subdirect_embedding(&a, &[&a]).unwrap().unwrap();
        assert!(m.is_injective());
        let specs = [FactorSpec::Exactly(a.clone())];
        assert_eq!(
            subdirect_congruences(&a, &specs).unwrap(),
            Some(vec![Partition::discrete(4)])
        );
    }

    #[test]
    fn zero_roundtrip_is_isomorphic() {
        let a = subalgebra(&s471(), &[1, 2]).unwrap();
        let z = adjoin_zero(&a);
        let back = adjoin_zero(&strip_zero(&z).unwrap());
        assert!(is_isomorphic(&z, &back));
    }

    #[test]
    fn automorphisms_of_diamond_constant() {
        let a = table([[1; 4]; 4]);
        // Identity and the swap of the two middle elements.
        assert_eq!(automorphisms(&a).len(), 2);
    }

    #[test]
    fn display_formats() {
        assert_eq!(ElementMap { image: vec![1, 0] }.to_string(), "1->2 2->1");
        let cf = canonical_form(&FiniteAiSemiring::trivial()).unwrap();
        assert_eq!(cf.to_string(), "1:1|1");
    }
}
