//! Subalgebras, products, zero adjunction and duals.

use crate::algebra::FiniteAiSemiring;
use crate::error::{Error, Result};

/// Restriction to a closed subset. Elements keep their relative order.
pub fn subalgebra(a: &FiniteAiSemiring, subset: &[usize]) -> Result<FiniteAiSemiring> {
    let mut elems = subset.to_vec();
    elems.sort_unstable();
    elems.dedup();
    if elems.is_empty() {
        return Err(Error::Structure("subalgebra carrier must be nonempty".into()));
    }
    if let Some(&x) = elems.iter().find(|&&x| x >= a.order()) {
        return Err(Error::Structure(format!(
            "element {} is outside 1..{}",
            x + 1,
            a.order()
        )));
    }
    let mut index = vec![usize::MAX; a.order()];
    for (i, &x) in elems.iter().enumerate() {
        index[x] = i;
    }
    let m = elems.len();
    let mut add = Vec::with_capacity(m * m);
    let mut mul = Vec::with_capacity(m * m);
    for &x in &elems {
        for &y in &elems {
            for (op, v, table) in [('+', a.add(x, y), &mut add), ('*', a.mul(x, y), &mut mul)] {
                if index[v] == usize::MAX {
                    return Err(Error::NotClosed {
                        a: x + 1,
                        b: y + 1,
                        op,
                        result: v + 1,
                    });
                }
                table.push(index[v] as u8);
            }
        }
    }
    FiniteAiSemiring::from_tables(m, add, mul)
}

/// The subuniverse generated by `gens`.
pub fn generated(a: &FiniteAiSemiring, gens: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; a.order()];
    for &g in gens {
        inside[g] = true;
    }
    loop {
        let current: Vec<usize> = (0..a.order()).filter(|&x| inside[x]).collect();
        let mut grew = false;
        for &x in &current {
            for &y in &current {
                for v in [a.add(x, y), a.mul(x, y)] {
                    if !inside[v] {
                        inside[v] = true;
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            return current;
        }
    }
}

/// Componentwise operations; pair `(i, j)` is element `i * |b| + j`.
pub fn direct_product(a: &FiniteAiSemiring, b: &FiniteAiSemiring) -> FiniteAiSemiring {
    let (na, nb) = (a.order(), b.order());
    let n = na * nb;
    assert!(n <= crate::algebra::MAX_ORDER, "product too large");
    let mut add = Vec::with_capacity(n * n);
    let mut mul = Vec::with_capacity(n * n);
    for x in 0..n {
        let (x1, x2) = (x / nb, x % nb);
        for y in 0..n {
            let (y1, y2) = (y / nb, y % nb);
            add.push((a.add(x1, y1) * nb + b.add(x2, y2)) as u8);
            mul.push((a.mul(x1, y1) * nb + b.mul(x2, y2)) as u8);
        }
    }
    FiniteAiSemiring::from_tables(n, add, mul).expect("product tables are well formed")
}

/// `a^k` as an iterated product (`k >= 1`).
pub fn power(a: &FiniteAiSemiring, k: usize) -> FiniteAiSemiring {
    assert!(k >= 1, "power needs at least one factor");
    (1..k).fold(a.clone(), |acc, _| direct_product(&acc, a))
}

/// Decomposes a product element into its coordinates.
pub fn coordinates(orders: &[usize], mut x: usize) -> Vec<usize> {
    let mut out = vec![0; orders.len()];
    for (i, &n) in orders.iter().enumerate().rev() {
        out[i] = x % n;
        x /= n;
    }
    out
}

/// `a^0`: a new last element that is an additive identity and multiplicative zero.
pub fn adjoin_zero(a: &FiniteAiSemiring) -> FiniteAiSemiring {
    let n = a.order();
    let m = n + 1;
    let z = n;
    let mut add = Vec::with_capacity(m * m);
    let mut mul = Vec::with_capacity(m * m);
    for x in 0..m {
        for y in 0..m {
            let s = if x == z {
                y
            } else if y == z {
                x
            } else {
                a.add(x, y)
            };
            let p = if x == z || y == z { z } else { a.mul(x, y) };
            add.push(s as u8);
            mul.push(p as u8);
        }
    }
    FiniteAiSemiring::from_tables(m, add, mul).expect("adjoined tables are well formed")
}

/// Removes the element that is both additive bottom and multiplicative zero.
pub fn strip_zero(a: &FiniteAiSemiring) -> Result<FiniteAiSemiring> {
    let z = a.zero().ok_or(Error::NoZero)?;
    if a.order() == 1 {
        return Err(Error::Structure(
            "removing the zero would leave an empty carrier".into(),
        ));
    }
    let rest: Vec<usize> = (0..a.order()).filter(|&x| x != z).collect();
    subalgebra(a, &rest)
}

/// Same addition, opposite multiplication.
pub fn dual(a: &FiniteAiSemiring) -> FiniteAiSemiring {
    let n = a.order();
    let mul = (0..n * n).map(|i| a.mul(i % n, i / n) as u8).collect();
    FiniteAiSemiring::from_tables(n, a.add_table().to_vec(), mul).expect("dual tables are well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::diamond_addition;

    fn table(rows: [[u8; 4]; 4]) -> FiniteAiSemiring {
        let mul = rows.iter().flatten().map(|v| v - 1).collect();
        FiniteAiSemiring::from_tables(4, diamond_addition(), mul).unwrap()
    }

    fn s471() -> FiniteAiSemiring {
        table([[3, 2, 2, 3], [2, 2, 2, 2], [2, 2, 2, 2], [3, 2, 2, 3]])
    }

    #[test]
    fn full_carrier_is_identity() {
        let a = s471();
        assert_eq!(subalgebra(&a, &[0, 1, 2, 3]).unwrap(), a);
    }

    #[test]
    fn non_closed_subset_names_the_pair() {
        let a = s471();
        let err = subalgebra(&a, &[2, 3]).unwrap_err();
        assert!(matches!(err, Error::NotClosed { a: 3, b: 3, op: '*', result: 2 }), "{err}");
    }

    #[test]
    fn product_with_trivial_is_same_table() {
        let a = s471();
        assert_eq!(direct_product(&a, &FiniteAiSemiring::trivial()), a);
        let sq = power(&a, 2);
        assert_eq!(sq.order(), 16);
        assert!(sq.is_valid());
    }

    #[test]
    fn coordinates_roundtrip() {
        assert_eq!(coordinates(&[4, 3], 7), vec![2, 1]);
        assert_eq!(coordinates(&[2, 2, 2], 5), vec![1, 0, 1]);
    }

    #[test]
    fn zero_roundtrip() {
        let a = subalgebra(&s471(), &[1, 2]).unwrap();
        let z = adjoin_zero(&a);
        assert_eq!(z.order(), 3);
        assert!(z.is_valid());
        assert_eq!(z.zero(), Some(2));
        assert_eq!(strip_zero(&z).unwrap(), a);
    }

    #[test]
    fn adjoin_to_trivial() {
        let z = adjoin_zero(&FiniteAiSemiring::trivial());
        assert!(z.is_valid());
        assert_eq!(z.order(), 2);
        assert_eq!(z.zero(), Some(1));
    }

    #[test]
    fn strip_without_zero_fails() {
        let a = table([[1; 4]; 4]);
        assert!(matches!(strip_zero(&a), Err(Error::NoZero)));
    }

    #[test]
    fn dual_is_involution() {
        let a = table([[1, 3, 3, 1], [1, 2, 3, 4], [1, 3, 3, 1], [1, 3, 3, 1]]);
        assert_ne!(dual(&a), a);
        assert_eq!(dual(&dual(&a)), a);
        assert!(dual(&a).is_valid());
    }

    #[test]
    fn generated_subuniverse() {
        let a = s471();
        assert_eq!(generated(&a, &[1]), vec![1]);
        assert_eq!(generated(&a, &[2, 3]), vec![0, 1, 2, 3]);
    }
}
