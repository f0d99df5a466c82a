//! Ranking and unranking of `w`-element subsets of `{1..n}`.
//!
//! A subset is kept as its ascending (lex) list; the colex list is the same
//! elements in descending order. Ranks are exact big integers in
//! `0..C(n, w)`.
//!
//! | order | rank                        | unrank                      |
//! |-------|-----------------------------|-----------------------------|
//! | lex   | serial in `w`               | serial in `w`, `j` advances |
//! | colex | independent terms, summed   | serial in `w`, `j` retreats |

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactint::BinomialTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    Lex,
    Colex,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Order::Lex => "lex",
            Order::Colex => "colex",
        })
    }
}

impl std::str::FromStr for Order {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "lex" => Ok(Order::Lex),
            "colex" => Ok(Order::Colex),
            other => Err(format!("unknown order `{other}` (expected lex or colex)")),
        }
    }
}

/// A `w`-element subset of `{1..n}`, stored ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    n: usize,
    elements: Vec<usize>,
}

impl Subset {
    /// Validates and sorts `elements` (1-based, any order).
    pub fn new(n: usize, mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        for (i, &e) in elements.iter().enumerate() {
            if e == 0 || e > n {
                return Err(Error::ElementOutOfRange { element: e, n });
            }
            if i > 0 && elements[i - 1] == e {
                return Err(Error::DuplicateElement(e));
            }
        }
        Ok(Subset { n, elements })
    }

    /// `{1..w}`, the lex-first subset.
    pub fn first(n: usize, w: usize) -> Result<Self> {
        if w > n {
            return Err(Error::WeightTooLarge { n, w });
        }
        Ok(Subset {
            n,
            elements: (1..=w).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn w(&self) -> usize {
        self.elements.len()
    }

    /// Ascending list `t_1 < t_2 < ... < t_w`.
    pub fn lex_list(&self) -> &[usize] {
        &self.elements
    }

    /// Descending list `t_1 > t_2 > ... > t_w`.
    pub fn colex_list(&self) -> Vec<usize> {
        self.elements.iter().rev().copied().collect()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.elements.binary_search(&e).is_ok()
    }

    /// Positions of `{1..n}` not in this subset.
    pub fn complement(&self) -> Subset {
        let elements = (1..=self.n).filter(|&e| !self.contains(e)).collect();
        Subset {
            n: self.n,
            elements,
        }
    }

    /// `T' = { n + 1 - t : t in T }`.
    pub fn dual(&self) -> Subset {
        let elements = self
            .elements
            .iter()
            .rev()
            .map(|&t| self.n + 1 - t)
            .collect();
        Subset {
            n: self.n,
            elements,
        }
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// A subset rank together with the order it refers to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rank {
    pub value: BigUint,
    pub order: Order,
}

/// Loop iterations executed by one ranking or unranking call.
///
/// `outer` counts the sequential per-element steps that depend on the previous
/// step's result; `inner` counts the nested-loop iterations. A loop-free
/// computation reports zero for both.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoopCount {
    pub outer: usize,
    pub inner: usize,
}

fn check_table(table: &BinomialTable, n: usize, w: usize) {
    assert!(
        table.n_max() >= n && table.w_max() >= w.min(n),
        "binomial table ({}, {}) too small for C({n}, {w})",
        table.n_max(),
        table.w_max()
    );
}

/// Rank of `t` under `order`, with loop instrumentation.
pub fn rank_counted(table: &BinomialTable, t: &Subset, order: Order) -> (BigUint, LoopCount) {
    check_table(table, t.n, t.w());
    match order {
        Order::Lex => lex_rank(table, t),
        Order::Colex => (colex_rank(table, t), LoopCount::default()),
    }
}

pub fn rank_with(table: &BinomialTable, t: &Subset, order: Order) -> Rank {
    Rank {
        value: rank_counted(table, t, order).0,
        order,
    }
}

/// Convenience wrapper that builds a throwaway table.
pub fn rank(t: &Subset, order: Order) -> Rank {
    rank_with(&BinomialTable::new(t.n, t.w()), t, order)
}

fn lex_rank(table: &BinomialTable, t: &Subset) -> (BigUint, LoopCount) {
    let (n, w) = (t.n, t.w());
    let mut r = BigUint::zero();
    let mut count = LoopCount::default();
    let mut prev = 0;
    for (i, &ti) in t.elements.iter().enumerate() {
        count.outer += 1;
        for j in prev + 1..ti {
            count.inner += 1;
            r += table.get(n - j, w - (i + 1));
        }
        prev = ti;
    }
    (r, count)
}

fn colex_rank(table: &BinomialTable, t: &Subset) -> BigUint {
    let w = t.w();
    // Descending list: the i-th largest element contributes C(t_i - 1, w + 1 - i),
    // independently of every other term.
    t.elements
        .iter()
        .rev()
        .enumerate()
        .map(|(i, &ti)| table.get(ti - 1, w - i))
        .sum()
}

/// Subset of rank `r` under `order`, with loop instrumentation.
///
/// The inner index only moves in one direction, so `inner <= n`.
pub fn unrank_counted(
    table: &BinomialTable,
    r: &BigUint,
    n: usize,
    w: usize,
    order: Order,
) -> Result<(Subset, LoopCount)> {
    if w > n {
        return Err(Error::WeightTooLarge { n, w });
    }
    check_table(table, n, w);
    if r >= table.get(n, w) {
        return Err(Error::RankOutOfRange { n, w });
    }
    Ok(match order {
        Order::Lex => lex_unrank(table, r.clone(), n, w),
        Order::Colex => colex_unrank(table, r.clone(), n, w),
    })
}

pub fn unrank_with(table: &BinomialTable, r: &Rank, n: usize, w: usize) -> Result<Subset> {
    unrank_counted(table, &r.value, n, w, r.order).map(|(t, _)| t)
}

pub fn unrank(r: &Rank, n: usize, w: usize) -> Result<Subset> {
    unrank_with(&BinomialTable::new(n, w), r, n, w)
}

fn lex_unrank(table: &BinomialTable, mut r: BigUint, n: usize, w: usize) -> (Subset, LoopCount) {
    let mut elements = Vec::with_capacity(w);
    let mut count = LoopCount::default();
    let mut j = 1;
    for i in 1..=w {
        count.outer += 1;
        loop {
            let c = table.get(n - j, w - i);
            if *c > r {
                break;
            }
            r -= c;
            j += 1;
            count.inner += 1;
        }
        elements.push(j);
        j += 1;
    }
    (Subset { n, elements }, count)
}

fn colex_unrank(table: &BinomialTable, mut r: BigUint, n: usize, w: usize) -> (Subset, LoopCount) {
    let mut descending = Vec::with_capacity(w);
    let mut count = LoopCount::default();
    let mut j = n;
    for i in 1..=w {
        count.outer += 1;
        while *table.get(j, w + 1 - i) > r {
            j -= 1;
            count.inner += 1;
        }
        descending.push(j + 1);
        r -= table.get(j, w + 1 - i);
    }
    descending.reverse();
    (
        Subset {
            n,
            elements: descending,
        },
        count,
    )
}

/// Subset dual under `t -> n + 1 - t`; links the orders by
/// `lex_rank(T) + colex_rank(T') = C(n, w) - 1`.
pub fn dual_subset(t: &Subset) -> Subset {
    t.dual()
}

/// 1-based positions of `marked` in `x`.
pub fn subset_from_sequence<T: PartialEq>(x: &[T], marked: &T) -> Subset {
    let elements = x
        .iter()
        .enumerate()
        .filter(|(_, s)| *s == marked)
        .map(|(i, _)| i + 1)
        .collect();
    Subset {
        n: x.len(),
        elements,
    }
}

/// Length-`n` sequence with `marked` at the subset positions and `other` elsewhere.
pub fn sequence_from_subset<T: Clone>(t: &Subset, marked: T, other: T) -> Vec<T> {
    let mut x = vec![other; t.n];
    for &e in &t.elements {
        x[e - 1] = marked.clone();
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: usize, e: &[usize]) -> Subset {
        Subset::new(n, e.to_vec()).unwrap()
    }

    fn value(r: u64) -> BigUint {
        BigUint::from(r)
    }

    #[test]
    fn lex_colex_pairs() {
        assert_eq!(rank(&s(5, &[2, 4]), Order::Lex).value, value(5));
        assert_eq!(rank(&s(5, &[2, 4]), Order::Colex).value, value(4));
        assert_eq!(rank(&s(9, &[1, 2, 3]), Order::Lex).value, value(0));
        assert_eq!(rank(&s(10, &[2, 4, 8, 9]), Order::Lex).value, value(117));
    }

    #[test]
    fn colex_unranks() {
        let lex = Rank {
            value: value(117),
            order: Order::Lex,
        };
        assert_eq!(unrank(&lex, 10, 4).unwrap().lex_list(), &[2, 4, 8, 9]);
        let colex = Rank {
            value: value(117),
            order: Order::Colex,
        };
        assert_eq!(
            unrank(&colex, 10, 4).unwrap().colex_list(),
            vec![9, 8, 6, 3]
        );
        let zero = Rank {
            value: value(0),
            order: Order::Lex,
        };
        assert_eq!(unrank(&zero, 5, 2).unwrap().lex_list(), &[1, 2]);
    }

    #[test]
    fn rank_out_of_range() {
        let r = Rank {
            value: value(10),
            order: Order::Lex,
        };
        assert_eq!(unrank(&r, 5, 2), Err(Error::RankOutOfRange { n: 5, w: 2 }));
        let r = Rank {
            value: value(0),
            order: Order::Colex,
        };
        assert_eq!(unrank(&r, 3, 4), Err(Error::WeightTooLarge { n: 3, w: 4 }));
    }

    #[test]
    fn invalid_subsets() {
        assert_eq!(
            Subset::new(5, vec![1, 2, 6]),
            Err(Error::ElementOutOfRange { element: 6, n: 5 })
        );
        assert_eq!(Subset::new(5, vec![3, 3]), Err(Error::DuplicateElement(3)));
        assert_eq!(
            Subset::new(5, vec![0]),
            Err(Error::ElementOutOfRange { element: 0, n: 5 })
        );
    }

    #[test]
    fn degenerate_weights() {
        for order in [Order::Lex, Order::Colex] {
            let empty = s(6, &[]);
            assert_eq!(rank(&empty, order).value, value(0));
            let full = s(6, &[1, 2, 3, 4, 5, 6]);
            assert_eq!(rank(&full, order).value, value(0));
            let r = Rank {
                value: value(0),
                order,
            };
            assert_eq!(unrank(&r, 6, 0).unwrap(), empty);
            assert_eq!(unrank(&r, 6, 6).unwrap(), full);
            assert_eq!(unrank(&r, 0, 0).unwrap(), s(0, &[]));
        }
    }

    #[test]
    fn duals() {
        assert_eq!(dual_subset(&s(5, &[1, 2])), s(5, &[4, 5]));
        assert_eq!(dual_subset(&s(7, &[1, 2, 3])), s(7, &[5, 6, 7]));
        let t = s(5, &[1, 2]);
        let lex = rank(&t, Order::Lex).value;
        let colex = rank(&dual_subset(&t), Order::Colex).value;
        assert_eq!(lex + colex, value(9));
    }

    #[test]
    fn dual_is_an_involution() {
        for n in 0..=8 {
            for mask in 0u32..(1 << n) {
                let t =
                    Subset::new(n, (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect()).unwrap();
                assert_eq!(t.dual().dual(), t);
            }
        }
    }

    #[test]
    fn sequences() {
        let x: Vec<char> = "aabbabaa".chars().collect();
        assert_eq!(subset_from_sequence(&x, &'a').lex_list(), &[1, 2, 5, 7, 8]);
        assert_eq!(subset_from_sequence(&x, &'b').lex_list(), &[3, 4, 6]);
        let all_b: Vec<char> = "bbbb".chars().collect();
        assert_eq!(subset_from_sequence(&all_b, &'a').w(), 0);

        let seq: String = sequence_from_subset(&s(10, &[2, 4, 8, 9]), '1', '0')
            .into_iter()
            .collect();
        assert_eq!(seq, "0101000110");
        let seq: String = sequence_from_subset(&s(3, &[]), '1', '0')
            .into_iter()
            .collect();
        assert_eq!(seq, "000");
        let seq: String = sequence_from_subset(&s(8, &[1, 2, 5, 7, 8]), 'a', 'b')
            .into_iter()
            .collect();
        assert_eq!(seq, "aabbabaa");
    }

    #[test]
    fn unrank_inner_loops_bounded_by_n() {
        for n in 0..=14 {
            let table = BinomialTable::new(n, n);
            for w in 0..=n {
                let total: u64 = table.get(n, w).try_into().unwrap();
                for r in 0..total {
                    for order in [Order::Lex, Order::Colex] {
                        let (_, c) = unrank_counted(&table, &value(r), n, w, order).unwrap();
                        assert_eq!(c.outer, w);
                        assert!(c.inner <= n, "n={n} w={w} r={r} {order}: {c:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn colex_rank_has_no_loop_iterations() {
        let table = BinomialTable::new(12, 12);
        let (_, c) = rank_counted(&table, &s(12, &[3, 5, 9, 12]), Order::Colex);
        assert_eq!(c, LoopCount::default());
        let (_, c) = rank_counted(&table, &s(12, &[3, 5, 9, 12]), Order::Lex);
        assert_eq!(c.outer, 4);
    }
}
