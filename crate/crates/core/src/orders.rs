//! Subset maps `F_{q,m} : S(q,m) -> S(q-1,m)` with `F(A) ⊂ A`, the induced
//! orderings of a subset, and complete sets of orders built from them.
//!
//! Subsets of `[m] = {1..m}` are `u32` bitmasks: element `k` is bit `k-1`.
//! A ranking separates `A` when every element of `A` has a strictly smaller
//! rank than every element outside `A`.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::classifier::Ranking;
use crate::error::{Error, Result};

pub const MAX_M: u32 = 32;

pub type SubsetMask = u32;

fn full(m: u32) -> SubsetMask {
    if m >= 32 {
        u32::MAX
    } else {
        (1u32 << m) - 1
    }
}

fn has(a: SubsetMask, x: u32) -> bool {
    a >> (x - 1) & 1 == 1
}

fn bit(x: u32) -> SubsetMask {
    1 << (x - 1)
}

/// Elements of a mask in increasing order (1-based).
pub fn elements(a: SubsetMask) -> Vec<u32> {
    (1..=32).filter(|&x| has(a, x)).collect()
}

pub fn mask_of(elems: &[u32]) -> SubsetMask {
    elems.iter().fold(0, |acc, &x| acc | bit(x))
}

fn check_subset(q: u32, m: u32, a: SubsetMask) -> Result<()> {
    if m == 0 || m > MAX_M {
        return Err(Error::InvalidSubset(format!("universe size {m} outside 1..={MAX_M}")));
    }
    if a & !full(m) != 0 {
        return Err(Error::InvalidSubset(format!("{:?} is not a subset of [{m}]", elements(a))));
    }
    if a.count_ones() != q {
        return Err(Error::InvalidSubset(format!("{:?} does not have {q} elements", elements(a))));
    }
    Ok(())
}

/// `F_{q,2q-1}` on `S(q, 2q-1)`.
pub fn f_map_base(q: u32, a: SubsetMask) -> Result<SubsetMask> {
    if q == 0 || 2 * q - 1 > MAX_M {
        return Err(Error::InvalidSubset(format!("q = {q} out of range")));
    }
    check_subset(q, 2 * q - 1, a)?;
    Ok(base_unchecked(q, a))
}

fn base_unchecked(q: u32, a: SubsetMask) -> SubsetMask {
    if q == 1 {
        return 0;
    }
    let top = 2 * q - 1;
    let j = (1..top).rev().find(|&x| has(a, x) && !has(a, x + 1));
    let Some(j) = j else {
        // A is the block {q..2q-1}; drop its minimum.
        return a & !bit(q);
    };
    // T_j: x < j stays, x > j+1 moves down by two. j+1 is not in A.
    let rest = a & !bit(j);
    let low = rest & (bit(j) - 1);
    let high = rest >> (j + 1);
    let shifted = low | high << (j - 1);
    let image = base_unchecked(q - 1, shifted);
    let back = (image & (bit(j) - 1)) | (image >> (j - 1)) << (j + 1);
    back | bit(j)
}

/// `F_{q,m}` on `S(q, m)`.
pub fn f_map(q: u32, m: u32, a: SubsetMask) -> Result<SubsetMask> {
    if q == 0 || q > m {
        return Err(Error::InvalidSubset(format!("need 1 <= q <= m, got q = {q}, m = {m}")));
    }
    check_subset(q, m, a)?;
    Ok(f_unchecked(q, m, a))
}

fn f_unchecked(q: u32, m: u32, a: SubsetMask) -> SubsetMask {
    if q == 1 {
        return 0;
    }
    if m == 2 * q - 1 {
        return base_unchecked(q, a);
    }
    if has(a, m) {
        f_unchecked(q - 1, m - 1, a & !bit(m)) | bit(m)
    } else {
        f_unchecked(q, m - 1, a)
    }
}

/// `sigma~_A`: element removed by the k-th application of the F maps gets
/// rank `k`. Returned as `(element, rank)` pairs in increasing element order.
pub fn sigma_tilde(a: SubsetMask, m: u32) -> Result<Vec<(u32, usize)>> {
    let q = a.count_ones();
    if q == 0 {
        return Err(Error::InvalidSubset("empty set has no ordering".into()));
    }
    check_subset(q, m, a)?;
    let mut rank = vec![0usize; m as usize + 1];
    let mut current = a;
    for k in 1..=q as usize {
        let next = f_unchecked(current.count_ones(), m, current);
        for x in elements(current & !next) {
            rank[x as usize] = k;
        }
        current = next;
    }
    Ok(elements(a).into_iter().map(|x| (x, rank[x as usize])).collect())
}

/// A set of rankings of `[m]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderSet {
    pub m: usize,
    pub rankings: Vec<Ranking>,
}

impl OrderSet {
    pub fn new(m: usize, rankings: Vec<Ranking>) -> Result<Self> {
        if let Some(r) = rankings.iter().find(|r| r.len() != m) {
            return Err(Error::InvalidArgument(format!("ranking {:?} has length {} != {m}", r.ranks(), r.len())));
        }
        Ok(Self { m, rankings })
    }

    pub fn len(&self) -> usize {
        self.rankings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rankings.is_empty()
    }

    pub fn strict_count(&self) -> usize {
        self.rankings.iter().filter(|r| r.is_strict()).count()
    }

    /// Inverse view of each ranking: position `i` holds the function of rank `i+1`.
    /// Only valid for strict rankings.
    pub fn slots(ranking: &Ranking) -> Vec<usize> {
        let mut out = vec![0; ranking.len()];
        for (k, &r) in ranking.ranks().iter().enumerate() {
            out[r - 1] = k;
        }
        out
    }
}

/// Ranking of `[m]` that lists `a` first (ordered so the F-iterates of `a`
/// are prefixes) and then the complement.
fn order_for(a: SubsetMask, m: u32) -> Ranking {
    let s = a.count_ones() as usize;
    let mut ranks = vec![0usize; m as usize];
    for (x, k) in sigma_tilde(a, m).expect("nonempty subset") {
        ranks[x as usize - 1] = s + 1 - k;
    }
    let rest = full(m) & !a;
    if rest != 0 {
        for (x, k) in sigma_tilde(rest, m).expect("nonempty subset") {
            ranks[x as usize - 1] = s + k;
        }
    }
    Ranking::from_ranks(ranks).expect("ranks in range")
}

fn subsets_of_size(m: u32, s: u32) -> impl Iterator<Item = SubsetMask> {
    (0..=full(m)).filter(move |a| a.count_ones() == s)
}

/// Complete set of orders of `[m]` with exactly `C(m, floor(m/2))` rankings.
pub fn build_complete_orders(m: usize) -> Result<OrderSet> {
    if m == 0 || m > MAX_M as usize {
        return Err(Error::InvalidArgument(format!("m must lie in 1..={MAX_M}, got {m}")));
    }
    let mu = m as u32;
    let mut rankings = vec![order_for(full(mu), mu)];
    for s in (mu.div_ceil(2)..mu).rev() {
        let covered: HashSet<SubsetMask> = subsets_of_size(mu, s + 1).map(|b| f_unchecked(s + 1, mu, b)).collect();
        for a in subsets_of_size(mu, s) {
            if !covered.contains(&a) {
                rankings.push(order_for(a, mu));
            }
        }
    }
    OrderSet::new(m, rankings)
}

/// Whether every subset of `[m]` is separated by some ranking in `set`.
pub fn is_complete(set: &OrderSet) -> bool {
    if set.m >= 64 {
        return false;
    }
    let mut seen: HashSet<u64> = HashSet::new();
    seen.insert(0);
    for r in &set.rankings {
        seen.extend(r.separated_sets());
    }
    seen.len() as u128 == 1u128 << set.m
}

/// Subsets of `[m]` (as bitmasks over indices `0..m`) no ranking separates.
pub fn unseparated(set: &OrderSet) -> Vec<u64> {
    let seen: BTreeSet<u64> = set.rankings.iter().flat_map(|r| r.separated_sets()).collect();
    (0..1u64 << set.m).filter(|a| *a != 0 && !seen.contains(a)).collect()
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `C(m, floor(m/2))`, the minimum size of a complete set of orders.
pub fn completeness_lower_bound(m: usize) -> u128 {
    binomial(m as u64, m as u64 / 2)
}

/// Checks that distinct middle-layer subsets are separated by distinct
/// rankings, which forces `|set| >= C(m, floor(m/2))`. Returns the number of
/// distinct separators used, or `None` if some middle subset is unseparated
/// or two of them share a separator.
pub fn middle_layer_injective(set: &OrderSet) -> Option<usize> {
    let m = set.m;
    if m >= 64 {
        return None;
    }
    let q = (m / 2) as u32;
    let mut used = HashSet::new();
    for a in (0..1u64 << m).filter(|a| a.count_ones() == q) {
        let idx = set.rankings.iter().position(|r| r.separates(a))?;
        // A ranking separates at most one set of each size.
        if !used.insert(idx) {
            return None;
        }
    }
    Some(used.len())
}
