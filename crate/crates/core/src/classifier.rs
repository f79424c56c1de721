//! The two-parameter classifier
//! `H_{c1,c2}(K)(f) = sign( sum_g ReLU((f * K)(g) + c1) mu(g) + c2 )`
//! together with the piecewise structure of its pooled activation.
//!
//! The pooled activation `nu_f(c) = sum_g ReLU((f*K)(g) + c) mu(g)` is convex,
//! non-decreasing and piecewise affine in `c`; [`NuProfile`] stores it exactly.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gfunc::{convolve, same_group, GroupFunction, Measure};
use crate::scalar::{sort_dedup, Scalar};

/// Output of the classifier. `sign(0)` is [`Label::Neg`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Neg,
    Pos,
}

impl Label {
    pub fn from_sign<T: Scalar>(value: &T) -> Self {
        if value.is_positive() {
            Label::Pos
        } else {
            Label::Neg
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Label::Neg => -1,
            Label::Pos => 1,
        }
    }

    pub fn from_i8(v: i8) -> Option<Self> {
        match v {
            -1 => Some(Label::Neg),
            1 => Some(Label::Pos),
            _ => None,
        }
    }
}

/// `sum_g max(0, v_g + c) w_g` for precomputed convolution values.
pub fn pooled_relu<T: Scalar>(values: &[T], weights: &[T], c: &T) -> T {
    values.iter().zip(weights).fold(T::zero(), |acc, (v, w)| {
        let a = v.clone() + c.clone();
        if a.is_positive() {
            acc + a * w.clone()
        } else {
            acc
        }
    })
}

/// Pooled activation `nu(c)` of `f` under kernel `K`.
pub fn nu<T: Scalar>(kernel: &GroupFunction<T>, f: &GroupFunction<T>, mu: &Measure<T>, c: &T) -> Result<T> {
    let conv = convolve(f, kernel, mu)?;
    Ok(pooled_relu(conv.values(), mu.weights(), c))
}

/// `+1` iff `nu(c1) + c2 > 0`.
pub fn classify<T: Scalar>(
    kernel: &GroupFunction<T>,
    f: &GroupFunction<T>,
    mu: &Measure<T>,
    c1: &T,
    c2: &T,
) -> Result<Label> {
    Ok(Label::from_sign(&(nu(kernel, f, mu, c1)? + c2.clone())))
}

/// Exact piecewise-affine representation of `c -> nu(c)`.
///
/// Piece `j` covers `(breakpoints[j-1], breakpoints[j]]` (unbounded at the
/// ends) and there `nu(c) = slopes[j] * c + offsets[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NuProfile<T> {
    pub breakpoints: Vec<T>,
    pub slopes: Vec<T>,
    pub offsets: Vec<T>,
}

impl<T: Scalar> NuProfile<T> {
    /// Builds the profile from convolution values and measure weights.
    pub fn from_values(values: &[T], weights: &[T]) -> Self {
        // Term g switches on once c exceeds -v_g.
        let mut terms: Vec<(T, &T, &T)> =
            values.iter().zip(weights).filter(|(_, w)| w.is_positive()).map(|(v, w)| (-v.clone(), v, w)).collect();
        terms.sort_by(|a, b| a.0.cmp_total(&b.0));

        let mut breakpoints = Vec::new();
        let mut slopes = vec![T::zero()];
        let mut offsets = vec![T::zero()];
        let mut i = 0;
        while i < terms.len() {
            let at = terms[i].0.clone();
            let mut slope = slopes.last().unwrap().clone();
            let mut offset = offsets.last().unwrap().clone();
            while i < terms.len() && terms[i].0 == at {
                slope = slope + terms[i].2.clone();
                offset = offset + terms[i].1.clone() * terms[i].2.clone();
                i += 1;
            }
            breakpoints.push(at);
            slopes.push(slope);
            offsets.push(offset);
        }
        Self { breakpoints, slopes, offsets }
    }

    /// Index of the piece containing `c`.
    pub fn piece_index(&self, c: &T) -> usize {
        self.breakpoints.partition_point(|b| b < c)
    }

    pub fn piece_at(&self, c: &T) -> (&T, &T) {
        let j = self.piece_index(c);
        (&self.slopes[j], &self.offsets[j])
    }

    pub fn eval(&self, c: &T) -> T {
        let (s, o) = self.piece_at(c);
        s.clone() * c.clone() + o.clone()
    }
}

pub fn build_nu_profile<T: Scalar>(
    kernel: &GroupFunction<T>,
    f: &GroupFunction<T>,
    mu: &Measure<T>,
) -> Result<NuProfile<T>> {
    let conv = convolve(f, kernel, mu)?;
    Ok(NuProfile::from_values(conv.values(), mu.weights()))
}

/// Step function `F(c) = sum_g v_g w_g 1[v_g > -c]`.
///
/// Same piece convention as [`NuProfile`]: at `c = -v_g` the term is still
/// excluded. Breakpoints where the value does not change are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFn<T> {
    pub breakpoints: Vec<T>,
    pub values: Vec<T>,
}

impl<T: Scalar> StepFn<T> {
    pub fn from_values(values: &[T], weights: &[T]) -> Self {
        let mut kappas: Vec<(T, T)> = values
            .iter()
            .zip(weights)
            .filter(|(_, w)| w.is_positive())
            .map(|(v, w)| (-v.clone(), v.clone() * w.clone()))
            .collect();
        kappas.sort_by(|a, b| a.0.cmp_total(&b.0));

        let mut breakpoints = Vec::new();
        let mut out = vec![T::zero()];
        let mut i = 0;
        while i < kappas.len() {
            let at = kappas[i].0.clone();
            let mut acc = out.last().unwrap().clone();
            while i < kappas.len() && kappas[i].0 == at {
                acc = acc + kappas[i].1.clone();
                i += 1;
            }
            if &acc != out.last().unwrap() {
                breakpoints.push(at);
                out.push(acc);
            }
        }
        Self { breakpoints, values: out }
    }

    pub fn eval(&self, c: &T) -> T {
        self.values[self.breakpoints.partition_point(|b| b < c)].clone()
    }

    /// Number of distinct values taken on the real line.
    pub fn distinct_values(&self) -> usize {
        let mut v = self.values.clone();
        sort_dedup(&mut v);
        v.len()
    }
}

pub fn step_function<T: Scalar>(kernel: &GroupFunction<T>, f: &GroupFunction<T>, mu: &Measure<T>) -> Result<StepFn<T>> {
    let conv = convolve(f, kernel, mu)?;
    Ok(StepFn::from_values(conv.values(), mu.weights()))
}

/// Ranks `rank(k) = 1 + |{l : value_l < value_k}|`; tied values share a rank.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ranking {
    ranks: Vec<usize>,
}

impl Ranking {
    pub fn from_values<T: Scalar>(values: &[T]) -> Self {
        let ranks =
            values.iter().map(|vk| 1 + values.iter().filter(|vl| vl.cmp_total(vk) == Ordering::Less).count()).collect();
        Self { ranks }
    }

    /// Wraps explicit ranks, which must lie in `1..=m`.
    pub fn from_ranks(ranks: Vec<usize>) -> Result<Self> {
        let m = ranks.len();
        if ranks.iter().any(|&r| r == 0 || r > m) {
            return Err(Error::InvalidArgument(format!("ranks must lie in 1..={m}: {ranks:?}")));
        }
        Ok(Self { ranks })
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// True when the ranks form a permutation of `1..=m`.
    pub fn is_strict(&self) -> bool {
        let mut seen = vec![false; self.ranks.len() + 1];
        self.ranks.iter().all(|&r| r <= self.ranks.len() && !std::mem::replace(&mut seen[r], true))
    }

    /// Whether every index in `subset` (bit `k` = index `k`) ranks strictly
    /// below every index outside it.
    pub fn separates(&self, subset: u64) -> bool {
        let mut max_in = 0;
        let mut min_out = usize::MAX;
        for (k, &r) in self.ranks.iter().enumerate() {
            if subset >> k & 1 == 1 {
                max_in = max_in.max(r);
            } else {
                min_out = min_out.min(r);
            }
        }
        max_in < min_out
    }

    /// All subsets this ranking separates, as bitmasks (the down-sets of the
    /// rank order, including the empty and the full set).
    pub fn separated_sets(&self) -> Vec<u64> {
        let mut levels: Vec<usize> = self.ranks.clone();
        levels.sort_unstable();
        levels.dedup();
        let mut out = vec![0u64];
        for &t in &levels {
            let mask = self.ranks.iter().enumerate().filter(|(_, &r)| r <= t).fold(0u64, |m, (k, _)| m | 1 << k);
            out.push(mask);
        }
        out
    }
}

/// Ranking of `nu_k(c)` over the family `fs`.
pub fn order_at<T: Scalar>(
    kernel: &GroupFunction<T>,
    fs: &[GroupFunction<T>],
    mu: &Measure<T>,
    c: &T,
) -> Result<Ranking> {
    if fs.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let values = fs.iter().map(|f| nu(kernel, f, mu, c)).collect::<Result<Vec<_>>>()?;
    Ok(Ranking::from_values(&values))
}

/// Precomputed convolution data for a family of functions under one kernel.
#[derive(Debug, Clone)]
pub struct Family<T> {
    pub conv: Vec<Vec<T>>,
    pub weights: Vec<T>,
    pub profiles: Vec<NuProfile<T>>,
}

impl<T: Scalar> Family<T> {
    pub fn new(kernel: &GroupFunction<T>, fs: &[GroupFunction<T>], mu: &Measure<T>) -> Result<Self> {
        if fs.is_empty() {
            return Err(Error::EmptyFamily);
        }
        same_group(kernel.group(), mu.group())?;
        let conv =
            fs.iter().map(|f| convolve(f, kernel, mu).map(GroupFunction::into_values)).collect::<Result<Vec<_>>>()?;
        let weights = mu.weights().to_vec();
        let profiles = conv.iter().map(|v| NuProfile::from_values(v, &weights)).collect();
        Ok(Self { conv, weights, profiles })
    }

    pub fn len(&self) -> usize {
        self.conv.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conv.is_empty()
    }

    pub fn nu_values(&self, c: &T) -> Vec<T> {
        self.profiles.iter().map(|p| p.eval(c)).collect()
    }

    pub fn ranking(&self, c: &T) -> Ranking {
        Ranking::from_values(&self.nu_values(c))
    }
}
