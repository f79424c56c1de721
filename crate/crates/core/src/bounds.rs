//! Closed-form VC-dimension bounds for the fixed-kernel classifier on a group
//! of order `n`, and the group sizes the synthesis needs.
//!
//! Real-valued bounds are returned as `f64` for display. Every comparison the
//! crate relies on has an exact integer form alongside.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orders::binomial;
use crate::synth::SynthMode;

/// Exact test of `m - 3 log2(m+1) <= log2(n)`, i.e. `2^m <= n (m+1)^3`.
pub fn implicit_holds(n: u64, m: u64) -> bool {
    let lhs = BigUint::one() << m;
    let rhs = BigUint::from(n) * BigUint::from(m + 1).pow(3);
    lhs <= rhs
}

/// Largest `m >= 1` with `2^m <= n (m+1)^3`.
pub fn upper_bound_implicit(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    // The inequality holds for m = 1..=M and fails beyond; it never fails
    // below m = 4 since 2^m <= (m+1)^3 there.
    let mut m = 1;
    while implicit_holds(n, m + 1) {
        m += 1;
    }
    Ok(m)
}

/// `max(30, 2 log2 n)`.
pub fn upper_bound_simple(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(30f64.max(2.0 * (n as f64).log2()))
}

/// Exact `ceil(max(30, 2 log2 n))`: `max(30, smallest k with 2^k >= n^2)`.
pub fn upper_bound_simple_ceil(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let sq = BigUint::from(n).pow(2);
    let mut k = 0u64;
    while (BigUint::one() << k) < sq {
        k += 1;
    }
    Ok(k.max(30))
}

/// `log2 n + 9 log2 log2 n`, defined for `n >= 16`.
pub fn upper_bound_refined(n: u64) -> Result<f64> {
    if n < 16 {
        return Err(Error::InvalidArgument(format!("refined bound needs n >= 16, got {n}")));
    }
    let l = (n as f64).log2();
    Ok(l + 9.0 * l.log2())
}

/// `log2 n - 2 log2 log2 n - 1` with an order-two element, `... - 4` without.
/// May be negative.
pub fn lower_bound(n: u64, has_order_two: bool) -> Result<f64> {
    if n <= 1 {
        return Err(Error::InvalidArgument(format!("lower bound needs n > 1, got {n}")));
    }
    let l = (n as f64).log2();
    let offset = if has_order_two { 1.0 } else { 4.0 };
    Ok(l - 2.0 * l.log2() - offset)
}

/// Exact check of `lower_bound(n, mode) <= m`.
///
/// With `k` the offset (1 or 4) the claim is `n <= 2^{m+k} (log2 n)^2`.
/// For `L = floor(log2 n)` it holds if `n <= 2^{m+k} L^2` and fails if
/// `n >= 2^{m+k} (L+1)^2`; only the narrow band between falls back to `f64`.
pub fn lower_bound_at_most(n: u64, has_order_two: bool, m: u64) -> Result<bool> {
    if n <= 1 {
        return Err(Error::InvalidArgument(format!("lower bound needs n > 1, got {n}")));
    }
    let k = if has_order_two { 1 } else { 4 };
    let l = 63 - n.leading_zeros() as u64;
    let n_big = BigUint::from(n);
    let scale = BigUint::one() << (m + k);
    if n_big <= &scale * BigUint::from(l).pow(2) {
        return Ok(true);
    }
    if n_big >= &scale * BigUint::from(l + 1).pow(2) {
        return Ok(false);
    }
    // Between the two integer brackets: settle with floating point.
    Ok(lower_bound(n, has_order_two)? <= m as f64)
}

/// `2 m C(m, floor(m/2))` or `9 m C(m, floor(m/2))`.
pub fn required_group_size(m: u64, mode: SynthMode) -> Result<u128> {
    if m < 1 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    if m > 120 {
        return Err(Error::Overflow("required_group_size"));
    }
    mode.size_factor()
        .checked_mul(m as u128)
        .and_then(|x| x.checked_mul(binomial(m, m / 2)))
        .ok_or(Error::Overflow("required_group_size"))
}

/// `C(2m, m)^2 * pi * m < 16^m`, checked with `pi < 355/113`.
pub fn wallis_holds(m: u64) -> bool {
    if m == 0 {
        return false;
    }
    let c = central_binomial(m);
    let lhs = c.pow(2) * BigUint::from(355u32) * BigUint::from(m);
    let rhs = (BigUint::one() << (4 * m)) * BigUint::from(113u32);
    lhs < rhs
}

fn central_binomial(m: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..m {
        acc = acc * BigUint::from(2 * m - i) / BigUint::from(i + 1);
    }
    acc
}

/// All bounds for one group order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: u64,
    pub implicit_upper: u64,
    pub simple_upper: f64,
    pub simple_upper_ceil: u64,
    pub refined_upper: Option<f64>,
    pub lower_general: Option<f64>,
    pub lower_order_two: Option<f64>,
}

impl BoundReport {
    pub fn new(n: u64) -> Result<Self> {
        Ok(Self {
            n,
            implicit_upper: upper_bound_implicit(n)?,
            simple_upper: upper_bound_simple(n)?,
            simple_upper_ceil: upper_bound_simple_ceil(n)?,
            refined_upper: upper_bound_refined(n).ok(),
            lower_general: lower_bound(n, false).ok(),
            lower_order_two: lower_bound(n, true).ok(),
        })
    }
}
