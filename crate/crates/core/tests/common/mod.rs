#![allow(dead_code)]

use std::sync::Arc;

use gcnn_vc::{FiniteGroup, Rational, RationalFunction, Scalar};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use rand::Rng;

/// Seed for every randomized test, from `GCNN_VC_SEED` (default 0).
pub fn seed() -> u64 {
    std::env::var("GCNN_VC_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0)
}

pub fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(seed()), failure_persistence: None, ..Config::default() }
}

pub fn group(spec: &str) -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::from_spec_str(spec).unwrap())
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

pub fn ints(g: &Arc<FiniteGroup>, values: &[i64]) -> RationalFunction {
    RationalFunction::new(g.clone(), values.iter().map(|&v| Rational::from_int(v)).collect()).unwrap()
}

/// Every group spec of order at most 12 the tests draw from.
pub const SMALL_GROUPS: &[&str] = &[
    "cyclic:1",
    "cyclic:2",
    "cyclic:3",
    "cyclic:4",
    "cyclic:5",
    "cyclic:6",
    "cyclic:7",
    "cyclic:8",
    "cyclic:9",
    "cyclic:10",
    "cyclic:11",
    "cyclic:12",
    "dihedral:2",
    "dihedral:3",
    "dihedral:4",
    "dihedral:5",
    "dihedral:6",
    "product:cyclic:2,cyclic:2",
    "product:cyclic:2,cyclic:4",
    "product:cyclic:3,cyclic:3",
    "product:cyclic:2,cyclic:6",
    "product:cyclic:2,dihedral:3",
];

/// Rational with numerator in `-8..=8` and denominator in `1..=8`.
pub fn random_rational(rng: &mut impl Rng) -> Rational {
    q(rng.gen_range(-8..=8), rng.gen_range(1..=8))
}

pub fn random_function(rng: &mut impl Rng, g: &Arc<FiniteGroup>) -> RationalFunction {
    RationalFunction::new(g.clone(), (0..g.order()).map(|_| random_rational(rng)).collect()).unwrap()
}

pub fn rational() -> impl Strategy<Value = Rational> {
    (-8i64..=8, 1i64..=8).prop_map(|(n, d)| q(n, d))
}

pub fn small_group() -> impl Strategy<Value = Arc<FiniteGroup>> {
    proptest::sample::select(SMALL_GROUPS).prop_map(group)
}

pub fn function_on(g: Arc<FiniteGroup>) -> impl Strategy<Value = RationalFunction> {
    let n = g.order();
    proptest::collection::vec(rational(), n).prop_map(move |v| RationalFunction::new(g.clone(), v).unwrap())
}

/// A group, a kernel and `m` functions on it.
pub fn instance(max_m: usize) -> impl Strategy<Value = (RationalFunction, Vec<RationalFunction>)> {
    (small_group(), 1..=max_m)
        .prop_flat_map(|(g, m)| (function_on(g.clone()), proptest::collection::vec(function_on(g), m)))
}
