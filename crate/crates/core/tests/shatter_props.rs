mod common;

use std::collections::BTreeSet;

use gcnn_vc::io::CertificateJson;
use gcnn_vc::shatter::{
    check_order_criterion, critical_points, dichotomy_mask, enumerate_dichotomies, is_shattered, order_set, vc_search,
};
use gcnn_vc::{classify, convolve, nu, Label, Rational, RationalFunction, RationalMeasure, Scalar};
use proptest::prelude::*;

use common::{config, function_on, group, ints, q, small_group};

fn family(max_m: usize) -> impl Strategy<Value = (RationalFunction, Vec<RationalFunction>)> {
    (small_group(), 1..=max_m)
        .prop_flat_map(|(g, m)| (function_on(g.clone()), proptest::collection::vec(function_on(g), m)))
}

fn labels_at(k: &RationalFunction, fs: &[RationalFunction], mu: &RationalMeasure, c1: &Rational, c2: &Rational) -> u64 {
    let labels: Vec<Label> = fs.iter().map(|f| classify(k, f, mu, c1, c2).unwrap()).collect();
    dichotomy_mask(&labels)
}

/// Dichotomies seen on a grid of `c1` with denominator 64 and every useful
/// `c2` at each grid point, from ReLU sums of the convolutions.
fn grid_dichotomies(
    k: &RationalFunction,
    fs: &[RationalFunction],
    mu: &RationalMeasure,
    lo: i64,
    hi: i64,
) -> BTreeSet<u64> {
    let conv: Vec<Vec<Rational>> = fs.iter().map(|f| convolve(f, k, mu).unwrap().into_values()).collect();
    let zero = Rational::from_int(0);
    let mut seen = BTreeSet::new();
    for t in lo * 64..=hi * 64 {
        let c1 = q(t, 64);
        let nus: Vec<Rational> = conv
            .iter()
            .map(|vals| {
                vals.iter().map(|v| v.clone() + c1.clone()).filter(|x| *x > zero).fold(zero.clone(), |a, x| a + x)
            })
            .collect();
        let mut c2s: Vec<Rational> = nus.iter().map(|v| -v.clone()).collect();
        c2s.push(Rational::from_int(1) - nus.iter().cloned().reduce(Rational::min_of).unwrap());
        for c2 in c2s {
            let mask = nus
                .iter()
                .enumerate()
                .filter(|(_, v)| (*v).clone() + c2.clone() > zero)
                .fold(0u64, |acc, (i, _)| acc | 1 << i);
            seen.insert(mask);
        }
    }
    seen
}

#[test]
fn two_functions_on_cyclic_two() {
    let g = group("cyclic:2");
    let delta = RationalFunction::indicator(g.clone(), 0).unwrap();
    let mu = RationalMeasure::counting(g.clone());

    // nu_1 <= nu_2 everywhere, so {f_1 positive, f_2 negative} is unreachable.
    let fs = vec![ints(&g, &[0, 1]), ints(&g, &[2, 0])];
    let cert = is_shattered(&delta, &fs, &mu).unwrap();
    assert!(!cert.shattered);
    assert_eq!(cert.witnessed(), 3);
    assert!(cert.entries[0b01].witness.is_none());
    let found: BTreeSet<u64> = enumerate_dichotomies(&delta, &fs, &mu).unwrap().into_keys().collect();
    assert_eq!(found, grid_dichotomies(&delta, &fs, &mu, -4, 4));
    let crit = critical_points(&delta, &fs, &mu).unwrap();
    for p in [q(-2, 1), q(-1, 1), q(0, 1)] {
        assert!(crit.points.contains(&p), "{p} missing");
    }

    let crossing = vec![ints(&g, &[3, -5]), ints(&g, &[2, 2])];
    assert!(is_shattered(&delta, &crossing, &mu).unwrap().shattered);
    assert!(check_order_criterion(&delta, &crossing, &mu).unwrap());
}

#[test]
fn zero_kernel_shatters_only_singletons() {
    let g = group("cyclic:4");
    let zero = RationalFunction::zero(g.clone());
    let mu = RationalMeasure::counting(g.clone());
    let fs = vec![ints(&g, &[1, 2, 3, 4]), ints(&g, &[-1, 0, 5, 2])];
    let cert = is_shattered(&zero, &fs, &mu).unwrap();
    assert!(!cert.shattered);
    assert_eq!(cert.witnessed(), 2);
    assert!(!check_order_criterion(&zero, &fs, &mu).unwrap());
    assert!(is_shattered(&zero, &fs[..1], &mu).unwrap().shattered);
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn counting_bound((k, fs) in family(3)) {
        let mu = RationalMeasure::counting(k.group().clone());
        let (m, n) = (fs.len(), k.group().order());
        let found = enumerate_dichotomies(&k, &fs, &mu).unwrap();
        prop_assert!(found.len() <= (m + m * (m - 1) / 2) * (m * n + 1));
        prop_assert!(found.len() <= 1 << m);
    }

    #[test]
    fn sampled_biases_find_a_subset((k, fs) in family(3), samples in proptest::collection::vec((-96i64..=96, -400i64..=400), 32)) {
        let mu = RationalMeasure::counting(k.group().clone());
        let found = enumerate_dichotomies(&k, &fs, &mu).unwrap();
        for (a, b) in samples {
            let mask = labels_at(&k, &fs, &mu, &q(a, 8), &q(b, 8));
            prop_assert!(found.contains_key(&mask), "sampled mask {mask:#b} not enumerated");
        }
    }

    #[test]
    fn grid_oracle_for_pairs(
        (k, fs) in small_group().prop_flat_map(|g| (function_on(g.clone()), proptest::collection::vec(function_on(g), 2)))
    ) {
        let mu = RationalMeasure::counting(k.group().clone());
        let found: BTreeSet<u64> = enumerate_dichotomies(&k, &fs, &mu).unwrap().into_keys().collect();
        let crit = critical_points(&k, &fs, &mu).unwrap();
        let lo = crit.probes.first().map_or(-2, |p| p.floor().to_integer().try_into().unwrap_or(-32) - 1).max(-32);
        let hi = crit.probes.last().map_or(2, |p| p.ceil().to_integer().try_into().unwrap_or(32) + 1).min(32);
        let grid = grid_dichotomies(&k, &fs, &mu, lo, hi);
        prop_assert!(grid.is_subset(&found));
    }

    #[test]
    fn witnesses_reverify((k, fs) in family(3)) {
        let mu = RationalMeasure::counting(k.group().clone());
        let cert = is_shattered(&k, &fs, &mu).unwrap();
        for e in &cert.entries {
            if let Some((c1, c2)) = &e.witness {
                prop_assert_eq!(labels_at(&k, &fs, &mu, c1, c2), dichotomy_mask(&e.labels));
            }
        }
        let json = CertificateJson::from_certificate(&cert);
        prop_assert_eq!(json.to_certificate().unwrap(), cert.clone());
        prop_assert!(cert.verify(&k, &fs, &mu).is_ok());
    }

    #[test]
    fn order_criterion_matches_shattering((k, fs) in family(3)) {
        let mu = RationalMeasure::counting(k.group().clone());
        prop_assert_eq!(is_shattered(&k, &fs, &mu).unwrap().shattered, check_order_criterion(&k, &fs, &mu).unwrap());
    }

    #[test]
    fn order_set_contains_probe_rankings((k, fs) in family(3), c in (-64i64..=64, 1i64..=8)) {
        let mu = RationalMeasure::counting(k.group().clone());
        let set = order_set(&k, &fs, &mu).unwrap();
        let nus: Vec<Rational> = fs.iter().map(|f| nu(&k, f, &mu, &q(c.0, c.1)).unwrap()).collect();
        prop_assert!(set.rankings.contains(&gcnn_vc::Ranking::from_values(&nus)));
    }

    #[test]
    fn shattering_is_hereditary((k, fs) in family(3)) {
        let mu = RationalMeasure::counting(k.group().clone());
        if is_shattered(&k, &fs, &mu).unwrap().shattered {
            for drop in 0..fs.len() {
                let sub: Vec<RationalFunction> = fs.iter().enumerate().filter(|(i, _)| *i != drop).map(|(_, f)| f.clone()).collect();
                if !sub.is_empty() {
                    prop_assert!(is_shattered(&k, &sub, &mu).unwrap().shattered);
                }
            }
        }
    }

    #[test]
    fn search_finds_a_maximum((k, fs) in family(4)) {
        let mu = RationalMeasure::counting(k.group().clone());
        let result = vc_search(&k, &fs, &mu, fs.len(), u64::MAX).unwrap();
        prop_assert!(!result.partial);
        let best: Vec<RationalFunction> = result.best.iter().map(|&i| fs[i].clone()).collect();
        prop_assert!(!best.is_empty());
        prop_assert!(is_shattered(&k, &best, &mu).unwrap().shattered);
        // No subset one larger is shattered.
        let size = best.len() + 1;
        if size <= fs.len() {
            for mask in 0u32..1 << fs.len() {
                if mask.count_ones() as usize == size {
                    let sub: Vec<RationalFunction> = (0..fs.len()).filter(|i| mask >> i & 1 == 1).map(|i| fs[i].clone()).collect();
                    prop_assert!(!is_shattered(&k, &sub, &mu).unwrap().shattered);
                }
            }
        }
    }
}
