mod common;

use gcnn_vc::classifier::{build_nu_profile, order_at, step_function};
use gcnn_vc::{classify, convolve, nu, Label, Ranking, Rational, RationalFunction, RationalMeasure, Scalar};
use proptest::prelude::*;

use common::{config, function_on, group, ints, q, rational, small_group};

fn relu_sum(values: &[Rational], c: &Rational) -> Rational {
    values.iter().fold(Rational::from_int(0), |acc, v| {
        let x = v.clone() + c.clone();
        if x > Rational::from_int(0) {
            acc + x
        } else {
            acc
        }
    })
}

fn setup() -> impl Strategy<Value = (RationalFunction, RationalFunction)> {
    small_group().prop_flat_map(|g| (function_on(g.clone()), function_on(g)))
}

fn bias() -> impl Strategy<Value = Rational> {
    (-64i64..=64, 1i64..=8).prop_map(|(n, d)| q(n, d))
}

#[test]
fn hand_examples() {
    let g = group("cyclic:2");
    let delta = RationalFunction::indicator(g.clone(), 0).unwrap();
    let f = ints(&g, &[1, 2]);
    let mu = RationalMeasure::counting(g.clone());
    assert_eq!(nu(&delta, &f, &mu, &q(0, 1)).unwrap(), q(3, 1));
    // nu + c2 = 0 is labelled -1.
    assert_eq!(classify(&delta, &f, &mu, &q(0, 1), &q(-3, 1)).unwrap(), Label::Neg);
    assert_eq!(classify(&delta, &f, &mu, &q(0, 1), &q(-5, 2)).unwrap(), Label::Pos);

    let profile = build_nu_profile(&delta, &f, &mu).unwrap();
    assert_eq!(profile.breakpoints, vec![q(-2, 1), q(-1, 1)]);
    assert_eq!(profile.slopes, vec![q(0, 1), q(1, 1), q(2, 1)]);

    let steps = step_function(&delta, &f, &mu).unwrap();
    assert_eq!(steps.breakpoints, vec![q(-2, 1), q(-1, 1)]);
    assert_eq!(steps.values, vec![q(0, 1), q(2, 1), q(3, 1)]);
    assert_eq!(steps.distinct_values(), 3);
}

#[test]
fn rankings_share_ties() {
    let r = Ranking::from_values(&[q(5, 1), q(1, 1), q(5, 1)]);
    assert_eq!(r.ranks(), &[2, 1, 2]);
    assert!(!r.is_strict());
    assert!(r.separates(0b010));
    assert!(!r.separates(0b001));
    assert!(r.separates(0b000) && r.separates(0b111));
    assert!(Ranking::from_ranks(vec![0, 1]).is_err());
}

proptest! {
    #![proptest_config(config(96))]

    #[test]
    fn nu_is_pooled_relu((k, f) in setup(), c in bias()) {
        let mu = RationalMeasure::counting(f.group().clone());
        let conv = convolve(&f, &k, &mu).unwrap();
        prop_assert_eq!(nu(&k, &f, &mu, &c).unwrap(), relu_sum(conv.values(), &c));
    }

    #[test]
    fn profile_agrees_with_nu((k, f) in setup(), cs in proptest::collection::vec(bias(), 1..8)) {
        let mu = RationalMeasure::counting(f.group().clone());
        let profile = build_nu_profile(&k, &f, &mu).unwrap();
        for c in cs.iter().chain(profile.breakpoints.iter()) {
            prop_assert_eq!(profile.eval(c), nu(&k, &f, &mu, c).unwrap());
        }
        prop_assert!(profile.breakpoints.len() <= f.group().order());
        prop_assert!(profile.breakpoints.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn nu_is_monotone_and_convex((k, f) in setup(), a in bias(), b in bias(), t in 0i64..=8) {
        let mu = RationalMeasure::counting(f.group().clone());
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let v_lo = nu(&k, &f, &mu, &lo).unwrap();
        let v_hi = nu(&k, &f, &mu, &hi).unwrap();
        prop_assert!(v_lo <= v_hi);
        let t = q(t, 8);
        let one = Rational::from_int(1);
        let mid = t.clone() * lo.clone() + (one.clone() - t.clone()) * hi.clone();
        let v_mid = nu(&k, &f, &mu, &mid).unwrap();
        prop_assert!(v_mid <= t.clone() * v_lo + (one - t) * v_hi);
    }

    #[test]
    fn step_function_counts((k, f) in setup(), cs in proptest::collection::vec(bias(), 1..8)) {
        let mu = RationalMeasure::counting(f.group().clone());
        let conv = convolve(&f, &k, &mu).unwrap();
        let steps = step_function(&k, &f, &mu).unwrap();
        for c in &cs {
            let expected = conv.values().iter().filter(|v| (*v).clone() + c.clone() > Rational::from_int(0))
                .fold(Rational::from_int(0), |acc, v| acc + v.clone());
            prop_assert_eq!(steps.eval(c), expected);
        }
        prop_assert!(steps.distinct_values() <= f.group().order() + 1);
    }

    #[test]
    fn classify_ignores_translation((k, f) in setup(), c1 in bias(), c2 in bias(), a in any::<usize>()) {
        let g = f.group().clone();
        let a = a % g.order();
        let mu = RationalMeasure::counting(g);
        let moved = f.translate(a).unwrap();
        prop_assert_eq!(classify(&k, &moved, &mu, &c1, &c2).unwrap(), classify(&k, &f, &mu, &c1, &c2).unwrap());
        prop_assert_eq!(nu(&k, &moved, &mu, &c1).unwrap(), nu(&k, &f, &mu, &c1).unwrap());
    }

    #[test]
    fn classify_is_monotone_in_c2((k, f) in setup(), c1 in bias(), a in bias(), b in bias()) {
        let mu = RationalMeasure::counting(f.group().clone());
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let at_lo = classify(&k, &f, &mu, &c1, &lo).unwrap();
        let at_hi = classify(&k, &f, &mu, &c1, &hi).unwrap();
        prop_assert!(!(at_lo == Label::Pos && at_hi == Label::Neg));
    }

    #[test]
    fn ranking_orders_values(values in proptest::collection::vec(rational(), 1..8)) {
        let r = Ranking::from_values(&values);
        for i in 0..values.len() {
            for j in 0..values.len() {
                prop_assert_eq!(values[i] < values[j], r.ranks()[i] < r.ranks()[j]);
            }
        }
        for subset in r.separated_sets() {
            prop_assert!(r.separates(subset));
        }
    }

    #[test]
    fn order_at_ranks_nus(
        (k, fs) in small_group().prop_flat_map(|g| (function_on(g.clone()), proptest::collection::vec(function_on(g), 1..4))),
        c in bias(),
    ) {
        let mu = RationalMeasure::counting(k.group().clone());
        let nus: Vec<Rational> = fs.iter().map(|f| nu(&k, f, &mu, &c).unwrap()).collect();
        prop_assert_eq!(order_at(&k, &fs, &mu, &c).unwrap(), Ranking::from_values(&nus));
    }
}
