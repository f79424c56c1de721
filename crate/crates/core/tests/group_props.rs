mod common;

use gcnn_vc::{FiniteGroup, GroupSpec};
use proptest::prelude::*;

use common::{config, group, SMALL_GROUPS};

/// Brute-force search for a bijection `phi` with `phi(a b) = phi(a) phi(b)`.
fn isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    fn extend(a: &FiniteGroup, b: &FiniteGroup, phi: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let k = phi.len();
        if k == a.order() {
            return a.elements().all(|x| a.elements().all(|y| phi[a.mul(x, y)] == b.mul(phi[x], phi[y])));
        }
        for t in b.elements() {
            if used[t] {
                continue;
            }
            phi.push(t);
            used[t] = true;
            // Prune on products of already-assigned elements.
            let consistent = (0..=k).all(|x| {
                (0..=k).all(|y| {
                    let xy = a.mul(x, y);
                    xy > k || phi[xy] == b.mul(phi[x], phi[y])
                })
            });
            if consistent && extend(a, b, phi, used) {
                return true;
            }
            phi.pop();
            used[t] = false;
        }
        false
    }
    a.order() == b.order() && extend(a, b, &mut Vec::new(), &mut vec![false; b.order()])
}

#[test]
fn product_of_c2_c3_is_c6() {
    let p = FiniteGroup::from_spec_str("product:cyclic:2,cyclic:3").unwrap();
    assert_eq!(p.order(), 6);
    assert!(p.is_abelian());
    assert!(isomorphic(&p, &FiniteGroup::from_spec_str("cyclic:6").unwrap()));
    assert!(!isomorphic(
        &FiniteGroup::from_spec_str("dihedral:3").unwrap(),
        &FiniteGroup::from_spec_str("cyclic:6").unwrap()
    ));
    assert!(!isomorphic(
        &FiniteGroup::from_spec_str("product:cyclic:2,cyclic:2").unwrap(),
        &FiniteGroup::from_spec_str("cyclic:4").unwrap()
    ));
}

#[test]
fn cyclic_four_by_hand() {
    let g = group("cyclic:4");
    assert_eq!(g.identity(), 0);
    assert_eq!(g.inv(1), 3);
    assert_eq!(g.find_order_two_element(), Some(2));
    assert_eq!(group("cyclic:81").find_order_two_element(), None);
    assert_eq!(group("cyclic:81").find_order_ge3_element(), Some(1));
    assert_eq!(group("cyclic:48").find_order_ge3_element(), Some(1));
    assert_eq!(group("cyclic:2").find_order_ge3_element(), None);
}

#[test]
fn corrupted_table_fails_associativity() {
    let n = 4;
    let mut mul: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    let inv: Vec<usize> = (0..n).map(|a| (n - a) % n).collect();
    mul[1][1] = 3;
    let report = FiniteGroup::from_tables("broken", mul, inv, 0).unwrap().validate(0);
    assert!(!report.all_passed());
    let assoc = report.check("associativity").unwrap();
    assert!(!assoc.passed);
}

#[test]
fn order_two_iff_even() {
    for n in 1..=200 {
        assert_eq!(
            FiniteGroup::from_spec_str(&format!("cyclic:{n}")).unwrap().find_order_two_element().is_some(),
            n % 2 == 0,
            "n = {n}"
        );
    }
}

#[test]
fn small_groups_validate() {
    for spec in SMALL_GROUPS {
        let report = group(spec).validate(0);
        assert!(report.all_passed(), "{spec}: {report:?}");
        assert!(report.exhaustive);
    }
}

fn spec() -> impl Strategy<Value = GroupSpec> {
    let leaf = prop_oneof![(1usize..=12).prop_map(GroupSpec::Cyclic), (1usize..=6).prop_map(GroupSpec::Dihedral)];
    leaf.prop_recursive(2, 4, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| GroupSpec::product(a, b)))
        .prop_filter("order at most 144", |s| s.order().unwrap() <= 144)
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn built_groups_satisfy_axioms(s in spec()) {
        let g = FiniteGroup::build(&s).unwrap();
        prop_assert_eq!(g.order(), s.order().unwrap());
        prop_assert!(g.validate(0).all_passed());
        let e = g.identity();
        for a in g.elements() {
            prop_assert_eq!(g.mul(a, g.inv(a)), e);
            prop_assert_eq!(g.mul(e, a), a);
        }
    }

    #[test]
    fn spec_text_round_trips(s in spec()) {
        let text = s.to_string();
        prop_assert_eq!(text.parse::<GroupSpec>().unwrap(), s);
    }

    #[test]
    fn powers_add(spec in proptest::sample::select(SMALL_GROUPS), i in -20i64..20, j in -20i64..20) {
        let g = group(spec);
        for a in g.elements() {
            prop_assert_eq!(g.mul(g.pow(a, i), g.pow(a, j)), g.pow(a, i + j));
        }
    }

    #[test]
    fn dihedral_is_abelian_only_when_tiny(n in 1usize..=12) {
        let g = FiniteGroup::from_spec_str(&format!("dihedral:{n}")).unwrap();
        prop_assert_eq!(g.order(), 2 * n);
        prop_assert_eq!(g.is_abelian(), n <= 2);
    }
}
