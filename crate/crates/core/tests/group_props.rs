use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use zsl::{Error, Group, Sequence};

fn group_strategy() -> impl Strategy<Value = Group> {
    prop::collection::vec(2u64..=9, 1..=3)
        .prop_filter("order at most 200", |m| m.iter().product::<u64>() <= 200)
        .prop_map(|m| Group::new(&m).unwrap())
}

fn with_indices(k: usize) -> impl Strategy<Value = (Group, Vec<usize>)> {
    group_strategy().prop_flat_map(move |g| {
        let n = g.order();
        (Just(g), prop::collection::vec(0..n, 0..=k))
    })
}

/// Brute force: some member of the subgroup generates all of it.
fn cyclic_by_search(g: &Group, sub: &[usize]) -> bool {
    sub.iter().any(|&c| g.order_of_idx(c) as usize == sub.len())
}

proptest! {
    #[test]
    fn index_round_trip((g, xs) in with_indices(8)) {
        for &i in &xs {
            let e = g.element_at(i).unwrap();
            prop_assert_eq!(g.index_of(&e).unwrap(), i);
            let shown = g.format_index(i);
            prop_assert_eq!(g.parse_element(&shown).unwrap(), e);
        }
    }

    #[test]
    fn index_arithmetic_matches_elements((g, xs) in with_indices(6), t in 0u64..40) {
        for &i in &xs {
            let a = g.element_at(i).unwrap();
            for &j in &xs {
                let b = g.element_at(j).unwrap();
                prop_assert_eq!(g.index_of(&g.add(&a, &b).unwrap()).unwrap(), g.add_idx(i, j));
                prop_assert_eq!(g.index_of(&g.sub(&a, &b).unwrap()).unwrap(), g.sub_idx(i, j));
            }
            prop_assert_eq!(g.index_of(&g.neg(&a).unwrap()).unwrap(), g.neg_idx(i));
            prop_assert_eq!(g.index_of(&g.scale(t, &a).unwrap()).unwrap(), g.scale_idx(t, i));
            let ord = g.order_of_idx(i);
            prop_assert_eq!(g.scale_idx(ord, i), 0);
            prop_assert!((1..ord).all(|s| g.scale_idx(s, i) != 0));
            prop_assert_eq!(g.exponent() % ord, 0);
            let row = g.shift_row(i);
            prop_assert!(row.iter().enumerate().all(|(k, &r)| r as usize == g.add_idx(k, i)));
        }
    }

    #[test]
    fn subgroup_closure((g, gens) in with_indices(3)) {
        let sub = g.subgroup_generated_idx(&gens);
        let set: BTreeSet<usize> = sub.iter().copied().collect();
        prop_assert_eq!(set.len(), sub.len());
        prop_assert!(set.contains(&0));
        prop_assert_eq!(g.order() % sub.len(), 0);
        for &x in &gens {
            prop_assert!(set.contains(&x));
        }
        for &x in &sub {
            prop_assert!(set.contains(&g.neg_idx(x)));
            for &y in &sub {
                prop_assert!(set.contains(&g.add_idx(x, y)));
            }
        }
        prop_assert_eq!(g.subgroup_generated_idx(&sub).len(), sub.len());
        prop_assert_eq!(g.is_cyclic_subgroup_idx(&gens), cyclic_by_search(&g, &sub));
    }

    #[test]
    fn sequence_literal_round_trip((g, xs) in with_indices(10)) {
        let g = Arc::new(g);
        let xs: Vec<usize> = xs.into_iter().filter(|&x| x != 0).collect();
        let s = Sequence::from_indices(g.clone(), &xs).unwrap();
        let back = Sequence::parse(g.clone(), &s.to_string());
        if s.is_empty() {
            prop_assert!(back.map(|b| b.is_empty()).unwrap_or(true));
        } else {
            prop_assert_eq!(back.unwrap(), s.clone());
        }
        let json = serde_json::to_string(&s.to_json()).unwrap();
        let parsed = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(Sequence::from_json(&parsed, g.clone()).unwrap(), s.clone());
        let h = s.counts().map(|(_, m)| m).max().unwrap_or(0);
        prop_assert_eq!(s.h_max(), h);
        prop_assert_eq!(s.is_squarefree(), h <= 1);
        let total = xs.iter().fold(0, |acc, &x| g.add_idx(acc, x));
        prop_assert_eq!(s.sigma_idx(), total);
    }
}

#[test]
fn brute_force_cyclicity_small_groups() {
    for n in 2..=16u64 {
        for moduli in [vec![n], vec![2, n], vec![n, n]] {
            let g = match Group::new(&moduli) {
                Ok(g) if g.order() <= 16 => g,
                _ => continue,
            };
            let all: Vec<usize> = (0..g.order()).collect();
            let whole = g.subgroup_generated_idx(&all);
            assert_eq!(whole.len(), g.order());
            assert_eq!(
                g.is_cyclic_subgroup_idx(&all),
                cyclic_by_search(&g, &whole),
                "{g}"
            );
            for a in 0..g.order() {
                for b in 0..g.order() {
                    let sub = g.subgroup_generated_idx(&[a, b]);
                    assert_eq!(
                        g.is_cyclic_subgroup_idx(&[a, b]),
                        cyclic_by_search(&g, &sub),
                        "{g}: <{a}, {b}>"
                    );
                }
            }
        }
    }
}

#[test]
fn rejects_bad_input() {
    assert_eq!(Group::new(&[]), Err(Error::EmptyModuli));
    assert!(matches!(Group::new(&[1]), Err(Error::ModulusTooSmall(1))));
    assert!(matches!(
        Group::with_cap(&[64, 65], 4096),
        Err(Error::OrderCapExceeded { .. })
    ));
    let g = Arc::new("2x4".parse::<Group>().unwrap());
    assert!(g.parse_element("(2,0)").is_err());
    assert!(g.parse_element("(1,-1)").is_err());
    assert!(g.parse_element("(1,1,1)").is_err());
    assert_eq!(
        Sequence::parse(g.clone(), "(0,0)"),
        Err(Error::ZeroElementRejected)
    );
    assert!(Sequence::parse(g, "(1,1)^0").is_err());
}
