use std::sync::Arc;

use proptest::prelude::*;
use zsl::classify::smooth_certificate_idx;
use zsl::{f_value, find_smooth_base, naive_sums_oracle, subsequence_sums, Group, Sequence};

fn group_strategy() -> impl Strategy<Value = Arc<Group>> {
    prop::collection::vec(2u64..=12, 1..=3)
        .prop_filter("order at most 256", |m| m.iter().product::<u64>() <= 256)
        .prop_map(|m| Arc::new(Group::new(&m).unwrap()))
}

/// A group plus up to `max_len` arbitrary terms (zero allowed).
fn seq_strategy(max_len: usize) -> impl Strategy<Value = Sequence> {
    group_strategy().prop_flat_map(move |g| {
        let n = g.order();
        prop::collection::vec(0..n, 0..=max_len).prop_map(move |terms| {
            Sequence::from_index_counts(g.clone(), terms.into_iter().map(|t| (t, 1)), true).unwrap()
        })
    })
}

fn zsf_strategy(max_len: usize) -> impl Strategy<Value = Sequence> {
    seq_strategy(max_len).prop_map(|s| {
        // keep the longest zero-sum free prefix
        let g = s.group().clone();
        let mut kept = Sequence::empty(g.clone());
        for t in s.to_indices() {
            if t == 0 {
                continue;
            }
            let next = kept
                .concat(&Sequence::from_indices(g.clone(), &[t]).unwrap())
                .unwrap();
            if subsequence_sums(&next).contains_zero() {
                break;
            }
            kept = next;
        }
        kept
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn mask_matches_oracle(s in seq_strategy(12)) {
        prop_assert_eq!(subsequence_sums(&s), naive_sums_oracle(&s).unwrap());
    }

    #[test]
    fn f_bounds(s in seq_strategy(14)) {
        let m = subsequence_sums(&s);
        let f = m.count();
        let n = s.len() as u32;
        prop_assert!((f as u64) < (1u64 << n));
        prop_assert!(f <= s.group().order());
        if !m.contains_zero() {
            prop_assert!(f < s.group().order());
            prop_assert!(f >= s.len());
        }
        if !s.is_empty() {
            prop_assert!(m.contains_idx(s.sigma_idx()));
        }
    }

    #[test]
    fn mask_grows_under_concat(s in seq_strategy(8), extra in 0usize..256) {
        let g = s.group().clone();
        let t = Sequence::from_index_counts(g.clone(), [(extra % g.order(), 1)], true).unwrap();
        let st = s.concat(&t).unwrap();
        prop_assert!(subsequence_sums(&s).is_subset_of(&subsequence_sums(&st)));
        prop_assert_eq!(st.len(), s.len() + 1);
        prop_assert_eq!(st.sigma_idx(), g.add_idx(s.sigma_idx(), extra % g.order()));
        prop_assert_eq!(st.remove_sub(&t).unwrap(), s);
    }

    #[test]
    fn superadditive_on_zero_sum_free(s in zsf_strategy(10), cut in 0usize..10) {
        let terms = s.to_indices();
        let cut = cut.min(terms.len());
        let g = s.group().clone();
        let left = Sequence::from_indices(g.clone(), &terms[..cut]).unwrap();
        let right = Sequence::from_indices(g, &terms[cut..]).unwrap();
        prop_assert!(f_value(&s) >= f_value(&left) + f_value(&right));
    }

    #[test]
    fn dropping_a_term_loses_a_sum(s in zsf_strategy(10)) {
        prop_assume!(!s.is_empty());
        let g = s.group().clone();
        for t in s.support_indices() {
            let one = Sequence::from_indices(g.clone(), &[t]).unwrap();
            let rest = s.remove_sub(&one).unwrap();
            prop_assert!(f_value(&rest) < f_value(&s));
        }
    }

    #[test]
    fn certificates_are_sound(s in zsf_strategy(10)) {
        let mask = subsequence_sums(&s);
        let g = s.group().clone();
        for base in s.support_indices() {
            if let Some(c) = smooth_certificate_idx(&s, &mask, base) {
                let be = g.element_at(base).unwrap();
                prop_assert_eq!(&c.base, &be);
                prop_assert_eq!(c.coefficients.len(), s.len());
                prop_assert_eq!(c.coefficients[0], 1);
                prop_assert_eq!(c.coefficients.iter().sum::<u64>(), c.n);
                prop_assert!(c.n < g.order_of_idx(base));
                let mut want: Vec<usize> = (1..=c.n).map(|t| g.scale_idx(t, base)).collect();
                want.sort_unstable();
                prop_assert_eq!(mask.indices(), want);
                let mut coeff_terms: Vec<usize> =
                    c.coefficients.iter().map(|&t| g.scale_idx(t, base)).collect();
                coeff_terms.sort_unstable();
                prop_assert_eq!(coeff_terms, s.to_indices());
            }
        }
        if let Some((_, c)) = find_smooth_base(&s) {
            prop_assert_eq!(mask.count() as u64, c.n);
        }
    }
}
