use proptest::prelude::*;
use richbound::eertree::{is_rich, palindromic_factors_naive, Letter, PalTree, Word};

fn word(q: u32, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..q, 0..=max_len).prop_map(|v| Word::from_indices(&v))
}

fn qword(max_len: usize) -> impl Strategy<Value = (u32, Word)> {
    (1u32..=3).prop_flat_map(move |q| (Just(q), word(q, max_len)))
}

#[test]
fn exhaustive_small_words() {
    for q in 1..=3u32 {
        let max_len = if q == 3 { 8 } else { 12 };
        for n in 0..=max_len {
            let total = (q as u64).pow(n as u32);
            for mut code in 0..total {
                let mut v = Vec::with_capacity(n);
                for _ in 0..n {
                    v.push((code % q as u64) as u32);
                    code /= q as u64;
                }
                let w = Word::from_indices(&v);
                let mut t = PalTree::new(q).unwrap();
                t.extend(&w).unwrap();
                assert_eq!(t.pal_count(), palindromic_factors_naive(&w).len(), "{w}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn count_matches_oracle((q, w) in qword(12)) {
        let mut t = PalTree::new(q).unwrap();
        t.extend(&w).unwrap();
        prop_assert_eq!(t.pal_count(), palindromic_factors_naive(&w).len());
        prop_assert_eq!(is_rich(&w), palindromic_factors_naive(&w).len() == w.len());
    }

    #[test]
    fn each_push_adds_at_most_one((q, w) in qword(40)) {
        let mut t = PalTree::new(q).unwrap();
        let mut before = 0;
        for &c in w.letters() {
            let created = t.push(c).unwrap();
            let after = t.pal_count();
            prop_assert!(after - before <= 1);
            prop_assert_eq!(created, after == before + 1);
            before = after;
        }
    }

    #[test]
    fn prefixes_of_rich_words_are_rich((_, w) in qword(16)) {
        if is_rich(&w) {
            for k in 0..w.len() {
                prop_assert!(is_rich(&Word::new(w.letters()[..k].to_vec())));
            }
        }
    }

    #[test]
    fn push_pop_round_trip((q, w) in qword(12), (_, tail) in qword(12)) {
        let tail = Word::new(tail.letters().iter().map(|l| Letter(l.0 % q)).collect());
        let mut t = PalTree::new(q).unwrap();
        t.extend(&w).unwrap();
        let count = t.pal_count();
        let lens = t.palindrome_lengths();
        let suffix = t.longest_pal_suffix();
        t.extend(&tail).unwrap();
        for _ in 0..tail.len() {
            t.pop().unwrap();
        }
        prop_assert_eq!(t.pal_count(), count);
        prop_assert_eq!(t.palindrome_lengths(), lens);
        prop_assert_eq!(t.longest_pal_suffix(), suffix);
        prop_assert_eq!(t.word(), w.clone());
        // and it keeps working afterwards
        t.extend(&tail).unwrap();
        let mut fresh = PalTree::new(q).unwrap();
        fresh.extend(&w).unwrap();
        fresh.extend(&tail).unwrap();
        prop_assert_eq!(t.palindrome_lengths(), fresh.palindrome_lengths());
    }

    #[test]
    fn full_unwind_matches_fresh_tree((q, w) in qword(12)) {
        let mut t = PalTree::new(q).unwrap();
        t.extend(&w).unwrap();
        for _ in 0..w.len() {
            t.pop().unwrap();
        }
        prop_assert!(t.pop().is_err());
        prop_assert_eq!(t.pal_count(), 0);
        prop_assert_eq!(t.word_len(), 0);
        let probe = Word::from_indices(&[0, 0, 0]);
        let mut fresh = PalTree::new(q).unwrap();
        fresh.extend(&probe).unwrap();
        t.extend(&probe).unwrap();
        prop_assert_eq!(t.palindrome_lengths(), fresh.palindrome_lengths());
    }

    #[test]
    fn renaming_letters_preserves_count(w in word(3, 16), perm in Just([0u32, 1, 2]).prop_shuffle()) {
        let renamed = Word::new(w.letters().iter().map(|l| Letter(perm[l.0 as usize])).collect());
        let mut a = PalTree::new(3).unwrap();
        let mut b = PalTree::new(3).unwrap();
        a.extend(&w).unwrap();
        b.extend(&renamed).unwrap();
        prop_assert_eq!(a.pal_count(), b.pal_count());
        prop_assert_eq!(is_rich(&w), is_rich(&renamed));
    }

    #[test]
    fn reversal_preserves_count(w in word(3, 16)) {
        let rev = Word::new(w.letters().iter().rev().copied().collect());
        prop_assert_eq!(palindromic_factors_naive(&w).len(), palindromic_factors_naive(&rev).len());
        let mut a = PalTree::new(3).unwrap();
        a.extend(&rev).unwrap();
        prop_assert_eq!(a.pal_count(), palindromic_factors_naive(&w).len());
    }
}

#[test]
fn rejects_letters_outside_alphabet() {
    let mut t = PalTree::new(2).unwrap();
    assert!(t.push(Letter(2)).is_err());
    assert!(PalTree::new(0).is_err());
    assert!(Word::parse("abz", 3).is_err());
}
