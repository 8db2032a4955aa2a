use std::collections::BTreeSet;

use proptest::prelude::*;

use fibcube::words::{
    autocorrelation, bit_change_indices, bit_changes, canonical_rep, complement, contains_factor,
    is_prime_word, is_trivial_pair, orbit, representatives, reverse,
};
use fibcube::Word;

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    (1..=max_len).prop_flat_map(|k| {
        (0..=u32::MAX >> (32 - k)).prop_map(move |c| Word::from_code(c, k).unwrap())
    })
}

fn naive_contains(w: &str, f: &str) -> bool {
    w.contains(f)
}

/// Orbits under reversal and complementation, counted by Burnside's lemma.
fn burnside_orbits(k: u32) -> usize {
    let fixed_rev = 1usize << k.div_ceil(2);
    let fixed_rev_comp = if k.is_multiple_of(2) {
        1usize << (k / 2)
    } else {
        0
    };
    ((1usize << k) + fixed_rev + fixed_rev_comp) / 4
}

proptest! {
    #[test]
    fn complement_and_reverse_are_commuting_involutions(f in word(32)) {
        prop_assert_eq!(complement(&complement(&f)), f);
        prop_assert_eq!(reverse(&reverse(&f)), f);
        prop_assert_eq!(complement(&reverse(&f)), reverse(&complement(&f)));
    }

    #[test]
    fn text_round_trip(f in word(32)) {
        prop_assert_eq!(f.to_string().parse::<Word>().unwrap(), f);
        prop_assert_eq!(f.to_string().len(), f.len());
    }

    #[test]
    fn correlation_basics(f in word(24)) {
        let p = autocorrelation(&f);
        let k = f.len();
        prop_assert_eq!(p.coeffs().len(), k);
        prop_assert_eq!(p.coeffs()[0], 1);
        prop_assert_eq!(p.coeffs()[k - 1] == 1, f.first() == f.last());
        let all_ones = p.coeffs().iter().all(|&c| c == 1);
        prop_assert_eq!(all_ones, f == Word::zeros(k).unwrap() || f == Word::ones(k).unwrap());
        prop_assert_eq!(autocorrelation(&complement(&f)), p.clone());
        let at2 = p.eval_at_two();
        prop_assert!(at2 >= 1 && at2 < 1u64 << k);
        prop_assert_eq!(is_prime_word(&f), at2 == 1);
    }

    #[test]
    fn correlation_matches_string_scan(f in word(16)) {
        let s = f.to_string();
        let k = s.len();
        let expected: Vec<u8> = (0..k).map(|i| u8::from(s[i..] == s[..k - i])).collect();
        prop_assert_eq!(autocorrelation(&f).coeffs().to_vec(), expected);
    }

    #[test]
    fn block_counts(f in word(32)) {
        prop_assert_eq!(bit_changes(&f), bit_change_indices(&f).len());
        prop_assert_eq!(bit_changes(&reverse(&f)), bit_changes(&f));
        prop_assert_eq!(bit_changes(&complement(&f)), bit_changes(&f));
        for i in bit_change_indices(&f) {
            prop_assert!(i >= 2 && f.bit(i) != f.bit(i - 1));
        }
    }

    #[test]
    fn orbit_structure(f in word(20)) {
        let o = orbit(&f);
        prop_assert!(o.contains(&f));
        prop_assert!([2, 4].contains(&o.len()));
        let rep = canonical_rep(&f);
        prop_assert_eq!(rep, o[0]);
        prop_assert_eq!(canonical_rep(&rep), rep);
        for g in &o {
            prop_assert!(is_trivial_pair(&f, g));
            prop_assert_eq!(canonical_rep(g), rep);
        }
    }

    #[test]
    fn factor_search_matches_substring(w in word(20), f in word(6)) {
        prop_assert_eq!(contains_factor(&w, &f), naive_contains(&w.to_string(), &f.to_string()));
    }
}

#[test]
fn representatives_tile_the_words() {
    for k in 1..=14 {
        let reps = representatives(k).unwrap();
        assert_eq!(reps.len(), burnside_orbits(k as u32), "k = {k}");
        let mut seen = BTreeSet::new();
        let mut total = 0;
        for r in &reps {
            assert_eq!(canonical_rep(r), *r);
            let o = orbit(r);
            total += o.len();
            for w in o {
                assert!(seen.insert(w), "{w} covered twice");
            }
        }
        assert_eq!(total, 1 << k);
        for (i, a) in reps.iter().enumerate() {
            for b in &reps[i + 1..] {
                assert!(!is_trivial_pair(a, b));
            }
        }
    }
}

#[test]
fn order_is_lexicographic() {
    let mut ws: Vec<Word> = ["10", "0", "011", "01", "1", "001"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    ws.sort();
    let s: Vec<String> = ws.iter().map(Word::to_string).collect();
    assert_eq!(s, ["0", "001", "01", "011", "1", "10"]);
}
