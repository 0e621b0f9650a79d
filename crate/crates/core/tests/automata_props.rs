mod common;

use common::{all_words, strategies};
use fsapprox::fsa::{determinize, equivalent, minimize, parse_text, shortest_difference, Dfa};
use proptest::prelude::*;

fn permuted(d: &Dfa, seed: &[usize]) -> Dfa {
    let n = d.num_states();
    let mut order: Vec<usize> = (0..n).collect();
    for (i, &k) in seed.iter().enumerate().take(n) {
        order.swap(i, k % n);
    }
    let alphabet = d.alphabet().to_vec();
    Dfa::from_parts(
        alphabet.clone(),
        n,
        order[d.start()],
        d.finals().map(|f| order[f]),
        d.transitions()
            .map(|(s, l, t)| (order[s], alphabet[l].clone(), order[t])),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn determinize_preserves_language(a in strategies::nfa()) {
        let d = determinize(&a).unwrap();
        for w in all_words(&["a", "b"], 7) {
            prop_assert_eq!(d.accepts(&w), a.accepts(&w), "{:?}", w);
        }
    }

    #[test]
    fn minimize_preserves_language_and_size(a in strategies::nfa()) {
        let d = determinize(&a).unwrap();
        let m = minimize(&d);
        prop_assert!(equivalent(&d, &m));
        prop_assert_eq!(shortest_difference(&d, &m), None);
        prop_assert!(m.num_states() <= d.num_states());
        for w in all_words(&["a", "b"], 6) {
            prop_assert_eq!(m.accepts(&w), a.accepts(&w), "{:?}", w);
        }
    }

    #[test]
    fn minimize_is_idempotent(a in strategies::nfa()) {
        let m = minimize(&determinize(&a).unwrap());
        prop_assert_eq!(minimize(&m), m);
    }

    #[test]
    fn minimal_automaton_ignores_state_numbering(
        a in strategies::nfa(),
        seed in proptest::collection::vec(0usize..64, 0..64),
    ) {
        let d = determinize(&a).unwrap();
        let p = permuted(&d, &seed);
        prop_assert!(equivalent(&d, &p));
        prop_assert_eq!(minimize(&p).to_text(), minimize(&d).to_text());
    }

    #[test]
    fn equal_languages_minimize_identically(a in strategies::nfa(), b in strategies::nfa()) {
        let ma = minimize(&determinize(&a).unwrap());
        let mb = minimize(&determinize(&b).unwrap());
        prop_assert_eq!(equivalent(&ma, &mb), ma.to_text() == mb.to_text());
        if let Some(w) = shortest_difference(&ma, &mb) {
            prop_assert_ne!(a.accepts(&w), b.accepts(&w));
        }
    }

    #[test]
    fn text_round_trip(a in strategies::nfa()) {
        let back = parse_text(&a.to_text()).unwrap();
        prop_assert_eq!(back.to_text(), a.to_text());
        let d = minimize(&determinize(&a).unwrap());
        let again = minimize(&determinize(&parse_text(&d.to_text()).unwrap()).unwrap());
        prop_assert_eq!(again, d);
    }
}
