//! Flattening: drop the stack of an unfolded recognizer, keep its input-symbol
//! shifts, and turn every reduction into an ε-transition to its Pop target.

use std::collections::BTreeSet;

use crate::fsa::Nfa;
use crate::unfold::UnfoldedMachine;

/// `Pop(p)` for every unfolded state `p`: the states reachable from `p` by
/// one reduce move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopTable(Vec<BTreeSet<usize>>);

impl PopTable {
    pub fn get(&self, p: usize) -> &BTreeSet<usize> {
        &self.0[p]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BTreeSet<usize>)> {
        self.0.iter().enumerate()
    }
}

/// For each state `p''` and each item `A -> .α` in it, walks `α` from `p''`;
/// if the walk ends in `p` and `δ≡(p'', A)` is defined, that target joins
/// `Pop(p)`. The walk's endpoint always holds `A -> α.` by construction of
/// the characteristic machine.
pub fn pop_table(u: &UnfoldedMachine<'_>) -> PopTable {
    let m = u.machine();
    let mut pop = vec![BTreeSet::new(); u.num_states()];
    for (origin, state) in u.states().iter().enumerate() {
        for item in &m.states()[state.base].items {
            if item.dot != 0 {
                continue;
            }
            let (lhs, rhs) = m.rule(item.rule);
            let Some(after_reduce) = u.delta(origin, lhs) else {
                continue;
            };
            if let Some(end) = u.walk(origin, rhs) {
                debug_assert!(m.completed(u.states()[end].base).contains(&item.rule));
                pop[end].insert(after_reduce);
            }
        }
    }
    PopTable(pop)
}

/// The flattening as an NFA over the grammar's input symbols (terminals and
/// pseudoterminals), with the same states, start and finals as `u`.
pub fn flatten(u: &UnfoldedMachine<'_>) -> Nfa {
    flatten_with(u, &pop_table(u))
}

pub fn flatten_with(u: &UnfoldedMachine<'_>, pop: &PopTable) -> Nfa {
    let m = u.machine();
    let inputs: Vec<_> = (0..m.symbols().len()).filter(|&x| !m.is_nonterminal(x)).collect();
    let mut nfa = Nfa::new(inputs.iter().map(|&x| m.symbol(x).clone()));
    nfa.add_states(u.num_states() - 1);
    nfa.set_start(u.start());
    for &f in u.finals() {
        nfa.set_final(f);
    }
    // lr0 orders input symbols first, sorted, so symbol id == label here
    for p in 0..u.num_states() {
        for &(x, q) in u.transitions(p) {
            if !m.is_nonterminal(x) {
                debug_assert_eq!(nfa.label_of(m.symbol(x)), Some(x));
                nfa.add_transition(p, Some(x), q);
            }
        }
        for &q in pop.get(p) {
            nfa.add_transition(p, None, q);
        }
    }
    nfa
}
