//! Loop-collapsing stack congruence and the unfolded recognizer.
//!
//! A stack is a chained sequence of `⟨state, symbol⟩` pairs starting at the
//! initial state. A segment `⟨s1,X1⟩…⟨sk,Xk⟩` is a loop when
//! `δ(sk, Xk) = s1`; collapsing repeatedly deletes the leftmost minimal loop.
//! Two stacks at a state are congruent when they collapse to the same
//! uncollapsible stack, so each state splits into finitely many unfolded
//! states, one per uncollapsible stack.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::lr0::{CharacteristicMachine, StateId, SymbolId};

/// Default cap on the number of unfolded states.
pub const DEFAULT_MAX_UNFOLDED_STATES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StackEntry {
    pub state: StateId,
    pub symbol: SymbolId,
}

impl StackEntry {
    pub fn new(state: StateId, symbol: SymbolId) -> Self {
        StackEntry { state, symbol }
    }
}

/// An uncollapsible stack: chained from the initial state, with pairwise
/// distinct states, none equal to the arrival state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CanonicalStack(Vec<StackEntry>);

impl CanonicalStack {
    pub fn empty() -> Self {
        CanonicalStack(Vec::new())
    }

    pub fn entries(&self) -> &[StackEntry] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks the canonical-stack invariants against `m` and returns the
    /// arrival state.
    pub fn validate(&self, m: &CharacteristicMachine) -> Option<StateId> {
        let arrival = arrival(m, &self.0).ok()?;
        let mut seen = BTreeSet::new();
        for e in &self.0 {
            if !seen.insert(e.state) {
                return None;
            }
        }
        (!seen.contains(&arrival)).then_some(arrival)
    }
}

impl fmt::Display for CanonicalStack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for e in &self.0 {
            write!(f, "<{},{}>", e.state, e.symbol)?;
        }
        Ok(())
    }
}

/// Follows the stack from the initial state, returning the state it arrives at.
fn arrival(m: &CharacteristicMachine, entries: &[StackEntry]) -> Result<StateId> {
    let mut s = m.start();
    for (index, e) in entries.iter().enumerate() {
        if e.state != s {
            return Err(Error::UnchainedStack { index });
        }
        s = m.delta(s, e.symbol).ok_or(Error::UnchainedStack { index })?;
    }
    Ok(s)
}

/// Collapses a chained stack to its uncollapsible representative by
/// repeatedly removing the minimal loop with the leftmost start.
pub fn collapse(m: &CharacteristicMachine, entries: &[StackEntry]) -> Result<CanonicalStack> {
    arrival(m, entries)?;
    let mut stack = entries.to_vec();
    'outer: loop {
        for i in 0..stack.len() {
            for j in i..stack.len() {
                let after = m.delta(stack[j].state, stack[j].symbol).expect("chained");
                if after == stack[i].state {
                    stack.drain(i..=j);
                    continue 'outer;
                }
            }
        }
        return Ok(CanonicalStack(stack));
    }
}

/// Which stack congruence to unfold with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Congruence {
    /// One class per uncollapsible stack.
    LoopCollapsing,
    /// One class per state; unfolding is the identity.
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnfoldedState {
    pub base: StateId,
    /// Class representative. For the trivial congruence this is the first
    /// stack discovered for the state.
    pub stack: CanonicalStack,
}

#[derive(Debug, Clone)]
pub struct UnfoldedMachine<'m> {
    machine: &'m CharacteristicMachine,
    congruence: Congruence,
    states: Vec<UnfoldedState>,
    delta: Vec<Vec<(SymbolId, usize)>>,
    finals: BTreeSet<usize>,
}

impl<'m> UnfoldedMachine<'m> {
    pub fn machine(&self) -> &'m CharacteristicMachine {
        self.machine
    }

    pub fn congruence(&self) -> Congruence {
        self.congruence
    }

    pub fn states(&self) -> &[UnfoldedState] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn start(&self) -> usize {
        0
    }

    pub fn finals(&self) -> &BTreeSet<usize> {
        &self.finals
    }

    pub fn delta(&self, p: usize, x: SymbolId) -> Option<usize> {
        let row = &self.delta[p];
        row.binary_search_by_key(&x, |(y, _)| *y).ok().map(|i| row[i].1)
    }

    pub fn transitions(&self, p: usize) -> &[(SymbolId, usize)] {
        &self.delta[p]
    }

    /// Follows `path` from `p`.
    pub fn walk(&self, mut p: usize, path: &[SymbolId]) -> Option<usize> {
        for &x in path {
            p = self.delta(p, x)?;
        }
        Some(p)
    }
}

/// Unfolds with the loop-collapsing congruence and the default state cap.
pub fn unfold(m: &CharacteristicMachine) -> Result<UnfoldedMachine<'_>> {
    unfold_with(m, Congruence::LoopCollapsing, DEFAULT_MAX_UNFOLDED_STATES)
}

/// Builds the unfolded recognizer breadth-first from `⟨s0, ε⟩`.
///
/// For the loop-collapsing congruence, `δ≡(⟨s,σ⟩, X) = ⟨s', C(σ⟨s,X⟩)⟩`
/// with `s' = δ(s,X)`. Because `σ` is uncollapsible, the only possible loop
/// in `σ⟨s,X⟩` is the suffix starting at the entry whose state is `s'`, so
/// the collapse is either the extension itself or a prefix of `σ`.
pub fn unfold_with(
    m: &CharacteristicMachine,
    congruence: Congruence,
    max_states: usize,
) -> Result<UnfoldedMachine<'_>> {
    let mut states: Vec<UnfoldedState> = vec![UnfoldedState {
        base: m.start(),
        stack: CanonicalStack::empty(),
    }];
    let mut index: HashMap<(StateId, CanonicalStack), usize> = HashMap::new();
    let mut trivial_index: HashMap<StateId, usize> = HashMap::new();
    match congruence {
        Congruence::LoopCollapsing => {
            index.insert((m.start(), CanonicalStack::empty()), 0);
        }
        Congruence::Trivial => {
            trivial_index.insert(m.start(), 0);
        }
    }
    let mut per_base: HashMap<StateId, usize> = HashMap::from([(m.start(), 1)]);
    let mut delta: Vec<Vec<(SymbolId, usize)>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);

    while let Some(p) = queue.pop_front() {
        let UnfoldedState { base, stack } = states[p].clone();
        let mut edges = Vec::with_capacity(m.transitions(base).len());
        for &(x, target) in m.transitions(base) {
            let q = match congruence {
                Congruence::Trivial => match trivial_index.get(&target) {
                    Some(&q) => q,
                    None => {
                        let mut next = stack.0.clone();
                        next.push(StackEntry::new(base, x));
                        let q = states.len();
                        states.push(UnfoldedState {
                            base: target,
                            stack: collapse(m, &next)?,
                        });
                        trivial_index.insert(target, q);
                        queue.push_back(q);
                        q
                    }
                },
                Congruence::LoopCollapsing => {
                    let next = if target == base {
                        stack.clone()
                    } else if let Some(i) = stack.0.iter().position(|e| e.state == target) {
                        CanonicalStack(stack.0[..i].to_vec())
                    } else {
                        let mut v = stack.0.clone();
                        v.push(StackEntry::new(base, x));
                        CanonicalStack(v)
                    };
                    let key = (target, next);
                    match index.get(&key) {
                        Some(&q) => q,
                        None => {
                            if states.len() >= max_states {
                                let (&state, &classes) = per_base
                                    .iter()
                                    .max_by_key(|(s, c)| (**c, std::cmp::Reverse(**s)))
                                    .expect("nonempty");
                                let kernel = m
                                    .kernel(state)
                                    .into_iter()
                                    .map(|i| m.item_text(i))
                                    .collect::<Vec<_>>()
                                    .join("; ");
                                return Err(Error::UnfoldLimit {
                                    limit: max_states,
                                    state,
                                    kernel,
                                    classes,
                                });
                            }
                            let q = states.len();
                            *per_base.entry(target).or_default() += 1;
                            states.push(UnfoldedState {
                                base: key.0,
                                stack: key.1.clone(),
                            });
                            index.insert(key, q);
                            queue.push_back(q);
                            q
                        }
                    }
                }
            };
            edges.push((x, q));
        }
        if delta.len() <= p {
            delta.resize(p + 1, Vec::new());
        }
        delta[p] = edges;
    }
    delta.resize(states.len(), Vec::new());
    let finals = states
        .iter()
        .enumerate()
        .filter(|(_, u)| m.finals().contains(&u.base))
        .map(|(i, _)| i)
        .collect();
    Ok(UnfoldedMachine {
        machine: m,
        congruence,
        states,
        delta,
        finals,
    })
}

/// The uncollapsible stacks associated with each reachable state.
pub fn enumerate_stacks(m: &CharacteristicMachine) -> BTreeMap<StateId, BTreeSet<CanonicalStack>> {
    let u = unfold_with(m, Congruence::LoopCollapsing, usize::MAX).expect("no cap");
    let mut out: BTreeMap<StateId, BTreeSet<CanonicalStack>> = BTreeMap::new();
    for s in u.states {
        out.entry(s.base).or_default().insert(s.stack);
    }
    out
}
