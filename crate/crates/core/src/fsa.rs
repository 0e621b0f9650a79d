//! Finite automata: ε-NFAs, partial DFAs, determinization, minimization,
//! equivalence checking, bounded enumeration, and text/Graphviz export.
//!
//! Every automaton carries its alphabet explicitly as a sorted list of
//! [`Symbol`]s; labels are indices into that list. Missing DFA transitions
//! go to an implicit dead state.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::grammar::{Symbol, EPSILON_NAME};

pub type Label = usize;
pub type State = usize;

/// Default cap on subset states created by [`determinize`].
pub const DEFAULT_SUBSET_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Vec<Symbol>,
    num_states: usize,
    start: State,
    finals: BTreeSet<State>,
    /// `(src, label, dst)`; `None` is ε.
    transitions: BTreeSet<(State, Option<Label>, State)>,
}

impl Nfa {
    /// An automaton with one (start) state and no transitions.
    pub fn new(alphabet: impl IntoIterator<Item = Symbol>) -> Self {
        let mut alphabet: Vec<Symbol> = alphabet.into_iter().collect();
        alphabet.sort();
        alphabet.dedup();
        Nfa {
            alphabet,
            num_states: 1,
            start: 0,
            finals: BTreeSet::new(),
            transitions: BTreeSet::new(),
        }
    }

    pub fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    pub fn label_of(&self, s: &Symbol) -> Option<Label> {
        self.alphabet.binary_search(s).ok()
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn start(&self) -> State {
        self.start
    }

    pub fn finals(&self) -> &BTreeSet<State> {
        &self.finals
    }

    pub fn transitions(&self) -> &BTreeSet<(State, Option<Label>, State)> {
        &self.transitions
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.len()
    }

    pub fn add_state(&mut self) -> State {
        self.num_states += 1;
        self.num_states - 1
    }

    pub fn add_states(&mut self, n: usize) -> State {
        let first = self.num_states;
        self.num_states += n;
        first
    }

    pub fn set_start(&mut self, s: State) {
        assert!(s < self.num_states);
        self.start = s;
    }

    pub fn set_final(&mut self, s: State) {
        assert!(s < self.num_states);
        self.finals.insert(s);
    }

    pub fn add_transition(&mut self, src: State, label: Option<Label>, dst: State) {
        assert!(src < self.num_states && dst < self.num_states);
        if let Some(l) = label {
            assert!(l < self.alphabet.len());
        }
        self.transitions.insert((src, label, dst));
    }

    /// Adds a transition on symbol `s`, which must be in the alphabet.
    pub fn add_symbol_transition(&mut self, src: State, s: &Symbol, dst: State) {
        let l = self
            .label_of(s)
            .unwrap_or_else(|| panic!("symbol {s} is not in the automaton alphabet"));
        self.add_transition(src, Some(l), dst);
    }

    fn adjacency(&self) -> Adjacency {
        let mut eps = vec![Vec::new(); self.num_states];
        let mut sym = vec![Vec::new(); self.num_states];
        for &(s, l, d) in &self.transitions {
            match l {
                None => eps[s].push(d),
                Some(l) => sym[s].push((l, d)),
            }
        }
        (eps, sym)
    }

    fn eps_closure(eps: &[Vec<State>], set: &mut Vec<State>) {
        let mut mark = vec![false; eps.len()];
        for &s in set.iter() {
            mark[s] = true;
        }
        let mut work = set.clone();
        while let Some(s) = work.pop() {
            for &t in &eps[s] {
                if !mark[t] {
                    mark[t] = true;
                    set.push(t);
                    work.push(t);
                }
            }
        }
        set.sort_unstable();
    }

    /// Direct simulation with ε-closure. Unknown tokens reject.
    pub fn accepts<S: AsRef<str>>(&self, w: &[S]) -> bool {
        let (eps, sym) = self.adjacency();
        let mut current = vec![self.start];
        Self::eps_closure(&eps, &mut current);
        for tok in w {
            let Some(l) = self.label_of(&Symbol::t(tok.as_ref())) else {
                return false;
            };
            let mut next: Vec<State> = current
                .iter()
                .flat_map(|&s| sym[s].iter().filter(|(m, _)| *m == l).map(|(_, d)| *d))
                .collect();
            next.sort_unstable();
            next.dedup();
            Self::eps_closure(&eps, &mut next);
            if next.is_empty() {
                return false;
            }
            current = next;
        }
        current.iter().any(|s| self.finals.contains(s))
    }

    pub fn to_text(&self) -> String {
        write_text(
            &self.alphabet,
            self.num_states,
            self.start,
            self.finals.iter().copied(),
            self.transitions.iter().copied(),
        )
    }

    pub fn to_dot(&self) -> String {
        write_dot(
            &self.alphabet,
            self.num_states,
            self.start,
            &self.finals,
            self.transitions.iter().copied(),
        )
    }
}

/// ε-successors and labelled successors per state.
type Adjacency = (Vec<Vec<State>>, Vec<Vec<(Label, State)>>);

/// A deterministic automaton with a partial transition function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Vec<Symbol>,
    start: State,
    finals: Vec<bool>,
    /// Row-major `num_states × |alphabet|`.
    table: Vec<Option<State>>,
}

impl Dfa {
    /// The canonical automaton for the empty language over `alphabet`.
    pub fn empty(alphabet: impl IntoIterator<Item = Symbol>) -> Self {
        let mut alphabet: Vec<Symbol> = alphabet.into_iter().collect();
        alphabet.sort();
        alphabet.dedup();
        let width = alphabet.len();
        Dfa {
            alphabet,
            start: 0,
            finals: vec![false],
            table: vec![None; width],
        }
    }

    /// Builds a DFA from explicit transitions, checking determinism.
    pub fn from_parts(
        alphabet: impl IntoIterator<Item = Symbol>,
        num_states: usize,
        start: State,
        finals: impl IntoIterator<Item = State>,
        transitions: impl IntoIterator<Item = (State, Symbol, State)>,
    ) -> Result<Self> {
        let mut d = Dfa::empty(alphabet);
        d.finals = vec![false; num_states];
        d.table = vec![None; num_states * d.alphabet.len()];
        if start >= num_states {
            return Err(Error::Internal("start state out of range".into()));
        }
        d.start = start;
        for f in finals {
            *d.finals
                .get_mut(f)
                .ok_or_else(|| Error::Internal("final state out of range".into()))? = true;
        }
        let width = d.alphabet.len();
        for (s, sym, t) in transitions {
            let l = d
                .alphabet
                .binary_search(&sym)
                .map_err(|_| Error::Internal(format!("symbol {sym} not in alphabet")))?;
            if s >= num_states || t >= num_states {
                return Err(Error::Internal("transition state out of range".into()));
            }
            let cell = &mut d.table[s * width + l];
            if cell.is_some_and(|u| u != t) {
                return Err(Error::Internal(format!(
                    "nondeterministic transition from {s} on {sym}"
                )));
            }
            *cell = Some(t);
        }
        Ok(d)
    }

    pub fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    pub fn label_of(&self, s: &Symbol) -> Option<Label> {
        self.alphabet.binary_search(s).ok()
    }

    pub fn num_states(&self) -> usize {
        self.finals.len()
    }

    pub fn start(&self) -> State {
        self.start
    }

    pub fn is_final(&self, s: State) -> bool {
        self.finals[s]
    }

    pub fn finals(&self) -> impl Iterator<Item = State> + '_ {
        self.finals.iter().enumerate().filter(|(_, f)| **f).map(|(s, _)| s)
    }

    pub fn next(&self, s: State, l: Label) -> Option<State> {
        self.table[s * self.alphabet.len() + l]
    }

    /// All defined transitions in `(src, label, dst)` order.
    pub fn transitions(&self) -> impl Iterator<Item = (State, Label, State)> + '_ {
        let width = self.alphabet.len();
        self.table
            .iter()
            .enumerate()
            .filter_map(move |(i, t)| t.map(|t| (i / width, i % width, t)))
    }

    pub fn num_transitions(&self) -> usize {
        self.table.iter().filter(|t| t.is_some()).count()
    }

    pub fn accepts<S: AsRef<str>>(&self, w: &[S]) -> bool {
        let mut s = self.start;
        for tok in w {
            let Some(l) = self.label_of(&Symbol::t(tok.as_ref())) else {
                return false;
            };
            match self.next(s, l) {
                Some(t) => s = t,
                None => return false,
            }
        }
        self.finals[s]
    }

    /// Accepts a word given as symbols (terminals or pseudoterminals).
    pub fn accepts_symbols(&self, w: &[Symbol]) -> bool {
        let mut s = self.start;
        for x in w {
            match self.label_of(x).and_then(|l| self.next(s, l)) {
                Some(t) => s = t,
                None => return false,
            }
        }
        self.finals[s]
    }

    pub fn to_nfa(&self) -> Nfa {
        let mut n = Nfa::new(self.alphabet.iter().cloned());
        n.add_states(self.num_states() - 1);
        n.start = self.start;
        n.finals = self.finals().collect();
        n.transitions = self.transitions().map(|(s, l, t)| (s, Some(l), t)).collect();
        n
    }

    pub fn to_text(&self) -> String {
        write_text(
            &self.alphabet,
            self.num_states(),
            self.start,
            self.finals(),
            self.transitions().map(|(s, l, t)| (s, Some(l), t)),
        )
    }

    pub fn to_dot(&self) -> String {
        write_dot(
            &self.alphabet,
            self.num_states(),
            self.start,
            &self.finals().collect(),
            self.transitions().map(|(s, l, t)| (s, Some(l), t)),
        )
    }

    /// States reachable from the start that can also reach a final state.
    fn live_states(&self) -> Vec<bool> {
        let n = self.num_states();
        let width = self.alphabet.len();
        let mut reach = vec![false; n];
        reach[self.start] = true;
        let mut work = vec![self.start];
        let mut rev: Vec<Vec<State>> = vec![Vec::new(); n];
        while let Some(s) = work.pop() {
            for l in 0..width {
                if let Some(t) = self.next(s, l) {
                    rev[t].push(s);
                    if !reach[t] {
                        reach[t] = true;
                        work.push(t);
                    }
                }
            }
        }
        let mut co = vec![false; n];
        let mut work: Vec<State> = (0..n).filter(|&s| reach[s] && self.finals[s]).collect();
        for &s in &work {
            co[s] = true;
        }
        while let Some(s) = work.pop() {
            for &p in &rev[s] {
                if !co[p] {
                    co[p] = true;
                    work.push(p);
                }
            }
        }
        co
    }
}

/// Subset construction with the default state cap.
pub fn determinize(a: &Nfa) -> Result<Dfa> {
    determinize_with_limit(a, DEFAULT_SUBSET_LIMIT)
}

/// Subset construction. Subsets are discovered breadth-first from the
/// ε-closure of the start state, labels in alphabet order; the empty subset
/// is never materialized.
pub fn determinize_with_limit(a: &Nfa, limit: usize) -> Result<Dfa> {
    let (eps, sym) = a.adjacency();
    let width = a.alphabet.len();
    let mut start = vec![a.start];
    Nfa::eps_closure(&eps, &mut start);

    let mut index: HashMap<Vec<State>, State> = HashMap::new();
    let mut subsets: Vec<Vec<State>> = Vec::new();
    let mut table: Vec<Option<State>> = Vec::new();
    index.insert(start.clone(), 0);
    subsets.push(start);
    table.extend(std::iter::repeat_n(None, width));

    let mut buckets: Vec<Vec<State>> = vec![Vec::new(); width];
    let mut i = 0;
    while i < subsets.len() {
        for b in buckets.iter_mut() {
            b.clear();
        }
        for &s in &subsets[i] {
            for &(l, d) in &sym[s] {
                buckets[l].push(d);
            }
        }
        for l in 0..width {
            if buckets[l].is_empty() {
                continue;
            }
            let mut target = std::mem::take(&mut buckets[l]);
            target.sort_unstable();
            target.dedup();
            Nfa::eps_closure(&eps, &mut target);
            let id = match index.get(&target) {
                Some(&id) => id,
                None => {
                    if subsets.len() >= limit {
                        return Err(Error::SubsetLimit { limit });
                    }
                    let id = subsets.len();
                    index.insert(target.clone(), id);
                    subsets.push(target);
                    table.extend(std::iter::repeat_n(None, width));
                    id
                }
            };
            table[i * width + l] = Some(id);
        }
        i += 1;
    }
    let finals = subsets
        .iter()
        .map(|set| set.iter().any(|s| a.finals.contains(s)))
        .collect();
    Ok(Dfa {
        alphabet: a.alphabet.clone(),
        start: 0,
        finals,
        table,
    })
}

/// The minimal DFA for `L(d)`: unreachable and dead states removed, Moore
/// partition refinement, then canonical breadth-first renumbering with
/// labels in alphabet order.
pub fn minimize(d: &Dfa) -> Dfa {
    let live = d.live_states();
    if !live[d.start] {
        return Dfa::empty(d.alphabet.iter().cloned());
    }
    let width = d.alphabet.len();
    let states: Vec<State> = (0..d.num_states()).filter(|&s| live[s]).collect();
    let mut class = vec![usize::MAX; d.num_states()];
    for &s in &states {
        class[s] = usize::from(d.finals[s]);
    }
    let mut num_classes = states.iter().map(|&s| class[s]).collect::<BTreeSet<_>>().len();
    loop {
        let mut sigs: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut next_class = vec![usize::MAX; d.num_states()];
        for &s in &states {
            let mut sig = Vec::with_capacity(width + 1);
            sig.push(class[s]);
            for l in 0..width {
                sig.push(match d.next(s, l) {
                    Some(t) if live[t] => class[t],
                    _ => usize::MAX,
                });
            }
            let fresh = sigs.len();
            next_class[s] = *sigs.entry(sig).or_insert(fresh);
        }
        class = next_class;
        if sigs.len() == num_classes {
            break;
        }
        num_classes = sigs.len();
    }

    let mut rep: Vec<Option<State>> = vec![None; num_classes];
    for &s in &states {
        rep[class[s]].get_or_insert(s);
    }
    // canonical numbering
    let mut number: Vec<Option<State>> = vec![None; num_classes];
    let mut order: Vec<usize> = Vec::with_capacity(num_classes);
    number[class[d.start]] = Some(0);
    order.push(class[d.start]);
    let mut i = 0;
    while i < order.len() {
        let r = rep[order[i]].expect("class has a member");
        for l in 0..width {
            if let Some(t) = d.next(r, l).filter(|&t| live[t]) {
                let c = class[t];
                if number[c].is_none() {
                    number[c] = Some(order.len());
                    order.push(c);
                }
            }
        }
        i += 1;
    }
    let mut table = vec![None; order.len() * width];
    let mut finals = vec![false; order.len()];
    for (new, &c) in order.iter().enumerate() {
        let r = rep[c].expect("class has a member");
        finals[new] = d.finals[r];
        for l in 0..width {
            if let Some(t) = d.next(r, l).filter(|&t| live[t]) {
                table[new * width + l] = number[class[t]];
            }
        }
    }
    Dfa {
        alphabet: d.alphabet.clone(),
        start: 0,
        finals,
        table,
    }
}

/// Shortest word (lexicographically least among the shortest) on which the
/// two automata disagree, compared over the union of their alphabets.
pub fn shortest_difference(a: &Dfa, b: &Dfa) -> Option<Vec<String>> {
    let mut alphabet: Vec<Symbol> = a.alphabet.iter().chain(&b.alphabet).cloned().collect();
    alphabet.sort();
    alphabet.dedup();
    let la: Vec<Option<Label>> = alphabet.iter().map(|s| a.label_of(s)).collect();
    let lb: Vec<Option<Label>> = alphabet.iter().map(|s| b.label_of(s)).collect();

    type Pair = (Option<State>, Option<State>);
    let accepts = |p: Pair| (p.0.is_some_and(|s| a.finals[s]), p.1.is_some_and(|s| b.finals[s]));
    let start: Pair = (Some(a.start), Some(b.start));
    let mut parent: HashMap<Pair, Option<(Pair, usize)>> = HashMap::new();
    parent.insert(start, None);
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        let (fa, fb) = accepts(p);
        if fa != fb {
            let mut word = Vec::new();
            let mut cur = p;
            while let Some(Some((prev, l))) = parent.get(&cur) {
                word.push(alphabet[*l].name().to_string());
                cur = *prev;
            }
            word.reverse();
            return Some(word);
        }
        for (l, _) in alphabet.iter().enumerate() {
            let na = p.0.and_then(|s| la[l].and_then(|x| a.next(s, x)));
            let nb = p.1.and_then(|s| lb[l].and_then(|x| b.next(s, x)));
            if na.is_none() && nb.is_none() {
                continue;
            }
            let q = (na, nb);
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(q) {
                e.insert(Some((p, l)));
                queue.push_back(q);
            }
        }
    }
    None
}

/// Exact language equality.
pub fn equivalent(a: &Dfa, b: &Dfa) -> bool {
    shortest_difference(a, b).is_none()
}

/// Compares acceptance on every word of length at most `maxlen`; on
/// disagreement returns the shortest disagreeing word.
pub fn bounded_equivalent(a: &Dfa, b: &Dfa, maxlen: usize) -> Result<(), Vec<String>> {
    match shortest_difference(a, b) {
        Some(w) if w.len() <= maxlen => Err(w),
        _ => Ok(()),
    }
}

/// Every accepted word of length at most `maxlen`, shortest first, then
/// lexicographically by token.
pub fn enumerate_accepted(d: &Dfa, maxlen: usize) -> Vec<Vec<String>> {
    let n = d.num_states();
    let width = d.alphabet.len();
    // can[k][s]: some word of length exactly k leads from s to a final state
    let mut can = vec![d.finals.clone()];
    for k in 1..=maxlen {
        let prev = &can[k - 1];
        let row: Vec<bool> = (0..n)
            .map(|s| (0..width).any(|l| d.next(s, l).is_some_and(|t| prev[t])))
            .collect();
        can.push(row);
    }
    // label order by token text
    let mut labels: Vec<Label> = (0..width).collect();
    labels.sort_by(|&x, &y| d.alphabet[x].name().cmp(d.alphabet[y].name()).then(x.cmp(&y)));

    let mut out = Vec::new();
    let mut word: Vec<Label> = Vec::new();
    for len in 0..=maxlen {
        walk(d, &can, &labels, d.start, len, &mut word, &mut out);
    }
    return out;

    fn walk(
        d: &Dfa,
        can: &[Vec<bool>],
        labels: &[Label],
        s: State,
        remaining: usize,
        word: &mut Vec<Label>,
        out: &mut Vec<Vec<String>>,
    ) {
        if !can[remaining][s] {
            return;
        }
        if remaining == 0 {
            out.push(word.iter().map(|&l| d.alphabet[l].name().to_string()).collect());
            return;
        }
        for &l in labels {
            if let Some(t) = d.next(s, l) {
                word.push(l);
                walk(d, can, labels, t, remaining - 1, word, out);
                word.pop();
            }
        }
    }
}

fn label_text(alphabet: &[Symbol], l: Option<Label>) -> String {
    match l {
        None => EPSILON_NAME.to_string(),
        Some(l) => match &alphabet[l] {
            Symbol::Terminal(t) => t.clone(),
            Symbol::Nonterminal(n) => format!("#{n}"),
        },
    }
}

fn write_text(
    alphabet: &[Symbol],
    num_states: usize,
    start: State,
    finals: impl Iterator<Item = State>,
    transitions: impl Iterator<Item = (State, Option<Label>, State)>,
) -> String {
    let mut out = String::from("fsa 1\nalphabet");
    for l in 0..alphabet.len() {
        out.push(' ');
        out.push_str(&label_text(alphabet, Some(l)));
    }
    let _ = write!(out, "\nstates {num_states}\nstart {start}\nfinal");
    let finals: BTreeSet<State> = finals.collect();
    for f in finals {
        let _ = write!(out, " {f}");
    }
    out.push('\n');
    let trans: BTreeSet<(State, Option<Label>, State)> = transitions.collect();
    for (s, l, t) in trans {
        let _ = writeln!(out, "trans {s} {} {t}", label_text(alphabet, l));
    }
    out
}

fn write_dot(
    alphabet: &[Symbol],
    num_states: usize,
    start: State,
    finals: &BTreeSet<State>,
    transitions: impl Iterator<Item = (State, Option<Label>, State)>,
) -> String {
    let mut out = String::from("digraph fsa {\n  rankdir=LR;\n  __start [shape=point];\n");
    for s in 0..num_states {
        let shape = if finals.contains(&s) { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  {s} [shape={shape}];");
    }
    let _ = writeln!(out, "  __start -> {start};");
    let trans: BTreeSet<(State, Option<Label>, State)> = transitions.collect();
    for (s, l, t) in trans {
        let text = match l {
            None => "ε".to_string(),
            Some(_) => label_text(alphabet, l),
        };
        let escaped = text.replace('\\', "\\\\").replace('"', "\\\"");
        let _ = writeln!(out, "  {s} -> {t} [label=\"{escaped}\"];");
    }
    out.push_str("}\n");
    out
}

/// Parses the automaton text format into an NFA.
pub fn parse_text(text: &str) -> Result<Nfa> {
    let err = |line: usize, message: &str| Error::FsaFormat {
        line,
        message: message.to_string(),
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut expect = |key: &str| -> Result<(usize, Vec<&str>)> {
        let (no, line) = lines.next().ok_or_else(|| err(0, &format!("missing `{key}` line")))?;
        let mut words = line.split_whitespace();
        if words.next() != Some(key) {
            return Err(err(no, &format!("expected `{key}`")));
        }
        Ok((no, words.collect()))
    };
    let (no, version) = expect("fsa")?;
    if version != ["1"] {
        return Err(err(no, "unsupported version"));
    }
    let parse_label = |w: &str| -> Symbol {
        match w.strip_prefix('#') {
            Some(n) if !n.is_empty() => Symbol::nt(n),
            _ => Symbol::t(w),
        }
    };
    let (no, words) = expect("alphabet")?;
    if words.contains(&EPSILON_NAME) {
        return Err(err(no, "`eps` cannot be an alphabet symbol"));
    }
    let alphabet: Vec<Symbol> = words.iter().map(|w| parse_label(w)).collect();
    let num = |no: usize, w: &str| w.parse::<usize>().map_err(|_| err(no, "expected a number"));
    let (no, words) = expect("states")?;
    let [n] = words.as_slice() else {
        return Err(err(no, "expected one state count"));
    };
    let num_states = num(no, n)?;
    if num_states == 0 {
        return Err(err(no, "an automaton needs at least one state"));
    }
    let (no, words) = expect("start")?;
    let [s] = words.as_slice() else {
        return Err(err(no, "expected one start state"));
    };
    let start = num(no, s)?;
    let (no, words) = expect("final")?;
    let mut nfa = Nfa::new(alphabet);
    nfa.add_states(num_states - 1);
    if start >= num_states {
        return Err(err(no, "start state out of range"));
    }
    nfa.start = start;
    for w in words {
        let f = num(no, w)?;
        if f >= num_states {
            return Err(err(no, "final state out of range"));
        }
        nfa.finals.insert(f);
    }
    for (no, line) in lines {
        let words: Vec<&str> = line.split_whitespace().collect();
        let ["trans", s, l, t] = words.as_slice() else {
            return Err(err(no, "expected `trans src label dst`"));
        };
        let (s, t) = (num(no, s)?, num(no, t)?);
        if s >= num_states || t >= num_states {
            return Err(err(no, "transition state out of range"));
        }
        let label = if *l == EPSILON_NAME {
            None
        } else {
            Some(
                nfa.label_of(&parse_label(l))
                    .ok_or_else(|| err(no, "label not in alphabet"))?,
            )
        };
        nfa.transitions.insert((s, label, t));
    }
    Ok(nfa)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Symbol {
        Symbol::t(s)
    }

    /// a*b with a deliberately redundant copy of the a-loop state.
    fn astar_b_redundant() -> Dfa {
        Dfa::from_parts(
            [t("a"), t("b")],
            4,
            0,
            [2, 3],
            [(0, t("a"), 1), (1, t("a"), 0), (0, t("b"), 2), (1, t("b"), 3)],
        )
        .unwrap()
    }

    fn eps_a_plus_b_plus() -> Dfa {
        Dfa::from_parts(
            [t("a"), t("b")],
            3,
            0,
            [0, 2],
            [(0, t("a"), 1), (1, t("a"), 1), (1, t("b"), 2), (2, t("b"), 2)],
        )
        .unwrap()
    }

    #[test]
    fn epsilon_cycle_collapses() {
        let mut n = Nfa::new([t("a")]);
        let s1 = n.add_state();
        n.add_transition(0, None, s1);
        n.add_transition(s1, None, 0);
        n.add_transition(s1, Some(0), s1);
        n.set_final(0);
        let d = determinize(&n).unwrap();
        assert_eq!(d.num_states(), 1);
        assert!(d.accepts::<&str>(&[]));
        assert!(d.accepts(&["a", "a"]));
    }

    #[test]
    fn minimize_sizes() {
        assert_eq!(minimize(&astar_b_redundant()).num_states(), 2);
        assert_eq!(minimize(&eps_a_plus_b_plus()).num_states(), 3);
        let m = minimize(&astar_b_redundant());
        assert_eq!(minimize(&m), m);
    }

    #[test]
    fn minimize_empty_language() {
        let d = Dfa::from_parts([t("a")], 2, 0, [], [(0, t("a"), 1)]).unwrap();
        let m = minimize(&d);
        assert_eq!(m, Dfa::empty([t("a")]));
        assert!(enumerate_accepted(&m, 4).is_empty());
    }

    #[test]
    fn enumeration_order() {
        let d = minimize(&astar_b_redundant());
        assert_eq!(
            enumerate_accepted(&d, 3),
            vec![vec!["b"], vec!["a", "b"], vec!["a", "a", "b"]]
        );
    }

    #[test]
    fn difference_witness() {
        let a = minimize(&astar_b_redundant());
        assert!(equivalent(&a, &astar_b_redundant()));
        let w = shortest_difference(&a, &eps_a_plus_b_plus()).unwrap();
        assert_eq!(w, Vec::<String>::new());
        assert_eq!(bounded_equivalent(&a, &a, 10), Ok(()));
    }

    #[test]
    fn mismatched_alphabets() {
        let a = Dfa::from_parts([t("a")], 1, 0, [0], [(0, t("a"), 0)]).unwrap();
        let b = Dfa::from_parts([t("a"), t("b")], 1, 0, [0], [(0, t("a"), 0)]).unwrap();
        assert!(equivalent(&a, &b));
        let c = Dfa::from_parts([t("b")], 1, 0, [0], [(0, t("b"), 0)]).unwrap();
        assert_eq!(shortest_difference(&a, &c), Some(vec!["a".to_string()]));
    }

    #[test]
    fn text_round_trip() {
        let d = minimize(&eps_a_plus_b_plus());
        let text = d.to_text();
        assert_eq!(
            text,
            "fsa 1\nalphabet a b\nstates 3\nstart 0\nfinal 0 2\ntrans 0 a 1\ntrans 1 a 1\ntrans 1 b 2\ntrans 2 b 2\n"
        );
        let n = parse_text(&text).unwrap();
        assert_eq!(n, d.to_nfa());
        assert!(equivalent(&determinize(&n).unwrap(), &d));
    }

    #[test]
    fn text_rejects_garbage() {
        assert!(parse_text("fsa 2\n").is_err());
        assert!(parse_text("fsa 1\nalphabet a\nstates 1\nstart 0\nfinal\ntrans 0 z 0\n").is_err());
        assert!(parse_text("fsa 1\nalphabet a\nstates 1\nstart 3\nfinal\n").is_err());
    }

    #[test]
    fn nfa_simulation_and_dot() {
        let mut n = Nfa::new([t("a"), Symbol::nt("x")]);
        let f = n.add_state();
        n.add_transition(0, Some(0), 0);
        n.add_transition(0, None, f);
        n.set_final(f);
        assert!(n.accepts(&["a", "a"]));
        assert!(!n.accepts(&["x"]));
        let dot = n.to_dot();
        assert!(dot.contains("0 -> 1 [label=\"ε\"]"));
        assert!(dot.contains("1 [shape=doublecircle]"));
        assert!(n.to_text().contains("alphabet a #x"));
    }

    #[test]
    fn subset_limit() {
        let mut n = Nfa::new([t("a")]);
        let s = n.add_state();
        n.add_transition(0, Some(0), s);
        assert!(matches!(
            determinize_with_limit(&n, 1),
            Err(Error::SubsetLimit { limit: 1 })
        ));
    }
}
