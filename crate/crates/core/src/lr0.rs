//! LR(0) characteristic machine: dotted rules, closure, and the subset
//! construction over the augmented grammar.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::grammar::{Grammar, Rule, Symbol};

pub type StateId = usize;
pub type SymbolId = usize;

/// `rule` indexes the rules of the augmented grammar; rule 0 is `S' -> S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DottedRule {
    pub rule: usize,
    pub dot: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lr0State {
    pub id: StateId,
    /// Sorted, closed item set.
    pub items: Vec<DottedRule>,
}

/// Adds a fresh start symbol `S'` (the start name followed by enough primes
/// to be unused) with the single rule `S' -> S` placed first.
pub fn augment(g: &Grammar) -> (Grammar, String) {
    let mut name = format!("{}'", g.start());
    while g.nonterminals().contains(&name) || g.terminals().iter().any(|t| t.name() == name && !t.is_terminal()) {
        name.push('\'');
    }
    let mut rules = Vec::with_capacity(g.rules().len() + 1);
    rules.push(Rule::new(name.clone(), vec![Symbol::nt(g.start())]));
    rules.extend(g.rules().iter().cloned());
    let mut nonterminals = g.nonterminals().clone();
    nonterminals.insert(name.clone());
    let aug = Grammar::with_symbols(g.terminals().clone(), nonterminals, name.clone(), rules)
        .expect("augmenting a well-formed grammar");
    (aug, name)
}

/// The smallest superset of `items` that contains `B -> .γ` whenever it
/// contains `A -> α.Bβ` and `B -> γ` is a rule of `g`.
pub fn closure(g: &Grammar, items: &BTreeSet<DottedRule>) -> BTreeSet<DottedRule> {
    let mut out = items.clone();
    let mut work: Vec<DottedRule> = items.iter().copied().collect();
    while let Some(item) = work.pop() {
        let rhs = &g.rules()[item.rule].rhs;
        let Some(next) = rhs.get(item.dot) else { continue };
        if !g.is_nonterminal(next) {
            continue;
        }
        for (r, rule) in g.rules().iter().enumerate() {
            if rule.lhs == next.name() {
                let fresh = DottedRule { rule: r, dot: 0 };
                if out.insert(fresh) {
                    work.push(fresh);
                }
            }
        }
    }
    out
}

/// The deterministic LR(0) characteristic machine of a grammar.
///
/// States are numbered in breadth-first discovery order from the initial
/// state, exploring transitions in symbol order: input symbols first, then
/// nonterminals, each sorted by name.
#[derive(Debug, Clone)]
pub struct CharacteristicMachine {
    augmented: Grammar,
    symbols: Vec<Symbol>,
    symbol_ids: HashMap<Symbol, SymbolId>,
    is_nonterminal: Vec<bool>,
    rules: Vec<(SymbolId, Vec<SymbolId>)>,
    states: Vec<Lr0State>,
    delta: Vec<Vec<(SymbolId, StateId)>>,
    finals: BTreeSet<StateId>,
    completed: Vec<Vec<usize>>,
}

pub fn build_machine(g: &Grammar) -> CharacteristicMachine {
    let (augmented, _) = augment(g);

    let mut symbols: Vec<Symbol> = augmented.terminals().iter().cloned().collect();
    symbols.sort();
    let n_inputs = symbols.len();
    symbols.extend(augmented.nonterminals().iter().map(|n| Symbol::nt(n.clone())));
    let symbol_ids: HashMap<Symbol, SymbolId> = symbols.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let is_nonterminal: Vec<bool> = (0..symbols.len()).map(|i| i >= n_inputs).collect();
    let rules: Vec<(SymbolId, Vec<SymbolId>)> = augmented
        .rules()
        .iter()
        .map(|r| {
            (
                symbol_ids[&Symbol::nt(r.lhs.clone())],
                r.rhs.iter().map(|s| symbol_ids[s]).collect(),
            )
        })
        .collect();
    let mut by_lhs: Vec<Vec<usize>> = vec![Vec::new(); symbols.len()];
    for (i, (lhs, _)) in rules.iter().enumerate() {
        by_lhs[*lhs].push(i);
    }

    let close = |kernel: Vec<DottedRule>| -> Vec<DottedRule> {
        let mut seen: HashSet<DottedRule> = kernel.iter().copied().collect();
        let mut work = kernel.clone();
        let mut out = kernel;
        while let Some(item) = work.pop() {
            let Some(&next) = rules[item.rule].1.get(item.dot) else {
                continue;
            };
            if !is_nonterminal[next] {
                continue;
            }
            for &r in &by_lhs[next] {
                let fresh = DottedRule { rule: r, dot: 0 };
                if seen.insert(fresh) {
                    work.push(fresh);
                    out.push(fresh);
                }
            }
        }
        out.sort();
        out
    };

    let mut states: Vec<Lr0State> = Vec::new();
    let mut index: HashMap<Vec<DottedRule>, StateId> = HashMap::new();
    let mut delta: Vec<Vec<(SymbolId, StateId)>> = Vec::new();
    let s0 = close(vec![DottedRule { rule: 0, dot: 0 }]);
    index.insert(s0.clone(), 0);
    states.push(Lr0State { id: 0, items: s0 });
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let mut by_symbol: Vec<(SymbolId, Vec<DottedRule>)> = Vec::new();
        for item in &states[s].items {
            if let Some(&x) = rules[item.rule].1.get(item.dot) {
                let advanced = DottedRule {
                    rule: item.rule,
                    dot: item.dot + 1,
                };
                match by_symbol.iter_mut().find(|(y, _)| *y == x) {
                    Some((_, kernel)) => kernel.push(advanced),
                    None => by_symbol.push((x, vec![advanced])),
                }
            }
        }
        by_symbol.sort_by_key(|(x, _)| *x);
        let mut edges = Vec::with_capacity(by_symbol.len());
        for (x, kernel) in by_symbol {
            let items = close(kernel);
            let target = match index.get(&items) {
                Some(&t) => t,
                None => {
                    let id = states.len();
                    index.insert(items.clone(), id);
                    states.push(Lr0State { id, items });
                    queue.push_back(id);
                    id
                }
            };
            edges.push((x, target));
        }
        delta.resize(states.len().max(delta.len()), Vec::new());
        delta[s] = edges;
    }
    delta.resize(states.len(), Vec::new());

    let mut finals = BTreeSet::new();
    let mut completed = vec![Vec::new(); states.len()];
    for st in &states {
        for item in &st.items {
            if item.dot == rules[item.rule].1.len() {
                completed[st.id].push(item.rule);
                if item.rule == 0 {
                    finals.insert(st.id);
                }
            }
        }
    }

    CharacteristicMachine {
        augmented,
        symbols,
        symbol_ids,
        is_nonterminal,
        rules,
        states,
        delta,
        finals,
        completed,
    }
}

impl CharacteristicMachine {
    pub fn augmented(&self) -> &Grammar {
        &self.augmented
    }

    pub fn start(&self) -> StateId {
        0
    }

    pub fn states(&self) -> &[Lr0State] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol(&self, id: SymbolId) -> &Symbol {
        &self.symbols[id]
    }

    pub fn symbol_id(&self, s: &Symbol) -> Option<SymbolId> {
        self.symbol_ids.get(s).copied()
    }

    /// True for nonterminals of the (augmented) grammar; false for terminals
    /// and pseudoterminals.
    pub fn is_nonterminal(&self, id: SymbolId) -> bool {
        self.is_nonterminal[id]
    }

    /// Rule `r` of the augmented grammar as symbol ids.
    pub fn rule(&self, r: usize) -> (SymbolId, &[SymbolId]) {
        (self.rules[r].0, &self.rules[r].1)
    }

    pub fn num_rules(&self) -> usize {
        self.rules.len()
    }

    pub fn delta(&self, s: StateId, x: SymbolId) -> Option<StateId> {
        let row = &self.delta[s];
        row.binary_search_by_key(&x, |(y, _)| *y).ok().map(|i| row[i].1)
    }

    /// Outgoing transitions of `s`, sorted by symbol id.
    pub fn transitions(&self, s: StateId) -> &[(SymbolId, StateId)] {
        &self.delta[s]
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().map(Vec::len).sum()
    }

    /// Rules with a completed item in state `s`.
    pub fn completed(&self, s: StateId) -> &[usize] {
        &self.completed[s]
    }

    pub fn is_reducing(&self, s: StateId) -> bool {
        !self.completed[s].is_empty()
    }

    /// The kernel (items with a nonzero dot, plus `S' -> .S` for state 0).
    pub fn kernel(&self, s: StateId) -> Vec<DottedRule> {
        self.states[s]
            .items
            .iter()
            .copied()
            .filter(|i| i.dot > 0 || i.rule == 0)
            .collect()
    }

    pub fn item_text(&self, item: DottedRule) -> String {
        let (lhs, rhs) = self.rule(item.rule);
        let mut s = format!("{} ->", self.symbols[lhs]);
        for (i, x) in rhs.iter().enumerate() {
            if i == item.dot {
                s.push_str(" .");
            }
            let _ = write!(s, " {}", self.symbols[*x]);
        }
        if item.dot == rhs.len() {
            s.push_str(" .");
        }
        s
    }

    /// Stable text dump of states, items and transitions.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for st in &self.states {
            let fin = if self.finals.contains(&st.id) { " final" } else { "" };
            let _ = writeln!(out, "state {}{fin}", st.id);
            for item in &st.items {
                let _ = writeln!(out, "  {}", self.item_text(*item));
            }
            for (x, t) in &self.delta[st.id] {
                let _ = writeln!(out, "  on {} -> {}", self.symbols[*x], t);
            }
        }
        out
    }
}

/// Nondeterministic shift-reduce recognition driven by the machine's
/// transition function.
///
/// Runs are summarized rather than enumerated: an edge `(p, i) -> (q, j)`
/// records that from top state `p` at input position `i` the recognizer can
/// reach position `j` with exactly one more entry, `q`, above `p`. A
/// reduction by `A -> α` whose item `A -> .α` sits in `p` chains `|α|` such
/// edges along `δ(p, α)` and yields the edge to `δ(p, A)`. Every state has a
/// unique accessing symbol, so the chain is fixed by `p` and `α`.
pub fn recognize<S: AsRef<str>>(m: &CharacteristicMachine, w: &[S]) -> bool {
    let mut input = Vec::with_capacity(w.len());
    for tok in w {
        match m.symbol_id(&Symbol::t(tok.as_ref())) {
            Some(id) if !m.is_nonterminal(id) => input.push(id),
            _ => return false,
        }
    }
    let start_nt = m.rules[0].1[0];
    let Some(accept) = m.delta(0, start_nt) else {
        return false;
    };

    // a reduction in progress: rule, origin (state, position), symbols walked
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    struct Partial {
        rule: usize,
        origin: (StateId, usize),
        dot: usize,
    }
    enum Task {
        Activate(StateId, usize),
        Advance(Partial, StateId, usize),
        Edge((StateId, usize), (StateId, usize)),
    }

    let mut active: HashSet<(StateId, usize)> = HashSet::new();
    let mut edges: HashSet<((StateId, usize), (StateId, usize))> = HashSet::new();
    let mut edges_from: HashMap<(StateId, usize), Vec<(StateId, usize)>> = HashMap::new();
    let mut waiting: HashMap<(StateId, usize), Vec<Partial>> = HashMap::new();
    let mut seen: HashSet<(Partial, StateId, usize)> = HashSet::new();
    let mut tasks = vec![Task::Activate(0, 0)];

    while let Some(task) = tasks.pop() {
        match task {
            Task::Activate(s, i) => {
                if !active.insert((s, i)) {
                    continue;
                }
                if let Some(&x) = input.get(i) {
                    if let Some(t) = m.delta(s, x) {
                        tasks.push(Task::Edge((s, i), (t, i + 1)));
                    }
                }
                for item in &m.states[s].items {
                    if item.dot == 0 && item.rule != 0 {
                        let p = Partial {
                            rule: item.rule,
                            origin: (s, i),
                            dot: 0,
                        };
                        tasks.push(Task::Advance(p, s, i));
                    }
                }
            }
            Task::Advance(p, cur, j) => {
                if !seen.insert((p, cur, j)) {
                    continue;
                }
                let (lhs, rhs) = m.rule(p.rule);
                if p.dot == rhs.len() {
                    if let Some(t) = m.delta(p.origin.0, lhs) {
                        tasks.push(Task::Edge(p.origin, (t, j)));
                    }
                    continue;
                }
                let Some(next) = m.delta(cur, rhs[p.dot]) else {
                    continue;
                };
                waiting.entry((cur, j)).or_default().push(p);
                for &(q, k) in edges_from.get(&(cur, j)).into_iter().flatten() {
                    if q == next {
                        tasks.push(Task::Advance(Partial { dot: p.dot + 1, ..p }, q, k));
                    }
                }
            }
            Task::Edge(from, to) => {
                if !edges.insert((from, to)) {
                    continue;
                }
                edges_from.entry(from).or_default().push(to);
                tasks.push(Task::Activate(to.0, to.1));
                for &p in waiting.get(&from).into_iter().flatten() {
                    let (_, rhs) = m.rule(p.rule);
                    if m.delta(from.0, rhs[p.dot]) == Some(to.0) {
                        tasks.push(Task::Advance(Partial { dot: p.dot + 1, ..p }, to.0, to.1));
                    }
                }
            }
        }
    }
    edges.contains(&((0, 0), (accept, input.len())))
}
