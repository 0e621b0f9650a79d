//! Grammar decomposition into strongly connected components, per-component
//! approximation, recombination, and the end-to-end compile driver.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::flatten::flatten;
use crate::fsa::{determinize_with_limit, minimize, Dfa, Nfa, State, DEFAULT_SUBSET_LIMIT};
use crate::grammar::{prune, Grammar, Rule, Symbol};
use crate::lr0::build_machine;
use crate::unfold::{unfold_with, Congruence, DEFAULT_MAX_UNFOLDED_STATES};

/// `conn(G)`: an edge `X -> Y` whenever `Y` occurs in a rule for `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnGraph {
    edges: BTreeMap<String, BTreeSet<String>>,
}

impl ConnGraph {
    pub fn new(g: &Grammar) -> Self {
        let mut edges: BTreeMap<String, BTreeSet<String>> =
            g.nonterminals().iter().map(|n| (n.clone(), BTreeSet::new())).collect();
        for r in g.rules() {
            for s in &r.rhs {
                if g.is_nonterminal(s) {
                    edges.get_mut(&r.lhs).unwrap().insert(s.name().to_string());
                }
            }
        }
        ConnGraph { edges }
    }

    pub fn nodes(&self) -> impl Iterator<Item = &str> {
        self.edges.keys().map(String::as_str)
    }

    pub fn successors(&self, x: &str) -> impl Iterator<Item = &str> {
        self.edges.get(x).into_iter().flatten().map(String::as_str)
    }

    pub fn num_edges(&self) -> usize {
        self.edges.values().map(BTreeSet::len).sum()
    }
}

/// A maximal set of mutually recursive nonterminals with its rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub id: usize,
    pub members: BTreeSet<String>,
    /// `prod(X)`, in grammar order.
    pub rules: Vec<Rule>,
    /// `rhs(X) - comp(X)`: nonterminals of other components used here.
    pub pseudoterminals: BTreeSet<String>,
    /// The member at which the component was discovered.
    pub start: String,
}

/// Strongly connected components of `conn(g)`, each component listed after
/// every component it depends on.
pub fn components(g: &Grammar) -> Vec<Component> {
    let conn = ConnGraph::new(g);
    let mut t = Tarjan {
        conn: &conn,
        index: BTreeMap::new(),
        low: BTreeMap::new(),
        on_stack: BTreeSet::new(),
        stack: Vec::new(),
        next: 0,
        found: Vec::new(),
    };
    // the start first, so its component's representative is the start
    let order = std::iter::once(g.start()).chain(conn.nodes());
    for x in order {
        if !t.index.contains_key(x) {
            t.visit(x);
        }
    }
    t.found
        .into_iter()
        .enumerate()
        .map(|(id, (start, members))| {
            let rules: Vec<Rule> = g.rules().iter().filter(|r| members.contains(&r.lhs)).cloned().collect();
            let pseudoterminals = rules
                .iter()
                .flat_map(|r| r.rhs.iter())
                .filter(|s| g.is_nonterminal(s) && !members.contains(s.name()))
                .map(|s| s.name().to_string())
                .collect();
            Component {
                id,
                members,
                rules,
                pseudoterminals,
                start,
            }
        })
        .collect()
}

struct Tarjan<'a> {
    conn: &'a ConnGraph,
    index: BTreeMap<&'a str, usize>,
    low: BTreeMap<&'a str, usize>,
    on_stack: BTreeSet<&'a str>,
    stack: Vec<&'a str>,
    next: usize,
    found: Vec<(String, BTreeSet<String>)>,
}

impl<'a> Tarjan<'a> {
    fn visit(&mut self, x: &'a str) {
        self.index.insert(x, self.next);
        self.low.insert(x, self.next);
        self.next += 1;
        self.stack.push(x);
        self.on_stack.insert(x);
        for y in self.conn.successors(x) {
            if !self.index.contains_key(y) {
                self.visit(y);
                let ly = self.low[y];
                let lx = self.low.get_mut(x).unwrap();
                *lx = (*lx).min(ly);
            } else if self.on_stack.contains(y) {
                let iy = self.index[y];
                let lx = self.low.get_mut(x).unwrap();
                *lx = (*lx).min(iy);
            }
        }
        if self.low[x] == self.index[x] {
            let mut members = BTreeSet::new();
            loop {
                let y = self.stack.pop().unwrap();
                self.on_stack.remove(y);
                members.insert(y.to_string());
                if y == x {
                    break;
                }
            }
            self.found.push((x.to_string(), members));
        }
    }
}

/// `def(x)`: start `x`, the component's rules, and the full terminal
/// alphabet plus the component's pseudoterminals as input symbols.
pub fn defining_subgrammar(g: &Grammar, c: &Component, x: &str) -> Grammar {
    assert!(c.members.contains(x), "`{x}` is not a member of component {}", c.id);
    let mut terminals = g.terminals().clone();
    terminals.extend(c.pseudoterminals.iter().map(|p| Symbol::nt(p.clone())));
    Grammar::with_symbols(terminals, c.members.clone(), x, c.rules.clone())
        .expect("a component of a well-formed grammar is well-formed")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Linearity {
    LeftLinear,
    RightLinear,
    Neither,
}

impl fmt::Display for Linearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Linearity::LeftLinear => "left-linear",
            Linearity::RightLinear => "right-linear",
            Linearity::Neither => "nonlinear",
        })
    }
}

/// Right-linear wins when both shapes hold.
pub fn classify_linearity(g: &Grammar) -> Linearity {
    let (mut left, mut right) = (true, true);
    for r in g.rules() {
        let nts: Vec<usize> = (0..r.rhs.len()).filter(|&i| g.is_nonterminal(&r.rhs[i])).collect();
        match nts.as_slice() {
            [] => {}
            [i] => {
                left &= *i == 0;
                right &= *i == r.rhs.len() - 1;
            }
            _ => return Linearity::Neither,
        }
    }
    if right {
        Linearity::RightLinear
    } else if left {
        Linearity::LeftLinear
    } else {
        Linearity::Neither
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompileOptions {
    pub decompose: bool,
    pub unfold: bool,
    pub minimize: bool,
    pub max_unfolded_states: usize,
    pub max_subset_states: usize,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            decompose: true,
            unfold: true,
            minimize: true,
            max_unfolded_states: DEFAULT_MAX_UNFOLDED_STATES,
            max_subset_states: DEFAULT_SUBSET_LIMIT,
        }
    }
}

/// `aut(X)`: a DFA over the terminals and pseudoterminals of `def(X)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubAutomaton {
    pub owner: String,
    pub fsa: Dfa,
}

/// Sizes recorded while approximating one grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxStats {
    pub owner: String,
    pub linearity: Linearity,
    pub lr0_states: usize,
    pub unfolded_states: usize,
    pub unfolding_skipped: bool,
    pub nfa_states: usize,
    pub nfa_transitions: usize,
    pub dfa_states: usize,
    pub dfa_transitions: usize,
}

/// LR(0) machine, unfolding (or the trivial congruence), flattening.
fn approximate_nfa(g: &Grammar, congruence: Congruence, max_states: usize) -> Result<(Nfa, usize, usize)> {
    let m = build_machine(g);
    let u = unfold_with(&m, congruence, max_states)?;
    Ok((flatten(&u), m.num_states(), u.num_states()))
}

/// Approximates a defining subgrammar by a minimal DFA. Right-linear
/// subgrammars are flattened without unfolding.
pub fn approximate_component(sub: &Grammar, opts: &CompileOptions) -> Result<SubAutomaton> {
    approximate_component_with_stats(sub, opts).map(|(a, _)| a)
}

pub fn approximate_component_with_stats(sub: &Grammar, opts: &CompileOptions) -> Result<(SubAutomaton, ApproxStats)> {
    let linearity = classify_linearity(sub);
    let skip = !opts.unfold || linearity == Linearity::RightLinear;
    let congruence = if skip {
        Congruence::Trivial
    } else {
        Congruence::LoopCollapsing
    };
    let (nfa, lr0_states, unfolded_states) = approximate_nfa(sub, congruence, opts.max_unfolded_states)?;
    let dfa = minimize(&determinize_with_limit(&nfa, opts.max_subset_states)?);
    let stats = ApproxStats {
        owner: sub.start().to_string(),
        linearity,
        lr0_states,
        unfolded_states: if skip { 0 } else { unfolded_states },
        unfolding_skipped: skip,
        nfa_states: nfa.num_states(),
        nfa_transitions: nfa.num_transitions(),
        dfa_states: dfa.num_states(),
        dfa_transitions: dfa.num_transitions(),
    };
    Ok((
        SubAutomaton {
            owner: sub.start().to_string(),
            fsa: dfa,
        },
        stats,
    ))
}

/// Expands `aut(root)` into an NFA over `alphabet`: every transition on a
/// pseudoterminal `X` becomes ε-edges into and out of a fresh copy of
/// `aut(X)`, recursively.
pub fn recombine(subs: &BTreeMap<String, SubAutomaton>, root: &str, alphabet: &[Symbol]) -> Result<Nfa> {
    let mut nfa = Nfa::new(alphabet.iter().cloned());
    let (start, finals) = splice(&mut nfa, subs, root)?;
    nfa.add_transition(nfa.start(), None, start);
    for f in finals {
        nfa.set_final(f);
    }
    Ok(nfa)
}

fn splice(nfa: &mut Nfa, subs: &BTreeMap<String, SubAutomaton>, x: &str) -> Result<(State, Vec<State>)> {
    let aut = &subs
        .get(x)
        .ok_or_else(|| Error::Internal(format!("no subautomaton for `{x}`")))?
        .fsa;
    let base = nfa.add_states(aut.num_states());
    for (s, l, t) in aut.transitions() {
        let sym = &aut.alphabet()[l];
        match sym {
            Symbol::Nonterminal(n) if subs.contains_key(n) => {
                let (inner, inner_finals) = splice(nfa, subs, n)?;
                nfa.add_transition(base + s, None, inner);
                for f in inner_finals {
                    nfa.add_transition(f, None, base + t);
                }
            }
            _ => {
                let l = nfa
                    .label_of(sym)
                    .ok_or_else(|| Error::Internal(format!("symbol {sym} missing from the output alphabet")))?;
                nfa.add_transition(base + s, Some(l), base + t);
            }
        }
    }
    Ok((base + aut.start(), aut.finals().map(|f| base + f).collect()))
}

/// Sizes and timings for one run of [`compile_with_report`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CompileReport {
    pub input_nonterminals: usize,
    pub input_rules: usize,
    pub pruned_nonterminals: usize,
    pub pruned_rules: usize,
    pub num_components: usize,
    pub approximations: Vec<ApproxStats>,
    pub recombined_states: usize,
    pub recombined_transitions: usize,
    pub dfa_states: usize,
    pub dfa_transitions: usize,
    pub timings: Vec<(&'static str, Duration)>,
    pub warnings: Vec<String>,
}

impl CompileReport {
    pub fn lr0_states(&self) -> usize {
        self.approximations.iter().map(|a| a.lr0_states).sum()
    }

    pub fn unfolded_states(&self) -> usize {
        self.approximations.iter().map(|a| a.unfolded_states).sum()
    }

    /// States and transitions of the flattened automata, before
    /// determinization.
    pub fn flattened_size(&self) -> (usize, usize) {
        self.approximations
            .iter()
            .fold((0, 0), |(s, t), a| (s + a.nfa_states, t + a.nfa_transitions))
    }
}

/// The full pipeline with default reporting discarded.
pub fn compile(g: &Grammar, opts: &CompileOptions) -> Result<Dfa> {
    compile_with_report(g, opts).map(|(d, _)| d)
}

/// Prune, decompose, approximate each needed `def(X)`, recombine,
/// determinize and minimize. The result's alphabet is `g`'s input alphabet.
pub fn compile_with_report(g: &Grammar, opts: &CompileOptions) -> Result<(Dfa, CompileReport)> {
    let mut report = CompileReport {
        input_nonterminals: g.nonterminals().len(),
        input_rules: g.rules().len(),
        ..Default::default()
    };
    let alphabet: Vec<Symbol> = g.terminals().iter().cloned().collect();

    let clock = Instant::now();
    let pruned = prune(g);
    report.timings.push(("prune", clock.elapsed()));
    report.warnings.extend(pruned.warnings.iter().cloned());
    let g = &pruned.grammar;
    report.pruned_nonterminals = g.nonterminals().len();
    report.pruned_rules = g.rules().len();
    if pruned.is_empty_language() {
        let d = Dfa::empty(alphabet);
        report.dfa_states = d.num_states();
        return Ok((d, report));
    }

    let clock = Instant::now();
    let nfa = if opts.decompose {
        let comps = components(g);
        report.num_components = comps.len();
        let owner: BTreeMap<&str, &Component> = comps
            .iter()
            .flat_map(|c| c.members.iter().map(move |m| (m.as_str(), c)))
            .collect();
        let mut needed = BTreeSet::from([g.start().to_string()]);
        let mut work = vec![g.start().to_string()];
        while let Some(x) = work.pop() {
            for p in &owner[x.as_str()].pseudoterminals {
                if needed.insert(p.clone()) {
                    work.push(p.clone());
                }
            }
        }
        let mut subs = BTreeMap::new();
        for c in &comps {
            for x in c.members.iter().filter(|x| needed.contains(*x)) {
                let sub = defining_subgrammar(g, c, x);
                let (aut, stats) = approximate_component_with_stats(&sub, opts)?;
                report.approximations.push(stats);
                subs.insert(x.clone(), aut);
            }
        }
        report.timings.push(("approximate", clock.elapsed()));
        let clock = Instant::now();
        let nfa = recombine(&subs, g.start(), &alphabet)?;
        report.timings.push(("recombine", clock.elapsed()));
        nfa
    } else {
        let congruence = if opts.unfold {
            Congruence::LoopCollapsing
        } else {
            Congruence::Trivial
        };
        let (nfa, lr0_states, unfolded_states) = approximate_nfa(g, congruence, opts.max_unfolded_states)?;
        report.num_components = 1;
        report.approximations.push(ApproxStats {
            owner: g.start().to_string(),
            linearity: classify_linearity(g),
            lr0_states,
            unfolded_states: if opts.unfold { unfolded_states } else { 0 },
            unfolding_skipped: !opts.unfold,
            nfa_states: nfa.num_states(),
            nfa_transitions: nfa.num_transitions(),
            dfa_states: 0,
            dfa_transitions: 0,
        });
        report.timings.push(("approximate", clock.elapsed()));
        widen(&nfa, &alphabet)?
    };
    report.recombined_states = nfa.num_states();
    report.recombined_transitions = nfa.num_transitions();

    let clock = Instant::now();
    let mut d = determinize_with_limit(&nfa, opts.max_subset_states)?;
    report.timings.push(("determinize", clock.elapsed()));
    if opts.minimize {
        let clock = Instant::now();
        d = minimize(&d);
        report.timings.push(("minimize", clock.elapsed()));
    }
    report.dfa_states = d.num_states();
    report.dfa_transitions = d.num_transitions();
    Ok((d, report))
}

/// The same automaton over a larger alphabet.
fn widen(nfa: &Nfa, alphabet: &[Symbol]) -> Result<Nfa> {
    let mut out = Nfa::new(alphabet.iter().cloned());
    out.add_states(nfa.num_states() - 1);
    out.set_start(nfa.start());
    for &f in nfa.finals() {
        out.set_final(f);
    }
    for &(s, l, t) in nfa.transitions() {
        let l = match l {
            None => None,
            Some(l) => {
                let sym = &nfa.alphabet()[l];
                Some(
                    out.label_of(sym)
                        .ok_or_else(|| Error::Internal(format!("symbol {sym} missing from the output alphabet")))?,
                )
            }
        };
        out.add_transition(s, l, t);
    }
    Ok(out)
}
