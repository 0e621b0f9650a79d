//! Grammar fixtures and seeded random grammar generators shared by the
//! integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};
use std::path::PathBuf;

use fsapprox::{Grammar, Rule, Symbol};
use rand::seq::SliceRandom;
use rand::Rng;

pub const TERMINALS: [&str; 3] = ["a", "b", "c"];

pub fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../grammars")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn words(v: &[&str]) -> Vec<Vec<String>> {
    v.iter()
        .map(|w| w.split_whitespace().map(String::from).collect())
        .collect()
}

fn nt_name(i: usize) -> String {
    format!("n{i}")
}

fn terminal<R: Rng>(rng: &mut R) -> Symbol {
    Symbol::t(*TERMINALS.choose(rng).unwrap())
}

fn build(rules: Vec<Rule>) -> Grammar {
    let mut seen = HashSet::new();
    let rules: Vec<Rule> = rules.into_iter().filter(|r| seen.insert(r.clone())).collect();
    Grammar::new(nt_name(0), rules).expect("generated grammar is well-formed")
}

/// Arbitrary rules: up to `max_nts` nonterminals, `max_rules` rules and
/// right-hand sides of up to `max_rhs` symbols.
pub fn random_cfg<R: Rng>(rng: &mut R, max_nts: usize, max_rules: usize, max_rhs: usize) -> Grammar {
    let nts = rng.gen_range(1..=max_nts);
    let n_rules = rng.gen_range(1..=max_rules);
    let rules = (0..n_rules)
        .map(|i| {
            // the first rules give every nonterminal a chance of a definition
            let lhs = if i < nts { i } else { rng.gen_range(0..nts) };
            let len = rng.gen_range(0..=max_rhs);
            let rhs = (0..len)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        terminal(rng)
                    } else {
                        Symbol::nt(nt_name(rng.gen_range(0..nts)))
                    }
                })
                .collect();
            Rule::new(nt_name(lhs), rhs)
        })
        .collect();
    build(rules)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

fn linear_rhs<R: Rng>(rng: &mut R, side: Side, nt: Option<Symbol>, fillers: &[Symbol]) -> Vec<Symbol> {
    let len = rng.gen_range(0..=2);
    let mut rhs: Vec<Symbol> = (0..len)
        .map(|_| {
            if !fillers.is_empty() && rng.gen_bool(0.3) {
                fillers.choose(rng).unwrap().clone()
            } else {
                terminal(rng)
            }
        })
        .collect();
    if let Some(nt) = nt {
        match side {
            Side::Left => rhs.insert(0, nt),
            Side::Right => rhs.push(nt),
        }
    }
    rhs
}

/// A left- or right-linear grammar over [`TERMINALS`].
pub fn random_linear<R: Rng>(rng: &mut R, side: Side, max_nts: usize, max_rules: usize) -> Grammar {
    let nts = rng.gen_range(1..=max_nts);
    let n_rules = rng.gen_range(1..=max_rules);
    let rules = (0..n_rules)
        .map(|i| {
            let lhs = if i < nts { i } else { rng.gen_range(0..nts) };
            let nt = rng.gen_bool(0.6).then(|| Symbol::nt(nt_name(rng.gen_range(0..nts))));
            Rule::new(nt_name(lhs), linear_rhs(rng, side, nt, &[]))
        })
        .collect();
    build(rules)
}

/// Layers of nonterminals, each layer left- or right-linear on its own and
/// free to use lower layers anywhere. Every strongly connected component is
/// then left- or right-linear once lower layers count as terminals.
pub fn random_layered<R: Rng>(rng: &mut R) -> Grammar {
    let layers = rng.gen_range(2..=3);
    let mut rules = Vec::new();
    let mut next = 0;
    let mut lower: Vec<Symbol> = Vec::new();
    let mut sides = Vec::new();
    // build bottom-up, then renumber so the top layer holds n0
    let mut layer_members = Vec::new();
    for _ in 0..layers {
        let side = if rng.gen_bool(0.5) { Side::Left } else { Side::Right };
        sides.push(side);
        let size = rng.gen_range(1..=2);
        let members: Vec<usize> = (next..next + size).collect();
        next += size;
        let n_rules = rng.gen_range(size..=size + 3);
        for i in 0..n_rules {
            let lhs = if i < size {
                members[i]
            } else {
                *members.choose(rng).unwrap()
            };
            let nt = rng
                .gen_bool(0.6)
                .then(|| Symbol::nt(format!("m{}", members.choose(rng).unwrap())));
            rules.push(Rule::new(format!("m{lhs}"), linear_rhs(rng, side, nt, &lower)));
        }
        // one recursive rule fixes the layer's side
        let own = Symbol::nt(format!("m{}", members[0]));
        let mut recursive = vec![terminal(rng)];
        match side {
            Side::Left => recursive.insert(0, own),
            Side::Right => recursive.push(own),
        }
        rules.push(Rule::new(format!("m{}", members[0]), recursive));
        lower.extend(members.iter().map(|m| Symbol::nt(format!("m{m}"))));
        layer_members.push(members);
    }
    let top = layer_members.last().unwrap()[0];
    let rename = |n: &str| -> String {
        let i: usize = n[1..].parse().unwrap();
        if i == top {
            nt_name(0)
        } else if i == 0 {
            nt_name(top)
        } else {
            nt_name(i)
        }
    };
    let rules = rules
        .into_iter()
        .map(|r| {
            let rhs = r
                .rhs
                .iter()
                .map(|s| match s {
                    Symbol::Nonterminal(n) => Symbol::nt(rename(n)),
                    t => t.clone(),
                })
                .collect();
            Rule::new(rename(&r.lhs), rhs)
        })
        .collect();
    build(rules)
}

/// `s -> x1 s | ... | xn s | y` with the `xi` and `y` as pseudoterminals.
pub fn blowup_subgrammar(n: usize) -> Grammar {
    let xs: Vec<Symbol> = (1..=n).map(|i| Symbol::nt(format!("x{i}"))).collect();
    let mut rules: Vec<Rule> = xs
        .iter()
        .map(|x| Rule::new("s", vec![x.clone(), Symbol::nt("s")]))
        .collect();
    rules.push(Rule::new("s", vec![Symbol::nt("y")]));
    let mut terminals: BTreeSet<Symbol> = xs.into_iter().collect();
    terminals.insert(Symbol::nt("y"));
    Grammar::with_symbols(terminals, BTreeSet::from(["s".to_string()]), "s", rules).unwrap()
}

/// The same shape as a complete grammar: `xi -> `ai` and `y -> `b`.
pub fn blowup_grammar(n: usize) -> Grammar {
    let mut rules: Vec<Rule> = (1..=n)
        .map(|i| Rule::new("s", vec![Symbol::nt(format!("x{i}")), Symbol::nt("s")]))
        .collect();
    rules.push(Rule::new("s", vec![Symbol::nt("y")]));
    rules.extend((1..=n).map(|i| Rule::new(format!("x{i}"), vec![Symbol::t(format!("a{i}"))])));
    rules.push(Rule::new("y", vec![Symbol::t("b")]));
    Grammar::new("s", rules).unwrap()
}

pub mod strategies {
    use proptest::collection::vec;
    use proptest::prelude::*;

    use super::{build, nt_name, TERMINALS};
    use fsapprox::{Grammar, Nfa, Rule, Symbol};

    /// Small grammars over [`TERMINALS`] and nonterminals `n0..`, start `n0`.
    pub fn cfg(max_nts: usize, max_rules: usize, max_rhs: usize) -> impl Strategy<Value = Grammar> {
        (1..=max_nts).prop_flat_map(move |nts| {
            let symbol = prop_oneof![
                (0..TERMINALS.len()).prop_map(|i| Symbol::t(TERMINALS[i])),
                (0..nts).prop_map(|i| Symbol::nt(nt_name(i))),
            ];
            let rule = (0..nts, vec(symbol, 0..=max_rhs)).prop_map(|(l, rhs)| Rule::new(nt_name(l), rhs));
            vec(rule, 1..=max_rules).prop_map(build)
        })
    }

    /// ε-NFAs over `{a, b}` with up to five states.
    pub fn nfa() -> impl Strategy<Value = Nfa> {
        (1usize..=5)
            .prop_flat_map(|n| {
                (
                    Just(n),
                    vec((0..n, proptest::option::weighted(0.8, 0..2usize), 0..n), 0..14),
                    vec(any::<bool>(), n),
                )
            })
            .prop_map(|(n, transitions, finals)| {
                let mut a = Nfa::new([Symbol::t("a"), Symbol::t("b")]);
                a.add_states(n - 1);
                for (s, l, t) in transitions {
                    a.add_transition(s, l, t);
                }
                for (s, f) in finals.into_iter().enumerate() {
                    if f {
                        a.set_final(s);
                    }
                }
                a
            })
    }
}

/// Every word over `alphabet` of at most `max_len` tokens.
pub fn all_words(alphabet: &[&str], max_len: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Vec<String>> = vec![Vec::new()];
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|w| {
                alphabet.iter().map(move |a| {
                    let mut w = w.clone();
                    w.push(a.to_string());
                    w
                })
            })
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out
}
