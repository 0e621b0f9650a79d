//! Ground-truth membership (Earley) and bounded language enumeration for
//! context-free grammars. Independent of the LR(0) machinery.

use std::collections::{HashMap, HashSet};

use crate::grammar::{Grammar, Symbol};

/// A grammar flattened to integer ids: input symbols first, then nonterminals.
struct Indexed {
    symbols: Vec<Symbol>,
    ids: HashMap<Symbol, usize>,
    n_inputs: usize,
    start: usize,
    rules: Vec<(usize, Vec<usize>)>,
    by_lhs: Vec<Vec<usize>>,
}

impl Indexed {
    fn new(g: &Grammar) -> Self {
        let mut symbols: Vec<Symbol> = g.terminals().iter().cloned().collect();
        let n_inputs = symbols.len();
        symbols.extend(g.nonterminals().iter().map(|n| Symbol::nt(n.clone())));
        let ids: HashMap<Symbol, usize> = symbols.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let rules: Vec<(usize, Vec<usize>)> = g
            .rules()
            .iter()
            .map(|r| (ids[&Symbol::nt(r.lhs.clone())], r.rhs.iter().map(|s| ids[s]).collect()))
            .collect();
        let mut by_lhs = vec![Vec::new(); symbols.len()];
        for (i, (lhs, _)) in rules.iter().enumerate() {
            by_lhs[*lhs].push(i);
        }
        Indexed {
            start: ids[&Symbol::nt(g.start())],
            symbols,
            ids,
            n_inputs,
            rules,
            by_lhs,
        }
    }

    fn is_nt(&self, x: usize) -> bool {
        x >= self.n_inputs
    }

    fn nullable(&self) -> Vec<bool> {
        let mut nullable = vec![false; self.symbols.len()];
        loop {
            let mut changed = false;
            for (lhs, rhs) in &self.rules {
                if !nullable[*lhs] && rhs.iter().all(|&x| nullable[x]) {
                    nullable[*lhs] = true;
                    changed = true;
                }
            }
            if !changed {
                return nullable;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct EarleyItem {
    rule: usize,
    dot: usize,
    origin: usize,
}

/// Earley recognition, with the nullable-prediction fix for ε-rules.
/// Tokens name terminals; unknown tokens make the word rejected.
pub fn member<S: AsRef<str>>(g: &Grammar, w: &[S]) -> bool {
    let word: Vec<Symbol> = w.iter().map(|t| Symbol::t(t.as_ref())).collect();
    member_symbols(g, &word)
}

/// Like [`member`], but the word may contain pseudoterminals.
pub fn member_symbols(g: &Grammar, w: &[Symbol]) -> bool {
    let ix = Indexed::new(g);
    let mut input = Vec::with_capacity(w.len());
    for s in w {
        match ix.ids.get(s) {
            Some(&id) if !ix.is_nt(id) => input.push(id),
            _ => return false,
        }
    }
    let nullable = ix.nullable();
    let n = input.len();
    let mut chart: Vec<Vec<EarleyItem>> = vec![Vec::new(); n + 1];
    let mut seen: Vec<HashSet<EarleyItem>> = vec![HashSet::new(); n + 1];

    let add = |chart: &mut Vec<Vec<EarleyItem>>, seen: &mut Vec<HashSet<EarleyItem>>, i: usize, item: EarleyItem| {
        if seen[i].insert(item) {
            chart[i].push(item);
        }
    };
    for &r in &ix.by_lhs[ix.start] {
        add(
            &mut chart,
            &mut seen,
            0,
            EarleyItem {
                rule: r,
                dot: 0,
                origin: 0,
            },
        );
    }
    for i in 0..=n {
        let mut k = 0;
        while k < chart[i].len() {
            let item = chart[i][k];
            k += 1;
            let (lhs, rhs) = &ix.rules[item.rule];
            match rhs.get(item.dot) {
                Some(&x) if ix.is_nt(x) => {
                    for &r in &ix.by_lhs[x] {
                        add(
                            &mut chart,
                            &mut seen,
                            i,
                            EarleyItem {
                                rule: r,
                                dot: 0,
                                origin: i,
                            },
                        );
                    }
                    if nullable[x] {
                        add(
                            &mut chart,
                            &mut seen,
                            i,
                            EarleyItem {
                                dot: item.dot + 1,
                                ..item
                            },
                        );
                    }
                }
                Some(&x) => {
                    if i < n && input[i] == x {
                        add(
                            &mut chart,
                            &mut seen,
                            i + 1,
                            EarleyItem {
                                dot: item.dot + 1,
                                ..item
                            },
                        );
                    }
                }
                None => {
                    let origin = item.origin;
                    let mut j = 0;
                    while j < chart[origin].len() {
                        let parent = chart[origin][j];
                        j += 1;
                        if ix.rules[parent.rule].1.get(parent.dot) == Some(lhs) {
                            add(
                                &mut chart,
                                &mut seen,
                                i,
                                EarleyItem {
                                    dot: parent.dot + 1,
                                    ..parent
                                },
                            );
                        }
                    }
                }
            }
        }
    }
    chart[n]
        .iter()
        .any(|it| it.origin == 0 && ix.rules[it.rule].0 == ix.start && it.dot == ix.rules[it.rule].1.len())
}

/// All words of `L(g)` with at most `maxlen` tokens, shortest first, then
/// lexicographic by token.
pub fn enumerate_language(g: &Grammar, maxlen: usize) -> Vec<Vec<String>> {
    enumerate_symbols(g, maxlen)
        .into_iter()
        .map(|w| w.into_iter().map(|s| s.name().to_string()).collect())
        .collect()
}

/// Bounded enumeration over input symbols (terminals and pseudoterminals).
///
/// Builds, for every nonterminal and every length `n ≤ maxlen`, the set of
/// derivable words of exactly `n` symbols. A rule contributes the
/// concatenations of its parts' sets whose lengths sum to `n`; parts of full
/// length `n` only arise next to nullable parts, so each length is iterated
/// to a fixpoint before moving on.
pub fn enumerate_symbols(g: &Grammar, maxlen: usize) -> Vec<Vec<Symbol>> {
    let ix = Indexed::new(g);
    let nsym = ix.symbols.len();
    // lang[x][n] for nonterminal x
    let mut lang: Vec<Vec<HashSet<Vec<usize>>>> = vec![vec![HashSet::new(); maxlen + 1]; nsym];

    for n in 0..=maxlen {
        loop {
            let mut changed = false;
            for (lhs, rhs) in &ix.rules {
                let mut produced = Vec::new();
                compose(&ix, &lang, rhs, n, &mut Vec::new(), &mut produced);
                for w in produced {
                    if lang[*lhs][n].insert(w) {
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    let mut out: Vec<Vec<Symbol>> = lang[ix.start]
        .iter()
        .flat_map(|set| set.iter())
        .map(|w| w.iter().map(|&x| ix.symbols[x].clone()).collect())
        .collect();
    out.sort_by(|a: &Vec<Symbol>, b: &Vec<Symbol>| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.iter().map(Symbol::name).cmp(b.iter().map(Symbol::name)))
            .then_with(|| a.cmp(b))
    });
    return out;

    /// Appends to `out` every concatenation of words for `parts` with total
    /// length `remaining`, each prefixed by `prefix`.
    fn compose(
        ix: &Indexed,
        lang: &[Vec<HashSet<Vec<usize>>>],
        parts: &[usize],
        remaining: usize,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let Some((&x, rest)) = parts.split_first() else {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        };
        // terminals left after this part each need one symbol
        let min_rest = rest.iter().filter(|&&y| !ix.is_nt(y)).count();
        if min_rest > remaining {
            return;
        }
        if !ix.is_nt(x) {
            if remaining == 0 {
                return;
            }
            prefix.push(x);
            compose(ix, lang, rest, remaining - 1, prefix, out);
            prefix.pop();
            return;
        }
        for len in 0..=(remaining - min_rest) {
            if lang[x][len].is_empty() {
                continue;
            }
            // snapshot: the set at the current length may be growing
            let words: Vec<&Vec<usize>> = lang[x][len].iter().collect();
            for w in words {
                let mark = prefix.len();
                prefix.extend_from_slice(w);
                compose(ix, lang, rest, remaining - len, prefix, out);
                prefix.truncate(mark);
            }
        }
    }
}
