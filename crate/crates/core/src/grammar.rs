//! Context-free grammars: data model, text syntax and useless-symbol pruning.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Pos, Result};
use crate::syntax::{self, ItemAst};

/// Name reserved for the empty-string label in automaton text.
pub const EPSILON_NAME: &str = "eps";

/// A grammar symbol. Terminals and nonterminals live in separate namespaces,
/// so `a` and `` `a `` are different symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Terminal(String),
    Nonterminal(String),
}

impl Symbol {
    pub fn t(name: impl Into<String>) -> Self {
        Symbol::Terminal(name.into())
    }

    pub fn nt(name: impl Into<String>) -> Self {
        Symbol::Nonterminal(name.into())
    }

    pub fn name(&self) -> &str {
        match self {
            Symbol::Terminal(n) | Symbol::Nonterminal(n) => n,
        }
    }

    pub fn is_terminal(&self) -> bool {
        matches!(self, Symbol::Terminal(_))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Terminal(n) => write!(f, "`{n}"),
            Symbol::Nonterminal(n) => f.write_str(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub lhs: String,
    pub rhs: Vec<Symbol>,
}

impl Rule {
    pub fn new(lhs: impl Into<String>, rhs: Vec<Symbol>) -> Self {
        Rule { lhs: lhs.into(), rhs }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} =>", self.lhs)?;
        if self.rhs.is_empty() {
            return f.write_str(" []");
        }
        for (i, s) in self.rhs.iter().enumerate() {
            f.write_str(if i == 0 { " " } else { ", " })?;
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// A context-free grammar.
///
/// `terminals` is the input alphabet. It normally holds only
/// [`Symbol::Terminal`]s, but a defining subgrammar of a component also lists
/// the nonterminals of other components there (pseudoterminals). A symbol is
/// treated as a nonterminal of this grammar iff its name is in `nonterminals`
/// and it is nonterminal-kinded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    terminals: BTreeSet<Symbol>,
    nonterminals: BTreeSet<String>,
    start: String,
    rules: Vec<Rule>,
}

impl Grammar {
    /// Builds a grammar whose alphabet is every terminal occurring in `rules`
    /// and whose nonterminals are every nonterminal-kinded symbol mentioned.
    pub fn new(start: impl Into<String>, rules: Vec<Rule>) -> Result<Self> {
        let start = start.into();
        let mut nonterminals = BTreeSet::new();
        let mut terminals = BTreeSet::new();
        nonterminals.insert(start.clone());
        for r in &rules {
            nonterminals.insert(r.lhs.clone());
            for s in &r.rhs {
                match s {
                    Symbol::Nonterminal(n) => {
                        nonterminals.insert(n.clone());
                    }
                    t => {
                        terminals.insert(t.clone());
                    }
                }
            }
        }
        Self::with_symbols(terminals, nonterminals, start, rules)
    }

    /// Builds a grammar with an explicit alphabet and nonterminal set,
    /// checking every invariant.
    pub fn with_symbols(
        terminals: BTreeSet<Symbol>,
        nonterminals: BTreeSet<String>,
        start: impl Into<String>,
        rules: Vec<Rule>,
    ) -> Result<Self> {
        let start = start.into();
        if !nonterminals.contains(&start) {
            return Err(Error::InvalidGrammar(format!(
                "start symbol `{start}` is not a nonterminal"
            )));
        }
        for t in &terminals {
            if t.name().is_empty() {
                return Err(Error::InvalidGrammar("empty terminal name".into()));
            }
            if t.is_terminal() && t.name() == EPSILON_NAME {
                return Err(Error::InvalidGrammar(format!(
                    "`{EPSILON_NAME}` is reserved and cannot be a terminal"
                )));
            }
            if let Symbol::Nonterminal(n) = t {
                if nonterminals.contains(n) {
                    return Err(Error::InvalidGrammar(format!(
                        "`{n}` is both a nonterminal and a pseudoterminal"
                    )));
                }
            }
        }
        if nonterminals.iter().any(String::is_empty) {
            return Err(Error::InvalidGrammar("empty nonterminal name".into()));
        }
        let mut seen = HashSet::new();
        for r in &rules {
            if !nonterminals.contains(&r.lhs) {
                return Err(Error::InvalidGrammar(format!(
                    "rule lhs `{}` is not a nonterminal",
                    r.lhs
                )));
            }
            for s in &r.rhs {
                let known = match s {
                    Symbol::Nonterminal(n) => nonterminals.contains(n) || terminals.contains(s),
                    Symbol::Terminal(_) => terminals.contains(s),
                };
                if !known {
                    return Err(Error::InvalidGrammar(format!(
                        "symbol {s} in rule `{r}` is not in the grammar's vocabulary"
                    )));
                }
            }
            if !seen.insert(r) {
                return Err(Error::InvalidGrammar(format!("duplicate rule `{r}`")));
            }
        }
        Ok(Grammar {
            terminals,
            nonterminals,
            start,
            rules,
        })
    }

    pub fn terminals(&self) -> &BTreeSet<Symbol> {
        &self.terminals
    }

    pub fn nonterminals(&self) -> &BTreeSet<String> {
        &self.nonterminals
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn is_nonterminal(&self, s: &Symbol) -> bool {
        matches!(s, Symbol::Nonterminal(n) if self.nonterminals.contains(n))
    }

    pub fn rules_for<'a>(&'a self, lhs: &'a str) -> impl Iterator<Item = &'a Rule> + 'a {
        self.rules.iter().filter(move |r| r.lhs == lhs)
    }

    /// Nonterminals that derive some string over the alphabet.
    pub fn productive(&self) -> BTreeSet<String> {
        let mut productive: BTreeSet<String> = BTreeSet::new();
        loop {
            let mut changed = false;
            for r in &self.rules {
                if productive.contains(&r.lhs) {
                    continue;
                }
                let ok = r
                    .rhs
                    .iter()
                    .all(|s| !self.is_nonterminal(s) || productive.contains(s.name()));
                if ok {
                    productive.insert(r.lhs.clone());
                    changed = true;
                }
            }
            if !changed {
                return productive;
            }
        }
    }

    /// Nonterminals reachable from the start symbol, restricted to rules whose
    /// nonterminals all lie in `allowed`.
    fn reachable_within(&self, allowed: &BTreeSet<String>) -> BTreeSet<String> {
        let mut reached = BTreeSet::new();
        if !allowed.contains(&self.start) {
            return reached;
        }
        reached.insert(self.start.clone());
        let mut stack = vec![self.start.clone()];
        while let Some(x) = stack.pop() {
            for r in self.rules_for(&x) {
                let usable = r
                    .rhs
                    .iter()
                    .all(|s| !self.is_nonterminal(s) || allowed.contains(s.name()));
                if !usable {
                    continue;
                }
                for s in &r.rhs {
                    if self.is_nonterminal(s) && reached.insert(s.name().to_string()) {
                        stack.push(s.name().to_string());
                    }
                }
            }
        }
        reached
    }

    /// Renders the grammar in the CFG text format. Consecutive rules with the
    /// same left-hand side share one statement, so rule order is preserved.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start {}.", self.start)?;
        let mut i = 0;
        while i < self.rules.len() {
            let lhs = &self.rules[i].lhs;
            let mut j = i;
            while j < self.rules.len() && &self.rules[j].lhs == lhs {
                j += 1;
            }
            write!(f, "{lhs} =>")?;
            for (k, r) in self.rules[i..j].iter().enumerate() {
                if k > 0 {
                    write!(f, "\n{:width$} |", "", width = lhs.len())?;
                }
                if r.rhs.is_empty() {
                    f.write_str(" []")?;
                }
                for (n, s) in r.rhs.iter().enumerate() {
                    f.write_str(if n == 0 { " " } else { ", " })?;
                    write!(f, "{s}")?;
                }
            }
            writeln!(f, ".")?;
            i = j;
        }
        Ok(())
    }
}

/// Parses the plain CFG text format.
pub fn parse_cfg(text: &str) -> Result<Grammar> {
    let doc = syntax::parse_document(text)?;
    if let Some(d) = doc.decls.first() {
        return Err(Error::syntax(
            d.pos,
            "category declarations are not allowed in CFG input",
        ));
    }
    let start = match doc.starts.as_slice() {
        [] => return Err(Error::MissingStart),
        [(name, _)] => name.clone(),
        [_, (_, pos), ..] => return Err(Error::syntax(*pos, "duplicate `start` declaration")),
    };
    let mut rules = Vec::new();
    let mut seen: HashMap<Rule, Pos> = HashMap::new();
    let check_plain = |c: &syntax::CatAst| -> Result<String> {
        if c.annotated {
            Err(Error::syntax(c.pos, "feature annotations are not allowed in CFG input"))
        } else {
            Ok(c.name.clone())
        }
    };
    for r in &doc.rules {
        let lhs = check_plain(&r.lhs)?;
        for (alt, pos) in &r.alternatives {
            let mut rhs = Vec::with_capacity(alt.len());
            for item in alt {
                rhs.push(match item {
                    ItemAst::Cat(c) => Symbol::Nonterminal(check_plain(c)?),
                    ItemAst::Terminal(t, tpos) => {
                        if t == EPSILON_NAME {
                            return Err(Error::syntax(*tpos, "`eps` is reserved and cannot be a terminal"));
                        }
                        Symbol::Terminal(t.clone())
                    }
                });
            }
            let rule = Rule::new(lhs.clone(), rhs);
            if seen.contains_key(&rule) {
                return Err(Error::DuplicateRule {
                    pos: *pos,
                    rule: rule.to_string(),
                });
            }
            seen.insert(rule.clone(), *pos);
            rules.push(rule);
        }
    }
    if !rules.iter().any(|r| r.lhs == start) {
        return Err(Error::UndefinedStart(start));
    }
    Grammar::new(start, rules)
}

/// Result of [`prune`]: the reduced grammar and any warnings raised.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pruned {
    pub grammar: Grammar,
    pub warnings: Vec<String>,
}

impl Pruned {
    pub fn is_empty_language(&self) -> bool {
        self.grammar.rules.is_empty()
    }
}

/// Removes nonterminals that derive no terminal string or are unreachable
/// from the start symbol, together with every rule mentioning them.
///
/// If the start symbol itself is unproductive the result has no rules (the
/// empty language) and a warning is recorded.
pub fn prune(g: &Grammar) -> Pruned {
    let productive = g.productive();
    let mut warnings = Vec::new();
    if !productive.contains(&g.start) {
        warnings.push(format!(
            "start symbol `{}` derives no terminal string; the language is empty",
            g.start
        ));
        let grammar = Grammar::with_symbols(
            BTreeSet::new(),
            BTreeSet::from([g.start.clone()]),
            g.start.clone(),
            Vec::new(),
        )
        .expect("empty grammar is well-formed");
        return Pruned { grammar, warnings };
    }
    let reachable = g.reachable_within(&productive);
    let rules: Vec<Rule> = g
        .rules
        .iter()
        .filter(|r| {
            reachable.contains(&r.lhs)
                && r.rhs
                    .iter()
                    .all(|s| !g.is_nonterminal(s) || reachable.contains(s.name()))
        })
        .cloned()
        .collect();
    let terminals = rules
        .iter()
        .flat_map(|r| r.rhs.iter())
        .filter(|s| !g.is_nonterminal(s))
        .cloned()
        .collect();
    let grammar =
        Grammar::with_symbols(terminals, reachable, g.start.clone(), rules).expect("pruning preserves well-formedness");
    Pruned { grammar, warnings }
}
