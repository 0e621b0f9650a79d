//! Bounded soundness and exactness checks of a compiled automaton against
//! the Earley oracle.

use std::fmt;

use crate::decompose::{compile, CompileOptions};
use crate::error::Result;
use crate::fsa::{enumerate_accepted, Dfa};
use crate::grammar::Grammar;
use crate::oracle::enumerate_language;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Same strings as the grammar up to the bound.
    Exact { max_len: usize },
    /// Every grammar string is accepted; `witness` is the shortest, then
    /// lexicographically least, extra string.
    Overaccepts { witness: Vec<String> },
    /// A grammar string the automaton rejects. Always a bug.
    Unsound { witness: Vec<String> },
}

impl Verdict {
    pub fn is_sound(&self) -> bool {
        !matches!(self, Verdict::Unsound { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Exact { max_len } => write!(f, "exact ≤ {max_len}"),
            Verdict::Overaccepts { witness } => {
                write!(f, "sound, overaccepts; witness: {}", show(witness))
            }
            Verdict::Unsound { witness } => write!(f, "UNSOUND; rejected: {}", show(witness)),
        }
    }
}

fn show(w: &[String]) -> String {
    if w.is_empty() {
        "ε".to_string()
    } else {
        w.join(" ")
    }
}

/// Compares `d` with `g` on all strings of at most `max_len` tokens.
pub fn check_dfa(g: &Grammar, d: &Dfa, max_len: usize) -> Verdict {
    let expected = enumerate_language(g, max_len);
    if let Some(w) = expected.iter().find(|w| !d.accepts(w)) {
        return Verdict::Unsound { witness: w.clone() };
    }
    // both lists are in length-then-lex order
    let accepted = enumerate_accepted(d, max_len);
    let expected: std::collections::HashSet<&Vec<String>> = expected.iter().collect();
    match accepted.into_iter().find(|w| !expected.contains(w)) {
        Some(witness) => Verdict::Overaccepts { witness },
        None => Verdict::Exact { max_len },
    }
}

/// Compiles `g` and checks the result.
pub fn check(g: &Grammar, opts: &CompileOptions, max_len: usize) -> Result<Verdict> {
    Ok(check_dfa(g, &compile(g, opts)?, max_len))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_cfg;

    #[test]
    fn verdicts() {
        let opts = CompileOptions::default();
        let g2 = parse_cfg("start s. s => `a, x, `a | `b, x, `b. x => `c.").unwrap();
        assert_eq!(check(&g2, &opts, 5).unwrap().to_string(), "exact ≤ 5");
        let anbn = parse_cfg("start s. s => `a, s, `b | [].").unwrap();
        assert_eq!(
            check(&anbn, &opts, 6).unwrap().to_string(),
            "sound, overaccepts; witness: a a b"
        );
    }

    #[test]
    fn unsound_automaton_is_reported() {
        let g = parse_cfg("start s. s => `a | `b.").unwrap();
        let d = Dfa::from_parts(
            [crate::grammar::Symbol::t("a"), crate::grammar::Symbol::t("b")],
            2,
            0,
            [1],
            [(0, crate::grammar::Symbol::t("a"), 1)],
        )
        .unwrap();
        let v = check_dfa(&g, &d, 3);
        assert!(!v.is_sound());
        assert_eq!(v.to_string(), "UNSOUND; rejected: b");
    }
}
