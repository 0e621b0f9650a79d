//! Sound regular approximations of context-free and feature grammars.
//!
//! A context-free grammar (possibly instantiated from a feature-based
//! grammar) is compiled into a deterministic finite automaton that accepts
//! every sentence of the grammar. The automaton is exact for left-linear
//! and right-linear grammars, and for grammars whose strongly connected
//! components are each left- or right-linear.
//!
//! ```
//! use fsapprox::{compile, parse_cfg, CompileOptions};
//!
//! let g = parse_cfg("start s. s => a, `b. a => a, `a | [].").unwrap();
//! let dfa = compile(&g, &CompileOptions::default()).unwrap();
//! assert_eq!(dfa.num_states(), 2);
//! assert!(dfa.accepts(&["a", "a", "b"]));
//! assert!(!dfa.accepts(&["b", "a"]));
//! ```

pub mod apsg;
pub mod decompose;
pub mod error;
pub mod flatten;
pub mod fsa;
pub mod grammar;
pub mod lr0;
pub mod oracle;
mod syntax;
pub mod unfold;
pub mod verify;

pub use apsg::{instantiate, parse_apsg, ApsgGrammar};
pub use decompose::{compile, compile_with_report, CompileOptions, CompileReport};
pub use error::{Error, ErrorKind, Pos, Result};
pub use fsa::{determinize, minimize, Dfa, Nfa};
pub use grammar::{parse_cfg, prune, Grammar, Rule, Symbol};
pub use lr0::{build_machine, CharacteristicMachine};
pub use unfold::{unfold, Congruence, UnfoldedMachine};
pub use verify::{check, Verdict};
