//! Command-line driver: compile grammars to automata, check them against
//! the oracle, and small inspection commands.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fsapprox::fsa::{parse_text, DEFAULT_SUBSET_LIMIT};
use fsapprox::oracle::{enumerate_language, member};
use fsapprox::unfold::DEFAULT_MAX_UNFOLDED_STATES;
use fsapprox::verify::check_dfa;
use fsapprox::{
    compile_with_report, instantiate, parse_apsg, parse_cfg, CompileOptions, CompileReport, ErrorKind, Grammar, Verdict,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_SYNTAX: i32 = 2;
pub const EXIT_SEMANTIC: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;
pub const EXIT_UNSOUND: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "fsapprox",
    version,
    about = "Compile context-free and feature grammars into sound finite automata"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile a grammar (.cfg or .apsg) into a minimal DFA.
    Compile {
        grammar: PathBuf,
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Output file; standard output if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Fsa)]
        format: Format,
        /// Print sizes and timings to standard error.
        #[arg(long)]
        stats: bool,
    },
    /// Compile a grammar and compare the result with the grammar on all
    /// strings up to a length bound.
    Check {
        grammar: PathBuf,
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
    /// Expand a feature grammar into a plain context-free grammar.
    Instantiate {
        grammar: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide grammar membership of a whitespace-separated sentence.
    Member { grammar: PathBuf, sentence: String },
    /// List the sentences of a grammar up to a length bound.
    Enumerate {
        grammar: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
    /// Run an automaton file on a whitespace-separated sentence.
    Accepts { automaton: PathBuf, sentence: String },
}

#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    /// Approximate the whole grammar at once.
    #[arg(long)]
    pub no_decompose: bool,
    /// Use the plain characteristic machine; implies --no-decompose.
    #[arg(long)]
    pub no_unfold: bool,
    /// Skip the final minimization.
    #[arg(long)]
    pub no_minimize: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_UNFOLDED_STATES)]
    pub max_unfolded_states: usize,
}

impl PipelineArgs {
    pub fn options(&self) -> CompileOptions {
        CompileOptions {
            decompose: !self.no_decompose && !self.no_unfold,
            unfold: !self.no_unfold,
            minimize: !self.no_minimize,
            max_unfolded_states: self.max_unfolded_states,
            max_subset_states: DEFAULT_SUBSET_LIMIT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Fsa,
    Dot,
}

#[derive(Debug)]
pub enum Failure {
    Core(fsapprox::Error),
    Io(PathBuf, std::io::Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Core(e) => match e.kind() {
                ErrorKind::Syntax => EXIT_SYNTAX,
                ErrorKind::Semantic => EXIT_SEMANTIC,
                ErrorKind::Resource => EXIT_RESOURCE,
                ErrorKind::Internal => EXIT_FAILURE,
            },
            Failure::Io(..) => EXIT_FAILURE,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

impl From<fsapprox::Error> for Failure {
    fn from(e: fsapprox::Error) -> Self {
        Failure::Core(e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

/// Reads a `.apsg` file (instantiated on the fly) or a plain grammar.
pub fn load_grammar(path: &Path) -> Result<Grammar, Failure> {
    let text = read(path)?;
    if path.extension().is_some_and(|e| e == "apsg") {
        Ok(instantiate(&parse_apsg(&text)?)?)
    } else {
        Ok(parse_cfg(&text)?)
    }
}

/// Writes atomically: a temporary file in the target directory, renamed
/// into place once complete.
fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    let Some(path) = output else {
        print!("{text}");
        return Ok(());
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| Failure::Io(path.to_path_buf(), e);
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn tokens(sentence: &str) -> Vec<&str> {
    sentence.split_whitespace().collect()
}

/// The statistics block printed by `compile --stats`.
pub fn render_report(r: &CompileReport, wall: std::time::Duration) -> String {
    let (flat_states, flat_transitions) = r.flattened_size();
    let skipped = r.approximations.iter().filter(|a| a.unfolding_skipped).count();
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    line(format!(
        "grammar: {} nonterminals, {} rules",
        r.input_nonterminals, r.input_rules
    ));
    line(format!(
        "augmented: {} nonterminals, {} rules (reference: 78 nonterminals, 157 rules)",
        r.input_nonterminals + 1,
        r.input_rules + 1
    ));
    line(format!(
        "pruned: {} nonterminals, {} rules",
        r.pruned_nonterminals, r.pruned_rules
    ));
    line(format!(
        "components: {}, approximated: {}, unfolding skipped: {}",
        r.num_components,
        r.approximations.len(),
        skipped
    ));
    line(format!("lr0 states: {}", r.lr0_states()));
    line(format!("unfolded states: {}", r.unfolded_states()));
    line(format!(
        "flattened: {flat_states} states, {flat_transitions} transitions (reference with --no-decompose: 2615 states, 4096 transitions)"
    ));
    line(format!(
        "recombined: {} states, {} transitions",
        r.recombined_states, r.recombined_transitions
    ));
    line(format!(
        "dfa: {} states, {} transitions (reference: 16 states, 97 transitions)",
        r.dfa_states, r.dfa_transitions
    ));
    for (stage, t) in &r.timings {
        line(format!("time {stage}: {:.3} ms", t.as_secs_f64() * 1e3));
    }
    line(format!("time total: {:.3} s (reference: 1.78 s)", wall.as_secs_f64()));
    for w in &r.warnings {
        line(format!("warning: {w}"));
    }
    out
}

/// Runs one command; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cmd: Command) -> Result<i32, Failure> {
    match cmd {
        Command::Compile {
            grammar,
            pipeline,
            output,
            format,
            stats,
        } => {
            let clock = Instant::now();
            let g = load_grammar(&grammar)?;
            let (dfa, report) = compile_with_report(&g, &pipeline.options())?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            let text = match format {
                Format::Fsa => dfa.to_text(),
                Format::Dot => dfa.to_dot(),
            };
            emit(output.as_deref(), &text)?;
            if stats {
                eprint!("{}", render_report(&report, clock.elapsed()));
            }
            Ok(EXIT_OK)
        }
        Command::Check {
            grammar,
            pipeline,
            max_len,
        } => {
            let g = load_grammar(&grammar)?;
            let (dfa, _) = compile_with_report(&g, &pipeline.options())?;
            let verdict = check_dfa(&g, &dfa, max_len);
            println!("{verdict}");
            Ok(match verdict {
                Verdict::Unsound { .. } => EXIT_UNSOUND,
                _ => EXIT_OK,
            })
        }
        Command::Instantiate { grammar, output } => {
            let g = load_grammar(&grammar)?;
            emit(output.as_deref(), &g.to_text())?;
            Ok(EXIT_OK)
        }
        Command::Member { grammar, sentence } => {
            let g = load_grammar(&grammar)?;
            println!("{}", member(&g, &tokens(&sentence)));
            Ok(EXIT_OK)
        }
        Command::Enumerate { grammar, max_len } => {
            let g = load_grammar(&grammar)?;
            let mut out = std::io::stdout().lock();
            for w in enumerate_language(&g, max_len) {
                let _ = writeln!(out, "{}", w.join(" "));
            }
            Ok(EXIT_OK)
        }
        Command::Accepts { automaton, sentence } => {
            let a = parse_text(&read(&automaton)?)?;
            println!("{}", a.accepts(&tokens(&sentence)));
            Ok(EXIT_OK)
        }
    }
}
