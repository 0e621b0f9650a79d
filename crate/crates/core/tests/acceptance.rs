//! End-to-end acceptance suite. Runs every criterion, prints one PASS/FAIL
//! line each, and exits nonzero if any failed.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::{fixture, words, Side};
use fsapprox::decompose::{
    approximate_component_with_stats, classify_linearity, components, defining_subgrammar, Linearity,
};
use fsapprox::flatten::flatten;
use fsapprox::fsa::{enumerate_accepted, equivalent, shortest_difference};
use fsapprox::oracle::{enumerate_language, member};
use fsapprox::unfold::unfold_with;
use fsapprox::verify::check_dfa;
use fsapprox::{
    build_machine, compile, compile_with_report, determinize, instantiate, minimize, parse_apsg, parse_cfg,
    CompileOptions, Congruence, Dfa, Grammar, Symbol, Verdict,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

const SEED: u64 = 0x0005_eed0_fa11;

fn dfa(alphabet: &[&str], states: usize, finals: &[usize], trans: &[(usize, &str, usize)]) -> Dfa {
    Dfa::from_parts(
        alphabet.iter().map(|a| Symbol::t(*a)),
        states,
        0,
        finals.iter().copied(),
        trans.iter().map(|&(s, a, t)| (s, Symbol::t(a), t)),
    )
    .unwrap()
}

fn default_compile(g: &Grammar) -> Result<Dfa, String> {
    compile(g, &CompileOptions::default()).map_err(|e| e.to_string())
}

fn same_language(name: &str, a: &Dfa, b: &Dfa) -> Result<(), String> {
    match shortest_difference(a, b) {
        None => Ok(()),
        Some(w) => Err(format!("{name}: languages differ on {:?}", w.join(" "))),
    }
}

fn g1_minimal() -> Outcome {
    let g = parse_cfg(&fixture("g1.cfg")).unwrap();
    let d = default_compile(&g)?;
    let hand = dfa(&["a", "b"], 2, &[1], &[(0, "a", 0), (0, "b", 1)]);
    same_language("G1", &d, &hand)?;
    match check_dfa(&g, &d, 10) {
        Verdict::Exact { .. } => Ok(format!("{} states, exact ≤ 10", d.num_states())),
        v => Err(format!("check reported {v}")),
    }
}

fn g2_unfolding() -> Outcome {
    let g = parse_cfg(&fixture("g2.cfg")).unwrap();
    let d = default_compile(&g)?;
    let got = enumerate_accepted(&d, 5);
    if got != words(&["a c a", "b c b"]) {
        return Err(format!("unfolded accepts {got:?}"));
    }
    let coarse = compile(
        &g,
        &CompileOptions {
            decompose: false,
            unfold: false,
            ..Default::default()
        },
    )
    .map_err(|e| e.to_string())?;
    let got = enumerate_accepted(&coarse, 5);
    if got != words(&["a c a", "a c b", "b c a", "b c b"]) {
        return Err(format!("without unfolding accepts {got:?}"));
    }
    Ok("{aca, bcb}; without unfolding also acb, bca".into())
}

fn anbn_forgets_pairing() -> Outcome {
    let g = parse_cfg(&fixture("anbn.cfg")).unwrap();
    let d = default_compile(&g)?;
    let hand = dfa(
        &["a", "b"],
        3,
        &[0, 2],
        &[(0, "a", 1), (1, "a", 1), (1, "b", 2), (2, "b", 2)],
    );
    same_language("anbn", &d, &hand)?;
    for n in 0..=6 {
        let w: Vec<&str> = std::iter::repeat_n("a", n).chain(std::iter::repeat_n("b", n)).collect();
        if !d.accepts(&w) {
            return Err(format!("rejects a^{n} b^{n}"));
        }
    }
    let extra = enumerate_accepted(&d, 6).into_iter().find(|w| !member(&g, w));
    match extra {
        Some(w) if w.len() == 3 => Ok(format!("ε|a⁺b⁺; shortest extra string {}", w.join(" "))),
        other => Err(format!("shortest extra string {other:?}")),
    }
}

fn acb_is_exact() -> Outcome {
    let g = parse_cfg(&fixture("acb.cfg")).unwrap();
    let d = default_compile(&g)?;
    let hand = dfa(&["a", "b", "c"], 2, &[1], &[(0, "a", 0), (0, "c", 1), (1, "b", 1)]);
    same_language("a*cb*", &d, &hand)?;
    Ok(format!("{} states", d.num_states()))
}

fn noun_phrases() -> Outcome {
    let g = parse_cfg(&fixture("np.cfg")).unwrap();
    let d = default_compile(&g)?;
    let alphabet: BTreeSet<String> = d.alphabet().iter().map(|s| s.name().to_string()).collect();
    let expected: BTreeSet<String> = ["art", "adj", "n", "pn", "p", "'s"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    if alphabet != expected {
        return Err(format!("alphabet {alphabet:?}"));
    }
    match check_dfa(&g, &d, 7) {
        Verdict::Exact { .. } => Ok(format!("{} states, exact ≤ 7", d.num_states())),
        v => Err(v.to_string()),
    }
}

fn english_fragment() -> Outcome {
    let clock = Instant::now();
    let a = parse_apsg(&fixture("english.apsg")).map_err(|e| e.to_string())?;
    let g = instantiate(&a).map_err(|e| e.to_string())?;
    let (d, report) = compile_with_report(&g, &CompileOptions::default()).map_err(|e| e.to_string())?;
    let elapsed = clock.elapsed();
    for s in ["i give a cake to tom", "tom sleeps", "i eat every nice cake"] {
        if !d.accepts(&s.split(' ').collect::<Vec<_>>()) {
            return Err(format!("rejects {s:?}"));
        }
    }
    for s in ["i sleeps", "i eats a cake", "i give", "tom eat"] {
        if d.accepts(&s.split(' ').collect::<Vec<_>>()) {
            return Err(format!("accepts {s:?}"));
        }
    }
    let sentences = enumerate_language(&g, 6);
    if let Some(w) = sentences.iter().find(|w| !d.accepts(w)) {
        return Err(format!("unsound on {:?}", w.join(" ")));
    }
    let vocabulary: Vec<String> = d.alphabet().iter().map(|s| s.name().to_string()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..10_000 {
        let len = rng.gen_range(0..=6);
        let w: Vec<&String> = (0..len).map(|_| vocabulary.choose(&mut rng).unwrap()).collect();
        if d.accepts(&w) != member(&g, &w) {
            return Err(format!("disagrees with the grammar on {w:?}"));
        }
    }
    if elapsed > Duration::from_secs(60) {
        return Err(format!("pipeline took {elapsed:?}"));
    }
    let whole = compile_with_report(
        &g,
        &CompileOptions {
            decompose: false,
            ..Default::default()
        },
    )
    .map_err(|e| e.to_string())?
    .1;
    let (flat_states, flat_transitions) = whole.flattened_size();
    Ok(format!(
        "{} sentences ≤ 6 accepted, 10000 samples agree; grammar {}+1 nonterminals / {}+1 rules (ref 78/157), \
         flattened {flat_states}/{flat_transitions} (ref 2615/4096), dfa {}/{} (ref 16/97), {:.1} ms",
        sentences.len(),
        report.input_nonterminals,
        report.input_rules,
        report.dfa_states,
        report.dfa_transitions,
        elapsed.as_secs_f64() * 1e3
    ))
}

fn random_cfgs() -> Vec<Grammar> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..200).map(|_| common::random_cfg(&mut rng, 5, 10, 3)).collect()
}

fn soundness() -> Outcome {
    let mut nonempty = 0;
    for (i, g) in random_cfgs().iter().enumerate() {
        let d = default_compile(g).map_err(|e| format!("grammar {i}: {e}\n{g}"))?;
        let sentences = enumerate_language(g, 8);
        nonempty += usize::from(!sentences.is_empty());
        if let Some(w) = sentences.iter().find(|w| !d.accepts(w)) {
            return Err(format!("grammar {i} rejects {:?}\n{g}", w.join(" ")));
        }
    }
    Ok(format!(
        "200 grammars ({nonempty} with nonempty languages), all sentences ≤ 8 accepted"
    ))
}

fn exact_on(name: &str, grammars: &[Grammar]) -> Result<(), String> {
    for (i, g) in grammars.iter().enumerate() {
        let d = default_compile(g).map_err(|e| format!("{name} {i}: {e}"))?;
        match check_dfa(g, &d, 8) {
            Verdict::Exact { .. } => {}
            v => return Err(format!("{name} grammar {i}: {v}\n{g}")),
        }
    }
    Ok(())
}

fn linear_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let left: Vec<Grammar> = (0..100)
        .map(|_| common::random_linear(&mut rng, Side::Left, 4, 8))
        .collect();
    let right: Vec<Grammar> = (0..100)
        .map(|_| common::random_linear(&mut rng, Side::Right, 4, 8))
        .collect();
    let mixed: Vec<Grammar> = (0..50).map(|_| common::random_layered(&mut rng)).collect();
    let mut both = 0;
    for (i, g) in mixed.iter().enumerate() {
        let g = &fsapprox::prune(g).grammar;
        let mut kinds = BTreeSet::new();
        for c in components(g) {
            let sub = defining_subgrammar(g, &c, &c.start);
            match classify_linearity(&sub) {
                Linearity::Neither => return Err(format!("mixed grammar {i} has a nonlinear component\n{g}")),
                k => kinds.insert(k),
            };
        }
        both += usize::from(kinds.len() == 2);
    }
    if both == 0 {
        return Err("no generated grammar mixes left- and right-linear components".into());
    }
    exact_on("left-linear", &left)?;
    exact_on("right-linear", &right)?;
    exact_on("mixed", &mixed)?;
    Ok(format!(
        "100 left-linear, 100 right-linear, 50 mixed ({both} with both kinds of component): exact ≤ 8"
    ))
}

fn flattened_dfa(g: &Grammar, congruence: Congruence) -> Dfa {
    let m = build_machine(g);
    let u = unfold_with(&m, congruence, 1_000_000).unwrap();
    minimize(&determinize(&flatten(&u)).unwrap())
}

fn unfolding_refines() -> Outcome {
    for (i, g) in random_cfgs().iter().enumerate() {
        let g = &fsapprox::prune(g).grammar;
        let fine = flattened_dfa(g, Congruence::LoopCollapsing);
        let coarse = flattened_dfa(g, Congruence::Trivial);
        if let Some(w) = enumerate_accepted(&fine, 6).into_iter().find(|w| !coarse.accepts(w)) {
            return Err(format!("grammar {i}: unfolded accepts {w:?}, trivial does not"));
        }
        let sentences = enumerate_language(g, 6);
        for unfold in [true, false] {
            let opts = CompileOptions {
                decompose: false,
                unfold,
                ..Default::default()
            };
            let d = compile(g, &opts).map_err(|e| e.to_string())?;
            if let Some(w) = sentences.iter().find(|w| !d.accepts(w)) {
                return Err(format!("grammar {i} (unfold {unfold}) rejects {w:?}"));
            }
        }
    }
    Ok("unfolded ⊆ trivial on 200 grammars; both whole-grammar paths sound".into())
}

fn blowup() -> Outcome {
    let mut counts = Vec::new();
    for n in 2..=4 {
        let sub = common::blowup_subgrammar(n);
        let m = build_machine(&sub);
        let u = unfold_with(&m, Congruence::LoopCollapsing, 1_000_000).map_err(|e| e.to_string())?;
        counts.push(u.num_states());
        let unfolded = minimize(&determinize(&flatten(&u)).unwrap());
        let (aut, stats) =
            approximate_component_with_stats(&sub, &CompileOptions::default()).map_err(|e| e.to_string())?;
        if !stats.unfolding_skipped || stats.unfolded_states != 0 {
            return Err(format!("n = {n}: right-linear component was unfolded"));
        }
        if !equivalent(&aut.fsa, &unfolded) {
            return Err(format!("n = {n}: exemption changed the component language"));
        }
        let g = common::blowup_grammar(n);
        let (exempt, report) = compile_with_report(&g, &CompileOptions::default()).map_err(|e| e.to_string())?;
        let whole = compile(
            &g,
            &CompileOptions {
                decompose: false,
                ..Default::default()
            },
        )
        .map_err(|e| e.to_string())?;
        if report.unfolded_states() != 0 {
            return Err(format!(
                "n = {n}: decomposed compile unfolded {} states",
                report.unfolded_states()
            ));
        }
        same_language(&format!("n = {n}"), &exempt, &whole)?;
    }
    let (c2, c3, c4) = (counts[0], counts[1], counts[2]);
    if !(c3 - c2 < c4 - c3 && c2 * 3 < c3 * 2 && c3 * 4 < c4 * 3) {
        return Err(format!("unfolded states {counts:?} do not grow super-linearly"));
    }
    Ok(format!(
        "unfolded states {c2}, {c3}, {c4}; exemption path unfolds nothing, same languages"
    ))
}

fn main() {
    let criteria: [(&str, Criterion); 10] = [
        ("G1 compiles to the minimal a*b automaton", g1_minimal),
        ("G2 exact with unfolding, coarse without", g2_unfolding),
        ("a^n b^n approximated by ε|a⁺b⁺", anbn_forgets_pairing),
        ("S -> aS | Sb | c is exactly a*cb*", acb_is_exact),
        ("noun-phrase grammar exact", noun_phrases),
        ("english fragment", english_fragment),
        ("soundness on random grammars", soundness),
        ("exactness on linear grammars", linear_exactness),
        ("unfolding refines the trivial congruence", unfolding_refines),
        ("unfolding blowup and right-linear exemption", blowup),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let clock = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = clock.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.2} s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2} s): {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
