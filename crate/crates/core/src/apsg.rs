//! Augmented phrase-structure grammars with finite feature domains, and their
//! expansion into equivalent context-free grammars.
//!
//! A category carries feature constraints written `cat#[f=V, g=val, h=(a,b), k=!]`:
//! a capitalized variable ties equal values across the rule, a value or value
//! set restricts the feature, and `!` (right-hand side only) copies the value
//! of the same-named feature of the left-hand side category. Features and
//! their domains are declared up front with `cat name#[f=(v1,...,vn), ...].`;
//! undeclared categories are featureless.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::grammar::{Grammar, Rule, Symbol, EPSILON_NAME};
use crate::syntax::{self, CatAst, ItemAst, SpecAst};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureDecl {
    pub category: String,
    /// Features in declaration order, each with its ordered, duplicate-free domain.
    pub features: Vec<(String, Vec<String>)>,
}

impl FeatureDecl {
    pub fn domain(&self, feature: &str) -> Option<&[String]> {
        self.features
            .iter()
            .find(|(f, _)| f == feature)
            .map(|(_, d)| d.as_slice())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeatureSpec {
    Variable(String),
    Value(String),
    ValueSet(Vec<String>),
    Inherit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureConstraint {
    pub feature: String,
    pub spec: FeatureSpec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryTerm {
    pub name: String,
    pub constraints: Vec<FeatureConstraint>,
}

impl CategoryTerm {
    fn constraint(&self, feature: &str) -> Option<&FeatureSpec> {
        self.constraints.iter().find(|c| c.feature == feature).map(|c| &c.spec)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ApsgItem {
    Category(CategoryTerm),
    Terminal(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApsgRule {
    pub lhs: CategoryTerm,
    pub rhs: Vec<ApsgItem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApsgGrammar {
    pub declarations: Vec<FeatureDecl>,
    pub start: String,
    pub rules: Vec<ApsgRule>,
}

impl ApsgGrammar {
    pub fn declaration(&self, category: &str) -> Option<&FeatureDecl> {
        self.declarations.iter().find(|d| d.category == category)
    }

    fn features_of(&self, category: &str) -> &[(String, Vec<String>)] {
        self.declaration(category).map(|d| d.features.as_slice()).unwrap_or(&[])
    }
}

/// Parses APSG source text and checks every constraint against the
/// category declarations.
pub fn parse_apsg(text: &str) -> Result<ApsgGrammar> {
    let doc = syntax::parse_document(text)?;

    let mut declarations: Vec<FeatureDecl> = Vec::new();
    for d in &doc.decls {
        if declarations.iter().any(|x| x.category == d.category) {
            return Err(Error::semantic(
                d.pos,
                format!("category `{}` declared twice", d.category),
            ));
        }
        let mut features: Vec<(String, Vec<String>)> = Vec::new();
        for (f, values, pos) in &d.features {
            if features.iter().any(|(g, _)| g == f) {
                return Err(Error::semantic(
                    *pos,
                    format!("feature `{f}` declared twice for `{}`", d.category),
                ));
            }
            let mut seen = HashSet::new();
            if let Some(v) = values.iter().find(|v| !seen.insert(*v)) {
                return Err(Error::semantic(
                    *pos,
                    format!("value `{v}` repeated in domain of `{f}`"),
                ));
            }
            features.push((f.clone(), values.clone()));
        }
        declarations.push(FeatureDecl {
            category: d.category.clone(),
            features,
        });
    }

    let start = match doc.starts.as_slice() {
        [] => return Err(Error::MissingStart),
        [(name, _)] => name.clone(),
        [_, (_, pos), ..] => return Err(Error::syntax(*pos, "duplicate `start` declaration")),
    };

    let decl_of = |name: &str| declarations.iter().find(|d| d.category == name);

    let convert = |c: &CatAst, lhs: Option<&CategoryTerm>| -> Result<CategoryTerm> {
        let decl = decl_of(&c.name);
        let mut constraints: Vec<FeatureConstraint> = Vec::new();
        for k in &c.constraints {
            let domain = decl.and_then(|d| d.domain(&k.feature)).ok_or_else(|| {
                Error::semantic(
                    k.pos,
                    format!("feature `{}` is not declared for category `{}`", k.feature, c.name),
                )
            })?;
            if constraints.iter().any(|x| x.feature == k.feature) {
                return Err(Error::semantic(
                    k.pos,
                    format!("feature `{}` constrained twice", k.feature),
                ));
            }
            let check = |v: &String| -> Result<()> {
                if domain.contains(v) {
                    Ok(())
                } else {
                    Err(Error::semantic(
                        k.pos,
                        format!(
                            "value `{v}` is not declared for feature `{}` of `{}`",
                            k.feature, c.name
                        ),
                    ))
                }
            };
            let spec = match &k.spec {
                SpecAst::Var(v) => FeatureSpec::Variable(v.clone()),
                SpecAst::Value(v) => {
                    check(v)?;
                    FeatureSpec::Value(v.clone())
                }
                SpecAst::Set(vs) => {
                    for v in vs {
                        check(v)?;
                    }
                    FeatureSpec::ValueSet(vs.clone())
                }
                SpecAst::Inherit => {
                    let Some(lhs) = lhs else {
                        return Err(Error::semantic(
                            k.pos,
                            "`!` may only appear on right-hand-side categories",
                        ));
                    };
                    if decl_of(&lhs.name).and_then(|d| d.domain(&k.feature)).is_none() {
                        return Err(Error::semantic(
                            k.pos,
                            format!(
                                "`{}=!` inherits from left-hand side `{}`, which has no feature `{}`",
                                k.feature, lhs.name, k.feature
                            ),
                        ));
                    }
                    FeatureSpec::Inherit
                }
            };
            constraints.push(FeatureConstraint {
                feature: k.feature.clone(),
                spec,
            });
        }
        Ok(CategoryTerm {
            name: c.name.clone(),
            constraints,
        })
    };

    let mut rules = Vec::new();
    for r in &doc.rules {
        let lhs = convert(&r.lhs, None)?;
        for (alt, _) in &r.alternatives {
            let mut rhs = Vec::with_capacity(alt.len());
            for item in alt {
                rhs.push(match item {
                    ItemAst::Cat(c) => ApsgItem::Category(convert(c, Some(&lhs))?),
                    ItemAst::Terminal(t, pos) => {
                        if t == EPSILON_NAME {
                            return Err(Error::syntax(*pos, "`eps` is reserved and cannot be a terminal"));
                        }
                        ApsgItem::Terminal(t.clone())
                    }
                });
            }
            rules.push(ApsgRule { lhs: lhs.clone(), rhs });
        }
    }

    let used = rules.iter().any(|r| {
        r.lhs.name == start
            || r.rhs
                .iter()
                .any(|i| matches!(i, ApsgItem::Category(c) if c.name == start))
    });
    if !used && decl_of(&start).is_none() {
        let pos = doc.starts[0].1;
        return Err(Error::semantic(
            pos,
            format!("start category `{start}` is neither declared nor used"),
        ));
    }

    Ok(ApsgGrammar {
        declarations,
        start,
        rules,
    })
}

/// Renders a fully instantiated category as `name#f1=v1#f2=v2`.
pub fn render_instance(category: &str, assignment: &[(&str, &str)]) -> String {
    let mut s = category.to_string();
    for (f, v) in assignment {
        s.push('#');
        s.push_str(f);
        s.push('=');
        s.push_str(v);
    }
    s
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // keep the smaller index as root so classes are ordered by first slot
        if ra < rb {
            self.0[rb] = ra;
        } else if rb < ra {
            self.0[ra] = rb;
        }
    }
}

struct Slot<'a> {
    occurrence: usize,
    feature: &'a str,
    domain: &'a [String],
}

/// Expands every rule of `g` into all consistent full feature assignments.
///
/// Rules are emitted per source rule in lexicographic order of the value
/// assignment (slots ordered left-hand side first, then right-hand side
/// categories left to right, features in declaration order). When the start
/// category has features, a fresh start symbol gets one rule per instance.
pub fn instantiate(g: &ApsgGrammar) -> Result<Grammar> {
    let mut rules: Vec<Rule> = Vec::new();
    let mut seen: HashSet<Rule> = HashSet::new();
    let mut push = |rule: Rule, rules: &mut Vec<Rule>| {
        if seen.insert(rule.clone()) {
            rules.push(rule);
        }
    };

    let start_features = g.features_of(&g.start);
    let mut body = Vec::new();
    for rule in &g.rules {
        for r in expand_rule(g, rule) {
            body.push(r);
        }
    }

    let start_name = if start_features.is_empty() {
        g.start.clone()
    } else {
        let mut taken: HashSet<&str> = HashSet::new();
        for r in &body {
            taken.insert(r.lhs.as_str());
            for s in &r.rhs {
                taken.insert(s.name());
            }
        }
        let mut name = format!("{}'", g.start);
        while taken.contains(name.as_str()) {
            name.push('\'');
        }
        let slots: Vec<&[String]> = start_features.iter().map(|(_, d)| d.as_slice()).collect();
        for_each_assignment(&slots, |values| {
            let assignment: Vec<(&str, &str)> = start_features
                .iter()
                .zip(values)
                .map(|((f, _), v)| (f.as_str(), v.as_str()))
                .collect();
            let inst = render_instance(&g.start, &assignment);
            push(Rule::new(name.clone(), vec![Symbol::Nonterminal(inst)]), &mut rules);
        });
        name
    };

    for r in body {
        push(r, &mut rules);
    }
    if !rules.iter().any(|r| r.lhs == start_name) {
        return Err(Error::UndefinedStart(start_name));
    }
    Grammar::new(start_name, rules)
}

/// Calls `f` with every tuple in the product of `domains`, first position
/// most significant.
fn for_each_assignment<'a>(domains: &[&'a [String]], mut f: impl FnMut(&[&'a String])) {
    if domains.iter().any(|d| d.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; domains.len()];
    let mut current: Vec<&String> = domains.iter().map(|d| &d[0]).collect();
    loop {
        f(&current);
        let mut k = domains.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < domains[k].len() {
                current[k] = &domains[k][idx[k]];
                break;
            }
            idx[k] = 0;
            current[k] = &domains[k][0];
        }
    }
}

fn expand_rule(g: &ApsgGrammar, rule: &ApsgRule) -> Vec<Rule> {
    let mut occurrences: Vec<&CategoryTerm> = vec![&rule.lhs];
    for item in &rule.rhs {
        if let ApsgItem::Category(c) = item {
            occurrences.push(c);
        }
    }

    let mut slots: Vec<Slot> = Vec::new();
    let mut first_slot: Vec<usize> = Vec::with_capacity(occurrences.len());
    for (o, term) in occurrences.iter().enumerate() {
        first_slot.push(slots.len());
        for (f, d) in g.features_of(&term.name) {
            slots.push(Slot {
                occurrence: o,
                feature: f,
                domain: d,
            });
        }
    }
    let slot_index = |o: usize, f: &str| -> Option<usize> {
        let lo = first_slot[o];
        let hi = first_slot.get(o + 1).copied().unwrap_or(slots.len());
        (lo..hi).find(|&i| slots[i].feature == f)
    };

    let mut uf = UnionFind((0..slots.len()).collect());
    let mut var_slot: HashMap<&str, usize> = HashMap::new();
    for (i, s) in slots.iter().enumerate() {
        match occurrences[s.occurrence].constraint(s.feature) {
            Some(FeatureSpec::Variable(v)) => {
                if let Some(&j) = var_slot.get(v.as_str()) {
                    uf.union(i, j);
                } else {
                    var_slot.insert(v, i);
                }
            }
            Some(FeatureSpec::Inherit) => {
                let j = slot_index(0, s.feature).expect("inheritance checked at parse time");
                uf.union(i, j);
            }
            _ => {}
        }
    }

    // Allowed values per class, in the domain order of the class's first slot.
    let mut class_values: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for (i, s) in slots.iter().enumerate() {
        let root = uf.find(i);
        let allowed: Vec<&String> = match occurrences[s.occurrence].constraint(s.feature) {
            Some(FeatureSpec::Value(v)) => s.domain.iter().filter(|d| *d == v).collect(),
            Some(FeatureSpec::ValueSet(vs)) => s.domain.iter().filter(|d| vs.contains(d)).collect(),
            _ => s.domain.iter().collect(),
        };
        class_values
            .entry(root)
            .and_modify(|vals| vals.retain(|v| allowed.contains(&v)))
            .or_insert_with(|| allowed.into_iter().cloned().collect());
    }
    let roots: Vec<usize> = class_values.keys().copied().collect();
    let domains: Vec<&[String]> = class_values.values().map(Vec::as_slice).collect();
    let slot_class: Vec<usize> = (0..slots.len())
        .map(|i| {
            let r = uf.find(i);
            roots.binary_search(&r).expect("every slot has a class")
        })
        .collect();

    let mut out = Vec::new();
    let render = |o: usize, values: &[&String]| -> String {
        let term = occurrences[o];
        let lo = first_slot[o];
        let hi = first_slot.get(o + 1).copied().unwrap_or(slots.len());
        let assignment: Vec<(&str, &str)> = (lo..hi)
            .map(|i| (slots[i].feature, values[slot_class[i]].as_str()))
            .collect();
        render_instance(&term.name, &assignment)
    };
    let emit = |values: &[&String]| {
        let lhs = render(0, values);
        let mut o = 0;
        let rhs = rule
            .rhs
            .iter()
            .map(|item| match item {
                ApsgItem::Terminal(t) => Symbol::Terminal(t.clone()),
                ApsgItem::Category(_) => {
                    o += 1;
                    Symbol::Nonterminal(render(o, values))
                }
            })
            .collect();
        Rule::new(lhs, rhs)
    };
    if domains.is_empty() {
        out.push(emit(&[]));
    } else {
        for_each_assignment(&domains, |values| out.push(emit(values)));
    }
    out
}

impl fmt::Display for FeatureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureSpec::Variable(v) | FeatureSpec::Value(v) => f.write_str(v),
            FeatureSpec::ValueSet(vs) => write!(f, "({})", vs.join(",")),
            FeatureSpec::Inherit => f.write_str("!"),
        }
    }
}
