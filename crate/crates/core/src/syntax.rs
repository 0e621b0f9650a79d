//! Tokenizer and statement parser shared by the plain CFG format and the
//! feature-annotated APSG notation.
//!
//! Both dialects are sequences of `.`-terminated statements:
//!
//! ```text
//! start s.                              % start declaration
//! cat np#[n=(s,p), p=(1,2,3)].          % category declaration (APSG only)
//! np#[p=3] => det#[n=!], adjs, n#[n=!]. % rule; `|` separates alternatives
//! adjs => [] | adj, adjs.               % `[]` is the empty sequence
//! ```
//!
//! Category names may carry instantiated feature suffixes (`np#n=s#p=3`) and
//! trailing primes (`s'`); this is how instantiated grammars are written back
//! out as plain CFG text.

use crate::error::{Error, Pos, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    /// Lowercase- or digit-initial word, possibly with `#f=v` suffixes and primes.
    Ident(String),
    /// Capitalized word (feature variable).
    Var(String),
    /// Backquoted terminal, without the quote.
    Terminal(String),
    Dot,
    Comma,
    Bar,
    Arrow,
    Eq,
    LParen,
    RParen,
    HashBracket,
    LBracket,
    RBracket,
    Bang,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Var(s) => format!("variable `{s}`"),
            Tok::Terminal(s) => format!("terminal `{s}"),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`=>`".into(),
            Tok::Eq => "`=`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::HashBracket => "`#[`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Characters that end a backquoted terminal.
fn ends_terminal(c: char) -> bool {
    c.is_whitespace() || matches!(c, ',' | '|' | '.' | '%' | '(' | ')' | '[' | ']' | '#' | '`')
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let (mut line, mut col) = (1usize, 1usize);

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        let single = match c {
            '.' => Some(Tok::Dot),
            ',' => Some(Tok::Comma),
            '|' => Some(Tok::Bar),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '!' => Some(Tok::Bang),
            _ => None,
        };
        if let Some(tok) = single {
            bump!();
            out.push((tok, pos));
            continue;
        }
        match c {
            '=' => {
                bump!();
                if i < chars.len() && chars[i] == '>' {
                    bump!();
                    out.push((Tok::Arrow, pos));
                } else {
                    out.push((Tok::Eq, pos));
                }
            }
            '#' => {
                bump!();
                if i < chars.len() && chars[i] == '[' {
                    bump!();
                    out.push((Tok::HashBracket, pos));
                } else {
                    return Err(Error::syntax(pos, "expected `[` after `#`"));
                }
            }
            '`' => {
                bump!();
                let start = i;
                while i < chars.len() && !ends_terminal(chars[i]) {
                    bump!();
                }
                if start == i {
                    return Err(Error::syntax(pos, "empty terminal after backquote"));
                }
                let word: String = chars[start..i].iter().collect();
                out.push((Tok::Terminal(word), pos));
            }
            c if c.is_ascii_uppercase() => {
                let start = i;
                while i < chars.len() && is_word_char(chars[i]) {
                    bump!();
                }
                out.push((Tok::Var(chars[start..i].iter().collect()), pos));
            }
            c if c.is_ascii_lowercase() || c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && is_word_char(chars[i]) {
                    bump!();
                }
                // Instantiated suffixes `#feature=value`, only when `#` is not `#[`.
                while i + 1 < chars.len() && chars[i] == '#' && is_word_char(chars[i + 1]) {
                    bump!();
                    while i < chars.len() && is_word_char(chars[i]) {
                        bump!();
                    }
                    if i < chars.len() && chars[i] == '=' && i + 1 < chars.len() && is_word_char(chars[i + 1]) {
                        bump!();
                        while i < chars.len() && is_word_char(chars[i]) {
                            bump!();
                        }
                    } else {
                        return Err(Error::syntax(
                            Pos { line, column: col },
                            "expected `=value` in instantiated category suffix",
                        ));
                    }
                }
                while i < chars.len() && chars[i] == '\'' {
                    bump!();
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            }
            other => {
                return Err(Error::syntax(pos, format!("unexpected character `{other}`")));
            }
        }
    }
    out.push((Tok::Eof, Pos { line, column: col }));
    Ok(out)
}

/// Value of a feature constraint as written in source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum SpecAst {
    Var(String),
    Value(String),
    Set(Vec<String>),
    Inherit,
}

#[derive(Debug, Clone)]
pub(crate) struct ConstraintAst {
    pub feature: String,
    pub spec: SpecAst,
    pub pos: Pos,
}

#[derive(Debug, Clone)]
pub(crate) struct CatAst {
    pub name: String,
    pub constraints: Vec<ConstraintAst>,
    pub pos: Pos,
    /// True when the term was written with a `#[...]` list (even an empty one).
    pub annotated: bool,
}

#[derive(Debug, Clone)]
pub(crate) enum ItemAst {
    Cat(CatAst),
    Terminal(String, Pos),
}

#[derive(Debug, Clone)]
pub(crate) struct RuleAst {
    pub lhs: CatAst,
    pub alternatives: Vec<(Vec<ItemAst>, Pos)>,
}

#[derive(Debug, Clone)]
pub(crate) struct DeclAst {
    pub category: String,
    pub features: Vec<(String, Vec<String>, Pos)>,
    pub pos: Pos,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Document {
    pub starts: Vec<(String, Pos)>,
    pub decls: Vec<DeclAst>,
    pub rules: Vec<RuleAst>,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let idx = (self.at + k).min(self.toks.len() - 1);
        &self.toks[idx].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T> {
        Err(Error::syntax(
            self.pos(),
            format!("expected {wanted}, found {}", self.peek().describe()),
        ))
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<Pos> {
        if *self.peek() == tok {
            Ok(self.next().1)
        } else {
            self.unexpected(wanted)
        }
    }

    fn category_name(&mut self) -> Result<(String, Pos)> {
        match self.peek().clone() {
            Tok::Ident(name) if name.starts_with(|c: char| c.is_ascii_lowercase()) => {
                let pos = self.next().1;
                Ok((name, pos))
            }
            _ => self.unexpected("a category name"),
        }
    }

    fn value(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(v) if v.chars().all(is_word_char) => {
                self.next();
                Ok(v)
            }
            _ => self.unexpected("a feature value"),
        }
    }

    fn value_set(&mut self) -> Result<Vec<String>> {
        self.expect(Tok::LParen, "`(`")?;
        let mut values = vec![self.value()?];
        while *self.peek() == Tok::Comma {
            self.next();
            values.push(self.value()?);
        }
        self.expect(Tok::RParen, "`,` or `)`")?;
        Ok(values)
    }

    fn feature_name(&mut self) -> Result<(String, Pos)> {
        match self.peek().clone() {
            Tok::Ident(f) if f.chars().all(is_word_char) => {
                let pos = self.next().1;
                Ok((f, pos))
            }
            _ => self.unexpected("a feature name"),
        }
    }

    fn cat_term(&mut self) -> Result<CatAst> {
        let (name, pos) = self.category_name()?;
        let mut constraints = Vec::new();
        let mut annotated = false;
        if *self.peek() == Tok::HashBracket {
            annotated = true;
            self.next();
            if *self.peek() != Tok::RBracket {
                loop {
                    let (feature, fpos) = self.feature_name()?;
                    self.expect(Tok::Eq, "`=`")?;
                    let spec = match self.peek().clone() {
                        Tok::Var(v) => {
                            self.next();
                            SpecAst::Var(v)
                        }
                        Tok::Bang => {
                            self.next();
                            SpecAst::Inherit
                        }
                        Tok::LParen => SpecAst::Set(self.value_set()?),
                        Tok::Ident(_) => SpecAst::Value(self.value()?),
                        _ => return self.unexpected("a variable, value, value set or `!`"),
                    };
                    constraints.push(ConstraintAst {
                        feature,
                        spec,
                        pos: fpos,
                    });
                    if *self.peek() == Tok::Comma {
                        self.next();
                    } else {
                        break;
                    }
                }
            }
            self.expect(Tok::RBracket, "`,` or `]`")?;
        }
        Ok(CatAst {
            name,
            constraints,
            pos,
            annotated,
        })
    }

    fn alternative(&mut self) -> Result<(Vec<ItemAst>, Pos)> {
        let pos = self.pos();
        if *self.peek() == Tok::LBracket {
            self.next();
            self.expect(Tok::RBracket, "`]`")?;
            return Ok((Vec::new(), pos));
        }
        let mut items = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Terminal(t) => {
                    let p = self.next().1;
                    items.push(ItemAst::Terminal(t, p));
                }
                Tok::Ident(_) => items.push(ItemAst::Cat(self.cat_term()?)),
                _ => return self.unexpected("a category, a terminal or `[]`"),
            }
            if *self.peek() == Tok::Comma {
                self.next();
            } else {
                break;
            }
        }
        Ok((items, pos))
    }

    fn declaration(&mut self) -> Result<DeclAst> {
        let pos = self.next().1; // `cat`
        let (category, _) = self.category_name()?;
        let mut features = Vec::new();
        if *self.peek() == Tok::HashBracket {
            self.next();
            if *self.peek() != Tok::RBracket {
                loop {
                    let (feature, fpos) = self.feature_name()?;
                    self.expect(Tok::Eq, "`=`")?;
                    let values = self.value_set()?;
                    features.push((feature, values, fpos));
                    if *self.peek() == Tok::Comma {
                        self.next();
                    } else {
                        break;
                    }
                }
            }
            self.expect(Tok::RBracket, "`,` or `]`")?;
        }
        self.expect(Tok::Dot, "`.`")?;
        Ok(DeclAst {
            category,
            features,
            pos,
        })
    }

    fn document(&mut self) -> Result<Document> {
        let mut doc = Document::default();
        loop {
            match self.peek().clone() {
                Tok::Eof => break,
                Tok::Ident(kw)
                    if kw == "start" && matches!(self.peek_at(1), Tok::Ident(_)) && *self.peek_at(2) == Tok::Dot =>
                {
                    self.next();
                    let (name, pos) = self.category_name()?;
                    self.expect(Tok::Dot, "`.`")?;
                    doc.starts.push((name, pos));
                }
                Tok::Ident(kw)
                    if kw == "cat"
                        && matches!(self.peek_at(1), Tok::Ident(_))
                        && matches!(self.peek_at(2), Tok::HashBracket | Tok::Dot) =>
                {
                    doc.decls.push(self.declaration()?);
                }
                Tok::Ident(_) => {
                    let lhs = self.cat_term()?;
                    self.expect(Tok::Arrow, "`=>`")?;
                    let mut alternatives = vec![self.alternative()?];
                    while *self.peek() == Tok::Bar {
                        self.next();
                        alternatives.push(self.alternative()?);
                    }
                    self.expect(Tok::Dot, "`|`, `,` or `.`")?;
                    doc.rules.push(RuleAst { lhs, alternatives });
                }
                _ => return self.unexpected("a declaration or rule"),
            }
        }
        Ok(doc)
    }
}

pub(crate) fn parse_document(text: &str) -> Result<Document> {
    let toks = tokenize(text)?;
    Parser { toks, at: 0 }.document()
}
