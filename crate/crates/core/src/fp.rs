//! Words and finitely presented groups, with the `.fpg` text format.
//!
//! ```text
//! # comment
//! gens x,y;
//! abbrev;                      # standard s2=[y,x], s3=[s2,x], t3=[s2,y], ...
//! rel x^{3^2}=1, y^3=s3*s4^2, s2^3=s4*t4^2, [x^3,y]=s4*t4;
//! ```
//!
//! Abbreviations are macros: they are expanded into words over the declared
//! generators while parsing, so relators never mention them.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// A free-group word as a list of `(generator, exponent)` factors.
///
/// Adjacent factors on the same generator are fused and zero exponents are
/// dropped on construction, so the representation is freely reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    factors: Vec<(String, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(name: &str) -> Self {
        Word { factors: vec![(name.to_string(), 1)] }
    }

    pub fn from_factors<S: Into<String>>(factors: impl IntoIterator<Item = (S, i64)>) -> Self {
        let mut w = Word::identity();
        for (g, e) in factors {
            w.push(g, e);
        }
        w
    }

    pub fn factors(&self) -> &[(String, i64)] {
        &self.factors
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// Append `g^e`, fusing with the last factor when possible.
    pub fn push(&mut self, g: impl Into<String>, e: i64) {
        let g = g.into();
        if e == 0 {
            return;
        }
        if let Some(last) = self.factors.last_mut() {
            if last.0 == g {
                last.1 += e;
                if last.1 == 0 {
                    self.factors.pop();
                }
                return;
            }
        }
        self.factors.push((g, e));
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for (g, e) in &other.factors {
            w.push(g.clone(), *e);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word::from_factors(self.factors.iter().rev().map(|(g, e)| (g.clone(), -e)))
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::identity();
        for _ in 0..k.unsigned_abs() {
            w = w.mul(&base);
        }
        w
    }

    /// The commutator `[a,b] = a^-1 b^-1 a b`.
    pub fn comm(a: &Word, b: &Word) -> Word {
        a.inverse().mul(&b.inverse()).mul(a).mul(b)
    }

    /// Total exponent of each generator.
    pub fn exponent_sums(&self) -> HashMap<&str, i64> {
        let mut m = HashMap::new();
        for (g, e) in &self.factors {
            *m.entry(g.as_str()).or_insert(0) += e;
        }
        m
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (k, (g, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A finitely presented group: generators and relators (words equal to 1).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FpPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl FpPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let fp = FpPresentation { generators, relators };
        fp.validate()?;
        Ok(fp)
    }

    /// Every relator must mention declared generators only.
    pub fn validate(&self) -> Result<()> {
        for r in &self.relators {
            for (g, _) in r.factors() {
                if !self.generators.contains(g) {
                    return Err(Error::UndeclaredGenerator(g.clone()));
                }
            }
        }
        Ok(())
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }
}

impl fmt::Display for FpPresentation {
    /// Normalized `.fpg` output: relators only, abbreviations expanded.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gens {};", self.generators.join(","))?;
        if !self.relators.is_empty() {
            let rels: Vec<String> = self.relators.iter().map(|r| r.to_string()).collect();
            writeln!(f, "rel {};", rels.join(", "))?;
        }
        Ok(())
    }
}

/// The standard higher commutators in the two generators `x`, `y`:
/// `s2=[y,x]`, `s3=[s2,x]`, `t3=[s2,y]`, `s4=[s3,x]`, `t4=[t3,y]`,
/// `s5=[s4,x]`, `t5=[t4,y]`.
pub fn standard_commutators(x: &str, y: &str) -> Vec<(String, Word)> {
    let xw = Word::generator(x);
    let yw = Word::generator(y);
    let s2 = Word::comm(&yw, &xw);
    let s3 = Word::comm(&s2, &xw);
    let t3 = Word::comm(&s2, &yw);
    let s4 = Word::comm(&s3, &xw);
    let t4 = Word::comm(&t3, &yw);
    let s5 = Word::comm(&s4, &xw);
    let t5 = Word::comm(&t4, &yw);
    vec![
        ("s2".into(), s2),
        ("s3".into(), s3),
        ("t3".into(), t3),
        ("s4".into(), s4),
        ("t4".into(), t4),
        ("s5".into(), s5),
        ("t5".into(), t5),
    ]
}

/// Parse `.fpg` source text.
pub fn parse_fp(text: &str) -> Result<FpPresentation> {
    let tokens = lex(text)?;
    let mut p = Parser { toks: tokens, pos: 0, gens: Vec::new(), abbrevs: HashMap::new() };
    let mut relators = Vec::new();
    while !p.at_end() {
        let (kw, line, col) = p.expect_ident()?;
        match kw.as_str() {
            "gens" => {
                loop {
                    let (name, l, c) = p.expect_ident()?;
                    if p.gens.contains(&name) {
                        return Err(Error::syntax(l, c, format!("duplicate generator `{name}`")));
                    }
                    p.gens.push(name);
                    if !p.eat(&Tok::Comma) {
                        break;
                    }
                }
                p.expect(&Tok::Semi)?;
            }
            "abbrev" => {
                if p.eat(&Tok::Semi) {
                    if p.gens.len() < 2 {
                        return Err(Error::syntax(line, col, "standard abbreviations need two generators"));
                    }
                    let (x, y) = (p.gens[0].clone(), p.gens[1].clone());
                    for (name, w) in standard_commutators(&x, &y) {
                        p.abbrevs.insert(name, w);
                    }
                    continue;
                }
                loop {
                    let (name, l, c) = p.expect_ident()?;
                    if p.gens.contains(&name) {
                        return Err(Error::syntax(l, c, format!("`{name}` is already a generator")));
                    }
                    p.expect(&Tok::Eq)?;
                    let w = p.word()?;
                    p.abbrevs.insert(name, w);
                    if !p.eat(&Tok::Comma) {
                        break;
                    }
                }
                p.expect(&Tok::Semi)?;
            }
            "rel" => {
                loop {
                    let lhs = p.word()?;
                    let r = if p.eat(&Tok::Eq) {
                        let rhs = p.word()?;
                        lhs.mul(&rhs.inverse())
                    } else {
                        lhs
                    };
                    relators.push(r);
                    if !p.eat(&Tok::Comma) {
                        break;
                    }
                }
                p.expect(&Tok::Semi)?;
            }
            other => {
                return Err(Error::syntax(line, col, format!("unknown statement `{other}`")));
            }
        }
    }
    FpPresentation::new(p.gens, relators)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Comma,
    Semi,
    Eq,
    Star,
    Caret,
    Minus,
    LBracket,
    RBracket,
    LParen,
    RParen,
    LBrace,
    RBrace,
}

struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let line_no = li + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let simple = match c {
                ',' => Some(Tok::Comma),
                ';' => Some(Tok::Semi),
                '=' => Some(Tok::Eq),
                '*' => Some(Tok::Star),
                '^' => Some(Tok::Caret),
                '-' => Some(Tok::Minus),
                '[' => Some(Tok::LBracket),
                ']' => Some(Tok::RBracket),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                '{' => Some(Tok::LBrace),
                '}' => Some(Tok::RBrace),
                _ => None,
            };
            if let Some(tok) = simple {
                out.push(Spanned { tok, line: line_no, col });
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let v = s
                    .parse::<i64>()
                    .map_err(|_| Error::syntax(line_no, col, format!("integer `{s}` out of range")))?;
                out.push(Spanned { tok: Tok::Int(v), line: line_no, col });
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Spanned { tok: Tok::Ident(chars[start..i].iter().collect()), line: line_no, col });
            } else {
                return Err(Error::syntax(line_no, col, format!("unexpected character `{c}`")));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    gens: Vec<String>,
    abbrevs: HashMap<String, Word>,
}

impl Parser {
    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos).or_else(|| self.toks.last()) {
            Some(t) => (t.line, t.col),
            None => (1, 1),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (l, c) = self.here();
        Err(Error::syntax(l, c, msg))
    }

    fn expect(&mut self, t: &Tok) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            self.err(format!("expected {t:?}, found {:?}", self.peek()))
        }
    }

    fn expect_ident(&mut self) -> Result<(String, usize, usize)> {
        match self.toks.get(self.pos) {
            Some(Spanned { tok: Tok::Ident(s), line, col }) => {
                let r = (s.clone(), *line, *col);
                self.pos += 1;
                Ok(r)
            }
            _ => self.err(format!("expected identifier, found {:?}", self.peek())),
        }
    }

    fn word(&mut self) -> Result<Word> {
        let mut w = self.factor()?;
        while self.eat(&Tok::Star) {
            let f = self.factor()?;
            w = w.mul(&f);
        }
        Ok(w)
    }

    fn factor(&mut self) -> Result<Word> {
        let base = match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                let (l, c) = self.here();
                self.pos += 1;
                if self.gens.contains(&name) {
                    Word::generator(&name)
                } else if let Some(w) = self.abbrevs.get(&name) {
                    w.clone()
                } else {
                    let _ = (l, c);
                    return Err(Error::UndeclaredGenerator(name));
                }
            }
            Some(Tok::Int(1)) => {
                self.pos += 1;
                Word::identity()
            }
            Some(Tok::LBracket) => {
                self.pos += 1;
                // Left-normed: [a,b,c] = [[a,b],c].
                let mut a = self.word()?;
                self.expect(&Tok::Comma)?;
                loop {
                    let b = self.word()?;
                    a = Word::comm(&a, &b);
                    if self.peek() == Some(&Tok::Comma) {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                self.expect(&Tok::RBracket)?;
                a
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let a = self.word()?;
                self.expect(&Tok::RParen)?;
                a
            }
            other => return self.err(format!("expected a word, found {other:?}")),
        };
        if self.eat(&Tok::Caret) {
            let k = self.exponent()?;
            Ok(base.pow(k))
        } else {
            Ok(base)
        }
    }

    /// `int`, `-int`, or a braced power tower such as `{3^2}`.
    fn exponent(&mut self) -> Result<i64> {
        if self.eat(&Tok::LBrace) {
            let neg = self.eat(&Tok::Minus);
            let mut v = self.int()?;
            let mut tower = Vec::new();
            while self.eat(&Tok::Caret) {
                tower.push(self.int()?);
            }
            // right-associative: a^b^c = a^(b^c)
            let mut exp: Option<i64> = None;
            for t in tower.into_iter().rev() {
                exp = Some(match exp {
                    None => t,
                    Some(e) => checked_pow(t, e).ok_or_else(|| self.overflow())?,
                });
            }
            if let Some(e) = exp {
                v = checked_pow(v, e).ok_or_else(|| self.overflow())?;
            }
            self.expect(&Tok::RBrace)?;
            Ok(if neg { -v } else { v })
        } else {
            let neg = self.eat(&Tok::Minus);
            let v = self.int()?;
            Ok(if neg { -v } else { v })
        }
    }

    fn overflow(&self) -> Error {
        let (l, c) = self.here();
        Error::syntax(l, c, "exponent overflow")
    }

    fn int(&mut self) -> Result<i64> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(v)
            }
            other => self.err(format!("expected integer, found {other:?}")),
        }
    }
}

fn checked_pow(base: i64, exp: i64) -> Option<i64> {
    let e = u32::try_from(exp).ok()?;
    base.checked_pow(e)
}
