//! Descendant-tree paths such as `⟨2187,3⟩-#3;2-#2;93[-#1;1]^3-#1;2`.
//!
//! A path starts at a root `⟨order,index⟩` and lists steps `-#s;k`: take
//! the `k`-th immediate descendant of step size `s`. A bracketed group
//! `[...]^n` repeats its steps `n` times. Both `⟨⟩` and `<>` are accepted
//! for the root, and both `-` and `−` (U+2212) for the step prefix.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Step {
    pub step: usize,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TreePath {
    /// Root as `(order, index)`.
    pub root: (u64, u64),
    /// Expanded steps.
    pub steps: Vec<Step>,
}

impl TreePath {
    pub fn root_only(order: u64, index: u64) -> Self {
        TreePath { root: (order, index), steps: Vec::new() }
    }

    /// The path with one more step.
    pub fn child(&self, step: usize, index: usize) -> Self {
        let mut p = self.clone();
        p.steps.push(Step { step, index });
        p
    }

    /// The first `k` steps.
    pub fn prefix(&self, k: usize) -> Self {
        TreePath { root: self.root, steps: self.steps[..k].to_vec() }
    }
}

impl fmt::Display for TreePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{},{}⟩", self.root.0, self.root.1)?;
        for s in &self.steps {
            write!(f, "-#{};{}", s.step, s.index)?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, what: &str) -> Error {
        Error::syntax(1, self.pos + 1, format!("{what} in tree path `{}`", self.src))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("number out of range"))
    }

    fn positive(&mut self, what: &str) -> Result<usize> {
        let n = self.number()?;
        if n == 0 {
            return Err(self.err(&format!("{what} must be at least 1")));
        }
        Ok(n as usize)
    }

    fn steps(&mut self, out: &mut Vec<Step>, nested: bool) -> Result<()> {
        loop {
            self.skip_ws();
            match self.peek() {
                Some('-') | Some('−') => {
                    self.pos += 1;
                    self.expect('#')?;
                    let step = self.positive("step size")?;
                    self.expect(';')?;
                    let index = self.positive("child index")?;
                    out.push(Step { step, index });
                }
                Some('[') => {
                    self.pos += 1;
                    let mut inner = Vec::new();
                    self.steps(&mut inner, true)?;
                    self.expect(']')?;
                    self.expect('^')?;
                    let n = self.number()? as usize;
                    for _ in 0..n {
                        out.extend_from_slice(&inner);
                    }
                }
                Some(']') if nested => return Ok(()),
                None if !nested => return Ok(()),
                _ => return Err(self.err("expected `-#s;k` or `[`")),
            }
        }
    }
}

pub fn parse_tree_path(text: &str) -> Result<TreePath> {
    let mut p = Parser { src: text, chars: text.chars().collect(), pos: 0 };
    p.skip_ws();
    let close = match p.peek() {
        Some('⟨') => '⟩',
        Some('<') => '>',
        _ => return Err(p.err("expected `⟨` or `<`")),
    };
    p.pos += 1;
    let order = p.number()?;
    p.expect(',')?;
    let index = p.number()?;
    p.expect(close)?;
    let mut steps = Vec::new();
    p.steps(&mut steps, false)?;
    Ok(TreePath { root: (order, index), steps })
}

impl FromStr for TreePath {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_tree_path(s)
    }
}
