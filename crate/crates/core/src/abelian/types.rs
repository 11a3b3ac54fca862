//! Logarithmic abelian type invariants and symbolic patterns in `e`.
//!
//! A finite abelian p-group `C_{p^a} x C_{p^b} x ...` is written by its
//! logarithms in nonincreasing order: `(9,3)` is `21`, `(3,3,3)` is `111`.
//! Logarithms above 9 are parenthesized, so `(10)21` is unambiguous; the
//! trivial group is `0`.
//!
//! Patterns replace digits by symbols in a parameter `e`: `e` itself, `e+`
//! (= e+1), `e-` (= e-1), or `(e+k)` / `(e-k)`. Multisets of patterns use
//! `pat^k` for multiplicity and `{a|b}` for alternatives, where
//! `{a|b}^3` means three copies of one of the alternatives.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianType {
    logs: Vec<u32>,
}

impl AbelianType {
    pub fn new(mut logs: Vec<u32>) -> Self {
        logs.retain(|&l| l > 0);
        logs.sort_unstable_by(|a, b| b.cmp(a));
        AbelianType { logs }
    }

    pub fn trivial() -> Self {
        AbelianType::default()
    }

    pub fn logs(&self) -> &[u32] {
        &self.logs
    }

    /// Number of cyclic factors (the p-rank).
    pub fn rank(&self) -> usize {
        self.logs.len()
    }

    /// Logarithm of the order.
    pub fn log_order(&self) -> u32 {
        self.logs.iter().sum()
    }

    pub fn is_cyclic(&self) -> bool {
        self.logs.len() <= 1
    }
}

fn write_log(f: &mut impl fmt::Write, l: u32) -> fmt::Result {
    if l <= 9 {
        write!(f, "{l}")
    } else {
        write!(f, "({l})")
    }
}

impl fmt::Display for AbelianType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.logs.is_empty() {
            return write!(f, "0");
        }
        for &l in &self.logs {
            write_log(f, l)?;
        }
        Ok(())
    }
}

impl Serialize for AbelianType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for AbelianType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let pat: TypePattern = s.parse()?;
        if pat.entries.iter().any(|x| matches!(x, SymLog::E(_))) {
            return Err(Error::InvalidArgument(format!("`{s}` is a pattern, not a type")));
        }
        Ok(pat.eval(0).expect("literal pattern"))
    }
}

/// One symbolic logarithm: a literal or `e + offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymLog {
    Lit(u32),
    E(i32),
}

impl SymLog {
    pub fn eval(self, e: u32) -> Option<u32> {
        match self {
            SymLog::Lit(v) => Some(v),
            SymLog::E(d) => u32::try_from(e as i64 + d as i64).ok(),
        }
    }
}

impl fmt::Display for SymLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SymLog::Lit(v) => write_log(f, v),
            SymLog::E(0) => write!(f, "e"),
            SymLog::E(1) => write!(f, "e+"),
            SymLog::E(-1) => write!(f, "e-"),
            SymLog::E(d) if d > 0 => write!(f, "(e+{d})"),
            SymLog::E(d) => write!(f, "(e{d})"),
        }
    }
}

/// A symbolic abelian type such as `e2111` or `(e+1)211`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypePattern {
    pub entries: Vec<SymLog>,
}

impl TypePattern {
    /// Evaluate at `e`; `None` if some entry would be negative.
    pub fn eval(&self, e: u32) -> Option<AbelianType> {
        let logs: Option<Vec<u32>> = self.entries.iter().map(|s| s.eval(e)).collect();
        Some(AbelianType::new(logs?))
    }

    pub fn literal(t: &AbelianType) -> Self {
        TypePattern { entries: t.logs.iter().map(|&l| SymLog::Lit(l)).collect() }
    }
}

impl fmt::Display for TypePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        for s in &self.entries {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for TypePattern {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::InvalidArgument(format!("bad type pattern `{s}`: {m}"));
        let chars: Vec<char> = s.trim().chars().collect();
        let mut entries = Vec::new();
        let mut i = 0;
        if chars == ['0'] {
            return Ok(TypePattern { entries });
        }
        while i < chars.len() {
            match chars[i] {
                c @ '1'..='9' => {
                    entries.push(SymLog::Lit(c.to_digit(10).unwrap()));
                    i += 1;
                }
                'e' => {
                    i += 1;
                    let d = match chars.get(i) {
                        Some('+') | Some('⁺') => {
                            i += 1;
                            1
                        }
                        Some('-') | Some('⁻') => {
                            i += 1;
                            -1
                        }
                        _ => 0,
                    };
                    entries.push(SymLog::E(d));
                }
                '(' => {
                    let close = chars[i..].iter().position(|&c| c == ')').ok_or_else(|| bad("unclosed `(`"))? + i;
                    let inner: String = chars[i + 1..close].iter().filter(|c| !c.is_whitespace()).collect();
                    i = close + 1;
                    if let Some(rest) = inner.strip_prefix('e') {
                        let d: i32 = if rest.is_empty() {
                            0
                        } else {
                            let sign = match rest.chars().next() {
                                Some('+') => 1,
                                Some('-') => -1,
                                _ => return Err(bad("expected e+k or e-k")),
                            };
                            sign * rest[1..].parse::<i32>().map_err(|_| bad("bad offset"))?
                        };
                        entries.push(SymLog::E(d));
                    } else {
                        let v: u32 = inner.parse().map_err(|_| bad("bad literal"))?;
                        if v == 0 {
                            return Err(bad("zero logarithm"));
                        }
                        entries.push(SymLog::Lit(v));
                    }
                }
                c => return Err(bad(&format!("unexpected `{c}`"))),
            }
        }
        if entries.is_empty() {
            return Err(bad("empty"));
        }
        Ok(TypePattern { entries })
    }
}

/// Whether `t` is the value of `pat` at `e`.
pub fn match_pattern(t: &AbelianType, pat: &TypePattern, e: u32) -> bool {
    pat.eval(e).as_ref() == Some(t)
}

/// A multiset of patterns: items with alternatives and a multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultisetPattern {
    pub items: Vec<(Vec<TypePattern>, usize)>,
}

impl MultisetPattern {
    pub fn size(&self) -> usize {
        self.items.iter().map(|(_, k)| k).sum()
    }

    /// Whether `types` equals the pattern for some choice of alternatives.
    pub fn matches(&self, types: &[AbelianType], e: u32) -> bool {
        if types.len() != self.size() {
            return false;
        }
        let mut sorted = types.to_vec();
        sorted.sort();
        let mut choice = vec![0usize; self.items.len()];
        loop {
            let mut expected = Vec::with_capacity(types.len());
            let mut ok = true;
            for ((alts, k), &c) in self.items.iter().zip(&choice) {
                match alts[c].eval(e) {
                    Some(t) => expected.extend(std::iter::repeat_n(t, *k)),
                    None => ok = false,
                }
            }
            if ok {
                expected.sort();
                if expected == sorted {
                    return true;
                }
            }
            // next choice
            let mut pos = 0;
            loop {
                if pos == choice.len() {
                    return false;
                }
                choice[pos] += 1;
                if choice[pos] == self.items[pos].0.len() {
                    choice[pos] = 0;
                    pos += 1;
                } else {
                    break;
                }
            }
        }
    }
}

impl fmt::Display for MultisetPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .items
            .iter()
            .map(|(alts, k)| {
                let base = if alts.len() == 1 {
                    alts[0].to_string()
                } else {
                    format!("{{{}}}", alts.iter().map(|a| a.to_string()).collect::<Vec<_>>().join("|"))
                };
                if *k == 1 {
                    base
                } else {
                    format!("{base}^{k}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for MultisetPattern {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut items = Vec::new();
        for part in split_top(s, ',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (body, mult) = match part.rfind('^') {
                Some(pos) if !part[pos + 1..].contains(')') && !part[pos + 1..].contains('}') => {
                    let k: usize = part[pos + 1..]
                        .trim()
                        .parse()
                        .map_err(|_| Error::InvalidArgument(format!("bad multiplicity in `{part}`")))?;
                    (&part[..pos], k)
                }
                _ => (part, 1),
            };
            let body = body.trim();
            let alts = if let Some(inner) = body.strip_prefix('{').and_then(|b| b.strip_suffix('}')) {
                inner.split('|').map(|a| a.trim().parse()).collect::<Result<Vec<TypePattern>>>()?
            } else {
                vec![body.parse()?]
            };
            items.push((alts, mult));
        }
        Ok(MultisetPattern { items })
    }
}

/// Split at `sep` outside of `()`, `{}` and `[]`.
pub(crate) fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '{' | '[' => depth += 1,
            ')' | '}' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// A punctured quartet of patterns `[a,b,c;d]`; each position may list
/// alternatives `{x|y}`. The first three positions are compared as a
/// multiset, the fourth on its own.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuartetPattern {
    pub first: MultisetPattern,
    pub fourth: Vec<TypePattern>,
}

impl QuartetPattern {
    pub fn matches(&self, t: &[AbelianType; 4], e: u32) -> bool {
        self.first.matches(&t[..3], e) && self.fourth.iter().any(|p| match_pattern(&t[3], p, e))
    }
}

impl FromStr for QuartetPattern {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad quartet pattern `{s}`"));
        let inner = s.trim().strip_prefix('[').and_then(|x| x.strip_suffix(']')).ok_or_else(bad)?;
        let halves = split_top(inner, ';');
        if halves.len() != 2 {
            return Err(bad());
        }
        let first: MultisetPattern = halves[0].parse()?;
        if first.size() != 3 {
            return Err(bad());
        }
        let fourth = halves[1].trim();
        let fourth = if let Some(x) = fourth.strip_prefix('{').and_then(|b| b.strip_suffix('}')) {
            x.split('|').map(|a| a.trim().parse()).collect::<Result<Vec<_>>>()?
        } else {
            vec![fourth.parse()?]
        };
        Ok(QuartetPattern { first, fourth })
    }
}

/// Render a punctured quartet of types as `[a,b,c;d]`.
pub fn format_quartet(t: &[AbelianType; 4]) -> String {
    format!("[{},{},{};{}]", t[0], t[1], t[2], t[3])
}
