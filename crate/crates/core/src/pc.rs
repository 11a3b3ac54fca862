//! Weighted polycyclic power-commutator presentations and the `.pcp` format.
//!
//! ```text
//! pc p=3 n=3
//! g1 name=x1 w=1 def=none
//! g2 name=y w=1 def=none
//! g3 name=x2 w=2 def=p:1
//! pow g1 = g3
//! ```
//!
//! Generators are numbered from 1 in the text format and from 0 in code.
//! Omitted `pow`/`comm` lines mean the identity.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A normal-form word `g_{i1}^{e1} ... g_{ik}^{ek}` with strictly increasing
/// indices and exponents in `1..p`.
pub type PcWord = Vec<(usize, u8)>;

/// How a generator of weight at least 2 was introduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Def {
    /// `g = g_j^p`
    Power(usize),
    /// `g = [g_j, g_k]` with `j > k`
    Comm(usize, usize),
}

/// A pc-presentation over GF(p) with sparse right-hand sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcPresentation {
    pub p: u32,
    pub names: Vec<String>,
    pub weights: Vec<u32>,
    pub defs: Vec<Option<Def>>,
    power: Vec<PcWord>,
    comm: BTreeMap<(usize, usize), PcWord>,
}

impl PcPresentation {
    /// A presentation with all relations trivial (elementary abelian).
    pub fn new(p: u32, names: Vec<String>, weights: Vec<u32>, defs: Vec<Option<Def>>) -> Self {
        let n = names.len();
        assert_eq!(weights.len(), n);
        assert_eq!(defs.len(), n);
        PcPresentation { p, names, weights, defs, power: vec![Vec::new(); n], comm: BTreeMap::new() }
    }

    /// Elementary abelian group of rank `d` with generators `a1..ad`.
    pub fn elementary(p: u32, d: usize) -> Self {
        PcPresentation::new(p, (1..=d).map(|i| format!("a{i}")).collect(), vec![1; d], vec![None; d])
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    /// Number of weight-1 generators.
    pub fn d(&self) -> usize {
        self.weights.iter().filter(|&&w| w == 1).count()
    }

    /// Exponent-p class (largest weight).
    pub fn p_class(&self) -> u32 {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    pub fn power(&self, i: usize) -> &PcWord {
        &self.power[i]
    }

    /// `[g_j, g_i]` for `j > i`.
    pub fn comm(&self, j: usize, i: usize) -> &PcWord {
        static EMPTY: PcWord = Vec::new();
        self.comm.get(&(j, i)).unwrap_or(&EMPTY)
    }

    pub fn set_power(&mut self, i: usize, w: PcWord) {
        self.power[i] = w;
    }

    pub fn set_comm(&mut self, j: usize, i: usize, w: PcWord) {
        assert!(j > i);
        if w.is_empty() {
            self.comm.remove(&(j, i));
        } else {
            self.comm.insert((j, i), w);
        }
    }

    /// Nontrivial commutator relations, ordered by `(j, i)`.
    pub fn comm_entries(&self) -> impl Iterator<Item = (&(usize, usize), &PcWord)> {
        self.comm.iter()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|g| g == name)
    }

    /// Structural checks: triangular shape, nondecreasing weights, reduced
    /// exponents, definitions that match their relation.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        let bad = |m: String| Err(Error::InvalidPresentation(m));
        if self.p < 2 || self.p > 251 {
            return bad(format!("prime {} out of range", self.p));
        }
        for i in 1..n {
            if self.weights[i] < self.weights[i - 1] {
                return bad(format!("weights decrease at generator {}", i + 1));
            }
        }
        let check_word = |w: &PcWord, after: usize| -> Result<()> {
            let mut last = None;
            for &(g, e) in w {
                if g <= after || g >= n || e == 0 || e as u32 >= self.p || last.is_some_and(|l| l >= g) {
                    return Err(Error::InvalidPresentation(format!(
                        "right-hand side {w:?} not a normal form over generators after {}",
                        after + 1
                    )));
                }
                last = Some(g);
            }
            Ok(())
        };
        for (i, w) in self.power.iter().enumerate() {
            check_word(w, i)?;
        }
        for (&(j, i), w) in &self.comm {
            if j <= i || j >= n {
                return bad(format!("commutator index ({}, {}) invalid", j + 1, i + 1));
            }
            check_word(w, j)?;
        }
        for (g, def) in self.defs.iter().enumerate() {
            match (self.weights[g], def) {
                (1, None) => {}
                (1, Some(_)) => return bad(format!("weight-1 generator {} has a definition", g + 1)),
                (_, None) => return bad(format!("generator {} of weight >1 lacks a definition", g + 1)),
                (_, Some(Def::Power(j))) => {
                    if self.power[*j] != vec![(g, 1)] {
                        return bad(format!("definition of generator {} does not match pow {}", g + 1, j + 1));
                    }
                }
                (_, Some(Def::Comm(j, k))) => {
                    if j <= k || self.comm(*j, *k) != &vec![(g, 1)] {
                        return bad(format!("definition of generator {} does not match comm {} {}", g + 1, j + 1, k + 1));
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether relation `rel` is the definition of some generator.
    pub fn is_definition(&self, rel: Relation) -> bool {
        self.defs.iter().any(|d| match (d, rel) {
            (Some(Def::Power(j)), Relation::Power(i)) => *j == i,
            (Some(Def::Comm(j, k)), Relation::Comm(a, b)) => *j == a && *k == b,
            _ => false,
        })
    }

    /// The presentation of the quotient by the last `n - m` generators,
    /// valid when they generate a normal subgroup (e.g. a weight tail).
    pub fn truncate(&self, m: usize) -> PcPresentation {
        let cut = |w: &PcWord| -> PcWord { w.iter().copied().filter(|&(g, _)| g < m).collect() };
        let mut q = PcPresentation::new(
            self.p,
            self.names[..m].to_vec(),
            self.weights[..m].to_vec(),
            self.defs[..m].to_vec(),
        );
        for i in 0..m {
            q.power[i] = cut(&self.power[i]);
        }
        for (&(j, i), w) in &self.comm {
            if j < m {
                q.set_comm(j, i, cut(w));
            }
        }
        q
    }

    /// Quotient by all generators of weight greater than `c`.
    pub fn class_quotient(&self, c: u32) -> PcPresentation {
        let m = self.weights.iter().take_while(|&&w| w <= c).count();
        self.truncate(m)
    }

    pub fn format_word(&self, w: &PcWord) -> String {
        format_pc_word(w)
    }
}

/// A power or commutator relation of a pc-presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Power(usize),
    Comm(usize, usize),
}

fn format_pc_word(w: &PcWord) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|&(g, e)| if e == 1 { format!("g{}", g + 1) } else { format!("g{}^{}", g + 1, e) })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for PcPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pc p={} n={}", self.p, self.n())?;
        for i in 0..self.n() {
            let def = match self.defs[i] {
                None => "none".to_string(),
                Some(Def::Power(j)) => format!("p:{}", j + 1),
                Some(Def::Comm(j, k)) => format!("c:{},{}", j + 1, k + 1),
            };
            writeln!(f, "g{} name={} w={} def={}", i + 1, self.names[i], self.weights[i], def)?;
        }
        for (i, w) in self.power.iter().enumerate() {
            if !w.is_empty() {
                writeln!(f, "pow g{} = {}", i + 1, format_pc_word(w))?;
            }
        }
        for (&(j, i), w) in &self.comm {
            writeln!(f, "comm g{} g{} = {}", j + 1, i + 1, format_pc_word(w))?;
        }
        Ok(())
    }
}

/// Parse `.pcp` source text. The result is structurally validated.
pub fn parse_pcp(text: &str) -> Result<PcPresentation> {
    let mut header: Option<(u32, usize)> = None;
    let mut gens: Vec<Option<(String, u32, Option<Def>)>> = Vec::new();
    let mut powers: Vec<(usize, String, usize)> = Vec::new();
    let mut comms: Vec<(usize, usize, String, usize)> = Vec::new();

    for (li, raw) in text.lines().enumerate() {
        let line_no = li + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::syntax(line_no, 1, msg);
        let mut parts = line.split_whitespace();
        let head = parts.next().unwrap();
        match head {
            "pc" => {
                let mut p = None;
                let mut n = None;
                for kv in parts {
                    let (k, v) = kv.split_once('=').ok_or_else(|| err(format!("expected key=value, got `{kv}`")))?;
                    let v: u64 = v.parse().map_err(|_| err(format!("bad number `{v}`")))?;
                    match k {
                        "p" => p = Some(v as u32),
                        "n" => n = Some(v as usize),
                        _ => return Err(err(format!("unknown header key `{k}`"))),
                    }
                }
                let n = n.ok_or_else(|| err("header lacks n=".into()))?;
                header = Some((p.unwrap_or(3), n));
                gens = vec![None; n];
            }
            "pow" => {
                let rest: Vec<&str> = line[3..].splitn(2, '=').collect();
                if rest.len() != 2 {
                    return Err(err("expected `pow g<i> = <word>`".into()));
                }
                let i = parse_gen_ref(rest[0].trim()).ok_or_else(|| err(format!("bad generator `{}`", rest[0].trim())))?;
                powers.push((i, rest[1].trim().to_string(), line_no));
            }
            "comm" => {
                let rest: Vec<&str> = line[4..].splitn(2, '=').collect();
                if rest.len() != 2 {
                    return Err(err("expected `comm g<j> g<i> = <word>`".into()));
                }
                let refs: Vec<&str> = rest[0].split_whitespace().collect();
                if refs.len() != 2 {
                    return Err(err("expected two generators".into()));
                }
                let j = parse_gen_ref(refs[0]).ok_or_else(|| err(format!("bad generator `{}`", refs[0])))?;
                let i = parse_gen_ref(refs[1]).ok_or_else(|| err(format!("bad generator `{}`", refs[1])))?;
                comms.push((j, i, rest[1].trim().to_string(), line_no));
            }
            h if h.starts_with('g') => {
                let idx = parse_gen_ref(h).ok_or_else(|| err(format!("bad generator `{h}`")))?;
                let (_, n) = header.ok_or_else(|| err("generator line before header".into()))?;
                if idx >= n {
                    return Err(err(format!("generator {h} exceeds n={n}")));
                }
                let mut name = None;
                let mut w = None;
                let mut def = None;
                for kv in parts {
                    let (k, v) = kv.split_once('=').ok_or_else(|| err(format!("expected key=value, got `{kv}`")))?;
                    match k {
                        "name" => name = Some(v.to_string()),
                        "w" => w = Some(v.parse::<u32>().map_err(|_| err(format!("bad weight `{v}`")))?),
                        "def" => def = Some(parse_def(v).ok_or_else(|| err(format!("bad definition `{v}`")))?),
                        _ => return Err(err(format!("unknown key `{k}`"))),
                    }
                }
                gens[idx] = Some((
                    name.unwrap_or_else(|| format!("g{}", idx + 1)),
                    w.ok_or_else(|| err("missing w=".into()))?,
                    def.unwrap_or(None),
                ));
            }
            _ => return Err(err(format!("unknown line kind `{head}`"))),
        }
    }

    let (p, n) = header.ok_or_else(|| Error::syntax(1, 1, "missing `pc` header"))?;
    let mut names = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut defs = Vec::with_capacity(n);
    for (i, g) in gens.into_iter().enumerate() {
        let (name, w, d) = g.ok_or_else(|| Error::InvalidPresentation(format!("generator g{} not declared", i + 1)))?;
        names.push(name);
        weights.push(w);
        defs.push(d);
    }
    let mut pc = PcPresentation::new(p, names, weights, defs);
    for (i, w, line) in powers {
        if i >= n {
            return Err(Error::syntax(line, 1, format!("generator g{} exceeds n", i + 1)));
        }
        pc.power[i] = parse_nf_word(&pc, &w).map_err(|m| Error::syntax(line, 1, m))?;
    }
    for (j, i, w, line) in comms {
        if j >= n || i >= j {
            return Err(Error::syntax(line, 1, format!("need g{} > g{}", j + 1, i + 1)));
        }
        let word = parse_nf_word(&pc, &w).map_err(|m| Error::syntax(line, 1, m))?;
        pc.set_comm(j, i, word);
    }
    pc.validate()?;
    Ok(pc)
}

fn parse_gen_ref(s: &str) -> Option<usize> {
    let k: usize = s.strip_prefix('g')?.parse().ok()?;
    k.checked_sub(1)
}

fn parse_def(v: &str) -> Option<Option<Def>> {
    if v == "none" {
        return Some(None);
    }
    if let Some(j) = v.strip_prefix("p:") {
        return Some(Some(Def::Power(j.parse::<usize>().ok()?.checked_sub(1)?)));
    }
    let jk = v.strip_prefix("c:")?;
    let (j, k) = jk.split_once(',')?;
    Some(Some(Def::Comm(j.parse::<usize>().ok()?.checked_sub(1)?, k.parse::<usize>().ok()?.checked_sub(1)?)))
}

/// Parse `g3^2*g5` (or generator names) into a normal-form word.
fn parse_nf_word(pc: &PcPresentation, s: &str) -> std::result::Result<PcWord, String> {
    if s == "1" {
        return Ok(Vec::new());
    }
    let mut out: PcWord = Vec::new();
    for f in s.split('*') {
        let f = f.trim();
        let (g, e) = match f.split_once('^') {
            Some((g, e)) => (g, e.parse::<u32>().map_err(|_| format!("bad exponent in `{f}`"))?),
            None => (f, 1),
        };
        let idx = parse_gen_ref(g)
            .filter(|&i| i < pc.n())
            .or_else(|| pc.index_of(g))
            .ok_or_else(|| format!("unknown generator `{g}`"))?;
        if e == 0 || e >= pc.p {
            return Err(format!("exponent {e} not in 1..{}", pc.p));
        }
        if out.last().is_some_and(|&(l, _)| l >= idx) {
            return Err(format!("word `{s}` is not in normal form"));
        }
        out.push((idx, e as u8));
    }
    Ok(out)
}
