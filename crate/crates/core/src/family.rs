//! Parametrized two-generator families with abelianization `(p^e, p)`.
//!
//! Both families use the commutator conventions `s2=[y,x]`, `s3=[s2,x]`,
//! `t3=[s2,y]`, `s4=[s3,x]`, `t4=[t3,y]`, `s5=[s4,x]`, `t5=[t4,y]` and the
//! power chain `x_{k+1} = x_k^3`. Relations that are not listed are trivial.
//!
//! * `bifurcation(e)`, `e >= 2`:
//!   `x^{3^e}=1, y^3=s3 s4^2, s2^3=s4 t4^2, [x^3,y]=s4 t4` — `e + 6` generators.
//! * `metabelian-chain(e)`, `e >= 6`: the above with `s3^3=s5, t3^3=s5^2,
//!   [x^3,y]=s4 t4 s5^2, [x^3,s2]=s5, t5=s5` — `e + 7` generators.
//!
//! Generators are ordered by weight (`x_k` has weight `k`, the commutators
//! their nesting depth), which keeps the table triangular.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::collector::Collector;
use crate::consistency::check_consistency;
use crate::error::{Error, Result};
use crate::pc::{Def, PcPresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Bifurcation,
    MetabelianChain,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Bifurcation => "bifurcation",
            Family::MetabelianChain => "metabelian-chain",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bifurcation" => Ok(Family::Bifurcation),
            "metabelian-chain" => Ok(Family::MetabelianChain),
            _ => Err(Error::InvalidArgument(format!("unknown family `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub e: u32,
}

impl FamilySpec {
    pub fn new(family: Family, e: u32) -> Result<Self> {
        let spec = FamilySpec { family, e };
        spec.validate()?;
        Ok(spec)
    }

    pub fn min_e(family: Family) -> u32 {
        match family {
            Family::Bifurcation => 2,
            Family::MetabelianChain => 6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let min = Self::min_e(self.family);
        if self.e < min {
            return Err(Error::InvalidArgument(format!("{} requires e >= {min}, got {}", self.family, self.e)));
        }
        if self.e > 60 {
            return Err(Error::InvalidArgument(format!("e = {} is unreasonably large", self.e)));
        }
        Ok(())
    }
}

/// Build, validate and consistency-check a family member.
pub fn instantiate_family(spec: FamilySpec) -> Result<PcPresentation> {
    spec.validate()?;
    build_family(spec.family, spec.e)
}

/// Like [`instantiate_family`] without the lower bound on `e`.
///
/// `metabelian-chain` at `e = 5` is the p-parent of the `e = 6` member,
/// which is the starting vertex of the chain.
pub fn build_family(family: Family, e: u32) -> Result<PcPresentation> {
    if e < 2 {
        return Err(Error::InvalidArgument("e must be at least 2".into()));
    }
    let chain = family == Family::MetabelianChain;
    if chain && e < 5 {
        return Err(Error::InvalidArgument("metabelian-chain needs e >= 5".into()));
    }
    let e = e as usize;

    let mut b = PcBuilder::new(3);
    // weight order: x_k has weight k, commutators their depth
    let max_w = e.max(if chain { 5 } else { 4 });
    for w in 1..=max_w {
        if w <= e {
            let def = if w == 1 { None } else { Some(Spec::Power(format!("x{}", w - 1))) };
            b.gen(&format!("x{w}"), w as u32, def);
        }
        match w {
            1 => b.gen("y", 1, None),
            2 => b.gen("s2", 2, Some(Spec::Comm("y".into(), "x1".into()))),
            3 => {
                b.gen("s3", 3, Some(Spec::Comm("s2".into(), "x1".into())));
                b.gen("t3", 3, Some(Spec::Comm("s2".into(), "y".into())));
            }
            4 => {
                b.gen("s4", 4, Some(Spec::Comm("s3".into(), "x1".into())));
                b.gen("t4", 4, Some(Spec::Comm("t3".into(), "y".into())));
            }
            5 if chain => b.gen("s5", 5, Some(Spec::Comm("s4".into(), "x1".into()))),
            _ => {}
        }
    }

    b.power("y", &[("s3", 1), ("s4", 2)]);
    b.power("s2", &[("s4", 1), ("t4", 2)]);
    if chain {
        b.power("s3", &[("s5", 1)]);
        b.power("t3", &[("s5", 2)]);
        b.comm("x2", "y", &[("s4", 1), ("t4", 1), ("s5", 2)]);
        // [x^3, s2] = s5, stored as [s2, x2] = s5^-1
        b.comm("s2", "x2", &[("s5", -1)]);
        b.comm("t4", "y", &[("s5", 1)]);
    } else {
        b.comm("x2", "y", &[("s4", 1), ("t4", 1)]);
    }

    let pc = b.finish()?;
    let v = check_consistency(&pc);
    if let Some(first) = v.first() {
        return Err(Error::Inconsistent(format!("{family}(e={e}): {first} ({} overlaps fail)", v.len())));
    }
    Ok(pc)
}

/// Generator definition by name.
#[derive(Clone, Debug)]
pub enum Spec {
    Power(String),
    Comm(String, String),
}

/// Assembles a pc-presentation from named relations whose right-hand sides
/// need not be normal forms; they are collected from the last generator
/// upward so every right-hand side is normalized in an already complete
/// tail presentation.
#[derive(Clone, Debug)]
pub struct PcBuilder {
    p: u32,
    names: Vec<String>,
    weights: Vec<u32>,
    defs: Vec<Option<Spec>>,
    power: BTreeMap<String, Vec<(String, i64)>>,
    comm: BTreeMap<(String, String), Vec<(String, i64)>>,
}

impl PcBuilder {
    pub fn new(p: u32) -> Self {
        PcBuilder {
            p,
            names: Vec::new(),
            weights: Vec::new(),
            defs: Vec::new(),
            power: BTreeMap::new(),
            comm: BTreeMap::new(),
        }
    }

    pub fn gen(&mut self, name: &str, weight: u32, def: Option<Spec>) {
        match &def {
            Some(Spec::Power(j)) => {
                self.power.insert(j.clone(), vec![(name.to_string(), 1)]);
            }
            Some(Spec::Comm(j, k)) => {
                self.comm.insert((j.clone(), k.clone()), vec![(name.to_string(), 1)]);
            }
            None => {}
        }
        self.names.push(name.to_string());
        self.weights.push(weight);
        self.defs.push(def);
    }

    pub fn power(&mut self, g: &str, rhs: &[(&str, i64)]) {
        self.power.insert(g.to_string(), rhs.iter().map(|&(h, e)| (h.to_string(), e)).collect());
    }

    /// `[g_j, g_i] = rhs`, where `g_j` comes after `g_i`.
    pub fn comm(&mut self, j: &str, i: &str, rhs: &[(&str, i64)]) {
        self.comm.insert((j.to_string(), i.to_string()), rhs.iter().map(|&(h, e)| (h.to_string(), e)).collect());
    }

    fn index(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|g| g == name).ok_or_else(|| Error::UndeclaredGenerator(name.to_string()))
    }

    pub fn finish(self) -> Result<PcPresentation> {
        let n = self.names.len();
        let mut defs = Vec::with_capacity(n);
        for d in &self.defs {
            defs.push(match d {
                None => None,
                Some(Spec::Power(j)) => Some(Def::Power(self.index(j)?)),
                Some(Spec::Comm(j, k)) => Some(Def::Comm(self.index(j)?, self.index(k)?)),
            });
        }
        let mut powers: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
        for (g, rhs) in &self.power {
            let i = self.index(g)?;
            powers[i] = self.indexed(rhs, i)?;
        }
        let mut comms: BTreeMap<(usize, usize), Vec<(usize, i64)>> = BTreeMap::new();
        for ((gj, gi), rhs) in &self.comm {
            let (j, i) = (self.index(gj)?, self.index(gi)?);
            if j <= i {
                return Err(Error::InvalidPresentation(format!("commutator [{gj},{gi}] must have the later generator first")));
            }
            comms.insert((j, i), self.indexed(rhs, j)?);
        }

        let mut pc = PcPresentation::new(self.p, self.names.clone(), self.weights.clone(), defs);
        for i in (0..n).rev() {
            let col = Collector::new(&pc);
            let pw = col.eval_indexed(&powers[i]);
            pc.set_power(i, Collector::to_pc_word(&pw));
            for j in i + 1..n {
                if let Some(w) = comms.get(&(j, i)) {
                    let c = col.eval_indexed(w);
                    pc.set_comm(j, i, Collector::to_pc_word(&c));
                }
            }
        }
        pc.validate()?;
        Ok(pc)
    }

    fn indexed(&self, w: &[(String, i64)], after: usize) -> Result<Vec<(usize, i64)>> {
        w.iter()
            .map(|(g, e)| {
                let k = self.index(g)?;
                if k <= after {
                    return Err(Error::InvalidPresentation(format!(
                        "right-hand side mentions `{g}`, which is not after `{}`",
                        self.names[after]
                    )));
                }
                Ok((k, *e))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collector::normalize;
    use crate::fp::{standard_commutators, Word};

    #[test]
    fn generator_counts() {
        for e in 2..=8 {
            let pc = instantiate_family(FamilySpec::new(Family::Bifurcation, e).unwrap()).unwrap();
            assert_eq!(pc.n(), e as usize + 6);
        }
        for e in 6..=9 {
            let pc = instantiate_family(FamilySpec::new(Family::MetabelianChain, e).unwrap()).unwrap();
            assert_eq!(pc.n(), e as usize + 7);
        }
    }

    #[test]
    fn family_bounds() {
        assert!(FamilySpec::new(Family::Bifurcation, 1).is_err());
        assert!(FamilySpec::new(Family::MetabelianChain, 5).is_err());
        assert!(build_family(Family::MetabelianChain, 5).is_ok());
    }

    #[test]
    fn chain_five_is_parent_of_chain_six() {
        let c5 = build_family(Family::MetabelianChain, 5).unwrap();
        let c6 = build_family(Family::MetabelianChain, 6).unwrap();
        let parent = c6.class_quotient(c6.p_class() - 1);
        assert_eq!(parent.to_string().replace("x5", "xx"), c5.to_string().replace("x5", "xx"));
    }

    fn x_y_words(pc: &PcPresentation, e: u32) -> Vec<(String, Word)> {
        let _ = (pc, e);
        standard_commutators("x1", "y")
    }

    #[test]
    fn relations_hold_as_words() {
        for e in 2..=4 {
            let pc = build_family(Family::Bifurcation, e).unwrap();
            let col = Collector::new(&pc);
            let ab = x_y_words(&pc, e);
            let get = |n: &str| ab.iter().find(|(k, _)| k == n).unwrap().1.clone();
            let x = Word::generator("x1");
            let y = Word::generator("y");
            let id = col.identity();
            assert_eq!(normalize(&pc, &col, &x.pow(3i64.pow(e))).unwrap(), id);
            let r = y.pow(3).mul(&get("s3").mul(&get("s4").pow(2)).inverse());
            assert_eq!(normalize(&pc, &col, &r).unwrap(), id);
            let r = get("s2").pow(3).mul(&get("s4").mul(&get("t4").pow(2)).inverse());
            assert_eq!(normalize(&pc, &col, &r).unwrap(), id);
            let r = Word::comm(&x.pow(3), &y).mul(&get("s4").mul(&get("t4")).inverse());
            assert_eq!(normalize(&pc, &col, &r).unwrap(), id);
            // named commutator generators agree with their words
            for name in ["s2", "s3", "t3", "s4", "t4"] {
                let g = col.gen(pc.index_of(name).unwrap());
                assert_eq!(normalize(&pc, &col, &get(name)).unwrap(), g, "{name}");
            }
        }
    }

    #[test]
    fn chain_relations_hold() {
        let pc = build_family(Family::MetabelianChain, 6).unwrap();
        let col = Collector::new(&pc);
        let ab = standard_commutators("x1", "y");
        let get = |n: &str| ab.iter().find(|(k, _)| k == n).unwrap().1.clone();
        let id = col.identity();
        let r = Word::comm(&get("t3"), &Word::generator("y")).mul(&get("t4").inverse());
        assert_eq!(normalize(&pc, &col, &r).unwrap(), id);
        let r = get("t5").mul(&get("s5").inverse());
        assert_eq!(normalize(&pc, &col, &r).unwrap(), id);
        let r = get("t3").pow(3).mul(&get("s5").pow(-2));
        assert_eq!(normalize(&pc, &col, &r).unwrap(), id);
        let x3 = Word::generator("x1").pow(3);
        let r = Word::comm(&x3, &get("s2")).mul(&get("s5").inverse());
        assert_eq!(normalize(&pc, &col, &r).unwrap(), id);
    }
}
