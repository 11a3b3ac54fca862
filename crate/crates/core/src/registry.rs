//! Named vertices of the descendant tree and path resolution.
//!
//! The registry knows the small roots and the vertices on the root path of
//! the bifurcation family. They are given as constructions (a family member
//! or one of its lower exponent-p central quotients), not as stored tables:
//!
//! | path                           | construction            |
//! |--------------------------------|-------------------------|
//! | `⟨9,2⟩`                        | elementary `(3,3)`      |
//! | `⟨81,3⟩`                       | `π²(bifurcation(4))`    |
//! | `⟨729,10⟩`                     | `π(bifurcation(2))`     |
//! | `⟨2187,3⟩`                     | `π(bifurcation(4))`     |
//! | `⟨6561,165⟩`, `⟨729,10⟩-#2;2`  | `bifurcation(2)`        |
//! | `⟨2187,3⟩-#2;10`               | `bifurcation(3)`        |
//! | `⟨2187,3⟩-#3;2`                | `bifurcation(4)`        |
//! | `⟨2187,3⟩-#3;2-#2;93[-#1;1]^k` | `metabelian-chain(5+k)` |
//!
//! Here `π` is the p-parent (quotient by the last lower exponent-p central
//! layer). Steps past the longest registered prefix are resolved with this
//! crate's own deterministic child numbering, which is not the numbering
//! of other implementations.

use crate::autgroup::{automorphism_group, AutGroup};
use crate::descendants::{immediate_descendants, DescendantOptions};
use crate::error::{Error, Result};
use crate::family::{build_family, Family};
use crate::pc::PcPresentation;
use crate::treepath::{parse_tree_path, Step, TreePath};

/// What a registered vertex is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    Elementary,
    /// `π^k` of a family member.
    Parent { family: Family, e: u32, k: u32 },
}

impl Construction {
    pub fn build(self) -> Result<PcPresentation> {
        match self {
            Construction::Elementary => Ok(PcPresentation::elementary(3, 2)),
            Construction::Parent { family, e, k } => {
                let pc = build_family(family, e)?;
                Ok(pc.class_quotient(pc.p_class().saturating_sub(k)))
            }
        }
    }

    pub fn describe(self) -> String {
        match self {
            Construction::Elementary => "elementary (3,3)".into(),
            Construction::Parent { family, e, k: 0 } => format!("{family}({e})"),
            Construction::Parent { family, e, k: 1 } => format!("parent of {family}({e})"),
            Construction::Parent { family, e, k } => format!("{k}-fold parent of {family}({e})"),
        }
    }
}

const fn parent(family: Family, e: u32, k: u32) -> Construction {
    Construction::Parent { family, e, k }
}

/// The fixed part of the registry.
pub const REGISTRY: &[(&str, Construction)] = &[
    ("⟨9,2⟩", Construction::Elementary),
    ("⟨81,3⟩", parent(Family::Bifurcation, 4, 2)),
    ("⟨729,10⟩", parent(Family::Bifurcation, 2, 1)),
    ("⟨2187,3⟩", parent(Family::Bifurcation, 4, 1)),
    ("⟨6561,165⟩", parent(Family::Bifurcation, 2, 0)),
    ("⟨729,10⟩-#2;2", parent(Family::Bifurcation, 2, 0)),
    ("⟨2187,3⟩-#2;10", parent(Family::Bifurcation, 3, 0)),
    ("⟨2187,3⟩-#3;2", parent(Family::Bifurcation, 4, 0)),
];

/// Start of the metabelian chain; each further `-#1;1` raises `e` by one.
pub const CHAIN_START: &str = "⟨2187,3⟩-#3;2-#2;93";

/// Look up a path exactly.
pub fn lookup(path: &TreePath) -> Option<Construction> {
    for (text, c) in REGISTRY {
        if parse_tree_path(text).expect("registry paths parse") == *path {
            return Some(*c);
        }
    }
    let start = parse_tree_path(CHAIN_START).expect("registry paths parse");
    if path.root == start.root && path.steps.len() >= start.steps.len() && path.steps[..start.steps.len()] == start.steps[..] {
        let rest = &path.steps[start.steps.len()..];
        if rest.iter().all(|s| *s == Step { step: 1, index: 1 }) {
            return Some(parent(Family::MetabelianChain, 5 + rest.len() as u32, 0));
        }
    }
    None
}

/// The registered path of a family member, if it has one.
pub fn family_path(family: Family, e: u32) -> Option<TreePath> {
    match (family, e) {
        (Family::Bifurcation, 2) => Some(parse_tree_path("⟨6561,165⟩").unwrap()),
        (Family::Bifurcation, 3) => Some(parse_tree_path("⟨2187,3⟩-#2;10").unwrap()),
        (Family::Bifurcation, 4) => Some(parse_tree_path("⟨2187,3⟩-#3;2").unwrap()),
        (Family::MetabelianChain, e) if e >= 5 => {
            let mut p = parse_tree_path(CHAIN_START).unwrap();
            for _ in 5..e {
                p.steps.push(Step { step: 1, index: 1 });
            }
            Some(p)
        }
        _ => None,
    }
}

/// A resolved path.
#[derive(Clone, Debug)]
pub struct ResolvedPath {
    pub path: TreePath,
    pub pc: PcPresentation,
    /// Number of leading steps covered by the registry.
    pub registered_steps: usize,
    pub construction: Construction,
    /// Automorphism group, when steps had to be generated.
    pub aut: Option<AutGroup>,
}

/// Build the group at the end of a path: the longest registered prefix is
/// constructed, the remaining steps are generated.
pub fn resolve_path(path: &TreePath, opts: DescendantOptions) -> Result<ResolvedPath> {
    let (k, construction) = (0..=path.steps.len())
        .rev()
        .find_map(|k| lookup(&path.prefix(k)).map(|c| (k, c)))
        .ok_or_else(|| {
            Error::InvalidArgument(format!("root ⟨{},{}⟩ of `{path}` is not in the registry", path.root.0, path.root.1))
        })?;
    let mut pc = construction.build()?;
    let mut aut = None;
    for s in &path.steps[k..] {
        let a = match aut.take() {
            Some(a) => a,
            None => automorphism_group(&pc)?,
        };
        let mut report = immediate_descendants(&pc, &a, s.step, DescendantOptions { with_automorphisms: true, ..opts })?;
        if s.index > report.children.len() {
            return Err(Error::InvalidArgument(format!(
                "step -#{};{} of `{path}`: only {} children",
                s.step,
                s.index,
                report.children.len()
            )));
        }
        let child = report.children.swap_remove(s.index - 1);
        pc = child.pc;
        aut = child.aut;
    }
    Ok(ResolvedPath { path: path.clone(), pc, registered_steps: k, construction, aut })
}
