//! Immediate descendants: one step of p-group generation.
//!
//! The step-`s` descendants of `G` are the quotients `G*/U` where `U` has
//! codimension `s` in the multiplicator `M` and `U + N = M` for the nucleus
//! `N`. Two such quotients are isomorphic exactly when the subspaces lie in
//! one orbit of `Aut(G)` acting on `M`, so we enumerate the allowable
//! subspaces, merge orbits with a union-find, and keep the least subspace
//! of every orbit as its representative.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::autgroup::{lift_stabilizer, AutGroup};
use crate::cover::{p_cover, CoverData};
use crate::error::{Error, Result};
use crate::gfp::{gaussian_binomial, subspaces, Field, Subspace};
use crate::pc::PcPresentation;

/// One immediate descendant.
#[derive(Clone, Debug)]
pub struct Descendant {
    /// 1-based position among the step-`s` descendants.
    pub index: usize,
    pub pc: PcPresentation,
    pub orbit_len: usize,
    /// Rank of the nucleus of the child; capable iff positive.
    pub nucleus_rank: usize,
    pub aut: Option<AutGroup>,
}

impl Descendant {
    pub fn capable(&self) -> bool {
        self.nucleus_rank > 0
    }
}

/// All step-`s` descendants of a group.
#[derive(Clone, Debug)]
pub struct DescendantReport {
    pub step: usize,
    pub multiplicator_rank: usize,
    pub nucleus_rank: usize,
    /// Number of allowable subspaces.
    pub allowable: u128,
    pub children: Vec<Descendant>,
}

impl DescendantReport {
    /// Number of descendants (`N`).
    pub fn total(&self) -> usize {
        self.children.len()
    }

    /// Number of capable descendants (`C`).
    pub fn capable(&self) -> usize {
        self.children.iter().filter(|c| c.capable()).count()
    }
}

/// Options for [`immediate_descendants`].
#[derive(Clone, Copy, Debug)]
pub struct DescendantOptions {
    /// Compute `Aut` of every child (needed to continue generation).
    pub with_automorphisms: bool,
    /// Refuse to enumerate more allowable subspaces than this.
    pub max_subspaces: u128,
}

impl Default for DescendantOptions {
    fn default() -> Self {
        DescendantOptions { with_automorphisms: true, max_subspaces: 2_000_000 }
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Every allowable subspace of codimension `s`.
pub fn allowable_subspaces(cd: &CoverData, s: usize) -> Vec<Subspace> {
    let f = cd.field();
    let r = cd.r;
    let nu = cd.nu();
    if s == 0 || s > nu {
        return Vec::new();
    }
    // Basis B = [complement of N; basis of N]; a subspace in B-coordinates
    // is the row space of [I X; 0 W] with W of dimension nu - s.
    let comp = cd.nucleus.complement_units();
    let b: Vec<Vec<u8>> = comp.iter().chain(cd.nucleus.basis()).cloned().collect();
    let m = r - nu;
    let mut out = Vec::new();
    for w in subspaces(f, nu, nu - s) {
        let wp = w.pivots();
        let free_cols: Vec<usize> = (0..nu).filter(|c| !wp.contains(c)).collect();
        let nfree = m * free_cols.len();
        let total = (f.p() as usize).pow(nfree as u32);
        for code in 0..total {
            let mut k = code;
            let mut rows: Vec<Vec<u8>> = Vec::with_capacity(r - s);
            for i in 0..m {
                let mut row = vec![0u8; r];
                row[i] = 1;
                for &c in &free_cols {
                    row[m + c] = (k % f.p() as usize) as u8;
                    k /= f.p() as usize;
                }
                rows.push(row);
            }
            for wr in w.basis() {
                let mut row = vec![0u8; r];
                row[m..].copy_from_slice(wr);
                rows.push(row);
            }
            let vecs = rows.iter().map(|row| f.vec_mat(row, &b));
            out.push(Subspace::span(f, r, vecs));
        }
    }
    out
}

/// Orbit representatives of `Aut(G)` on the allowable subspaces, with
/// orbit lengths, sorted by representative.
pub fn allowable_orbits(f: Field, subs: &[Subspace], mats: &[Vec<Vec<u8>>]) -> Vec<(Subspace, usize)> {
    let index: HashMap<&Subspace, usize> = subs.iter().enumerate().map(|(i, u)| (u, i)).collect();
    let mut parent: Vec<usize> = (0..subs.len()).collect();
    for (i, u) in subs.iter().enumerate() {
        for m in mats {
            let img = u.image(f, m);
            let j = *index.get(&img).expect("automorphisms preserve allowability");
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut orbits: HashMap<usize, (usize, usize)> = HashMap::new();
    for i in 0..subs.len() {
        let root = find(&mut parent, i);
        let e = orbits.entry(root).or_insert((i, 0));
        if subs[i] < subs[e.0] {
            e.0 = i;
        }
        e.1 += 1;
    }
    let mut reps: Vec<(Subspace, usize)> = orbits.values().map(|&(i, len)| (subs[i].clone(), len)).collect();
    reps.sort();
    reps
}

/// The step-`s` immediate descendants of `G`, given `Aut(G)`.
pub fn immediate_descendants(
    pc: &PcPresentation,
    aut: &AutGroup,
    step: usize,
    opts: DescendantOptions,
) -> Result<DescendantReport> {
    let cd = p_cover(pc)?;
    let f = cd.field();
    let nu = cd.nu();
    let allowable = if step == 0 || step > nu {
        0
    } else {
        gaussian_binomial(pc.p as u64, nu as u32, step as u32) * (pc.p as u128).pow(((cd.r - nu) * step) as u32)
    };
    if allowable > opts.max_subspaces {
        return Err(Error::ResourceCap(format!("{allowable} allowable subspaces exceed the cap")));
    }
    let subs = allowable_subspaces(&cd, step);
    debug_assert_eq!(subs.len() as u128, allowable);
    let mats = aut.multiplicator_action(&cd);
    let reps = allowable_orbits(f, &subs, &mats);
    let children = reps
        .into_par_iter()
        .enumerate()
        .map(|(k, (u, len))| -> Result<Descendant> {
            let q = cd.quotient(&u)?;
            let child_cover = p_cover(&q.pc)?;
            let child_aut = if opts.with_automorphisms { Some(lift_stabilizer(aut, &cd, &u, &q.pc)?) } else { None };
            Ok(Descendant { index: k + 1, pc: q.pc, orbit_len: len, nucleus_rank: child_cover.nu(), aut: child_aut })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DescendantReport { step, multiplicator_rank: cd.r, nucleus_rank: nu, allowable, children })
}
