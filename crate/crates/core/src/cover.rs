//! The p-covering group of a weighted pc-presentation.
//!
//! Every relation of `G` that is not a definition gets a new central
//! generator of order `p` (a tail). Collecting the consistency overlaps of
//! the extended presentation yields linear conditions on the tails; the
//! tails that survive span the p-multiplicator `M`, and the resulting
//! consistent presentation is the p-covering group `G*`. The nucleus is
//! `P_c(G*)`, spanned by the tails of the relations `g_j^p` and
//! `[g_j, g_i]` with `g_j` of weight `c` and `g_i` of weight 1.

use crate::collector::{Collector, Element};
use crate::consistency::for_each_overlap;
use crate::error::{Error, Result};
use crate::gfp::{Field, Subspace};
use crate::pc::{Def, PcPresentation, PcWord, Relation};

/// A p-covering group together with the bookkeeping needed to form its
/// quotients.
#[derive(Clone, Debug)]
pub struct CoverData {
    pub base: PcPresentation,
    /// `G*` on the generators of `G` followed by `r` tail generators.
    pub cover: PcPresentation,
    pub d: usize,
    /// Rank of the p-multiplicator.
    pub r: usize,
    /// The nucleus as a subspace of `M = GF(p)^r`.
    pub nucleus: Subspace,
    /// Tail of every non-definition relation of `G`, in `M` coordinates.
    pub tails: Vec<(Relation, Vec<u8>)>,
    /// Relations whose tails may define generators of a descendant.
    pub candidates: Vec<Relation>,
    field: Field,
}

/// The quotient `G*/U` as a weighted presentation of p-class `c + 1`.
#[derive(Clone, Debug)]
pub struct CoverQuotient {
    pub pc: PcPresentation,
    /// Vectors of `M` that map to the new generators, in order.
    pub basis: Vec<Vec<u8>>,
    pub u: Subspace,
    field: Field,
}

fn relation_rhs(pc: &PcPresentation, rel: Relation) -> &PcWord {
    match rel {
        Relation::Power(i) => pc.power(i),
        Relation::Comm(j, i) => pc.comm(j, i),
    }
}

fn set_relation(pc: &mut PcPresentation, rel: Relation, w: PcWord) {
    match rel {
        Relation::Power(i) => pc.set_power(i, w),
        Relation::Comm(j, i) => pc.set_comm(j, i, w),
    }
}

fn relation_def(rel: Relation) -> Def {
    match rel {
        Relation::Power(i) => Def::Power(i),
        Relation::Comm(j, i) => Def::Comm(j, i),
    }
}

/// All relations of a presentation on `n` generators in a fixed order.
pub fn all_relations(n: usize) -> Vec<Relation> {
    let mut out: Vec<Relation> = (0..n).map(Relation::Power).collect();
    for j in 0..n {
        for i in 0..j {
            out.push(Relation::Comm(j, i));
        }
    }
    out
}

fn is_candidate(pc: &PcPresentation, rel: Relation, c: u32) -> bool {
    match rel {
        Relation::Power(j) => pc.weights[j] == c,
        Relation::Comm(j, i) => pc.weights[j] == c && pc.weights[i] == 1,
    }
}

/// Compute the p-covering group of a consistent weighted presentation.
pub fn p_cover(g: &PcPresentation) -> Result<CoverData> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidArgument("the trivial group has no p-covering group in this sense".into()));
    }
    let p = g.p;
    let f = Field::new(p);
    let c = g.p_class();

    // Tail columns: relations that are not definitions, non-candidates first
    // so that elimination keeps candidate tails as free parameters.
    let rels: Vec<Relation> = all_relations(n).into_iter().filter(|&r| !g.is_definition(r)).collect();
    let (mut order, cands): (Vec<Relation>, Vec<Relation>) = rels.iter().partition(|&&r| !is_candidate(g, r, c));
    order.extend(cands.iter().copied());
    let t = order.len();

    let mut ext = PcPresentation::new(
        p,
        g.names.iter().cloned().chain((1..=t).map(|k| format!("t{k}"))).collect(),
        g.weights.iter().copied().chain(std::iter::repeat_n(c + 1, t)).collect(),
        vec![None; n + t],
    );
    for rel in all_relations(n) {
        let mut w = relation_rhs(g, rel).clone();
        if let Some(k) = order.iter().position(|&r| r == rel) {
            w.push((n + k, 1));
        }
        set_relation(&mut ext, rel, w);
    }
    let col = Collector::new(&ext);

    let mut rows = Vec::new();
    let mut base_ok = true;
    for_each_overlap(&col, n, |_, _, lhs, rhs| {
        if lhs[..n] != rhs[..n] {
            base_ok = false;
        }
        let diff: Vec<u8> = (n..n + t).map(|i| f.sub(lhs[i], rhs[i])).collect();
        if diff.iter().any(|&x| x != 0) {
            rows.push(diff);
        }
    });
    if !base_ok {
        return Err(Error::Inconsistent("cannot cover an inconsistent presentation".into()));
    }
    let pivots = if rows.is_empty() { Vec::new() } else { f.rref(&mut rows) };
    let free: Vec<usize> = (0..t).filter(|k| !pivots.contains(k)).collect();
    let r = free.len();

    // Tail of each column expressed in the free tails.
    let mut tail_vec = vec![vec![0u8; r]; t];
    for (fi, &k) in free.iter().enumerate() {
        tail_vec[k][fi] = 1;
    }
    for (row, &pc) in rows.iter().zip(&pivots) {
        for (fi, &k) in free.iter().enumerate() {
            tail_vec[pc][fi] = f.neg(row[k]);
        }
    }

    let mut cover = PcPresentation::new(
        p,
        g.names.iter().cloned().chain((1..=r).map(|k| format!("t{k}"))).collect(),
        g.weights.iter().copied().chain(std::iter::repeat_n(c + 1, r)).collect(),
        g.defs.iter().copied().chain(free.iter().map(|&k| Some(relation_def(order[k])))).collect(),
    );
    for rel in all_relations(n) {
        let mut w = relation_rhs(g, rel).clone();
        if let Some(k) = order.iter().position(|&r| r == rel) {
            w.extend(tail_vec[k].iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (n + i, x)));
        }
        set_relation(&mut cover, rel, w);
    }

    let tails: Vec<(Relation, Vec<u8>)> = rels.iter().map(|&rel| {
        let k = order.iter().position(|&r| r == rel).unwrap();
        (rel, tail_vec[k].clone())
    }).collect();
    let candidates: Vec<Relation> = rels.iter().copied().filter(|&r| is_candidate(g, r, c)).collect();
    let nucleus = Subspace::span(
        f,
        r,
        tails.iter().filter(|(rel, _)| candidates.contains(rel)).map(|(_, v)| v.clone()),
    );
    Ok(CoverData { base: g.clone(), cover, d: g.d(), r, nucleus, tails, candidates, field: f })
}

impl CoverData {
    pub fn nu(&self) -> usize {
        self.nucleus.dim()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn tail(&self, rel: Relation) -> Option<&[u8]> {
        self.tails.iter().find(|(r, _)| *r == rel).map(|(_, v)| v.as_slice())
    }

    /// Tail of relation `rel` evaluated under an arbitrary cover collector:
    /// `rhs^{-1} * lhs`, which lies in `M` for any endomorphic image.
    pub fn relation_value(&self, col: &Collector, images: &[Element], rel: Relation) -> Element {
        let lhs = match rel {
            Relation::Power(i) => col.pow(&images[i], self.base.p as i64),
            Relation::Comm(j, i) => col.comm(&images[j], &images[i]),
        };
        let mut rhs = col.identity();
        for &(g, e) in relation_rhs(&self.base, rel) {
            col.mul_into(&mut rhs, &col.pow(&images[g], e as i64));
        }
        col.mul(&col.inv(&rhs), &lhs)
    }

    /// `G*/U` for a subspace `U` of `M` supplemented by the nucleus. The new
    /// generators are tails of candidate relations, chosen greedily.
    pub fn quotient(&self, u: &Subspace) -> Result<CoverQuotient> {
        let f = self.field;
        let g = &self.base;
        let n = g.n();
        let s = self.r - u.dim();
        let mut basis: Vec<Vec<u8>> = Vec::new();
        let mut chosen: Vec<Relation> = Vec::new();
        let mut span = u.clone();
        for &rel in &self.candidates {
            if basis.len() == s {
                break;
            }
            let v = self.tail(rel).unwrap().to_vec();
            if !span.contains(f, &v) {
                span = span.sum(f, &Subspace::span(f, self.r, [v.clone()]));
                basis.push(v);
                chosen.push(rel);
            }
        }
        if basis.len() < s {
            return Err(Error::InvalidArgument("subspace is not supplemented by the nucleus".into()));
        }
        let c = g.p_class();
        let taken: std::collections::HashSet<&str> = g.names.iter().map(String::as_str).collect();
        let names: Vec<String> = (0..s)
            .map(|k| {
                let cand = format!("g{}", n + k + 1);
                if taken.contains(cand.as_str()) { format!("n{}", n + k + 1) } else { cand }
            })
            .collect();
        let mut pc = PcPresentation::new(
            g.p,
            g.names.iter().cloned().chain(names).collect(),
            g.weights.iter().copied().chain(std::iter::repeat_n(c + 1, s)).collect(),
            g.defs.iter().copied().chain(chosen.iter().map(|&r| Some(relation_def(r)))).collect(),
        );
        let q = CoverQuotient { pc: pc.clone(), basis, u: u.clone(), field: f };
        for rel in all_relations(n) {
            let mut w = relation_rhs(g, rel).clone();
            if let Some(v) = self.tail(rel) {
                let coords = q.tail_coords(v);
                w.extend(coords.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (n + i, x)));
            }
            set_relation(&mut pc, rel, w);
        }
        pc.validate()?;
        Ok(CoverQuotient { pc, ..q })
    }
}

impl CoverQuotient {
    /// Coordinates of the class of `v in M` with respect to the new
    /// generators.
    pub fn tail_coords(&self, v: &[u8]) -> Vec<u8> {
        let s = self.basis.len();
        let rows: Vec<Vec<u8>> = self.basis.iter().chain(self.u.basis()).cloned().collect();
        if rows.is_empty() {
            return Vec::new();
        }
        let x = self.field.solve_left(&rows, v).expect("U + span(basis) = M");
        x[..s].to_vec()
    }

    /// Map an element of `G*` (generators of `G` then tails) to the quotient.
    pub fn map_cover_element(&self, n_base: usize, x: &[u8]) -> Element {
        let mut out = x[..n_base].to_vec();
        out.extend(self.tail_coords(&x[n_base..]));
        out
    }
}
