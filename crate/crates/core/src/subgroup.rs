//! Subgroups of pc groups by canonical induced generating sequences, and
//! the derived, lower central and lower exponent-p central series.
//!
//! A subgroup is stored by the unique sequence `h_1, ..., h_m` with strictly
//! increasing depths (index of the first nonzero exponent), leading
//! exponents 1, and zero exponents of every `h_k` at the depths of the
//! others. Its order is `p^m`.

use serde::Serialize;

use crate::abelian::{pc_relation_matrix, AbelianInvariants, AbelianType, Matrix};
use crate::collector::{Collector, Element};
use crate::gfp::Field;
use crate::pc::PcPresentation;

pub fn depth(x: &[u8]) -> Option<usize> {
    x.iter().position(|&a| a != 0)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    gens: Vec<Element>,
    depths: Vec<usize>,
}

impl Subgroup {
    pub fn trivial() -> Self {
        Subgroup { gens: Vec::new(), depths: Vec::new() }
    }

    /// The whole group (the pc generators themselves).
    pub fn whole(col: &Collector) -> Self {
        Subgroup { gens: (0..col.n()).map(|i| col.gen(i)).collect(), depths: (0..col.n()).collect() }
    }

    /// `<g_k, ..., g_n>`, a normal subgroup for any pc-presentation.
    pub fn tail(col: &Collector, k: usize) -> Self {
        Subgroup { gens: (k..col.n()).map(|i| col.gen(i)).collect(), depths: (k..col.n()).collect() }
    }

    pub fn gens(&self) -> &[Element] {
        &self.gens
    }

    pub fn depths(&self) -> &[usize] {
        &self.depths
    }

    /// Logarithmic order.
    pub fn log_order(&self) -> usize {
        self.gens.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    /// Reduce `x` by the sequence; the identity iff `x` is a member.
    pub fn sift(&self, col: &Collector, x: &[u8]) -> Element {
        let p = col.p();
        let mut x = x.to_vec();
        for (g, &d) in self.gens.iter().zip(&self.depths) {
            if x[d] != 0 {
                let k = p - x[d];
                let gk = col.pow(g, k as i64);
                col.mul_into(&mut x, &gk);
            }
        }
        x
    }

    pub fn contains(&self, col: &Collector, x: &[u8]) -> bool {
        Collector::is_identity(&self.sift(col, x))
    }

    pub fn contains_subgroup(&self, col: &Collector, other: &Subgroup) -> bool {
        other.gens.iter().all(|g| self.contains(col, g))
    }

    /// Exponents `(e_1..e_m)` with `x = h_1^{e_1} ... h_m^{e_m}`, or `None`
    /// if `x` is not in the subgroup.
    pub fn coordinates(&self, col: &Collector, x: &[u8]) -> Option<Vec<u8>> {
        let mut x = x.to_vec();
        let mut out = Vec::with_capacity(self.gens.len());
        for (g, &d) in self.gens.iter().zip(&self.depths) {
            if let Some(dx) = depth(&x) {
                if dx < d {
                    return None;
                }
            }
            let e = x[d];
            out.push(e);
            if e != 0 {
                let ginv = col.pow(g, -(e as i64));
                x = col.mul(&ginv, &x);
            }
        }
        if Collector::is_identity(&x) {
            Some(out)
        } else {
            None
        }
    }

    /// Element with the given coordinates.
    pub fn element(&self, col: &Collector, coords: &[u8]) -> Element {
        let mut x = col.identity();
        for (g, &e) in self.gens.iter().zip(coords) {
            if e != 0 {
                col.mul_into(&mut x, &col.pow(g, e as i64));
            }
        }
        x
    }

    /// Pc-presentation on the induced sequence (all generators of weight 1,
    /// suitable for collection and abelianization, not for covers).
    pub fn induced_presentation(&self, col: &Collector) -> PcPresentation {
        let m = self.gens.len();
        let mut pc = PcPresentation::new(
            col.p() as u32,
            (1..=m).map(|i| format!("h{i}")).collect(),
            vec![1; m],
            vec![None; m],
        );
        for i in 0..m {
            let pw = col.pow(&self.gens[i], col.p() as i64);
            let c = self.coordinates(col, &pw).expect("subgroup closed under powers");
            pc.set_power(i, Collector::to_pc_word(&c));
            for j in i + 1..m {
                let cm = col.comm(&self.gens[j], &self.gens[i]);
                let c = self.coordinates(col, &cm).expect("subgroup closed under commutators");
                pc.set_comm(j, i, Collector::to_pc_word(&c));
            }
        }
        pc
    }

    /// Type of `H / (H' N)` where `H` is `self` and `N` a subgroup of it.
    pub fn abelian_quotient_type(&self, col: &Collector, n: &Subgroup) -> AbelianType {
        self.abelian_invariants(col, n).abelian_type()
    }

    /// Invariant-factor data of `H / (H' N)` in the coordinates of `self`.
    pub fn abelian_invariants(&self, col: &Collector, n: &Subgroup) -> AbelianInvariants<i64> {
        let ind = self.induced_presentation(col);
        let base = pc_relation_matrix(&ind);
        let m = self.gens.len();
        let mut rows: Vec<Vec<i64>> = (0..base.rows())
            .map(|r| base.row(r).iter().map(|x| i64::try_from(x).unwrap()).collect())
            .collect();
        for g in &n.gens {
            let c = self.coordinates(col, g).expect("N must lie in H");
            rows.push(c.iter().map(|&x| x as i64).collect());
        }
        if rows.is_empty() {
            rows.push(vec![0; m]);
        }
        AbelianInvariants::new(&Matrix::<i64>::from_i64_rows(&rows, m), col.p() as u32)
            .expect("finite abelian p-group")
    }
}

/// Accumulates a closure: sifts new elements into an echelon table.
struct Closure<'a> {
    col: &'a Collector,
    table: Vec<Option<Element>>,
}

impl<'a> Closure<'a> {
    fn new(col: &'a Collector) -> Self {
        Closure { col, table: vec![None; col.n()] }
    }

    fn seed(col: &'a Collector, s: &Subgroup) -> Self {
        let mut c = Closure::new(col);
        for (g, &d) in s.gens.iter().zip(&s.depths) {
            c.table[d] = Some(g.clone());
        }
        c
    }

    /// Sift `x`; if it is new, insert it (leading exponent 1) and return it.
    fn insert(&mut self, x: &[u8]) -> Option<Element> {
        let p = self.col.p();
        let f = Field::new(p as u32);
        let mut x = x.to_vec();
        loop {
            let d = depth(&x)?;
            match &self.table[d] {
                Some(g) => {
                    let k = p - x[d];
                    let gk = self.col.pow(g, k as i64);
                    self.col.mul_into(&mut x, &gk);
                }
                None => {
                    let inv = f.inv(x[d]);
                    let y = self.col.pow(&x, inv as i64);
                    self.table[d] = Some(y.clone());
                    return Some(y);
                }
            }
        }
    }

    fn members(&self) -> Vec<Element> {
        self.table.iter().flatten().cloned().collect()
    }

    fn finish(self) -> Subgroup {
        let col = self.col;
        let p = col.p();
        let mut depths: Vec<usize> = Vec::new();
        let mut gens: Vec<Element> = Vec::new();
        for (d, g) in self.table.into_iter().enumerate() {
            if let Some(g) = g {
                depths.push(d);
                gens.push(g);
            }
        }
        // full reduction: clear the other depths in each generator
        for a in (0..gens.len()).rev() {
            for b in a + 1..gens.len() {
                let db = depths[b];
                let c = gens[a][db];
                if c != 0 {
                    let gk = col.pow(&gens[b], (p - c) as i64);
                    let mut x = gens[a].clone();
                    col.mul_into(&mut x, &gk);
                    gens[a] = x;
                }
            }
        }
        Subgroup { gens, depths }
    }
}

/// Smallest subgroup containing `gens` that is also normalized by every
/// element of `normalizers`.
pub fn closure_under(col: &Collector, start: &Subgroup, gens: &[Element], normalizers: &[Element]) -> Subgroup {
    let mut c = Closure::seed(col, start);
    let mut queue: Vec<Element> = gens.to_vec();
    // conjugation of the seed itself
    if !normalizers.is_empty() {
        for g in &start.gens {
            for z in normalizers {
                queue.push(col.comm(g, z));
            }
        }
    }
    while let Some(x) = queue.pop() {
        if let Some(y) = c.insert(&x) {
            queue.push(col.pow(&y, col.p() as i64));
            for z in c.members() {
                if z != y {
                    queue.push(col.comm(&y, &z));
                }
            }
            for z in normalizers {
                queue.push(col.comm(&y, z));
            }
        }
    }
    c.finish()
}

/// The subgroup generated by `gens`.
pub fn subgroup_closure(col: &Collector, gens: &[Element]) -> Subgroup {
    closure_under(col, &Subgroup::trivial(), gens, &[])
}

/// The normal closure of `gens` in the whole group.
pub fn normal_closure(col: &Collector, gens: &[Element]) -> Subgroup {
    let pcgens: Vec<Element> = (0..col.n()).map(|i| col.gen(i)).collect();
    closure_under(col, &Subgroup::trivial(), gens, &pcgens)
}

/// `[A, B]` for subgroups normalized by the whole group.
pub fn commutator_subgroup(col: &Collector, a: &Subgroup, b: &Subgroup) -> Subgroup {
    let mut gens = Vec::new();
    for x in &a.gens {
        for y in &b.gens {
            gens.push(col.comm(x, y));
        }
    }
    normal_closure(col, &gens)
}

/// The derived subgroup of an arbitrary subgroup `H`.
pub fn derived_subgroup(col: &Collector, h: &Subgroup) -> Subgroup {
    let mut gens = Vec::new();
    for (i, x) in h.gens.iter().enumerate() {
        for y in &h.gens[i + 1..] {
            gens.push(col.comm(y, x));
        }
    }
    closure_under(col, &Subgroup::trivial(), &gens, &h.gens)
}

/// Frattini subgroup `H^p [H, H]` of a subgroup.
pub fn frattini_subgroup(col: &Collector, h: &Subgroup) -> Subgroup {
    let mut gens: Vec<Element> = h.gens.iter().map(|g| col.pow(g, col.p() as i64)).collect();
    for (i, x) in h.gens.iter().enumerate() {
        for y in &h.gens[i + 1..] {
            gens.push(col.comm(y, x));
        }
    }
    closure_under(col, &Subgroup::trivial(), &gens, &h.gens)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SeriesKind {
    LowerCentral,
    Derived,
    ExponentPCentral,
}

/// Terms of a descending series, from the whole group down to the trivial
/// subgroup (inclusive).
pub fn series(col: &Collector, kind: SeriesKind) -> Vec<Subgroup> {
    let pcgens: Vec<Element> = (0..col.n()).map(|i| col.gen(i)).collect();
    let mut terms = vec![Subgroup::whole(col)];
    loop {
        let cur = terms.last().unwrap();
        if cur.is_trivial() {
            break;
        }
        let mut gens = Vec::new();
        match kind {
            SeriesKind::LowerCentral => {
                for x in &cur.gens {
                    for z in &pcgens {
                        gens.push(col.comm(x, z));
                    }
                }
            }
            SeriesKind::Derived => {
                for (i, x) in cur.gens.iter().enumerate() {
                    for y in &cur.gens[i + 1..] {
                        gens.push(col.comm(y, x));
                    }
                }
            }
            SeriesKind::ExponentPCentral => {
                for x in &cur.gens {
                    gens.push(col.pow(x, col.p() as i64));
                    for z in &pcgens {
                        gens.push(col.comm(x, z));
                    }
                }
            }
        }
        let next = normal_closure(col, &gens);
        if next.log_order() == cur.log_order() {
            // only possible for non-nilpotent input; stop rather than loop
            break;
        }
        terms.push(next);
    }
    terms
}

/// Structural summary of a p-group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureSummary {
    pub lo: usize,
    /// Nilpotency class.
    pub cl: usize,
    /// Derived (soluble) length.
    pub sl: usize,
    pub p_class: usize,
    pub lower_central_factors: Vec<AbelianType>,
    pub derived_factors: Vec<AbelianType>,
    /// Some `gamma_j / gamma_{j+1}` with `j >= 3` is not cyclic.
    pub bcf: bool,
}

pub fn factor_types(col: &Collector, terms: &[Subgroup]) -> Vec<AbelianType> {
    terms.windows(2).map(|w| w[0].abelian_quotient_type(col, &w[1])).collect()
}

pub fn structure_summary(col: &Collector) -> StructureSummary {
    let lcs = series(col, SeriesKind::LowerCentral);
    let der = series(col, SeriesKind::Derived);
    let pcs = series(col, SeriesKind::ExponentPCentral);
    let lower_central_factors = factor_types(col, &lcs);
    let derived_factors = factor_types(col, &der);
    let bcf = lower_central_factors.iter().skip(2).any(|t| !t.is_cyclic());
    StructureSummary {
        lo: col.n(),
        cl: lcs.len() - 1,
        sl: der.len() - 1,
        p_class: pcs.len() - 1,
        lower_central_factors,
        derived_factors,
        bcf,
    }
}

/// Pc-presentation of `G/N` on the generators whose depths are not taken
/// by `N` (all of weight 1; use for collection, not for covers).
pub fn quotient_presentation(pc: &PcPresentation, col: &Collector, n: &Subgroup) -> PcPresentation {
    let keep: Vec<usize> = (0..pc.n()).filter(|i| !n.depths.contains(i)).collect();
    let pos = |g: usize| keep.iter().position(|&k| k == g);
    let m = keep.len();
    let mut q = PcPresentation::new(
        pc.p,
        keep.iter().map(|&i| pc.names[i].clone()).collect(),
        vec![1; m],
        vec![None; m],
    );
    let reduce = |x: Element| -> crate::pc::PcWord {
        let r = n.sift(col, &x);
        Collector::to_pc_word(&r).into_iter().map(|(g, e)| (pos(g).expect("sifted off N"), e)).collect()
    };
    for (a, &i) in keep.iter().enumerate() {
        let pw = col.pow(&col.gen(i), pc.p as i64);
        q.set_power(a, reduce(pw));
        for (b, &j) in keep.iter().enumerate().skip(a + 1) {
            q.set_comm(b, a, reduce(col.comm(&col.gen(j), &col.gen(i))));
        }
    }
    q
}
