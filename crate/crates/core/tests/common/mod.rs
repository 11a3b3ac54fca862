//! Independent oracles for the integration tests.
//!
//! Nothing here relies on the kernel's subgroup, transfer, quotient or
//! automorphism code. Groups are handled either as abstract presentations
//! (coset enumeration) or as explicit element sets, with the collector used
//! only as a multiplication table.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::Rng;
use sigma3_core::descendants::DescendantOptions;
use sigma3_core::pc::Relation;
use sigma3_core::{
    automorphism_group, immediate_descendants, Collector, Element, FpPresentation, PcPresentation, PcWord,
};

// ---------------------------------------------------------------------------
// Coset enumeration
// ---------------------------------------------------------------------------

const NONE: u32 = u32::MAX;

/// Letters are `2i` for generator `i` and `2i + 1` for its inverse.
pub type Letters = Vec<usize>;

struct CosetTable {
    cols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    live: usize,
    max: usize,
}

impl CosetTable {
    fn new(cols: usize, max: usize) -> Self {
        CosetTable { cols, table: vec![NONE; cols], parent: vec![0], live: 1, max }
    }

    fn get(&self, c: usize, x: usize) -> Option<usize> {
        let v = self.table[c * self.cols + x];
        (v != NONE).then_some(v as usize)
    }

    fn set(&mut self, c: usize, x: usize, d: Option<usize>) {
        self.table[c * self.cols + x] = d.map_or(NONE, |d| d as u32);
    }

    fn alive(&self, c: usize) -> bool {
        self.parent[c] as usize == c
    }

    fn define(&mut self, c: usize, x: usize) -> Option<()> {
        if self.parent.len() >= self.max {
            return None;
        }
        let d = self.parent.len();
        self.parent.push(d as u32);
        self.table.extend(std::iter::repeat_n(NONE, self.cols));
        self.set(c, x, Some(d));
        self.set(d, x ^ 1, Some(c));
        self.live += 1;
        Some(())
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] as usize != r {
            r = self.parent[r] as usize;
        }
        let mut c = c;
        while self.parent[c] as usize != r {
            let next = self.parent[c] as usize;
            self.parent[c] = r as u32;
            c = next;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        self.parent[hi] = lo as u32;
        self.live -= 1;
        queue.push(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut k = 0;
        while k < queue.len() {
            let e = queue[k];
            k += 1;
            for x in 0..self.cols {
                let Some(f) = self.get(e, x) else { continue };
                if self.get(f, x ^ 1) == Some(e) {
                    self.set(f, x ^ 1, None);
                }
                let (e1, f1) = (self.rep(e), self.rep(f));
                if let Some(t) = self.get(e1, x) {
                    self.merge(f1, t, &mut queue);
                } else if let Some(t) = self.get(f1, x ^ 1) {
                    self.merge(e1, t, &mut queue);
                } else {
                    self.set(e1, x, Some(f1));
                    self.set(f1, x ^ 1, Some(e1));
                }
            }
        }
    }

    fn scan_and_fill(&mut self, a: usize, w: &[usize]) -> Option<()> {
        let (mut f, mut b) = (a, a);
        let (mut i, mut j) = (0, w.len());
        loop {
            while i < j {
                match self.get(f, w[i]) {
                    Some(t) => {
                        f = t;
                        i += 1;
                    }
                    None => break,
                }
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Some(());
            }
            while j > i {
                match self.get(b, w[j - 1] ^ 1) {
                    Some(t) => {
                        b = t;
                        j -= 1;
                    }
                    None => break,
                }
            }
            if i == j {
                self.coincidence(f, b);
                return Some(());
            }
            if j == i + 1 {
                self.set(f, w[i], Some(b));
                self.set(b, w[i] ^ 1, Some(f));
                return Some(());
            }
            self.define(f, w[i])?;
        }
    }
}

fn enumerate(ngens: usize, relators: &[Letters], subgroup: &[Letters], max: usize) -> Option<CosetTable> {
    let mut t = CosetTable::new(2 * ngens, max);
    for w in subgroup {
        t.scan_and_fill(0, w)?;
    }
    let mut c = 0;
    while c < t.parent.len() {
        if t.alive(c) {
            for w in relators {
                t.scan_and_fill(c, w)?;
                if !t.alive(c) {
                    break;
                }
            }
            if t.alive(c) {
                for x in 0..t.cols {
                    if t.get(c, x).is_none() {
                        t.define(c, x)?;
                    }
                }
            }
        }
        c += 1;
    }
    Some(t)
}

/// Index of the subgroup generated by `subgroup` in the group given by
/// `relators` (HLT strategy). `None` if more than `max` cosets are needed.
pub fn coset_enumerate(ngens: usize, relators: &[Letters], subgroup: &[Letters], max: usize) -> Option<usize> {
    enumerate(ngens, relators, subgroup, max).map(|t| t.live)
}

/// A complete coset table: `action[c][x]` is the coset `c * x` for letter
/// `x`; coset 0 is the subgroup itself.
pub fn coset_table(ngens: usize, relators: &[Letters], subgroup: &[Letters], max: usize) -> Option<Vec<Vec<usize>>> {
    let mut t = enumerate(ngens, relators, subgroup, max)?;
    let live: Vec<usize> = (0..t.parent.len()).filter(|&c| t.alive(c)).collect();
    let index: HashMap<usize, usize> = live.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut action = Vec::with_capacity(live.len());
    for &c in &live {
        let row: Vec<usize> = (0..t.cols)
            .map(|x| {
                let d = t.get(c, x).expect("complete table");
                index[&t.rep(d)]
            })
            .collect();
        action.push(row);
    }
    Some(action)
}

fn letter(g: usize, e: i64) -> Vec<usize> {
    let l = if e > 0 { 2 * g } else { 2 * g + 1 };
    vec![l; e.unsigned_abs() as usize]
}

fn pc_word_letters(w: &PcWord) -> Letters {
    w.iter().flat_map(|&(g, e)| letter(g, e as i64)).collect()
}

fn inverse_letters(w: &[usize]) -> Letters {
    w.iter().rev().map(|&l| l ^ 1).collect()
}

/// The power and commutator relations of a pc presentation as relators
/// `g_i^p w^-1` and `g_j^-1 g_i^-1 g_j g_i w^-1`.
pub fn pc_relators(pc: &PcPresentation) -> Vec<Letters> {
    let n = pc.n();
    let p = pc.p as i64;
    let mut rels = Vec::new();
    for i in 0..n {
        let mut r = letter(i, p);
        r.extend(inverse_letters(&pc_word_letters(pc.power(i))));
        rels.push(r);
    }
    for j in 0..n {
        for i in 0..j {
            let mut r = vec![2 * j + 1, 2 * i + 1, 2 * j, 2 * i];
            r.extend(inverse_letters(&pc_word_letters(pc.comm(j, i))));
            rels.push(r);
        }
    }
    rels
}

/// Order of the group defined by a pc presentation, by coset enumeration
/// over the trivial subgroup.
pub fn pc_group_order(pc: &PcPresentation, max: usize) -> Option<usize> {
    coset_enumerate(pc.n(), &pc_relators(pc), &[], max)
}

pub fn fp_relators(fp: &FpPresentation) -> Vec<Letters> {
    fp.relators
        .iter()
        .map(|w| {
            w.factors()
                .iter()
                .flat_map(|(g, e)| letter(fp.generator_index(g).expect("declared generator"), *e))
                .collect()
        })
        .collect()
}

/// Order of `G / G' G^(p^k)` for a finitely presented `G`: the relators of
/// `G`, all commutators of generators and all `p^k`-th powers of generators.
pub fn abelian_quotient_order(ngens: usize, relators: &[Letters], pk: usize, max: usize) -> Option<usize> {
    let mut rels = relators.to_vec();
    for j in 0..ngens {
        for i in 0..j {
            rels.push(vec![2 * j + 1, 2 * i + 1, 2 * j, 2 * i]);
        }
        if pk > 0 {
            rels.push(vec![2 * j; pk]);
        }
    }
    coset_enumerate(ngens, &rels, &[], max)
}

/// Logs of the invariants of a finite abelian `p`-group from the orders
/// `|A / A^(p^k)|`, `k = 1, 2, ...` (given as logs): the number of
/// invariants at least `k` is the growth from `k-1` to `k`.
pub fn type_from_power_quotients(logs: &[u32]) -> Vec<u32> {
    let mut at_least = Vec::new();
    let mut prev = 0;
    for &l in logs {
        at_least.push(l - prev);
        prev = l;
    }
    let rank = at_least.first().copied().unwrap_or(0);
    let mut out: Vec<u32> = (0..rank).map(|r| at_least.iter().filter(|&&c| c > r).count() as u32).collect();
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

pub fn log_p(mut n: usize, p: usize) -> u32 {
    let mut k = 0;
    while n > 1 {
        assert_eq!(n % p, 0, "not a power of {p}");
        n /= p;
        k += 1;
    }
    k
}

/// Abelianization type of a finitely presented group by coset enumeration
/// of its power quotients.
pub fn fp_abelian_type(ngens: usize, relators: &[Letters], p: usize, max: usize) -> Option<Vec<u32>> {
    let total = log_p(abelian_quotient_order(ngens, relators, 0, max)?, p);
    let mut logs = Vec::new();
    let mut pk = p;
    loop {
        let l = log_p(abelian_quotient_order(ngens, relators, pk, max)?, p);
        logs.push(l);
        if l == total {
            break;
        }
        pk *= p;
    }
    Some(type_from_power_quotients(&logs))
}

// ---------------------------------------------------------------------------
// Element sets
// ---------------------------------------------------------------------------

/// All elements of a group given by a consistent pc presentation.
pub fn all_elements(col: &Collector) -> Vec<Element> {
    let n = col.n();
    let p = col.p() as usize;
    let total = p.pow(n as u32);
    (0..total)
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let d = (k % p) as u8;
                    k /= p;
                    d
                })
                .collect()
        })
        .collect()
}

/// The subgroup generated by `gens`, by breadth-first closure.
pub fn closure(col: &Collector, gens: &[Element]) -> HashSet<Element> {
    let mut set = HashSet::new();
    set.insert(col.identity());
    let mut queue = vec![col.identity()];
    while let Some(a) = queue.pop() {
        for g in gens {
            let b = col.mul(&a, g);
            if set.insert(b.clone()) {
                queue.push(b);
            }
        }
    }
    set
}

/// `[A, B]` for element sets.
pub fn commutator_set(col: &Collector, a: &HashSet<Element>, b: &HashSet<Element>) -> HashSet<Element> {
    let mut gens: BTreeSet<Element> = BTreeSet::new();
    for x in a {
        for y in b {
            gens.insert(col.comm(x, y));
        }
    }
    closure(col, &gens.into_iter().collect::<Vec<_>>())
}

/// Lower central series as element sets, down to the trivial group.
pub fn lower_central_sets(col: &Collector) -> Vec<HashSet<Element>> {
    let g: HashSet<Element> = all_elements(col).into_iter().collect();
    let mut out = vec![g.clone()];
    loop {
        let next = commutator_set(col, out.last().unwrap(), &g);
        let done = next.len() == out.last().unwrap().len();
        if done {
            break;
        }
        out.push(next);
    }
    out
}

/// The quotient `G/N` by a normal subgroup, as a map to canonical coset
/// representatives.
pub struct CosetMap {
    rep: HashMap<Element, Element>,
}

impl CosetMap {
    pub fn new(col: &Collector, elements: &[Element], n: &HashSet<Element>) -> Self {
        let mut rep = HashMap::new();
        for g in elements {
            if rep.contains_key(g) {
                continue;
            }
            let coset: Vec<Element> = n.iter().map(|m| col.mul(g, m)).collect();
            let r = coset.iter().min().unwrap().clone();
            for c in coset {
                rep.insert(c, r.clone());
            }
        }
        CosetMap { rep }
    }

    pub fn of(&self, g: &[u8]) -> &Element {
        &self.rep[g]
    }
}

/// Transfer kernel type of a group with `G/G'` of type `(3^e, 3)`,
/// computed from element sets. Positions 1-3 are the maximal subgroups
/// with cyclic image in `G/G'`, position 4 the one containing the
/// 3-torsion of `G/G'`. Label 0 is the whole 3-torsion, 1-3 its
/// non-distinguished order-3 subgroups, 4 the cubes' socle `(G/G')^(3^(e-1))`
/// and 5 anything else. Positions and labels 1-3 carry an arbitrary
/// numbering, so only the orbit under relabelling is meaningful.
pub fn kappa_by_sets(col: &Collector) -> [u8; 4] {
    let elements = all_elements(col);
    let g: HashSet<Element> = elements.iter().cloned().collect();
    let derived = commutator_set(col, &g, &g);
    let q = CosetMap::new(col, &elements, &derived);
    let cls = |x: &[u8]| q.of(x).clone();
    let qorder = |x: &[u8]| -> u32 {
        let mut k = 0;
        let mut y = x.to_vec();
        while *q.of(&y) != *q.of(&col.identity()) {
            y = col.pow(&y, 3);
            k += 1;
        }
        k
    };
    let e = elements.iter().map(|x| qorder(x)).max().unwrap();
    let x = elements.iter().find(|a| qorder(a) == e).unwrap().clone();
    let xq: HashSet<Element> = (0..3u32.pow(e)).map(|k| cls(&col.pow(&x, k as i64))).collect();
    let y = elements.iter().find(|a| qorder(a) == 1 && !xq.contains(&cls(a))).unwrap().clone();
    let qv = 3i64.pow(e - 1);
    let sub_of = |gens: &[Element]| -> BTreeSet<Element> {
        closure(col, &gens.iter().map(|g| cls(g)).collect::<Vec<_>>()).iter().map(|c| cls(c)).collect()
    };
    let xq_pow = col.pow(&x, qv);
    let torsion = sub_of(&[xq_pow.clone(), y.clone()]);
    let labels = [
        sub_of(&[y.clone()]),
        sub_of(&[col.mul(&xq_pow, &y)]),
        sub_of(&[col.mul(&col.pow(&xq_pow, 2), &y)]),
        sub_of(&[xq_pow.clone()]),
    ];
    let xy = col.mul(&x, &y);
    let xy2 = col.mul(&x, &col.pow(&y, 2));
    let maximal_gens: [(Vec<Element>, Element); 4] = [
        (vec![x.clone()], y.clone()),
        (vec![xy], y.clone()),
        (vec![xy2], y.clone()),
        (vec![col.pow(&x, 3), y.clone()], x.clone()),
    ];
    let mut out = [0u8; 4];
    for (pos, (gens, t)) in maximal_gens.iter().enumerate() {
        let mut all: Vec<Element> = gens.clone();
        all.extend(derived.iter().cloned());
        let m = closure(col, &all);
        assert_eq!(m.len() * 3, g.len());
        let m_derived = commutator_set(col, &m, &m);
        let reps = [col.identity(), t.clone(), col.pow(t, 2)];
        let coset_of = |a: &[u8]| -> usize {
            (0..3).find(|&i| m.contains(&col.mul(a, &col.inv(&reps[i])))).unwrap()
        };
        let mut kernel = BTreeSet::new();
        for a in &elements {
            let mut v = col.identity();
            for r in &reps {
                let ra = col.mul(r, a);
                let j = coset_of(&ra);
                v = col.mul(&v, &col.mul(&ra, &col.inv(&reps[j])));
            }
            if m_derived.contains(&v) {
                kernel.insert(cls(a));
            }
        }
        out[pos] = if kernel == torsion {
            0
        } else {
            labels.iter().position(|l| *l == kernel).map_or(5, |i| i as u8 + 1)
        };
    }
    out
}

/// Whether the map `gen_i -> images[i]` (on the weight-1 generators)
/// extends to an automorphism, checked on all elements: the images must
/// generate and every relation must hold.
pub fn count_automorphisms_by_sets(pc: &PcPresentation) -> usize {
    let col = Collector::new(pc);
    let elements = all_elements(&col);
    let d = pc.d();
    let n = pc.n();
    let mut count = 0;
    let mut choice = vec![0usize; d];
    loop {
        let images: Vec<Element> = choice.iter().map(|&k| elements[k].clone()).collect();
        if let Some(full) = extend_images(pc, &col, &images) {
            let span = closure(&col, &full[..d]);
            if span.len() == elements.len() {
                let ok = (0..n).all(|i| {
                    let lhs = col.pow(&full[i], pc.p as i64);
                    lhs == eval(&col, &full, pc.power(i))
                }) && (0..n).all(|j| {
                    (0..j).all(|i| col.comm(&full[j], &full[i]) == eval(&col, &full, pc.comm(j, i)))
                });
                if ok {
                    count += 1;
                }
            }
        }
        let mut k = 0;
        loop {
            if k == d {
                return count;
            }
            choice[k] += 1;
            if choice[k] < elements.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn eval(col: &Collector, images: &[Element], w: &PcWord) -> Element {
    let mut r = col.identity();
    for &(g, e) in w {
        r = col.mul(&r, &col.pow(&images[g], e as i64));
    }
    r
}

/// Images of all pc generators determined through their definitions.
fn extend_images(pc: &PcPresentation, col: &Collector, top: &[Element]) -> Option<Vec<Element>> {
    let mut full: Vec<Element> = top.to_vec();
    for g in pc.d()..pc.n() {
        let img = match pc.defs[g]? {
            sigma3_core::Def::Power(j) => col.pow(&full[j], pc.p as i64),
            sigma3_core::Def::Comm(j, k) => col.comm(&full[j], &full[k]),
        };
        full.push(img);
    }
    Some(full)
}

// ---------------------------------------------------------------------------
// Sample groups
// ---------------------------------------------------------------------------

/// All immediate descendants of all step sizes, iterated from `root` up
/// to order `p^max_n`.
pub fn descendants_up_to(root: &PcPresentation, max_n: usize) -> Vec<PcPresentation> {
    let mut out = Vec::new();
    let mut frontier = vec![root.clone()];
    while let Some(g) = frontier.pop() {
        let aut = automorphism_group(&g).expect("automorphism group");
        for s in 1..=max_n.saturating_sub(g.n()) {
            let opts = DescendantOptions { with_automorphisms: g.n() + s < max_n, ..Default::default() };
            let rep = match immediate_descendants(&g, &aut, s, opts) {
                Ok(r) => r,
                Err(_) => continue,
            };
            for c in rep.children {
                if c.capable() && c.pc.n() < max_n {
                    frontier.push(c.pc.clone());
                }
                out.push(c.pc);
            }
        }
    }
    out
}

/// A random element.
pub fn random_element(rng: &mut impl Rng, n: usize, p: u8) -> Element {
    (0..n).map(|_| rng.gen_range(0..p)).collect()
}

/// Replace the right-hand side of one non-defining relation by a random
/// normal-form word in the admissible generators.
pub fn mutate(pc: &PcPresentation, rng: &mut impl Rng) -> Option<PcPresentation> {
    let n = pc.n();
    let mut slots: Vec<Relation> = (0..n).map(Relation::Power).collect();
    for j in 0..n {
        for i in 0..j {
            slots.push(Relation::Comm(j, i));
        }
    }
    slots.retain(|r| !pc.is_definition(*r));
    let after = |r: &Relation| match *r {
        Relation::Power(i) => i,
        Relation::Comm(j, _) => j,
    };
    slots.retain(|r| after(r) + 1 < n);
    if slots.is_empty() {
        return None;
    }
    let r = slots[rng.gen_range(0..slots.len())];
    let w: PcWord = (after(&r) + 1..n)
        .filter_map(|g| {
            let e = rng.gen_range(0..pc.p as u8);
            (e != 0).then_some((g, e))
        })
        .collect();
    let mut q = pc.clone();
    match r {
        Relation::Power(i) => q.set_power(i, w),
        Relation::Comm(j, i) => q.set_comm(j, i, w),
    }
    Some(q)
}

// ---------------------------------------------------------------------------
// Abelianization by determinantal divisors
// ---------------------------------------------------------------------------

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => (0..m.len())
            .map(|c| {
                let minor: Vec<Vec<i128>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, &x)| x).collect()).collect();
                let s = if c % 2 == 0 { 1 } else { -1 };
                s * m[0][c] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariants (as logs base `p`) of `Z^d / L`, where `L` is spanned by
/// `rows`, from the gcds `D_k` of the `k x k` minors: the `k`-th invariant
/// is `D_k / D_(k-1)`.
pub fn invariants_by_minors(rows: &[Vec<i128>], d: usize, p: i128) -> Vec<u32> {
    let rows: Vec<&Vec<i128>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
    let mut prev = 1i128;
    let mut out = Vec::new();
    for k in 1..=d {
        let mut g = 0i128;
        for rs in subsets(rows.len(), k) {
            for cs in subsets(d, k) {
                let m: Vec<Vec<i128>> = rs.iter().map(|&r| cs.iter().map(|&c| rows[r][c]).collect()).collect();
                g = gcd(g, det(&m));
            }
        }
        assert!(g != 0, "infinite abelianization");
        let mut q = g / prev;
        prev = g;
        let mut l = 0;
        while q % p == 0 {
            q /= p;
            l += 1;
        }
        assert_eq!(q, 1, "not a {p}-group");
        if l > 0 {
            out.push(l);
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Abelianization of a pc group, after eliminating every defined
/// generator in favour of the weight-1 generators.
pub fn pc_abelian_type_by_minors(pc: &PcPresentation) -> Vec<u32> {
    let d = pc.d();
    let p = pc.p as i128;
    let mut vecs: Vec<Vec<i128>> = Vec::new();
    for g in 0..pc.n() {
        let v = match pc.defs[g] {
            None => (0..d).map(|k| (k == g) as i128).collect(),
            Some(sigma3_core::Def::Power(j)) => vecs[j].iter().map(|x| p * x).collect(),
            Some(sigma3_core::Def::Comm(..)) => vec![0; d],
        };
        vecs.push(v);
    }
    let word = |w: &PcWord| -> Vec<i128> {
        let mut s = vec![0i128; d];
        for &(g, e) in w {
            for k in 0..d {
                s[k] += e as i128 * vecs[g][k];
            }
        }
        s
    };
    let mut rows = Vec::new();
    for i in 0..pc.n() {
        let w = word(pc.power(i));
        rows.push((0..d).map(|k| p * vecs[i][k] - w[k]).collect());
    }
    for j in 0..pc.n() {
        for i in 0..j {
            rows.push(word(pc.comm(j, i)).iter().map(|x| -x).collect());
        }
    }
    invariants_by_minors(&rows, d, p)
}

/// Invariant factors `D_k / D_(k-1)` of an integer matrix from the gcds of
/// its minors, up to the rank (zero factors omitted).
pub fn determinantal_invariants(rows: &[Vec<i128>], cols: usize) -> Vec<i128> {
    let mut out = Vec::new();
    let mut prev = 1i128;
    for k in 1..=rows.len().min(cols) {
        let mut g = 0i128;
        for rs in subsets(rows.len(), k) {
            for cs in subsets(cols, k) {
                let m: Vec<Vec<i128>> = rs.iter().map(|&r| cs.iter().map(|&c| rows[r][c]).collect()).collect();
                g = gcd(g, det(&m));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

/// Determinant by cofactor expansion (small matrices only).
pub fn cofactor_det(m: &[Vec<i128>]) -> i128 {
    if m.is_empty() {
        1
    } else {
        det(m)
    }
}

// ---------------------------------------------------------------------------
// Subgroup abelianizations by Reidemeister-Schreier
// ---------------------------------------------------------------------------

/// Abelianized Reidemeister-Schreier presentation of a subgroup of finite
/// index: one column per Schreier generator (a non-tree edge `(c, g)` of the
/// coset table), one row per coset and relator.
pub struct Schreier {
    pub ngens: usize,
    pub table: Vec<Vec<usize>>,
    /// Word from coset 0 to each coset along the spanning tree.
    pub paths: Vec<Letters>,
    /// The edges `(c, g)` that are Schreier generators, in column order.
    pub edges: Vec<(usize, usize)>,
    pub rows: Vec<Vec<i64>>,
}

impl Schreier {
    pub fn new(ngens: usize, relators: &[Letters], subgroup: &[Letters], max: usize) -> Option<Schreier> {
        let table = coset_table(ngens, relators, subgroup, max)?;
        let n = table.len();
        let mut paths: Vec<Option<Letters>> = vec![None; n];
        let mut tree = HashSet::new();
        paths[0] = Some(Vec::new());
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            for x in 0..2 * ngens {
                let d = table[c][x];
                if paths[d].is_none() {
                    let mut w = paths[c].clone().unwrap();
                    w.push(x);
                    paths[d] = Some(w);
                    // record the edge in its positive direction
                    tree.insert(if x % 2 == 0 { (c, x / 2) } else { (d, x / 2) });
                    queue.push_back(d);
                }
            }
        }
        let paths: Vec<Letters> = paths.into_iter().map(|p| p.expect("connected table")).collect();
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|c| (0..ngens).map(move |g| (c, g))).filter(|e| !tree.contains(e)).collect();
        let column: HashMap<(usize, usize), usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut rows = Vec::new();
        for c in 0..n {
            for w in relators {
                let mut row = vec![0i64; edges.len()];
                let mut d = c;
                for &x in w {
                    let g = x / 2;
                    if x % 2 == 0 {
                        if let Some(&k) = column.get(&(d, g)) {
                            row[k] += 1;
                        }
                        d = table[d][x];
                    } else {
                        d = table[d][x];
                        if let Some(&k) = column.get(&(d, g)) {
                            row[k] -= 1;
                        }
                    }
                }
                assert_eq!(d, c, "relator does not close");
                if row.iter().any(|&v| v != 0) {
                    rows.push(row);
                }
            }
        }
        Some(Schreier { ngens, table, paths, edges, rows })
    }

    /// The Schreier generator of column `k` as a word in the group.
    pub fn generator_word(&self, k: usize) -> Letters {
        let (c, g) = self.edges[k];
        let mut w = self.paths[c].clone();
        w.push(2 * g);
        w.extend(inverse_letters(&self.paths[self.table[c][2 * g]]));
        w
    }

    /// Logarithms of the invariants of the `p`-part of the abelianization,
    /// largest first, for a finite abelianization of exponent below `p^k`.
    pub fn abelian_invariants(&self, p: i64, k: u32) -> Vec<u32> {
        let valuations = valuations_mod_prime_power(&self.rows, self.edges.len(), p, k);
        assert!(valuations.iter().all(|&v| v < k), "abelianization infinite or exponent >= {p}^{k}");
        let mut logs: Vec<u32> = valuations.into_iter().filter(|&v| v > 0).collect();
        logs.sort_unstable_by(|a, b| b.cmp(a));
        logs
    }

    /// A basis of the homomorphisms from the subgroup to `Z/p`, as values on
    /// the Schreier generators.
    pub fn homomorphisms_mod_p(&self, p: i64) -> Vec<Vec<i64>> {
        right_nullspace_mod_p(&self.rows, self.edges.len(), p)
    }
}

fn mod_pow(mut b: i128, mut e: i128, m: i128) -> i128 {
    let mut r = 1;
    b = b.rem_euclid(m);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Diagonal valuations of `rows` over `Z/p^k`, one per column; a column
/// without pivot (or a pivot divisible by `p^k`) has valuation `k`. This is
/// elimination over a local ring: the pivot of least valuation divides every
/// remaining entry.
pub fn valuations_mod_prime_power(rows: &[Vec<i64>], cols: usize, p: i64, k: u32) -> Vec<u32> {
    let m = (p as i128).pow(k);
    let phi = m / p as i128 * (p as i128 - 1);
    let val = |x: i128| -> u32 {
        if x == 0 {
            return k;
        }
        let (mut x, mut v) = (x, 0);
        while x % p as i128 == 0 {
            x /= p as i128;
            v += 1;
        }
        v
    };
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| (x as i128).rem_euclid(m)).collect()).collect();
    let mut out = Vec::new();
    let mut done_rows = 0;
    let mut active: Vec<usize> = (0..cols).collect();
    while !active.is_empty() {
        let mut best: Option<(u32, usize, usize)> = None;
        for (r, row) in a.iter().enumerate().skip(done_rows) {
            for (ci, &c) in active.iter().enumerate() {
                let v = val(row[c]);
                if v < k && best.is_none_or(|b| v < b.0) {
                    best = Some((v, r, ci));
                }
            }
        }
        let Some((v, r, ci)) = best else {
            out.extend(std::iter::repeat_n(k, active.len()));
            break;
        };
        let c = active.remove(ci);
        a.swap(done_rows, r);
        let pivot = a[done_rows][c];
        let unit = pivot / (p as i128).pow(v);
        let unit_inv = mod_pow(unit, phi - 1, m);
        for r in done_rows + 1..a.len() {
            let x = a[r][c];
            if x == 0 {
                continue;
            }
            // x = p^v * y, factor = y / unit
            let factor = (x / (p as i128).pow(v)) % m * unit_inv % m;
            let pivot_row = a[done_rows].clone();
            for (t, pv) in a[r].iter_mut().zip(&pivot_row) {
                *t = (*t - factor * pv % m).rem_euclid(m);
            }
        }
        // Column operations clear the rest of the pivot row; they change
        // no other diagonal valuation, so only the remaining rows matter.
        done_rows += 1;
        out.push(v);
    }
    out
}

pub fn right_nullspace_mod_p(rows: &[Vec<i64>], cols: usize, p: i64) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&x| x.rem_euclid(p)).collect()).collect();
    let inv = |x: i64| (1..p).find(|&y| x * y % p == 1).unwrap();
    let mut pivots = Vec::new();
    let mut r0 = 0;
    for c in 0..cols {
        let Some(r) = (r0..a.len()).find(|&r| a[r][c] != 0) else { continue };
        a.swap(r0, r);
        let s = inv(a[r0][c]);
        for x in a[r0].iter_mut() {
            *x = *x * s % p;
        }
        let pr = a[r0].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != r0 && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x = (*x - f * y).rem_euclid(p);
                }
            }
        }
        pivots.push(c);
        r0 += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0i64; cols];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (-a[i][f]).rem_euclid(p);
            }
            v
        })
        .collect()
}

fn power_letters(w: &[usize], e: usize) -> Letters {
    w.iter().copied().cycle().take(w.len() * e).collect()
}

/// Second-layer abelian types of a consistent two-generator presentation,
/// computed from its relators alone. For each maximal subgroup
/// `M_v = <g1^a g2^b, g3, ..., gn>`, `v = (a, b)` in `vs`, the maximal
/// subgroups of `M_v` are the kernels of the nonzero homomorphisms
/// `M_v -> Z/3` (up to scalars); their abelianizations are read off the
/// Reidemeister-Schreier relation matrices.
pub fn second_layer_by_schreier(pc: &PcPresentation, vs: &[(usize, usize)]) -> Vec<Vec<Vec<u32>>> {
    let n = pc.n();
    let rels = pc_relators(pc);
    let max = 1 << 20;
    vs.iter()
        .map(|&(a, b)| {
            let mut top = vec![0usize; a];
            top.extend(std::iter::repeat_n(2, b));
            let mut gens: Vec<Letters> = vec![top];
            gens.extend((2..n).map(|g| vec![2 * g]));
            let m = Schreier::new(n, &rels, &gens, max).expect("index 3");
            assert_eq!(m.table.len(), 3);
            let homs = m.homomorphisms_mod_p(3);
            // projective points of the span of `homs`
            let mut seen = HashSet::new();
            let mut types = Vec::new();
            for code in 1..3usize.pow(homs.len() as u32) {
                let coeffs: Vec<i64> = (0..homs.len()).map(|i| (code / 3usize.pow(i as u32) % 3) as i64).collect();
                let phi: Vec<i64> = (0..m.edges.len())
                    .map(|j| homs.iter().zip(&coeffs).map(|(h, c)| h[j] * c).sum::<i64>().rem_euclid(3))
                    .collect();
                let lead = phi.iter().position(|&x| x != 0).unwrap();
                let scale = if phi[lead] == 1 { 1 } else { 2 };
                let norm: Vec<i64> = phi.iter().map(|&x| (x * scale) % 3).collect();
                if !seen.insert(norm.clone()) {
                    continue;
                }
                // Kernel of phi: Schreier generators for the transversal
                // {1, s, s^2}, s the generator with phi(s) = 1.
                let s = m.generator_word(lead);
                let mut kernel: Vec<Letters> = vec![power_letters(&s, 3)];
                for j in 0..m.edges.len() {
                    if j == lead {
                        continue;
                    }
                    let t = m.generator_word(j);
                    for i in 0..3 {
                        let back = (i + norm[j] as usize) % 3;
                        let mut w = power_letters(&s, i);
                        w.extend(t.iter().copied());
                        w.extend(inverse_letters(&power_letters(&s, back)));
                        kernel.push(w);
                    }
                }
                let k = Schreier::new(n, &rels, &kernel, max).expect("index 9");
                assert_eq!(k.table.len(), 9);
                types.push(k.abelian_invariants(3, 30));
            }
            types.sort();
            types
        })
        .collect()
}
