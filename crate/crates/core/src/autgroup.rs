//! Automorphism groups of p-groups given by weighted pc-presentations.
//!
//! An automorphism is stored by the images of all pc generators; it is
//! determined by the images of the weight-1 generators, the rest following
//! from the definitions. The group is kept as an extension of a small
//! matrix group (the action on the Frattini quotient, enumerated
//! explicitly) by a p-group `K` of automorphisms acting trivially there.
//! `K` is filtered by `K_j = {a : x^{-1} a(x) in P_j}`; each quotient
//! `K_j/K_{j+1}` is a GF(p)-space, so `K` is held as an echelonized basis
//! per layer, exactly like a polycyclic generating sequence.
//!
//! Composition convention: `a.then(b)` is "first `a`, then `b`", i.e. the
//! map `x -> b(a(x))`. Matrices act on row vectors from the right, so the
//! matrix of `a.then(b)` is `mat(a) * mat(b)`.

use std::collections::HashMap;

use crate::collector::{Collector, Element};
use crate::cover::CoverData;
use crate::error::{Error, Result};
use crate::gfp::{Field, Subspace};
use crate::pc::{Def, PcPresentation, Relation};

/// An automorphism given by the images of all pc generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Automorphism {
    pub images: Vec<Element>,
}

impl Automorphism {
    pub fn identity(col: &Collector) -> Self {
        Automorphism { images: (0..col.n()).map(|i| col.gen(i)).collect() }
    }

    /// Extend images of the weight-1 generators along the definitions.
    pub fn from_generator_images(pc: &PcPresentation, col: &Collector, gens: &[Element]) -> Self {
        let d = gens.len();
        let mut images = gens.to_vec();
        for g in d..pc.n() {
            let img = match pc.defs[g] {
                Some(Def::Power(j)) => col.pow(&images[j], pc.p as i64),
                Some(Def::Comm(j, k)) => col.comm(&images[j], &images[k]),
                None => panic!("generator {} of weight > 1 without a definition", g + 1),
            };
            images.push(img);
        }
        Automorphism { images }
    }

    /// Image of an arbitrary element.
    pub fn apply(&self, col: &Collector, x: &[u8]) -> Element {
        let mut out = col.identity();
        for (g, &e) in x.iter().enumerate() {
            for _ in 0..e {
                col.mul_into(&mut out, &self.images[g]);
            }
        }
        out
    }

    /// First `self`, then `other`.
    pub fn then(&self, pc: &PcPresentation, col: &Collector, other: &Automorphism) -> Self {
        let d = pc.d();
        let gens: Vec<Element> = self.images[..d].iter().map(|x| other.apply(col, x)).collect();
        Automorphism::from_generator_images(pc, col, &gens)
    }

    pub fn pow(&self, pc: &PcPresentation, col: &Collector, mut k: u128) -> Self {
        let mut result = Automorphism::identity(col);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.then(pc, col, &base);
            }
            k >>= 1;
            if k > 0 {
                base = base.then(pc, col, &base);
            }
        }
        result
    }

    /// Action on the Frattini quotient: row `i` is the image of `x_i`.
    pub fn top_matrix(&self, d: usize) -> Vec<Vec<u8>> {
        self.images[..d].iter().map(|x| x[..d].to_vec()).collect()
    }

    pub fn is_identity(&self, col: &Collector) -> bool {
        self.images.iter().enumerate().all(|(i, x)| *x == col.gen(i))
    }

    /// Whether the images satisfy every relation of the presentation and
    /// generate the group (checked on the Frattini quotient).
    pub fn is_automorphism(&self, pc: &PcPresentation, col: &Collector) -> bool {
        let f = Field::new(pc.p);
        if f.mat_inv(&self.top_matrix(pc.d())).is_none() && pc.d() > 0 {
            return false;
        }
        let img_word = |w: &[(usize, u8)]| {
            let mut a = col.identity();
            for &(g, e) in w {
                for _ in 0..e {
                    col.mul_into(&mut a, &self.images[g]);
                }
            }
            a
        };
        let n = pc.n();
        for i in 0..n {
            if col.pow(&self.images[i], pc.p as i64) != img_word(pc.power(i)) {
                return false;
            }
            for j in i + 1..n {
                if col.comm(&self.images[j], &self.images[i]) != img_word(pc.comm(j, i)) {
                    return false;
                }
            }
        }
        true
    }
}

/// Matrix order in GL(d, p).
fn matrix_order(f: Field, m: &[Vec<u8>]) -> u128 {
    let id = f.identity(m.len());
    let mut x = m.to_vec();
    let mut k = 1;
    while x != id {
        x = f.mat_mul(&x, m);
        k += 1;
    }
    k
}

#[derive(Clone, Debug)]
struct LayerElement {
    pivot: usize,
    vector: Vec<u8>,
    aut: Automorphism,
    inverse: Automorphism,
}

/// A subgroup of `Aut(G)` with exact membership testing and order.
#[derive(Clone, Debug)]
pub struct AutGroup {
    pc: PcPresentation,
    col: Collector,
    field: Field,
    gens: Vec<Automorphism>,
    /// Frattini-quotient image, enumerated: matrix -> index.
    top_index: HashMap<Vec<Vec<u8>>, usize>,
    top_reps: Vec<(Automorphism, Automorphism)>,
    /// Positions of each weight block.
    blocks: Vec<std::ops::Range<usize>>,
    layers: Vec<Vec<LayerElement>>,
}

impl AutGroup {
    /// The trivial subgroup of `Aut(G)`.
    pub fn trivial(pc: &PcPresentation) -> Self {
        let col = Collector::new(pc);
        let field = Field::new(pc.p);
        let id = Automorphism::identity(&col);
        let c = pc.p_class() as usize;
        let mut blocks = Vec::new();
        for w in 1..=c as u32 {
            let start = pc.weights.iter().position(|&x| x == w).unwrap_or(pc.n());
            let end = pc.weights.iter().rposition(|&x| x == w).map_or(start, |e| e + 1);
            blocks.push(start..end);
        }
        let mut top_index = HashMap::new();
        top_index.insert(id.top_matrix(pc.d()), 0);
        AutGroup {
            pc: pc.clone(),
            col,
            field,
            gens: Vec::new(),
            top_index,
            top_reps: vec![(id.clone(), id)],
            blocks,
            layers: vec![Vec::new(); c],
        }
    }

    /// The group generated by `gens`.
    pub fn generated_by(pc: &PcPresentation, gens: impl IntoIterator<Item = Automorphism>) -> Self {
        let mut g = AutGroup::trivial(pc);
        for a in gens {
            g.add_generator(a);
        }
        g
    }

    pub fn presentation(&self) -> &PcPresentation {
        &self.pc
    }

    pub fn collector(&self) -> &Collector {
        &self.col
    }

    pub fn generators(&self) -> &[Automorphism] {
        &self.gens
    }

    pub fn top_order(&self) -> usize {
        self.top_reps.len()
    }

    /// `log_p |K|`
    pub fn kernel_log_order(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn order(&self) -> u128 {
        self.top_order() as u128 * (self.pc.p as u128).pow(self.kernel_log_order() as u32)
    }

    fn then(&self, a: &Automorphism, b: &Automorphism) -> Automorphism {
        a.then(&self.pc, &self.col, b)
    }

    /// Inverse of a general automorphism via its order.
    pub fn inverse(&self, a: &Automorphism) -> Automorphism {
        let t = matrix_order(self.field, &a.top_matrix(self.pc.d()));
        let mut b = a.pow(&self.pc, &self.col, t);
        let mut ord = t;
        while !b.is_identity(&self.col) {
            b = b.pow(&self.pc, &self.col, self.pc.p as u128);
            ord *= self.pc.p as u128;
        }
        a.pow(&self.pc, &self.col, ord - 1)
    }

    /// Level and layer vector of an element of `K`, or `None` for the
    /// identity.
    fn layer_vector(&self, k: &Automorphism) -> Option<(usize, Vec<u8>)> {
        let d = self.pc.d();
        let diffs: Vec<Element> =
            (0..d).map(|i| self.col.mul(&self.col.inv(&self.col.gen(i)), &k.images[i])).collect();
        for (lvl, block) in self.blocks.iter().enumerate().skip(1) {
            let v: Vec<u8> = diffs.iter().flat_map(|x| x[block.clone()].iter().copied()).collect();
            if v.iter().any(|&x| x != 0) {
                return Some((lvl, v));
            }
        }
        None
    }

    /// Reduce an element of `K` against the layer bases. Returns the
    /// residue if it is not in the current `K`.
    fn sift(&self, mut k: Automorphism) -> Option<(usize, Vec<u8>, Automorphism)> {
        let f = self.field;
        loop {
            let (lvl, mut v) = self.layer_vector(&k)?;
            for b in &self.layers[lvl] {
                let c = v[b.pivot];
                if c != 0 {
                    for _ in 0..c {
                        k = self.then(&k, &b.inverse);
                    }
                    f.axpy(&mut v, f.neg(c), &b.vector);
                }
            }
            if v.iter().any(|&x| x != 0) {
                return Some((lvl, v, k));
            }
        }
    }

    /// Insert an element of `K`, closing under powers and commutators.
    /// Returns whether `K` grew.
    fn insert_kernel(&mut self, k: Automorphism) -> bool {
        let f = self.field;
        let p = self.pc.p as u128;
        let c = self.blocks.len();
        let mut grew = false;
        let mut queue = vec![k];
        while let Some(k) = queue.pop() {
            let Some((lvl, v, k)) = self.sift(k) else { continue };
            grew = true;
            let pivot = v.iter().position(|&x| x != 0).unwrap();
            let s = f.inv(v[pivot]);
            let k = k.pow(&self.pc, &self.col, s as u128);
            let mut vector = v;
            f.scale(&mut vector, s);
            // Exponent of K divides p^(c-1).
            let inverse = k.pow(&self.pc, &self.col, p.pow(c as u32 - 1) - 1);
            if lvl + 1 < c {
                queue.push(k.pow(&self.pc, &self.col, p));
                for (l2, layer) in self.layers.iter().enumerate() {
                    if lvl + l2 >= c {
                        continue;
                    }
                    for b in layer {
                        // [k, b] = k^-1 b^-1 k b
                        let x = self.then(&self.then(&self.then(&inverse, &b.inverse), &k), &b.aut);
                        queue.push(x);
                    }
                }
            }
            let layer = &mut self.layers[lvl];
            let at = layer.iter().position(|b| b.pivot > pivot).unwrap_or(layer.len());
            layer.insert(at, LayerElement { pivot, vector, aut: k, inverse });
        }
        grew
    }

    /// Whether `a` lies in the group.
    pub fn contains(&self, a: &Automorphism) -> bool {
        let m = a.top_matrix(self.pc.d());
        let Some(&i) = self.top_index.get(&m) else { return false };
        let k = self.then(a, &self.top_reps[i].1);
        self.sift(k).is_none()
    }

    fn schreier_for(&mut self, g: &Automorphism) {
        for i in 0..self.top_reps.len() {
            let (rep, _) = &self.top_reps[i];
            let s = self.then(rep, g);
            let j = self.top_index[&s.top_matrix(self.pc.d())];
            let k = self.then(&s, &self.top_reps[j].1);
            self.insert_kernel(k);
        }
    }

    /// Add a generator; returns whether the group grew.
    pub fn add_generator(&mut self, a: Automorphism) -> bool {
        if self.contains(&a) {
            return false;
        }
        let d = self.pc.d();
        self.gens.push(a.clone());
        let m = a.top_matrix(d);
        if self.top_index.contains_key(&m) {
            self.schreier_for(&a);
            return true;
        }
        // The top group grows: re-enumerate it and redo all Schreier
        // generators.
        let mut i = 0;
        while i < self.top_reps.len() {
            for g in self.gens.clone() {
                let rep = self.then(&self.top_reps[i].0, &g);
                let mat = rep.top_matrix(d);
                if !self.top_index.contains_key(&mat) {
                    let inv = self.inverse(&rep);
                    self.top_index.insert(mat, self.top_reps.len());
                    self.top_reps.push((rep, inv));
                }
            }
            i += 1;
        }
        for g in self.gens.clone() {
            self.schreier_for(&g);
        }
        true
    }

    /// Matrices of the generators acting on the p-multiplicator of a cover.
    pub fn multiplicator_action(&self, cd: &CoverData) -> Vec<Vec<Vec<u8>>> {
        let ccol = Collector::new(&cd.cover);
        self.gens.iter().map(|a| multiplicator_matrix(cd, &ccol, a)).collect()
    }
}

/// Matrix of the lift of `a` acting on the multiplicator `M` of `cd`.
pub fn multiplicator_matrix(cd: &CoverData, ccol: &Collector, a: &Automorphism) -> Vec<Vec<u8>> {
    let n = cd.base.n();
    let d = cd.base.d();
    let total = n + cd.r;
    let gens: Vec<Element> = a.images[..d]
        .iter()
        .map(|x| {
            let mut y = x.clone();
            y.resize(total, 0);
            y
        })
        .collect();
    // Extend along the definitions of G only (the cover has them too).
    let mut images = gens;
    for g in d..n {
        let img = match cd.base.defs[g] {
            Some(Def::Power(j)) => ccol.pow(&images[j], cd.base.p as i64),
            Some(Def::Comm(j, k)) => ccol.comm(&images[j], &images[k]),
            None => unreachable!(),
        };
        images.push(img);
    }
    (0..cd.r)
        .map(|t| {
            let rel = match cd.cover.defs[n + t] {
                Some(Def::Power(j)) => Relation::Power(j),
                Some(Def::Comm(j, k)) => Relation::Comm(j, k),
                None => unreachable!(),
            };
            let v = cd.relation_value(ccol, &images, rel);
            debug_assert!(v[..n].iter().all(|&x| x == 0));
            v[n..].to_vec()
        })
        .collect()
}

/// Generators of GL(d, p): elementary transvections and one diagonal
/// matrix with a primitive root.
pub fn general_linear_generators(p: u32, d: usize) -> Vec<Vec<Vec<u8>>> {
    let f = Field::new(p);
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i != j {
                let mut m = f.identity(d);
                m[i][j] = 1;
                out.push(m);
            }
        }
    }
    let omega = (2..p).find(|&w| (1..p - 1).all(|k| (w as u64).pow(k) % p as u64 != 1)).unwrap_or(1) as u8;
    if omega != 1 && d > 0 {
        let mut m = f.identity(d);
        m[0][0] = omega;
        out.push(m);
    }
    out
}

/// Automorphism of an elementary abelian group from a matrix.
fn matrix_automorphism(pc: &PcPresentation, col: &Collector, m: &[Vec<u8>]) -> Automorphism {
    let n = pc.n();
    let gens: Vec<Element> = m
        .iter()
        .map(|row| {
            let mut x = row.clone();
            x.resize(n, 0);
            x
        })
        .collect();
    Automorphism::from_generator_images(pc, col, &gens)
}

/// Orbit of a subspace under matrices, with a Schreier tree.
pub struct SubspaceOrbit {
    pub points: Vec<Subspace>,
    pub index: HashMap<Subspace, usize>,
    /// `(parent, generator)` for every point except the root.
    pub tree: Vec<Option<(usize, usize)>>,
}

pub fn subspace_orbit(f: Field, start: &Subspace, mats: &[Vec<Vec<u8>>]) -> SubspaceOrbit {
    let mut points = vec![start.clone()];
    let mut index = HashMap::new();
    index.insert(start.clone(), 0);
    let mut tree = vec![None];
    let mut i = 0;
    while i < points.len() {
        for (g, m) in mats.iter().enumerate() {
            let img = points[i].image(f, m);
            if !index.contains_key(&img) {
                index.insert(img.clone(), points.len());
                points.push(img);
                tree.push(Some((i, g)));
            }
        }
        i += 1;
    }
    SubspaceOrbit { points, index, tree }
}

/// Lift the stabilizer of `u` in `aut` to automorphisms of the quotient
/// `child = G*/U`, adding the central automorphisms. `child` must have the
/// generators of `G` first, with the same definitions.
pub fn lift_stabilizer(aut: &AutGroup, cd: &CoverData, u: &Subspace, child: &PcPresentation) -> Result<AutGroup> {
    let f = Field::new(cd.base.p);
    let mats = aut.multiplicator_action(cd);
    let orbit = subspace_orbit(f, u, &mats);
    let order = aut.order();
    let len = orbit.points.len() as u128;
    if !order.is_multiple_of(len) {
        return Err(Error::InvalidArgument("orbit length does not divide the group order".into()));
    }
    let n_base = cd.base.n();
    let n = child.n();
    let d = child.d();
    let s = n - n_base;
    let mut h = AutGroup::trivial(child);
    let ccol = h.col.clone();
    let target = order / len * (child.p as u128).pow((d * s) as u32);

    // Central automorphisms x_i -> x_i * h_k.
    for i in 0..d {
        for k in n_base..n {
            let mut gens: Vec<Element> = (0..d).map(|j| ccol.gen(j)).collect();
            gens[i][k] = 1;
            h.add_generator(Automorphism::from_generator_images(child, &ccol, &gens));
        }
    }

    let lift = |a: &Automorphism| -> Automorphism {
        let gens: Vec<Element> = a.images[..d]
            .iter()
            .map(|x| {
                let mut y = x.clone();
                y.resize(n, 0);
                y
            })
            .collect();
        Automorphism::from_generator_images(child, &ccol, &gens)
    };

    // Transversal elements on demand.
    let mut reps: HashMap<usize, (Automorphism, Automorphism)> = HashMap::new();
    let id = Automorphism::identity(&aut.col);
    reps.insert(0, (id.clone(), id));
    fn rep_of(
        aut: &AutGroup,
        orbit: &SubspaceOrbit,
        reps: &mut HashMap<usize, (Automorphism, Automorphism)>,
        i: usize,
    ) -> (Automorphism, Automorphism) {
        if let Some(r) = reps.get(&i) {
            return r.clone();
        }
        let (parent, g) = orbit.tree[i].unwrap();
        let (pr, _) = rep_of(aut, orbit, reps, parent);
        let r = aut.then(&pr, &aut.gens[g]);
        let inv = aut.inverse(&r);
        reps.insert(i, (r.clone(), inv.clone()));
        (r, inv)
    }

    'outer: for i in 0..orbit.points.len() {
        for (g, m) in mats.iter().enumerate() {
            if h.order() >= target {
                break 'outer;
            }
            let img = orbit.points[i].image(f, m);
            let j = orbit.index[&img];
            if orbit.tree[j] == Some((i, g)) {
                continue;
            }
            let (ri, _) = rep_of(aut, &orbit, &mut reps, i);
            let (_, rj_inv) = rep_of(aut, &orbit, &mut reps, j);
            let sg = aut.then(&aut.then(&ri, &aut.gens[g]), &rj_inv);
            h.add_generator(lift(&sg));
        }
    }
    if h.order() != target {
        return Err(Error::InvalidArgument(format!(
            "stabilizer lift reached order {} instead of {}",
            h.order(),
            target
        )));
    }
    Ok(h)
}

/// Largest `|GL(d, p)|` whose elements are enumerated as the Frattini
/// image of an automorphism group.
pub const MAX_TOP_ORDER: u128 = 1_000_000;

/// `|GL(d, p)|`
pub fn general_linear_order(p: u32, d: usize) -> u128 {
    let q = (p as u128).pow(d as u32);
    (0..d as u32).map(|i| q - (p as u128).pow(i)).product()
}

/// `Aut(G)`, computed by lifting through the lower exponent-p central
/// series from `GL(d, p)`.
pub fn automorphism_group(pc: &PcPresentation) -> Result<AutGroup> {
    let f = Field::new(pc.p);
    let d = pc.d();
    if general_linear_order(pc.p, d) > MAX_TOP_ORDER {
        return Err(Error::ResourceCap(format!(
            "GL({d}, {}) has order {} and is too large to enumerate",
            pc.p,
            general_linear_order(pc.p, d)
        )));
    }
    let q1 = pc.class_quotient(1);
    let col1 = Collector::new(&q1);
    let mut aut = AutGroup::generated_by(
        &q1,
        general_linear_generators(pc.p, d).iter().map(|m| matrix_automorphism(&q1, &col1, m)),
    );
    let c = pc.p_class();
    for k in 1..c {
        let qk = pc.class_quotient(k);
        let qk1 = pc.class_quotient(k + 1);
        let cd = crate::cover::p_cover(&qk)?;
        let col = Collector::new(&qk1);
        let nk = qk.n();
        let images: Vec<Element> = (0..nk).map(|i| col.gen(i)).collect();
        // Map from M onto the new layer of Q_{k+1}.
        let pi: Vec<Vec<u8>> = (0..cd.r)
            .map(|t| {
                let rel = match cd.cover.defs[nk + t] {
                    Some(Def::Power(j)) => Relation::Power(j),
                    Some(Def::Comm(j, i)) => Relation::Comm(j, i),
                    None => unreachable!(),
                };
                let v = cd.relation_value(&col, &images, rel);
                v[nk..].to_vec()
            })
            .collect();
        let s = qk1.n() - nk;
        // Kernel of pi: vectors v with v * pi = 0.
        let pit: Vec<Vec<u8>> = (0..s).map(|c| pi.iter().map(|row| row[c]).collect()).collect();
        let ker = f.right_nullspace(&pit, cd.r);
        let u = Subspace::span(f, cd.r, ker);
        aut = lift_stabilizer(&aut, &cd, &u, &qk1)?;
    }
    Ok(aut)
}

/// All automorphisms by exhaustive search over generator images. Only for
/// small groups (`|G| <= p^6`).
pub fn bruteforce_automorphisms(pc: &PcPresentation) -> Result<Vec<Automorphism>> {
    let n = pc.n();
    if n > 6 {
        return Err(Error::ResourceCap("brute force is limited to order p^6".into()));
    }
    let col = Collector::new(pc);
    let d = pc.d();
    let p = pc.p as usize;
    let size = p.pow(n as u32);
    let element = |mut k: usize| -> Element {
        let mut x = vec![0u8; n];
        for slot in x.iter_mut() {
            *slot = (k % p) as u8;
            k /= p;
        }
        x
    };
    let all: Vec<Element> = (0..size).map(element).collect();
    let f = Field::new(pc.p);
    let mut out = Vec::new();
    let mut choice = vec![0usize; d];
    'search: loop {
        let gens: Vec<Element> = choice.iter().map(|&k| all[k].clone()).collect();
        let top: Vec<Vec<u8>> = gens.iter().map(|x| x[..d].to_vec()).collect();
        if f.mat_inv(&top).is_some() {
            let a = Automorphism::from_generator_images(pc, &col, &gens);
            if a.is_automorphism(pc, &col) {
                out.push(a);
            }
        }
        for slot in choice.iter_mut() {
            *slot += 1;
            if *slot < size {
                continue 'search;
            }
            *slot = 0;
        }
        break;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{build_family, Family};

    fn c9() -> PcPresentation {
        let mut pc = PcPresentation::new(3, vec!["a".into(), "b".into()], vec![1, 2], vec![None, Some(Def::Power(0))]);
        pc.set_power(0, vec![(1, 1)]);
        pc
    }

    #[test]
    fn elementary_33_has_gl23() {
        let pc = PcPresentation::elementary(3, 2);
        let a = automorphism_group(&pc).unwrap();
        assert_eq!(a.order(), 48);
        assert_eq!(bruteforce_automorphisms(&pc).unwrap().len(), 48);
    }

    #[test]
    fn cyclic_9_has_6() {
        let pc = c9();
        assert_eq!(automorphism_group(&pc).unwrap().order(), 6);
        assert_eq!(bruteforce_automorphisms(&pc).unwrap().len(), 6);
    }

    #[test]
    fn large_frattini_quotients_are_refused() {
        assert_eq!(general_linear_order(3, 2), 48);
        assert_eq!(general_linear_order(3, 3), 11232);
        let e = automorphism_group(&PcPresentation::elementary(3, 4)).unwrap_err();
        assert!(matches!(e, Error::ResourceCap(_)));
    }

    #[test]
    fn lifting_agrees_with_brute_force_on_small_groups() {
        // (9,3), and the order-3^5 quotient of bifurcation(2).
        let mut g93 = PcPresentation::new(
            3,
            vec!["x1".into(), "y".into(), "x2".into()],
            vec![1, 1, 2],
            vec![None, None, Some(Def::Power(0))],
        );
        g93.set_power(0, vec![(2, 1)]);
        let b = build_family(Family::Bifurcation, 2).unwrap().class_quotient(3);
        for pc in [g93, b] {
            let lifted = automorphism_group(&pc).unwrap();
            let brute = bruteforce_automorphisms(&pc).unwrap();
            assert_eq!(lifted.order(), brute.len() as u128, "{pc}");
            for g in lifted.generators() {
                assert!(g.is_automorphism(&pc, lifted.collector()));
            }
        }
    }

    #[test]
    fn inverse_and_membership() {
        let pc = build_family(Family::Bifurcation, 2).unwrap().class_quotient(3);
        let a = automorphism_group(&pc).unwrap();
        let col = a.collector();
        for g in a.generators() {
            let inv = a.inverse(g);
            assert!(g.then(&pc, col, &inv).is_identity(col));
            assert!(a.contains(&inv));
        }
    }
}
