//! Artin transfers to the maximal subgroups and the invariants built from
//! them: transfer kernel types, rank distribution and the abelian type
//! invariants of the first and second layer.
//!
//! Everything here assumes `G/G' = (p^e, p)` with `e >= 2` and `p = 3`.
//! We fix a basis `x, y` of `G/G'` with `x` of order `3^e` and `y` of
//! order 3. The three maximal subgroups with cyclic image `<x>`, `<xy>`,
//! `<xy^2>` take positions 1 to 3; the one with non-cyclic image
//! `<x^3, y>` is the distinguished fourth position. Automorphisms of the
//! form `x -> x y^k` permute positions 1 to 3 and fix the fourth.
//!
//! Transfer kernels lie in `E = <x^(3^(e-1)), y>`; they are labelled
//! `0` for all of `E`, `1` for `<y>`, `2` for `<x^(3^(e-1)) y>`, `3` for
//! `<x^(2*3^(e-1)) y>`, `4` for `<x^(3^(e-1))>` and `⊥` otherwise.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::{smith_normal_form, AbelianInvariants, AbelianType, Matrix};
use crate::autgroup::{automorphism_group, AutGroup, Automorphism};
use crate::collector::{Collector, Element};
use crate::cover::p_cover;
use crate::error::{Error, Result};
use crate::gfp::Field;
use crate::pc::PcPresentation;
use crate::subgroup::{closure_under, derived_subgroup, frattini_subgroup, Subgroup};

/// `G/G'` with an adapted basis `x` (order `3^e`) and `y` (order 3).
#[derive(Clone, Debug)]
pub struct AbelianizationBasis {
    pub e: u32,
    pub x: Element,
    pub y: Element,
    pub derived: Subgroup,
    inv: AbelianInvariants<i64>,
    /// Invariant coordinates of `x^a y^b` -> `(a, b)`.
    table: HashMap<Vec<i64>, (u64, u64)>,
}

fn add_mod(a: &[i64], b: &[i64], k: i64, logs: &[u32], p: i64) -> Vec<i64> {
    a.iter()
        .zip(b)
        .zip(logs)
        .map(|((x, y), &l)| (x + k * y).rem_euclid(p.pow(l)))
        .collect()
}

fn class_order_log(v: &[i64], logs: &[u32], p: i64) -> u32 {
    v.iter()
        .zip(logs)
        .map(|(&c, &l)| {
            let mut c = c.rem_euclid(p.pow(l));
            let mut k = l;
            while c != 0 && c % p == 0 {
                c /= p;
                k -= 1;
            }
            if c == 0 {
                0
            } else {
                k
            }
        })
        .max()
        .unwrap_or(0)
}

impl AbelianizationBasis {
    pub fn new(col: &Collector) -> Result<Self> {
        let p = col.p() as i64;
        if p != 3 {
            return Err(Error::Unsupported("transfer kernel types are implemented for p = 3".into()));
        }
        let whole = Subgroup::whole(col);
        let derived = derived_subgroup(col, &whole);
        let inv = whole.abelian_invariants(col, &derived);
        let t = inv.abelian_type();
        if t.logs().len() != 2 || t.logs()[1] != 1 || t.logs()[0] < 2 {
            return Err(Error::Unsupported(format!("G/G' of type {t} is not (3^e,3) with e >= 2")));
        }
        let e = t.logs()[0];
        let logs = inv.logs();
        let cls = |g: &[u8]| -> Vec<i64> { inv.coords(&g.iter().map(|&x| x as i64).collect::<Vec<_>>()) };
        let g1 = col.gen(0);
        let g2 = col.gen(1);
        let reps = [g1.clone(), g2.clone(), col.mul(&g1, &g2), col.mul(&g1, &col.pow(&g2, 2))];
        let x = reps.iter().find(|r| class_order_log(&cls(r), &logs, p) == e).cloned().unwrap();
        let z = reps.iter().find(|r| class_order_log(&cls(r), &logs, p) < e).cloned().unwrap();
        // z = x^(3m) y0 with y0 of order 3.
        let cx = cls(&x);
        let cz = cls(&z);
        let m = (0..p.pow(e - 1))
            .find(|&m| {
                let c = add_mod(&cz, &cx, -3 * m, &logs, p);
                class_order_log(&c, &logs, p) == 1
            })
            .ok_or_else(|| Error::InvalidArgument("no order-3 complement to x in G/G'".into()))?;
        let y = col.mul(&z, &col.pow(&x, -3 * m));
        let cy = cls(&y);
        let mut table = HashMap::new();
        let pe = p.pow(e);
        let mut ca = vec![0i64; logs.len()];
        for a in 0..pe {
            let mut c = ca.clone();
            for b in 0..p {
                table.insert(c.clone(), (a as u64, b as u64));
                c = add_mod(&c, &cy, 1, &logs, p);
            }
            ca = add_mod(&ca, &cx, 1, &logs, p);
        }
        Ok(AbelianizationBasis { e, x, y, derived, inv, table })
    }

    /// `(a, b)` with `g = x^a y^b` modulo `G'`.
    pub fn coords(&self, g: &[u8]) -> (u64, u64) {
        let c = self.inv.coords(&g.iter().map(|&x| x as i64).collect::<Vec<_>>());
        self.table[&c]
    }

    pub fn abelian_type(&self) -> AbelianType {
        self.inv.abelian_type()
    }
}

/// One transfer `G/G' -> H/H'`.
#[derive(Clone, Debug)]
pub struct TransferHom {
    /// Logs of the invariant factors of `H/H'` (coordinate order).
    pub target_logs: Vec<u32>,
    pub image_x: Vec<i64>,
    pub image_y: Vec<i64>,
    /// The kernel as a set of `(a, b)` with `x^a y^b` in it.
    pub kernel: Vec<(u64, u64)>,
}

/// A maximal subgroup in the punctured numbering.
#[derive(Clone, Debug)]
pub struct MaximalSubgroup {
    pub subgroup: Subgroup,
    /// An element outside `H` generating `G/H`.
    pub coset_gen: Element,
    /// Frattini image of the subgroup (a line in GF(3)^2).
    line: [u8; 2],
    pub abelianization: AbelianType,
}

impl MaximalSubgroup {
    /// Index of the coset of `g`, relative to `coset_gen`.
    pub fn coset_index(&self, g: &[u8]) -> u8 {
        let f = Field::new(3);
        let lam = |v: &[u8]| f.sub(f.mul(self.line[0], v[1]), f.mul(self.line[1], v[0]));
        f.mul(lam(g), f.inv(lam(&self.coset_gen)))
    }
}

/// The four maximal subgroups and, optionally, the second layer.
#[derive(Clone, Debug)]
pub struct MaximalLayers {
    pub basis: AbelianizationBasis,
    pub maximal: Vec<MaximalSubgroup>,
    /// For each maximal subgroup, the sorted abelian types of its own
    /// maximal subgroups.
    pub second: Option<Vec<Vec<AbelianType>>>,
}

/// Maximal subgroups of `H` (via `H/Phi(H)`) and their abelianizations.
pub fn maximal_subgroups_of(col: &Collector, h: &Subgroup) -> Vec<Subgroup> {
    let phi = frattini_subgroup(col, h);
    let mut basis: Vec<Element> = Vec::new();
    let mut span = phi.clone();
    for g in h.gens() {
        if !span.contains(col, g) {
            basis.push(g.clone());
            span = closure_under(col, &span, std::slice::from_ref(g), &[]);
        }
    }
    let d = basis.len();
    let f = Field::new(col.p() as u32);
    let mut out = Vec::new();
    let total = (col.p() as usize).pow(d as u32);
    for code in 1..total {
        let mut v = vec![0u8; d];
        let mut k = code;
        for slot in v.iter_mut() {
            *slot = (k % col.p() as usize) as u8;
            k /= col.p() as usize;
        }
        if v.iter().find(|&&x| x != 0) != Some(&1) {
            continue;
        }
        let kernel = f.right_nullspace(&[v], d);
        let gens: Vec<Element> = kernel
            .iter()
            .map(|w| {
                let mut x = col.identity();
                for (b, &c) in basis.iter().zip(w) {
                    if c != 0 {
                        col.mul_into(&mut x, &col.pow(b, c as i64));
                    }
                }
                x
            })
            .collect();
        out.push(closure_under(col, &phi, &gens, &[]));
    }
    out
}

/// Compute the punctured quartet of maximal subgroups; with `second` also
/// the abelian types of all their maximal subgroups.
pub fn maximal_layers(col: &Collector, second: bool) -> Result<MaximalLayers> {
    if col.n() < 2 || Collector::is_identity(&col.gen(1)) {
        return Err(Error::Unsupported("rank of G/Phi(G) must be 2".into()));
    }
    let basis = AbelianizationBasis::new(col)?;
    let (x, y) = (&basis.x, &basis.y);
    let frat = |g: &Element| [g[0], g[1]];
    let xy = col.mul(x, y);
    let xy2 = col.mul(x, &col.pow(y, 2));
    let x3 = col.pow(x, 3);
    let specs: [(Vec<Element>, Element, [u8; 2]); 4] = [
        (vec![x.clone()], y.clone(), frat(x)),
        (vec![xy.clone()], y.clone(), frat(&xy)),
        (vec![xy2.clone()], y.clone(), frat(&xy2)),
        (vec![x3, y.clone()], x.clone(), frat(y)),
    ];
    let mut maximal = Vec::with_capacity(4);
    for (gens, t, line) in specs {
        let h = closure_under(col, &basis.derived, &gens, &[]);
        debug_assert_eq!(h.log_order() + 1, col.n());
        let abelianization = h.abelian_quotient_type(col, &Subgroup::trivial());
        maximal.push(MaximalSubgroup { subgroup: h, coset_gen: t, line, abelianization });
    }
    let second = if second {
        Some(
            maximal
                .par_iter()
                .map(|m| {
                    let mut types: Vec<AbelianType> = maximal_subgroups_of(col, &m.subgroup)
                        .iter()
                        .map(|s| s.abelian_quotient_type(col, &Subgroup::trivial()))
                        .collect();
                    types.sort();
                    types
                })
                .collect(),
        )
    } else {
        None
    };
    Ok(MaximalLayers { basis, maximal, second })
}

/// Image of `g` under the transfer into `H/H'`, using the right transversal
/// `reps` with `reps[i]` in the coset `H t^i`.
pub fn transfer_image(
    col: &Collector,
    m: &MaximalSubgroup,
    target: &AbelianInvariants<i64>,
    reps: &[Element; 3],
    g: &[u8],
) -> Vec<i64> {
    let logs = target.logs();
    let mut acc = vec![0i64; logs.len()];
    let shift = m.coset_index(g);
    for (i, r) in reps.iter().enumerate() {
        let j = (i + shift as usize) % 3;
        let h = col.mul(&col.mul(r, g), &col.inv(&reps[j]));
        let c = m.subgroup.coordinates(col, &h).expect("transfer factor lies in H");
        let v = target.coords(&c.iter().map(|&x| x as i64).collect::<Vec<_>>());
        acc = add_mod(&acc, &v, 1, &logs, col.p() as i64);
    }
    acc
}

/// The Artin transfer to a maximal subgroup with a given transversal (the
/// default is `1, t, t^2`).
pub fn artin_transfer(
    col: &Collector,
    basis: &AbelianizationBasis,
    m: &MaximalSubgroup,
    reps: Option<&[Element; 3]>,
) -> TransferHom {
    let target = m.subgroup.abelian_invariants(col, &Subgroup::trivial());
    let default;
    let reps = match reps {
        Some(r) => r,
        None => {
            default = [col.identity(), m.coset_gen.clone(), col.pow(&m.coset_gen, 2)];
            &default
        }
    };
    let image_x = transfer_image(col, m, &target, reps, &basis.x);
    let image_y = transfer_image(col, m, &target, reps, &basis.y);
    let logs = target.logs();
    let kernel = transfer_kernel(basis.e, &image_x, &image_y, &logs);
    TransferHom { target_logs: logs, image_x, image_y, kernel }
}

/// Kernel of `(a, b) -> a V(x) + b V(y)` on `Z/3^e x Z/3`, from the integer
/// left kernel of `[V(x); V(y); diag(3^l)]`.
fn transfer_kernel(e: u32, vx: &[i64], vy: &[i64], logs: &[u32]) -> Vec<(u64, u64)> {
    let k = logs.len();
    let mut rows = vec![vx.to_vec(), vy.to_vec()];
    for (j, &l) in logs.iter().enumerate() {
        let mut r = vec![0i64; k];
        r[j] = 3i64.pow(l);
        rows.push(r);
    }
    let pe = 3u64.pow(e);
    let gens: Vec<(u64, u64)> = if k == 0 {
        vec![(1, 0), (0, 1)]
    } else {
        let snf = smith_normal_form(&Matrix::<i64>::from_i64_rows(&rows, k));
        snf.left_kernel()
            .iter()
            .map(|v| (v[0].rem_euclid(pe as i64) as u64, v[1].rem_euclid(3) as u64))
            .collect()
    };
    let mut seen: HashSet<(u64, u64)> = HashSet::new();
    seen.insert((0, 0));
    let mut queue = vec![(0u64, 0u64)];
    while let Some((a, b)) = queue.pop() {
        for &(ga, gb) in &gens {
            let n = ((a + ga) % pe, (b + gb) % 3);
            if seen.insert(n) {
                queue.push(n);
            }
        }
    }
    let mut out: Vec<(u64, u64)> = seen.into_iter().collect();
    out.sort();
    out
}

pub const LABEL_BOTTOM: u8 = 5;

/// Label of a transfer kernel (a subgroup of `Z/3^e x Z/3`).
pub fn kernel_label(e: u32, kernel: &[(u64, u64)]) -> u8 {
    let q = 3u64.pow(e - 1);
    let cyclic = |g: (u64, u64)| -> Vec<(u64, u64)> {
        let mut v: Vec<(u64, u64)> = (0..3).map(|k| ((g.0 * k) % (3 * q), (g.1 * k) % 3)).collect();
        v.sort();
        v
    };
    let mut e_all: Vec<(u64, u64)> = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            e_all.push((a * q, b));
        }
    }
    e_all.sort();
    let table = [(1, cyclic((0, 1))), (2, cyclic((q, 1))), (3, cyclic((2 * q, 1))), (4, cyclic((q, 0)))];
    if kernel == e_all.as_slice() {
        return 0;
    }
    for (l, s) in table {
        if kernel == s.as_slice() {
            return l;
        }
    }
    LABEL_BOTTOM
}

/// A punctured transfer kernel type: three labels and the distinguished
/// fourth one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Kappa(pub [u8; 4]);

const PERMS3: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

impl Kappa {
    /// All 36 images under permuting positions 1-3 and relabelling 1-3.
    pub fn relabelings(&self) -> Vec<Kappa> {
        let mut out = Vec::with_capacity(36);
        for pos in PERMS3 {
            for lab in PERMS3 {
                let relabel = |l: u8| if (1..=3).contains(&l) { lab[(l - 1) as usize] as u8 + 1 } else { l };
                out.push(Kappa([
                    relabel(self.0[pos[0]]),
                    relabel(self.0[pos[1]]),
                    relabel(self.0[pos[2]]),
                    relabel(self.0[3]),
                ]));
            }
        }
        out
    }

    pub fn canonical(&self) -> Kappa {
        self.relabelings().into_iter().min().unwrap()
    }

    pub fn name(&self) -> Option<&'static str> {
        let c = self.canonical();
        NAMED_TYPES.iter().find(|(_, k)| k.parse::<Kappa>().map(|k| k.canonical()) == Ok(c)).map(|(n, _)| *n)
    }
}

/// Transfer kernel types known by name.
pub const NAMED_TYPES: &[(&str, &str)] = &[
    ("a.1", "(000;0)"),
    ("A.1", "(111;1)"),
    ("A.20", "(444;4)"),
    ("B.18", "(144;4)"),
    ("b.31", "(044;4)"),
    ("C.4", "(311;3)"),
    ("D.5", "(211;3)"),
    ("D.6", "(123;1)"),
    ("D.10", "(411;3)"),
    ("D.11", "(124;1)"),
];

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |l: u8| if l == LABEL_BOTTOM { "⊥".to_string() } else { l.to_string() };
        write!(f, "({}{}{};{})", s(self.0[0]), s(self.0[1]), s(self.0[2]), s(self.0[3]))
    }
}

impl FromStr for Kappa {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad transfer kernel type `{s}`"));
        let inner = s.trim().strip_prefix('(').and_then(|x| x.strip_suffix(')')).ok_or_else(bad)?;
        let labels: Vec<u8> = inner
            .chars()
            .filter(|&c| c != ';')
            .map(|c| match c {
                '0'..='4' => Ok(c as u8 - b'0'),
                '⊥' | '_' => Ok(LABEL_BOTTOM),
                _ => Err(bad()),
            })
            .collect::<Result<_>>()?;
        if labels.len() != 4 || inner.chars().filter(|&c| c == ';').count() != 1 || !inner.ends_with(|c: char| c != ';') {
            return Err(bad());
        }
        Ok(Kappa([labels[0], labels[1], labels[2], labels[3]]))
    }
}

impl Serialize for Kappa {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Transfer kernel type of a group with `G/G' = (3^e, 3)`.
pub fn kappa(pc: &PcPresentation) -> Result<Kappa> {
    let col = Collector::new(pc);
    let layers = maximal_layers(&col, false)?;
    Ok(kappa_from_layers(&col, &layers))
}

pub fn kappa_from_layers(col: &Collector, layers: &MaximalLayers) -> Kappa {
    let labels: Vec<u8> = layers
        .maximal
        .par_iter()
        .map(|m| kernel_label(layers.basis.e, &artin_transfer(col, &layers.basis, m, None).kernel))
        .collect();
    Kappa([labels[0], labels[1], labels[2], labels[3]])
}

/// The invariants attached to a group through its maximal subgroups.
#[derive(Clone, Debug, Serialize)]
pub struct ArtinPattern {
    /// `G/G'`.
    pub tau0: AbelianType,
    pub e: u32,
    pub kappa: Kappa,
    pub kappa_canonical: Kappa,
    pub kappa_name: Option<&'static str>,
    pub rho: [usize; 4],
    pub alpha1: [AbelianType; 4],
    /// Sorted second-layer types per maximal subgroup.
    pub alpha2: Option<Vec<Vec<AbelianType>>>,
}

pub fn artin_pattern(pc: &PcPresentation, depth: u32) -> Result<ArtinPattern> {
    let col = Collector::new(pc);
    artin_pattern_with(&col, depth)
}

pub fn artin_pattern_with(col: &Collector, depth: u32) -> Result<ArtinPattern> {
    let layers = maximal_layers(col, depth >= 2)?;
    let kappa = kappa_from_layers(col, &layers);
    let alpha1: [AbelianType; 4] = std::array::from_fn(|i| layers.maximal[i].abelianization.clone());
    let rho = std::array::from_fn(|i| alpha1[i].rank());
    Ok(ArtinPattern {
        tau0: layers.basis.abelian_type(),
        e: layers.basis.e,
        kappa,
        kappa_canonical: kappa.canonical(),
        kappa_name: kappa.name(),
        rho,
        alpha1,
        alpha2: layers.second,
    })
}

/// Outcome of the σ and Schur σ test.
#[derive(Clone, Debug)]
pub struct SigmaResult {
    pub sigma: bool,
    /// An automorphism inducing inversion on `G/G'`.
    pub witness: Option<Automorphism>,
    pub schur: bool,
    pub relation_rank: usize,
}

/// Whether some automorphism acts as inversion on `G/G'`, and whether the
/// group is moreover a Schur σ-group (two generators, two relations).
pub fn sigma_schur_test(pc: &PcPresentation, aut: Option<&AutGroup>) -> Result<SigmaResult> {
    let owned;
    let aut = match aut {
        Some(a) => a,
        None => {
            owned = automorphism_group(pc)?;
            &owned
        }
    };
    let col = aut.collector();
    let whole = Subgroup::whole(col);
    let derived = derived_subgroup(col, &whole);
    let inv = whole.abelian_invariants(col, &derived);
    let logs = inv.logs();
    let p = pc.p as i64;
    let cls = |g: &[u8]| inv.coords(&g.iter().map(|&x| x as i64).collect::<Vec<_>>());
    // Lifts of the invariant basis of G/G'.
    let k = logs.len();
    let basis: Vec<Element> = (0..k)
        .map(|j| {
            let mut c = vec![0i64; k];
            c[j] = 1;
            let v = inv.lift(&c);
            let w: Vec<(usize, i64)> = v.iter().enumerate().map(|(g, &e)| (g, e)).collect();
            col.eval_indexed(&w)
        })
        .collect();
    // An action is the list of images of the basis, in invariant coordinates.
    type Action = Vec<Vec<i64>>;
    let act = |a: &Automorphism| -> Action { basis.iter().map(|b| cls(&a.apply(col, b))).collect() };
    let compose = |a: &Action, b: &Action| -> Action {
        // first a, then b
        a.iter()
            .map(|img| {
                let mut acc = vec![0i64; k];
                for (j, &c) in img.iter().enumerate() {
                    acc = add_mod(&acc, &b[j], c, &logs, p);
                }
                acc
            })
            .collect()
    };
    let identity: Action = (0..k).map(|j| (0..k).map(|i| (i == j) as i64).collect()).collect();
    let inversion: Action =
        (0..k).map(|j| (0..k).map(|i| if i == j { p.pow(logs[j]) - 1 } else { 0 }).collect()).collect();
    let gens: Vec<Action> = aut.generators().iter().map(act).collect();
    let mut seen: HashMap<Action, Option<(Action, usize)>> = HashMap::new();
    seen.insert(identity.clone(), None);
    let mut queue = std::collections::VecDeque::from([identity.clone()]);
    let mut found = seen.contains_key(&inversion);
    while let Some(a) = queue.pop_front() {
        if found {
            break;
        }
        for (gi, g) in gens.iter().enumerate() {
            let b = compose(&a, g);
            if !seen.contains_key(&b) {
                seen.insert(b.clone(), Some((a.clone(), gi)));
                if b == inversion {
                    found = true;
                }
                queue.push_back(b);
            }
        }
    }
    let witness = if found {
        // Walk back the BFS tree and compose the generators.
        let mut word = Vec::new();
        let mut cur = inversion.clone();
        while let Some(Some((prev, gi))) = seen.get(&cur).cloned() {
            word.push(gi);
            cur = prev;
        }
        word.reverse();
        let mut w = Automorphism::identity(col);
        for gi in word {
            w = w.then(pc, col, &aut.generators()[gi]);
        }
        if !w.is_automorphism(pc, col) || act(&w) != inversion {
            return Err(Error::InvalidArgument("σ witness failed verification".into()));
        }
        Some(w)
    } else {
        None
    };
    let r = p_cover(pc)?.r;
    let sigma = witness.is_some();
    Ok(SigmaResult { sigma, witness, schur: sigma && pc.d() == 2 && r == 2, relation_rank: r })
}

/// Orders of an abelian type as integers, e.g. `21` -> `[9, 3]`.
pub fn type_orders(t: &AbelianType) -> Vec<u64> {
    t.logs().iter().map(|&l| 3u64.pow(l)).collect()
}
