//! Collection from the left and element arithmetic for pc-presentations.
//!
//! An [`Element`] is the exponent vector `(a_1, ..., a_n)` of the normal form
//! `g_1^{a_1} ... g_n^{a_n}`, each `a_i` in `[0, p)`.
//!
//! Multiplying a normal form `P g_i^a R S C` by `g_i` (where `R` commutes
//! with `g_i`, `S` is the rest of the non-central part and `C` is central)
//! gives `P g_i^{a+1} R C` followed by `S^{g_i}`, and `g_j^{g_i}` is the
//! normal form `g_j [g_j, g_i]` read straight from the table. Pending
//! generators live on an explicit stack, so there is no recursion.

use crate::error::{Error, Result};
use crate::fp::Word;
use crate::pc::{PcPresentation, PcWord};

/// Exponent vector of a normal form.
pub type Element = Vec<u8>;

/// Precomputed collection tables for one presentation.
#[derive(Clone, Debug)]
pub struct Collector {
    p: u8,
    n: usize,
    /// `g_i^p` as a sequence of generators.
    power: Vec<Vec<u32>>,
    /// `g_j^{g_i}` for `j > i`, indexed `j * n + i`.
    conj: Vec<Vec<u32>>,
    /// `[g_j, g_i] == 1`, indexed `j * n + i`.
    commutes: Vec<bool>,
    /// Every generator from here on is central.
    central_start: usize,
    gen_inverse: Vec<Element>,
}

fn expand(w: &PcWord) -> Vec<u32> {
    let mut seq = Vec::new();
    for &(g, e) in w {
        for _ in 0..e {
            seq.push(g as u32);
        }
    }
    seq
}

impl Collector {
    pub fn new(pc: &PcPresentation) -> Self {
        let n = pc.n();
        let p = pc.p as u8;
        let power: Vec<Vec<u32>> = (0..n).map(|i| expand(pc.power(i))).collect();
        let mut conj = vec![Vec::new(); n * n];
        let mut commutes = vec![true; n * n];
        for j in 0..n {
            for i in 0..j {
                let c = pc.comm(j, i);
                let mut seq = vec![j as u32];
                seq.extend(expand(c));
                conj[j * n + i] = seq;
                commutes[j * n + i] = c.is_empty();
            }
        }
        let mut central_start = n;
        while central_start > 0 {
            let g = central_start - 1;
            let central = (0..n).all(|h| h == g || if h < g { commutes[g * n + h] } else { commutes[h * n + g] });
            if !central {
                break;
            }
            central_start -= 1;
        }
        let mut col = Collector { p, n, power, conj, commutes, central_start, gen_inverse: Vec::new() };
        col.gen_inverse = (0..n).map(|i| col.inv(&col.gen(i))).collect();
        col
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> Element {
        vec![0; self.n]
    }

    pub fn gen(&self, i: usize) -> Element {
        let mut e = self.identity();
        e[i] = 1;
        e
    }

    pub fn is_identity(a: &[u8]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// Collect `a * s_k * ... * s_1` where the stack holds `s_1..s_k`
    /// (top of stack multiplied first).
    fn collect(&self, a: &mut [u8], stack: &mut Vec<u32>) {
        let n = self.n;
        let p = self.p;
        let mut saved: Vec<(usize, u8)> = Vec::new();
        while let Some(i) = stack.pop() {
            let i = i as usize;
            let overflow = a[i] + 1 == p;
            let mut lift_from = self.central_start.max(i + 1);
            if overflow {
                lift_from = i + 1;
            } else {
                for j in i + 1..self.central_start {
                    if a[j] != 0 && !self.commutes[j * n + i] {
                        lift_from = j;
                        break;
                    }
                }
            }
            saved.clear();
            for j in lift_from..self.central_start {
                if a[j] != 0 {
                    saved.push((j, a[j]));
                    a[j] = 0;
                }
            }
            for &(j, e) in saved.iter().rev() {
                let seq = &self.conj[j * n + i];
                for _ in 0..e {
                    stack.extend(seq.iter().rev());
                }
            }
            if overflow {
                a[i] = 0;
                stack.extend(self.power[i].iter().rev());
            } else {
                a[i] += 1;
            }
        }
    }

    fn push_element(stack: &mut Vec<u32>, b: &[u8]) {
        for i in (0..b.len()).rev() {
            for _ in 0..b[i] {
                stack.push(i as u32);
            }
        }
    }

    /// `a * b`
    pub fn mul(&self, a: &[u8], b: &[u8]) -> Element {
        let mut r = a.to_vec();
        self.mul_into(&mut r, b);
        r
    }

    /// `a <- a * b`
    pub fn mul_into(&self, a: &mut [u8], b: &[u8]) {
        let mut stack = Vec::with_capacity(4 * self.n);
        Self::push_element(&mut stack, b);
        self.collect(a, &mut stack);
    }

    /// `a <- a * g_i`
    pub fn mul_gen(&self, a: &mut [u8], i: usize) {
        let mut stack = vec![i as u32];
        self.collect(a, &mut stack);
    }

    /// Multiply by a sequence of generators, collecting as we go.
    pub fn mul_seq(&self, a: &mut [u8], seq: &[usize]) {
        let mut stack: Vec<u32> = seq.iter().rev().map(|&g| g as u32).collect();
        self.collect(a, &mut stack);
    }

    pub fn inv(&self, a: &[u8]) -> Element {
        let mut x = a.to_vec();
        let mut c = self.identity();
        let mut stack = Vec::new();
        for i in 0..self.n {
            if x[i] != 0 {
                let e = self.p - x[i];
                for _ in 0..e {
                    stack.push(i as u32);
                }
                self.collect(&mut x, &mut stack);
                for _ in 0..e {
                    stack.push(i as u32);
                }
                self.collect(&mut c, &mut stack);
            }
        }
        debug_assert!(Self::is_identity(&x));
        c
    }

    /// `a^k` for any integer `k`.
    pub fn pow(&self, a: &[u8], k: i64) -> Element {
        let base = if k < 0 { self.inv(a) } else { a.to_vec() };
        let mut k = k.unsigned_abs();
        let mut result = self.identity();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                self.mul_into(&mut result, &sq);
            }
            k >>= 1;
            if k > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        result
    }

    /// `[a, b] = a^-1 b^-1 a b = (ba)^-1 (ab)`
    pub fn comm(&self, a: &[u8], b: &[u8]) -> Element {
        let ba = self.mul(b, a);
        let ab = self.mul(a, b);
        self.mul(&self.inv(&ba), &ab)
    }

    /// `b^-1 a b`
    pub fn conj(&self, a: &[u8], b: &[u8]) -> Element {
        let t = self.mul(&self.inv(b), a);
        self.mul(&t, b)
    }

    /// Order of `a`, as a power of `p` (the exponent).
    pub fn order_log(&self, a: &[u8]) -> u32 {
        let mut x = a.to_vec();
        let mut k = 0;
        while !Self::is_identity(&x) {
            x = self.pow(&x, self.p as i64);
            k += 1;
        }
        k
    }

    /// Normal form of a word given as `(generator index, exponent)` pairs.
    pub fn eval_indexed(&self, w: &[(usize, i64)]) -> Element {
        let mut a = self.identity();
        for &(g, e) in w {
            if e >= 0 {
                let mut stack = vec![g as u32; e as usize];
                self.collect(&mut a, &mut stack);
            } else {
                for _ in 0..e.unsigned_abs() {
                    self.mul_into(&mut a, &self.gen_inverse[g]);
                }
            }
        }
        a
    }

    /// Normal form of a sparse pc word.
    pub fn eval_pc_word(&self, w: &PcWord) -> Element {
        let mut a = self.identity();
        for &(g, e) in w {
            a[g] = e;
        }
        // A normal-form word is its own exponent vector; anything with
        // repeated or unsorted indices needs collecting.
        if w.windows(2).all(|x| x[0].0 < x[1].0) && w.iter().all(|&(_, e)| e < self.p) {
            a
        } else {
            self.eval_indexed(&w.iter().map(|&(g, e)| (g, e as i64)).collect::<Vec<_>>())
        }
    }

    /// Sparse word of an element.
    pub fn to_pc_word(a: &[u8]) -> PcWord {
        a.iter().enumerate().filter(|(_, &e)| e != 0).map(|(g, &e)| (g, e)).collect()
    }
}

/// Normal form of a named word in the presentation.
pub fn normalize(pc: &PcPresentation, col: &Collector, w: &Word) -> Result<Element> {
    let mut idx = Vec::with_capacity(w.factors().len());
    for (g, e) in w.factors() {
        let i = pc.index_of(g).ok_or_else(|| Error::UndeclaredGenerator(g.clone()))?;
        idx.push((i, *e));
    }
    Ok(col.eval_indexed(&idx))
}

/// The four basic operations as one entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Mul,
    Inv,
    Pow(i64),
    Comm,
}

pub fn element_arith(col: &Collector, a: &[u8], b: &[u8], op: ArithOp) -> Result<Element> {
    if a.len() != col.n() || (matches!(op, ArithOp::Mul | ArithOp::Comm) && b.len() != col.n()) {
        return Err(Error::InvalidArgument("element length does not match the presentation".into()));
    }
    Ok(match op {
        ArithOp::Mul => col.mul(a, b),
        ArithOp::Inv => col.inv(a),
        ArithOp::Pow(k) => col.pow(a, k),
        ArithOp::Comm => col.comm(a, b),
    })
}
