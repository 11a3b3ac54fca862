//! The standard consistency test for pc-presentations.
//!
//! A presentation on `n` generators defines a group of order `p^n` exactly
//! when the following overlaps collect to the same normal form:
//!
//! * `(g_k g_j) g_i = g_k (g_j g_i)` for `k > j > i`
//! * `(g_j^{p-1})(g_j g_i) = (g_j^p) g_i` for `j > i`
//! * `(g_j g_i) g_i^{p-1} = g_j (g_i^p)` for `j > i`
//! * `(g_i^p) g_i = g_i (g_i^p)`

use std::fmt;

use serde::Serialize;

use crate::collector::{Collector, Element};
use crate::pc::PcPresentation;

/// One failed overlap, with the two normal forms that should agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: OverlapKind,
    /// 0-based generator indices of the overlap, largest first.
    pub triple: Vec<usize>,
    pub lhs: Element,
    pub rhs: Element,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OverlapKind {
    Associativity,
    PowerLeft,
    PowerRight,
    PowerPower,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.triple.iter().map(|g| format!("g{}", g + 1)).collect();
        write!(f, "{:?} overlap ({}): {:?} != {:?}", self.kind, gens.join(","), self.lhs, self.rhs)
    }
}

/// Every overlap test that fails; empty iff the presentation is consistent.
pub fn check_consistency(pc: &PcPresentation) -> Vec<Violation> {
    let col = Collector::new(pc);
    check_with(&col)
}

pub fn is_consistent(pc: &PcPresentation) -> bool {
    check_consistency(pc).is_empty()
}

pub fn check_with(col: &Collector) -> Vec<Violation> {
    let mut out = Vec::new();
    for_each_overlap(col, col.n(), |kind, triple, lhs, rhs| {
        if lhs != rhs {
            out.push(Violation { kind, triple, lhs, rhs });
        }
    });
    out
}

/// Evaluate both sides of every overlap among the first `n` generators.
pub fn for_each_overlap(col: &Collector, n: usize, mut report: impl FnMut(OverlapKind, Vec<usize>, Element, Element)) {
    let p = col.p() as usize;

    for k in 0..n {
        for j in 0..k {
            for i in 0..j {
                let mut lhs = col.gen(k);
                col.mul_seq(&mut lhs, &[j, i]);
                let mut ji = col.gen(j);
                col.mul_gen(&mut ji, i);
                let rhs = col.mul(&col.gen(k), &ji);
                report(OverlapKind::Associativity, vec![k, j, i], lhs, rhs);
            }
        }
    }
    for j in 0..n {
        for i in 0..j {
            // g_j^{p-1} (g_j g_i)  vs  (g_j^p) g_i
            let mut gjp1 = col.identity();
            gjp1[j] = (p - 1) as u8;
            let mut ji = col.gen(j);
            col.mul_gen(&mut ji, i);
            let lhs = col.mul(&gjp1, &ji);
            let mut rhs = col.mul(&gjp1, &col.gen(j));
            col.mul_gen(&mut rhs, i);
            report(OverlapKind::PowerLeft, vec![j, i], lhs, rhs);

            // (g_j g_i) g_i^{p-1}  vs  g_j (g_i^p)
            let mut gip1 = col.identity();
            gip1[i] = (p - 1) as u8;
            let lhs = col.mul(&ji, &gip1);
            let mut gip = gip1.clone();
            col.mul_gen(&mut gip, i);
            let rhs = col.mul(&col.gen(j), &gip);
            report(OverlapKind::PowerRight, vec![j, i], lhs, rhs);
        }
    }
    for i in 0..n {
        let mut gip = col.identity();
        gip[i] = (p - 1) as u8;
        col.mul_gen(&mut gip, i);
        let mut lhs = gip.clone();
        col.mul_gen(&mut lhs, i);
        let rhs = col.mul(&col.gen(i), &gip);
        report(OverlapKind::PowerPower, vec![i], lhs, rhs);
    }
}
