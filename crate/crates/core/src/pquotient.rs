//! The p-quotient algorithm: class-by-class computation of the largest
//! p-quotient of a finitely presented group.
//!
//! Class 1 is the exponent-sum matrix mod p. Each further class is the
//! quotient of the p-covering group of the previous one by the subspace of
//! the multiplicator where the relators evaluate, after the images of the
//! non-defining generators have been adjusted by multiplicator elements.

use crate::collector::{Collector, Element};
use crate::cover::p_cover;
use crate::error::{Error, Result};
use crate::fp::{FpPresentation, Word};
use crate::gfp::{Field, Subspace};
use crate::pc::PcPresentation;

/// Limits for [`p_quotient`].
#[derive(Clone, Copy, Debug)]
pub struct PQuotientOptions {
    /// Stop after this p-class even if the quotient keeps growing.
    pub class_bound: Option<u32>,
    /// Resource cap on the p-class.
    pub max_class: u32,
    /// Resource cap on `log_p` of the order.
    pub max_order_exp: usize,
}

impl Default for PQuotientOptions {
    fn default() -> Self {
        PQuotientOptions { class_bound: None, max_class: 24, max_order_exp: 20 }
    }
}

/// Result of the p-quotient algorithm.
#[derive(Clone, Debug)]
pub struct PQuotient {
    pub pc: PcPresentation,
    /// Image of each generator of the finite presentation.
    pub images: Vec<Element>,
    /// True when the last step added nothing, so `pc` is the largest
    /// p-quotient.
    pub terminated: bool,
}

fn eval_word(col: &Collector, fp: &FpPresentation, images: &[Element], w: &Word) -> Element {
    let mut a = col.identity();
    for (g, e) in w.factors() {
        let i = fp.generator_index(g).expect("validated presentation");
        col.mul_into(&mut a, &col.pow(&images[i], *e));
    }
    a
}

fn exponent_row(fp: &FpPresentation, w: &Word, f: Field) -> Vec<u8> {
    let mut row = vec![0u8; fp.generators.len()];
    for (g, e) in w.factors() {
        let i = fp.generator_index(g).expect("validated presentation");
        row[i] = f.add(row[i], f.from_i64(*e));
    }
    row
}

/// Compute the largest p-quotient of `fp`, up to the class bound.
pub fn p_quotient(fp: &FpPresentation, p: u32, opts: PQuotientOptions) -> Result<PQuotient> {
    fp.validate()?;
    let f = Field::new(p);
    let k = fp.generators.len();

    // Class 1. Pivot from the right so that earlier generators stay defining.
    let mut rows: Vec<Vec<u8>> = fp
        .relators
        .iter()
        .map(|r| {
            let mut row = exponent_row(fp, r, f);
            row.reverse();
            row
        })
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    let piv_rev = if rows.is_empty() { Vec::new() } else { f.rref(&mut rows) };
    let dependent: Vec<usize> = piv_rev.iter().map(|&c| k - 1 - c).collect();
    let defining: Vec<usize> = (0..k).filter(|i| !dependent.contains(i)).collect();
    let d = defining.len();
    if d > opts.max_order_exp {
        return Err(Error::ResourceCap(format!("rank {d} exceeds the order cap")));
    }
    let mut pc = PcPresentation::new(
        p,
        defining.iter().map(|&i| fp.generators[i].clone()).collect(),
        vec![1; d],
        vec![None; d],
    );
    let mut images: Vec<Element> = vec![vec![0u8; d]; k];
    for (pos, &i) in defining.iter().enumerate() {
        images[i][pos] = 1;
    }
    for (row, &c) in rows.iter().zip(&piv_rev) {
        let x = k - 1 - c;
        for (pos, &i) in defining.iter().enumerate() {
            images[x][pos] = f.neg(row[k - 1 - i]);
        }
    }
    if d == 0 {
        return Ok(PQuotient { pc, images, terminated: true });
    }
    let nondef: Vec<usize> = dependent.clone();

    let mut class = 1;
    loop {
        if opts.class_bound.is_some_and(|b| class >= b) {
            return Ok(PQuotient { pc, images, terminated: false });
        }
        if class >= opts.max_class {
            return Err(Error::ResourceCap(format!("p-class cap {} reached", opts.max_class)));
        }
        let cd = p_cover(&pc)?;
        let n = pc.n();
        let r = cd.r;
        let col = Collector::new(&cd.cover);
        let lifts: Vec<Element> = images
            .iter()
            .map(|x| {
                let mut y = x.clone();
                y.resize(n + r, 0);
                y
            })
            .collect();

        let nd = nondef.len();
        let mut rows: Vec<Vec<u8>> = Vec::new();
        for rel in &fp.relators {
            let val = eval_word(&col, fp, &lifts, rel);
            debug_assert!(val[..n].iter().all(|&x| x == 0), "relator fails in the previous quotient");
            let sums = exponent_row(fp, rel, f);
            let mut row: Vec<u8> = nondef.iter().map(|&i| sums[i]).collect();
            row.extend_from_slice(&val[n..]);
            if row.iter().any(|&x| x != 0) {
                rows.push(row);
            }
        }
        let pivots = if rows.is_empty() { Vec::new() } else { f.rref(&mut rows) };
        let mut adjust: Vec<Vec<u8>> = vec![vec![0u8; r]; nd];
        let mut ubasis = Vec::new();
        for (row, &c) in rows.iter().zip(&pivots) {
            if c < nd {
                adjust[c] = row[nd..].iter().map(|&x| f.neg(x)).collect();
            } else {
                ubasis.push(row[nd..].to_vec());
            }
        }
        let u = Subspace::span(f, r, ubasis);
        if u.dim() == r {
            return Ok(PQuotient { pc, images, terminated: true });
        }
        let q = cd.quotient(&u)?;
        if q.pc.n() > opts.max_order_exp {
            return Err(Error::ResourceCap(format!(
                "order 3^{} exceeds the cap 3^{}",
                q.pc.n(),
                opts.max_order_exp
            )));
        }
        let mut new_images = Vec::with_capacity(k);
        for (i, lift) in lifts.iter().enumerate() {
            let mut y = lift.clone();
            if let Some(pos) = nondef.iter().position(|&x| x == i) {
                for (t, &a) in adjust[pos].iter().enumerate() {
                    y[n + t] = f.add(y[n + t], a);
                }
            }
            new_images.push(q.map_cover_element(n, &y));
        }
        pc = q.pc;
        images = new_images;
        class += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::pc_abelian_type;
    use crate::consistency::is_consistent;
    use crate::fp::parse_fp;

    fn run(src: &str, bound: Option<u32>) -> PQuotient {
        let fp = parse_fp(src).unwrap();
        p_quotient(&fp, 3, PQuotientOptions { class_bound: bound, ..Default::default() }).unwrap()
    }

    #[test]
    fn abelian_groups() {
        let q = run("gens a,b; rel a^9, b^3, [a,b];", None);
        assert!(q.terminated);
        assert_eq!(q.pc.n(), 3);
        assert_eq!(pc_abelian_type(&q.pc).to_string(), "21");
        let q = run("gens a,b; rel a^3*b^-3, b^9, [a,b];", None);
        assert_eq!(pc_abelian_type(&q.pc).to_string(), "21");
    }

    #[test]
    fn heisenberg_and_extraspecial() {
        let q = run("gens a,b; rel a^3, b^3, [a,b,a], [a,b,b];", None);
        assert!(q.terminated);
        assert_eq!(q.pc.n(), 3);
        assert!(is_consistent(&q.pc));
        let q = run("gens a,b; rel a^9, b^3, [b,a]*a^-3;", None);
        assert_eq!(q.pc.n(), 3);
    }

    #[test]
    fn free_group_class_bounds() {
        // Free 2-generator group: class 2 adds [b,a], a^3 and b^3.
        let q = run("gens a,b;", Some(1));
        assert_eq!(q.pc.n(), 2);
        let q = run("gens a,b;", Some(2));
        assert_eq!(q.pc.n(), 5);
    }

    #[test]
    fn images_satisfy_relators() {
        let fp = parse_fp("gens a,b,c; rel c*a^-1*b^-1, a^9, b^9, [a,b]^3, [a,b,a], [a,b,b];").unwrap();
        let q = p_quotient(&fp, 3, PQuotientOptions::default()).unwrap();
        let col = Collector::new(&q.pc);
        for r in &fp.relators {
            assert!(Collector::is_identity(&eval_word(&col, &fp, &q.images, r)));
        }
        assert_eq!(q.pc.d(), 2);
    }
}

#[cfg(test)]
mod cross_route {
    use super::*;
    use crate::family::{build_family, Family};
    use crate::fp::parse_fp;
    use crate::subgroup::structure_summary;

    #[test]
    fn bifurcation_fp_reading_matches_pc_family() {
        let src = "gens x,y;\nabbrev;\nrel x^{3^2}=1, y^3=s3*s4^2, s2^3=s4*t4^2, [x^3,y]=s4*t4;\n";
        let fp = parse_fp(src).unwrap();
        let q = p_quotient(&fp, 3, PQuotientOptions { class_bound: Some(4), ..Default::default() }).unwrap();
        let pc = build_family(Family::Bifurcation, 2).unwrap();
        assert_eq!(q.pc.n(), 8);
        let a = structure_summary(&Collector::new(&q.pc));
        let b = structure_summary(&Collector::new(&pc));
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }
}
