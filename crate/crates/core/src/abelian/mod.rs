//! Integer linear algebra and abelian invariants.

pub mod snf;
pub mod types;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::pc::PcPresentation;

pub use snf::{smith_normal_form, Integer, Matrix, Snf};
pub use types::{format_quartet, match_pattern, AbelianType, MultisetPattern, QuartetPattern, SymLog, TypePattern};

/// Logarithm of `d` to base `p`, if `d` is a power of `p`.
fn log_p<T: Integer>(d: &T, p: u32) -> Option<u32> {
    let p = T::from_u32(p)?;
    let mut x = d.clone();
    let mut k = 0;
    while !x.is_one() {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() || q.is_zero() {
            return None;
        }
        x = q;
        k += 1;
    }
    Some(k)
}

/// The abelian p-group presented by the rows of `m` as relations.
pub fn abelian_type<T: Integer>(m: &Matrix<T>, p: u32) -> Result<AbelianType> {
    Ok(AbelianInvariants::new(m, p)?.abelian_type())
}

/// Invariant-factor decomposition of `Z^n / rowspace(M)`, with the map
/// from generator coordinates to invariant coordinates.
#[derive(Clone, Debug)]
pub struct AbelianInvariants<T: Integer> {
    snf: Snf<T>,
    /// `(column of V, log_p of the invariant factor)` for factors `> 1`,
    /// in increasing factor order.
    factors: Vec<(usize, u32)>,
    p: u32,
}

impl<T: Integer> AbelianInvariants<T> {
    pub fn new(m: &Matrix<T>, p: u32) -> Result<Self> {
        let snf = smith_normal_form(m);
        let rank = snf.rank();
        if rank < m.cols() {
            return Err(Error::InvalidArgument("abelian quotient is infinite".into()));
        }
        let mut factors = Vec::new();
        for (i, d) in snf.diagonal.iter().enumerate() {
            let l = log_p(d, p)
                .ok_or_else(|| Error::InvalidArgument(format!("invariant factor {d} is not a power of {p}")))?;
            if l > 0 {
                factors.push((i, l));
            }
        }
        Ok(AbelianInvariants { snf, factors, p })
    }

    pub fn abelian_type(&self) -> AbelianType {
        AbelianType::new(self.factors.iter().map(|&(_, l)| l).collect())
    }

    /// Logarithmic orders of the invariant basis vectors, in the same order
    /// as [`Self::coords`].
    pub fn logs(&self) -> Vec<u32> {
        self.factors.iter().map(|&(_, l)| l).collect()
    }

    pub fn snf(&self) -> &Snf<T> {
        &self.snf
    }

    /// Coordinates of the class of `v` (generator coordinates) in the
    /// invariant basis, reduced modulo the factor orders.
    pub fn coords(&self, v: &[i64]) -> Vec<i64> {
        let vt: Vec<T> = v.iter().map(|&x| T::from_i64(x).unwrap()).collect();
        let w = self.snf.v.vec_mul(&vt);
        self.factors
            .iter()
            .map(|&(c, l)| {
                let m = T::from_u64((self.p as u64).pow(l)).unwrap();
                w[c].mod_floor(&m).to_i64().unwrap()
            })
            .collect()
    }

    /// A generator-coordinate vector whose class has the given invariant
    /// coordinates.
    pub fn lift(&self, coords: &[i64]) -> Vec<i64> {
        // class of v is v V; take w = e_c * coords and v = w V^{-1}.
        // V^{-1} rows are obtained by solving x V = w.
        let n = self.snf.cols;
        let mut w = vec![T::zero(); n];
        for (&(c, _), &x) in self.factors.iter().zip(coords) {
            w[c] = T::from_i64(x).unwrap();
        }
        let vinv = solve_unimodular(&self.snf.v, &w);
        vinv.iter().map(|x| x.to_i64().unwrap()).collect()
    }
}

/// Solve `x * V = w` for unimodular `V`.
fn solve_unimodular<T: Integer>(v: &Matrix<T>, w: &[T]) -> Vec<T> {
    let snf = smith_normal_form(v);
    snf.solve_left(w).expect("unimodular system is solvable")
}

/// Relation matrix of the abelianization of a pc-presented group: one row
/// `p e_i - v(g_i^p)` per power relation and `-v([g_j,g_i])` per commutator.
pub fn pc_relation_matrix(pc: &PcPresentation) -> Matrix<BigInt> {
    let n = pc.n();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for i in 0..n {
        let mut r = vec![0i64; n];
        r[i] = pc.p as i64;
        for &(g, e) in pc.power(i) {
            r[g] -= e as i64;
        }
        rows.push(r);
    }
    for (_, w) in pc.comm_entries() {
        let mut r = vec![0i64; n];
        for &(g, e) in w {
            r[g] -= e as i64;
        }
        rows.push(r);
    }
    Matrix::from_i64_rows(&rows, n)
}

/// Abelianization type of a pc-presented group.
pub fn pc_abelian_type(pc: &PcPresentation) -> AbelianType {
    AbelianInvariants::new(&pc_relation_matrix(pc), pc.p)
        .expect("finite p-group has a finite p-group abelianization")
        .abelian_type()
}

/// Order of a cyclic factor as a `BigInt`.
pub fn factor_order(p: u32, log: u32) -> BigInt {
    let mut r = BigInt::one();
    for _ in 0..log {
        r *= p;
    }
    r
}
