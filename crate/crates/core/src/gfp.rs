//! Dense linear algebra over the prime field GF(p).
//!
//! Vectors are plain `Vec<u8>` with entries in `[0, p)`. Subspaces are kept
//! in reduced row echelon form, which makes them canonical and hashable.

use std::fmt;

/// Arithmetic in GF(p) for a prime `p < 256`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    p: u8,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

impl Field {
    pub fn new(p: u32) -> Self {
        assert!((2..256).contains(&p), "prime {p} out of range");
        Field { p: p as u8 }
    }

    #[inline]
    pub fn p(self) -> u8 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.p as u16) as u8
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        ((a as u16 + self.p as u16 - b as u16) % self.p as u16) as u8
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.p as u16) as u8
    }

    pub fn inv(self, a: u8) -> u8 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero");
        // p is tiny, Fermat is fine.
        let mut r = 1u8;
        for _ in 0..self.p - 2 {
            r = self.mul(r, a);
        }
        r
    }

    /// Reduce an arbitrary integer into the field.
    pub fn from_i64(self, a: i64) -> u8 {
        a.rem_euclid(self.p as i64) as u8
    }

    /// `dst += c * src`
    pub fn axpy(self, dst: &mut [u8], c: u8, src: &[u8]) {
        if c == 0 {
            return;
        }
        for (d, &s) in dst.iter_mut().zip(src) {
            if s != 0 {
                *d = self.add(*d, self.mul(c, s));
            }
        }
    }

    pub fn scale(self, v: &mut [u8], c: u8) {
        for x in v.iter_mut() {
            *x = self.mul(*x, c);
        }
    }

    /// Row vector times matrix (`rows.len() == v.len()`).
    pub fn vec_mat(self, v: &[u8], m: &[Vec<u8>]) -> Vec<u8> {
        let cols = m.first().map_or(0, |r| r.len());
        let mut out = vec![0u8; cols];
        for (c, row) in v.iter().zip(m) {
            self.axpy(&mut out, *c, row);
        }
        out
    }

    pub fn mat_mul(self, a: &[Vec<u8>], b: &[Vec<u8>]) -> Vec<Vec<u8>> {
        a.iter().map(|row| self.vec_mat(row, b)).collect()
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn mat_inv(self, m: &[Vec<u8>]) -> Option<Vec<Vec<u8>>> {
        let n = m.len();
        let mut aug: Vec<Vec<u8>> = m
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..n).map(|j| (i == j) as u8));
                r
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| aug[r][col] != 0)?;
            aug.swap(col, piv);
            let inv = self.inv(aug[col][col]);
            self.scale(&mut aug[col], inv);
            for r in 0..n {
                if r != col && aug[r][col] != 0 {
                    let c = self.neg(aug[r][col]);
                    let pivot_row = aug[col].clone();
                    self.axpy(&mut aug[r], c, &pivot_row);
                }
            }
        }
        Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
    }

    pub fn identity(self, n: usize) -> Vec<Vec<u8>> {
        (0..n)
            .map(|i| (0..n).map(|j| (i == j) as u8).collect())
            .collect()
    }

    /// Bring `rows` into reduced row echelon form in place, dropping zero
    /// rows. Returns the pivot column of each remaining row. The pivot of a
    /// row is its first nonzero entry.
    pub fn rref(self, rows: &mut Vec<Vec<u8>>) -> Vec<usize> {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..ncols {
            let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = self.inv(rows[rank][col]);
            self.scale(&mut rows[rank], inv);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[col] != 0 {
                    let c = self.neg(row[col]);
                    self.axpy(row, c, &pivot_row);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        rows.truncate(rank);
        pivots
    }

    pub fn rank(self, rows: &[Vec<u8>]) -> usize {
        let mut r = rows.to_vec();
        self.rref(&mut r).len()
    }

    /// Basis of `{x : M x = 0}` viewing `rows` as the rows of `M`.
    pub fn right_nullspace(self, rows: &[Vec<u8>], ncols: usize) -> Vec<Vec<u8>> {
        let mut r = rows.to_vec();
        let pivots = self.rref(&mut r);
        let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u8; ncols];
                v[f] = 1;
                for (row, &pc) in r.iter().zip(&pivots) {
                    v[pc] = self.neg(row[f]);
                }
                v
            })
            .collect()
    }

    /// Solve `x * M = target` for a row vector `x`, where `M` is given by its
    /// rows. Returns `None` when there is no solution.
    pub fn solve_left(self, rows: &[Vec<u8>], target: &[u8]) -> Option<Vec<u8>> {
        // Transpose: M^T x^T = target^T.
        let m = rows.len();
        let n = target.len();
        let mut aug: Vec<Vec<u8>> = (0..n)
            .map(|c| {
                let mut r: Vec<u8> = rows.iter().map(|row| row[c]).collect();
                r.push(target[c]);
                r
            })
            .collect();
        let pivots = self.rref(&mut aug);
        if pivots.contains(&m) {
            return None;
        }
        let mut x = vec![0u8; m];
        for (row, &pc) in aug.iter().zip(&pivots) {
            x[pc] = row[m];
        }
        Some(x)
    }
}

/// A subspace of GF(p)^n stored by its reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<u8>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn full(f: Field, ambient: usize) -> Self {
        Subspace { ambient, basis: f.identity(ambient) }
    }

    pub fn span(f: Field, ambient: usize, vecs: impl IntoIterator<Item = Vec<u8>>) -> Self {
        let mut rows: Vec<Vec<u8>> = vecs.into_iter().collect();
        debug_assert!(rows.iter().all(|r| r.len() == ambient));
        f.rref(&mut rows);
        Subspace { ambient, basis: rows }
    }

    /// Wraps rows that are already in reduced echelon form.
    pub fn from_rref(ambient: usize, basis: Vec<Vec<u8>>) -> Self {
        Subspace { ambient, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|r| r.iter().position(|&x| x != 0).expect("zero row in basis"))
            .collect()
    }

    /// Reduce `v` modulo the subspace; zero iff `v` is contained.
    pub fn reduce(&self, f: Field, v: &[u8]) -> Vec<u8> {
        let mut v = v.to_vec();
        for row in &self.basis {
            let pc = row.iter().position(|&x| x != 0).unwrap();
            if v[pc] != 0 {
                let c = f.neg(v[pc]);
                f.axpy(&mut v, c, row);
            }
        }
        v
    }

    pub fn contains(&self, f: Field, v: &[u8]) -> bool {
        self.reduce(f, v).iter().all(|&x| x == 0)
    }

    pub fn contains_space(&self, f: Field, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(f, v))
    }

    pub fn sum(&self, f: Field, other: &Subspace) -> Subspace {
        Subspace::span(
            f,
            self.ambient,
            self.basis.iter().chain(other.basis.iter()).cloned(),
        )
    }

    pub fn intersect(&self, f: Field, other: &Subspace) -> Subspace {
        // x in both  <=>  x = a*A = b*B, solve [A; -B] kernel.
        let n = self.ambient;
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(n);
        }
        let mut rows: Vec<Vec<u8>> = Vec::new();
        for r in &self.basis {
            rows.push(r.clone());
        }
        for r in &other.basis {
            rows.push(r.iter().map(|&x| f.neg(x)).collect());
        }
        // Left kernel of `rows` = right nullspace of the transpose.
        let k = rows.len();
        let transposed: Vec<Vec<u8>> = (0..n).map(|c| rows.iter().map(|r| r[c]).collect()).collect();
        let kernel = f.right_nullspace(&transposed, k);
        let vecs = kernel
            .into_iter()
            .map(|coef| f.vec_mat(&coef[..self.dim()], &self.basis));
        Subspace::span(f, n, vecs)
    }

    /// Image under `v -> v * m`.
    pub fn image(&self, f: Field, m: &[Vec<u8>]) -> Subspace {
        Subspace::span(f, self.ambient, self.basis.iter().map(|r| f.vec_mat(r, m)))
    }

    /// Vectors completing the echelon basis to a basis of the ambient space
    /// (unit vectors on the non-pivot columns).
    pub fn complement_units(&self) -> Vec<Vec<u8>> {
        let piv = self.pivots();
        (0..self.ambient)
            .filter(|c| !piv.contains(c))
            .map(|c| {
                let mut v = vec![0u8; self.ambient];
                v[c] = 1;
                v
            })
            .collect()
    }
}

/// All `k`-dimensional subspaces of GF(p)^n, in reduced echelon form,
/// enumerated cell by cell (one Schubert cell per pivot pattern).
pub fn subspaces(f: Field, n: usize, k: usize) -> Vec<Subspace> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut pivots = Vec::with_capacity(k);
    choose_pivots(n, k, 0, &mut pivots, &mut |piv| {
        fill_cell(f, n, piv, &mut |rows| out.push(Subspace::from_rref(n, rows)));
    });
    out
}

fn choose_pivots(n: usize, k: usize, start: usize, acc: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
    if acc.len() == k {
        emit(acc);
        return;
    }
    for c in start..n {
        if n - c < k - acc.len() {
            break;
        }
        acc.push(c);
        choose_pivots(n, k, c + 1, acc, emit);
        acc.pop();
    }
}

/// Enumerate every reduced echelon matrix with the given pivot columns.
fn fill_cell(f: Field, n: usize, pivots: &[usize], emit: &mut dyn FnMut(Vec<Vec<u8>>)) {
    // Free positions: row i, column c > pivots[i] with c not a pivot.
    let mut free = Vec::new();
    for (i, &pc) in pivots.iter().enumerate() {
        for c in pc + 1..n {
            if !pivots.contains(&c) {
                free.push((i, c));
            }
        }
    }
    let mut base = vec![vec![0u8; n]; pivots.len()];
    for (i, &pc) in pivots.iter().enumerate() {
        base[i][pc] = 1;
    }
    let p = f.p();
    let mut digits = vec![0u8; free.len()];
    loop {
        let mut rows = base.clone();
        for (&(i, c), &d) in free.iter().zip(&digits) {
            rows[i][c] = d;
        }
        emit(rows);
        // odometer
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                return;
            }
            digits[pos] += 1;
            if digits[pos] == p {
                digits[pos] = 0;
                pos += 1;
            } else {
                break;
            }
        }
    }
}

/// Gaussian binomial coefficient `[n choose k]_p`.
pub fn gaussian_binomial(p: u64, n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (p as u128).pow(n - i) - 1;
        den *= (p as u128).pow(i + 1) - 1;
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_table() {
        let f = Field::new(3);
        assert_eq!(f.inv(1), 1);
        assert_eq!(f.inv(2), 2);
        let f5 = Field::new(5);
        for a in 1..5 {
            assert_eq!(f5.mul(a, f5.inv(a)), 1);
        }
    }

    #[test]
    fn rref_and_nullspace() {
        let f = Field::new(3);
        let rows = vec![vec![1, 2, 0], vec![2, 1, 0]];
        let mut r = rows.clone();
        let piv = f.rref(&mut r);
        assert_eq!(piv, vec![0]);
        let ns = f.right_nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            for row in &rows {
                let dot = row.iter().zip(&v).fold(0u8, |acc, (a, b)| f.add(acc, f.mul(*a, *b)));
                assert_eq!(dot, 0);
            }
        }
    }

    #[test]
    fn matrix_inverse_roundtrip() {
        let f = Field::new(3);
        let m = vec![vec![1, 1, 0], vec![0, 1, 2], vec![1, 0, 2]];
        let inv = f.mat_inv(&m).unwrap();
        assert_eq!(f.mat_mul(&m, &inv), f.identity(3));
        assert!(f.mat_inv(&[vec![1, 1], vec![2, 2]]).is_none());
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        let f = Field::new(3);
        for n in 0..5u32 {
            for k in 0..=n {
                let subs = subspaces(f, n as usize, k as usize);
                assert_eq!(subs.len() as u128, gaussian_binomial(3, n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn intersection_dimension_formula() {
        let f = Field::new(3);
        let a = Subspace::span(f, 4, vec![vec![1, 0, 0, 0], vec![0, 1, 1, 0]]);
        let b = Subspace::span(f, 4, vec![vec![0, 1, 1, 0], vec![0, 0, 0, 1]]);
        let i = a.intersect(f, &b);
        let s = a.sum(f, &b);
        assert_eq!(i.dim() + s.dim(), a.dim() + b.dim());
        assert_eq!(i.dim(), 1);
        assert!(i.contains(f, &[0, 1, 1, 0]));
    }

    #[test]
    fn solve_left_finds_combination() {
        let f = Field::new(3);
        let rows = vec![vec![1, 0, 1], vec![0, 1, 1]];
        let x = f.solve_left(&rows, &[2, 1, 0]).unwrap();
        assert_eq!(f.vec_mat(&x, &rows), vec![2, 1, 0]);
        assert!(f.solve_left(&rows, &[0, 0, 1]).is_none());
    }
}
