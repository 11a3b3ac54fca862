//! Dense integer matrices and the Smith normal form, generic over the
//! integer type (machine integers or `BigInt`).

use std::fmt;

use num_bigint::{BigInt, ToBigInt};
use num_integer::Integer as NumInteger;
use num_traits::{CheckedAdd, CheckedMul, FromPrimitive, Signed, ToPrimitive};

/// Integer scalars usable in [`Matrix`].
pub trait Integer:
    Clone + NumInteger + Signed + CheckedAdd + CheckedMul + FromPrimitive + ToPrimitive + ToBigInt + fmt::Debug + fmt::Display + Send + Sync
{
}

impl<T> Integer for T where
    T: Clone + NumInteger + Signed + CheckedAdd + CheckedMul + FromPrimitive + ToPrimitive + ToBigInt + fmt::Debug + fmt::Display + Send + Sync
{
}

/// `a * b + c`, panicking on overflow of a fixed-width type instead of
/// wrapping; arbitrary-precision entries never overflow.
fn mul_add<T: Integer>(a: &T, b: &T, c: &T) -> T {
    a.checked_mul(b)
        .and_then(|p| p.checked_add(c))
        .expect("integer overflow in matrix arithmetic; use IntMatrix for large entries")
}

/// A dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Integer> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<T: Integer> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// From rows of machine integers; all rows must have length `cols`.
    pub fn from_i64_rows(rows: &[Vec<i64>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (c, &x) in row.iter().enumerate() {
                m[(r, c)] = T::from_i64(x).expect("entry does not fit");
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    out[(r, c)] = mul_add(a, &other[(k, c)], &out[(r, c)]);
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![T::zero(); self.cols];
        for (k, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                *o = mul_add(a, &self[(k, c)], o);
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// `row[dst] += q * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, q: &T) {
        for c in 0..self.cols {
            let s = self[(src, c)].clone();
            if !s.is_zero() {
                self[(dst, c)] = mul_add(q, &s, &self[(dst, c)]);
            }
        }
    }

    /// `col[dst] += q * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, q: &T) {
        for r in 0..self.rows {
            let s = self[(r, src)].clone();
            if !s.is_zero() {
                self[(r, dst)] = mul_add(q, &s, &self[(r, dst)]);
            }
        }
    }

    /// `(row[i], row[j]) <- (a row[i] + b row[j], c row[i] + d row[j])`
    fn combine_rows(&mut self, i: usize, j: usize, [a, b, c, d]: &[T; 4]) {
        for k in 0..self.cols {
            let (x, y) = (self[(i, k)].clone(), self[(j, k)].clone());
            self[(i, k)] = mul_add(a, &x, &mul_add(b, &y, &T::zero()));
            self[(j, k)] = mul_add(c, &x, &mul_add(d, &y, &T::zero()));
        }
    }

    /// `(col[i], col[j]) <- (a col[i] + c col[j], b col[i] + d col[j])`,
    /// i.e. right multiplication by `[[a, b], [c, d]]`.
    fn combine_cols(&mut self, i: usize, j: usize, [a, b, c, d]: &[T; 4]) {
        for k in 0..self.rows {
            let (x, y) = (self[(k, i)].clone(), self[(k, j)].clone());
            self[(k, i)] = mul_add(a, &x, &mul_add(c, &y, &T::zero()));
            self[(k, j)] = mul_add(b, &x, &mul_add(d, &y, &T::zero()));
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            self[(r, c)] = -self[(r, c)].clone();
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return T::one();
        }
        let mut a = self.clone();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(s) = (k + 1..n).find(|&r| !a[(r, k)].is_zero()) else {
                    return T::zero();
                };
                a.swap_rows(k, s);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[(i, j)].clone() * a[(k, k)].clone() - a[(i, k)].clone() * a[(k, j)].clone();
                    a[(i, j)] = v / prev.clone();
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().abs().is_one()
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

/// `U * M * V = D` with `D` diagonal, `d_1 | d_2 | ...`, `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct Snf<T: Integer> {
    pub u: Matrix<T>,
    pub v: Matrix<T>,
    /// Diagonal of `D` (length `min(rows, cols)`), nonnegative.
    pub diagonal: Vec<T>,
    pub rows: usize,
    pub cols: usize,
}

impl<T: Integer> Snf<T> {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().take_while(|d| !d.is_zero()).count()
    }

    pub fn d_matrix(&self) -> Matrix<T> {
        let mut d = Matrix::zeros(self.rows, self.cols);
        for (i, x) in self.diagonal.iter().enumerate() {
            d[(i, i)] = x.clone();
        }
        d
    }

    /// Rows `x` with `x * M = 0` spanning the integer left kernel.
    pub fn left_kernel(&self) -> Vec<Vec<T>> {
        (self.rank()..self.rows).map(|r| self.u.row(r).to_vec()).collect()
    }

    /// An integer solution of `x * M = b`, if one exists.
    pub fn solve_left(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.cols);
        // x U^-1 D = b V  =>  y D = b V with y = x U^-1
        let bv = self.v.vec_mul(b);
        let r = self.rank();
        let mut y = vec![T::zero(); self.rows];
        for (i, target) in bv.iter().enumerate() {
            if i < r {
                let (q, rem) = target.div_rem(&self.diagonal[i]);
                if !rem.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !target.is_zero() {
                return None;
            }
        }
        Some(self.u.vec_mul(&y))
    }

    /// Checks `U M V = D`, the divisibility chain and unimodularity.
    ///
    /// The products are formed over `BigInt`, so the check cannot overflow
    /// even when the scalar type could.
    pub fn verify(&self, m: &Matrix<T>) -> bool {
        let big = |x: &Matrix<T>| Matrix::<BigInt> {
            rows: x.rows,
            cols: x.cols,
            data: x.data.iter().map(|v| v.to_bigint().expect("integer")).collect(),
        };
        let (u, v) = (big(&self.u), big(&self.v));
        let lhs = u.mul(&big(m)).mul(&v);
        if lhs != big(&self.d_matrix()) {
            return false;
        }
        let r = self.rank();
        if self.diagonal[r..].iter().any(|d| !d.is_zero()) {
            return false;
        }
        for w in self.diagonal[..r].windows(2) {
            if w[0].is_negative() || !w[1].is_multiple_of(&w[0]) {
                return false;
            }
        }
        if self.diagonal.first().is_some_and(|d| d.is_negative()) {
            return false;
        }
        u.is_unimodular() && v.is_unimodular()
    }
}

/// Smith normal form with transformation matrices.
///
/// In builds with debug assertions every result is checked against its
/// postconditions before it is returned.
pub fn smith_normal_form<T: Integer>(m: &Matrix<T>) -> Snf<T> {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = Matrix::identity(rows);
    let mut v = Matrix::identity(cols);
    let steps = rows.min(cols);

    // Diagonalize.
    let mut rank = 0;
    for t in 0..steps {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                let x = &a[(r, c)];
                if !x.is_zero() && best.is_none_or(|(br, bc)| x.abs() < a[(br, bc)].abs()) {
                    best = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = best else { break };
        rank = t + 1;
        a.swap_rows(t, pr);
        u.swap_rows(t, pr);
        a.swap_cols(t, pc);
        v.swap_cols(t, pc);

        loop {
            let mut clean = true;
            for r in t + 1..rows {
                if a[(r, t)].is_zero() {
                    continue;
                }
                let q = -nearest_quotient(&a[(r, t)], &a[(t, t)]);
                a.add_row(r, t, &q);
                u.add_row(r, t, &q);
                if !a[(r, t)].is_zero() {
                    clean = false;
                }
            }
            for c in t + 1..cols {
                if a[(t, c)].is_zero() {
                    continue;
                }
                let q = -nearest_quotient(&a[(t, c)], &a[(t, t)]);
                a.add_col(c, t, &q);
                v.add_col(c, t, &q);
                if !a[(t, c)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
            // move the smallest remainder in row/column t onto the pivot
            let mut best = (t, t);
            for r in t + 1..rows {
                if !a[(r, t)].is_zero() && a[(r, t)].abs() < a[best].abs() {
                    best = (r, t);
                }
            }
            for c in t + 1..cols {
                if !a[(t, c)].is_zero() && a[(t, c)].abs() < a[best].abs() {
                    best = (t, c);
                }
            }
            if best.0 != t {
                a.swap_rows(t, best.0);
                u.swap_rows(t, best.0);
            } else if best.1 != t {
                a.swap_cols(t, best.1);
                v.swap_cols(t, best.1);
            }
        }
    }

    // Divisibility chain: diag(x, y) -> diag(gcd, lcm) by the unimodular
    // transforms [[s, t], [-y/g, x/g]] on rows and [[1, -t y/g], [1, s x/g]]
    // on columns, where s x + t y = g. Their entries stay below |x|, |y|.
    for i in 0..rank {
        for j in i + 1..rank {
            let (x, y) = (a[(i, i)].clone(), a[(j, j)].clone());
            if y.is_multiple_of(&x) {
                continue;
            }
            let eg = x.extended_gcd(&y);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let (xg, yg) = (x.clone() / g.clone(), y.clone() / g.clone());
            let left = [s.clone(), t.clone(), -yg.clone(), xg.clone()];
            let right = [T::one(), -(t * yg.clone()), T::one(), s * xg];
            a.combine_rows(i, j, &left);
            u.combine_rows(i, j, &left);
            a.combine_cols(i, j, &right);
            v.combine_cols(i, j, &right);
        }
    }
    for t in 0..rank {
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }

    let diagonal: Vec<T> = (0..steps).map(|i| a[(i, i)].clone()).collect();
    let snf = Snf { u, v, diagonal, rows, cols };
    debug_assert!(snf.verify(m), "Smith normal form postconditions violated");
    snf
}

/// The quotient `q` of `x / y` minimizing `|x - q y|`.
fn nearest_quotient<T: Integer>(x: &T, y: &T) -> T {
    let (q, r) = x.div_rem(y);
    let two_r = r.abs() + r.abs();
    if two_r > y.abs() {
        if r.is_negative() == y.is_negative() {
            q + T::one()
        } else {
            q - T::one()
        }
    } else {
        q
    }
}
