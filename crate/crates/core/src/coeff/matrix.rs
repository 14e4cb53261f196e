use std::fmt;

use super::field::Fp;

/// Dense row-major matrix over GF(p).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

/// Outcome of [`solve_linear`]. Inconsistency is an ordinary answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Consistent {
        particular: Vec<u32>,
        kernel: Vec<Vec<u32>>,
    },
    /// `certificate · A = 0` while `certificate · b != 0`.
    Inconsistent { certificate: Vec<u32>, value: u32 },
}

impl Solution {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Solution::Consistent { .. })
    }
}

impl Matrix {
    pub fn zeros(field: Fp, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Fp, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Entries given as signed integers, reduced mod p.
    pub fn from_rows(field: Fp, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix literal");
            for (j, &v) in row.iter().enumerate() {
                m.data[i * c + j] = field.reduce(v);
            }
        }
        m
    }

    /// Build a matrix whose rows are the given vectors.
    pub fn from_row_vectors(field: Fp, cols: usize, vectors: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, vectors.len(), cols);
        for (i, v) in vectors.iter().enumerate() {
            assert_eq!(v.len(), cols);
            m.data[i * cols..(i + 1) * cols].copy_from_slice(v);
        }
        m
    }

    /// Build a matrix whose columns are the given vectors.
    pub fn from_col_vectors(field: Fp, rows: usize, vectors: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, rows, vectors.len());
        for (j, v) in vectors.iter().enumerate() {
            assert_eq!(v.len(), rows);
            for (i, &x) in v.iter().enumerate() {
                m.data[i * m.cols + j] = x;
            }
        }
        m
    }

    pub fn from_fn(field: Fp, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j) % field.p();
            }
        }
        m
    }

    #[inline]
    pub fn field(&self) -> Fp {
        self.field
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.p();
    }
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn col(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }
    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let f = self.field;
        let p = f.p() as u64;
        let mut out = Matrix::zeros(f, self.rows, rhs.cols);
        let mut acc = vec![0u64; rhs.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (slot, &b) in acc.iter_mut().zip(row) {
                    *slot += a * b as u64;
                    if *slot >= 1 << 62 {
                        *slot %= p;
                    }
                }
            }
            for (j, a) in acc.iter().enumerate() {
                out.data[i * rhs.cols + j] = (a % p) as u32;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        let p = self.field.p() as u64;
        (0..self.rows)
            .map(|i| {
                let s: u64 = self.row(i).iter().zip(v).map(|(&a, &b)| a as u64 * b as u64 % p).sum();
                (s % p) as u32
            })
            .collect()
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let f = self.field;
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let f = self.field;
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let f = self.field;
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    /// `self += c * rhs`
    pub fn add_scaled(&mut self, rhs: &Matrix, c: u32) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        if c == 0 {
            return;
        }
        let f = self.field;
        for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
            *a = f.mul_add(*a, b, c);
        }
    }

    /// Side-by-side concatenation.
    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows);
        Matrix::from_fn(self.field, self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                rhs.get(i, j - self.cols)
            }
        })
    }

    pub fn vstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Matrix {
            field: self.field,
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn block_diag(&self, rhs: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows + rhs.rows, self.cols + rhs.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, rhs);
        m
    }

    /// Copy `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = block.get(i, j);
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(self.field, rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, self.rows, cols.len(), |i, j| self.get(i, cols[j]))
    }

    /// Deterministic Gauss–Jordan: columns scanned left to right, the pivot
    /// is the first nonzero entry at or below the current row.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let pivots = m.rref_in_place(self.cols);
        Echelon { reduced: m, pivots }
    }

    /// Row-reduce using only the first `pivot_cols` columns as pivot
    /// candidates; row operations act on the whole row.
    fn rref_in_place(&mut self, pivot_cols: usize) -> Vec<usize> {
        let f = self.field;
        let p = f.p() as u64;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..pivot_cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..cols {
                    self.data.swap(piv * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.data[r * cols + c]).expect("nonzero pivot");
            if inv != 1 {
                for j in c..cols {
                    let x = &mut self.data[r * cols + j];
                    *x = f.mul(*x, inv);
                }
            }
            let (before, rest) = self.data.split_at_mut(r * cols);
            let (pivot_row, after) = rest.split_at_mut(cols);
            let eliminate = |row: &mut [u32]| {
                let factor = row[c];
                if factor == 0 {
                    return;
                }
                let neg = p - factor as u64;
                for j in c..cols {
                    let b = pivot_row[j];
                    if b != 0 {
                        row[j] = ((row[j] as u64 + neg * b as u64) % p) as u32;
                    }
                }
            };
            before.chunks_mut(cols).for_each(eliminate);
            after.chunks_mut(cols).for_each(eliminate);
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.rref().pivots.len()
    }

    /// Basis of `{x : A x = 0}`, one vector per free column, echelonized.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let ech = self.rref();
        kernel_from_echelon(&ech, self.cols)
    }

    /// Echelonized basis of the row space.
    pub fn row_space(&self) -> Vec<Vec<u32>> {
        let ech = self.rref();
        (0..ech.pivots.len()).map(|i| ech.reduced.row(i).to_vec()).collect()
    }

    /// Basis of the column space taken from the original columns.
    pub fn column_space(&self) -> Vec<Vec<u32>> {
        let ech = self.rref();
        ech.pivots.iter().map(|&c| self.col(c)).collect()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = self.hstack(&Matrix::identity(self.field, n));
        let pivots = aug.rref_in_place(n);
        if pivots.len() < n {
            return None;
        }
        Some(aug.block(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn solve(&self, b: &[u32]) -> Solution {
        solve_linear(self, b)
    }
}

fn kernel_from_echelon(ech: &Echelon, cols: usize) -> Vec<Vec<u32>> {
    let f = ech.reduced.field;
    let mut is_pivot = vec![false; cols];
    for &c in &ech.pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u32; cols];
        v[free] = 1;
        for (row, &pc) in ech.pivots.iter().enumerate() {
            v[pc] = f.neg(ech.reduced.get(row, free));
        }
        basis.push(v);
    }
    basis
}

/// Solve `A x = b` exactly. On failure, returns a left-null certificate.
pub fn solve_linear(a: &Matrix, b: &[u32]) -> Solution {
    assert_eq!(a.rows, b.len(), "right-hand side length");
    let f = a.field;
    let m = a.rows;
    let n = a.cols;
    // [A | b | I_m]
    let mut aug = Matrix::zeros(f, m, n + 1 + m);
    for i in 0..m {
        for j in 0..n {
            aug.data[i * (n + 1 + m) + j] = a.get(i, j);
        }
        aug.data[i * (n + 1 + m) + n] = b[i] % f.p();
        aug.data[i * (n + 1 + m) + n + 1 + i] = 1;
    }
    let pivots = aug.rref_in_place(n);
    let rank = pivots.len();
    for i in rank..m {
        let value = aug.get(i, n);
        if value != 0 {
            let certificate = (0..m).map(|j| aug.get(i, n + 1 + j)).collect();
            return Solution::Inconsistent { certificate, value };
        }
    }
    let mut particular = vec![0u32; n];
    for (row, &pc) in pivots.iter().enumerate() {
        particular[pc] = aug.get(row, n);
    }
    let reduced = aug.block(0, 0, m, n);
    let kernel = kernel_from_echelon(&Echelon { reduced, pivots }, n);
    Solution::Consistent { particular, kernel }
}

/// Echelonized basis of the span of `vectors` (all of length `dim`).
pub fn span_basis(field: Fp, dim: usize, vectors: &[Vec<u32>]) -> Vec<Vec<u32>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    Matrix::from_row_vectors(field, dim, vectors).row_space()
}

pub fn span_rank(field: Fp, dim: usize, vectors: &[Vec<u32>]) -> usize {
    if vectors.is_empty() || dim == 0 {
        return 0;
    }
    Matrix::from_row_vectors(field, dim, vectors).rank()
}

/// Greedy choice of standard basis vectors completing `span(vectors)` to
/// the whole space; returns the chosen coordinate indices in increasing order.
pub fn complement_coordinates(field: Fp, dim: usize, vectors: &[Vec<u32>]) -> Vec<usize> {
    let mut current: Vec<Vec<u32>> = span_basis(field, dim, vectors);
    let mut rank = current.len();
    let mut chosen = Vec::new();
    for i in 0..dim {
        if rank == dim {
            break;
        }
        let mut e = vec![0u32; dim];
        e[i] = 1;
        current.push(e);
        let r = span_rank(field, dim, &current);
        if r > rank {
            rank = r;
            chosen.push(i);
        } else {
            current.pop();
        }
    }
    chosen
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "] mod {}", self.field.p())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f5() -> Fp {
        Fp::new(5).unwrap()
    }

    #[test]
    fn identity_system_has_unique_solution() {
        let a = Matrix::identity(f5(), 3);
        match solve_linear(&a, &[1, 2, 0]) {
            Solution::Consistent { particular, kernel } => {
                assert_eq!(particular, vec![1, 2, 0]);
                assert!(kernel.is_empty());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_map_kernel_is_everything() {
        let a = Matrix::zeros(f5(), 2, 2);
        assert_eq!(a.kernel().len(), 2);
    }

    #[test]
    fn rank_one_kernel_by_hand() {
        let a = Matrix::from_rows(f5(), &[vec![1, 2], vec![2, 4]]);
        assert_eq!(a.kernel(), vec![vec![3, 1]]);
    }

    #[test]
    fn inconsistent_certificate() {
        let a = Matrix::from_rows(f5(), &[vec![1, 2], vec![2, 4]]);
        match solve_linear(&a, &[1, 0]) {
            Solution::Inconsistent { certificate, value } => {
                let y = Matrix::from_row_vectors(f5(), 2, std::slice::from_ref(&certificate));
                assert!(y.mul(&a).is_zero());
                assert_ne!(value, 0);
                let yb = f5().add(f5().mul(certificate[0], 1), f5().mul(certificate[1], 0));
                assert_eq!(yb, value);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let f = Fp::new(7).unwrap();
        let a = Matrix::from_rows(f, &[vec![2, 1, 0], vec![0, 3, 1], vec![1, 0, 4]]);
        let inv = a.inverse().expect("invertible");
        assert_eq!(a.mul(&inv), Matrix::identity(f, 3));
        let singular = Matrix::from_rows(f, &[vec![1, 2], vec![2, 4]]);
        assert!(singular.inverse().is_none());
    }

    fn small_system() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<i64>)> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            (
                proptest::collection::vec(proptest::collection::vec(0i64..5, c), r),
                proptest::collection::vec(0i64..5, r),
            )
        })
    }

    proptest! {
        #[test]
        fn solve_agrees_with_rank_test((rows, b) in small_system()) {
            let f = f5();
            let a = Matrix::from_rows(f, &rows);
            let bm = Matrix::from_col_vectors(f, a.rows(), &[b.iter().map(|&x| x as u32).collect()]);
            let consistent = a.rank() == a.hstack(&bm).rank();
            let bv: Vec<u32> = b.iter().map(|&x| x as u32).collect();
            match solve_linear(&a, &bv) {
                Solution::Consistent { particular, kernel } => {
                    prop_assert!(consistent);
                    prop_assert_eq!(a.mul_vec(&particular), bv);
                    prop_assert_eq!(kernel.len(), a.cols() - a.rank());
                    for v in kernel {
                        prop_assert!(a.mul_vec(&v).iter().all(|&x| x == 0));
                    }
                }
                Solution::Inconsistent { certificate, .. } => {
                    prop_assert!(!consistent);
                    let y = Matrix::from_row_vectors(f, a.rows(), &[certificate]);
                    prop_assert!(y.mul(&a).is_zero());
                }
            }
        }
    }
}
