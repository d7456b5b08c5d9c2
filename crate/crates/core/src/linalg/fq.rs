//! Dense matrices over a finite field.

use crate::rings::FiniteField;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Outcome of solving `M x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Solved(Vec<u32>),
    /// A left null vector `v` (`v M = 0`) with `v . b != 0`.
    Obstructed(Vec<u32>),
}

impl FqMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FqMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            m.data[i * c..(i + 1) * c].copy_from_slice(row);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn sub(&self, f: &FiniteField, other: &FqMatrix) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        FqMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, f: &FiniteField, c: u32) -> FqMatrix {
        FqMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, c)).collect() }
    }

    pub fn mul(&self, f: &FiniteField, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = FqMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, f: &FiniteField, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| dot(f, self.row(i), v)).collect()
    }

    /// `v M` for a row vector `v`.
    pub fn vec_mul(&self, f: &FiniteField, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![0; self.cols];
        for (i, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(c, self.get(i, j)));
            }
        }
        out
    }

    /// Row reduction tracking the row operations: returns `(E, R, pivots)`
    /// with `E * self = R` in reduced row echelon form.
    fn reduce(&self, f: &FiniteField) -> (FqMatrix, FqMatrix, Vec<usize>) {
        let mut r = self.clone();
        let mut e = FqMatrix::identity(self.rows);
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&i| r.get(i, col) != 0) else { continue };
            r.swap_rows(row, p);
            e.swap_rows(row, p);
            let inv = f.inv(r.get(row, col));
            r.scale_row(f, row, inv);
            e.scale_row(f, row, inv);
            for i in 0..self.rows {
                let c = r.get(i, col);
                if i != row && c != 0 {
                    let c = f.neg(c);
                    r.add_row_multiple(f, i, row, c);
                    e.add_row_multiple(f, i, row, c);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (e, r, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, f: &FiniteField, i: usize, c: u32) {
        for j in 0..self.cols {
            let v = f.mul(self.get(i, j), c);
            self.set(i, j, v);
        }
    }

    /// `row[dst] += c * row[src]`
    fn add_row_multiple(&mut self, f: &FiniteField, dst: usize, src: usize, c: u32) {
        for j in 0..self.cols {
            let v = f.add(self.get(dst, j), f.mul(c, self.get(src, j)));
            self.set(dst, j, v);
        }
    }

    pub fn rank(&self, f: &FiniteField) -> usize {
        self.reduce(f).2.len()
    }

    pub fn det(&self, f: &FiniteField) -> u32 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut a = self.clone();
        let mut det = 1;
        for col in 0..self.cols {
            let Some(p) = (col..self.rows).find(|&i| a.get(i, col) != 0) else { return 0 };
            if p != col {
                a.swap_rows(col, p);
                det = f.neg(det);
            }
            let pivot = a.get(col, col);
            det = f.mul(det, pivot);
            let inv = f.inv(pivot);
            for i in col + 1..self.rows {
                let c = a.get(i, col);
                if c != 0 {
                    a.add_row_multiple(f, i, col, f.neg(f.mul(c, inv)));
                }
            }
        }
        det
    }

    pub fn inverse(&self, f: &FiniteField) -> Option<FqMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let (e, _, pivots) = self.reduce(f);
        (pivots.len() == self.rows).then_some(e)
    }

    /// Solves `self * x = b`, or returns a left-null certificate.
    pub fn solve(&self, f: &FiniteField, b: &[u32]) -> Solution {
        assert_eq!(b.len(), self.rows);
        let (e, r, pivots) = self.reduce(f);
        let eb = e.mul_vec(f, b);
        if let Some(i) = (pivots.len()..self.rows).find(|&i| eb[i] != 0) {
            return Solution::Obstructed(e.row(i).to_vec());
        }
        let mut x = vec![0; self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = eb[i];
        }
        debug_assert!(pivots.iter().enumerate().all(|(i, &c)| r.get(i, c) == 1));
        Solution::Solved(x)
    }
}

pub fn dot(f: &FiniteField, a: &[u32], b: &[u32]) -> u32 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}
