//! Dense row-major matrices over a `Field`.
//!
//! Pivoting is first-nonzero and deterministic; everything is exact.

use std::fmt;

use crate::error::{Error, Result};
use crate::ffla::field::{Field, Scalar};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Result of `Matrix::rref`: R = T·A with R in reduced row echelon form.
pub struct Rref {
    pub r: Matrix,
    pub t: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Matrix {
            field,
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Matrix {
        let mut m = Matrix::zero(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    pub fn column(field: Field, entries: Vec<Scalar>) -> Matrix {
        let rows = entries.len();
        Matrix {
            field,
            rows,
            cols: 1,
            data: entries,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn col_vec(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: Scalar) -> Matrix {
        let f = &self.field;
        let data = self.data.iter().map(|&a| f.mul(c, a)).collect();
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let f = &self.field;
        let mut out = Matrix::zero(self.field.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                let src = &other.data[k * other.cols..(k + 1) * other.cols];
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d = f.add(*d, f.mul(a, s));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        let f = &self.field;
        let mut out = vec![0u32; self.rows];
        for i in 0..self.rows {
            let row = self.row(i);
            let mut acc = 0u32;
            for (&a, &x) in row.iter().zip(v) {
                acc = f.add(acc, f.mul(a, x));
            }
            out[i] = acc;
        }
        out
    }

    pub fn pow(&self, e: usize) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut result = Matrix::identity(self.field.clone(), self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let f = &self.field;
        let mut out = Matrix::zero(
            self.field.clone(),
            self.rows * other.rows,
            self.cols * other.cols,
        );
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let v = f.mul(a, other.get(k, l));
                        out.set(i * other.rows + k, j * other.cols + l, v);
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Matrix::zero(self.field.clone(), self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            out.data[i * out.cols..i * out.cols + self.cols].copy_from_slice(self.row(i));
            out.data[i * out.cols + self.cols..(i + 1) * out.cols].copy_from_slice(other.row(i));
        }
        out
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Reduced row echelon form with the transforming matrix.
    pub fn rref(&self) -> Rref {
        let f = self.field.clone();
        let mut r = self.clone();
        let mut t = Matrix::identity(f.clone(), self.rows);
        let mut pivots = Vec::new();
        let mut pr = 0usize; // current pivot row
        for pc in 0..self.cols {
            // first nonzero entry at or below pr
            let Some(sel) = (pr..self.rows).find(|&i| r.get(i, pc) != 0) else {
                continue;
            };
            if sel != pr {
                swap_rows(&mut r, sel, pr);
                swap_rows(&mut t, sel, pr);
            }
            let inv = f.inv(r.get(pr, pc));
            scale_row(&f, &mut r, pr, inv);
            scale_row(&f, &mut t, pr, inv);
            for i in 0..self.rows {
                if i != pr {
                    let c = r.get(i, pc);
                    if c != 0 {
                        let nc = f.neg(c);
                        axpy_row(&f, &mut r, i, pr, nc);
                        axpy_row(&f, &mut t, i, pr, nc);
                    }
                }
            }
            pivots.push(pc);
            pr += 1;
            if pr == self.rows {
                break;
            }
        }
        Rref {
            r,
            t,
            rank: pivots.len(),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// One solution of A·x = b, or None when inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::ShapeMismatch(format!(
                "solve: {} rows vs {} entries",
                self.rows,
                b.len()
            )));
        }
        let rr = self.rref();
        let tb = rr.t.mul_vec(b);
        // inconsistent when a zero row of R has nonzero rhs
        for i in rr.rank..self.rows {
            if tb[i] != 0 {
                return Ok(None);
            }
        }
        let mut x = vec![0u32; self.cols];
        for (row, &pc) in rr.pivots.iter().enumerate() {
            x[pc] = tb[row];
        }
        Ok(Some(x))
    }

    /// Basis of the right nullspace, as columns of the returned matrix.
    pub fn nullspace(&self) -> Matrix {
        let rr = self.rref();
        let f = self.field.clone();
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &rr.pivots {
                v[p] = true;
            }
            v
        };
        let free: Vec<usize> = (0..self.cols).filter(|&j| !pivot_set[j]).collect();
        let mut out = Matrix::zero(f.clone(), self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, 1);
            for (row, &pc) in rr.pivots.iter().enumerate() {
                out.set(pc, k, f.neg(rr.r.get(row, fc)));
            }
        }
        out
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let rr = self.rref();
        if rr.rank == self.rows {
            Some(rr.t)
        } else {
            None
        }
    }

    /// Debug dump: "rows cols p n" then rows of generator-power tokens.
    pub fn dump(&self) -> String {
        let f = &self.field;
        let mut out = format!("{} {} {} {}\n", self.rows, self.cols, f.p(), f.n());
        for i in 0..self.rows {
            let toks: Vec<String> = self.row(i).iter().map(|&s| f.format_scalar(s)).collect();
            out.push_str(&toks.join(" "));
            out.push('\n');
        }
        out
    }
}

fn swap_rows(m: &mut Matrix, a: usize, b: usize) {
    let cols = m.cols;
    if a == b {
        return;
    }
    let (lo, hi) = (a.min(b), a.max(b));
    let (top, bot) = m.data.split_at_mut(hi * cols);
    top[lo * cols..(lo + 1) * cols].swap_with_slice(&mut bot[..cols]);
}

fn scale_row(f: &Field, m: &mut Matrix, i: usize, c: Scalar) {
    if c == 1 {
        return;
    }
    let cols = m.cols;
    for v in &mut m.data[i * cols..(i + 1) * cols] {
        *v = f.mul(c, *v);
    }
}

/// row_i += c * row_j
fn axpy_row(f: &Field, m: &mut Matrix, i: usize, j: usize, c: Scalar) {
    let cols = m.cols;
    let (dst, src) = if i < j {
        let (a, b) = m.data.split_at_mut(j * cols);
        (&mut a[i * cols..(i + 1) * cols], &b[..cols])
    } else {
        let (a, b) = m.data.split_at_mut(i * cols);
        (&mut b[..cols], &a[j * cols..(j + 1) * cols])
    };
    for (d, &s) in dst.iter_mut().zip(src.iter()) {
        *d = f.add(*d, f.mul(c, s));
    }
}

/// In-place axpy on raw rows: dst += c * src.
pub fn axpy_slice(f: &Field, dst: &mut [Scalar], src: &[Scalar], c: Scalar) {
    if c == 0 {
        return;
    }
    for (d, &s) in dst.iter_mut().zip(src.iter()) {
        if s != 0 {
            *d = f.add(*d, f.mul(c, s));
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dump())
    }
}

/// Incremental row-space echelon structure: rows are inserted one at a time
/// and kept in (non-reduced) echelon form. Used by the intertwiner solver and
/// spinning routines, where millions of candidate rows reduce against a small
/// basis.
pub struct Echelon {
    field: Field,
    width: usize,
    /// rows[k] has its leading nonzero entry (normalized to 1) at lead[k];
    /// lead is strictly increasing under the permutation order.
    rows: Vec<Vec<Scalar>>,
    lead_of_row: Vec<usize>,
    /// row index holding a given lead column, or usize::MAX
    row_with_lead: Vec<usize>,
}

impl Echelon {
    pub fn new(field: Field, width: usize) -> Echelon {
        Echelon {
            field,
            width,
            rows: Vec::new(),
            lead_of_row: Vec::new(),
            row_with_lead: vec![usize::MAX; width],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Reduces `v` in place against the basis; returns true (and absorbs it)
    /// when it carried new information.
    pub fn insert(&mut self, mut v: Vec<Scalar>) -> bool {
        let f = self.field.clone();
        debug_assert_eq!(v.len(), self.width);
        let mut col = 0;
        while col < self.width {
            if v[col] == 0 {
                col += 1;
                continue;
            }
            let holder = self.row_with_lead[col];
            if holder == usize::MAX {
                // normalize and store
                let inv = f.inv(v[col]);
                if inv != 1 {
                    for x in v.iter_mut() {
                        *x = f.mul(inv, *x);
                    }
                }
                self.row_with_lead[col] = self.rows.len();
                self.rows.push(v);
                self.lead_of_row.push(col);
                return true;
            }
            let c = f.neg(v[col]);
            let row = &self.rows[holder];
            axpy_slice(&f, &mut v[col..], &row[col..], c);
            debug_assert_eq!(v[col], 0);
            col += 1;
        }
        false
    }

    /// Reduces `v` against the stored rows without absorbing it.
    pub fn reduce(&self, v: &mut [Scalar]) {
        let f = self.field.clone();
        for col in 0..self.width {
            if v[col] == 0 {
                continue;
            }
            let holder = self.row_with_lead[col];
            if holder == usize::MAX {
                continue;
            }
            let c = f.neg(v[col]);
            axpy_slice(&f, &mut v[col..], &self.rows[holder][col..], c);
        }
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// The stored rows as a matrix (row basis of the span).
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_rows(self.field.clone(), self.rows.clone())
    }

    /// Nullspace of the row span seen as a linear system: vectors x with
    /// r·x = 0 for every stored row r.
    pub fn nullspace(&self) -> Matrix {
        if self.rows.is_empty() {
            return Matrix::identity(self.field.clone(), self.width);
        }
        self.basis_matrix().nullspace()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, n: u32) -> Field {
        Field::new(p, n).unwrap()
    }

    #[test]
    fn rref_identity() {
        let f = gf(2, 3);
        let id = Matrix::identity(f, 4);
        let rr = id.rref();
        assert_eq!(rr.rank, 4);
        assert!(rr.r.is_identity());
        assert!(rr.t.is_identity());
    }

    #[test]
    fn rref_zero_and_equal_rows() {
        let f = gf(2, 1);
        assert_eq!(Matrix::zero(f.clone(), 3, 5).rank(), 0);
        let m = Matrix::from_rows(f, vec![vec![1, 1], vec![1, 1]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rref_transform_identity_holds() {
        let f = gf(3, 2);
        let m = Matrix::from_rows(f, vec![vec![1, 2, 3], vec![4, 5, 6], vec![1, 0, 1]]);
        let rr = m.rref();
        assert_eq!(rr.t.mul(&m), rr.r);
        // idempotence
        let rr2 = rr.r.rref();
        assert_eq!(rr2.r, rr.r);
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let f = gf(5, 1);
        let id = Matrix::identity(f.clone(), 3);
        assert_eq!(id.solve(&[1, 2, 3]).unwrap(), Some(vec![1, 2, 3]));
        let z = Matrix::zero(f, 2, 2);
        assert_eq!(z.solve(&[1, 0]).unwrap(), None);
    }

    #[test]
    fn nullspace_cases() {
        let f = gf(2, 1);
        assert_eq!(Matrix::identity(f.clone(), 3).nullspace().cols(), 0);
        assert_eq!(Matrix::zero(f.clone(), 2, 4).nullspace().cols(), 4);
        let m = Matrix::from_rows(f, vec![vec![1, 1]]);
        let ns = m.nullspace();
        assert_eq!(ns.cols(), 1);
        assert_eq!(ns.col_vec(0), vec![1, 1]);
    }

    #[test]
    fn kron_identities() {
        let f = gf(2, 3);
        let ia = Matrix::identity(f.clone(), 2);
        let ib = Matrix::identity(f.clone(), 3);
        assert!(ia.kron(&ib).is_identity());
        let s = Matrix::from_rows(f.clone(), vec![vec![5]]);
        let b = Matrix::from_rows(f.clone(), vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(s.kron(&b), b.scale(5));
    }

    #[test]
    fn kron_explicit_2x2() {
        let f = gf(3, 1);
        let a = Matrix::from_rows(f.clone(), vec![vec![1, 2], vec![0, 1]]);
        let b = Matrix::from_rows(f.clone(), vec![vec![2, 0], vec![1, 1]]);
        let k = a.kron(&b);
        // entry (i*2+k, j*2+l) = a[i][j] * b[k][l]
        for i in 0..2 {
            for j in 0..2 {
                for r in 0..2 {
                    for c in 0..2 {
                        assert_eq!(k.get(i * 2 + r, j * 2 + c), f.mul(a.get(i, j), b.get(r, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let f = gf(2, 6);
        let m = Matrix::from_rows(f.clone(), vec![vec![1, 2, 3], vec![0, 1, 7], vec![9, 0, 1]]);
        let inv = m.inverse().expect("invertible");
        assert!(m.mul(&inv).is_identity());
    }

    #[test]
    fn echelon_matches_rank() {
        let f = gf(2, 3);
        let m = Matrix::from_rows(
            f.clone(),
            vec![vec![1, 2, 3, 4], vec![2, 4, 6, 3], vec![3, 6, 5, 7], vec![0, 0, 0, 0]],
        );
        let mut ech = Echelon::new(f, 4);
        for i in 0..4 {
            ech.insert(m.row(i).to_vec());
        }
        assert_eq!(ech.rank(), m.rank());
    }
}
