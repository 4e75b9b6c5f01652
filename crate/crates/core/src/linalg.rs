//! Dense exact rational matrices with the rank / kernel / image / solve
//! operations the cohomology engine needs.
//!
//! Matrices are small (a few hundred rows at most in the desk cases) but the
//! arithmetic must be exact, so everything runs over [`Q`] with Gaussian
//! elimination. Multiplication skips zero entries, which is what makes the
//! very sparse jet operators cheap.

use crate::scalar::{q0, q1, Q};
use num_traits::Zero;

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Q>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| crate::scalar::fmt_q(self.at(i, j)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![q0(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.set(i, i, q1());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    /// Column vector from a slice.
    pub fn col_vec(v: &[Q]) -> Self {
        Mat {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Q) {
        let idx = i * self.cols + j;
        self.data[idx] = &self.data[idx] + v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self.at(i, j).is_zero() {
                    t.set(j, i, self.at(i, j).clone());
                }
            }
        }
        t
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a + b)
            .collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a - b)
            .collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: &Q) -> Mat {
        let data = self.data.iter().map(|a| a * c).collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Matrix product, skipping zero entries on the left factor.
    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        out
    }

    /// Apply to a column vector given as a slice.
    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![q0(); self.rows];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() || v[k].is_zero() {
                    continue;
                }
                out[i] = &out[i] + &(a * &v[k]);
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut m = Mat::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.at(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.at(i, j).clone());
            }
        }
        m
    }

    /// Select a subset of columns.
    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        let mut m = Mat::zero(self.rows, idx.len());
        for (jj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                m.set(i, jj, self.at(i, j).clone());
            }
        }
        m
    }

    pub fn col(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    /// Reduced row echelon form; returns (rref, pivot column indices).
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // prefer a unit pivot to keep entries small
            let mut pivot = None;
            for i in r..m.rows {
                if !m.at(i, c).is_zero() {
                    if pivot.is_none() {
                        pivot = Some(i);
                    }
                    let v = m.at(i, c);
                    if v.numer().magnitude() == &1u32.into() && v.denom().magnitude() == &1u32.into()
                    {
                        pivot = Some(i);
                        break;
                    }
                }
            }
            let Some(p) = pivot else { continue };
            if p != r {
                for j in 0..m.cols {
                    let a = m.at(r, j).clone();
                    let b = m.at(p, j).clone();
                    m.set(r, j, b);
                    m.set(p, j, a);
                }
            }
            let inv = q1() / m.at(r, c).clone();
            for j in c..m.cols {
                let v = m.at(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.at(i, c).is_zero() {
                    let f = m.at(i, c).clone();
                    for j in c..m.cols {
                        let v = m.at(i, j) - &(&f * m.at(r, j));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, as columns of the returned matrix.
    pub fn kernel(&self) -> Mat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Mat::zero(self.cols, free.len());
        for (fi, &fc) in free.iter().enumerate() {
            k.set(fc, fi, q1());
            for (pi, &pc) in pivots.iter().enumerate() {
                let v = r.at(pi, fc);
                if !v.is_zero() {
                    k.set(pc, fi, -v.clone());
                }
            }
        }
        k
    }

    /// Basis of the column space: the pivot columns of `self`.
    pub fn image(&self) -> Mat {
        let (_, pivots) = self.rref();
        self.select_cols(&pivots)
    }

    /// Solve `self * x = b`; `None` when inconsistent. `b` is a column vector.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(self.rows, b.len());
        let aug = self.hcat(&Mat::col_vec(b));
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in augmented column
        }
        let mut x = vec![q0(); self.cols];
        for (pi, &pc) in pivots.iter().enumerate() {
            x[pc] = r.at(pi, self.cols).clone();
        }
        Some(x)
    }

    /// Inverse of a square matrix; panics if singular.
    pub fn inverse(&self) -> Mat {
        assert_eq!(self.rows, self.cols);
        let aug = self.hcat(&Mat::identity(self.rows));
        let (r, pivots) = aug.rref();
        assert_eq!(pivots.len(), self.rows, "matrix is singular");
        assert!(pivots.iter().enumerate().all(|(i, &p)| i == p));
        let idx: Vec<usize> = (self.cols..2 * self.cols).collect();
        r.select_cols(&idx)
    }

    /// `true` when every column of `other` lies in the column span of `self`.
    pub fn contains_columns(&self, other: &Mat) -> bool {
        assert_eq!(self.rows, other.rows);
        let joint = self.hcat(other);
        self.rank() == joint.rank()
    }

    /// `true` when the column spans coincide.
    pub fn same_column_span(&self, other: &Mat) -> bool {
        self.contains_columns(other) && other.contains_columns(self)
    }

    /// Basis for the intersection of the column spans of `a` and `b`.
    pub fn intersect_columns(a: &Mat, b: &Mat) -> Mat {
        assert_eq!(a.rows, b.rows);
        if a.cols == 0 || b.cols == 0 {
            return Mat::zero(a.rows, 0);
        }
        let joint = a.hcat(&b.scale(&-q1()));
        let ker = joint.kernel();
        // a-part of each kernel vector spans the intersection
        let mut vecs = Mat::zero(a.rows, ker.cols);
        for j in 0..ker.cols {
            for i in 0..a.rows {
                let mut s = q0();
                for c in 0..a.cols {
                    if !ker.at(c, j).is_zero() && !a.at(i, c).is_zero() {
                        s = &s + &(a.at(i, c) * ker.at(c, j));
                    }
                }
                vecs.set(i, j, s);
            }
        }
        vecs.image()
    }

    /// Direct-sum check: the concatenation of the given bases is independent
    /// and spans the whole ambient space.
    pub fn is_direct_sum_decomposition(parts: &[&Mat], ambient_dim: usize) -> bool {
        let total: usize = parts.iter().map(|p| p.cols).sum();
        if total != ambient_dim {
            return false;
        }
        let mut joint = Mat::zero(ambient_dim, 0);
        for p in parts {
            assert_eq!(p.rows, ambient_dim);
            joint = joint.hcat(p);
        }
        joint.rank() == ambient_dim
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use proptest::prelude::*;

    fn m2(a: i64, b: i64, c: i64, d: i64) -> Mat {
        Mat::from_rows(vec![vec![q(a), q(b)], vec![q(c), q(d)]])
    }

    #[test]
    fn rank_kernel_image() {
        let m = Mat::from_rows(vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(1), q(1), q(1)],
        ]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.cols, 1);
        assert!(m.mul(&k).is_zero());
        assert_eq!(m.image().cols, 2);
    }

    #[test]
    fn solve_and_inverse() {
        let m = m2(2, 1, 1, 1);
        let x = m.solve(&[q(3), q(2)]).unwrap();
        assert_eq!(x, vec![q(1), q(1)]);
        let inv = m.inverse();
        assert_eq!(m.mul(&inv), Mat::identity(2));

        let sing = m2(1, 2, 2, 4);
        assert!(sing.solve(&[q(0), q(1)]).is_none());
    }

    #[test]
    fn intersection_of_spans() {
        // span{e1, e2} ∩ span{e2, e3} = span{e2}
        let a = Mat::from_rows(vec![
            vec![q(1), q(0)],
            vec![q(0), q(1)],
            vec![q(0), q(0)],
        ]);
        let b = Mat::from_rows(vec![
            vec![q(0), q(0)],
            vec![q(1), q(0)],
            vec![q(0), q(1)],
        ]);
        let i = Mat::intersect_columns(&a, &b);
        assert_eq!(i.cols, 1);
        assert!(a.contains_columns(&i) && b.contains_columns(&i));
    }

    proptest! {
        #[test]
        fn kernel_rank_nullity(entries in proptest::collection::vec(-5i64..=5, 12)) {
            let m = Mat::from_rows(vec![
                entries[0..4].iter().map(|&x| q(x)).collect(),
                entries[4..8].iter().map(|&x| q(x)).collect(),
                entries[8..12].iter().map(|&x| q(x)).collect(),
            ]);
            let k = m.kernel();
            prop_assert!(m.mul(&k).is_zero());
            prop_assert_eq!(m.rank() + k.cols, 4);
            prop_assert_eq!(k.rank(), k.cols);
        }

        #[test]
        fn image_span_matches_product(entries in proptest::collection::vec(-3i64..=3, 9)) {
            let m = Mat::from_rows(vec![
                entries[0..3].iter().map(|&x| q(x)).collect(),
                entries[3..6].iter().map(|&x| q(x)).collect(),
                entries[6..9].iter().map(|&x| q(x)).collect(),
            ]);
            let im = m.image();
            prop_assert_eq!(im.rank(), m.rank());
            prop_assert!(m.contains_columns(&im) && im.contains_columns(&m));
        }
    }
}
