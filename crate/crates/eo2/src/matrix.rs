//! Dense matrices over GF(2^n) with just enough exact linear algebra for
//! the semilinear-module engine: reduced row echelon form, kernels, and
//! products. Dimensions stay in the tens, so everything is O(n^3) Gaussian
//! elimination with no pivot-size concerns (the field is exact).

use crate::field::{FieldCtx, Gf};

/// Row-major dense matrix. A 0xC or Rx0 matrix is legal and useful
/// (annihilators of the full space, spans of nothing).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Gf>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Gf::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.set(i, i, Gf::ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Gf>>, cols: usize) -> Self {
        let mut m = Mat::zero(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row {i} has wrong length");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Gf {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Gf) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Gf] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Gf>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Matrix product; panics on a shape mismatch (internal misuse).
    pub fn mul(&self, other: &Mat, k: &FieldCtx) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = k.add(out.get(i, j), k.mul(a, other.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Gf], k: &FieldCtx) -> Vec<Gf> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                let mut acc = Gf::ZERO;
                for (j, &vj) in v.iter().enumerate() {
                    acc = k.add(acc, k.mul(self.get(i, j), vj));
                }
                acc
            })
            .collect()
    }

    /// Apply a function to every entry (Frobenius twists, square roots).
    pub fn map(&self, mut f: impl FnMut(Gf) -> Gf) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f(a)).collect(),
        }
    }

    /// Rows of `other` appended below `self`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "shape mismatch in vstack");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Reduced row echelon form with zero rows dropped: the canonical basis
    /// of the row space. Returns the reduced matrix and its pivot columns.
    pub fn rref(&self, k: &FieldCtx) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                let (a, b) = (m.get(r, j), m.get(pr, j));
                m.set(r, j, b);
                m.set(pr, j, a);
            }
            let inv = k.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in 0..m.cols {
                m.set(r, j, k.mul(m.get(r, j), inv));
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c);
                    for j in 0..m.cols {
                        let v = k.sub(m.get(i, j), k.mul(f, m.get(r, j)));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.rows {
                break;
            }
        }
        m.data.truncate(r * m.cols);
        m.rows = r;
        (m, pivots)
    }

    pub fn rank(&self, k: &FieldCtx) -> usize {
        self.rref(k).0.rows
    }

    /// Basis (as rows, in RREF) of the right kernel {x : M x = 0}.
    pub fn kernel(&self, k: &FieldCtx) -> Mat {
        let (r, pivots) = self.rref(k);
        let mut basis = Vec::new();
        let mut piv_iter = pivots.iter().copied().peekable();
        let mut free_cols = Vec::new();
        for c in 0..self.cols {
            if piv_iter.peek() == Some(&c) {
                piv_iter.next();
            } else {
                free_cols.push(c);
            }
        }
        for &f in &free_cols {
            let mut v = vec![Gf::ZERO; self.cols];
            v[f] = Gf::ONE;
            for (i, &p) in pivots.iter().enumerate() {
                // Row i reads x[p] + sum over free f of r[i][f] x[f] = 0.
                v[p] = r.get(i, f);
            }
            basis.push(v);
        }
        Mat::from_rows(basis, self.cols).rref(k).0
    }
}
