//! Dense Gaussian elimination over a finite field.

use crate::gf::FieldCtx;

/// Row-major matrix of raw field values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<u64>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend(r);
        }
        Matrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self, f: &FieldCtx) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c)).unwrap();
            if inv != 1 {
                for j in c..self.cols {
                    let v = f.mul(self.get(r, j), inv);
                    self.set(r, j, v);
                }
            }
            for i in 0..self.rows {
                let t = self.get(i, c);
                if i == r || t == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let v = self.get(r, j);
                    if v != 0 {
                        let w = f.sub(self.get(i, j), f.mul(t, v));
                        self.set(i, j, w);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &FieldCtx) -> usize {
        self.clone().rref(f).len()
    }

    /// Basis of `{v : M v = 0}`, one vector per free column in increasing order.
    pub fn kernel(&self, f: &FieldCtx) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0; self.cols];
            v[free] = 1;
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(m.get(r, free));
            }
            out.push(v);
        }
        out
    }
}

/// Reduced echelon basis of the row space spanned by `vectors`.
pub fn echelon_basis(f: &FieldCtx, cols: usize, vectors: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    if vectors.is_empty() {
        return vectors;
    }
    let mut m = Matrix::from_rows(cols, vectors);
    let rank = m.rref(f).len();
    (0..rank).map(|r| m.row(r).to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field_make;

    #[test]
    fn kernel_is_annihilated() {
        let f = field_make(5, 1).unwrap();
        let m = Matrix::from_rows(4, vec![vec![1, 2, 3, 4], vec![2, 4, 1, 3], vec![3, 1, 4, 2]]);
        let ker = m.kernel(&f);
        assert_eq!(ker.len() + m.rank(&f), 4);
        for v in &ker {
            for r in 0..m.rows {
                let s = (0..4).fold(0, |acc, j| f.add(acc, f.mul(m.get(r, j), v[j])));
                assert_eq!(s, 0);
            }
        }
    }

    #[test]
    fn rank_over_extension() {
        let f = field_make(3, 2).unwrap();
        // Second row is u times the first.
        let u = f.generator();
        let m = Matrix::from_rows(2, vec![vec![1, 2], vec![u, f.mul(u, 2)]]);
        assert_eq!(m.rank(&f), 1);
        assert_eq!(echelon_basis(&f, 2, vec![vec![2, 1], vec![1, 1]]), vec![vec![1, 0], vec![0, 1]]);
    }
}
