//! Small dense f64 matrices: LU with partial pivoting and full-Q Householder.
//!
//! These are approximate kernels. They feed midpoint preconditioners, seed
//! searches, and frame construction; every rigorous claim downstream is
//! re-established with interval arithmetic, so nothing here needs to be
//! anything better than numerically sane.

use std::ops::{Index, IndexMut};

#[derive(Debug, Clone, PartialEq)]
pub struct FMat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl FMat {
    pub fn zeros(rows: usize, cols: usize) -> FMat {
        FMat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> FMat {
        let mut m = FMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[&[f64]]) -> FMat {
        let r = rows.len();
        let c = rows[0].len();
        let mut m = FMat::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn column(v: &[f64]) -> FMat {
        let mut m = FMat::zeros(v.len(), 1);
        for (i, &x) in v.iter().enumerate() {
            m[(i, 0)] = x;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> FMat {
        let mut t = FMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &FMat) -> FMat {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = FMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len(), "dimension mismatch");
        let mut out = vec![0.0; self.rows];
        for i in 0..self.rows {
            let mut acc = 0.0;
            for j in 0..self.cols {
                acc += self[(i, j)] * x[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn col_slice(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }
}

impl Index<(usize, usize)> for FMat {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for FMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Solve A x = b by LU with partial pivoting. None if A is singular to
/// working precision.
pub fn lu_solve(a: &FMat, b: &[f64]) -> Option<Vec<f64>> {
    let n = a.rows();
    assert_eq!(a.cols(), n, "square matrix required");
    assert_eq!(b.len(), n);
    let mut m = a.clone();
    let mut x: Vec<f64> = b.to_vec();
    for k in 0..n {
        let mut piv = k;
        for i in k + 1..n {
            if m[(i, k)].abs() > m[(piv, k)].abs() {
                piv = i;
            }
        }
        if m[(piv, k)].abs() < 1e-300 || !m[(piv, k)].is_finite() {
            return None;
        }
        if piv != k {
            for j in 0..n {
                let t = m[(k, j)];
                m[(k, j)] = m[(piv, j)];
                m[(piv, j)] = t;
            }
            x.swap(k, piv);
        }
        for i in k + 1..n {
            let f = m[(i, k)] / m[(k, k)];
            m[(i, k)] = 0.0;
            for j in k + 1..n {
                m[(i, j)] -= f * m[(k, j)];
            }
            x[i] -= f * x[k];
        }
    }
    for i in (0..n).rev() {
        let mut acc = x[i];
        for j in i + 1..n {
            acc -= m[(i, j)] * x[j];
        }
        x[i] = acc / m[(i, i)];
        if !x[i].is_finite() {
            return None;
        }
    }
    Some(x)
}

pub fn lu_inverse(a: &FMat) -> Option<FMat> {
    let n = a.rows();
    let mut inv = FMat::zeros(n, n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let col = lu_solve(a, &e)?;
        for i in 0..n {
            inv[(i, j)] = col[i];
        }
    }
    Some(inv)
}

/// Householder QR with the full m×m Q. Returns (Q, R) with A = Q R.
pub fn householder_qr(a: &FMat) -> (FMat, FMat) {
    let m = a.rows();
    let n = a.cols();
    let mut r = a.clone();
    let mut q = FMat::identity(m);
    for k in 0..n.min(m.saturating_sub(1)) {
        // build the reflector for column k below the diagonal
        let mut norm2 = 0.0;
        for i in k..m {
            norm2 += r[(i, k)] * r[(i, k)];
        }
        let norm = norm2.sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if r[(k, k)] >= 0.0 { -norm } else { norm };
        let mut v = vec![0.0; m];
        v[k] = r[(k, k)] - alpha;
        for i in k + 1..m {
            v[i] = r[(i, k)];
        }
        let vtv: f64 = v[k..].iter().map(|x| x * x).sum();
        if vtv == 0.0 {
            continue;
        }
        // R <- (I - 2 v vᵀ / vᵀv) R
        for j in k..n {
            let mut dot = 0.0;
            for i in k..m {
                dot += v[i] * r[(i, j)];
            }
            let f = 2.0 * dot / vtv;
            for i in k..m {
                r[(i, j)] -= f * v[i];
            }
        }
        // Q <- Q (I - 2 v vᵀ / vᵀv)
        for i in 0..m {
            let mut dot = 0.0;
            for l in k..m {
                dot += q[(i, l)] * v[l];
            }
            let f = 2.0 * dot / vtv;
            for l in k..m {
                q[(i, l)] -= f * v[l];
            }
        }
    }
    // zero the strictly-lower triangle of R that the reflections left as dust
    for i in 0..m {
        for j in 0..n.min(i) {
            r[(i, j)] = 0.0;
        }
    }
    (q, r)
}

/// Orthonormal basis of the complement of the column span of A, as the last
/// m - rank(A) columns of the full Q. The caller promises full column rank.
pub fn orthonormal_complement(a: &FMat) -> FMat {
    let (q, _) = householder_qr(a);
    let m = a.rows();
    let n = a.cols();
    let mut out = FMat::zeros(m, m - n);
    for j in n..m {
        for i in 0..m {
            out[(i, j - n)] = q[(i, j)];
        }
    }
    out
}
