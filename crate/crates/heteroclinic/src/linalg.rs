//! Interval vectors, interval matrices, and a verified linear solver.
//!
//! Operators (`+`, `-`, `*`) assert conformable shapes, since shapes are
//! static wherever they appear in this crate. The checked entry points
//! (`checked_apply`, `contains_vector`, `verified_solve`) return errors
//! instead and are what certificate parsing goes through, where shapes are
//! data.

use crate::floatmat::{lu_inverse, FMat};
use crate::interval::Interval;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("shape mismatch")]
    ShapeMismatch,
    #[error("could not verify every member matrix invertible")]
    SingularEnclosure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalVector {
    pub entries: Vec<Interval>,
}

impl IntervalVector {
    pub fn zeros(n: usize) -> IntervalVector {
        IntervalVector {
            entries: vec![Interval::ZERO; n],
        }
    }

    pub fn from_points(xs: &[f64]) -> IntervalVector {
        IntervalVector {
            entries: xs.iter().map(|&x| Interval::point(x)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn mid(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.mid()).collect()
    }

    /// Max component radius.
    pub fn rad_up(&self) -> f64 {
        self.entries.iter().map(|e| e.rad_up()).fold(0.0, f64::max)
    }

    /// Max component width.
    pub fn width_up(&self) -> f64 {
        self.entries.iter().map(|e| e.width_up()).fold(0.0, f64::max)
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        self.dim() == x.len() && self.entries.iter().zip(x).all(|(e, &v)| e.contains(v))
    }

    /// Componentwise inner ⊆ self; strict asks for the open interior.
    pub fn contains_vector(&self, inner: &IntervalVector, strict: bool) -> Result<bool, LinalgError> {
        if self.dim() != inner.dim() {
            return Err(LinalgError::ShapeMismatch);
        }
        Ok(self.entries.iter().zip(&inner.entries).all(|(o, i)| {
            if strict {
                o.interior_encloses(i)
            } else {
                o.encloses(i)
            }
        }))
    }

    pub fn intersect(&self, other: &IntervalVector) -> Option<IntervalVector> {
        assert_eq!(self.dim(), other.dim());
        let mut entries = Vec::with_capacity(self.dim());
        for (a, b) in self.entries.iter().zip(&other.entries) {
            entries.push(a.intersect(b)?);
        }
        Some(IntervalVector { entries })
    }

    pub fn hull(&self, other: &IntervalVector) -> IntervalVector {
        assert_eq!(self.dim(), other.dim());
        IntervalVector {
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.hull(b)).collect(),
        }
    }

    pub fn scale(&self, s: Interval) -> IntervalVector {
        IntervalVector {
            entries: self.entries.iter().map(|&e| e * s).collect(),
        }
    }
}

impl Index<usize> for IntervalVector {
    type Output = Interval;
    fn index(&self, i: usize) -> &Interval {
        &self.entries[i]
    }
}

impl IndexMut<usize> for IntervalVector {
    fn index_mut(&mut self, i: usize) -> &mut Interval {
        &mut self.entries[i]
    }
}

impl Add for &IntervalVector {
    type Output = IntervalVector;
    fn add(self, rhs: &IntervalVector) -> IntervalVector {
        assert_eq!(self.dim(), rhs.dim());
        IntervalVector {
            entries: self.entries.iter().zip(&rhs.entries).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl Sub for &IntervalVector {
    type Output = IntervalVector;
    fn sub(self, rhs: &IntervalVector) -> IntervalVector {
        assert_eq!(self.dim(), rhs.dim());
        IntervalVector {
            entries: self.entries.iter().zip(&rhs.entries).map(|(&a, &b)| a - b).collect(),
        }
    }
}

impl Neg for &IntervalVector {
    type Output = IntervalVector;
    fn neg(self) -> IntervalVector {
        IntervalVector {
            entries: self.entries.iter().map(|&e| -e).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Interval>,
}

impl IntervalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntervalMatrix {
        IntervalMatrix {
            rows,
            cols,
            entries: vec![Interval::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntervalMatrix {
        let mut m = IntervalMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Interval::ONE;
        }
        m
    }

    pub fn from_rows(rows: &[&[Interval]]) -> IntervalMatrix {
        let r = rows.len();
        let c = rows[0].len();
        let mut m = IntervalMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn from_fmat(a: &FMat) -> IntervalMatrix {
        let mut m = IntervalMatrix::zeros(a.rows(), a.cols());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                m[(i, j)] = Interval::point(a[(i, j)]);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mid(&self) -> FMat {
        let mut m = FMat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].mid();
            }
        }
        m
    }

    pub fn transpose(&self) -> IntervalMatrix {
        let mut t = IntervalMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn column(&self, j: usize) -> IntervalVector {
        IntervalVector {
            entries: (0..self.rows).map(|i| self[(i, j)]).collect(),
        }
    }

    pub fn apply(&self, x: &IntervalVector) -> IntervalVector {
        self.checked_apply(x).expect("shape mismatch")
    }

    pub fn checked_apply(&self, x: &IntervalVector) -> Result<IntervalVector, LinalgError> {
        if self.cols != x.dim() {
            return Err(LinalgError::ShapeMismatch);
        }
        let mut out = IntervalVector::zeros(self.rows);
        for i in 0..self.rows {
            let mut acc = Interval::ZERO;
            for j in 0..self.cols {
                acc = acc + self[(i, j)] * x[j];
            }
            out[i] = acc;
        }
        Ok(out)
    }

    pub fn checked_mul(&self, rhs: &IntervalMatrix) -> Result<IntervalMatrix, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::ShapeMismatch);
        }
        let mut out = IntervalMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Upper bound for the induced ∞-norm over all member matrices:
    /// max row sum of magnitudes, summed upward.
    pub fn norm_inf_up(&self) -> f64 {
        use crate::rounding::add_up;
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            let mut row = 0.0;
            for j in 0..self.cols {
                row = add_up(row, self[(i, j)].mag());
            }
            worst = worst.max(row);
        }
        worst
    }

    pub fn encloses(&self, inner: &IntervalMatrix) -> bool {
        self.rows == inner.rows
            && self.cols == inner.cols
            && self.entries.iter().zip(&inner.entries).all(|(o, i)| o.encloses(i))
    }

    pub fn hull(&self, other: &IntervalMatrix) -> IntervalMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntervalMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.hull(b)).collect(),
        }
    }
}

impl Index<(usize, usize)> for IntervalMatrix {
    type Output = Interval;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Interval {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntervalMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Interval {
        &mut self.entries[i * self.cols + j]
    }
}

impl Add for &IntervalMatrix {
    type Output = IntervalMatrix;
    fn add(self, rhs: &IntervalMatrix) -> IntervalMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntervalMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl Sub for &IntervalMatrix {
    type Output = IntervalMatrix;
    fn sub(self, rhs: &IntervalMatrix) -> IntervalMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntervalMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(&a, &b)| a - b).collect(),
        }
    }
}

impl Mul for &IntervalMatrix {
    type Output = IntervalMatrix;
    fn mul(self, rhs: &IntervalMatrix) -> IntervalMatrix {
        self.checked_mul(rhs).expect("shape mismatch")
    }
}

impl Mul<&IntervalVector> for &IntervalMatrix {
    type Output = IntervalVector;
    fn mul(self, rhs: &IntervalVector) -> IntervalVector {
        self.apply(rhs)
    }
}

fn inflate(e: &Interval) -> Interval {
    let pad = 0.1 * e.rad_up() + 1e-307;
    *e + Interval::symmetric(pad)
}

/// Verified enclosure of {A⁻¹ u : A ∈ [A], u ∈ [b]}.
///
/// Krawczyk iteration with the midpoint inverse C as preconditioner: an
/// enclosure E with C(b − A x̃) + (I − C A) E ⊂ int E proves every member of
/// [A] invertible and bounds the solution set by x̃ + E.
pub fn verified_solve(a: &IntervalMatrix, b: &IntervalVector) -> Result<IntervalVector, LinalgError> {
    let n = a.rows();
    if a.cols() != n || b.dim() != n {
        return Err(LinalgError::ShapeMismatch);
    }
    let c = lu_inverse(&a.mid()).ok_or(LinalgError::SingularEnclosure)?;
    let ci = IntervalMatrix::from_fmat(&c);
    let x_approx = c.matvec(&b.mid());
    let xa = IntervalVector::from_points(&x_approx);

    // Z = C (b − A x̃), G = I − C A
    let residual = b - &a.apply(&xa);
    let z = ci.apply(&residual);
    let g = &IntervalMatrix::identity(n) - &ci.checked_mul(a)?;

    let mut e = z.clone();
    for _ in 0..20 {
        let e_infl = IntervalVector {
            entries: e.entries.iter().map(inflate).collect(),
        };
        let k = &z + &g.apply(&e_infl);
        if e_infl.contains_vector(&k, true)? {
            return Ok(&xa + &k);
        }
        e = k.hull(&e_infl);
    }
    Err(LinalgError::SingularEnclosure)
}

/// Determinant enclosure of a 3×3 interval matrix by cofactor expansion.
pub fn det3(m: &IntervalMatrix) -> Interval {
    assert_eq!((m.rows(), m.cols()), (3, 3));
    let minor = |r0: usize, r1: usize, c0: usize, c1: usize| {
        m[(r0, c0)] * m[(r1, c1)] - m[(r0, c1)] * m[(r1, c0)]
    };
    m[(0, 0)] * minor(1, 2, 1, 2) - m[(0, 1)] * minor(1, 2, 0, 2) + m[(0, 2)] * minor(1, 2, 0, 1)
}

/// Solve the complex system A z = w through the real 2n×2n embedding
/// z = x + iy ↦ (x₁, y₁, …, xₙ, yₙ) with 2×2 blocks [[re, −im], [im, re]].
pub fn verified_solve_complex(
    a: &[Vec<crate::complex::ComplexInterval>],
    w: &[crate::complex::ComplexInterval],
) -> Result<Vec<crate::complex::ComplexInterval>, LinalgError> {
    let n = a.len();
    if w.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(LinalgError::ShapeMismatch);
    }
    let mut ar = IntervalMatrix::zeros(2 * n, 2 * n);
    let mut br = IntervalVector::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = a[i][j];
            ar[(2 * i, 2 * j)] = z.re;
            ar[(2 * i, 2 * j + 1)] = -z.im;
            ar[(2 * i + 1, 2 * j)] = z.im;
            ar[(2 * i + 1, 2 * j + 1)] = z.re;
        }
        br[2 * i] = w[i].re;
        br[2 * i + 1] = w[i].im;
    }
    let x = verified_solve(&ar, &br)?;
    Ok((0..n)
        .map(|i| crate::complex::ComplexInterval::new(x[2 * i], x[2 * i + 1]))
        .collect())
}
