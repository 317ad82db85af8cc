//! Dense matrices over the coefficient rings used here: `A`, exact `K` and
//! truncated `K_∞`.

use std::fmt;

use crate::error::{Error, Result};
use crate::frac::Frac;
use crate::laurent::LaurentSeries;
use crate::poly::PolyA;

/// The ring operations matrices need. Zero and one are taken "like" an
/// existing element so that field and precision are inherited.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn is_zero_elem(&self) -> bool;
}

/// Rings carrying the hyperderivatives `∂_θ^j`.
pub trait Hyper: Ring {
    fn hyper(&self, j: u64) -> Self;
}

impl Ring for PolyA {
    fn zero_like(&self) -> Self {
        PolyA::zero(self.field())
    }
    fn one_like(&self) -> Self {
        PolyA::one(self.field())
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl Hyper for PolyA {
    fn hyper(&self, j: u64) -> Self {
        self.hyperderiv(j as usize)
    }
}

impl Ring for Frac {
    fn zero_like(&self) -> Self {
        Frac::zero(self.field())
    }
    fn one_like(&self) -> Self {
        Frac::one(self.field())
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl Ring for LaurentSeries {
    fn zero_like(&self) -> Self {
        LaurentSeries::zero(self.field(), self.prec())
    }
    fn one_like(&self) -> Self {
        LaurentSeries::one(self.field(), self.prec())
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl Hyper for LaurentSeries {
    fn hyper(&self, j: u64) -> Self {
        self.hyperderiv(j)
    }
}

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Self { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Self { rows, cols, data }
    }

    pub fn identity(size: usize, like: &T) -> Self {
        let (zero, one) = (like.zero_like(), like.one_like());
        Self::from_fn(size, size, |r, c| if r == c { one.clone() } else { zero.clone() })
    }

    pub fn from_columns(columns: &[Vec<T>]) -> Self {
        let cols = columns.len();
        let rows = columns.first().map_or(0, |c| c.len());
        Self::from_fn(rows, cols, |r, c| columns[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: T) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> Vec<T> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn map<U: Ring>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero_elem())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(x, y)| x.plus(y)).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(x, y)| x.minus(y)).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| c.times(x))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        Self::from_fn(self.rows, other.cols, |r, c| {
            let mut acc: Option<T> = None;
            for k in 0..self.cols {
                let (x, y) = (self.get(r, k), other.get(k, c));
                if x.is_zero_elem() || y.is_zero_elem() {
                    continue;
                }
                let term = x.times(y);
                acc = Some(match acc {
                    Some(a) => a.plus(&term),
                    None => term,
                });
            }
            acc.unwrap_or_else(|| self.get(r, 0).zero_like())
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        let col = Self::from_columns(&[v.to_vec()]);
        self.mul(&col).column(0)
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.cols.max(1)).collect();
        out.debug_list().entries(rows).finish()
    }
}

/// `d_n[f]`: `f` on the diagonal and `∂_θ^k f` at offset `2k`.
pub fn d_matrix<T: Hyper>(f: &T, n: usize) -> Matrix<T> {
    let size = 2 * n + 1;
    let zero = f.zero_like();
    let derivs: Vec<T> = (0..=n as u64).map(|k| f.hyper(k)).collect();
    Matrix::from_fn(size, size, |r, c| {
        if c >= r && (c - r) % 2 == 0 {
            derivs[(c - r) / 2].clone()
        } else {
            zero.clone()
        }
    })
}

/// Coordinates `c` with `v = Σ_j d_n[c_j] e_j`: back-substitution
/// `c_r = v_r - Σ_{k≥1} ∂^k c_{r+2k}`.
pub fn partial_coordinates<T: Hyper>(v: &[T]) -> Vec<T> {
    let size = v.len();
    let mut c: Vec<T> = v.to_vec();
    for r in (0..size).rev() {
        let mut acc = v[r].clone();
        let mut k = 1u64;
        while r + 2 * (k as usize) < size {
            acc = acc.minus(&c[r + 2 * k as usize].hyper(k));
            k += 1;
        }
        c[r] = acc;
    }
    c
}

/// Determinant by fraction-free (Bareiss) elimination. At each step the pivot
/// is the entry of least `u`-adic valuation in the remaining block, which
/// keeps the absolute-precision loss from the exact divisions minimal.
pub fn determinant(m: &Matrix<LaurentSeries>) -> Result<LaurentSeries> {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let size = m.rows;
    if size == 0 {
        return Err(Error::Precondition("empty matrix".into()));
    }
    let mut a = m.clone();
    let mut sign_flip = false;
    let mut prev = a.get(0, 0).one_like();
    for k in 0..size {
        let mut best: Option<(i64, usize, usize)> = None;
        for r in k..size {
            for c in k..size {
                if let Some(v) = a.get(r, c).valuation() {
                    if best.map_or(true, |(bv, _, _)| v < bv) {
                        best = Some((v, r, c));
                    }
                }
            }
        }
        let Some((_, pr, pc)) = best else {
            return Ok(a.get(0, 0).zero_like());
        };
        if pr != k {
            for c in 0..size {
                a.data.swap(pr * size + c, k * size + c);
            }
            sign_flip = !sign_flip;
        }
        if pc != k {
            for r in 0..size {
                a.data.swap(r * size + pc, r * size + k);
            }
            sign_flip = !sign_flip;
        }
        let pivot = a.get(k, k).clone();
        for r in k + 1..size {
            for c in k + 1..size {
                let x = pivot.mul(a.get(r, c)).sub(&a.get(r, k).mul(a.get(k, c)));
                let x = if k == 0 { x } else { x.div(&prev)? };
                a.set(r, c, x);
            }
        }
        prev = pivot;
    }
    let det = a.get(size - 1, size - 1).clone();
    Ok(if sign_flip { det.neg() } else { det })
}
